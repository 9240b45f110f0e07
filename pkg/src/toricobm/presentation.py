"""Graded module presentations over a coefficient ring, and their simplification.

A presentation has generators (usually classes of orbit closures, labelled by
cones) of a homological degree, and relations, each a sparse map from
generator index to a coefficient. Coefficients are polynomials in the
coefficient-ring symbols and, for equivariant presentations, in the
equivariant variables ``x1 .. xn`` (each of homological degree -1).
"""

from dataclasses import dataclass, field, replace

from . import intlinalg as il
from .coeff import FormalGroupLaw, theory_fgl
from .poly import Poly, Truncation, mono_degrees, mono_split

THEORY_NAMES = {"additive": "chow", "multiplicative": "ktheory", "universal": "cobordism"}


class PresentationError(ValueError):
    pass


@dataclass(frozen=True)
class Generator:
    label: tuple
    degree: int
    name: str = ""
    keep: bool = False

    def display(self):
        return self.name or label_name(self.label)


def label_name(label, ray_names=None):
    if label and label[0] == "pair":
        return f"{label_name(label[1], ray_names)}x{label_name(label[2], ray_names)}"
    if not label:
        return "s"
    names = [ray_names[i] if ray_names else f"r{i}" for i in label]
    if len(names) == 1:
        return names[0]
    return "V(" + ",".join(names) + ")"


def _label_to_json(label):
    if label and label[0] == "pair":
        return {"pair": [_label_to_json(label[1]), _label_to_json(label[2])]}
    return list(label)


def _label_from_json(obj):
    if isinstance(obj, dict):
        a, b = obj["pair"]
        return ("pair", _label_from_json(a), _label_from_json(b))
    return tuple(int(i) for i in obj)


def coefficient_degree(c, graded=True):
    """Homological degree of a homogeneous coefficient (Lazard minus xi degree)."""
    if not graded:
        return 0
    degs = set()
    for m in c.terms:
        lz, nil = mono_degrees(m)
        degs.add(lz - nil)
    if not degs:
        return None
    if len(degs) > 1:
        raise PresentationError(f"inhomogeneous coefficient {c}")
    return degs.pop()


class ModulePresentation:
    """Generators, relations and the coefficient data they live over."""

    def __init__(self, fgl, generators, relations, equivariant=False, xi_degree=0, meta=None):
        self.fgl = fgl
        self.generators = list(generators)
        self.relations = [
            {i: c for i, c in r.items() if c} for r in relations
        ]
        self.relations = [r for r in self.relations if r]
        self.equivariant = equivariant
        self.xi_degree = xi_degree if equivariant else 0
        self.meta = dict(meta or {})

    # -- basics ------------------------------------------------------------
    @property
    def theory(self):
        return THEORY_NAMES[self.fgl.kind]

    @property
    def graded(self):
        return self.fgl.graded

    @property
    def trunc(self):
        return Truncation(lazard=self.fgl.D if self.graded else None, nil=self.xi_degree)

    def reduce(self, c):
        return self.fgl.reduce(c.truncate(self.trunc))

    def __eq__(self, other):
        return (
            isinstance(other, ModulePresentation)
            and self.fgl == other.fgl
            and self.equivariant == other.equivariant
            and self.xi_degree == other.xi_degree
            and [(g.label, g.degree) for g in self.generators]
            == [(g.label, g.degree) for g in other.generators]
            and self.relations == other.relations
        )

    def __repr__(self):
        return (
            f"ModulePresentation({self.theory}, D={self.fgl.D}, "
            f"{len(self.generators)} generators, {len(self.relations)} relations)"
        )

    def index_of(self, label):
        for i, g in enumerate(self.generators):
            if g.label == tuple(label):
                return i
        raise KeyError(label)

    def relation_degree(self, r):
        if not self.graded:
            return 0
        degs = set()
        for i, c in r.items():
            d = coefficient_degree(c)
            if d is not None:
                degs.add(d + self.generators[i].degree)
        if len(degs) > 1:
            raise PresentationError("inhomogeneous relation")
        return degs.pop() if degs else None

    def generator_ranks(self):
        out = {}
        for g in self.generators:
            out[g.degree] = out.get(g.degree, 0) + 1
        return dict(sorted(out.items()))

    def is_free(self):
        return not self.relations

    def copy(self, **kw):
        p = ModulePresentation(
            kw.get("fgl", self.fgl),
            kw.get("generators", self.generators),
            kw.get("relations", self.relations),
            kw.get("equivariant", self.equivariant),
            kw.get("xi_degree", self.xi_degree),
            kw.get("meta", self.meta),
        )
        return p

    # -- specializations ---------------------------------------------------
    def set_xi_zero(self):
        """The image under B_T -> B: every equivariant variable set to 0."""
        rels = []
        for r in self.relations:
            rels.append({i: _drop_xi(c) for i, c in r.items()})
        return self.copy(relations=rels, equivariant=False, xi_degree=0)

    def map_coefficients(self, fn, fgl=None):
        rels = [{i: fn(c) for i, c in r.items()} for r in self.relations]
        return self.copy(relations=rels, fgl=fgl or self.fgl)

    # -- text ----------------------------------------------------------------
    def relation_text(self, r):
        parts = []
        for i in sorted(r):
            c = r[i]
            name = self.generators[i].display()
            if c == 1:
                parts.append(("+", name))
            elif c == -1:
                parts.append(("-", name))
            elif len(c.terms) == 1:
                (m, k), = c.terms.items()
                sign = "-" if k < 0 else "+"
                body = str(Poly({m: abs(k)}))
                parts.append((sign, f"{body}*{name}"))
            else:
                parts.append(("+", f"({c})*{name}"))
        text = ""
        for k, (sign, body) in enumerate(parts):
            if k == 0:
                text = body if sign == "+" else "-" + body
            else:
                text += f" {sign} {body}"
        return text + " = 0"

    def to_text(self):
        lines = [
            f"theory: {self.theory} (truncation {self.fgl.D}"
            + (f", beta={self.fgl.beta}" if self.fgl.kind == "multiplicative" else "")
            + (", equivariant" if self.equivariant else "")
            + ")",
            "generators: " + ", ".join(
                f"{g.display()}[{g.degree}]" for g in self.generators
            ),
            "relations:",
        ]
        for r in self.relations:
            lines.append("  " + self.relation_text(r))
        if not self.relations:
            lines.append("  (none)")
        return "\n".join(lines)

    # -- json ------------------------------------------------------------------
    def to_dict(self):
        out = {
            "theory": self.theory,
            "truncation": self.fgl.D,
            "equivariant": self.equivariant,
            "generators": [
                {"cone": _label_to_json(g.label), "degree": g.degree, "name": g.display()}
                for g in self.generators
            ],
            "relations": [
                [r.get(i, Poly()).to_json() for i in range(len(self.generators))]
                for r in self.relations
            ],
        }
        if self.fgl.kind == "multiplicative":
            out["beta"] = "b" if self.fgl.beta is None else self.fgl.beta
        if self.equivariant:
            out["xi_truncation"] = self.xi_degree
        return out

    @classmethod
    def from_dict(cls, data):
        known = {"theory", "truncation", "equivariant", "generators", "relations",
                 "beta", "xi_truncation"}
        extra = set(data) - known
        if extra:
            raise PresentationError(f"unknown keys: {sorted(extra)}")
        beta = data.get("beta", 1)
        if beta == "b":
            beta = None
        fgl = theory_fgl(data["theory"], data["truncation"], beta)
        gens = [
            Generator(_label_from_json(g["cone"]), int(g["degree"]), g.get("name", ""))
            for g in data["generators"]
        ]
        rels = []
        for row in data["relations"]:
            if len(row) != len(gens):
                raise PresentationError("relation length does not match generators")
            rels.append({i: Poly.from_json(e) for i, e in enumerate(row) if e})
        return cls(fgl, gens, rels, bool(data["equivariant"]), int(data.get("xi_truncation", 0)))


def _drop_xi(c):
    return Poly({m: k for m, k in c.terms.items() if not mono_split(m)[1]})


# ---------------------------------------------------------------------------
# simplification


def simplify(p):
    """Eliminate unit-pivoted generators, then put each degree's relations in HNF.

    Generators flagged ``keep`` are eliminated only when no other generator
    can be. Among candidates the lowest generator index goes first.
    """
    gens = list(p.generators)
    rels = [dict(r) for r in p.relations]
    alive = list(range(len(gens)))
    while True:
        pick = None
        order = sorted(alive, key=lambda i: (gens[i].keep, i))
        for g in order:
            for ri, r in enumerate(rels):
                c = r.get(g)
                if c is not None and c.terms.keys() == {()} and abs(c.constant_term()) == 1:
                    pick = (g, ri)
                    break
            if pick:
                break
        if pick is None:
            break
        g, ri = pick
        piv = rels.pop(ri)
        u = piv[g].constant_term()
        new = []
        for r in rels:
            c = r.get(g)
            if c is None:
                new.append(r)
                continue
            f = c.scale(u)  # r - (c/u) * piv, with 1/u == u
            out = dict(r)
            for i, x in piv.items():
                val = out.get(i, Poly()) - p.reduce(f.mul(x, p.trunc))
                if val:
                    out[i] = val
                else:
                    out.pop(i, None)
            out.pop(g, None)
            if out:
                new.append(out)
        rels = new
        alive.remove(g)
    keep_index = {old: k for k, old in enumerate(alive)}
    new_gens = [gens[i] for i in alive]
    new_rels = [{keep_index[i]: c for i, c in r.items()} for r in rels]
    q = p.copy(generators=new_gens, relations=new_rels)
    if not p.equivariant:
        q = _hnf_relations(q)
    return q


def _hnf_relations(p):
    """Replace the relations of each degree by the HNF of their coordinate rows."""
    if not p.relations:
        return p
    by_deg = {}
    for r in p.relations:
        by_deg.setdefault(p.relation_degree(r), []).append(r)
    out = []
    for d in sorted(by_deg, key=lambda x: (x is None, x)):
        rows = by_deg[d]
        coords = _CoordinateSpace(p, d)
        mat = [coords.vector(r) for r in rows]
        h, _ = il.hnf(mat, coords.size)
        for row in h:
            if any(row):
                out.append(coords.relation(row))
    return p.copy(relations=out)


class _CoordinateSpace:
    """Integer coordinates of degree-``d`` elements: (generator, ring basis) pairs."""

    def __init__(self, p, d):
        self.p = p
        self.d = d
        ring = p.fgl.ring
        self.slots = []
        for i, g in enumerate(p.generators):
            k = d - g.degree if p.graded else 0
            if k < 0:
                continue
            if p.graded:
                for j, b in enumerate(ring.basis(k)):
                    self.slots.append((i, k, j, b))
            else:
                self.slots.append((i, 0, 0, Poly.const(1)))
        self.size = len(self.slots)
        self.offsets = {}
        for pos, (i, k, j, _) in enumerate(self.slots):
            self.offsets.setdefault(i, pos)

    def element_vector(self, elem):
        """``elem`` is ``{generator: coefficient}`` of degree ``d``."""
        v = [0] * self.size
        ring = self.p.fgl.ring
        for i, c in elem.items():
            if not c:
                continue
            if i not in self.offsets:
                raise PresentationError("element has a term outside the degree")
            pos = self.offsets[i]
            if self.p.graded:
                k = self.d - self.p.generators[i].degree
                co = ring.coords(c, k)
                for j, x in enumerate(co):
                    v[pos + j] += x
            else:
                v[pos] += c.constant_term()
        return v

    vector = element_vector

    def relation(self, row):
        out = {}
        for pos, x in enumerate(row):
            if x:
                i, _, _, b = self.slots[pos]
                out[i] = out.get(i, Poly()) + b.scale(x)
        return out


def degree_lattice(p, d):
    """Coordinates and relation rows for the degree-``d`` piece of ``p``.

    Returns ``(space, rows)``; rows span all ``b * r`` with ``r`` a relation
    and ``b`` a basis element of the coefficient ring of the right degree.
    """
    if p.equivariant:
        raise PresentationError("degree pieces of equivariant presentations are not finite")
    space = _CoordinateSpace(p, d)
    ring = p.fgl.ring
    rows = []
    for r in p.relations:
        rd = p.relation_degree(r)
        if p.graded:
            k = d - rd
            if k < 0:
                continue
            mults = ring.basis(k)
        else:
            mults = [Poly.const(1)]
        for b in mults:
            elem = {i: p.reduce(b.mul(c, p.trunc)) for i, c in r.items()}
            rows.append(space.vector(elem))
    return space, rows


def graded_invariants(p, degrees=None):
    """``{degree: (free_rank, torsion)}`` of each graded piece as an abelian group."""
    if degrees is None:
        degrees = range(0, max([g.degree for g in p.generators] + [0]) + 1) if p.graded else [0]
    out = {}
    for d in degrees:
        space, rows = degree_lattice(p, d)
        q = il.Quotient(rows, space.size)
        out[d] = (q.free_rank, q.torsion_orders)
    return out


def elementary_divisors(p, degrees=None):
    """Per-degree (size, invariant factors) of the relation lattice."""
    if degrees is None:
        degrees = range(0, max([g.degree for g in p.generators] + [0]) + 1) if p.graded else [0]
    out = {}
    for d in degrees:
        space, rows = degree_lattice(p, d)
        out[d] = (space.size, il.invariant_factors(rows, space.size) if rows else [])
    return out
