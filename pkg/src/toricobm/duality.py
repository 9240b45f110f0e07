"""Kunneth tensor presentations and the universal-coefficient dual module."""

from dataclasses import dataclass, field
from itertools import combinations_with_replacement

from . import intlinalg as il
from .calculus import calculus, ray_var, sr_ring
from .descent import singular_presentation
from .fan import FanError, is_complete, is_smooth, product_fan
from .poly import Poly
from .presentation import (
    Generator,
    ModulePresentation,
    PresentationError,
    elementary_divisors,
    simplify,
)

TRUNCATION_CAVEAT = (
    "Hom is computed degreewise over Z in reduced coordinates of the truncated "
    "coefficient ring; relation components above the truncation are dropped"
)
NONCOMPLETE_CAVEAT = "fan is not complete: the dual need not describe operational classes"


# ---------------------------------------------------------------------------
# Kunneth


def tensor_presentation(p, q):
    """``p (x) q`` over the common coefficient ring; generators are pairs."""
    if p.fgl != q.fgl:
        raise PresentationError(
            f"theory mismatch: {p.fgl.descriptor()} vs {q.fgl.descriptor()}"
        )
    if p.equivariant or q.equivariant:
        raise PresentationError("tensor products of equivariant presentations are not supported")
    nq = len(q.generators)
    gens = [
        Generator(("pair", a.label, b.label), a.degree + b.degree, f"{a.display()}x{b.display()}")
        for a in p.generators
        for b in q.generators
    ]
    rels = []
    for r in p.relations:
        for j in range(nq):
            rels.append({i * nq + j: c for i, c in r.items()})
    for r in q.relations:
        for i in range(len(p.generators)):
            rels.append({i * nq + j: c for j, c in r.items()})
    return ModulePresentation(p.fgl, gens, rels)


def compare_presentations(a, b, degrees=None):
    """Per-degree elementary divisors of both sides and whether they agree."""
    if degrees is None:
        top = max([g.degree for g in a.generators + b.generators] + [0])
        degrees = range(0, top + 1) if a.graded else [0]
    ea = elementary_divisors(a, degrees)
    eb = elementary_divisors(b, degrees)
    report = {}
    ok = True
    for d in degrees:
        sa, fa = ea[d]
        sb, fb = eb[d]
        left = {"free_rank": sa - len(fa), "torsion": [x for x in fa if x != 1]}
        right = {"free_rank": sb - len(fb), "torsion": [x for x in fb if x != 1]}
        same = left == right
        ok = ok and same
        report[d] = {"tensor": left, "product": right, "match": same}
    return ok, report


def check_kunneth(fan_x, fan_y, fgl, seed=None):
    """Compare ``B(X) (x) B(Y)`` with ``B(X x Y)``, each side presented independently."""
    px = singular_presentation(fan_x, fgl, seed)
    py = singular_presentation(fan_y, fgl, seed)
    t = tensor_presentation(px, py)
    prod = singular_presentation(product_fan(fan_x, fan_y), fgl, seed)
    return compare_presentations(t, prod)


# ---------------------------------------------------------------------------
# dual module


@dataclass
class DualDegree:
    degree: int
    unknowns: list  # (generator index, ring degree, basis index)
    functionals: list  # integer rows over ``unknowns``
    free_rank: int
    torsion: list

    def to_dict(self):
        return {"free_rank": self.free_rank, "torsion": self.torsion}


@dataclass
class DualModule:
    presentation: ModulePresentation
    degrees: dict
    caveats: list = field(default_factory=list)

    def ranks(self):
        return {d: x.free_rank for d, x in self.degrees.items()}

    def to_dict(self):
        return {
            "degrees": {str(d): x.to_dict() for d, x in sorted(self.degrees.items())},
            "caveats": list(self.caveats),
        }

    def evaluate(self, degree, functional, relation):
        """Value of a functional (integer row) on a relation, as a ring element."""
        p = self.presentation
        dd = self.degrees[degree]
        ring = p.fgl.ring
        total = Poly()
        for (i, k, j), x in zip(dd.unknowns, functional):
            if x and i in relation:
                val = ring.basis(k)[j].scale(x) if p.graded else Poly.const(x)
                total = total + relation[i].mul(val, p.trunc)
        return p.reduce(total)


def _unknowns(p, k):
    """Coordinates of a degree-``k`` functional: phi(g) lies in ring degree ``deg g - k``."""
    ring = p.fgl.ring
    out = []
    for i, g in enumerate(p.generators):
        e = g.degree - k if p.graded else 0
        if p.graded and (e < 0 or e > p.fgl.D):
            continue
        n = ring.rank(e) if p.graded else 1
        out.extend((i, e, j) for j in range(n))
    return out


def _constraints(p, k, unknowns):
    """Matrix ``unknowns x constraint-coordinates`` of phi applied to every relation."""
    ring = p.fgl.ring
    cols = []
    for r in p.relations:
        rd = p.relation_degree(r)
        if rd is None:
            continue
        e = rd - k if p.graded else 0
        if p.graded and (e < 0 or e > p.fgl.D):
            continue
        width = ring.rank(e) if p.graded else 1
        block = []
        for i, kk, j in unknowns:
            c = r.get(i)
            if c is None:
                block.append([0] * width)
                continue
            if p.graded:
                val = p.reduce(c.mul(ring.basis(kk)[j], p.trunc))
                block.append(ring.coords(val, e) if val else [0] * width)
            else:
                block.append([c.constant_term()])
        cols.append(block)
    mat = [[] for _ in unknowns]
    for block in cols:
        for row, part in zip(mat, block):
            row.extend(part)
    return mat


def dual_module(p, complete=True, allow_noncomplete=False, degrees=None):
    """Degree-preserving functionals ``B_{*+k} -> B_*(pt)`` killing every relation.

    ``torsion`` lists the non-unit invariant factors of the constraint map,
    i.e. the torsion that the relations leave behind (it does not appear in
    Hom itself, which is always free over Z).
    """
    if p.equivariant:
        raise PresentationError("dual of an equivariant presentation is not supported")
    caveats = [TRUNCATION_CAVEAT]
    if not complete:
        if not allow_noncomplete:
            raise FanError("dual module requires a complete fan")
        caveats.append(NONCOMPLETE_CAVEAT)
    if not p.graded:
        degrees = [0]  # a single ungraded piece
    elif degrees is None:
        top = max([g.degree for g in p.generators] + [0])
        degrees = range(0, top + 1)
    out = {}
    for k in degrees:
        unknowns = _unknowns(p, k)
        n = len(unknowns)
        mat = _constraints(p, k, unknowns)
        width = len(mat[0]) if mat else 0
        if n == 0:
            out[k] = DualDegree(k, [], [], 0, [])
            continue
        if width == 0:
            funcs = il.identity(n)
            tors = []
        else:
            # left kernel: integer rows y with y @ mat == 0
            funcs = il.left_kernel(mat, n)
            tors = [x for x in il.invariant_factors(mat, width) if x != 1]
        out[k] = DualDegree(k, unknowns, funcs, len(funcs), tors)
    dm = DualModule(p, out, caveats)
    for k, dd in out.items():
        for f in dd.functionals:
            for r in p.relations:
                if dm.evaluate(k, f, r):
                    raise AssertionError("functional does not kill a relation")
    return dm


# ---------------------------------------------------------------------------
# Kronecker pairing


def _require_smooth_complete(fan):
    if not is_complete(fan):
        raise FanError("Kronecker pairing needs a complete fan")
    if not is_smooth(fan)[0]:
        raise FanError("Kronecker pairing needs a smooth fan")


def kronecker_pairing(fan, fgl, c, cone):
    """Degree-zero part of ``c`` capped with ``[V_cone]`` pushed to a point."""
    _require_smooth_complete(fan)
    calc = calculus(fan, fgl)
    total = 0
    for sigma, coef in calc.cap(c, cone).items():
        if fan.cone_dim(sigma) == fan.dim:
            total += coef.constant_term()
    return total


def sr_monomials(fan, degree):
    """Monomials of the given degree in ray variables not in the SR ideal."""
    out = []
    for combo in combinations_with_replacement(range(len(fan.rays)), degree):
        support = tuple(sorted(set(combo)))
        if support in fan.cone_set or not support:
            m = Poly.const(1)
            for i in combo:
                m = m * Poly.var(ray_var(i))
            out.append(m)
    return out


@dataclass
class PairingBlock:
    degree: int
    classes: list  # chosen SR monomials
    cones: list  # generator cones of that homological degree
    matrix: list
    det: int
    full_rank_invariants: list  # invariant factors of all monomials against generators


def pairing_matrix(fan, fgl):
    """Per degree, a greedy SR monomial basis paired with the free generators.

    The presentation must simplify to a free module (true for smooth
    complete fans); the greedy choice keeps the chosen rows saturated.
    """
    _require_smooth_complete(fan)
    p = simplify(calculus(fan, fgl).presentation())
    if not p.is_free():
        raise PresentationError("presentation did not simplify to a free module")
    blocks = {}
    for j in range(fan.dim + 1):
        cones = [g.label for g in p.generators if g.degree == j]
        rows = []
        chosen = []
        all_rows = []
        for m in sr_monomials(fan, j):
            row = [kronecker_pairing(fan, fgl, m, c) for c in cones]
            all_rows.append(row)
            trial = rows + [row]
            if il.rank(trial) == len(trial) and il.is_saturated(trial, len(cones)):
                rows = trial
                chosen.append(m)
            if len(rows) == len(cones):
                break
        det = il.det(rows) if rows and len(rows) == len(cones) else 0
        inv = il.invariant_factors(all_rows, len(cones)) if cones and all_rows else []
        blocks[j] = PairingBlock(j, chosen, cones, rows, det, inv)
    return blocks


def is_unimodular(blocks):
    for b in blocks.values():
        if not b.cones:
            continue
        if abs(b.det) != 1:
            return False
        if len(b.full_rank_invariants) != len(b.cones) or any(x != 1 for x in b.full_rank_invariants):
            return False
    return True
