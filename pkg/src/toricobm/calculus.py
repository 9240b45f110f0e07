"""Smooth toric varieties: Stanley-Reisner classes, divisors, cap products, presentations.

Ray ``i`` of the fan carries the variable ``r<i>`` (the first Chern class of
its toric divisor); the equivariant classes of the coordinate characters are
``x1 .. xn``. Homological degrees: ``[V_sigma]`` sits in degree
``n - dim sigma``, a Lazard coefficient raises degree, and ray or equivariant
variables lower it by one.
"""

from functools import lru_cache
from itertools import product
from threading import RLock

from . import intlinalg as il
from .coeff import FormalGroupLaw
from .fan import Fan, FanError, cone_is_smooth, is_smooth
from .poly import Poly, Truncation, mono_degrees, mono_split
from .presentation import Generator, ModulePresentation, label_name


class NotSmoothError(FanError):
    pass


def ray_var(i):
    return f"r{i}"


def ray_index(name):
    return int(name[1:])


def xi_var(i):
    return f"x{i + 1}"


def _is_ray(name):
    return name[0] == "r"


def _dot(a, b):
    return sum(x * y for x, y in zip(a, b))


class ToricCalculus:
    """Cap products and relations on a smooth fan for one formal group law.

    ``xi_degree`` bounds the total degree in the equivariant variables;
    it is 0 (non-equivariant) unless ``equivariant`` is set, where it
    defaults to the Lazard truncation ``D``.
    """

    def __init__(self, fan, fgl, equivariant=False, xi_degree=None):
        ok, per = is_smooth(fan)
        if not ok:
            bad = [list(c) for c, s in per.items() if not s]
            raise NotSmoothError(f"fan is not smooth (first bad cone {bad[0]})")
        self.fan = fan
        self.F = fgl
        self.n = fan.dim
        self.equivariant = equivariant
        self.xi_degree = (fgl.D if xi_degree is None else xi_degree) if equivariant else 0
        self._cap_mono = {}
        self._self_int = {}
        self._lock = RLock()

    # -- basics ------------------------------------------------------------
    def codim(self, cone):
        return self.n - len(cone)

    def nil_bound(self, cone=()):
        """Ray-plus-xi degree above which classes vanish on ``V_cone``."""
        return self.codim(cone) + self.xi_degree

    def coeff_trunc(self):
        return Truncation(lazard=self.F.D if self.F.graded else None, nil=self.xi_degree)

    def sr_reduce(self, c):
        """Drop monomials whose ray support spans no cone."""
        out = {}
        for m, k in c.terms.items():
            support = tuple(sorted(ray_index(v) for v, _ in m if _is_ray(v)))
            if support and support not in self.fan.cone_set:
                continue
            out[m] = k
        return Poly(out)

    def in_sr_ideal(self, mono):
        support = tuple(sorted(ray_index(v) for v, _ in mono if _is_ray(v)))
        return bool(support) and support not in self.fan.cone_set

    def _norm(self, c, nil):
        return self.sr_reduce(self.F.reduce(c.truncate(self.F.trunc(nil))))

    # -- linear forms --------------------------------------------------------
    def orth_basis(self, cone):
        """Integral basis of the forms vanishing on ``cone``, via Smith normal form."""
        n = self.n
        if not cone:
            return il.identity(n)
        a = [list(self.fan.rays[i]) for i in cone]
        s, _, v = il.snf(a, n)
        r = sum(1 for i in range(min(len(s), n)) if s[i][i])
        cols = [[v[j][k] for j in range(n)] for k in range(r, n)]
        if not cols:
            return []
        h, _ = il.hnf(cols, n)
        return [row for row in h if any(row)]

    def dual_form(self, ray, cone):
        """The form ``m`` with ``<m, v_ray> = 1`` and ``<m, v> = 0`` on the other rays.

        Minimal max-norm, ties broken lexicographically.
        """
        with self._lock:
            key = ("m", ray, cone)
            if key in self._self_int:
                return self._self_int[key]
        vecs = [self.fan.rays[i] for i in cone]
        target = [1 if i == ray else 0 for i in cone]
        m0 = il.solve(vecs and [list(v) for v in vecs], target, self.n)
        if m0 is None:
            raise NotSmoothError(f"cone {list(cone)} is not smooth")
        bound = max(abs(x) for x in m0) or 1
        best = None
        for b in range(1, bound + 1):
            for cand in product(range(-b, b + 1), repeat=self.n):
                if all(_dot(cand, v) == t for v, t in zip(vecs, target)):
                    if best is None or cand < best:
                        best = cand
            if best is not None:
                break
        if best is None:
            best = tuple(m0)
        with self._lock:
            self._self_int[key] = best
        return best

    def xi_of_form(self, m, nil=None):
        if not self.equivariant:
            return Poly()
        nil = self.xi_degree if nil is None else nil
        return self.F.xi_of_form(m, nil)

    @property
    def sr_nil(self):
        """Degree bound for Stanley-Reisner classes: max(D, n) plus the xi bound."""
        return max(self.F.D, self.n) + self.xi_degree

    def divisor_class(self, m, nil=None):
        """Formal sum over the rays of ``<m, v_rho> ._F rho``, SR-reduced."""
        nil = self.sr_nil if nil is None else nil
        out = Poly()
        for i, v in enumerate(self.fan.rays):
            k = _dot(m, v)
            if k:
                term = self.F.int_mul(k, Poly.var(ray_var(i)), nil)
                out = self._norm(self.F.add(out, term, nil), nil)
        return out

    # -- cap product ---------------------------------------------------------
    def cap(self, c, cone=()):
        """``c`` capped with ``[V_cone]`` as ``{cone: coefficient}``."""
        cone = tuple(sorted(cone))
        if cone not in self.fan.cone_set:
            raise FanError(f"{list(cone)} is not a cone")
        out = {}
        tr = self.coeff_trunc()
        for m, k in c.terms.items():
            coef_part = tuple(p for p in m if not _is_ray(p[0]))
            ray_part = tuple(p for p in m if _is_ray(p[0]))
            coef = Poly({coef_part: k})
            for sigma, val in self._cap_ray_mono(ray_part, cone).items():
                term = coef.mul(val, tr)
                if term:
                    out[sigma] = out.get(sigma, Poly()) + term
        return {s: self.F.reduce(v) for s, v in out.items() if v}

    def _cap_ray_mono(self, mono, cone):
        key = (mono, cone)
        with self._lock:
            hit = self._cap_mono.get(key)
        if hit is not None:
            return hit
        if not mono:
            res = {cone: Poly.const(1)}
        elif mono_degrees(mono)[1] > self.nil_bound(cone):
            res = {}
        else:
            name, e = mono[0]
            rest = ((name, e - 1),) + mono[1:] if e > 1 else mono[1:]
            step = self._cap_single(ray_index(name), cone)
            res = {}
            tr = self.coeff_trunc()
            for sigma, coef in step.items():
                for tau, val in self._cap_ray_mono(rest, sigma).items():
                    t = coef.mul(val, tr)
                    if t:
                        res[tau] = res.get(tau, Poly()) + t
            res = {s: self.F.reduce(v) for s, v in res.items() if v}
            res = {s: v for s, v in res.items() if v}
        with self._lock:
            self._cap_mono[key] = res
        return res

    def _cap_single(self, ray, cone):
        if ray not in cone:
            bigger = tuple(sorted(cone + (ray,)))
            if bigger in self.fan.cone_set:
                return {bigger: Poly.const(1)}
            return {}
        return self.cap(self.self_intersection(ray, cone), cone)

    def self_intersection(self, ray, cone):
        """``rho`` rewritten as ``xi_m -_F S`` on ``V_cone`` (``rho`` in ``cone``).

        ``m`` pairs to 1 with ``rho`` and to 0 with the other rays of the
        cone, so ``S`` only involves rays outside the cone.
        """
        m = self.dual_form(ray, cone)
        nil = self.nil_bound(cone)
        terms = []
        for i, v in enumerate(self.fan.rays):
            if i == ray:
                continue
            k = _dot(m, v)
            if k:
                if i in cone:
                    raise AssertionError("dual form does not vanish on the cone")
                terms.append(self.F.int_mul(k, Poly.var(ray_var(i)), nil))
        s = self.F.add_many(terms, nil)
        s = self._norm(s, nil)
        xi = self.xi_of_form(m, nil)
        if not s:
            return xi
        neg = self._norm(self.F.neg(s, nil), nil)
        if not xi:
            return neg
        return self._norm(self.F.add(xi, neg, nil), nil)

    # -- presentations -----------------------------------------------------------
    def generators(self):
        return [
            Generator(c, self.codim(c), label_name(c, getattr(self.fan, "names", None)))
            for c in self.fan.cones
        ]

    def relations(self):
        """One relation per cone and per basis form of its orthogonal lattice."""
        index = {c: i for i, c in enumerate(self.fan.cones)}
        rels = []
        for tau in self.fan.cones:
            for m in self.orth_basis(tau):
                rel = {}
                dc = self.divisor_class(m, self.nil_bound(tau))
                # cap(div m, tau) - xi_m [V_tau] = 0; without xi this is the
                # classical sum of <m, n_sigma> [V_sigma] in the additive case
                for sigma, c in self.cap(dc, tau).items():
                    rel[index[sigma]] = c
                xi = self.xi_of_form(m)
                if xi:
                    i = index[tau]
                    rel[i] = rel.get(i, Poly()) - xi
                rels.append({i: c for i, c in rel.items() if c})
        return rels

    def presentation(self):
        return ModulePresentation(
            self.F,
            self.generators(),
            self.relations(),
            self.equivariant,
            self.xi_degree,
            meta={"fan": self.fan.to_dict()},
        )

    # -- orbit restriction ------------------------------------------------------
    def restrict_to_orbit(self, c, cone):
        return restrict_to_orbit(self.fan, c, cone)


@lru_cache(maxsize=64)
def calculus(fan, fgl, equivariant=False, xi_degree=None):
    return ToricCalculus(fan, fgl, equivariant, xi_degree)


# ---------------------------------------------------------------------------
# Stanley-Reisner ring


class SRRing:
    """Ray variables modulo the Stanley-Reisner monomial ideal.

    ``linear_relations`` holds the divisor classes of the coordinate forms;
    they vanish in the non-equivariant cohomology ring.
    """

    def __init__(self, fan, fgl, equivariant=False):
        self.calc = calculus(fan, fgl, equivariant)
        self.fan = fan
        self.fgl = fgl
        self.equivariant = equivariant
        self.variables = [ray_var(i) for i in range(len(fan.rays))]
        self.ideal = minimal_nonfaces(fan)
        if equivariant:
            self.linear_relations = []
        else:
            self.linear_relations = [
                self.calc.divisor_class(e) for e in il.identity(fan.dim)
            ]

    @property
    def nil(self):
        return self.calc.sr_nil

    def reduce(self, c):
        return self.calc._norm(c, self.nil)

    def mul(self, a, b):
        return self.reduce(a.mul(b, self.fgl.trunc(self.nil)))

    def contains(self, mono):
        """True if the monomial lies in the Stanley-Reisner ideal."""
        return self.calc.in_sr_ideal(mono)

    def ideal_monomials(self):
        return [Poly.mono(tuple((ray_var(i), 1) for i in s)) for s in self.ideal]

    def to_dict(self):
        return {
            "variables": self.variables,
            "ideal": [[ray_var(i) for i in s] for s in self.ideal],
            "linear_relations": [p.to_json() for p in self.linear_relations],
        }


def minimal_nonfaces(fan):
    """Minimal ray sets that do not span a cone (generators of the SR ideal)."""
    from itertools import combinations

    out = []
    r = len(fan.rays)
    for k in range(2, r + 1):
        for s in combinations(range(r), k):
            if s in fan.cone_set:
                continue
            if all(t in fan.cone_set for t in combinations(s, k - 1)):
                out.append(s)
    return out


def sr_ring(fan, fgl, equivariant=False):
    return SRRing(fan, fgl, equivariant)


# ---------------------------------------------------------------------------
# module-level operations


def divisor_class(fan, fgl, m, equivariant=False):
    return calculus(fan, fgl, equivariant).divisor_class(tuple(m))


def cap(fan, fgl, c, cone=(), equivariant=False):
    return calculus(fan, fgl, equivariant).cap(c, cone)


def equivariant_presentation(fan, fgl, xi_degree=None):
    return calculus(fan, fgl, True, xi_degree).presentation()


def nonequivariant_presentation(fan, fgl):
    return calculus(fan, fgl, False).presentation()


# ---------------------------------------------------------------------------
# orbit restriction and gluing


class OrbitElement:
    """An element of the coefficient ring of the orbit ``O_cone``.

    The ring is the equivariant power series ring modulo the classes of the
    forms orthogonal to ``cone`` (``killed``, ``n - dim cone`` of them); the
    surviving variables are named by the rays of ``cone``: ray ``i`` stands
    for the class of the dual form pairing to 1 with it and 0 with the
    cone's other rays.
    """

    def __init__(self, cone, value, killed=()):
        self.cone = tuple(sorted(cone))
        self.value = value
        self.killed = tuple(tuple(m) for m in killed)

    @property
    def variables(self):
        return [ray_var(i) for i in self.cone]

    def __eq__(self, other):
        return isinstance(other, OrbitElement) and (self.cone, self.value) == (
            other.cone,
            other.value,
        )

    def __repr__(self):
        return f"OrbitElement({list(self.cone)}, {self.value})"

    def restrict(self, face):
        """Restriction to the orbit of a face: kill the rays not in the face."""
        face = tuple(sorted(face))
        if not set(face) <= set(self.cone):
            raise ValueError(f"{list(face)} is not a face of {list(self.cone)}")
        gone = [ray_var(i) for i in self.cone if i not in face]
        return OrbitElement(face, self.value.set_zero(gone))


def restrict_to_orbit(fan, c, cone):
    """Kill every monomial whose ray support is not inside ``cone``."""
    cone = tuple(sorted(cone))
    keep = {ray_var(i) for i in cone}
    val = Poly(
        {
            m: k
            for m, k in c.terms.items()
            if all(v in keep for v, _ in m if _is_ray(v))
        }
    )
    killed = _orth(fan, cone)
    return OrbitElement(cone, val, killed)


def _orth(fan, cone):
    if not cone:
        return il.identity(fan.dim)
    return il.kernel([list(fan.rays[i]) for i in cone], fan.dim)


def check_gluing(fan, family):
    """True iff ``family`` (cone -> OrbitElement or Poly) respects every face restriction."""
    vals = {}
    for c in fan.cones:
        if c not in family:
            return False
        e = family[c]
        vals[c] = e if isinstance(e, OrbitElement) else OrbitElement(c, e)
    for sigma in fan.cones:
        for tau in fan.cones:
            if tau != sigma and set(tau) <= set(sigma):
                if vals[sigma].restrict(tau).value != vals[tau].value:
                    return False
    return True


def glue(fan, family):
    """The SR class with the given restrictions (assumes ``check_gluing``).

    Every SR-surviving monomial has support in some cone, so the class is
    read off from the maximal cones' restrictions.
    """
    out = {}
    for c in fan.maximal:
        e = family[c]
        val = e.value if isinstance(e, OrbitElement) else e
        for m, k in val.terms.items():
            out[m] = k
    return Poly(out)


def orbit_form_image(fan, fgl, m, cone, nil):
    """``xi_m`` written in the orbit variables of ``cone``.

    ``xi_m`` is the formal sum of ``<m, v_rho> ._F rho`` over the rays of the
    cone, since the forms orthogonal to the cone are killed.
    """
    terms = []
    for i in cone:
        k = _dot(m, fan.rays[i])
        if k:
            terms.append(fgl.int_mul(k, Poly.var(ray_var(i)), nil))
    return fgl.add_many(terms, nil)
