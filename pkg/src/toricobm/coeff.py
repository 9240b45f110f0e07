"""Coefficient rings and formal group law arithmetic.

The universal coefficient ring is the Lazard ring, truncated above a degree
bound ``D``. It is stored as polynomials in the symbols ``a_ij`` (``i <= j``,
so commutativity is built in) modulo the associativity ideal. For each degree
the ideal is an integer lattice in the space of monomials; an HNF of that
lattice gives canonical coset representatives and an SNF gives linear
coordinates on the quotient.

Series in nilpotent variables (ray classes, equivariant classes, or the
scratch variables ``t<k>``) are plain :class:`~toricobm.poly.Poly` objects;
every operation takes a :class:`~toricobm.poly.Truncation`.
"""

from fractions import Fraction
from functools import lru_cache
from threading import Lock

from . import intlinalg as il
from .poly import (
    Poly,
    Truncation,
    lazard_indices,
    lazard_name,
    mono_degrees,
    mono_split,
)


class CoefficientError(ArithmeticError):
    """Raised when an element expected to be integral is not."""


def _monomials_of_degree(gens, d):
    """All monomials (sorted tuples) of weighted degree ``d`` in ``gens``."""
    out = []

    def rec(k, rem, cur):
        if rem == 0:
            out.append(tuple(sorted(cur)))
            return
        if k == len(gens):
            return
        name, w = gens[k]
        e = 0
        while e * w <= rem:
            rec(k + 1, rem - e * w, cur + ([(name, e)] if e else []))
            e += 1

    rec(0, d, [])
    return out


class CoefficientRing:
    """Graded polynomial ring over Z in a few symbols, truncated above ``D``.

    The base class has no relations; :class:`LazardRing` adds them.
    """

    kind = "polynomial"

    def __init__(self, gens, D):
        self.gens = list(gens)  # (name, degree)
        self.D = D
        self._monos = {}
        self._index = {}

    @property
    def trunc(self):
        return Truncation(lazard=self.D)

    def monomials(self, d):
        if d not in self._monos:
            ms = _monomials_of_degree(self.gens, d) if d >= 0 else []
            ms.sort(key=self._elim_key, reverse=True)
            self._monos[d] = ms
            self._index[d] = {m: i for i, m in enumerate(ms)}
        return self._monos[d]

    @staticmethod
    def _elim_key(m):
        parts = []
        for name, e in m:
            if name[0] == "a":
                i, j = lazard_indices(name)
                parts += [(i + j, i)] * e
            else:
                parts += [(2, 0)] * e
        return sorted(parts, reverse=True)

    def rank(self, d):
        """Rank of the degree-``d`` piece as a free abelian group."""
        if d < 0 or d > self.D:
            return 0
        return len(self.monomials(d))

    def vector(self, c, d):
        """Monomial-coordinate vector of a homogeneous coefficient of degree ``d``."""
        self.monomials(d)
        idx = self._index[d]
        v = [0] * len(idx)
        for m, x in c.terms.items():
            v[idx[m]] += x
        return v

    def coords(self, c, d):
        """Linear coordinates of ``c`` in a Z-basis of the degree-``d`` piece."""
        return self.vector(c, d)

    def basis(self, d):
        """Coset representatives forming a Z-basis in degree ``d``."""
        return [Poly.mono(m) for m in self.monomials(d)]

    def reduce(self, p):
        return p

    def degree(self, c):
        """Degree of a homogeneous coefficient (None for zero)."""
        degs = {mono_degrees(m)[0] for m in c.terms}
        if not degs:
            return None
        if len(degs) > 1:
            raise ValueError(f"inhomogeneous coefficient {c}")
        return degs.pop()

    def graded_pieces(self, c):
        out = {}
        for m, x in c.terms.items():
            out.setdefault(mono_degrees(m)[0], {})[m] = x
        return {d: Poly(t) for d, t in out.items()}

    def descriptor(self):
        return {"kind": self.kind, "gens": [g for g, _ in self.gens], "D": self.D}


class IntegerRing(CoefficientRing):
    """Z in degree 0."""

    kind = "integers"

    def __init__(self, D=0):
        super().__init__([], D)


class LazardRing(CoefficientRing):
    """The Lazard ring truncated above degree ``D``."""

    kind = "lazard"

    def __init__(self, D):
        gens = [
            (lazard_name(i, j), i + j - 1)
            for i in range(1, D + 1)
            for j in range(i, D + 2 - i)
        ]
        super().__init__(gens, D)
        self._relations = _associativity_relations(D)
        self._hnf = {}
        self._quot = {}
        self._lock = Lock()
        for d in range(D + 1):
            self._build(d)

    def _build(self, d):
        ms = self.monomials(d)
        idx = self._index[d]
        rows = []
        for e in range(1, d + 1):
            for r in self._relations.get(e, []):
                for m in self.monomials(d - e):
                    v = [0] * len(ms)
                    for mm, c in r.mul(Poly.mono(m)).terms.items():
                        v[idx[mm]] += c
                    if any(v):
                        rows.append(v)
        if rows:
            h, _ = il.hnf(rows, len(ms))
            h = [r for r in h if any(r)]
        else:
            h = []
        pivots = []
        for r in h:
            c = next(i for i, x in enumerate(r) if x)
            pivots.append(c)
        self._hnf[d] = list(zip(pivots, h))
        self._quot[d] = il.Quotient(h, len(ms))
        if self._quot[d].torsion_orders:
            raise CoefficientError(f"torsion in Lazard degree {d}")

    def relation_rows(self, d):
        """HNF rows of the associativity lattice in degree ``d``."""
        return [row for _, row in self._hnf.get(d, [])]

    def rank(self, d):
        if d < 0 or d > self.D:
            return 0
        return self._quot[d].free_rank

    def coords(self, c, d):
        if d < 0 or d > self.D:
            return []
        return self._quot[d].free_coords(self.vector(c, d))

    def basis(self, d):
        # rows of V^{-1} past the rank lift the free coordinates
        q = self._quot[d]
        if q.free_rank == 0:
            return []
        n = len(self.monomials(d))
        w = _inverse_unimodular(q.v)
        ms = self.monomials(d)
        out = []
        for k in range(q.rank, n):
            out.append(self._reduce_vec(w[k], d, ms))
        return out

    def lift(self, coords, d):
        q = self._quot[d]
        n = len(self.monomials(d))
        w = _inverse_unimodular(q.v)
        v = [0] * n
        for k, y in zip(range(q.rank, n), coords):
            for j in range(n):
                v[j] += y * w[k][j]
        return self._reduce_vec(v, d, self.monomials(d))

    def _reduce_vec(self, v, d, ms):
        v = list(v)
        exact = any(isinstance(x, Fraction) for x in v)
        for c, row in self._hnf[d]:
            if v[c] == 0:
                continue
            q = Fraction(v[c], row[c]) if exact else v[c] // row[c]
            if q:
                v = [x - q * y for x, y in zip(v, row)]
        return Poly({m: _normalize_number(x) for m, x in zip(ms, v)})

    def reduce(self, p):
        """Canonical representative modulo the associativity ideal.

        Integer elements are reduced to residues in ``[0, pivot)`` on the
        pivot monomials; elements with rational coefficients have the pivot
        monomials eliminated outright.
        """
        if not p.terms:
            return p
        needs = False
        for m in p.terms:
            if mono_degrees(m)[0] >= 3:
                needs = True
                break
        if not needs:
            return p
        groups = {}
        for m, c in p.terms.items():
            cm, vm = mono_split(m)
            d = mono_degrees(cm)[0]
            groups.setdefault((vm, d), {})
            g = groups[(vm, d)]
            g[cm] = g.get(cm, 0) + c
        out = {}
        for (vm, d), g in groups.items():
            if d < 3 or not self._hnf.get(d):
                red = g
            else:
                ms = self.monomials(d)
                red = self._reduce_vec(self.vector(Poly(g), d), d, ms).terms
            for cm, c in red.items():
                key = tuple(sorted(cm + vm)) if vm else cm
                out[key] = out.get(key, 0) + c
        return Poly(out)


def _normalize_number(x):
    if isinstance(x, Fraction) and x.denominator == 1:
        return int(x)
    return x


def _inverse_unimodular(v):
    n = len(v)
    # solve v w = I column by column via HNF of v (unimodular => HNF is I)
    h, u = il.hnf(v, n)
    # u v = h = I  =>  v^{-1} = u
    assert all(h[i][j] == (1 if i == j else 0) for i in range(n) for j in range(n))
    return u


@lru_cache(maxsize=None)
def _associativity_relations(D):
    """Coefficients of ``F(F(x,y),z) - F(x,F(y,z))`` grouped by Lazard degree."""
    tr = Truncation(lazard=D, nil=D + 1)
    coeffs = {
        (i, j): Poly.var(lazard_name(i, j))
        for i in range(1, D + 1)
        for j in range(1, D + 2 - i)
    }

    def fgl(p, q):
        out = p + q
        pp = [Poly.const(1)]
        qq = [Poly.const(1)]
        for _ in range(D + 1):
            pp.append(pp[-1].mul(p, tr))
            qq.append(qq[-1].mul(q, tr))
        for (i, j), a in coeffs.items():
            out = out + a.mul(pp[i].mul(qq[j], tr), tr)
        return out

    x, y, z = Poly.var("t1"), Poly.var("t2"), Poly.var("t3")
    diff = fgl(fgl(x, y), z) - fgl(x, fgl(y, z))
    rels = {}
    for vm, c in diff.coefficient_parts().items():
        d = mono_degrees(vm)[1] - 1
        if c:
            rels.setdefault(d, []).append(c)
    return rels


@lru_cache(maxsize=None)
def lazard_ring(D):
    return LazardRing(D)


def lazard_basis(D):
    """Per-degree Z-basis of the Lazard ring truncated above ``D``.

    Returns ``{d: [Poly, ...]}``; degree ``d`` has rank equal to the number
    of partitions of ``d``.
    """
    ring = lazard_ring(D)
    return {d: ring.basis(d) for d in range(D + 1)}


# ---------------------------------------------------------------------------
# formal group laws


class FormalGroupLaw:
    """A commutative one-dimensional formal group law, truncated.

    ``kind`` is ``"additive"``, ``"multiplicative"`` or ``"universal"``.
    A multiplicative law ``x + y - beta*x*y`` takes either an integer
    ``beta`` (ungraded, e.g. ``K_0`` with ``beta = 1``) or ``beta=None`` for
    the graded parameter ``b`` of Lazard degree 1.
    """

    def __init__(self, kind, D, beta=None):
        if D < 0:
            raise ValueError("truncation degree must be >= 0")
        self.kind = kind
        self.D = D
        self.beta = beta
        if kind == "universal":
            self.ring = lazard_ring(D)
        elif kind == "multiplicative" and beta is None:
            self.ring = CoefficientRing([("b", 1)], D)
        elif kind in ("additive", "multiplicative"):
            self.ring = IntegerRing(D)
        else:
            raise ValueError(f"unknown formal group law {kind!r}")
        self._series = {}
        self._lock = Lock()

    @classmethod
    def additive(cls, D):
        return cls("additive", D)

    @classmethod
    def multiplicative(cls, D, beta=1):
        return cls("multiplicative", D, beta)

    @classmethod
    def universal(cls, D):
        return cls("universal", D)

    @property
    def graded(self):
        """False only for a numeric multiplicative parameter."""
        return not (self.kind == "multiplicative" and self.beta not in (None, 0))

    def __repr__(self):
        extra = "" if self.kind != "multiplicative" else f", beta={self.beta}"
        return f"FormalGroupLaw({self.kind!r}, D={self.D}{extra})"

    def __eq__(self, other):
        return (
            isinstance(other, FormalGroupLaw)
            and (self.kind, self.D, self.beta) == (other.kind, other.D, other.beta)
        )

    def __hash__(self):
        return hash((self.kind, self.D, self.beta))

    def descriptor(self):
        out = {"kind": self.kind, "D": self.D}
        if self.kind == "multiplicative":
            out["beta"] = "b" if self.beta is None else self.beta
        return out

    def a(self, i, j):
        """Coefficient of ``x^i y^j`` (``i, j >= 1``)."""
        if i < 1 or j < 1:
            raise ValueError("a(i, j) needs i, j >= 1")
        if self.kind == "universal":
            if i + j - 1 > self.D:
                return Poly()
            return Poly.var(lazard_name(i, j))
        if self.kind == "multiplicative" and (i, j) == (1, 1):
            if self.beta is None:
                return Poly.var("b", coeff=-1) if self.D >= 1 else Poly()
            return Poly.const(-self.beta)
        return Poly()

    def coefficients(self, nil_bound):
        """Nonzero ``((i, j), a_ij)`` with ``i + j <= nil_bound``."""
        out = []
        for s in range(2, nil_bound + 1):
            for i in range(1, s):
                c = self.a(i, s - i)
                if c:
                    out.append(((i, s - i), c))
        return out

    def trunc(self, nil):
        return Truncation(lazard=self.D if self.graded else None, nil=nil)

    def reduce(self, p):
        return self.ring.reduce(p)

    # -- two-variable operations -------------------------------------------
    def add(self, p, q, nil):
        """``p +_F q`` truncated at nil degree ``nil``."""
        _check_no_constant(p)
        _check_no_constant(q)
        tr = self.trunc(nil)
        out = (p + q).truncate(tr)
        if self.kind == "additive" or not p or not q:
            return self.reduce(out)
        coeffs = self.coefficients(nil)
        if not coeffs:
            return self.reduce(out)
        maxi = max(i for (i, _), _ in coeffs)
        maxj = max(j for (_, j), _ in coeffs)
        pp = _powers(p, maxi, tr)
        qq = _powers(q, maxj, tr)
        for (i, j), a in coeffs:
            if not pp[i] or not qq[j]:
                continue
            out = out + a.mul(pp[i].mul(qq[j], tr), tr)
        return self.reduce(out)

    def add_many(self, terms, nil):
        out = Poly()
        for t in terms:
            out = self.add(out, t, nil)
        return out

    # -- one-variable series ---------------------------------------------------
    def _one_var(self, key, nil, build):
        with self._lock:
            cached = self._series.get(key)
            if cached is not None and cached[0] >= nil:
                return cached[1].truncate(Truncation(nil=nil))
        s = build(nil)
        with self._lock:
            self._series[key] = (nil, s)
        return s

    def inverse_series(self, nil):
        """``chi(t1)`` with ``F(t1, chi(t1)) = 0``, by degreewise recursion."""

        def build(nil):
            t = Poly.var("t1")
            g = -t
            for k in range(2, nil + 1):
                tr = self.trunc(k)
                val = self._add_raw(t, g, tr)
                ck = {
                    m: c
                    for m, c in val.terms.items()
                    if mono_degrees(mono_split(m)[1])[1] == k
                }
                g = self.reduce(g - Poly(ck))
            return g.truncate(self.trunc(nil))

        return self._one_var("inv", nil, build)

    def _add_raw(self, p, q, tr):
        out = (p + q).truncate(tr)
        for (i, j), a in self.coefficients(tr.nil):
            out = out + a.mul(p.pow(i, tr).mul(q.pow(j, tr), tr), tr)
        return self.reduce(out)

    def multiple_series(self, k, nil):
        """``[k]_F(t1)``: the k-fold formal sum of ``t1`` with itself."""

        def build(nil):
            t = Poly.var("t1")
            if k == 0:
                return Poly()
            base = t
            if k < 0:
                base = self.inverse_series(nil)
            out = base
            for _ in range(abs(k) - 1):
                out = self.add(out, base, nil)
            return out

        return self._one_var(("mul", k), nil, build)

    def compose(self, series, p, nil):
        """Substitute ``p`` for ``t1`` in a one-variable series."""
        if not p:
            return Poly.const(series.constant_term()) if series.constant_term() else Poly()
        tr = self.trunc(nil)
        by_power = {}
        for m, c in series.terms.items():
            cm, vm = mono_split(m)
            e = vm[0][1] if vm else 0
            by_power.setdefault(e, {})[cm] = by_power.get(e, {}).get(cm, 0) + c
        out = Poly()
        pw = Poly.const(1)
        for e in range(0, max(by_power) + 1):
            if e:
                pw = pw.mul(p, tr)
                if not pw:
                    break
            if e in by_power:
                out = out + Poly(by_power[e]).mul(pw, tr)
        return self.reduce(out)

    def neg(self, p, nil):
        """Formal inverse ``-_F p``."""
        _check_no_constant(p)
        if self.kind == "additive":
            return self.reduce((-p).truncate(self.trunc(nil)))
        return self.compose(self.inverse_series(nil), p, nil)

    def sub(self, p, q, nil):
        return self.add(p, self.neg(q, nil), nil)

    def int_mul(self, k, p, nil):
        """``k ._F p``."""
        if k == 0 or not p:
            return Poly()
        if self.kind == "additive":
            return self.reduce(p.scale(k).truncate(self.trunc(nil)))
        if k == 1:
            return self.reduce(p.truncate(self.trunc(nil)))
        return self.compose(self.multiple_series(k, nil), p, nil)

    def logarithm(self, nil):
        """The series ``l(t1) = t1 + ...`` with rational coefficients linearizing F.

        Computed by integrating ``1 / (dF/dy)(t1, 0)``.
        """
        t = "t1"
        # dF/dy at y = 0 is 1 + sum_i a_{i1} t^i
        deriv = {0: Poly.const(1)}
        for i in range(1, nil):
            c = self.a(i, 1)
            if c:
                deriv[i] = c
        tr = Truncation(lazard=self.D if self.graded else None)
        inv = {0: Poly.const(1)}
        for k in range(1, nil):
            acc = Poly()
            for i in range(1, k + 1):
                if i in deriv and (k - i) in inv:
                    acc = acc + deriv[i].mul(inv[k - i], tr)
            inv[k] = self.reduce(-acc)
        out = Poly()
        for k, c in inv.items():
            if k + 1 > nil:
                continue
            scaled = Poly({m: Fraction(x, k + 1) for m, x in c.terms.items()})
            out = out + scaled.mul(Poly.var(t, k + 1))
        return self.reduce(Poly({m: _normalize_number(x) for m, x in out.terms.items()}))

    def pn_class(self, n):
        """Class of projective n-space in the coefficient ring, ``[P^n]``."""
        if n < 0:
            raise ValueError("n must be >= 0")
        if self.graded and n > self.D:
            raise CoefficientError(f"[P^{n}] lives above the truncation degree {self.D}")
        if n == 0:
            return Poly.const(1)
        ell = self.logarithm(n + 1)
        coeff = {}
        for m, c in ell.terms.items():
            cm, vm = mono_split(m)
            if vm == (("t1", n + 1),):
                coeff[cm] = coeff.get(cm, 0) + c * (n + 1)
        val = Poly({m: _normalize_number(x) for m, x in coeff.items()})
        return _integral(self.ring, val, n if self.graded else None)

    def xi_of_form(self, m, nil, prefix="x"):
        """Equivariant class of the character ``m``: ``m_1 ._F x1 +_F ... +_F m_n ._F xn``."""
        terms = [
            self.int_mul(a, Poly.var(f"{prefix}{i + 1}"), nil)
            for i, a in enumerate(m)
            if a
        ]
        return self.add_many(terms, nil)


def _integral(ring, val, d):
    """Return an integer-coefficient representative of ``val`` or raise."""
    if all(isinstance(x, int) for x in val.terms.values()):
        return ring.reduce(val)
    if d is None or not isinstance(ring, LazardRing):
        raise CoefficientError(f"non-integral coefficient {val}")
    coords = ring.coords(val, d)
    if any(isinstance(c, Fraction) and c.denominator != 1 for c in coords):
        raise CoefficientError(f"non-integral coefficient {val}")
    return ring.lift([int(c) for c in coords], d)


def _powers(p, k, tr):
    out = [Poly.const(1), p]
    for _ in range(k - 1):
        out.append(out[-1].mul(p, tr))
    return out


def _check_no_constant(p):
    if p.constant_term():
        raise ValueError("formal group law arguments must have no constant term")


def theory_fgl(theory, D, beta=1):
    """Map a theory name (chow, ktheory, cobordism) to its formal group law."""
    if theory in ("chow", "additive"):
        return FormalGroupLaw.additive(D)
    if theory in ("ktheory", "multiplicative"):
        return FormalGroupLaw.multiplicative(D, beta)
    if theory in ("cobordism", "universal"):
        return FormalGroupLaw.universal(D)
    raise ValueError(f"unknown theory {theory!r}")


# module-level conveniences mirroring the operation names


def f_add(F, p, q, nil=None):
    return F.add(p, q, F.D if nil is None else nil)


def f_neg(F, p, nil=None):
    return F.neg(p, F.D if nil is None else nil)


def f_int_mul(F, k, p, nil=None):
    return F.int_mul(k, p, F.D if nil is None else nil)


def logarithm(F, D=None):
    return F.logarithm(F.D if D is None else D)


def pn_class(F, n):
    return F.pn_class(n)


def xi_of_form(F, m, nil=None):
    return F.xi_of_form(m, F.D if nil is None else nil)
