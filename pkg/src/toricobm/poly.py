"""Sparse polynomials with big-integer (or rational) coefficients.

A monomial is a tuple of ``(name, exponent)`` pairs sorted by name; the
constant monomial is ``()``. Variable names carry their grading:

* ``a<i><j>`` (``i <= j``) -- Lazard generator of Lazard degree ``i + j - 1``
* ``b`` -- the connective K-theory parameter, Lazard degree 1
* ``x<k>`` -- equivariant Chern class of the k-th coordinate character
* ``r<k>`` -- Chern class of the k-th toric divisor (a ray variable)
* ``t<k>`` -- a free nilpotent variable used by series arithmetic

``x``, ``r`` and ``t`` variables are nilpotent (nil degree 1, Lazard 0).
"""

from fractions import Fraction
from functools import lru_cache


@lru_cache(maxsize=None)
def var_degrees(name):
    """Return ``(lazard_degree, nil_degree)`` of a variable."""
    head = name[0]
    if head == "a":
        i, j = lazard_indices(name)
        return i + j - 1, 0
    if head == "b":
        return 1, 0
    if head in "xrt":
        return 0, 1
    raise ValueError(f"unknown variable {name!r}")


def lazard_name(i, j):
    i, j = min(i, j), max(i, j)
    if i < 10 and j < 10:
        return f"a{i}{j}"
    return f"a{i}_{j}"


@lru_cache(maxsize=None)
def lazard_indices(name):
    body = name[1:]
    if "_" in body:
        i, j = body.split("_")
        return int(i), int(j)
    return int(body[0]), int(body[1])


def is_coefficient_var(name):
    return name[0] in "ab"


@lru_cache(maxsize=None)
def mono_degrees(m):
    lz = nil = 0
    for name, e in m:
        a, b = var_degrees(name)
        lz += a * e
        nil += b * e
    return lz, nil


@lru_cache(maxsize=1 << 18)
def mono_mul(m1, m2):
    if not m1:
        return m2
    if not m2:
        return m1
    d = dict(m1)
    for name, e in m2:
        d[name] = d.get(name, 0) + e
    return tuple(sorted(d.items()))


@lru_cache(maxsize=1 << 16)
def mono_split(m):
    """Split a monomial into its coefficient-ring part and its nilpotent part."""
    c = tuple(p for p in m if is_coefficient_var(p[0]))
    v = tuple(p for p in m if not is_coefficient_var(p[0]))
    return c, v


def mono_str(m):
    if not m:
        return "1"
    return "*".join(n if e == 1 else f"{n}^{e}" for n, e in m)


class Truncation:
    """Degree bounds: drop terms of Lazard degree > ``lazard`` or nil degree > ``nil``.

    Both are ideals, so truncating after every product is a ring map.
    ``None`` means unbounded.
    """

    __slots__ = ("lazard", "nil")

    def __init__(self, lazard=None, nil=None):
        self.lazard = lazard
        self.nil = nil

    def keeps(self, m):
        lz, nil = mono_degrees(m)
        return (self.lazard is None or lz <= self.lazard) and (
            self.nil is None or nil <= self.nil
        )

    def __repr__(self):
        return f"Truncation(lazard={self.lazard}, nil={self.nil})"


class Poly:
    """Immutable-by-convention sparse polynomial ``{monomial: coefficient}``."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        if terms is None:
            self.terms = {}
        else:
            self.terms = {m: c for m, c in terms.items() if c}

    # construction -------------------------------------------------------
    @classmethod
    def const(cls, c):
        return cls({(): c})

    @classmethod
    def var(cls, name, exp=1, coeff=1):
        return cls({((name, exp),): coeff})

    @classmethod
    def mono(cls, m, coeff=1):
        return cls({m: coeff})

    # inspection ---------------------------------------------------------
    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Poly.const(other)
        if not isinstance(other, Poly):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def constant_term(self):
        return self.terms.get((), 0)

    def variables(self):
        return sorted({n for m in self.terms for n, _ in m})

    def items(self):
        return sorted(self.terms.items())

    def nil_degree_part(self, k):
        return Poly({m: c for m, c in self.terms.items() if mono_degrees(m)[1] == k})

    def min_nil_degree(self):
        if not self.terms:
            return None
        return min(mono_degrees(m)[1] for m in self.terms)

    # arithmetic ---------------------------------------------------------
    def __add__(self, other):
        if not isinstance(other, Poly):
            other = Poly.const(other)
        t = dict(self.terms)
        for m, c in other.terms.items():
            v = t.get(m, 0) + c
            if v:
                t[m] = v
            else:
                t.pop(m, None)
        out = Poly()
        out.terms = t
        return out

    __radd__ = __add__

    def __neg__(self):
        out = Poly()
        out.terms = {m: -c for m, c in self.terms.items()}
        return out

    def __sub__(self, other):
        if not isinstance(other, Poly):
            other = Poly.const(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, k):
        if k == 0:
            return Poly()
        out = Poly()
        out.terms = {m: c * k for m, c in self.terms.items()}
        return out

    def mul(self, other, trunc=None):
        """Product, pruned by ``trunc`` while multiplying."""
        if not isinstance(other, Poly):
            return self.scale(other)
        t = {}
        if trunc is None or (trunc.lazard is None and trunc.nil is None):
            for m1, c1 in self.terms.items():
                for m2, c2 in other.terms.items():
                    m = mono_mul(m1, m2)
                    t[m] = t.get(m, 0) + c1 * c2
        else:
            lzb = trunc.lazard
            nlb = trunc.nil
            right = [(m, c, *mono_degrees(m)) for m, c in other.terms.items()]
            for m1, c1 in self.terms.items():
                l1, n1 = mono_degrees(m1)
                if (lzb is not None and l1 > lzb) or (nlb is not None and n1 > nlb):
                    continue
                for m2, c2, l2, n2 in right:
                    if (lzb is not None and l1 + l2 > lzb) or (
                        nlb is not None and n1 + n2 > nlb
                    ):
                        continue
                    m = mono_mul(m1, m2)
                    t[m] = t.get(m, 0) + c1 * c2
        return Poly(t)

    def __mul__(self, other):
        return self.mul(other)

    def __rmul__(self, other):
        return self.scale(other)

    def pow(self, k, trunc=None):
        out = Poly.const(1)
        for _ in range(k):
            out = out.mul(self, trunc)
        return out

    def truncate(self, trunc):
        if trunc is None:
            return self
        return Poly({m: c for m, c in self.terms.items() if trunc.keeps(m)})

    def map_monomials(self, fn):
        """Apply ``fn(monomial) -> Poly | None`` termwise and sum the results."""
        out = {}
        for m, c in self.terms.items():
            img = fn(m)
            if img is None:
                continue
            for m2, c2 in img.terms.items():
                out[m2] = out.get(m2, 0) + c * c2
        return Poly(out)

    def subs(self, images, trunc=None):
        """Substitute variables by polynomials (others stay as they are)."""
        cache = {}

        def power(name, e):
            key = (name, e)
            if key not in cache:
                cache[key] = images[name].pow(e, trunc)
            return cache[key]

        out = Poly()
        for m, c in self.terms.items():
            term = Poly.const(c)
            rest = []
            for name, e in m:
                if name in images:
                    term = term.mul(power(name, e), trunc)
                else:
                    rest.append((name, e))
            if rest:
                term = term.mul(Poly.mono(tuple(rest)), trunc)
            out = out + term
        return out

    def set_zero(self, names):
        """Drop every term containing one of ``names``."""
        names = set(names)
        return Poly(
            {m: c for m, c in self.terms.items() if not any(n in names for n, _ in m)}
        )

    def coefficient_parts(self):
        """Group by nilpotent monomial: ``{nil_monomial: coefficient Poly}``."""
        groups = {}
        for m, c in self.terms.items():
            cm, vm = mono_split(m)
            g = groups.setdefault(vm, {})
            g[cm] = g.get(cm, 0) + c
        return {vm: Poly(g) for vm, g in groups.items()}

    # output -------------------------------------------------------------
    def __repr__(self):
        return f"Poly({self})"

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for m, c in self.items():
            ms = mono_str(m)
            if ms == "1":
                parts.append(str(c))
            elif c == 1:
                parts.append(ms)
            elif c == -1:
                parts.append("-" + ms)
            else:
                parts.append(f"{c}*{ms}")
        return " + ".join(parts).replace("+ -", "- ")

    def to_json(self):
        out = []
        for m, c in self.items():
            cj = c if isinstance(c, int) else str(c)
            out.append([[list(p) for p in m], cj])
        return out

    @classmethod
    def from_json(cls, data):
        t = {}
        for m, c in data:
            mono = tuple(sorted((str(n), int(e)) for n, e in m))
            t[mono] = Fraction(c) if isinstance(c, str) else int(c)
        return cls(t)
