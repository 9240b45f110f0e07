"""Exact integer linear algebra: Hermite and Smith normal forms and friends.

Matrices are lists of rows of Python ints. Nothing here touches floating
point, so entries may grow without bound.
"""

from math import gcd


def zeros(rows, cols):
    return [[0] * cols for _ in range(rows)]


def identity(n):
    m = zeros(n, n)
    for i in range(n):
        m[i][i] = 1
    return m


def copy(a):
    return [list(row) for row in a]


def transpose(a, ncols=None):
    if not a:
        return [[] for _ in range(ncols or 0)]
    return [list(col) for col in zip(*a)]


def matmul(a, b):
    if not a:
        return []
    if not b:
        return [[] for _ in a]
    bt = transpose(b)
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]


def matvec(a, v):
    return [sum(x * y for x, y in zip(row, v)) for row in a]


def vecmat(v, a):
    if not a:
        return []
    return [sum(v[i] * a[i][j] for i in range(len(v))) for j in range(len(a[0]))]


def det(a):
    """Determinant by fraction-free (Bareiss) elimination."""
    n = len(a)
    if n == 0:
        return 1
    m = copy(a)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def _row_combine(m, i, j, a, b, c, d):
    # rows (i, j) <- (a*ri + b*rj, c*ri + d*rj); requires ad - bc = +-1
    ri, rj = m[i], m[j]
    m[i] = [a * x + b * y for x, y in zip(ri, rj)]
    m[j] = [c * x + d * y for x, y in zip(ri, rj)]


def _xgcd(a, b):
    """Return (g, s, t) with s*a + t*b = g = gcd(a, b) >= 0."""
    s0, s1, t0, t1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if a < 0:
        a, s0, t0 = -a, -s0, -t0
    return a, s0, t0


def hnf(a, ncols=None):
    """Row Hermite normal form.

    Returns ``(H, U)`` with ``U @ a == H``, ``U`` unimodular, ``H`` in
    row echelon form with positive pivots and entries above each pivot
    reduced into ``[0, pivot)``. Zero rows are kept at the bottom.
    """
    h = copy(a)
    nrows = len(h)
    ncols = len(h[0]) if h else (ncols or 0)
    u = identity(nrows)
    pivot_row = 0
    for col in range(ncols):
        if pivot_row >= nrows:
            break
        # gcd-combine everything below into pivot_row
        for i in range(pivot_row + 1, nrows):
            if h[i][col] == 0:
                continue
            x, y = h[pivot_row][col], h[i][col]
            g, s, t = _xgcd(x, y)
            _row_combine(h, pivot_row, i, s, t, -y // g, x // g)
            _row_combine(u, pivot_row, i, s, t, -y // g, x // g)
        p = h[pivot_row][col]
        if p == 0:
            continue
        if p < 0:
            h[pivot_row] = [-x for x in h[pivot_row]]
            u[pivot_row] = [-x for x in u[pivot_row]]
            p = -p
        for i in range(pivot_row):
            q = h[i][col] // p
            if q:
                h[i] = [x - q * y for x, y in zip(h[i], h[pivot_row])]
                u[i] = [x - q * y for x, y in zip(u[i], u[pivot_row])]
        pivot_row += 1
    return h, u


def snf(a, ncols=None):
    """Smith normal form with transforms.

    Returns ``(S, U, V)`` with ``U @ a @ V == S``, both transforms
    unimodular, ``S`` diagonal with nonnegative entries each dividing the
    next.
    """
    s = copy(a)
    m = len(s)
    n = len(s[0]) if s else (ncols or 0)
    u = identity(m)
    v = identity(n)

    def swap_rows(i, j):
        s[i], s[j] = s[j], s[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for row in s:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    t = 0
    while t < min(m, n):
        # smallest nonzero entry of the trailing block becomes the pivot
        best = None
        for i in range(t, m):
            for j in range(t, n):
                x = s[i][j]
                if x and (best is None or abs(x) < best[0]):
                    best = (abs(x), i, j)
        if best is None:
            break
        _, i, j = best
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            done = True
            for i in range(t + 1, m):
                if s[i][t]:
                    x, y = s[t][t], s[i][t]
                    if y % x == 0:
                        f = y // x
                        s[i] = [a - f * b for a, b in zip(s[i], s[t])]
                        u[i] = [a - f * b for a, b in zip(u[i], u[t])]
                        continue
                    g, p, q = _xgcd(x, y)
                    _row_combine(s, t, i, p, q, -y // g, x // g)
                    _row_combine(u, t, i, p, q, -y // g, x // g)
            for j in range(t + 1, n):
                if s[t][j]:
                    x, y = s[t][t], s[t][j]
                    if y % x == 0:
                        f = y // x
                        for mat in (s, v):
                            for r in mat:
                                r[j] -= f * r[t]
                        continue
                    done = False
                    g, p, q = _xgcd(x, y)
                    a_, b_, c_, d_ = p, q, -y // g, x // g
                    for row in (s, v):
                        for r in row:
                            ct, cj = r[t], r[j]
                            r[t] = a_ * ct + b_ * cj
                            r[j] = c_ * ct + d_ * cj
            if done and all(s[i][t] == 0 for i in range(t + 1, m)):
                # divisibility: fold a non-divisible entry into the pivot row
                p = s[t][t]
                bad = None
                for i in range(t + 1, m):
                    for j in range(t + 1, n):
                        if s[i][j] % p:
                            bad = i
                            break
                    if bad is not None:
                        break
                if bad is None:
                    break
                s[t] = [x + y for x, y in zip(s[t], s[bad])]
                u[t] = [x + y for x, y in zip(u[t], u[bad])]
        if s[t][t] < 0:
            s[t] = [-x for x in s[t]]
            u[t] = [-x for x in u[t]]
        t += 1
    return s, u, v


def invariant_factors(a, ncols=None):
    """Nonzero diagonal of the Smith normal form, in divisibility order."""
    s, _, _ = snf(a, ncols)
    out = []
    for i in range(min(len(s), len(s[0]) if s else 0)):
        if s[i][i]:
            out.append(s[i][i])
    return out


def rank(a):
    return len(invariant_factors(a))


def kernel(a, ncols):
    """Integer basis (as a list of vectors) of the right kernel ``{x : a x = 0}``.

    The basis spans the full saturated kernel lattice.
    """
    if not a:
        return [[int(i == j) for j in range(ncols)] for i in range(ncols)]
    # column HNF via row HNF of the transpose: a^T = ... ; use U @ a^T = H
    h, u = hnf(transpose(a), ncols=len(a))
    return [u[i] for i in range(len(h)) if not any(h[i])]


def left_kernel(a, nrows):
    """Integer basis of ``{y : y a = 0}``."""
    if not a or not a[0]:
        return [[int(i == j) for j in range(nrows)] for i in range(nrows)]
    h, u = hnf(a)
    return [u[i] for i in range(len(h)) if not any(h[i])]


def solve(a, b, ncols):
    """Some integer ``x`` with ``a x = b``, or None if there is none."""
    m = len(a)
    if m == 0:
        return [0] * ncols
    s, u, v = snf(a, ncols)
    c = matvec(u, b)
    y = [0] * ncols
    for i in range(m):
        d = s[i][i] if i < ncols else 0
        if d == 0:
            if c[i] != 0:
                return None
        else:
            if c[i] % d:
                return None
            y[i] = c[i] // d
    return matvec(v, y)


def is_saturated(rows, ncols):
    """True iff the row lattice is a direct summand of Z^ncols."""
    return all(d == 1 for d in invariant_factors(rows, ncols))


def primitive(v):
    g = 0
    for x in v:
        g = gcd(g, x)
    if g == 0:
        raise ValueError("zero vector has no primitive generator")
    return [x // g for x in v]


class Quotient:
    """The abelian group ``Z^n / rowspan(rows)`` with explicit coordinates.

    ``coords(x)`` maps a vector to ``(free, torsion)`` where ``free`` is an
    integer vector of length ``free_rank`` and ``torsion`` lists residues
    modulo ``torsion_orders``. Two vectors are congruent exactly when their
    coordinates agree.
    """

    def __init__(self, rows, n):
        self.n = n
        rows = [r for r in rows if any(r)]
        if rows:
            s, _, v = snf(rows, n)
            diag = [s[i][i] for i in range(min(len(s), n)) if s[i][i]]
        else:
            v = identity(n)
            diag = []
        self.v = v
        r = len(diag)
        self.rank = r
        self.torsion_index = [i for i in range(r) if diag[i] > 1]
        self.torsion_orders = [diag[i] for i in self.torsion_index]
        self.free_rank = n - r

    def coords(self, x):
        y = vecmat(x, self.v)
        free = y[self.rank:]
        tors = [y[i] % d for i, d in zip(self.torsion_index, self.torsion_orders)]
        return free, tors

    def free_coords(self, x):
        return vecmat(x, self.v)[self.rank:]
