from hypothesis import given, settings
from hypothesis import strategies as st
from sympy import Matrix, ZZ
from sympy.matrices.normalforms import invariant_factors as sympy_invariants

from toricobm import intlinalg as il


def matrices(max_rows=4, max_cols=4, bound=12):
    return st.integers(1, max_rows).flatmap(
        lambda r: st.integers(1, max_cols).flatmap(
            lambda c: st.lists(
                st.lists(st.integers(-bound, bound), min_size=c, max_size=c),
                min_size=r,
                max_size=r,
            )
        )
    )


def sympy_factors(a):
    out = [int(x) for x in sympy_invariants(Matrix(a), domain=ZZ)]
    return sorted(abs(x) for x in out if x)


def test_snf_known_matrix():
    a = [[12, 6, 4, 8], [3, 9, 6, 12], [2, 16, 14, 28], [20, 10, 10, 20]]
    assert il.invariant_factors(a) == [1, 10, 30]


def test_snf_pivot_divides_entry():
    # used to loop forever: the pivot divides the entry below it
    s, u, v = il.snf([[0, 1], [-1, -1]])
    assert [s[0][0], s[1][1]] == [1, 1]


@settings(max_examples=150, deadline=None)
@given(matrices())
def test_snf_matches_sympy(a):
    assert il.invariant_factors(a) == sympy_factors(a)


@settings(max_examples=150, deadline=None)
@given(matrices())
def test_snf_transforms(a):
    s, u, v = il.snf(a)
    assert il.matmul(il.matmul(u, a), v) == s
    assert abs(il.det(u)) == 1 and abs(il.det(v)) == 1
    diag = [s[i][i] for i in range(min(len(s), len(s[0])))]
    nz = [d for d in diag if d]
    assert all(d > 0 for d in nz)
    assert all(nz[i + 1] % nz[i] == 0 for i in range(len(nz) - 1))
    for i, row in enumerate(s):
        for j, x in enumerate(row):
            if i != j:
                assert x == 0


@settings(max_examples=150, deadline=None)
@given(matrices())
def test_hnf_shape(a):
    h, u = il.hnf(a)
    assert il.matmul(u, a) == h
    assert abs(il.det(u)) == 1
    last = -1
    for row in h:
        if not any(row):
            continue
        p = next(j for j, x in enumerate(row) if x)
        assert p > last and row[p] > 0
        for other in h:
            if other is not row and any(other):
                q = next(j for j, x in enumerate(other) if x)
                if q < p:
                    assert 0 <= other[p] < row[p]
        last = p


@settings(max_examples=100, deadline=None)
@given(matrices())
def test_kernel_is_saturated(a):
    n = len(a[0])
    k = il.kernel(a, n)
    for v in k:
        assert il.matvec(a, v) == [0] * len(a)
    assert len(k) == n - il.rank(a)
    if k:
        assert il.is_saturated(k, n)


@settings(max_examples=100, deadline=None)
@given(matrices(), st.lists(st.integers(-5, 5), min_size=4, max_size=4))
def test_solve_roundtrip(a, x):
    x = x[: len(a[0])]
    b = il.matvec(a, x)
    y = il.solve(a, b, len(a[0]))
    assert y is not None and il.matvec(a, y) == b


def test_solve_no_integer_solution():
    assert il.solve([[2, 4]], [3], 2) is None


def test_quotient_coordinates():
    q = il.Quotient([[2, 0, 0], [0, 3, 0]], 3)
    assert q.free_rank == 1
    assert sorted(q.torsion_orders) == [2, 3] or q.torsion_orders == [6]
    assert q.coords([2, 0, 5])[1] == q.coords([0, 0, 5])[1]
    assert q.coords([1, 0, 0]) != q.coords([0, 0, 0])


def test_det_bareiss():
    assert il.det([[2, 1, 0], [1, 3, 1], [0, 1, 4]]) == 18
    assert il.det([[0, 1], [1, 0]]) == -1
