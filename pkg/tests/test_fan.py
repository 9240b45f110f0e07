import json
import random
from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from toricobm import intlinalg as il
from toricobm.fan import (
    Fan,
    FanError,
    FanFormatError,
    affine_space,
    classify_cone_map,
    cone_is_smooth,
    cube_fan,
    hirzebruch,
    is_complete,
    is_smooth,
    multiplicity,
    parallelepiped_points,
    parse_fan,
    product_fan,
    projective_space,
    resolve,
    star_subdivide,
    two_sided_fan,
)

from conftest import smooth_complete_fans


def test_parse_p1():
    f = parse_fan('{"dim": 1, "rays": [[1], [-1]], "cones": [[0], [1]]}')
    assert f.cones == ((), (0,), (1,))


def test_parse_p2_face_closure():
    f = parse_fan('{"dim":2,"rays":[[1,0],[0,1],[-1,-1]],"cones":[[0,1],[1,2],[0,2]]}')
    assert len(f.cones) == 7
    assert f.f_vector() == [1, 3, 3]


def test_parse_normalizes_rays():
    f = parse_fan('{"dim":2,"rays":[[2,0],[0,3]],"cones":[[0,1]]}')
    assert f.rays == ((1, 0), (0, 1))


@pytest.mark.parametrize(
    "text",
    [
        "{",
        '{"dim": 1, "rays": [[1]], "cones": [[0]], "extra": 1}',
        '{"dim": 1, "rays": [[1]]}',
        '{"dim": -1, "rays": [], "cones": []}',
        '{"dim": 1, "rays": [[1.5]], "cones": [[0]]}',
        "[]",
    ],
)
def test_parse_format_errors(text):
    with pytest.raises(FanFormatError):
        parse_fan(text)


@pytest.mark.parametrize(
    "rays, cones",
    [
        ([[0, 0], [1, 0]], [[0, 1]]),  # zero vector
        ([[1, 0], [0, 1], [1, 1]], [[0, 1], [0, 2]]),  # overlapping cones
        ([[1, 0, 0], [0, 1]], [[0, 1]]),  # dimension mismatch
        ([[1, 0], [-1, 0]], [[0, 1]]),  # not strictly convex
        ([[1, 0], [0, 1]], [[0, 5]]),  # missing ray
    ],
)
def test_invalid_fans(rays, cones):
    dim = 2
    with pytest.raises(FanError):
        Fan(dim, rays, cones)


def test_json_roundtrip():
    for f in list(smooth_complete_fans().values()) + [cube_fan(), two_sided_fan(2, 3)]:
        assert parse_fan(f.to_json()) == f
        assert parse_fan(f.to_json()).names == f.names


def test_cube_face_count():
    f = cube_fan()
    assert len(f.rays) == 8
    assert f.f_vector() == [1, 8, 12, 6]
    assert len(f.cones) == 27
    assert is_complete(f)


def test_cube_rays_are_cube_vertices():
    # in the basis (1,1,1), (1,1,-1), (1,-1,1) every ray is a vertex (+-1,+-1,+-1)
    basis = [(1, 1, 1), (1, 1, -1), (1, -1, 1)]
    verts = set()
    for r in cube_fan().rays:
        v = tuple(sum(r[k] * basis[k][i] for k in range(3)) for i in range(3))
        verts.add(v)
    assert verts == set(product([1, -1], repeat=3))


def test_smoothness():
    assert is_smooth(projective_space(2))[0]
    f = Fan(2, [[1, 0], [1, 2]], [[0, 1]])
    ok, per = is_smooth(f)
    assert not ok and not per[(0, 1)]
    assert il.invariant_factors([[1, 0], [1, 2]]) == [1, 2]
    assert multiplicity(f, (0, 1)) == 2
    cube = cube_fan()
    assert not all(cone_is_smooth(cube, c) for c in cube.cones_of_dim(3))


def test_smooth_matches_determinant():
    rng = random.Random(3)
    for _ in range(60):
        a = [rng.randint(-4, 4) for _ in range(2)]
        b = [rng.randint(-4, 4) for _ in range(2)]
        d = a[0] * b[1] - a[1] * b[0]
        if d == 0 or il.primitive(a) != a or il.primitive(b) != b:
            continue
        f = Fan(2, [a, b], [[0, 1]])
        assert cone_is_smooth(f, (0, 1)) == (abs(d) == 1)


def test_completeness():
    assert is_complete(projective_space(1))
    assert not is_complete(affine_space(2))
    for nm in [(1, 1), (2, 3), (3, 2)]:
        assert is_complete(two_sided_fan(*nm))
    for f in smooth_complete_fans().values():
        assert is_complete(f)


def test_star_subdivide_quadrant():
    f, smap = star_subdivide(affine_space(2), (1, 1))
    assert len(f.maximal) == 2
    assert is_smooth(f)[0]
    assert smap.cone_image[(2,)] == (0, 1)


def test_star_subdivide_p2():
    f, _ = star_subdivide(projective_space(2), (1, 1))
    assert len(f.maximal) == 4
    assert f.f_vector() == [1, 4, 4]
    assert is_smooth(f)[0]


def test_star_subdivide_cube_face():
    cube = cube_fan()
    face = cube.cones_of_dim(3)[0]
    r = [cube.rays[i] for i in face]
    diag = tuple(il.primitive([r[0][k] + r[3][k] for k in range(3)]))
    if cube.minimal_cone_containing(diag) != face:
        diag = tuple(il.primitive([r[0][k] + r[1][k] for k in range(3)]))
    f, _ = star_subdivide(cube, diag)
    assert f.f_vector()[3] == 6 - 1 + 4


def test_star_subdivide_errors():
    f = affine_space(2)
    with pytest.raises(FanError):
        star_subdivide(f, (2, 2))
    with pytest.raises(FanError):
        star_subdivide(f, (1, 0))
    with pytest.raises(FanError):
        star_subdivide(f, (-1, 1))


def sample_points(fan, rng, k=40):
    pts = []
    for _ in range(k):
        pts.append([Fraction(rng.randint(-9, 9), rng.randint(1, 4)) for _ in range(fan.dim)])
    return pts


def in_support(fan, p):
    den = 1
    for x in p:
        den = den * x.denominator
    return fan.in_support(tuple(int(x * den) for x in p))


def test_subdivision_preserves_support():
    rng = random.Random(0)
    for f in [affine_space(2), projective_space(2), two_sided_fan(2, 3)]:
        g, _ = resolve(f) if not is_smooth(f)[0] else star_subdivide(f, (1, 1))
        for p in sample_points(f, rng):
            assert in_support(f, p) == in_support(g, p)


def test_parallelepiped_points():
    f = Fan(2, [[1, 0], [1, 2]], [[0, 1]])
    pts = parallelepiped_points(f, (0, 1))
    assert [p for _, p in pts] == [(1, 1)]


def test_resolve_single_cone():
    f = Fan(2, [[1, 0], [1, 2]], [[0, 1]])
    g, smap = resolve(f)
    assert (1, 1) in g.rays
    assert len(g.maximal) == 2 and is_smooth(g)[0]


def test_resolve_smooth_is_identity():
    f = projective_space(2)
    g, smap = resolve(f)
    assert g is f
    assert all(smap.cone_image[c] == c for c in f.cones)


def test_resolve_two_sided_rays():
    g, _ = resolve(two_sided_fan(2, 2))
    for r in [(0, 1), (0, -1), (-1, 1)]:
        assert r in g.rays
    # with m = 1 the cone on (-1,-1), (1,0) is already smooth
    g, _ = resolve(two_sided_fan(2, 1))
    assert (0, 1) in g.rays and (-1, 1) in g.rays
    assert (0, -1) not in g.rays


@pytest.mark.parametrize("nm", [(2, 3), (3, 2), (3, 5), (4, 1)])
def test_resolve_two_sided_is_hirzebruch_jung(nm):
    # the minimal resolution adds (0,1), (0,-1), (-1,i) and (-1,-j)
    n, m = nm
    g, _ = resolve(two_sided_fan(n, m))
    expected = {(1, 0), (-1, n), (-1, 0), (-1, -m)}
    expected |= {(0, 1)} if n > 1 else set()
    expected |= {(0, -1)} if m > 1 else set()
    expected |= {(-1, i) for i in range(1, n)} | {(-1, -j) for j in range(1, m)}
    assert set(g.rays) == expected


@pytest.mark.parametrize("seed", [None, 1, 2, 3, 7])
def test_resolve_cube(seed):
    g, smap = resolve(cube_fan(), seed)
    assert is_smooth(g)[0]
    assert is_complete(g)
    for c in g.cones:
        for d in g.cones:
            if set(c) <= set(d):
                assert set(smap.cone_image[c]) <= set(smap.cone_image[d])


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 6), st.integers(1, 6), st.integers(0, 10**6))
def test_resolve_random_seeds_smooth(n, m, seed):
    g, smap = resolve(two_sided_fan(n, m), seed)
    assert is_smooth(g)[0] and is_complete(g)


def test_classify_two_sided():
    n, m = 2, 3
    f = two_sided_fan(n, m)
    g, smap = resolve(f)
    idx = {r: i for i, r in enumerate(g.rays)}
    p1 = idx[(-1, 1)]
    cls = classify_cone_map(smap, (p1,))
    assert cls.kind == "fibration" and cls.fiber == (1,)
    assert smap.cone_image[(p1,)] == (1, 2)
    for r in [(0, 1), (0, -1), (-1, -1), (-1, -2)]:
        assert classify_cone_map(smap, (idx[r],)).kind == "fibration"
    for r in [(1, 0), (-1, 2), (-1, 0), (-1, -3)]:
        assert classify_cone_map(smap, (idx[r],)).kind == "isomorphism"
    assert classify_cone_map(smap, ()).kind == "birational"


def test_classify_cube():
    g, smap = resolve(cube_fan())
    kinds = {}
    for c in g.cones:
        cls = classify_cone_map(smap, c)
        kinds.setdefault((g.cone_dim(c), cls.kind), []).append(c)
        assert cls.kind != "unsupported"
    # the six face diagonals contract to the face's fixed point
    diag = kinds[(2, "fibration")]
    assert len(diag) == 6
    assert {smap.cone_image[c] for c in diag} == set(cube_fan().cones_of_dim(3))


def test_classify_unsupported():
    f = Fan(3, [[1, 0, 0], [0, 1, 0], [1, 1, 3]], [[0, 1, 2]])
    g, smap = resolve(f)
    kinds = {classify_cone_map(smap, c).kind for c in g.cones}
    assert "unsupported" in kinds


def test_product_fan():
    p1 = projective_space(1)
    f = product_fan(p1, p1)
    assert f.f_vector() == [1, 4, 4]
    assert is_complete(f) and is_smooth(f)[0]
    assert f == hirzebruch(0) or f.f_vector() == hirzebruch(0).f_vector()
