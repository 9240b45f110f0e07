import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from toricobm.calculus import nonequivariant_presentation
from toricobm.coeff import FormalGroupLaw, theory_fgl
from toricobm.descent import UnsupportedDescent, singular_presentation
from toricobm.duality import (
    NONCOMPLETE_CAVEAT,
    check_kunneth,
    compare_presentations,
    dual_module,
    is_unimodular,
    kronecker_pairing,
    pairing_matrix,
    tensor_presentation,
)
from toricobm.fan import (
    FanError,
    affine_space,
    point_fan,
    product_fan,
    projective_space,
    two_sided_fan,
)
from toricobm.poly import Poly
from toricobm.presentation import PresentationError, graded_invariants, simplify

from conftest import smooth_complete_fans

P1 = projective_space(1)
P2 = projective_space(2)


def present(fan, fgl):
    return singular_presentation(fan, fgl)


def test_tensor_with_point_is_identity():
    F = FormalGroupLaw.universal(2)
    p = present(two_sided_fan(2, 3), F)
    pt = present(point_fan(), F)
    t = tensor_presentation(p, pt)
    assert len(t.generators) == len(p.generators)
    assert [g.degree for g in t.generators] == [g.degree for g in p.generators]
    assert compare_presentations(t, p)[0]


def test_p1_tensor_p1_chow():
    F = FormalGroupLaw.additive(2)
    t = tensor_presentation(present(P1, F), present(P1, F))
    s = simplify(t)
    assert s.is_free()
    assert s.generator_ranks() == {0: 1, 1: 2, 2: 1}


def test_tensor_doubles_relations():
    F = FormalGroupLaw.universal(3)
    p = present(two_sided_fan(2, 3), F)
    q = present(P1, F)
    t = tensor_presentation(p, q)
    assert len(t.relations) == len(p.relations) * len(q.generators) + len(q.relations) * len(p.generators)
    ok, report = compare_presentations(t, present(product_fan(two_sided_fan(2, 3), P1), F))
    assert ok
    assert all(not v["tensor"]["torsion"] for v in report.values())


def test_tensor_theory_mismatch():
    with pytest.raises(PresentationError):
        tensor_presentation(present(P1, FormalGroupLaw.additive(1)), present(P1, FormalGroupLaw.universal(1)))


@pytest.mark.parametrize("theory", ["chow", "cobordism"])
def test_tensor_symmetric(theory):
    F = theory_fgl(theory, 3)
    a = present(two_sided_fan(3, 2), F)
    b = present(P1, F)
    ok, _ = compare_presentations(tensor_presentation(a, b), tensor_presentation(b, a))
    assert ok


@pytest.mark.parametrize("theory", ["chow", "ktheory", "cobordism"])
@pytest.mark.parametrize(
    "pair",
    [(P1, P1), (P2, P1), (two_sided_fan(2, 3), P1), (point_fan(), P2)],
    ids=["P1xP1", "P2xP1", "E23xP1", "ptxP2"],
)
def test_kunneth_instances(theory, pair):
    x, y = pair
    ok, report = check_kunneth(x, y, theory_fgl(theory, x.dim + y.dim))
    assert ok
    assert all(v["match"] for v in report.values())


def test_kunneth_p1xp1_ranks():
    ok, report = check_kunneth(P1, P1, FormalGroupLaw.additive(2))
    assert ok
    assert [report[d]["product"]["free_rank"] for d in range(3)] == [1, 2, 1]


def test_mutated_relation_negative_control():
    F = FormalGroupLaw.universal(3)
    x = present(two_sided_fan(2, 3), F)
    y = present(P1, F)
    t = tensor_presentation(x, y)
    prod = present(product_fan(two_sided_fan(2, 3), P1), F)
    bad = t.copy(relations=[{i: c.scale(2) for i, c in r.items()} for r in t.relations])
    ok, report = compare_presentations(bad, prod)
    assert not ok
    assert any(v["tensor"]["torsion"] for v in report.values())
    ok, _ = compare_presentations(t.copy(relations=t.relations[1:]), prod)
    assert not ok


def test_dual_of_free_presentation_reflects_ranks():
    p = present(P2, FormalGroupLaw.additive(2))
    dm = dual_module(p)
    assert dm.ranks() == {0: 1, 1: 1, 2: 1}
    assert all(not x.torsion for x in dm.degrees.values())


@pytest.mark.parametrize("name", ["P1", "P1xP1", "F1"])
def test_dual_ranks_match_generators_when_free(name):
    fan = smooth_complete_fans()[name]
    p = present(fan, FormalGroupLaw.additive(fan.dim))
    assert dual_module(p).ranks() == p.generator_ranks()


def test_dual_two_sided_rank_drop():
    p = present(two_sided_fan(2, 3), FormalGroupLaw.additive(2))
    ranks = p.generator_ranks()
    dm = dual_module(p)
    # (2, -3) is primitive: one fewer functional in degree 1, no torsion
    assert dm.ranks() == {0: ranks[0], 1: ranks[1] - 1, 2: ranks[2]}
    assert dm.degrees[1].torsion == []


def test_dual_two_sided_non_primitive():
    dm = dual_module(present(two_sided_fan(2, 2), FormalGroupLaw.additive(2)))
    assert dm.degrees[1].torsion == [2]


def test_dual_cobordism_functionals_kill_relations():
    p = present(two_sided_fan(2, 3), FormalGroupLaw.universal(2))
    dm = dual_module(p)
    n = 0
    for k, dd in dm.degrees.items():
        for f in dd.functionals:
            for r in p.relations:
                assert not dm.evaluate(k, f, r)
                n += 1
    assert n > 0
    d = dm.to_dict()
    assert set(d["degrees"]) == {"0", "1", "2"}
    assert d["caveats"]


def test_dual_ungraded_ktheory():
    p = present(P2, FormalGroupLaw.multiplicative(2, 1))
    dm = dual_module(p)
    assert list(dm.degrees) == [0]
    assert dm.degrees[0].free_rank == 3


def test_dual_noncomplete():
    p = present(affine_space(2), FormalGroupLaw.additive(2))
    with pytest.raises(FanError):
        dual_module(p, complete=False)
    dm = dual_module(p, complete=False, allow_noncomplete=True)
    assert NONCOMPLETE_CAVEAT in dm.caveats


def test_pairing_one_with_point():
    F = FormalGroupLaw.additive(2)
    top = tuple(P2.cones_of_dim(2)[0])
    assert kronecker_pairing(P2, F, Poly.const(1), top) == 1


def test_pairing_p2_upper_triangular():
    F = FormalGroupLaw.additive(2)
    r = Poly.var("r0")
    # rows 1, r0, r0^2 against [pt], [V_r0], [P2]
    gens = [tuple(P2.cones_of_dim(2)[0]), (0,), ()]
    m = [[kronecker_pairing(P2, F, c, g) for g in gens] for c in [Poly.const(1), r, r * r]]
    assert m == [[1, 0, 0], [0, 1, 0], [0, 0, 1]]


def test_pairing_p1_universal():
    F = FormalGroupLaw.universal(1)
    assert kronecker_pairing(P1, F, Poly.var("r0"), ()) == 1
    assert kronecker_pairing(P1, F, Poly.var("r1"), ()) == 1


@pytest.mark.parametrize("theory", ["chow", "cobordism"])
@pytest.mark.parametrize("name", ["P1", "P2", "P1xP1"])
def test_pairing_unimodular(theory, name):
    fan = smooth_complete_fans()[name]
    blocks = pairing_matrix(fan, theory_fgl(theory, fan.dim))
    assert is_unimodular(blocks)
    assert sum(len(b.cones) for b in blocks.values()) == len(
        simplify(nonequivariant_presentation(fan, FormalGroupLaw.additive(fan.dim))).generators
    )


def test_pairing_needs_complete():
    with pytest.raises(FanError):
        kronecker_pairing(affine_space(1), FormalGroupLaw.additive(1), Poly.const(1), ())


SMOOTH_POOL = [point_fan(), P1, P2]
POOL = SMOOTH_POOL + [two_sided_fan(2, 3), two_sided_fan(2, 2)]


@settings(max_examples=15, deadline=None)
@given(st.sampled_from(SMOOTH_POOL), st.sampled_from(POOL), st.sampled_from(["chow", "cobordism"]))
def test_tensor_symmetry_property(x, y, theory):
    F = theory_fgl(theory, x.dim + y.dim)
    a, b = present(x, F), present(y, F)
    assert compare_presentations(tensor_presentation(a, b), tensor_presentation(b, a))[0]
    assert check_kunneth(x, y, F)[0]


def test_kunneth_two_singular_factors_unsupported():
    # over a singular cone of one factor every lift is pt x (resolved other factor): birational only
    x = two_sided_fan(2, 2)
    with pytest.raises(UnsupportedDescent):
        check_kunneth(x, x, FormalGroupLaw.additive(4))


@settings(max_examples=15, deadline=None)
@given(st.integers(2, 6), st.integers(2, 6))
def test_dual_rank_drop_property(n, m):
    from math import gcd

    dm = dual_module(present(two_sided_fan(n, m), FormalGroupLaw.additive(2)))
    g = gcd(n, m)
    assert dm.ranks() == {0: 1, 1: 2, 2: 1}
    assert dm.degrees[1].torsion == ([g] if g > 1 else [])
