"""Kunneth checks and Kronecker duality on small examples."""

from toricobm.coeff import FormalGroupLaw, theory_fgl
from toricobm.descent import singular_presentation
from toricobm.duality import check_kunneth, dual_module, is_unimodular, pairing_matrix
from toricobm.fan import projective_space, two_sided_fan


def main():
    p1, p2 = projective_space(1), projective_space(2)
    surface = two_sided_fan(2, 3)
    for name, x, y in [("P1 x P1", p1, p1), ("P2 x P1", p2, p1), ("surface x P1", surface, p1)]:
        for theory in ("chow", "ktheory", "cobordism"):
            ok, report = check_kunneth(x, y, theory_fgl(theory, x.dim + y.dim))
            ranks = [report[d]["product"]["free_rank"] for d in sorted(report)]
            print(f"{name:13s} {theory:9s} kunneth {'ok ' if ok else 'BAD'} ranks {ranks}")
    print()
    for name, fan in [("P1", p1), ("P2", p2)]:
        blocks = pairing_matrix(fan, FormalGroupLaw.universal(fan.dim))
        for d, b in sorted(blocks.items()):
            print(f"{name} degree {d}: {[str(m) for m in b.classes]} -> {b.matrix}")
        print(f"{name} unimodular: {is_unimodular(blocks)}")
    print()
    for nm in [(2, 3), (2, 2)]:
        dm = dual_module(singular_presentation(two_sided_fan(*nm), FormalGroupLaw.additive(2)))
        print(f"dual of surface {nm}: {dm.to_dict()['degrees']}")


if __name__ == "__main__":
    main()
