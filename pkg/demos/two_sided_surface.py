"""Descent on the two-sided surface fan: rays (1,0), (-1,n), (-1,0), (-1,-m).

Prints the resolution, the descent relations and the resulting presentation
in Chow, K-theory and cobordism. Run: python demos/two_sided_surface.py 2 3
"""

import sys

from toricobm.coeff import theory_fgl
from toricobm.descent import singular_presentation
from toricobm.fan import two_sided_fan


def main(n=2, m=3):
    fan = two_sided_fan(n, m)
    print(f"fan: {fan.to_json()}")
    for theory in ("chow", "ktheory", "cobordism"):
        p, plan = singular_presentation(fan, theory_fgl(theory, 2), with_plan=True)
        if theory == "chow" and plan:
            added = [r for r in plan.resolution.source.rays if r not in fan.rays]
            print(f"resolution adds {len(added)} rays: {added}")
            for r in plan.to_dict()["extra_relations"]:
                print("  " + r["text"])
        print()
        print(p.to_text())
    # in cobordism, the a11 term vanishes after p_n -> p_n + a11 * V(tau3,q_m)


if __name__ == "__main__":
    main(*(int(x) for x in sys.argv[1:3]))
