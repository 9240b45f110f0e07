"""The fan over the faces of the cube [-1,1]^3: a singular complete threefold.

Its homology is free but not symmetric: five classes in degree 2 and one
in degree 1, so Poincare duality fails.
"""

from collections import Counter

from toricobm.coeff import FormalGroupLaw
from toricobm.descent import singular_presentation
from toricobm.fan import cube_fan, resolve


def main():
    fan = cube_fan()
    g, smap = resolve(fan)
    print(f"cube fan: {len(fan.rays)} rays, {len(fan.maximal)} square cones")
    print(f"resolution: {len(g.rays)} rays, {len(g.maximal)} maximal cones")
    p, plan = singular_presentation(fan, FormalGroupLaw.universal(3), with_plan=True)
    kinds = Counter(c.kind for c in plan.classes.values())
    print("orbit-closure maps:", dict(sorted(kinds.items())))
    print(p.to_text())
    print("free:", p.is_free(), "ranks:", p.generator_ranks())


if __name__ == "__main__":
    main()
