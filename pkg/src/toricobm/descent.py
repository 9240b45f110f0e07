"""Presentations of singular toric varieties through a toric resolution.

Present the smooth resolution, then add relations identifying classes of
orbit closures that map to the same orbit closure downstairs: isomorphic
ones are equal, and a closure fibred by a product of projective spaces over
the representative equals the fiber class times the representative.
"""

from dataclasses import dataclass, field
from math import prod

from .calculus import nonequivariant_presentation
from .fan import FanError, classify_cone_map, is_smooth, resolve
from .poly import Poly
from .presentation import Generator, ModulePresentation, label_name, simplify


class UnsupportedDescent(FanError):
    """A cone map outside the isomorphism / projective-fibration cases."""


@dataclass
class DescentPlan:
    resolution: object  # SubdivisionMap
    representative: dict  # target cone -> source cone
    classes: dict  # source cone -> ConeMapClass
    extra_relations: list = field(default_factory=list)  # (source cone, {source cone: Poly})

    def to_dict(self):
        src = self.resolution.source
        return {
            "resolution": self.resolution.to_dict(),
            "representatives": [
                [list(t), list(s)] for t, s in sorted(self.representative.items())
            ],
            "classes": [
                {"cone": list(c), **cls.to_dict()} for c, cls in sorted(self.classes.items())
            ],
            "extra_relations": [
                {
                    "cone": list(c),
                    "relation": [[list(k), v.to_json()] for k, v in sorted(r.items())],
                    "text": _relation_text(src, r),
                }
                for c, r in self.extra_relations
            ],
        }


def _relation_text(fan, r):
    parts = []
    for c in sorted(r):
        v = r[c]
        name = label_name(c, fan.names)
        if v == 1:
            parts.append(f"+ {name}")
        elif v == -1:
            parts.append(f"- {name}")
        elif " " in str(v):
            parts.append(f"+ ({v})*{name}")
        elif str(v).startswith("-"):
            parts.append(f"- {str(v)[1:]}*{name}")
        else:
            parts.append(f"+ {v}*{name}")
    text = " ".join(parts)
    if text.startswith("+ "):
        text = text[2:]
    return text + " = 0"


def build_plan(smap, fgl):
    """Representatives and descent relations for a resolution ``smap``.

    Representatives are the lexicographically smallest same-dimensional lift
    whose orbit closure maps isomorphically; a lift that is only birational
    is accepted when it is the only same-dimensional lift (then no relation
    among lifts is needed).
    """
    src, tgt = smap.source, smap.target
    if not is_smooth(src)[0]:
        raise FanError("resolution is not smooth")
    classes = {c: classify_cone_map(smap, c) for c in src.cones}
    reps = {}
    for t in tgt.cones:
        same = sorted(
            c for c in smap.lifts(t) if src.cone_dim(c) == tgt.cone_dim(t)
        )
        iso = [c for c in same if classes[c].kind == "isomorphism"]
        if iso:
            reps[t] = iso[0]
        elif len(same) == 1 and classes[same[0]].kind == "birational":
            reps[t] = same[0]
        else:
            raise UnsupportedDescent(
                f"no representative for cone {list(t)}: lifts {[list(c) for c in same]} "
                "are birational but not isomorphic"
            )
    rels = []
    for c in src.cones:
        cls = classes[c]
        rep = reps[cls.image]
        if c == rep:
            continue
        if cls.kind == "isomorphism":
            rels.append((c, {c: Poly.const(1), rep: Poly.const(-1)}))
        elif cls.kind == "fibration":
            coef = Poly.const(1)
            for d in cls.fiber:
                coef = fgl.reduce(coef.mul(fgl.pn_class(d), fgl.trunc(0)))
            rel = {c: Poly.const(1)}
            if coef:
                rel[rep] = -coef
            rels.append((c, rel))
        else:
            why = cls.reason or cls.kind
            raise UnsupportedDescent(f"cone {list(c)} over {list(cls.image)}: {why}")
    return DescentPlan(smap, reps, classes, rels)


def singular_presentation(fan, fgl, seed=None, with_plan=False):
    """Simplified presentation of ``B_*(X_fan)``; generators labelled by cones of ``fan``."""
    if is_smooth(fan)[0]:
        p = simplify(nonequivariant_presentation(fan, fgl))
        return (p, None) if with_plan else p
    resolved, smap = resolve(fan, seed)
    plan = build_plan(smap, fgl)
    base = nonequivariant_presentation(resolved, fgl)
    index = {g.label: i for i, g in enumerate(base.generators)}
    rep_of = {s: t for t, s in plan.representative.items()}
    gens = []
    for g in base.generators:
        if g.label in rep_of:
            t = rep_of[g.label]
            gens.append(Generator(t, g.degree, label_name(t, fan.names), keep=True))
        else:
            gens.append(Generator(("lift",) + g.label, g.degree, "~" + g.display()))
    rels = list(base.relations)
    for _, r in plan.extra_relations:
        rels.append({index[c]: v for c, v in r.items()})
    p = ModulePresentation(fgl, gens, rels, meta={"fan": fan.to_dict()})
    q = simplify(p)
    leftover = [g.display() for g in q.generators if not g.keep]
    if leftover:
        raise UnsupportedDescent(f"non-representative classes survived: {leftover}")
    q.generators = [Generator(g.label, g.degree, g.name) for g in q.generators]
    q = _sort_generators(q)
    return (q, plan) if with_plan else q


def _sort_generators(p):
    order = sorted(range(len(p.generators)), key=lambda i: (len(p.generators[i].label), p.generators[i].label))
    pos = {old: new for new, old in enumerate(order)}
    gens = [p.generators[i] for i in order]
    rels = [{pos[i]: c for i, c in r.items()} for r in p.relations]
    return p.copy(generators=gens, relations=rels)
