"""Fans in a lattice N = Z^n: parsing, faces, smoothness, subdivision, resolution.

Cones are sorted tuples of ray indices. Everything is exact; polyhedral
questions are answered by enumerating candidate facets from integer
kernels, which is plenty for desk-scale fans (a dozen rays per cone).
"""

import json
import random
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations
from math import prod

from . import intlinalg as il


class FanError(ValueError):
    """Malformed or inconsistent fan data."""


class FanFormatError(FanError):
    """Fan input that is not in the expected file format."""


# ---------------------------------------------------------------------------
# polyhedral helpers on generator lists


def _dot(a, b):
    return sum(x * y for x, y in zip(a, b))


def _rank(vectors):
    return il.rank([list(v) for v in vectors]) if vectors else 0


@lru_cache(maxsize=1 << 14)
def cone_facets(gens):
    """Facets of the cone spanned by ``gens`` (a tuple of integer tuples).

    Returns ``(dim, facets)`` where each facet is ``(index_set, normal)``
    with ``normal`` nonnegative on every generator and zero exactly on the
    facet's generators. ``facets`` is None when the cone is not pointed.
    """
    if not gens:
        return 0, ()
    n = len(gens[0])
    d = _rank(gens)
    if d == 0:
        return 0, ()
    found = {}
    for sub in combinations(range(len(gens)), d - 1):
        rows = [list(gens[i]) for i in sub]
        if d > 1 and _rank(rows) != d - 1:
            continue
        kern = il.kernel(rows, n) if rows else il.identity(n)
        normal = None
        for k in kern:
            vals = [_dot(k, g) for g in gens]
            if any(vals):
                normal, pairing = k, vals
                break
        if normal is None:
            continue
        if all(v >= 0 for v in pairing):
            pass
        elif all(v <= 0 for v in pairing):
            normal = [-x for x in normal]
            pairing = [-v for v in pairing]
        else:
            continue
        idx = frozenset(i for i, v in enumerate(pairing) if v == 0)
        if idx not in found:
            found[idx] = tuple(normal)
    if not found:
        return d, None
    return d, tuple(sorted(found.items(), key=lambda kv: sorted(kv[0])))


def cone_faces(gens):
    """All faces of cone(gens) as frozensets of generator indices.

    Raises FanError if the cone is not strictly convex.
    """
    gens = tuple(tuple(g) for g in gens)
    out = set()

    def rec(idx):
        if idx in out:
            return
        out.add(idx)
        sub = tuple(gens[i] for i in sorted(idx))
        d, facets = cone_facets(sub)
        if d == 0:
            return
        if facets is None:
            raise FanError("cone is not strictly convex")
        order = sorted(idx)
        for f, _ in facets:
            rec(frozenset(order[i] for i in f))

    rec(frozenset(range(len(gens))))
    out.add(frozenset())
    return out


def extreme_generators(gens):
    """Indices of generators spanning extreme rays of cone(gens)."""
    gens = tuple(tuple(g) for g in gens)
    d, facets = cone_facets(gens)
    if d == 0:
        return []
    if facets is None:
        raise FanError("cone is not strictly convex")
    if d == 1:
        return list(range(len(gens)))
    out = []
    for i in range(len(gens)):
        on = [f for f, _ in facets if i in f]
        common = set(range(len(gens)))
        for f in on:
            common &= f
        if _rank([gens[j] for j in common]) == 1:
            out.append(i)
    return out


def canonical_cone(gens):
    """Frozenset of primitive extreme ray vectors: equal iff the cones are equal."""
    gens = [tuple(g) for g in gens if any(g)]
    if not gens:
        return frozenset()
    return frozenset(tuple(il.primitive(list(gens[i]))) for i in extreme_generators(gens))


def annihilator(vectors, n):
    """Integer basis of the saturated lattice of forms vanishing on ``vectors``."""
    if not vectors:
        return il.identity(n)
    return il.kernel([list(v) for v in vectors], n)


def saturated_span(vectors, n):
    """Integer basis of span(vectors) intersected with Z^n."""
    ann = annihilator(vectors, n)
    if not ann:
        return il.identity(n)
    return il.kernel(ann, n)


# ---------------------------------------------------------------------------
# the fan


class Fan:
    """A rational polyhedral fan given by its maximal cones.

    ``rays`` are primitive integer tuples, ``cones`` lists every cone
    (faces included) as a sorted tuple of ray indices, ordered by
    dimension and then lexicographically. Instances are treated as
    immutable.
    """

    def __init__(self, dim, rays, cones, check=True, names=None):
        self.dim = int(dim)
        rays = [tuple(int(x) for x in r) for r in rays]
        for r in rays:
            if len(r) != self.dim:
                raise FanError(f"ray {list(r)} has length {len(r)}, expected {self.dim}")
            if not any(r):
                raise FanError("zero vector is not a ray")
        # normalize to primitive and merge duplicates
        uniq, remap = [], {}
        for i, r in enumerate(rays):
            p = tuple(il.primitive(list(r)))
            if p in uniq:
                remap[i] = uniq.index(p)
            else:
                remap[i] = len(uniq)
                uniq.append(p)
        self.rays = tuple(uniq)
        if names is not None:
            if len(names) != len(rays) or len(uniq) != len(rays):
                raise FanError("names must match the rays one to one")
            names = tuple(str(x) for x in names)
        self.names = names
        listed = []
        for c in cones:
            cc = []
            for i in c:
                if not isinstance(i, int) or i < 0 or i >= len(rays):
                    raise FanError(f"cone {list(c)} refers to a missing ray")
                cc.append(remap[i])
            listed.append(tuple(sorted(set(cc))))
        self._dim_cache = {}
        all_cones = set()
        for c in listed:
            gens = [self.rays[i] for i in c]
            try:
                faces = cone_faces(gens)
            except FanError as e:
                raise FanError(f"cone {list(c)}: {e}") from None
            if check:
                for k in range(len(c)):
                    if frozenset([k]) not in faces:
                        raise FanError(f"ray {c[k]} is not an extreme ray of cone {list(c)}")
            for f in faces:
                all_cones.add(tuple(sorted(c[i] for i in f)))
        all_cones.add(())
        used = {i for c in all_cones for i in c}
        if check and len(used) != len(self.rays):
            missing = sorted(set(range(len(self.rays))) - used)
            raise FanError(f"rays {missing} are not in any cone")
        self.cones = tuple(sorted(all_cones, key=lambda c: (self.cone_dim(c), c)))
        self.cone_set = frozenset(self.cones)
        maximal = [
            c for c in self.cones
            if not any(c != d and set(c) <= set(d) for d in self.cones)
        ]
        self.maximal = tuple(maximal)
        self._hrep = {}
        if check:
            self._check_intersections()

    # -- basic queries ---------------------------------------------------
    def __eq__(self, other):
        return (
            isinstance(other, Fan)
            and self.dim == other.dim
            and self.rays == other.rays
            and self.cone_set == other.cone_set
        )

    def __hash__(self):
        return hash((self.dim, self.rays, self.cone_set))

    def __repr__(self):
        return f"Fan(dim={self.dim}, rays={len(self.rays)}, cones={len(self.cones)})"

    def cone_dim(self, cone):
        cone = tuple(cone)
        if cone not in self._dim_cache:
            self._dim_cache[cone] = _rank([self.rays[i] for i in cone])
        return self._dim_cache[cone]

    def cones_of_dim(self, k):
        return [c for c in self.cones if self.cone_dim(c) == k]

    def is_cone(self, rays):
        return tuple(sorted(set(rays))) in self.cone_set

    def is_simplicial(self, cone):
        return self.cone_dim(cone) == len(cone)

    def f_vector(self):
        out = [0] * (self.dim + 1)
        for c in self.cones:
            out[self.cone_dim(c)] += 1
        return out

    def star(self, cone):
        """Cones containing ``cone``."""
        s = set(cone)
        return [c for c in self.cones if s <= set(c)]

    def facets_of(self, cone):
        d = self.cone_dim(cone)
        s = set(cone)
        return [c for c in self.cones if set(c) < s and self.cone_dim(c) == d - 1]

    def vector(self, cone):
        """A point in the relative interior: the sum of the ray generators."""
        v = [0] * self.dim
        for i in cone:
            for k, x in enumerate(self.rays[i]):
                v[k] += x
        return tuple(v)

    # -- membership ------------------------------------------------------
    def _h(self, cone):
        if cone not in self._hrep:
            gens = tuple(self.rays[i] for i in cone)
            ann = annihilator(gens, self.dim)
            _, facets = cone_facets(gens)
            normals = [nm for _, nm in (facets or ())]
            self._hrep[cone] = (ann, normals)
        return self._hrep[cone]

    def cone_contains(self, cone, p):
        ann, normals = self._h(tuple(cone))
        if any(_dot(a, p) for a in ann):
            return False
        return all(_dot(nm, p) >= 0 for nm in normals)

    def minimal_cone_containing(self, p):
        """The unique cone whose relative interior contains ``p``, or None."""
        p = tuple(p)
        if not any(p):
            return ()
        for m in self.maximal:
            if self.cone_contains(m, p):
                faces = [c for c in self.cones if set(c) <= set(m)]
                for c in faces:  # already ordered by dimension
                    if self.cone_contains(c, p):
                        return c
        return None

    def in_support(self, p):
        return self.minimal_cone_containing(p) is not None

    def quotient_map(self, cone):
        """Rows of a surjection N -> N / N_cone (forms vanishing on the cone)."""
        return annihilator([self.rays[i] for i in cone], self.dim)

    def quotient_star(self, cone):
        """``{canonical image cone: cone}`` for the star of ``cone`` in N / N_cone."""
        q = self.quotient_map(cone)
        s = set(cone)
        out = {}
        for c in self.star(cone):
            imgs = [tuple(_dot(row, self.rays[i]) for row in q) for i in c if i not in s]
            out[canonical_cone(imgs)] = c
        return out

    # -- checks ------------------------------------------------------------
    def _check_intersections(self):
        for a, b in combinations(self.maximal, 2):
            common = tuple(sorted(set(a) & set(b)))
            if common not in self.cone_set:
                raise FanError(f"cones {list(a)} and {list(b)} meet outside a common face")
            for r in _intersection_rays(self, a, b):
                if not self.cone_contains(common, r):
                    raise FanError(
                        f"cones {list(a)} and {list(b)} overlap beyond their common face"
                    )

    # -- serialization -----------------------------------------------------
    def ray_name(self, i):
        return self.names[i] if self.names else f"r{i}"

    def to_dict(self):
        out = {
            "dim": self.dim,
            "rays": [list(r) for r in self.rays],
            "cones": [list(c) for c in self.maximal],
        }
        if self.names:
            out["names"] = list(self.names)
        return out

    def to_json(self):
        return json.dumps(self.to_dict(), sort_keys=True)


def _intersection_rays(fan, a, b):
    """Extreme rays of cone(a) & cone(b), from their H-representations."""
    n = fan.dim
    eqs, ineqs = [], []
    for c in (a, b):
        ann, normals = fan._h(c)
        eqs += [list(x) for x in ann]
        ineqs += [list(x) for x in normals]
    rows = eqs + ineqs
    out = []
    base_rank = _rank(eqs) if eqs else 0
    need = n - 1
    if base_rank > need:
        return out
    for sub in combinations(range(len(ineqs)), need - base_rank):
        tight = eqs + [ineqs[i] for i in sub]
        if _rank(tight) != need:
            continue
        ker = il.kernel(tight, n)
        if len(ker) != 1:
            continue
        for u in (ker[0], [-x for x in ker[0]]):
            if all(_dot(r, u) == 0 for r in eqs) and all(_dot(r, u) >= 0 for r in ineqs):
                out.append(tuple(u))
    return out


def parse_fan(text):
    """Parse the JSON fan format ``{"dim", "rays", "cones"}`` (cones = maximal cones)."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise FanFormatError(f"invalid JSON: {e.msg} at line {e.lineno}") from None
    return fan_from_dict(data)


def fan_from_dict(data):
    if not isinstance(data, dict):
        raise FanFormatError("fan must be a JSON object")
    extra = set(data) - {"dim", "rays", "cones", "names"}
    if extra:
        raise FanFormatError(f"unknown keys: {sorted(extra)}")
    missing = {"dim", "rays", "cones"} - set(data)
    if missing:
        raise FanFormatError(f"missing keys: {sorted(missing)}")
    dim, rays, cones = data["dim"], data["rays"], data["cones"]
    if not isinstance(dim, int) or isinstance(dim, bool) or dim < 0:
        raise FanFormatError("dim must be a nonnegative integer")
    if not isinstance(rays, list) or not all(
        isinstance(r, list) and all(isinstance(x, int) and not isinstance(x, bool) for x in r)
        for r in rays
    ):
        raise FanFormatError("rays must be a list of integer lists")
    if not isinstance(cones, list) or not all(isinstance(c, list) for c in cones):
        raise FanFormatError("cones must be a list of index lists")
    names = data.get("names")
    if names is not None and (
        not isinstance(names, list) or not all(isinstance(x, str) for x in names)
    ):
        raise FanFormatError("names must be a list of strings")
    return Fan(dim, rays, cones, names=names)


# ---------------------------------------------------------------------------
# smoothness and completeness


def cone_is_smooth(fan, cone):
    """Generators extend to a Z-basis: simplicial with all invariant factors 1."""
    if not cone:
        return True
    if not fan.is_simplicial(cone):
        return False
    return all(d == 1 for d in il.invariant_factors([list(fan.rays[i]) for i in cone]))


def multiplicity(fan, cone):
    """Index of the sublattice spanned by a simplicial cone in its saturation."""
    if not cone:
        return 1
    return prod(il.invariant_factors([list(fan.rays[i]) for i in cone]))


def is_smooth(fan):
    """Return ``(all_smooth, {cone: smooth})``."""
    per = {c: cone_is_smooth(fan, c) for c in fan.cones}
    return all(per.values()), per


def is_complete(fan):
    """Pure of full dimension, every facet in exactly two maximal cones, connected."""
    n = fan.dim
    if n == 0:
        return True
    if any(fan.cone_dim(c) != n for c in fan.maximal):
        return False
    owners = {}
    for c in fan.maximal:
        for f in fan.facets_of(c):
            owners.setdefault(f, []).append(c)
    for f in fan.cones_of_dim(n - 1):
        if len(owners.get(f, [])) != 2:
            return False
    seen = {fan.maximal[0]}
    todo = [fan.maximal[0]]
    while todo:
        c = todo.pop()
        for f in fan.facets_of(c):
            for d in owners[f]:
                if d not in seen:
                    seen.add(d)
                    todo.append(d)
    return len(seen) == len(fan.maximal)


# ---------------------------------------------------------------------------
# subdivisions


@dataclass
class SubdivisionMap:
    """A refinement ``source -> target`` with the minimal-containing-cone map."""

    source: Fan
    target: Fan
    cone_image: dict = field(default_factory=dict)

    @classmethod
    def build(cls, source, target):
        img = {}
        for c in source.cones:
            t = target.minimal_cone_containing(source.vector(c))
            if t is None:
                raise FanError(f"cone {list(c)} is not inside the target support")
            img[c] = t
        return cls(source, target, img)

    def lifts(self, target_cone):
        return [c for c, t in self.cone_image.items() if t == tuple(target_cone)]

    def to_dict(self):
        return {
            "source": self.source.to_dict(),
            "target": self.target.to_dict(),
            "cone_image": [[list(c), list(t)] for c, t in sorted(self.cone_image.items())],
        }


def identity_map(fan):
    return SubdivisionMap(fan, fan, {c: c for c in fan.cones})


def star_subdivide(fan, new_ray, target=None):
    """Star subdivision of ``fan`` at a primitive vector in its support.

    Returns ``(new_fan, SubdivisionMap)``; the map goes to ``target`` (default
    ``fan``).
    """
    v = tuple(int(x) for x in new_ray)
    if len(v) != fan.dim:
        raise FanError("ray dimension mismatch")
    if not any(v):
        raise FanError("zero vector is not a ray")
    if tuple(il.primitive(list(v))) != v:
        raise FanError(f"{list(v)} is not primitive")
    if v in fan.rays:
        raise FanError(f"{list(v)} is already a ray")
    tau = fan.minimal_cone_containing(v)
    if tau is None:
        raise FanError(f"{list(v)} is outside the support of the fan")
    new_fan = _subdivide_at(fan, v, tau)
    return new_fan, SubdivisionMap.build(new_fan, target or fan)


def _subdivide_at(fan, v, tau):
    rays = list(fan.rays) + [v]
    k = len(rays) - 1
    st = set(tau)
    maximal = []
    for c in fan.maximal:
        if st <= set(c):
            for f in fan.facets_of(c):
                if not st <= set(f):
                    maximal.append(tuple(sorted(f + (k,))))
        else:
            maximal.append(c)
    return Fan(fan.dim, rays, maximal, check=False)


def _pull(fan, r):
    """Pulling refinement at an existing ray ``r``."""
    maximal = []
    for c in fan.maximal:
        if r in c and not fan.is_simplicial(c):
            maximal += _pull_cone(fan, c, r)
        else:
            maximal.append(c)
    return Fan(fan.dim, fan.rays, maximal, check=False)


def _pull_cone(fan, c, r):
    # non-simplicial facets stay so and are pulled in a later round
    return [tuple(sorted(f + (r,))) for f in fan.facets_of(c) if r not in f]


def parallelepiped_points(fan, cone):
    """Nonzero lattice points ``sum l_i v_i`` with ``0 <= l_i < 1`` for a simplicial cone.

    Returns a list of ``(lambda_sum, point)``.
    """
    from fractions import Fraction

    gens = [list(fan.rays[i]) for i in cone]
    k = len(gens)
    basis = saturated_span(gens, fan.dim)
    # coordinates of the generators in the saturated basis
    c = []
    for g in gens:
        x = il.solve(il.transpose(basis), g, len(basis))
        c.append(x)
    s, u, w = il.snf(c)
    diag = [s[i][i] for i in range(k)]
    winv = _inverse(w)
    cinv = _rational_inverse(c)
    pts = {}

    def rec(i, z):
        if i == k:
            y = il.vecmat(z, winv)
            lam = [sum(Fraction(y[a]) * cinv[a][b] for a in range(k)) for b in range(k)]
            lam = [x - (x.numerator // x.denominator) for x in lam]
            if not any(lam):
                return
            p = [0] * fan.dim
            for lb, g in zip(lam, gens):
                for j in range(fan.dim):
                    p[j] += lb * g[j]
            p = tuple(int(x) for x in p)
            pts[p] = sum(lam)
            return
        for t in range(diag[i]):
            rec(i + 1, z + [t])

    rec(0, [])
    return sorted((lsum, p) for p, lsum in pts.items())


def _inverse(m):
    h, u = il.hnf(m)
    return u


def _rational_inverse(m):
    from fractions import Fraction

    k = len(m)
    a = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(k)] for i, row in enumerate(m)]
    for col in range(k):
        piv = next(r for r in range(col, k) if a[r][col] != 0)
        a[col], a[piv] = a[piv], a[col]
        p = a[col][col]
        a[col] = [x / p for x in a[col]]
        for r in range(k):
            if r != col and a[r][col] != 0:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return [row[k:] for row in a]


def resolve(fan, seed=None):
    """A smooth refinement by pulling triangulation and star subdivisions.

    Non-simplicial cones are pulled at their lexicographically smallest ray;
    then the lowest-dimensional non-smooth cone (ties lexicographic on ray
    vectors) is subdivided at the fundamental-parallelepiped point with the
    smallest barycentric sum (ties lexicographic). With ``seed`` set the
    choices are randomized instead, giving other valid resolutions.
    """
    rng = random.Random(seed) if seed is not None else None
    cur = fan
    while True:
        bad = [c for c in cur.cones if not cur.is_simplicial(c)]
        if not bad:
            break
        bad.sort(key=lambda c: (cur.cone_dim(c), sorted(cur.rays[i] for i in c)))
        c = bad[0]
        if rng is None:
            r = min(c, key=lambda i: cur.rays[i])
        else:
            r = rng.choice(sorted(c))
        cur = _pull(cur, r)
    while True:
        bad = [c for c in cur.cones if not cone_is_smooth(cur, c)]
        if not bad:
            break
        bad.sort(key=lambda c: (cur.cone_dim(c), sorted(cur.rays[i] for i in c)))
        c = bad[0]
        pts = parallelepiped_points(cur, c)
        if rng is None:
            best = min(pts, key=lambda t: (t[0], t[1]))[1]
        else:
            best = rng.choice(pts)[1]
        best = tuple(il.primitive(list(best)))
        tau = cur.minimal_cone_containing(best)
        cur = _subdivide_at(cur, best, tau)
    if cur is fan:
        return fan, identity_map(fan)
    return cur, SubdivisionMap.build(cur, fan)


# ---------------------------------------------------------------------------
# classification of orbit-closure maps


@dataclass(frozen=True)
class ConeMapClass:
    """How ``V(source cone) -> V(image cone)`` looks.

    ``kind`` is one of ``isomorphism``, ``birational`` (same dimension, different
    star), ``fibration`` (fiber = product of P^d for d in ``fiber``) or
    ``unsupported``.
    """

    kind: str
    image: tuple
    fiber: tuple = ()
    reason: str = ""

    def to_dict(self):
        out = {"kind": self.kind, "image": list(self.image)}
        if self.kind == "fibration":
            out["fiber"] = list(self.fiber)
        if self.reason:
            out["reason"] = self.reason
        return out


def classify_cone_map(smap, cone):
    cone = tuple(sorted(cone))
    src, tgt = smap.source, smap.target
    if cone not in src.cone_set:
        raise FanError(f"{list(cone)} is not a cone of the source fan")
    image = smap.cone_image[cone]
    ds, dt = src.cone_dim(cone), tgt.cone_dim(image)
    if ds == dt:
        a = set(src.quotient_star(cone))
        # N_cone == N_image since the spans agree; use the same coordinates
        q = src.quotient_map(cone)
        b = set()
        si = set(image)
        for c in tgt.star(image):
            imgs = [tuple(_dot(row, tgt.rays[i]) for row in q) for i in c if i not in si]
            b.add(canonical_cone(imgs))
        if a == b:
            return ConeMapClass("isomorphism", image)
        return ConeMapClass("birational", image, reason="stars differ")
    return _classify_fibration(smap, cone, image)


def _classify_fibration(smap, cone, image):
    src, tgt = smap.source, smap.target
    q = src.quotient_map(cone)
    s = set(cone)
    k = tgt.cone_dim(image) - src.cone_dim(cone)

    def proj(i):
        return tuple(_dot(row, src.rays[i]) for row in q)

    star = src.star(cone)
    neighbours = sorted({i for c in star for i in c if i not in s})
    fiber_rays = [i for i in neighbours if smap.cone_image[tuple(sorted(s | {i}))] == image]
    horiz_rays = [i for i in neighbours if i not in fiber_rays]
    if _rank([proj(i) for i in fiber_rays]) != k:
        return ConeMapClass("unsupported", image, reason="fiber rays do not span the fiber")
    groups = _simplex_groups([proj(i) for i in fiber_rays])
    if groups is None:
        return ConeMapClass("unsupported", image, reason="fiber is not a product of projective spaces")
    groups = [[fiber_rays[j] for j in g] for g in groups]
    # expected fiber cones: omit one ray from every group
    expected = set()

    def build(gi, acc):
        if gi == len(groups):
            expected.add(frozenset(acc))
            return
        for omit in groups[gi]:
            build(gi + 1, acc + [x for x in groups[gi] if x != omit])

    build(0, [])
    fset = set(fiber_rays)
    actual_fiber_max = set()
    horiz_cones = set()
    for c in star:
        rest = set(c) - s
        f, h = rest & fset, rest - fset
        if not h and len(f) == k:
            actual_fiber_max.add(frozenset(f))
        if not f:
            horiz_cones.add(frozenset(h))
    if actual_fiber_max != expected:
        return ConeMapClass("unsupported", image, reason="fiber fan is not a product of simplex fans")
    # star must be the full product of fiber faces and horizontal cones
    fiber_faces = set()
    for m in expected:
        for r in range(len(m) + 1):
            for sub in combinations(sorted(m), r):
                fiber_faces.add(frozenset(sub))
    product = {frozenset(s | f | h) for f in fiber_faces for h in horiz_cones}
    if product != {frozenset(c) for c in star}:
        return ConeMapClass("unsupported", image, reason="star does not split as a product")
    if horiz_rays:
        allv = [proj(i) for i in fiber_rays + horiz_rays]
        hv = [proj(i) for i in horiz_rays]
        if _rank(hv) + k != _rank(allv) or _rank(hv) != tgt.dim - tgt.cone_dim(image):
            return ConeMapClass("unsupported", image, reason="twisted fibration")
        qt = tgt.quotient_map(image)
        base = {}
        ti = set(image)
        for c in tgt.star(image):
            base[canonical_cone(
                [tuple(_dot(row, tgt.rays[i]) for row in qt) for i in c if i not in ti]
            )] = c
        mine = set()
        for h in horiz_cones:
            imgs = [tuple(_dot(row, src.rays[i]) for row in qt) for i in h]
            for v in imgs:
                if tuple(il.primitive(list(v))) != v:
                    return ConeMapClass("unsupported", image, reason="base map is not unimodular")
            mine.add(canonical_cone(imgs))
        if mine != set(base):
            return ConeMapClass("unsupported", image, reason="base star differs")
    return ConeMapClass("fibration", image, fiber=tuple(sorted(len(g) - 1 for g in groups)))


def _simplex_groups(vectors):
    """Split vectors into groups, each summing to zero with no other relations.

    Returns index groups if the integer relations are exactly spanned by the
    group indicators, else None.
    """
    m = len(vectors)
    if m == 0:
        return []
    n = len(vectors[0])
    kern = il.left_kernel([list(v) for v in vectors], m)
    parent = list(range(m))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    covered = set()
    for k in kern:
        supp = [i for i, x in enumerate(k) if x]
        covered |= set(supp)
        for i in supp[1:]:
            parent[find(i)] = find(supp[0])
    if len(covered) != m:
        return None
    groups = {}
    for i in range(m):
        groups.setdefault(find(i), []).append(i)
    groups = sorted(groups.values())
    if len(groups) != len(kern):
        return None
    for g in groups:
        if any(sum(vectors[i][j] for i in g) for j in range(n)):
            return None
    return groups


# ---------------------------------------------------------------------------
# standard fans


def projective_space(n):
    rays = [[int(i == j) for j in range(n)] for i in range(n)] + [[-1] * n]
    cones = [[j for j in range(n + 1) if j != i] for i in range(n + 1)]
    return Fan(n, rays, cones)


def affine_space(n):
    rays = [[int(i == j) for j in range(n)] for i in range(n)]
    return Fan(n, rays, [list(range(n))])


def point_fan():
    return Fan(0, [], [[]])


def torus_fan(n):
    return Fan(n, [], [[]])


def product_fan(a, b):
    """Fan of X_a x X_b in N_a + N_b; rays of ``a`` come first."""
    na, nb = a.dim, b.dim
    rays = [list(r) + [0] * nb for r in a.rays] + [[0] * na + list(r) for r in b.rays]
    off = len(a.rays)
    cones = [list(c) + [off + i for i in d] for c in a.maximal for d in b.maximal]
    return Fan(na + nb, rays, cones, check=False)


def hirzebruch(a):
    return Fan(2, [[1, 0], [0, 1], [-1, a], [0, -1]], [[0, 1], [1, 2], [2, 3], [3, 0]])


def two_sided_fan(n, m):
    """Complete fan on the rays (1,0), (-1,n), (-1,0), (-1,-m)."""
    rays = [[1, 0], [-1, n], [-1, 0], [-1, -m]]
    names = ["tau1", "p_n", "tau3", "q_m"]
    return Fan(2, rays, [[0, 1], [1, 2], [2, 3], [3, 0]], names=names)


def cube_fan():
    """Fan over the faces of the cube with vertices (+-1, +-1, +-1).

    Coordinates are taken in the lattice generated by the vertices, with
    basis (1,1,1), (1,1,-1), (1,-1,1).
    """
    basis = [(1, 1, 1), (1, 1, -1), (1, -1, 1)]
    verts = [(x, y, z) for x in (1, -1) for y in (1, -1) for z in (1, -1)]
    bt = il.transpose([list(b) for b in basis])
    rays = [il.solve(bt, list(v), 3) for v in verts]
    cones = []
    for axis in range(3):
        for sign in (1, -1):
            cones.append([i for i, v in enumerate(verts) if v[axis] == sign])
    return Fan(3, rays, cones)
