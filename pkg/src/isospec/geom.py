"""Planar polygonal domains: exact measures, generators, and robust predicates.

Coordinates are dimensionless.  The outer loop of a domain is counterclockwise
(positive signed area) and every hole loop is clockwise.  Orientation tests use
a floating-point filter with an exact rational fallback, so validity decisions
never depend on coordinate scale.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import GenerationFailureError, InvalidDomainError, ParameterError

# Minimum pairwise separation enforced between sampled random points.
MIN_POINT_SEPARATION = 1e-6

# Total candidate-point budget for one random polygon before giving up.
MAX_CANDIDATE_POINTS = 10**6


# ---------------------------------------------------------------------------
# exact-sign predicates
# ---------------------------------------------------------------------------

def orientation(a, b, c) -> int:
    """Sign of the cross product (b-a) x (c-a).

    Returns +1 for a left turn, -1 for a right turn, 0 for collinear points.
    A floating-point filter decides the easy cases; near-degenerate inputs
    fall back to exact rational arithmetic, so the sign is always correct
    for double-precision coordinates.
    """
    t1 = (b[0] - a[0]) * (c[1] - a[1])
    t2 = (b[1] - a[1]) * (c[0] - a[0])
    det = t1 - t2
    # 4 rounding errors of at most one ulp each feed the filter bound
    err = 1e-15 * (abs(t1) + abs(t2))
    if det > err:
        return 1
    if det < -err:
        return -1
    return _orientation_exact(a, b, c)


def _orientation_exact(a, b, c) -> int:
    ax, ay = Fraction(float(a[0])), Fraction(float(a[1]))
    bx, by = Fraction(float(b[0])), Fraction(float(b[1]))
    cx, cy = Fraction(float(c[0])), Fraction(float(c[1]))
    det = (bx - ax) * (cy - ay) - (by - ay) * (cx - ax)
    if det > 0:
        return 1
    if det < 0:
        return -1
    return 0


def _on_segment(a, b, p) -> bool:
    """True iff p, known collinear with a-b, lies on the closed segment [a, b]."""
    return (min(a[0], b[0]) <= p[0] <= max(a[0], b[0])
            and min(a[1], b[1]) <= p[1] <= max(a[1], b[1]))


def segments_intersect(a1, a2, b1, b2) -> bool:
    """Closed-segment intersection test using exact orientation signs.

    Shared endpoints count as intersections; callers that allow adjacent
    polygon edges to touch must exclude those pairs themselves.
    """
    d1 = orientation(b1, b2, a1)
    d2 = orientation(b1, b2, a2)
    d3 = orientation(a1, a2, b1)
    d4 = orientation(a1, a2, b2)
    if ((d1 > 0 and d2 < 0) or (d1 < 0 and d2 > 0)) and \
       ((d3 > 0 and d4 < 0) or (d3 < 0 and d4 > 0)):
        return True
    if d1 == 0 and _on_segment(b1, b2, a1):
        return True
    if d2 == 0 and _on_segment(b1, b2, a2):
        return True
    if d3 == 0 and _on_segment(a1, a2, b1):
        return True
    if d4 == 0 and _on_segment(a1, a2, b2):
        return True
    return False


def point_in_loop(p, loop) -> int:
    """Even-odd location of a point relative to a closed loop.

    Returns 1 strictly inside, 0 on the boundary, -1 strictly outside.
    """
    m = len(loop)
    py = p[1]
    inside = False
    for k in range(m):
        a = loop[k]
        b = loop[(k + 1) % m]
        if orientation(a, b, p) == 0 and _on_segment(a, b, p):
            return 0
        if (a[1] > py) != (b[1] > py):
            o = orientation(a, b, p)
            if b[1] > a[1]:
                if o > 0:
                    inside = not inside
            else:
                if o < 0:
                    inside = not inside
    return 1 if inside else -1


def _segments_overlap_at_shared(v, x, y) -> bool:
    """For segments (v, x) and (v, y) sharing endpoint v: True iff they overlap
    along a common line beyond v."""
    if orientation(v, x, y) != 0:
        return False
    dot = (x[0] - v[0]) * (y[0] - v[0]) + (x[1] - v[1]) * (y[1] - v[1])
    return dot > 0


# ---------------------------------------------------------------------------
# domain type
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PlanarDomain:
    """Polygon with optional holes.

    ``outer`` is an (m, 2) array in counterclockwise order; every entry of
    ``holes`` is clockwise, strictly inside the outer loop and pairwise
    disjoint.  ``provenance`` records the generator name, its parameters and
    the seed, which flow into CSV output.
    """

    outer: np.ndarray
    holes: tuple = ()
    label: str = ""
    provenance: dict = field(default_factory=dict)

    @property
    def n_holes(self) -> int:
        return len(self.holes)

    def loops(self):
        """Outer loop followed by all hole loops."""
        return (self.outer, *self.holes)

    def all_vertices(self) -> np.ndarray:
        return np.vstack(self.loops())

    def diameter(self) -> float:
        pts = self.all_vertices()
        d2 = 0.0
        for i in range(len(pts)):
            diff = pts[i + 1:] - pts[i]
            if len(diff):
                d2 = max(d2, float(np.max(np.sum(diff * diff, axis=1))))
        return math.sqrt(d2)


def _loop_signed_area(loop) -> float:
    x = loop[:, 0]
    y = loop[:, 1]
    return 0.5 * float(np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y))


def _loop_perimeter(loop) -> float:
    d = np.roll(loop, -1, axis=0) - loop
    return float(np.sum(np.hypot(d[:, 0], d[:, 1])))


def _loop_is_simple(loop) -> bool:
    m = len(loop)
    for i in range(m):
        a1, a2 = loop[i], loop[(i + 1) % m]
        for j in range(i + 1, m):
            b1, b2 = loop[j], loop[(j + 1) % m]
            if j == i + 1:
                # consecutive edges share a2 == b1
                if _segments_overlap_at_shared(a2, a1, b2):
                    return False
            elif i == 0 and j == m - 1:
                # closing edge shares b2 == a1
                if _segments_overlap_at_shared(a1, a2, b1):
                    return False
            else:
                if segments_intersect(a1, a2, b1, b2):
                    return False
    return True


def _loop_vertices_distinct(loop) -> bool:
    seen = set(map(tuple, np.asarray(loop)))
    return len(seen) == len(loop)


def validate_domain(domain: PlanarDomain) -> None:
    """Check every PlanarDomain invariant; raise InvalidDomainError on failure."""
    outer = domain.outer
    if outer.ndim != 2 or outer.shape[1] != 2 or len(outer) < 3:
        raise InvalidDomainError("outer loop needs at least 3 planar vertices")
    if not np.all(np.isfinite(outer)):
        raise InvalidDomainError("outer loop has non-finite coordinates")
    if _loop_signed_area(outer) <= 0.0:
        raise InvalidDomainError("outer loop must be counterclockwise with positive area")
    if not _loop_vertices_distinct(outer):
        raise InvalidDomainError("outer loop has duplicate vertices")
    if not _loop_is_simple(outer):
        raise InvalidDomainError("outer loop is self-intersecting")

    for h, hole in enumerate(domain.holes):
        if hole.ndim != 2 or hole.shape[1] != 2 or len(hole) < 3:
            raise InvalidDomainError(f"hole {h} needs at least 3 planar vertices")
        if not np.all(np.isfinite(hole)):
            raise InvalidDomainError(f"hole {h} has non-finite coordinates")
        if _loop_signed_area(hole) >= 0.0:
            raise InvalidDomainError(f"hole {h} must be clockwise")
        if not _loop_vertices_distinct(hole):
            raise InvalidDomainError(f"hole {h} has duplicate vertices")
        if not _loop_is_simple(hole):
            raise InvalidDomainError(f"hole {h} is self-intersecting")
        for v in hole:
            if point_in_loop(v, outer) != 1:
                raise InvalidDomainError(f"hole {h} is not strictly inside the outer loop")
        for i in range(len(hole)):
            p1, p2 = hole[i], hole[(i + 1) % len(hole)]
            for j in range(len(outer)):
                q1, q2 = outer[j], outer[(j + 1) % len(outer)]
                if segments_intersect(p1, p2, q1, q2):
                    raise InvalidDomainError(f"hole {h} touches the outer loop")

    for a in range(len(domain.holes)):
        for b in range(a + 1, len(domain.holes)):
            ha, hb = domain.holes[a], domain.holes[b]
            if point_in_loop(hb[0], ha) != -1 or point_in_loop(ha[0], hb) != -1:
                raise InvalidDomainError(f"holes {a} and {b} are nested or touching")
            for i in range(len(ha)):
                p1, p2 = ha[i], ha[(i + 1) % len(ha)]
                for j in range(len(hb)):
                    q1, q2 = hb[j], hb[(j + 1) % len(hb)]
                    if segments_intersect(p1, p2, q1, q2):
                        raise InvalidDomainError(f"holes {a} and {b} intersect")


def make_domain(outer, holes=(), label="", provenance=None, validate=True) -> PlanarDomain:
    """Build a PlanarDomain from raw vertex lists, validating the invariants."""
    outer = np.ascontiguousarray(np.asarray(outer, dtype=np.float64))
    holes = tuple(np.ascontiguousarray(np.asarray(h, dtype=np.float64)) for h in holes)
    for arr in (outer, *holes):
        arr.flags.writeable = False
    dom = PlanarDomain(outer=outer, holes=holes, label=label,
                       provenance=dict(provenance or {}))
    if validate:
        validate_domain(dom)
    return dom


# ---------------------------------------------------------------------------
# measures
# ---------------------------------------------------------------------------

def area(domain: PlanarDomain) -> float:
    """Area enclosed by the outer loop minus the area of the holes."""
    a = _loop_signed_area(domain.outer)
    if a <= 0.0:
        raise InvalidDomainError("outer loop has non-positive signed area")
    for hole in domain.holes:
        a += _loop_signed_area(hole)  # holes are clockwise: negative contribution
    if a <= 0.0:
        raise InvalidDomainError("holes exhaust the outer loop")
    return a


def perimeter(domain: PlanarDomain) -> float:
    """Total boundary length: outer loop plus every hole loop."""
    return sum(_loop_perimeter(loop) for loop in domain.loops())


def isoperimetric_ratio(domain: PlanarDomain) -> float:
    """perimeter(domain)**2 / area(domain); scale invariant."""
    return perimeter(domain) ** 2 / area(domain)


def scaled(domain: PlanarDomain, factor: float) -> PlanarDomain:
    """Copy of the domain with every coordinate multiplied by ``factor`` > 0."""
    if not (factor > 0.0):
        raise ParameterError("scale factor must be positive")
    return make_domain(domain.outer * factor,
                       [h * factor for h in domain.holes],
                       label=domain.label,
                       provenance={**domain.provenance, "scale": factor})


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------

def domain_to_json(domain: PlanarDomain) -> str:
    doc = {
        "label": domain.label,
        "provenance": domain.provenance,
        "outer": domain.outer.tolist(),
        "holes": [h.tolist() for h in domain.holes],
    }
    return json.dumps(doc, indent=2)


def domain_from_json(text: str) -> PlanarDomain:
    doc = json.loads(text)
    return make_domain(doc["outer"], doc.get("holes", []),
                       label=doc.get("label", ""),
                       provenance=doc.get("provenance", {}))


# ---------------------------------------------------------------------------
# generators
# ---------------------------------------------------------------------------

def make_rectangle(ell: float) -> PlanarDomain:
    """Axis-aligned rectangle with side lengths 1 and ell.

    Side lengths are normalized so the longer side lies along the x-axis;
    only non-positive values are rejected.
    """
    if not (ell > 0.0) or not math.isfinite(ell):
        raise ParameterError("rectangle side length must be positive and finite")
    a, b = max(ell, 1.0), min(ell, 1.0)
    return make_domain([(0.0, 0.0), (a, 0.0), (a, b), (0.0, b)],
                       label=f"rectangle(ell={ell:g})",
                       provenance={"generator": "rectangle", "param": float(ell), "seed": None})


def make_comb(m: int) -> PlanarDomain:
    """Comb with m vertical 1x2 teeth joined by m-1 unit squares at the base.

    Area 3m-1, perimeter 6m.
    """
    if m < 1:
        raise ParameterError("comb needs at least one tooth")
    w = 2 * m - 1
    verts = [(0.0, 0.0), (float(w), 0.0), (float(w), 2.0)]
    for i in range(m - 1, 0, -1):
        verts += [(2.0 * i, 2.0), (2.0 * i, 1.0), (2.0 * i - 1.0, 1.0), (2.0 * i - 1.0, 2.0)]
    verts.append((0.0, 2.0))
    return make_domain(verts, label=f"comb(m={m})",
                       provenance={"generator": "comb", "param": int(m), "seed": None})


def _cw_square(x0, y0, x1, y1):
    return [(x0, y0), (x0, y1), (x1, y1), (x1, y0)]


def make_waffle(m: int) -> PlanarDomain:
    """Square of side 2m+1 with m^2 unit-square holes at odd-integer offsets."""
    if m < 1:
        raise ParameterError("waffle needs m >= 1")
    s = float(2 * m + 1)
    outer = [(0.0, 0.0), (s, 0.0), (s, s), (0.0, s)]
    holes = []
    for j in range(1, m + 1):
        for i in range(1, m + 1):
            holes.append(_cw_square(2.0 * i - 1.0, 2.0 * j - 1.0, 2.0 * i, 2.0 * j))
    return make_domain(outer, holes, label=f"waffle(m={m})",
                       provenance={"generator": "waffle", "param": int(m), "seed": None})


def make_regular_polygon(m: int) -> PlanarDomain:
    """Regular m-gon with vertices on the unit circle, counterclockwise."""
    if m < 3:
        raise ParameterError("regular polygon needs m >= 3")
    ang = 2.0 * math.pi * np.arange(m) / m
    verts = np.column_stack([np.cos(ang), np.sin(ang)])
    return make_domain(verts, label=f"regular(m={m})",
                       provenance={"generator": "regular", "param": int(m), "seed": None})


def make_square_annulus(s: float) -> PlanarDomain:
    """Unit square with a concentric axis-aligned square hole of side s in (0, 1)."""
    if not (0.0 < s < 1.0):
        raise ParameterError("annulus inner side must lie strictly in (0, 1)")
    lo, hi = (1.0 - s) / 2.0, (1.0 + s) / 2.0
    outer = [(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)]
    return make_domain(outer, [_cw_square(lo, lo, hi, hi)],
                       label=f"annulus(s={s:g})",
                       provenance={"generator": "annulus", "param": float(s), "seed": None})


# ---------------------------------------------------------------------------
# seeded random simple polygons
# ---------------------------------------------------------------------------

@dataclass
class RandomPolygonState:
    """Incremental generator state: the vertex list stays simple and CCW
    after every accepted insertion."""

    vertices: list
    rng: np.random.Generator
    target_count: int
    loop_area: float = 0.0


def _sample_distinct(rng, existing, budget) -> np.ndarray:
    while budget[0] > 0:
        budget[0] -= 1
        p = rng.random(2)
        ok = True
        for q in existing:
            if math.hypot(p[0] - q[0], p[1] - q[1]) < MIN_POINT_SEPARATION:
                ok = False
                break
        if ok:
            return p
    raise GenerationFailureError(
        f"random polygon generator exhausted {MAX_CANDIDATE_POINTS} candidate points")


def _insertion_ok(verts, i, p, loop_area) -> bool:
    """Would inserting p between verts[i] and verts[i+1] keep the polygon
    simple and counterclockwise?"""
    m = len(verts)
    vi = verts[i]
    vj = verts[(i + 1) % m]
    if orientation(vi, p, vj) == 0:
        return False  # collinear insertion: degenerate sliver
    # an insertion can produce a simple but clockwise loop (the point swings
    # behind the polygon); reject those to keep the vertex list CCW
    tri = 0.5 * ((p[0] - vi[0]) * (vj[1] - vi[1]) - (p[1] - vi[1]) * (vj[0] - vi[0]))
    if loop_area + tri <= 0.0:
        return False
    new_edges = ((vi, p), (p, vj))
    for k in range(m):
        if k == i:
            continue  # this edge is being removed
        e1 = verts[k]
        e2 = verts[(k + 1) % m]
        for (s, t) in new_edges:
            shared = None
            other_new = None
            other_old = None
            for end_new, mate_new in ((s, t), (t, s)):
                for end_old, mate_old in ((e1, e2), (e2, e1)):
                    if end_new[0] == end_old[0] and end_new[1] == end_old[1]:
                        shared, other_new, other_old = end_new, mate_new, mate_old
            if shared is not None:
                if _segments_overlap_at_shared(shared, other_new, other_old):
                    return False
            elif segments_intersect(s, t, e1, e2):
                return False
    return True


def make_random_polygon(n_vertices: int, seed: int) -> PlanarDomain:
    """Random simple polygon with n_vertices vertices inside the unit square.

    Starts from a counterclockwise triangle of distinct random points, then
    repeatedly samples a candidate point and a random insertion slot, inserts
    the point at the first slot (advancing cyclically) where both new edges
    keep the polygon simple, and resamples the point when every slot fails.
    Deterministic for a fixed (n_vertices, seed) pair.
    """
    if n_vertices < 3:
        raise ParameterError("polygon needs at least 3 vertices")
    rng = np.random.default_rng(seed)
    budget = [MAX_CANDIDATE_POINTS]

    pts = []
    while len(pts) < 3:
        pts.append(_sample_distinct(rng, pts, budget))
    while orientation(pts[0], pts[1], pts[2]) == 0:
        pts[2] = _sample_distinct(rng, pts[:2], budget)
    if orientation(pts[0], pts[1], pts[2]) < 0:
        pts[1], pts[2] = pts[2], pts[1]

    state = RandomPolygonState(vertices=list(pts), rng=rng,
                               target_count=n_vertices,
                               loop_area=_loop_signed_area(np.array(pts)))
    while len(state.vertices) < state.target_count:
        p = _sample_distinct(state.rng, state.vertices, budget)
        m = len(state.vertices)
        start = int(state.rng.integers(m))
        for off in range(m):
            i = (start + off) % m
            if _insertion_ok(state.vertices, i, p, state.loop_area):
                state.vertices.insert(i + 1, p)
                state.loop_area = _loop_signed_area(np.array(state.vertices))
                break
        # no slot admits p: fall through and draw a fresh candidate

    return make_domain(state.vertices, label=f"random(n={n_vertices},seed={seed})",
                       provenance={"generator": "random", "param": int(n_vertices),
                                   "seed": int(seed)})


GENERATORS = {
    "rectangle": make_rectangle,
    "comb": make_comb,
    "waffle": make_waffle,
    "regular": make_regular_polygon,
    "annulus": make_square_annulus,
    "random": make_random_polygon,
}
