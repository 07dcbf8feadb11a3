"""Conforming triangulation of polygonal domains with holes, plus uniform
red refinement.

Holes are joined to the outer loop by non-crossing bridge cuts (each bridge
vertex is duplicated along the slit), the resulting single loop is
ear-clipped, and Delaunay edge flips improve the coarse triangle quality.
Uniform refinement then drives the maximum edge length below the target.
Domain vertices are carried through bitwise unchanged.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import InvalidDomainError, ParameterError, ResourceLimitError
from .geom import PlanarDomain, orientation, segments_intersect, _segments_overlap_at_shared

DEFAULT_NODE_CAP = 400_000


@dataclass(frozen=True)
class Mesh:
    """Triangulation with counterclockwise triangles and boundary markers."""

    nodes: np.ndarray           # (n, 2) float64
    triangles: np.ndarray       # (t, 3) int64, CCW
    boundary_nodes: np.ndarray  # sorted node indices on the domain boundary
    h: float                    # maximum edge length

    @property
    def n_nodes(self) -> int:
        return len(self.nodes)

    @property
    def n_triangles(self) -> int:
        return len(self.triangles)

    def boundary_mask(self) -> np.ndarray:
        mask = np.zeros(self.n_nodes, dtype=bool)
        mask[self.boundary_nodes] = True
        return mask

    def edge_counts(self) -> dict:
        """Map from sorted vertex pair to the number of incident triangles."""
        counts: dict = {}
        for a, b, c in self.triangles:
            for u, v in ((a, b), (b, c), (c, a)):
                key = (u, v) if u < v else (v, u)
                counts[key] = counts.get(key, 0) + 1
        return counts

    def min_angle(self) -> float:
        """Smallest interior angle over all triangles, in radians."""
        p = self.nodes[self.triangles]
        best = math.pi
        for i in range(3):
            u = p[:, (i + 1) % 3] - p[:, i]
            v = p[:, (i + 2) % 3] - p[:, i]
            dot = np.sum(u * v, axis=1)
            nu = np.hypot(u[:, 0], u[:, 1])
            nv = np.hypot(v[:, 0], v[:, 1])
            ang = np.arccos(np.clip(dot / (nu * nv), -1.0, 1.0))
            best = min(best, float(ang.min()))
        return best


def _max_edge_length(nodes, triangles) -> float:
    p = nodes[triangles]
    h = 0.0
    for i in range(3):
        d = p[:, (i + 1) % 3] - p[:, i]
        h = max(h, float(np.max(np.hypot(d[:, 0], d[:, 1]))))
    return h


def _signed_areas(nodes, triangles) -> np.ndarray:
    p = nodes[triangles]
    return 0.5 * ((p[:, 1, 0] - p[:, 0, 0]) * (p[:, 2, 1] - p[:, 0, 1])
                  - (p[:, 2, 0] - p[:, 0, 0]) * (p[:, 1, 1] - p[:, 0, 1]))


# ---------------------------------------------------------------------------
# hole elimination by bridge cuts
# ---------------------------------------------------------------------------

def _bridge_hole(nodes, poly, hole):
    """Splice one hole (CW index loop) into the polygon (CCW index list)
    through a rightward-visible bridge vertex."""
    # hole vertex with lexicographically largest (x, y)
    mi = max(range(len(hole)), key=lambda i: (nodes[hole[i]][0], nodes[hole[i]][1]))
    M = nodes[hole[mi]]
    npoly = len(poly)

    # cast a ray from M toward +x; nearest crossing among polygon edges,
    # half-open at vertices so each geometric crossing is seen exactly once
    best = None  # (X, edge position, vertex_hit_position or None)
    for pos in range(npoly):
        a = nodes[poly[pos]]
        b = nodes[poly[(pos + 1) % npoly]]
        ay, by = a[1] - M[1], b[1] - M[1]
        if (ay >= 0) == (by >= 0):
            continue
        if ay == 0:
            X, vertex_pos = a[0], pos
        elif by == 0:
            X, vertex_pos = b[0], (pos + 1) % npoly
        else:
            t = ay / (ay - by)
            X, vertex_pos = a[0] + t * (b[0] - a[0]), None
        if X < M[0]:
            continue
        if best is None or X < best[0]:
            best = (X, pos, vertex_pos)
    if best is None:
        raise InvalidDomainError("hole has no rightward visibility to the outer loop")

    X, pos, vertex_pos = best
    if vertex_pos is not None:
        target = vertex_pos
    else:
        a_pos, b_pos = pos, (pos + 1) % npoly
        # candidate endpoint of the crossed edge: larger (x, y)
        ka = (nodes[poly[a_pos]][0], nodes[poly[a_pos]][1])
        kb = (nodes[poly[b_pos]][0], nodes[poly[b_pos]][1])
        target = a_pos if ka > kb else b_pos
        P = nodes[poly[target]]
        I = np.array([X, M[1]])
        # a reflex vertex inside (or on) triangle (M, I, P) blocks the bridge;
        # take the blocker with the smallest opening angle from the ray
        best_block = None
        for q in range(npoly):
            prev_q = nodes[poly[(q - 1) % npoly]]
            cur_q = nodes[poly[q]]
            next_q = nodes[poly[(q + 1) % npoly]]
            if orientation(prev_q, cur_q, next_q) >= 0:
                continue  # convex or flat: cannot block
            if cur_q[0] < M[0]:
                continue
            if cur_q[0] == M[0] and cur_q[1] == M[1]:
                continue
            if _in_triangle_closed(cur_q, M, I, P):
                dx = cur_q[0] - M[0]
                dy = abs(cur_q[1] - M[1])
                ang = math.atan2(dy, dx)
                dist = math.hypot(dx, cur_q[1] - M[1])
                key = (ang, dist, q)
                if best_block is None or key < best_block[0]:
                    best_block = (key, q)
        if best_block is not None:
            target = best_block[1]

    # splice: ... target, M, hole cycle, M', target', ...
    cycle = [hole[(mi + i) % len(hole)] for i in range(len(hole))]
    insert = cycle + [hole[mi], poly[target]]
    return poly[:target + 1] + insert + poly[target + 1:]


def _in_triangle_closed(p, a, b, c) -> bool:
    # triangle may come in either orientation
    if orientation(a, b, c) < 0:
        b, c = c, b
    return (orientation(a, b, p) >= 0 and orientation(b, c, p) >= 0
            and orientation(c, a, p) >= 0)


def _merge_holes(nodes, outer_idx, hole_loops):
    poly = list(outer_idx)
    order = sorted(
        range(len(hole_loops)),
        key=lambda h: max((nodes[i][0], nodes[i][1]) for i in hole_loops[h]),
        reverse=True,
    )
    for h in order:
        poly = _bridge_hole(nodes, poly, list(hole_loops[h]))
    return poly


# ---------------------------------------------------------------------------
# ear clipping
# ---------------------------------------------------------------------------

def _ear_clip(nodes, loop):
    """Triangulate a (possibly slit) simple loop of node indices, CCW."""
    n = len(loop)
    if n < 3:
        raise InvalidDomainError("cannot triangulate fewer than 3 vertices")
    nxt = [(i + 1) % n for i in range(n)]
    prv = [(i - 1) % n for i in range(n)]
    alive = [True] * n
    remaining = n
    triangles = []

    def coords(pos):
        return nodes[loop[pos]]

    def is_ear(pos):
        a, b, c = coords(prv[pos]), coords(pos), coords(nxt[pos])
        if orientation(a, b, c) <= 0:
            return False
        # no alive vertex strictly inside the candidate triangle
        q = nxt[pos]
        for _ in range(remaining - 1):
            q = nxt[q]
            if q == prv[pos]:
                break
            pq = coords(q)
            if _strictly_in_triangle(pq, a, b, c):
                return False
        # the new diagonal a-c must not improperly meet any alive edge
        q = nxt[pos]
        while True:
            q2 = nxt[q]
            if q == prv[pos]:
                break
            e1, e2 = coords(q), coords(q2)
            if _diagonal_blocked(a, c, e1, e2):
                return False
            q = q2
        return True

    def _strictly_in_triangle(p, a, b, c):
        return (orientation(a, b, p) > 0 and orientation(b, c, p) > 0
                and orientation(c, a, p) > 0)

    def _diagonal_blocked(a, c, e1, e2):
        shared_a1 = e1[0] == a[0] and e1[1] == a[1]
        shared_a2 = e2[0] == a[0] and e2[1] == a[1]
        shared_c1 = e1[0] == c[0] and e1[1] == c[1]
        shared_c2 = e2[0] == c[0] and e2[1] == c[1]
        if (shared_a1 and shared_c2) or (shared_a2 and shared_c1):
            return False  # the edge coincides with the diagonal: same cut
        if shared_a1:
            return _segments_overlap_at_shared(a, c, e2)
        if shared_a2:
            return _segments_overlap_at_shared(a, c, e1)
        if shared_c1:
            return _segments_overlap_at_shared(c, a, e2)
        if shared_c2:
            return _segments_overlap_at_shared(c, a, e1)
        return segments_intersect(a, c, e1, e2)

    pos = 0
    stall = 0
    while remaining > 3:
        if alive[pos] and is_ear(pos):
            a, b, c = prv[pos], pos, nxt[pos]
            triangles.append((loop[a], loop[b], loop[c]))
            alive[pos] = False
            nxt[a], prv[c] = c, a
            remaining -= 1
            pos = a
            stall = 0
        else:
            pos = nxt[pos] if alive[pos] else nxt[prv[pos]]
            stall += 1
            if stall > remaining + 1:
                # no convex ear: drop one exactly-collinear vertex if present
                dropped = False
                q = pos
                for _ in range(remaining):
                    a, b, c = coords(prv[q]), coords(q), coords(nxt[q])
                    if orientation(a, b, c) == 0:
                        alive[q] = False
                        nxt[prv[q]], prv[nxt[q]] = nxt[q], prv[q]
                        remaining -= 1
                        pos = prv[q]
                        dropped = True
                        break
                    q = nxt[q]
                if not dropped:
                    raise InvalidDomainError("ear clipping stalled; loop is not simple")
                stall = 0
    # final triangle: the three alive positions in linked-list order
    a = next(i for i in range(n) if alive[i])
    b, c = nxt[a], nxt[nxt[a]]
    tri = (loop[a], loop[b], loop[c])
    pa, pb, pc = nodes[tri[0]], nodes[tri[1]], nodes[tri[2]]
    if orientation(pa, pb, pc) > 0:
        triangles.append(tri)
    elif orientation(pa, pb, pc) < 0:
        triangles.append((tri[0], tri[2], tri[1]))
    # exactly collinear final triangle: degenerate remainder, drop it
    return np.array(triangles, dtype=np.int64)


# ---------------------------------------------------------------------------
# Delaunay edge flips
# ---------------------------------------------------------------------------

def _incircle(a, b, c, d) -> int:
    """Sign of the incircle determinant: +1 iff d lies strictly inside the
    circumcircle of the CCW triangle (a, b, c)."""
    adx, ady = a[0] - d[0], a[1] - d[1]
    bdx, bdy = b[0] - d[0], b[1] - d[1]
    cdx, cdy = c[0] - d[0], c[1] - d[1]
    ad2 = adx * adx + ady * ady
    bd2 = bdx * bdx + bdy * bdy
    cd2 = cdx * cdx + cdy * cdy
    det = (adx * (bdy * cd2 - cdy * bd2)
           - ady * (bdx * cd2 - cdx * bd2)
           + ad2 * (bdx * cdy - cdx * bdy))
    scale = ((abs(adx) + abs(ady)) * (abs(bd2) + abs(cd2))
             + (abs(bdx) + abs(bdy)) * (abs(ad2) + abs(cd2))
             + (abs(cdx) + abs(cdy)) * (abs(ad2) + abs(bd2)))
    if abs(det) > 1e-12 * scale:
        return 1 if det > 0 else -1
    return _incircle_exact(a, b, c, d)


def _incircle_exact(a, b, c, d) -> int:
    ax, ay = Fraction(float(a[0])), Fraction(float(a[1]))
    bx, by = Fraction(float(b[0])), Fraction(float(b[1]))
    cx, cy = Fraction(float(c[0])), Fraction(float(c[1]))
    dx, dy = Fraction(float(d[0])), Fraction(float(d[1]))
    adx, ady = ax - dx, ay - dy
    bdx, bdy = bx - dx, by - dy
    cdx, cdy = cx - dx, cy - dy
    ad2 = adx * adx + ady * ady
    bd2 = bdx * bdx + bdy * bdy
    cd2 = cdx * cdx + cdy * cdy
    det = (adx * (bdy * cd2 - cdy * bd2)
           - ady * (bdx * cd2 - cdx * bd2)
           + ad2 * (bdx * cdy - cdx * bdy))
    if det > 0:
        return 1
    if det < 0:
        return -1
    return 0


def _delaunay_flips(nodes, triangles):
    tris = [tuple(t) for t in triangles]
    edge_map: dict = {}

    def add_tri(ti):
        a, b, c = tris[ti]
        for u, v in ((a, b), (b, c), (c, a)):
            key = (u, v) if u < v else (v, u)
            edge_map.setdefault(key, set()).add(ti)

    def remove_tri(ti):
        a, b, c = tris[ti]
        for u, v in ((a, b), (b, c), (c, a)):
            key = (u, v) if u < v else (v, u)
            edge_map[key].discard(ti)

    for ti in range(len(tris)):
        add_tri(ti)

    queue = list(edge_map.keys())
    guard = 40 * len(tris) + 400
    while queue and guard > 0:
        guard -= 1
        key = queue.pop()
        owners = edge_map.get(key)
        if owners is None or len(owners) != 2:
            continue
        t1, t2 = sorted(owners)
        u, v = key
        # opposite vertices
        p = [w for w in tris[t1] if w != u and w != v][0]
        q = [w for w in tris[t2] if w != u and w != v][0]
        # orient so that t1 = (u, v, p) is CCW
        if (u, v) not in ((tris[t1][0], tris[t1][1]), (tris[t1][1], tris[t1][2]),
                          (tris[t1][2], tris[t1][0])):
            u, v = v, u
        nu_, nv_, np_, nq_ = nodes[u], nodes[v], nodes[p], nodes[q]
        if _incircle(nu_, nv_, np_, nq_) <= 0:
            continue
        # flip only across a strictly convex quad u-q-v-p
        if orientation(np_, nu_, nq_) <= 0 or orientation(nq_, nv_, np_) <= 0:
            continue
        remove_tri(t1)
        remove_tri(t2)
        tris[t1] = (u, q, p)
        tris[t2] = (q, v, p)
        add_tri(t1)
        add_tri(t2)
        for e in ((u, q), (q, v), (v, p), (p, u)):
            queue.append((e[0], e[1]) if e[0] < e[1] else (e[1], e[0]))
    return np.array(tris, dtype=np.int64)


# ---------------------------------------------------------------------------
# public operations
# ---------------------------------------------------------------------------

def triangulate(domain: PlanarDomain, h_target: float,
                node_cap: int = DEFAULT_NODE_CAP) -> Mesh:
    """Conforming triangulation of the domain with max edge length <= h_target.

    All domain vertices appear bitwise in the node list; boundary edges of the
    mesh partition the domain boundary.
    """
    if not (h_target > 0.0):
        raise ParameterError("h_target must be positive")

    loops = domain.loops()
    nodes = np.vstack(loops)
    offsets = np.cumsum([0] + [len(lp) for lp in loops])
    outer_idx = list(range(offsets[0], offsets[1]))
    hole_loops = [list(range(offsets[i], offsets[i + 1]))
                  for i in range(1, len(loops))]

    merged = _merge_holes(nodes, outer_idx, hole_loops) if hole_loops else outer_idx
    triangles = _ear_clip(nodes, merged)
    triangles = _delaunay_flips(nodes, triangles)

    if np.any(_signed_areas(nodes, triangles) <= 0.0):
        raise InvalidDomainError("triangulation produced a non-positive triangle")

    boundary = np.arange(len(nodes), dtype=np.int64)  # every domain vertex is on the boundary
    mesh = Mesh(nodes=nodes, triangles=triangles, boundary_nodes=boundary,
                h=_max_edge_length(nodes, triangles))
    while mesh.h > h_target:
        mesh = refine(mesh, node_cap=node_cap)
    return mesh


def refine(mesh: Mesh, node_cap: int = DEFAULT_NODE_CAP) -> Mesh:
    """Red refinement: split every triangle into four through edge midpoints."""
    counts = mesh.edge_counts()
    n_new = mesh.n_nodes + len(counts)
    if n_new > node_cap:
        raise ResourceLimitError(
            f"refinement would need {n_new} nodes, above the cap of {node_cap}")

    nodes = mesh.nodes
    midpoint_of: dict = {}
    new_coords = []
    next_id = mesh.n_nodes
    for a, b, c in mesh.triangles:
        for u, v in ((a, b), (b, c), (c, a)):
            key = (u, v) if u < v else (v, u)
            if key not in midpoint_of:
                midpoint_of[key] = next_id
                new_coords.append(0.5 * (nodes[key[0]] + nodes[key[1]]))
                next_id += 1

    all_nodes = np.vstack([nodes, np.array(new_coords)]) if new_coords else nodes.copy()
    tris = np.empty((4 * mesh.n_triangles, 3), dtype=np.int64)
    for i, (a, b, c) in enumerate(mesh.triangles):
        mab = midpoint_of[(a, b) if a < b else (b, a)]
        mbc = midpoint_of[(b, c) if b < c else (c, b)]
        mca = midpoint_of[(c, a) if c < a else (a, c)]
        tris[4 * i + 0] = (a, mab, mca)
        tris[4 * i + 1] = (mab, b, mbc)
        tris[4 * i + 2] = (mca, mbc, c)
        tris[4 * i + 3] = (mab, mbc, mca)

    new_boundary = list(mesh.boundary_nodes)
    for key, count in counts.items():
        if count == 1:  # mesh boundary edge: its midpoint lies on the domain boundary
            new_boundary.append(midpoint_of[key])
    boundary = np.array(sorted(new_boundary), dtype=np.int64)

    return Mesh(nodes=all_nodes, triangles=tris, boundary_nodes=boundary,
                h=_max_edge_length(all_nodes, tris))


def verify_mesh(mesh: Mesh, n_holes: int = 0) -> list:
    """Explicit invariant scan; returns a list of violation messages (empty if clean).

    The Euler identity checked is V - E + F = 1 - H with F counting triangles
    only, the form the produced meshes actually satisfy.
    """
    problems = []
    areas = _signed_areas(mesh.nodes, mesh.triangles)
    if np.any(areas <= 0.0):
        problems.append(f"{int(np.sum(areas <= 0.0))} non-positive triangle(s)")

    counts = mesh.edge_counts()
    over = [k for k, c in counts.items() if c > 2]
    if over:
        problems.append(f"{len(over)} edge(s) shared by more than two triangles")

    bmask = mesh.boundary_mask()
    boundary_edges = [k for k, c in counts.items() if c == 1]
    for u, v in boundary_edges:
        if not (bmask[u] and bmask[v]):
            problems.append(f"boundary edge ({u}, {v}) has an unmarked endpoint")
            break
    touched = set()
    for u, v in boundary_edges:
        touched.add(u)
        touched.add(v)
    marked = set(int(i) for i in mesh.boundary_nodes)
    if touched != marked:
        problems.append("boundary_nodes do not match the endpoints of boundary edges")

    euler = mesh.n_nodes - len(counts) + mesh.n_triangles
    if euler != 1 - n_holes:
        problems.append(f"Euler characteristic {euler} != {1 - n_holes}")

    if abs(mesh.h - _max_edge_length(mesh.nodes, mesh.triangles)) > 1e-15 * max(mesh.h, 1.0):
        problems.append("stored h does not match the maximum edge length")
    return problems


def mesh_to_json(mesh: Mesh) -> str:
    return json.dumps({
        "nodes": mesh.nodes.tolist(),
        "triangles": mesh.triangles.tolist(),
        "boundary_nodes": mesh.boundary_nodes.tolist(),
        "h": mesh.h,
    })
