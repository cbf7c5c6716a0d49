"""2D profile machinery for the fallback kernel: arc discretization,
polygon nesting, hole bridging and ear clipping.

Coordinates are plane-local (u, v).  A ring is a list of points without a
closing duplicate.  Triangulation works on (tag, point) pairs so bridge
duplicates keep referring to the same prism vertex.
"""

from __future__ import annotations

import math

EPS = 1e-12


class KernelLimitation(RuntimeError):
    """Geometry outside what the bundled fallback kernel supports."""


def circumcenter(a, b, c):
    ax, ay = a
    bx, by = b
    cx, cy = c
    d = 2.0 * (ax * (by - cy) + bx * (cy - ay) + cx * (ay - by))
    if abs(d) < EPS:
        raise KernelLimitation("three-point arc through collinear points")
    ux = ((ax * ax + ay * ay) * (by - cy) + (bx * bx + by * by) * (cy - ay)
          + (cx * cx + cy * cy) * (ay - by)) / d
    uy = ((ax * ax + ay * ay) * (cx - bx) + (bx * bx + by * by) * (ax - cx)
          + (cx * cx + cy * cy) * (bx - ax)) / d
    return (ux, uy)


def arc_points(start, mid, end, tolerance):
    """Interior+end sample points of the arc start->mid->end (start omitted)."""
    center = circumcenter(start, mid, end)
    radius = math.dist(center, start)
    ccw = _cross(_sub(mid, start), _sub(end, mid)) > 0.0
    a0 = math.atan2(start[1] - center[1], start[0] - center[0])
    a1 = math.atan2(mid[1] - center[1], mid[0] - center[0])
    a2 = math.atan2(end[1] - center[1], end[0] - center[0])
    if ccw:
        sweep = (a2 - a0) % (2.0 * math.pi)
        to_mid = (a1 - a0) % (2.0 * math.pi)
    else:
        sweep = -((a0 - a2) % (2.0 * math.pi))
        to_mid = -((a0 - a1) % (2.0 * math.pi))
    if abs(to_mid) > abs(sweep) + 1e-9:
        # numerical corner: mid outside the span means a full-turn arc
        sweep = math.copysign(2.0 * math.pi, sweep)
    n = _segments_for(radius, abs(sweep), tolerance, minimum=2)
    pts = []
    for k in range(1, n):
        ang = a0 + sweep * (k / n)
        pts.append((center[0] + radius * math.cos(ang), center[1] + radius * math.sin(ang)))
    pts.append(end)  # exact closure
    return pts


def circle_ring(center, radius, tolerance):
    n = _segments_for(radius, 2.0 * math.pi, tolerance, minimum=12)
    return [
        (
            center[0] + radius * math.cos(2.0 * math.pi * k / n),
            center[1] + radius * math.sin(2.0 * math.pi * k / n),
        )
        for k in range(n)
    ]


def _segments_for(radius, sweep, tolerance, minimum):
    if radius <= 0.0:
        raise KernelLimitation(f"non-positive radius {radius}")
    ratio = max(-1.0, min(1.0, 1.0 - tolerance / radius))
    per_segment = 2.0 * math.acos(ratio)
    if per_segment <= 0.0:
        return minimum
    return max(minimum, int(math.ceil(sweep / per_segment)))


def signed_area(ring) -> float:
    total = 0.0
    for i in range(len(ring)):
        x0, y0 = ring[i]
        x1, y1 = ring[(i + 1) % len(ring)]
        total += x0 * y1 - x1 * y0
    return total / 2.0


def point_in_ring(point, ring) -> bool:
    """Even-odd rule ray cast along +u."""
    x, y = point
    inside = False
    for i in range(len(ring)):
        x0, y0 = ring[i]
        x1, y1 = ring[(i + 1) % len(ring)]
        if (y0 > y) != (y1 > y):
            t = (y - y0) / (y1 - y0)
            if x < x0 + t * (x1 - x0):
                inside = not inside
    return inside


def group_rings(rings):
    """Partition rings into (outer, holes) groups by even-odd nesting depth.

    Returns a list of (outer_index, [hole_indices]).  Nesting deeper than
    outer-with-holes (an island inside a hole) is not supported.
    """
    depth = []
    for i, ring in enumerate(rings):
        d = sum(
            1
            for j, other in enumerate(rings)
            if j != i and point_in_ring(ring[0], other)
        )
        depth.append(d)
    if any(d > 1 for d in depth):
        raise KernelLimitation(
            "sketch nests loops more than one level deep; the fallback "
            "kernel supports outer profiles with holes only"
        )
    groups = [(i, []) for i, d in enumerate(depth) if d == 0]
    for i, d in enumerate(depth):
        if d != 1:
            continue
        for outer_index, holes in groups:
            if point_in_ring(rings[i][0], rings[outer_index]):
                holes.append(i)
                break
        else:
            raise KernelLimitation("hole loop without a containing outer loop")
    return groups


def _sub(a, b):
    return (a[0] - b[0], a[1] - b[1])


def _cross(a, b):
    return a[0] * b[1] - a[1] * b[0]


def _orient(a, b, c):
    return _cross(_sub(b, a), _sub(c, a))


def _segments_properly_intersect(p0, p1, q0, q1) -> bool:
    d0 = _orient(p0, p1, q0)
    d1 = _orient(p0, p1, q1)
    d2 = _orient(q0, q1, p0)
    d3 = _orient(q0, q1, p1)
    return ((d0 > EPS) != (d1 > EPS)) and ((d2 > EPS) != (d3 > EPS)) and all(
        abs(d) > EPS for d in (d0, d1, d2, d3)
    )


def _point_near_segment(point, a, b, tol) -> bool:
    au, av = a
    bu, bv = b
    pu, pv = point
    eu, ev = bu - au, bv - av
    len2 = eu * eu + ev * ev
    if len2 < EPS:
        return math.dist(point, a) <= tol
    t = max(0.0, min(1.0, ((pu - au) * eu + (pv - av) * ev) / len2))
    return math.dist(point, (au + t * eu, av + t * ev)) <= tol


def merge_holes(outer, holes):
    """Bridge each hole into the outer ring, returning one simple polygon.

    ``outer`` is CCW, every hole CW; all are lists of (tag, point).  Bridge
    vertices are duplicated, re-using the same tags so downstream meshing
    shares prism vertices.
    """
    merged = list(outer)
    remaining = [list(h) for h in holes]
    # rightmost holes first: their bridges cannot cross later holes
    remaining.sort(key=lambda h: -max(p[0] for _, p in h))
    for hole in remaining:
        others = [h for h in remaining if h is not hole]
        merged = _bridge_one(merged, hole, others)
    return merged


def _bridge_one(merged, hole, other_holes):
    edges = []
    for ring in [merged, hole, *other_holes]:
        for i in range(len(ring)):
            edges.append((ring[i][1], ring[(i + 1) % len(ring)][1]))
    all_points = [p for ring in [merged, hole, *other_holes] for _, p in ring]

    best = None
    for hi, (_, hp) in enumerate(hole):
        for mi, (_, mp) in enumerate(merged):
            gap2 = (hp[0] - mp[0]) ** 2 + (hp[1] - mp[1]) ** 2
            if best is not None and gap2 >= best[0]:
                continue
            if _bridge_clear(hp, mp, edges, all_points):
                best = (gap2, hi, mi)
    if best is None:
        raise KernelLimitation("no visible bridge between hole and outer loop")
    _, hi, mi = best
    rotated = hole[hi:] + hole[:hi]
    return merged[: mi + 1] + rotated + [rotated[0], merged[mi]] + merged[mi + 1 :]


def _bridge_clear(hp, mp, edges, all_points) -> bool:
    if math.dist(hp, mp) < EPS:
        return False
    for a, b in edges:
        if _segments_properly_intersect(hp, mp, a, b):
            return False
    for p in all_points:
        if p is hp or p is mp:
            continue
        if math.dist(p, hp) < EPS or math.dist(p, mp) < EPS:
            continue
        if _point_near_segment(p, hp, mp, 1e-9):
            return False
    return True


def earclip(polygon):
    """Triangulate a simple polygon of (tag, point) pairs; returns tag triples."""
    vertices = list(polygon)
    if len(vertices) < 3:
        raise KernelLimitation("profile with fewer than 3 vertices")
    triangles = []
    scale = max(
        abs(c) for _, p in vertices for c in p
    ) or 1.0
    area_eps = EPS * scale * scale

    while len(vertices) > 3:
        n = len(vertices)
        clipped = False
        for k in range(n):
            prev, cur, nxt = vertices[k - 1], vertices[k], vertices[(k + 1) % n]
            area = _orient(prev[1], cur[1], nxt[1])
            if area <= area_eps:
                continue
            if _any_point_strictly_inside(vertices, prev, cur, nxt):
                continue
            triangles.append((prev[0], cur[0], nxt[0]))
            vertices.pop(k)
            clipped = True
            break
        if not clipped:
            # no convex ear: drop a collinear vertex (zero-area ear) if any
            for k in range(n):
                prev, cur, nxt = vertices[k - 1], vertices[k], vertices[(k + 1) % n]
                if abs(_orient(prev[1], cur[1], nxt[1])) <= area_eps:
                    vertices.pop(k)
                    clipped = True
                    break
        if not clipped:
            raise KernelLimitation("ear clipping stalled; profile is not simple")
    a, b, c = vertices
    if _orient(a[1], b[1], c[1]) > area_eps:
        triangles.append((a[0], b[0], c[0]))
    return triangles


def _any_point_strictly_inside(vertices, a, b, c) -> bool:
    pa, pb, pc = a[1], b[1], c[1]
    for tag, p in vertices:
        if p is pa or p is pb or p is pc:
            continue
        if (
            _orient(pa, pb, p) > EPS
            and _orient(pb, pc, p) > EPS
            and _orient(pc, pa, p) > EPS
        ):
            return True
    return False
