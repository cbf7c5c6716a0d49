"""Test support: program documents, an IR-level reference mesh builder,
and tiny mesh checks independent of the library under test.

The reference builder realizes a program's geometry straight from the
command vectors (plane frame, arc-from-sweep sampling, prism assembly),
bypassing script text, the cadquery API surface and the STL round trip.
End-to-end runs are scored against it.
"""

from __future__ import annotations

import json
import math

from cadexec._kernel.cadquery import Plane, Solid, _prism_from_rings
from cadexec._kernel.cadquery._profile import circle_ring

UNUSED = -1.0


# --- program document builders ---

def _slots(used: dict) -> list:
    p = [UNUSED] * 16
    for k, v in used.items():
        p[k] = float(v)
    return p


def sol():
    return {"t": "SOL", "p": _slots({})}


def line(x, y):
    return {"t": "L", "p": _slots({0: x, 1: y})}


def arc(x, y, sweep, ccw):
    return {"t": "A", "p": _slots({0: x, 1: y, 2: sweep, 3: 1.0 if ccw else 0.0})}


def circle(x, y, r):
    return {"t": "R", "p": _slots({0: x, 1: y, 4: r})}


def ext(theta, phi, gamma, ox, oy, oz, scale, e1, e2, boolean=0, extent=0):
    return {
        "t": "E",
        "p": _slots(
            {5: theta, 6: phi, 7: gamma, 8: ox, 9: oy, 10: oz, 11: scale,
             12: e1, 13: e2, 14: boolean, 15: extent}
        ),
    }


def document(commands) -> str:
    return json.dumps({"commands": commands})


def fixture_programs() -> dict[str, list]:
    """Ten programs covering loops, extents, planes and a disjoint join.

    Profiles are chosen with distinct in-plane inertia eigenvalues (or
    rotation-invariant ambiguity, like the cylinder) so the principal-axes
    alignment is well conditioned.
    """
    rect = [line(1.4, 0.0), line(1.4, 0.8), line(0.0, 0.8), line(0.0, 0.0)]
    irregular_pentagon = [
        line(1.2, 0.0), line(1.5, 0.8), line(0.6, 1.4), line(-0.2, 0.7), line(0.0, 0.0)
    ]
    stadium = [
        line(1.0, 0.0), arc(1.0, 0.5, 180.0, True), line(0.0, 0.5), arc(0.0, 0.0, 180.0, True)
    ]
    wedge = [line(1.0, 0.0), arc(0.0, 1.0, 90.0, True), line(0.0, 0.0)]
    l_profile = [
        line(2.0, 0.0), line(2.0, 0.6), line(0.7, 0.6), line(0.7, 1.8), line(0.0, 1.8),
        line(0.0, 0.0),
    ]
    return {
        "cylinder": [sol(), circle(0.0, 0.0, 0.5), ext(0, 0, 0, 0, 0, 0, 1.0, 1.0, 0.0)],
        "rect_prism": [sol(), *rect, ext(0, 0, 0, 0, 0, 0, 1.0, 0.5, 0.0)],
        "pentagon_tilted": [
            sol(), *irregular_pentagon, ext(30, 40, 15, 0.2, -0.1, 0.4, 1.0, 0.6, 0.0)
        ],
        "plate_with_hole": [
            sol(), *rect, sol(), circle(0.45, 0.55, 0.2),
            ext(0, 0, 0, 0, 0, 0, 1.0, 0.3, 0.0),
        ],
        "cylinder_symmetric": [
            sol(), circle(0.0, 0.0, 0.5), ext(0, 0, 0, 0, 0, 0, 1.0, 0.4, 0.0, 0, 1)
        ],
        "rect_two_sided": [
            sol(), *rect, ext(0, 0, 0, 0, 0, 0, 1.0, 0.4, 0.15, 0, 2)
        ],
        "stadium": [sol(), *stadium, ext(20, -35, 50, 0, 0, 0, 1.0, 0.7, 0.0)],
        "wedge": [sol(), *wedge, ext(0, 0, 0, 0, 0, 0, 1.0, 0.8, 0.0)],
        "disjoint_join": [
            sol(), circle(0.0, 0.0, 0.5), ext(0, 0, 0, 0, 0, 0, 1.0, 1.0, 0.0),
            sol(), *rect, ext(0, 0, 0, -0.7, -0.4, 1.5, 1.0, 0.5, 0.0, 1, 0),
        ],
        "l_profile_scaled": [
            sol(), *l_profile, ext(70, 10, -25, 0.5, -0.3, 0.8, 2.5, 0.35, 0.0)
        ],
    }


# --- IR-level reference geometry ---

def plane_frame(theta, phi, gamma):
    t, p, g = math.radians(theta), math.radians(phi), math.radians(gamma)
    normal = (math.sin(t) * math.cos(p), math.sin(t) * math.sin(p), math.cos(t))
    ref_x = (math.cos(t) * math.cos(p), math.cos(t) * math.sin(p), -math.sin(t))
    ref_y = (
        normal[1] * ref_x[2] - normal[2] * ref_x[1],
        normal[2] * ref_x[0] - normal[0] * ref_x[2],
        normal[0] * ref_x[1] - normal[1] * ref_x[0],
    )
    cg, sg = math.cos(g), math.sin(g)
    x_axis = tuple(cg * rx + sg * ry for rx, ry in zip(ref_x, ref_y))
    return normal, x_axis


def arc_samples(start, end, sweep_deg, ccw, tolerance):
    """Points after `start` along the arc defined by end point and sweep."""
    chord = math.dist(start, end)
    half = math.radians(sweep_deg) / 2.0
    dist = chord / (2.0 * math.tan(half))
    if not ccw:
        dist = -dist
    mx, my = (start[0] + end[0]) / 2.0, (start[1] + end[1]) / 2.0
    nx, ny = -(end[1] - start[1]) / chord, (end[0] - start[0]) / chord
    ox, oy = mx + dist * nx, my + dist * ny
    radius = math.dist((ox, oy), start)
    sweep = math.radians(sweep_deg) if ccw else -math.radians(sweep_deg)
    a0 = math.atan2(start[1] - oy, start[0] - ox)
    n = max(2, int(math.ceil(abs(sweep) / (2.0 * math.acos(max(-1.0, 1.0 - tolerance / radius))))))
    pts = [
        (ox + radius * math.cos(a0 + sweep * k / n), oy + radius * math.sin(a0 + sweep * k / n))
        for k in range(1, n)
    ]
    pts.append(end)
    return pts


def reference_mesh(commands, tolerance=5e-4) -> Solid:
    """Build the program's solid directly from command vectors."""
    solid = None
    loops: list[list] = []
    current = None
    for cmd in commands:
        tag, p = cmd["t"], cmd["p"]
        if tag == "SOL":
            current = []
            loops.append(current)
        elif tag in ("L", "A", "R"):
            current.append(cmd)
        elif tag == "E":
            body = _group_solid(loops, p, tolerance)
            solid = body if solid is None else solid.fused_with(body)
            loops = []
    return solid


def _group_solid(loops, p, tolerance) -> Solid:
    theta, phi, gamma = p[5], p[6], p[7]
    origin = (p[8], p[9], p[10])
    scale, e1, e2, extent = p[11], p[12], p[13], int(p[15])
    normal, x_axis = plane_frame(theta, phi, gamma)
    plane = Plane(origin=origin, xDir=x_axis, normal=normal)

    rings = []
    for loop in loops:
        if loop[0]["t"] == "R":
            q = loop[0]["p"]
            rings.append(circle_ring((q[0] * scale, q[1] * scale), q[4] * scale, tolerance))
            continue
        ends = [(c["p"][0] * scale, c["p"][1] * scale) for c in loop]
        start = ends[-1]
        ring = []
        prev = start
        for cmd, end in zip(loop, ends):
            if cmd["t"] == "L":
                ring.append(end)
            else:
                ring.extend(arc_samples(prev, end, cmd["p"][2], cmd["p"][3] == 1.0, tolerance))
            prev = end
        rings.append(ring)

    if extent == 0:
        zlo, zhi = min(0.0, e1), max(0.0, e1)
    elif extent == 1:
        zlo, zhi = -abs(e1), abs(e1)
    else:
        zlo, zhi = min(-e2, e1), max(-e2, e1)
    return _prism_from_rings(plane, rings, zlo, zhi)


# --- independent mesh checks (pure arithmetic, no library calls) ---

def signed_volume(solid: Solid) -> float:
    total = 0.0
    v = solid.vertices
    for i, j, k in solid.faces:
        a, b, c = v[i], v[j], v[k]
        total += (
            a[0] * (b[1] * c[2] - b[2] * c[1])
            - a[1] * (b[0] * c[2] - b[2] * c[0])
            + a[2] * (b[0] * c[1] - b[1] * c[0])
        )
    return total / 6.0


def is_watertight(solid: Solid) -> bool:
    edges: dict[tuple[int, int], int] = {}
    for i, j, k in solid.faces:
        for a, b in ((i, j), (j, k), (k, i)):
            key = (min(a, b), max(a, b))
            edges[key] = edges.get(key, 0) + (1 if a < b else -1)
    counts: dict[tuple[int, int], int] = {}
    for i, j, k in solid.faces:
        for a, b in ((i, j), (j, k), (k, i)):
            key = (min(a, b), max(a, b))
            counts[key] = counts.get(key, 0) + 1
    return all(c == 2 for c in counts.values()) and all(s == 0 for s in edges.values())
