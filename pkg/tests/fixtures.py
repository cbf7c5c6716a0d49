"""Shared fixture builders: analytic meshes and random command programs."""

from __future__ import annotations

import math

import numpy as np

import cadeval as cv

# --- meshes ---

_BOX_FACES = (
    # quads as corner indices into the 8 box vertices, outward winding;
    # vertex index is dx*4 + dy*2 + dz
    (0, 1, 3, 2),  # x = lo
    (4, 6, 7, 5),  # x = hi
    (0, 4, 5, 1),  # y = lo
    (2, 3, 7, 6),  # y = hi
    (0, 2, 6, 4),  # z = lo
    (1, 5, 7, 3),  # z = hi
)


def box(sx=1.0, sy=1.0, sz=1.0, origin=(0.0, 0.0, 0.0)) -> cv.TriMesh:
    """Axis-aligned box with one corner at origin, 12 triangles."""
    ox, oy, oz = origin
    corners = np.array(
        [
            (ox + dx * sx, oy + dy * sy, oz + dz * sz)
            for dx in (0, 1)
            for dy in (0, 1)
            for dz in (0, 1)
        ],
        dtype=float,
    )
    tris = []
    for a, b, c, d in _BOX_FACES:
        tris.append((a, b, c))
        tris.append((a, c, d))
    return cv.TriMesh(corners, np.array(tris))


def unit_cube() -> cv.TriMesh:
    return box(1.0, 1.0, 1.0)


def icosphere(subdivisions=4, radius=1.0) -> cv.TriMesh:
    """Icosahedron subdivided and reprojected onto the sphere."""
    phi = (1.0 + math.sqrt(5.0)) / 2.0
    verts = np.array(
        [
            (-1, phi, 0), (1, phi, 0), (-1, -phi, 0), (1, -phi, 0),
            (0, -1, phi), (0, 1, phi), (0, -1, -phi), (0, 1, -phi),
            (phi, 0, -1), (phi, 0, 1), (-phi, 0, -1), (-phi, 0, 1),
        ],
        dtype=float,
    )
    verts /= np.linalg.norm(verts, axis=1, keepdims=True)
    faces = [
        (0, 11, 5), (0, 5, 1), (0, 1, 7), (0, 7, 10), (0, 10, 11),
        (1, 5, 9), (5, 11, 4), (11, 10, 2), (10, 7, 6), (7, 1, 8),
        (3, 9, 4), (3, 4, 2), (3, 2, 6), (3, 6, 8), (3, 8, 9),
        (4, 9, 5), (2, 4, 11), (6, 2, 10), (8, 6, 7), (9, 8, 1),
    ]
    verts = [tuple(v) for v in verts]
    cache = {v: i for i, v in enumerate(verts)}

    def midpoint(i, j):
        m = tuple(np.asarray(verts[i]) + np.asarray(verts[j]))
        m = tuple(np.asarray(m) / np.linalg.norm(m))
        if m not in cache:
            cache[m] = len(verts)
            verts.append(m)
        return cache[m]

    for _ in range(subdivisions):
        new_faces = []
        for a, b, c in faces:
            ab, bc, ca = midpoint(a, b), midpoint(b, c), midpoint(c, a)
            new_faces += [(a, ab, ca), (b, bc, ab), (c, ca, bc), (ab, bc, ca)]
        faces = new_faces

    return cv.TriMesh(np.asarray(verts) * radius, np.asarray(faces))


def l_prism(depth=0.7) -> cv.TriMesh:
    """L-shaped cross-section extruded along z: no symmetry, distinct inertia."""
    outline = [(0, 0), (2.0, 0), (2.0, 0.6), (0.7, 0.6), (0.7, 1.8), (0, 1.8)]
    return extrude_polygon(outline, depth)


def extrude_polygon(outline, depth) -> cv.TriMesh:
    """Prism over a convex-or-concave simple CCW polygon (fan triangulated
    from an ear; callers pass outlines whose fans stay inside)."""
    n = len(outline)
    pts = np.asarray(outline, dtype=float)
    bottom = np.column_stack([pts, np.zeros(n)])
    top = np.column_stack([pts, np.full(n, float(depth))])
    verts = np.vstack([bottom, top])
    tris = []
    cap = _earclip(pts)
    for a, b, c in cap:
        tris.append((a, c, b))  # bottom, normal -z
        tris.append((n + a, n + b, n + c))  # top, normal +z
    for i in range(n):
        j = (i + 1) % n
        tris.append((i, j, n + j))
        tris.append((i, n + j, n + i))
    return cv.TriMesh(verts, np.asarray(tris))


def _earclip(pts: np.ndarray) -> list[tuple[int, int, int]]:
    """Ear clipping for a simple CCW polygon, O(n^2)."""
    idx = list(range(len(pts)))
    tris = []

    def cross(o, a, b):
        return (pts[a][0] - pts[o][0]) * (pts[b][1] - pts[o][1]) - (
            pts[a][1] - pts[o][1]
        ) * (pts[b][0] - pts[o][0])

    def inside(p, a, b, c):
        d1 = cross(a, b, p)
        d2 = cross(b, c, p)
        d3 = cross(c, a, p)
        return d1 >= 0 and d2 >= 0 and d3 >= 0

    guard = 0
    while len(idx) > 3 and guard < 10000:
        guard += 1
        n = len(idx)
        for k in range(n):
            a, b, c = idx[k - 1], idx[k], idx[(k + 1) % n]
            if cross(a, b, c) <= 0:
                continue
            if any(
                inside(p, a, b, c) for p in idx if p not in (a, b, c)
            ):
                continue
            tris.append((a, b, c))
            idx.pop(k)
            break
        else:
            raise ValueError("ear clipping failed; polygon not simple CCW?")
    tris.append(tuple(idx))
    return tris


def tetrahedron() -> cv.TriMesh:
    """Irregular tetrahedron, outward oriented."""
    v = np.array([(0, 0, 0), (1.3, 0, 0), (0.2, 1.1, 0), (0.4, 0.3, 0.9)], dtype=float)
    t = np.array([(0, 2, 1), (0, 1, 3), (1, 2, 3), (0, 3, 2)])
    return cv.TriMesh(v, t)


def convex_hull_mesh(rng: np.random.Generator, n_points=40, center=(0, 0, 0), spread=1.0):
    """Random convex polyhedron; returns (mesh, hull) with hull equations
    usable as an independent inside test."""
    from scipy.spatial import ConvexHull

    pts = rng.normal(size=(n_points, 3)) * spread + np.asarray(center, dtype=float)
    hull = ConvexHull(pts)
    used = np.unique(hull.simplices)
    remap = {int(old): new for new, old in enumerate(used)}
    verts = pts[used]
    tris = np.array([[remap[int(i)] for i in s] for s in hull.simplices])
    interior = verts.mean(axis=0)
    a, b, c = verts[tris[:, 0]], verts[tris[:, 1]], verts[tris[:, 2]]
    normals = np.cross(b - a, c - a)
    inward = np.einsum("ij,ij->i", normals, interior - a) > 0
    tris[inward] = tris[inward][:, ::-1]
    return cv.TriMesh(verts, tris), hull


def hull_contains(hull, points: np.ndarray, tol=1e-12) -> np.ndarray:
    """Vectorized inside test from the hull's half-space equations."""
    eq = hull.equations  # (f, 4): normal, offset with outward normals
    return (points @ eq[:, :3].T + eq[:, 3] <= tol).all(axis=1)


def random_rotation(rng: np.random.Generator) -> np.ndarray:
    """Uniform random rotation from a normalized quaternion."""
    q = rng.normal(size=4)
    q /= np.linalg.norm(q)
    w, x, y, z = q
    return np.array(
        [
            [1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y)],
            [2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x)],
            [2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y)],
        ]
    )


def asymmetric_fixtures() -> list[cv.TriMesh]:
    """Five solids with well-separated inertia eigenvalues."""
    rng = np.random.default_rng(20240811)
    hull, _ = convex_hull_mesh(rng, n_points=30, spread=np.array([1.0, 0.6, 0.35]))
    return [
        box(1.0, 0.62, 0.37),
        l_prism(),
        tetrahedron(),
        extrude_polygon([(0, 0), (2.2, 0), (2.2, 0.4), (1.0, 0.4), (1.0, 1.5), (0, 1.5)], 0.31),
        hull,
    ]


# --- programs ---

def circle_extrude_program() -> cv.CommandSequence:
    return cv.sequence_from_commands(
        [
            cv.loop_start(),
            cv.circle(0.0, 0.0, 0.5),
            cv.extrude(0, 0, 0, 0, 0, 0, 1.0, 1.0, 0.0, 0, 0),
        ]
    )


def rectangle_extrude_program() -> cv.CommandSequence:
    return cv.sequence_from_commands(
        [
            cv.loop_start(),
            cv.line(1.0, 0.0),
            cv.line(1.0, 1.0),
            cv.line(0.0, 1.0),
            cv.line(0.0, 0.0),
            cv.extrude(0, 0, 0, 0, 0, 0, 1.0, 0.5, 0.0, 0, 0),
        ]
    )


def random_program(rng: np.random.Generator) -> cv.CommandSequence:
    """Grammar-directed random program generator."""
    cmds = []
    n_groups = int(rng.integers(1, 4))
    for g in range(n_groups):
        for _ in range(int(rng.integers(1, 3))):
            cmds.append(cv.loop_start())
            if rng.random() < 0.4:
                cmds.append(
                    cv.circle(
                        float(rng.uniform(-1, 1)),
                        float(rng.uniform(-1, 1)),
                        float(rng.uniform(0.05, 1.0)),
                    )
                )
            else:
                n_segs = int(rng.integers(2, 7))
                pts = _distinct_walk(rng, n_segs)
                for px, py in pts:
                    if rng.random() < 0.5:
                        cmds.append(cv.line(px, py))
                    else:
                        cmds.append(
                            cv.arc(
                                px,
                                py,
                                float(rng.uniform(10.0, 350.0)),
                                bool(rng.random() < 0.5),
                            )
                        )
        boolean = 0 if g == 0 else int(rng.integers(0, 4))
        cmds.append(
            cv.extrude(
                float(rng.uniform(0, 180)),
                float(rng.uniform(-180, 180)),
                float(rng.uniform(-180, 180)),
                float(rng.uniform(-1, 1)),
                float(rng.uniform(-1, 1)),
                float(rng.uniform(-1, 1)),
                float(rng.uniform(0.1, 2.0)),
                float(rng.uniform(0.05, 1.0)),
                float(rng.uniform(0.05, 1.0)),
                boolean,
                int(rng.integers(0, 3)),
            )
        )
    if rng.random() < 0.5:
        cmds.append(cv.end_of_sequence())
    return cv.sequence_from_commands(cmds)


def _distinct_walk(rng: np.random.Generator, n: int) -> list[tuple[float, float]]:
    """n points where consecutive points (cyclically) stay well separated."""
    pts = []
    while len(pts) < n:
        cand = (float(rng.uniform(-1, 1)), float(rng.uniform(-1, 1)))
        prev = pts[-1] if pts else None
        if prev is not None and math.hypot(cand[0] - prev[0], cand[1] - prev[1]) < 0.05:
            continue
        pts.append(cand)
    if math.hypot(pts[0][0] - pts[-1][0], pts[0][1] - pts[-1][1]) < 0.05:
        pts[-1] = (pts[-1][0] + 0.1, pts[-1][1] + 0.1)
    return pts
