"""Minimal cadquery-compatible kernel for headless script execution.

Loaded only when the real cadquery package is not importable.  It covers
the API subset that transpiled sketch-and-extrude scripts use: planes from
origin/xDir/normal, chained 2D drawing (moveTo, lineTo, threePointArc,
circle, close), one-sided/both extrusion of profiles with holes, and
union of disjoint bodies.  Overlapping booleans, cut and intersect need a
real B-rep kernel and raise immediately, which the runner reports as a
RuntimeError outcome.

Solids are closed triangle meshes; `tessellate` matches the real package's
(vertices, triangles) return shape.  Arc and circle discretization reads
the requested tolerance from the CADEXEC_TESS_TOL environment variable set
by the runner.
"""

from __future__ import annotations

import math
import os

from ._profile import (
    KernelLimitation,
    arc_points,
    circle_ring,
    earclip,
    group_rings,
    merge_holes,
    signed_area,
)

_COINCIDENT = 1e-9


def _tessellation_tolerance() -> float:
    try:
        value = float(os.environ.get("CADEXEC_TESS_TOL", "1e-3"))
    except ValueError:
        value = 1e-3
    return value if value > 0 else 1e-3


class Vector:
    __slots__ = ("x", "y", "z")

    def __init__(self, x=0.0, y=0.0, z=0.0):
        if hasattr(x, "__len__"):
            x, y, z = x
        self.x, self.y, self.z = float(x), float(y), float(z)

    def toTuple(self):
        return (self.x, self.y, self.z)

    def __repr__(self):
        return f"Vector({self.x}, {self.y}, {self.z})"


def _as_xyz(value):
    if isinstance(value, Vector):
        return (value.x, value.y, value.z)
    return (float(value[0]), float(value[1]), float(value[2]))


def _normalized(v):
    n = math.sqrt(v[0] ** 2 + v[1] ** 2 + v[2] ** 2)
    if n < _COINCIDENT:
        raise KernelLimitation("zero-length direction vector")
    return (v[0] / n, v[1] / n, v[2] / n)


def _cross3(a, b):
    return (
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    )


def _dot3(a, b):
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]


class Plane:
    def __init__(self, origin=(0, 0, 0), xDir=None, normal=(0, 0, 1)):
        self.origin = _as_xyz(origin)
        self.zDir = _normalized(_as_xyz(normal))
        if xDir is None:
            probe = (0.0, 0.0, 1.0) if abs(self.zDir[2]) < 0.9 else (1.0, 0.0, 0.0)
            xdir = _cross3(probe, self.zDir)
        else:
            xdir = _as_xyz(xDir)
            shadow = _dot3(xdir, self.zDir)
            xdir = tuple(c - shadow * n for c, n in zip(xdir, self.zDir))
        self.xDir = _normalized(xdir)
        self.yDir = _cross3(self.zDir, self.xDir)

    def to_world(self, u, v, w):
        o, x, y, z = self.origin, self.xDir, self.yDir, self.zDir
        return (
            o[0] + u * x[0] + v * y[0] + w * z[0],
            o[1] + u * x[1] + v * y[1] + w * z[1],
            o[2] + u * x[2] + v * y[2] + w * z[2],
        )


_NAMED_PLANES = {
    "XY": ((1, 0, 0), (0, 0, 1)),
    "YZ": ((0, 1, 0), (1, 0, 0)),
    "XZ": ((1, 0, 0), (0, -1, 0)),
    "front": ((1, 0, 0), (0, 0, 1)),
}


class Solid:
    """Closed triangle mesh: vertex coordinate list plus index triples."""

    def __init__(self, vertices, faces):
        self.vertices = [tuple(map(float, v)) for v in vertices]
        self.faces = [tuple(map(int, f)) for f in faces]

    def tessellate(self, tolerance=1e-3, angularTolerance=0.1):
        return [Vector(*v) for v in self.vertices], list(self.faces)

    def bounding_box(self):
        xs = [v[0] for v in self.vertices]
        ys = [v[1] for v in self.vertices]
        zs = [v[2] for v in self.vertices]
        return (min(xs), min(ys), min(zs)), (max(xs), max(ys), max(zs))

    def fused_with(self, other: "Solid") -> "Solid":
        lo_a, hi_a = self.bounding_box()
        lo_b, hi_b = other.bounding_box()
        separated = any(hi_a[k] < lo_b[k] or hi_b[k] < lo_a[k] for k in range(3))
        if not separated:
            raise KernelLimitation(
                "union of overlapping or touching bodies requires the real "
                "cadquery package; the fallback kernel only joins disjoint bodies"
            )
        offset = len(self.vertices)
        return Solid(
            self.vertices + other.vertices,
            self.faces + [(a + offset, b + offset, c + offset) for a, b, c in other.faces],
        )

    def val(self):
        return self


class Workplane:
    def __init__(self, inPlane="XY", origin=(0, 0, 0), obj=None):
        if isinstance(inPlane, Plane):
            self.plane = inPlane
        elif isinstance(inPlane, str):
            if inPlane not in _NAMED_PLANES:
                raise KernelLimitation(f"unsupported named plane {inPlane!r}")
            xdir, normal = _NAMED_PLANES[inPlane]
            self.plane = Plane(origin=origin, xDir=xdir, normal=normal)
        else:
            raise KernelLimitation(f"unsupported workplane argument {inPlane!r}")
        self._point = None  # current 2D pen position
        self._path = []  # drawn segments of the open wire
        self._wires = []  # closed loops: ('ring', [points]) or ('circle', c, r)
        self._solid: Solid | None = obj

    # --- 2D drawing ---

    def moveTo(self, x=0.0, y=0.0):
        if self._path:
            raise KernelLimitation("moveTo while a wire is open; close() it first")
        out = self._clone()
        out._point = (float(x), float(y))
        return out

    def lineTo(self, x, y):
        start = self._pen()
        end = (float(x), float(y))
        if math.dist(start, end) < _COINCIDENT:
            raise KernelLimitation("zero-length line segment")
        out = self._clone()
        out._path = self._path + [("line", start, end)]
        out._point = end
        return out

    def threePointArc(self, point1, point2):
        start = self._pen()
        mid = (float(point1[0]), float(point1[1]))
        end = (float(point2[0]), float(point2[1]))
        out = self._clone()
        out._path = self._path + [("arc", start, mid, end)]
        out._point = end
        return out

    def circle(self, radius, forConstruction=False):
        if radius <= 0:
            raise KernelLimitation(f"non-positive circle radius {radius}")
        center = self._point if self._point is not None else (0.0, 0.0)
        out = self._clone()
        out._wires = self._wires + [("circle", center, float(radius))]
        return out

    def close(self):
        if not self._path:
            raise KernelLimitation("close() with no drawn segments")
        first = self._path[0][1]
        last = self._path[-1][-1]
        path = list(self._path)
        if math.dist(first, last) > _COINCIDENT:
            path.append(("line", last, first))
        out = self._clone()
        out._wires = self._wires + [("path", path)]
        out._path = []
        out._point = None
        return out

    # --- solid building ---

    def extrude(self, until, combine=True, clean=True, both=False, taper=None):
        if taper:
            raise KernelLimitation("tapered extrude is not supported by the fallback kernel")
        distance = float(until)
        if abs(distance) < _COINCIDENT:
            raise KernelLimitation("zero extrude distance")
        if not self._wires:
            raise KernelLimitation("extrude with no pending wires")
        z0, z1 = (-distance, distance) if both else (0.0, distance)
        zlo, zhi = min(z0, z1), max(z0, z1)
        tolerance = _tessellation_tolerance()
        rings = [self._discretize(w, tolerance) for w in self._wires]
        solid = _prism_from_rings(self.plane, rings, zlo, zhi)
        if self._solid is not None:
            solid = self._solid.fused_with(solid)
        out = self._clone()
        out._wires = []
        out._solid = solid
        return out

    @staticmethod
    def _discretize(wire, tolerance):
        kind = wire[0]
        if kind == "circle":
            _, center, radius = wire
            return circle_ring(center, radius, tolerance)
        _, path = wire
        # collect segment end points; the last end is the loop start, so the
        # ring closes without any duplicated vertex
        ring = []
        for segment in path:
            if segment[0] == "line":
                ring.append(segment[2])
            else:
                _, start, mid, end = segment
                ring.extend(arc_points(start, mid, end, tolerance))
        deduped = [ring[0]]
        for p in ring[1:]:
            if math.dist(p, deduped[-1]) > _COINCIDENT:
                deduped.append(p)
        if math.dist(deduped[0], deduped[-1]) < _COINCIDENT:
            deduped.pop()
        if len(deduped) < 3:
            raise KernelLimitation("profile collapses to fewer than 3 points")
        return deduped

    def union(self, other, clean=True):
        out = self._clone()
        out._solid = self._require_solid().fused_with(_solid_of(other))
        return out

    def cut(self, other, clean=True):
        raise KernelLimitation(
            "boolean cut requires the real cadquery package; the fallback "
            "kernel cannot subtract bodies"
        )

    def intersect(self, other, clean=True):
        raise KernelLimitation(
            "boolean intersect requires the real cadquery package"
        )

    def val(self):
        return self._require_solid()

    def _require_solid(self) -> Solid:
        if self._solid is None:
            raise KernelLimitation("workplane holds no solid yet")
        return self._solid

    def _pen(self):
        if self._point is None:
            raise KernelLimitation("drawing before moveTo")
        return self._point

    def _clone(self) -> "Workplane":
        out = Workplane.__new__(Workplane)
        out.plane = self.plane
        out._point = self._point
        out._path = self._path
        out._wires = self._wires
        out._solid = self._solid
        return out


def _solid_of(other) -> Solid:
    if isinstance(other, Workplane):
        return other._require_solid()
    if isinstance(other, Solid):
        return other
    raise KernelLimitation(f"cannot combine with {type(other).__name__}")


def _prism_from_rings(plane: Plane, rings, zlo, zhi) -> Solid:
    height = zhi - zlo
    if height < _COINCIDENT:
        raise KernelLimitation("zero-height prism")
    groups = group_rings(rings)

    vertices = []
    faces = []
    for outer_index, hole_indices in groups:
        ring_ids = {}
        tagged = {}
        for ridx in [outer_index, *hole_indices]:
            ring = rings[ridx]
            want_ccw = ridx == outer_index
            if (signed_area(ring) > 0) != want_ccw:
                ring = ring[::-1]
            base = len(vertices)
            for u, v in ring:
                vertices.append(plane.to_world(u, v, zlo))
                vertices.append(plane.to_world(u, v, zhi))
            ids = [(base + 2 * i, base + 2 * i + 1) for i in range(len(ring))]
            ring_ids[ridx] = (ring, ids)
            tagged[ridx] = [(ids[i], ring[i]) for i in range(len(ring))]

        merged = merge_holes(
            tagged[outer_index], [tagged[h] for h in hole_indices]
        )
        cap = earclip(merged)
        for (a_bot, a_top), (b_bot, b_top), (c_bot, c_top) in cap:
            faces.append((a_top, b_top, c_top))  # +normal cap
            faces.append((a_bot, c_bot, b_bot))  # -normal cap, reversed
        for ridx, (ring, ids) in ring_ids.items():
            n = len(ids)
            for i in range(n):
                j = (i + 1) % n
                bi, ti = ids[i]
                bj, tj = ids[j]
                faces.append((bi, bj, tj))
                faces.append((bi, tj, ti))
    return Solid(vertices, faces)


__all__ = ["Plane", "Solid", "Vector", "Workplane", "KernelLimitation"]
