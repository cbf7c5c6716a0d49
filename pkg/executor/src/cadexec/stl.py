"""Binary STL writer for tessellation output (stdlib only)."""

from __future__ import annotations

import math
import struct


def write_binary_stl(path: str, vertices, triangles, header: str = "cadexec") -> None:
    """Write (vertices, index triples) as binary STL with computed normals.

    Vertices may be 3-sequences or objects with x/y/z attributes, matching
    what tessellation returns.
    """
    coords = [_xyz(v) for v in vertices]
    with open(path, "wb") as fh:
        fh.write(header.encode("ascii", errors="replace")[:80].ljust(80, b"\x00"))
        fh.write(struct.pack("<I", len(triangles)))
        for i, j, k in triangles:
            a, b, c = coords[i], coords[j], coords[k]
            n = _unit_normal(a, b, c)
            fh.write(struct.pack("<12fH", *n, *a, *b, *c, 0))


def _xyz(v):
    if hasattr(v, "x"):
        return (float(v.x), float(v.y), float(v.z))
    return (float(v[0]), float(v[1]), float(v[2]))


def _unit_normal(a, b, c):
    ux, uy, uz = b[0] - a[0], b[1] - a[1], b[2] - a[2]
    vx, vy, vz = c[0] - a[0], c[1] - a[1], c[2] - a[2]
    nx, ny, nz = uy * vz - uz * vy, uz * vx - ux * vz, ux * vy - uy * vx
    length = math.sqrt(nx * nx + ny * ny + nz * nz)
    if length == 0.0:
        return (0.0, 0.0, 0.0)
    return (nx / length, ny / length, nz / length)
