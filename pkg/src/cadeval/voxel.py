"""Voxel occupancy grids by ray-parity inside tests.

A voxel is occupied iff its center lies inside the solid, decided by
counting surface crossings of the +x ray through the center.  All centers
of one (y, z) column share a ray, so crossings are gathered per column and
turned into occupancy with a parity prefix sum along x.

Rays that graze an edge, vertex, or coplanar triangle are degenerate: the
crossing count is unreliable.  Affected columns are re-cast with the ray
nudged by 1e-7 * cell_size in the (y, z) plane, up to three times.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import EmptyUnion, GridMismatch, ResolutionOutOfRange
from .mesh import TriMesh

_JITTER_SCALE = 1e-7
_JITTER_DIR = (1.0, 0.7548776662466927)  # irrational slope: leaves rational edges
_PARALLEL_TOL = 1e-12


@dataclass(frozen=True)
class VoxelGrid:
    origin: np.ndarray  # (3,) lower corner of cell (0, 0, 0)
    cell_size: float
    dims: tuple[int, int, int]
    occupancy: np.ndarray  # bool, shape dims

    def __post_init__(self):
        o = np.asarray(self.origin, dtype=np.float64)
        occ = np.asarray(self.occupancy, dtype=bool)
        if self.cell_size <= 0:
            raise ValueError("cell_size must be > 0")
        if occ.shape != tuple(self.dims):
            raise ValueError(f"occupancy shape {occ.shape} != dims {self.dims}")
        o.setflags(write=False)
        occ.setflags(write=False)
        object.__setattr__(self, "origin", o)
        object.__setattr__(self, "dims", tuple(int(d) for d in self.dims))
        object.__setattr__(self, "occupancy", occ)

    def occupied_count(self) -> int:
        return int(self.occupancy.sum())

    def occupancy_fraction(self) -> float:
        return float(self.occupancy.mean())


def voxelize(
    mesh: TriMesh,
    resolution: int,
    bounds: tuple[np.ndarray, np.ndarray],
) -> VoxelGrid:
    """Rasterize a watertight mesh into the axis-aligned box ``bounds``.

    The longest box edge is split into ``resolution`` cells; the other axes
    get enough cells of the same size to cover the box.
    """
    if not 8 <= resolution <= 512:
        raise ResolutionOutOfRange(f"resolution {resolution} outside [8, 512]")
    mesh.validate_watertight()

    lo = np.asarray(bounds[0], dtype=np.float64)
    hi = np.asarray(bounds[1], dtype=np.float64)
    extent = hi - lo
    if (extent <= 0).any():
        raise ValueError(f"bounds must have positive extent, got {extent}")
    cell = float(extent.max()) / resolution
    dims = tuple(int(np.ceil(extent[k] / cell - 1e-12)) for k in range(3))

    centers = [lo[k] + (np.arange(dims[k]) + 0.5) * cell for k in range(3)]
    occupancy = _ray_parity_occupancy(mesh, centers, cell)
    return VoxelGrid(origin=lo, cell_size=cell, dims=dims, occupancy=occupancy)


def _ray_parity_occupancy(mesh: TriMesh, centers, cell: float) -> np.ndarray:
    xc, yc, zc = centers
    nx, ny, nz = len(xc), len(yc), len(zc)
    a, b, c = mesh.corners()
    normals = np.cross(b - a, c - a)

    flips = np.zeros((nx + 1, ny, nz), dtype=np.int16)
    degenerate = np.zeros((ny, nz), dtype=bool)
    tol = 1e-9 * cell

    for t in range(len(mesh.triangles)):
        _scan_triangle(
            a[t], b[t], c[t], normals[t], xc, yc, zc, flips, degenerate, tol
        )

    # re-cast degenerate columns with a nudged ray
    bad = np.argwhere(degenerate)
    for j, k in bad:
        column = _recast_column(
            a, b, c, normals, xc, float(yc[j]), float(zc[k]), cell, tol
        )
        flips[:, j, k] = 0
        flips[: len(column), j, k] = column

    occupancy = (np.cumsum(flips, axis=0)[:nx] % 2).astype(bool)
    return occupancy


def _scan_triangle(p, q, r, n, xc, yc, zc, flips, degenerate, tol):
    """Accumulate +x ray crossings of one triangle over its (y, z) bbox."""
    py, pz = p[1], p[2]
    qy, qz = q[1], q[2]
    ry, rz = r[1], r[2]
    ylo, yhi = min(py, qy, ry), max(py, qy, ry)
    zlo, zhi = min(pz, qz, rz), max(pz, qz, rz)
    j0 = np.searchsorted(yc, ylo - tol, side="left")
    j1 = np.searchsorted(yc, yhi + tol, side="right")
    k0 = np.searchsorted(zc, zlo - tol, side="left")
    k1 = np.searchsorted(zc, zhi + tol, side="right")
    if j0 >= j1 or k0 >= k1:
        return

    ys = yc[j0:j1][:, None]
    zs = zc[k0:k1][None, :]

    e0, l0 = _edge_values(py, pz, qy, qz, ys, zs)
    e1, l1 = _edge_values(qy, qz, ry, rz, ys, zs)
    e2, l2 = _edge_values(ry, rz, py, pz, ys, zs)

    area2 = n[0]
    if abs(area2) <= _PARALLEL_TOL * max(l0, l1, l2) ** 2:
        # triangle parallel to the ray: a graze is degenerate, else ignore
        near = _near_segment(py, pz, qy, qz, ys, zs, tol)
        near |= _near_segment(qy, qz, ry, rz, ys, zs, tol)
        near |= _near_segment(ry, rz, py, pz, ys, zs, tol)
        degenerate[j0:j1, k0:k1] |= near
        return

    sign = 1.0 if area2 > 0 else -1.0
    s0, s1, s2 = e0 * sign, e1 * sign, e2 * sign
    # distance from the ray to each edge line, in plane units
    d0 = np.abs(e0) / l0
    d1 = np.abs(e1) / l1
    d2 = np.abs(e2) / l2
    inside = (s0 > 0) & (s1 > 0) & (s2 > 0)
    boundary = (
        (np.minimum(np.minimum(d0, d1), d2) <= tol)
        & (s0 >= -tol * l0)
        & (s1 >= -tol * l1)
        & (s2 >= -tol * l2)
    )
    degenerate[j0:j1, k0:k1] |= boundary

    hit = inside & ~boundary
    if not hit.any():
        return
    jj, kk = np.nonzero(hit)
    x = p[0] - (n[1] * (ys[jj, 0] - p[1]) + n[2] * (zs[0, kk] - p[2])) / n[0]
    s = np.searchsorted(xc, x, side="right")
    np.add.at(flips, (s, jj + j0, kk + k0), 1)


def _edge_values(ay, az, by, bz, ys, zs):
    """Edge function (twice signed area) and edge length for one edge."""
    ey, ez = by - ay, bz - az
    length = float(np.hypot(ey, ez))
    if length == 0.0:
        length = 1e-300  # collapsed projected edge; distances blow up -> flagged
    values = ey * (zs - az) - ez * (ys - ay)
    return values, length


def _near_segment(ay, az, by, bz, ys, zs, tol):
    ey, ez = by - ay, bz - az
    len2 = ey * ey + ez * ez
    dy = ys - ay
    dz = zs - az
    if len2 == 0.0:
        return dy * dy + dz * dz <= tol * tol
    t = np.clip((dy * ey + dz * ez) / len2, 0.0, 1.0)
    qy = dy - t * ey
    qz = dz - t * ez
    return qy * qy + qz * qz <= tol * tol


def _recast_column(a, b, c, normals, xc, y0, z0, cell, tol):
    """Parity flips for one column, retrying with a nudged ray origin."""
    dy, dz = _JITTER_DIR
    norm = float(np.hypot(dy, dz))
    dy, dz = dy / norm, dz / norm
    last = None
    for attempt in range(4):
        step = attempt * _JITTER_SCALE * cell
        y, z = y0 + step * dy, z0 + step * dz
        flips, clean = _column_crossings(a, b, c, normals, xc, y, z, tol)
        last = flips
        if clean:
            return flips
    return last


def _column_crossings(a, b, c, normals, xc, y, z, tol):
    e0 = (b[:, 1] - a[:, 1]) * (z - a[:, 2]) - (b[:, 2] - a[:, 2]) * (y - a[:, 1])
    e1 = (c[:, 1] - b[:, 1]) * (z - b[:, 2]) - (c[:, 2] - b[:, 2]) * (y - b[:, 1])
    e2 = (a[:, 1] - c[:, 1]) * (z - c[:, 2]) - (a[:, 2] - c[:, 2]) * (y - c[:, 1])
    l0 = np.hypot(b[:, 1] - a[:, 1], b[:, 2] - a[:, 2])
    l1 = np.hypot(c[:, 1] - b[:, 1], c[:, 2] - b[:, 2])
    l2 = np.hypot(a[:, 1] - c[:, 1], a[:, 2] - c[:, 2])
    np.maximum(l0, 1e-300, out=l0)
    np.maximum(l1, 1e-300, out=l1)
    np.maximum(l2, 1e-300, out=l2)

    area2 = normals[:, 0]
    scale2 = np.maximum(np.maximum(l0, l1), l2) ** 2
    parallel = np.abs(area2) <= _PARALLEL_TOL * scale2

    sign = np.where(area2 >= 0, 1.0, -1.0)
    s0, s1, s2 = e0 * sign, e1 * sign, e2 * sign
    dmin = np.minimum(np.minimum(np.abs(e0) / l0, np.abs(e1) / l1), np.abs(e2) / l2)
    inside = (s0 > 0) & (s1 > 0) & (s2 > 0) & ~parallel
    boundary = (
        (dmin <= tol)
        & (s0 >= -tol * l0)
        & (s1 >= -tol * l1)
        & (s2 >= -tol * l2)
        & ~parallel
    )
    graze = parallel & (
        _near_segment_rows(a, b, y, z, tol)
        | _near_segment_rows(b, c, y, z, tol)
        | _near_segment_rows(c, a, y, z, tol)
    )
    clean = not (boundary.any() or graze.any())

    flips = np.zeros(len(xc) + 1, dtype=np.int16)
    hit = inside & ~boundary
    if hit.any():
        idx = np.nonzero(hit)[0]
        x = a[idx, 0] - (
            normals[idx, 1] * (y - a[idx, 1]) + normals[idx, 2] * (z - a[idx, 2])
        ) / normals[idx, 0]
        s = np.searchsorted(xc, x, side="right")
        np.add.at(flips, s, 1)
    return flips, clean


def _near_segment_rows(a, b, y, z, tol):
    ey = b[:, 1] - a[:, 1]
    ez = b[:, 2] - a[:, 2]
    len2 = ey * ey + ez * ez
    dy = y - a[:, 1]
    dz = z - a[:, 2]
    t = np.divide(dy * ey + dz * ez, len2, out=np.zeros_like(len2), where=len2 > 0)
    np.clip(t, 0.0, 1.0, out=t)
    qy = dy - t * ey
    qz = dz - t * ez
    return qy * qy + qz * qz <= tol * tol


def iou(grid_a: VoxelGrid, grid_b: VoxelGrid) -> float:
    """Intersection over union of two occupancy grids on the same lattice."""
    if (
        grid_a.dims != grid_b.dims
        or grid_a.cell_size != grid_b.cell_size
        or not np.array_equal(grid_a.origin, grid_b.origin)
    ):
        raise GridMismatch(
            "grids differ in origin, cell size or dimensions; "
            "voxelize both meshes into the same bounds"
        )
    intersection = int(np.count_nonzero(grid_a.occupancy & grid_b.occupancy))
    union = int(np.count_nonzero(grid_a.occupancy | grid_b.occupancy))
    if union == 0:
        raise EmptyUnion("both grids are empty; IOU undefined")
    return intersection / union
