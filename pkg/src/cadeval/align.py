"""Optimal rigid-body alignment and the IOU_best metric.

Two solids are compared by normalizing each to zero centroid and unit RMS
radius of gyration, aligning principal inertia axes, and scoring voxel
intersection-over-union.  Principal directions carry a sign ambiguity:
of the eight sign choices four are proper rotations, so all four are
evaluated and the best IOU wins.

For known point correspondences the same alignment problem has a closed
form: scale from the ratio of RMS spreads, rotation from the SVD of the
cross-covariance (orthogonal Procrustes with a determinant correction
that excludes reflections), translation from the mapped centroids.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    DegenerateConfiguration,
    InvalidRotationInput,
    LengthMismatch,
)
from .mesh import TriMesh
from .moments import mass_properties, normalize_solid, principal_axes
from .voxel import VoxelGrid, iou, voxelize

_ORTHO_TOL = 1e-9
_SIGN_FLIPS = (
    (1.0, 1.0, 1.0),
    (1.0, -1.0, -1.0),
    (-1.0, 1.0, -1.0),
    (-1.0, -1.0, 1.0),
)


@dataclass(frozen=True)
class AlignmentResult:
    rotation: np.ndarray  # (3, 3) in SO(3)
    scale: float
    translation: np.ndarray  # (3,)
    iou: float
    candidate_index: int
    degenerate_inertia: bool = False

    def __post_init__(self):
        r = np.asarray(self.rotation, dtype=np.float64)
        t = np.asarray(self.translation, dtype=np.float64)
        r.setflags(write=False)
        t.setflags(write=False)
        object.__setattr__(self, "rotation", r)
        object.__setattr__(self, "translation", t)


def _check_rotation(m: np.ndarray, name: str) -> np.ndarray:
    m = np.asarray(m, dtype=np.float64)
    if m.shape != (3, 3):
        raise InvalidRotationInput(f"{name} must be 3x3, got {m.shape}")
    if np.abs(m.T @ m - np.eye(3)).max() > _ORTHO_TOL:
        raise InvalidRotationInput(f"{name} is not orthonormal")
    if abs(np.linalg.det(m) - 1.0) > _ORTHO_TOL:
        raise InvalidRotationInput(f"{name} has determinant {np.linalg.det(m):+.6f}")
    return m


def rotation_candidates(axes_a: np.ndarray, axes_b: np.ndarray) -> list[np.ndarray]:
    """The four proper rotations taking frame ``axes_a`` onto ``axes_b``.

    Each candidate is axes_b @ D @ axes_a.T for a diagonal sign matrix D
    with determinant +1.
    """
    a = _check_rotation(axes_a, "axes_a")
    b = _check_rotation(axes_b, "axes_b")
    return [b @ np.diag(d) @ a.T for d in _SIGN_FLIPS]


def union_bounds(
    meshes: list[TriMesh], pad_fraction: float = 0.02
) -> tuple[np.ndarray, np.ndarray]:
    """Axis-aligned box containing every mesh, padded per axis."""
    lo = np.min([m.bounds()[0] for m in meshes], axis=0)
    hi = np.max([m.bounds()[1] for m in meshes], axis=0)
    pad = pad_fraction * (hi - lo)
    return lo - pad, hi + pad


def iou_best(mesh_a: TriMesh, mesh_b: TriMesh, resolution: int = 128) -> AlignmentResult:
    """Best-of-four-alignments IOU between two solids.

    Both meshes are normalized, the four principal-axes alignments of A
    onto B are rasterized into a shared 2%-padded bounding grid, and the
    highest IOU is returned together with the similarity transform
    x -> scale * R x + t that maps original A toward original B.
    """
    norm_a, trans_a, scale_a = normalize_solid(mesh_a)
    norm_b, trans_b, scale_b = normalize_solid(mesh_b)
    props_a = mass_properties(norm_a)
    props_b = mass_properties(norm_b)
    evals_a, axes_a = principal_axes(props_a)
    evals_b, axes_b = principal_axes(props_b)
    candidates = rotation_candidates(axes_a, axes_b)

    best_iou = -1.0
    best_index = -1
    for index, rot in enumerate(candidates):
        rotated = norm_a.transformed(rotation=rot)
        bounds = union_bounds([rotated, norm_b])
        grid_a = voxelize(rotated, resolution, bounds)
        grid_b = voxelize(norm_b, resolution, bounds)
        value = iou(grid_a, grid_b)
        if value > best_iou:
            best_iou = value
            best_index = index

    rotation = candidates[best_index]
    # normalization scales are 1/d with d the RMS radius of gyration, so
    # the similarity scale mapping A onto B is d_b / d_a = scale_a / scale_b
    scale = scale_a / scale_b
    centroid_a = -trans_a
    centroid_b = -trans_b
    translation = centroid_b - scale * (rotation @ centroid_a)

    degenerate = _degenerate_inertia(evals_a) or _degenerate_inertia(evals_b)
    return AlignmentResult(
        rotation=rotation,
        scale=float(scale),
        translation=translation,
        iou=float(best_iou),
        candidate_index=best_index,
        degenerate_inertia=degenerate,
    )


def _degenerate_inertia(eigenvalues: np.ndarray) -> bool:
    gaps = np.diff(np.sort(eigenvalues))
    return bool(gaps.min() < 1e-6 * eigenvalues.sum())


def procrustes_align(
    points_a: np.ndarray, points_b: np.ndarray
) -> tuple[np.ndarray, float, np.ndarray, float]:
    """Similarity transform (R, s, t) minimizing sum |s R a + t - b|^2.

    Scale is the ratio of RMS spreads about the centroids; rotation comes
    from the SVD of the cross-covariance S = sum (b - bbar)(a - abar)^T
    with the smallest singular direction sign-corrected so det(R) = +1;
    translation maps the scaled, rotated centroid of A onto B's.
    Returns (rotation, scale, translation, residual).
    """
    a = np.asarray(points_a, dtype=np.float64)
    b = np.asarray(points_b, dtype=np.float64)
    if a.ndim != 2 or a.shape[1] != 3 or b.shape != a.shape:
        raise LengthMismatch(
            f"point lists must both be (n, 3) with equal n, got {a.shape} and {b.shape}"
        )
    if len(a) < 3:
        raise LengthMismatch(f"need at least 3 correspondences, got {len(a)}")

    centroid_a = a.mean(axis=0)
    centroid_b = b.mean(axis=0)
    ca = a - centroid_a
    cb = b - centroid_b

    spread_a = float(np.einsum("ij,ij->", ca, ca))
    spread_b = float(np.einsum("ij,ij->", cb, cb))
    if spread_a <= 0.0:
        raise DegenerateConfiguration("points_a are all coincident")
    scale = float(np.sqrt(spread_b / spread_a))

    cross = cb.T @ ca  # S = sum (b - bbar)(a - abar)^T
    u, singular, vt = np.linalg.svd(cross)
    if singular[1] <= 1e-12 * max(singular[0], 1e-300):
        raise DegenerateConfiguration(
            "cross-covariance rank < 2 (collinear points); rotation is ill-posed"
        )
    correction = np.sign(np.linalg.det(u @ vt))
    rotation = u @ np.diag([1.0, 1.0, correction]) @ vt

    translation = centroid_b - scale * (rotation @ centroid_a)
    mapped = scale * (a @ rotation.T) + translation
    residual = float(np.einsum("ij,ij->", mapped - b, mapped - b))
    return rotation, scale, translation, residual
