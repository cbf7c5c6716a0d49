"""Exact polyhedral mass properties and shape normalization.

Volume, centroid and second moments are integrated exactly over the
watertight boundary with the divergence theorem: every triangle (a, b, c)
contributes the signed tetrahedron spanned with the origin, for which the
monomial integrals have closed forms,

    V   += det(a, b, c) / 6
    M1  += det * (a + b + c) / 24
    M2  += det / 120 * (a a^T + b b^T + c c^T + s s^T),   s = a + b + c.

The inertia matrix about the centroid follows as tr(C) Id - C from the
central second-moment matrix C = M2 - V xbar xbar^T, so its trace equals
twice the integral of squared distance to the centroid.

Normalization divides centered vertices by the root mean squared radius of
gyration sqrt(tr(I) / (2 Vol)), which makes centroid = 0 and
tr(I) / (2 Vol) = 1; similar solids normalize to coincident shapes.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateVolume, NotWatertight
from .mesh import TriMesh

_MIN_VOLUME = 1e-12


@dataclass(frozen=True)
class MassProperties:
    volume: float
    centroid: np.ndarray  # (3,)
    inertia: np.ndarray  # (3, 3) about the centroid, unit density
    trace: float
    orientation_flipped: bool = False

    def __post_init__(self):
        c = np.asarray(self.centroid, dtype=np.float64)
        i = np.asarray(self.inertia, dtype=np.float64)
        c.setflags(write=False)
        i.setflags(write=False)
        object.__setattr__(self, "centroid", c)
        object.__setattr__(self, "inertia", i)


def mass_properties(mesh: TriMesh) -> MassProperties:
    """Volume, centroid and central inertia of a watertight mesh.

    If the signed volume comes out negative the winding convention of the
    whole file is inverted; the integrals are negated and the result is
    flagged with orientation_flipped.
    """
    mesh.validate_watertight()
    volume, m1, m2 = _raw_moments(mesh)

    flipped = False
    if volume < 0.0:
        volume, m1, m2 = -volume, -m1, -m2
        flipped = True
    if abs(volume) < _MIN_VOLUME:
        raise DegenerateVolume(f"enclosed volume {volume:.3e} below 1e-12")

    centroid = m1 / volume
    central = m2 - volume * np.outer(centroid, centroid)
    inertia = np.trace(central) * np.eye(3) - central
    inertia = 0.5 * (inertia + inertia.T)  # scrub accumulation asymmetry
    return MassProperties(
        volume=float(volume),
        centroid=centroid,
        inertia=inertia,
        trace=float(np.trace(inertia)),
        orientation_flipped=flipped,
    )


def _raw_moments(mesh: TriMesh) -> tuple[float, np.ndarray, np.ndarray]:
    a, b, c = mesh.corners()
    det = np.einsum("ij,ij->i", a, np.cross(b, c))
    volume = det.sum() / 6.0
    m1 = (det[:, None] * (a + b + c)).sum(axis=0) / 24.0
    s = a + b + c
    outer = (
        np.einsum("ij,ik->jk", det[:, None] * a, a)
        + np.einsum("ij,ik->jk", det[:, None] * b, b)
        + np.einsum("ij,ik->jk", det[:, None] * c, c)
        + np.einsum("ij,ik->jk", det[:, None] * s, s)
    )
    m2 = outer / 120.0
    return float(volume), m1, m2


def second_moment_about(mesh: TriMesh, point) -> float:
    """Integral of squared distance to ``point``, accumulated directly.

    Independent of mass_properties' central-moment algebra: the mesh is
    shifted so ``point`` is the origin and tr(M2) is integrated from
    scratch, which makes this a cross-check for the trace identity
    tr(I) = 2 * integral of |x - point|^2.
    """
    shifted = mesh.transformed(translation=-np.asarray(point, dtype=np.float64))
    volume, _, m2 = _raw_moments(shifted)
    sign = -1.0 if volume < 0 else 1.0
    return float(sign * np.trace(m2))


def normalize_solid(mesh: TriMesh) -> tuple[TriMesh, np.ndarray, float]:
    """Center at the centroid and rescale to unit RMS radius of gyration.

    Returns (normalized_mesh, applied_translation, applied_scale) with
    normalized vertices = (v + applied_translation) * applied_scale.
    """
    props = mass_properties(mesh)
    divisor = float(np.sqrt(props.trace / (2.0 * props.volume)))
    translation = -props.centroid
    scale = 1.0 / divisor
    out = TriMesh((mesh.vertices - props.centroid) * scale, mesh.triangles)
    return out, translation, scale


def principal_axes(props: MassProperties) -> tuple[np.ndarray, np.ndarray]:
    """Ascending inertia eigenvalues and a right-handed eigenvector frame.

    Columns of the returned matrix are unit eigenvectors ordered by
    eigenvalue; the third column is flipped if needed so the determinant
    is +1.
    """
    inertia = np.asarray(props.inertia, dtype=np.float64)
    if not np.allclose(inertia, inertia.T, rtol=1e-9, atol=1e-12):
        raise ValueError("inertia matrix must be symmetric")
    eigenvalues, axes = np.linalg.eigh(inertia)
    axes = np.array(axes)
    if np.linalg.det(axes) < 0:
        axes[:, 2] = -axes[:, 2]
    return eigenvalues, axes
