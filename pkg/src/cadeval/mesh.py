"""Indexed triangle meshes and STL input/output.

A TriMesh stores vertices and outward-oriented triangles as read-only
numpy arrays.  Watertightness (every edge shared by exactly two triangles
with opposite orientation) is validated on demand, not at construction,
since only the volume integrals and the inside tests require it.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass, field

import numpy as np

from .errors import EmptyMesh, MalformedStl, NotWatertight

_WELD_TOL = 1e-9
_DEGENERATE_AREA = 1e-12


@dataclass(frozen=True)
class TriMesh:
    vertices: np.ndarray  # (n, 3) float64
    triangles: np.ndarray  # (m, 3) int64, outward winding

    def __post_init__(self):
        v = np.ascontiguousarray(np.asarray(self.vertices, dtype=np.float64))
        t = np.ascontiguousarray(np.asarray(self.triangles, dtype=np.int64))
        if v.ndim != 2 or v.shape[1] != 3:
            raise ValueError(f"vertices must be (n, 3), got {v.shape}")
        if t.ndim != 2 or t.shape[1] != 3:
            raise ValueError(f"triangles must be (m, 3), got {t.shape}")
        if t.size and (t.min() < 0 or t.max() >= len(v)):
            raise ValueError("triangle index out of range")
        v.setflags(write=False)
        t.setflags(write=False)
        object.__setattr__(self, "vertices", v)
        object.__setattr__(self, "triangles", t)
        areas2 = _double_areas(v, t)
        if areas2.size and (areas2 < 2.0 * _DEGENERATE_AREA).any():
            bad = int(np.argmin(areas2))
            raise ValueError(
                f"degenerate triangle {bad}: area {areas2[bad] / 2.0:.3e} <= 1e-12"
            )

    def __len__(self) -> int:
        return len(self.triangles)

    def corners(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Per-triangle corner coordinate arrays (a, b, c), each (m, 3)."""
        v, t = self.vertices, self.triangles
        return v[t[:, 0]], v[t[:, 1]], v[t[:, 2]]

    def bounds(self) -> tuple[np.ndarray, np.ndarray]:
        return self.vertices.min(axis=0), self.vertices.max(axis=0)

    def diameter(self) -> float:
        lo, hi = self.bounds()
        return float(np.linalg.norm(hi - lo))

    def transformed(
        self,
        rotation: np.ndarray | None = None,
        scale: float = 1.0,
        translation=None,
    ) -> "TriMesh":
        """New mesh with vertices scale * (R @ v) + translation."""
        v = self.vertices
        if rotation is not None:
            v = v @ np.asarray(rotation, dtype=np.float64).T
        v = v * float(scale)
        if translation is not None:
            v = v + np.asarray(translation, dtype=np.float64)
        return TriMesh(v, self.triangles)

    def flipped(self) -> "TriMesh":
        return TriMesh(self.vertices, self.triangles[:, ::-1])

    def validate_watertight(self) -> None:
        """Raise NotWatertight unless the boundary is a closed 2-manifold."""
        t = self.triangles
        edges = np.concatenate([t[:, [0, 1]], t[:, [1, 2]], t[:, [2, 0]]])
        lo = edges.min(axis=1)
        hi = edges.max(axis=1)
        forward = edges[:, 0] < edges[:, 1]
        key = lo.astype(np.int64) * len(self.vertices) + hi
        order = np.argsort(key, kind="stable")
        key_sorted = key[order]
        fwd_sorted = forward[order]
        boundaries = np.flatnonzero(np.diff(key_sorted)) + 1
        starts = np.concatenate([[0], boundaries])
        ends = np.concatenate([boundaries, [len(key_sorted)]])
        counts = ends - starts
        if (counts != 2).any():
            bad = int(np.argmax(counts != 2))
            raise NotWatertight(
                f"edge shared by {counts[bad]} triangles (expected 2); "
                "mesh is not a closed 2-manifold"
            )
        fwd_counts = np.add.reduceat(fwd_sorted.astype(np.int64), starts)
        if (fwd_counts != 1).any():
            raise NotWatertight(
                "edge traversed twice in the same direction; inconsistent winding"
            )


def _double_areas(v: np.ndarray, t: np.ndarray) -> np.ndarray:
    if len(t) == 0:
        return np.zeros(0)
    a, b, c = v[t[:, 0]], v[t[:, 1]], v[t[:, 2]]
    return np.linalg.norm(np.cross(b - a, c - a), axis=1)


# --- STL ---

def load_stl(data: bytes) -> TriMesh:
    """Parse binary or text STL bytes into a welded TriMesh.

    Binary vertices are welded on exact bit match; text vertices are welded
    at tolerance 1e-9.  Triangles that collapse onto fewer than three
    distinct vertices after welding are dropped.
    """
    if not isinstance(data, (bytes, bytearray)):
        raise MalformedStl("expected STL file content as bytes")
    if _looks_like_text_stl(data):
        tris = _parse_text_stl(data)
        return _weld(tris, exact=False)
    tris = _parse_binary_stl(data)
    return _weld(tris, exact=True)


def _looks_like_text_stl(data: bytes) -> bool:
    head = data.lstrip()[:5]
    if head != b"solid":
        return False
    # binary files may still start with "solid": require a facet keyword
    return b"facet" in data[:2048] or b"endsolid" in data[:2048]


def _parse_binary_stl(data: bytes) -> np.ndarray:
    if len(data) < 84:
        raise MalformedStl(f"binary STL truncated: {len(data)} bytes < 84")
    (count,) = struct.unpack_from("<I", data, 80)
    expected = 84 + 50 * count
    if len(data) < expected:
        raise MalformedStl(
            f"binary STL truncated: {len(data)} bytes, {expected} required "
            f"for {count} triangles"
        )
    if count == 0:
        raise EmptyMesh("STL contains zero triangles")
    records = np.frombuffer(data, dtype=np.uint8, count=50 * count, offset=84)
    records = records.reshape(count, 50)
    floats = records[:, :48].copy().view("<f4").reshape(count, 4, 3)
    return floats[:, 1:, :].astype(np.float64)  # drop stored normals


def _parse_text_stl(data: bytes) -> np.ndarray:
    try:
        text = data.decode("utf-8", errors="strict")
    except UnicodeDecodeError as exc:
        raise MalformedStl(f"text STL is not valid UTF-8: {exc}") from exc
    tris = []
    current: list[list[float]] = []
    closed = False
    for ln, rawline in enumerate(text.splitlines(), start=1):
        tokens = rawline.split()
        if not tokens:
            continue
        if tokens[0] == "vertex":
            if len(tokens) != 4:
                raise MalformedStl(f"line {ln}: vertex needs 3 coordinates")
            try:
                current.append([float(x) for x in tokens[1:]])
            except ValueError as exc:
                raise MalformedStl(f"line {ln}: bad vertex number") from exc
        elif tokens[0] == "endfacet":
            if len(current) != 3:
                raise MalformedStl(f"line {ln}: facet with {len(current)} vertices")
            tris.append(current)
            current = []
        elif tokens[0] == "endsolid":
            closed = True
    if current:
        raise MalformedStl("text STL ends inside a facet")
    if not closed:
        raise MalformedStl("text STL missing endsolid")
    if not tris:
        raise EmptyMesh("STL contains zero triangles")
    return np.asarray(tris, dtype=np.float64)


def _weld(tris: np.ndarray, exact: bool) -> TriMesh:
    flat = tris.reshape(-1, 3)
    if exact:
        keyed = flat.view([("x", "f8"), ("y", "f8"), ("z", "f8")]).reshape(-1)
    else:
        quantized = np.round(flat / _WELD_TOL).astype(np.int64)
        keyed = quantized.view([("x", "i8"), ("y", "i8"), ("z", "i8")]).reshape(-1)
    _, first, inverse = np.unique(keyed, return_index=True, return_inverse=True)
    # preserve first-appearance order for deterministic vertex numbering
    order = np.argsort(first, kind="stable")
    rank = np.empty_like(order)
    rank[order] = np.arange(len(order))
    vertices = flat[np.sort(first)]
    faces = rank[inverse].reshape(-1, 3)
    distinct = (
        (faces[:, 0] != faces[:, 1])
        & (faces[:, 1] != faces[:, 2])
        & (faces[:, 2] != faces[:, 0])
    )
    faces = faces[distinct]
    if len(faces) == 0:
        raise EmptyMesh("all triangles degenerate after vertex welding")
    return TriMesh(vertices, faces)


def save_stl(mesh: TriMesh, header: str = "cadeval") -> bytes:
    """Serialize a mesh as binary STL with computed facet normals."""
    a, b, c = mesh.corners()
    normals = np.cross(b - a, c - a)
    lengths = np.linalg.norm(normals, axis=1, keepdims=True)
    normals = np.divide(normals, lengths, out=np.zeros_like(normals), where=lengths > 0)

    m = len(mesh)
    out = bytearray()
    out += header.encode("ascii", errors="replace")[:80].ljust(80, b"\x00")
    out += struct.pack("<I", m)
    record = np.zeros((m, 50), dtype=np.uint8)
    block = np.concatenate(
        [normals.astype("<f4"), a.astype("<f4"), b.astype("<f4"), c.astype("<f4")],
        axis=1,
    )
    record[:, :48] = block.view(np.uint8).reshape(m, 48)
    out += record.tobytes()
    return bytes(out)
