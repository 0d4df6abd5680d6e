"""Triangle mesh container, validation, and geometric primitives.

All positions are in millimeters. A mesh is an indexed triangle soup:
an (N, 3) float64 vertex array and an (M, 3) int32 face array. Meshes
are immutable after construction and safe to share across threads.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateTriangleError

# A triangle with area at or below this is degenerate (mm^2). Scanner
# output routinely contains slivers; they are kept in the face list but
# contribute nothing to areas or normal aggregation.
AREA_EPSILON_MM2 = 1e-12


def _freeze(arr: np.ndarray) -> np.ndarray:
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class TriangleMesh:
    """Indexed triangle soup. Construction normalizes array shape and dtype
    but does not enforce semantic invariants; use :func:`validate_mesh`."""

    vertices: np.ndarray
    faces: np.ndarray
    name: str = ""

    def __post_init__(self):
        verts = np.ascontiguousarray(np.asarray(self.vertices, dtype=np.float64))
        faces = np.ascontiguousarray(np.asarray(self.faces, dtype=np.int32))
        if verts.ndim != 2 or verts.shape[1] != 3:
            raise ValueError(f"vertices must be (N, 3), got {verts.shape}")
        if faces.ndim != 2 or faces.shape[1] != 3:
            raise ValueError(f"faces must be (M, 3), got {faces.shape}")
        object.__setattr__(self, "vertices", _freeze(verts))
        object.__setattr__(self, "faces", _freeze(faces))

    @property
    def vertex_count(self) -> int:
        return len(self.vertices)

    @property
    def face_count(self) -> int:
        return len(self.faces)

    def corners(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Per-face corner positions as three (M, 3) arrays."""
        v = self.vertices
        f = self.faces
        return v[f[:, 0]], v[f[:, 1]], v[f[:, 2]]


@dataclass(frozen=True)
class Aabb:
    """Axis-aligned bounding box, min/max corners in mm."""

    min: np.ndarray
    max: np.ndarray

    def __post_init__(self):
        lo = np.asarray(self.min, dtype=np.float64).reshape(3)
        hi = np.asarray(self.max, dtype=np.float64).reshape(3)
        object.__setattr__(self, "min", _freeze(lo))
        object.__setattr__(self, "max", _freeze(hi))

    def size(self) -> np.ndarray:
        return self.max - self.min

    def diagonal(self) -> float:
        return float(np.linalg.norm(self.size()))


@dataclass(frozen=True)
class ValidationReport:
    vertex_count: int
    face_count: int
    degenerate_faces: int
    out_of_range_faces: int
    non_finite_vertices: int
    ok: bool

    def to_record(self) -> dict:
        return {
            "ok": self.ok,
            "vertex_count": self.vertex_count,
            "face_count": self.face_count,
            "degenerate_faces": self.degenerate_faces,
            "out_of_range_faces": self.out_of_range_faces,
            "non_finite_vertices": self.non_finite_vertices,
        }


def triangle_area(v0, v1, v2) -> float:
    """Area of one triangle in mm^2; 0.0 for collinear corners."""
    v0 = np.asarray(v0, dtype=np.float64)
    v1 = np.asarray(v1, dtype=np.float64)
    v2 = np.asarray(v2, dtype=np.float64)
    return 0.5 * float(np.linalg.norm(np.cross(v1 - v0, v2 - v0)))


def triangle_normal(v0, v1, v2) -> np.ndarray:
    """Unit normal of a counter-clockwise wound triangle.

    Raises DegenerateTriangleError when the area is at or below
    AREA_EPSILON_MM2; callers that tolerate slivers should filter first.
    """
    v0 = np.asarray(v0, dtype=np.float64)
    v1 = np.asarray(v1, dtype=np.float64)
    v2 = np.asarray(v2, dtype=np.float64)
    cross = np.cross(v1 - v0, v2 - v0)
    norm = float(np.linalg.norm(cross))
    if 0.5 * norm <= AREA_EPSILON_MM2:
        raise DegenerateTriangleError(f"triangle area {0.5 * norm:g} mm^2 below epsilon")
    return cross / norm


def face_cross_products(mesh: TriangleMesh) -> np.ndarray:
    """(M, 3) array of (v1-v0) x (v2-v0) per face.

    The cross product carries both the face normal direction and twice
    the face area, so every macro metric derives from it.
    """
    v0, v1, v2 = mesh.corners()
    return np.cross(v1 - v0, v2 - v0)


def triangle_areas(mesh: TriangleMesh) -> np.ndarray:
    """(M,) per-face areas in mm^2."""
    cross = face_cross_products(mesh)
    return 0.5 * np.linalg.norm(cross, axis=1)


def mesh_bounds(mesh: TriangleMesh) -> Aabb:
    """Componentwise min/max over vertices referenced by at least one face."""
    used = np.unique(mesh.faces)
    pts = mesh.vertices[used]
    return Aabb(pts.min(axis=0), pts.max(axis=0))


def validate_mesh(mesh: TriangleMesh) -> ValidationReport:
    """Check mesh invariants without raising.

    Degenerate faces are counted but allowed; out-of-range indices and
    non-finite coordinates make the mesh invalid, as does an empty vertex
    or face list.
    """
    n_verts = mesh.vertex_count
    n_faces = mesh.face_count

    finite_mask = np.isfinite(mesh.vertices).all(axis=1) if n_verts else np.zeros(0, bool)
    non_finite = int(n_verts - finite_mask.sum())

    in_range = (mesh.faces >= 0) & (mesh.faces < n_verts)
    face_ok = in_range.all(axis=1) if n_faces else np.zeros(0, bool)
    out_of_range = int(n_faces - face_ok.sum())

    degenerate = 0
    if n_faces and non_finite == 0:
        safe = TriangleMesh(mesh.vertices, mesh.faces[face_ok], mesh.name)
        if safe.face_count:
            degenerate = int((triangle_areas(safe) <= AREA_EPSILON_MM2).sum())

    ok = (
        n_faces >= 1
        and n_verts >= 3
        and out_of_range == 0
        and non_finite == 0
    )
    return ValidationReport(
        vertex_count=n_verts,
        face_count=n_faces,
        degenerate_faces=degenerate,
        out_of_range_faces=out_of_range,
        non_finite_vertices=non_finite,
        ok=ok,
    )
