"""Shared geometry builders and scene factories for the test suite."""
from __future__ import annotations

import math
from pathlib import Path

import numpy as np

from meshqc import MacroMetrics, Pose, TriangleMesh
from meshqc.scene import PartDef, ResolvedScene, SlotDef

REPO_ROOT = Path(__file__).resolve().parents[1]
DEMO_SCENE_DIR = REPO_ROOT / "scenes" / "demo"

# reference QC readings for one scanned pipe part (reference model vs scan)
BIM_METRICS = MacroMetrics(
    total_surface_mm2=28404.4,
    dimension_mm=(90.0, 89.5, 47.0),
    aggregated_normals=(0.52, 0.53, 0.18),
)
SCAN_METRICS = MacroMetrics(
    total_surface_mm2=27911.9,
    dimension_mm=(90.9, 92.3, 55.1),
    aggregated_normals=(0.57, 0.57, 0.24),
)
# hand-computed |a-b|/max(|a|,|b|) for the pair above, parameter order
EXPECTED_DIFFS = (0.017339, 0.087719, 0.070175, 0.250000, 0.009901, 0.030336, 0.147005)

_CUBE_FACES = [
    (0, 2, 1), (0, 3, 2),
    (4, 5, 6), (4, 6, 7),
    (0, 1, 5), (0, 5, 4),
    (2, 3, 7), (2, 7, 6),
    (0, 4, 7), (0, 7, 3),
    (1, 2, 6), (1, 6, 5),
]


def cube_mesh(size: float = 1.0, origin=(0.0, 0.0, 0.0), name: str = "cube") -> TriangleMesh:
    """Axis-aligned cube [origin, origin + size]^3 with outward winding."""
    o = np.asarray(origin, dtype=np.float64)
    s = float(size)
    verts = o + s * np.array(
        [
            [0, 0, 0], [1, 0, 0], [1, 1, 0], [0, 1, 0],
            [0, 0, 1], [1, 0, 1], [1, 1, 1], [0, 1, 1],
        ],
        dtype=np.float64,
    )
    return TriangleMesh(verts, _CUBE_FACES, name)


def tetra_mesh(name: str = "tetra") -> TriangleMesh:
    """Regular tetrahedron on alternating corners of the [-1, 1] cube."""
    verts = [(1, 1, 1), (1, -1, -1), (-1, 1, -1), (-1, -1, 1)]
    faces = [(0, 1, 2), (0, 3, 1), (0, 2, 3), (1, 3, 2)]
    return TriangleMesh(verts, faces, name)


def random_mesh(rng: np.random.Generator, n_faces: int, scale: float = 100.0,
                name: str = "random") -> TriangleMesh:
    """Triangle soup with distinct vertex indices per face."""
    n_verts = max(3, int(n_faces * 0.7))
    verts = rng.uniform(-scale, scale, (n_verts, 3))
    i = rng.integers(0, n_verts, n_faces)
    j = (i + 1 + rng.integers(0, n_verts - 1, n_faces)) % n_verts
    k = rng.integers(0, n_verts, n_faces)
    bad = (k == i) | (k == j)
    while bad.any():
        k[bad] = rng.integers(0, n_verts, int(bad.sum()))
        bad = (k == i) | (k == j)
    faces = np.stack([i, j, k], axis=1)
    return TriangleMesh(verts, faces, name)


def quat_to_matrix(q) -> np.ndarray:
    w, x, y, z = q
    return np.array(
        [
            [1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y)],
            [2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x)],
            [2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y)],
        ]
    )


def random_rotation(rng: np.random.Generator) -> np.ndarray:
    q = rng.normal(size=4)
    q /= np.linalg.norm(q)
    return quat_to_matrix(q)


def transform_mesh(mesh: TriangleMesh, matrix=None, offset=(0.0, 0.0, 0.0),
                   scale: float = 1.0) -> TriangleMesh:
    verts = mesh.vertices * scale
    if matrix is not None:
        verts = verts @ np.asarray(matrix).T
    verts = verts + np.asarray(offset, dtype=np.float64)
    return TriangleMesh(verts, mesh.faces, mesh.name)


def shuffle_faces(mesh: TriangleMesh, rng: np.random.Generator) -> TriangleMesh:
    order = rng.permutation(mesh.face_count)
    return TriangleMesh(mesh.vertices, mesh.faces[order], mesh.name)


def rotz(deg: float) -> np.ndarray:
    a = math.radians(deg)
    return np.array(
        [[math.cos(a), -math.sin(a), 0.0], [math.sin(a), math.cos(a), 0.0], [0.0, 0.0, 1.0]]
    )


def quat_z(deg: float) -> tuple[float, float, float, float]:
    half = math.radians(deg) / 2.0
    return (math.cos(half), 0.0, 0.0, math.sin(half))


def one_part_scene(part_metrics: MacroMetrics, bim_metrics: MacroMetrics,
                   slot_translation=(100.0, 0.0, 0.0), snap_radius=20.0,
                   max_angle=30.0, threshold=0.25, par_time_ms=30000) -> ResolvedScene:
    return ResolvedScene(
        scene_id="test",
        parts=(PartDef("part", part_metrics, Pose()),),
        slots=(SlotDef("slot", "part", Pose(translation=slot_translation), bim_metrics),),
        snap_radius_mm=snap_radius,
        max_angle_deg=max_angle,
        threshold=threshold,
        par_time_ms=par_time_ms,
    )


def two_part_scene(good: MacroMetrics, bad: MacroMetrics, bim: MacroMetrics,
                   **kwargs) -> ResolvedScene:
    """Scene with one conforming ('good') and one non-conforming ('bad') part."""
    defaults = dict(snap_radius_mm=20.0, max_angle_deg=30.0, threshold=0.25, par_time_ms=30000)
    defaults.update(kwargs)
    return ResolvedScene(
        scene_id="test2",
        parts=(
            PartDef("good", good, Pose()),
            PartDef("bad", bad, Pose(translation=(0.0, 50.0, 0.0))),
        ),
        slots=(
            SlotDef("slot_good", "good", Pose(translation=(100.0, 0.0, 0.0)), bim),
            SlotDef("slot_bad", "bad", Pose(translation=(100.0, 50.0, 0.0)), bim),
        ),
        **defaults,
    )
