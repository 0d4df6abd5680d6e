"""Macro-level geometric parameters of a triangle mesh.

Three parameter groups summarize a mesh for quality control:

* total surface: sum of all triangle areas (mm^2),
* object dimension: per-axis extent of the bounding box (mm),
* aggregated normals: per-axis average of the absolute unit-normal
  components, weighted by triangle area (unitless, each in [0, 1]).

All three are computed in the mesh's authored coordinate frame, once at
load time; a part's pose during an assembly session never alters its
metrics. Aggregate sums use ``math.fsum`` so every scalar is exactly
reproducible regardless of face order, which replay and report
byte-stability rely on.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import AllDegenerateError
from .mesh import AREA_EPSILON_MM2, TriangleMesh, face_cross_products, mesh_bounds

# canonical parameter order used by reports and serialized records
PARAMETER_NAMES = (
    "total_surface",
    "normal_x",
    "normal_y",
    "normal_z",
    "dim_x",
    "dim_y",
    "dim_z",
)

RECORD_KEYS = (
    "total_surface_mm2",
    "normal_x",
    "normal_y",
    "normal_z",
    "dim_x_mm",
    "dim_y_mm",
    "dim_z_mm",
)


@dataclass(frozen=True)
class MacroMetrics:
    """The seven macro parameters of one mesh."""

    total_surface_mm2: float
    dimension_mm: tuple[float, float, float]
    aggregated_normals: tuple[float, float, float]

    def __post_init__(self):
        object.__setattr__(self, "total_surface_mm2", float(self.total_surface_mm2))
        object.__setattr__(self, "dimension_mm", tuple(float(d) for d in self.dimension_mm))
        object.__setattr__(
            self, "aggregated_normals", tuple(float(n) for n in self.aggregated_normals)
        )
        if len(self.dimension_mm) != 3 or len(self.aggregated_normals) != 3:
            raise ValueError("dimension and normals must each have 3 components")
        values = (self.total_surface_mm2, *self.dimension_mm, *self.aggregated_normals)
        if not all(math.isfinite(v) for v in values):
            raise ValueError("metrics must be finite")
        if self.total_surface_mm2 < 0 or any(d < 0 for d in self.dimension_mm):
            raise ValueError("surface and dimensions must be non-negative")
        if any(n < 0 or n > 1 + 1e-9 for n in self.aggregated_normals):
            raise ValueError("aggregated normals must lie in [0, 1]")

    def parameter_values(self) -> tuple[float, ...]:
        """Values in PARAMETER_NAMES order."""
        return (self.total_surface_mm2, *self.aggregated_normals, *self.dimension_mm)

    def to_record(self) -> dict:
        return dict(zip(RECORD_KEYS, self.parameter_values()))

    @classmethod
    def from_record(cls, record: dict) -> "MacroMetrics":
        missing = [k for k in RECORD_KEYS if k not in record]
        if missing:
            raise ValueError(f"metrics record missing keys: {', '.join(missing)}")
        try:
            values = [float(record[k]) for k in RECORD_KEYS]
        except (TypeError, ValueError):
            raise ValueError("metrics record values must be numbers") from None
        return cls(
            total_surface_mm2=values[0],
            aggregated_normals=tuple(values[1:4]),
            dimension_mm=tuple(values[4:7]),
        )


def _masked_area_sums(mesh: TriangleMesh) -> tuple[float, np.ndarray]:
    """Total area over non-degenerate faces plus the per-face |cross| sums.

    Returns (total_area, abs_cross_sums[3]) where abs_cross_sums[d] is
    sum(|cross_d|) over non-degenerate faces; dividing by 2*total_area
    gives the aggregated normal for axis d.
    """
    cross = face_cross_products(mesh)
    double_areas = np.linalg.norm(cross, axis=1)
    keep = double_areas > 2.0 * AREA_EPSILON_MM2
    total = 0.5 * math.fsum(double_areas[keep].tolist())
    abs_sums = np.array(
        [math.fsum(np.abs(cross[keep, d]).tolist()) for d in range(3)], dtype=np.float64
    )
    return total, abs_sums


def total_surface(mesh: TriangleMesh) -> float:
    """Surface area in mm^2. Degenerate faces contribute zero."""
    total, _ = _masked_area_sums(mesh)
    return total


def object_dimension(mesh: TriangleMesh) -> tuple[float, float, float]:
    """Per-axis extent (max - min) of the referenced vertices, in mm."""
    size = mesh_bounds(mesh).size()
    return (float(size[0]), float(size[1]), float(size[2]))


def aggregated_normals(mesh: TriangleMesh) -> tuple[float, float, float]:
    """Area-weighted mean of absolute unit-normal components per axis.

    For a unit normal n and area A, the per-axis contribution is
    |n_d| * A = |cross_d| / 2, so the result is sum(|cross_d|) over
    twice the total area. Degenerate faces are excluded from both sums.
    Raises AllDegenerateError when no face has usable area.
    """
    total, abs_sums = _masked_area_sums(mesh)
    if total <= 0.0:
        raise AllDegenerateError("every face is degenerate; normals undefined")
    return _normals_from_sums(total, abs_sums)


def _normals_from_sums(total: float, abs_sums: np.ndarray) -> tuple[float, float, float]:
    # |cross_d| <= ||cross|| holds in exact arithmetic; clamp the last
    # ulp of rounding so the [0, 1] invariant is strict.
    result = np.minimum(abs_sums / (2.0 * total), 1.0)
    return (float(result[0]), float(result[1]), float(result[2]))


def compute_macro_metrics(mesh: TriangleMesh) -> MacroMetrics:
    """Bundle all three parameter groups for one mesh."""
    total, abs_sums = _masked_area_sums(mesh)
    if total <= 0.0:
        raise AllDegenerateError("every face is degenerate; normals undefined")
    return MacroMetrics(
        total_surface_mm2=total,
        dimension_mm=object_dimension(mesh),
        aggregated_normals=_normals_from_sums(total, abs_sums),
    )
