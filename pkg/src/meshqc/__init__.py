"""meshqc: macro-level mesh quality control and virtual assembly sessions.

Pipeline: load a triangle mesh (STL/OBJ), compute its macro parameters
(surface area, per-axis extents, area-weighted absolute normals),
compare a scanned part against its reference, and gate snap-to-slot
placement in replayable, graded assembly sessions.
"""

from .compare import (
    DEFAULT_THRESHOLD,
    ComparisonReport,
    ParameterComparison,
    compare_metrics,
    relative_difference,
)
from .errors import (
    AllDegenerateError,
    DegenerateTriangleError,
    EmptyMeshError,
    IndexOutOfRangeError,
    InvalidSceneError,
    InvalidThresholdError,
    MalformedEventError,
    MalformedFileError,
    MeshQcError,
    OutOfOrderEventError,
    SessionEndedError,
    SessionNotEndedError,
    UnknownPartError,
)
from .mesh import (
    AREA_EPSILON_MM2,
    Aabb,
    TriangleMesh,
    ValidationReport,
    mesh_bounds,
    triangle_area,
    triangle_normal,
    validate_mesh,
)
from .meshio import (
    FORMATS,
    OBJ,
    STL_ASCII,
    STL_BINARY,
    detect_format,
    load_mesh,
    parse_mesh,
    save_mesh,
    write_mesh,
)
from .metrics import (
    PARAMETER_NAMES,
    MacroMetrics,
    aggregated_normals,
    compute_macro_metrics,
    object_dimension,
    total_surface,
)
from .pose import Pose, rotation_angle, translation_distance
from .scene import LoadedScene, PartDef, ResolvedScene, SlotDef, load_scene_dir, parse_manifest
from .session import (
    AssemblySession,
    EventResult,
    PartState,
    SessionEvent,
    SessionScore,
    SnapConfig,
    SnapOutcome,
    create_session,
    read_session_log,
    replay,
    session_report_record,
    try_snap,
)

__version__ = "0.1.0"
