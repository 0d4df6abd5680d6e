"""Scene definition: parts, slots, snap settings, grading settings.

A scene directory is the on-disk unit the service and the replay command
consume::

    scene-dir/
      scene.json    manifest
      assets/       mesh files referenced by the manifest
      logs/         one append-only event log per session

The manifest declares parts (mesh asset + initial pose) and slots
(target pose + reference metrics, either inline or derived from a
reference mesh asset). Part and slot metrics are computed once at load
time from the authored mesh frames and never change during a session.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path

from .compare import check_threshold
from .errors import InvalidSceneError, InvalidThresholdError
from .meshio import load_mesh
from .metrics import MacroMetrics, compute_macro_metrics
from .pose import Pose

MANIFEST_FILENAME = "scene.json"
ASSETS_DIRNAME = "assets"
LOGS_DIRNAME = "logs"

DEFAULT_MAX_ANGLE_DEG = 30.0
DEFAULT_THRESHOLD = 0.25
DEFAULT_ACCURACY_WEIGHT = 0.7
DEFAULT_SPEED_WEIGHT = 0.3


@dataclass(frozen=True)
class PartDef:
    part_id: str
    metrics: MacroMetrics
    initial_pose: Pose
    mesh_asset: str | None = None


@dataclass(frozen=True)
class SlotDef:
    slot_id: str
    expected_part: str
    target_pose: Pose
    bim_metrics: MacroMetrics
    bim_mesh_asset: str | None = None
    threshold: float | None = None  # per-part override of the scene threshold


@dataclass(frozen=True)
class ResolvedScene:
    """A fully validated scene with all metrics in hand.

    Parts and slots are in bijection: every part is expected by exactly
    one slot, so conformity and grading are defined for every part.
    """

    scene_id: str
    parts: tuple[PartDef, ...]
    slots: tuple[SlotDef, ...]
    snap_radius_mm: float | None = None  # None: per-slot default from part size
    max_angle_deg: float = DEFAULT_MAX_ANGLE_DEG
    threshold: float = DEFAULT_THRESHOLD
    par_time_ms: int = 60_000
    accuracy_weight: float = DEFAULT_ACCURACY_WEIGHT
    speed_weight: float = DEFAULT_SPEED_WEIGHT

    def __post_init__(self):
        object.__setattr__(self, "parts", tuple(self.parts))
        object.__setattr__(self, "slots", tuple(self.slots))
        if not self.scene_id or not isinstance(self.scene_id, str):
            raise InvalidSceneError("scene_id must be a non-empty string")
        if not self.parts:
            raise InvalidSceneError("scene declares no parts")

        part_ids = [p.part_id for p in self.parts]
        if len(set(part_ids)) != len(part_ids):
            raise InvalidSceneError("duplicate part ids in scene")
        slot_ids = [s.slot_id for s in self.slots]
        if len(set(slot_ids)) != len(slot_ids):
            raise InvalidSceneError("duplicate slot ids in scene")

        expected = [s.expected_part for s in self.slots]
        for slot in self.slots:
            if slot.expected_part not in part_ids:
                raise InvalidSceneError(
                    f"slot {slot.slot_id!r} expects unknown part {slot.expected_part!r}"
                )
        for pid in part_ids:
            n = expected.count(pid)
            if n != 1:
                raise InvalidSceneError(f"part {pid!r} must have exactly one slot, has {n}")

        try:
            check_threshold(self.threshold)
            for slot in self.slots:
                if slot.threshold is not None:
                    check_threshold(slot.threshold)
        except InvalidThresholdError as exc:
            raise InvalidSceneError(str(exc)) from None
        if self.snap_radius_mm is not None and not (
            math.isfinite(self.snap_radius_mm) and self.snap_radius_mm > 0
        ):
            raise InvalidSceneError(f"snap_radius_mm must be positive, got {self.snap_radius_mm}")
        if not (0.0 < self.max_angle_deg <= 180.0):
            raise InvalidSceneError(f"max_angle_deg must be in (0, 180], got {self.max_angle_deg}")
        if not (isinstance(self.par_time_ms, int) and self.par_time_ms > 0):
            raise InvalidSceneError(f"par_time_ms must be a positive integer, got {self.par_time_ms}")
        weights_ok = (
            self.accuracy_weight >= 0
            and self.speed_weight >= 0
            and 0.0 < self.accuracy_weight + self.speed_weight <= 1.0 + 1e-9
        )
        if not weights_ok:
            raise InvalidSceneError("grading weights must be non-negative and sum to at most 1")

        object.__setattr__(self, "_parts_by_id", {p.part_id: p for p in self.parts})
        object.__setattr__(self, "_slot_by_part", {s.expected_part: s for s in self.slots})

    def part(self, part_id: str) -> PartDef:
        return self._parts_by_id[part_id]

    def slot_for_part(self, part_id: str) -> SlotDef:
        return self._slot_by_part[part_id]


@dataclass(frozen=True)
class LoadedScene:
    """A scene directory pulled into memory: manifest, metrics, asset map."""

    scene_dir: Path
    manifest: dict
    scene: ResolvedScene
    asset_paths: dict  # asset name -> Path

    @property
    def logs_dir(self) -> Path:
        return self.scene_dir / LOGS_DIRNAME


def load_scene_dir(scene_dir: str | Path) -> LoadedScene:
    """Load and validate a scene directory; raises InvalidSceneError."""
    scene_dir = Path(scene_dir)
    manifest_path = scene_dir / MANIFEST_FILENAME
    if not manifest_path.is_file():
        raise InvalidSceneError(f"no {MANIFEST_FILENAME} in {scene_dir}")
    try:
        manifest = json.loads(manifest_path.read_text("utf-8"))
    except (OSError, ValueError) as exc:
        raise InvalidSceneError(f"cannot read manifest {manifest_path}: {exc}") from None
    scene, asset_paths = parse_manifest(manifest, scene_dir / ASSETS_DIRNAME)
    return LoadedScene(scene_dir, manifest, scene, asset_paths)


def parse_manifest(manifest: dict, assets_dir: Path) -> tuple[ResolvedScene, dict]:
    """Turn a manifest dict into a ResolvedScene, loading referenced meshes."""
    if not isinstance(manifest, dict):
        raise InvalidSceneError("manifest must be a JSON object")

    scene_id = _req(manifest, "scene_id", str)
    parts_raw = _req(manifest, "parts", list)
    slots_raw = _req(manifest, "slots", list)
    par_time_ms = _req(manifest, "par_time_ms", int)

    snap = manifest.get("snap", {})
    if not isinstance(snap, dict):
        raise InvalidSceneError("snap must be an object")
    grading = manifest.get("grading", {})
    if not isinstance(grading, dict):
        raise InvalidSceneError("grading must be an object")

    asset_paths: dict[str, Path] = {}
    metrics_cache: dict[str, MacroMetrics] = {}

    def asset_metrics(name, owner: str) -> MacroMetrics:
        if not isinstance(name, str) or not name or "/" in name or "\\" in name or name.startswith("."):
            raise InvalidSceneError(f"{owner}: bad asset name {name!r}")
        if name in metrics_cache:
            return metrics_cache[name]
        path = assets_dir / name
        if not path.is_file():
            raise InvalidSceneError(f"{owner}: missing mesh asset {name!r} (looked in {assets_dir})")
        try:
            mesh = load_mesh(path)
            metrics = compute_macro_metrics(mesh)
        except Exception as exc:
            raise InvalidSceneError(f"{owner}: cannot load mesh asset {name!r}: {exc}") from None
        asset_paths[name] = path
        metrics_cache[name] = metrics
        return metrics

    parts = []
    for i, entry in enumerate(parts_raw):
        owner = f"parts[{i}]"
        if not isinstance(entry, dict):
            raise InvalidSceneError(f"{owner} must be an object")
        part_id = _req(entry, "part_id", str, owner)
        mesh_asset = _req(entry, "mesh_asset", str, owner)
        pose = _pose(entry.get("initial_pose"), f"{owner}.initial_pose")
        parts.append(
            PartDef(part_id, asset_metrics(mesh_asset, owner), pose, mesh_asset)
        )

    slots = []
    for i, entry in enumerate(slots_raw):
        owner = f"slots[{i}]"
        if not isinstance(entry, dict):
            raise InvalidSceneError(f"{owner} must be an object")
        slot_id = _req(entry, "slot_id", str, owner)
        expected = _req(entry, "expected_part", str, owner)
        pose = _pose(entry.get("target_pose"), f"{owner}.target_pose")
        has_mesh = "bim_mesh_asset" in entry
        has_inline = "bim_metrics" in entry
        if has_mesh == has_inline:
            raise InvalidSceneError(f"{owner} needs exactly one of bim_mesh_asset or bim_metrics")
        if has_mesh:
            asset = _req(entry, "bim_mesh_asset", str, owner)
            metrics = asset_metrics(asset, owner)
        else:
            asset = None
            try:
                metrics = MacroMetrics.from_record(entry["bim_metrics"])
            except (TypeError, ValueError) as exc:
                raise InvalidSceneError(f"{owner}.bim_metrics: {exc}") from None
        threshold = entry.get("threshold")
        if threshold is not None:
            threshold = float(threshold)
        slots.append(SlotDef(slot_id, expected, pose, metrics, asset, threshold))

    radius = snap.get("snap_radius_mm")
    scene = ResolvedScene(
        scene_id=scene_id,
        parts=tuple(parts),
        slots=tuple(slots),
        snap_radius_mm=float(radius) if radius is not None else None,
        max_angle_deg=float(snap.get("max_angle_deg", DEFAULT_MAX_ANGLE_DEG)),
        threshold=float(snap.get("threshold", DEFAULT_THRESHOLD)),
        par_time_ms=par_time_ms,
        accuracy_weight=float(grading.get("accuracy_weight", DEFAULT_ACCURACY_WEIGHT)),
        speed_weight=float(grading.get("speed_weight", DEFAULT_SPEED_WEIGHT)),
    )
    return scene, asset_paths


def _req(obj: dict, key: str, cls, owner: str = "manifest"):
    if key not in obj:
        raise InvalidSceneError(f"{owner}: missing {key!r}")
    value = obj[key]
    if cls is int and isinstance(value, bool):
        raise InvalidSceneError(f"{owner}: {key!r} must be an integer")
    if not isinstance(value, cls):
        raise InvalidSceneError(f"{owner}: {key!r} must be {cls.__name__}")
    return value


def _pose(record, owner: str) -> Pose:
    if record is None:
        return Pose.identity()
    try:
        return Pose.from_record(record)
    except ValueError as exc:
        raise InvalidSceneError(f"{owner}: {exc}") from None
