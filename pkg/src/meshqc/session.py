"""Event-sourced virtual assembly session.

A session holds the live state of every part in a scene. State changes
only through :meth:`AssemblySession.apply`, events carry their own
timestamps (no wall clock anywhere), and the full event log is kept, so
replaying a log against the same scene reproduces the final state
bit-for-bit.

Releasing a grabbed part runs the snap check against the slot expecting
that part: the part snaps to the slot's exact target pose when its
metrics pass the quality comparison AND it was released within the snap
radius and angle. Quality is evaluated before range, so a defective part
reports its comparison table even when dropped nowhere near the slot.

Structural problems (unknown part id, backwards timestamps, events after
the session ended) raise; merely invalid moves (grabbing a snapped part,
moving a part that is not held) are recorded as warnings and leave state
unchanged, matching how a tolerant interactive client behaves.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path

from .compare import ComparisonReport, compare_metrics
from .errors import (
    InvalidSceneError,
    MalformedEventError,
    OutOfOrderEventError,
    SessionEndedError,
    SessionNotEndedError,
    UnknownPartError,
)
from .metrics import MacroMetrics
from .pose import Pose, rotation_angle, translation_distance
from .scene import ResolvedScene, SlotDef

# event kinds
GRAB = "grab"
MOVE = "move"
RELEASE = "release"
FLAG_DEFECTIVE = "flag_defective"
END_SESSION = "end_session"
EVENT_KINDS = (GRAB, MOVE, RELEASE, FLAG_DEFECTIVE, END_SESSION)

# part states
FREE = "free"
GRABBED = "grabbed"
SNAPPED = "snapped"
FLAGGED_DEFECTIVE = "flagged_defective"

# snap outcomes
OUTCOME_SNAPPED = "snapped"
OUTCOME_REJECTED_QUALITY = "rejected_quality"
OUTCOME_OUT_OF_RANGE = "out_of_range"

# default snap radius = this fraction of the part's bounding-box diagonal
SNAP_RADIUS_FACTOR = 0.15


@dataclass(frozen=True)
class SessionEvent:
    timestamp_ms: int
    kind: str
    part_id: str | None = None
    pose: Pose | None = None

    def __post_init__(self):
        ts = self.timestamp_ms
        if isinstance(ts, bool) or not isinstance(ts, (int, float)) or ts != int(ts) or ts < 0:
            raise MalformedEventError(f"timestamp_ms must be a non-negative integer, got {ts!r}")
        object.__setattr__(self, "timestamp_ms", int(ts))
        if self.kind not in EVENT_KINDS:
            raise MalformedEventError(f"unknown event kind {self.kind!r}")
        if self.kind == END_SESSION:
            if self.part_id is not None:
                raise MalformedEventError("end_session carries no part_id")
        elif not self.part_id or not isinstance(self.part_id, str):
            raise MalformedEventError(f"{self.kind} event needs a part_id")
        if self.kind == MOVE:
            if self.pose is None:
                raise MalformedEventError("move event needs a pose")
        elif self.pose is not None:
            raise MalformedEventError(f"{self.kind} event carries no pose")


@dataclass(frozen=True)
class SnapConfig:
    snap_radius_mm: float
    max_angle_deg: float = 30.0
    threshold: float = 0.25

    def __post_init__(self):
        if not (math.isfinite(self.snap_radius_mm) and self.snap_radius_mm > 0):
            raise ValueError(f"snap_radius_mm must be positive, got {self.snap_radius_mm}")
        if not (0.0 < self.max_angle_deg <= 180.0):
            raise ValueError(f"max_angle_deg must be in (0, 180], got {self.max_angle_deg}")
        if not (0.0 < self.threshold <= 1.0):
            raise ValueError(f"threshold must be in (0, 1], got {self.threshold}")


@dataclass(frozen=True)
class SnapOutcome:
    kind: str
    report: ComparisonReport | None = None
    distance_mm: float | None = None
    angle_deg: float | None = None

    @classmethod
    def snapped(cls) -> "SnapOutcome":
        return cls(OUTCOME_SNAPPED)

    @classmethod
    def rejected_quality(cls, report: ComparisonReport) -> "SnapOutcome":
        return cls(OUTCOME_REJECTED_QUALITY, report=report)

    @classmethod
    def out_of_range(cls, distance_mm: float, angle_deg: float) -> "SnapOutcome":
        return cls(OUTCOME_OUT_OF_RANGE, distance_mm=distance_mm, angle_deg=angle_deg)

    def to_record(self) -> dict:
        rec: dict = {"kind": self.kind}
        if self.report is not None:
            rec["report"] = self.report.to_record()
        if self.distance_mm is not None:
            rec["distance_mm"] = self.distance_mm
            rec["angle_deg"] = self.angle_deg
        return rec


@dataclass
class PartState:
    part_id: str
    metrics: MacroMetrics
    pose: Pose
    status: str = FREE


@dataclass(frozen=True)
class EventResult:
    event: SessionEvent
    outcome: SnapOutcome | None = None
    warning: str | None = None


@dataclass(frozen=True)
class SessionScore:
    accuracy: float
    elapsed_ms: int
    par_time_ms: int
    grade: float

    def to_record(self) -> dict:
        return {
            "accuracy": self.accuracy,
            "elapsed_ms": self.elapsed_ms,
            "par_time_ms": self.par_time_ms,
            "grade": self.grade,
        }


def try_snap(part: PartState, slot: SlotDef, config: SnapConfig) -> SnapOutcome:
    """Decide what happens when `part` is released at its current pose.

    Quality gates first: a part that fails the metric comparison is
    rejected outright (with the full report), regardless of where it was
    dropped. A conforming part snaps only within the radius/angle window.
    """
    report = compare_metrics(slot.bim_metrics, part.metrics, config.threshold)
    if not report.overall_pass:
        return SnapOutcome.rejected_quality(report)
    distance = translation_distance(part.pose, slot.target_pose)
    angle = rotation_angle(part.pose, slot.target_pose)
    if distance <= config.snap_radius_mm and angle <= config.max_angle_deg:
        return SnapOutcome.snapped()
    return SnapOutcome.out_of_range(distance, angle)


def resolve_slot_config(scene: ResolvedScene, slot: SlotDef) -> SnapConfig:
    """Concrete snap settings for one slot (radius default scales with part size)."""
    radius = scene.snap_radius_mm
    if radius is None:
        dims = scene.part(slot.expected_part).metrics.dimension_mm
        radius = SNAP_RADIUS_FACTOR * math.hypot(*dims)
        if radius <= 0:
            raise InvalidSceneError(
                f"slot {slot.slot_id!r}: part has no extent, set snap.snap_radius_mm explicitly"
            )
    threshold = slot.threshold if slot.threshold is not None else scene.threshold
    return SnapConfig(radius, scene.max_angle_deg, threshold)


class AssemblySession:
    """Single-writer state machine over one scene's parts."""

    def __init__(self, scene: ResolvedScene):
        self.scene = scene
        self.parts = {
            p.part_id: PartState(p.part_id, p.metrics, p.initial_pose) for p in scene.parts
        }
        self._part_order = tuple(p.part_id for p in scene.parts)
        self._slot_configs = {s.slot_id: resolve_slot_config(scene, s) for s in scene.slots}
        self.events: list[SessionEvent] = []
        self.results: list[EventResult] = []
        self.warnings: list[str] = []
        self.clock_ms = 0
        self.ended = False
        self.elapsed_ms: int | None = None

    def clone(self) -> "AssemblySession":
        """Independent copy sharing the immutable scene."""
        other = AssemblySession.__new__(AssemblySession)
        other.scene = self.scene
        other.parts = {
            pid: PartState(p.part_id, p.metrics, p.pose, p.status)
            for pid, p in self.parts.items()
        }
        other._part_order = self._part_order
        other._slot_configs = self._slot_configs
        other.events = list(self.events)
        other.results = list(self.results)
        other.warnings = list(self.warnings)
        other.clock_ms = self.clock_ms
        other.ended = self.ended
        other.elapsed_ms = self.elapsed_ms
        return other

    def apply(self, event: SessionEvent) -> EventResult:
        """Apply one event; returns the snap outcome / warning it produced.

        Raises SessionEndedError, OutOfOrderEventError, or
        UnknownPartError; these leave the session untouched.
        """
        if self.ended:
            raise SessionEndedError(f"session ended at {self.elapsed_ms} ms")
        if event.timestamp_ms < self.clock_ms:
            raise OutOfOrderEventError(
                f"event at {event.timestamp_ms} ms precedes clock {self.clock_ms} ms"
            )
        part = None
        if event.kind != END_SESSION:
            part = self.parts.get(event.part_id)
            if part is None:
                raise UnknownPartError(f"no part {event.part_id!r} in session")

        outcome = None
        warning = None
        if event.kind == GRAB:
            if part.status == FREE:
                part.status = GRABBED
            else:
                warning = f"grab ignored: part {part.part_id!r} is {part.status}"
        elif event.kind == MOVE:
            if part.status == GRABBED:
                part.pose = event.pose
            else:
                warning = f"move ignored: part {part.part_id!r} is {part.status}, not grabbed"
        elif event.kind == RELEASE:
            if part.status != GRABBED:
                warning = f"release ignored: part {part.part_id!r} is {part.status}, not grabbed"
            else:
                outcome = self._release(part)
        elif event.kind == FLAG_DEFECTIVE:
            if part.status in (FREE, GRABBED):
                part.status = FLAGGED_DEFECTIVE
            else:
                warning = f"flag ignored: part {part.part_id!r} is {part.status}"
        else:  # END_SESSION
            self.ended = True
            self.elapsed_ms = event.timestamp_ms

        self.clock_ms = event.timestamp_ms
        self.events.append(event)
        if warning is not None:
            self.warnings.append(warning)
        result = EventResult(event, outcome, warning)
        self.results.append(result)
        return result

    def _release(self, part: PartState) -> SnapOutcome:
        slots = [s for s in self.scene.slots if s.expected_part == part.part_id]
        slot = min(slots, key=lambda s: translation_distance(part.pose, s.target_pose))
        outcome = try_snap(part, slot, self._slot_configs[slot.slot_id])
        if outcome.kind == OUTCOME_SNAPPED:
            part.status = SNAPPED
            part.pose = slot.target_pose
        else:
            part.status = FREE
        return outcome

    # ------------------------------------------------------------------
    # derived views

    def part_comparison(self, part_id: str) -> ComparisonReport:
        slot = self.scene.slot_for_part(part_id)
        threshold = self._slot_configs[slot.slot_id].threshold
        return compare_metrics(slot.bim_metrics, self.parts[part_id].metrics, threshold)

    def part_conforming(self, part_id: str) -> bool:
        return self.part_comparison(part_id).overall_pass

    def part_resolved_correctly(self, part_id: str) -> bool:
        """Conforming parts belong snapped in their slot; defective ones flagged."""
        status = self.parts[part_id].status
        if self.part_conforming(part_id):
            return status == SNAPPED
        return status == FLAGGED_DEFECTIVE

    def grade(self) -> SessionScore:
        if not self.ended:
            raise SessionNotEndedError("cannot grade an active session")
        correct = sum(1 for pid in self._part_order if self.part_resolved_correctly(pid))
        accuracy = correct / len(self._part_order)
        elapsed = self.elapsed_ms
        par = self.scene.par_time_ms
        speed = 1.0 if elapsed <= par else par / elapsed
        grade = 100.0 * (self.scene.accuracy_weight * accuracy + self.scene.speed_weight * speed)
        return SessionScore(accuracy, elapsed, par, grade)


def create_session(scene: ResolvedScene) -> AssemblySession:
    return AssemblySession(scene)


def replay(scene: ResolvedScene, events) -> AssemblySession:
    """Fold a recorded event list over a fresh session."""
    session = AssemblySession(scene)
    for event in events:
        session.apply(event)
    return session


# ---------------------------------------------------------------------------
# event log serialization: one JSON record per line


def event_to_record(event: SessionEvent, seq: int | None = None) -> dict:
    record = {
        "timestamp_ms": event.timestamp_ms,
        "kind": event.kind,
        "part_id": event.part_id,
        "pose": event.pose.to_record() if event.pose is not None else None,
    }
    if seq is not None:
        record["seq"] = seq
    return record


def event_from_record(record) -> SessionEvent:
    if not isinstance(record, dict):
        raise MalformedEventError("event record must be an object")
    pose_rec = record.get("pose")
    try:
        pose = Pose.from_record(pose_rec) if pose_rec is not None else None
    except ValueError as exc:
        raise MalformedEventError(f"bad pose: {exc}") from None
    if "timestamp_ms" not in record or "kind" not in record:
        raise MalformedEventError("event record needs timestamp_ms and kind")
    return SessionEvent(
        timestamp_ms=record["timestamp_ms"],
        kind=record["kind"],
        part_id=record.get("part_id"),
        pose=pose,
    )


def encode_session_log(events, seqs=None) -> str:
    lines = []
    for i, event in enumerate(events):
        seq = seqs[i] if seqs is not None else None
        lines.append(json.dumps(event_to_record(event, seq), separators=(",", ":")))
    return "\n".join(lines) + ("\n" if lines else "")


def decode_session_log(text: str) -> list[SessionEvent]:
    events = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line:
            continue
        try:
            record = json.loads(line)
        except ValueError as exc:
            raise MalformedEventError(f"log line {lineno}: invalid JSON: {exc}") from None
        try:
            events.append(event_from_record(record))
        except MalformedEventError as exc:
            raise MalformedEventError(f"log line {lineno}: {exc}") from None
    return events


def read_session_log(path: str | Path) -> list[SessionEvent]:
    return decode_session_log(Path(path).read_text("utf-8"))


# ---------------------------------------------------------------------------
# serialized session views (shared by the service, the CLI, and tests)


def part_state_record(part: PartState) -> dict:
    return {"part_id": part.part_id, "state": part.status, "pose": part.pose.to_record()}


def session_parts_record(session: AssemblySession) -> list[dict]:
    return [part_state_record(session.parts[pid]) for pid in session._part_order]


def session_report_record(session: AssemblySession, session_id: str | None = None) -> dict:
    """Per-part comparison reports plus the score once the session ended."""
    record: dict = {}
    if session_id is not None:
        record["session_id"] = session_id
    record["scene_id"] = session.scene.scene_id
    record["status"] = "ended" if session.ended else "active"
    parts = []
    for pid in session._part_order:
        slot = session.scene.slot_for_part(pid)
        comparison = session.part_comparison(pid)
        parts.append(
            {
                "part_id": pid,
                "slot_id": slot.slot_id,
                "state": session.parts[pid].status,
                "conforming": comparison.overall_pass,
                "resolved_correctly": session.part_resolved_correctly(pid),
                "comparison": comparison.to_record(),
            }
        )
    record["parts"] = parts
    record["score"] = session.grade().to_record() if session.ended else None
    return record
