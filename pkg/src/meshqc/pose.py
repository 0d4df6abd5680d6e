"""Rigid poses: translation in mm plus a unit quaternion (w, x, y, z)."""
from __future__ import annotations

import math
from dataclasses import dataclass

# clients send float-rounded quaternions; renormalize anything this close
_NORM_SLACK = 1e-6


@dataclass(frozen=True)
class Pose:
    translation: tuple[float, float, float] = (0.0, 0.0, 0.0)
    rotation: tuple[float, float, float, float] = (1.0, 0.0, 0.0, 0.0)

    def __post_init__(self):
        t = tuple(float(v) for v in self.translation)
        q = tuple(float(v) for v in self.rotation)
        if len(t) != 3 or len(q) != 4:
            raise ValueError("pose needs 3 translation and 4 rotation components")
        if not all(math.isfinite(v) for v in t + q):
            raise ValueError("pose components must be finite")
        norm = math.sqrt(sum(v * v for v in q))
        if abs(norm - 1.0) > _NORM_SLACK:
            raise ValueError(f"rotation quaternion norm {norm:.9f} is not 1")
        q = tuple(v / norm for v in q)
        object.__setattr__(self, "translation", t)
        object.__setattr__(self, "rotation", q)

    @classmethod
    def identity(cls) -> "Pose":
        return cls()

    def to_record(self) -> dict:
        return {"translation": list(self.translation), "rotation": list(self.rotation)}

    @classmethod
    def from_record(cls, record) -> "Pose":
        if not isinstance(record, dict):
            raise ValueError("pose must be an object with translation and rotation")
        try:
            translation = record["translation"]
            rotation = record["rotation"]
        except KeyError as exc:
            raise ValueError(f"pose record missing {exc.args[0]!r}") from None
        if not isinstance(translation, (list, tuple)) or not isinstance(rotation, (list, tuple)):
            raise ValueError("pose translation/rotation must be arrays")
        return cls(tuple(translation), tuple(rotation))


def translation_distance(a: Pose, b: Pose) -> float:
    """Euclidean distance between the two translations, in mm."""
    return math.dist(a.translation, b.translation)


def rotation_angle(a: Pose, b: Pose) -> float:
    """Relative rotation angle in degrees, in [0, 180].

    Uses 2*acos(|qa . qb|); the absolute value folds the quaternion
    double cover so q and -q describe the same rotation.
    """
    dot = abs(sum(x * y for x, y in zip(a.rotation, b.rotation)))
    return math.degrees(2.0 * math.acos(min(dot, 1.0)))
