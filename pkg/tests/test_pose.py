import math

import pytest

from meshqc import Pose, rotation_angle, translation_distance
from helpers import quat_z


def test_identity_pose_zero_distance_and_angle():
    a = Pose()
    b = Pose()
    assert translation_distance(a, b) == 0.0
    assert rotation_angle(a, b) == 0.0


def test_translation_distance_euclidean():
    a = Pose(translation=(0, 0, 0))
    b = Pose(translation=(3, 4, 0))
    assert translation_distance(a, b) == 5.0


def test_quaternion_double_cover():
    q = quat_z(73.0)
    a = Pose(rotation=q)
    b = Pose(rotation=tuple(-c for c in q))
    assert rotation_angle(a, b) == pytest.approx(0.0, abs=1e-9)


def test_quarter_turn_angle():
    a = Pose()
    b = Pose(rotation=quat_z(90.0))
    assert rotation_angle(a, b) == pytest.approx(90.0, abs=1e-9)
    assert translation_distance(a, b) == 0.0


def test_angle_range_up_to_180():
    a = Pose()
    b = Pose(rotation=quat_z(180.0))
    assert rotation_angle(a, b) == pytest.approx(180.0, abs=1e-9)


def test_near_unit_quaternion_renormalized():
    q = tuple(c * (1 + 5e-7) for c in quat_z(30.0))
    pose = Pose(rotation=q)
    norm = math.sqrt(sum(c * c for c in pose.rotation))
    assert abs(norm - 1.0) < 1e-12


def test_bad_quaternion_rejected():
    with pytest.raises(ValueError):
        Pose(rotation=(1.0, 1.0, 0.0, 0.0))
    with pytest.raises(ValueError):
        Pose(rotation=(0.0, 0.0, 0.0, 0.0))


def test_non_finite_rejected():
    with pytest.raises(ValueError):
        Pose(translation=(math.nan, 0, 0))
    with pytest.raises(ValueError):
        Pose(rotation=(math.inf, 0, 0, 0))


def test_record_roundtrip():
    pose = Pose(translation=(1.5, -2.0, 3.25), rotation=quat_z(45.0))
    assert Pose.from_record(pose.to_record()) == pose


def test_malformed_records():
    with pytest.raises(ValueError):
        Pose.from_record(None)
    with pytest.raises(ValueError):
        Pose.from_record({"translation": [0, 0, 0]})
    with pytest.raises(ValueError):
        Pose.from_record({"translation": [0, 0], "rotation": [1, 0, 0, 0]})
    with pytest.raises(ValueError):
        Pose.from_record({"translation": "near the slot", "rotation": [1, 0, 0, 0]})
