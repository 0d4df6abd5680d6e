#!/usr/bin/env python3
"""Regenerate the bundled demo scene under scenes/demo/.

Two desk-scale parts against cube references:

* flange_a matches its reference exactly and snaps,
* flange_b is an oversized print (x1.5) whose surface differs by ~56%,
  far past the 25% gate, so it must be flagged defective instead.

The demo session log resolves both parts correctly and ends exactly at
par time, which grades to 100.
"""
import json
import sys
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from meshqc import STL_BINARY, TriangleMesh, save_mesh  # noqa: E402

ROOT = Path(__file__).resolve().parents[1]
SCENE_DIR = ROOT / "scenes" / "demo"

CUBE_FACES = [
    (0, 2, 1), (0, 3, 2),  # bottom
    (4, 5, 6), (4, 6, 7),  # top
    (0, 1, 5), (0, 5, 4),  # front
    (2, 3, 7), (2, 7, 6),  # back
    (0, 4, 7), (0, 7, 3),  # left
    (1, 2, 6), (1, 6, 5),  # right
]


def cube(size_mm: float, name: str) -> TriangleMesh:
    h = size_mm / 2.0
    verts = np.array(
        [
            [-h, -h, -h], [h, -h, -h], [h, h, -h], [-h, h, -h],
            [-h, -h, h], [h, -h, h], [h, h, h], [-h, h, h],
        ]
    )
    return TriangleMesh(verts, CUBE_FACES, name)


def pose(x: float, y: float, z: float) -> dict:
    return {"translation": [x, y, z], "rotation": [1.0, 0.0, 0.0, 0.0]}


def main() -> None:
    assets = SCENE_DIR / "assets"
    logs = SCENE_DIR / "logs"
    assets.mkdir(parents=True, exist_ok=True)
    logs.mkdir(parents=True, exist_ok=True)

    save_mesh(cube(60.0, "flange_a"), assets / "flange_a.stl", STL_BINARY)
    save_mesh(cube(60.0, "flange_a_bim"), assets / "flange_a_bim.stl", STL_BINARY)
    save_mesh(cube(90.0, "flange_b"), assets / "flange_b.stl", STL_BINARY)
    save_mesh(cube(60.0, "flange_b_bim"), assets / "flange_b_bim.stl", STL_BINARY)

    manifest = {
        "scene_id": "demo",
        "parts": [
            {"part_id": "flange_a", "mesh_asset": "flange_a.stl",
             "initial_pose": pose(-150.0, 0.0, 0.0)},
            {"part_id": "flange_b", "mesh_asset": "flange_b.stl",
             "initial_pose": pose(-150.0, 150.0, 0.0)},
        ],
        "slots": [
            {"slot_id": "slot_a", "expected_part": "flange_a",
             "target_pose": pose(150.0, 0.0, 0.0), "bim_mesh_asset": "flange_a_bim.stl"},
            {"slot_id": "slot_b", "expected_part": "flange_b",
             "target_pose": pose(150.0, 150.0, 0.0), "bim_mesh_asset": "flange_b_bim.stl"},
        ],
        "snap": {"max_angle_deg": 30.0, "threshold": 0.25},
        "par_time_ms": 30000,
        "grading": {"accuracy_weight": 0.7, "speed_weight": 0.3},
    }
    (SCENE_DIR / "scene.json").write_text(json.dumps(manifest, indent=2) + "\n", "utf-8")

    events = [
        {"timestamp_ms": 1000, "kind": "grab", "part_id": "flange_a", "pose": None},
        {"timestamp_ms": 2500, "kind": "move", "part_id": "flange_a",
         "pose": pose(150.0, 0.0, 0.0)},
        {"timestamp_ms": 4000, "kind": "release", "part_id": "flange_a", "pose": None},
        {"timestamp_ms": 8000, "kind": "flag_defective", "part_id": "flange_b", "pose": None},
        {"timestamp_ms": 30000, "kind": "end_session", "part_id": None, "pose": None},
    ]
    log = "".join(json.dumps(e, separators=(",", ":")) + "\n" for e in events)
    (logs / "demo-session.jsonl").write_text(log, "utf-8")
    print(f"demo scene written to {SCENE_DIR}")


if __name__ == "__main__":
    main()
