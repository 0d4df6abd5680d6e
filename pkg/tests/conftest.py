import shutil
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent))

from helpers import DEMO_SCENE_DIR


@pytest.fixture
def demo_scene_dir() -> Path:
    assert DEMO_SCENE_DIR.is_dir(), "bundled demo scene missing; run scripts/make_demo_scene.py"
    return DEMO_SCENE_DIR


@pytest.fixture
def demo_scene_copy(tmp_path: Path) -> Path:
    """Writable copy of the demo scene; the service appends session logs."""
    target = tmp_path / "demo"
    shutil.copytree(DEMO_SCENE_DIR, target)
    return target
