"""Language-driven multi-robot simulation: scripts, simulator and benchmark harness."""

from __future__ import annotations

import json
import os
from pathlib import Path
from typing import Sequence

from . import _lingua
from ._lingua import BackendError, DatasetError, SceneError, decel_scale, format_number, normalize_heading

__all__ = [
    "BackendError",
    "DatasetError",
    "PlanError",
    "SceneError",
    "data_dir",
    "decel_scale",
    "format_number",
    "forward_kinematics",
    "load_scene",
    "normalize_heading",
    "parse_plan",
    "plan",
    "run_bench",
    "run_plan",
]


class PlanError(ValueError):
    def __init__(self, error: dict):
        super().__init__(f"line {error['line']}: {error['message']}")
        self.kind = error["kind"]
        self.line = error["line"]
        self.detail = error


def data_dir() -> Path:
    """Directory holding datasets/ and scenes/."""
    env = os.environ.get("LINGUA_DATA_DIR")
    if env:
        return Path(env)
    here = Path(__file__).resolve().parent
    for candidate in (here / "data", here.parent.parent):
        if (candidate / "datasets" / "bench108.jsonl").exists():
            return candidate
    raise FileNotFoundError("bundled data not found; set LINGUA_DATA_DIR")


def _scene_arg(scene) -> str:
    if scene is None:
        return str(data_dir() / "scenes" / "threebot.json")
    if isinstance(scene, dict):
        return json.dumps(scene)
    return str(scene)


def _oracle_files(extra: Sequence[os.PathLike | str] = ()) -> list[str]:
    base = data_dir() / "datasets"
    return [str(base / "bench108.jsonl"), str(base / "scenarios.jsonl"), *map(str, extra)]


def load_scene(path: os.PathLike | str | None = None) -> dict:
    return json.loads(_lingua.load_scene(_scene_arg(path)))


def parse_plan(text: str, robots: Sequence[str] = ()) -> dict:
    """Parse a script into {robot: [canonical calls]}; raises PlanError with kind and line."""
    out = json.loads(_lingua.parse_plan(text, list(robots)))
    if "error" in out:
        raise PlanError(out["error"])
    return out


def forward_kinematics(joints: Sequence[float]) -> tuple[float, float, float]:
    """(radial, height, yaw) of the end effector for the default arm geometry."""
    return _lingua.forward_kinematics(list(joints))


def run_plan(text: str, scene=None) -> dict:
    return json.loads(_lingua.run_plan(_scene_arg(scene), text))


def plan(instruction: str, scene=None, backend: str = "oracle", robots: Sequence[str] = ()) -> dict:
    return json.loads(_lingua.plan(instruction, _scene_arg(scene), backend, _oracle_files(), list(robots)))


def run_bench(backend: str = "oracle", dataset=None, scene=None, filter: str = "", parallel: int = 1) -> dict:
    ds = str(dataset) if dataset else str(data_dir() / "datasets" / "bench108.jsonl")
    return json.loads(_lingua.run_bench(ds, _scene_arg(scene), backend, _oracle_files(), filter, parallel))
