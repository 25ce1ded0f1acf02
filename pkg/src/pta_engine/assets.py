"""Access to the bundled model files."""

from importlib import resources
from pathlib import Path

BUNDLED = (
    "main_routine.json",
    "pta_fcm.json",
    "pta_fcm_large.json",
    "fcm_small.json",
    "kb_diffusion.json",
    "scenario_vs_saga_lite.json",
)


def asset_text(name: str) -> str:
    return resources.files("pta_engine").joinpath("assets", name).read_text(encoding="utf-8")


def asset_path(name: str) -> Path:
    return Path(str(resources.files("pta_engine").joinpath("assets", name)))
