import json
from pathlib import Path

import pytest

from pta_engine.assets import asset_text
from pta_engine.fcm import parse_fcm
from pta_engine.goalnet import parse_goalnet
from pta_engine.knowledge import load_kb
from pta_engine.session import bundled_config, parse_trace

REPO = Path(__file__).resolve().parent.parent
GOLDENS = Path(__file__).resolve().parent / "goldens"

MINIMAL_NET = {
    "name": "minimal",
    "states": [
        {"id": "Start", "name": "Start", "is_start": True},
        {"id": "End", "name": "End", "is_end": True},
    ],
    "transitions": [
        {"id": "T1", "name": "T1", "kind": "direct", "tasks": ["Finish"]},
    ],
    "arcs": [
        {"from": "Start", "to": "T1"},
        {"from": "T1", "to": "End"},
    ],
    "branches": [],
}

CHAIN_FCM = {
    "mode": "generic",
    "concepts": [
        {"id": "L", "name": "leaf signal", "role": "leaf"},
        {"id": "F", "name": "factor", "role": "stem"},
        {"id": "M", "name": "motivation", "role": "stem"},
    ],
    "edges": [
        {"from": "L", "to": "F", "weight": 1},
        {"from": "F", "to": "M", "weight": 1},
    ],
}


@pytest.fixture
def minimal_net():
    return parse_goalnet(json.dumps(MINIMAL_NET))


@pytest.fixture(scope="session")
def main_routine():
    return parse_goalnet(asset_text("main_routine.json"))


@pytest.fixture(scope="session")
def pta_fcm():
    return parse_fcm(asset_text("pta_fcm.json"))


@pytest.fixture(scope="session")
def small_fcm():
    return parse_fcm(asset_text("fcm_small.json"))


@pytest.fixture
def chain_fcm():
    return parse_fcm(json.dumps(CHAIN_FCM))


@pytest.fixture
def kb(pta_fcm):
    return load_kb(asset_text("kb_diffusion.json"), pta_fcm)


@pytest.fixture
def session_config(tmp_path):
    def make(seed=1, **overrides):
        return bundled_config(tmp_path / "out", seed=seed, **overrides)
    return make


def load_case(name: str):
    """Config and trace documents for a bundled case study."""
    case_dir = REPO / "cases" / name
    trace = parse_trace((case_dir / "trace.json").read_text(encoding="utf-8"))
    return case_dir / "config.json", trace
