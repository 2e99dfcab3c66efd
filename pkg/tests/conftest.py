from __future__ import annotations

import sys
from pathlib import Path

import pytest

TESTS_DIR = Path(__file__).resolve().parent
REPO_ROOT = TESTS_DIR.parent
FORMS_DIR = REPO_ROOT / "forms"

sys.path.insert(0, str(TESTS_DIR))

from sweep import Sweep, build_sweep, build_sweep_n8  # noqa: E402


@pytest.fixture(scope="session")
def sweep() -> Sweep:
    return build_sweep()


@pytest.fixture(scope="session")
def sweep_n8() -> Sweep:
    return build_sweep_n8()


@pytest.fixture(scope="session")
def forms_dir() -> Path:
    return FORMS_DIR


def spec_bytes(name: str) -> bytes:
    return (FORMS_DIR / name).read_bytes()


@pytest.fixture(scope="session")
def weight_spec():
    from formfill import parse_form_spec

    return parse_form_spec(spec_bytes("weight.json"))


@pytest.fixture(scope="session")
def weight_partial_spec():
    from formfill import parse_form_spec

    return parse_form_spec(spec_bytes("weight_partial.json"))


@pytest.fixture(scope="session")
def pregnant_spec():
    from formfill import parse_form_spec

    return parse_form_spec(spec_bytes("pregnant.json"))


@pytest.fixture(scope="session")
def path3_spec():
    from formfill import parse_form_spec

    return parse_form_spec(spec_bytes("path3.json"))


@pytest.fixture(scope="session")
def k3_spec():
    from formfill import parse_form_spec

    return parse_form_spec(spec_bytes("k3.json"))
