import os
import sys

import pytest

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
sys.path.insert(0, os.path.join(ROOT, "src"))
sys.path.insert(0, ROOT)

from linfty import load_algebra_file  # noqa: E402

ALGEBRAS = os.path.join(ROOT, "data", "algebras")
EXPECTED = os.path.join(ROOT, "data", "expected")


def algebra_path(name: str) -> str:
    return os.path.join(ALGEBRAS, f"{name}.json")


@pytest.fixture
def load():
    """Load a fixture algebra by file stem"""
    return lambda name: load_algebra_file(algebra_path(name))


@pytest.fixture
def sl2(load):
    return load("sl2")


@pytest.fixture
def e1e2(load):
    return load("e1e2")
