import os
import sys

import pytest

# ensure project root is on sys.path so `config` and `src` import as in main.py
proj_root = os.path.abspath(os.path.join(os.path.dirname(__file__), '..'))
if proj_root not in sys.path:
    sys.path.insert(0, proj_root)

from src.algebra.coxeter import build_system  # noqa: E402


@pytest.fixture
def b2():
    return build_system("B2")


@pytest.fixture
def g2():
    return build_system("G2")


@pytest.fixture
def a2():
    return build_system("A2")


@pytest.fixture
def affine_a1():
    return build_system("A1~")


@pytest.fixture
def d4():
    return build_system("D4")


@pytest.fixture
def systems_dir():
    return os.path.join(proj_root, "systems")


@pytest.fixture
def runs_dir():
    return os.path.join(proj_root, "runs")
