#!/usr/bin/env python3
"""
Shared Fixtures (conftest.py)

Fixtures shared by every test module of the package. Lie algebras are
session-scoped because their structure constants are cached on the object;
modules are built through factories so each test states its weights.

Topics covered:
- Session-scoped algebras
- Fixture factories for irreducible modules and tensor products
- Seeded random generators
- Temporary output directories and config files
- Custom markers and the --run-slow option
"""
import json
import os
from fractions import Fraction
from typing import Any, Callable, Dict, Sequence

import numpy as np
import pytest

from gaudin_lab.liealg import SimpleLieAlgebra, from_type
from gaudin_lab.representations import IrrepSpace, TensorSpace, build_irrep


@pytest.fixture(scope="session")
def a1() -> SimpleLieAlgebra:
    return from_type("A1")


@pytest.fixture(scope="session")
def a2() -> SimpleLieAlgebra:
    return from_type("A2")


@pytest.fixture(scope="session")
def a3() -> SimpleLieAlgebra:
    return from_type("A3")


@pytest.fixture
def make_irrep() -> Callable[[SimpleLieAlgebra, Sequence[Any]], IrrepSpace]:
    """
    A fixture factory for irreducible modules.

    The highest weight is given by its coroot pairings, e.g. ``(1, 1)``.
    """
    def _make_irrep(g: SimpleLieAlgebra, weight: Sequence[Any]) -> IrrepSpace:
        return build_irrep(g, weight)

    return _make_irrep


@pytest.fixture
def make_tensor(make_irrep) -> Callable[..., TensorSpace]:
    """A fixture factory for tensor products of irreducible modules."""
    def _make_tensor(g: SimpleLieAlgebra, *weights: Sequence[Any]) -> TensorSpace:
        return TensorSpace([make_irrep(g, w) for w in weights])

    return _make_tensor


@pytest.fixture(scope="module")
def v1_v1():
    """A1, V_1 (x) V_1: the desk instance used by the Bethe and oper tests."""
    g = from_type("A1")
    return TensorSpace([build_irrep(g, (1,)), build_irrep(g, (1,))])


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240611)


@pytest.fixture
def random_rational(rng) -> Callable[[int], list]:
    """Random rationals with denominator 6, never zero."""
    def _random_rational(size: int) -> list:
        out = []
        while len(out) < size:
            n = int(rng.integers(-30, 31))
            if n:
                out.append(Fraction(n, 6))
        return out

    return _random_rational


@pytest.fixture
def out_dir(tmp_path) -> str:
    path = tmp_path / "out"
    path.mkdir()
    return str(path)


@pytest.fixture
def write_config(tmp_path) -> Callable[[Dict[str, Any]], str]:
    """Write an experiment config to a temporary JSON file and return its path."""
    def _write_config(data: Dict[str, Any], name: str = "experiment.json") -> str:
        path = os.path.join(str(tmp_path), name)
        with open(path, "w") as f:
            json.dump(data, f, indent=2)
        return path

    return _write_config


@pytest.fixture
def census_config() -> Dict[str, Any]:
    return {
        "algebra": "A1",
        "weights": [[1], [1]],
        "points": [0, 1],
        "chi": ["7/3"],
        "pipeline": "bethe-census",
        "seed": 3,
    }


def pytest_configure(config):
    """Register the custom markers used across the suite."""
    config.addinivalue_line("markers", "slow: mark test as slow running")
    config.addinivalue_line("markers", "exact: assertion in exact rational arithmetic")
    config.addinivalue_line("markers", "numeric: assertion up to a floating tolerance")


def pytest_addoption(parser):
    parser.addoption(
        "--run-slow", action="store_true", default=False, help="Run slow tests"
    )


def pytest_collection_modifyitems(config, items):
    """Skip slow tests unless --run-slow is given."""
    if not config.getoption("--run-slow"):
        skip_slow = pytest.mark.skip(reason="Need --run-slow option to run")
        for item in items:
            if "slow" in item.keywords:
                item.add_marker(skip_slow)
