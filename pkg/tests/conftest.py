"""Shared fixtures for nama tests."""

from __future__ import annotations

from pathlib import Path

import pytest
import yaml

from nama.matching import matched_solution, shoot_w0
from nama.models import ModelParams

GOLDEN_PATH = Path(__file__).parent / "golden.yml"


@pytest.fixture(scope="session")
def golden():
    """Frozen reference constants."""
    with open(GOLDEN_PATH) as f:
        return yaml.safe_load(f)


@pytest.fixture(scope="session")
def matched():
    """Cached (MatchResult, RadialSolution) per dimension; shooting runs once per n."""
    cache = {}

    def get(n: int):
        if n not in cache:
            match = shoot_w0(n)
            cache[n] = (match, matched_solution(n, 1e-3, 1e-9, match=match))
        return cache[n]

    return get


@pytest.fixture(scope="session")
def matched_n3(matched):
    return matched(3)


@pytest.fixture
def params_n3():
    return ModelParams(n=3, d1=1, d2=1)


@pytest.fixture
def tmp_config(tmp_path):
    """Write a nama.yml with the given settings and return its path."""

    def write(settings: dict) -> str:
        path = tmp_path / "nama.yml"
        path.write_text(yaml.dump(settings))
        return str(path)

    return write
