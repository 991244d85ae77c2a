"""Shared fixtures: fields and code instances reused across modules."""

import sys
from pathlib import Path

import pytest

import fountainmix as fm

sys.path.insert(0, str(Path(__file__).resolve().parent))


@pytest.fixture(scope="session")
def f2():
    return fm.field(1)


@pytest.fixture(scope="session")
def f8():
    return fm.field(3)


@pytest.fixture(scope="session")
def f256():
    return fm.field(8)


@pytest.fixture(scope="session")
def rs_160_128():
    return fm.make_rs(160, 128, fm.field(8))


@pytest.fixture(scope="session")
def rln_160_128():
    return fm.make_rln(160, 128, fm.field(8), seed=0)


@pytest.fixture(scope="session")
def standard_codes():
    """The canonical RLN / RS / LDPC source triple on the 8-column grid."""
    return fm.standard_sources()
