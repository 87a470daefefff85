"""Shared fixtures: the bundled documents and everything derived from them.

Heavy objects (lattice towers, matchings, chambers) are computed once
per session and shared between tests; tests must treat them as frozen.
"""

from __future__ import annotations

from pathlib import Path

import pytest
from hypothesis import settings

import branetile as bt

settings.register_profile("suite", max_examples=40, deadline=None)
settings.load_profile("suite")

FIXTURE_DIR = Path(__file__).resolve().parent.parent / "fixtures"

QUIVER_FIXTURES = ("honeycomb", "conifold", "spp", "z2z2")
DIMER_FIXTURES = ("honeycomb_dimer", "spp_dimer", "square_dimer")
ALL_FIXTURES = QUIVER_FIXTURES + DIMER_FIXTURES


def fixture_path(name: str) -> Path:
    return FIXTURE_DIR / f"{name}.json"


def fixture_text(name: str) -> str:
    return fixture_path(name).read_text(encoding="utf-8")


@pytest.fixture(scope="session")
def tilings() -> dict:
    """Every bundled document, loaded (dimer documents dualized)."""
    return {name: bt.load_document(fixture_text(name))
            for name in ALL_FIXTURES}


@pytest.fixture(scope="session")
def towers(tilings) -> dict:
    return {name: bt.build_lattice_tower(tilings[name])
            for name in QUIVER_FIXTURES}


@pytest.fixture(scope="session")
def matchings_by_name(tilings, towers) -> dict:
    return {name: bt.enumerate_perfect_matchings(tilings[name], towers[name])
            for name in QUIVER_FIXTURES}


@pytest.fixture(scope="session")
def chambers_by_name(tilings, matchings_by_name) -> dict:
    return {name: bt.chamber_decomposition(tilings[name],
                                           matchings_by_name[name])
            for name in QUIVER_FIXTURES}


@pytest.fixture(scope="session")
def spp(tilings):
    return tilings["spp"]


@pytest.fixture(scope="session")
def z2z2(tilings):
    return tilings["z2z2"]


@pytest.fixture(scope="session")
def honeycomb(tilings):
    return tilings["honeycomb"]


@pytest.fixture(scope="session")
def conifold(tilings):
    return tilings["conifold"]
