"""Shared fixtures: groups, interval helpers, and session-cached chains.

The chains are expensive (exact convolutions over supports of ~1600
elements), so they are built once per session and reused by the unit
tests and the acceptance suite alike.
"""

from __future__ import annotations

import pytest

from folnerdom.chains import Chain, build_chain, lamplighter_folner
from folnerdom.dominance import DominanceReport, dominance_report
from folnerdom.groups import Zd
from folnerdom.schedules import Schedule
from folnerdom.sets import FiniteSubset


def z_interval(r: int) -> FiniteSubset:
    return FiniteSubset.of(Zd(1), ((i,) for i in range(-r, r + 1)))


# one line per acceptance criterion, echoed after the run so the verdicts
# survive pytest's output capture
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def z_group() -> Zd:
    return Zd(1)


@pytest.fixture(scope="session")
def z_chain2() -> Chain:
    """Z chain with B = [-1,1] radii l = (2, 16): E_2 = [-24, 24]."""
    return build_chain([z_interval(2), z_interval(16)], Schedule(depth=2))


@pytest.fixture(scope="session")
def z_chain3() -> Chain:
    """Depth-3 Z chain, radii l = (2, 16, 512): envelopes m = (2, 24, 800)."""
    return build_chain(
        [z_interval(2), z_interval(16), z_interval(512)], Schedule(depth=3)
    )


@pytest.fixture(scope="session")
def z_reports(z_chain3: Chain) -> dict[int, DominanceReport]:
    return {n: dominance_report(z_chain3, n) for n in (2, 3)}


@pytest.fixture(scope="session")
def ll_chain() -> Chain:
    """Lamplighter chain on F_1, F_2 (the two-sided sets F~_n^{-1} F~_n)."""
    F1 = lamplighter_folner(1)[1]
    F2 = lamplighter_folner(2)[1]
    return build_chain([F1, F2], Schedule(depth=2))


@pytest.fixture(scope="session")
def ll_report(ll_chain: Chain) -> DominanceReport:
    return dominance_report(ll_chain, 2)
