from __future__ import annotations

import random
from fractions import Fraction

import pytest

from abring import burnside_ring, gen_cyclic, gen_epi, gen_orbit_category
from abring.catgen import load_group


@pytest.fixture(scope="session")
def epi_cats():
    return {d: gen_epi(d) for d in range(1, 7)}


@pytest.fixture(scope="session")
def epi_rings(epi_cats):
    return {d: burnside_ring(c) for d, c in epi_cats.items()}


@pytest.fixture(scope="session")
def groups():
    gs = {f"C{n}": gen_cyclic(n) for n in range(1, 13)}
    gs["S3"] = load_group("s3")
    gs["D4"] = load_group("d4")
    return gs


@pytest.fixture(scope="session")
def orbit_cats(groups):
    return {name: gen_orbit_category(g) for name, g in groups.items()}


@pytest.fixture(scope="session")
def orbit_rings(orbit_cats):
    return {name: burnside_ring(c) for name, c in orbit_cats.items()}


def random_element(ring, rng: random.Random):
    return ring.element({o: Fraction(rng.randint(-6, 6), rng.randint(1, 4)) for o in ring.basis})


# -- acceptance summary ------------------------------------------------------------

_CRITERIA: dict[int, list] = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None or rep.when != "call":
        return
    num, text = marker.args
    entry = _CRITERIA.setdefault(num, [text, True])
    entry[1] = entry[1] and rep.passed


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(num, text): acceptance criterion")


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(_CRITERIA):
        text, ok = _CRITERIA[num]
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] criterion {num}: {text}")
