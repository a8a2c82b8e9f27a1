from __future__ import annotations

import random
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from oracles import random_graded, random_graph_poset  # noqa: E402

from orthocurve.coxeter import build_coxeter, build_ncw
from orthocurve.families import (
    boolean_lattice,
    noncrossing_partition_lattice,
    partition_lattice,
    subspace_poset,
)
from orthocurve.poset import GradedPoset, build_poset

BOWTIE6_LABELS = ["0", "b", "d", "a", "c", "1"]


def make_bowtie6() -> GradedPoset:
    """Bottom, atoms b and d, coatoms a and c (each above both atoms), top."""
    covers = [("0", "b"), ("0", "d"), ("b", "a"), ("b", "c"), ("d", "a"), ("d", "c"), ("a", "1"), ("c", "1")]
    return build_poset(BOWTIE6_LABELS, covers, name="bowtie6")


def random_corpus(count: int = 120, seed: int = 20240901) -> list[GradedPoset]:
    """Seeded random bounded graded posets of rank <= 4 with <= 40 elements.

    Two thirds come from uniformly random cover relations, one third from the
    graph construction, which supplies rank-4 lattices with short spindles.
    """
    rng = random.Random(seed)
    out = []
    for k in range(count):
        if k % 3 == 2:
            size, covers = random_graph_poset(rng, max_size=40)
        else:
            rank = rng.randint(2, 4)
            size, covers = random_graded(rng, rank, max_size=40, p=rng.choice([0.2, 0.35, 0.5, 0.7]))
        out.append(build_poset(range(size), covers, name=f"random{k}"))
    return out


@pytest.fixture(scope="session")
def bowtie6() -> GradedPoset:
    return make_bowtie6()


@pytest.fixture(scope="session")
def corpus() -> list[GradedPoset]:
    return random_corpus()


@pytest.fixture(scope="session")
def ncw() -> dict[str, GradedPoset]:
    return {t: build_ncw(build_coxeter(t)) for t in ("A4", "B4", "D4", "F4", "H4")}


@pytest.fixture(scope="session")
def named() -> dict[str, GradedPoset]:
    return {
        "B3": boolean_lattice(3),
        "B4": boolean_lattice(4),
        "B5": boolean_lattice(5),
        "Pi4": partition_lattice(4),
        "NC4": noncrossing_partition_lattice(4),
        "NC5": noncrossing_partition_lattice(5),
        "L3F2": subspace_poset(3, 2),
        "L4F2": subspace_poset(4, 2),
        "bowtie6": make_bowtie6(),
    }


# one PASS/FAIL line per acceptance criterion in the terminal summary
_criteria: dict[str, tuple[str, str]] = {}


def pytest_runtest_logreport(report: pytest.TestReport) -> None:
    label = getattr(report, "criterion_label", None)
    if label is None:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        _criteria[report.nodeid] = (label, "PASS" if report.outcome == "passed" else "FAIL")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item: pytest.Item, call: pytest.CallInfo):  # type: ignore[no-untyped-def]
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is not None:
        rep.criterion_label = marker.args[0]


def pytest_terminal_summary(terminalreporter, exitstatus, config):  # type: ignore[no-untyped-def]
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for label, status in sorted(_criteria.values(), key=lambda v: int(v[0].split(".")[0])):
        terminalreporter.write_line(f"{status}  {label}")
