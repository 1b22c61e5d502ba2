import os
from collections import defaultdict
from dataclasses import dataclass

import pytest
from hypothesis import settings

from padicdyn.cli import main

settings.register_profile("default", max_examples=50, deadline=None)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

_outcomes: dict[int, list[tuple[str, str]]] = defaultdict(list)
_criterion_of: dict[str, int] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n): acceptance criterion number n")


def pytest_collection_modifyitems(items):
    for item in items:
        mark = item.get_closest_marker("criterion")
        if mark is not None:
            _criterion_of[item.nodeid] = mark.args[0]


def pytest_runtest_logreport(report):
    n = _criterion_of.get(report.nodeid)
    if n is None:
        return
    if report.when == "call" or (report.when == "setup" and not report.passed):
        _outcomes[n].append((report.nodeid.split("::")[-1], report.outcome))


def pytest_terminal_summary(terminalreporter):
    if not _outcomes:
        return
    from test_acceptance import CRITERIA

    terminalreporter.section("acceptance criteria")
    for n in sorted(_outcomes):
        results = _outcomes[n]
        bad = [name for name, outcome in results if outcome != "passed"]
        verdict = "PASS" if not bad else "FAIL"
        detail = f"{len(results) - len(bad)}/{len(results)} checks"
        if bad:
            detail += "; failing: " + ", ".join(bad)
        terminalreporter.write_line(f"criterion {n:>2} {verdict}  {CRITERIA[n]}  ({detail})")


@dataclass(frozen=True)
class ReproduceRuns:
    first: bytes
    second: bytes
    exit_code: int


@pytest.fixture(scope="session")
def reproduce_all(tmp_path_factory) -> ReproduceRuns:
    """``reproduce all`` run twice through the CLI at default settings."""
    out = tmp_path_factory.mktemp("reproduce")
    codes, blobs = [], []
    for i in (1, 2):
        path = out / f"run{i}.json"
        codes.append(main(["--format", "json", "--out", str(path), "reproduce", "all"]))
        blobs.append(path.read_bytes())
    assert codes[0] == codes[1]
    return ReproduceRuns(blobs[0], blobs[1], codes[0])
