import itertools
import random

import pytest
from hypothesis import settings

from mzvdecomp import PrecisionPolicy, build, default10, hoffman

settings.register_profile("default", max_examples=120, deadline=None)
settings.load_profile("default")


@pytest.fixture(scope="session")
def policy():
    return PrecisionPolicy(digits=64)


@pytest.fixture(scope="session")
def table(policy):
    return build(default10(), 10, policy)


@pytest.fixture(scope="session")
def hoffman_table(table):
    return build(hoffman(10), 10, source=table)


def convergent_words(max_weight, min_weight=2):
    for n in range(min_weight, max_weight + 1):
        for mid in itertools.product((0, 1), repeat=n - 2):
            yield (1, *mid, 0)


def random_convergent_word(rng: random.Random, max_weight: int, min_weight: int = 2):
    n = rng.randint(min_weight, max_weight)
    return (1, *(rng.randint(0, 1) for _ in range(n - 2)), 0)


# --- acceptance reporting ----------------------------------------------------------

_criteria: dict[int, dict] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion covered by the test")


def pytest_runtest_logreport(report):
    marker = getattr(report, "criterion", None)
    if marker is None:
        return
    number, title = marker
    entry = _criteria.setdefault(number, {"title": title, "ok": True, "seen": False})
    if report.when == "call":
        entry["seen"] = True
    if report.failed:
        entry["ok"] = False


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    m = item.get_closest_marker("criterion")
    if m is not None:
        report.criterion = tuple(m.args)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_criteria):
        e = _criteria[number]
        verdict = "PASS" if e["ok"] and e["seen"] else "FAIL"
        terminalreporter.write_line(f"{verdict} criterion {number}: {e['title']}")
