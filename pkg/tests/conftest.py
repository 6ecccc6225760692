import pytest

from polytriv.engine import PolymorphismTuple
from polytriv.functions import FunctionTable
from polytriv.predicate import Predicate, equality_predicate, nae_predicate, symmetric_predicate


def const(v, n=2, k=2):
    return FunctionTable.constant(k, n, v)


def proj(j, n=2, k=2):
    return FunctionTable.projection(k, n, j)


def tup(*tables):
    return PolymorphismTuple.of(*tables)


@pytest.fixture
def nae():
    return nae_predicate()


@pytest.fixture
def even3():
    return symmetric_predicate(3, {0, 2})


@pytest.fixture
def odd3():
    return symmetric_predicate(3, {1, 3})


@pytest.fixture
def atmost1():
    return symmetric_predicate(3, {0, 1})


@pytest.fixture
def atleast2():
    return symmetric_predicate(3, {2, 3})


@pytest.fixture
def eq2():
    return equality_predicate(2)


@pytest.fixture
def cube3():
    return Predicate.from_tuples((2, 2, 2), [(a, b, c) for a in (0, 1) for b in (0, 1) for c in (0, 1)])


def pytest_terminal_summary(terminalreporter):
    # one line per acceptance criterion, read back from record_property
    lines = []
    for outcome in ("passed", "failed"):
        for rep in terminalreporter.stats.get(outcome, []):
            if getattr(rep, "when", None) != "call" or "test_acceptance" not in rep.nodeid:
                continue
            props = dict(rep.user_properties)
            if "criterion" in props:
                lines.append((props["criterion"], "PASS" if outcome == "passed" else "FAIL", props.get("detail", "")))
    if lines:
        terminalreporter.section("acceptance criteria")
        for label, verdict, detail in sorted(lines, key=lambda x: int(x[0].split()[0])):
            terminalreporter.write_line(f"{verdict}  {label}  [{detail}]")
