import numpy as np
import pytest
from hypothesis import settings, strategies as st

from dglue import expr as E

settings.register_profile("dglue", max_examples=60, deadline=None, derandomize=True)
settings.load_profile("dglue")

coefficients = st.floats(-3, 3, allow_nan=False).map(lambda c: round(c, 3))


def _extend(children):
    return st.one_of(
        st.tuples(children, children).map(lambda ab: E.add(*ab)),
        st.tuples(children, children).map(lambda ab: E.mul(*ab)),
        st.tuples(children, st.integers(0, 3)).map(lambda an: E.power(*an)),
        children.map(E.neg),
        children.map(E.sin),
        children.map(E.cos),
        children.map(lambda a: E.exp(E.mul(E.const(0.3), E.sin(a)))),
        children.map(lambda a: E.div(a, E.add(E.const(2.0), E.sin(a)))),
    )


# smooth trees (no abs) whose values stay moderate on [-2, 2]
smooth_exprs = st.recursive(st.one_of(st.just(E.X), coefficients.map(E.const)), _extend, max_leaves=6)
# trees that may contain kinks
rough_exprs = st.recursive(st.one_of(st.just(E.X), coefficients.map(E.const)),
                           lambda c: st.one_of(_extend(c), c.map(E.absolute)), max_leaves=6)


@pytest.fixture
def grid():
    return np.linspace(-2.0, 2.0, 41)


CRITERIA: list[str] = []


@pytest.fixture
def criterion():
    """Record one PASS/FAIL line per acceptance criterion and fail the test on FAIL."""

    def record(number: int, title: str, ok: bool, detail: str = "") -> None:
        line = f"criterion {number:>2} {'PASS' if ok else 'FAIL'}  {title}" + (f"  [{detail}]" if detail else "")
        CRITERIA.append(line)
        print(line)
        assert ok, line

    return record


def pytest_terminal_summary(terminalreporter):
    if CRITERIA:
        terminalreporter.section("acceptance criteria")
        for line in sorted(CRITERIA, key=lambda s: int(s.split()[1])):
            terminalreporter.write_line(line)
