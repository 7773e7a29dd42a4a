from fractions import Fraction

import pytest
from hypothesis import settings, strategies as st

from qvir.laurent import LaurentField
from qvir.qfield import QParam

settings.register_profile("qvir", max_examples=40, deadline=None)
settings.load_profile("qvir")

# acceptance lines collected by test_acceptance, printed after the run
ACCEPTANCE_LINES: dict = {}

rationals = st.fractions(min_value=-6, max_value=6, max_denominator=7)

q_values = st.fractions(min_value=Fraction(-5), max_value=Fraction(5), max_denominator=6).filter(
    lambda v: v not in (0, 1, -1)
).map(QParam)


@st.composite
def fields(draw, lo=-6, hi=6, max_terms=6):
    exps = draw(st.lists(st.integers(lo, hi), max_size=max_terms, unique=True))
    return LaurentField({n: draw(rationals) for n in exps})


def mono(n, c=1):
    return LaurentField.monomial(n, c)


@pytest.fixture
def q2():
    return QParam(2)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[k])
