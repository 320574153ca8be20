from fractions import Fraction

from hypothesis import strategies as st

from symplectic_mdr.series import Polynomial, monomial

VARS = ("q", "p")

fractions = st.fractions(min_value=-(2**63), max_value=2**63 - 1, max_denominator=2**31)


@st.composite
def polynomials(draw, variables=VARS, max_degree=3, max_terms=4):
    terms = {}
    for _ in range(draw(st.integers(0, max_terms))):
        exps = {v: draw(st.integers(0, max_degree)) for v in variables}
        terms[monomial(**exps)] = draw(fractions)
    return Polynomial(terms)


def frac(s) -> Fraction:
    return Fraction(s)


# Acceptance lines collected by test_acceptance.py and printed in the summary.
ACCEPTANCE_LINES: list[str] = []
SUITE_BUDGET_S = 300.0
_START = [0.0]


def pytest_sessionstart(session):
    import time

    _START[0] = time.perf_counter()


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    import time

    elapsed = time.perf_counter() - _START[0]
    if not ACCEPTANCE_LINES:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for line in ACCEPTANCE_LINES:
        tr.write_line(line)
    status = "PASS" if elapsed <= SUITE_BUDGET_S else "FAIL"
    tr.write_line(f"{status}  suite wall-clock: {elapsed:.1f} s (budget {SUITE_BUDGET_S:.0f} s)")


def pytest_sessionfinish(session, exitstatus):
    import time

    if ACCEPTANCE_LINES and time.perf_counter() - _START[0] > SUITE_BUDGET_S and exitstatus == 0:
        session.exitstatus = 1
