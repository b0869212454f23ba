from fractions import Fraction

from hypothesis import HealthCheck, settings, strategies as st

from galq.exactfield import CyclotomicElement

settings.register_profile(
    "galq", deadline=None, max_examples=60, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("galq")

rationals = st.fractions(min_value=-20, max_value=20, max_denominator=12)


def elements(N):
    return st.lists(rationals, min_size=N, max_size=N).map(lambda v: CyclotomicElement.from_cyclic(N, v))


def rational_vectors(n):
    return st.lists(rationals, min_size=n, max_size=n)


ZERO = Fraction(0)


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.RESULTS:
        terminalreporter.write_line(line)
