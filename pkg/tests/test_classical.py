import pytest
from hypothesis import given, strategies as st

from galq.classical import (
    PhaseState,
    PotentialSpec,
    action,
    cycle_census,
    energy,
    energy_difference_rhs,
    eom_residual,
    hamilton_quantities,
    iterate,
    lagrangian,
    step_backward,
    step_classical,
    trajectory_curve_points,
    verify_period,
)
from galq.errors import NoUniqueStep

odd_moduli = st.sampled_from([3, 5, 7, 9, 11, 15])
coeff_lists = st.lists(st.integers(-30, 30), min_size=1, max_size=4)


def test_potential_reduces_coefficients():
    V = PotentialSpec(5, (7, -1, 2))
    assert V.coeffs == (2, 4, 2)
    assert V.degree == 2
    assert V(3) == (2 + 12 + 18) % 5
    assert V.derivative(3) == (4 + 12) % 5
    with pytest.raises(ValueError):
        PotentialSpec(0, (1,))


@given(odd_moduli, coeff_lists, st.integers(0, 100), st.integers(0, 100))
def test_step_is_the_unique_solution_of_the_equation_of_motion(n, coeffs, a, b):
    V = PotentialSpec(n, tuple(coeffs))
    s = PhaseState(a % n, b % n)
    solutions = [x for x in range(n) if eom_residual(x, s.q_curr, s.q_prev, V) == 0]
    assert solutions == [step_classical(s, V).q_curr]


@given(odd_moduli, coeff_lists, st.integers(0, 100), st.integers(0, 100))
def test_backward_step_inverts_forward(n, coeffs, a, b):
    V = PotentialSpec(n, tuple(coeffs))
    s = PhaseState(a % n, b % n)
    assert step_backward(step_classical(s, V), V) == s
    assert step_classical(step_backward(s, V), V) == s


def test_even_modulus_needs_even_force():
    V = PotentialSpec(4, (0, 1))
    with pytest.raises(NoUniqueStep):
        step_classical(PhaseState(0, 0), V)
    # V = q^2 has V' = 2q: the halved step is the free-particle-like map
    W = PotentialSpec(4, (0, 0, 1))
    s = step_classical(PhaseState(1, 2), W)
    assert s == PhaseState(2, (4 - 1 - 2) % 4)
    assert eom_residual(s.q_curr, 2, 1, W) == 0


@given(odd_moduli, st.integers(-5, 5), st.integers(-5, 5), st.integers(0, 50), st.integers(0, 50), st.integers(0, 50))
def test_action_variation_gives_equation_of_motion(n, a1, a2, q0, q1, q2):
    """Linear coefficient in eps of S(q1 + eps) equals minus the residual."""
    V = PotentialSpec(n, (0, a1, a2))

    def S(x):
        # exact integer action of the path q0, x, q2
        return (x - q0) ** 2 - V.value_int(x) + (q2 - x) ** 2 - V.value_int(q2)

    linear = (S(q1 + 1) - S(q1 - 1)) // 2
    assert linear % n == (-eom_residual(q2, q1, q0, V)) % n


@given(odd_moduli, coeff_lists, st.integers(0, 50), st.integers(0, 50), st.integers(0, 50))
def test_energy_difference_identity(n, coeffs, a, b, c):
    V = PotentialSpec(n, tuple(coeffs))
    lhs = (energy(c, b, V) - energy(b, a, V)) % n
    assert lhs == energy_difference_rhs(c, b, a, V)


@given(odd_moduli, coeff_lists, st.integers(0, 50), st.integers(0, 50))
def test_hamilton_quantities_odd_modulus(n, coeffs, q, qn):
    V = PotentialSpec(n, tuple(coeffs))
    p, H = hamilton_quantities(qn, q, V)
    assert p == 2 * (qn - q) % n
    assert H == ((qn - q) ** 2 + V.value_int(q)) % n
    assert (q % n, p) in trajectory_curve_points(H, V)


def test_hamilton_quantities_even_modulus_returns_integer():
    V = PotentialSpec(4, (0, 0, 1))
    assert hamilton_quantities(3, 1, V) == (0, 4 + 1)


def test_curve_points_satisfy_relation():
    V = PotentialSpec(7, (0, 0, 1))
    for E in range(7):
        for x, y in trajectory_curve_points(E, V):
            assert (y * y - 4 * E + 4 * x * x) % 7 == 0


def test_iterate_and_action():
    V = PotentialSpec(5, (0, 0, 1))
    traj = iterate(0, 1, V, 6)
    assert len(traj.states) == 8
    qs = traj.states
    for t in range(1, len(qs) - 1):
        assert eom_residual(qs[t + 1], qs[t], qs[t - 1], V) == 0
    assert action(traj) == sum(lagrangian(qs[t], qs[t - 1], V) for t in range(1, len(qs))) % 5


def brute_period(s, n, coeffs):
    """Independent step: q'' = -V'/2 solved by search."""
    def step(st_):
        a, b = st_
        d = sum(k * c * b ** (k - 1) for k, c in enumerate(coeffs) if k)
        x = next(x for x in range(n) if (2 * (x - 2 * b + a) + d) % n == 0)
        return (b, x)

    cur, k = step(s), 1
    while cur != s:
        cur, k = step(cur), k + 1
    return k


@pytest.mark.parametrize("n", [3, 5, 7])
@pytest.mark.parametrize("coeffs", [(0,), (0, 0, 1), (0, 1, 1)])
def test_census_partitions_phase_space(n, coeffs):
    V = PotentialSpec(n, coeffs)
    census = cycle_census(V)
    assert census.bijective
    members = [s for o in census.orbits for s in o.members]
    assert len(members) == len(set(members)) == n * n
    assert sum(o.period for o in census.orbits) == n * n
    for o in census.orbits:
        assert verify_period(o.representative, o.period, V)
        for s in o.members:
            assert brute_period((s.q_prev, s.q_curr), n, coeffs) == o.period


def test_free_particle_census_n5():
    census = cycle_census(PotentialSpec(5, (0,)))
    periods = sorted(o.period for o in census.orbits)
    assert periods == [1] * 5 + [5] * 4
    assert census.total_members == 25


def test_fixed_point_at_origin_n3():
    census = cycle_census(PotentialSpec(3, (0, 0, 1)))
    fixed = [o for o in census.orbits if o.period == 1]
    assert any(o.representative == PhaseState(0, 0) for o in fixed)


def test_non_invertible_census_attaches_tails():
    # n = 4, V = q^4: V' = 4q^3 = 0 mod 4 but halving over the integers gives 2q^3
    V = PotentialSpec(4, (0, 0, 0, 0, 1))
    census = cycle_census(V)
    assert census.total_members == 16
    if not census.bijective:
        assert census.notes
        for o in census.orbits:
            assert verify_period(o.representative, o.period, V)
