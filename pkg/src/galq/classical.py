"""Discrete classical mechanics on Z_n with integer time steps."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import NoUniqueStep


@dataclass(frozen=True)
class PotentialSpec:
    """V(q) = a0 + a1 q + a2 q^2 + ... with coefficients in Z_n."""

    n: int
    coeffs: tuple = ()

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("modulus n must be positive")
        object.__setattr__(self, "coeffs", tuple(int(a) % self.n for a in self.coeffs))

    @property
    def degree(self):
        for i in range(len(self.coeffs) - 1, -1, -1):
            if self.coeffs[i]:
                return i
        return 0

    def value_int(self, q):
        """V(q) over the integers, from the stored coefficient representatives."""
        return sum(a * q**k for k, a in enumerate(self.coeffs))

    def __call__(self, q):
        return self.value_int(q) % self.n

    def derivative_int(self, q):
        """Formal derivative a1 + 2 a2 q + 3 a3 q^2 + ... over the integers."""
        return sum(k * a * q ** (k - 1) for k, a in enumerate(self.coeffs) if k)

    def derivative(self, q):
        return self.derivative_int(q) % self.n


@dataclass(frozen=True)
class PhaseState:
    q_prev: int
    q_curr: int


@dataclass
class Trajectory:
    states: list
    potential: PotentialSpec


@dataclass
class Orbit:
    representative: PhaseState
    period: int
    members: list
    tail: int = 0  # steps before entering the cycle (non-invertible maps only)


@dataclass
class CycleDecomposition:
    n: int
    orbits: list
    bijective: bool = True
    notes: list = field(default_factory=list)

    @property
    def total_members(self):
        return sum(len(o.members) for o in self.orbits)


def lagrangian(q_curr, q_prev, V):
    return ((q_curr - q_prev) ** 2 - V.value_int(q_curr)) % V.n


def action(traj):
    qs = traj.states
    if len(qs) < 2:
        raise ValueError("trajectory needs at least two points")
    V = traj.potential
    return sum(lagrangian(qs[t], qs[t - 1], V) for t in range(1, len(qs))) % V.n


def eom_residual(q_next, q_curr, q_prev, V):
    return (2 * (q_next - 2 * q_curr + q_prev) + V.derivative_int(q_curr)) % V.n


def _half_force(q, V):
    """V'(q)/2 mod n, the quantity that 2 q'' = -V' asks for."""
    n = V.n
    if n % 2:
        return V.derivative_int(q) * pow(2, -1, n) % n
    d = V.derivative_int(q)
    if d % 2:
        raise NoUniqueStep(
            f"V'({q}) = {d % n} is odd and 2 is not invertible mod {n}: "
            "2 q'' = -V'(q) has no solution for q(t+1)"
        )
    return (d // 2) % n


def step_classical(s, V):
    """One step of T: (q(t-1), q(t)) -> (q(t), q(t+1))."""
    q_next = (2 * s.q_curr - s.q_prev - _half_force(s.q_curr, V)) % V.n
    return PhaseState(s.q_curr % V.n, q_next)


def step_backward(s, V):
    """Inverse of step_classical: (q(t), q(t+1)) -> (q(t-1), q(t))."""
    q_prev_prev = (2 * s.q_prev - s.q_curr - _half_force(s.q_prev, V)) % V.n
    return PhaseState(q_prev_prev, s.q_prev % V.n)


def iterate(q0, q1, V, steps):
    """Trajectory q(0), q(1), ..., q(steps + 1) started from (q0, q1)."""
    s = PhaseState(q0 % V.n, q1 % V.n)
    states = [s.q_prev, s.q_curr]
    for _ in range(steps):
        s = step_classical(s, V)
        states.append(s.q_curr)
    return Trajectory(states, V)


def energy(q_curr, q_prev, V):
    return ((q_curr - q_prev) ** 2 + V.value_int(q_curr)) % V.n


def energy_difference_rhs(q_next, q_curr, q_prev, V):
    """Expanded form of E(t+1) - E(t) with the potential's divided differences."""
    kinetic = (q_next - q_prev) * (q_next - 2 * q_curr + q_prev)
    divided = 0
    for k, a in enumerate(V.coeffs):
        if k and a:
            divided += a * sum(q_curr**j * q_next ** (k - 1 - j) for j in range(k))
    return (kinetic + (q_next - q_curr) * divided) % V.n


def hamilton_quantities(q_next, q_curr, V):
    """p = 2 (q(t+1) - q(t)) and H = p^2 / 4 + V(q).

    H is reduced mod n when 4 is invertible there; otherwise the integer value
    (q(t+1) - q(t))^2 + V(q) is returned unreduced.
    """
    n = V.n
    p_int = 2 * (q_next - q_curr)
    if math.gcd(4, n) == 1:
        return p_int % n, (p_int * p_int * pow(4, -1, n) + V.value_int(q_curr)) % n
    return p_int % n, (q_next - q_curr) ** 2 + V.value_int(q_curr)


def trajectory_curve_points(E, V):
    n = V.n
    return {(x, y) for x in range(n) for y in range(n) if (y * y - 4 * E + 4 * V.value_int(x)) % n == 0}


def cycle_census(V):
    """Decompose Z_n x Z_n into orbits of the one-step map."""
    n = V.n
    states = [PhaseState(a, b) for a in range(n) for b in range(n)]
    image = {s: step_classical(s, V) for s in states}
    bijective = len(set(image.values())) == len(states)
    if bijective:
        seen = set()
        orbits = []
        for s in states:
            if s in seen:
                continue
            members = [s]
            seen.add(s)
            cur = image[s]
            while cur != s:
                members.append(cur)
                seen.add(cur)
                cur = image[cur]
            orbits.append(Orbit(s, len(members), members))
        return CycleDecomposition(n, orbits, True)

    # forward orbits of a non-invertible map: each state reaches a cycle after a tail
    orbits = []
    on_cycle = {}
    for s in states:
        path, index = [], {}
        cur = s
        while cur not in index and cur not in on_cycle:
            index[cur] = len(path)
            path.append(cur)
            cur = image[cur]
        if cur in index:
            cyc = path[index[cur]:]
            orb = Orbit(cyc[0], len(cyc), cyc)
            orbits.append(orb)
            for c in cyc:
                on_cycle[c] = orb
    for orb in orbits:
        orb.members = list(orb.members)
    # attach transient states to the cycle they fall into
    for s in states:
        if s in on_cycle:
            continue
        cur, tail = s, 0
        while cur not in on_cycle:
            cur = image[cur]
            tail += 1
        orb = on_cycle[cur]
        orb.members.append(s)
        orb.tail = max(orb.tail, tail)
    return CycleDecomposition(n, orbits, False, ["step map is not invertible; periods refer to the limit cycles"])


def verify_period(state, period, V):
    cur = state
    for _ in range(period):
        cur = step_classical(cur, V)
    return cur == state
