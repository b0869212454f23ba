"""Path-integral quantization with a base g in place of exp(i/hbar).

Wave functions and matrices are indexed by q = 1..n.  The Lagrangian is a
residue mod n but g**L needs an integer exponent; two lifts are offered:

``symmetric``
    the representative of L mod n in (-n/2, n/2]  (the default)
``integer``
    the integer (q - q')^2 - V(q) evaluated at q, q' in 1..n and the stored
    coefficient representatives, before any reduction

When g**n == 1 both give the same matrices.  When g**n == -1 they can differ by
signs in individual entries.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import InvalidBase
from .exactfield import CyclotomicElement, as_element

LIFTS = ("symmetric", "integer")


def symmetric_rep(r, n):
    r %= n
    return r - n if r > n // 2 else r


def potential_exponent(V, q, lift="symmetric"):
    """Integer exponent standing for V(q) in g**V(q), under the given lift."""
    if lift == "integer":
        return V.value_int(q)
    if lift == "symmetric":
        return symmetric_rep(V.value_int(q), V.n)
    raise ValueError(f"unknown lift convention {lift!r}; expected one of {LIFTS}")


def xi_range(n):
    """Symmetric residue system {-floor((n-1)/2), ..., floor(n/2)}."""
    return range(-((n - 1) // 2), n // 2 + 1)


@dataclass(frozen=True)
class WaveFunction:
    amplitudes: tuple

    def __post_init__(self):
        amps = tuple(self.amplitudes)
        N = 1
        for a in amps:
            if isinstance(a, CyclotomicElement):
                N = math.lcm(N, a.conductor)
        object.__setattr__(self, "amplitudes", tuple(as_element(a, N) for a in amps))

    @property
    def n(self):
        return len(self.amplitudes)

    @property
    def conductor(self):
        return self.amplitudes[0].conductor if self.amplitudes else 1

    def __getitem__(self, q):
        """Amplitude at q, any integer, read periodically with q = 1..n."""
        return self.amplitudes[(q - 1) % self.n]

    def __iter__(self):
        return iter(self.amplitudes)

    def promote(self, conductor):
        return WaveFunction(tuple(a.promote(conductor) for a in self.amplitudes))

    def to_json(self):
        return [a.to_json() for a in self.amplitudes]


def delta(n, q0=1):
    return WaveFunction(tuple(Fraction(int((q - q0) % n == 0)) for q in range(1, n + 1)))


@dataclass(frozen=True)
class LagrangianMatrix:
    n: int
    entries: tuple  # residues in 0..n-1, row q, column q'
    raw: tuple  # unreduced integer values

    def symmetric(self):
        return [[symmetric_rep(x, self.n) for x in row] for row in self.entries]

    def exponents(self, lift="symmetric"):
        if lift == "symmetric":
            return self.symmetric()
        if lift == "integer":
            return [list(row) for row in self.raw]
        raise ValueError(f"unknown lift convention {lift!r}; expected one of {LIFTS}")


@dataclass(frozen=True)
class HamiltonianMatrix:
    n: int
    conductor: int
    entries: tuple  # rows of CyclotomicElement
    lift: str = "symmetric"

    def __getitem__(self, idx):
        i, j = idx
        return self.entries[i][j]

    def apply(self, psi):
        amps = list(psi.amplitudes)
        return WaveFunction(tuple(_dot(row, amps) for row in self.entries))

    def trace(self):
        acc = CyclotomicElement.rational(0, self.conductor)
        for i in range(self.n):
            acc = acc + self.entries[i][i]
        return acc

    def is_zero(self):
        return not any(e for row in self.entries for e in row)

    def to_json(self):
        return {
            "n": self.n,
            "conductor": self.conductor,
            "lift_convention": self.lift,
            "entries": [[e.to_json() for e in row] for row in self.entries],
        }


def _dot(row, vec):
    acc = None
    for a, b in zip(row, vec):
        if a and b:
            t = a * b
            acc = t if acc is None else acc + t
    if acc is None:
        N = math.lcm(row[0].conductor if row else 1, vec[0].conductor if vec else 1)
        return CyclotomicElement.rational(0, N)
    return acc


def lagrangian_matrix(V):
    n = V.n
    raw = tuple(
        tuple((q - qp) ** 2 - V.value_int(q) for qp in range(1, n + 1)) for q in range(1, n + 1)
    )
    return LagrangianMatrix(n, tuple(tuple(x % n for x in row) for row in raw), raw)


def validate_base(g, n):
    """+1 or -1 according as g**n equals 1 or -1; InvalidBase otherwise."""
    g = as_element(g)
    gn = g**n
    if gn == 1:
        return 1
    if gn == -1:
        return -1
    raise InvalidBase(f"{g} ** {n} = {gn} is not +-1")


class _Powers:
    """Memoized integer powers of g."""

    def __init__(self, g):
        self.g = g
        self.cache = {}

    def __call__(self, e):
        if e not in self.cache:
            self.cache[e] = self.g**e
        return self.cache[e]


def kernel(g, V, lift="symmetric"):
    """Matrix g**L[q][q'] of the one-step propagator."""
    g = as_element(g)
    validate_base(g, V.n)
    pw = _Powers(g)
    L = lagrangian_matrix(V).exponents(lift)
    return [[pw(e) for e in row] for row in L]


def _apply_kernel(K, psi):
    N = math.lcm(K[0][0].conductor, psi.conductor)
    amps = [a.promote(N) for a in psi.amplitudes]
    rows = [[k.promote(N) for k in row] for row in K]
    return WaveFunction(tuple(_dot(row, amps) for row in rows))


def propagate_forward(psi, g, V, lift="symmetric"):
    """psi(q, t+1) = sum_{q'} g**L(q, q') psi(q', t)."""
    _check_size(psi, V)
    return _apply_kernel(kernel(g, V, lift), psi)


def propagate_backward(psi, g, V, lift="symmetric"):
    """psi(q, t-1): the forward rule with g replaced by 1/g."""
    _check_size(psi, V)
    return _apply_kernel(kernel(as_element(g).inverse(), V, lift), psi)


def propagate_xi_form(psi, g, V, lift="integer"):
    """g**(-V(q)) sum_xi g**(xi^2) psi(q - xi), xi over the symmetric residues.

    Same map as propagate_forward whenever the exponent lift is consistent;
    used as an independent check of the kernel.
    """
    _check_size(psi, V)
    g = as_element(g)
    n = V.n
    validate_base(g, n)
    N = math.lcm(g.conductor, psi.conductor)
    pw = _Powers(g.promote(N))
    out = []
    for q in range(1, n + 1):
        vq = potential_exponent(V, q, lift)
        acc = CyclotomicElement.rational(0, N)
        for xi in xi_range(n):
            a = psi[q - xi]
            if a:
                acc = acc + pw(xi * xi) * a
        out.append(pw(-vq) * acc)
    return WaveFunction(tuple(out))


def _check_size(psi, V):
    if psi.n != V.n:
        raise ValueError(f"wave function has {psi.n} components, potential is on Z_{V.n}")


def hamiltonian(g, V, lift="symmetric"):
    """H[q][q'] = (g**L - g**-L) / 2."""
    g = as_element(g)
    validate_base(g, V.n)
    pw = _Powers(g)
    L = lagrangian_matrix(V).exponents(lift)
    half = Fraction(1, 2)
    entries = tuple(tuple((pw(e) - pw(-e)) * half for e in row) for row in L)
    return HamiltonianMatrix(V.n, g.conductor, entries, lift)


def a_sums(g, n, k):
    """A_k(g) = sum_xi g**(xi^2) xi**k over the symmetric residue system."""
    g = as_element(g)
    validate_base(g, n)
    pw = _Powers(g)
    acc = CyclotomicElement.rational(0, g.conductor)
    for xi in xi_range(n):
        if xi or k == 0:
            acc = acc + pw(xi * xi) * (xi**k)
    return acc


def quantum_potential_mass(g, V, q, lift="symmetric"):
    """(V_Q(q), 1/m_Q(q)) of the truncated Schroedinger-like expansion."""
    g = as_element(g)
    n = V.n
    gi = g.inverse()
    v = potential_exponent(V, q, lift)
    gv, gmv = g**v, g ** (-v)
    half = Fraction(1, 2)
    vq = (a_sums(g, n, 0) * gmv - a_sums(gi, n, 0) * gv) * half
    inv_mq = (a_sums(g, n, 2) * gmv - a_sums(gi, n, 2) * gv) * half
    return vq, inv_mq
