"""Wave-function families over the roots of X^m -+ 1 and their Galois structure."""
from __future__ import annotations

import math
from dataclasses import dataclass, replace
from fractions import Fraction

import mpmath

from .exactfield import CyclotomicElement, apply_automorphism, as_element, embed_complex, is_rational
from .quantize import WaveFunction, potential_exponent, propagate_backward, propagate_forward

MODES = ("full", "potential_only")


@dataclass(frozen=True)
class WaveFamily:
    rootset: object
    components: tuple  # WaveFunction per root, in root order
    time: int = 0
    rational_initial: bool = True

    @property
    def m(self):
        return self.rootset.m

    @property
    def n(self):
        return self.components[0].n


@dataclass(frozen=True)
class SymmetricInvariant:
    k: int
    values: tuple


def make_family(rootset, initial, n=None):
    """Every component starts from the same initial data (rational by default)."""
    if not isinstance(initial, WaveFunction):
        initial = WaveFunction(tuple(initial))
    if n is not None and initial.n != n:
        raise ValueError(f"initial data has {initial.n} entries, expected {n}")
    rational = all(is_rational(a) is not None for a in initial)
    N = math.lcm(rootset.conductor, initial.conductor)
    comp = initial.promote(N)
    return WaveFamily(rootset, tuple(comp for _ in rootset.roots), 0, rational)


def _potential_step(psi, alpha, V, sign, lift):
    N = math.lcm(alpha.conductor, psi.conductor)
    alpha = alpha.promote(N)
    out = []
    for q, a in enumerate(psi.amplitudes, start=1):
        out.append(a.promote(N) * alpha ** (-sign * potential_exponent(V, q, lift)))
    return WaveFunction(tuple(out))


def evolve_family(family, V, steps, mode="full", lift="symmetric"):
    """Advance each component with its own root as base; negative steps run backward."""
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}; expected one of {MODES}")
    comps = list(family.components)
    sign = 1 if steps >= 0 else -1
    for _ in range(abs(steps)):
        for i, alpha in enumerate(family.rootset.roots):
            if mode == "potential_only":
                comps[i] = _potential_step(comps[i], alpha, V, sign, lift)
            elif sign > 0:
                comps[i] = propagate_forward(comps[i], alpha, V, lift)
            else:
                comps[i] = propagate_backward(comps[i], alpha, V, lift)
    return replace(family, components=tuple(comps), time=family.time + steps)


def _elementary(values, m):
    N = values[0].conductor
    e = [CyclotomicElement.rational(1, N)] + [CyclotomicElement.rational(0, N)] * m
    for x in values:
        for k in range(m, 0, -1):
            e[k] = e[k] + e[k - 1] * x
    return e


def symmetric_invariants(family):
    m = family.m
    per_q = [_elementary([c.amplitudes[q] for c in family.components], m) for q in range(family.n)]
    return [SymmetricInvariant(k, tuple(e[k] for e in per_q)) for k in range(1, m + 1)]


def galois_transform(family, sigma):
    """Apply sigma to every amplitude; the image of the alpha_i component becomes
    the sigma(alpha_i) component."""
    roots = family.rootset.roots
    new = [None] * len(roots)
    for i, alpha in enumerate(roots):
        j = family.rootset.index(apply_automorphism(sigma, alpha))
        comp = family.components[i]
        new[j] = WaveFunction(tuple(apply_automorphism(sigma, a) for a in comp.amplitudes))
    return replace(family, components=tuple(new))


def normalization_functional(family):
    """sum_q prod_i psi_{alpha_i}(q)."""
    total = None
    for q in range(family.n):
        prod = None
        for c in family.components:
            a = c.amplitudes[q]
            prod = a if prod is None else prod * a
        total = prod if total is None else total + prod
    return total


def time_reverse(family):
    """psi_g(q, -t) = psi_{1/g}(q, t): components are exchanged with those of the inverse roots."""
    rs = family.rootset
    new = tuple(family.components[rs.index(alpha.inverse())] for alpha in rs.roots)
    return replace(family, components=new, time=-family.time)


def rational_root(x, m):
    """The positive rational r with r**m == x, or None."""
    x = Fraction(x)
    if x <= 0:
        return None
    num, den = _int_root(x.numerator, m), _int_root(x.denominator, m)
    if num is None or den is None:
        return None
    return Fraction(num, den)


def _int_root(a, m):
    """Exact integer m-th root of a >= 0, or None."""
    if a < 2:
        return a
    x = 1 << -(-a.bit_length() // m)  # above the root
    while True:
        y = ((m - 1) * x + a // x ** (m - 1)) // m
        if y >= x:
            break
        x = y
    return x if x**m == a else None


def rescale_family(family):
    """Scale every component by 1/r so the functional becomes 1, when the functional
    is a positive rational with a rational m-th root r; otherwise None."""
    val = is_rational(normalization_functional(family))
    if val is None:
        return None
    r = rational_root(val, family.m)
    if r is None:
        return None
    comps = tuple(WaveFunction(tuple(a / r for a in c.amplitudes)) for c in family.components)
    return replace(family, components=comps)


@dataclass(frozen=True)
class PeriodicityReport:
    m: int
    sign: int
    max_deviation: float
    exact_zero: object  # True/False for exact input, None for numeric input

    @property
    def holds(self):
        return self.max_deviation == 0 if self.exact_zero is None else self.exact_zero


def check_m_periodicity(psi, m, tol=None):
    """Deviation from psi(q + m) = -+ psi(q) (minus for even m).  Diagnostic only."""
    values = list(psi.amplitudes) if isinstance(psi, WaveFunction) else list(psi)
    n = len(values)
    if n % m:
        raise ValueError(f"m = {m} does not divide n = {n}")
    sign = -1 if m % 2 == 0 else 1
    exact = all(isinstance(v, (CyclotomicElement, int, Fraction)) for v in values)
    if exact:
        diffs = [as_element(values[(q + m) % n]) - as_element(values[q]) * sign for q in range(n)]
        dev = max(float(abs(embed_complex(d, 15))) for d in diffs)
        return PeriodicityReport(m, sign, dev, not any(diffs))
    dev = max(abs(mpmath.mpc(values[(q + m) % n]) - sign * mpmath.mpc(values[q])) for q in range(n))
    dev = float(dev)
    if tol is not None and dev <= tol:
        dev = 0.0
    return PeriodicityReport(m, sign, dev, None)


def equivariance_defects(family_by_time, sigma):
    """Count (root, q, t) where sigma(psi_alpha) != psi_sigma(alpha)."""
    bad = 0
    for fam in family_by_time:
        img = galois_transform(fam, sigma)
        for c_img, c in zip(img.components, fam.components):
            bad += sum(1 for a, b in zip(c_img.amplitudes, c.amplitudes) if a != b)
    return bad
