"""Totient, Legendre symbols, quadratic Gauss sums, discrete theta sums and the
finite Fourier transform on Z_n, all formed exactly in Q(zeta_n) first."""
from __future__ import annotations

import math
from fractions import Fraction

import mpmath

from .errors import NotCoprime, NotPrime
from .exactfield import CyclotomicElement, as_element, embed_complex

# exponents with a common denominator above this fall back to floating point
MAX_EXACT_DENOMINATOR = 4096


def factorize(n):
    """Prime factorization {p: e} by trial division."""
    if n < 1:
        raise ValueError("n must be positive")
    out = {}
    p = 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1 if p == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def totient(n):
    result = n
    for p in factorize(n):
        result = result // p * (p - 1)
    return result


def is_prime(n):
    return n >= 2 and factorize(n) == {n: 1}


def euler_theorem_check(a, n):
    if math.gcd(a, n) != 1:
        raise NotCoprime(f"gcd({a}, {n}) = {math.gcd(a, n)}")
    return pow(a, totient(n), n) == 1 % n


def legendre(k, p):
    """Legendre symbol (k/p) by Euler's criterion."""
    if p == 2 or not is_prime(p):
        raise NotPrime(f"{p} is not an odd prime")
    r = pow(k % p, (p - 1) // 2, p)
    if r == 0:
        return 0
    return 1 if r == 1 else -1


def gauss_sum_exact(k, n):
    """G(k, n) = sum_{x=1}^{n} zeta_n^(k x^2) as an element of Q(zeta_n)."""
    counts = {}
    for x in range(1, n + 1):
        e = (k * x * x) % n
        counts[e] = counts.get(e, 0) + 1
    return CyclotomicElement.from_cyclic(n, counts)


def gauss_sum(k, n, precision=30):
    return embed_complex(gauss_sum_exact(k, n), precision)


def gauss_sum_closed_form(k, n, precision=30):
    """Closed form of G(k, n) for n = 2 (k odd) or n an odd prime not dividing k."""
    if n == 2:
        if k % 2 == 0:
            raise ValueError("closed form for n = 2 needs k odd")
        return mpmath.mpc(0)
    if not is_prime(n):
        raise NotPrime(f"{n} is not prime")
    if k % n == 0:
        raise NotCoprime(f"{n} divides {k}")
    with mpmath.workdps(precision + 10):
        root = legendre(k, n) * mpmath.sqrt(n)
        if n % 4 == 1:
            return mpmath.mpc(root, 0)
        return mpmath.mpc(0, root)


def discrete_theta(n, z=0, tau1=0, tau2=0, precision=30):
    """sum_{s=1}^{n} exp(2 pi i (tau2 s^4 / 4 + tau1 s^2 / 2 + z s) / n).

    Rational parameters are summed exactly in a cyclotomic field; anything
    else (complex z, say) is summed in mpmath at the requested precision.
    """
    try:
        z, tau1, tau2 = Fraction(z), Fraction(tau1), Fraction(tau2)
        exact = True
    except (TypeError, ValueError):
        exact = False
    if exact:
        exps = [(tau2 * s**4 / 4 + tau1 * s * s / 2 + z * s) / n for s in range(1, n + 1)]
        D = math.lcm(*(e.denominator for e in exps))
        if D <= MAX_EXACT_DENOMINATOR:
            return embed_complex(discrete_theta_exact(n, z, tau1, tau2), precision)
    with mpmath.workdps(precision + 10):
        z, tau1, tau2 = (mpmath.mpmathify(v) for v in (z, tau1, tau2))
        acc = mpmath.mpc(0)
        for s in range(1, n + 1):
            acc += mpmath.expjpi(2 * (tau2 * s**4 / 4 + tau1 * s * s / 2 + z * s) / n)
        return acc


def discrete_theta_exact(n, z=0, tau1=0, tau2=0):
    z, tau1, tau2 = Fraction(z), Fraction(tau1), Fraction(tau2)
    exps = [(tau2 * s**4 / 4 + tau1 * s * s / 2 + z * s) / n for s in range(1, n + 1)]
    D = math.lcm(*(e.denominator for e in exps))
    counts = {}
    for e in exps:
        k = int(e * D) % D
        counts[k] = counts.get(k, 0) + 1
    return CyclotomicElement.from_cyclic(D, counts)


def _common_conductor(values, n):
    N = n
    for v in values:
        if isinstance(v, CyclotomicElement):
            N = math.lcm(N, v.conductor)
    return N


def dft(values):
    """tilde_psi(p) = sum_{q=1}^{n} zeta_n^(p q) psi(q) for p = 1..n (index p-1)."""
    n = len(values)
    N = _common_conductor(values, n)
    vals = [as_element(v, N) for v in values]
    step = N // n
    out = []
    for p in range(1, n + 1):
        acc = CyclotomicElement.rational(0, N)
        for q, v in enumerate(vals, start=1):
            if v:
                acc = acc + v * CyclotomicElement.zeta(N, p * q * step)
        out.append(acc)
    return out


def idft(values):
    """psi(q) = (1/n) sum_{p=1}^{n} zeta_n^(-p q) tilde_psi(p)."""
    n = len(values)
    N = _common_conductor(values, n)
    vals = [as_element(v, N) for v in values]
    step = N // n
    out = []
    for q in range(1, n + 1):
        acc = CyclotomicElement.rational(0, N)
        for p, v in enumerate(vals, start=1):
            if v:
                acc = acc + v * CyclotomicElement.zeta(N, -p * q * step)
        out.append(acc / n)
    return out


def dft_pair(values):
    forward = dft(values)
    return forward, idft(forward)
