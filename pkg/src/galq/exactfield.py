"""Exact arithmetic in the cyclotomic fields Q(zeta_N).

Elements are stored in the power basis 1, z, ..., z^(phi(N)-1) reduced modulo
the N-th cyclotomic polynomial, so equality is a coefficient comparison.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import mpmath

from .errors import ConductorMismatch, InvalidAutomorphism

# ---------------------------------------------------------------------------
# integer / rational polynomial helpers (ascending coefficient lists)


def _poly_divexact_int(num, den):
    # den monic
    num = list(num)
    out = [0] * (len(num) - len(den) + 1)
    for i in range(len(out) - 1, -1, -1):
        c = num[i + len(den) - 1]
        out[i] = c
        if c:
            for j, d in enumerate(den):
                num[i + j] -= c * d
    assert not any(num), "inexact cyclotomic division"
    return out


@lru_cache(maxsize=None)
def cyclotomic_polynomial(N):
    """Integer coefficients of Phi_N, lowest degree first."""
    if N < 1:
        raise ValueError("conductor must be positive")
    poly = [-1] + [0] * (N - 1) + [1]
    for d in range(1, N):
        if N % d == 0:
            poly = _poly_divexact_int(poly, cyclotomic_polynomial(d))
    return tuple(poly)


def _trim(p):
    while p and p[-1] == 0:
        p.pop()
    return p


def _pdivmod(a, b):
    a = list(a)
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 1)
    lead = b[-1]
    for i in range(len(a) - len(b), -1, -1):
        c = a[i + len(b) - 1] / lead
        q[i] = c
        if c:
            for j, d in enumerate(b):
                a[i + j] -= c * d
    return _trim(q), _trim(a[: len(b) - 1])


def _pmul(a, b):
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _psub(a, b):
    out = [Fraction(0)] * max(len(a), len(b))
    for i, x in enumerate(a):
        out[i] += x
    for i, y in enumerate(b):
        out[i] -= y
    return _trim(out)


def _poly_inverse_mod(a, m):
    """u with a*u == 1 (mod m) over Q, by the extended Euclidean algorithm."""
    r0, r1 = _trim([Fraction(x) for x in m]), _trim([Fraction(x) for x in a])
    s0, s1 = [], [Fraction(1)]
    while r1:
        q, r = _pdivmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, _psub(s0, _pmul(q, s1))
    # r0 is a nonzero constant since Phi_N is irreducible
    assert len(r0) == 1
    return [c / r0[0] for c in s0]


# ---------------------------------------------------------------------------


class _Field:
    """Per-conductor tables: Phi_N, reduction of z^e for 0 <= e < N, traces."""

    def __init__(self, N):
        self.N = N
        self.poly = cyclotomic_polynomial(N)
        self.phi = len(self.poly) - 1
        table = []
        cur = {0: 1}
        for _ in range(N):
            table.append(cur)
            nxt = {}
            for j, c in cur.items():
                nxt[j + 1] = nxt.get(j + 1, 0) + c
            top = nxt.pop(self.phi, 0)
            if top:
                for j in range(self.phi):
                    if self.poly[j]:
                        nxt[j] = nxt.get(j, 0) - top * self.poly[j]
            cur = {j: c for j, c in nxt.items() if c}
        self.table = table
        self._trace = None
        self._embed_cache = {}

    def reduce_cyclic(self, vec):
        """Reduce {exponent mod N: coeff} into the power basis."""
        out = [Fraction(0)] * self.phi
        for e, c in vec.items():
            if c:
                for j, t in self.table[e % self.N].items():
                    out[j] += c * t
        return tuple(out)

    @property
    def basis_traces(self):
        # trace of z^j = sum over units k of z^(jk); rational, read off the constant term
        if self._trace is None:
            units = [k for k in range(1, self.N + 1) if math.gcd(k, self.N) == 1]
            tr = []
            for j in range(self.phi):
                acc = {}
                for k in units:
                    e = (j * k) % self.N
                    acc[e] = acc.get(e, 0) + 1
                red = self.reduce_cyclic(acc)
                assert not any(red[1:])
                tr.append(red[0])
            self._trace = tuple(tr)
        return self._trace

    def zeta_powers(self, dps):
        if dps not in self._embed_cache:
            with mpmath.workdps(dps):
                zs = []
                for j in range(self.phi):
                    x = mpmath.mpf(2 * j) / self.N
                    zs.append(mpmath.mpc(mpmath.cospi(x), mpmath.sinpi(x)))
            self._embed_cache[dps] = zs
        return self._embed_cache[dps]


@lru_cache(maxsize=None)
def _field(N):
    return _Field(N)


def _as_fraction(x):
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"cannot interpret {x!r} as a rational number")


class CyclotomicElement:
    """An element of Q(zeta_N), immutable."""

    __slots__ = ("conductor", "coeffs", "_hash")

    def __init__(self, conductor, coeffs):
        F = _field(conductor)
        coeffs = tuple(_as_fraction(c) for c in coeffs)
        if len(coeffs) != F.phi:
            # accept any length power-basis input and reduce it
            acc = {}
            for j, c in enumerate(coeffs):
                acc[j % conductor] = acc.get(j % conductor, 0) + c
            coeffs = F.reduce_cyclic(acc)
        self.conductor = conductor
        self.coeffs = coeffs
        self._hash = None

    # -- constructors -------------------------------------------------------

    @classmethod
    def rational(cls, x, conductor=1):
        F = _field(conductor)
        return cls._raw(conductor, (_as_fraction(x),) + (Fraction(0),) * (F.phi - 1))

    @classmethod
    def zeta(cls, conductor, exponent=1):
        F = _field(conductor)
        return cls._raw(conductor, F.reduce_cyclic({exponent % conductor: 1}))

    @classmethod
    def from_cyclic(cls, conductor, vec):
        """Build sum_e vec[e] * zeta^e from a mapping or sequence indexed by exponent."""
        if not isinstance(vec, dict):
            vec = dict(enumerate(vec))
        acc = {}
        for e, c in vec.items():
            e %= conductor
            acc[e] = acc.get(e, 0) + c
        return cls._raw(conductor, _field(conductor).reduce_cyclic(acc))

    @classmethod
    def _raw(cls, conductor, coeffs):
        obj = object.__new__(cls)
        obj.conductor = conductor
        obj.coeffs = coeffs
        obj._hash = None
        return obj

    # -- structure ----------------------------------------------------------

    @property
    def degree(self):
        return len(self.coeffs)

    def promote(self, conductor):
        """View this element inside Q(zeta_M) for a multiple M of the conductor."""
        if conductor == self.conductor:
            return self
        if conductor % self.conductor:
            raise ConductorMismatch(
                f"cannot embed Q(zeta_{self.conductor}) into Q(zeta_{conductor})"
            )
        step = conductor // self.conductor
        return CyclotomicElement.from_cyclic(
            conductor, {j * step: c for j, c in enumerate(self.coeffs) if c}
        )

    def _coerce(self, other):
        if isinstance(other, CyclotomicElement):
            if other.conductor == self.conductor:
                return self, other
            M = math.lcm(self.conductor, other.conductor)
            return self.promote(M), other.promote(M)
        if isinstance(other, (int, Fraction)):
            return self, CyclotomicElement.rational(other, self.conductor)
        return NotImplemented

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other):
        pair = self._coerce(other)
        if pair is NotImplemented:
            return NotImplemented
        a, b = pair
        return CyclotomicElement._raw(a.conductor, tuple(x + y for x, y in zip(a.coeffs, b.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        return CyclotomicElement._raw(self.conductor, tuple(-x for x in self.coeffs))

    def __pos__(self):
        return self

    def __sub__(self, other):
        pair = self._coerce(other)
        if pair is NotImplemented:
            return NotImplemented
        a, b = pair
        return CyclotomicElement._raw(a.conductor, tuple(x - y for x, y in zip(a.coeffs, b.coeffs)))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return CyclotomicElement._raw(self.conductor, tuple(x * other for x in self.coeffs))
        pair = self._coerce(other)
        if pair is NotImplemented:
            return NotImplemented
        a, b = pair
        N = a.conductor
        acc = {}
        for i, x in enumerate(a.coeffs):
            if x:
                for j, y in enumerate(b.coeffs):
                    if y:
                        e = i + j
                        if e >= N:
                            e -= N
                        acc[e] = acc.get(e, 0) + x * y
        return CyclotomicElement._raw(N, _field(N).reduce_cyclic(acc))

    __rmul__ = __mul__

    def inverse(self):
        if not self:
            raise ZeroDivisionError("inverse of zero in Q(zeta_%d)" % self.conductor)
        r = is_rational(self)
        if r is not None:
            return CyclotomicElement.rational(1 / r, self.conductor)
        F = _field(self.conductor)
        u = _poly_inverse_mod(list(self.coeffs), list(F.poly))
        return CyclotomicElement(self.conductor, u + [0] * (F.phi - len(u)))

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("division by zero")
            return self * (Fraction(1) / Fraction(other))
        pair = self._coerce(other)
        if pair is NotImplemented:
            return NotImplemented
        a, b = pair
        return a * b.inverse()

    def __rtruediv__(self, other):
        pair = self._coerce(other)
        if pair is NotImplemented:
            return NotImplemented
        a, b = pair
        return b * a.inverse()

    def __pow__(self, e):
        if not isinstance(e, int):
            return NotImplemented
        base = self
        if e < 0:
            base, e = self.inverse(), -e
        result = CyclotomicElement.rational(1, self.conductor)
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def conjugate(self):
        """Complex conjugation, i.e. the automorphism zeta -> zeta^-1."""
        return apply_automorphism(GaloisAutomorphism(self.conductor, -1), self)

    # -- comparison ---------------------------------------------------------

    def __bool__(self):
        return any(self.coeffs)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            r = is_rational(self)
            return r is not None and r == other
        if not isinstance(other, CyclotomicElement):
            return NotImplemented
        a, b = self._coerce(other)
        return a.coeffs == b.coeffs

    def __hash__(self):
        # Tr(a)/phi(N) does not depend on which cyclotomic field holds a
        if self._hash is None:
            tr = _field(self.conductor).basis_traces
            val = sum((c * t for c, t in zip(self.coeffs, tr)), Fraction(0)) / len(tr)
            self._hash = hash(val)
        return self._hash

    # -- output -------------------------------------------------------------

    def __complex__(self):
        return complex(embed_complex(self, 15))

    def __repr__(self):
        return f"CyclotomicElement({self.conductor}, {str(self)!r})"

    def __str__(self):
        terms = []
        for j, c in enumerate(self.coeffs):
            if not c:
                continue
            mono = "" if j == 0 else (f"z{self.conductor}" if j == 1 else f"z{self.conductor}^{j}")
            if not mono:
                terms.append(str(c))
            elif c == 1:
                terms.append(mono)
            elif c == -1:
                terms.append("-" + mono)
            else:
                terms.append(f"{c}*{mono}")
        if not terms:
            return "0"
        return " + ".join(terms).replace("+ -", "- ")

    def to_json(self):
        return {"conductor": self.conductor, "coeffs": [format_rational(c) for c in self.coeffs]}

    @classmethod
    def from_json(cls, obj):
        return cls(obj["conductor"], [Fraction(c) for c in obj["coeffs"]])


def format_rational(x):
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def as_element(x, conductor=1):
    if isinstance(x, CyclotomicElement):
        return x if x.conductor == conductor else x.promote(math.lcm(x.conductor, conductor))
    return CyclotomicElement.rational(x, conductor)


def field_arith(a, b, op):
    """Dispatch helper: op in {'add', 'sub', 'mul', 'div'} or ('pow', k)."""
    if isinstance(op, tuple) and op[0] == "pow":
        return as_element(a) ** op[1]
    ops = {
        "add": lambda x, y: x + y,
        "sub": lambda x, y: x - y,
        "mul": lambda x, y: x * y,
        "div": lambda x, y: x / y,
    }
    if op not in ops:
        raise ValueError(f"unknown field operation {op!r}")
    return ops[op](as_element(a), b)


def is_rational(a):
    """The rational value of ``a`` if it lies in Q, else None."""
    if isinstance(a, (int, Fraction)):
        return Fraction(a)
    if any(a.coeffs[1:]):
        return None
    return a.coeffs[0]


def embed_complex(a, precision=30):
    """Complex value of ``a`` under zeta_N -> exp(2 pi i / N), as an mpmath mpc."""
    if isinstance(a, (int, Fraction)):
        a = CyclotomicElement.rational(a)
    dps = precision + 10
    zs = _field(a.conductor).zeta_powers(dps)
    with mpmath.workdps(dps):
        acc = mpmath.mpc(0)
        for c, z in zip(a.coeffs, zs):
            if c:
                acc += mpmath.mpf(c.numerator) / c.denominator * z
        return acc


# ---------------------------------------------------------------------------
# roots of X^m -+ 1 and the Galois group


@dataclass(frozen=True)
class GaloisAutomorphism:
    conductor: int
    k: int

    def __post_init__(self):
        if math.gcd(self.k, self.conductor) != 1:
            raise InvalidAutomorphism(
                f"zeta -> zeta^{self.k} is not an automorphism of Q(zeta_{self.conductor})"
            )
        object.__setattr__(self, "k", self.k % self.conductor if self.conductor > 1 else 1)

    def __call__(self, a):
        return apply_automorphism(self, a)

    def compose(self, other):
        """self o other."""
        if other.conductor != self.conductor:
            raise ConductorMismatch("automorphisms of different fields")
        return GaloisAutomorphism(self.conductor, self.k * other.k)

    def inverse(self):
        return GaloisAutomorphism(self.conductor, pow(self.k, -1, self.conductor) if self.conductor > 1 else 1)


def galois_group(conductor):
    return [GaloisAutomorphism(conductor, k) for k in range(1, conductor + 1) if math.gcd(k, conductor) == 1]


def apply_automorphism(sigma, a):
    if isinstance(a, (int, Fraction)):
        return Fraction(a)
    if a.conductor != sigma.conductor:
        if sigma.conductor % a.conductor:
            raise ConductorMismatch(
                f"automorphism of Q(zeta_{sigma.conductor}) applied to element of Q(zeta_{a.conductor})"
            )
        a = a.promote(sigma.conductor)
    N = a.conductor
    return CyclotomicElement.from_cyclic(N, {(j * sigma.k) % N: c for j, c in enumerate(a.coeffs) if c})


@dataclass(frozen=True)
class RootSet:
    """The m roots of X^m + 1 (m even) or X^m - 1 (m odd), whose product is 1."""

    m: int
    sign: str  # "plus" for X^m + 1, "minus" for X^m - 1
    conductor: int
    roots: tuple

    @property
    def power_value(self):
        """The value of r**m for each root r."""
        return -1 if self.sign == "plus" else 1

    def index(self, root):
        for i, r in enumerate(self.roots):
            if r == root:
                return i
        raise ValueError(f"{root} is not a root of X^{self.m} {'+' if self.sign == 'plus' else '-'} 1")

    def __len__(self):
        return self.m

    def __iter__(self):
        return iter(self.roots)


def make_rootset(m):
    if m < 1:
        raise ValueError("m must be positive")
    if m % 2:
        N = m
        roots = tuple(CyclotomicElement.zeta(N, k) for k in range(m))
        return RootSet(m, "minus", N, roots)
    N = 2 * m
    roots = tuple(CyclotomicElement.zeta(N, 2 * k - 1) for k in range(1, m + 1))
    return RootSet(m, "plus", N, roots)
