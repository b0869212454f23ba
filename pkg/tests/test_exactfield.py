import cmath
import json
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from conftest import elements, rationals
from galq.errors import ConductorMismatch, InvalidAutomorphism
from galq.exactfield import (
    CyclotomicElement,
    GaloisAutomorphism,
    apply_automorphism,
    cyclotomic_polynomial,
    embed_complex,
    field_arith,
    galois_group,
    is_rational,
    make_rootset,
)
from galq.numtheory import totient

CONDUCTORS = [1, 2, 3, 4, 5, 6, 8, 12]


def numeric(a):
    """Independent evaluation: numpy polyval of the coefficient vector at exp(2 pi i/N)."""
    z = cmath.exp(2j * math.pi / a.conductor)
    coeffs = [float(c) for c in reversed(a.coeffs)]
    return complex(np.polyval(coeffs, z))


def test_known_cyclotomic_polynomials():
    assert cyclotomic_polynomial(1) == (-1, 1)
    assert cyclotomic_polynomial(4) == (1, 0, 1)
    assert cyclotomic_polynomial(6) == (1, -1, 1)
    assert cyclotomic_polynomial(12) == (1, 0, -1, 0, 1)
    assert cyclotomic_polynomial(9) == (1, 0, 0, 1, 0, 0, 1)


@pytest.mark.parametrize("N", range(1, 40))
def test_cyclotomic_degree_is_totient_and_vanishes_at_zeta(N):
    phi = cyclotomic_polynomial(N)
    assert len(phi) - 1 == totient(N)
    z = cmath.exp(2j * math.pi / N)
    assert abs(np.polyval(list(reversed(phi)), z)) < 1e-8


@pytest.mark.parametrize("N", CONDUCTORS)
def test_zeta_order(N):
    z = CyclotomicElement.zeta(N)
    assert z**N == 1
    for d in range(1, N):
        if N % d == 0:
            assert z**d != 1


@pytest.mark.parametrize("N", [3, 4, 5, 12])
@given(data=st.data())
def test_field_axioms(N, data):
    a, b, c = (data.draw(elements(N)) for _ in range(3))
    assert a + b == b + a
    assert a * b == b * a
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a - a == 0
    if a:
        assert a * a.inverse() == 1
        assert (b / a) * a == b


@pytest.mark.parametrize("N", [3, 5, 8, 12])
@given(data=st.data())
def test_embedding_is_a_ring_homomorphism(N, data):
    a, b = data.draw(elements(N)), data.draw(elements(N))
    assert abs(complex(embed_complex(a * b, 20)) - numeric(a) * numeric(b)) < 1e-6 * (1 + abs(numeric(a) * numeric(b)))
    assert abs(complex(embed_complex(a + b, 20)) - numeric(a) - numeric(b)) < 1e-8 * (1 + abs(numeric(a)) + abs(numeric(b)))


def test_embedding_precision():
    import mpmath

    with mpmath.workdps(60):
        v = embed_complex(CyclotomicElement.zeta(8) + CyclotomicElement.zeta(8, 7), 50)
        assert abs(v - mpmath.sqrt(2)) < mpmath.mpf(10) ** -50


def test_promotion_and_cross_conductor_equality():
    z3 = CyclotomicElement.zeta(3)
    z6 = CyclotomicElement.zeta(6)
    assert z3.promote(6) == z6**2
    assert z3 == z6**2
    assert hash(z3) == hash(z6**2)
    assert (z3 + CyclotomicElement.zeta(4)).conductor == 12
    with pytest.raises(ConductorMismatch):
        z3.promote(4)


def test_rationals_interoperate():
    half = CyclotomicElement.rational(Fraction(1, 2), 5)
    assert half == Fraction(1, 2)
    assert half * 2 == 1
    assert 1 - half == half
    assert is_rational(half) == Fraction(1, 2)
    assert is_rational(CyclotomicElement.zeta(5)) is None
    assert hash(half) == hash(CyclotomicElement.rational(Fraction(1, 2), 7))


def test_sum_of_primitive_roots_is_mobius():
    # sum of primitive N-th roots = mu(N)
    for N, mu in [(1, 1), (2, -1), (3, -1), (4, 0), (5, -1), (6, 1), (12, 0), (30, -1)]:
        s = sum((CyclotomicElement.zeta(N, k) for k in range(1, N + 1) if math.gcd(k, N) == 1),
                CyclotomicElement.rational(0, N))
        assert s == mu


def test_i_squared():
    i = CyclotomicElement.zeta(4)
    assert i * i == -1
    assert i.conjugate() == -i
    assert str(i) == "z4"
    assert str(CyclotomicElement.zeta(3, 2)) == "-1 - z3"


@given(elements(12))
def test_json_round_trip(a):
    obj = json.loads(json.dumps(a.to_json()))
    assert all("/" in c for c in obj["coeffs"])
    assert CyclotomicElement.from_json(obj) == a


def test_field_arith_dispatch():
    z = CyclotomicElement.zeta(5)
    assert field_arith(z, z, "add") == 2 * z
    assert field_arith(z, 1, "sub") == z - 1
    assert field_arith(z, z, "div") == 1
    assert field_arith(z, None, ("pow", -5)) == 1
    with pytest.raises(ValueError):
        field_arith(z, z, "xor")
    with pytest.raises(ZeroDivisionError):
        z / CyclotomicElement.rational(0, 5)


@pytest.mark.parametrize("N", [5, 8, 12])
@given(data=st.data())
def test_automorphisms_are_field_homomorphisms(N, data):
    a, b = data.draw(elements(N)), data.draw(elements(N))
    k = data.draw(st.sampled_from([s.k for s in galois_group(N)]))
    s = GaloisAutomorphism(N, k)
    assert s(a + b) == s(a) + s(b)
    assert s(a * b) == s(a) * s(b)
    assert s.inverse()(s(a)) == a


@given(elements(8), rationals)
def test_automorphisms_fix_rationals_and_conjugation_is_minus_one(a, r):
    for s in galois_group(8):
        assert s(CyclotomicElement.rational(r, 8)) == r
    assert GaloisAutomorphism(8, -1)(a) == a.conjugate()
    assert abs(complex(embed_complex(a.conjugate(), 15)) - numeric(a).conjugate()) < 1e-8 * (1 + abs(numeric(a)))


def test_galois_group_order_and_closure():
    for N in CONDUCTORS:
        G = galois_group(N)
        assert len(G) == totient(N)
        ks = {s.k for s in G}
        assert all(s.compose(t).k in ks for s in G for t in G)


def test_invalid_automorphism():
    with pytest.raises(InvalidAutomorphism):
        GaloisAutomorphism(6, 2)


def test_apply_automorphism_promotes_subfield_elements():
    s = GaloisAutomorphism(12, 5)
    assert apply_automorphism(s, CyclotomicElement.zeta(3)) == CyclotomicElement.zeta(3, 5)
    with pytest.raises(ConductorMismatch):
        apply_automorphism(GaloisAutomorphism(4, 3), CyclotomicElement.zeta(3))


@pytest.mark.parametrize("m", range(1, 9))
def test_rootset(m):
    rs = make_rootset(m)
    assert len(rs) == m
    assert rs.conductor == (m if m % 2 else 2 * m)
    assert len(set(rs.roots)) == m
    for r in rs:
        assert r**m == rs.power_value
    prod = CyclotomicElement.rational(1, rs.conductor)
    for r in rs:
        prod = prod * r
    assert prod == 1
    # Galois group permutes the roots
    for s in galois_group(rs.conductor):
        assert sorted(rs.index(s(r)) for r in rs) == list(range(m))
