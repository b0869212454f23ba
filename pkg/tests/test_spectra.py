import itertools
import json

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import elements
from galq.classical import PotentialSpec
from galq.errors import NonConvergence
from galq.exactfield import CyclotomicElement, embed_complex, make_rootset
from galq.quantize import HamiltonianMatrix, hamiltonian
from galq.spectra import (
    CharPoly,
    aberth_roots,
    char_poly,
    conjugate_spectrum,
    eigen_solve,
    spectrum_for_base,
    squarefree_decomposition,
    total_energies,
)


def el(x, N):
    return CyclotomicElement.rational(x, N)


def leibniz_det_at(H, x):
    """det(x I - H) by permutation expansion, exact."""
    n, N = H.n, H.conductor
    total = el(0, N)
    for perm in itertools.permutations(range(n)):
        sign = 1
        for i in range(n):
            for j in range(i + 1, n):
                if perm[i] > perm[j]:
                    sign = -sign
        term = el(sign, N)
        for i in range(n):
            term = term * ((el(x, N) if i == perm[i] else el(0, N)) - H.entries[i][perm[i]])
        total = total + term
    return total


def evaluate_exact(p, x):
    acc = el(0, p.conductor)
    for c in reversed(p.coeffs):
        acc = acc * x + c
    return acc


def embedded(H, prec=20):
    return np.array([[complex(embed_complex(e, prec)) for e in row] for row in H.entries])


def random_matrix(N, n):
    return st.lists(elements(N), min_size=n * n, max_size=n * n).map(
        lambda v: HamiltonianMatrix(n, N, tuple(tuple(v[i * n:(i + 1) * n]) for i in range(n)))
    )


@settings(max_examples=15)
@given(random_matrix(3, 3))
def test_char_poly_matches_permutation_expansion(H):
    p = char_poly(H)
    assert p.degree == 3
    for x in range(-2, 3):
        assert evaluate_exact(p, x) == leibniz_det_at(H, x)


@settings(max_examples=15)
@given(random_matrix(4, 3))
def test_cayley_hamilton(H):
    p = char_poly(H)
    n, N = H.n, H.conductor
    acc = [[el(0, N)] * n for _ in range(n)]
    for c in reversed(p.coeffs):
        # acc = acc * H + c I
        acc = [[sum((acc[i][k] * H.entries[k][j] for k in range(n)), el(0, N)) + (c if i == j else 0)
                for j in range(n)] for i in range(n)]
    assert all(not e for row in acc for e in row)


@pytest.mark.parametrize("n,m", [(2, 2), (3, 3), (4, 2), (5, 5), (6, 2), (6, 3), (7, 7)])
def test_char_poly_matches_numpy(n, m):
    V = PotentialSpec(n, (0, 1, 1))
    for g in make_rootset(m).roots:
        H = hamiltonian(g, V)
        ours = [complex(embed_complex(c, 20)) for c in reversed(char_poly(H).coeffs)]
        assert np.allclose(ours, np.poly(embedded(H)), atol=1e-8)


def test_example_three_char_poly():
    H = hamiltonian(CyclotomicElement.zeta(4), PotentialSpec(6, (0, 0, 1)))
    p = char_poly(H)
    i = CyclotomicElement.zeta(4)
    assert p.coeffs == (0, 0, 0, 0, -4, 3 * i, 1)
    lam = p.substitute(i)
    assert lam == CharPoly(tuple(el(c, 4) for c in (0, 0, 0, 0, 4, 3, 1)))
    assert lam.format("l") == "l^6 + 3*l^5 + 4*l^4"
    assert p.zero_multiplicity() == 4


def poly_mul(a, b, N):
    out = [el(0, N)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] = out[i + j] + x * y
    return out


def test_squarefree_decomposition():
    N = 3
    z = CyclotomicElement.zeta(3)
    lin = lambda r: [-r, el(1, N)]  # noqa: E731
    p = [el(1, N)]
    for factor, k in [(lin(el(1, N)), 2), (lin(z), 3), (lin(el(-2, N)), 1)]:
        for _ in range(k):
            p = poly_mul(p, factor, N)
    parts = dict((k, f) for f, k in squarefree_decomposition(p, N))
    assert sorted(parts) == [1, 2, 3]
    assert parts[1] == lin(el(-2, N))
    assert parts[2] == lin(el(1, N))
    assert parts[3] == lin(z)
    rebuilt = [el(1, N)]
    for k, f in parts.items():
        for _ in range(k):
            rebuilt = poly_mul(rebuilt, f, N)
    assert rebuilt == p


@settings(max_examples=30)
@given(st.lists(st.complex_numbers(max_magnitude=10, allow_nan=False, allow_infinity=False), min_size=2, max_size=8))
def test_aberth_matches_numpy_roots(coeffs):
    coeffs = coeffs + [1]
    ours = sorted((complex(r) for r in aberth_roots(coeffs, 20)), key=lambda z: (round(z.real, 6), round(z.imag, 6)))
    ref = np.roots(list(reversed(coeffs)))
    # every numpy root is near one of ours (clusters of multiple roots are ill-conditioned)
    for r in ref:
        assert min(abs(r - o) for o in ours) < 1e-4 * (1 + abs(r))
    for o in ours:
        p = sum(c * o**k for k, c in enumerate(coeffs))
        assert abs(p) < 1e-6 * (1 + max(abs(c) for c in coeffs)) * (1 + abs(o)) ** len(coeffs)


def test_aberth_nonconvergence():
    with pytest.raises(NonConvergence) as info:
        aberth_roots([1, 0, 0, 0, 0, 1], 30, max_iter=1)
    assert info.value.iterations == 1


@pytest.mark.parametrize("n,m", [(2, 2), (3, 3), (4, 4), (5, 5), (6, 2), (6, 3), (7, 7), (8, 4)])
@pytest.mark.parametrize("coeffs", [(0, 0, 1), (0, 1, 1), (1, 0, 0, 1)])
def test_eigenvalues_match_numpy(n, m, coeffs):
    V = PotentialSpec(n, coeffs)
    for g in make_rootset(m).roots:
        H = hamiltonian(g, V)
        S = eigen_solve(H, 30, g=g)
        ours = [complex(v) for v in S.eigenvalues()]
        assert len(ours) == n
        ref = list(np.linalg.eigvals(embedded(H)))
        for r in ref:
            assert min(abs(r - o) for o in ours) < 1e-5 * (1 + abs(r))
        Hc = embedded(H)
        for ep in S.eigenpairs:
            assert 1 <= len(ep.vectors) <= ep.multiplicity
            for v in ep.vectors:
                v = np.array([complex(x) for x in v])
                last = [x for x in v if abs(x) > 1e-12][-1]
                assert abs(last - 1) < 1e-12
                assert np.allclose(Hc @ v, complex(ep.value) * v, atol=1e-10)


def test_zero_modes_are_exact_rational_directions():
    H = hamiltonian(CyclotomicElement.zeta(3), PotentialSpec(6, (0, 0, 1)))
    S = eigen_solve(H, 30)
    zero = S.eigenpairs[0]
    assert zero.value == 0 and zero.multiplicity == 4
    expected = {(0, 0, 1, 0, 0, 0), (-1, 0, 0, 1, 0, 0), (0, -1, 0, 0, 1, 0), (0, 0, 0, 0, 0, 1)}
    assert {tuple(int(complex(x).real) for x in v) for v in zero.vectors} == expected


def test_conjugate_spectrum_is_spectrum_of_inverse_base():
    V = PotentialSpec(6, (0, 0, 1))
    g = CyclotomicElement.zeta(4)
    S = spectrum_for_base(g, V)
    C = conjugate_spectrum(S)
    T = spectrum_for_base(g.inverse(), V)
    assert C.charpoly == T.charpoly
    assert C.g == T.g
    for a, b in zip(C.eigenvalues(), T.eigenvalues()):
        assert abs(a - b) < mpmath.mpf(10) ** -25


def test_total_energies_example_three():
    V = PotentialSpec(6, (0, 0, 1))
    spectra = [spectrum_for_base(g, V) for g in make_rootset(2).roots]
    tot = total_energies(spectra)
    assert len(tot) == 7
    with mpmath.workdps(40):
        r7 = mpmath.sqrt(7)
        assert any(abs(t - r7) < mpmath.mpf(10) ** -25 for t in tot)


def test_spectrum_json_is_deterministic_and_rational_formatted():
    V = PotentialSpec(3, (0, 0, 1))
    g = CyclotomicElement.zeta(3)
    a = json.dumps(spectrum_for_base(g, V).to_json())
    b = json.dumps(spectrum_for_base(g, V).to_json())
    assert a == b
    obj = json.loads(a)
    assert list(obj) == ["g", "charpoly", "eigen", "precision", "lift_convention"]
    assert obj["g"] == {"conductor": 3, "coeffs": ["0/1", "1/1"]}
    assert obj["eigen"][0]["value"] == ["0.0", "0.0"]


def test_precision_floor():
    with pytest.raises(ValueError):
        eigen_solve(hamiltonian(1, PotentialSpec(2, (0, 0, 1))), 10)


def test_higher_precision_agrees():
    H = hamiltonian(CyclotomicElement.zeta(4), PotentialSpec(6, (0, 0, 1)))
    lo = eigen_solve(H, 20).eigenvalues()
    with mpmath.workdps(70):
        hi = eigen_solve(H, 60).eigenvalues()
        exact = (mpmath.sqrt(7) - 3j) / 2
        assert min(abs(v - exact) for v in hi) < mpmath.mpf(10) ** -58
    assert min(abs(v - exact) for v in lo) < 1e-18
