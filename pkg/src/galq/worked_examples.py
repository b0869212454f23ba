"""Reference data for the four worked examples (V = q^2) and the checks that
compare computed spectra against them.

Each check yields a row (example, quantity, expected, computed, passed).
"""
from __future__ import annotations

from dataclasses import dataclass

import mpmath

from .classical import PotentialSpec
from .exactfield import CyclotomicElement, embed_complex, make_rootset
from .quantize import hamiltonian, lagrangian_matrix
from .spectra import CharPoly, conjugate_spectrum, eigen_solve, total_energies

EIGENVALUE_RTOL = mpmath.mpf("1e-12")

# L[q][q'] for n = 6, V = q^2, symmetric representatives
L_MATRIX_N6 = [
    [-1, 0, 3, 2, 3, 0],
    [3, 2, 3, 0, -1, 0],
    [1, -2, 3, -2, 1, 0],
    [-1, 0, 3, 2, 3, 0],
    [3, 2, 3, 0, -1, 0],
    [1, -2, 3, -2, 1, 0],
]


def _s(x):
    return mpmath.sqrt(x)


def _c(re, im=0):
    return mpmath.mpc(re, im)


@dataclass
class ExampleSpec:
    number: int
    n: int
    m: int
    lift: str
    # per root index: list of (eigenvalue, multiplicity, [vectors]) with vectors possibly empty
    eigen: dict
    total: list
    zero_hamiltonian_roots: tuple = ()


def _examples():
    i = _c(0, 1)
    r3 = _s(3)
    r7 = _s(7)
    w = (-1 + r7 * i) / 4
    wb = (-1 - r7 * i) / 4
    ex1 = ExampleSpec(
        1, 2, 2, "integer",
        {
            0: [(_c(0), 1, [[0, 1]]), (-i, 1, [[-1, 1]])],
            1: [(_c(0), 1, [[0, 1]]), (i, 1, [[-1, 1]])],
        },
        [_c(0), i, -i],
    )
    ex2 = ExampleSpec(
        2, 3, 3, "symmetric",
        {
            0: [(_c(0), 3, [])],
            1: [(_c(0), 1, [[0, 0, 1]]), (-r3 / 2 * i, 2, [[1, 0, 1], [0, 1, -1]])],
            2: [(_c(0), 1, [[0, 0, 1]]), (r3 / 2 * i, 2, [[1, 0, 1], [0, 1, -1]])],
        },
        [_c(0), r3 / 2 * i, -r3 / 2 * i],
        zero_hamiltonian_roots=(0,),
    )
    zero_modes3 = [[0, 0, 0, 0, 0, 1], [0, 1, 0, 0, 0, 0], [0, 0, 0, 1, 0, 0], [-1, 0, 0, 0, 1, 0]]
    ex3 = ExampleSpec(
        3, 6, 2, "symmetric",
        {
            0: [
                (_c(0), 4, zero_modes3),
                ((-r7 - 3 * i) / 2, 1, [[w, w, 1, w, w, 1]]),
                ((r7 - 3 * i) / 2, 1, [[wb, wb, 1, wb, wb, 1]]),
            ],
            1: [
                (_c(0), 4, zero_modes3),
                ((-r7 + 3 * i) / 2, 1, [[wb, wb, 1, wb, wb, 1]]),
                ((r7 + 3 * i) / 2, 1, [[w, w, 1, w, w, 1]]),
            ],
        },
        [_c(0), r7, -r7, (r7 + 3 * i) / 2, -(r7 + 3 * i) / 2, (r7 - 3 * i) / 2, -(r7 - 3 * i) / 2],
    )
    zero_modes4 = [[0, 0, 0, 0, 0, 1], [0, 0, 1, 0, 0, 0], [-1, 0, 0, 1, 0, 0], [0, -1, 0, 0, 1, 0]]
    nonzero4 = [[-1, 0, 1, -1, 0, 1], [-1, 1, 0, -1, 1, 0]]
    ex4 = ExampleSpec(
        4, 6, 3, "symmetric",
        {
            0: [(_c(0), 6, [])],
            1: [(_c(0), 4, zero_modes4), (-2 * r3 * i, 2, nonzero4)],
            2: [(_c(0), 4, zero_modes4), (2 * r3 * i, 2, nonzero4)],
        },
        [_c(0), 2 * r3 * i, -2 * r3 * i],
        zero_hamiltonian_roots=(0,),
    )
    return [ex1, ex2, ex3, ex4]


def example_specs(precision=30):
    with mpmath.workdps(precision + 10):
        return _examples()


# ---------------------------------------------------------------------------


def fmt(z, digits=12):
    z = mpmath.mpc(z)
    tol = mpmath.mpf(10) ** (-digits)
    re = z.real if abs(z.real) > tol else 0
    im = z.imag if abs(z.imag) > tol else 0
    if im == 0:
        return mpmath.nstr(re, digits)
    if re == 0:
        return mpmath.nstr(im, digits) + "i"
    sign = "+" if im > 0 else "-"
    return f"{mpmath.nstr(re, digits)}{sign}{mpmath.nstr(abs(im), digits)}i"


def _close(a, b, rtol=EIGENVALUE_RTOL):
    return abs(a - b) <= rtol * max(1, abs(b))


def match_multiset(computed, expected, rtol=EIGENVALUE_RTOL):
    pool = list(computed)
    if len(pool) != len(expected):
        return False
    for e in expected:
        for k, c in enumerate(pool):
            if _close(c, e, rtol):
                del pool[k]
                break
        else:
            return False
    return True


def match_set(computed, expected, rtol=EIGENVALUE_RTOL):
    return (
        len(computed) == len(expected)
        and all(any(_close(c, e, rtol) for c in computed) for e in expected)
        and all(any(_close(c, e, rtol) for e in expected) for c in computed)
    )


def _rank(vectors, tol):
    rows = [[mpmath.mpc(x) for x in v] for v in vectors]
    rank = 0
    ncols = len(rows[0]) if rows else 0
    for c in range(ncols):
        piv = max(range(rank, len(rows)), key=lambda r: abs(rows[r][c]), default=None)
        if piv is None or abs(rows[piv][c]) <= tol:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        for r in range(len(rows)):
            if r != rank and rows[r][c] != 0:
                f = rows[r][c] / rows[rank][c]
                rows[r] = [x - f * y for x, y in zip(rows[r], rows[rank])]
        rank += 1
    return rank


def eigenvector_matches(spectrum, H_complex, value, expected_vectors, precision):
    """Each expected vector solves H v = value v, and together they span the
    computed eigenspace of ``value``."""
    tol = mpmath.mpf(10) ** (-(precision // 2))
    n = len(H_complex)
    for v in expected_vectors:
        v = [mpmath.mpc(x) for x in v]
        res = max(abs(sum(H_complex[i][j] * v[j] for j in range(n)) - value * v[i]) for i in range(n))
        if res > tol:
            return False
    pair = next((ep for ep in spectrum.eigenpairs if _close(ep.value, value)), None)
    if pair is None:
        return False
    dim = len(pair.vectors)
    return _rank(expected_vectors, tol) == dim and _rank(list(pair.vectors) + expected_vectors, tol) == dim


@dataclass
class CheckRow:
    example: int
    quantity: str
    expected: str
    computed: str
    passed: bool


def run_example(ex, precision=30):
    rows = []
    V = PotentialSpec(ex.n, (0, 0, 1))
    rs = make_rootset(ex.m)
    rows_add = rows.append
    with mpmath.workdps(precision + 10):
        spectra = []
        for idx, g in enumerate(rs.roots):
            H = hamiltonian(g, V, ex.lift)
            S = eigen_solve(H, precision, g=g)
            spectra.append(S)
            name = f"g = {g}"
            if idx in ex.zero_hamiltonian_roots:
                rows_add(CheckRow(ex.number, f"{name}: Hamiltonian", "zero matrix",
                                  "zero matrix" if H.is_zero() else "nonzero", H.is_zero()))
            exp_vals = []
            for val, mult, _ in ex.eigen[idx]:
                exp_vals.extend([val] * mult)
            got = S.eigenvalues()
            rows_add(CheckRow(
                ex.number, f"{name}: eigenvalues",
                ", ".join(fmt(v) for v in exp_vals), ", ".join(fmt(v) for v in got),
                match_multiset(got, exp_vals),
            ))
            Hc = [[embed_complex(e, precision) for e in row] for row in H.entries]
            for val, mult, vecs in ex.eigen[idx]:
                if not vecs:
                    continue
                ok = eigenvector_matches(S, Hc, val, vecs, precision)
                pair = next((ep for ep in S.eigenpairs if _close(ep.value, val)), None)
                computed = "; ".join(_fmt_vec(v) for v in pair.vectors) if pair else "no such eigenvalue"
                rows_add(CheckRow(
                    ex.number, f"{name}: eigenvectors for E = {fmt(val)}",
                    "; ".join(_fmt_vec(v) for v in vecs), computed, ok,
                ))
        # conjugate-root consistency
        for idx, g in enumerate(rs.roots):
            j = rs.index(g.inverse())
            if j > idx:
                conj = conjugate_spectrum(spectra[idx])
                ok = match_multiset(conj.eigenvalues(), spectra[j].eigenvalues())
                rows_add(CheckRow(ex.number, f"g = {rs.roots[j]}: conjugate of g = {g}",
                                  "conjugate spectrum", "agrees" if ok else "differs", ok))
        tot = total_energies(spectra)
        rows_add(CheckRow(
            ex.number, "total energies", ", ".join(fmt(v) for v in ex.total),
            ", ".join(fmt(v) for v in tot), match_set(tot, ex.total),
        ))
        if ex.n == 6:
            L = lagrangian_matrix(V).symmetric()
            rows_add(CheckRow(ex.number, "Lagrangian matrix (symmetric reps)", str(L_MATRIX_N6), str(L),
                              L == L_MATRIX_N6))
        if ex.number == 3:
            h = spectra[0].charpoly.substitute(CyclotomicElement.zeta(4))
            target = CharPoly(tuple(CyclotomicElement.rational(c, 4) for c in (0, 0, 0, 0, 4, 3, 1)))
            rows_add(CheckRow(ex.number, "char. polynomial in lambda (E = i lambda)",
                              target.format("l"), h.format("l"), h == target))
            rel = abs(mpmath.sqrt(7) - mpmath.mpf(8) / 3) / mpmath.sqrt(7)
            rows_add(CheckRow(ex.number, "|sqrt7 - 8/3| / sqrt7", "< 0.01", mpmath.nstr(rel, 6), rel < 0.01))
    return rows, spectra


def _fmt_vec(v):
    return "(" + ", ".join(fmt(x, 8) for x in v) + ")"


def run_all(precision=30):
    rows = []
    for ex in example_specs(precision):
        rows.extend(run_example(ex, precision)[0])
    return rows


def markdown_report(rows, precision):
    lines = [
        "# Worked examples: V(q) = q^2",
        "",
        f"precision: {precision} digits; eigenvalue tolerance: 1e-12 relative",
        "",
    ]
    specs = {ex.number: ex for ex in example_specs(precision)}
    for num in sorted({r.example for r in rows}):
        ex = specs[num]
        sign = "+" if ex.m % 2 == 0 else "-"
        lines.append(f"## Example {num}: n = {ex.n}, m = {ex.m}, f(X) = X^{ex.m} {sign} 1, lift = {ex.lift}")
        lines.append("")
        lines.append("| check | expected | computed | status |")
        lines.append("|---|---|---|---|")
        for r in rows:
            if r.example == num:
                status = "PASS" if r.passed else "FAIL"
                lines.append(f"| {r.quantity} | {r.expected} | {r.computed} | {status} |")
        lines.append("")
    failed = [r for r in rows if not r.passed]
    lines.append(f"**{len(rows) - len(failed)} passed, {len(failed)} failed**")
    for r in failed:
        lines.append(f"- FAIL example {r.example}: {r.quantity}")
    lines.append("")
    return "\n".join(lines)
