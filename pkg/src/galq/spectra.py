"""Characteristic polynomials over Q(zeta_N) and numeric eigenpairs.

The exact layer stops at the characteristic polynomial.  Its zero roots and
its square-free factors are split off exactly; the simple roots of each factor
are then found with the Aberth-Ehrlich iteration in mpmath, so multiplicities
never have to be guessed from clustered floating-point roots.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import mpmath

from .errors import NonConvergence
from .exactfield import CyclotomicElement, apply_automorphism, GaloisAutomorphism, embed_complex, as_element

GUARD_DIGITS = 10


# ---------------------------------------------------------------------------
# polynomials over Q(zeta_N), ascending coefficient lists


def _zero(N):
    return CyclotomicElement.rational(0, N)


def _ptrim(p):
    p = list(p)
    while p and not p[-1]:
        p.pop()
    return p


def _pmonic(p):
    lead_inv = p[-1].inverse()
    return [c * lead_inv for c in p]


def _pderiv(p):
    return _ptrim([c * k for k, c in enumerate(p)][1:])


def _psub(a, b, N):
    out = [_zero(N)] * max(len(a), len(b))
    for i, x in enumerate(a):
        out[i] = out[i] + x
    for i, y in enumerate(b):
        out[i] = out[i] - y
    return _ptrim(out)


def _pdivmod(a, b, N):
    a = list(a)
    if len(a) < len(b):
        return [], _ptrim(a)
    lead_inv = b[-1].inverse()
    q = [_zero(N)] * (len(a) - len(b) + 1)
    for i in range(len(a) - len(b), -1, -1):
        c = a[i + len(b) - 1] * lead_inv
        q[i] = c
        if c:
            for j, d in enumerate(b):
                a[i + j] = a[i + j] - c * d
    return _ptrim(q), _ptrim(a[: len(b) - 1])


def _pgcd(a, b, N):
    a, b = _ptrim(a), _ptrim(b)
    while b:
        a, b = b, _pdivmod(a, b, N)[1]
    return _pmonic(a) if a else a


def squarefree_decomposition(p, N):
    """Yun's algorithm: [(factor, multiplicity)] with monic, pairwise coprime factors."""
    p = _pmonic(_ptrim(p))
    if len(p) <= 1:
        return []
    dp = _pderiv(p)
    a = _pgcd(p, dp, N)
    b = _pdivmod(p, a, N)[0]
    c = _pdivmod(dp, a, N)[0]
    d = _psub(c, _pderiv(b), N)
    out = []
    i = 1
    while len(b) > 1:
        a = _pgcd(b, d, N) if d else b
        if len(a) > 1:
            out.append((_pmonic(a), i))
        b = _pdivmod(b, a, N)[0]
        c = _pdivmod(d, a, N)[0] if d else []
        d = _psub(c, _pderiv(b), N)
        i += 1
    return out


# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CharPoly:
    """Monic det(x I - H); coeffs[k] multiplies x**k."""

    coeffs: tuple

    @property
    def degree(self):
        return len(self.coeffs) - 1

    @property
    def conductor(self):
        return self.coeffs[0].conductor

    def zero_multiplicity(self):
        k = 0
        while k < self.degree and not self.coeffs[k]:
            k += 1
        return k

    def substitute(self, c):
        """The monic polynomial in y for x = c*y, i.e. c**-n p(c y)."""
        c = as_element(c, self.conductor)
        n = self.degree
        return CharPoly(tuple(a * c ** (k - n) for k, a in enumerate(self.coeffs)))

    def conjugate(self):
        sigma = GaloisAutomorphism(self.conductor, -1)
        return CharPoly(tuple(apply_automorphism(sigma, a) for a in self.coeffs))

    def __call__(self, x):
        acc = mpmath.mpc(0)
        for c in reversed(self.coeffs):
            acc = acc * x + embed_complex(c, mpmath.mp.dps)
        return acc

    def __eq__(self, other):
        if isinstance(other, CharPoly):
            return len(self.coeffs) == len(other.coeffs) and all(
                a == b for a, b in zip(self.coeffs, other.coeffs)
            )
        return NotImplemented

    __hash__ = None

    def to_json(self):
        return [c.to_json() for c in self.coeffs]

    def format(self, var="x"):
        terms = []
        for k in range(self.degree, -1, -1):
            c = self.coeffs[k]
            if not c:
                continue
            mono = "" if k == 0 else (var if k == 1 else f"{var}^{k}")
            s = str(c)
            if not mono:
                terms.append(s)
            elif c == 1:
                terms.append(mono)
            elif c == -1:
                terms.append("-" + mono)
            elif " " in s:
                terms.append(f"({s})*{mono}")
            else:
                terms.append(f"{s}*{mono}")
        return " + ".join(terms).replace("+ -", "- ") if terms else "0"

    def __str__(self):
        return self.format()


def char_poly(H):
    """Faddeev-LeVerrier recursion; exact because Q(zeta_N) has characteristic 0."""
    n = H.n
    N = H.conductor
    A = [[as_element(e, N) for e in row] for row in H.entries]
    zero = _zero(N)
    coeffs = [zero] * (n + 1)
    coeffs[n] = CyclotomicElement.rational(1, N)
    M = [[zero] * n for _ in range(n)]  # M_0 = 0
    for k in range(1, n + 1):
        # M_k = A M_{k-1} + c_{n-k+1} I
        c_prev = coeffs[n - k + 1]
        AM = _matmul(A, M, zero)
        for i in range(n):
            AM[i][i] = AM[i][i] + c_prev
        M = AM
        AMk = _matmul(A, M, zero)
        tr = zero
        for i in range(n):
            tr = tr + AMk[i][i]
        coeffs[n - k] = -tr / k
    return CharPoly(tuple(coeffs))


def _matmul(A, B, zero):
    n, m, p = len(A), len(B), len(B[0])
    out = [[zero] * p for _ in range(n)]
    for i in range(n):
        Ai = A[i]
        row = out[i]
        for k in range(m):
            a = Ai[k]
            if not a:
                continue
            Bk = B[k]
            for j in range(p):
                if Bk[j]:
                    row[j] = row[j] + a * Bk[j]
    return out


# ---------------------------------------------------------------------------
# numerics


def aberth_roots(coeffs, precision, max_iter=500):
    """All roots of sum coeffs[k] x**k (mpc coefficients, nonzero leading term)."""
    d = len(coeffs) - 1
    if d < 1:
        return []
    with mpmath.workdps(precision + GUARD_DIGITS):
        a = [mpmath.mpc(c) for c in coeffs]
        lead = a[-1]
        a = [c / lead for c in a]
        if d == 1:
            return [-a[0]]
        radius = 1 + max(abs(c) for c in a[:-1])
        # radius from the Cauchy bound, angles offset to avoid symmetric stalls
        z = [radius * mpmath.expjpi(mpmath.mpf(2 * k) / d + mpmath.mpf("0.4")) / 2 for k in range(d)]
        tol = mpmath.mpf(10) ** (-(precision + GUARD_DIGITS // 2))
        for it in range(1, max_iter + 1):
            biggest = mpmath.mpf(0)
            for k in range(d):
                p, dp = a[d], mpmath.mpc(0)
                for c in reversed(a[:-1]):
                    dp = dp * z[k] + p
                    p = p * z[k] + c
                if p == 0:
                    continue
                ratio = p / dp if dp != 0 else mpmath.mpc(radius)
                s = mpmath.fsum(1 / (z[k] - z[j]) for j in range(d) if j != k)
                w = ratio / (1 - ratio * s)
                z[k] -= w
                biggest = max(biggest, abs(w) / max(1, abs(z[k])))
            if biggest < tol:
                return z
        raise NonConvergence(
            f"Aberth iteration did not converge in {max_iter} iterations at {precision} digits",
            iterations=max_iter,
        )


def _rref(rows, is_zero, pick_pivot):
    """Row-reduce in place; returns pivot columns."""
    rows = [list(r) for r in rows]
    if not rows:
        return rows, []
    ncols = len(rows[0])
    pivots = []
    r = 0
    for c in range(ncols):
        if r == len(rows):
            break
        p = pick_pivot(rows, r, c)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        inv = 1 / rows[r][c]
        rows[r] = [x * inv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and not is_zero(rows[i][c]):
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
    return rows[:r], pivots


def _nullspace(rows, is_zero, pick_pivot, one, zero):
    n = len(rows[0])
    red, pivots = _rref(rows, is_zero, pick_pivot)
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for f in free:
        v = [zero] * n
        v[f] = one
        for r, pc in enumerate(pivots):
            v[pc] = -red[r][f]
        basis.append(v)
    return basis


def last_entry_basis(vectors, is_zero, pick_pivot):
    """Basis of span(vectors) in which each vector ends in 1 at a position where
    all the others vanish; ordered by that position."""
    if not vectors:
        return []
    rev = [list(reversed(v)) for v in vectors]
    red, pivots = _rref(rev, is_zero, pick_pivot)
    out = [list(reversed(r)) for r in red]
    n = len(vectors[0])
    return [v for _, v in sorted(zip([n - 1 - p for p in pivots], out), key=lambda t: t[0])]


def _exact_pivot(rows, r, c):
    for i in range(r, len(rows)):
        if rows[i][c]:
            return i
    return None


def _numeric_pivot(tol):
    def pick(rows, r, c):
        best, arg = tol, None
        for i in range(r, len(rows)):
            m = abs(rows[i][c])
            if m > best:
                best, arg = m, i
        return arg

    return pick


# ---------------------------------------------------------------------------


@dataclass
class EigenPair:
    value: object  # mpmath.mpc
    multiplicity: int
    vectors: list  # list of lists of mpc


@dataclass
class Spectrum:
    g: CyclotomicElement
    charpoly: CharPoly
    eigenpairs: list
    precision: int
    lift: str = "symmetric"
    notes: list = field(default_factory=list)

    def eigenvalues(self):
        out = []
        for ep in self.eigenpairs:
            out.extend([ep.value] * ep.multiplicity)
        return out

    def to_json(self):
        return {
            "g": self.g.to_json(),
            "charpoly": self.charpoly.to_json(),
            "eigen": [
                {
                    "value": complex_to_json(ep.value, self.precision),
                    "mult": ep.multiplicity,
                    "vectors": [[complex_to_json(x, self.precision) for x in v] for v in ep.vectors],
                }
                for ep in self.eigenpairs
            ],
            "precision": self.precision,
            "lift_convention": self.lift,
        }


def complex_to_json(z, precision):
    """[re, im] decimal strings; parts below 10**-precision print as 0."""
    with mpmath.workdps(precision + GUARD_DIGITS):
        tol = mpmath.mpf(10) ** (-precision)
        z = mpmath.mpc(z)
        re = z.real if abs(z.real) > tol else mpmath.mpf(0)
        im = z.imag if abs(z.imag) > tol else mpmath.mpf(0)
        return [mpmath.nstr(re, precision), mpmath.nstr(im, precision)]


def _sort_key(z, digits):
    return (float(mpmath.nint(z.real * 10**digits)), float(mpmath.nint(z.imag * 10**digits)))


def eigen_solve(H, precision=30, g=None):
    """Eigenvalues with multiplicities and eigenvectors of a HamiltonianMatrix."""
    if precision < 15:
        raise ValueError("precision must be at least 15 digits")
    n, N = H.n, H.conductor
    cp = char_poly(H)
    dps = precision + GUARD_DIGITS
    pairs = []
    with mpmath.workdps(dps):
        Hc = [[embed_complex(e, precision) for e in row] for row in H.entries]
        norm = max((sum(abs(x) for x in row) for row in Hc), default=mpmath.mpf(0))
        num_tol = mpmath.mpf(10) ** (-(precision // 2)) * max(1, norm)

        z = cp.zero_multiplicity()
        if z:
            one = CyclotomicElement.rational(1, N)
            basis = _nullspace([list(r) for r in H.entries], lambda x: not x, _exact_pivot, one, _zero(N))
            basis = last_entry_basis(basis, lambda x: not x, _exact_pivot)
            vecs = [[embed_complex(x, precision) for x in v] for v in basis]
            pairs.append(EigenPair(mpmath.mpc(0), z, vecs))

        rest = list(cp.coeffs[z:])
        roots = []
        for factor, mult in squarefree_decomposition(rest, N):
            fc = [embed_complex(c, precision) for c in factor]
            for r in aberth_roots(fc, precision):
                roots.append((r, mult))

        # coprime square-free factors have distinct roots; merge anything numerically equal anyway
        clustered = []
        for r, mult in roots:
            for item in clustered:
                if abs(item[0] - r) < mpmath.mpf(10) ** (-(precision // 2)) * max(1, abs(r)):
                    item[1] += mult
                    break
            else:
                clustered.append([r, mult])

        for lam, mult in clustered:
            A = [[Hc[i][j] - (lam if i == j else 0) for j in range(n)] for i in range(n)]
            pick = _numeric_pivot(num_tol)
            basis = _nullspace(A, lambda x: abs(x) <= num_tol, pick, mpmath.mpc(1), mpmath.mpc(0))
            if not basis:
                raise NonConvergence(f"no eigenvector found for eigenvalue {mpmath.nstr(lam, 15)}")
            basis = last_entry_basis(basis, lambda x: abs(x) <= num_tol, pick)
            pairs.append(EigenPair(lam, mult, basis))

        bound = mpmath.mpf(10) ** (-precision + 4) * max(norm, mpmath.mpf(10) ** -precision)
        for ep in pairs:
            for v in ep.vectors:
                res = max(abs(sum(Hc[i][j] * v[j] for j in range(n)) - ep.value * v[i]) for i in range(n))
                if res > bound:
                    raise NonConvergence(
                        f"eigenpair residual {mpmath.nstr(res, 5)} exceeds {mpmath.nstr(bound, 5)}"
                    )
        zero_first = sorted(pairs, key=lambda ep: (ep.value != 0,) + _sort_key(ep.value, precision // 2))
    return Spectrum(g if g is not None else _zero(N), cp, zero_first, precision, H.lift)


def conjugate_spectrum(S):
    """Spectrum for 1/g, read off by complex conjugation."""
    with mpmath.workdps(S.precision + GUARD_DIGITS):
        pairs = [
            EigenPair(mpmath.conj(ep.value), ep.multiplicity, [[mpmath.conj(x) for x in v] for v in ep.vectors])
            for ep in S.eigenpairs
        ]
    pairs.sort(key=lambda ep: (ep.value != 0,) + _sort_key(ep.value, S.precision // 2))
    g = S.g.inverse() if S.g else S.g
    return Spectrum(g, S.charpoly.conjugate(), pairs, S.precision, S.lift, list(S.notes))


def total_energies(spectra):
    """Distinct sums E_1 + ... + E_m, one eigenvalue from each spectrum."""
    if not spectra:
        return []
    precision = min(S.precision for S in spectra)
    tol = mpmath.mpf(10) ** (-(precision // 2))
    with mpmath.workdps(precision + GUARD_DIGITS):
        sums = [mpmath.mpc(0)]
        for S in spectra:
            vals = [ep.value for ep in S.eigenpairs]
            nxt = []
            for s in sums:
                for v in vals:
                    t = s + v
                    if not any(abs(t - u) < tol for u in nxt):
                        nxt.append(t)
            sums = nxt
        return sorted(sums, key=lambda z: _sort_key(z, precision // 2))


def spectrum_for_base(g, V, precision=30, lift="symmetric"):
    from .quantize import hamiltonian

    H = hamiltonian(g, V, lift)
    return eigen_solve(H, precision, g=as_element(g))

