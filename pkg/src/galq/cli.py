"""Command-line entry point: ``galq <subcommand> [options]``.

Exit status is 0 when every required check passes, 1 when a check fails and
2 on configuration or input errors.  Periodicity and full-mode drift are
diagnostics and never affect the exit status.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from fractions import Fraction
from math import gcd

import mpmath

from . import numtheory as nt
from .classical import (
    PotentialSpec,
    cycle_census,
    energy,
    energy_difference_rhs,
    eom_residual,
    hamilton_quantities,
    iterate,
    verify_period,
)
from .config import load_config, normalize_mode, resolve_precision
from .errors import GalqError, NoUniqueStep
from .exactfield import embed_complex, format_rational, galois_group, is_rational, make_rootset
from .galois_phys import (
    check_m_periodicity,
    equivariance_defects,
    evolve_family,
    make_family,
    normalization_functional,
    symmetric_invariants,
)
from .quantize import WaveFunction, delta, hamiltonian
from .spectra import complex_to_json, eigen_solve, total_energies
from .worked_examples import fmt as fmt_complex, markdown_report, run_all

EXIT_OK, EXIT_FAIL, EXIT_ERROR = 0, 1, 2


# ---------------------------------------------------------------------------
# output helpers


class Output:
    """Writes files under --out, serially and always as UTF-8."""

    def __init__(self, directory):
        self.directory = directory
        self.written = []

    def path(self, name):
        os.makedirs(self.directory, exist_ok=True)
        return os.path.join(self.directory, name)

    def text(self, name, content):
        p = self.path(name)
        with open(p, "w", encoding="utf-8", newline="\n") as f:
            f.write(content)
        self.written.append(p)
        return p

    def json(self, name, obj):
        return self.text(name, dumps(obj))

    def csv(self, name, header, rows):
        return self.text(name, csv_text(header, rows))


def dumps(obj):
    return json.dumps(obj, indent=2, ensure_ascii=False) + "\n"


def csv_text(header, rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _cx(z, precision):
    return complex_to_json(z, precision)


def _potential(cfg):
    return PotentialSpec(cfg.n, cfg.potential)


def _state_json(s):
    return [s.q_prev, s.q_curr]


# ---------------------------------------------------------------------------
# classical


def cmd_classical(cfg, out, precision):
    V = _potential(cfg)
    checks = []
    try:
        census = cycle_census(V)
    except NoUniqueStep as e:
        print(f"error: the classical step is undefined for this potential: {e}", file=sys.stderr)
        print(
            "hint: for even n, V'(q) must be even at every q so that 2 q'' = -V'(q) fixes q(t+1)",
            file=sys.stderr,
        )
        return EXIT_ERROR

    rows = [[o.representative.q_prev, o.representative.q_curr, o.period] for o in census.orbits]
    out.csv("census.csv", ["rep_q_prev", "rep_q_curr", "period"], rows)
    out.json("census.json", {
        "n": cfg.n,
        "potential": list(V.coeffs),
        "bijective": census.bijective,
        "notes": census.notes,
        "orbits": [
            {
                "representative": _state_json(o.representative),
                "period": o.period,
                "tail": o.tail,
                "members": [_state_json(s) for s in o.members],
            }
            for o in census.orbits
        ],
    })
    covered = census.total_members == cfg.n * cfg.n
    checks.append(("census covers all n^2 phase states", covered))
    if census.bijective:
        checks.append(("sum of periods equals n^2", sum(o.period for o in census.orbits) == cfg.n**2))
    checks.append(("every period verified by re-iteration",
                   all(verify_period(o.representative, o.period, V) for o in census.orbits)))

    q0, q1 = cfg.initial_state
    steps = max(cfg.steps, 0)
    traj = iterate(q0, q1, V, steps)
    qs = traj.states
    records = []
    eom_ok = energy_ok = True
    for t in range(1, len(qs) - 1):
        qp, qc, qn = qs[t - 1], qs[t], qs[t + 1]
        res = eom_residual(qn, qc, qp, V)
        dE = (energy(qn, qc, V) - energy(qc, qp, V)) % cfg.n
        rhs = energy_difference_rhs(qn, qc, qp, V)
        p, H = hamilton_quantities(qn, qc, V)
        eom_ok &= res == 0
        energy_ok &= dE == rhs
        records.append({
            "t": t, "q": qc, "eom_residual": res, "energy": energy(qc, qp, V),
            "energy_difference": dE, "energy_difference_rhs": rhs, "p": p, "H": H,
        })
    out.json("trajectory.json", {
        "n": cfg.n, "potential": list(V.coeffs), "initial_state": [q0 % cfg.n, q1 % cfg.n],
        "steps": steps, "q": qs,
    })
    checks.append(("equation-of-motion residual vanishes along the trajectory", eom_ok))
    checks.append(("energy-difference identity holds along the trajectory", energy_ok))
    out.json("diagnostics.json", {
        "checks": [{"name": name, "passed": ok} for name, ok in checks],
        "steps": records,
    })
    return _report_checks(checks)


def _report_checks(checks):
    for name, ok in checks:
        print(f"{'PASS' if ok else 'FAIL'}  {name}")
    return EXIT_OK if all(ok for _, ok in checks) else EXIT_FAIL


# ---------------------------------------------------------------------------
# spectrum


def cmd_spectrum(cfg, out, precision, fmt="json"):
    V = _potential(cfg)
    rs = make_rootset(cfg.m)
    spectra = []
    for idx, g in enumerate(rs.roots):
        H = hamiltonian(g, V, cfg.lift)
        if fmt == "csv":
            with mpmath.workdps(precision + 10):
                rows = [
                    [q, qp] + _cx(embed_complex(H.entries[q - 1][qp - 1], precision), precision)
                    for q in range(1, cfg.n + 1) for qp in range(1, cfg.n + 1)
                ]
            out.csv(f"hamiltonian_{idx}.csv", ["q", "q_prime", "re", "im"], rows)
        else:
            out.json(f"hamiltonian_{idx}.json", H.to_json())
        S = eigen_solve(H, precision, g=g)
        spectra.append(S)
        out.json(f"spectrum_{idx}.json", S.to_json())
        vals = ", ".join(fmt_complex(v) for v in S.eigenvalues())
        print(f"g = {g}: charpoly {S.charpoly.format('E')}; eigenvalues {vals}")
    tot = total_energies(spectra)
    out.json("total_energies.json", {
        "n": cfg.n, "m": cfg.m, "lift_convention": cfg.lift, "precision": precision,
        "count": len(tot), "values": [_cx(v, precision) for v in tot],
    })
    print(f"{len(tot)} distinct total energies")
    return EXIT_OK


# ---------------------------------------------------------------------------
# evolve


def cmd_evolve(cfg, out, precision, mode=None):
    mode = mode or cfg.mode
    V = _potential(cfg)
    rs = make_rootset(cfg.m)
    init = WaveFunction(cfg.initial_wavefunction) if cfg.initial_wavefunction else delta(cfg.n)
    fam = make_family(rs, init)
    sigmas = galois_group(rs.conductor)

    direction = 1 if cfg.steps >= 0 else -1
    families = [fam]
    for _ in range(abs(cfg.steps)):
        fam = evolve_family(fam, V, direction, mode, cfg.lift)
        families.append(fam)

    snapshots, invariants, trace, periodicity = [], [], [], []
    n0 = normalization_functional(families[0])
    rational_ok = equivariant = conserved = True
    with mpmath.workdps(precision + 10):
        n0c = embed_complex(n0, precision)
        for f in families:
            snapshots.append({
                "t": f.time,
                "components": [
                    {"root": g.to_json(), "amplitudes": c.to_json()} for g, c in zip(rs.roots, f.components)
                ],
            })
            for inv in symmetric_invariants(f):
                flags = [is_rational(v) is not None for v in inv.values]
                rational_ok &= all(flags) or not f.rational_initial
                invariants.append({
                    "t": f.time, "k": inv.k,
                    "values": [v.to_json() for v in inv.values],
                    "rational": flags,
                })
            nf = normalization_functional(f)
            nfc = embed_complex(nf, precision)
            if mode == "potential_only":
                conserved &= nf == n0
            trace.append({
                "t": f.time, "value": nf.to_json(), "complex": _cx(nfc, precision),
                "rational": is_rational(nf) is not None,
                "drift": mpmath.nstr(abs(nfc - n0c), 15),
            })
            for g, c in zip(rs.roots, f.components):
                rep = check_m_periodicity(c, cfg.m)
                periodicity.append({
                    "t": f.time, "root": str(g), "sign": rep.sign,
                    "max_deviation": rep.max_deviation, "holds": rep.holds,
                })
            equivariant &= all(equivariance_defects([f], s) == 0 for s in sigmas)

    out.json("snapshots.json", {
        "n": cfg.n, "m": cfg.m, "mode": mode, "lift_convention": cfg.lift,
        "roots": [g.to_json() for g in rs.roots], "snapshots": snapshots,
    })
    out.json("invariants.json", {
        "mode": mode,
        "symmetric_invariants": invariants,
        "normalization": trace,
        "periodicity": periodicity,
    })
    out.csv("normalization.csv", ["t", "re", "im", "rational", "drift"],
            [[r["t"], *r["complex"], r["rational"], r["drift"]] for r in trace])

    checks = [("Galois equivariance at every step", equivariant)]
    if families[0].rational_initial:
        checks.append(("symmetric invariants S_k are rational", rational_ok))
    if mode == "potential_only":
        checks.append(("normalization functional conserved", conserved))
    else:
        print(f"diagnostic: normalization drift at final step {trace[-1]['drift']}")
    held = sum(1 for p in periodicity if p["holds"])
    print(f"diagnostic: m-periodicity holds in {held} of {len(periodicity)} snapshots")
    return _report_checks(checks)


# ---------------------------------------------------------------------------
# worked examples


def cmd_reproduce_examples(out, precision):
    rows = run_all(precision)
    report = markdown_report(rows, precision)
    out.text("examples_report.md", report)
    failed = [r for r in rows if not r.passed]
    for r in failed:
        print(f"FAIL example {r.example}: {r.quantity}")
    print(f"{len(rows) - len(failed)} passed, {len(failed)} failed")
    return EXIT_FAIL if failed else EXIT_OK


# ---------------------------------------------------------------------------
# number theory


def _coeffs_text(a):
    return " ".join(format_rational(c) for c in a.coeffs)


def numtheory_gauss(max_n, precision):
    header = ["k", "n", "exact_coeffs", "re", "im", "closed_re", "closed_im", "abs_error"]
    rows, ok = [], True
    tol = mpmath.mpf(10) ** (-(precision - 10))
    with mpmath.workdps(precision + 10):
        moduli = [2] + [p for p in range(3, max_n) if nt.is_prime(p)]
        for n in moduli:
            for k in range(1, n):
                if n == 2 and k % 2 == 0:
                    continue
                exact = nt.gauss_sum_exact(k, n)
                val = embed_complex(exact, precision)
                closed = nt.gauss_sum_closed_form(k, n, precision)
                err = abs(val - closed)
                ok &= err <= tol and (n != 2 or not exact)
                rows.append([k, n, _coeffs_text(exact), *_cx(val, precision), *_cx(closed, precision),
                             mpmath.nstr(err, 5)])
    return header, rows, ok


def numtheory_legendre(p):
    squares = {x * x % p for x in range(1, p)}
    rows = [[k, p, nt.legendre(k, p), int(k in squares)] for k in range(1, p)]
    ok = all((r[2] == 1) == bool(r[3]) for r in rows)
    return ["k", "p", "legendre", "is_square"], rows, ok


def numtheory_totient(max_n):
    rows = []
    for n in range(1, max_n + 1):
        brute = sum(1 for a in range(1, n + 1) if gcd(a, n) == 1)
        rows.append([n, nt.totient(n), brute])
    return ["n", "phi", "unit_count"], rows, all(r[1] == r[2] for r in rows)


def numtheory_theta(n, z, tau1, tau2, precision):
    with mpmath.workdps(precision + 10):
        val = nt.discrete_theta(n, z, tau1, tau2, precision)
        row = [n, *(_param_text(v) for v in (z, tau1, tau2)), *_cx(val, precision)]
    return ["n", "z", "tau1", "tau2", "re", "im"], [row], True


def _param_text(v):
    return str(v) if isinstance(v, Fraction) else mpmath.nstr(v, 15)


def cmd_numtheory(args, out, precision, fmt="csv"):
    if args.table == "gauss":
        header, rows, ok = numtheory_gauss(args.max_n, precision)
    elif args.table == "legendre":
        header, rows, ok = numtheory_legendre(args.p)
    elif args.table == "totient":
        header, rows, ok = numtheory_totient(args.max_n)
    else:
        header, rows, ok = numtheory_theta(args.n, args.z, args.tau1, args.tau2, precision)
    name = f"{args.table}.{fmt}"
    if fmt == "json":
        content = dumps([dict(zip(header, r)) for r in rows])
    else:
        content = csv_text(header, rows)
    if out is None:
        sys.stdout.write(content)
    else:
        out.text(name, content)
        print(f"{len(rows)} rows written to {out.path(name)}")
    if not ok:
        print("FAIL  table check", file=sys.stderr)
    return EXIT_OK if ok else EXIT_FAIL


# ---------------------------------------------------------------------------


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="output directory (default: results)")
    common.add_argument("--precision", type=int, help="significant digits (>= 15)")
    common.add_argument("--format", choices=("json", "csv"), help="table format")

    with_config = argparse.ArgumentParser(add_help=False, parents=[common])
    with_config.add_argument("--config", required=True, help="JSON run configuration")

    p = argparse.ArgumentParser(prog="galq", description="Discrete quantum mechanics over Galois extensions.")
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("classical", parents=[with_config], help="orbit census and trajectory diagnostics")
    sub.add_parser("spectrum", parents=[with_config], help="Hamiltonian spectra for every root")
    ev = sub.add_parser("evolve", parents=[with_config], help="evolve a Galois family of wave functions")
    ev.add_argument("--mode", choices=("full", "potential-only", "potential_only"))
    sub.add_parser("reproduce-examples", parents=[common], help="check the four worked examples")

    nt_p = sub.add_parser("numtheory", help="number-theory tables")
    tables = nt_p.add_subparsers(dest="table", required=True)
    g = tables.add_parser("gauss", parents=[common], help="Gauss sums against closed forms")
    g.add_argument("--max-n", type=int, default=100, help="odd primes below this bound (default 100)")
    lg = tables.add_parser("legendre", parents=[common], help="Legendre symbols mod p")
    lg.add_argument("--p", type=int, required=True)
    tt = tables.add_parser("totient", parents=[common], help="Euler totient table")
    tt.add_argument("--max-n", type=int, default=20)
    th = tables.add_parser("theta", parents=[common], help="discrete theta value")
    th.add_argument("--n", type=int, required=True)
    th.add_argument("--z", default="0")
    th.add_argument("--tau1", default="0")
    th.add_argument("--tau2", default="0")
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return _dispatch(args)
    except GalqError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_ERROR


def _dispatch(args):
    if args.command == "numtheory":
        precision = resolve_precision(args.precision)
        out = Output(args.out) if args.out else None
        if args.table == "theta":
            with mpmath.workdps(precision + 10):
                args.z, args.tau1, args.tau2 = (_param(v) for v in (args.z, args.tau1, args.tau2))
        return cmd_numtheory(args, out, precision, args.format or "csv")

    out = Output(args.out or "results")
    if args.command == "reproduce-examples":
        return cmd_reproduce_examples(out, resolve_precision(args.precision))

    cfg = load_config(args.config)
    precision = resolve_precision(args.precision, cfg)
    if args.command == "classical":
        return cmd_classical(cfg, out, precision)
    if args.command == "spectrum":
        return cmd_spectrum(cfg, out, precision, args.format or "json")
    mode = normalize_mode(args.mode) if args.mode else None
    return cmd_evolve(cfg, out, precision, mode)


def _param(text):
    """Rational if possible, else an mpmath complex like '1+2j'."""
    try:
        return Fraction(text)
    except ValueError:
        try:
            return mpmath.mpc(mpmath.mpmathify(text.replace(" ", "")))
        except (ValueError, TypeError):
            raise GalqError(f"cannot parse parameter {text!r}") from None


if __name__ == "__main__":
    sys.exit(main())
