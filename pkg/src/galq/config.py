"""Run configuration: a JSON object with the keys below, all optional except n.

    n                     modulus of Z_n (>= 1)
    m                     extension order, f(X) = X^m -+ 1; must divide n (default 1)
    potential             coefficients [a0, a1, a2, ...] of V(q) (default [0, 0, 1], V = q^2)
    initial_wavefunction  n rationals, ints or "p/q" strings (default delta at q = 1)
    initial_state         [q_prev, q_curr] for the classical trajectory (default [0, 1])
    steps                 number of time steps (default 10; negative runs backward in evolve)
    precision             significant digits, >= 15 (default 30, or GALQ_PRECISION)
    mode                  "full" or "potential_only" (default "full")
    seed                  integer for randomized checks (default 0)
    lift                  "symmetric" or "integer" exponent lift (default "symmetric")
"""
from __future__ import annotations

import json
import os
import re
from dataclasses import dataclass
from fractions import Fraction

from .errors import ConfigError

DEFAULT_PRECISION = 30
KEYS = (
    "n", "m", "potential", "initial_wavefunction", "initial_state",
    "steps", "precision", "mode", "seed", "lift",
)


@dataclass(frozen=True)
class RunConfig:
    n: int
    m: int = 1
    potential: tuple = (0, 0, 1)
    initial_wavefunction: tuple = None
    initial_state: tuple = (0, 1)
    steps: int = 10
    precision: int = None
    mode: str = "full"
    seed: int = 0
    lift: str = "symmetric"


def _line_of(text, key):
    m = re.search(r'"' + re.escape(key) + r'"\s*:', text)
    return text.count("\n", 0, m.start()) + 1 if m else None


def _int(value, key, line, minimum=None):
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(f"{key} must be an integer, got {value!r}", line)
    if minimum is not None and value < minimum:
        raise ConfigError(f"{key} must be >= {minimum}, got {value}", line)
    return value


def _rational(value, key, line):
    if isinstance(value, bool):
        raise ConfigError(f"{key} entries must be rationals, got {value!r}", line)
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value)
        except (ValueError, ZeroDivisionError):
            pass
    raise ConfigError(f'{key} entries must be integers or "p/q" strings, got {value!r}', line)


def parse_config(text):
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as e:
        raise ConfigError(f"invalid JSON: {e.msg}", e.lineno) from None
    if not isinstance(raw, dict):
        raise ConfigError("config must be a JSON object", 1)
    line = {k: _line_of(text, k) for k in raw}
    for k in raw:
        if k not in KEYS:
            raise ConfigError(f"unknown key {k!r}; allowed keys are {', '.join(KEYS)}", line[k])
    if "n" not in raw:
        raise ConfigError("missing required key 'n'", 1)

    n = _int(raw["n"], "n", line["n"], 1)
    kw = {"n": n}
    if "m" in raw:
        m = _int(raw["m"], "m", line["m"], 1)
        if n % m:
            raise ConfigError(
                f"m = {m} does not divide n = {n}; the extension order m must be a divisor of n",
                line["m"],
            )
        kw["m"] = m
    if "potential" in raw:
        p = raw["potential"]
        if not isinstance(p, list) or not p:
            raise ConfigError("potential must be a non-empty list of integer coefficients", line["potential"])
        kw["potential"] = tuple(_int(a, "potential coefficient", line["potential"]) for a in p)
    if raw.get("initial_wavefunction") is not None:
        w = raw["initial_wavefunction"]
        if not isinstance(w, list):
            raise ConfigError("initial_wavefunction must be a list", line["initial_wavefunction"])
        if len(w) != n:
            raise ConfigError(
                f"initial_wavefunction has {len(w)} entries, expected n = {n}", line["initial_wavefunction"]
            )
        kw["initial_wavefunction"] = tuple(
            _rational(a, "initial_wavefunction", line["initial_wavefunction"]) for a in w
        )
    if "initial_state" in raw:
        s = raw["initial_state"]
        if not isinstance(s, list) or len(s) != 2:
            raise ConfigError("initial_state must be [q_prev, q_curr]", line["initial_state"])
        kw["initial_state"] = tuple(_int(a, "initial_state entry", line["initial_state"]) for a in s)
    if "steps" in raw:
        kw["steps"] = _int(raw["steps"], "steps", line["steps"])
    if "precision" in raw:
        kw["precision"] = _int(raw["precision"], "precision", line["precision"], 15)
    if "mode" in raw:
        kw["mode"] = normalize_mode(raw["mode"], line["mode"])
    if "seed" in raw:
        kw["seed"] = _int(raw["seed"], "seed", line["seed"])
    if "lift" in raw:
        if raw["lift"] not in ("symmetric", "integer"):
            raise ConfigError(f"lift must be 'symmetric' or 'integer', got {raw['lift']!r}", line["lift"])
        kw["lift"] = raw["lift"]
    return RunConfig(**kw)


def normalize_mode(mode, line=None):
    if mode == "full":
        return "full"
    if mode in ("potential_only", "potential-only"):
        return "potential_only"
    raise ConfigError(f"mode must be 'full' or 'potential_only', got {mode!r}", line)


def load_config(path):
    try:
        with open(path, encoding="utf-8") as f:
            text = f.read()
    except OSError as e:
        raise ConfigError(f"cannot read config {path}: {e.strerror}") from None
    return parse_config(text)


def resolve_precision(flag=None, config=None):
    """Command-line flag, then config file, then GALQ_PRECISION, then the default."""
    if flag is not None:
        value, source = flag, "--precision"
    elif config is not None and config.precision is not None:
        return config.precision
    elif os.environ.get("GALQ_PRECISION"):
        value, source = os.environ["GALQ_PRECISION"], "GALQ_PRECISION"
    else:
        return DEFAULT_PRECISION
    try:
        value = int(value)
    except ValueError:
        raise ConfigError(f"{source} must be an integer, got {value!r}") from None
    if value < 15:
        raise ConfigError(f"{source} must be >= 15, got {value}")
    return value
