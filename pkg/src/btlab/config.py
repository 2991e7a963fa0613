"""Experiment configuration: JSON schema and parsers.

Complex numbers are always [re, im] pairs, matrices row-major lists of rows,
so a config is plain JSON with no custom syntax.  A phase block takes one of
three forms:

    {"preset": "fock", "beta": 1.0}      built-in diagonal model
    {"preset": "heat"}                   built-in degenerate-weight model
    {"n": 1, "seed": 7}                  seeded random admissible phase
    {"n": 1, "A": [[[0,1]]], "B": [[[0,-2]]], "C": [[[0,2]]]}

Every violation raises InvalidConfig; the CLI maps that to exit code 2.
"""

from __future__ import annotations

import json

import numpy as np

from .bargmann import GaussianTestFn
from .errors import InvalidConfig
from .geometry import PhaseMatrices, fock_phase, heat_phase, random_phase
from .symbols import PlaneWaveSum

__all__ = [
    "load_config",
    "complex_entry",
    "complex_matrix",
    "complex_vector",
    "phase_from_config",
    "symbol_from_config",
    "gaussian_from_config",
]


def load_config(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            cfg = json.load(fh)
    except OSError as exc:
        raise InvalidConfig(f"cannot read config: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InvalidConfig(f"config is not valid JSON: {exc}") from exc
    if not isinstance(cfg, dict):
        raise InvalidConfig("config root must be a JSON object")
    return cfg


def complex_entry(obj, name: str) -> complex:
    if (
        not isinstance(obj, (list, tuple))
        or len(obj) != 2
        or not all(isinstance(v, (int, float)) for v in obj)
    ):
        raise InvalidConfig(f"{name}: complex values are [re, im] pairs")
    return complex(obj[0], obj[1])


def complex_vector(obj, n: int, name: str) -> np.ndarray:
    if not isinstance(obj, (list, tuple)) or len(obj) != n:
        raise InvalidConfig(f"{name}: expected {n} [re, im] pairs")
    return np.array(
        [complex_entry(v, f"{name}[{k}]") for k, v in enumerate(obj)]
    )


def complex_matrix(obj, n: int, name: str) -> np.ndarray:
    if not isinstance(obj, (list, tuple)) or len(obj) != n:
        raise InvalidConfig(f"{name}: expected {n} rows")
    return np.stack(
        [complex_vector(row, n, f"{name} row {k}") for k, row in
         enumerate(obj)]
    )


def phase_from_config(block) -> PhaseMatrices:
    if not isinstance(block, dict):
        raise InvalidConfig("phase must be an object")
    preset = block.get("preset")
    n = block.get("n", 1)
    if not isinstance(n, int) or n < 1:
        raise InvalidConfig("phase needs a positive integer n")
    if preset == "fock":
        beta = block.get("beta", 1.0)
        if not isinstance(beta, (int, float)) or beta <= 0:
            raise InvalidConfig("fock preset needs beta > 0")
        return fock_phase(n, float(beta))
    if preset == "heat":
        return heat_phase(n)
    if preset is not None:
        raise InvalidConfig(f"unknown phase preset {preset!r}")
    if "seed" in block:
        return random_phase(n, int(block["seed"]))
    missing = [k for k in ("A", "B", "C") if k not in block]
    if missing:
        raise InvalidConfig(f"phase is missing matrices: {missing}")
    return PhaseMatrices(
        n=n,
        A=complex_matrix(block["A"], n, "phase.A"),
        B=complex_matrix(block["B"], n, "phase.B"),
        C=complex_matrix(block["C"], n, "phase.C"),
    )


def symbol_from_config(spec, n: int, name: str = "symbol") -> PlaneWaveSum:
    """Plane-wave sum from a list of flat terms
    [re_c, im_c, re_l1, im_l1, ..., re_ln, im_ln]."""
    if not isinstance(spec, (list, tuple)) or not spec:
        raise InvalidConfig(f"{name}: expected a nonempty list of terms")
    terms = []
    for k, row in enumerate(spec):
        if not isinstance(row, (list, tuple)) or len(row) != 2 + 2 * n:
            raise InvalidConfig(
                f"{name} term {k}: expected {2 + 2 * n} numbers "
                "[re_c, im_c, re/im per frequency coordinate]"
            )
        if not all(isinstance(v, (int, float)) for v in row):
            raise InvalidConfig(f"{name} term {k}: entries must be numbers")
        c = complex(row[0], row[1])
        lam = np.array(
            [complex(row[2 + 2 * d], row[3 + 2 * d]) for d in range(n)]
        )
        terms.append((c, lam))
    return PlaneWaveSum(n=n, terms=tuple(terms))


def gaussian_from_config(spec, n: int, name: str = "gaussian") -> GaussianTestFn:
    if not isinstance(spec, dict):
        raise InvalidConfig(f"{name}: expected an object")
    try:
        y0 = np.asarray(spec.get("y0", [0.0] * n), dtype=float)
        p0 = np.asarray(spec.get("p0", [0.0] * n), dtype=float)
    except (TypeError, ValueError) as exc:
        raise InvalidConfig(f"{name}: y0/p0 must be real vectors") from exc
    sigma = spec.get("sigma", 1.0)
    if not isinstance(sigma, (int, float)) or sigma <= 0:
        raise InvalidConfig(f"{name}: sigma must be positive")
    amp = complex(1.0)
    if "amp" in spec:
        amp = complex_entry(spec["amp"], f"{name}.amp")
    if y0.shape != (n,) or p0.shape != (n,):
        raise InvalidConfig(f"{name}: y0/p0 must have length {n}")
    return GaussianTestFn(y0=y0, sigma=float(sigma), p0=p0, amp=amp)
