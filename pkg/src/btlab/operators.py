"""Galerkin compressions of Toeplitz operators and Weyl unitaries.

All matrices live over the graded monomial basis, so a sub-truncation is
always the leading principal block.  Everything is assembled in the reduced
frame W = RX on a sigma = sqrt(h/2) Gauss-Hermite grid, where the weight
e^{-2|W|^2/h} is exactly the quadrature Gaussian:

    toeplitz   M[beta, alpha] = (2/pi h)^n int b(R^-1 W) v_a(W) conj(v_b(W))
    weyl       M[beta, alpha] = (2/pi h)^n e^{-|c|^2/h} int e^{(2/h)<W, cbar>}
                                v_a(W - c) conj(v_b(W)),   c = R lambda,

both against e^{-2|W|^2/h} L(dW).

Identity checks (conjugation, deformation residuals) are read off an inner
sub-truncation: a plane-wave Toeplitz matrix couples only a band of degrees,
so products of compressions agree with compressions of products away from
the truncation boundary, and the outer shells carry pure edge error.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import factorial
from typing import Sequence

import numpy as np

from .basis import MultiIndexSet, enumerate_multiindices, weighted_pair_sum
from .errors import InvalidConfig, UnsupportedSymbol
from .geometry import PhaseMatrices, SpaceContext, build_context
from .heat import heat_flow
from .quadrature import QuadratureRule, complex_grid
from .symbols import (
    PlaneWaveSum,
    eval_symbol,
    multiply,
    poisson,
    q_form,
    translate,
)

__all__ = [
    "OperatorMatrix",
    "NormTable",
    "BoundReport",
    "SweepResult",
    "toeplitz_matrix",
    "weyl_unitary_matrix",
    "operator_norm",
    "inner_block",
    "norm_converged",
    "weyl_conjugation_check",
    "bound_report",
    "diagonal_sum_check",
    "deformation_residuals",
    "deformation_sweep",
]


@dataclass(frozen=True)
class OperatorMatrix:
    """Compression of an operator onto span{u_alpha : |alpha| <= N}."""

    ctx: SpaceContext
    trunc: MultiIndexSet
    entries: np.ndarray
    provenance: dict = field(default_factory=dict)

    def block(self, keep_degree: int) -> np.ndarray:
        return inner_block(self.entries, self.trunc, keep_degree)


def inner_block(entries: np.ndarray, trunc: MultiIndexSet,
                keep_degree: int) -> np.ndarray:
    """Leading principal block of all indices with degree <= keep_degree."""
    m = trunc.count_through_degree(keep_degree)
    return entries[:m, :m]


def _require_symbol_class(b) -> None:
    if isinstance(b, PlaneWaveSum):
        return
    if not getattr(b, "declared_in_T", False):
        raise UnsupportedSymbol(
            "callable symbol not declared to lie in the Toeplitz class"
        )


def toeplitz_matrix(ctx: SpaceContext, b, trunc: MultiIndexSet,
                    rule: QuadratureRule, threads: int = 1) -> OperatorMatrix:
    """Matrix of the multiplication-then-project operator for symbol b."""
    _require_symbol_class(b)
    sigma = np.sqrt(ctx.h / 2.0)
    W, wt = complex_grid(rule, ctx.n, sigma)
    bv = eval_symbol(b, (ctx.Rinv @ W).T)
    out = weighted_pair_sum(trunc, ctx.h, W, W, wt * bv, threads=threads)
    entries = out * (2.0 / (np.pi * ctx.h)) ** ctx.n
    return OperatorMatrix(
        ctx=ctx, trunc=trunc, entries=entries,
        provenance={"kind": "toeplitz", "order": rule.order,
                    "symbol": _describe(b)},
    )


def weyl_unitary_matrix(ctx: SpaceContext, lam, trunc: MultiIndexSet,
                        rule: QuadratureRule,
                        threads: int = 1) -> OperatorMatrix:
    """Matrix of the phase-space translation unitary for displacement lam."""
    lam = np.asarray(lam, dtype=complex).reshape(ctx.n)
    c = ctx.R @ lam
    sigma = np.sqrt(ctx.h / 2.0)
    W, wt = complex_grid(rule, ctx.n, sigma)
    osc = np.exp((2.0 / ctx.h) * (W.T @ np.conj(c)))
    out = weighted_pair_sum(
        trunc, ctx.h, W, W - c[:, np.newaxis], wt * osc, threads=threads
    )
    pref = (2.0 / (np.pi * ctx.h)) ** ctx.n * np.exp(
        -np.sum(np.abs(c) ** 2) / ctx.h
    )
    return OperatorMatrix(
        ctx=ctx, trunc=trunc, entries=pref * out,
        provenance={"kind": "weyl", "order": rule.order,
                    "lambda": lam.tolist()},
    )


def _describe(b) -> str:
    if isinstance(b, PlaneWaveSum):
        return f"plane-wave sum, {len(b.terms)} terms"
    return "callable"


def operator_norm(M) -> float:
    """Largest singular value of the compression."""
    entries = M.entries if isinstance(M, OperatorMatrix) else np.asarray(M)
    if entries.size == 0:
        return 0.0
    return float(np.linalg.norm(entries, 2))


@dataclass(frozen=True)
class NormTable:
    m_norm: float
    rows: tuple  # of (N, norm)
    converged: bool


def norm_converged(ctx: SpaceContext, b, n_schedule: Sequence[int],
                   rule: QuadratureRule, threads: int = 1,
                   rel_tol: float = 1e-3) -> NormTable:
    """Compression norms along an increasing truncation schedule.

    Nesting means one assembly at max(N) suffices; smaller N are leading
    principal blocks of the same matrix.
    """
    ns = [int(N) for N in n_schedule]
    if ns != sorted(ns) or len(set(ns)) != len(ns):
        raise InvalidConfig("truncation schedule must be strictly increasing")
    top = enumerate_multiindices(ctx.n, ns[-1])
    M = toeplitz_matrix(ctx, b, top, rule, threads=threads)
    rows = []
    for N in ns:
        rows.append((N, operator_norm(inner_block(M.entries, top, N))))
    converged = False
    if len(rows) >= 2:
        prev, last = rows[-2][1], rows[-1][1]
        converged = abs(last - prev) <= rel_tol * max(abs(last), 1e-300)
    return NormTable(m_norm=rows[-1][1], rows=tuple(rows),
                     converged=converged)


def weyl_conjugation_check(ctx: SpaceContext, b, lam, trunc: MultiIndexSet,
                           rule: QuadratureRule, threads: int = 1,
                           drop: int = 4) -> float:
    """Max entry deviation of W* T_b W against the translated-symbol matrix,
    on the block of degrees <= N - drop."""
    Wm = weyl_unitary_matrix(ctx, lam, trunc, rule, threads=threads).entries
    Tb = toeplitz_matrix(ctx, b, trunc, rule, threads=threads).entries
    Ts = toeplitz_matrix(
        ctx, translate(b, lam), trunc, rule, threads=threads
    ).entries
    dev = Wm.conj().T @ Tb @ Wm - Ts
    keep = max(trunc.N - drop, 0)
    return float(np.max(np.abs(inner_block(dev, trunc, keep))))


@dataclass(frozen=True)
class BoundReport:
    rows: tuple  # of (t, lhs, rhs, margin, passed)
    norm_table: NormTable
    slack: float
    passed: bool


def bound_report(ctx: SpaceContext, b, t_grid: Sequence[float], X_grid,
                 n_schedule: Sequence[int], rule: QuadratureRule,
                 slack: float = 0.02, threads: int = 1) -> BoundReport:
    """Check sup |b_t| <= (1+slack) M / (2t-1)^n on a time grid in (1/2, 1].

    The compression norm M under-estimates the true operator norm, hence
    the slack on the right-hand side.
    """
    for t in t_grid:
        if not 0.5 < float(t) <= 1.0:
            raise InvalidConfig(
                f"bound check needs t in (1/2, 1], got {t}"
            )
    table = norm_converged(ctx, b, n_schedule, rule, threads=threads)
    rows = []
    ok = True
    for t in t_grid:
        t = float(t)
        bt = heat_flow(ctx, b, t)
        lhs = float(np.max(np.abs(eval_symbol(bt, X_grid))))
        rhs = table.m_norm * (1.0 + slack) / (2.0 * t - 1.0) ** ctx.n
        passed = lhs <= rhs
        ok = ok and passed
        rows.append((t, lhs, rhs, rhs - lhs, passed))
    return BoundReport(rows=tuple(rows), norm_table=table, slack=slack,
                       passed=ok)


def diagonal_sum_check(ctx: SpaceContext, b, k: int, trunc: MultiIndexSet,
                       rule: QuadratureRule, threads: int = 1):
    """Both sides of the degree-k diagonal-sum identity.

    lhs sums the Toeplitz diagonal over |alpha| = k; rhs is an independent
    radial-moment quadrature of b, pi^-n sum w (2|W|^2/h)^k / k! b(R^-1 W).
    """
    M = toeplitz_matrix(ctx, b, trunc, rule, threads=threads)
    deg = M.trunc.degrees
    lhs = complex(np.sum(np.diag(M.entries)[deg == k]))
    sigma = np.sqrt(ctx.h / 2.0)
    W, wt = complex_grid(rule, ctx.n, sigma)
    radial = np.sum(np.abs(W) ** 2, axis=0) * 2.0 / ctx.h
    bv = eval_symbol(b, (ctx.Rinv @ W).T)
    rhs = (2.0 / (np.pi * ctx.h)) ** ctx.n * np.sum(
        wt * radial ** k * bv
    ) / factorial(k)
    return lhs, complex(rhs)


def deformation_residuals(ctx: SpaceContext, a, b, trunc: MultiIndexSet,
                          rule: QuadratureRule, threads: int = 1,
                          drop: int = 4):
    """Spectral norms of the two second-order deformation defects,
    read on the block of degrees <= N - drop."""
    Ta = toeplitz_matrix(ctx, a, trunc, rule, threads=threads).entries
    Tb = toeplitz_matrix(ctx, b, trunc, rule, threads=threads).entries
    Tab = toeplitz_matrix(ctx, multiply(a, b), trunc, rule,
                          threads=threads).entries
    Tq = toeplitz_matrix(ctx, q_form(ctx, a, b), trunc, rule,
                         threads=threads).entries
    Tpb = toeplitz_matrix(ctx, poisson(ctx, a, b), trunc, rule,
                          threads=threads).entries
    keep = max(trunc.N - drop, 0)
    d1 = Ta @ Tb - Tab + (ctx.h / 2.0) * Tq
    d2 = Ta @ Tb - Tb @ Ta - (0.5j * ctx.h) * Tpb
    r1 = operator_norm(inner_block(d1, trunc, keep))
    r2 = operator_norm(inner_block(d2, trunc, keep))
    return r1, r2


@dataclass(frozen=True)
class SweepResult:
    rows: tuple  # of (h, r1, r2)
    slope1: float
    slope2: float


def _fit_slope(hs: np.ndarray, rs: np.ndarray) -> float:
    # residuals at quadrature floor carry no scaling information
    if np.max(rs) < 1e-10:
        return float("nan")
    return float(np.polyfit(np.log(hs), np.log(rs), 1)[0])


def deformation_sweep(phase: PhaseMatrices, a, b, h_list: Sequence[float],
                      N: int, rule: QuadratureRule, threads: int = 1,
                      drop: int = 4) -> SweepResult:
    """Deformation residuals across h, with log-log slope fits.

    Contexts are rebuilt per h so every normalization constant tracks the
    semiclassical parameter.
    """
    hs = [float(h) for h in h_list]
    if len(hs) < 4 or any(x <= y for x, y in zip(hs, hs[1:])):
        raise InvalidConfig(
            "h sweep needs a strictly decreasing list of length >= 4"
        )
    rows = []
    for h in hs:
        ctx = build_context(phase, h)
        trunc = enumerate_multiindices(ctx.n, N)
        r1, r2 = deformation_residuals(ctx, a, b, trunc, rule,
                                       threads=threads, drop=drop)
        rows.append((h, r1, r2))
    arr = np.asarray(rows, dtype=float)
    return SweepResult(
        rows=tuple(rows),
        slope1=_fit_slope(arr[:, 0], arr[:, 1]),
        slope2=_fit_slope(arr[:, 0], arr[:, 2]),
    )
