"""Heat regularization of symbols and the summability diagnostic.

The generator is Delta = (1/2) <d_X, (Phi''_XbarX)^-1 d_Xbar>, so a plane
wave exp(i Re<X, lam>) is an eigenfunction and the flow at time t multiplies
its coefficient by exp(-t h |mu|^2 / 8) with mu = R^-T lam the frequency in
the reduced frame.  For black-box symbols the same flow is a Gaussian
average, evaluated by Gauss-Hermite quadrature:

    b_t(X) = pi^-n sum_k w_k b(X - R^-1 V_k),   V = sqrt(t h / 2)(s1 + i s2).

Times outside [0, 1] are rejected: the estimates downstream are stated on
that interval and nothing here extrapolates beyond it.
"""

from __future__ import annotations

import numpy as np

from .geometry import SpaceContext, _as_points, freq_image
from .quadrature import complex_grid, gauss_hermite_rule
from .symbols import (
    CallableSymbol,
    PlaneWaveSum,
    eval_symbol,
    modulate,
)

__all__ = [
    "heat_flow",
    "heat_flow_quadrature",
    "heat_damping",
    "sw_diagnostic",
    "sw_l1",
    "box_grid",
    "complex_box",
]


def _check_time(t: float) -> float:
    t = float(t)
    if not 0.0 <= t <= 1.0:
        raise ValueError(f"heat time must lie in [0, 1], got {t}")
    return t


def heat_damping(ctx: SpaceContext, lam, t: float) -> np.ndarray:
    """Per-frequency decay factor exp(-t h |R^-T lam|^2 / 8)."""
    mu = freq_image(ctx, lam)
    return np.exp(-t * ctx.h * np.sum(np.abs(mu) ** 2, axis=-1) / 8.0)


def heat_flow(ctx: SpaceContext, b, t: float, order: int | None = None):
    """Flow b -> b_t; exact on plane-wave sums, quadrature otherwise."""
    t = _check_time(t)
    if isinstance(b, PlaneWaveSum):
        terms = tuple(
            (c * complex(heat_damping(ctx, lam, t)), lam) for c, lam in b.terms
        )
        return PlaneWaveSum(n=b.n, terms=terms)
    return heat_flow_quadrature(ctx, b, t, order=order or 40)


def heat_flow_quadrature(ctx: SpaceContext, b, t: float, order: int = 40):
    """Gaussian-average form of the flow, usable on any symbol.

    On plane-wave sums it must agree with `heat_flow` to quadrature
    accuracy; that agreement is the correctness check for this path.
    """
    t = _check_time(t)
    if t == 0.0:
        return b
    rule = gauss_hermite_rule(order)
    sigma = np.sqrt(t * ctx.h / 2.0)
    V, wt = complex_grid(rule, ctx.n, sigma)
    shifts = (ctx.Rinv @ V).T  # (npts, n)
    # wt integrates against exp(-|V|^2/sigma^2) L(dV), total mass (pi s^2)^n
    pref = (np.pi * sigma ** 2) ** (-ctx.n)

    def val(X):
        X = _as_points(X, ctx.n)
        moved = X[..., np.newaxis, :] - shifts
        vals = eval_symbol(b, moved)
        return pref * (vals @ wt)

    return CallableSymbol(
        n=ctx.n,
        func=val,
        declared_bounded=getattr(b, "declared_bounded", True),
        declared_in_T=getattr(b, "declared_in_T", True),
        fd_step=getattr(b, "fd_step", None),
    )


def box_grid(lo: float, hi: float, step: float, dims: int) -> np.ndarray:
    """Lexicographic real grid over [lo, hi]^dims with spacing `step`."""
    axis = np.arange(lo, hi + step / 2, step)
    mesh = np.meshgrid(*([axis] * dims), indexing="ij")
    return np.stack([m.ravel() for m in mesh], axis=-1)


def complex_box(lo: float, hi: float, step: float, n: int = 1) -> np.ndarray:
    """Complex points of C^n from the real box [lo, hi]^(2n); coordinate d
    is column d + i column n+d."""
    pts = box_grid(lo, hi, step, 2 * n)
    return pts[:, :n] + 1j * pts[:, n:]


def sw_diagnostic(ctx: SpaceContext, b, lam_grid, X_grid=None) -> np.ndarray:
    """g(lam) = max_X |(b^lam)_1(X)| * exp(-h |R^-T lam|^2 / 8).

    The modulated symbol b^lam = e^{i Re<., lam>} b is heat-regularized at
    t = 1 and the same full-time decay factor multiplies the sup norm, so
    the frequency weight appears twice.  Summability of g over the
    frequency plane is the membership diagnostic for the symbol class
    behind the norm bounds.
    """
    lam_grid = _as_points(np.asarray(lam_grid, dtype=complex), ctx.n)
    if X_grid is None:
        X_grid = complex_box(-6.0, 6.0, 0.3, ctx.n)
    X_grid = _as_points(X_grid, ctx.n)
    out = np.empty(lam_grid.shape[:-1], dtype=float)
    flat = lam_grid.reshape(-1, ctx.n)
    res = np.empty(flat.shape[0], dtype=float)
    for k, lam in enumerate(flat):
        bt = heat_flow(ctx, modulate(b, lam), 1.0)
        sup = float(np.max(np.abs(eval_symbol(bt, X_grid))))
        res[k] = sup * float(heat_damping(ctx, lam, 1.0))
    out[...] = res.reshape(lam_grid.shape[:-1])
    return out


def sw_l1(g: np.ndarray, step: float, n: int = 1) -> float:
    """Riemann sum of g over the frequency grid it was sampled on."""
    return float(np.sum(g) * step ** (2 * n))
