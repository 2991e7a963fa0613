"""Graded monomial basis of H_Phi and its coefficient-space machinery.

The basis elements are

    u_alpha(X) = {C_Phi/h^n * 2^|a| / (a! h^|a|)}^(1/2) (RX)^a
                 * exp(<X, Phi''_XX X>/h)

indexed by multi-indices alpha, ordered graded-lexicographically.  In the
coordinates W = RX the weighted products u_alpha conj(u_beta) e^{-2 Phi/h}
collapse to scaled monomials

    v_alpha(W) = (sqrt(2/h) W)^alpha / sqrt(alpha!)

against the weight e^{-2|W|^2/h}; all quadrature in this package samples
v_alpha through a per-axis recurrence, which keeps every sampled value O(1)
for any truncation degree.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .geometry import SpaceContext, _as_points, _qform
from .quadrature import QuadratureRule, complex_grid

__all__ = [
    "MultiIndexSet",
    "enumerate_multiindices",
    "u_alpha_eval",
    "monomial_table",
    "weighted_pair_sum",
    "gram_matrix",
    "HSpaceVector",
]

# Fixed node-axis chunk for assembly; never depends on the thread count, so
# partial sums (combined serially in chunk order) are bit-identical.
_CHUNK = 16384


@dataclass(frozen=True)
class MultiIndexSet:
    """All multi-indices alpha in N_0^n with |alpha| <= N, graded-lex order."""

    n: int
    N: int
    indices: tuple
    degrees: np.ndarray = field(init=False)

    def __post_init__(self):
        object.__setattr__(
            self, "degrees", np.array([sum(a) for a in self.indices])
        )

    def __len__(self):
        return len(self.indices)

    def count_through_degree(self, k: int) -> int:
        """Number of indices with |alpha| <= k (a leading block)."""
        if k < 0:
            return 0
        return int(np.searchsorted(self.degrees, k, side="right"))


def enumerate_multiindices(n: int, N: int) -> MultiIndexSet:
    if n < 1 or N < 0:
        raise ValueError("need n >= 1 and N >= 0")
    out = []
    for deg in range(N + 1):
        level = []

        def emit(prefix, rem, slots):
            if slots == 1:
                level.append(tuple(prefix) + (rem,))
                return
            for k in range(rem, -1, -1):
                emit(prefix + [k], rem - k, slots - 1)

        emit([], deg, n)
        level.sort(reverse=True)
        out.extend(level)
    return MultiIndexSet(n=n, N=N, indices=tuple(out))


def _log_norm(ctx: SpaceContext, alpha) -> float:
    """log of the u_alpha normalization constant, computed in log space."""
    deg = sum(alpha)
    val = math.log(ctx.CPhi) - ctx.n * math.log(ctx.h)
    val += deg * math.log(2.0 / ctx.h)
    val -= sum(math.lgamma(a + 1) for a in alpha)
    return 0.5 * val


def u_alpha_eval(ctx: SpaceContext, alpha, X):
    """Pointwise basis element u_alpha(X); X batched with coordinates last."""
    X = _as_points(X, ctx.n)
    W = X @ ctx.R.T
    mono = np.ones(X.shape[:-1], dtype=complex)
    for d, a in enumerate(alpha):
        if a:
            mono = mono * W[..., d] ** a
    gauss = np.exp(_qform(X, ctx.PhiXX, X) / ctx.h)
    return math.exp(_log_norm(ctx, alpha)) * mono * gauss


def monomial_table(W: np.ndarray, mset: MultiIndexSet, h: float) -> np.ndarray:
    """Scaled monomials v_alpha(W) for all alpha, shape (len(mset), npts).

    W has shape (n, npts).  Built by the stable per-axis recurrence
    v_0 = 1, v_k = v_{k-1} * (sqrt(2/h) W) / sqrt(k).
    """
    n, npts = W.shape
    per_axis = []
    zz = np.sqrt(2.0 / h) * W
    for d in range(n):
        V = np.empty((mset.N + 1, npts), dtype=complex)
        V[0] = 1.0
        for k in range(1, mset.N + 1):
            V[k] = V[k - 1] * zz[d] / np.sqrt(k)
        per_axis.append(V)
    out = np.empty((len(mset), npts), dtype=complex)
    for j, alpha in enumerate(mset.indices):
        acc = per_axis[0][alpha[0]]
        for d in range(1, n):
            acc = acc * per_axis[d][alpha[d]]
        out[j] = acc
    return out


def weighted_pair_sum(
    mset: MultiIndexSet,
    h: float,
    W_bra: np.ndarray,
    W_ket: np.ndarray,
    wt: np.ndarray,
    threads: int = 1,
) -> np.ndarray:
    """OUT[b, a] = sum_k wt[k] conj(v_b(W_bra[:,k])) v_a(W_ket[:,k]).

    The workhorse behind Gram/Toeplitz/Weyl assembly.  The node axis is
    processed in fixed chunks; `threads` only parallelizes independent
    chunks and partial results are combined serially in chunk order, so the
    output is bit-identical for any thread count.
    """
    npts = wt.shape[0]
    chunks = range(0, npts, _CHUNK)

    def one(start):
        sl = slice(start, min(start + _CHUNK, npts))
        Vb = monomial_table(W_bra[:, sl], mset, h)
        if W_ket is W_bra:
            Vk = Vb
        else:
            Vk = monomial_table(W_ket[:, sl], mset, h)
        return (Vb.conj() * wt[sl]) @ Vk.T

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(one, chunks))
    else:
        parts = [one(s) for s in chunks]
    out = parts[0]
    for p in parts[1:]:
        out = out + p
    return out


def gram_matrix(
    ctx: SpaceContext,
    trunc: MultiIndexSet,
    rule: QuadratureRule,
    threads: int = 1,
) -> np.ndarray:
    """G[a, b] = <u_a, u_b> over H_Phi; identity for admissible phases."""
    W, wt = complex_grid(rule, ctx.n, np.sqrt(ctx.h / 2))
    pref = (2 / (np.pi * ctx.h)) ** ctx.n
    out = weighted_pair_sum(trunc, ctx.h, W, W, wt, threads=threads)
    # out[b, a] carries the conjugate on the first slot; <u_a, u_b>
    # conjugates the second, so transpose without conjugation.
    return pref * out.T


@dataclass
class HSpaceVector:
    """Element of the truncated space in u_alpha coordinates."""

    ctx: SpaceContext
    trunc: MultiIndexSet
    coeffs: np.ndarray

    def __post_init__(self):
        self.coeffs = np.asarray(self.coeffs, dtype=complex)
        if self.coeffs.shape != (len(self.trunc),):
            raise ValueError("coefficient vector does not match truncation")

    def norm(self) -> float:
        """H_Phi norm; the basis is orthonormal so this is the l2 norm."""
        return float(np.linalg.norm(self.coeffs))

    def eval(self, X):
        """Pointwise value sum_a c_a u_a(X); moderate |X| only."""
        X = _as_points(X, self.ctx.n)
        out = np.zeros(X.shape[:-1], dtype=complex)
        for c, alpha in zip(self.coeffs, self.trunc.indices):
            if c != 0:
                out = out + c * u_alpha_eval(self.ctx, alpha, X)
        return out
