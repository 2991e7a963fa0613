"""Phase data and derived geometry of generalized Segal-Bargmann spaces.

A space is specified by a quadratic phase

    phi(X, y) = <X, A X>/2 + <X, B y> + <y, C y>/2

on C^n x C^n with bilinear pairing <u, v> = sum_j u_j v_j (no conjugation
anywhere in the pairing).  Admissibility requires A and C symmetric, det B
nonzero and C_I = (C - conj(C))/2i positive definite.  From these the weight
Phi, its polarization Psi, the reduction matrix R and the normalization
constants of the transform are derived.  Everything downstream works in the
coordinates W = R X, where the space's Gaussian weight becomes exp(-2|W|^2/h).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import (
    IllConditionedPhase,
    NonPositiveCI,
    NonSymmetricPhase,
    PhaseValidationError,
    SingularB,
)

__all__ = [
    "PhaseMatrices",
    "SpaceContext",
    "build_context",
    "phi_weight",
    "psi",
    "phase_phi",
    "kappa_T",
    "kappa_affine",
    "theta_on_lambda",
    "freq_image",
    "fock_phase",
    "heat_phase",
    "random_phase",
]

_COND_LIMIT = 1e12


def _as_matrix(M, n: int) -> np.ndarray:
    M = np.asarray(M, dtype=complex)
    if M.shape != (n, n):
        raise ValueError(f"expected a {n}x{n} matrix, got shape {M.shape}")
    return M


def _as_points(X, n: int) -> np.ndarray:
    """Coerce X to an array of points with coordinate axis last.

    Scalars and bare 1-D arrays of length n are accepted for convenience;
    the returned array always has shape (..., n).
    """
    X = np.asarray(X, dtype=complex)
    if n == 1 and (X.ndim == 0 or X.shape[-1] != 1):
        X = X[..., np.newaxis]
    if X.shape[-1] != n:
        raise ValueError(f"point array last axis must be {n}, got {X.shape}")
    return X


def _qform(X, M, Y):
    """Bilinear <X, M Y> = sum_ij X_i M_ij Y_j, batched over leading axes."""
    return np.einsum("...i,ij,...j->...", X, M, Y)


@dataclass(frozen=True)
class PhaseMatrices:
    """Admissible phase data (A, B, C) in dimension n.

    Invariants (checked by :func:`validate_phase` / :func:`build_context`):
    A and C symmetric as stored, det B bounded away from zero relative to the
    scale of B, and C_I = (C - conj(C))/2i positive definite.
    """

    n: int
    A: np.ndarray
    B: np.ndarray
    C: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "A", _as_matrix(self.A, self.n))
        object.__setattr__(self, "B", _as_matrix(self.B, self.n))
        object.__setattr__(self, "C", _as_matrix(self.C, self.n))


def validate_phase(phase: PhaseMatrices) -> np.ndarray:
    """Check admissibility; return C_I on success."""
    A, B, C, n = phase.A, phase.B, phase.C, phase.n
    if not np.array_equal(A, A.T):
        raise NonSymmetricPhase("A is not symmetric as stored")
    if not np.array_equal(C, C.T):
        raise NonSymmetricPhase("C is not symmetric as stored")
    scale = max(1.0, float(np.max(np.abs(B)))) ** n
    if abs(np.linalg.det(B)) <= 1e-12 * scale:
        raise SingularB("det B vanishes relative to the scale of B")
    CI = ((C - C.conj()) / 2j).real
    eigvals = np.linalg.eigvalsh(CI)
    if eigvals.min() <= 1e-10:
        raise NonPositiveCI(
            f"C_I must be positive definite; min eigenvalue {eigvals.min():.3e}"
        )
    return CI


@dataclass(frozen=True)
class SpaceContext:
    """Immutable bundle of one phase, one value of h and all derived fields."""

    phase: PhaseMatrices
    h: float
    CI: np.ndarray
    CR: np.ndarray
    CIinv: np.ndarray
    CIsqrt: np.ndarray
    CIinvsqrt: np.ndarray
    PhiXXbar: np.ndarray
    PhiXX: np.ndarray
    R: np.ndarray
    Rinv: np.ndarray
    RTinv: np.ndarray
    Binv: np.ndarray
    Cphi: float
    CPhi: float
    n: int = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "n", self.phase.n)


def _sym_sqrt(M: np.ndarray):
    """Principal square root and inverse square root of a real SPD matrix."""
    ew, ev = np.linalg.eigh(M)
    return (ev * np.sqrt(ew)) @ ev.T, (ev / np.sqrt(ew)) @ ev.T


def _check_cond(name: str, M: np.ndarray):
    c = np.linalg.cond(M)
    if not np.isfinite(c) or c > _COND_LIMIT:
        raise IllConditionedPhase(f"{name} has condition number {c:.3e}")


def build_context(phase: PhaseMatrices, h: float) -> SpaceContext:
    """Derive all geometric fields and verify the internal identities.

    Raises the phase validation errors for inadmissible data,
    IllConditionedPhase when an inverted matrix has condition number
    above 1e12, and ValueError for h outside (0, 1].
    """
    if not 0.0 < h <= 1.0:
        raise ValueError(f"h must lie in (0, 1], got {h}")
    CI = validate_phase(phase)
    A, B, C, n = phase.A, phase.B, phase.C, phase.n
    CR = ((C + C.conj()) / 2).real
    _check_cond("B", B)
    _check_cond("C_I", CI)
    CIsqrt, CIinvsqrt = _sym_sqrt(CI)
    CIinv = CIinvsqrt @ CIinvsqrt
    PhiXXbar = B @ CIinv @ B.conj().T / 4
    PhiXX = -B @ CIinv @ B.T / 4 - A / 2j
    R = CIinvsqrt @ B.T / 2
    _check_cond("R", R)
    Rinv = np.linalg.inv(R)
    RTinv = np.linalg.inv(R.T)
    Binv = np.linalg.inv(B)
    detB = np.linalg.det(B)
    detCI = np.linalg.det(CI)
    Cphi = float(2 ** (-n / 2) * np.pi ** (-3 * n / 4)
                 * abs(detB) * detCI ** (-0.25))
    CPhi = float((2 / np.pi) ** n * np.linalg.det(PhiXXbar).real)
    ctx = SpaceContext(
        phase=phase, h=float(h), CI=CI, CR=CR, CIinv=CIinv, CIsqrt=CIsqrt,
        CIinvsqrt=CIinvsqrt, PhiXXbar=PhiXXbar, PhiXX=PhiXX, R=R, Rinv=Rinv,
        RTinv=RTinv, Binv=Binv, Cphi=Cphi, CPhi=CPhi,
    )
    _verify_context(ctx)
    return ctx


def _verify_context(ctx: SpaceContext):
    """Internal consistency checks; all identities are exact in exact
    arithmetic, tolerances are floating-point slack."""
    scale = max(1.0, float(np.max(np.abs(ctx.PhiXXbar))))
    dev = np.max(np.abs(ctx.R.conj().T @ ctx.R - ctx.PhiXXbar.conj()))
    if dev > 1e-12 * scale:
        raise PhaseValidationError(
            f"derived R fails R*R = Phi''_XbarX (deviation {dev:.3e})"
        )
    alt = float((2 * np.pi) ** (-ctx.n) * abs(np.linalg.det(ctx.phase.B)) ** 2
                / np.linalg.det(ctx.CI))
    if abs(alt - ctx.CPhi) > 1e-12 * max(1.0, ctx.CPhi):
        raise PhaseValidationError(
            f"the two forms of C_Phi disagree ({ctx.CPhi} vs {alt})"
        )
    rng = np.random.default_rng(0)
    X = rng.normal(size=(8, ctx.n)) + 1j * rng.normal(size=(8, ctx.n))
    lhs = phi_weight(ctx, X)
    rhs = (np.sum(np.abs(X @ ctx.R.T) ** 2, axis=-1)
           + np.real(_qform(X, ctx.PhiXX, X)))
    if np.max(np.abs(lhs - rhs)) > 1e-12 * max(1.0, float(np.max(np.abs(lhs)))):
        raise PhaseValidationError("Phi(X) = |RX|^2 + Re<X, Phi''_XX X> fails")


def phi_weight(ctx: SpaceContext, X) -> np.ndarray:
    """The weight Phi(X) = <X, Phi''_XXbar conj(X)> + Re <X, Phi''_XX X>.

    X may be a single point (shape (n,), or a scalar when n = 1) or a batch
    with coordinates along the last axis; the result drops that axis.
    """
    X = _as_points(X, ctx.n)
    return (_qform(X, ctx.PhiXXbar, X.conj()).real
            + np.real(_qform(X, ctx.PhiXX, X)))


def psi(ctx: SpaceContext, X, Y) -> np.ndarray:
    """Polarization Psi(X, Y); Psi(X, conj(X)) = Phi(X).

    Holomorphic in both arguments:
    Psi(X,Y) = <X, Phi''_XXbar Y> + <X, Phi''_XX X>/2 + <Y, conj(Phi''_XX) Y>/2.
    """
    X = _as_points(X, ctx.n)
    Y = _as_points(Y, ctx.n)
    return (_qform(X, ctx.PhiXXbar, Y)
            + 0.5 * _qform(X, ctx.PhiXX, X)
            + 0.5 * _qform(Y, ctx.PhiXX.conj(), Y))


def phase_phi(ctx: SpaceContext, X, y) -> np.ndarray:
    """The defining phase phi(X, y) = <X,AX>/2 + <X,By> + <y,Cy>/2."""
    X = _as_points(X, ctx.n)
    y = _as_points(y, ctx.n)
    ph = ctx.phase
    return (0.5 * _qform(X, ph.A, X) + _qform(X, ph.B, y)
            + 0.5 * _qform(y, ph.C, y))


def kappa_T(ctx: SpaceContext, x, xi):
    """Complex-linear canonical transform (x, xi) -> (X, Theta).

    X = -B^-T (C x + xi), Theta = B x + A X.  For real (x, xi) the image
    point (X, Theta) lies on the graph manifold of the weight: Theta equals
    theta_on_lambda(ctx, X).
    """
    x = _as_points(x, ctx.n)
    xi = _as_points(xi, ctx.n)
    P, Q = kappa_affine(ctx)
    X = x @ P.T + xi @ Q.T
    Theta = x @ ctx.phase.B.T + X @ ctx.phase.A.T
    return X, Theta


def kappa_affine(ctx: SpaceContext):
    """Matrices (P, Q) with X = P x + Q xi under kappa_T."""
    BTinv = np.linalg.inv(ctx.phase.B.T)
    return -BTinv @ ctx.phase.C, -BTinv


def theta_on_lambda(ctx: SpaceContext, X) -> np.ndarray:
    """Section Theta(X) = (2/i)(Phi''_XXbar conj(X) + Phi''_XX X)."""
    X = _as_points(X, ctx.n)
    return (2 / 1j) * (X.conj() @ ctx.PhiXXbar.T + X @ ctx.PhiXX.T)


def freq_image(ctx: SpaceContext, lam) -> np.ndarray:
    """Reduced frequency R^-T lam entering all heat-damping factors."""
    lam = _as_points(lam, ctx.n)
    return lam @ ctx.RTinv.T


def fock_phase(n: int, beta: float = 1.0) -> PhaseMatrices:
    """Fock-model phase (A, B, C) = (i beta, -2i beta, 2i beta) x identity."""
    eye = np.eye(n)
    return PhaseMatrices(n, 1j * beta * eye, -2j * beta * eye, 2j * beta * eye)


def heat_phase(n: int) -> PhaseMatrices:
    """Heat-kernel-transform phase (A, B, C) = (i, -i, i) x identity."""
    eye = np.eye(n)
    return PhaseMatrices(n, 1j * eye, -1j * eye, 1j * eye)


def random_phase(n: int, seed: int) -> PhaseMatrices:
    """Seeded random admissible phase with moderate conditioning.

    Rejection-samples until det B is bounded away from zero, cond(B) is
    small and the eigenvalues of the derived Phi''_XXbar sit in [0.2, 3.0],
    which keeps default quadrature orders adequate.
    """
    rng = np.random.default_rng(seed)
    while True:
        S = rng.normal(size=(n, n))
        T = rng.normal(size=(n, n))
        A = 0.5 * ((S + S.T) / 2 + 1j * (T + T.T) / 2)
        B = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
        Sc = rng.normal(size=(n, n))
        L = rng.normal(size=(n, n))
        C = 0.5 * (Sc + Sc.T) / 2 + 1j * (L @ L.T + 0.5 * np.eye(n))
        phase = PhaseMatrices(n, A, B, C)
        try:
            CI = validate_phase(phase)
        except (NonPositiveCI, SingularB):
            continue
        if abs(np.linalg.det(B)) < 0.3 or np.linalg.cond(B) > 8:
            continue
        _, CIinvsqrt = _sym_sqrt(CI)
        PhiXXbar = B @ (CIinvsqrt @ CIinvsqrt) @ B.conj().T / 4
        ew = np.linalg.eigvalsh(PhiXXbar)
        if ew.min() < 0.2 or ew.max() > 3.0:
            continue
        return phase
