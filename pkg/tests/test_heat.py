import numpy as np
import pytest

from conftest import rel_dev

from btlab.geometry import build_context, fock_phase, freq_image, random_phase
from btlab.heat import (
    box_grid,
    complex_box,
    heat_damping,
    heat_flow,
    heat_flow_quadrature,
    sw_diagnostic,
    sw_l1,
)
from btlab.symbols import (
    CallableSymbol,
    PlaneWaveSum,
    constant_symbol,
    cosine_symbol,
    eval_symbol,
    plane_wave_sum,
)


def test_damping_closed_form_fock(ex1):
    lam = np.array([0.6 + 0.8j])
    for t in (0.25, 0.5, 1.0):
        got = float(heat_damping(ex1, lam, t))
        ref = np.exp(-t * 1.0 * abs(lam[0]) ** 2 / 4.0)
        assert abs(got - ref) < 1e-14
    # complex frequencies damp, never amplify
    assert 0.0 < float(heat_damping(ex1, np.array([2.0 - 3.0j]), 1.0)) <= 1.0


def test_time_domain_guard(ex1):
    b = cosine_symbol(1.0)
    for bad in (-0.1, 1.2):
        with pytest.raises(ValueError):
            heat_flow(ex1, b, bad)
        with pytest.raises(ValueError):
            heat_flow_quadrature(ex1, b, bad)


def test_plane_wave_flow_damps_each_term(ex1):
    b = plane_wave_sum(
        [(0.7, np.array([1.0])), (0.2 - 0.4j, np.array([-0.3 + 0.5j]))], n=1
    )
    bt = heat_flow(ex1, b, 0.6)
    ref = {
        complex(l[0]): c * heat_damping(ex1, l, 0.6) for c, l in b.terms
    }
    for c, lam in bt.terms:
        assert abs(c - ref[complex(lam[0])]) < 1e-14


def test_semigroup_plane_waves():
    ctx = build_context(random_phase(1, 8), 0.9)
    b = plane_wave_sum(
        [(1.0, np.array([0.8])), (0.5j, np.array([0.2 - 0.6j]))], n=1
    )
    lhs = heat_flow(ctx, heat_flow(ctx, b, 0.3), 0.45)
    rhs = heat_flow(ctx, b, 0.75)
    rng = np.random.default_rng(9)
    X = rng.standard_normal((20, 1)) + 1j * rng.standard_normal((20, 1))
    assert rel_dev(eval_symbol(lhs, X), eval_symbol(rhs, X)) < 5e-14


def test_quadrature_matches_closed_form():
    b = plane_wave_sum(
        [(0.5, np.array([1.0])), (0.5, np.array([-1.0])),
         (0.3 - 0.1j, np.array([0.4 + 0.2j]))], n=1
    )
    rng = np.random.default_rng(10)
    X = rng.standard_normal((15, 1)) + 0.5j * rng.standard_normal((15, 1))
    for h in (1.0, 0.1):
        ctx = build_context(fock_phase(1, 1.0), h)
        for t in (0.25, 0.5, 1.0):
            closed = eval_symbol(heat_flow(ctx, b, t), X)
            quad = eval_symbol(heat_flow_quadrature(ctx, b, t, order=40), X)
            assert rel_dev(quad, closed) < 1e-8


def test_kernel_unit_mass():
    """The smoothing kernel must integrate to one: constants are fixed
    points of the flow."""
    for h in (1.0, 0.1):
        ctx = build_context(fock_phase(1, 1.0), h)
        bq = heat_flow_quadrature(ctx, constant_symbol(1.0), 0.7, order=40)
        X = np.array([[0.0 + 0.0j], [1.3 - 0.4j]])
        assert rel_dev(eval_symbol(bq, X), np.ones(2)) < 1e-10


def test_semigroup_quadrature_path(ex1):
    b = cosine_symbol(1.0)
    half = heat_flow_quadrature(ex1, b, 0.25, order=40)
    again = heat_flow_quadrature(ex1, half, 0.25, order=40)
    X = np.array([[0.3 + 0.2j], [-0.8 + 0.1j]])
    ref = eval_symbol(heat_flow(ex1, b, 0.5), X)
    assert rel_dev(eval_symbol(again, X), ref) < 1e-8


def test_flow_preserves_declared_flags(ex1):
    b = CallableSymbol(
        n=1,
        func=lambda X: np.cos(np.real(X[..., 0])),
        declared_bounded=True,
        declared_in_T=True,
        fd_step=1e-4,
    )
    bt = heat_flow(ex1, b, 0.5)
    assert bt.declared_bounded
    assert bt.declared_in_T


def test_box_grid_lexicographic():
    g = box_grid(-1.0, 1.0, 1.0, 2)
    assert g.shape == (9, 2)
    assert np.allclose(g[0], [-1.0, -1.0])
    assert np.allclose(g[1], [-1.0, 0.0])
    assert np.allclose(g[-1], [1.0, 1.0])
    cb = complex_box(-1.0, 1.0, 1.0, 1)
    assert cb.shape == (9, 1)
    assert np.allclose(cb[:, 0].real, g[:, 0])
    assert np.allclose(cb[:, 0].imag, g[:, 1])


def test_sw_diagnostic_gaussian_profile(ex1):
    """For the constant symbol both damping factors act, so the profile is
    exp(-|lam|^2/2) and its integral 2 pi."""
    b = constant_symbol(1.0)
    for step in (1.0, 0.5):
        lam = complex_box(-8.0, 8.0, step, 1)
        g = sw_diagnostic(ex1, b, lam)
        ref = np.exp(-np.abs(lam[:, 0]) ** 2 / 2.0)
        assert rel_dev(g, ref) < 1e-12
        est = sw_l1(g, step, 1)
        assert abs(est - 2.0 * np.pi) < 1e-6 * 2.0 * np.pi
