import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ossolve.eigenfunctions import (
    PsiKind,
    airy_mode,
    airy_shift,
    airy_shift_printed,
    default_grid,
    hermite_lambda,
    hermite_mode,
    hermite_pair,
    make_mode,
    psi_linear,
    psi_quadratic,
    psi_wake,
    wake_mode,
)
from ossolve.errors import DomainError
from ossolve.meanflow import FlowConfig, Linear, Quadratic, Sech2
from ossolve.oracle import airy_zero
from ossolve.shortwave import Eigenpair, frequency_from_lambda, wake_eigenpair

CFG = FlowConfig(r=20.0, chi=2.0)
RESIDUAL_TOL = 1e-6


def airy_zero_pair(n, k, cfg=CFG, b=1.0, c=0.0):
    """Pair whose Airy mode vanishes exactly at y = 0."""
    scale = (1j * cfg.r ** 2 * cfg.chi * k * b) ** (1 / 3)
    lam = c - b * airy_zero(n) / scale
    return Eigenpair(n, k, frequency_from_lambda(k, lam, cfg.chi), lam)


def interior(mode):
    return default_grid(mode)[1:-1]


class TestAiryMode:
    def test_residual_and_boundaries(self):
        pair = airy_zero_pair(3, 0.8 + 0.1j)
        m = airy_mode(pair, 1.0, 0.0, CFG)
        assert m.kind is PsiKind.AIRY
        assert m.residual(interior(m)).max() <= RESIDUAL_TOL
        assert m.boundary_ratio() <= 1e-6
        assert abs(m(default_grid(m)[-1])) < 1e-12

    @given(st.floats(0.1, 3.0), st.floats(-0.5, 0.5), st.integers(1, 6), st.floats(0.5, 2.0), st.floats(0, 1))
    @settings(max_examples=25, deadline=None)
    def test_residual_property(self, kr, ki, n, b, c):
        pair = airy_zero_pair(n, complex(kr, ki), b=b, c=c)
        m = airy_mode(pair, b, c, CFG)
        assert m.residual(interior(m)).max() <= RESIDUAL_TOL
        assert m.boundary_ratio() <= 1e-6

    def test_shift_forms(self):
        pair = airy_zero_pair(2, 1.0)
        assert airy_shift(pair, 2.0, 0.5) == (pair.lambda_ - 0.5) / 2.0
        printed = airy_shift_printed(pair, 1.0, 0.0, CFG)
        assert abs(printed - pair.lambda_) > 1e-3

    def test_rejects(self):
        pair = airy_zero_pair(1, 1.0)
        with pytest.raises(DomainError):
            airy_mode(pair, 0.0, 0.0, CFG)
        with pytest.raises(DomainError):
            psi_linear(pair, 1.0, 0.0, CFG, -1.0)

    def test_scalar_and_vector(self):
        pair = airy_zero_pair(1, 1.0)
        assert isinstance(psi_linear(pair, 1.0, 0.0, CFG, 0.5), complex)
        assert psi_linear(pair, 1.0, 0.0, CFG, np.array([0.1, 0.2])).shape == (2,)


class TestHermiteMode:
    @pytest.mark.parametrize("m", [0, 1, 3])
    def test_exact_residual_and_wall_zero(self, m):
        pair = hermite_pair(m, 0.8 + 0.1j, 1.0, 0.0, 0.0, CFG)
        mode = hermite_mode(m, pair, 1.0, 0.0, CFG)
        assert mode.residual(interior(mode)).max() <= RESIDUAL_TOL
        assert mode(0.0) == 0
        assert abs(mode(default_grid(mode)[-1])) < 1e-12

    @given(st.floats(0.2, 3.0), st.floats(-0.3, 0.3), st.floats(0.5, 2.0), st.floats(-1, 1), st.floats(0, 1))
    @settings(max_examples=25, deadline=None)
    def test_residual_property(self, kr, ki, a, b, c):
        k = complex(kr, ki)
        pair = hermite_pair(1, k, a, b, c, CFG)
        mode = hermite_mode(1, pair, a, b, CFG, c)
        assert mode.residual(interior(mode)).max() <= RESIDUAL_TOL

    def test_lambda_formula(self):
        lam = hermite_lambda(2, 1.0, 1.0, 0.0, 0.0, CFG)
        s2 = (1j * CFG.r ** 2 * CFG.chi) ** 0.5
        assert abs(lam - 11 / s2) < 1e-14

    def test_printed_exponent_is_not_a_solution(self):
        pair = hermite_pair(1, 0.8, 1.0, 0.0, 0.0, CFG)
        mode = hermite_mode(1, pair, 1.0, 0.0, CFG, exponent="printed")
        assert mode.residual(interior(mode)).max() > 1e-3

    def test_normalizations(self):
        pair = hermite_pair(1, 0.8, 1.0, 0.0, 0.0, CFG)
        raw = psi_quadratic(1, pair, 1.0, 0.0, CFG, 0.1)
        std = psi_quadratic(1, pair, 1.0, 0.0, CFG, 0.1, normalization="standard")
        printed = psi_quadratic(1, pair, 1.0, 0.0, CFG, 0.1, normalization="printed")
        assert raw != std and raw != printed

    @pytest.mark.parametrize("kw", [dict(a=-1.0), dict(m=-1), dict(exponent="other")])
    def test_rejects(self, kw):
        args = dict(m=1, a=1.0, exponent="derived")
        args.update(kw)
        pair = hermite_pair(1, 0.8, 1.0, 0.0, 0.0, CFG)
        with pytest.raises(DomainError):
            hermite_mode(args["m"], pair, args["a"], 0.0, CFG, exponent=args["exponent"])


class TestWakeMode:
    @pytest.mark.parametrize("n", [0, 1, 2])
    def test_residual_and_decay(self, n):
        pair = wake_eigenpair(n, 1.0, 1.0, 1.0, CFG)
        mode = wake_mode(n, pair, 1.0, 1.0, CFG)
        g = default_grid(mode)
        assert mode.residual(g).max() <= RESIDUAL_TOL
        assert mode.boundary_ratio() <= 1e-6

    @given(st.floats(0.3, 3.0), st.floats(0.5, 2.0), st.floats(0.5, 2.0))
    @settings(max_examples=20, deadline=None)
    def test_residual_property(self, k, U0, w):
        pair = wake_eigenpair(1, k, U0, w, CFG)
        mode = wake_mode(1, pair, U0, w, CFG)
        assert mode.residual(default_grid(mode)).max() <= RESIDUAL_TOL

    def test_printed_variable_is_not_a_solution(self):
        pair = wake_eigenpair(2, 1.0, 1.0, 1.0, CFG)
        mode = wake_mode(2, pair, 1.0, 1.0, CFG, sigma="printed")
        assert mode.residual(default_grid(mode)).max() > 1e-3

    def test_reference_lambda_is_not_exact(self):
        pair = wake_eigenpair(2, 1.0, 1.0, 1.0, CFG, exact=False)
        mode = wake_mode(2, pair, 1.0, 1.0, CFG)
        assert mode.residual(default_grid(mode)).max() > 1e-3

    def test_even_odd_symmetry(self):
        pair = wake_eigenpair(2, 1.0, 1.0, 1.0, CFG)
        y = np.array([0.3, 1.1])
        assert np.allclose(psi_wake(2, pair, 1.0, 1.0, CFG, y), psi_wake(2, pair, 1.0, 1.0, CFG, -y), rtol=1e-8)

    def test_rejects_sigma(self):
        pair = wake_eigenpair(1, 1.0, 1.0, 1.0, CFG)
        with pytest.raises(DomainError):
            wake_mode(1, pair, 1.0, 1.0, CFG, sigma="bad")


def test_make_mode_dispatch():
    pair = airy_zero_pair(1, 1.0)
    assert make_mode(Linear(1.0), pair, CFG).kind is PsiKind.AIRY
    assert make_mode(Quadratic(1.0), hermite_pair(1, 1.0, 1.0, 0, 0, CFG), CFG).kind is PsiKind.HERMITE
    assert make_mode(Sech2(1.0, 1.0), wake_eigenpair(1, 1.0, 1.0, 1.0, CFG), CFG).kind is PsiKind.HYP2F1
