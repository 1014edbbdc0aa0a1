import dataclasses

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ossolve.errors import DomainError, SingularMap, SpuriousMode
from ossolve.meanflow import FlowConfig, Linear, Quadratic, Sech2
from ossolve.oracle import (
    CollocationProblem,
    SolveMode,
    airy_zero,
    assemble,
    chebyshev,
    chebyshev_tail_energy,
    refine_eigen,
    self_convergence,
    stretch_for,
    turning_point,
)
from ossolve.shortwave import steady_eigen_linear, steady_eigen_quadratic

CFG = FlowConfig(r=20.0, chi=1.0)


@pytest.fixture(scope="module")
def seed():
    return steady_eigen_linear(5, 1.0, 0.0, CFG)


@pytest.fixture(scope="module")
def problem(seed):
    return CollocationProblem.for_seed(Linear(1.0), CFG, seed)


@pytest.fixture(scope="module")
def converged(problem, seed):
    return refine_eigen(problem, seed)


class TestAiryZero:
    @pytest.mark.parametrize("n", [1, 2, 10])
    def test_values(self, n):
        assert abs(airy_zero(n) - float(mpmath.airyaizero(n))) < 1e-13

    def test_index(self):
        with pytest.raises(DomainError):
            airy_zero(0)


class TestDiscretization:
    def test_second_derivative_of_cosine(self):
        p = CollocationProblem(Linear(1.0), CFG, N=96, Ymax=10.0, map=0.0)
        y, Dy, D2, _ = p.grid()
        assert np.max(np.abs(D2 @ np.cos(y) + np.cos(y))) <= 1e-8

    @given(st.floats(0.0, 0.5), st.floats(2.0, 30.0))
    @settings(max_examples=20, deadline=None)
    def test_mapped_first_derivative(self, s, Y):
        p = CollocationProblem(Linear(1.0), CFG, N=96, Ymax=Y, map=s)
        y, Dy, _, _ = p.grid()
        f = np.exp(-y / Y) * np.sin(3 * y / Y)
        df = np.exp(-y / Y) * (3 * np.cos(3 * y / Y) - np.sin(3 * y / Y)) / Y
        assert np.max(np.abs(Dy @ f - df)) <= 1e-9 / Y

    def test_chebyshev_nodes(self):
        x, D = chebyshev(33)
        assert x[0] == 1.0 and x[-1] == -1.0
        assert np.allclose(D @ x, 1.0)

    def test_shapes_and_finite(self, problem, seed):
        A, B = assemble(problem, seed.k + 0.1)
        assert A.shape == B.shape == (problem.N, problem.N)
        assert np.all(np.isfinite(A)) and np.all(np.isfinite(B))
        assert np.all(B[[0, 1, -2, -1]] == 0)

    @given(st.floats(0.05, 2.0), st.floats(-2.0, 2.0))
    @settings(max_examples=20, deadline=None)
    def test_entries_finite_property(self, kr, ki):
        p = CollocationProblem(Quadratic(1.0), CFG, N=48, Ymax=5.0)
        A, B = assemble(p, complex(kr, ki))
        assert np.all(np.isfinite(A)) and np.all(np.isfinite(B))

    @pytest.mark.parametrize("kw", [dict(Ymax=0.0), dict(Ymax=np.inf), dict(map=-0.1), dict(map=np.nan)])
    def test_singular_map(self, kw):
        with pytest.raises(SingularMap):
            CollocationProblem(Linear(1.0), CFG, **kw)

    def test_minimum_points(self):
        with pytest.raises(DomainError):
            CollocationProblem(Linear(1.0), CFG, N=16)

    def test_whole_line_rejected(self):
        with pytest.raises(DomainError):
            CollocationProblem(Sech2(1.0, 1.0), CFG)

    def test_domain_sizing(self, seed, problem):
        assert problem.Ymax >= 3 * turning_point(Linear(1.0), seed.lambda_)
        assert 0 <= problem.map == stretch_for(problem.Ymax, turning_point(Linear(1.0), seed.lambda_))
        with pytest.raises(DomainError):
            CollocationProblem.for_seed(Linear(1.0), CFG, seed, ymax_factor=2.0)


class TestRefinement:
    def test_near_seed(self, converged, seed):
        assert abs(converged.pair.k - seed.k) / abs(converged.pair.k) < 0.2

    def test_decaying_branch(self, converged):
        assert converged.pair.k.real > 0

    def test_clamped_rows(self, converged, problem):
        _, Dy, _, _ = problem.grid()
        x = converged.vector
        assert abs(x[0]) <= 1e-10 and abs(x[-1]) <= 1e-10
        scale = np.max(np.abs(Dy @ x))
        assert abs((Dy @ x)[0]) <= 1e-10 * scale and abs((Dy @ x)[-1]) <= 1e-10 * scale

    def test_ode_residual(self, converged):
        assert converged.ode_residual <= 1e-6
        assert converged.tail_energy <= 1e-3

    def test_omega_given_k(self, converged, problem):
        start = dataclasses.replace(converged.pair, omega=0.05 * abs(converged.pair.k))
        res = refine_eigen(problem, start, SolveMode.OMEGA_GIVEN_K)
        assert abs(res.pair.omega) <= 1e-8 * abs(converged.pair.k) ** 2 / CFG.chi

    def test_under_resolved_grid(self, seed):
        with pytest.raises(SpuriousMode):
            refine_eigen(CollocationProblem.for_seed(Linear(1.0), CFG, seed, N=32), seed)

    def test_self_convergence(self, seed):
        sc = self_convergence(Linear(1.0), CFG, seed)
        assert sc["n_doubling"] <= 1e-6
        assert sc["ymax_increase"] <= 1e-6

    def test_curvature_term_changes_quadratic_root(self):
        q = steady_eigen_quadratic(2, 1.0, 0.0, 0.0, CFG)
        p = CollocationProblem.for_seed(Quadratic(1.0), CFG, q)
        plain = refine_eigen(p, q).pair.k
        curved = refine_eigen(dataclasses.replace(p, include_curvature=True, _cache={}), q).pair.k
        assert abs(plain - curved) > 1e-3 * abs(plain)


class TestTailEnergy:
    def test_smooth_and_noise(self):
        x = np.cos(np.pi * np.arange(65) / 64)
        assert chebyshev_tail_energy(np.exp(x)) < 1e-20
        noise = np.random.default_rng(1).standard_normal(65)
        assert chebyshev_tail_energy(noise) > 0.1
