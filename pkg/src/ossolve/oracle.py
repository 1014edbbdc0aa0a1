"""Independent check of the short-wave eigenvalues: Chebyshev collocation of
    phi'''' - [2 r^2 k^2 + i R k (U - omega/k)] phi'' + [r^4 k^4 + i r^2 R k^3 (U - omega/k)] phi = 0
on [0, Ymax] with phi = phi' = 0 at both ends, written as A(k) phi = omega B(k) phi.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import mpmath
import numpy as np

from .errors import DomainError, NoConvergence, SingularMap, SpuriousMode
from .meanflow import FlowConfig, Linear, MeanProfile, Quadratic, profile_eval
from .shortwave import Eigenpair, spectral_parameter

MIN_N = 32
DEFAULT_N = 192
MAX_STRETCH = 0.2
TAIL_FRACTION = 0.10
YMAX_FACTOR = 15.0


def airy_zero(n: int) -> float:
    """n-th zero a_n < 0 of Ai (n >= 1)."""
    if n < 1:
        raise DomainError("Airy zeros are indexed from 1")
    return float(mpmath.airyaizero(n))


class SolveMode(str, enum.Enum):
    OMEGA_GIVEN_K = "omega-given-k"
    K_GIVEN_OMEGA = "k-given-omega"


def chebyshev(N: int):
    """Gauss-Lobatto nodes x_j = cos(pi j/(N-1)) and the first-derivative matrix."""
    x = np.cos(np.pi * np.arange(N) / (N - 1))
    c = np.ones(N)
    c[0] = c[-1] = 2.0
    c *= (-1.0) ** np.arange(N)
    X = np.tile(x, (N, 1)).T
    dX = X - X.T
    D = np.outer(c, 1.0 / c) / (dX + np.eye(N))
    D -= np.diag(D.sum(axis=1))
    return x, D


def turning_point(profile: MeanProfile, lam: complex) -> float:
    """|y| where U(y) = Re(lambda), used to size the domain."""
    if isinstance(profile, Linear):
        return abs((lam - profile.c) / profile.b)
    if isinstance(profile, Quadratic):
        disc = profile.b ** 2 - 4 * profile.a * (profile.c - lam)
        roots = [(-profile.b + sgn * np.sqrt(complex(disc))) / (2 * profile.a) for sgn in (1, -1)]
        return float(max(abs(r) for r in roots))
    raise DomainError("collocation is implemented for half-line profiles")


def stretch_for(Ymax: float, y_turn: float) -> float:
    """Map parameter placing the middle node at the turning point, capped at
    MAX_STRETCH so the oscillatory tail stays resolved."""
    if y_turn <= 0:
        return 0.0
    return float(min(MAX_STRETCH, max(0.0, Ymax / (2 * y_turn) - 1)))


@dataclass
class CollocationProblem:
    profile: MeanProfile
    cfg: FlowConfig
    N: int = DEFAULT_N
    Ymax: float = 20.0
    map: float = 0.2
    include_curvature: bool = False
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        if self.N < MIN_N:
            raise DomainError(f"N must be at least {MIN_N}")
        if self.profile.domain.value != "half-line":
            raise DomainError("collocation is implemented for half-line profiles")
        if not (np.isfinite(self.Ymax) and self.Ymax > 0):
            raise SingularMap("Ymax must be positive and finite")
        if not (np.isfinite(self.map) and self.map >= 0):
            raise SingularMap("map parameter must be non-negative and finite")

    @classmethod
    def for_seed(cls, profile: MeanProfile, cfg: FlowConfig, seed: Eigenpair, N: int = DEFAULT_N,
                 ymax_factor: float = YMAX_FACTOR, **kw) -> "CollocationProblem":
        """Domain of ``ymax_factor`` turning-point lengths (at least 3)."""
        if ymax_factor < 3:
            raise DomainError("Ymax must be at least 3 turning-point lengths")
        y_t = turning_point(profile, seed.lambda_)
        Ymax = ymax_factor * y_t
        return cls(profile, cfg, N=N, Ymax=Ymax, map=stretch_for(Ymax, y_t), **kw)

    def grid(self):
        """Nodes y in [0, Ymax] (ascending) and the derivative matrices D, D2, D4 in y."""
        if "grid" not in self._cache:
            x, D = chebyshev(self.N)
            s = self.map
            y = self.Ymax * (1 + x) / (2 * (1 + s * (1 - x)))
            dydx = self.Ymax / 2 * (1 + 2 * s) / (1 + s - s * x) ** 2
            if not np.all(np.isfinite(dydx)) or np.any(dydx <= 0):
                raise SingularMap("degenerate map: dy/dx is not positive")
            Dy = D / dydx[:, None]
            D2 = Dy @ Dy
            self._cache["grid"] = (y, Dy, D2, D2 @ D2)
        return self._cache["grid"]


def _operators(problem: CollocationProblem, k: complex):
    """Interior operators A(k), B(k) and dA/dk, dB/dk before boundary rows."""
    y, Dy, D2, D4 = problem.grid()
    U, Uyy = profile_eval(problem.profile, y)
    r2 = problem.cfg.r ** 2
    R = problem.cfg.R
    k = complex(k)
    a2 = 2 * r2 * k * k + 1j * R * k * U
    a0 = r2 * r2 * k ** 4 + 1j * r2 * R * k ** 3 * U
    if problem.include_curvature:
        a0 = a0 + 1j * R * k * Uyy
    A = D4 - a2[:, None] * D2 + np.diag(a0)
    da2 = 4 * r2 * k + 1j * R * U
    da0 = 4 * r2 * r2 * k ** 3 + 3j * r2 * R * k * k * U
    if problem.include_curvature:
        da0 = da0 + 1j * R * Uyy
    dA = -da2[:, None] * D2 + np.diag(da0)
    # omega terms: +i R omega phi'' - i r^2 R k^2 omega phi  ->  A phi = omega B phi
    n = y.size
    B = -1j * R * (D2 - r2 * k * k * np.eye(n))
    dB = 2j * R * r2 * k * np.eye(n)
    return A, B, dA, dB


def _apply_rows(M, Dy, value_rows: bool):
    """Replace the first two and last two rows with boundary rows (value and
    slope at each end); the rows are zero for B and for k-derivatives."""
    n = M.shape[0]
    M = M.copy()
    if value_rows:
        I = np.eye(n)
        M[0], M[1], M[-2], M[-1] = I[-1], Dy[-1], Dy[0], I[0]
    else:
        M[[0, 1, -2, -1]] = 0
    return M


def assemble(problem: CollocationProblem, k: complex, omega_split: bool = True):
    """Dense (A, B) with clamped rows, each row scaled to unit max-norm.

    Row order follows the descending Chebyshev nodes: index 0 is y = Ymax and
    index N-1 is y = 0.
    """
    _, Dy, _, _ = problem.grid()
    A, B, _, _ = _operators(problem, k)
    A = _apply_rows(A, Dy, True)
    B = _apply_rows(B, Dy, False)
    scale = 1.0 / np.abs(A).max(axis=1)
    return A * scale[:, None], B * scale[:, None]


def _matrix_at(problem, k, omega):
    _, Dy, _, _ = problem.grid()
    A, B, dA, dB = _operators(problem, k)
    M = _apply_rows(A - omega * B, Dy, True)
    dM = _apply_rows(dA - omega * dB, Dy, False)
    scale = 1.0 / np.abs(M).max(axis=1)
    return M * scale[:, None], dM * scale[:, None]


def chebyshev_tail_energy(values: np.ndarray) -> float:
    """Fraction of Chebyshev-coefficient energy in the last quarter of modes."""
    n = values.size
    j = np.arange(n)
    C = np.cos(np.pi * np.outer(j, j) / (n - 1))
    w = np.ones(n)
    w[0] = w[-1] = 0.5
    coef = (2.0 / (n - 1)) * (C @ (w * values))
    coef[0] *= 0.5
    coef[-1] *= 0.5
    e = np.abs(coef) ** 2
    return float(e[-(n // 4):].sum() / max(e.sum(), 1e-300))


@dataclass(frozen=True)
class OracleResult:
    pair: Eigenpair
    iterations: int
    step: float
    tail_energy: float
    ode_residual: float
    vector: np.ndarray = field(repr=False, compare=False)


def _check_vector(problem, x):
    tail = chebyshev_tail_energy(x)
    if tail > TAIL_FRACTION:
        raise SpuriousMode(f"eigenvector is under-resolved: tail energy {tail:.3g}", value=None, tail=tail)
    return tail


def _interior_residual(problem, k, omega, x):
    A, B, _, _ = _operators(problem, k)
    M = A - omega * B
    res = np.abs(M @ x)[2:-2]
    scale = (np.abs(M) @ np.abs(x))[2:-2]
    return float(np.max(res / np.maximum(scale, 1e-300)))


def _solve_k(problem, seed: Eigenpair, tol, max_iter):
    omega = complex(seed.omega)
    k = complex(seed.k)
    if abs(k.real) <= 1e-8 * abs(k):
        # a purely imaginary seed sits on the symmetry line of the steady problem
        k += 0.05 * abs(k)
    M, _ = _matrix_at(problem, k, omega)
    U, _, Vh = np.linalg.svd(M)
    b, c = U[:, -1], Vh[-1].conj()
    n = M.shape[0]
    step = math.inf
    x = c
    for it in range(1, max_iter + 1):
        M, dM = _matrix_at(problem, k, omega)
        Bd = np.zeros((n + 1, n + 1), dtype=complex)
        Bd[:n, :n] = M
        Bd[:n, n] = b
        Bd[n, :n] = c.conj()
        rhs = np.zeros(n + 1, dtype=complex)
        rhs[n] = 1.0
        sol = np.linalg.solve(Bd, rhs)
        x, g = sol[:n], sol[n]
        rhs2 = np.zeros(n + 1, dtype=complex)
        rhs2[:n] = -dM @ x
        gp = np.linalg.solve(Bd, rhs2)[n]
        if gp == 0 or not np.isfinite(gp):
            raise NoConvergence("bordered derivative vanished", last=k, residual=abs(g))
        dk = g / gp
        k -= dk
        step = abs(dk) / abs(k)
        if step < tol:
            return k, omega, x, it, step
    # rounding floor: accept when the last steps are far below the requested accuracy
    if step < 1e3 * tol:
        return k, omega, x, max_iter, step
    raise NoConvergence(f"bordered Newton stalled; closest value k={k:.12g}", last=k, residual=step)


def _solve_omega(problem, seed: Eigenpair, tol, max_iter):
    k = complex(seed.k)
    A, B = assemble(problem, k)
    sigma = complex(seed.omega)
    shifted = A - sigma * B
    rng = np.random.default_rng(0)
    x = rng.standard_normal(A.shape[0]) + 1j * rng.standard_normal(A.shape[0])
    x /= np.linalg.norm(x)
    omega = sigma
    step = math.inf
    # |k|^2/chi sets the frequency scale, so a vanishing omega still converges
    freq_scale = max(abs(k) ** 2 / problem.cfg.chi, 1e-300)
    for it in range(1, max_iter + 1):
        z = np.linalg.solve(shifted, B @ x)
        theta = np.vdot(x, z)
        if theta == 0:
            raise NoConvergence("inverse iteration lost the eigenvector", last=omega, residual=math.inf)
        new = sigma + 1.0 / theta
        x = z / np.linalg.norm(z)
        step = abs(new - omega) / max(abs(new), freq_scale)
        omega = new
        if step < tol:
            return k, omega, x, it, step
    raise NoConvergence(f"inverse iteration did not converge; closest value omega={omega:.12g}",
                        last=omega, residual=step)


def refine_eigen(problem: CollocationProblem, seed: Eigenpair, mode=SolveMode.K_GIVEN_OMEGA, *,
                 tol: float = 1e-12, max_iter: int = 60) -> OracleResult:
    """Polish ``seed`` against the collocation operator.

    K_GIVEN_OMEGA: Newton on the bordered-matrix determinant surrogate in k
    at fixed omega.  OMEGA_GIVEN_K: shifted inverse iteration in omega at
    fixed k (tolerance 1e-10 relative by default for this mode).

    Raises:
        NoConvergence: with the closest value found.
        SpuriousMode: the eigenvector is not resolved by the grid.
    """
    mode = SolveMode(mode)
    if mode is SolveMode.K_GIVEN_OMEGA:
        k, omega, x, it, step = _solve_k(problem, seed, tol, max_iter)
    else:
        k, omega, x, it, step = _solve_omega(problem, seed, max(tol, 1e-10), max_iter)
    x = x / x[np.argmax(np.abs(x))]
    tail = _check_vector(problem, x)
    resid = _interior_residual(problem, k, omega, x)
    pair = Eigenpair(n=seed.n, k=k, omega=omega, lambda_=spectral_parameter(k, omega, problem.cfg.chi),
                     residual=step, branch_note=f"collocation N={problem.N} Ymax={problem.Ymax:.6g}")
    return OracleResult(pair, it, step, tail, resid, x)


def self_convergence(profile: MeanProfile, cfg: FlowConfig, seed: Eigenpair, *, N: int = DEFAULT_N,
                     ymax_factor: float = YMAX_FACTOR) -> dict:
    """Oracle k at N, at 2N, and at 1.5 Ymax, with the relative changes."""
    base = CollocationProblem.for_seed(profile, cfg, seed, N=N, ymax_factor=ymax_factor)
    r1 = refine_eigen(base, seed)
    fine = CollocationProblem(profile, cfg, N=2 * N, Ymax=base.Ymax, map=base.map)
    r2 = refine_eigen(fine, r1.pair)
    long = CollocationProblem(profile, cfg, N=2 * N, Ymax=1.5 * base.Ymax, map=base.map)
    r3 = refine_eigen(long, r2.pair)
    k1, k2, k3 = r1.pair.k, r2.pair.k, r3.pair.k
    return {
        "k": k2,
        "k_coarse": k1,
        "k_long": k3,
        "n_doubling": abs(k2 - k1) / abs(k2),
        "ymax_increase": abs(k3 - k2) / abs(k2),
        "tail_energy": r2.tail_energy,
        "ode_residual": r2.ode_residual,
        "N": N,
        "Ymax": base.Ymax,
        "map": base.map,
    }
