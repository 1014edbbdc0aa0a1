"""Short-wave limit: the (P, Q) factorization, WKB quantization, dispersion
relations and steady-flow eigenvalues.

Conventions: lambda(k, omega) = (i chi omega - k^2) / (i chi k), P = -r^2 k^2,
Q(y) = i r^2 chi k (lambda - U(y)).  Fractional powers use the principal
branch unless a function says otherwise.
"""

from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import DomainError, NoConvergence
from .meanflow import FlowConfig, Linear, MeanProfile, Quadratic, profile_eval
from .numerics import damped_newton, sqrt_endpoint_integral

NEWTON_TOL = 1e-12
_CUBE_ROOTS = tuple(cmath.exp(2j * math.pi * j / 3) for j in range(3))


def spectral_parameter(k: complex, omega: complex, chi: float) -> complex:
    """lambda = (i chi omega - k^2) / (i chi k)."""
    k = complex(k)
    if k == 0:
        raise DomainError("k must be nonzero")
    return (1j * chi * omega - k * k) / (1j * chi * k)


def frequency_from_lambda(k: complex, lam: complex, chi: float) -> complex:
    """Invert :func:`spectral_parameter`: omega = lambda k - i k^2 / chi."""
    k = complex(k)
    return lam * k - 1j * k * k / chi


@dataclass(frozen=True)
class Eigenpair:
    """Mode index, wavenumber, frequency and spectral parameter of one mode."""

    n: int
    k: complex
    omega: complex
    lambda_: complex
    residual: float = 0.0
    branch_note: str = ""

    @classmethod
    def from_k_omega(cls, n, k, omega, cfg: FlowConfig, **kw) -> "Eigenpair":
        return cls(n=n, k=complex(k), omega=complex(omega),
                   lambda_=spectral_parameter(k, omega, cfg.chi), **kw)

    def lambda_mismatch(self, cfg: FlowConfig) -> float:
        """Relative mismatch between the stored lambda and (k, omega)."""
        lam = spectral_parameter(self.k, self.omega, cfg.chi)
        return abs(lam - self.lambda_) / max(abs(lam), 1e-300)


@dataclass(frozen=True)
class FactorizedSystem:
    """P and Q(y) of the second-order pair (phi_yy + P phi = Psi,
    Psi_yy + Q Psi = 0) for one (k, omega)."""

    cfg: FlowConfig
    profile: MeanProfile
    k: complex
    omega: complex

    @property
    def P(self) -> complex:
        return -self.cfg.r ** 2 * complex(self.k) ** 2

    @property
    def lambda_(self) -> complex:
        return spectral_parameter(self.k, self.omega, self.cfg.chi)

    def Q(self, y):
        U, _ = profile_eval(self.profile, y)
        r2 = self.cfg.r ** 2
        return 1j * r2 * self.cfg.chi * self.k * (self.lambda_ - np.asarray(U))

    def Q_direct(self, y):
        """Q from -r^2 k^2 - i R k (U - omega/k), without lambda."""
        U, _ = profile_eval(self.profile, y)
        k = complex(self.k)
        return -self.cfg.r ** 2 * k * k - 1j * self.cfg.R * k * (np.asarray(U) - self.omega / k)

    def sum_check(self, y) -> float:
        """Max relative deviation of P + Q(y) from -[2 r^2 k^2 + i R k (U - omega/k)]."""
        U, _ = profile_eval(self.profile, y)
        k = complex(self.k)
        ref = -(2 * self.cfg.r ** 2 * k * k + 1j * self.cfg.R * k * (np.asarray(U) - self.omega / k))
        got = self.P + self.Q(y)
        return float(np.max(np.abs(got - ref) / np.maximum(np.abs(ref), 1e-300)))


# ---------------------------------------------------------------------------
# WKB quantization


def wkb_action(E: complex, V: Callable, t1: complex, t2: complex, *, abstol=1e-14, reltol=1e-12):
    """Integral of sqrt(E - V(y)) along the straight path t1 -> t2.

    The cosine substitution absorbs square-root behaviour at the ends, so
    turning points may sit on either endpoint.

    Returns:
        (action, error estimate).
    """
    def g(y):
        return np.sqrt(E - np.asarray(V(y), dtype=complex))

    return sqrt_endpoint_integral(g, t1, t2, abstol=abstol, reltol=reltol)


def wkb_quantization(E: complex, V: Callable, turning_points, r: float, n: int | None = None):
    """Residual of the quantization rule action - (n - 1/4) pi / r.

    With ``n=None`` the nearest integer n is used.

    Returns:
        (residual, n).
    """
    if r < 1:
        raise DomainError("WKB quantization needs r >= 1")
    action, _ = wkb_action(E, V, *turning_points)
    if n is None:
        n = int(round((action * r / math.pi).real + 0.25))
    return action - (n - 0.25) * math.pi / r, n


def wkb_airy_eigenvalue(n: int, eps: float) -> float:
    """WKB eigenvalue of eps^2 u'' = (y - E) u, u(0) = u(inf) = 0:
    E_n = [3 pi (n - 1/4) eps / 2]^(2/3)."""
    return (1.5 * math.pi * (n - 0.25) * eps) ** (2.0 / 3.0)


def exact_airy_eigenvalue(n: int, eps: float) -> float:
    """Exact eigenvalue eps^(2/3) |a_n| from the n-th zero of Ai."""
    from .oracle import airy_zero

    return eps ** (2.0 / 3.0) * abs(airy_zero(n))


def _check_index(n: int):
    if n < 0:
        raise DomainError("mode index must be non-negative")
    if n == 0:
        warnings.warn("n = 0 makes (n - 1/4) negative; principal-branch value returned", stacklevel=3)


# ---------------------------------------------------------------------------
# dispersion relations


def _linear_scale(n, b, cfg):
    return ((n - 0.25) * math.pi / cfg.r) ** (2.0 / 3.0) if n > 0 else \
        complex((n - 0.25) * math.pi / cfg.r) ** (2.0 / 3.0)


def dispersion_linear(n: int, k: complex, b: float, c: float, cfg: FlowConfig) -> complex:
    """omega_n(k) for U = b y + c, principal branches throughout."""
    k = complex(k)
    if k == 0:
        raise DomainError("k must be nonzero")
    if b == 0:
        raise DomainError("b must be nonzero: a flat profile has no turning point")
    _check_index(n)
    chi = cfg.chi
    X = 3 * b * k / (2 * cmath.sqrt(1j * chi))
    return -1j * k * k / chi + c * k + X ** (2.0 / 3.0) * _linear_scale(n, b, cfg)


def dispersion_quadratic(n: int, k: complex, a: float, b: float, c: float, cfg: FlowConfig) -> complex:
    """omega_n(k) for U = a y^2 + b y + c, principal branches."""
    k = complex(k)
    if a <= 0:
        raise DomainError("quadratic dispersion requires a > 0")
    if k == 0:
        raise DomainError("k must be nonzero")
    _check_index(n)
    chi = cfg.chi
    return (-1j * k * k / chi - k * (b * b / (4 * a) - c)
            + (4.0 / cfg.r) * cmath.sqrt(a * k / (1j * chi)) * (n - 0.25))


def wake_dispersion(n: int, k: complex, U0: float, w: float, cfg: FlowConfig):
    """Wake dispersion in its reference form.

    omega = -i k^2/chi - k w^2 [(n + 1/2) - S],  S = sqrt(-i r^2 k chi U0 / w^2 + 1/4),
    and vartheta_n = S - (n + 1/2).

    Returns:
        (omega, vartheta).
    """
    k = complex(k)
    if k == 0:
        raise DomainError("k must be nonzero")
    if not (U0 > 0 and w > 0):
        raise DomainError("wake requires U0 > 0 and w > 0")
    S = wake_root(k, U0, w, cfg)
    vartheta = S - (n + 0.5)
    omega = -1j * k * k / cfg.chi - k * w * w * ((n + 0.5) - S)
    return omega, vartheta


def wake_root(k: complex, U0: float, w: float, cfg: FlowConfig) -> complex:
    """S = sqrt(-i r^2 k chi U0 / w^2 + 1/4), principal branch."""
    return cmath.sqrt(-1j * cfg.r ** 2 * complex(k) * cfg.chi * U0 / w ** 2 + 0.25)


def wake_lambda_exact(n: int, k: complex, U0: float, w: float, cfg: FlowConfig) -> complex:
    """Spectral parameter for which the hypergeometric wake mode solves its ODE:
    lambda = i w^2 vartheta^2 / (r^2 chi k)."""
    k = complex(k)
    vartheta = wake_root(k, U0, w, cfg) - (n + 0.5)
    return 1j * w * w * vartheta ** 2 / (cfg.r ** 2 * cfg.chi * k)


def wake_eigenpair(n: int, k: complex, U0: float, w: float, cfg: FlowConfig, *, exact: bool = True) -> Eigenpair:
    """Eigenpair for the wake at wavenumber k.

    ``exact=True`` uses the lambda that makes the closed-form mode an exact
    solution; ``exact=False`` uses the reference dispersion relation.
    """
    if exact:
        lam = wake_lambda_exact(n, k, U0, w, cfg)
        omega = frequency_from_lambda(k, lam, cfg.chi)
        note = "exact-lambda"
    else:
        omega, _ = wake_dispersion(n, k, U0, w, cfg)
        lam = spectral_parameter(k, omega, cfg.chi)
        note = "reference-lambda"
    return Eigenpair(n=n, k=complex(k), omega=omega, lambda_=lam, branch_note=note)


def wake_decays(n: int, k: complex, U0: float, w: float, cfg: FlowConfig) -> bool:
    """True when Re(vartheta_n) > 0, so cosh^(-vartheta) decays at |y| -> inf."""
    return (wake_root(k, U0, w, cfg) - (n + 0.5)).real > 0


# ---------------------------------------------------------------------------
# steady roots


def _pow_near(x_ref: complex, value_ref: complex, p: float):
    """x**p on the branch through (x_ref, value_ref), cut opposite x_ref."""
    def f(x):
        return value_ref * (complex(x) / x_ref) ** p

    return f


def _branch_label(factor: complex) -> str:
    ang = cmath.phase(factor) / math.pi
    return f"exp({ang:+.6f}i*pi)"


def _select(cands, accept):
    good = [complex(k) for k in cands if accept(k)]
    if not good:
        return None

    def clean(v, scale):
        return 0.0 if abs(v) <= 1e-12 * scale else v

    keyed = [(clean(k.real, abs(k)), clean(k.imag, abs(k)), k) for k in good]
    preferred = [t for t in keyed if t[0] > 0 and t[1] >= 0]
    pool = preferred or keyed
    return max(pool, key=lambda t: (t[0], t[1]))[2]


def linear_steady_candidates(n: int, b: float, c: float, cfg: FlowConfig) -> np.ndarray:
    """Roots of the quartic k (i k/chi - c)^3 = 9 b^2 (n-1/4)^2 pi^2 / (4 i chi r^2),
    which contains every branch of the steady linear relation."""
    chi, r = cfg.chi, cfg.r
    inner = np.array([1j / chi, -c], dtype=complex)
    cube = np.polymul(np.polymul(inner, inner), inner)
    poly = np.polymul(cube, np.array([1, 0], dtype=complex))
    poly[-1] -= 9 * b * b * (n - 0.25) ** 2 * math.pi ** 2 / (4j * chi * r * r)
    return np.roots(poly)


def linear_quantization(k: complex, b: float, c: float, cfg: FlowConfig) -> complex:
    """(2/3) (lam - c)^(3/2) sqrt(i chi k) r / (b pi) + 1/4 at steady lam = i k/chi.

    This is the turning-point integral relation before cubing, with principal
    square roots; it equals n exactly at the steady root of mode n.
    """
    lam = 1j * k / cfg.chi
    d = lam - c
    return (2.0 / 3.0) * d * cmath.sqrt(d) * cmath.sqrt(1j * cfg.chi * k) * cfg.r / (b * math.pi) + 0.25


def steady_eigen_linear(n: int, b: float, c: float, cfg: FlowConfig) -> Eigenpair:
    """Steady (omega = 0) eigenvalue of mode n for U = b y + c.

    The quartic's roots are filtered by the quantization integral, tie-broken
    toward Re(k) > 0, Im(k) >= 0, then the largest Re(k); the survivor is
    polished by damped Newton on the steady relation with its fractional
    power on the branch through that root.  ``branch_note`` records that
    branch relative to the principal one and the ratio to the reference
    closed form when b = 1, c = 0.

    Raises:
        DomainError: b == 0 or n < 1.
        NoConvergence: no candidate satisfies the quantization or Newton fails.
    """
    if b == 0:
        raise DomainError("b must be nonzero: a flat profile has no turning point")
    if n < 1:
        raise DomainError("steady roots are defined for n >= 1")
    chi, r = cfg.chi, cfg.r
    cands = linear_steady_candidates(n, b, c, cfg)
    def accept(k):
        # the turning point (lam - c)/b must lie on the flow side of the wall
        turning = (1j * k / chi - c) / b
        return abs(linear_quantization(k, b, c, cfg) - n) <= 1e-6 * n and turning.real > 0

    k0 = _select(cands, accept)
    if k0 is None:
        raise NoConvergence("no steady root satisfies the quantization integral", last=cands[0])
    M = ((n - 0.25) * math.pi / r) ** (2.0 / 3.0)
    sq = cmath.sqrt(1j * chi)

    def X(k):
        return 3 * b * k / (2 * sq)

    x0 = X(k0)
    target = (1j * k0 * k0 / chi - c * k0) / M
    principal = x0 ** (2.0 / 3.0)
    branch = min(_CUBE_ROOTS, key=lambda w: abs(principal * w - target))
    pw = _pow_near(x0, principal * branch, 2.0 / 3.0)

    def F(k):
        return 1j * k * k / chi - c * k - pw(X(k)) * M

    def dF(k):
        return 2j * k / chi - c - (2.0 / 3.0) * pw(X(k)) * M / k

    def tol(k):
        return NEWTON_TOL * (1 + abs(k) ** 2 / chi)

    k, fk, _ = damped_newton(F, dF, k0, tol=tol)
    note = [f"branch={_branch_label(branch)}",
            f"principal_residual={abs(1j * k * k / chi - c * k - X(k) ** (2 / 3) * M) / (1 + abs(k) ** 2 / chi):.3e}"]
    if b == 1 and c == 0:
        k45 = (1 + 1j) * math.sqrt(2) / 2 * math.sqrt(3 * chi / (2 * r)) * math.sqrt((n - 0.25) * math.pi)
        note.append(f"ratio_to_closed_form(+)={_branch_label(k / k45)}")
    return Eigenpair(n=n, k=k, omega=0j, lambda_=1j * k / chi,
                     residual=abs(fk) / (1 + abs(k) ** 2 / chi), branch_note=";".join(note))


def linear_steady_modulus(n: int, cfg: FlowConfig, b: float = 1.0) -> float:
    """|k_n| of the reference closed form for U = b y (b = 1 there)."""
    return math.sqrt(3 * cfg.chi * (n - 0.25) * math.pi * abs(b) / (2 * cfg.r))


def quadratic_steady_candidates(n: int, a: float, b: float, c: float, cfg: FlowConfig) -> np.ndarray:
    """Roots of the cubic k (i k/chi + beta)^2 = 16 a (n-1/4)^2 / (i chi r^2), beta = b^2/4a - c."""
    chi, r = cfg.chi, cfg.r
    beta = b * b / (4 * a) - c
    inner = np.array([1j / chi, beta], dtype=complex)
    poly = np.polymul(np.polymul(inner, inner), np.array([1, 0], dtype=complex))
    poly[-1] -= 16 * a * (n - 0.25) ** 2 / (1j * chi * r * r)
    return np.roots(poly)


def quadratic_quantization(k: complex, a: float, b: float, c: float, cfg: FlowConfig) -> complex:
    """Lambda sqrt(i a chi k) r / 4 + 1/4 at steady lam = i k/chi, with
    Lambda = (lam + b^2/4a - c)/a and a principal square root."""
    lam = 1j * k / cfg.chi
    Lam = (lam + b * b / (4 * a) - c) / a
    return Lam * cmath.sqrt(1j * a * cfg.chi * k) * cfg.r / 4 + 0.25


def steady_eigen_quadratic(n: int, a: float, b: float, c: float, cfg: FlowConfig) -> Eigenpair:
    """Steady eigenvalue of mode n for U = a y^2 + b y + c.

    Same strategy as :func:`steady_eigen_linear`: polynomial candidates,
    quantization filter, tie-break, Newton polish on the branch through the
    chosen root.
    """
    if a <= 0:
        raise DomainError("quadratic steady roots require a > 0")
    if n < 1:
        raise DomainError("steady roots are defined for n >= 1")
    chi, r = cfg.chi, cfg.r
    beta = b * b / (4 * a) - c
    cands = quadratic_steady_candidates(n, a, b, c, cfg)

    def accept(k):
        Lam = (1j * k / chi + beta) / a
        return abs(quadratic_quantization(k, a, b, c, cfg) - n) <= 1e-6 * n and Lam.real > 0

    k0 = _select(cands, accept)
    if k0 is None:
        raise NoConvergence("no steady root satisfies the quantization integral", last=cands[0])
    A = 4.0 / r * (n - 0.25)

    def x(k):
        return a * k / (1j * chi)

    x0 = x(k0)
    target = (1j * k0 * k0 / chi + beta * k0) / A
    principal = cmath.sqrt(x0)
    branch = min((1, -1), key=lambda s: abs(principal * s - target))
    pw = _pow_near(x0, principal * branch, 0.5)

    def F(k):
        return 1j * k * k / chi + beta * k - A * pw(x(k))

    def dF(k):
        return 2j * k / chi + beta - 0.5 * A * pw(x(k)) / k

    def tol(k):
        return NEWTON_TOL * (1 + abs(k) ** 2 / chi)

    k, fk, _ = damped_newton(F, dF, k0, tol=tol)
    note = [f"branch={_branch_label(branch)}",
            f"principal_residual={abs(1j * k * k / chi + beta * k - A * cmath.sqrt(x(k))) / (1 + abs(k) ** 2 / chi):.3e}"]
    if a == 1 and b == 0 and c == 0:
        k52 = (math.sqrt(3) + 1j) * (2 * chi / r ** 2) ** (1 / 3) * (n - 0.25) ** (2 / 3)
        note.append(f"ratio_to_closed_form={_branch_label(k / k52)}")
    return Eigenpair(n=n, k=k, omega=0j, lambda_=1j * k / chi,
                     residual=abs(fk) / (1 + abs(k) ** 2 / chi), branch_note=";".join(note))


def quadratic_steady_modulus(n: int, cfg: FlowConfig, a: float = 1.0) -> float:
    """|k_n| of the reference closed form for U = a y^2 (a = 1 there)."""
    return 2 * (2 * cfg.chi * a / cfg.r ** 2) ** (1 / 3) * (n - 0.25) ** (2 / 3)


def quadratic_closed_form(n: int, cfg: FlowConfig) -> complex:
    """Reference closed form (sqrt(3) + i)(2 chi / r^2)^(1/3) (n - 1/4)^(2/3)."""
    return (math.sqrt(3) + 1j) * (2 * cfg.chi / cfg.r ** 2) ** (1 / 3) * (n - 0.25) ** (2 / 3)


def quadratic_closed_form_odd(m: int, cfg: FlowConfig) -> complex:
    """The same closed form written for odd Hermite order 2m+1: (2m + 3/4)^(2/3)."""
    return (math.sqrt(3) + 1j) * (2 * cfg.chi / cfg.r ** 2) ** (1 / 3) * (2 * m + 0.75) ** (2 / 3)


def linear_closed_form(n: int, cfg: FlowConfig, sign: int = 1) -> complex:
    """Reference closed form for U = y: sign * (1+i)(sqrt2/2)(3 chi/2r)^(1/2)((n-1/4) pi)^(1/2)."""
    return sign * (1 + 1j) * math.sqrt(2) / 2 * math.sqrt(3 * cfg.chi / (2 * cfg.r)) * math.sqrt((n - 0.25) * math.pi)


# ---------------------------------------------------------------------------
# quantization-integral checks for converged roots


def linear_turning_integral(pair: Eigenpair, b: float, c: float, cfg: FlowConfig) -> tuple[complex, complex]:
    """Numerical integral of sqrt(lam - U(y)) from 0 to the turning point
    (lam - c)/b, and its target (n - 1/4) pi / (r sqrt(i chi k))."""
    k, lam = pair.k, pair.lambda_
    action, _ = wkb_action(lam, lambda y: b * y + c, 0.0, (lam - c) / b)
    return action, (pair.n - 0.25) * math.pi / (cfg.r * cmath.sqrt(1j * cfg.chi * k))


def quadratic_turning_integral(pair: Eigenpair, a: float, b: float, c: float, cfg: FlowConfig):
    """Numerical integral of sqrt(Lambda - mu^2) for mu from 0 to sqrt(Lambda),
    and its target (n - 1/4) pi / (r sqrt(i a chi k))."""
    k, lam = pair.k, pair.lambda_
    Lam = (lam + b * b / (4 * a) - c) / a
    action, _ = wkb_action(Lam, lambda mu: mu * mu, 0.0, cmath.sqrt(Lam))
    return action, (pair.n - 0.25) * math.pi / (cfg.r * cmath.sqrt(1j * a * cfg.chi * k))


def steady_eigen(n: int, profile: MeanProfile, cfg: FlowConfig) -> Eigenpair:
    """Dispatch to the steady solver for a linear or quadratic profile."""
    if isinstance(profile, Linear):
        return steady_eigen_linear(n, profile.b, profile.c, cfg)
    if isinstance(profile, Quadratic):
        return steady_eigen_quadratic(n, profile.a, profile.b, profile.c, cfg)
    raise DomainError(f"no steady solver for the {profile.kind} profile")
