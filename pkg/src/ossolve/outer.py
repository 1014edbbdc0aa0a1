"""Outer solutions phi ~ Psi / P with P = -r^2 k^2, valid away from the wall
when epsilon = 1/r is small, and the two amplitude-versus-R figure sweeps.
"""

from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass

import numpy as np

from .eigenfunctions import PsiMode, airy_mode, hermite_lambda, hermite_mode
from .errors import DomainError
from .greens import GridFunction
from .meanflow import FlowConfig, Regime
from .shortwave import Eigenpair, frequency_from_lambda

FIGURE_R = (1000.0, 2000.0, 5000.0, 10000.0)
FIGURE_EPSILON = 0.2
FIGURE_Y = (0.0, 10.0, 1000)
FIGURES = {"fig1": ("linear", 5), "fig2": ("quadratic", 2)}


class OuterCase(str, enum.Enum):
    LINEAR = "linear"
    QUADRATIC = "quadratic"


def _config(R: float, epsilon: float) -> FlowConfig:
    if not (R > 0 and 0 < epsilon):
        raise DomainError("outer solutions need R > 0 and epsilon > 0")
    return FlowConfig(r=1.0 / epsilon, chi=R * epsilon ** 2, regime=Regime.SHORT_WAVE)


def outer_alpha_linear(n: int, R: float, epsilon: float, sign: int = 1) -> complex:
    """alpha_n = sign * eps (1+i) (sqrt(2)/2) (3 R eps / 2)^(1/2) ((n - 1/4) pi)^(1/2).

    sign = +1 gives Re(alpha) > 0, the decaying Green's-kernel branch.
    """
    if n < 1:
        raise DomainError("outer_linear needs n >= 1")
    return sign * epsilon * (1 + 1j) * (math.sqrt(2) / 2) * math.sqrt(1.5 * R * epsilon) * math.sqrt((n - 0.25) * math.pi)


def outer_lambda_linear(n: int, alpha: complex, R: float) -> complex:
    """lambda_n(alpha) = [3 (n - 1/4) pi / (2 sqrt(i R alpha))]^(2/3), principal powers."""
    return (1.5 * (n - 0.25) * math.pi / cmath.sqrt(1j * R * alpha)) ** (2.0 / 3.0)


def outer_alpha_quadratic(m: int, R: float, epsilon: float) -> complex:
    """alpha_m = (sqrt(3) + i) (2 R eps^4)^(1/3) (2m + 3/4)^(2/3)."""
    if m < 0:
        raise DomainError("outer_quadratic needs m >= 0")
    return (math.sqrt(3) + 1j) * (2 * R * epsilon ** 4) ** (1.0 / 3.0) * (2 * m + 0.75) ** (2.0 / 3.0)


@dataclass(frozen=True)
class OuterMode:
    """phi = Psi / P for one mode; ``psi`` is the closed-form inner mode."""

    case: OuterCase
    pair: Eigenpair
    epsilon: float
    R: float
    psi: PsiMode

    @property
    def r(self) -> float:
        return 1.0 / self.epsilon

    @property
    def P(self) -> complex:
        return -(self.r ** 2) * self.pair.k ** 2

    def __call__(self, y):
        return np.asarray(self.psi(y)) / self.P if np.ndim(y) else self.psi(y) / self.P


def linear_outer_mode(n: int, R: float, epsilon: float, sign: int = 1) -> OuterMode:
    cfg = _config(R, epsilon)
    alpha = outer_alpha_linear(n, R, epsilon, sign)
    lam = outer_lambda_linear(n, alpha, R)
    pair = Eigenpair(n=n, k=alpha, omega=frequency_from_lambda(alpha, lam, cfg.chi), lambda_=lam,
                     branch_note="outer-alpha")
    return OuterMode(OuterCase.LINEAR, pair, epsilon, R, airy_mode(pair, 1.0, 0.0, cfg))


def quadratic_outer_mode(m: int, R: float, epsilon: float, *, exponent: str = "derived") -> OuterMode:
    cfg = _config(R, epsilon)
    alpha = outer_alpha_quadratic(m, R, epsilon)
    lam = hermite_lambda(m, alpha, 1.0, 0.0, 0.0, cfg)
    pair = Eigenpair(n=m, k=alpha, omega=frequency_from_lambda(alpha, lam, cfg.chi), lambda_=lam,
                     branch_note="outer-alpha")
    psi = hermite_mode(m, pair, 1.0, 0.0, cfg, exponent=exponent, normalization="printed")
    return OuterMode(OuterCase.QUADRATIC, pair, epsilon, R, psi)


def _check_y(y):
    if np.any(np.asarray(y) < 0):
        raise DomainError("outer solutions are defined for y >= 0")


def outer_linear(n: int, R: float, epsilon: float, y, *, sign: int = 1):
    """-(eps^2 / alpha_n^2) Ai[(i R alpha_n)^(1/3) (y - lambda_n)] for U = y."""
    _check_y(y)
    return linear_outer_mode(n, R, epsilon, sign)(y)


def outer_quadratic(m: int, R: float, epsilon: float, y, *, exponent: str = "derived"):
    """-(eps^2 / alpha_m^2) N exp(-eta^2/2) H_{2m+1}(eta), eta = (i R alpha_m)^(1/4) y, for U = y^2.

    N = pi^(-1/4) / sqrt(2^(2m+1) 2!).  ``exponent="printed"`` uses
    exp(-(i R alpha_m)^(1/2) y^2) instead of exp(-eta^2/2).
    """
    _check_y(y)
    return quadratic_outer_mode(m, R, epsilon, exponent=exponent)(y)


def figure_profiles(figure: str, *, exponent: str = "derived") -> list[GridFunction]:
    """The four profiles (R = 1000, 2000, 5000, 10000; eps = 0.2) of phi_5 for U = y
    ("fig1") or phi_2 for U = y^2 ("fig2") on y in [0, 10] with 1000 samples."""
    if figure not in FIGURES:
        raise DomainError(f"unknown figure {figure!r}; expected one of {sorted(FIGURES)}")
    case, index = FIGURES[figure]
    y = np.linspace(*FIGURE_Y)
    out = []
    for R in FIGURE_R:
        if case == "linear":
            mode = linear_outer_mode(index, R, FIGURE_EPSILON)
        else:
            mode = quadratic_outer_mode(index, R, FIGURE_EPSILON, exponent=exponent)
        vals = mode(y)
        out.append(GridFunction(y, vals, None, {
            "figure": figure, "case": case, "index": index, "R": R, "epsilon": FIGURE_EPSILON,
            "k": mode.pair.k, "max_abs": float(np.max(np.abs(vals))),
        }))
    return out
