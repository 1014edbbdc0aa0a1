"""Flow parameters, mean-velocity profiles and wavenumber geometry.

The spanwise mean velocity is called ``spanwise`` throughout (it appears
under two different symbols in the literature this package follows).
"""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass
from typing import Callable, Union

import numpy as np

from .errors import DomainError


class Regime(str, enum.Enum):
    SHORT_WAVE = "short-wave"
    LONG_WAVE = "long-wave"


class Domain(str, enum.Enum):
    HALF_LINE = "half-line"
    REAL_LINE = "real-line"


GRAY_ZONE = (0.8, 1.25)


@dataclass(frozen=True)
class FlowConfig:
    """Nondimensional flow parameters.

    ``chi`` is stored and ``R`` derived from it, so R = chi * r**2 holds
    exactly in floating point for the stored pair.
    """

    r: float
    chi: float
    theta: float = 0.0
    regime: Regime | None = None

    def __post_init__(self):
        if not (self.r > 0 and self.chi > 0):
            raise DomainError("FlowConfig requires r > 0 and chi > 0")
        regime = self.regime
        if regime is None:
            regime = Regime.SHORT_WAVE if self.r >= 1 else Regime.LONG_WAVE
        regime = Regime(regime)
        object.__setattr__(self, "regime", regime)
        if GRAY_ZONE[0] < self.r < GRAY_ZONE[1]:
            warnings.warn(f"aspect ratio r={self.r:g} is close to 1; neither limit is sharp", stacklevel=3)
        if regime is Regime.SHORT_WAVE and self.r < 1:
            warnings.warn("short-wave regime requested with r < 1", stacklevel=3)
        if regime is Regime.LONG_WAVE and self.r > 1:
            warnings.warn("long-wave regime requested with r > 1", stacklevel=3)

    @property
    def R(self) -> float:
        return self.chi * self.r ** 2

    @property
    def epsilon(self) -> float:
        return 1.0 / self.r

    @classmethod
    def from_reynolds(cls, r: float, R: float, theta: float = 0.0, regime=None) -> "FlowConfig":
        return cls(r=r, chi=R / r ** 2, theta=theta, regime=regime)


def nondimensionalize(L: float, H: float, V: float, nu_star: float, theta: float = 0.0) -> FlowConfig:
    """Build a FlowConfig from horizontal length L, vertical length H, speed V
    and kinematic viscosity nu_star: r = H/L, chi = L V / nu_star."""
    for name, v in (("L", L), ("H", H), ("V", V), ("nu_star", nu_star)):
        if not v > 0:
            raise DomainError(f"{name} must be positive, got {v!r}")
    return FlowConfig(r=H / L, chi=L * V / nu_star, theta=theta)


# ---------------------------------------------------------------------------
# mean profiles


@dataclass(frozen=True)
class Linear:
    """U(y) = b y + c on y >= 0."""

    b: float
    c: float = 0.0
    domain = Domain.HALF_LINE
    kind = "linear"

    def U(self, y):
        return self.b * np.asarray(y, dtype=float) + self.c

    def Uyy(self, y):
        return np.zeros_like(np.asarray(y, dtype=float))


@dataclass(frozen=True)
class Quadratic:
    """U(y) = a y^2 + b y + c on y >= 0."""

    a: float
    b: float = 0.0
    c: float = 0.0
    small_a: float = 1e-2
    domain = Domain.HALF_LINE
    kind = "quadratic"

    def U(self, y):
        y = np.asarray(y, dtype=float)
        return (self.a * y + self.b) * y + self.c

    def Uyy(self, y):
        return np.full_like(np.asarray(y, dtype=float), 2.0 * self.a)

    @property
    def long_wave_admissible(self) -> bool:
        """True when the curvature a is small enough to drop U_yy."""
        return abs(self.a) <= self.small_a


@dataclass(frozen=True)
class Sech2:
    """Wake profile U(y) = U0 sech^2(w y) on the whole line."""

    U0: float
    w: float
    domain = Domain.REAL_LINE
    kind = "sech2"

    def __post_init__(self):
        if not (self.U0 > 0 and self.w > 0):
            raise DomainError("Sech2 requires U0 > 0 and w > 0")

    def U(self, y):
        return self.U0 / np.cosh(self.w * np.asarray(y, dtype=float)) ** 2

    def Uyy(self, y):
        t = np.tanh(self.w * np.asarray(y, dtype=float))
        s2 = 1.0 - t * t
        return self.U0 * self.w ** 2 * s2 * (6.0 * t * t - 2.0)


MeanProfile = Union[Linear, Quadratic, Sech2]


def profile_eval(p: MeanProfile, y):
    """Return (U, U_yy) at ``y``; half-line profiles reject y < 0."""
    arr = np.asarray(y, dtype=float)
    if p.domain is Domain.HALF_LINE and np.any(arr < 0):
        raise DomainError(f"{p.kind} profile is defined on y >= 0")
    U, Uyy = p.U(arr), p.Uyy(arr)
    if arr.ndim == 0:
        return float(U), float(Uyy)
    return U, Uyy


def squire_reduce(
    ubar: Callable,
    spanwise: Callable,
    theta: float,
    ubar_yy: Callable | None = None,
    spanwise_yy: Callable | None = None,
):
    """Project streamwise and spanwise mean flows onto the wave direction:
    U(y) = ubar(y) cos(theta) + spanwise(y) sin(theta).

    Returns the reduced profile, or (profile, second derivative) when both
    derivative callbacks are given.
    """
    ct, st = math.cos(theta), math.sin(theta)

    def reduced(y):
        return ct * np.asarray(ubar(y)) + st * np.asarray(spanwise(y))

    if ubar_yy is None or spanwise_yy is None:
        return reduced

    def reduced_yy(y):
        return ct * np.asarray(ubar_yy(y)) + st * np.asarray(spanwise_yy(y))

    return reduced, reduced_yy


def decompose_wavenumber(k: complex, theta: float) -> tuple[complex, complex]:
    """Streamwise and spanwise components alpha = k cos(theta), beta = k sin(theta)."""
    k = complex(k)
    return k * math.cos(theta), k * math.sin(theta)


def squire_factor_convention(k_factor: complex = 1.0) -> dict:
    """Components of the wavenumber for theta = pi/6 and theta = pi/3.

    Used to check which angle reproduces the sqrt(2)/4, sqrt(6)/4 factors of
    the oblique-wave example; the comparison is logged, not enforced.
    """
    out = {}
    for name, th in (("pi/6", math.pi / 6), ("pi/3", math.pi / 3)):
        a, b = decompose_wavenumber(k_factor, th)
        out[name] = (a, b)
    return out
