"""Closed-form solutions Psi of Psi_yy = i r^2 chi k (U - lambda) Psi.

Airy modes for linear U, Gaussian-weighted odd Hermite modes for quadratic U,
and a Gauss-hypergeometric mode for the sech^2 wake.
"""

from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass, field

import numpy as np

from . import specfun
from .errors import DomainError
from .meanflow import FlowConfig, MeanProfile, Linear, Quadratic, Sech2, profile_eval
from .numerics import D2_STEP, second_derivative
from .shortwave import Eigenpair, frequency_from_lambda, wake_root

BOUNDARY_TOL = 1e-6


class PsiKind(str, enum.Enum):
    AIRY = "airy"
    HERMITE = "hermite"
    HYP2F1 = "hyp2f1"


def _log_cosh(x):
    ax = np.abs(x)
    return ax + np.log1p(np.exp(-2 * ax)) - math.log(2.0)


@dataclass(frozen=True)
class PsiMode:
    """A Psi solution bound to its profile, eigenpair and flow parameters.

    ``scale`` and ``shift`` are the constants of the change of variables
    eta = scale * (y - shift) (Airy, Hermite); for the wake ``scale`` holds
    vartheta and ``shift`` holds S.
    """

    profile: MeanProfile
    pair: Eigenpair
    cfg: FlowConfig
    kind: PsiKind
    scale: complex
    shift: complex
    order: int = 0
    options: dict = field(default_factory=dict, compare=False)

    def __call__(self, y):
        y_arr = np.asarray(y, dtype=float)
        if self.kind is PsiKind.AIRY:
            out = specfun.airy_ai(self.scale * (y_arr - self.shift))
        elif self.kind is PsiKind.HERMITE:
            out = _hermite_eval(self, y_arr)
        else:
            out = _wake_eval(self, y_arr)
        return complex(out) if y_arr.ndim == 0 else np.asarray(out)

    def q(self, y):
        """Coefficient q(y) in Psi_yy = q Psi."""
        U, _ = profile_eval(self.profile, y)
        return 1j * self.cfg.r ** 2 * self.cfg.chi * self.pair.k * (np.asarray(U) - self.pair.lambda_)

    def residual(self, y) -> np.ndarray:
        """Pointwise relative ODE residual |Psi'' - q Psi| / (|Psi''| + |q Psi|)
        with a 6th-order finite-difference Psi'' and a step scaled by |q|^(-1/2)."""
        y = np.asarray(y, dtype=float)
        q = self.q(y)
        h = D2_STEP / (1.0 + np.sqrt(np.abs(q)))
        d2 = second_derivative(self, y, h)
        psi = np.asarray(self(y))
        num = np.abs(d2 - q * psi)
        den = np.abs(d2) + np.abs(q * psi)
        floor = 1e-8 * np.max(den)
        return num / np.maximum(den, floor)

    def boundary_ratio(self, y_far: float | None = None, grid=None) -> float:
        """|Psi| at the inner boundary relative to max |Psi| on ``grid``.

        The inner boundary is y = 0 on the half line and y = -y_far on the
        real line (where the far-field value on both sides is taken).
        """
        if grid is None:
            grid = default_grid(self)
        vals = np.abs(np.asarray(self(grid)))
        peak = vals.max()
        if self.profile.domain.value == "half-line":
            return float(abs(self(0.0)) / peak)
        far = y_far if y_far is not None else float(np.max(np.abs(grid)))
        return float(max(abs(self(-far)), abs(self(far))) / peak)


def default_grid(mode: PsiMode, npts: int = 400) -> np.ndarray:
    """A grid covering the structure of ``mode``."""
    if mode.kind is PsiKind.AIRY:
        extent = abs(mode.shift) + 12.0 / abs(mode.scale)
        return np.linspace(0.0, 2.0 * extent, npts)
    if mode.kind is PsiKind.HERMITE:
        width = math.sqrt(2 * mode.order + 1) / abs(mode.scale)
        extent = max(abs(mode.shift), 0.0) + 8.0 * width / math.sqrt(max(math.cos(2 * cmath.phase(mode.scale)), 0.05))
        return np.linspace(0.0, extent, npts)
    w = mode.profile.w
    return np.linspace(-12.0 / w, 12.0 / w, npts)


# ---------------------------------------------------------------------------
# Airy modes


def airy_shift(pair: Eigenpair, b: float, c: float) -> complex:
    """Turning-point shift (lambda - c)/b of the Airy variable."""
    return (pair.lambda_ - c) / b


def airy_shift_printed(pair: Eigenpair, b: float, c: float, cfg: FlowConfig) -> complex:
    """The shift as printed, -i r^2 chi k (c - lambda)/b, kept for comparison."""
    return -1j * cfg.r ** 2 * cfg.chi * pair.k * (c - pair.lambda_) / b


def airy_mode(pair: Eigenpair, b: float, c: float, cfg: FlowConfig) -> PsiMode:
    if b == 0:
        raise DomainError("b must be nonzero")
    scale = (1j * cfg.r ** 2 * cfg.chi * pair.k * b) ** (1.0 / 3.0)
    return PsiMode(Linear(b, c), pair, cfg, PsiKind.AIRY, scale, airy_shift(pair, b, c))


def psi_linear(pair: Eigenpair, b: float, c: float, cfg: FlowConfig, y):
    """Psi_n(y) = Ai[(i r^2 chi k b)^(1/3) (y - (lambda - c)/b)], principal cube root."""
    if np.any(np.asarray(y) < 0):
        raise DomainError("psi_linear is defined for y >= 0")
    return airy_mode(pair, b, c, cfg)(y)


# ---------------------------------------------------------------------------
# Hermite modes


def hermite_scale(k: complex, a: float, cfg: FlowConfig) -> complex:
    """(i r^2 chi k a)^(1/4), principal branch, so Re(scale^2) >= 0."""
    return (1j * cfg.r ** 2 * cfg.chi * complex(k) * a) ** 0.25


def hermite_lambda(m: int, k: complex, a: float, b: float, c: float, cfg: FlowConfig) -> complex:
    """lambda for which exp(-eta^2/2) H_{2m+1}(eta) solves the quadratic-profile equation:
    lambda = a (4m + 3) / scale^2 - b^2/(4a) + c."""
    s2 = hermite_scale(k, a, cfg) ** 2
    return a * (4 * m + 3) / s2 - b * b / (4 * a) + c


def hermite_pair(m: int, k: complex, a: float, b: float, c: float, cfg: FlowConfig) -> Eigenpair:
    """Eigenpair at wavenumber k whose lambda makes the odd Hermite mode exact."""
    lam = hermite_lambda(m, k, a, b, c, cfg)
    return Eigenpair(n=m, k=complex(k), omega=frequency_from_lambda(k, lam, cfg.chi), lambda_=lam,
                     branch_note="hermite-exact-lambda")


def hermite_mode(m: int, pair: Eigenpair, a: float, b: float, cfg: FlowConfig, c: float = 0.0, *,
                 exponent: str = "derived", normalization: str | None = None) -> PsiMode:
    if a <= 0:
        raise DomainError("Hermite modes require a > 0")
    if m < 0:
        raise DomainError("m must be non-negative")
    if exponent not in ("derived", "printed"):
        raise DomainError(f"unknown exponent convention {exponent!r}")
    scale = hermite_scale(pair.k, a, cfg)
    return PsiMode(Quadratic(a, b, c), pair, cfg, PsiKind.HERMITE, scale, -b / (2 * a), order=2 * m + 1,
                   options={"exponent": exponent, "normalization": normalization})


def _hermite_eval(mode: PsiMode, y):
    eta = mode.scale * (y - mode.shift)
    n = mode.order
    with np.errstate(divide="ignore", invalid="ignore"):
        log_h = np.log(np.asarray(specfun.hermite(n, eta), dtype=complex))
    if mode.options.get("exponent", "derived") == "printed":
        # exp(-(i r^2 chi k)^(1/2) y^2) as printed
        rate = cmath.sqrt(1j * mode.cfg.r ** 2 * mode.cfg.chi * mode.pair.k)
        log_g = -rate * y ** 2
    else:
        log_g = -0.5 * eta ** 2
    with np.errstate(under="ignore", over="ignore", invalid="ignore"):
        out = np.exp(log_g + log_h)
    out = np.where(np.isneginf(log_h.real), 0.0, out)
    norm = mode.options.get("normalization")
    if norm is not None:
        out = out * specfun.hermite_norm(n, norm)
    if not np.all(np.isfinite(out)):
        raise OverflowError("Hermite mode overflows: the Gaussian factor grows along this ray")
    return out


def psi_quadratic(m: int, pair: Eigenpair, a: float, b: float, cfg: FlowConfig, y, *, c: float = 0.0,
                  exponent: str = "derived", normalization: str | None = None):
    """Odd Hermite mode exp(-eta^2/2) H_{2m+1}(eta), eta = (i r^2 chi k a)^(1/4) (y + b/2a).

    ``exponent="printed"`` replaces exp(-eta^2/2) with the reference
    exp(-(i r^2 chi k)^(1/2) y^2); ``normalization`` is None (unnormalized),
    "standard" or "printed".
    """
    if np.any(np.asarray(y) < 0):
        raise DomainError("psi_quadratic is defined for y >= 0")
    return hermite_mode(m, pair, a, b, cfg, c, exponent=exponent, normalization=normalization)(y)


# ---------------------------------------------------------------------------
# wake modes


def wake_mode(n: int, pair: Eigenpair, U0: float, w: float, cfg: FlowConfig, *, sigma: str = "derived") -> PsiMode:
    if sigma not in ("derived", "printed"):
        raise DomainError(f"unknown sigma convention {sigma!r}")
    S = wake_root(pair.k, U0, w, cfg)
    vartheta = S - (n + 0.5)
    c = 1 + vartheta
    if abs(c.imag) == 0 and c.real <= 0 and c.real == math.floor(c.real):
        raise DomainError("1 + vartheta is a non-positive integer: the 2F1 series has a pole")
    return PsiMode(Sech2(U0, w), pair, cfg, PsiKind.HYP2F1, vartheta, S, order=n, options={"sigma": sigma})


def _wake_eval(mode: PsiMode, y):
    w = mode.profile.w
    vartheta, S = mode.scale, mode.shift
    t = np.tanh(w * y)
    if mode.options.get("sigma", "derived") == "printed":
        sig = 1.0 - t
    else:
        sig = 0.5 * (1.0 - t)
    a1 = 0.5 + vartheta + S
    a2 = 0.5 + vartheta - S
    f = np.asarray(specfun.pfq((a1, a2), (1 + vartheta,), sig), dtype=complex)
    with np.errstate(under="ignore", over="ignore"):
        out = np.exp(-vartheta * _log_cosh(w * y)) * f
    if not np.all(np.isfinite(out)):
        raise OverflowError("wake mode overflows at this y")
    return out


def psi_wake(n: int, pair: Eigenpair, U0: float, w: float, cfg: FlowConfig, y, *, sigma: str = "derived"):
    """cosh^(-vartheta)(w y) 2F1(1/2 + vartheta + S, 1/2 + vartheta - S; 1 + vartheta; sigma(y)).

    S = sqrt(-i r^2 k chi U0 / w^2 + 1/4), vartheta = S - n - 1/2, and
    sigma = (1 - tanh(w y))/2; ``sigma="printed"`` uses 1 - tanh(w y).
    """
    return wake_mode(n, pair, U0, w, cfg, sigma=sigma)(y)


def make_mode(profile: MeanProfile, pair: Eigenpair, cfg: FlowConfig, m: int | None = None, **kw) -> PsiMode:
    """Build the closed-form mode matching ``profile``."""
    if isinstance(profile, Linear):
        return airy_mode(pair, profile.b, profile.c, cfg)
    if isinstance(profile, Quadratic):
        return hermite_mode(pair.n if m is None else m, pair, profile.a, profile.b, cfg, profile.c, **kw)
    return wake_mode(pair.n if m is None else m, pair, profile.U0, profile.w, cfg, **kw)
