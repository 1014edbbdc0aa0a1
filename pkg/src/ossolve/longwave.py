"""Long-wave limit (r -> 0+) of the reduced fourth-order equation
    phi_yyyy - [2 r^2 k^2 + i r^2 chi k (U - omega/k)] phi_yy = 0
on y >= 0, solved with generalized hypergeometric functions, plus the
antiderivative identities those solutions rest on.
"""

from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass

import numpy as np

from . import specfun
from .errors import DomainError, NoConvergence, NoRootFound, QuadratureError
from .meanflow import FlowConfig
from .numerics import damped_newton, fourth_derivative, gauss_kronrod, second_derivative
from .shortwave import Eigenpair

_SQRT3 = math.sqrt(3.0)
MAX_CENTER_OFFSET = 1e6
ROOT_TOL = 1e-10


class LongWaveCase(str, enum.Enum):
    LINEAR = "linear"
    QUADRATIC_SMALL_DELTA = "quadratic-small-delta"


# ---------------------------------------------------------------------------
# linear profile


def longwave_lambda(k: complex, omega: complex, b: float, c: float, cfg: FlowConfig) -> complex:
    """lambda = [omega/k - c - 2k/(i chi)] / b."""
    k = complex(k)
    if b == 0:
        raise DomainError("b must be nonzero")
    return (omega / k - c - 2 * k / (1j * cfg.chi)) / b


def longwave_omega(k: complex, lam: complex, b: float, c: float, cfg: FlowConfig) -> complex:
    """Invert :func:`longwave_lambda`."""
    k = complex(k)
    return k * (b * lam + c + 2 * k / (1j * cfg.chi))


def _airy_rate(k, b, cfg):
    return 1j * cfg.r ** 2 * cfg.chi * complex(k) * b


def longwave_linear_phi(pair: Eigenpair, b: float, cfg: FlowConfig, y, *, c: float = 0.0):
    """phi(y) = (y - lambda)^2 1F2(1/3; 4/3, 5/3; i r^2 chi k b (y - lambda)^3 / 9)
    with lambda = [omega/k - c - 2k/(i chi)]/b taken from the pair's (k, omega)."""
    if np.any(np.asarray(y) < 0):
        raise DomainError("long-wave solutions are defined for y >= 0")
    lam = longwave_lambda(pair.k, pair.omega, b, c, cfg)
    x = np.asarray(y, dtype=float) - lam
    out = x * x * np.asarray(specfun.pfq((1 / 3,), (4 / 3, 5 / 3), _airy_rate(pair.k, b, cfg) * x ** 3 / 9))
    return complex(out) if np.ndim(y) == 0 else out


def longwave_linear_phi_y(pair: Eigenpair, b: float, cfg: FlowConfig, y, *, c: float = 0.0):
    """phi_y = 2 (y - lambda) 1F2(1/3; 2/3, 4/3; s (y - lambda)^3 / 9), s = i r^2 chi k b."""
    lam = longwave_lambda(pair.k, pair.omega, b, c, cfg)
    x = np.asarray(y, dtype=float) - lam
    out = 2 * x * np.asarray(specfun.pfq((1 / 3,), (2 / 3, 4 / 3), _airy_rate(pair.k, b, cfg) * x ** 3 / 9))
    return complex(out) if np.ndim(y) == 0 else out


def longwave_linear_residual(pair: Eigenpair, b: float, cfg: FlowConfig, y, *, c: float = 0.0) -> np.ndarray:
    """Relative residual of phi_yyyy - [2 r^2 k^2 + i r^2 chi k (b y + c - omega/k)] phi_yy
    from finite differences scaled to the Airy length |s|^(-1/3)."""
    y = np.asarray(y, dtype=float)
    k = complex(pair.k)
    coef = 2 * cfg.r ** 2 * k * k + 1j * cfg.r ** 2 * cfg.chi * k * (b * y + c - pair.omega / k)
    ell = min(1.0, abs(_airy_rate(k, b, cfg)) ** (-1.0 / 3.0))

    def f(t):
        return longwave_linear_phi(pair, b, cfg, t, c=c)

    d4 = fourth_derivative(f, y, 6.0e-2 * ell)
    d2 = second_derivative(f, y, 1.0e-2 * ell)
    num = np.abs(d4 - coef * d2)
    den = np.abs(d4) + np.abs(coef * d2)
    return num / np.maximum(den, 1e-8 * np.max(den))


def _f1_airy(t):
    """0F1(; 2/3; t^3/9) = (Ai(t) + Bi(t)/sqrt(3)) / (2 Ai(0))."""
    ai, _, bi, _ = specfun.airy(t)
    return (ai + bi / _SQRT3) / (2 * specfun.AI0)


def _bounded_cube_root(w):
    """The cube root of 9w closest to the negative real axis, where Ai and Bi
    stay bounded; f(w) does not depend on which root is taken."""
    w = np.asarray(w, dtype=complex)
    x0 = (9 * w) ** (1.0 / 3.0)
    cands = np.stack([x0 * cmath.exp(2j * math.pi * j / 3) for j in range(3)])
    pick = np.argmax(np.abs(np.angle(cands)), axis=0)
    return np.take_along_axis(cands, pick[None, ...], axis=0)[0]


_GL_X, _GL_W = np.polynomial.legendre.leggauss(24)


def _airy_route(w: np.ndarray, deriv: bool) -> np.ndarray:
    """f(w) = integral over s in [0, 1] of 0F1(; 2/3; (x s)^3 / 9), x^3 = 9w, by
    composite Gauss-Legendre with panels scaled to the oscillation count;
    with ``deriv`` returns f'(w) = 3 (f1(x)/x - f/x) / x^2 instead."""
    x = _bounded_cube_root(w)
    panels = np.maximum(4, np.ceil(np.abs(x) ** 1.5 / 3)).astype(int)
    nodes, weights, owner = [], [], []
    for i, (xi, m) in enumerate(zip(x, panels)):
        edges = np.linspace(0.0, 1.0, m + 1)
        half = 0.5 * np.diff(edges)
        mid = 0.5 * (edges[1:] + edges[:-1])
        s = (mid[:, None] + half[:, None] * _GL_X[None, :]).ravel()
        nodes.append(xi * s)
        weights.append((half[:, None] * _GL_W[None, :]).ravel())
        owner.append(np.full(s.size, i))
    nodes = np.concatenate(nodes)
    vals = _f1_airy(nodes) * np.concatenate(weights)
    f = np.bincount(np.concatenate(owner), weights=vals.real, minlength=x.size) \
        + 1j * np.bincount(np.concatenate(owner), weights=vals.imag, minlength=x.size)
    if not deriv:
        return f
    return 3 * (_f1_airy(x) / x - f / x) / x ** 2


def _series_or_airy(upper, lower, w, deriv: bool, rtol: float):
    w = np.asarray(w, dtype=complex)
    flat = w.ravel()
    val, err = specfun.pfq(upper, lower, flat, return_error=True)
    val = np.asarray(val, dtype=complex).reshape(flat.shape)
    err = np.asarray(err, dtype=float).reshape(flat.shape)
    if deriv:
        val = 0.375 * val
        err = 0.375 * err
    bad = err > rtol * np.maximum(1.0, np.abs(val))
    if bad.any():
        val[bad] = _airy_route(flat[bad], deriv)
    out = val.reshape(w.shape)
    return complex(out) if out.ndim == 0 else out


def _dispersion_function(w, rtol: float = 1e-14):
    """f(w) = 1F2(1/3; 2/3, 4/3; w), switching from the series to an Airy
    integral where the series loses digits to cancellation."""
    return _series_or_airy((1 / 3,), (2 / 3, 4 / 3), w, False, rtol)


def _dispersion_derivative(w, rtol: float = 1e-14):
    """f'(w) = (1/3)/(2/3 * 4/3) 1F2(4/3; 5/3, 7/3; w), or from the Airy form."""
    return _series_or_airy((4 / 3,), (5 / 3, 7 / 3), w, True, rtol)


def dispersion_zero_count(W: float, npts: int = 2048) -> int:
    """Zeros of 1F2(1/3; 2/3, 4/3; w) in |w| < W by the argument principle."""
    th = np.linspace(0.0, 2 * math.pi, npts, endpoint=False)
    # the phase only needs a few correct digits
    vals = _dispersion_function(W * np.exp(1j * th), rtol=1e-3)
    ph = np.unwrap(np.angle(np.append(vals, vals[0])))
    return int(round((ph[-1] - ph[0]) / (2 * math.pi)))


def _modulus_scan(radius: float, n_rad: int = 48, n_ang: int = 48) -> list[complex]:
    """Local minima of |f| on a polar grid over the closed upper half disc."""
    rho = np.linspace(radius / n_rad, radius, n_rad)
    th = np.linspace(0.0, math.pi, n_ang)
    W = rho[:, None] * np.exp(1j * th[None, :])
    A = np.abs(np.asarray(specfun.pfq((1 / 3,), (2 / 3, 4 / 3), W)))
    seeds = []
    for i in range(1, n_rad - 1):
        for j in range(1, n_ang - 1):
            if A[i, j] <= A[i - 1:i + 2, j - 1:j + 2].min():
                seeds.append((A[i, j], complex(W[i, j])))
    return [w for _, w in sorted(seeds, key=lambda t: t[0])]


def _guarded(fn):
    def g(w):
        try:
            return complex(fn(complex(w)))
        except QuadratureError:
            # far-off trial step; a non-finite value makes Newton halve it
            return complex("nan")

    return g


def _polish(seed: complex) -> complex:
    try:
        w, _, _ = damped_newton(_guarded(_dispersion_function), _guarded(_dispersion_derivative), seed,
                                tol=lambda _x: 1e-13)
    except NoConvergence as exc:
        raise NoRootFound(f"Newton failed near w={seed:.6g}: {exc}") from exc
    return complex(w)


def dispersion_zeros(count: int, *, w_max: float = 5000.0) -> list[complex]:
    """The first ``count`` zeros of 1F2(1/3; 2/3, 4/3; w) with Im(w) > 0,
    ordered by modulus.  Zeros come in conjugate pairs off the negative real
    axis; the conjugates are the remaining zeros.

    The first two come from a modulus scan of the disc |w| <= 60 and the
    rest from quadratic extrapolation in the index, each polished by Newton.
    Each new zero is checked against an argument-principle count, so no zero
    is skipped.
    """
    if count < 1:
        return []
    roots: list[complex] = []
    for seed in _modulus_scan(45.0)[:8]:
        w = _polish(seed)
        if w.imag > 0 and all(abs(w - v) > 1e-8 * abs(w) for v in roots):
            roots.append(w)
    roots.sort(key=abs)
    roots = roots[:2]
    if len(roots) < min(count, 2):
        raise NoRootFound("modulus scan found fewer than two zeros in |w| <= 60")
    while len(roots) < count:
        if len(roots) >= 3:
            seed = 3 * roots[-1] - 3 * roots[-2] + roots[-3]
        else:
            seed = 2 * roots[-1] - roots[-2]
        w = _polish(seed)
        if abs(w) > w_max:
            raise NoRootFound(f"only {len(roots)} zeros found in |w| <= {w_max:g}")
        roots.append(w)
    for j, w in enumerate(roots):
        if w.imag <= 0 or (j and abs(w) <= abs(roots[j - 1])):
            raise NoRootFound("zero ordering check failed")
    if len(roots) > 1:
        outer = 0.5 * (abs(roots[-1]) + abs(roots[-2])) if count > 1 else 2 * abs(roots[0])
        if dispersion_zero_count(outer) != 2 * (len(roots) - 1):
            raise NoRootFound("argument-principle count disagrees with the zeros found")
    return roots


def longwave_linear_dispersion(n: int, b: float, cfg: FlowConfig, *, k: complex = 1.0, c: float = 0.0,
                               root: int = 0) -> Eigenpair:
    """Eigenpair at wavenumber k from the n-th zero w_n (n >= 1) of
    1F2(1/3; 2/3, 4/3; w), with w = -i r^2 chi k b lambda^3 / 9.

    lambda is the cube root of -9 w_n / (i r^2 chi k b) selected by ``root``
    (0 = principal, 1 and 2 rotate by exp(2 pi i/3)); omega follows from the
    definition of lambda.
    """
    if n < 1:
        raise DomainError("dispersion zeros are indexed from n = 1")
    if b == 0:
        raise DomainError("b must be nonzero")
    w = dispersion_zeros(n)[n - 1]
    s = _airy_rate(k, b, cfg)
    lam = (-9 * w / s) ** (1.0 / 3.0) * cmath.exp(2j * math.pi * root / 3)
    omega = longwave_omega(k, lam, b, c, cfg)
    residual = abs(_dispersion_function(-s * lam ** 3 / 9))
    return Eigenpair(n=n, k=complex(k), omega=omega, lambda_=lam, residual=residual,
                     branch_note=f"w={w.real:.17g}{w.imag:+.17g}j;cube_root={root}")


def longwave_dispersion_residual(pair: Eigenpair, b: float, cfg: FlowConfig, c: float = 0.0) -> float:
    """|1F2(1/3; 2/3, 4/3; -i r^2 chi k b lambda^3 / 9)| recomposed from (k, omega)."""
    lam = longwave_lambda(pair.k, pair.omega, b, c, cfg)
    return abs(_dispersion_function(-_airy_rate(pair.k, b, cfg) * lam ** 3 / 9))


def longwave_linear_decay(pair: Eigenpair, b: float, cfg: FlowConfig, y_far: float, *, c: float = 0.0) -> float:
    """|phi(y_far)| / |phi(0)|, reported rather than enforced."""
    return abs(longwave_linear_phi(pair, b, cfg, y_far, c=c)) / max(abs(longwave_linear_phi(pair, b, cfg, 0.0, c=c)), 1e-300)


# ---------------------------------------------------------------------------
# quadratic profile with small curvature


def _center(b: float, delta: float) -> float:
    if delta == 0:
        raise DomainError("delta must be nonzero")
    off = b / (2 * delta)
    if abs(off) > MAX_CENTER_OFFSET:
        raise DomainError(f"|b/(2 delta)| = {abs(off):.3g} exceeds {MAX_CENTER_OFFSET:g}")
    return -off


def longwave_hermite_scale(k: complex, delta: float, cfg: FlowConfig) -> complex:
    """(i R k delta)^(1/4), principal branch."""
    return (1j * cfg.R * complex(k) * delta) ** 0.25


def longwave_quadratic_lambda(k: complex, omega: complex, delta: float, b: float, c: float, cfg: FlowConfig) -> complex:
    """Hermite spectral parameter scale^2 [omega/k + b^2/(4 delta) - c - 2k/(i chi)] / delta."""
    k = complex(k)
    s2 = longwave_hermite_scale(k, delta, cfg) ** 2
    return s2 * (omega / k + b * b / (4 * delta) - c - 2 * k / (1j * cfg.chi)) / delta


def longwave_quadratic_pair(m: int, k: complex, delta: float, b: float, c: float, cfg: FlowConfig) -> Eigenpair:
    """Pair whose spectral parameter is 4m + 1, so the even Hermite mode of
    order 2m is an exact solution of the reduced equation."""
    k = complex(k)
    s2 = longwave_hermite_scale(k, delta, cfg) ** 2
    bracket = (4 * m + 1) * delta / s2
    omega = k * (bracket - b * b / (4 * delta) + c + 2 * k / (1j * cfg.chi))
    return Eigenpair(n=m, k=k, omega=omega, lambda_=4 * m + 1 + 0j, branch_note="hermite-exact-lambda")


def longwave_quadratic_k_printed(m: int, R: float) -> complex:
    """k_m ~ (sqrt(3) + i)/2 (R/4)^(1/3) (2m + 1/4)^(2/3), the uncorrected closed form."""
    return (_SQRT3 + 1j) / 2 * (R / 4) ** (1.0 / 3.0) * (2 * m + 0.25) ** (2.0 / 3.0)


def delta_admissible(delta: float, k: complex, cfg: FlowConfig, factor: float = 0.1) -> bool:
    """|delta| <= factor * r^2 chi |k|, the regime where U_yy = 2 delta is subdominant."""
    return abs(delta) <= factor * cfg.r ** 2 * cfg.chi * abs(complex(k))


@dataclass(frozen=True)
class LongWaveMode:
    case: LongWaveCase
    pair: Eigenpair
    cfg: FlowConfig
    coeffs: tuple
    order: int = 0
    exponent: str = "derived"
    normalization: str | None = "printed"

    def __post_init__(self):
        if self.case is LongWaveCase.QUADRATIC_SMALL_DELTA:
            delta, b, _ = self.coeffs
            _center(b, delta)
            if not delta_admissible(delta, self.pair.k, self.cfg):
                raise DomainError("delta is too large for the small-curvature reduction")

    def __call__(self, y):
        if self.case is LongWaveCase.LINEAR:
            b, c = self.coeffs
            return longwave_linear_phi(self.pair, b, self.cfg, y, c=c)
        delta, b, c = self.coeffs
        return _quadratic_psi(self, y)

    def q(self, y):
        """Coefficient of Psi_yy = q Psi for the quadratic mode."""
        delta, b, c = self.coeffs
        k = complex(self.pair.k)
        y = np.asarray(y, dtype=float)
        U = (delta * y + b) * y + c
        return 2 * self.cfg.r ** 2 * k * k + 1j * self.cfg.R * k * (U - self.pair.omega / k)

    def residual(self, y) -> np.ndarray:
        y = np.asarray(y, dtype=float)
        q = self.q(y)
        h = 6.0e-3 / (1.0 + np.sqrt(np.abs(q)))
        d2 = second_derivative(self, y, h)
        psi = np.asarray(self(y))
        num = np.abs(d2 - q * psi)
        den = np.abs(d2) + np.abs(q * psi)
        return num / np.maximum(den, 1e-8 * np.max(den))


def _quadratic_psi(mode: LongWaveMode, y):
    delta, b, _ = mode.coeffs
    x = np.asarray(y, dtype=float) - _center(b, delta)
    n = mode.order
    if mode.exponent == "printed":
        # exp(-(i R k)^(1/2) x^2) H_n((i R k)^(1/4) x), uncorrected scale
        s = (1j * mode.cfg.R * complex(mode.pair.k)) ** 0.25
        eta = s * x
        log_g = -(s * s) * x * x
    else:
        s = longwave_hermite_scale(mode.pair.k, delta, mode.cfg)
        eta = s * x
        log_g = -0.5 * eta * eta
    with np.errstate(divide="ignore", under="ignore", over="ignore", invalid="ignore"):
        h = np.asarray(specfun.hermite(n, eta), dtype=complex)
        out = np.exp(log_g) * h
    if mode.normalization == "printed":
        out = out / (math.sqrt(2 ** (n // 2) * 2) * math.pi ** 0.25)
    elif mode.normalization == "standard":
        out = out * specfun.hermite_norm(n, "standard")
    if not np.all(np.isfinite(out)):
        raise OverflowError("long-wave Hermite mode overflows on this grid")
    return complex(out) if np.ndim(y) == 0 else out


def longwave_quadratic_mode(m: int, pair: Eigenpair, delta: float, b: float, cfg: FlowConfig, *, c: float = 0.0,
                            exponent: str = "derived", normalization: str | None = "printed") -> LongWaveMode:
    if m < 0:
        raise DomainError("m must be non-negative")
    if exponent not in ("derived", "printed"):
        raise DomainError(f"unknown exponent convention {exponent!r}")
    return LongWaveMode(LongWaveCase.QUADRATIC_SMALL_DELTA, pair, cfg, (delta, b, c), order=2 * m,
                        exponent=exponent, normalization=normalization)


def longwave_quadratic_psi(m: int, pair: Eigenpair, delta: float, b: float, cfg: FlowConfig, y, *, c: float = 0.0,
                           exponent: str = "derived", normalization: str | None = "printed"):
    """Even Hermite mode exp(-eta^2/2) H_{2m}(eta), eta = (i R k delta)^(1/4) (y + b/(2 delta)),
    times 1/(sqrt(2^m 2) pi^(1/4)) by default."""
    if np.any(np.asarray(y) < 0):
        raise DomainError("long-wave solutions are defined for y >= 0")
    return longwave_quadratic_mode(m, pair, delta, b, cfg, c=c, exponent=exponent, normalization=normalization)(y)


def gaussian_psi0(x, gamma: complex):
    """exp(-gamma x^2) / (2 pi^(1/4)), the m = 0 mode as a function of x = y + b/(2 delta)."""
    return np.exp(-gamma * np.asarray(x) ** 2) / (2 * math.pi ** 0.25)


def gaussian_phi0_y(x, gamma: complex):
    """Antiderivative of :func:`gaussian_psi0` vanishing at x = 0:
    x / (2 pi^(1/4)) 1F1(1/2; 3/2; -gamma x^2)."""
    x = np.asarray(x, dtype=float)
    return x / (2 * math.pi ** 0.25) * np.asarray(specfun.pfq((0.5,), (1.5,), -gamma * x * x))


def gaussian_phi0(x, gamma: complex):
    """Antiderivative of :func:`gaussian_phi0_y` vanishing at x = 0:
    x^2 / (4 pi^(1/4)) 2F2(1/2, 1; 3/2, 2; -gamma x^2)."""
    x = np.asarray(x, dtype=float)
    return x * x / (4 * math.pi ** 0.25) * np.asarray(specfun.pfq((0.5, 1.0), (1.5, 2.0), -gamma * x * x))


# ---------------------------------------------------------------------------
# antiderivative identities


class Identity(str, enum.Enum):
    C1 = "C1"
    C2 = "C2"
    C3 = "C3"


def _integrand(identity: Identity, scale: complex):
    if identity is Identity.C1:
        return lambda t: np.asarray(specfun.pfq((), (2 / 3,), scale * t ** 3 / 9))
    if identity is Identity.C2:
        return lambda t: t * np.asarray(specfun.pfq((), (4 / 3,), scale * t ** 3 / 9))
    return lambda t: t * np.asarray(specfun.pfq((0.5,), (1.5,), scale * t ** 2))


def identity_rhs(identity, y: float, scale: complex, *, printed: bool = False) -> complex:
    """Closed-form right side.  ``printed=True`` gives the uncorrected C1 form,
    y^2 1F2(...), which lacks the factor 1/2."""
    identity = Identity(identity)
    if identity is Identity.C1:
        pre = 1.0 if printed else 0.5
        return pre * y * y * complex(specfun.pfq((1 / 3,), (4 / 3, 5 / 3), scale * y ** 3 / 9))
    if identity is Identity.C2:
        return y ** 3 / 6 * complex(specfun.pfq((2 / 3, 1.0), (4 / 3, 5 / 3, 2.0), scale * y ** 3 / 9))
    return y * y / 2 * complex(specfun.pfq((0.5, 1.0), (1.5, 2.0), scale * y * y))


def identity_lhs(identity, y: float, scale: complex, *, abstol: float = 1e-14, reltol: float = 1e-12) -> complex:
    """Left side by nested adaptive quadrature with zero integration constants:
    a double integral from 0 for C1 and C2, a single one for C3."""
    identity = Identity(identity)
    f = _integrand(identity, scale)
    if y == 0:
        return 0j
    if identity is Identity.C3:
        return gauss_kronrod(f, 0.0, y, abstol=abstol, reltol=reltol)[0]

    def inner(u):
        return np.array([gauss_kronrod(f, 0.0, float(ui), abstol=abstol, reltol=reltol)[0] for ui in np.ravel(u)])

    return gauss_kronrod(inner, 0.0, y, abstol=abstol, reltol=reltol)[0]


def verify_appendixC(identity, y: float, scale: complex, *, printed: bool = False) -> float:
    """Relative residual |lhs - rhs| / max(|rhs|, tiny); 0 when both vanish."""
    lhs = identity_lhs(identity, y, scale)
    rhs = identity_rhs(identity, y, scale, printed=printed)
    if lhs == 0 and rhs == 0:
        return 0.0
    return abs(lhs - rhs) / max(abs(rhs), 1e-300)
