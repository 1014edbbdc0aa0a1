"""Green's functions of d^2/dy^2 - r^2 k^2 with phi_y(0) = 0 (half line) or decay
at both ends (real line), and the quadrature phi(y) = integral of G Psi.

The kernels are kept exactly as
    half line:  G = cosh(a min(y, xi)) exp(-a max(y, xi)) / a
    real line:  G = exp(-a |y - xi|) / (2a)
with a = r k.  Both have derivative jump -1 at y = xi, so they invert
-(d^2/dy^2 - a^2).  ``synthesize_phi`` returns the solution of
phi_yy - r^2 k^2 phi = Psi, which is -integral(G Psi).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import DomainError, QuadratureError, TailError
from .meanflow import Domain
from .numerics import gauss_kronrod

JUMP_SIGN = -1.0
TAIL_RTOL = 1e-12
MAX_TAIL_CHUNKS = 4000
TAIL_GROWTH_CHUNKS = 8


@dataclass(frozen=True)
class GreensKernel:
    domain: Domain
    r: float
    k: complex

    def __post_init__(self):
        object.__setattr__(self, "domain", Domain(self.domain))
        object.__setattr__(self, "k", complex(self.k))
        if not self.r > 0:
            raise DomainError("r must be positive")
        if not self.k.real > 0:
            raise DomainError("Green's kernels need Re(k) > 0 for a decaying branch")

    @property
    def a(self) -> complex:
        return self.r * self.k

    @property
    def jump_sign(self) -> float:
        return JUMP_SIGN


def _check_domain(kern: GreensKernel, *arrs):
    if kern.domain is Domain.HALF_LINE:
        for v in arrs:
            if np.any(np.asarray(v) < 0):
                raise DomainError("half-line kernel needs y, xi >= 0")


def greens_eval(kern: GreensKernel, y, xi):
    """G(y, xi), written with non-positive exponents so it cannot overflow."""
    _check_domain(kern, y, xi)
    y = np.asarray(y, dtype=float)
    xi = np.asarray(xi, dtype=float)
    a = kern.a
    if kern.domain is Domain.REAL_LINE:
        out = np.exp(-a * np.abs(y - xi)) / (2 * a)
    else:
        lo, hi = np.minimum(y, xi), np.maximum(y, xi)
        out = 0.5 * (np.exp(a * (lo - hi)) + np.exp(-a * (lo + hi))) / a
    return complex(out) if out.ndim == 0 else out


def greens_dy(kern: GreensKernel, y, xi):
    """dG/dy off the diagonal; at y == xi the right-hand limit is returned."""
    _check_domain(kern, y, xi)
    y = np.asarray(y, dtype=float)
    xi = np.asarray(xi, dtype=float)
    a = kern.a
    above = y >= xi
    if kern.domain is Domain.REAL_LINE:
        out = np.where(above, -1.0, 1.0) * np.exp(-a * np.abs(y - xi)) / 2
    else:
        lo, hi = np.minimum(y, xi), np.maximum(y, xi)
        # y above xi: d/dy [cosh(a xi) e^{-a y}] ; below: d/dy [cosh(a y) e^{-a xi}]
        out = np.where(
            above,
            -0.5 * (np.exp(a * (lo - hi)) + np.exp(-a * (lo + hi))),
            0.5 * (np.exp(a * (lo - hi)) - np.exp(-a * (lo + hi))),
        )
    return complex(out) if out.ndim == 0 else out


def derivative_jump(kern: GreensKernel, xi) -> complex:
    """dG/dy(xi+, xi) - dG/dy(xi-, xi) from the one-sided analytic derivatives."""
    xi = np.asarray(xi, dtype=float)
    a = kern.a
    if kern.domain is Domain.REAL_LINE:
        right, left = -0.5 + 0 * xi, 0.5 + 0 * xi
    else:
        e = np.exp(-2 * a * xi)
        right = -0.5 * (1 + e)
        left = 0.5 * (1 - e)
    out = right - left
    return complex(out) if np.ndim(out) == 0 else out


@dataclass(frozen=True)
class GridFunction:
    """Complex samples on a strictly increasing real grid."""

    grid: np.ndarray
    values: np.ndarray
    errors: np.ndarray | None = None
    meta: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        g = np.asarray(self.grid, dtype=float)
        v = np.asarray(self.values, dtype=complex)
        if g.ndim != 1 or g.shape != v.shape:
            raise DomainError("grid and values must be 1-D arrays of equal length")
        if g.size > 1 and not np.all(np.diff(g) > 0):
            raise DomainError("grid must be strictly increasing")
        if not np.all(np.isfinite(v)):
            raise DomainError("GridFunction values must be finite")
        object.__setattr__(self, "grid", g)
        object.__setattr__(self, "values", v)
        if self.errors is not None:
            object.__setattr__(self, "errors", np.asarray(self.errors, dtype=float))

    def max_abs(self) -> float:
        return float(np.max(np.abs(self.values))) if self.values.size else 0.0


def _oscillation_width(psi, lo: float, hi: float) -> float | None:
    """A quarter of the shortest local wavelength 2 pi / |q|^(1/2) of a mode."""
    q = getattr(psi, "q", None)
    if q is None:
        return None
    ys = np.linspace(lo, hi, 65)
    qmax = float(np.max(np.abs(q(ys))))
    if qmax == 0:
        return None
    return 0.25 * 2 * math.pi / math.sqrt(qmax)


def _exp_weighted(psi, a, lo, hi, anchor, max_width, abstol, reltol):
    """integral over [lo, hi] of exp(-a |xi - anchor|) psi(xi), anchor at one end."""
    def f(xi):
        return np.exp(-a * np.abs(xi - anchor)) * np.asarray(psi(xi), dtype=complex)

    try:
        return gauss_kronrod(f, lo, hi, max_width=max_width, abstol=abstol, reltol=reltol)
    except QuadratureError as exc:
        raise QuadratureError(f"quadrature failed on [{lo:.6g}, {hi:.6g}]: {exc}", y=anchor) from exc


def _tail(psi, a, start, direction, width, max_width, abstol, reltol):
    """integral from ``start`` to +/- infinity of exp(-a |xi - start|) psi(xi).

    Chunks are added until the bound exp(-Re(a) d) max|psi| / Re(a) on the
    remainder drops below TAIL_RTOL times the running integral.
    """
    total, err = 0j, 0.0
    x = start
    ra = a.real
    prev, growing = math.inf, 0
    for _ in range(MAX_TAIL_CHUNKS):
        nxt = x + direction * width
        lo, hi = (x, nxt) if direction > 0 else (nxt, x)
        probe = np.linspace(lo, hi, 17)
        with np.errstate(over="ignore", invalid="ignore"):
            psi_max = float(np.max(np.abs(np.asarray(psi(probe)))))
        if not np.isfinite(psi_max):
            break
        v, e = _exp_weighted(psi, a, lo, hi, start, max_width, abstol, reltol)
        total += v
        err += e
        x = nxt
        bound = math.exp(-ra * abs(x - start)) * psi_max / ra
        if bound <= TAIL_RTOL * abs(total) or bound <= 1e-300 or (psi_max == 0 and abs(total) == 0):
            return total, err + bound
        growing = growing + 1 if bound >= prev else 0
        if growing >= TAIL_GROWTH_CHUNKS:
            break
        prev = bound
    raise TailError(f"integrand does not decay beyond y={start:.6g}: the mode is not admissible")


def synthesize_phi(
    kern: GreensKernel,
    psi: Callable,
    ygrid,
    *,
    max_width: float | None = None,
    abstol: float = 1e-12,
    reltol: float = 1e-10,
    meta: dict | None = None,
) -> GridFunction:
    """phi on ``ygrid`` solving phi_yy - r^2 k^2 phi = psi with the kernel's
    boundary conditions.

    The kink of G at xi = y falls on grid nodes: the integral is split into
    near and far parts that are propagated node to node with the decaying
    factor exp(-a h), so each grid cell is integrated once.  Panels are no
    wider than ``max_width``, or a quarter of the shortest local wavelength
    when ``psi`` exposes q(y).
    """
    y = np.asarray(ygrid, dtype=float)
    if y.ndim != 1 or y.size == 0:
        raise DomainError("ygrid must be a non-empty 1-D array")
    if y.size > 1 and not np.all(np.diff(y) > 0):
        raise DomainError("ygrid must be strictly increasing")
    _check_domain(kern, y)
    a = kern.a
    half = kern.domain is Domain.HALF_LINE
    span_lo = 0.0 if half else float(y[0])
    if max_width is None:
        max_width = _oscillation_width(psi, span_lo, float(y[-1]) + 1.0)
    decay_len = 1.0 / a.real
    chunk = max(4.0 * decay_len, 1.0)

    n = y.size
    left = np.zeros(n, dtype=complex)
    left_err = np.zeros(n)
    right = np.zeros(n, dtype=complex)
    right_err = np.zeros(n)

    # left part: integral from the lower end to y of exp(-a (y - xi)) psi
    if half:
        v, e = _exp_weighted(psi, a, 0.0, y[0], y[0], max_width, abstol, reltol)
    else:
        v, e = _tail(psi, a, y[0], -1, chunk, max_width, abstol, reltol)
    left[0], left_err[0] = v, e
    for j in range(1, n):
        h = y[j] - y[j - 1]
        damp = np.exp(-a * h)
        v, e = _exp_weighted(psi, a, y[j - 1], y[j], y[j], max_width, abstol, reltol)
        left[j] = damp * left[j - 1] + v
        left_err[j] = abs(damp) * left_err[j - 1] + e

    # right part: integral from y to infinity of exp(-a (xi - y)) psi
    v, e = _tail(psi, a, y[-1], +1, chunk, max_width, abstol, reltol)
    right[-1], right_err[-1] = v, e
    for j in range(n - 2, -1, -1):
        h = y[j + 1] - y[j]
        damp = np.exp(-a * h)
        v, e = _exp_weighted(psi, a, y[j], y[j + 1], y[j], max_width, abstol, reltol)
        right[j] = damp * right[j + 1] + v
        right_err[j] = abs(damp) * right_err[j + 1] + e

    total = left + right
    err = left_err + right_err
    if half:
        # image term exp(-a (y + xi)) from the cosh factor
        m0, me = _exp_weighted(psi, a, 0.0, y[0], 0.0, max_width, abstol, reltol)
        mirror = m0 + np.exp(-a * y[0]) * right[0]
        mirror_err = me + abs(np.exp(-a * y[0])) * right_err[0]
        img = np.exp(-a * y)
        total = total + img * mirror
        err = err + np.abs(img) * mirror_err
    values = JUMP_SIGN * total / (2 * a)
    errors = err / abs(2 * a)
    info = {"domain": kern.domain.value, "r": kern.r, "k": kern.k}
    if meta:
        info.update(meta)
    return GridFunction(y, values, errors, info)
