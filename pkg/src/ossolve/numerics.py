"""Shared numerical kernels: adaptive Gauss-Kronrod quadrature for complex
integrands, finite-difference derivative stencils, and damped complex Newton.
"""

from __future__ import annotations

import math
from typing import Callable, Sequence

import numpy as np

from .errors import NoConvergence, QuadratureError

_EPS = np.finfo(float).eps

# 15-point Kronrod nodes on [-1, 1] (non-negative half) and weights; the
# Gauss 7-point rule uses the odd-indexed nodes.
_XK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
_WK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])
_NODES = np.concatenate([-_XK[:-1], _XK[::-1]])
_KW = np.concatenate([_WK[:-1], _WK[::-1]])
_GW = np.zeros(15)
_GW[1:7:2] = _WG[:3]
_GW[7] = _WG[3]
_GW[9:15:2] = _WG[2::-1]


def _panel_rules(f, left, right):
    half = 0.5 * (right - left)
    mid = 0.5 * (right + left)
    x = mid[:, None] + half[:, None] * _NODES[None, :]
    fx = np.asarray(f(x.ravel()), dtype=complex).reshape(x.shape)
    if not np.all(np.isfinite(fx)):
        bad = x[~np.isfinite(fx)].ravel()[0]
        raise QuadratureError(f"integrand is not finite at {bad!r}", y=bad)
    k = half * (fx @ _KW)
    g = half * (fx @ _GW)
    return k, np.abs(k - g)


def gauss_kronrod(
    f: Callable[[np.ndarray], np.ndarray],
    a: float,
    b: float,
    *,
    breakpoints: Sequence[float] = (),
    max_width: float | None = None,
    abstol: float = 1e-12,
    reltol: float = 1e-10,
    max_panels: int = 20_000,
) -> tuple[complex, float]:
    """Adaptive 7/15-point Gauss-Kronrod quadrature of a complex integrand.

    ``f`` receives a 1-D array of abscissae and returns values of the same
    shape.  The interval is first split at ``breakpoints`` and into panels no
    wider than ``max_width``; a panel is bisected while its error estimate
    exceeds its share (by width) of the global tolerance.

    Returns:
        (integral, error estimate).

    Raises:
        QuadratureError: the panel budget is exhausted or ``f`` is not finite.
    """
    if a == b:
        return 0j, 0.0
    sign = 1.0
    if b < a:
        a, b, sign = b, a, -1.0
    edges = sorted({a, b, *[p for p in breakpoints if a < p < b]})
    if max_width is not None and max_width > 0:
        refined = [edges[0]]
        for lo, hi in zip(edges[:-1], edges[1:]):
            m = max(1, int(math.ceil((hi - lo) / max_width)))
            refined.extend(np.linspace(lo, hi, m + 1)[1:].tolist())
        edges = refined
    left = np.array(edges[:-1], dtype=float)
    right = np.array(edges[1:], dtype=float)
    length = b - a
    done_val = 0j
    done_err = 0.0
    total_panels = left.size
    while left.size:
        k, e = _panel_rules(f, left, right)
        estimate = done_val + k.sum()
        tol = max(abstol, reltol * abs(estimate))
        ok = e <= tol * (right - left) / length
        # panels at floating-point resolution cannot be split further
        ok |= (right - left) <= 64 * _EPS * max(abs(a), abs(b), 1.0)
        done_val += k[ok].sum()
        done_err += e[ok].sum()
        left, right = left[~ok], right[~ok]
        if not left.size:
            break
        total_panels += left.size
        if total_panels > max_panels:
            raise QuadratureError(
                f"adaptive quadrature exceeded {max_panels} panels near y={left[0]:.6g}", y=float(left[0])
            )
        mid = 0.5 * (left + right)
        left, right = np.concatenate([left, mid]), np.concatenate([mid, right])
    return sign * done_val, done_err


def sqrt_endpoint_integral(g: Callable[[np.ndarray], np.ndarray], t1: complex, t2: complex, **kw):
    """Integral of g(y) along the straight path t1 -> t2 when g vanishes like a
    square root at both ends; the cosine substitution removes the singularity."""
    t1, t2 = complex(t1), complex(t2)
    half = 0.5 * (t2 - t1)
    mid = 0.5 * (t2 + t1)

    def integrand(theta):
        return g(mid - half * np.cos(theta)) * half * np.sin(theta)

    return gauss_kronrod(integrand, 0.0, math.pi, **kw)


# ---------------------------------------------------------------------------
# finite differences

_D2_STENCIL = np.array([1 / 90, -3 / 20, 3 / 2, -49 / 18, 3 / 2, -3 / 20, 1 / 90])
_D4_STENCIL = np.array([7 / 240, -2 / 5, 169 / 60, -122 / 15, 91 / 8, -122 / 15, 169 / 60, -2 / 5, 7 / 240])
_D1_STENCIL = np.array([-1 / 60, 3 / 20, -3 / 4, 0.0, 3 / 4, -3 / 20, 1 / 60])

D2_STEP = _EPS ** (1 / 8)
D4_STEP = _EPS ** (1 / 10)
D1_STEP = _EPS ** (1 / 7)


def _apply(f, x, stencil, h, order):
    x = np.asarray(x, dtype=float)
    h = np.broadcast_to(np.asarray(h, dtype=float), x.shape)
    m = (len(stencil) - 1) // 2
    acc = 0j
    for j, c in enumerate(stencil):
        if c != 0.0:
            acc = acc + c * np.asarray(f(x + (j - m) * h), dtype=complex)
    return acc / h ** order


def first_derivative(f, x, h=None):
    """6th-order central first derivative (7 points)."""
    return _apply(f, x, _D1_STENCIL, D1_STEP if h is None else h, 1)


def second_derivative(f, x, h=None):
    """6th-order central second derivative (7 points).

    The default step eps**(1/8) balances O(h^6) truncation against
    O(eps/h^2) rounding; pass ``h`` (scalar or per point) to rescale it to
    the local length scale of ``f``.
    """
    return _apply(f, x, _D2_STENCIL, D2_STEP if h is None else h, 2)


def fourth_derivative(f, x, h=None):
    """6th-order central fourth derivative (9 points), default step eps**(1/10)."""
    return _apply(f, x, _D4_STENCIL, D4_STEP if h is None else h, 4)


def local_step(base: float, q) -> np.ndarray:
    """Step ``base`` shrunk where the local wavenumber |q|**(1/2) is large."""
    return base / (1.0 + np.sqrt(np.abs(np.asarray(q))))


# ---------------------------------------------------------------------------
# Newton


def damped_newton(
    F: Callable[[complex], complex],
    dF: Callable[[complex], complex],
    x0: complex,
    *,
    tol: Callable[[complex], float],
    max_iter: int = 100,
    max_halvings: int = 20,
) -> tuple[complex, complex, int]:
    """Complex Newton iteration with step halving.

    Stops when |F(x)| <= tol(x).  A step is halved (up to ``max_halvings``
    times) until |F| decreases.

    Returns:
        (root, F(root), iterations).

    Raises:
        NoConvergence: carrying the last iterate and residual.
    """
    x = complex(x0)
    fx = complex(F(x))
    for it in range(max_iter):
        if abs(fx) <= tol(x):
            return x, fx, it
        d = complex(dF(x))
        if d == 0 or not np.isfinite(d):
            raise NoConvergence("Newton derivative vanished", last=x, residual=abs(fx))
        step = fx / d
        for _ in range(max_halvings + 1):
            trial = x - step
            ft = complex(F(trial))
            if np.isfinite(ft) and abs(ft) < abs(fx):
                break
            step *= 0.5
        else:
            raise NoConvergence("Newton step halving failed to reduce the residual", last=x, residual=abs(fx))
        x, fx = trial, ft
    if abs(fx) <= tol(x):
        return x, fx, max_iter
    raise NoConvergence(f"Newton did not converge in {max_iter} iterations", last=x, residual=abs(fx))
