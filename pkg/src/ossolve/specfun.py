"""Special functions of complex argument.

Gamma (Lanczos), Pochhammer symbols, the generalized hypergeometric series
pFq with a transformation path for 2F1, Airy functions, and Hermite
polynomials.  ``oracle_pfq`` re-sums the same series in extended precision
and exists to check ``pfq`` in tests.

Array arguments are accepted by ``pfq``, the Airy functions and ``hermite``;
``gamma`` and ``pochhammer`` are scalar.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
import numpy as np

from .errors import ConvergenceError, DomainError, PoleError, PrecisionError

# Lanczos approximation, g = 7, nine coefficients.
_LANCZOS_G = 7.0
_LANCZOS_COEF = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)
_HALF_LOG_2PI = 0.5 * math.log(2.0 * math.pi)

PFQ_TOL = 1e-16
_HYP2F1_MAX_RADIUS = 0.9
PFQ_MAX_TERMS = 10_000
_PFQ_GUARD = 3


def _is_nonpositive_integer(z: complex) -> bool:
    z = complex(z)
    return z.imag == 0.0 and z.real <= 0.0 and z.real == math.floor(z.real)


def _loggamma_right(z: complex) -> complex:
    # valid for Re(z) >= 0.5
    z = z - 1.0
    acc = _LANCZOS_COEF[0]
    for i in range(1, len(_LANCZOS_COEF)):
        acc += _LANCZOS_COEF[i] / (z + i)
    t = z + _LANCZOS_G + 0.5
    return _HALF_LOG_2PI + (z + 0.5) * cmath.log(t) - t + cmath.log(acc)


def loggamma(z: complex) -> complex:
    """Logarithm of Gamma on the branch continuous from the positive axis
    (imaginary part not reduced mod 2*pi)."""
    z = complex(z)
    if _is_nonpositive_integer(z):
        raise PoleError(f"Gamma has a pole at z={z.real:g}")
    if z.real < 0.5:
        return cmath.log(math.pi) - cmath.log(cmath.sin(math.pi * z)) - _loggamma_right(1.0 - z)
    return _loggamma_right(z)


def gamma(z: complex) -> complex:
    """Gamma function for complex ``z``; reflection is used for Re(z) < 0.5.

    Raises:
        PoleError: if ``z`` is zero or a negative integer.
    """
    z = complex(z)
    if _is_nonpositive_integer(z):
        raise PoleError(f"Gamma has a pole at z={z.real:g}")
    if z.real < 0.5:
        return math.pi / (cmath.sin(math.pi * z) * cmath.exp(_loggamma_right(1.0 - z)))
    return cmath.exp(_loggamma_right(z))


def rgamma(z: complex) -> complex:
    """1/Gamma(z), which is entire; returns 0 at the poles of Gamma."""
    if _is_nonpositive_integer(z):
        return 0j
    return 1.0 / gamma(z)


def pochhammer(v: complex, n: int) -> complex:
    """Rising factorial (v)_n = v (v+1) ... (v+n-1)."""
    if n < 0:
        raise DomainError("pochhammer requires n >= 0")
    out = 1.0 + 0j
    v = complex(v)
    for j in range(n):
        out *= v + j
    return out


@dataclass(frozen=True)
class HypergeometricParams:
    """Upper (a_1..a_p) and lower (b_1..b_q) parameters of a pFq series."""

    upper: tuple
    lower: tuple

    def __post_init__(self):
        object.__setattr__(self, "upper", tuple(complex(a) for a in self.upper))
        object.__setattr__(self, "lower", tuple(complex(b) for b in self.lower))
        for b in self.lower:
            if _is_nonpositive_integer(b):
                raise DomainError(f"lower parameter {b.real:g} is zero or a negative integer")

    @property
    def p(self) -> int:
        return len(self.upper)

    @property
    def q(self) -> int:
        return len(self.lower)

    def terminating_degree(self):
        """Degree of the polynomial if some upper parameter is -m, else None."""
        degs = [int(-a.real) for a in self.upper if _is_nonpositive_integer(a)]
        return min(degs) if degs else None


def _as_params(upper, lower) -> HypergeometricParams:
    if isinstance(upper, HypergeometricParams):
        return upper
    return HypergeometricParams(tuple(upper), tuple(lower))


def _sum_series(params: HypergeometricParams, z: np.ndarray, tol: float, max_terms: int):
    """Plain partial sums with the term-ratio recurrence.

    Returns (sum, truncation estimate, largest term) as arrays.
    """
    term = np.ones_like(z)
    total = np.ones_like(z)
    biggest = np.ones(z.shape)
    small = np.zeros(z.shape, dtype=int)
    last = np.zeros(z.shape)
    active = np.ones(z.shape, dtype=bool)
    for n in range(max_terms):
        num = 1.0 + 0j
        for a in params.upper:
            num = num * (a + n)
        den = complex(n + 1)
        for b in params.lower:
            den = den * (b + n)
        term = np.where(active, term * (num / den) * z, 0.0)
        total = total + term
        mag = np.abs(term)
        biggest = np.maximum(biggest, mag)
        tiny = mag <= tol * np.abs(total)
        small = np.where(tiny, small + 1, 0)
        last = np.where(active, mag, last)
        active &= small < _PFQ_GUARD
        if not active.any():
            return total, last, biggest
    raise ConvergenceError(
        f"pFq series did not meet its stop rule within {max_terms} terms"
    )


def pfq(upper, lower=None, z=0.0, *, tol: float = PFQ_TOL, max_terms: int = PFQ_MAX_TERMS,
        return_error: bool = False):
    """Generalized hypergeometric function by direct summation.

    ``upper`` may be a :class:`HypergeometricParams`, in which case ``lower``
    is ignored.  Summation stops once three consecutive terms fall below
    ``tol`` times the running sum.  2F1 outside |z| <= 0.5 is routed through
    :func:`hyp2f1`.

    With ``return_error`` the second return value estimates the absolute
    error: the last retained term plus rounding carried by the largest term.

    Raises:
        DomainError: p > q+1, or p = q+1 with |z| >= 1 and no transformation.
        ConvergenceError: the stop rule was not met in ``max_terms`` terms.
    """
    params = _as_params(upper, lower)
    zarr = np.asarray(z, dtype=complex)
    scalar = zarr.ndim == 0
    zarr = np.atleast_1d(zarr)
    deg = params.terminating_degree()
    if params.p == 2 and params.q == 1 and deg is None:
        out = np.array([hyp2f1(*params.upper, params.lower[0], zz) for zz in zarr.ravel()])
        out = out.reshape(zarr.shape)
        err = np.abs(out) * 1e-14
    else:
        if deg is None:
            if params.p > params.q + 1:
                raise DomainError("pFq with p > q+1 diverges for z != 0")
            if params.p == params.q + 1 and np.any(np.abs(zarr) >= 1.0):
                raise DomainError(
                    f"{params.p}F{params.q} series diverges for |z| >= 1 and no transformation applies"
                )
            total, last, biggest = _sum_series(params, zarr, tol, max_terms)
        else:
            total, last, biggest = _sum_series(params, zarr, 0.0, deg + _PFQ_GUARD + 1)
            last = np.zeros_like(last)
        out = total
        err = last + np.finfo(float).eps * biggest * 4
    if scalar:
        out, err = complex(out[0]), float(err[0])
    if return_error:
        return out, err
    return out


def _direct_2f1(a, b, c, z):
    params = HypergeometricParams((a, b), (c,))
    total, _, _ = _sum_series(params, np.atleast_1d(np.asarray(z, dtype=complex)), PFQ_TOL, PFQ_MAX_TERMS)
    return complex(total[0])


def hyp2f1(a: complex, b: complex, c: complex, z: complex) -> complex:
    """Gauss 2F1 with linear transformations for |z| > 0.5.

    The z -> z/(z-1) (Pfaff) and z -> 1-z maps are used when they land in
    |w| <= 0.5; otherwise the map (identity, Pfaff, 1-z, 1/z, 1/(1-z)) with
    the smallest |w| is taken, provided |w| <= 0.9.
    On the cut z > 1 the factor (1-z)^(c-a-b) takes its principal value,
    which is the limit from Im(z) < 0.

    Raises:
        DomainError: connection coefficients hit Gamma poles (c-a-b or a-b
            integer) or no map reaches |w| <= 0.9 (near z = exp(+-i pi/3)).
    """
    a, b, c, z = complex(a), complex(b), complex(c), complex(z)
    if _is_nonpositive_integer(c):
        raise DomainError("2F1 lower parameter is zero or a negative integer")
    params = HypergeometricParams((a, b), (c,))
    deg = params.terminating_degree()
    if deg is not None or abs(z) <= 0.5:
        total, _, _ = _sum_series(params, np.array([z]), 0.0 if deg is not None else PFQ_TOL,
                                  (deg + _PFQ_GUARD + 1) if deg is not None else PFQ_MAX_TERMS)
        return complex(total[0])
    if z.imag == 0.0 and z.real > 1.0:
        z = complex(z.real, -0.0)
    cands = {"direct": abs(z), "one_minus": abs(1.0 - z)}
    if z != 1.0:
        cands["pfaff"] = abs(z / (z - 1.0))
        cands["inv_one_minus"] = abs(1.0 / (1.0 - z))
    if z != 0.0:
        cands["inv"] = abs(1.0 / z)
    # prefer the simpler maps when they are already well inside the disc
    for name in ("pfaff", "one_minus"):
        if cands.get(name, 2.0) <= 0.5:
            break
    else:
        name = min(cands, key=cands.get)
    if cands[name] > _HYP2F1_MAX_RADIUS:
        raise DomainError(f"2F1 at z={z} is outside every implemented transformation region")
    if name == "direct":
        return _direct_2f1(a, b, c, z)
    if name == "pfaff":
        return (1.0 - z) ** (-a) * _direct_2f1(a, c - b, c, z / (z - 1.0))
    if name == "one_minus":
        w = 1.0 - z
        s = c - a - b
        if _is_nonpositive_integer(s) or _is_nonpositive_integer(-s):
            raise DomainError("2F1 1-z transformation needs c-a-b non-integer")
        t1 = gamma(c) * gamma(s) * rgamma(c - a) * rgamma(c - b) * _direct_2f1(a, b, 1.0 - s, w)
        t2 = (w ** s) * gamma(c) * gamma(-s) * rgamma(a) * rgamma(b) * _direct_2f1(c - a, c - b, 1.0 + s, w)
        return t1 + t2
    if name == "inv":
        return _hyp2f1_inverse(a, b, c, z, 1.0 / z, -z)
    return _hyp2f1_inverse(a, b, c, z, 1.0 / (1.0 - z), 1.0 - z)


def _hyp2f1_inverse(a, b, c, z, w, base):
    """1/z (base = -z) or 1/(1-z) (base = 1-z) connection formula."""
    d = a - b
    if _is_nonpositive_integer(d) or _is_nonpositive_integer(-d):
        raise DomainError("2F1 inverse transformation needs a-b non-integer")
    if base == -z:
        f1 = _direct_2f1(a, a - c + 1.0, 1.0 + d, w)
        f2 = _direct_2f1(b, b - c + 1.0, 1.0 - d, w)
    else:
        f1 = _direct_2f1(a, c - b, 1.0 + d, w)
        f2 = _direct_2f1(b, c - a, 1.0 - d, w)
    t1 = gamma(c) * gamma(-d) * rgamma(b) * rgamma(c - a) * base ** (-a) * f1
    t2 = gamma(c) * gamma(d) * rgamma(a) * rgamma(c - b) * base ** (-b) * f2
    return t1 + t2


def oracle_pfq(upper, lower=None, z=0.0, digits: int = 40) -> complex:
    """Same series as :func:`pfq`, summed with ``digits`` decimal digits.

    Only meant for checking double-precision results.  Uses the same stop rule
    with the threshold set to 10**-digits.
    """
    import mpmath

    params = _as_params(upper, lower)
    with mpmath.workdps(digits):
        up = [mpmath.mpc(a.real, a.imag) for a in params.upper]
        lo = [mpmath.mpc(b.real, b.imag) for b in params.lower]
        zz = mpmath.mpc(complex(z).real, complex(z).imag)
        deg = params.terminating_degree()
        if deg is None:
            if params.p > params.q + 1:
                raise DomainError("pFq with p > q+1 diverges for z != 0")
            if params.p == params.q + 1 and abs(zz) >= 1:
                raise DomainError("series diverges for |z| >= 1")
        tol = mpmath.mpf(10) ** (-digits)
        term = mpmath.mpc(1)
        total = mpmath.mpc(1)
        small = 0
        limit = PFQ_MAX_TERMS if deg is None else deg + _PFQ_GUARD + 1
        for n in range(limit):
            num = mpmath.mpc(1)
            for a in up:
                num *= a + n
            den = mpmath.mpc(n + 1)
            for b in lo:
                den *= b + n
            term = term * num / den * zz
            total += term
            small = small + 1 if abs(term) <= tol * abs(total) else 0
            if small >= _PFQ_GUARD:
                return complex(total)
        if deg is not None:
            return complex(total)
    raise ConvergenceError("oracle series did not converge")


# ---------------------------------------------------------------------------
# Airy functions

AIRY_SERIES_RADIUS = 2.0
AIRY_ASYMPTOTIC_RADIUS = 9.0
_TAYLOR_STEP = 0.5
_OMEGA = cmath.exp(2j * math.pi / 3)


def _airy_origin_values():
    ai0 = 3.0 ** (-2.0 / 3.0) / gamma(2.0 / 3.0).real
    aip0 = -(3.0 ** (-1.0 / 3.0)) / gamma(1.0 / 3.0).real
    return ai0, aip0


AI0, AIP0 = _airy_origin_values()


def _airy_maclaurin(z):
    """Ai and Ai' from the 0F1 representation."""
    x = z ** 3 / 9.0
    f = pfq((), (2.0 / 3.0,), x)
    g = pfq((), (4.0 / 3.0,), x)
    fp = pfq((), (5.0 / 3.0,), x)
    gp = pfq((), (1.0 / 3.0,), x)
    ai = AI0 * f + AIP0 * z * g
    aip = AI0 * 0.5 * z ** 2 * fp + AIP0 * gp
    return ai, aip


def _asymptotic_coefficients(nterms=80):
    u = [1.0]
    for k in range(1, nterms):
        u.append(u[-1] * (6 * k - 5) * (6 * k - 3) * (6 * k - 1) / ((2 * k - 1) * 216.0 * k))
    v = [1.0] + [-(6 * k + 1) / (6 * k - 1) * u[k] for k in range(1, nterms)]
    return np.array(u), np.array(v)


_U_COEF, _V_COEF = _asymptotic_coefficients()


def _asymptotic_sums(zeta):
    """Sums S, T of the Ai / Ai' expansions with optimal truncation.

    Returns S, T and the relative size of the first omitted term.
    """
    s = np.ones_like(zeta)
    t = np.ones_like(zeta)
    inv = 1.0 / zeta
    power = np.ones_like(zeta)
    prev = np.full(zeta.shape, np.inf)
    active = np.ones(zeta.shape, dtype=bool)
    err = np.zeros(zeta.shape)
    for k in range(1, len(_U_COEF)):
        power = power * (-inv)
        tu = _U_COEF[k] * power
        tv = _V_COEF[k] * power
        mag = np.abs(tu)
        growing = mag > prev
        active &= ~growing
        s = np.where(active, s + tu, s)
        t = np.where(active, t + tv, t)
        err = np.where(active, mag, err)
        active &= mag > 1e-17
        prev = mag
        if not active.any():
            break
    return s, t, err


def _log_airy_asymptotic(z):
    """log Ai, log Ai' (with Ai' = -exp(log Ai'')) for |arg z| <= 2pi/3."""
    sqrtz = np.sqrt(z)
    zeta = (2.0 / 3.0) * z * sqrtz
    s, t, err = _asymptotic_sums(zeta)
    quarter = np.sqrt(sqrtz)
    base = -zeta - math.log(2.0 * math.sqrt(math.pi))
    log_ai = base - np.log(quarter) + np.log(s)
    log_aip = base + np.log(quarter) + np.log(t) + 1j * math.pi
    return log_ai, log_aip, err


def _airy_asymptotic(z):
    """Ai, Ai' for |z| >= AIRY_ASYMPTOTIC_RADIUS; returns (log Ai, log Ai')."""
    ang = np.angle(z)
    direct = np.abs(ang) <= 2.0 * math.pi / 3.0 + 1e-15
    log_ai = np.empty(z.shape, dtype=complex)
    log_aip = np.empty(z.shape, dtype=complex)
    err = np.zeros(z.shape)
    if direct.any():
        la, lp, e = _log_airy_asymptotic(z[direct])
        log_ai[direct], log_aip[direct], err[direct] = la, lp, e
    rot = ~direct
    if rot.any():
        zr = z[rot]
        # Ai(z) = -w Ai(w z) - w^2 Ai(w^2 z)
        la1, lp1, e1 = _log_airy_asymptotic(_OMEGA * zr)
        la2, lp2, e2 = _log_airy_asymptotic(_OMEGA ** 2 * zr)
        log_ai[rot] = _logsumexp2(la1 + cmath.log(-_OMEGA), la2 + cmath.log(-_OMEGA ** 2))
        log_aip[rot] = _logsumexp2(lp1 + cmath.log(-_OMEGA ** 2), lp2 + cmath.log(-_OMEGA))
        err[rot] = np.maximum(e1, e2)
    if np.any(err > 1e-12):
        raise PrecisionError("Airy asymptotic expansion cannot reach 1e-12 at this radius")
    return log_ai, log_aip


def _logsumexp2(x, y):
    m = np.where(x.real > y.real, x, y)
    return m + np.log(np.exp(x - m) + np.exp(y - m))


def _taylor_walk(z0, w, wp, z1):
    """Carry (w, w') for w'' = z w from z0 to z1 by Taylor steps."""
    dist = np.abs(z1 - z0)
    nsteps = max(1, int(np.ceil(dist.max() / _TAYLOR_STEP)))
    h = (z1 - z0) / nsteps
    zc = z0.copy()
    for _ in range(nsteps):
        c_prev2 = w.copy()        # c_{j-2}
        c_prev1 = wp.copy()       # c_{j-1}
        c_prevprev3 = np.zeros_like(w)  # c_{j-3}
        val = w + wp * h
        der = wp.copy()
        hp = h.copy()             # h^{j-1}
        for j in range(2, 80):
            cj = (zc * c_prev2 + c_prevprev3) / (j * (j - 1))
            der = der + j * cj * hp
            hp = hp * h
            val = val + cj * hp
            scale = np.abs(val) + np.abs(der) * np.abs(h) + 1e-300
            done = np.abs(cj * hp) * j <= 1e-17 * scale
            c_prevprev3, c_prev2, c_prev1 = c_prev2, c_prev1, cj
            if j > 4 and done.all():
                break
        w, wp = val, der
        zc = zc + h
    return w, wp


def _airy_core(z):
    """Return (log Ai, log Ai') on the asymptotic region and (Ai, Ai') elsewhere.

    Output: ai, aip arrays (linear scale) where finite; log arrays for the
    asymptotic points so callers needing logs avoid under/overflow.
    """
    r = np.abs(z)
    ai = np.empty(z.shape, dtype=complex)
    aip = np.empty(z.shape, dtype=complex)
    log_ai = np.full(z.shape, np.nan + 0j)
    log_aip = np.full(z.shape, np.nan + 0j)

    inner = r <= AIRY_SERIES_RADIUS
    if inner.any():
        ai[inner], aip[inner] = _airy_maclaurin(z[inner])

    outer = r >= AIRY_ASYMPTOTIC_RADIUS
    if outer.any():
        la, lp = _airy_asymptotic(z[outer])
        log_ai[outer], log_aip[outer] = la, lp
        with np.errstate(over="ignore", under="ignore"):
            ai[outer], aip[outer] = np.exp(la), np.exp(lp)

    mid = ~(inner | outer)
    if mid.any():
        zm = z[mid]
        unit = zm / np.abs(zm)
        recessive = np.abs(np.angle(zm)) <= math.pi / 3.0
        wa = np.empty(zm.shape, dtype=complex)
        wpa = np.empty(zm.shape, dtype=complex)
        if recessive.any():
            start = AIRY_ASYMPTOTIC_RADIUS * unit[recessive]
            la, lp = _airy_asymptotic(start)
            wa[recessive], wpa[recessive] = _taylor_walk(start, np.exp(la), np.exp(lp), zm[recessive])
        dom = ~recessive
        if dom.any():
            start = AIRY_SERIES_RADIUS * unit[dom]
            w0, wp0 = _airy_maclaurin(start)
            wa[dom], wpa[dom] = _taylor_walk(start, w0, wp0, zm[dom])
        ai[mid], aip[mid] = wa, wpa
    return ai, aip, log_ai, log_aip


def _prep(z):
    arr = np.asarray(z, dtype=complex)
    return arr, arr.ndim == 0


def _finish(out, scalar, name):
    if not np.all(np.isfinite(out)):
        raise OverflowError(f"{name} overflows double precision at this argument")
    return complex(out.reshape(())) if scalar else out


def airy(z):
    """Ai(z), Ai'(z), Bi(z), Bi'(z) for complex ``z``.

    |z| <= 2 uses the 0F1 series; |z| >= 9 the asymptotic expansion (with the
    connection formula for |arg z| > 2pi/3); in between the Airy equation is
    integrated by Taylor steps along the ray, inward from the asymptotic
    circle where Ai is recessive and outward elsewhere.  Bi comes from
    Bi(z) = e^{i pi/6} Ai(w z) + e^{-i pi/6} Ai(w^-1 z), w = e^{2 pi i/3}.

    Raises:
        OverflowError: a requested value exceeds double range.
    """
    arr, scalar = _prep(z)
    flat = arr.ravel()
    stacked = np.concatenate([flat, _OMEGA * flat, np.conj(_OMEGA) * flat])
    a, ap, _, _ = _airy_core(stacked)
    n = flat.size
    ai, aip = a[:n], ap[:n]
    e = cmath.exp(1j * math.pi / 6)
    with np.errstate(over="ignore", invalid="ignore"):
        bi = e * a[n:2 * n] + np.conj(e) * a[2 * n:]
        bip = e * _OMEGA * ap[n:2 * n] + np.conj(e) * np.conj(_OMEGA) * ap[2 * n:]
    shape = arr.shape
    return tuple(_finish(v.reshape(shape), scalar, name)
                 for v, name in ((ai, "Ai"), (aip, "Ai'"), (bi, "Bi"), (bip, "Bi'")))


def airy_ai(z, derivative: bool = False):
    """Ai(z) (or Ai'(z) with ``derivative``) for complex scalar or array."""
    arr, scalar = _prep(z)
    ai, aip, _, _ = _airy_core(arr.ravel())
    out = (aip if derivative else ai).reshape(arr.shape)
    return _finish(out, scalar, "Ai'" if derivative else "Ai")


def airy_bi(z, derivative: bool = False):
    """Bi(z) (or Bi'(z)) through the rotated-Ai identity."""
    arr, scalar = _prep(z)
    flat = arr.ravel()
    a, ap, _, _ = _airy_core(np.concatenate([_OMEGA * flat, np.conj(_OMEGA) * flat]))
    n = flat.size
    e = cmath.exp(1j * math.pi / 6)
    with np.errstate(over="ignore", invalid="ignore"):
        if derivative:
            out = e * _OMEGA * ap[:n] + np.conj(e) * np.conj(_OMEGA) * ap[n:]
        else:
            out = e * a[:n] + np.conj(e) * a[n:]
    return _finish(out.reshape(arr.shape), scalar, "Bi'" if derivative else "Bi")


def log_airy_ai(z):
    """Complex logarithm of Ai(z), usable where Ai under- or overflows."""
    arr, scalar = _prep(z)
    flat = arr.ravel()
    ai, _, log_ai, _ = _airy_core(flat)
    with np.errstate(divide="ignore"):
        out = np.where(np.isnan(log_ai), np.log(ai + 0j), log_ai)
    out = out.reshape(arr.shape)
    return complex(out.reshape(())) if scalar else out


# ---------------------------------------------------------------------------
# Hermite polynomials

HERMITE_MAX_ORDER = 200


def hermite(n: int, z):
    """Physicists' Hermite polynomial H_n(z) via the three-term recurrence."""
    if n < 0 or n > HERMITE_MAX_ORDER:
        raise DomainError(f"hermite order must be in [0, {HERMITE_MAX_ORDER}]")
    arr = np.asarray(z)
    scalar = arr.ndim == 0
    x = arr.astype(complex) if np.iscomplexobj(arr) or arr.dtype.kind == "f" else arr.astype(object)
    h_prev = np.ones_like(x)
    if n == 0:
        out = h_prev
    else:
        h = 2 * x
        for j in range(1, n):
            h_prev, h = h, 2 * x * h - 2 * j * h_prev
        out = h
    if scalar:
        val = np.asarray(out, dtype=object if x.dtype == object else complex).reshape(())[()]
        return val if isinstance(val, int) else complex(val)
    return out


def hermite_coefficients(n: int) -> list:
    """Integer coefficients c_j of H_n(z) = sum c_j z^j from the explicit sum."""
    coef = [0] * (n + 1)
    for m in range(n // 2 + 1):
        coef[n - 2 * m] = ((-1) ** m) * math.factorial(n) // (math.factorial(m) * math.factorial(n - 2 * m)) \
            * 2 ** (n - 2 * m)
    return coef


def hermite_norm(n: int, convention: str = "standard") -> float:
    """Normalization factor multiplying exp(-eta^2/2) H_n(eta).

    ``standard`` is 1/sqrt(2^n n! sqrt(pi)); ``printed`` reproduces the
    factor pi^(-1/4)/sqrt(2^n * 2!) that appears in the short-wave Hermite
    modes.
    """
    if convention == "standard":
        return 1.0 / math.sqrt(2.0 ** n * math.factorial(n) * math.sqrt(math.pi))
    if convention == "printed":
        return math.pi ** -0.25 / math.sqrt(2.0 ** n * 2.0)
    raise DomainError(f"unknown Hermite normalization {convention!r}")


def log_hermite_function(n: int, eta):
    """log[exp(-eta^2/2) H_n(eta)]; -inf at zeros of H_n."""
    h = np.asarray(hermite(n, eta), dtype=complex)
    with np.errstate(divide="ignore", invalid="ignore"):
        return -0.5 * np.asarray(eta, dtype=complex) ** 2 + np.log(h)


def hermite_function(n: int, eta, convention: str | None = None):
    """exp(-eta^2/2) H_n(eta), optionally normalized, evaluated in log scale."""
    lg = log_hermite_function(n, eta)
    with np.errstate(under="ignore", over="ignore", invalid="ignore"):
        out = np.exp(lg)
    out = np.where(np.isneginf(lg.real), 0.0, out)
    if convention is not None:
        out = out * hermite_norm(n, convention)
    if not np.all(np.isfinite(out)):
        raise OverflowError("Hermite function overflows; Gaussian factor grows at this argument")
    arr = np.asarray(eta)
    return complex(out.reshape(())) if arr.ndim == 0 else out


__all__ = [
    "AI0", "AIP0", "HypergeometricParams", "airy", "airy_ai", "airy_bi", "gamma", "hermite",
    "hermite_coefficients", "hermite_function", "hermite_norm", "hyp2f1", "log_airy_ai",
    "log_hermite_function", "loggamma", "oracle_pfq", "pfq", "pochhammer", "rgamma",
]
