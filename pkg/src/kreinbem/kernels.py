"""Helmholtz fundamental solutions in 2-5 space dimensions.

Everything here is a pure function of its arguments.  The solution family
E_n(z; x) solves (-Delta - z) E = delta_0 in R^n with the radiation branch
fixed by Im(sqrt(z)) >= 0, so fields built from it decay (or radiate) rather
than grow.  The complex-argument Bessel/Hankel evaluations are done in-house:
power series below |zeta| = 12, first-kind asymptotic expansion above, and
closed exponential forms for the half-integer orders.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError

EULER_GAMMA = 0.5772156649015328606065120900824024

# Series / asymptotic switch and depths.  Arguments seen by the boundary
# operators stay within |zeta| <= 50 at desk scale; these settings hold
# relative accuracy ~1e-10 on that range for Im(zeta) >= 0.
_SERIES_RADIUS = 12.0
_SERIES_TERMS = 46
_ASYMP_TERMS = 18

_IM_TOLERANCE = -1e-12


def _use_series(zeta: np.ndarray) -> np.ndarray:
    # Inside the series radius, J + iY cancels like exp(-2 Im zeta); hand
    # strongly damped arguments to the asymptotic branch once it is the
    # more accurate of the two.
    a = np.abs(zeta)
    small = a <= _SERIES_RADIUS
    cancel_guard = (a > 7.0) & (zeta.imag > 20.4 - 5.0 * np.log(np.maximum(a, 1.0)))
    return small & ~cancel_guard


def sqrt_upper(z: complex) -> complex:
    """Square root with Im >= 0; positive reals map to their positive root."""
    w = complex(np.lib.scimath.sqrt(complex(z)))
    if w.imag < 0.0:
        w = -w
    return w


@dataclass(frozen=True)
class SpectralParameter:
    """Spectral parameter z with its cached upper-half-plane square root."""

    z: complex
    sqrt_z: complex = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "sqrt_z", sqrt_upper(self.z))

    @classmethod
    def of(cls, z) -> "SpectralParameter":
        if isinstance(z, SpectralParameter):
            return z
        return cls(complex(z))

    @property
    def is_zero(self) -> bool:
        return self.z == 0


def _digamma_integers(count: int) -> np.ndarray:
    """psi(1), psi(2), ..., psi(count) by upward recurrence from psi(1)."""
    out = np.empty(count)
    out[0] = -EULER_GAMMA
    for k in range(1, count):
        out[k] = out[k - 1] + 1.0 / k
    return out


_PSI = _digamma_integers(2 * _SERIES_TERMS + 24)


def _check_argument(zeta: np.ndarray) -> None:
    if np.any(zeta == 0):
        raise DomainError("Hankel/Bessel argument zeta = 0 is singular")
    if np.any(zeta.imag < _IM_TOLERANCE * np.maximum(1.0, np.abs(zeta))):
        raise DomainError("arguments must satisfy Im(zeta) >= 0")


def _bessel_j_series(m: int, zeta: np.ndarray) -> np.ndarray:
    # J_m(zeta) = (zeta/2)^m sum_k q^k / (k! (m+k)!),  q = -(zeta/2)^2
    q = -0.25 * zeta * zeta
    acc = np.zeros_like(zeta)
    for k in range(_SERIES_TERMS - 1, -1, -1):
        c = math.exp(-math.lgamma(k + 1) - math.lgamma(m + k + 1))
        acc = acc * q + c
    return acc * (0.5 * zeta) ** m


def _bessel_y_series(m: int, zeta: np.ndarray) -> np.ndarray:
    # Y_m from the standard log-series companion of J_m.
    jm = _bessel_j_series(m, zeta)
    out = (2.0 / math.pi) * np.log(0.5 * zeta) * jm
    if m > 0:
        finite = np.zeros_like(zeta)
        q = 0.25 * zeta * zeta
        for k in range(m - 1, -1, -1):
            c = math.factorial(m - 1 - k) / math.factorial(k)
            finite = finite * q + c
        out -= (1.0 / math.pi) * (0.5 * zeta) ** (-m) * finite
    tail = np.zeros_like(zeta)
    q = -0.25 * zeta * zeta
    for k in range(_SERIES_TERMS - 1, -1, -1):
        c = (_PSI[k] + _PSI[m + k]) * math.exp(
            -math.lgamma(k + 1) - math.lgamma(m + k + 1)
        )
        tail = tail * q + c
    out -= (1.0 / math.pi) * (0.5 * zeta) ** m * tail
    return out


def _asymptotic_coeffs(nu: float) -> np.ndarray:
    # a_0 = 1, a_k = a_{k-1} (4 nu^2 - (2k-1)^2) / (8k)
    a = np.empty(_ASYMP_TERMS)
    a[0] = 1.0
    for k in range(1, _ASYMP_TERMS):
        a[k] = a[k - 1] * (4.0 * nu * nu - (2 * k - 1) ** 2) / (8.0 * k)
    return a


_ASYMP_A = {0: _asymptotic_coeffs(0.0), 1: _asymptotic_coeffs(1.0)}


def _hankel_asymptotic(m: int, zeta: np.ndarray, kind: int) -> np.ndarray:
    # H^(1,2)_m(zeta) ~ sqrt(2/(pi zeta)) e^{+-i omega} sum_k (+-i)^k a_k / zeta^k
    sign = 1.0 if kind == 1 else -1.0
    omega = zeta - (0.5 * m + 0.25) * math.pi
    inv = 1.0 / zeta
    acc = np.zeros_like(zeta)
    a = _ASYMP_A[m]
    for k in range(_ASYMP_TERMS - 1, -1, -1):
        acc = acc * (sign * 1j * inv) + a[k]
    return np.sqrt(2.0 / (math.pi * zeta)) * np.exp(sign * 1j * omega) * acc


def _bessel_jy_int(m: int, zeta: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    small = _use_series(zeta)
    j = np.empty_like(zeta)
    y = np.empty_like(zeta)
    if np.any(small):
        zs = zeta[small]
        j[small] = _bessel_j_series(m, zs)
        y[small] = _bessel_y_series(m, zs)
    if np.any(~small):
        zl = zeta[~small]
        h1 = _hankel_asymptotic(m, zl, 1)
        h2 = _hankel_asymptotic(m, zl, 2)
        j[~small] = 0.5 * (h1 + h2)
        y[~small] = (h1 - h2) / 2j
    return j, y


# Precomputed series coefficients: J_m tail 1/(k! (m+k)!) and the digamma
# tail (psi(k+1) + psi(m+k+1))/(k! (m+k)!), for m = 0, 1.
def _series_coeffs(m: int) -> tuple[np.ndarray, np.ndarray]:
    cj = np.array(
        [
            math.exp(-math.lgamma(k + 1) - math.lgamma(m + k + 1))
            for k in range(_SERIES_TERMS)
        ]
    )
    ct = np.array([(_PSI[k] + _PSI[m + k]) for k in range(_SERIES_TERMS)]) * cj
    return cj, ct


_COEFFS = {0: _series_coeffs(0), 1: _series_coeffs(1)}
_SHORT_TERMS = 22  # enough for |zeta| <= 4 at machine precision


def _hankel1_series_fused(m: int, zeta: np.ndarray) -> np.ndarray:
    """H^(1)_m = J_m (1 + (2i/pi) ln(zeta/2)) - (i/pi)[finite + tail] in one pass."""
    cj, ct = _COEFFS[m]
    q = -0.25 * zeta * zeta
    nterms = _SHORT_TERMS if np.abs(q).max(initial=0.0) <= 4.0 else _SERIES_TERMS
    accj = np.full_like(zeta, cj[nterms - 1])
    acct = np.full_like(zeta, ct[nterms - 1])
    for k in range(nterms - 2, -1, -1):
        np.multiply(accj, q, out=accj)
        accj += cj[k]
        np.multiply(acct, q, out=acct)
        acct += ct[k]
    half = 0.5 * zeta
    pref = half**m
    out = pref * (accj * (1.0 + (2j / math.pi) * np.log(half)) - (1j / math.pi) * acct)
    if m == 1:
        out = out - (1j / math.pi) * (2.0 / zeta)
    return out


def _hankel1_int(m: int, zeta: np.ndarray) -> np.ndarray:
    small = _use_series(zeta)
    out = np.empty_like(zeta)
    if np.any(small):
        out[small] = _hankel1_series_fused(m, zeta[small])
    if not np.all(small):
        out[~small] = _hankel_asymptotic(m, zeta[~small], 1)
    return out


def _as_complex_array(zeta):
    arr = np.asarray(zeta, dtype=complex)
    return arr, arr.ndim == 0


def bessel_j(order: int, zeta) -> complex | np.ndarray:
    """J_order(zeta) for integer order >= 0, complex zeta with Im >= 0."""
    arr, scalar = _as_complex_array(zeta)
    arr = np.atleast_1d(arr)
    _check_argument(arr)
    if np.abs(arr).max() <= _SERIES_RADIUS:
        out = _bessel_j_series(order, arr)
    else:
        if order > 1:
            raise DomainError("large-argument path only carries orders 0 and 1")
        out = _bessel_jy_int(order, arr)[0]
    return complex(out[0]) if scalar else out


def bessel_j_derivative(order: int, zeta) -> complex | np.ndarray:
    """d/dzeta J_order(zeta); order 0 uses -J_1, else the two-term recurrence."""
    if order == 0:
        return -bessel_j(1, zeta)
    arr, scalar = _as_complex_array(zeta)
    out = bessel_j(order - 1, arr) - order / arr * bessel_j(order, arr)
    return complex(out) if scalar else out


def bessel_y(order: int, zeta) -> complex | np.ndarray:
    """Y_order(zeta) for integer order in {0, 1}."""
    if order not in (0, 1):
        raise DomainError("bessel_y carries orders 0 and 1 only")
    arr, scalar = _as_complex_array(zeta)
    arr = np.atleast_1d(arr)
    _check_argument(arr)
    out = _bessel_jy_int(order, arr)[1]
    return complex(out[0]) if scalar else out


def hankel1(order, zeta) -> complex | np.ndarray:
    """Hankel function of the first kind for orders {0, 1, 1/2, 3/2}.

    Half-integer orders use their closed exponential forms; integer orders
    combine the J/Y power series with the large-argument expansion.
    """
    arr, scalar = _as_complex_array(zeta)
    arr = np.atleast_1d(arr)
    _check_argument(arr)
    if order == 0.5:
        out = -1j * np.sqrt(2.0 / (math.pi * arr)) * np.exp(1j * arr)
    elif order == 1.5:
        out = -np.sqrt(2.0 / (math.pi * arr)) * (1.0 + 1j / arr) * np.exp(1j * arr)
    elif order in (0, 1):
        out = _hankel1_int(int(order), arr)
    elif order == 2:
        out = 2.0 / arr * _hankel1_int(1, arr) - _hankel1_int(0, arr)
    else:
        raise DomainError(f"unsupported Hankel order {order}")
    return complex(out[0]) if scalar else out


# ---------------------------------------------------------------------------
# Fundamental solutions
# ---------------------------------------------------------------------------

# Unit-sphere areas omega_{n-1} = 2 pi^{n/2} / Gamma(n/2) for n = 3..7.
_OMEGA = {n: 2.0 * math.pi ** (0.5 * n) / math.gamma(0.5 * n) for n in range(3, 8)}

_PUBLIC_DIMS = (2, 3, 4, 5)


def _radial_zero(n: int, r: np.ndarray) -> np.ndarray:
    if n == 2:
        return -np.log(r) / (2.0 * math.pi) + 0j
    return r ** (2 - n) / ((n - 2) * _OMEGA[n]) + 0j


def _radial(n: int, sp: SpectralParameter, r: np.ndarray) -> np.ndarray:
    """E_n(z; x) as a function of r = |x| > 0, for n in 2..7."""
    if sp.is_zero:
        return _radial_zero(n, r)
    w = sp.sqrt_z
    zeta = w * r
    if n == 2:
        return 0.25j * hankel1(0, zeta)
    if n == 3:
        return np.exp(1j * zeta) / (4.0 * math.pi * r)
    if n == 4:
        return 0.125j * (w / r) * hankel1(1, zeta) / math.pi
    if n == 5:
        # Closed form from the order-3/2 Hankel function.
        return -1j * w / (8.0 * math.pi**2 * r**2) * (1.0 + 1j / zeta) * np.exp(1j * zeta)
    if n == 6:
        return 0.0625j * sp.z / (math.pi**2 * r**2) * hankel1(2, zeta)
    if n == 7:
        # (i/4) (sqrt(z)/(2 pi r))^{5/2} H^(1)_{5/2};  H_{5/2} = (3/zeta) H_{3/2} - H_{1/2}
        p = w / (2.0 * math.pi * r)
        h52 = 3.0 / zeta * hankel1(1.5, zeta) - hankel1(0.5, zeta)
        return 0.25j * p**2 * np.sqrt(p) * h52
    raise DomainError(f"unsupported dimension n={n}")


def fundamental_radial(n: int, z, r) -> complex | np.ndarray:
    """E_n(z; x) for |x| = r > 0, n in {2, 3, 4, 5}; vectorized over r."""
    if n not in _PUBLIC_DIMS:
        raise DomainError(f"dimension n={n} not supported (use 2..5)")
    sp = SpectralParameter.of(z)
    arr = np.asarray(r, dtype=float)
    scalar = arr.ndim == 0
    arr = np.atleast_1d(arr)
    if np.any(arr <= 0):
        raise DomainError("fundamental solution is singular at x = 0")
    out = _radial(n, sp, arr)
    return complex(out[0]) if scalar else out


def fundamental_radial_derivative(n: int, z, r) -> complex | np.ndarray:
    """d/dr of E_n(z; x) at |x| = r, for n in {2, 3}."""
    sp = SpectralParameter.of(z)
    arr = np.asarray(r, dtype=float)
    scalar = arr.ndim == 0
    arr = np.atleast_1d(arr)
    if np.any(arr <= 0):
        raise DomainError("fundamental solution is singular at x = 0")
    # dE_n/dr = -2 pi r E_{n+2}
    out = -2.0 * math.pi * arr * _radial(n + 2, sp, arr)
    return complex(out[0]) if scalar else out


def fundamental_solution(n: int, z, x) -> complex:
    """E_n(z; x) at a point x in R^n, n in {2, 3, 4, 5}."""
    pt = np.asarray(x, dtype=float)
    r = float(np.linalg.norm(pt))
    return fundamental_radial(n, z, r)


def fundamental_gradient(n: int, z, x) -> np.ndarray:
    """grad_x E_n(z; x), by differentiating the radial form; n in {2, 3}."""
    if n not in (2, 3):
        raise DomainError("gradients carried for n in {2, 3} only")
    sp = SpectralParameter.of(z)
    pt = np.asarray(x, dtype=float)
    r = float(np.linalg.norm(pt))
    if r == 0.0:
        raise DomainError("fundamental solution is singular at x = 0")
    if sp.is_zero:
        if n == 2:
            return (-1.0 / (2.0 * math.pi * r**2)) * pt + 0j
        return (-1.0 / (4.0 * math.pi * r**3)) * pt + 0j
    w = sp.sqrt_z
    zeta = w * r
    if n == 2:
        dr = -0.25j * w * hankel1(1, zeta)
    else:
        dr = np.exp(1j * zeta) * (1j * zeta - 1.0) / (4.0 * math.pi * r**2)
    return (dr / r) * pt


def fundamental_hessian(n: int, z, x) -> np.ndarray:
    """Hessian of E_n(z; x) via the dimension-shift identity; n in {2, 3}.

    H_jk = 4 pi^2 x_j x_k E_{n+4}(z; x) - 2 pi delta_jk E_{n+2}(z; x),
    whose trace is -z E_n(z; x) away from the singular point.
    """
    if n not in (2, 3):
        raise DomainError("hessians carried for n in {2, 3} only")
    sp = SpectralParameter.of(z)
    pt = np.asarray(x, dtype=float)
    r = float(np.linalg.norm(pt))
    if r == 0.0:
        raise DomainError("fundamental solution is singular at x = 0")
    rr = np.atleast_1d(r)
    e_plus2 = complex(_radial(n + 2, sp, rr)[0])
    e_plus4 = complex(_radial(n + 4, sp, rr)[0])
    hess = (4.0 * math.pi**2 * e_plus4) * np.outer(pt, pt)
    hess[np.diag_indices(n)] -= 2.0 * math.pi * e_plus2
    return hess


def log_remainder_at_zero(z) -> complex:
    """Limit of E_2(z; x) + ln|x|/(2 pi) as x -> 0.

    The smooth part left after removing the logarithmic singularity:
    i/4 - (ln(sqrt(z)/2) + gamma)/(2 pi) for z != 0, and 0 for z = 0.
    """
    sp = SpectralParameter.of(z)
    if sp.is_zero:
        return 0.0 + 0.0j
    return 0.25j - (np.log(0.5 * sp.sqrt_z) + EULER_GAMMA) / (2.0 * math.pi)


@dataclass
class KernelValue:
    """Value, gradient, and Hessian of E_n at one point, filled on demand."""

    value: complex
    gradient: np.ndarray | None = None
    hessian: np.ndarray | None = None


def kernel_value(n: int, z, x, gradient: bool = False, hessian: bool = False) -> KernelValue:
    out = KernelValue(value=fundamental_solution(n, z, x))
    if gradient:
        out.gradient = fundamental_gradient(n, z, x)
    if hessian:
        out.hessian = fundamental_hessian(n, z, x)
    return out
