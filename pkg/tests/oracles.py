"""Independent test-side oracles, kept deliberately separate from the package.

Bessel values come from direct 200-term series summation in high-precision
arithmetic (mpmath mpf/mpc scalars), not from any library Bessel routine and
not from the package's own evaluation paths.
"""

import mpmath as mp

SERIES_TERMS = 200
mp.mp.dps = 60


def bessel_j_series(nu, zeta) -> complex:
    """Sum the ascending series for J_nu at high precision."""
    zeta = mp.mpmathify(zeta)
    nu = mp.mpf(nu)
    q = -(zeta / 2) ** 2
    total = mp.mpf(0)
    term_pow = mp.mpf(1)
    for k in range(SERIES_TERMS):
        total += term_pow / (mp.factorial(k) * mp.gamma(nu + k + 1))
        term_pow *= q
    return complex(total * (zeta / 2) ** nu)


def bessel_y_series(m: int, zeta) -> complex:
    """Sum the log-series companion for integer-order Y_m at high precision."""
    zeta = mp.mpmathify(zeta)
    jm = mp.mpmathify(bessel_j_series(m, zeta))
    # recompute jm at full precision to avoid the complex() round-trip
    q = -(zeta / 2) ** 2
    jm = mp.mpf(0)
    term_pow = mp.mpf(1)
    for k in range(SERIES_TERMS):
        jm += term_pow / (mp.factorial(k) * mp.factorial(m + k))
        term_pow *= q
    jm *= (zeta / 2) ** m

    out = (2 / mp.pi) * mp.log(zeta / 2) * jm
    qq = (zeta / 2) ** 2
    finite = mp.mpf(0)
    for k in range(m):
        finite += mp.factorial(m - 1 - k) / mp.factorial(k) * qq**k
    out -= (1 / mp.pi) * (zeta / 2) ** (-m) * finite
    tail = mp.mpf(0)
    term_pow = mp.mpf(1)
    for k in range(SERIES_TERMS):
        tail += (
            (mp.digamma(k + 1) + mp.digamma(m + k + 1))
            * term_pow
            / (mp.factorial(k) * mp.factorial(m + k))
        )
        term_pow *= q
    out -= (1 / mp.pi) * (zeta / 2) ** m * tail
    return complex(out)


def hankel1_series(m: int, zeta) -> complex:
    """H^(1)_m = J_m + i Y_m summed at high precision (integer orders)."""
    zeta = mp.mpmathify(zeta)
    q = -(zeta / 2) ** 2

    def j_mp(order):
        total = mp.mpf(0)
        term_pow = mp.mpf(1)
        for k in range(SERIES_TERMS):
            total += term_pow / (mp.factorial(k) * mp.factorial(order + k))
            term_pow *= q
        return total * (zeta / 2) ** order

    jm = j_mp(m)
    y = (2 / mp.pi) * mp.log(zeta / 2) * jm
    qq = (zeta / 2) ** 2
    finite = mp.mpf(0)
    for k in range(m):
        finite += mp.factorial(m - 1 - k) / mp.factorial(k) * qq**k
    y -= (1 / mp.pi) * (zeta / 2) ** (-m) * finite
    tail = mp.mpf(0)
    term_pow = mp.mpf(1)
    for k in range(SERIES_TERMS):
        tail += (
            (mp.digamma(k + 1) + mp.digamma(m + k + 1))
            * term_pow
            / (mp.factorial(k) * mp.factorial(m + k))
        )
        term_pow *= q
    y -= (1 / mp.pi) * (zeta / 2) ** m * tail
    return complex(jm + 1j * y)


def hankel1_half_series(nu, zeta) -> complex:
    """Half-integer H^(1)_nu via the reflection formula for Y at high precision."""
    zeta = mp.mpmathify(zeta)
    nu = mp.mpf(nu)

    def j_mp(order):
        q = -(zeta / 2) ** 2
        total = mp.mpf(0)
        term_pow = mp.mpf(1)
        for k in range(SERIES_TERMS):
            total += term_pow / (mp.factorial(k) * mp.gamma(order + k + 1))
            term_pow *= q
        return total * (zeta / 2) ** order

    jp = j_mp(nu)
    jn = j_mp(-nu)
    y = (jp * mp.cos(nu * mp.pi) - jn) / mp.sin(nu * mp.pi)
    return complex(jp + 1j * y)
