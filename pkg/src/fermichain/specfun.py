"""Self-contained special functions used throughout the library.

Riemann zeta (nu > 1), the polylogarithm on the unit circle, the real part
of the digamma function on the critical line Re z = 1/2, the Barnes-G pair
product log[G(1+beta)G(1-beta)], and the Renyi entropy kernel s_alpha(x).

All routines are pure functions of their arguments (no shared mutable
state), so they are safe to call concurrently.
"""

import math
import cmath
import warnings

import numpy as np
from scipy.integrate import IntegrationWarning, quad

from .errors import AccuracyError, DomainError

# Euler-Mascheroni constant, 20 digits
EULER_GAMMA = 0.57721566490153286061

_TWO_PI = 2.0 * math.pi


# ---------------------------------------------------------------------------
# Riemann zeta

def zeta(nu):
    """zeta(nu) for real nu > 1 by direct sum plus Euler-Maclaurin tail."""
    nu = float(nu)
    if not nu > 1.0:
        raise DomainError(f"zeta requires nu > 1, got {nu}")
    N = 24
    s = sum(j ** (-nu) for j in range(1, N))
    x = N ** (-nu)
    s += N * x / (nu - 1.0) + 0.5 * x + nu * x / (12.0 * N)
    s -= nu * (nu + 1) * (nu + 2) * x / (720.0 * N ** 3)
    s += nu * (nu + 1) * (nu + 2) * (nu + 3) * (nu + 4) * x / (30240.0 * N ** 5)
    s -= (nu * (nu + 1) * (nu + 2) * (nu + 3) * (nu + 4) * (nu + 5) * (nu + 6)
          * x / (1209600.0 * N ** 7))
    return s


def _zeta_tail(s, M):
    # sum_{n >= M} n^{-s} for integer s >= 3, M >= 10 (Euler-Maclaurin)
    x = M ** (-float(s))
    return (M * x / (s - 1.0) + 0.5 * x + s * x / (12.0 * M)
            - s * (s + 1) * (s + 2) * x / (720.0 * M ** 3))


# ---------------------------------------------------------------------------
# Polylogarithm on the unit circle

def exp_tail_cutoff(nu):
    """Upper limit beyond which x^{nu-1} e^{-x} is negligible next to Gamma(nu)."""
    upper = 45.0 + math.lgamma(nu)
    upper += (nu - 1.0) * math.log(max(upper, 2.0))
    return min(upper, 400.0)


def quad_breakpoints(s, upper):
    """Breakpoints bracketing the near-pole scale s for adaptive quadrature."""
    pts = sorted({s / 4.0, s, 4.0 * s, 16.0 * s, 1.0, 5.0})
    return [t for t in pts if 0.0 < t < upper]


def polylog_circle(nu, p):
    """Li_nu(e^{ip}) for nu > 1, p in [0, 2*pi], as a complex number.

    Evaluated through the real integral representation

        Li_nu(e^{ip}) = (1/Gamma(nu)) int_0^inf x^{nu-1}
                        (e^{-x} cos p - e^{-2x} + i e^{-x} sin p)
                        / (1 - 2 e^{-x} cos p + e^{-2x}) dx,

    which is smooth away from x = 0 and cheap to integrate adaptively.
    Term-by-term summation of the defining series converges like j^{-nu}
    and is far too slow near p = 0 for nu close to 1.
    """
    nu = float(nu)
    if not nu > 1.0:
        raise DomainError(f"polylog_circle requires nu > 1, got {nu}")
    p = float(p)
    if p < 0.0 or p > _TWO_PI:
        p = p % _TWO_PI
    s = min(p, _TWO_PI - p)  # distance to the singular point z = 1
    if s == 0.0:
        return complex(zeta(nu), 0.0)
    if nu >= 25.0:
        # series already converges geometrically fast here
        j = np.arange(1, 61)
        z = np.exp(1j * p * j) / j ** nu
        return complex(z.sum())

    sinp = math.sin(p)
    sh2 = math.sin(0.5 * p) ** 2
    # cancellation-free pieces: u = 1 - e^{-x} exactly, and the denominator
    # d = u^2 + 4 e^{-x} sin^2(p/2) stays positive down to the last bit

    def _re(x):
        em = math.exp(-x)
        u = -math.expm1(-x)
        d = u * u + 4.0 * em * sh2
        return x ** (nu - 1.0) * em * (u - 2.0 * sh2) / d

    def _im(x):
        em = math.exp(-x)
        u = -math.expm1(-x)
        d = u * u + 4.0 * em * sh2
        return x ** (nu - 1.0) * em * sinp / d

    upper = exp_tail_cutoff(nu)
    pts = quad_breakpoints(s, upper)

    with warnings.catch_warnings():
        # accuracy is gated on the returned error estimates below
        warnings.simplefilter("ignore", IntegrationWarning)
        re, re_err = quad(_re, 0.0, upper, points=pts, limit=300,
                          epsabs=1e-12, epsrel=1e-11)[:2]
        im, im_err = quad(_im, 0.0, upper, points=pts, limit=300,
                          epsabs=1e-12, epsrel=1e-11)[:2]
    achieved = re_err + im_err
    gam = math.gamma(nu)
    if achieved / gam > 1e-10:
        raise AccuracyError(
            f"polylog quadrature reached only {achieved / gam:.3e} "
            f"(target 1e-10) at nu={nu}, p={p}",
            achieved=achieved / gam, target=1e-10)
    return complex(re / gam, im / gam)


# ---------------------------------------------------------------------------
# Digamma on the critical line

def digamma_real_part(w):
    """Re psi(1/2 + i w) by recurrence shift plus the asymptotic series."""
    w = float(w)
    if not math.isfinite(w):
        raise DomainError("digamma_real_part requires finite w")
    z = complex(0.5, w)
    acc = 0.0j
    while abs(z) < 12.0:
        acc += 1.0 / z
        z += 1.0
    zi2 = 1.0 / (z * z)
    # psi(z) ~ log z - 1/(2z) - sum B_{2k}/(2k) z^{-2k}
    series = zi2 * (1.0 / 12.0 + zi2 * (-1.0 / 120.0 + zi2 * (
        1.0 / 252.0 + zi2 * (-1.0 / 240.0 + zi2 * (
            1.0 / 132.0 + zi2 * (-691.0 / 32760.0 + zi2 * (1.0 / 12.0)))))))
    psi = cmath.log(z) - 0.5 / z - series
    return (psi - acc).real


# ---------------------------------------------------------------------------
# Barnes-G pair product

def log_barnes_pair(beta):
    """log[G(1+beta)G(1-beta)] for complex beta with |Re beta| < 1/2.

    Uses the product form

        -(1+gamma_E) beta^2 + sum_{n>=1} [ n log(1 - beta^2/n^2) + beta^2/n ]

    with the summand ~ -beta^4/(2n^3); the sum is truncated adaptively and
    the first four tail orders are restored analytically, leaving a
    residual below 1e-13 on the whole strip.
    """
    b = complex(beta)
    if abs(b.real) >= 0.5:
        raise DomainError(f"log_barnes_pair requires |Re beta| < 1/2, got {b}")
    z = b * b
    az = abs(z)
    N = 80 + int(20.0 * math.sqrt(az))
    n = np.arange(1, N + 1, dtype=float)
    terms = n * np.log(1.0 - z / n ** 2) + z / n
    total = complex(terms.sum())
    # tail: sum_{n>N} n log(1-z/n^2)+z/n = -sum_{k>=2} z^k/k sum_{n>N} n^{1-2k}
    zk = z * z
    for k in (2, 3, 4, 5):
        total -= zk / k * _zeta_tail(2 * k - 1, N + 1)
        zk = zk * z
    return -(1.0 + EULER_GAMMA) * z + total


# ---------------------------------------------------------------------------
# Entropy kernel

def entropy_kernel(alpha, x):
    """s_alpha(x) for x = 2*lambda - 1 in [-1, 1].

    s_alpha(x) = (1-alpha)^{-1} log[ ((1+x)/2)^alpha + ((1-x)/2)^alpha ],
    with the Shannon limit -sum q log q at alpha = 1 (convention
    0 log 0 = 0) and -log max(q) at alpha = inf.
    """
    alpha = float(alpha)
    if not alpha > 0.0:
        raise DomainError(f"entropy_kernel requires alpha > 0, got {alpha}")
    x = float(x)
    if x > 1.0 or x < -1.0:
        if x > 1.0 + 1e-9 or x < -1.0 - 1e-9:
            raise DomainError(f"entropy_kernel argument {x} outside [-1, 1]")
        x = max(-1.0, min(1.0, x))
    qmax = 0.5 * (1.0 + abs(x))
    qmin = 0.5 * (1.0 - abs(x))
    if math.isinf(alpha):
        return -math.log(qmax)
    if abs(alpha - 1.0) < 1e-6:
        # Shannon branch: the (1-alpha)^{-1} prefactor is ill-conditioned here
        s = -qmax * math.log(qmax)
        if qmin > 0.0:
            s -= qmin * math.log(qmin)
        return s
    if qmin == 0.0:
        return 0.0
    ratio = alpha * (math.log(qmin) - math.log(qmax))
    return (alpha * math.log(qmax) + math.log1p(math.exp(ratio))) / (1.0 - alpha)


