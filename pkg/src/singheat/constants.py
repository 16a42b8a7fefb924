"""Scalar constants of the problem, special functions, and the threshold.

Everything here is a radial integral against the Gaussian exp(-r^2/4) or a
Beta-type integral on (0, 1).  The adaptive quadrature is QUADPACK through
scipy, with the algebraic-weight variant on [0, 1] whenever the radial
measure r^{N-1-gamma} dr carries a negative power; Gaussian tails are cut at
r = 44 where the factor exp(-r^2/4) is below 1e-210.

Naming: eta0 drives the sub-solution coefficient, eta1 the smoothing rate of
the weighted semigroup, eta2 the crude weighted-kernel bound, beta_gamma the
time integral of the Duhamel singularity, and lambda_gamma the contraction
factor q * beta * eta2 / ((1-q) * eta0) whose first crossing of 1 in gamma is
gamma_star.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import NamedTuple

import numpy as np
from scipy import integrate

from .errors import ParameterError, SeriesRangeError
from .fields import Params

__all__ = [
    "ConstantsReport",
    "GammaStarResult",
    "beta_gamma",
    "ck_fixed_point",
    "ck_lower_bound",
    "ck_sequence",
    "constants_report",
    "eta0",
    "eta1",
    "eta1_by_quadrature",
    "eta2",
    "eta_k",
    "eta_k_limit",
    "gamma_fn",
    "gamma_star",
    "lambda_gamma",
    "mittag_leffler",
    "sphere_area",
]

_TAIL_RADIUS = 44.0  # exp(-44^2/4) ~ 1e-210, far below every tolerance used
_QUAD_OPTS = dict(epsabs=1e-12, epsrel=1e-12, limit=400)


def gamma_fn(x: float) -> float:
    """Euler Gamma function for real x > 0."""
    if not (math.isfinite(x) and x > 0.0):
        raise ParameterError(f"gamma_fn requires x > 0 (got {x})")
    return math.gamma(x)


def sphere_area(n_dim: int) -> float:
    """Surface measure of the unit sphere in R^n: 2 pi^{n/2} / Gamma(n/2)."""
    if n_dim < 1:
        raise ParameterError(f"dimension must be >= 1 (got {n_dim})")
    return 2.0 * math.pi ** (0.5 * n_dim) / math.gamma(0.5 * n_dim)


def _radial_integral(smooth, n_dim: int, sing_pow: float) -> float:
    """Integral over (0, inf) of smooth(r) * r^{n_dim - 1 - sing_pow} dr.

    ``smooth`` must be bounded near 0 and Gaussian-small past _TAIL_RADIUS;
    ``sing_pow`` < n_dim keeps the power integrable at the origin.
    """
    expo = n_dim - 1.0 - sing_pow
    if expo < 0.0:
        head, _ = integrate.quad(smooth, 0.0, 1.0, weight="alg", wvar=(expo, 0.0), **_QUAD_OPTS)
    else:
        head, _ = integrate.quad(lambda r: smooth(r) * r**expo, 0.0, 1.0, **_QUAD_OPTS)
    tail, _ = integrate.quad(lambda r: smooth(r) * r**expo, 1.0, _TAIL_RADIUS, **_QUAD_OPTS)
    return head + tail


@lru_cache(maxsize=4096)
def eta0(q: float, gamma: float, n_dim: int) -> float:
    """Normalized Gaussian moment of (1 + |z|)^{-gamma/(1-q)}.

    (4 pi)^{-N/2} * integral over R^N of exp(-|z|^2/4) (1+|z|)^{-gamma/(1-q)} dz.
    Lies in (0, 1], equals 1 exactly at gamma = 0, and is strictly decreasing
    in gamma.
    """
    Params(q=q, gamma=gamma, n_dim=n_dim)  # validates the full triple
    if gamma == 0.0:
        return 1.0  # the integrand reduces to the unit-mass Gaussian
    s = gamma / (1.0 - q)
    val = _radial_integral(lambda r: math.exp(-0.25 * r * r) * (1.0 + r) ** (-s), n_dim, 0.0)
    out = (4.0 * math.pi) ** (-0.5 * n_dim) * sphere_area(n_dim) * val
    if not (0.0 < out <= 1.0 + 1e-10):
        raise ParameterError(f"eta0 left its admissible range (0, 1]: {out}")
    return min(out, 1.0)


@lru_cache(maxsize=4096)
def eta1(gamma: float, n_dim: int) -> float:
    """Weighted-kernel smoothing constant, in closed form.

    (4 pi)^{-N/2} * integral of exp(-|y|^2/4) |y|^{-gamma} dy over R^N.  The
    substitution u = r^2/4 turns the radial integral into a Gamma integral,
    giving (4 pi)^{-N/2} * omega_{N-1} * 2^{N-1-gamma} * Gamma((N-gamma)/2)
    with omega_{N-1} the unit-sphere area.  Diverges as gamma -> N, hence the
    domain restriction gamma < N.
    """
    if n_dim not in (1, 2, 3):
        raise ParameterError(f"n_dim must be one of 1, 2, 3 (got {n_dim})")
    if not (0.0 <= gamma < n_dim):
        raise ParameterError(
            f"eta1 requires 0 <= gamma < n_dim: the defining integral diverges "
            f"at gamma = {gamma}, n_dim = {n_dim}"
        )
    return (
        (4.0 * math.pi) ** (-0.5 * n_dim)
        * sphere_area(n_dim)
        * 2.0 ** (n_dim - 1.0 - gamma)
        * math.gamma(0.5 * (n_dim - gamma))
    )


def eta1_by_quadrature(gamma: float, n_dim: int) -> float:
    """Same constant through adaptive quadrature; cross-check of eta1."""
    if n_dim not in (1, 2, 3):
        raise ParameterError(f"n_dim must be one of 1, 2, 3 (got {n_dim})")
    if not (0.0 <= gamma < n_dim):
        raise ParameterError(f"requires 0 <= gamma < n_dim (got {gamma}, {n_dim})")
    val = _radial_integral(lambda r: math.exp(-0.25 * r * r), n_dim, gamma)
    return (4.0 * math.pi) ** (-0.5 * n_dim) * sphere_area(n_dim) * val


@lru_cache(maxsize=4096)
def eta2(gamma: float, n_dim: int) -> float:
    """Crude bound constant for the weighted kernel.

    (4 pi)^{-N/2} * 2^{gamma/2} * [ integral_{|y|>=1} exp(-|y|^2/4) dy
    + integral_{|y|<=1} exp(-|y|^2/4) |y|^{-gamma} dy ].  Finite for
    gamma < N and divergent as gamma -> N through the inner piece.
    """
    if n_dim not in (1, 2, 3):
        raise ParameterError(f"n_dim must be one of 1, 2, 3 (got {n_dim})")
    if not (0.0 <= gamma < n_dim):
        raise ParameterError(
            f"eta2 requires 0 <= gamma < n_dim: the inner integral diverges "
            f"at gamma = {gamma}, n_dim = {n_dim}"
        )
    expo = n_dim - 1.0 - gamma
    gauss = lambda r: math.exp(-0.25 * r * r)
    if expo < 0.0:
        inner, _ = integrate.quad(gauss, 0.0, 1.0, weight="alg", wvar=(expo, 0.0), **_QUAD_OPTS)
    else:
        inner, _ = integrate.quad(lambda r: gauss(r) * r**expo, 0.0, 1.0, **_QUAD_OPTS)
    outer, _ = integrate.quad(lambda r: gauss(r) * r ** (n_dim - 1.0), 1.0, _TAIL_RADIUS, **_QUAD_OPTS)
    return (
        (4.0 * math.pi) ** (-0.5 * n_dim)
        * 2.0 ** (0.5 * gamma)
        * sphere_area(n_dim)
        * (inner + outer)
    )


@lru_cache(maxsize=4096)
def beta_gamma(q: float, gamma: float) -> float:
    """Time-singularity integral of one Duhamel sweep.

    Integral over (0, 1) of sigma^{(2-gamma)/(2(1-q)) - 1} (1-sigma)^{-gamma/2}
    d sigma, which is the Beta function B((2-gamma)/(2(1-q)), 1 - gamma/2).
    Computed by algebraic-weight quadrature and checked against the Gamma
    closed form.
    """
    if not (0.0 < q < 1.0):
        raise ParameterError(f"q must lie in (0, 1) (got {q})")
    if not (0.0 <= gamma < 2.0):
        raise ParameterError(f"gamma must lie in [0, 2) (got {gamma})")
    a = (2.0 - gamma) / (2.0 * (1.0 - q))
    b = 1.0 - 0.5 * gamma
    val, _ = integrate.quad(
        lambda s: 1.0, 0.0, 1.0, weight="alg", wvar=(a - 1.0, b - 1.0), **_QUAD_OPTS
    )
    closed = math.exp(math.lgamma(a) + math.lgamma(b) - math.lgamma(a + b))
    if abs(val - closed) > 1e-10 * max(1.0, abs(closed)):
        raise ParameterError(
            f"beta_gamma quadrature {val} drifted from the Gamma-function form {closed}"
        )
    return val


@lru_cache(maxsize=4096)
def eta_k(q: float, gamma: float, n_dim: int, k: int) -> float:
    """k-th iterated-bound moment.

    (4 pi)^{-N/2} * integral of exp(-|w|^2/4) (1+|w|)^{-gamma}
    (2+|w|)^{-gamma q (1 - q^k)/(1 - q)} dw.  Decreasing in k; the k -> inf
    limit replaces the second exponent by gamma q/(1-q) (see eta_k_limit).
    """
    Params(q=q, gamma=gamma, n_dim=n_dim)
    if not isinstance(k, int) or k < 1:
        raise ParameterError(f"k must be an integer >= 1 (got {k})")
    s = gamma * q * (1.0 - q**k) / (1.0 - q)
    return _eta_k_integral(gamma, s, n_dim)


def eta_k_limit(q: float, gamma: float, n_dim: int) -> float:
    """Limit of eta_k as k -> inf (second exponent gamma q / (1-q))."""
    Params(q=q, gamma=gamma, n_dim=n_dim)
    return _eta_k_integral(gamma, gamma * q / (1.0 - q), n_dim)


def _eta_k_integral(gamma: float, second_exp: float, n_dim: int) -> float:
    val = _radial_integral(
        lambda r: math.exp(-0.25 * r * r)
        * (1.0 + r) ** (-gamma)
        * (2.0 + r) ** (-second_exp),
        n_dim,
        0.0,
    )
    return (4.0 * math.pi) ** (-0.5 * n_dim) * sphere_area(n_dim) * val


def lambda_gamma(q: float, gamma: float, n_dim: int) -> float:
    """Contraction factor q * beta_gamma * eta2 / ((1 - q) * eta0)."""
    Params(q=q, gamma=gamma, n_dim=n_dim)
    return (
        q
        * beta_gamma(q, gamma)
        * eta2(gamma, n_dim)
        / ((1.0 - q) * eta0(q, gamma, n_dim))
    )


class GammaStarResult(NamedTuple):
    """First crossing of lambda_gamma through 1 on (0, min(2, N))."""

    value: float
    crossed: bool
    lambda_value: float


def gamma_star(q: float, n_dim: int, scan_points: int = 256, value_tol: float = 1e-8) -> GammaStarResult:
    """Smallest gamma with lambda_gamma(q, gamma, n_dim) = 1.

    A uniform scan over (0, gamma_sup) locates the first sign change of
    lambda - 1 without assuming monotonicity, and bisection refines it until
    |lambda - 1| <= value_tol.  If the scan sees no crossing the result
    carries the right endpoint and crossed=False.
    """
    if not (0.0 < q < 1.0):
        raise ParameterError(f"q must lie in (0, 1) (got {q})")
    if n_dim not in (1, 2, 3):
        raise ParameterError(f"n_dim must be one of 1, 2, 3 (got {n_dim})")
    g_sup = float(min(2, n_dim))
    grid = g_sup * (np.arange(1, scan_points + 1)) / (scan_points + 1)
    lo = grid[0] * 1e-3  # lambda -> q < 1 as gamma -> 0, so the left end is below 1
    f_lo = lambda_gamma(q, float(lo), n_dim) - 1.0
    if f_lo >= 0.0:
        # already above 1 immediately: the crossing sits in (0, lo]
        return GammaStarResult(value=float(lo), crossed=True, lambda_value=f_lo + 1.0)
    hi = None
    for g in grid:
        f_g = lambda_gamma(q, float(g), n_dim) - 1.0
        if f_g >= 0.0:
            hi = float(g)
            break
        lo = float(g)
    if hi is None:
        lam_end = lambda_gamma(q, float(grid[-1]), n_dim)
        return GammaStarResult(value=g_sup, crossed=False, lambda_value=lam_end)
    mid = 0.5 * (lo + hi)
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        f_mid = lambda_gamma(q, mid, n_dim) - 1.0
        if abs(f_mid) <= value_tol:
            return GammaStarResult(value=mid, crossed=True, lambda_value=f_mid + 1.0)
        if f_mid < 0.0:
            lo = mid
        else:
            hi = mid
    return GammaStarResult(value=mid, crossed=True, lambda_value=lambda_gamma(q, mid, n_dim))


def mittag_leffler(sigma: float, z: float) -> float:
    """One-parameter Mittag-Leffler function E_sigma(z) = sum z^n / Gamma(n sigma + 1).

    Series evaluation in log space; terms stop once below
    1e-14 * (1 + |partial sum|) past the term peak.  Restricted to |z| <= 50,
    and aborts if any term would overflow double precision (both raise
    SeriesRangeError).  E_1 = exp and E_2(z) = cosh(sqrt z) for z >= 0.
    """
    if not (math.isfinite(sigma) and sigma > 0.0):
        raise ParameterError(f"sigma must be positive (got {sigma})")
    if not math.isfinite(z) or abs(z) > 50.0:
        raise SeriesRangeError(f"series evaluation restricted to |z| <= 50 (got {z})")
    if z == 0.0:
        return 1.0
    ln_az = math.log(abs(z))
    # terms can grow before they decay; do not stop before the peak index
    n_peak = int(abs(z) ** (1.0 / sigma)) + 2
    total = 1.0  # n = 0 term
    n = 1
    while True:
        ln_term = n * ln_az - math.lgamma(n * sigma + 1.0)
        if ln_term > 700.0:
            raise SeriesRangeError(
                f"term {n} of E_{sigma}({z}) exceeds the double-precision range"
            )
        term = math.exp(ln_term)
        if z < 0.0 and n % 2 == 1:
            term = -term
        total += term
        if abs(term) < 1e-14 * (1.0 + abs(total)) and n >= n_peak:
            return total
        n += 1
        if n > 200_000:
            raise SeriesRangeError(f"series for E_{sigma}({z}) failed to settle")


# ---------------------------------------------------------------------------
# Constructive lower-bound recursion
# ---------------------------------------------------------------------------

def ck_fixed_point(q: float, gamma: float, n_dim: int) -> float:
    """Fixed point [(1-q) eta0]^{1/(1-q)} of the coefficient recursion (equal
    to the sub-solution coefficient)."""
    return ((1.0 - q) * eta0(q, gamma, n_dim)) ** (1.0 / (1.0 - q))


def ck_lower_bound(q: float, gamma: float, n_dim: int, c1: float, k: int) -> float:
    """Closed-form floor c1^{q^k} * [eta0 (1-q)]^{(1 - q^{k-1})/(1 - q)}.

    Provable against the recursion for seeds c1 >= 1 (induction from
    C_1 = c1 >= c1^q); for c1 < 1 the k = 1 base inequality c1 >= c1^q fails,
    so the floor is only meaningful for unit-or-larger seeds.
    """
    if c1 <= 0.0:
        raise ParameterError(f"c1 must be positive (got {c1})")
    if k < 1:
        raise ParameterError(f"k must be >= 1 (got {k})")
    e0 = eta0(q, gamma, n_dim)
    expo = (1.0 - q ** (k - 1)) / (1.0 - q)
    return c1 ** (q**k) * (e0 * (1.0 - q)) ** expo


def ck_sequence(q: float, gamma: float, n_dim: int, c1: float, k_max: int) -> dict:
    """Coefficient recursion C_{k+1} = eta0 * C_k^q * (1-q)/(1 - q^{k+1}).

    Starts from C_1 = c1 > 0 and iterates to C_{k_max}.  Returns the sequence
    together with the fixed point and the terminal distance to it.  The
    recursion contracts (exponent q < 1), so any positive seed converges; a
    non-finite intermediate aborts with a diagnostic.
    """
    Params(q=q, gamma=gamma, n_dim=n_dim)
    if not (math.isfinite(c1) and c1 > 0.0):
        raise ParameterError(f"c1 must be positive and finite (got {c1})")
    if not isinstance(k_max, int) or k_max < 2:
        raise ParameterError(f"k_max must be an integer >= 2 (got {k_max})")
    e0 = eta0(q, gamma, n_dim)
    seq = [float(c1)]
    for k in range(1, k_max):
        nxt = e0 * seq[-1] ** q * (1.0 - q) / (1.0 - q ** (k + 1))
        if not math.isfinite(nxt) or nxt <= 0.0:
            raise ParameterError(
                f"coefficient recursion left the positive reals at step {k + 1} "
                f"(value {nxt}) from seed c1 = {c1}"
            )
        seq.append(nxt)
    fp = ck_fixed_point(q, gamma, n_dim)
    return {
        "sequence": seq,
        "fixed_point": fp,
        "final_gap": abs(seq[-1] - fp),
    }


# ---------------------------------------------------------------------------
# Bundled report
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ConstantsReport:
    """All scalar constants for one parameter triple, plus the quadrature
    tolerance they were computed at."""

    params: Params
    eta0: float
    eta1: float
    eta2: float
    beta: float
    lam: float
    quadrature_tolerance: float = 1e-10

    def __post_init__(self) -> None:
        if not (0.0 < self.eta0 <= 1.0 + self.quadrature_tolerance):
            raise ParameterError(f"eta0 outside (0, 1]: {self.eta0}")
        for name in ("eta1", "eta2", "beta", "lam"):
            if getattr(self, name) <= 0.0:
                raise ParameterError(f"{name} must be positive: {getattr(self, name)}")
        if self.params.gamma == 0.0 and abs(self.eta0 - 1.0) > self.quadrature_tolerance:
            raise ParameterError(f"eta0 must equal 1 at gamma = 0 (got {self.eta0})")

    def as_json_dict(self) -> dict:
        return {
            "q": self.params.q,
            "gamma": self.params.gamma,
            "n_dim": self.params.n_dim,
            "eta0": self.eta0,
            "eta1": self.eta1,
            "eta2": self.eta2,
            "beta": self.beta,
            "lambda": self.lam,
            "tolerance": self.quadrature_tolerance,
        }


def constants_report(params: Params) -> ConstantsReport:
    """Compute every scalar constant for one parameter triple."""
    q, g, n = params.q, params.gamma, params.n_dim
    return ConstantsReport(
        params=params,
        eta0=eta0(q, g, n),
        eta1=eta1(g, n),
        eta2=eta2(g, n),
        beta=beta_gamma(q, g),
        lam=lambda_gamma(q, g, n),
    )
