"""Certified radii from the Renyi-divergence robustness bound.

The bound is

    B(alpha; p1, p2) = -(1/alpha) log(1 - p1 - p2 + 2 M_{1-alpha}(p1, p2)),

where ``M_t`` is the power mean of order ``t``. Its supremum over
``alpha > 1`` is the largest MR budget under which the top class cannot
change; each mechanism turns that budget into a radius.
"""
import math
from dataclasses import dataclass

from scipy.stats import norm

from . import kernels
from .errors import DegenerateInputError, InvalidParameterError
from .mechanisms import MechanismKind

P2_FLOOR = 1e-9


@dataclass(frozen=True)
class ProbabilityPair:
    """Lower bound ``p1`` on the top-class probability, upper bound ``p2`` on the runner-up.

    ``p1 + p2 > 1`` is allowed: the two confidence bounds are not jointly
    constrained to the simplex.
    """

    p1: float
    p2: float

    def __post_init__(self):
        if not 0.0 <= self.p1 <= 1.0:
            raise InvalidParameterError(f"p1 must lie in [0, 1], got {self.p1}")
        if not 0.0 <= self.p2 <= 1.0:
            raise InvalidParameterError(f"p2 must lie in [0, 1], got {self.p2}")

    @property
    def certifiable(self):
        return self.p1 > self.p2

    def floored(self, floor=P2_FLOOR):
        return ProbabilityPair(self.p1, max(self.p2, floor))


@dataclass(frozen=True)
class SupremumResult:
    eps_star: float
    alpha_star: float
    converged: bool


def _pair(pp):
    if isinstance(pp, ProbabilityPair):
        return pp
    p1, p2 = pp
    return ProbabilityPair(float(p1), float(p2))


def bound_B(alpha, pp):
    """Evaluate the robustness bound at order ``alpha`` (log-space throughout)."""
    pp = _pair(pp)
    if not alpha > 1:
        raise InvalidParameterError(f"alpha must exceed 1, got {alpha}")
    if pp.p2 <= 0 or pp.p1 <= 0:
        raise DegenerateInputError("p2 = 0 makes p2^(1 - alpha) diverge; floor it first")
    if math.isinf(alpha):
        return 0.0
    return kernels.bound_b(float(alpha), pp.p1, pp.p2)


def bound_B_limit_alpha1(pp):
    """``lim_{alpha -> 1+} B = -log(1 - (sqrt p1 - sqrt p2)^2)``."""
    pp = _pair(pp)
    gap = math.sqrt(pp.p1) - math.sqrt(pp.p2)
    return -math.log1p(-gap * gap)


def sup_bound(pp):
    """Supremum of ``B(alpha)`` over ``alpha > 1``.

    A 200-point log grid over ``alpha in [1 + 1e-6, 1e6]`` locates the peak,
    then golden-section search refines it. ``converged`` is False when the
    grid maximum sits on the edge of the range, or when ``p1 <= p2`` (no
    certificate; ``eps_star = 0``).
    """
    pp = _pair(pp)
    if not pp.certifiable:
        return SupremumResult(0.0, kernels.ALPHA_MIN, False)
    if pp.p2 <= 0:
        raise DegenerateInputError("p2 = 0 makes the bound diverge; floor it first")
    eps, alpha, ok = kernels.sup_bound(pp.p1, pp.p2)
    return SupremumResult(max(float(eps), 0.0), float(alpha), bool(ok))


def _check_sigma(sigma):
    if not (sigma > 0 and math.isfinite(sigma)):
        raise InvalidParameterError(f"sigma must be positive, got {sigma}")


def _eps_star(pp):
    pp = _pair(pp)
    if not pp.certifiable:
        return 0.0
    return sup_bound(pp.floored()).eps_star


def radius_l2_gaussian(sigma, pp):
    """Certified l2 radius under Gaussian noise: ``sigma * sqrt(2 eps_star)``."""
    _check_sigma(sigma)
    return sigma * math.sqrt(2.0 * _eps_star(pp))


def radius_linf_from_l2(r2, d):
    """l-inf radius implied by an l2 radius in ``d`` dimensions: ``r2 / sqrt(d)``."""
    if r2 < 0 or d < 1:
        raise InvalidParameterError("need r2 >= 0 and d >= 1")
    return r2 / math.sqrt(d)


def radius_linf_exponential(sigma, pp):
    """Certified l-inf radius under l-inf Exponential noise.

    The mechanism admits two MR budgets, ``r / sigma`` and ``r^2 / (2 sigma^2)``;
    the radius is the larger of ``sigma * eps_star`` and ``sigma * sqrt(2 eps_star)``.
    """
    _check_sigma(sigma)
    eps = _eps_star(pp)
    return max(sigma * eps, sigma * math.sqrt(2.0 * eps))


def radius_lp_gaussian(r2, d, p):
    """l-p radius (``p >= 2``) implied by an l2 radius: ``r2 / d^(1/2 - 1/p)``."""
    if not p >= 2:
        raise InvalidParameterError(f"norm order must be >= 2, got {p}")
    if r2 < 0 or d < 1:
        raise InvalidParameterError("need r2 >= 0 and d >= 1")
    exponent = 0.5 if math.isinf(p) else 0.5 - 1.0 / p
    return r2 / d ** exponent


def radius_l2_cohen(sigma, pp):
    """Comparison radius ``sigma/2 (Phi^-1(p1) - Phi^-1(p2))``; 0 unless ``p1 > p2``."""
    _check_sigma(sigma)
    pp = _pair(pp)
    if not pp.certifiable:
        return 0.0
    if pp.p1 >= 1.0 or pp.p2 <= 0.0:
        raise InvalidParameterError("Cohen radius needs 0 < p2 <= p1 < 1")
    return 0.5 * sigma * (norm.ppf(pp.p1) - norm.ppf(pp.p2))


def certified_radius(kind, sigma, pp, p=2.0, d=1):
    """Radius in the l-p norm for mechanism ``kind``; returns ``(radius, SupremumResult)``.

    Gaussian supports any ``p >= 2`` (including ``inf``); the l-inf
    Exponential mechanism supports only ``p = inf``.
    """
    kind = MechanismKind.parse(kind)
    _check_sigma(sigma)
    pp = _pair(pp)
    sup = sup_bound(pp.floored()) if pp.certifiable else sup_bound(pp)
    eps = sup.eps_star
    if kind is MechanismKind.GAUSSIAN:
        r2 = sigma * math.sqrt(2.0 * eps)
        return radius_lp_gaussian(r2, d, p), sup
    if not math.isinf(p):
        raise InvalidParameterError("the l-inf Exponential mechanism certifies only the l-inf norm")
    return max(sigma * eps, sigma * math.sqrt(2.0 * eps)), sup
