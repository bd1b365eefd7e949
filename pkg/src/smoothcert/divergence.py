"""Renyi and maximal-relative Renyi (MR) divergences, plus conversions.

The MR divergence of ``P`` and ``Q`` is ``max_{alpha > 1} D_alpha(P||Q) / alpha``.
For general mechanisms the maximum is taken over a finite grid of orders
(:func:`mr_over_grid`); for equal-covariance Gaussians it is closed form.
"""
import math

import numpy as np
from scipy.special import logsumexp

from .errors import DivergenceUndefinedError, InvalidParameterError

PROB_FLOOR = 1e-12

# Default orders for sup-over-grid MR evaluation: log-spaced in (alpha - 1).
DEFAULT_ALPHAS = 1.0 + np.logspace(-6, 6, 241)


def _check_alpha(alpha):
    if not alpha > 1:
        raise InvalidParameterError(f"Renyi order must exceed 1, got {alpha}")


def renyi_gaussian(alpha, dist, sigma):
    """``D_alpha(N(x, s^2 I) || N(x', s^2 I)) = alpha * dist^2 / (2 s^2)``."""
    _check_alpha(alpha)
    if not sigma > 0:
        raise InvalidParameterError("sigma must be positive")
    if dist < 0:
        raise InvalidParameterError("distance must be nonnegative")
    if dist == 0:
        return 0.0
    return alpha * dist * dist / (2.0 * sigma * sigma)


def mr_gaussian(dist, sigma):
    """MR divergence between two isotropic Gaussians at l2 distance ``dist``.

    ``D_alpha / alpha`` does not depend on alpha here, so the maximum is
    ``dist^2 / (2 sigma^2)``.
    """
    if not sigma > 0:
        raise InvalidParameterError("sigma must be positive")
    if dist < 0:
        raise InvalidParameterError("distance must be nonnegative")
    return dist * dist / (2.0 * sigma * sigma)


def mr_over_grid(divergence_at, alphas=None):
    """Sup-over-grid MR divergence: ``max_i divergence_at(a_i) / a_i``.

    Returns ``(value, argmax_alpha)``. The true MR divergence is a supremum
    over an open interval and need not be attained; the grid value is a
    lower estimate of it.
    """
    alphas = DEFAULT_ALPHAS if alphas is None else np.asarray(alphas, dtype=float)
    ratios = np.array([divergence_at(a) / a for a in alphas])
    i = int(np.argmax(ratios))
    return float(ratios[i]), float(alphas[i])


def dmr_to_pixeldp(eps, delta):
    """PixelDP epsilon implied by an MR budget: ``eps + 2 sqrt(eps ln(1/delta))``.

    This is the minimum over alpha of ``alpha eps + ln(1/delta) / (alpha - 1)``.
    """
    if eps < 0:
        raise InvalidParameterError("eps must be nonnegative")
    if not 0 < delta < 1:
        raise InvalidParameterError("delta must lie in (0, 1)")
    return eps + 2.0 * math.sqrt(eps * math.log(1.0 / delta))


def rdp_to_dp_epsilon(alpha, eps, delta):
    """``alpha * eps + ln(1/delta) / (alpha - 1)``: the (eps', delta)-DP epsilon at order alpha."""
    _check_alpha(alpha)
    return alpha * eps + math.log(1.0 / delta) / (alpha - 1.0)


def dinf_to_renyi(eps_inf, alpha):
    """Bound ``D_alpha <= alpha eps_inf^2 / 2`` for a pair with both max-divergences <= eps_inf."""
    if eps_inf < 0:
        raise InvalidParameterError("eps_inf must be nonnegative")
    _check_alpha(alpha)
    return 0.5 * alpha * eps_inf * eps_inf


def _as_distribution(p, name):
    p = np.asarray(p, dtype=float)
    if p.ndim != 1 or p.size == 0:
        raise InvalidParameterError(f"{name} must be a nonempty 1-D array")
    if np.any(p < 0) or not np.all(np.isfinite(p)):
        raise InvalidParameterError(f"{name} must be finite and nonnegative")
    total = p.sum()
    if total <= 0:
        raise InvalidParameterError(f"{name} has zero mass")
    return p / total


def renyi_empirical(p, q, alpha, floor=None):
    """Renyi divergence ``D_alpha(P||Q)`` of two discrete distributions.

    Evaluated as ``logsumexp(alpha log P + (1 - alpha) log Q) / (alpha - 1)``
    so that extreme orders and tiny masses neither overflow nor underflow.
    ``alpha = inf`` gives the max-divergence ``log max P/Q``.

    Parameters
    ----------
    p, q : array_like
        Nonnegative weights over the same support; normalised internally.
    alpha : float
        Order, strictly greater than 1.
    floor : float, optional
        If given (e.g. ``PROB_FLOOR``), every mass is raised to at least
        ``floor`` and both distributions renormalised before evaluation.
        By default zeros in ``q`` under positive ``p`` raise.
    """
    _check_alpha(alpha)
    p = _as_distribution(p, "P")
    q = _as_distribution(q, "Q")
    if p.shape != q.shape:
        raise InvalidParameterError("P and Q must share a support")
    if floor is not None:
        p = np.maximum(p, floor)
        p /= p.sum()
        q = np.maximum(q, floor)
        q /= q.sum()
    support = p > 0
    if np.any(support & (q == 0)):
        raise DivergenceUndefinedError("P has mass where Q has none")
    lp = np.log(p[support])
    lq = np.log(q[support])
    if math.isinf(alpha):
        value = float(np.max(lp - lq))
    else:
        value = float(logsumexp(alpha * lp + (1.0 - alpha) * lq) / (alpha - 1.0))
    return max(value, 0.0)
