"""Pure-Python implementation of the Renyi robustness bound and its supremum.

This module mirrors ``_bound.pyx`` line for line and is used when the
compiled extension is unavailable (or when ``SMOOTHCERT_PURE=1``).
"""
import math

LN2 = math.log(2.0)
INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0

ALPHA_MIN = 1.0 + 1e-6
ALPHA_MAX = 1e6
GRID_POINTS = 200


def _log_cosh(u):
    u = abs(u)
    if u < 0.5:
        s = math.sinh(0.5 * u)
        return math.log1p(2.0 * s * s)
    return u + math.log1p(math.exp(-2.0 * u)) - LN2


def log_power_mean(alpha, log_p1, log_p2):
    """Log of ``(0.5 * (p1**(1-a) + p2**(1-a)))**(1/(1-a))`` from log inputs."""
    t = 1.0 - alpha
    mid = 0.5 * (log_p1 + log_p2)
    return mid + _log_cosh(0.5 * t * (log_p1 - log_p2)) / t


def bound_b(alpha, p1, p2):
    """-(1/alpha) * log(1 - p1 - p2 + 2 * M_{1-alpha}(p1, p2))."""
    lm = log_power_mean(alpha, math.log(p1), math.log(p2))
    x = 2.0 * math.exp(lm) - p1 - p2
    if x <= -1.0:
        return math.inf
    return -math.log1p(x) / alpha


def _objective(u, p1, p2):
    return bound_b(1.0 + math.exp(u), p1, p2)


def sup_bound(p1, p2, alpha_min=ALPHA_MIN, alpha_max=ALPHA_MAX,
              n_grid=GRID_POINTS, tol=1e-10, max_iter=200):
    """Maximise ``bound_b`` over alpha.

    Returns ``(eps_star, alpha_star, converged)``. The search runs on
    ``u = log(alpha - 1)``: a coarse grid followed by golden-section
    refinement between the neighbours of the grid argmax.
    """
    if not p1 > p2:
        return 0.0, alpha_min, False
    u_lo = math.log(alpha_min - 1.0)
    u_hi = math.log(alpha_max - 1.0)
    step = (u_hi - u_lo) / (n_grid - 1)
    best_i = 0
    best_f = -math.inf
    for i in range(n_grid):
        f = _objective(u_lo + i * step, p1, p2)
        if f > best_f:
            best_f = f
            best_i = i
    if best_i == 0 or best_i == n_grid - 1:
        return best_f, 1.0 + math.exp(u_lo + best_i * step), False

    a = u_lo + (best_i - 1) * step
    b = u_lo + (best_i + 1) * step
    c = b - INV_PHI * (b - a)
    d = a + INV_PHI * (b - a)
    fc = _objective(c, p1, p2)
    fd = _objective(d, p1, p2)
    it = 0
    while b - a > tol and it < max_iter:
        if fc > fd:
            b = d
            d = c
            fd = fc
            c = b - INV_PHI * (b - a)
            fc = _objective(c, p1, p2)
        else:
            a = c
            c = d
            fc = fd
            d = a + INV_PHI * (b - a)
            fd = _objective(d, p1, p2)
        it += 1
    if fc > fd:
        u_star, f_star = c, fc
    else:
        u_star, f_star = d, fd
    if best_f > f_star:
        u_star, f_star = u_lo + best_i * step, best_f
    return f_star, 1.0 + math.exp(u_star), True
