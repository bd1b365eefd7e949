# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels for the Renyi robustness bound and its supremum over alpha.

Keep in sync with ``_bound_py.py``; both must return identical results up to
floating-point rounding of the libm calls.
"""
from libc.math cimport log, log1p, exp, sinh, fabs, sqrt, INFINITY

cdef double LN2 = log(2.0)
cdef double INV_PHI = (sqrt(5.0) - 1.0) / 2.0

ALPHA_MIN = 1.0 + 1e-6
ALPHA_MAX = 1e6
GRID_POINTS = 200


cdef inline double _log_cosh(double u) nogil:
    cdef double s
    u = fabs(u)
    if u < 0.5:
        s = sinh(0.5 * u)
        return log1p(2.0 * s * s)
    return u + log1p(exp(-2.0 * u)) - LN2


cdef inline double _log_power_mean(double alpha, double log_p1, double log_p2) nogil:
    cdef double t = 1.0 - alpha
    return 0.5 * (log_p1 + log_p2) + _log_cosh(0.5 * t * (log_p1 - log_p2)) / t


cdef inline double _bound(double alpha, double p1, double p2, double lp1, double lp2) nogil:
    cdef double x = 2.0 * exp(_log_power_mean(alpha, lp1, lp2)) - p1 - p2
    if x <= -1.0:
        return INFINITY
    return -log1p(x) / alpha


cdef inline double _objective(double u, double p1, double p2, double lp1, double lp2) nogil:
    return _bound(1.0 + exp(u), p1, p2, lp1, lp2)


def log_power_mean(double alpha, double log_p1, double log_p2):
    """Log of ``(0.5 * (p1**(1-a) + p2**(1-a)))**(1/(1-a))`` from log inputs."""
    return _log_power_mean(alpha, log_p1, log_p2)


def bound_b(double alpha, double p1, double p2):
    """-(1/alpha) * log(1 - p1 - p2 + 2 * M_{1-alpha}(p1, p2))."""
    return _bound(alpha, p1, p2, log(p1), log(p2))


def sup_bound(double p1, double p2, double alpha_min=ALPHA_MIN,
              double alpha_max=ALPHA_MAX, int n_grid=GRID_POINTS,
              double tol=1e-10, int max_iter=200):
    """Maximise ``bound_b`` over alpha; returns ``(eps_star, alpha_star, converged)``."""
    cdef double u_lo, u_hi, step, f, best_f, a, b, c, d, fc, fd, u_star, f_star
    cdef double lp1, lp2
    cdef int i, best_i, it
    if not p1 > p2:
        return 0.0, alpha_min, False
    lp1 = log(p1)
    lp2 = log(p2)
    with nogil:
        u_lo = log(alpha_min - 1.0)
        u_hi = log(alpha_max - 1.0)
        step = (u_hi - u_lo) / (n_grid - 1)
        best_i = 0
        best_f = -INFINITY
        for i in range(n_grid):
            f = _objective(u_lo + i * step, p1, p2, lp1, lp2)
            if f > best_f:
                best_f = f
                best_i = i
    if best_i == 0 or best_i == n_grid - 1:
        return best_f, 1.0 + exp(u_lo + best_i * step), False

    with nogil:
        a = u_lo + (best_i - 1) * step
        b = u_lo + (best_i + 1) * step
        c = b - INV_PHI * (b - a)
        d = a + INV_PHI * (b - a)
        fc = _objective(c, p1, p2, lp1, lp2)
        fd = _objective(d, p1, p2, lp1, lp2)
        it = 0
        while b - a > tol and it < max_iter:
            if fc > fd:
                b = d
                d = c
                fd = fc
                c = b - INV_PHI * (b - a)
                fc = _objective(c, p1, p2, lp1, lp2)
            else:
                a = c
                c = d
                fc = fd
                d = a + INV_PHI * (b - a)
                fd = _objective(d, p1, p2, lp1, lp2)
            it += 1
        if fc > fd:
            u_star = c
            f_star = fc
        else:
            u_star = d
            f_star = fd
        if best_f > f_star:
            u_star = u_lo + best_i * step
            f_star = best_f
    return f_star, 1.0 + exp(u_star), True
