"""Smoothing noise mechanisms: samplers and analytic noise magnitudes.

Random stream contract
----------------------
Every sampler is a pure function of ``(parameters, seed, draw index)``.
Draw ``i`` of a run seeded with ``seed`` lives in block ``i // BLOCK_SIZE``;
the block's generator is ``PCG64(SeedSequence(seed, spawn_key=(block,)))``.

* Gaussian: the block's rows are ``sigma * standard_normal((m, d))`` in
  row-major order, so any prefix of a block is reproducible.
* l-inf Exponential: the block seed sequence spawns two children. The first
  drives the radii ``R_i = sigma * standard_gamma(d + 1)`` (Marsaglia-Tsang
  rejection, valid for any shape), the second the cube coordinates
  ``uniform(-1, 1, (m, d))``; draw ``i`` is ``R_i * U_i``.

Because numpy's PCG64 stream is platform independent, seeds are portable.
"""
import math
from dataclasses import dataclass
from enum import Enum
from typing import NamedTuple

import numpy as np

from .errors import InvalidParameterError

BLOCK_SIZE = 64
# Largest number of float64 entries materialised at once by the streaming helpers.
_CHUNK_ENTRIES = 1 << 22


class MechanismKind(str, Enum):
    GAUSSIAN = "gaussian"
    LINF_EXPONENTIAL = "exp-linf"

    @classmethod
    def parse(cls, value):
        if isinstance(value, cls):
            return value
        aliases = {
            "gaussian": cls.GAUSSIAN,
            "gauss": cls.GAUSSIAN,
            "exp-linf": cls.LINF_EXPONENTIAL,
            "exponential": cls.LINF_EXPONENTIAL,
            "linf-exponential": cls.LINF_EXPONENTIAL,
        }
        try:
            return aliases[str(value).lower()]
        except KeyError:
            raise InvalidParameterError(
                f"unknown mechanism {value!r}; expected 'gaussian' or 'exp-linf'"
            ) from None


@dataclass(frozen=True)
class NoiseMechanism:
    """Additive smoothing noise ``z`` with scale ``sigma`` in ``dim`` dimensions.

    Gaussian has density proportional to ``exp(-|z|_2^2 / (2 sigma^2))``;
    the l-inf Exponential mechanism to ``exp(-|z|_inf / sigma)``.
    """

    kind: MechanismKind
    sigma: float
    dim: int

    def __post_init__(self):
        object.__setattr__(self, "kind", MechanismKind.parse(self.kind))
        _check_params(self.dim, self.sigma)
        object.__setattr__(self, "sigma", float(self.sigma))
        object.__setattr__(self, "dim", int(self.dim))

    def draws(self, n, seed, start=0):
        return draw_noise(self, n, seed, start)


class MonteCarloEstimate(NamedTuple):
    mean: float
    stderr: float
    n: int


def _check_params(d, sigma):
    if isinstance(d, bool) or int(d) != d or d < 1:
        raise InvalidParameterError(f"dimension must be a positive integer, got {d!r}")
    if not (np.isfinite(sigma) and sigma > 0):
        raise InvalidParameterError(f"sigma must be positive and finite, got {sigma!r}")


def _check_seed(seed):
    seed = int(seed)
    if not 0 <= seed < 2**64:
        raise InvalidParameterError(f"seed must be a 64-bit unsigned integer, got {seed}")
    return seed


def block_seed_sequence(seed, block):
    return np.random.SeedSequence(_check_seed(seed), spawn_key=(int(block),))


def draw_noise(mech, n, seed, start=0):
    """Return draws ``start .. start + n - 1`` of ``mech`` as an ``(n, d)`` array."""
    if n < 0 or start < 0:
        raise InvalidParameterError("n and start must be nonnegative")
    d = mech.dim
    out = np.empty((n, d), dtype=np.float64)
    stop = start + n
    row = 0
    block = start // BLOCK_SIZE
    while row < n:
        first = block * BLOCK_SIZE
        lo = max(start, first) - first
        hi = min(stop, first + BLOCK_SIZE) - first
        ss = block_seed_sequence(seed, block)
        if mech.kind is MechanismKind.GAUSSIAN:
            rng = np.random.Generator(np.random.PCG64(ss))
            z = rng.standard_normal((hi, d))[lo:]
            z *= mech.sigma
        else:
            radius_ss, cube_ss = ss.spawn(2)
            radii = np.random.Generator(np.random.PCG64(radius_ss)).standard_gamma(d + 1.0, hi)
            cube = np.random.Generator(np.random.PCG64(cube_ss)).uniform(-1.0, 1.0, (hi, d))
            z = cube[lo:] * (mech.sigma * radii[lo:, None])
        out[row:row + (hi - lo)] = z
        row += hi - lo
        block += 1
    return out


def sample_gaussian(d, sigma, seed):
    """One draw from ``N(0, sigma^2 I_d)``; deterministic in ``seed``."""
    return draw_noise(NoiseMechanism(MechanismKind.GAUSSIAN, sigma, d), 1, seed)[0]


def sample_linf_exponential(d, sigma, seed):
    """One draw from the density proportional to ``exp(-|z|_inf / sigma)``.

    Samples a radius from Gamma(d + 1, sigma), then a point uniformly in the
    cube ``[-R, R]^d``. The resulting ``|z|_inf`` is Gamma(d, sigma).
    """
    return draw_noise(NoiseMechanism(MechanismKind.LINF_EXPONENTIAL, sigma, d), 1, seed)[0]


def iter_noise_chunks(mech, n, seed):
    """Yield consecutive ``(n_i, d)`` chunks covering draws ``0 .. n - 1``."""
    rows = max(BLOCK_SIZE, (_CHUNK_ENTRIES // mech.dim) // BLOCK_SIZE * BLOCK_SIZE)
    start = 0
    while start < n:
        m = min(rows, n - start)
        yield start, draw_noise(mech, m, seed, start)
        start += m


def linf_norms(mech, n, seed):
    """``|z_i|_inf`` for draws ``0 .. n - 1``."""
    out = np.empty(n)
    for start, z in iter_noise_chunks(mech, n, seed):
        out[start:start + len(z)] = np.abs(z).max(axis=1)
    return out


def linf_magnitude(mech, n, seed):
    """Monte-Carlo mean of ``|z|_inf`` with its standard error."""
    if n < 1:
        raise InvalidParameterError("n_samples must be at least 1")
    norms = linf_norms(mech, n, seed)
    stderr = float(norms.std(ddof=1) / math.sqrt(n)) if n > 1 else math.inf
    return MonteCarloEstimate(float(norms.mean()), stderr, int(n))


def expected_linf_exponential(mech):
    """Exact ``E|z|_inf = d * sigma`` for the l-inf Exponential mechanism."""
    if mech.kind is not MechanismKind.LINF_EXPONENTIAL:
        raise InvalidParameterError("expected_linf_exponential needs an l-inf Exponential mechanism")
    return mech.dim * mech.sigma


def expected_linf_gaussian(mech, n_samples, seed):
    """Monte-Carlo estimate of ``E|z|_inf`` for Gaussian noise.

    No closed form exists; for ``d >= 16`` the estimate divided by sigma
    falls between ``sqrt(ln d)`` and ``sqrt(2 ln d) + 1``.
    """
    if mech.kind is not MechanismKind.GAUSSIAN:
        raise InvalidParameterError("expected_linf_gaussian needs a Gaussian mechanism")
    return linf_magnitude(mech, n_samples, seed)


def gaussian_linf_window(d):
    """Sanity window ``[sqrt(ln d), sqrt(2 ln d) + 1]`` for ``E|z|_inf / sigma``."""
    ln_d = math.log(d)
    return math.sqrt(ln_d), math.sqrt(2.0 * ln_d) + 1.0


def sigma_for_gaussian_linf(r, eps, d):
    """Gaussian scale making the mechanism robust at l-inf radius ``r`` with budget ``eps``."""
    return sigma_for_gaussian_lp(r, eps, d, math.inf)


def sigma_for_gaussian_lp(r, eps, d, p):
    """Gaussian scale ``sqrt(d^(1 - 2/p) r^2 / (2 eps))`` for l-p robustness, ``p >= 2``."""
    if not (r > 0 and eps > 0):
        raise InvalidParameterError("r and eps must be positive")
    if not p >= 2:
        raise InvalidParameterError(f"norm order must be >= 2, got {p}")
    _check_params(d, 1.0)
    exponent = 1.0 if math.isinf(p) else 1.0 - 2.0 / p
    return math.sqrt(d ** exponent * r * r / (2.0 * eps))
