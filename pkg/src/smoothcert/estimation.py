"""Monte-Carlo class counts and simultaneous confidence bounds on (p1, p2)."""
from dataclasses import dataclass, field

import numpy as np
from scipy.stats import beta

from .errors import InvalidParameterError
from .mechanisms import iter_noise_chunks
from .radius import ProbabilityPair

BONFERRONI_CP = "bonferroni-clopper-pearson"


class ClassifierEvaluationError(RuntimeError):
    """The base classifier failed on a noisy input."""

    def __init__(self, draw_index, cause):
        super().__init__(f"classifier failed on draw {draw_index}: {cause}")
        self.draw_index = draw_index


@dataclass(frozen=True)
class ClassCounts:
    counts: np.ndarray
    n: int
    seed: int = 0

    def __post_init__(self):
        counts = np.asarray(self.counts, dtype=np.int64)
        if counts.ndim != 1 or counts.size == 0 or np.any(counts < 0):
            raise InvalidParameterError("counts must be a nonempty vector of nonnegative integers")
        if self.n < 1 or int(counts.sum()) != self.n:
            raise InvalidParameterError(f"counts sum to {int(counts.sum())}, expected n={self.n}")
        object.__setattr__(self, "counts", counts)

    def top2(self):
        """Indices of the largest and second-largest counts, ties to the smaller index."""
        order = np.argsort(-self.counts, kind="stable")
        second = int(order[1]) if order.size > 1 else None
        return int(order[0]), second


@dataclass(frozen=True)
class ConfidenceSpec:
    level: float = 0.999
    method: str = field(default=BONFERRONI_CP)

    def __post_init__(self):
        if not 0.0 < self.level < 1.0:
            raise InvalidParameterError(f"confidence level must lie in (0, 1), got {self.level}")
        if self.method != BONFERRONI_CP:
            raise InvalidParameterError(f"unsupported confidence method {self.method!r}")


def clopper_pearson(k, n, level, side):
    """Exact one-sided binomial bound at confidence ``level``.

    ``side`` is ``"lower"`` or ``"upper"``. The endpoints are the Beta
    quantiles, with ``lower(0, n) = 0`` and ``upper(n, n) = 1``.
    """
    if not 0 <= k <= n or n < 1:
        raise InvalidParameterError(f"need 0 <= k <= n and n >= 1, got k={k}, n={n}")
    if not 0.0 < level < 1.0:
        raise InvalidParameterError(f"level must lie in (0, 1), got {level}")
    side = side.lower()
    if side == "lower":
        return 0.0 if k == 0 else float(beta.ppf(1.0 - level, k, n - k + 1))
    if side == "upper":
        return 1.0 if k == n else float(beta.ppf(level, k + 1, n - k))
    raise InvalidParameterError(f"side must be 'lower' or 'upper', got {side!r}")


def top2_bounds(counts, spec=ConfidenceSpec()):
    """Bonferroni-split Clopper-Pearson bounds for the top two classes.

    Half of the error budget ``1 - level`` goes to the lower bound on the
    empirical top class, half to the upper bound on the empirical runner-up,
    so both hold simultaneously with probability at least ``level``.
    """
    split = 1.0 - (1.0 - spec.level) / 2.0
    top, second = counts.top2()
    k2 = 0 if second is None else int(counts.counts[second])
    p1 = clopper_pearson(int(counts.counts[top]), counts.n, split, "lower")
    p2 = clopper_pearson(k2, counts.n, split, "upper")
    return ProbabilityPair(p1, p2)


def sample_counts(model, x, mech, n, seed):
    """Count ``f(x + z_i)`` over draws ``z_0 .. z_{n-1}`` of ``mech``.

    Noise follows the block seeding of :mod:`smoothcert.mechanisms`, so the
    counts of any prefix of draws are reproducible.
    """
    x = np.asarray(x, dtype=float)
    if x.ndim != 1 or x.size != mech.dim or model.dim != mech.dim:
        raise InvalidParameterError(
            f"dimension mismatch: input {x.size}, mechanism {mech.dim}, model {model.dim}"
        )
    if n < 1:
        raise InvalidParameterError("n must be at least 1")
    counts = np.zeros(model.num_classes, dtype=np.int64)
    for start, z in iter_noise_chunks(mech, n, seed):
        batch = z + x
        try:
            labels = model.predict_batch(batch)
        except Exception as exc:
            raise ClassifierEvaluationError(start + _first_failure(model, batch), exc) from exc
        counts += np.bincount(labels, minlength=model.num_classes)
    return ClassCounts(counts, n, seed)


def _first_failure(model, batch):
    for i, row in enumerate(batch):
        try:
            model.predict_batch(row[None, :])
        except Exception:
            return i
    return 0
