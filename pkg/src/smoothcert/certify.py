"""End-to-end certification: sample, bound, and convert to radii.

For each point the pipeline draws ``n`` noisy copies, counts the base
classifier's votes, bounds the top two class probabilities, and turns the
bound into an l2 and/or l-inf radius. When ``p1_lower <= p2_upper`` the
point abstains with zero radii.
"""
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import InvalidParameterError
from .estimation import ConfidenceSpec, sample_counts, top2_bounds
from .mechanisms import MechanismKind
from .radius import radius_l2_gaussian, radius_linf_exponential, radius_linf_from_l2

GAUSSIAN_PROJECTED = "GaussianProjected"
EXPONENTIAL = "Exponential"


@dataclass(frozen=True)
class CertificationRecord:
    index: int
    true_label: int
    predicted_class: int
    abstained: bool
    p1_lower: float
    p2_upper: float
    radius_l2: Optional[float]
    radius_linf: float
    radius_linf_method: str
    n_samples: int
    seed: int
    error: Optional[str] = None

    @property
    def correct(self):
        return not self.abstained and self.error is None and self.predicted_class == self.true_label


def derive_seed(base_seed, index):
    """64-bit seed for point ``index`` of a run seeded with ``base_seed``."""
    ss = np.random.SeedSequence(int(base_seed), spawn_key=(int(index),))
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def certify_point(model, x, mech, n, spec=ConfidenceSpec(), seed=0, index=0, true_label=-1):
    """Certify one input. Gaussian noise yields l2 and projected l-inf radii;
    l-inf Exponential noise yields an l-inf radius only."""
    counts = sample_counts(model, x, mech, n, seed)
    pp = top2_bounds(counts, spec)
    top, _ = counts.top2()
    abstained = not pp.certifiable
    gaussian = mech.kind is MechanismKind.GAUSSIAN
    if gaussian:
        r2 = 0.0 if abstained else radius_l2_gaussian(mech.sigma, pp)
        rinf = radius_linf_from_l2(r2, mech.dim)
        method = GAUSSIAN_PROJECTED
    else:
        r2 = None
        rinf = 0.0 if abstained else radius_linf_exponential(mech.sigma, pp)
        method = EXPONENTIAL
    return CertificationRecord(
        index=int(index), true_label=int(true_label), predicted_class=top,
        abstained=abstained, p1_lower=pp.p1, p2_upper=pp.p2,
        radius_l2=r2, radius_linf=rinf, radius_linf_method=method,
        n_samples=int(n), seed=int(seed),
    )


def _failed_record(index, label, mech, n, seed, exc):
    method = GAUSSIAN_PROJECTED if mech.kind is MechanismKind.GAUSSIAN else EXPONENTIAL
    r2 = 0.0 if mech.kind is MechanismKind.GAUSSIAN else None
    msg = f"{type(exc).__name__}: {exc}".replace("\n", " ")
    return CertificationRecord(index, label, -1, True, 0.0, 1.0, r2, 0.0, method, n, seed, msg)


def _certify_chunk(args):
    model, inputs, labels, ids, mech, n, spec, base_seed = args
    out = []
    for x, label, idx in zip(inputs, labels, ids):
        seed = derive_seed(base_seed, idx)
        try:
            out.append(certify_point(model, x, mech, n, spec, seed, idx, label))
        except Exception as exc:  # recorded per point; the run continues
            out.append(_failed_record(int(idx), int(label), mech, n, seed, exc))
    return out


def resolve_workers(workers=None):
    if workers is None:
        workers = int(os.environ.get("SMOOTHCERT_WORKERS", "1") or 1)
    if workers < 1:
        raise InvalidParameterError("workers must be at least 1")
    return workers


def certify_dataset(model, ds, mech, n, spec=ConfidenceSpec(), base_seed=0,
                    workers=1, progress=None, chunk_size=16):
    """Certify every point of ``ds``.

    Point seeds come from ``(base_seed, ds.ids[i])``, so results do not
    depend on order or on the number of workers. ``progress(done, total)``
    is called after each finished chunk.
    """
    if len(ds) and ds.d != model.dim:
        raise InvalidParameterError(f"dataset dimension {ds.d} != model dimension {model.dim}")
    workers = resolve_workers(workers)
    total = len(ds)
    chunks = [
        (model, ds.inputs[i:i + chunk_size], ds.labels[i:i + chunk_size],
         ds.ids[i:i + chunk_size], mech, n, spec, base_seed)
        for i in range(0, total, chunk_size)
    ]
    records = []
    if workers == 1 or len(chunks) <= 1:
        results = map(_certify_chunk, chunks)
        for chunk in results:
            records.extend(chunk)
            if progress is not None:
                progress(len(records), total)
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for chunk in pool.map(_certify_chunk, chunks):
                records.extend(chunk)
                if progress is not None:
                    progress(len(records), total)
    return records


def certified_accuracy_curve(records, radii, norm="l2"):
    """Fraction of records that are correct, not abstained, and certified beyond each R.

    ``norm`` selects the ``radius_l2`` or ``radius_linf`` column; unset radii
    count as 0.
    """
    radii = [float(r) for r in radii]
    if any(b < a for a, b in zip(radii, radii[1:])):
        raise InvalidParameterError("radii must be sorted ascending")
    field = {"l2": "radius_l2", "linf": "radius_linf"}.get(norm)
    if field is None:
        raise InvalidParameterError(f"norm must be 'l2' or 'linf', got {norm!r}")
    total = len(records)
    certified = np.array(
        [getattr(r, field) or 0.0 for r in records if r.correct], dtype=float
    )
    curve = []
    for R in radii:
        frac = 0.0 if total == 0 or math.isinf(R) else float(np.count_nonzero(certified > R)) / total
        curve.append((R, frac))
    return curve
