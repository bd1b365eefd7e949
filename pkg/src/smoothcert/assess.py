"""Mechanism assessment: required noise magnitude vs. the lower-bound criterion.

All quantities are in "scaling units": the unknown constants of the
asymptotic bounds are set to 1, so only ratios between rows (and the gap
column) carry meaning.
"""
import csv
import io
import math
from dataclasses import dataclass

from .errors import InvalidParameterError
from .mechanisms import MechanismKind, NoiseMechanism, linf_magnitude

CAVEAT = (
    "note: constants of the asymptotic bounds are normalised to 1; "
    "absolute values are scaling units, only ratios are meaningful"
)


def parse_norm(text):
    """``"l2" -> 2.0``, ``"linf" -> inf``, ``"lp:4" -> 4.0``."""
    if isinstance(text, (int, float)):
        p = float(text)
    else:
        s = str(text).strip().lower()
        if s in ("l2", "2"):
            p = 2.0
        elif s in ("linf", "inf", "l-inf"):
            p = math.inf
        elif s.startswith("lp:"):
            try:
                p = float(s[3:])
            except ValueError:
                raise InvalidParameterError(f"bad norm {text!r}") from None
        else:
            raise InvalidParameterError(f"bad norm {text!r}; use l2, linf or lp:<p>")
    if not p >= 2:
        raise InvalidParameterError(f"norm order must be >= 2, got {p}")
    return p


def format_norm(p):
    if math.isinf(p):
        return "linf"
    if p == 2:
        return "l2"
    return f"lp:{p:g}"


def _dim_exponent(p):
    return 0.5 if math.isinf(p) else 0.5 - 1.0 / p


def _check(r, eps, d, p):
    if not (r > 0 and eps > 0):
        raise InvalidParameterError("r and eps must be positive")
    if d < 1:
        raise InvalidParameterError("d must be at least 1")
    if not p >= 2:
        raise InvalidParameterError("norm order must be >= 2")


def lower_bound(p, r, eps, d):
    """Least noise magnitude any mechanism needs: ``r d^(1/2 - 1/p) / sqrt(eps)``."""
    _check(r, eps, d, p)
    return r * d ** _dim_exponent(p) / math.sqrt(eps)


def required_noise(kind, p, r, eps, d):
    """Noise magnitude ``E|z|_inf`` the mechanism needs for ``(r, eps)`` robustness.

    Gaussian: ``r d^(1/2 - 1/p) sqrt(ln d) / sqrt(eps)``.
    l-inf Exponential (l-inf only): ``d * sigma`` at the smaller of the two
    admissible scales, ``min(r d / sqrt(eps), r d / eps)``.
    """
    kind = MechanismKind.parse(kind)
    _check(r, eps, d, p)
    if kind is MechanismKind.GAUSSIAN:
        return r * d ** _dim_exponent(p) * math.sqrt(math.log(d)) / math.sqrt(eps)
    if not math.isinf(p):
        raise InvalidParameterError("the l-inf Exponential mechanism supports only the linf norm")
    return min(r * d / math.sqrt(eps), r * d / eps)


def gap_report(kind, p, d):
    """Gap between required noise and the criterion: ``sqrt(ln d)`` or ``sqrt(d)``."""
    kind = MechanismKind.parse(kind)
    if d < 1 or not p >= 2:
        raise InvalidParameterError("need d >= 1 and p >= 2")
    if kind is MechanismKind.GAUSSIAN:
        return math.sqrt(math.log(d))
    if not math.isinf(p):
        raise InvalidParameterError("the l-inf Exponential mechanism supports only the linf norm")
    return math.sqrt(d)


@dataclass(frozen=True)
class AssessmentReport:
    mechanism: MechanismKind
    norm: float
    d: int
    r: float
    eps: float
    required_noise: float
    lower_bound: float

    @property
    def gap_ratio(self):
        return self.required_noise / self.lower_bound


def assess(kind, p, d, r=1.0, eps=1.0):
    kind = MechanismKind.parse(kind)
    return AssessmentReport(
        kind, p, int(d), r, eps, required_noise(kind, p, r, eps, d), lower_bound(p, r, eps, d)
    )


def noise_magnitude_empirical(mech, n, seed):
    """Monte-Carlo ``E|z|_inf`` (mean, standard error) using the mechanism samplers."""
    if n < 100:
        raise InvalidParameterError("use at least 100 samples")
    if not isinstance(mech, NoiseMechanism):
        raise InvalidParameterError("expected a NoiseMechanism")
    return linf_magnitude(mech, n, seed)


_COLUMNS = ("mechanism", "norm", "d", "required_noise", "lower_bound", "gap")


def _rows(reports):
    for rep in reports:
        yield (rep.mechanism.value, format_norm(rep.norm), str(rep.d),
               f"{rep.required_noise:.6g}", f"{rep.lower_bound:.6g}", f"{rep.gap_ratio:.6g}")


def format_table(reports):
    rows = [_COLUMNS] + list(_rows(reports))
    widths = [max(len(row[i]) for row in rows) for i in range(len(_COLUMNS))]
    lines = ["  ".join(cell.rjust(w) for cell, w in zip(row, widths)) for row in rows]
    lines.append(CAVEAT)
    return "\n".join(lines)


def reports_csv(reports):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(_COLUMNS)
    for rep in reports:
        writer.writerow((rep.mechanism.value, format_norm(rep.norm), rep.d,
                         repr(rep.required_noise), repr(rep.lower_bound), repr(rep.gap_ratio)))
    return buf.getvalue()
