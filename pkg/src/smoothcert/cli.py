"""Command-line front end: ``smoothcert {certify,curve,radius,assess,sample}``.

Exit codes: 0 success, 1 usage or validation error, 2 runtime failure.
Options may also come from a TOML file given with ``--config``; keys are
the long flag names without dashes (``sigma = 0.5``). Flags win over the
file.
"""
import argparse
import math
import os
import platform
import sys
import time

import numpy as np

from . import __version__, kernels
from .assess import assess, format_table, parse_norm, reports_csv
from .certify import certified_accuracy_curve, certify_dataset, resolve_workers
from .classifiers import load_model
from .errors import DataFormatError, InvalidParameterError, ModelFormatError
from .estimation import ConfidenceSpec
from .formats import (
    format_float, load_dataset, read_records_csv, write_curve_csv, write_manifest,
    write_records_csv,
)
from .mechanisms import (
    MechanismKind, NoiseMechanism, expected_linf_exponential, gaussian_linf_window,
    iter_noise_chunks, linf_magnitude,
)
from .radius import ProbabilityPair, certified_radius

EXIT_OK, EXIT_USAGE, EXIT_RUNTIME = 0, 1, 2

DEFAULTS = {
    "certify": {"mech": "gaussian", "sigma": 0.25, "n": 1000, "level": 0.999, "seed": 0,
                "out": "smoothcert_out", "workers": None},
    "curve": {"radii": "0,0.25,0.5,0.75,1", "norm": "l2", "out": None},
    "radius": {"mech": "gaussian", "sigma": 1.0, "dims": "1", "norm": "l2"},
    "assess": {"dims": "3072,150528", "mech": "gaussian,exp-linf", "norm": "l2,linf",
               "r": 1.0, "eps": 1.0, "out": None},
    "sample": {"mech": "exp-linf", "dims": "100", "sigma": 0.01, "n": 100000, "seed": 0,
               "out": None},
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _build_parser():
    parser = _Parser(prog="smoothcert", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"smoothcert {__version__}")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    def common(p):
        p.add_argument("--config", help="TOML file with default option values")

    p = sub.add_parser("certify", help="certify every point of a dataset")
    common(p)
    p.add_argument("--model")
    p.add_argument("--data")
    p.add_argument("--mech", help="gaussian | exp-linf")
    p.add_argument("--sigma", type=float)
    p.add_argument("--n", type=int)
    p.add_argument("--level", type=float)
    p.add_argument("--seed", type=int)
    p.add_argument("--out", help="output directory")
    p.add_argument("--workers", type=int, help="defaults to $SMOOTHCERT_WORKERS or 1")

    p = sub.add_parser("curve", help="certified-accuracy curve from a records CSV")
    common(p)
    p.add_argument("--records")
    p.add_argument("--radii", help="comma list or start:stop:step")
    p.add_argument("--norm", help="l2 | linf")
    p.add_argument("--out", help="curve CSV path (stdout if omitted)")

    p = sub.add_parser("radius", help="certified radius from (p1, p2)")
    common(p)
    p.add_argument("--p1", type=float)
    p.add_argument("--p2", type=float)
    p.add_argument("--sigma", type=float)
    p.add_argument("--mech")
    p.add_argument("--dims", help="input dimension d")
    p.add_argument("--norm", help="l2 | linf | lp:<p>")

    p = sub.add_parser("assess", help="noise-magnitude assessment table")
    common(p)
    p.add_argument("--dims", help="comma-separated dimensions")
    p.add_argument("--mech", help="comma-separated mechanisms")
    p.add_argument("--norm", help="comma-separated norms")
    p.add_argument("--r", type=float)
    p.add_argument("--eps", type=float)
    p.add_argument("--out", help="report CSV path")

    p = sub.add_parser("sample", help="empirical noise magnitude of a mechanism")
    common(p)
    p.add_argument("--mech")
    p.add_argument("--dims")
    p.add_argument("--sigma", type=float)
    p.add_argument("--n", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--out", help="write raw draws to this CSV")
    return parser


def _load_config(path):
    if path is None:
        return {}
    try:
        import tomllib
    except ModuleNotFoundError:
        import tomli as tomllib
    if not os.path.exists(path):
        raise UsageError(f"--config: file not found: {path}")
    with open(path, "rb") as fh:
        try:
            return tomllib.load(fh)
        except tomllib.TOMLDecodeError as exc:
            raise UsageError(f"--config: {exc}") from None


def _resolve(args):
    """Merge built-in defaults < config file < command-line flags."""
    cfg = dict(DEFAULTS[args.command])
    from_file = _load_config(args.config)
    section = from_file.get(args.command, {})
    flat = {k: v for k, v in from_file.items() if not isinstance(v, dict)}
    cfg.update(flat)
    cfg.update(section)
    for key, value in vars(args).items():
        if key in ("command", "config"):
            continue
        if value is not None:
            cfg[key] = value
        else:
            cfg.setdefault(key, None)
    return argparse.Namespace(command=args.command, **cfg)


def _require(cfg, *names):
    for name in names:
        if cfg.__dict__.get(name) is None:
            raise UsageError(f"--{name} is required")


def _existing(path, flag):
    if not os.path.exists(path):
        raise UsageError(f"--{flag}: file not found: {path}")
    return path


def _parse_dims(text):
    try:
        dims = [int(v) for v in str(text).split(",") if v.strip()]
    except ValueError:
        raise UsageError(f"--dims: expected integers, got {text!r}") from None
    if not dims or any(d < 1 for d in dims):
        raise UsageError("--dims: dimensions must be positive")
    return dims


def _parse_radii(text):
    text = str(text).strip()
    try:
        if ":" in text:
            start, stop, step = (float(v) for v in text.split(":"))
            if step <= 0:
                raise ValueError("step must be positive")
            count = int(math.floor((stop - start) / step + 1e-9)) + 1
            return [round(start + i * step, 12) for i in range(max(count, 0))]
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise UsageError(f"--radii: {exc}") from None


def cmd_certify(cfg):
    _require(cfg, "model", "data")
    model = load_model(_existing(cfg.model, "model"))
    ds = load_dataset(_existing(cfg.data, "data"))
    kind = MechanismKind.parse(cfg.mech)
    mech = NoiseMechanism(kind, cfg.sigma, model.dim)
    spec = ConfidenceSpec(cfg.level)
    workers = resolve_workers(cfg.workers)
    if cfg.n < 1:
        raise InvalidParameterError("--n must be at least 1")
    if len(ds) and ds.d != model.dim:
        raise InvalidParameterError(f"--data: dimension {ds.d} does not match model ({model.dim})")
    if np.any(ds.labels >= model.num_classes):
        raise InvalidParameterError("--data: labels exceed the model's class count")

    t0 = time.perf_counter()
    records = certify_dataset(model, ds, mech, cfg.n, spec, cfg.seed, workers=workers)
    wall = time.perf_counter() - t0

    os.makedirs(cfg.out, exist_ok=True)
    records_path = os.path.join(cfg.out, "records.csv")
    write_records_csv(records, records_path)
    write_manifest({
        "command": "certify",
        "model": os.path.abspath(cfg.model),
        "data": os.path.abspath(cfg.data),
        "mechanism": kind.value,
        "sigma": cfg.sigma,
        "dim": model.dim,
        "n": cfg.n,
        "level": cfg.level,
        "confidence_method": spec.method,
        "seed": cfg.seed,
        "workers": workers,
        "num_points": len(records),
        "wall_time_s": round(wall, 3),
        "kernel_backend": kernels.BACKEND,
        "smoothcert_version": __version__,
        "numpy_version": np.__version__,
        "python": platform.python_version(),
    }, os.path.join(cfg.out, "manifest.json"))

    norm = "l2" if kind is MechanismKind.GAUSSIAN else "linf"
    refs = [0.0, 0.25 * cfg.sigma, 0.5 * cfg.sigma]
    curve = certified_accuracy_curve(records, refs, norm)
    failures = sum(r.error is not None for r in records)
    print(f"certified {len(records)} points in {wall:.2f}s -> {records_path}")
    for radius, frac in curve:
        print(f"  certified accuracy ({norm}) at R={radius:.6g}: {frac:.4f}")
    if failures:
        print(f"  {failures} point(s) failed; see the error column", file=sys.stderr)
    return EXIT_OK


def cmd_curve(cfg):
    _require(cfg, "records")
    records = read_records_csv(_existing(cfg.records, "records"))
    radii = _parse_radii(cfg.radii)
    if cfg.norm not in ("l2", "linf"):
        raise UsageError("--norm: curve supports l2 or linf")
    curve = certified_accuracy_curve(records, radii, cfg.norm)
    fracs = [f for _, f in curve]
    if any(b > a for a, b in zip(fracs, fracs[1:])):
        raise RuntimeError("certified accuracy curve is not monotone")
    if cfg.out:
        write_curve_csv(curve, cfg.out)
    else:
        print("radius,certified_accuracy")
        for radius, frac in curve:
            print(f"{format_float(radius)},{format_float(frac)}")
    return EXIT_OK


def cmd_radius(cfg):
    _require(cfg, "p1", "p2")
    pp = ProbabilityPair(cfg.p1, cfg.p2)
    if pp.p1 < pp.p2:
        print("ABSTAIN")
        return EXIT_OK
    (d,) = _parse_dims(cfg.dims)
    p = parse_norm(cfg.norm)
    radius, sup = certified_radius(cfg.mech, cfg.sigma, pp, p, d)
    print(f"radius {radius:.9g}")
    print(f"alpha_star {sup.alpha_star:.9g}")
    return EXIT_OK


def cmd_assess(cfg):
    dims = _parse_dims(cfg.dims)
    kinds = [MechanismKind.parse(m) for m in str(cfg.mech).split(",") if m.strip()]
    norms = [parse_norm(s) for s in str(cfg.norm).split(",") if s.strip()]
    reports = []
    for kind in kinds:
        for p in norms:
            if kind is MechanismKind.LINF_EXPONENTIAL and not math.isinf(p):
                continue
            for d in dims:
                reports.append(assess(kind, p, d, cfg.r, cfg.eps))
    print(format_table(reports))
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(reports_csv(reports))
    return EXIT_OK


def cmd_sample(cfg):
    (d,) = _parse_dims(cfg.dims)
    mech = NoiseMechanism(MechanismKind.parse(cfg.mech), cfg.sigma, d)
    if cfg.n < 1:
        raise InvalidParameterError("--n must be at least 1")
    est = linf_magnitude(mech, cfg.n, cfg.seed)
    print(f"mechanism {mech.kind.value}  d={d}  sigma={format_float(mech.sigma)}  n={cfg.n}")
    print(f"mean_linf {est.mean:.9g}")
    print(f"stderr {est.stderr:.9g}")
    if mech.kind is MechanismKind.LINF_EXPONENTIAL:
        expected = expected_linf_exponential(mech)
        print(f"expected_linf {expected:.9g}")
        print(f"relative_error {abs(est.mean - expected) / expected:.3g}")
    elif d >= 16:
        lo, hi = gaussian_linf_window(d)
        print(f"window [{lo * mech.sigma:.6g}, {hi * mech.sigma:.6g}]")
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8") as fh:
            fh.write(",".join(f"z{i}" for i in range(d)) + "\n")
            for _, z in iter_noise_chunks(mech, cfg.n, cfg.seed):
                for row in z:
                    fh.write(",".join(format_float(v) for v in row) + "\n")
    return EXIT_OK


COMMANDS = {
    "certify": cmd_certify,
    "curve": cmd_curve,
    "radius": cmd_radius,
    "assess": cmd_assess,
    "sample": cmd_sample,
}


def main(argv=None):
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            parser.print_help(sys.stderr)
            return EXIT_USAGE
        cfg = _resolve(args)
        return COMMANDS[cfg.command](cfg)
    except UsageError as exc:
        print(f"smoothcert: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (InvalidParameterError, ModelFormatError, DataFormatError) as exc:
        print(f"smoothcert: invalid input: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except Exception as exc:  # noqa: BLE001
        print(f"smoothcert: runtime failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
