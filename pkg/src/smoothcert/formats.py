"""File formats: datasets, certification records, curves and run manifests.

Dataset CSV
    Header ``label,x0,...,x{d-1}``; one point per row.
Dataset binary
    16-byte little-endian header ``magic (8 bytes, b"SMCDATA1"), N (uint32),
    d (uint32)``, then ``N`` int32 labels, then ``N * d`` float32 coordinates
    in row-major order.
Records CSV
    One row per point, columns in :data:`RECORD_FIELDS` order. Floats use
    the shortest round-trip decimal form; an unset radius is an empty field.
Curve CSV
    Header ``radius,certified_accuracy``.
"""
import csv
import json
import math
import struct
from dataclasses import dataclass, field

import numpy as np

from .errors import DataFormatError

BINARY_MAGIC = b"SMCDATA1"
_HEADER = struct.Struct("<8sII")

RECORD_FIELDS = (
    "index", "true_label", "predicted_class", "abstained", "p1_lower", "p2_upper",
    "radius_l2", "radius_linf", "radius_linf_method", "n_samples", "seed", "error",
)


@dataclass(frozen=True, eq=False)
class Dataset:
    """``N x d`` inputs with integer labels. ``ids`` follow points through permutations."""

    inputs: np.ndarray
    labels: np.ndarray
    ids: np.ndarray = field(default=None)

    def __post_init__(self):
        X = np.asarray(self.inputs, dtype=np.float64)
        if X.ndim == 1 and X.size == 0:
            X = X.reshape(0, 0)
        y = np.asarray(self.labels, dtype=np.int64).reshape(-1)
        if X.ndim != 2 or X.shape[0] != y.size:
            raise DataFormatError(f"inputs {X.shape} and labels ({y.size},) disagree")
        if not np.all(np.isfinite(X)):
            raise DataFormatError("inputs contain non-finite coordinates")
        if np.any(y < 0):
            raise DataFormatError("labels must be nonnegative")
        ids = np.arange(y.size) if self.ids is None else np.asarray(self.ids, dtype=np.int64)
        object.__setattr__(self, "inputs", X)
        object.__setattr__(self, "labels", y)
        object.__setattr__(self, "ids", ids)

    def __len__(self):
        return self.labels.size

    @property
    def d(self):
        return self.inputs.shape[1]

    def take(self, indices):
        indices = np.asarray(indices, dtype=np.int64)
        return Dataset(self.inputs[indices], self.labels[indices], self.ids[indices])


def format_float(x):
    if x is None:
        return ""
    x = float(x)
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return repr(x)


# -- datasets -------------------------------------------------------------------------------


def read_dataset_csv(path):
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None:
            raise DataFormatError("empty file", line=1)
        header = [h.strip() for h in header]
        d = len(header) - 1
        expected = ["label"] + [f"x{i}" for i in range(d)]
        if header != expected:
            raise DataFormatError("header must be label,x0,...,x{d-1}", line=1)
        labels, rows = [], []
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != d + 1:
                raise DataFormatError(f"expected {d + 1} fields, got {len(row)}", line=lineno)
            try:
                label = int(row[0])
                values = [float(v) for v in row[1:]]
            except ValueError as exc:
                raise DataFormatError(str(exc), line=lineno) from None
            labels.append(label)
            rows.append(values)
    inputs = np.array(rows, dtype=np.float64).reshape(len(rows), d)
    return Dataset(inputs, np.array(labels, dtype=np.int64))


def write_dataset_csv(ds, path):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["label"] + [f"x{i}" for i in range(ds.d)])
        for label, x in zip(ds.labels, ds.inputs):
            writer.writerow([int(label)] + [format_float(v) for v in x])


def read_dataset_binary(path):
    with open(path, "rb") as fh:
        head = fh.read(_HEADER.size)
        if len(head) != _HEADER.size:
            raise DataFormatError(f"{path}: truncated header")
        magic, n, d = _HEADER.unpack(head)
        if magic != BINARY_MAGIC:
            raise DataFormatError(f"{path}: bad magic {magic!r}")
        labels = np.frombuffer(fh.read(4 * n), dtype="<i4")
        data = np.frombuffer(fh.read(4 * n * d), dtype="<f4")
        if labels.size != n or data.size != n * d:
            raise DataFormatError(f"{path}: truncated payload")
    return Dataset(data.reshape(n, d).astype(np.float64), labels.astype(np.int64))


def write_dataset_binary(ds, path):
    with open(path, "wb") as fh:
        fh.write(_HEADER.pack(BINARY_MAGIC, len(ds), ds.d))
        fh.write(ds.labels.astype("<i4").tobytes())
        fh.write(ds.inputs.astype("<f4").tobytes())


def load_dataset(path):
    """Read a dataset, choosing the format from the file's first bytes."""
    with open(path, "rb") as fh:
        magic = fh.read(len(BINARY_MAGIC))
    if magic == BINARY_MAGIC:
        return read_dataset_binary(path)
    return read_dataset_csv(path)


# -- records --------------------------------------------------------------------------------


def _record_row(rec):
    return [
        str(rec.index), str(rec.true_label), str(rec.predicted_class),
        "1" if rec.abstained else "0",
        format_float(rec.p1_lower), format_float(rec.p2_upper),
        format_float(rec.radius_l2), format_float(rec.radius_linf),
        rec.radius_linf_method, str(rec.n_samples), str(rec.seed),
        rec.error or "",
    ]


def write_records_csv(records, path):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(RECORD_FIELDS)
        for rec in records:
            writer.writerow(_record_row(rec))


def read_records_csv(path):
    from .certify import CertificationRecord  # noqa: avoid import cycle

    def opt_float(s):
        return None if s == "" else float(s)

    records = []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None:
            return records
        if tuple(h.strip() for h in header) != RECORD_FIELDS:
            raise DataFormatError("unexpected records header", line=1)
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != len(RECORD_FIELDS):
                raise DataFormatError(
                    f"expected {len(RECORD_FIELDS)} fields, got {len(row)}", line=lineno
                )
            try:
                records.append(CertificationRecord(
                    index=int(row[0]), true_label=int(row[1]), predicted_class=int(row[2]),
                    abstained=row[3] == "1", p1_lower=float(row[4]), p2_upper=float(row[5]),
                    radius_l2=opt_float(row[6]), radius_linf=opt_float(row[7]),
                    radius_linf_method=row[8], n_samples=int(row[9]), seed=int(row[10]),
                    error=row[11] or None,
                ))
            except ValueError as exc:
                raise DataFormatError(str(exc), line=lineno) from None
    return records


# -- curves and manifests -------------------------------------------------------------------


def write_curve_csv(curve, path):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["radius", "certified_accuracy"])
        for radius, frac in curve:
            writer.writerow([format_float(radius), format_float(frac)])


def write_manifest(manifest, path):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")
