"""Deterministic base classifiers and their JSON model files.

Model file schema (one JSON object)::

    {"kind": "linear", "dims": {"input": d, "classes": K},
     "W": [[...], ...], "b": [...]}
    {"kind": "nearest_centroid", "dims": {...}, "centroids": [[...], ...]}
    {"kind": "feedforward", "dims": {...},
     "layers": [{"weights": [[...]], "bias": [...], "activation": "relu"}, ...]}
    {"kind": "halfspace", "dims": {"input": d, "classes": 2}, "w": [...], "b": 0.0}

Matrices are row-major nested lists; a layer's weights are ``out x in``.
"""
import json
import math
from dataclasses import dataclass

import numpy as np
from scipy.stats import norm

from .errors import InvalidParameterError, ModelFormatError

ACTIVATIONS = ("relu", "identity")


def _as_matrix(value, path, shape=None):
    try:
        arr = np.asarray(value, dtype=float)
    except (TypeError, ValueError):
        raise ModelFormatError(f"{path}: expected a numeric matrix") from None
    if arr.ndim != 2:
        raise ModelFormatError(f"{path}: expected a 2-D array, got {arr.ndim}-D")
    if shape is not None and arr.shape != shape:
        raise ModelFormatError(
            f"{path}: expected {shape[0]}x{shape[1]}, got {arr.shape[0]}x{arr.shape[1]}"
        )
    if not np.all(np.isfinite(arr)):
        raise ModelFormatError(f"{path}: non-finite entries")
    return arr


def _as_vector(value, path, size=None):
    try:
        arr = np.asarray(value, dtype=float)
    except (TypeError, ValueError):
        raise ModelFormatError(f"{path}: expected a numeric vector") from None
    if arr.ndim != 1:
        raise ModelFormatError(f"{path}: expected a 1-D array, got {arr.ndim}-D")
    if size is not None and arr.size != size:
        raise ModelFormatError(f"{path}: expected length {size}, got {arr.size}")
    if not np.all(np.isfinite(arr)):
        raise ModelFormatError(f"{path}: non-finite entries")
    return arr


class ClassifierModel:
    """Base class: ``scores`` maps an ``(m, d)`` batch to ``(m, K)`` scores."""

    kind = None
    num_classes: int
    dim: int

    def scores(self, X):
        raise NotImplementedError

    def predict_batch(self, X):
        X = np.asarray(X, dtype=float)
        if X.ndim != 2 or X.shape[1] != self.dim:
            raise InvalidParameterError(
                f"expected inputs of dimension {self.dim}, got shape {X.shape}"
            )
        if not np.all(np.isfinite(X)):
            raise InvalidParameterError("inputs contain non-finite coordinates")
        # argmax returns the first maximum, so ties go to the smallest index.
        return np.argmax(self.scores(X), axis=1)

    def predict(self, x):
        x = np.asarray(x, dtype=float)
        if x.ndim != 1:
            raise InvalidParameterError("predict expects a single input vector")
        return int(self.predict_batch(x[None, :])[0])

    def _dims(self):
        return {"input": self.dim, "classes": self.num_classes}


@dataclass(frozen=True, eq=False)
class LinearModel(ClassifierModel):
    W: np.ndarray
    b: np.ndarray
    kind = "linear"

    def __post_init__(self):
        W = _as_matrix(self.W, "W")
        object.__setattr__(self, "W", W)
        object.__setattr__(self, "b", _as_vector(self.b, "b", W.shape[0]))
        if W.shape[0] < 2:
            raise ModelFormatError("W: need at least 2 classes")

    @property
    def num_classes(self):
        return self.W.shape[0]

    @property
    def dim(self):
        return self.W.shape[1]

    def scores(self, X):
        return X @ self.W.T + self.b

    def to_dict(self):
        return {"kind": self.kind, "dims": self._dims(),
                "W": self.W.tolist(), "b": self.b.tolist()}


@dataclass(frozen=True, eq=False)
class NearestCentroidModel(ClassifierModel):
    centroids: np.ndarray
    kind = "nearest_centroid"

    def __post_init__(self):
        C = _as_matrix(self.centroids, "centroids")
        if C.shape[0] < 2:
            raise ModelFormatError("centroids: need at least 2 classes")
        object.__setattr__(self, "centroids", C)

    @property
    def num_classes(self):
        return self.centroids.shape[0]

    @property
    def dim(self):
        return self.centroids.shape[1]

    def scores(self, X):
        diff = X[:, None, :] - self.centroids[None, :, :]
        return -np.einsum("mkd,mkd->mk", diff, diff)

    def to_dict(self):
        return {"kind": self.kind, "dims": self._dims(),
                "centroids": self.centroids.tolist()}


@dataclass(frozen=True, eq=False)
class Layer:
    weights: np.ndarray
    bias: np.ndarray
    activation: str = "relu"


@dataclass(frozen=True, eq=False)
class FeedForwardModel(ClassifierModel):
    layers: tuple
    kind = "feedforward"

    def __post_init__(self):
        if len(self.layers) == 0:
            raise ModelFormatError("layers: need at least one layer")
        checked = []
        fan_in = None
        for i, layer in enumerate(self.layers):
            path = f"layers[{i}]"
            if isinstance(layer, dict):
                layer = Layer(layer.get("weights"), layer.get("bias"),
                              layer.get("activation", "relu"))
            W = _as_matrix(layer.weights, f"{path}.weights")
            if fan_in is not None and W.shape[1] != fan_in:
                raise ModelFormatError(
                    f"{path}.weights: expected {W.shape[0]}x{fan_in}, got {W.shape[0]}x{W.shape[1]}"
                )
            bias = _as_vector(layer.bias, f"{path}.bias", W.shape[0])
            act = str(layer.activation).lower()
            if act not in ACTIVATIONS:
                raise ModelFormatError(f"{path}.activation: unknown activation {layer.activation!r}")
            checked.append(Layer(W, bias, act))
            fan_in = W.shape[0]
        if fan_in < 2:
            raise ModelFormatError("layers: the output layer needs at least 2 classes")
        object.__setattr__(self, "layers", tuple(checked))

    @property
    def num_classes(self):
        return self.layers[-1].weights.shape[0]

    @property
    def dim(self):
        return self.layers[0].weights.shape[1]

    def scores(self, X):
        h = X
        for layer in self.layers:
            h = h @ layer.weights.T + layer.bias
            if layer.activation == "relu":
                h = np.maximum(h, 0.0)
        return h

    def to_dict(self):
        return {
            "kind": self.kind,
            "dims": self._dims(),
            "layers": [
                {"weights": l.weights.tolist(), "bias": l.bias.tolist(), "activation": l.activation}
                for l in self.layers
            ],
        }


@dataclass(frozen=True, eq=False)
class HalfspaceOracle(ClassifierModel):
    """Class 1 where ``w . x + b > 0``, else class 0.

    Under Gaussian smoothing the class-1 probability is known exactly, and
    the true l2 robust radius at ``x`` is the distance to the hyperplane.
    """

    w: np.ndarray
    b: float = 0.0
    kind = "halfspace"

    def __post_init__(self):
        w = _as_vector(self.w, "w")
        if not np.linalg.norm(w) > 0:
            raise ModelFormatError("w: must be nonzero")
        object.__setattr__(self, "w", w)
        object.__setattr__(self, "b", float(self.b))

    num_classes = 2

    @property
    def dim(self):
        return self.w.size

    def margin(self, x):
        return float(np.dot(self.w, x) + self.b)

    def distance(self, x):
        """l2 distance from ``x`` to the decision hyperplane."""
        return abs(self.margin(x)) / float(np.linalg.norm(self.w))

    def scores(self, X):
        pos = (X @ self.w + self.b) > 0
        return np.stack([~pos, pos], axis=1).astype(float)

    def to_dict(self):
        return {"kind": self.kind, "dims": self._dims(),
                "w": self.w.tolist(), "b": self.b}


def predict(model, x):
    """Class index of ``model`` at ``x``; ties resolve to the smallest index."""
    return model.predict(x)


def halfspace_smoothed_prob(w, b, x, sigma):
    """Exact ``P[w . (x + z) + b > 0]`` for ``z ~ N(0, sigma^2 I)``."""
    w = np.asarray(w, dtype=float)
    wn = float(np.linalg.norm(w))
    if not wn > 0:
        raise InvalidParameterError("w must be nonzero")
    if not sigma > 0:
        raise InvalidParameterError("sigma must be positive")
    return float(norm.cdf((np.dot(w, x) + b) / (sigma * wn)))


_KINDS = {
    "linear": lambda d: LinearModel(d.get("W"), d.get("b")),
    "nearest_centroid": lambda d: NearestCentroidModel(d.get("centroids")),
    "feedforward": lambda d: FeedForwardModel(tuple(d.get("layers") or ())),
    "halfspace": lambda d: HalfspaceOracle(d.get("w"), d.get("b", 0.0)),
}


def model_from_dict(doc):
    if not isinstance(doc, dict):
        raise ModelFormatError("model: expected a JSON object")
    kind = doc.get("kind")
    if kind not in _KINDS:
        raise ModelFormatError(f"kind: unknown model kind {kind!r}")
    for key, required in (("linear", ("W", "b")), ("nearest_centroid", ("centroids",)),
                          ("feedforward", ("layers",)), ("halfspace", ("w",))):
        if kind == key:
            for field in required:
                if field not in doc:
                    raise ModelFormatError(f"{field}: missing")
    if not isinstance(doc.get("layers", []), list):
        raise ModelFormatError("layers: expected a list")
    model = _KINDS[kind](doc)
    dims = doc.get("dims")
    if dims is not None:
        if dims.get("input", model.dim) != model.dim:
            raise ModelFormatError(f"dims.input: declared {dims['input']}, weights imply {model.dim}")
        if dims.get("classes", model.num_classes) != model.num_classes:
            raise ModelFormatError(
                f"dims.classes: declared {dims['classes']}, weights imply {model.num_classes}"
            )
    return model


def load_model(path):
    with open(path, encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ModelFormatError(f"{path}: invalid JSON ({exc})") from None
    try:
        return model_from_dict(doc)
    except ModelFormatError as exc:
        raise ModelFormatError(f"{path}: {exc}") from None


def save_model(model, path):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(model.to_dict(), fh, indent=1)
        fh.write("\n")


# -- generators for tests and demos ---------------------------------------------------------


def random_linear_model(num_classes, dim, seed=0):
    rng = np.random.default_rng(seed)
    return LinearModel(rng.standard_normal((num_classes, dim)), rng.standard_normal(num_classes))


def random_feedforward_model(dims, seed=0):
    """Random ReLU network with layer widths ``dims = [d, h1, ..., K]``."""
    rng = np.random.default_rng(seed)
    layers = []
    for i, (fan_in, fan_out) in enumerate(zip(dims[:-1], dims[1:])):
        act = "identity" if i == len(dims) - 2 else "relu"
        W = rng.standard_normal((fan_out, fan_in)) / math.sqrt(fan_in)
        layers.append(Layer(W, rng.standard_normal(fan_out) * 0.1, act))
    return FeedForwardModel(tuple(layers))


def halfspace_points(model, distances, seed=0):
    """Points at the given signed distances from the hyperplane of ``model``.

    Each point is a random offset within the hyperplane plus ``distance``
    along the unit normal; positive distances land in class 1.
    """
    rng = np.random.default_rng(seed)
    w = model.w
    unit = w / np.linalg.norm(w)
    distances = np.asarray(distances, dtype=float)
    base = rng.standard_normal((distances.size, w.size))
    base -= np.outer(base @ unit, unit)
    base -= unit * (model.b / np.linalg.norm(w))
    return base + np.outer(distances, unit)
