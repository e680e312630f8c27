"""A small fully connected ReLU network as an objective over its parameters.

The loss is softmax cross-entropy averaged over the dataset; gradients come
from exact backpropagation with subgradient 0 at the ReLU kink. With two or
more hidden layers the loss surface carries non-strict saddle points (the
all-zero parameter vector is one for class-balanced data), which makes these
networks the natural stress test for regularized descent.

Parameter vector layout (public contract): layer by layer, each layer's
weight matrix of shape (fan_out, fan_in) raveled row-major, followed by its
bias vector of length fan_out.
"""

import csv
from dataclasses import dataclass

import numpy as np

from .linalg import as_vector, fd_hessian
from .objectives import Objective


@dataclass
class MlpSpec:
    """Layer widths (input, hidden..., output); at least two hidden layers."""

    layer_widths: tuple

    def __post_init__(self):
        self.layer_widths = tuple(int(w) for w in self.layer_widths)
        if len(self.layer_widths) < 4:
            raise ValueError("need at least two hidden layers (four widths)")
        if any(w < 1 for w in self.layer_widths):
            raise ValueError("all widths must be at least 1")

    @property
    def n_layers(self):
        return len(self.layer_widths) - 1

    @property
    def n_params(self):
        widths = self.layer_widths
        return sum(widths[i] * widths[i + 1] + widths[i + 1] for i in range(self.n_layers))


@dataclass
class Dataset:
    inputs: np.ndarray  # (m, d)
    labels: np.ndarray  # (m,) int class indices

    def __post_init__(self):
        self.inputs = np.asarray(self.inputs, dtype=float)
        self.labels = np.asarray(self.labels, dtype=int)
        if self.inputs.ndim != 2:
            raise ValueError("inputs must be a 2-D array")
        if len(self.inputs) != len(self.labels):
            raise ValueError("inputs and labels have different lengths")
        if len(self.inputs) == 0:
            raise ValueError("dataset is empty")


def make_blobs(n_per_class, classes, dim, separation, seed):
    """Gaussian clusters with unit scatter, class means `separation` apart.

    Means sit on the first axis at spacing `separation`, centered at the
    origin. Deterministic for a given seed.
    """
    if n_per_class < 1 or classes < 1 or dim < 1:
        raise ValueError("n_per_class, classes, and dim must be positive")
    if separation < 0:
        raise ValueError("separation must be non-negative")
    rng = np.random.default_rng(seed)
    labels = np.repeat(np.arange(classes), n_per_class)
    means = np.zeros((classes, dim))
    means[:, 0] = (np.arange(classes) - (classes - 1) / 2.0) * separation
    inputs = means[labels] + rng.standard_normal((len(labels), dim))
    return Dataset(inputs=inputs, labels=labels)


def dataset_to_csv(dataset, path):
    """Rows of feature values followed by the integer label."""
    dim = dataset.inputs.shape[1]
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow([f"f{i}" for i in range(dim)] + ["label"])
        for x, y in zip(dataset.inputs, dataset.labels):
            writer.writerow([repr(float(v)) for v in x] + [int(y)])


def dataset_from_csv(path):
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        dim = len(header) - 1
        inputs, labels = [], []
        for row in reader:
            inputs.append([float(v) for v in row[:dim]])
            labels.append(int(row[dim]))
    return Dataset(inputs=np.array(inputs), labels=np.array(labels))


def unpack_params(spec, params):
    """Split the flat parameter vector into (weights, biases) per layer."""
    params = as_vector(params)
    if params.size != spec.n_params:
        raise ValueError(f"expected {spec.n_params} parameters, got {params.size}")
    widths = spec.layer_widths
    Ws, bs = [], []
    pos = 0
    for i in range(spec.n_layers):
        fan_in, fan_out = widths[i], widths[i + 1]
        Ws.append(params[pos:pos + fan_in * fan_out].reshape(fan_out, fan_in))
        pos += fan_in * fan_out
        bs.append(params[pos:pos + fan_out])
        pos += fan_out
    return Ws, bs


def pack_params(Ws, bs):
    parts = []
    for W, b in zip(Ws, bs):
        parts.append(np.asarray(W, dtype=float).ravel())
        parts.append(np.asarray(b, dtype=float).ravel())
    return np.concatenate(parts)


def init_params(spec, seed):
    """Weights uniform in [-s, s] with s = 1/sqrt(fan_in); biases zero."""
    rng = np.random.default_rng(seed)
    widths = spec.layer_widths
    Ws, bs = [], []
    for i in range(spec.n_layers):
        fan_in, fan_out = widths[i], widths[i + 1]
        s = 1.0 / np.sqrt(fan_in)
        Ws.append(rng.uniform(-s, s, size=(fan_out, fan_in)))
        bs.append(np.zeros(fan_out))
    return pack_params(Ws, bs)


def _forward(Ws, bs, X):
    """Returns (pre-activations per layer, activations per layer, logits)."""
    zs, activations = [], [X]
    a = X
    for i, (W, b) in enumerate(zip(Ws, bs)):
        z = a @ W.T + b
        zs.append(z)
        if i < len(Ws) - 1:
            a = np.maximum(z, 0.0)
            activations.append(a)
    return zs, activations, zs[-1]


def _log_softmax(logits):
    shifted = logits - logits.max(axis=1, keepdims=True)
    return shifted - np.log(np.exp(shifted).sum(axis=1, keepdims=True))


def mlp_objective(spec, dataset):
    """Softmax cross-entropy of the network as an Objective over flat parameters."""
    if dataset.inputs.shape[1] != spec.layer_widths[0]:
        raise ValueError("dataset feature dimension does not match the input width")
    if dataset.labels.max() >= spec.layer_widths[-1]:
        raise ValueError("labels exceed the output width")
    X = dataset.inputs
    y = dataset.labels
    m = len(y)
    onehot = np.zeros((m, spec.layer_widths[-1]))
    onehot[np.arange(m), y] = 1.0

    def value(params):
        Ws, bs = unpack_params(spec, params)
        _, _, logits = _forward(Ws, bs, X)
        log_p = _log_softmax(logits)
        return float(-log_p[np.arange(m), y].mean())

    def gradient(params):
        Ws, bs = unpack_params(spec, params)
        zs, activations, logits = _forward(Ws, bs, X)
        p = np.exp(_log_softmax(logits))
        delta = (p - onehot) / m
        gWs = [None] * spec.n_layers
        gbs = [None] * spec.n_layers
        for i in range(spec.n_layers - 1, -1, -1):
            gWs[i] = delta.T @ activations[i]
            gbs[i] = delta.sum(axis=0)
            if i > 0:
                delta = (delta @ Ws[i]) * (zs[i - 1] > 0.0)
        return pack_params(gWs, gbs)

    # finite-difference Hessian: only feasible for tiny networks
    def hessian(params):
        return fd_hessian(value, params)

    n = spec.n_params
    return Objective(
        name=f"mlp{'x'.join(str(w) for w in spec.layer_widths)}",
        dim=n,
        value=value,
        gradient=gradient,
        hessian=hessian,
        domain_box=np.repeat([[-5.0, 5.0]], n, axis=0),
        lipschitz_hint=None,
        vectorized=False,
    )
