"""Small fully-connected networks trained with minibatch SGD.

One implementation covers both uses in the package: squared-error
regression (linear output) and binary classification (sigmoid output with
log loss).  Everything is plain numpy; no autograd, no momentum, just the
textbook backward pass with a constant step size.
"""

from __future__ import annotations

import numpy as np
from scipy.special import expit

from .util import check_matrix, rng_from

_ACTIVATIONS = ("relu", "tanh")


class NeuralNet:
    """Feed-forward net with 1 or 2 hidden layers.

    Parameters
    ----------
    hidden : tuple[int, ...]
        Hidden-layer widths, one or two entries.
    activation : {"relu", "tanh"}
    task : {"regression", "binary"}
        Linear output trained on squared error (1-D or 2-D targets; the
        output layer grows one unit per target column), or a single
        sigmoid output trained on log loss over 0/1 labels.
    learning_rate, epochs, batch_size, seed
        SGD schedule; rows are reshuffled every epoch.
    """

    def __init__(
        self,
        hidden=(64,),
        activation="relu",
        task="regression",
        learning_rate=1e-2,
        epochs=100,
        batch_size=64,
        seed=0,
    ):
        hidden = tuple(int(h) for h in hidden)
        if not 1 <= len(hidden) <= 2 or any(h < 1 for h in hidden):
            raise ValueError(f"hidden must hold 1 or 2 positive widths, got {hidden}")
        if activation not in _ACTIVATIONS:
            raise ValueError(f"activation must be one of {_ACTIVATIONS}, got {activation!r}")
        if task not in ("regression", "binary"):
            raise ValueError(f"task must be 'regression' or 'binary', got {task!r}")
        if learning_rate <= 0 or epochs < 1 or batch_size < 1:
            raise ValueError("learning_rate, epochs, and batch_size must be positive")
        self.hidden = hidden
        self.activation = activation
        self.task = task
        self.learning_rate = float(learning_rate)
        self.epochs = int(epochs)
        self.batch_size = int(batch_size)
        self.seed = seed

    def _act(self, z):
        return np.maximum(z, 0.0) if self.activation == "relu" else np.tanh(z)

    def _act_grad(self, z, a):
        return (z > 0.0).astype(np.float64) if self.activation == "relu" else 1.0 - a * a

    def _forward(self, x):
        """Returns (pre-activations, activations); activations[0] is x."""
        zs, acts = [], [x]
        for i, (w, b) in enumerate(zip(self.weights_, self.biases_)):
            z = acts[-1] @ w + b
            zs.append(z)
            acts.append(z if i == len(self.weights_) - 1 else self._act(z))
        return zs, acts

    def fit(self, x, y):
        x = check_matrix(x, "x", min_rows=1)
        y = np.asarray(y, dtype=np.float64)
        self.flat_target_ = y.ndim == 1
        targets = y[:, None] if self.flat_target_ else y
        if targets.ndim != 2 or targets.shape[0] != x.shape[0]:
            raise ValueError(f"target shape {y.shape} does not match {x.shape[0]} rows")
        if self.task == "binary" and targets.shape[1] != 1:
            raise ValueError("binary task takes a single label column")
        rng = rng_from(self.seed)
        sizes = (x.shape[1],) + self.hidden + (targets.shape[1],)

        self.weights_, self.biases_ = [], []
        for fan_in, fan_out in zip(sizes[:-1], sizes[1:]):
            scale = np.sqrt((2.0 if self.activation == "relu" else 1.0) / fan_in)
            self.weights_.append(scale * rng.standard_normal((fan_in, fan_out)))
            self.biases_.append(np.zeros(fan_out))
        self.n_features_ = x.shape[1]

        n = x.shape[0]
        for _ in range(self.epochs):
            order = rng.permutation(n)
            for start in range(0, n, self.batch_size):
                rows = order[start : start + self.batch_size]
                self._step(x[rows], targets[rows])
        return self

    def _step(self, xb, yb):
        zs, acts = self._forward(xb)
        out = zs[-1]
        if self.task == "binary":
            out = expit(out)
        # Squared error and log loss share the same output delta shape.
        delta = (out - yb) / xb.shape[0]
        for layer in range(len(self.weights_) - 1, -1, -1):
            grad_w = acts[layer].T @ delta
            grad_b = delta.sum(axis=0)
            if layer > 0:
                delta = (delta @ self.weights_[layer].T) * self._act_grad(
                    zs[layer - 1], acts[layer]
                )
            self.weights_[layer] -= self.learning_rate * grad_w
            self.biases_[layer] -= self.learning_rate * grad_b

    def _raw(self, x):
        if not hasattr(self, "weights_"):
            raise RuntimeError("net is not fitted")
        x = check_matrix(x, "x")
        if x.shape[1] != self.n_features_:
            raise ValueError(f"expected {self.n_features_} columns, got {x.shape[1]}")
        return self._forward(x)[0][-1]

    def predict_proba(self, x) -> np.ndarray:
        if self.task != "binary":
            raise RuntimeError("probabilities only exist for the binary task")
        return expit(self._raw(x)[:, 0])

    def predict(self, x) -> np.ndarray:
        if self.task == "binary":
            return (self.predict_proba(x) > 0.5).astype(np.int64)
        raw = self._raw(x)
        return raw[:, 0] if self.flat_target_ else raw
