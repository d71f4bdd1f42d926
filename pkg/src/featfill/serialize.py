"""Versioned text serialization for fitted imputers and classifiers.

The on-disk format is a single JSON document::

    {"format": "featfill-model", "version": 1, "model": <encoded object>}

Scalars, strings, lists, and string-keyed dicts map to JSON directly.
Tuples and numpy arrays are tagged objects; array payloads are raw
little-endian bytes in base64, so a round trip restores every float
bit-for-bit and a loaded model predicts exactly like the original.
Model objects are tagged with a registered type name plus their attribute
dict.  Random generators are dropped (stored as null): they only matter
during fit, never for prediction.
"""

from __future__ import annotations

import base64
import json

import numpy as np

from .classifiers import (
    BoostedTreesClassifier,
    GaussianNBClassifier,
    KNNClassifier,
    LogisticClassifier,
    NetClassifier,
    RandomForestClassifier,
)
from .imputers import METHODS
from .nets import NeuralNet
from .preprocessing import StandardizationParams
from .ridge import BayesianRidgePosterior
from .trees import GradientBoostedRegressor, RegressionTree

FORMAT_NAME = "featfill-model"
FORMAT_VERSION = 1

_REGISTRY = {
    cls.__name__: cls
    for cls in (
        *METHODS.values(),
        LogisticClassifier,
        GaussianNBClassifier,
        KNNClassifier,
        NetClassifier,
        RandomForestClassifier,
        BoostedTreesClassifier,
        NeuralNet,
        RegressionTree,
        GradientBoostedRegressor,
        BayesianRidgePosterior,
        StandardizationParams,
    )
}


class SerializationError(ValueError):
    """Raised for unserializable objects or malformed model files."""


def _encode(value):
    if value is None or isinstance(value, (bool, int, float, str)):
        return value
    if isinstance(value, np.bool_):
        return bool(value)
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.floating):
        return float(value)
    if isinstance(value, np.ndarray):
        arr = np.ascontiguousarray(value)
        if arr.dtype.byteorder == ">":
            arr = arr.astype(arr.dtype.newbyteorder("<"))
        return {
            "__kind__": "ndarray",
            "dtype": arr.dtype.str,
            "shape": list(arr.shape),
            "data": base64.b64encode(arr.tobytes()).decode("ascii"),
        }
    if isinstance(value, tuple):
        return {"__kind__": "tuple", "items": [_encode(v) for v in value]}
    if isinstance(value, list):
        return [_encode(v) for v in value]
    if isinstance(value, dict):
        if any(not isinstance(k, str) for k in value):
            raise SerializationError("only string-keyed dicts are serializable")
        if "__kind__" in value:
            raise SerializationError("dict key '__kind__' is reserved by the format")
        return {k: _encode(v) for k, v in value.items()}
    if isinstance(value, np.random.Generator):
        return None
    if type(value).__name__ in _REGISTRY:
        return {
            "__kind__": "object",
            "type": type(value).__name__,
            "state": {k: _encode(v) for k, v in vars(value).items()},
        }
    raise SerializationError(f"cannot serialize object of type {type(value).__name__}")


def _decode(value):
    if isinstance(value, list):
        return [_decode(v) for v in value]
    if not isinstance(value, dict):
        return value
    kind = value.get("__kind__")
    if kind is None:
        return {k: _decode(v) for k, v in value.items()}
    if kind == "ndarray":
        raw = base64.b64decode(value["data"])
        arr = np.frombuffer(raw, dtype=np.dtype(value["dtype"]))
        return arr.reshape(value["shape"]).copy()
    if kind == "tuple":
        return tuple(_decode(v) for v in value["items"])
    if kind == "object":
        name = value["type"]
        if name not in _REGISTRY:
            raise SerializationError(f"unknown model type {name!r} in file")
        cls = _REGISTRY[name]
        obj = cls.__new__(cls)
        obj.__dict__.update({k: _decode(v) for k, v in value["state"].items()})
        return obj
    raise SerializationError(f"unknown tag {kind!r} in file")


def dump_model(model) -> str:
    if type(model).__name__ not in _REGISTRY:
        raise SerializationError(f"not a serializable model: {type(model).__name__}")
    doc = {"format": FORMAT_NAME, "version": FORMAT_VERSION, "model": _encode(model)}
    return json.dumps(doc, sort_keys=True)


def parse_model(text: str):
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SerializationError(f"not a model file: {exc}") from None
    if not isinstance(doc, dict) or doc.get("format") != FORMAT_NAME:
        raise SerializationError("not a model file (missing format marker)")
    if doc.get("version") != FORMAT_VERSION:
        raise SerializationError(
            f"unsupported model format version {doc.get('version')!r} "
            f"(this build reads version {FORMAT_VERSION})"
        )
    return _decode(doc["model"])


def save_model(model, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dump_model(model))
        fh.write("\n")


def load_model(path):
    with open(path, "r", encoding="utf-8") as fh:
        return parse_model(fh.read())
