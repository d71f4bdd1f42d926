"""Network-based imputers: one multi-output net, or per-column chaining."""

from __future__ import annotations

from ..nets import NeuralNet
from ..ordering import linear_order
from ..search import Choice, LogUniform
from ..util import derive_seed
from .base import BaseFeatureImputer, chain_fit, chain_predict

#: Tuning space shared by the network imputers (and the network classifier).
NET_SPACE = {
    "n_layers": Choice((1, 2)),
    "width_1": Choice((16, 32, 64, 128)),
    "width_2": Choice((16, 32, 64, 128)),
    "activation": Choice(("relu", "tanh")),
    "learning_rate": LogUniform(1e-4, 1e-1),
    "epochs": Choice((50, 100, 200)),
}

#: Fallback when no search runs and no explicit params are given.
NET_DEFAULTS = {
    "n_layers": 1,
    "width_1": 64,
    "width_2": 64,
    "activation": "relu",
    "learning_rate": 1e-2,
    "epochs": 100,
}


def net_from_params(params: dict, task: str, seed: int) -> NeuralNet:
    if params["n_layers"] == 1:
        hidden = (params["width_1"],)
    else:
        hidden = (params["width_1"], params["width_2"])
    return NeuralNet(
        hidden=hidden,
        activation=params["activation"],
        task=task,
        learning_rate=params["learning_rate"],
        epochs=params["epochs"],
        seed=seed,
    )


class NetImputer(BaseFeatureImputer):
    """One regression net maps the known columns to every missing column
    in a single forward pass (linear output layer)."""

    method = "mlp"

    def __init__(self, missing_indices, params=None, search_trials=20, seed=0):
        super().__init__(missing_indices, seed)
        self.params = params
        self.search_trials = search_trials

    def _search_space(self):
        return NET_SPACE

    def _fit_impl(self, z):
        self.net_ = net_from_params(self.params_, "regression", derive_seed(self.seed, "net"))
        self.net_.fit(z[:, self.known_], z[:, self.missing_])

    def _predict_impl(self, z_known):
        return self.net_.predict(z_known)


class NetChainImputer(BaseFeatureImputer):
    """Per-column regression nets fit and applied in imputability order,
    each filled column joining the inputs of the later nets.  The order is
    re-scored after every step (nonlinear fills can genuinely carry new
    signal, unlike the linear chain).  One search tunes the shared net
    parameters for the whole chain."""

    method = "mlp-li"

    def __init__(self, missing_indices, params=None, search_trials=20, recalc=True, seed=0):
        super().__init__(missing_indices, seed)
        self.params = params
        self.search_trials = search_trials
        self.recalc = recalc

    def _search_space(self):
        return NET_SPACE

    def _fit_impl(self, z):
        self.order_ = linear_order(z, self.missing_.tolist(), recalc=self.recalc)

        def fit_one(preds, j, slot):
            net = net_from_params(
                self.params_, "regression", derive_seed(self.seed, "net", slot)
            )
            return net.fit(z[:, preds], z[:, j])

        self.models_ = chain_fit(self.known_.tolist(), self.order_, fit_one)

    def _predict_impl(self, z_known):
        buf = chain_predict(
            z_known,
            self.n_features_,
            self.known_.tolist(),
            self.order_,
            self.models_,
            lambda net, a: net.predict(a),
        )
        return buf[:, self.missing_]
