"""Randomized hyperparameter search over small explicit spaces.

Each trial independently samples one value per parameter, calls the
objective, and records the score.  Trial i always sees the same sampled
parameters and the same derived seed for a given search seed, regardless
of how earlier trials behaved, so searches are reproducible and
insensitive to transient objective failures.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .util import derive_seed, rng_from


class SearchError(RuntimeError):
    """Raised when every trial of a search fails."""


@dataclass(frozen=True)
class Uniform:
    low: float
    high: float

    def __post_init__(self):
        if not self.low < self.high:
            raise ValueError(f"need low < high, got [{self.low}, {self.high}]")

    def sample(self, rng):
        return float(rng.uniform(self.low, self.high))


@dataclass(frozen=True)
class LogUniform:
    low: float
    high: float

    def __post_init__(self):
        if not 0 < self.low < self.high:
            raise ValueError(f"need 0 < low < high, got [{self.low}, {self.high}]")

    def sample(self, rng):
        return float(math.exp(rng.uniform(math.log(self.low), math.log(self.high))))


@dataclass(frozen=True)
class Choice:
    options: tuple

    def __post_init__(self):
        if not self.options:
            raise ValueError("Choice needs at least one option")
        object.__setattr__(self, "options", tuple(self.options))

    def sample(self, rng):
        return self.options[int(rng.integers(len(self.options)))]


@dataclass(frozen=True)
class Trial:
    index: int
    seed: int
    params: dict
    score: float | None
    error: str | None


@dataclass(frozen=True)
class SearchResult:
    best_params: dict
    best_score: float
    best_index: int
    trials: tuple[Trial, ...]


def sample_params(space: dict, rng) -> dict:
    """One draw from every distribution, in sorted parameter order so the
    stream of random values does not depend on dict insertion order."""
    return {name: space[name].sample(rng) for name in sorted(space)}


def randomized_search(
    space: dict,
    objective,
    n_trials: int,
    seed: int,
    direction: str = "minimize",
) -> SearchResult:
    """Run ``n_trials`` of ``objective(params, trial_seed) -> score``.

    A trial that raises is recorded with its error message and skipped in
    the ranking; if every trial fails the collected errors surface as a
    :class:`SearchError`.  Ties keep the earliest trial.
    """
    if n_trials < 1:
        raise ValueError(f"n_trials must be >= 1, got {n_trials}")
    if direction not in ("minimize", "maximize"):
        raise ValueError(f"direction must be 'minimize' or 'maximize', got {direction!r}")
    if not space:
        raise ValueError("search space is empty")

    sign = 1.0 if direction == "minimize" else -1.0
    trials: list[Trial] = []
    best: Trial | None = None
    for i in range(n_trials):
        trial_seed = derive_seed(seed, "trial", i)
        params = sample_params(space, rng_from(trial_seed))
        try:
            score = float(objective(params, trial_seed))
            if not np.isfinite(score):
                raise ValueError(f"objective returned non-finite score {score}")
        except Exception as exc:  # noqa: BLE001 - a bad trial must not kill the search
            trials.append(Trial(i, trial_seed, params, None, f"{type(exc).__name__}: {exc}"))
            continue
        trial = Trial(i, trial_seed, params, score, None)
        trials.append(trial)
        if best is None or sign * score < sign * best.score:
            best = trial

    if best is None:
        summary = "; ".join(f"trial {t.index}: {t.error}" for t in trials[:5])
        raise SearchError(f"all {n_trials} trials failed ({summary})")
    return SearchResult(
        best_params=dict(best.params),
        best_score=best.score,
        best_index=best.index,
        trials=tuple(trials),
    )
