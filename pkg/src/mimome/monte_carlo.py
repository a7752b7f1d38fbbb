"""Seeded, reproducible Monte-Carlo estimation of the secrecy metrics.

Trials are partitioned into fixed-size blocks.  Block ``i`` draws from an
independent counter-based Philox stream keyed by (seed, i), so every trial
index maps to one fixed stream position regardless of how blocks are farmed
out to workers.  Per-block sums are combined by a pairwise reduction in
block-index order, which makes estimates bit-identical across runs and
across worker counts.
"""

from __future__ import annotations

import dataclasses
import math
from concurrent.futures import ProcessPoolExecutor
from functools import partial

import numpy as np

from .channel import SystemConfig, sample_snr_gains
from .errors import ConfigError
from .kernels import MiModel, validate_target_rate

__all__ = [
    "BLOCK_TRIALS",
    "EstimatorConfig",
    "Estimate",
    "substream",
    "estimate_ergodic_rate",
    "estimate_prob_nonzero",
    "estimate_sop",
]

# Trials per substream block.  Fixed: changing it changes which stream
# position a trial index maps to, and therefore the sampled values.
BLOCK_TRIALS = 1 << 16

_MAX_SEED = 2**64


@dataclasses.dataclass(frozen=True)
class EstimatorConfig:
    """Trial count, seed, worker count and MI model for one estimation run.

    ``mi_model=None`` selects the approximate model of the system config's
    modulation at run time.  Results depend only on (seed, trials, model),
    never on ``workers``.
    """

    trials: int
    seed: int = 0
    workers: int = 1
    mi_model: MiModel | None = None

    def __post_init__(self):
        if isinstance(self.trials, bool) or not isinstance(self.trials, (int, np.integer)):
            raise ConfigError(f"trials: must be an integer, got {self.trials!r}")
        if self.trials < 1:
            raise ConfigError(f"trials: must be >= 1, got {self.trials}")
        if isinstance(self.workers, bool) or not isinstance(self.workers, (int, np.integer)):
            raise ConfigError(f"workers: must be an integer, got {self.workers!r}")
        if self.workers < 1:
            raise ConfigError(f"workers: must be >= 1, got {self.workers}")
        if not isinstance(self.seed, (int, np.integer)) or not 0 <= self.seed < _MAX_SEED:
            raise ConfigError(f"seed: must be a 64-bit unsigned integer, got {self.seed!r}")
        if self.mi_model is not None and not isinstance(self.mi_model, MiModel):
            raise ConfigError(f"mi_model: unknown model {self.mi_model!r}")
        object.__setattr__(self, "trials", int(self.trials))
        object.__setattr__(self, "workers", int(self.workers))
        object.__setattr__(self, "seed", int(self.seed))


@dataclasses.dataclass(frozen=True)
class Estimate:
    """A Monte-Carlo metric estimate with its standard error."""

    mean: float
    std_error: float
    trials: int
    seed: int


def substream(seed: int, index: int) -> np.random.Generator:
    """Independent random stream for trial block ``index`` under ``seed``.

    Philox keyed by the seed with the block index in the counter's most
    significant word; blocks can never overlap for any realistic draw count.
    """
    bitgen = np.random.Philox(key=np.uint64(seed), counter=[0, 0, 0, int(index)])
    return np.random.Generator(bitgen)


def _resolve_model(cfg: SystemConfig, est: EstimatorConfig) -> MiModel:
    model = est.mi_model or MiModel.select(cfg.modulation, exact=False)
    if model.modulation is not cfg.modulation:
        raise ConfigError(
            f"mi_model: {model.name} does not match the configured "
            f"{cfg.modulation.value} modulation"
        )
    return model


def _secrecy_rates(cfg: SystemConfig, model: MiModel, main_gain, eve_gain):
    # elementwise secrecy rate; MI monotonicity makes the clip equivalent to
    # the main > eve branch condition
    rates = model.mi(cfg.snr_b * main_gain) - model.mi(cfg.snr_e * eve_gain)
    return np.maximum(rates, 0.0)


def _block_sums(seed, cfg, model, metric, rs, job):
    """(sum, sum of squares) of the metric over one trial block."""
    index, count = job
    rng = substream(seed, index)
    main_gain, eve_gain = sample_snr_gains(rng, cfg, count)
    if metric == "pnz":
        hits = float(np.count_nonzero(cfg.snr_b * main_gain > cfg.snr_e * eve_gain))
        return hits, hits
    if metric == "sop":
        rates = _secrecy_rates(cfg, model, main_gain, eve_gain)
        hits = float(np.count_nonzero(rates < rs))
        return hits, hits
    rates = _secrecy_rates(cfg, model, main_gain, eve_gain)
    return float(np.sum(rates)), float(np.sum(rates * rates))


def _pairwise_reduce(pairs):
    items = list(pairs)
    while len(items) > 1:
        merged = []
        for i in range(0, len(items), 2):
            if i + 1 < len(items):
                a, b = items[i], items[i + 1]
                merged.append((a[0] + b[0], a[1] + b[1]))
            else:
                merged.append(items[i])
        items = merged
    return items[0]


def _run(cfg: SystemConfig, est: EstimatorConfig, metric: str, rs: float | None) -> Estimate:
    model = _resolve_model(cfg, est)
    trials = est.trials
    jobs = []
    start = 0
    index = 0
    while start < trials:
        count = min(BLOCK_TRIALS, trials - start)
        jobs.append((index, count))
        start += count
        index += 1
    worker = partial(_block_sums, est.seed, cfg, model, metric, rs)
    if est.workers == 1 or len(jobs) == 1:
        sums = [worker(job) for job in jobs]
    else:
        with ProcessPoolExecutor(max_workers=est.workers) as pool:
            sums = list(pool.map(worker, jobs))
    total, total_sq = _pairwise_reduce(sums)
    mean = total / trials
    if metric == "ergodic":
        if trials > 1:
            var = max(total_sq - total * total / trials, 0.0) / (trials - 1)
            std_error = math.sqrt(var / trials)
        else:
            std_error = 0.0
    else:
        # indicator metric: Bernoulli variance
        std_error = math.sqrt(max(mean * (1.0 - mean), 0.0) / trials)
    return Estimate(mean=mean, std_error=std_error, trials=trials, seed=est.seed)


def estimate_ergodic_rate(cfg: SystemConfig, est: EstimatorConfig) -> Estimate:
    """Mean secrecy rate over seeded channel draws under the chosen MI model."""
    return _run(cfg, est, "ergodic", None)


def estimate_prob_nonzero(cfg: SystemConfig, est: EstimatorConfig) -> Estimate:
    """Indicator mean of {main SNR > eavesdropper SNR}; MI model irrelevant."""
    return _run(cfg, est, "pnz", None)


def estimate_sop(cfg: SystemConfig, est: EstimatorConfig, rs) -> Estimate:
    """Indicator mean of {secrecy rate < rs} under the chosen MI model."""
    rs = validate_target_rate(rs, cfg.cap)
    return _run(cfg, est, "sop", rs)
