"""Stochastic system model: i.i.d. Rayleigh MIMO draws, transmit-antenna
selection with selection combining, and the post-selection SNR laws.

The transmitter picks the single (tx, rx) antenna pair maximizing the main
channel's instantaneous SNR; the eavesdropper applies selection combining on
the column the transmitter chose.  With unit-variance complex Gaussian
entries, every squared magnitude is a unit-mean exponential, so the selected
main-channel SNR is the maximum of n_tx*n_rx i.i.d. exponentials and the
eavesdropper's SNR is the maximum of n_eve exponentials, independent of the
main channel because selection never looks at the eavesdropper's matrix.
"""

from __future__ import annotations

import dataclasses
import math

import numpy as np

from .errors import ConfigError, DomainError
from .kernels import MiModel, Modulation

__all__ = [
    "SystemConfig",
    "SnrPair",
    "ChannelDraw",
    "main_snr_pdf",
    "main_snr_cdf",
    "eve_snr_pdf",
    "eve_snr_cdf",
    "sample_channel",
    "sample_snr_gains",
    "snr_pair_from_draw",
    "secrecy_rate",
]

_SQRT_HALF = 1.0 / math.sqrt(2.0)


@dataclasses.dataclass(frozen=True)
class SystemConfig:
    """Antenna counts, average per-antenna SNRs (dB) and modulation.

    ``snr_b_db`` is the main (transmitter to legitimate receiver) channel's
    average SNR and ``snr_e_db`` the eavesdropper's.  All public surfaces
    take dB; linear values are exposed via ``snr_b`` / ``snr_e``.
    """

    n_tx: int
    n_rx: int
    n_eve: int
    snr_b_db: float
    snr_e_db: float
    modulation: Modulation = Modulation.BPSK

    def __post_init__(self):
        for name in ("n_tx", "n_rx", "n_eve"):
            val = getattr(self, name)
            if isinstance(val, bool) or not isinstance(val, (int, np.integer)):
                raise ConfigError(f"{name}: antenna count must be an integer, got {val!r}")
            if val < 1:
                raise ConfigError(f"{name}: antenna count must be >= 1, got {val}")
            object.__setattr__(self, name, int(val))
        for name in ("snr_b_db", "snr_e_db"):
            try:
                val = float(getattr(self, name))
            except (TypeError, ValueError):
                raise ConfigError(f"{name}: must be a real number") from None
            if not math.isfinite(val):
                raise ConfigError(f"{name}: must be finite, got {val}")
            object.__setattr__(self, name, val)
        mod = self.modulation
        if isinstance(mod, str):
            try:
                mod = Modulation(mod.lower())
            except ValueError:
                raise ConfigError(f"modulation: unknown value {mod!r}") from None
            object.__setattr__(self, "modulation", mod)
        elif not isinstance(mod, Modulation):
            raise ConfigError(f"modulation: unknown value {mod!r}")

    @property
    def snr_b(self) -> float:
        """Main-channel average SNR, linear."""
        return 10.0 ** (self.snr_b_db / 10.0)

    @property
    def snr_e(self) -> float:
        """Eavesdropper average SNR, linear."""
        return 10.0 ** (self.snr_e_db / 10.0)

    @property
    def n_main_branches(self) -> int:
        """Diversity branches of the selected main link (n_tx * n_rx)."""
        return self.n_tx * self.n_rx

    @property
    def cap(self) -> float:
        return self.modulation.cap

    def mi_model(self, exact: bool) -> MiModel:
        return MiModel.select(self.modulation, exact)


@dataclasses.dataclass(frozen=True)
class SnrPair:
    """One realization of the post-selection instantaneous SNRs (linear)."""

    main: float
    eve: float

    def __post_init__(self):
        for name in ("main", "eve"):
            val = float(getattr(self, name))
            if not math.isfinite(val) or val < 0.0:
                raise DomainError(f"{name}: instantaneous snr must be finite and >= 0")
            object.__setattr__(self, name, val)


@dataclasses.dataclass(frozen=True)
class ChannelDraw:
    """One joint draw of both channel matrices plus the selected indices."""

    h_main: np.ndarray
    h_eve: np.ndarray
    selected_tx: int
    selected_rx: int
    selected_eve: int

    @property
    def main_gain(self) -> float:
        """Squared magnitude of the selected main-channel entry."""
        entry = self.h_main[self.selected_rx, self.selected_tx]
        # explicit products: bit-identical to the vectorized selection path
        return float(entry.real * entry.real + entry.imag * entry.imag)

    @property
    def eve_gain(self) -> float:
        """Squared magnitude of the eavesdropper entry on the selected column."""
        entry = self.h_eve[self.selected_eve, self.selected_tx]
        return float(entry.real * entry.real + entry.imag * entry.imag)


def _as_nonneg_array(x) -> tuple[np.ndarray, bool]:
    arr = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(arr)) or np.any(arr < 0.0):
        raise DomainError("snr argument must be finite and nonnegative")
    return np.atleast_1d(arr), arr.ndim == 0


def _max_exp_pdf(x: np.ndarray, count: int, mean: float) -> np.ndarray:
    # density of the max of `count` i.i.d. exponentials with the given mean
    z = x / mean
    surv = np.exp(-z)
    return count * (-np.expm1(-z)) ** (count - 1) * surv / mean


def _max_exp_cdf(x: np.ndarray, count: int, mean: float) -> np.ndarray:
    return (-np.expm1(-x / mean)) ** count


def main_snr_pdf(x, cfg: SystemConfig):
    """Density of the selected main-channel SNR (max of n_tx*n_rx exponentials)."""
    arr, scalar = _as_nonneg_array(x)
    out = _max_exp_pdf(arr, cfg.n_main_branches, cfg.snr_b)
    return float(out[0]) if scalar else out


def main_snr_cdf(x, cfg: SystemConfig):
    arr, scalar = _as_nonneg_array(x)
    out = _max_exp_cdf(arr, cfg.n_main_branches, cfg.snr_b)
    return float(out[0]) if scalar else out


def eve_snr_pdf(x, cfg: SystemConfig):
    """Density of the eavesdropper SNR after selection combining."""
    arr, scalar = _as_nonneg_array(x)
    out = _max_exp_pdf(arr, cfg.n_eve, cfg.snr_e)
    return float(out[0]) if scalar else out


def eve_snr_cdf(x, cfg: SystemConfig):
    arr, scalar = _as_nonneg_array(x)
    out = _max_exp_cdf(arr, cfg.n_eve, cfg.snr_e)
    return float(out[0]) if scalar else out


def _draw_components(rng: np.random.Generator, cfg: SystemConfig, n: int):
    """Real/imag channel components, already scaled to variance 1/2 each.

    Stream consumption order is part of the reproducibility contract:
    main real, main imag, eve real, eve imag, each of fixed shape.  Squared
    magnitudes are always computed as re**2 + im**2 from these components,
    so the batched and single-draw paths produce bit-identical gains.
    """
    shape_main = (n, cfg.n_rx, cfg.n_tx)
    shape_eve = (n, cfg.n_eve, cfg.n_tx)
    return (
        rng.standard_normal(shape_main) * _SQRT_HALF,
        rng.standard_normal(shape_main) * _SQRT_HALF,
        rng.standard_normal(shape_eve) * _SQRT_HALF,
        rng.standard_normal(shape_eve) * _SQRT_HALF,
    )


def _select_main(power: np.ndarray, n_tx: int):
    # argmax over the flattened (rx, tx) grid; ties resolve to the lowest
    # row-major linear index, which makes seeded runs deterministic
    n = power.shape[0]
    flat = power.reshape(n, -1)
    idx = np.argmax(flat, axis=1)
    gain = flat[np.arange(n), idx]
    rx, tx = np.divmod(idx, n_tx)
    return gain, rx, tx


def _select_eve(power: np.ndarray, tx: np.ndarray):
    n = power.shape[0]
    cols = np.take_along_axis(power, tx[:, None, None], axis=2)[:, :, 0]
    idx = np.argmax(cols, axis=1)
    return cols[np.arange(n), idx], idx


def sample_snr_gains(rng: np.random.Generator, cfg: SystemConfig, n: int):
    """Vectorized post-selection squared channel magnitudes for ``n`` draws.

    Returns ``(main_gain, eve_gain)`` arrays of shape (n,): the squared
    magnitude of the selected main-channel entry and of the eavesdropper's
    best entry on the selected transmit column.  Consumes the random stream
    identically to ``sample_channel`` repeated blockwise.
    """
    if n < 1:
        raise ConfigError(f"n: draw count must be >= 1, got {n}")
    mr, mi_, er, ei = _draw_components(rng, cfg, n)
    power_main = mr * mr + mi_ * mi_
    power_eve = er * er + ei * ei
    main_gain, _, tx = _select_main(power_main, cfg.n_tx)
    eve_gain, _ = _select_eve(power_eve, tx)
    return main_gain, eve_gain


def sample_channel(rng: np.random.Generator, cfg: SystemConfig) -> ChannelDraw:
    """Draw both matrices with CN(0, 1) entries and apply the selection rule.

    CN(0, 1) means variance 1/2 per real component, so every squared entry
    magnitude is a unit-mean exponential.
    """
    mr, mi_, er, ei = _draw_components(rng, cfg, 1)
    h_main = mr[0] + 1j * mi_[0]
    h_eve = er[0] + 1j * ei[0]
    _, rx, tx = _select_main(mr * mr + mi_ * mi_, cfg.n_tx)
    _, eve_idx = _select_eve(er * er + ei * ei, tx)
    return ChannelDraw(
        h_main=h_main,
        h_eve=h_eve,
        selected_tx=int(tx[0]),
        selected_rx=int(rx[0]),
        selected_eve=int(eve_idx[0]),
    )


def snr_pair_from_draw(draw: ChannelDraw, cfg: SystemConfig) -> SnrPair:
    """Instantaneous SNR pair implied by a draw at the configured averages."""
    return SnrPair(main=cfg.snr_b * draw.main_gain, eve=cfg.snr_e * draw.eve_gain)


def secrecy_rate(pair: SnrPair, model: MiModel) -> float:
    """Achievable secrecy rate I(main) - I(eve), floored at zero."""
    if pair.main <= pair.eve:
        return 0.0
    return float(max(model.mi(pair.main) - model.mi(pair.eve), 0.0))
