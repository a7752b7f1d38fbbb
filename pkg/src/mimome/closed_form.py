"""Analytic evaluators for the secrecy metrics: ergodic secrecy rate,
probability of non-zero secrecy, secrecy outage probability (series and
semianalytic routes) and the high-SNR SOP asymptote.

Two independent routes exist for the approximate-MI SOP.  ``sop_approx``
evaluates the alternating double series whose composite hypergeometric term
is the real integral computed by ``kernels.shifted_power_integral``;
``sop_semianalytic`` integrates the one-dimensional outage probability
directly through the MI inverse.  They are derived independently and must
agree, which the test suite enforces; ``sop_semianalytic`` additionally
covers the exact-MI models that have no series form.

The alternating series cancel catastrophically: terms grow like the central
binomial of n_tx*n_rx while the sums stay in [0, 1], so double-precision
summation loses up to ~0.3 digits per diversity branch no matter how the
terms are accumulated.  All series are therefore evaluated in arbitrary
precision (mpmath) with the working precision scaled to the antenna product,
and converted to float64 only at the boundary.

QPSK is handled through the orthogonal-rail identity: with the symbol SNR
split equally across two BPSK rails, every BPSK-rail formula applies with
the decay constant halved and the target rate halved, and the ergodic rate
doubles.
"""

from __future__ import annotations

import dataclasses
import math

import mpmath
import numpy as np
from scipy.integrate import quad

from .channel import SystemConfig, eve_snr_pdf, main_snr_cdf, main_snr_pdf
from .errors import ConfigError, UnsupportedSizeError
from .kernels import (
    BPSK_MI_DECAY,
    MiModel,
    Modulation,
    mi_inverse,
    validate_target_rate,
)

__all__ = [
    "MAX_MAIN_BRANCHES",
    "SopTermExponents",
    "ergodic_secrecy_rate_approx",
    "ergodic_secrecy_rate_quadrature",
    "prob_nonzero_secrecy",
    "sop_approx",
    "sop_asymptotic",
    "sop_semianalytic",
]

# Beyond this antenna product the series' binomial growth outruns any
# reasonable working precision budget; refuse loudly instead of degrading.
MAX_MAIN_BRANCHES = 64

# Alternating binomial cancellation costs ~log10(2) digits per branch.
_BASE_DPS = 36
_DPS_PER_BRANCH = 0.302


def _rail_params(modulation: Modulation) -> tuple[int, float]:
    """(rail count, per-rail MI decay constant) for the modulation."""
    if modulation is Modulation.QPSK:
        return 2, BPSK_MI_DECAY / 2.0
    return 1, BPSK_MI_DECAY


def _series_size(cfg: SystemConfig) -> int:
    n = cfg.n_main_branches
    if n > MAX_MAIN_BRANCHES:
        raise UnsupportedSizeError(
            f"n_tx * n_rx = {n} exceeds the supported maximum of "
            f"{MAX_MAIN_BRANCHES} for the closed-form series"
        )
    return n


def _series_context(n_branches: int, dps: int | None) -> mpmath.mp.__class__:
    ctx = mpmath.mp.clone()
    ctx.dps = dps if dps is not None else _BASE_DPS + int(_DPS_PER_BRANCH * n_branches + 1)
    return ctx


def _check_model(cfg: SystemConfig, model: MiModel) -> MiModel:
    if model.modulation is not cfg.modulation:
        raise ConfigError(
            f"model: {model.name} does not match the configured "
            f"{cfg.modulation.value} modulation"
        )
    return model


def _clamp_probability(p: float) -> float:
    return min(max(p, 0.0), 1.0)


def _clamp_rate(x: float, cap: float) -> float:
    return min(max(x, 0.0), float(np.nextafter(cap, 0.0)))


def _one_minus_pow(p: float, n: int) -> float:
    """1 - (1 - p)**n without cancellation for small p."""
    if p >= 1.0:
        return 1.0
    return -math.expm1(n * math.log1p(-p))


@dataclasses.dataclass(frozen=True)
class SopTermExponents:
    """Per-term exponents of the series SOP.

    ``main[k] = (k + 1) / (snr_b * decay)`` for k over the main-channel
    diversity branches and ``eve[j] = (j + 1) / (snr_e * decay)`` for j over
    the eavesdropper's antennas, with the rail-adjusted decay constant.
    Both grids are strictly positive for any valid config.
    """

    main: tuple[float, ...]
    eve: tuple[float, ...]

    @classmethod
    def from_config(cls, cfg: SystemConfig) -> "SopTermExponents":
        _, decay = _rail_params(cfg.modulation)
        main = tuple((k + 1) / (cfg.snr_b * decay) for k in range(cfg.n_main_branches))
        eve = tuple((j + 1) / (cfg.snr_e * decay) for j in range(cfg.n_eve))
        return cls(main=main, eve=eve)


def ergodic_secrecy_rate_approx(cfg: SystemConfig, dps: int | None = None) -> float:
    """Closed-form approximate ergodic secrecy rate, in bits.

    Evaluates the alternating double series obtained by averaging the
    exponential-MI secrecy rate over both post-selection SNR laws.  ``dps``
    overrides the automatic working precision (used by convergence tests).
    """
    n = _series_size(cfg)
    ne = cfg.n_eve
    rails, decay = _rail_params(cfg.modulation)
    ctx = _series_context(n, dps)
    gb = ctx.mpf(cfg.snr_b)
    ge = ctx.mpf(cfg.snr_e)
    ph = ctx.mpf(decay)
    total = ctx.mpf(0)
    for k in range(n):
        for j in range(ne):
            sign = -1 if (k + j) % 2 else 1
            coeff = sign * ctx.binomial(n - 1, k) * ctx.binomial(ne - 1, j)
            total += (
                coeff
                * (n * ne / ge)
                / (ph + (j + 1) / ge + (k + 1) / gb)
                * (ctx.one / (k + 1) - ctx.one / (k + 1 + ph * gb))
            )
    return _clamp_rate(rails * float(total), cfg.cap)


def prob_nonzero_secrecy(cfg: SystemConfig, dps: int | None = None) -> float:
    """Probability that the main SNR beats the eavesdropper's.

    Modulation-free: the event {main > eve} does not involve the MI curve,
    so this is exact, not an approximation.
    """
    n = _series_size(cfg)
    ne = cfg.n_eve
    ctx = _series_context(n, dps)
    gb = ctx.mpf(cfg.snr_b)
    ge = ctx.mpf(cfg.snr_e)
    total = ctx.mpf(0)
    for k in range(n):
        for j in range(ne):
            sign = -1 if (k + j) % 2 else 1
            coeff = sign * ctx.binomial(n - 1, k) * ctx.binomial(ne - 1, j)
            total += coeff * n * ne / ((k + 1) * ge) / ((j + 1) / ge + (k + 1) / gb)
    return _clamp_probability(float(total))


def sop_approx(cfg: SystemConfig, rs, dps: int | None = None) -> float:
    """Series form of the secrecy outage probability under the approximate MI.

    One minus the alternating double sum whose (k, j) term carries the real
    integral ``shifted_power_integral(main[k], eve[j], rs)`` (see
    ``SopTermExponents`` for the exponent grids).  The integrals and the sum
    are evaluated in the scaled working precision because the series
    cancellation would otherwise swamp the small SOP values reached at high
    main-channel SNR.
    """
    n = _series_size(cfg)
    ne = cfg.n_eve
    rails, decay = _rail_params(cfg.modulation)
    rs = validate_target_rate(rs, cfg.cap)
    ctx = _series_context(n, dps)
    gb = ctx.mpf(cfg.snr_b)
    ge = ctx.mpf(cfg.snr_e)
    ph = ctx.mpf(decay)
    rail_rs = ctx.mpf(rs) / rails
    total = ctx.mpf(0)
    for k in range(n):
        v = (k + 1) / (gb * ph)
        for j in range(ne):
            u = (j + 1) / (ge * ph)
            integral = ctx.quad(
                lambda t: t ** (u - 1) * (t - rail_rs) ** v,
                [rail_rs, ctx.one],
                maxdegree=8,
            )
            sign = -1 if (k + j) % 2 else 1
            coeff = sign * ctx.binomial(n - 1, k) * ctx.binomial(ne - 1, j)
            total += coeff / (k + 1) * (n * ne / (ge * ph)) * integral
    return _clamp_probability(float(1 - total))


def sop_semianalytic(cfg: SystemConfig, rs, model: MiModel) -> float:
    """One-dimensional quadrature of the SOP through the MI inverse.

    Splits the outage event at the eavesdropper SNR beyond which the MI gap
    to the cap is below the target rate: past that point outage is certain,
    contributing the tail mass directly; below it the main channel must fail
    to clear rs + I(eve), integrated against the eavesdropper's density.
    Both contributions are nonnegative, so no cancellation occurs and the
    result is relatively accurate even at the high-SNR outage floor.

    Works for every MI model; this is the only evaluator for the exact-MI
    SOP, and the independent check of ``sop_approx`` for the approximate one.
    """
    model = _check_model(cfg, model)
    cap = cfg.cap
    rs = validate_target_rate(rs, cap)
    eve_snr_max = mi_inverse(cap - rs, model)
    target_sup = float(np.nextafter(cap, 0.0))

    if model.is_exact:

        def failure_threshold(ge_val: float) -> float:
            target = min(rs + model.mi(ge_val), target_sup)
            return mi_inverse(target, model)

    else:
        rails, decay = _rail_params(cfg.modulation)
        rail_rs = rs / rails

        def failure_threshold(ge_val: float) -> float:
            # closed-form inverse of rs + I(ge) under the exponential MI
            room = math.exp(-decay * ge_val) - rail_rs
            if room <= 0.0:
                room = 5e-324
            return -math.log(room) / decay

    # integrate in eavesdropper-CDF coordinates: the probability mass is then
    # spread uniformly, so the quadrature cannot miss a narrow SNR scale
    snr_e = cfg.snr_e
    inv_count = 1.0 / cfg.n_eve

    def integrand(q: float) -> float:
        ge_val = -snr_e * math.log1p(-(q**inv_count))
        return main_snr_cdf(failure_threshold(ge_val), cfg)

    q_max = (-math.expm1(-eve_snr_max / snr_e)) ** cfg.n_eve
    body, _ = quad(integrand, 0.0, q_max, epsabs=1e-14, epsrel=1e-11, limit=300)
    tail = _one_minus_pow(math.exp(-eve_snr_max / snr_e), cfg.n_eve)
    return _clamp_probability(body + tail)


def sop_asymptotic(cfg: SystemConfig, rs, exact: bool = False) -> float:
    """Secrecy outage probability in the infinite main-SNR limit.

    With the main channel saturated at the alphabet cap, outage happens
    exactly when the eavesdropper's MI exceeds cap - rs.  Independent of
    snr_b, n_tx and n_rx by construction.  ``exact`` inverts the exact MI;
    otherwise the exponential approximation gives the closed form
    1 - (1 - rs**(1/(decay*snr_e)))**n_eve on the BPSK rail.
    """
    cap = cfg.cap
    rs = validate_target_rate(rs, cap)
    if exact:
        threshold = mi_inverse(cap - rs, MiModel.select(cfg.modulation, exact=True))
        p_tail = math.exp(-threshold / cfg.snr_e)
    else:
        rails, decay = _rail_params(cfg.modulation)
        p_tail = math.exp(math.log(rs / rails) / (decay * cfg.snr_e))
    return _clamp_probability(_one_minus_pow(p_tail, cfg.n_eve))


def ergodic_secrecy_rate_quadrature(cfg: SystemConfig, model: MiModel) -> float:
    """Ergodic secrecy rate by direct two-dimensional numerical integration.

    Nested adaptive quadrature of (I(main) - I(eve)) over the joint density
    on the main > eve region.  Serves as the independent oracle for
    ``ergodic_secrecy_rate_approx`` and as the analytic evaluator for the
    exact-MI models the series cannot express.
    """
    model = _check_model(cfg, model)

    def inner(ge_val: float) -> float:
        mi_eve = model.mi(ge_val)

        def f(gb_val: float) -> float:
            return (model.mi(gb_val) - mi_eve) * main_snr_pdf(gb_val, cfg)

        val, _ = quad(f, ge_val, np.inf, epsabs=1e-13, epsrel=1e-10, limit=200)
        return val

    total, _ = quad(
        lambda ge_val: inner(ge_val) * eve_snr_pdf(ge_val, cfg),
        0.0,
        np.inf,
        epsabs=1e-12,
        epsrel=1e-9,
        limit=200,
    )
    return _clamp_rate(total, cfg.cap)
