"""Acceptance gate: every criterion at its stated tolerance.

Each test prints one pass/fail line.  Monte-Carlo criteria run under fixed
seeds so the whole gate is deterministic; the 3-sigma bands are the spec'd
acceptance tolerances, not confidence statements about fresh randomness.
"""

import subprocess
import sys

import numpy as np
import pytest

from mimome import (
    EstimatorConfig,
    MiModel,
    SystemConfig,
    ergodic_secrecy_rate_approx,
    ergodic_secrecy_rate_quadrature,
    estimate_ergodic_rate,
    estimate_prob_nonzero,
    estimate_sop,
    eve_snr_cdf,
    main_snr_cdf,
    mi_bpsk_approx,
    mi_bpsk_exact,
    prob_nonzero_secrecy,
    sample_snr_gains,
    sop_approx,
    sop_asymptotic,
    sop_semianalytic,
    substream,
)
from mimome.sweep import estimate_diversity_order
from scipy.stats import kstest


def report(criterion: int, ok: bool, detail: str) -> None:
    status = "PASS" if ok else "FAIL"
    print(f"criterion {criterion}: {status} - {detail}")


def test_criterion_1_mi_band_and_quadrature_self_error():
    grid = np.logspace(-3.0, 4.0, 200)
    exact = mi_bpsk_exact(grid)
    band = float(np.max(np.abs(exact - mi_bpsk_approx(grid))))
    self_err = float(np.max(np.abs(exact - mi_bpsk_exact(grid, nodes=512))))
    ok = band <= 0.02 and self_err <= 1e-9
    report(1, ok, f"MI band {band:.4f} <= 0.02; quadrature self-error {self_err:.2e} <= 1e-9")
    assert band <= 0.02
    assert self_err <= 1e-9


def test_criterion_2_ergodic_rate_against_both_oracles():
    rng = np.random.default_rng(2024)
    worst_rel = 0.0
    for _ in range(20):
        n_tx = int(rng.integers(1, 7))
        n_rx = int(rng.integers(1, 5))
        while n_tx * n_rx > 12:
            n_rx = max(1, n_rx - 1)
        cfg = SystemConfig(
            n_tx,
            n_rx,
            int(rng.integers(1, 4)),
            float(rng.uniform(-10.0, 15.0)),
            float(rng.uniform(-15.0, 5.0)),
        )
        series = ergodic_secrecy_rate_approx(cfg)
        oracle = ergodic_secrecy_rate_quadrature(cfg, MiModel.APPROX_BPSK)
        worst_rel = max(worst_rel, abs(series - oracle) / abs(oracle))
    quad_ok = worst_rel <= 1e-6

    worst_z = 0.0
    for n_tx in (1, 2, 4, 8, 16):
        for snr_b_db in (-15.0, -10.0, -5.0, 0.0, 5.0, 10.0):
            cfg = SystemConfig(n_tx, 3, 2, snr_b_db, -10.0)
            est = EstimatorConfig(trials=10**6, seed=20_602, mi_model=MiModel.APPROX_BPSK)
            mc = estimate_ergodic_rate(cfg, est)
            z = abs(mc.mean - ergodic_secrecy_rate_approx(cfg)) / mc.std_error
            worst_z = max(worst_z, z)
    mc_ok = worst_z <= 3.0
    report(
        2,
        quad_ok and mc_ok,
        f"series vs 2-D quadrature worst rel {worst_rel:.2e} <= 1e-6 (20 configs); "
        f"vs Monte-Carlo worst |z| {worst_z:.2f} <= 3 (fig-2 grid, 1e6 trials)",
    )
    assert quad_ok
    assert mc_ok


def test_criterion_3_prob_nonzero_exact_identity():
    # analytic reduction at one antenna each: snr_b / (snr_b + snr_e)
    reduction_err = 0.0
    for snr_b_db, snr_e_db in ((0.0, 0.0), (4.77121254719662, 0.0), (7.0, -3.0)):
        cfg = SystemConfig(1, 1, 1, snr_b_db, snr_e_db)
        expected = cfg.snr_b / (cfg.snr_b + cfg.snr_e)
        reduction_err = max(reduction_err, abs(prob_nonzero_secrecy(cfg) - expected))
    reduction_ok = reduction_err <= 1e-12

    worst_z = 0.0
    for snr_e_db in (-10.0, -5.0, 0.0):
        for snr_b_db in (-15.0, -10.0, -5.0, 0.0, 5.0, 10.0, 15.0):
            cfg = SystemConfig(3, 2, 2, snr_b_db, snr_e_db)
            est = EstimatorConfig(trials=10**7, seed=30_703)
            mc = estimate_prob_nonzero(cfg, est)
            if mc.std_error == 0.0:
                continue
            z = abs(mc.mean - prob_nonzero_secrecy(cfg)) / mc.std_error
            worst_z = max(worst_z, z)
    mc_ok = worst_z <= 3.0
    report(
        3,
        reduction_ok and mc_ok,
        f"single-antenna reduction err {reduction_err:.2e} <= 1e-12; "
        f"vs Monte-Carlo worst |z| {worst_z:.2f} <= 3 (fig-3 grid, 1e7 trials)",
    )
    assert reduction_ok
    assert mc_ok


def test_criterion_4_sop_triple_agreement():
    rs = 0.5
    worst_rel = 0.0
    worst_z = 0.0
    for snr_e_db in (-10.0, -6.0):
        for n_tx in range(1, 9):
            for snr_b_db in (-15.0, -5.0, 5.0, 15.0, 30.0):
                cfg = SystemConfig(n_tx, 3, 2, snr_b_db, snr_e_db)
                series = sop_approx(cfg, rs)
                direct = sop_semianalytic(cfg, rs, MiModel.APPROX_BPSK)
                worst_rel = max(worst_rel, abs(series - direct) / direct)
                est = EstimatorConfig(trials=10**6, seed=40_804, mi_model=MiModel.APPROX_BPSK)
                mc = estimate_sop(cfg, est, rs)
                if mc.std_error > 0.0:
                    z = abs(mc.mean - direct) / mc.std_error
                    worst_z = max(worst_z, z)
    analytic_ok = worst_rel <= 1e-6
    mc_ok = worst_z <= 3.0
    report(
        4,
        analytic_ok and mc_ok,
        f"series vs semianalytic worst rel {worst_rel:.2e} <= 1e-6; "
        f"vs Monte-Carlo worst |z| {worst_z:.2f} <= 3 (fig-4 grids, 1e6 trials)",
    )
    assert analytic_ok
    assert mc_ok


def test_criterion_5_diversity_order_collapse():
    rs = 0.5
    points = []
    for snr_b_db in (30.0, 35.0, 40.0):
        cfg = SystemConfig(4, 3, 2, snr_b_db, -10.0)
        points.append((snr_b_db, sop_semianalytic(cfg, rs, MiModel.APPROX_BPSK)))
    slope = estimate_diversity_order(points)
    cfg40 = SystemConfig(4, 3, 2, 40.0, -10.0)
    gap = abs(points[-1][1] - sop_asymptotic(cfg40, rs))
    ok = abs(slope) < 0.05 and gap <= 1e-3
    report(
        5,
        ok,
        f"fitted SOP slope {slope:.2e} (|.| < 0.05); |SOP(40 dB) - asymptote| "
        f"{gap:.2e} <= 1e-3",
    )
    assert abs(slope) < 0.05
    assert gap <= 1e-3


def test_criterion_6_asymptote_matches_monte_carlo():
    rs = 0.5
    worst_gap = 0.0
    for snr_e_db in (-10.0, -8.0, -6.0, -4.0, -2.0, 0.0):
        cfg = SystemConfig(5, 2, 2, 30.0, snr_e_db)
        est = EstimatorConfig(trials=10**6, seed=60_906, mi_model=MiModel.APPROX_BPSK)
        mc = estimate_sop(cfg, est, rs)
        bound = 3.0 * mc.std_error + 1e-3
        gap = abs(mc.mean - sop_asymptotic(cfg, rs))
        worst_gap = max(worst_gap, gap - bound)
    ok = worst_gap <= 0.0
    report(
        6,
        ok,
        f"max (|MC - asymptote| - (3 sigma + 1e-3)) = {worst_gap:.2e} <= 0 "
        "(fig-5 config, snr_e in [-10, 0] dB)",
    )
    assert ok


def test_criterion_7_sampled_snr_distributions():
    cfg = SystemConfig(3, 2, 2, 5.0, -10.0)
    main_gain, eve_gain = sample_snr_gains(substream(70_907, 0), cfg, 100_000)
    stat_main, _ = kstest(cfg.snr_b * main_gain, lambda x: main_snr_cdf(x, cfg))
    stat_eve, _ = kstest(cfg.snr_e * eve_gain, lambda x: eve_snr_cdf(x, cfg))
    ok = stat_main < 0.01 and stat_eve < 0.01
    report(
        7,
        ok,
        f"KS statistics {stat_main:.4f} (main), {stat_eve:.4f} (eve) < 0.01 "
        "at 1e5 seeded draws",
    )
    assert stat_main < 0.01
    assert stat_eve < 0.01


def test_criterion_8_cli_reproducibility():
    args = [
        sys.executable, "-m", "mimome.cli", "sop",
        "--n-tx", "3", "--n-rx", "2", "--n-eve", "2",
        "--snr-b-db", "0", "--snr-e-db", "-10",
        "--rs", "0.5", "--trials", "200000", "--seed", "80_908".replace("_", ""),
        "--methods", "closed_form,monte_carlo",
    ]
    outputs = []
    for workers in ("1", "1", "8"):
        proc = subprocess.run(
            args + ["--workers", workers], capture_output=True, text=True, check=True
        )
        outputs.append(proc.stdout)
    ok = outputs[0] == outputs[1] == outputs[2]
    report(8, ok, "CSV byte-identical across two runs and worker counts 1 vs 8")
    assert ok
