"""Sweep validation, CSV schema, JSON round-trips, presets, diversity slope."""

import json

import numpy as np
import pytest

from mimome import (
    CSV_HEADER,
    ConfigError,
    DomainError,
    EstimatorConfig,
    MiModel,
    SweepSpec,
    SystemConfig,
    estimate_diversity_order,
    reproduce_figure,
    rows_to_csv,
    run_sweep,
    sop_semianalytic,
    spec_from_dict,
    spec_to_dict,
)


def base_cfg(**kwargs):
    defaults = dict(n_tx=3, n_rx=2, n_eve=2, snr_b_db=0.0, snr_e_db=-10.0)
    defaults.update(kwargs)
    return SystemConfig(**defaults)


def mini_spec(**overrides):
    kwargs = dict(
        base=base_cfg(),
        axis="snr_b_db",
        values=(-5.0, 0.0, 5.0),
        metrics=("pnz",),
        methods=("closed_form",),
    )
    kwargs.update(overrides)
    return SweepSpec(**kwargs)


class TestSpecValidation:
    def test_empty_methods_rejected(self):
        with pytest.raises(ConfigError, match="methods"):
            mini_spec(methods=())

    def test_empty_metrics_rejected(self):
        with pytest.raises(ConfigError, match="metrics"):
            mini_spec(metrics=())

    def test_unknown_axis_rejected(self):
        with pytest.raises(ConfigError, match="axis"):
            mini_spec(axis="bandwidth")

    def test_values_must_increase(self):
        with pytest.raises(ConfigError, match="values"):
            mini_spec(values=(0.0, 0.0, 5.0))
        with pytest.raises(ConfigError, match="values"):
            mini_spec(values=(5.0, 0.0))

    def test_antenna_axis_needs_integers(self):
        with pytest.raises(ConfigError, match="values"):
            mini_spec(axis="n_tx", values=(1.0, 2.5))

    def test_invalid_metric_method_pair(self):
        with pytest.raises(ConfigError, match="methods"):
            mini_spec(metrics=("pnz",), methods=("semianalytic",))
        with pytest.raises(ConfigError, match="methods"):
            mini_spec(
                metrics=("mi_curve",),
                methods=("monte_carlo",),
                estimator=EstimatorConfig(trials=10),
            )

    def test_rs_required_for_sop(self):
        with pytest.raises(ConfigError, match="rs"):
            mini_spec(metrics=("sop",), methods=("closed_form",))

    def test_rs_forbidden_without_sop(self):
        with pytest.raises(ConfigError, match="rs"):
            mini_spec(rs=0.5)

    def test_rs_axis_provides_rate(self):
        spec = mini_spec(axis="rs", values=(0.2, 0.5), metrics=("sop",))
        assert spec.rs is None
        with pytest.raises(ConfigError, match="rs"):
            mini_spec(axis="rs", values=(0.2, 0.5), metrics=("sop",), rs=0.3)
        with pytest.raises(ConfigError, match="axis"):
            mini_spec(axis="rs", values=(0.2, 0.5), metrics=("pnz",))

    def test_estimator_required_for_monte_carlo(self):
        with pytest.raises(ConfigError, match="estimator"):
            mini_spec(methods=("closed_form", "monte_carlo"))

    def test_estimator_model_must_match_modulation(self):
        with pytest.raises(ConfigError, match="estimator"):
            mini_spec(
                methods=("closed_form", "monte_carlo"),
                estimator=EstimatorConfig(trials=10, mi_model=MiModel.APPROX_QPSK),
            )

    def test_mi_curve_requires_snr_axis(self):
        with pytest.raises(ConfigError, match="axis"):
            mini_spec(axis="n_tx", values=(1, 2), metrics=("mi_curve",))


class TestRunSweep:
    def test_row_order_and_count(self):
        spec = mini_spec(
            metrics=("pnz", "sop"),
            methods=("closed_form", "monte_carlo"),
            rs=0.5,
            estimator=EstimatorConfig(trials=2_000, seed=4),
        )
        rows = run_sweep(spec)
        assert len(rows) == len(spec.values) * len(spec.metrics) * len(spec.methods)
        expected = [
            (v, m, meth)
            for v in spec.values
            for m in spec.metrics
            for meth in spec.methods
        ]
        assert [(r.axis_value, r.metric, r.method) for r in rows] == expected
        for row in rows:
            if row.method == "monte_carlo":
                assert row.trials == 2_000
                assert row.seed == 4
                assert row.std_error is not None
            else:
                assert row.trials is None
                assert row.seed is None
                assert row.std_error is None

    def test_mi_curve_band_on_snr_grid(self):
        spec = SweepSpec(
            base=SystemConfig(1, 1, 1, 0.0, 0.0),
            axis="snr_b_db",
            values=tuple(float(v) for v in range(-15, 16)),
            metrics=("mi_curve",),
            methods=("closed_form", "semianalytic"),
        )
        rows = run_sweep(spec)
        by_value = {}
        for row in rows:
            by_value.setdefault(row.axis_value, {})[row.method] = row.value
        for methods in by_value.values():
            assert abs(methods["closed_form"] - methods["semianalytic"]) <= 0.02

    def test_rs_axis_sweep(self):
        spec = mini_spec(axis="rs", values=(0.1, 0.5, 0.9), metrics=("sop",))
        rows = run_sweep(spec)
        vals = [r.value for r in rows]
        assert all(b >= a for a, b in zip(vals, vals[1:]))  # SOP grows with rs

    def test_antenna_axis_sweep(self):
        spec = mini_spec(axis="n_tx", values=(1, 2, 4))
        rows = run_sweep(spec)
        vals = [r.value for r in rows]
        assert all(b >= a for a, b in zip(vals, vals[1:]))  # pnz grows with n_tx


class TestCsv:
    def test_header_and_shape(self):
        rows = run_sweep(mini_spec())
        text = rows_to_csv(rows)
        lines = text.splitlines()
        assert lines[0] == CSV_HEADER
        assert len(lines) == 1 + len(rows)
        assert text.endswith("\n")

    def test_analytic_fields_empty(self):
        rows = run_sweep(mini_spec())
        line = rows_to_csv(rows).splitlines()[1]
        fields = line.split(",")
        assert fields[0] == "snr_b_db"
        assert fields[5] == "" and fields[6] == "" and fields[7] == ""

    def test_twelve_significant_digits(self):
        rows = run_sweep(mini_spec())
        value_field = rows_to_csv(rows).splitlines()[1].split(",")[4]
        assert value_field == f"{rows[0].value:.12g}"


class TestSpecJson:
    def test_roundtrip(self):
        spec = mini_spec(
            metrics=("pnz", "sop"),
            methods=("closed_form", "monte_carlo"),
            rs=0.5,
            estimator=EstimatorConfig(trials=1_000, seed=8, workers=2),
        )
        clone = spec_from_dict(json.loads(json.dumps(spec_to_dict(spec))))
        assert clone == spec

    def test_unknown_fields_rejected(self):
        data = spec_to_dict(mini_spec())
        data["surprise"] = 1
        with pytest.raises(ConfigError, match="surprise"):
            spec_from_dict(data)
        data = spec_to_dict(mini_spec())
        data["base"]["n_relays"] = 2
        with pytest.raises(ConfigError, match="n_relays"):
            spec_from_dict(data)

    def test_missing_required_field(self):
        data = spec_to_dict(mini_spec())
        del data["axis"]
        with pytest.raises(ConfigError, match="axis"):
            spec_from_dict(data)

    def test_estimator_model_string(self):
        data = spec_to_dict(mini_spec())
        data["methods"] = ["closed_form", "monte_carlo"]
        data["estimator"] = {"trials": 100, "seed": 1, "workers": 1, "mi_model": "exact_bpsk"}
        spec = spec_from_dict(data)
        assert spec.estimator.mi_model is MiModel.EXACT_BPSK


class TestReproduceFigure:
    def test_fig1_files_and_roundtrip(self, tmp_path):
        written = reproduce_figure("1", tmp_path)
        csvs = [p for p in written if p.suffix == ".csv"]
        manifest_path = [p for p in written if p.suffix == ".json"][0]
        assert len(csvs) == 1
        manifest = json.loads(manifest_path.read_text())
        assert manifest["figure"] == "1"
        for entry in manifest["files"]:
            spec = spec_from_dict(entry["spec"])
            regenerated = rows_to_csv(run_sweep(spec)).encode("ascii")
            assert (tmp_path / entry["csv"]).read_bytes() == regenerated

    def test_fig2_override_roundtrip(self, tmp_path):
        written = reproduce_figure("2", tmp_path, trials=2_000, seed=31)
        csvs = sorted(p.name for p in written if p.suffix == ".csv")
        assert csvs == [f"fig2_ntx{n:02d}.csv" for n in (1, 2, 4, 8, 16)]
        manifest = json.loads((tmp_path / "fig2_manifest.json").read_text())
        entry = manifest["files"][0]
        assert entry["spec"]["estimator"]["trials"] == 2_000
        assert entry["spec"]["estimator"]["seed"] == 31
        spec = spec_from_dict(entry["spec"])
        regenerated = rows_to_csv(run_sweep(spec)).encode("ascii")
        assert (tmp_path / entry["csv"]).read_bytes() == regenerated

    def test_unknown_figure(self, tmp_path):
        with pytest.raises(ConfigError, match="figure"):
            reproduce_figure("9", tmp_path)


class TestDiversityOrder:
    def test_exact_power_law(self):
        order = 6.0
        scale = 2.5
        points = [(db, (scale * 10.0 ** (db / 10.0)) ** (-order)) for db in (20.0, 25.0, 30.0, 35.0)]
        assert estimate_diversity_order(points) == pytest.approx(order, abs=1e-9)

    def test_constant_sop_has_zero_slope(self):
        points = [(db, 0.37) for db in (10.0, 20.0, 30.0)]
        assert estimate_diversity_order(points) == pytest.approx(0.0, abs=1e-12)

    def test_needs_three_positive_points(self):
        with pytest.raises(DomainError):
            estimate_diversity_order([(10.0, 0.5), (20.0, 0.4)])
        with pytest.raises(DomainError):
            estimate_diversity_order([(10.0, 0.5), (20.0, 0.0), (30.0, 0.1)])

    def test_finite_alphabet_slope_collapses(self):
        # the paper's headline effect: BPSK SOP flattens at high main SNR
        points = []
        for db in (30.0, 35.0, 40.0):
            cfg = SystemConfig(4, 3, 2, db, -10.0)
            points.append((db, sop_semianalytic(cfg, 0.5, MiModel.APPROX_BPSK)))
        assert abs(estimate_diversity_order(points)) < 0.05
