"""Declarative parameter sweeps, CSV/JSON emission, figure-style presets and
the secrecy diversity-order estimator.

A sweep varies one axis of a base ``SystemConfig`` (or the target rate) and
evaluates requested metrics by requested methods at every axis value.  The
method names fix the MI treatment: ``closed_form`` is the approximate-MI
analytic route, ``semianalytic`` the exact-MI quadrature route, and
``monte_carlo`` simulates under the estimator's model (approximate by
default).  For the ``sop_asymptotic`` metric, ``monte_carlo`` estimates the
finite-SNR SOP at the point's config, which is what the asymptote is
compared against.

Rows are emitted in axis order with a fixed CSV schema; a JSON sidecar
written by ``reproduce_figure`` round-trips back into sweep specs that
regenerate byte-identical CSVs.
"""

from __future__ import annotations

import dataclasses
import json
from pathlib import Path

import numpy as np

from .channel import SystemConfig
from .closed_form import (
    ergodic_secrecy_rate_approx,
    ergodic_secrecy_rate_quadrature,
    prob_nonzero_secrecy,
    sop_approx,
    sop_asymptotic,
    sop_semianalytic,
)
from .errors import ConfigError, DomainError
from .kernels import MiModel, Modulation
from .monte_carlo import (
    Estimate,
    EstimatorConfig,
    estimate_ergodic_rate,
    estimate_prob_nonzero,
    estimate_sop,
)

__all__ = [
    "AXES",
    "METRICS",
    "METHODS",
    "FIGURE_IDS",
    "CSV_HEADER",
    "SweepSpec",
    "ResultRow",
    "run_sweep",
    "rows_to_csv",
    "spec_to_dict",
    "spec_from_dict",
    "reproduce_figure",
    "estimate_diversity_order",
]

AXES = ("snr_b_db", "snr_e_db", "n_tx", "n_rx", "n_eve", "rs")
METRICS = ("mi_curve", "ergodic", "pnz", "sop", "sop_asymptotic")
METHODS = ("closed_form", "semianalytic", "monte_carlo")

_VALID_METHODS = {
    "mi_curve": {"closed_form", "semianalytic"},
    "ergodic": {"closed_form", "semianalytic", "monte_carlo"},
    "pnz": {"closed_form", "monte_carlo"},
    "sop": {"closed_form", "semianalytic", "monte_carlo"},
    "sop_asymptotic": {"closed_form", "semianalytic", "monte_carlo"},
}

_SOP_METRICS = {"sop", "sop_asymptotic"}
_ANTENNA_AXES = {"n_tx", "n_rx", "n_eve"}

CSV_HEADER = "axis,axis_value,metric,method,value,std_error,trials,seed"

FIGURE_IDS = ("1", "2", "3", "4a", "4b", "5")

_PRESET_SEED = 12345


@dataclasses.dataclass(frozen=True)
class SweepSpec:
    """One declarative sweep: base config, axis, values, metrics, methods."""

    base: SystemConfig
    axis: str
    values: tuple[float, ...]
    metrics: tuple[str, ...]
    methods: tuple[str, ...]
    rs: float | None = None
    estimator: EstimatorConfig | None = None

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(float(v) for v in self.values))
        object.__setattr__(self, "metrics", tuple(self.metrics))
        object.__setattr__(self, "methods", tuple(self.methods))
        self._validate()

    def _validate(self):
        if not isinstance(self.base, SystemConfig):
            raise ConfigError("base: must be a SystemConfig")
        if self.axis not in AXES:
            raise ConfigError(f"axis: unknown axis {self.axis!r}; expected one of {AXES}")
        if not self.values:
            raise ConfigError("values: at least one axis value is required")
        if not all(np.isfinite(self.values)):
            raise ConfigError("values: axis values must be finite")
        if any(b <= a for a, b in zip(self.values, self.values[1:])):
            raise ConfigError("values: axis values must be strictly increasing")
        if self.axis in _ANTENNA_AXES:
            for v in self.values:
                if v != int(v) or v < 1:
                    raise ConfigError(f"values: {self.axis} values must be integers >= 1")
        if not self.metrics:
            raise ConfigError("metrics: at least one metric is required")
        if len(set(self.metrics)) != len(self.metrics):
            raise ConfigError("metrics: duplicate entries")
        for m in self.metrics:
            if m not in METRICS:
                raise ConfigError(f"metrics: unknown metric {m!r}; expected one of {METRICS}")
        if not self.methods:
            raise ConfigError("methods: at least one method is required")
        if len(set(self.methods)) != len(self.methods):
            raise ConfigError("methods: duplicate entries")
        for m in self.methods:
            if m not in METHODS:
                raise ConfigError(f"methods: unknown method {m!r}; expected one of {METHODS}")
        for metric in self.metrics:
            for method in self.methods:
                if method not in _VALID_METHODS[metric]:
                    raise ConfigError(
                        f"methods: {method!r} is not valid for metric {metric!r}"
                    )
        if "mi_curve" in self.metrics and self.axis != "snr_b_db":
            raise ConfigError("axis: the mi_curve metric sweeps SNR, so axis must be snr_b_db")
        sop_requested = bool(_SOP_METRICS.intersection(self.metrics))
        if self.axis == "rs":
            if not sop_requested:
                raise ConfigError("axis: sweeping rs requires a SOP metric")
            if self.rs is not None:
                raise ConfigError("rs: must be omitted when rs is the sweep axis")
            if any(v <= 0 for v in self.values):
                raise ConfigError("values: rs values must be positive")
        elif sop_requested:
            if self.rs is None:
                raise ConfigError("rs: required when a SOP metric is requested")
            if not 0.0 < float(self.rs):
                raise ConfigError("rs: must be positive")
        elif self.rs is not None:
            raise ConfigError("rs: only meaningful when a SOP metric is requested")
        if "monte_carlo" in self.methods:
            if self.estimator is None:
                raise ConfigError("estimator: required when monte_carlo is requested")
            model = self.estimator.mi_model
            if model is not None and model.modulation is not self.base.modulation:
                raise ConfigError(
                    f"estimator: mi_model {model.name} does not match the base "
                    f"{self.base.modulation.value} modulation"
                )


@dataclasses.dataclass(frozen=True)
class ResultRow:
    """One CSV record: (axis value, metric, method) and its value."""

    axis: str
    axis_value: float
    metric: str
    method: str
    value: float
    std_error: float | None
    trials: int | None
    seed: int | None

    def __post_init__(self):
        if self.metric in ("pnz", "sop", "sop_asymptotic") and not 0.0 <= self.value <= 1.0:
            raise DomainError(f"{self.metric} value {self.value} outside [0, 1]")
        if self.metric in ("mi_curve", "ergodic") and not 0.0 <= self.value <= 2.0:
            raise DomainError(f"{self.metric} value {self.value} outside [0, 2]")
        if self.std_error is not None and self.std_error < 0.0:
            raise DomainError("std_error must be nonnegative")


def _point_config(spec: SweepSpec, value: float) -> SystemConfig:
    if spec.axis in _ANTENNA_AXES:
        return dataclasses.replace(spec.base, **{spec.axis: int(value)})
    if spec.axis in ("snr_b_db", "snr_e_db"):
        return dataclasses.replace(spec.base, **{spec.axis: value})
    return spec.base


def _evaluate(spec: SweepSpec, cfg: SystemConfig, rs: float | None, metric: str, method: str):
    """Return (value, std_error, trials, seed) for one grid cell."""
    modulation = cfg.modulation
    if metric == "mi_curve":
        gamma = 10.0 ** (cfg.snr_b_db / 10.0)
        model = MiModel.select(modulation, exact=(method == "semianalytic"))
        return float(model.mi(gamma)), None, None, None
    if method == "monte_carlo":
        est = spec.estimator
        if metric == "ergodic":
            result = estimate_ergodic_rate(cfg, est)
        elif metric == "pnz":
            result = estimate_prob_nonzero(cfg, est)
        else:
            result = estimate_sop(cfg, est, rs)
        return result.mean, result.std_error, result.trials, result.seed
    if metric == "ergodic":
        if method == "closed_form":
            return ergodic_secrecy_rate_approx(cfg), None, None, None
        model = MiModel.select(modulation, exact=True)
        return ergodic_secrecy_rate_quadrature(cfg, model), None, None, None
    if metric == "pnz":
        return prob_nonzero_secrecy(cfg), None, None, None
    if metric == "sop":
        if method == "closed_form":
            return sop_approx(cfg, rs), None, None, None
        model = MiModel.select(modulation, exact=True)
        return sop_semianalytic(cfg, rs, model), None, None, None
    # sop_asymptotic: closed_form uses the approximate inverse, semianalytic
    # the exact one
    return sop_asymptotic(cfg, rs, exact=(method == "semianalytic")), None, None, None


def run_sweep(spec: SweepSpec) -> list[ResultRow]:
    """Evaluate the sweep; rows come out in axis, then metric, then method order."""
    rows = []
    for value in spec.values:
        cfg = _point_config(spec, value)
        rs = value if spec.axis == "rs" else spec.rs
        for metric in spec.metrics:
            for method in spec.methods:
                val, std_error, trials, seed = _evaluate(spec, cfg, rs, metric, method)
                rows.append(
                    ResultRow(
                        axis=spec.axis,
                        axis_value=value,
                        metric=metric,
                        method=method,
                        value=val,
                        std_error=std_error,
                        trials=trials,
                        seed=seed,
                    )
                )
    return rows


def _fmt(x: float) -> str:
    return f"{x:.12g}"


def rows_to_csv(rows) -> str:
    """Fixed-schema CSV text; analytic rows leave std_error/trials/seed empty."""
    lines = [CSV_HEADER]
    for r in rows:
        lines.append(
            ",".join(
                (
                    r.axis,
                    _fmt(r.axis_value),
                    r.metric,
                    r.method,
                    _fmt(r.value),
                    "" if r.std_error is None else _fmt(r.std_error),
                    "" if r.trials is None else str(r.trials),
                    "" if r.seed is None else str(r.seed),
                )
            )
        )
    return "\n".join(lines) + "\n"


def spec_to_dict(spec: SweepSpec) -> dict:
    base = {
        "n_tx": spec.base.n_tx,
        "n_rx": spec.base.n_rx,
        "n_eve": spec.base.n_eve,
        "snr_b_db": spec.base.snr_b_db,
        "snr_e_db": spec.base.snr_e_db,
        "modulation": spec.base.modulation.value,
    }
    out = {
        "base": base,
        "axis": spec.axis,
        "values": list(spec.values),
        "metrics": list(spec.metrics),
        "methods": list(spec.methods),
    }
    if spec.rs is not None:
        out["rs"] = spec.rs
    if spec.estimator is not None:
        est = spec.estimator
        out["estimator"] = {
            "trials": est.trials,
            "seed": est.seed,
            "workers": est.workers,
            "mi_model": None if est.mi_model is None else est.mi_model.value,
        }
    return out


def _take(section: dict, name: str, keys: set) -> dict:
    unknown = set(section) - keys
    if unknown:
        raise ConfigError(f"{name}: unknown field {sorted(unknown)[0]!r}")
    return section


def spec_from_dict(data: dict) -> SweepSpec:
    """Strictly parse a sweep spec dictionary (the JSON config format)."""
    if not isinstance(data, dict):
        raise ConfigError("spec: expected a JSON object")
    _take(data, "spec", {"base", "axis", "values", "metrics", "methods", "rs", "estimator"})
    try:
        base_raw = data["base"]
        axis = data["axis"]
        values = data["values"]
        metrics = data["metrics"]
        methods = data["methods"]
    except KeyError as exc:
        raise ConfigError(f"spec: missing required field {exc.args[0]!r}") from None
    if not isinstance(base_raw, dict):
        raise ConfigError("base: expected a JSON object")
    _take(base_raw, "base", {"n_tx", "n_rx", "n_eve", "snr_b_db", "snr_e_db", "modulation"})
    base = SystemConfig(**base_raw)
    estimator = None
    est_raw = data.get("estimator")
    if est_raw is not None:
        if not isinstance(est_raw, dict):
            raise ConfigError("estimator: expected a JSON object")
        _take(est_raw, "estimator", {"trials", "seed", "workers", "mi_model"})
        est_kwargs = dict(est_raw)
        model = est_kwargs.get("mi_model")
        if isinstance(model, str):
            try:
                est_kwargs["mi_model"] = MiModel(model)
            except ValueError:
                raise ConfigError(f"estimator: unknown mi_model {model!r}") from None
        estimator = EstimatorConfig(**est_kwargs)
    return SweepSpec(
        base=base,
        axis=axis,
        values=tuple(values),
        metrics=tuple(metrics),
        methods=tuple(methods),
        rs=data.get("rs"),
        estimator=estimator,
    )


def estimate_diversity_order(points) -> float:
    """Least-squares slope of -log10(sop) against snr_b_db / 10.

    ``points`` is a sequence of (snr_b_db, sop) pairs; at least three are
    needed and every sop must be positive.  The fitted slope is the secrecy
    diversity order implied by the curve.
    """
    pts = [(float(x), float(p)) for x, p in points]
    if len(pts) < 3:
        raise DomainError("at least 3 (snr_b_db, sop) points are required")
    if any(p <= 0.0 for _, p in pts):
        raise DomainError("every sop must be positive to take its logarithm")
    x = np.array([x / 10.0 for x, _ in pts])
    y = np.array([-np.log10(p) for _, p in pts])
    slope, _ = np.polyfit(x, y, 1)
    return float(slope)


def _figure_specs(fig_id: str) -> list[tuple[str, SweepSpec]]:
    if fig_id == "1":
        base = SystemConfig(1, 1, 1, 0.0, 0.0, Modulation.BPSK)
        spec = SweepSpec(
            base=base,
            axis="snr_b_db",
            values=tuple(float(v) for v in range(-15, 16)),
            metrics=("mi_curve",),
            methods=("closed_form", "semianalytic"),
        )
        return [("fig1_mi_bpsk", spec)]
    if fig_id == "2":
        out = []
        for n_tx in (1, 2, 4, 8, 16):
            base = SystemConfig(n_tx, 3, 2, 0.0, -10.0, Modulation.BPSK)
            spec = SweepSpec(
                base=base,
                axis="snr_b_db",
                values=(-15.0, -10.0, -5.0, 0.0, 5.0, 10.0),
                metrics=("ergodic",),
                methods=("closed_form", "monte_carlo"),
                estimator=EstimatorConfig(trials=10**6, seed=_PRESET_SEED),
            )
            out.append((f"fig2_ntx{n_tx:02d}", spec))
        return out
    if fig_id == "3":
        out = []
        for snr_e_db in (-10.0, -5.0, 0.0):
            base = SystemConfig(3, 2, 2, 0.0, snr_e_db, Modulation.BPSK)
            spec = SweepSpec(
                base=base,
                axis="snr_b_db",
                values=(-15.0, -10.0, -5.0, 0.0, 5.0, 10.0, 15.0),
                metrics=("pnz",),
                methods=("closed_form", "monte_carlo"),
                estimator=EstimatorConfig(trials=10**7, seed=_PRESET_SEED),
            )
            out.append((f"fig3_snre{snr_e_db:g}", spec))
        return out
    if fig_id in ("4a", "4b"):
        snr_e_db = -10.0 if fig_id == "4a" else -6.0
        out = []
        for n_tx in range(1, 9):
            base = SystemConfig(n_tx, 3, 2, 0.0, snr_e_db, Modulation.BPSK)
            spec = SweepSpec(
                base=base,
                axis="snr_b_db",
                values=tuple(float(v) for v in range(-15, 31, 5)),
                metrics=("sop",),
                methods=("closed_form", "semianalytic", "monte_carlo"),
                rs=0.5,
                estimator=EstimatorConfig(trials=10**6, seed=_PRESET_SEED),
            )
            out.append((f"fig{fig_id}_ntx{n_tx}", spec))
        return out
    if fig_id == "5":
        base = SystemConfig(5, 2, 2, 30.0, 0.0, Modulation.BPSK)
        spec = SweepSpec(
            base=base,
            axis="snr_e_db",
            values=tuple(float(v) for v in range(-10, 1)),
            metrics=("sop_asymptotic",),
            methods=("closed_form", "monte_carlo"),
            rs=0.5,
            estimator=EstimatorConfig(trials=10**7, seed=_PRESET_SEED),
        )
        return [("fig5_asymptote", spec)]
    raise ConfigError(f"figure: unknown id {fig_id!r}; expected one of {FIGURE_IDS}")


def reproduce_figure(
    fig_id,
    out_dir,
    seed: int | None = None,
    trials: int | None = None,
    workers: int | None = None,
) -> list[Path]:
    """Run a figure preset and write its CSV file(s) plus a JSON sidecar.

    Figures with a curve family (one curve per antenna count or eavesdropper
    SNR) produce one fixed-schema CSV per curve; the sidecar records the full
    sweep spec of every file so the outputs can be regenerated exactly.
    ``seed``, ``trials`` and ``workers`` override the preset estimator.
    Never draws plots.
    """
    fig_id = str(fig_id).lower()
    specs = _figure_specs(fig_id)
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []
    manifest_files = []
    for name, spec in specs:
        if spec.estimator is not None and (seed, trials, workers) != (None, None, None):
            est = spec.estimator
            est = EstimatorConfig(
                trials=trials if trials is not None else est.trials,
                seed=seed if seed is not None else est.seed,
                workers=workers if workers is not None else est.workers,
                mi_model=est.mi_model,
            )
            spec = dataclasses.replace(spec, estimator=est)
        rows = run_sweep(spec)
        csv_path = out_dir / f"{name}.csv"
        csv_path.write_bytes(rows_to_csv(rows).encode("ascii"))
        written.append(csv_path)
        manifest_files.append({"csv": csv_path.name, "spec": spec_to_dict(spec)})
    from . import __version__

    manifest = {
        "figure": fig_id,
        "tool": "mimome",
        "version": __version__,
        "files": manifest_files,
    }
    manifest_path = out_dir / f"fig{fig_id}_manifest.json"
    manifest_path.write_bytes((json.dumps(manifest, indent=2) + "\n").encode("ascii"))
    written.append(manifest_path)
    return written
