"""Command-line experiment runner.

Every subcommand emits the fixed-schema CSV (stdout or --out).  Exit codes:
0 success, 2 configuration error, 3 numeric domain error, 4 I/O error.
"""

from __future__ import annotations

import argparse
import json
import sys

from .channel import SystemConfig
from .errors import ConfigError, DomainError
from .kernels import MiModel, Modulation
from .monte_carlo import EstimatorConfig
from .sweep import (
    FIGURE_IDS,
    SweepSpec,
    reproduce_figure,
    rows_to_csv,
    run_sweep,
    spec_from_dict,
)

_DEFAULT_SEED = 12345
_RATE_TRIALS = 10**6
_PROB_TRIALS = 10**7


def _add_common(parser: argparse.ArgumentParser, default_trials: int | None):
    parser.add_argument("--seed", type=int, default=None, help="random seed (default 12345)")
    parser.add_argument(
        "--trials",
        type=int,
        default=None,
        help=f"Monte-Carlo trials (default {default_trials if default_trials else 'preset'})",
    )
    parser.add_argument("--workers", type=int, default=None, help="worker processes (default 1)")
    parser.add_argument(
        "--modulation", choices=("bpsk", "qpsk"), default="bpsk", help="input constellation"
    )


def _add_system(parser: argparse.ArgumentParser):
    parser.add_argument("--n-tx", type=int, default=1, help="transmit antennas")
    parser.add_argument("--n-rx", type=int, default=1, help="legitimate receive antennas")
    parser.add_argument("--n-eve", type=int, default=1, help="eavesdropper antennas")
    parser.add_argument("--snr-b-db", type=float, default=0.0, help="main-channel average SNR, dB")
    parser.add_argument("--snr-e-db", type=float, default=0.0, help="eavesdropper average SNR, dB")
    parser.add_argument(
        "--mi",
        choices=("exact", "approx"),
        default="approx",
        help="MI model for Monte-Carlo rows",
    )
    parser.add_argument("--out", default=None, help="write CSV here instead of stdout")


def _system_config(args) -> SystemConfig:
    return SystemConfig(
        n_tx=args.n_tx,
        n_rx=args.n_rx,
        n_eve=args.n_eve,
        snr_b_db=args.snr_b_db,
        snr_e_db=args.snr_e_db,
        modulation=Modulation(args.modulation),
    )


def _estimator(args, default_trials: int) -> EstimatorConfig:
    return EstimatorConfig(
        trials=args.trials if args.trials is not None else default_trials,
        seed=args.seed if args.seed is not None else _DEFAULT_SEED,
        workers=args.workers if args.workers is not None else 1,
        mi_model=MiModel.select(Modulation(args.modulation), exact=(args.mi == "exact")),
    )


def _methods(args) -> tuple[str, ...]:
    return tuple(m.strip() for m in args.methods.split(",") if m.strip())


def _emit(args, rows) -> int:
    text = rows_to_csv(rows)
    if args.out:
        with open(args.out, "wb") as fh:
            fh.write(text.encode("ascii"))
    else:
        sys.stdout.write(text)
    return 0


def _cmd_mi_table(args) -> int:
    values = []
    v = args.start_db
    while v <= args.stop_db + 1e-12:
        values.append(round(v, 12))
        v += args.step_db
    spec = SweepSpec(
        base=_system_config(args),
        axis="snr_b_db",
        values=tuple(values),
        metrics=("mi_curve",),
        methods=_methods(args),
    )
    return _emit(args, run_sweep(spec))


def _point_spec(args, metric: str, default_trials: int, rs=None) -> SweepSpec:
    methods = _methods(args)
    return SweepSpec(
        base=_system_config(args),
        axis="snr_b_db",
        values=(args.snr_b_db,),
        metrics=(metric,),
        methods=methods,
        rs=rs,
        estimator=_estimator(args, default_trials) if "monte_carlo" in methods else None,
    )


def _cmd_ergodic(args) -> int:
    return _emit(args, run_sweep(_point_spec(args, "ergodic", _RATE_TRIALS)))


def _cmd_pnz(args) -> int:
    return _emit(args, run_sweep(_point_spec(args, "pnz", _PROB_TRIALS)))


def _cmd_sop(args) -> int:
    return _emit(args, run_sweep(_point_spec(args, "sop", _PROB_TRIALS, rs=args.rs)))


def _cmd_asymptotic(args) -> int:
    return _emit(args, run_sweep(_point_spec(args, "sop_asymptotic", _PROB_TRIALS, rs=args.rs)))


def _cmd_sweep(args) -> int:
    try:
        with open(args.config, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config: invalid JSON ({exc})") from None
    spec = spec_from_dict(data)
    if spec.estimator is not None and any(
        v is not None for v in (args.seed, args.trials, args.workers)
    ):
        est = spec.estimator
        est = EstimatorConfig(
            trials=args.trials if args.trials is not None else est.trials,
            seed=args.seed if args.seed is not None else est.seed,
            workers=args.workers if args.workers is not None else est.workers,
            mi_model=est.mi_model,
        )
        spec = SweepSpec(
            base=spec.base,
            axis=spec.axis,
            values=spec.values,
            metrics=spec.metrics,
            methods=spec.methods,
            rs=spec.rs,
            estimator=est,
        )
    return _emit(args, run_sweep(spec))


def _cmd_reproduce_fig(args) -> int:
    written = reproduce_figure(
        args.id, args.out, seed=args.seed, trials=args.trials, workers=args.workers
    )
    for path in written:
        print(path)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mimome",
        description="Secrecy performance of antenna-selection-aided wiretap channels",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("mi-table", help="tabulate exact and approximate MI over an SNR grid")
    _add_common(p, None)
    _add_system(p)
    p.add_argument("--start-db", type=float, default=-15.0)
    p.add_argument("--stop-db", type=float, default=15.0)
    p.add_argument("--step-db", type=float, default=1.0)
    p.add_argument("--methods", default="closed_form,semianalytic")
    p.set_defaults(func=_cmd_mi_table)

    p = sub.add_parser("ergodic", help="ergodic secrecy rate at one config")
    _add_common(p, _RATE_TRIALS)
    _add_system(p)
    p.add_argument("--methods", default="closed_form,monte_carlo")
    p.set_defaults(func=_cmd_ergodic)

    p = sub.add_parser("pnz", help="probability of non-zero secrecy at one config")
    _add_common(p, _PROB_TRIALS)
    _add_system(p)
    p.add_argument("--methods", default="closed_form,monte_carlo")
    p.set_defaults(func=_cmd_pnz)

    p = sub.add_parser("sop", help="secrecy outage probability at one config")
    _add_common(p, _PROB_TRIALS)
    _add_system(p)
    p.add_argument("--rs", type=float, required=True, help="target secrecy rate, bits")
    p.add_argument("--methods", default="closed_form,monte_carlo")
    p.set_defaults(func=_cmd_sop)

    p = sub.add_parser("asymptotic", help="high-SNR SOP asymptote at one config")
    _add_common(p, _PROB_TRIALS)
    _add_system(p)
    p.add_argument("--rs", type=float, required=True, help="target secrecy rate, bits")
    p.add_argument("--methods", default="closed_form")
    p.set_defaults(func=_cmd_asymptotic)

    p = sub.add_parser("sweep", help="run a sweep described by a JSON config file")
    _add_common(p, None)
    p.add_argument("--config", required=True, help="path to the sweep JSON")
    p.add_argument("--out", default=None, help="write CSV here instead of stdout")
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("reproduce-fig", help="write a figure preset's CSV files")
    _add_common(p, None)
    p.add_argument("id", choices=FIGURE_IDS, help="figure preset id")
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(func=_cmd_reproduce_fig)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except DomainError as exc:
        print(f"domain error: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
