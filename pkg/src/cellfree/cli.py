"""Command line interface.

Exit codes: 0 success, 2 configuration error, 3 ingest error,
4 every requested solve was infeasible.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from .channel import (beta_from_measurements, effective_pilot_snr,
                      load_measurement_csv, save_beta_csv, transmit_snr)
from .config import load_experiment
from .errors import ConfigError, Infeasible, IngestError
from .harness import (build_profile, cdf_outputs, run_experiment,
                      sweep_power, write_cdf_csv, write_records_csv,
                      write_sweep_csv)
from .tpc import active_backend, max_min_ee, max_min_se, max_power

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_INGEST = 3
EXIT_INFEASIBLE = 4


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cellfree",
        description="Cell-free massive MIMO uplink simulator")
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate",
                         help="run realizations and write records + CDFs")
    sim.add_argument("config")
    sim.add_argument("--out", default=".", help="output directory")
    sim.add_argument("--jobs", type=int, default=None)

    swp = sub.add_parser("sweep", help="medians over a power grid")
    swp.add_argument("config")
    swp.add_argument("--out", default=".", help="output directory")
    swp.add_argument("--jobs", type=int, default=None)

    ing = sub.add_parser("ingest",
                         help="average a measurement tensor into gains")
    ing.add_argument("tensor", help="measurement CSV")
    ing.add_argument("--out", default="beta.csv", help="output CSV")

    sol = sub.add_parser("solve",
                         help="solve one realization and print the result")
    sol.add_argument("config")
    sol.add_argument("--realization", type=int, default=0)
    return parser


def _load_spec(args):
    spec = load_experiment(args.config)
    if getattr(args, "jobs", None) is not None:
        if args.jobs < 1:
            raise ConfigError("--jobs must be >= 1")
        spec = replace(spec, jobs=args.jobs)
    return spec


def _cmd_simulate(args) -> int:
    spec = _load_spec(args)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    result = run_experiment(spec)
    write_records_csv(result.records, out / "records.csv")
    feasible = sum(rec.feasible for rec in result.records)
    if result.infeasible:
        print(f"warning: {result.infeasible} infeasible records excluded "
              "from CDFs", file=sys.stderr)
    if feasible == 0:
        print("error: every record is infeasible", file=sys.stderr)
        return EXIT_INFEASIBLE
    for name, series in cdf_outputs(result.records).items():
        write_cdf_csv(series, out / name)
    print(f"{feasible}/{len(result.records)} records "
          f"({spec.cfg.num_realizations} realizations, "
          f"backend {active_backend()}) -> {out}")
    return EXIT_OK


def _cmd_sweep(args) -> int:
    spec = _load_spec(args)
    if not spec.sweep_p_bar_w or not spec.sweep_p_u_w:
        raise ConfigError("sweep requires experiment.sweep_p_bar_w and "
                          "experiment.sweep_p_u_w")
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    result = sweep_power(spec)
    write_sweep_csv(result.rows, out / "sweep.csv")
    if result.infeasible:
        print(f"warning: {result.infeasible} infeasible solves skipped",
              file=sys.stderr)
    if all(np.isnan(row.median_se) for row in result.rows):
        print("error: every grid point is infeasible", file=sys.stderr)
        return EXIT_INFEASIBLE
    print(f"{len(result.rows)} grid rows -> {out / 'sweep.csv'}")
    return EXIT_OK


def _cmd_ingest(args) -> int:
    tensor = load_measurement_csv(args.tensor)
    beta = beta_from_measurements(tensor)
    save_beta_csv(beta, args.out)
    full = tensor.fully_valid_instances().size
    print(f"{tensor.num_instances} instances "
          f"({full} fully valid), {beta.shape[0]} x {beta.shape[1]} "
          f"gains -> {args.out}")
    return EXIT_OK


def _cmd_solve(args) -> int:
    spec = _load_spec(args)
    cfg = spec.cfg
    if not 0 <= args.realization < cfg.num_realizations:
        raise ConfigError(f"--realization must be in "
                          f"[0, {cfg.num_realizations})")
    rho = transmit_snr(cfg)
    profile = build_profile(spec, cfg, args.realization,
                            effective_pilot_snr(cfg))
    print(f"realization {args.realization}: rho = {rho:.6g} "
          f"({10 * np.log10(rho):.2f} dB), backend {active_backend()}")
    solved = 0
    for algorithm in spec.algorithms:
        print(f"\n[{algorithm}]")
        try:
            if algorithm == "max_power":
                res = max_power(cfg.K)
                from .combining import sinr_and_se
                _, se = sinr_and_se(profile, res.q.q, rho)
                print(f"  q = {_vec(res.q.q)}")
                print(f"  min se = {se.min():.6g} bits/s/Hz")
            elif algorithm == "max_min_se":
                res = max_min_se(profile, rho, 1.0, spec.solver)
                print(f"  q = {_vec(res.q.q)}")
                print(f"  min se = {res.objective:.6g} bits/s/Hz")
            else:
                res = max_min_ee(profile, rho, cfg, spec.solver)
                print(f"  q = {_vec(res.q.q)}")
                print(f"  nu_star = {res.nu_star:.6g}, "
                      f"nu_opt = {res.nu_opt:.6g}")
                print(f"  min weighted ee = {res.objective:.6g} bits/J")
        except Infeasible as exc:
            print(f"  infeasible: {exc}")
            continue
        solved += 1
    return EXIT_OK if solved else EXIT_INFEASIBLE


def _vec(q: np.ndarray) -> str:
    return "[" + ", ".join(f"{v:.6g}" for v in q) + "]"


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    handlers = {
        "simulate": _cmd_simulate,
        "sweep": _cmd_sweep,
        "ingest": _cmd_ingest,
        "solve": _cmd_solve,
    }
    try:
        return handlers[args.command](args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except IngestError as exc:
        print(f"ingest error: {exc}", file=sys.stderr)
        return EXIT_INGEST


if __name__ == "__main__":
    sys.exit(main())
