"""Monte Carlo harness: deterministic runs, aggregation, CSV output.

Realization r of a run with master seed s derives its randomness from
the seed sequences (s, r, 0) for the channel and (s, r, 1) for pilot
noise, so any realization can be reproduced in isolation and results
do not depend on execution order.
"""

from __future__ import annotations

import concurrent.futures
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from .channel import (MeasurementTensor, effective_pilot_snr,
                      generate_channel, load_measurement_csv,
                      rayleigh_realization, realization_from_instance,
                      sample_large_scale, transmit_snr)
from .combining import (InterferenceProfile, energy_efficiency,
                        interference_profile, sinr_and_se, zf_weights)
from .config import ExperimentSpec, SystemConfig
from .errors import IngestError, InfeasibleTargetSE
from .estimation import estimate_channel, orthogonal_pilots
from .tpc import max_min_ee, max_min_se, max_power

_TAG_CHANNEL = 0
_TAG_PILOT = 1
_TAG_PLACEMENT = 2

RECORDS_HEADER = ("realization,ue,algorithm,target_se,q,sinr,"
                  "se_bits_s_hz,power_w,ee_bits_j")
SWEEP_HEADER = "p_bar_w,p_u_w,algorithm,median_se,median_ee"
CDF_HEADER = "value,cdf"


@dataclass(frozen=True)
class MetricRecord:
    """One UE's outcome for one realization and one algorithm."""

    realization: int
    ue: int
    algorithm: str
    target_se: float | None
    q: float
    sinr: float
    se: float
    power_w: float
    ee: float
    feasible: bool = True


@dataclass(frozen=True)
class RunResult:
    records: list[MetricRecord]
    infeasible: int


@dataclass(frozen=True)
class SweepRow:
    p_bar_w: float
    p_u_w: float
    algorithm: str
    median_se: float
    median_ee: float


@dataclass(frozen=True)
class SweepResult:
    rows: list[SweepRow]
    infeasible: int


@dataclass(frozen=True)
class CdfSeries:
    """Empirical CDF: sorted sample values with step heights i/n."""

    values: np.ndarray
    probs: np.ndarray

    def __post_init__(self):
        if self.values.ndim != 1 or self.values.shape != self.probs.shape:
            raise ValueError("values and probs must be matching vectors")
        if self.values.size == 0:
            raise ValueError("empty CDF")
        if np.any(np.diff(self.values) < 0):
            raise ValueError("values must be sorted")
        if self.probs[-1] != 1.0 or np.any(np.diff(self.probs) <= 0):
            raise ValueError("probs must increase strictly and end at 1")


def empirical_cdf(values) -> CdfSeries:
    """Empirical distribution of a sample; duplicates keep their mass."""
    arr = np.sort(np.asarray(values, dtype=float))
    if arr.size == 0:
        raise ValueError("cannot build a CDF from an empty sample")
    if not np.all(np.isfinite(arr)):
        raise ValueError("sample contains non-finite values")
    n = arr.size
    return CdfSeries(values=arr, probs=np.arange(1, n + 1) / n)


def median(values) -> float:
    """Sample median; the mean of the central pair for even sizes."""
    arr = np.asarray(values, dtype=float)
    if arr.size == 0:
        raise ValueError("median of an empty sample")
    return float(np.median(arr))


# --- realization pipeline ---------------------------------------------------

def _measurement_instances(tensor: MeasurementTensor, count: int) \
        -> np.ndarray:
    usable = tensor.fully_valid_instances()
    if usable.size < count:
        raise IngestError(
            f"need {count} fully valid instances, found {usable.size}")
    return usable[:count]


def build_profile(spec: ExperimentSpec, cfg: SystemConfig, r: int,
                  rho_p: float, tensor: MeasurementTensor | None = None,
                  instances: np.ndarray | None = None,
                  fixed_beta: np.ndarray | None = None) \
        -> InterferenceProfile:
    """Channel, pilots, MMSE estimate and ZF combiner for realization r."""
    seed_channel = [cfg.master_seed, r, _TAG_CHANNEL]
    if tensor is not None:
        realization = realization_from_instance(tensor, int(instances[r]))
    elif fixed_beta is not None:
        realization = rayleigh_realization(fixed_beta, seed_channel)
    else:
        realization = generate_channel(spec.geom, cfg, seed_channel)
    est = estimate_channel(realization, orthogonal_pilots(cfg.K, cfg.tau_p),
                           rho_p, [cfg.master_seed, r, _TAG_PILOT])
    W = zf_weights(est.h_hat)
    return interference_profile(W, est.h_tilde)


def _all_profiles(spec: ExperimentSpec, cfg: SystemConfig, rho_p: float) \
        -> list[InterferenceProfile]:
    tensor = None
    instances = None
    fixed_beta = None
    if spec.measurement_csv is not None:
        tensor = load_measurement_csv(spec.measurement_csv)
        instances = _measurement_instances(tensor, cfg.num_realizations)
    elif spec.fix_placement:
        fixed_beta = sample_large_scale(
            spec.geom, cfg, [cfg.master_seed, 0, _TAG_PLACEMENT])

    def one(r: int) -> InterferenceProfile:
        return build_profile(spec, cfg, r, rho_p, tensor=tensor,
                             instances=instances, fixed_beta=fixed_beta)

    indices = range(cfg.num_realizations)
    if spec.jobs > 1:
        with concurrent.futures.ThreadPoolExecutor(spec.jobs) as pool:
            return list(pool.map(one, indices))
    return [one(r) for r in indices]


def _flagged(r: int, algorithm: str, target: float, K: int) \
        -> list[MetricRecord]:
    nan = float("nan")
    return [MetricRecord(realization=r, ue=k, algorithm=algorithm,
                         target_se=target, q=nan, sinr=nan, se=nan,
                         power_w=nan, ee=nan, feasible=False)
            for k in range(K)]


def _records_for(r: int, algorithm: str, target: float | None,
                 profile: InterferenceProfile, q: np.ndarray, rho: float,
                 cfg: SystemConfig) -> list[MetricRecord]:
    sinr, se = sinr_and_se(profile, q, rho)
    power_w, ee = energy_efficiency(se, q, cfg)
    return [MetricRecord(realization=r, ue=k, algorithm=algorithm,
                         target_se=target, q=float(q[k]),
                         sinr=float(sinr[k]), se=float(se[k]),
                         power_w=float(power_w[k]), ee=float(ee[k]))
            for k in range(cfg.K)]


def run_experiment(spec: ExperimentSpec) -> RunResult:
    """Run every realization through every requested algorithm.

    Infeasible EE targets are flagged per record and the run continues;
    they are excluded from CDFs but kept in the record list.
    """
    cfg = spec.cfg
    rho = transmit_snr(cfg)
    rho_p = effective_pilot_snr(cfg)
    profiles = _all_profiles(spec, cfg, rho_p)

    def solve(r: int) -> tuple[list[MetricRecord], int]:
        profile = profiles[r]
        recs: list[MetricRecord] = []
        bad = 0
        for algorithm in spec.algorithms:
            if algorithm == "max_power":
                q = max_power(cfg.K).q.q
                recs.extend(
                    _records_for(r, algorithm, None, profile, q, rho, cfg))
            elif algorithm == "max_min_se":
                res = max_min_se(profile, rho, 1.0, spec.solver)
                recs.extend(
                    _records_for(r, algorithm, None, profile, res.q.q,
                                 rho, cfg))
            else:
                for target in spec.targets:
                    cfg_t = replace(cfg, target_se=target)
                    try:
                        res = max_min_ee(profile, rho, cfg_t, spec.solver)
                    except InfeasibleTargetSE:
                        recs.extend(_flagged(r, algorithm, target, cfg.K))
                        bad += cfg.K
                        continue
                    recs.extend(
                        _records_for(r, algorithm, target, profile,
                                     res.q.q, rho, cfg_t))
        return recs, bad

    records: list[MetricRecord] = []
    infeasible = 0
    if spec.jobs > 1:
        with concurrent.futures.ThreadPoolExecutor(spec.jobs) as pool:
            futures = [pool.submit(solve, r)
                       for r in range(cfg.num_realizations)]
            for fut in concurrent.futures.as_completed(futures):
                recs, bad = fut.result()
                records.extend(recs)
                infeasible += bad
    else:
        for r in range(cfg.num_realizations):
            recs, bad = solve(r)
            records.extend(recs)
            infeasible += bad
    # Emission order is fixed regardless of which worker finished first.
    records.sort(key=lambda rec: (rec.realization, rec.ue, rec.algorithm,
                                  -1.0 if rec.target_se is None
                                  else rec.target_se))
    return RunResult(records=records, infeasible=infeasible)


def sweep_power(spec: ExperimentSpec) -> SweepResult:
    """Medians over (realization x UE) for every power grid point.

    Channels depend on the transmit SNR only through p_bar_w, so
    realizations are generated once per p_bar_w value and shared
    across the p_u_w axis.
    """
    if not spec.sweep_p_bar_w or not spec.sweep_p_u_w:
        raise ValueError("sweep grids must be non-empty")
    base = spec.cfg
    frozen_rho_p = effective_pilot_snr(base) if spec.freeze_pilot_snr \
        else None
    rows: list[SweepRow] = []
    infeasible = 0
    for p_bar in spec.sweep_p_bar_w:
        cfg_b = replace(base, p_bar_w=p_bar)
        rho = transmit_snr(cfg_b)
        rho_p = frozen_rho_p if frozen_rho_p is not None \
            else effective_pilot_snr(cfg_b)
        profiles = _all_profiles(spec, cfg_b, rho_p)
        # SE depends only on p_bar; compute per-algorithm (q, se) once
        cached: dict[str, list[tuple[np.ndarray, np.ndarray]]] = {}
        for algorithm in spec.algorithms:
            if algorithm == "max_power":
                cached[algorithm] = [
                    (np.ones(cfg_b.K),
                     sinr_and_se(p, np.ones(cfg_b.K), rho)[1])
                    for p in profiles]
            elif algorithm == "max_min_se":
                sols = [max_min_se(p, rho, 1.0, spec.solver)
                        for p in profiles]
                cached[algorithm] = [
                    (s.q.q, sinr_and_se(p, s.q.q, rho)[1])
                    for s, p in zip(sols, profiles)]
        for p_u in spec.sweep_p_u_w:
            cfg_bu = replace(cfg_b, p_u_w=p_u)
            for algorithm in spec.algorithms:
                if algorithm == "max_min_ee":
                    pairs = []
                    for profile in profiles:
                        try:
                            res = max_min_ee(profile, rho, cfg_bu,
                                             spec.solver)
                        except InfeasibleTargetSE:
                            infeasible += 1
                            continue
                        _, se = sinr_and_se(profile, res.q.q, rho)
                        pairs.append((res.q.q, se))
                else:
                    pairs = cached[algorithm]
                if not pairs:
                    rows.append(SweepRow(p_bar, p_u, algorithm,
                                         float("nan"), float("nan")))
                    continue
                se_samples = np.concatenate([se for _, se in pairs])
                ee_samples = np.concatenate([
                    energy_efficiency(se, q, cfg_bu)[1]
                    for q, se in pairs])
                rows.append(SweepRow(p_bar, p_u, algorithm,
                                     median(se_samples),
                                     median(ee_samples)))
    rows.sort(key=lambda row: (row.p_bar_w, row.p_u_w, row.algorithm))
    return SweepResult(rows=rows, infeasible=infeasible)


# --- CSV output -------------------------------------------------------------

def _fmt(x: float) -> str:
    return f"{x:.9g}"


def write_records_csv(records: list[MetricRecord], path) -> None:
    """records.csv; flagged records keep their key fields, metrics empty."""
    lines = [RECORDS_HEADER]
    for rec in records:
        target = "" if rec.target_se is None else _fmt(rec.target_se)
        if rec.feasible:
            metrics = [_fmt(rec.q), _fmt(rec.sinr), _fmt(rec.se),
                       _fmt(rec.power_w), _fmt(rec.ee)]
        else:
            metrics = ["", "", "", "", ""]
        lines.append(",".join(
            [str(rec.realization), str(rec.ue), rec.algorithm, target]
            + metrics))
    Path(path).write_text("\n".join(lines) + "\n")


def _series_label(algorithm: str, target: float | None,
                  multi_target: bool) -> str:
    if algorithm == "max_min_ee" and multi_target:
        return f"{algorithm}_sr{target:g}"
    return algorithm


def cdf_outputs(records: list[MetricRecord]) -> dict[str, CdfSeries]:
    """One CDF per metric and algorithm (and EE target when several)."""
    targets = sorted({r.target_se for r in records
                      if r.algorithm == "max_min_ee"
                      and r.target_se is not None})
    multi = len(targets) > 1
    groups: dict[str, list[MetricRecord]] = {}
    for rec in records:
        if not rec.feasible:
            continue
        label = _series_label(rec.algorithm, rec.target_se, multi)
        groups.setdefault(label, []).append(rec)
    out: dict[str, CdfSeries] = {}
    for label, recs in groups.items():
        out[f"cdf_se_{label}.csv"] = empirical_cdf([r.se for r in recs])
        out[f"cdf_ee_{label}.csv"] = empirical_cdf([r.ee for r in recs])
    return out


def write_cdf_csv(series: CdfSeries, path) -> None:
    lines = [CDF_HEADER]
    lines.extend(f"{_fmt(v)},{_fmt(p)}"
                 for v, p in zip(series.values, series.probs))
    Path(path).write_text("\n".join(lines) + "\n")


def write_sweep_csv(rows: list[SweepRow], path) -> None:
    lines = [SWEEP_HEADER]
    lines.extend(
        ",".join([_fmt(row.p_bar_w), _fmt(row.p_u_w), row.algorithm,
                  _fmt(row.median_se), _fmt(row.median_ee)])
        for row in rows)
    Path(path).write_text("\n".join(lines) + "\n")
