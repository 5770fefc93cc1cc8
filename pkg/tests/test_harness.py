import math

import numpy as np
import pytest

from cellfree import (CdfSeries, ExperimentSpec, Geometry, IngestError,
                      SolverSettings, SystemConfig, empirical_cdf, median,
                      run_experiment, sweep_power)
from cellfree.harness import (CDF_HEADER, RECORDS_HEADER, SWEEP_HEADER,
                              cdf_outputs, write_cdf_csv, write_records_csv,
                              write_sweep_csv)


class TestEmpiricalCdf:
    def test_three_values(self):
        s = empirical_cdf([3, 1, 2])
        assert np.array_equal(s.values, [1, 2, 3])
        assert np.allclose(s.probs, [1 / 3, 2 / 3, 1.0])
        assert s.probs[-1] == 1.0

    def test_singleton(self):
        s = empirical_cdf([5])
        assert np.array_equal(s.values, [5.0])
        assert np.array_equal(s.probs, [1.0])

    def test_duplicates_keep_their_mass(self):
        s = empirical_cdf([2, 2])
        assert np.array_equal(s.values, [2.0, 2.0])
        assert np.array_equal(s.probs, [0.5, 1.0])

    def test_empty_rejected(self):
        with pytest.raises(ValueError, match="empty"):
            empirical_cdf([])

    def test_non_finite_rejected(self):
        with pytest.raises(ValueError, match="finite"):
            empirical_cdf([1.0, float("nan")])

    def test_series_invariants_enforced(self):
        with pytest.raises(ValueError, match="sorted"):
            CdfSeries(values=np.array([2.0, 1.0]),
                      probs=np.array([0.5, 1.0]))
        with pytest.raises(ValueError, match="end at 1"):
            CdfSeries(values=np.array([1.0, 2.0]),
                      probs=np.array([0.5, 0.9]))
        with pytest.raises(ValueError, match="strictly"):
            CdfSeries(values=np.array([1.0, 2.0]),
                      probs=np.array([1.0, 1.0]))
        with pytest.raises(ValueError):
            CdfSeries(values=np.array([1.0]), probs=np.array([0.0]))

    def test_random_samples_satisfy_invariants(self, rng):
        for _ in range(20):
            vals = rng.normal(size=int(rng.integers(1, 50)))
            s = empirical_cdf(vals)
            assert np.all(np.diff(s.values) >= 0)
            assert np.all(np.diff(s.probs) > 0)
            assert s.probs[0] > 0
            assert s.probs[-1] == 1.0


class TestMedian:
    def test_odd(self):
        assert median([1, 2, 3]) == 2.0

    def test_even_averages_central_pair(self):
        assert median([1, 2, 3, 4]) == 2.5

    def test_singleton(self):
        assert median([7]) == 7.0

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            median([])


def small_spec(**kw) -> ExperimentSpec:
    cfg_kw = dict(M=8, K=3, num_realizations=3, master_seed=5,
                  target_se=0.05)
    cfg_kw.update(kw.pop("cfg_kw", {}))
    return ExperimentSpec(cfg=SystemConfig(**cfg_kw), geom=Geometry(),
                          solver=SolverSettings(nu_grid_points=12,
                                                nu_refine_rounds=1), **kw)


class TestRunExperiment:
    def test_max_power_only_counts(self):
        spec = small_spec(algorithms=("max_power",),
                          cfg_kw=dict(num_realizations=1))
        out = run_experiment(spec)
        assert len(out.records) == 3
        assert all(rec.q == 1.0 for rec in out.records)
        assert all(rec.algorithm == "max_power" for rec in out.records)
        assert out.infeasible == 0

    def test_record_count_formula(self):
        spec = small_spec(target_se_list=(0.02, 0.05))
        out = run_experiment(spec)
        # R * K * (2 + number of EE targets)
        assert len(out.records) == 3 * 3 * (2 + 2)

    def test_deterministic(self):
        spec = small_spec()
        a = run_experiment(spec)
        b = run_experiment(spec)
        assert a.records == b.records

    def test_sorted_by_realization_ue_algorithm(self):
        spec = small_spec()
        out = run_experiment(spec)
        keys = [(r.realization, r.ue, r.algorithm) for r in out.records]
        assert keys == sorted(keys)

    def test_jobs_do_not_change_results(self):
        serial = run_experiment(small_spec(jobs=1))
        threaded = run_experiment(small_spec(jobs=3))
        assert serial.records == threaded.records

    def test_target_se_only_on_ee_records(self):
        spec = small_spec()
        out = run_experiment(spec)
        for rec in out.records:
            if rec.algorithm == "max_min_ee":
                assert rec.target_se == 0.05
            else:
                assert rec.target_se is None

    def test_ee_recomputable_from_fields(self):
        """ee = bandwidth * se / (p_bar*q + p_u) to 1e-12 relative."""
        spec = small_spec()
        cfg = spec.cfg
        out = run_experiment(spec)
        for rec in out.records:
            ee = cfg.bandwidth_hz * rec.se / (cfg.p_bar_w * rec.q
                                              + cfg.p_u_w)
            assert math.isclose(ee, rec.ee, rel_tol=1e-12)

    def test_min_se_ordering_per_realization(self):
        spec = small_spec(cfg_kw=dict(num_realizations=6, target_se=0.01))
        out = run_experiment(spec)
        mins: dict[tuple[str, int], float] = {}
        for rec in out.records:
            key = (rec.algorithm, rec.realization)
            mins[key] = min(mins.get(key, float("inf")), rec.se)
        for r in range(6):
            assert mins[("max_min_se", r)] >= mins[("max_power", r)] - 1e-9
            assert mins[("max_min_se", r)] >= mins[("max_min_ee", r)] - 1e-9

    def test_infeasible_targets_flagged_not_fatal(self):
        spec = small_spec(target_se_list=(0.05, 1e6))
        out = run_experiment(spec)
        assert len(out.records) == 3 * 3 * (2 + 2)
        bad = [r for r in out.records if not r.feasible]
        assert len(bad) == 3 * 3
        assert out.infeasible == 9
        assert all(r.algorithm == "max_min_ee" and r.target_se == 1e6
                   for r in bad)
        assert all(math.isnan(r.se) for r in bad)

    def test_fix_placement_reuses_geometry(self):
        spec = small_spec(fix_placement=True)
        out = run_experiment(spec)
        again = run_experiment(spec)
        assert out.records == again.records
        fresh = run_experiment(small_spec(fix_placement=False))
        assert fresh.records != out.records


def tensor_csv_text(F, M, K, seed=0, invalid=()) -> str:
    rng = np.random.default_rng(seed)
    invalid = set(invalid)
    lines = ["instance,ap,ue,re,im,valid"]
    for f in range(F):
        for m in range(M):
            for k in range(K):
                re, im = (float(x) for x in rng.normal(size=2))
                flag = 0 if (f, m, k) in invalid else 1
                lines.append(f"{f},{m},{k},{re!r},{im!r},{flag}")
    return "\n".join(lines) + "\n"


class TestMeasurementRuns:
    def test_run_from_tensor(self, tmp_path):
        path = tmp_path / "tensor.csv"
        path.write_text(tensor_csv_text(F=4, M=8, K=3))
        spec = small_spec(measurement_csv=str(path))
        out = run_experiment(spec)
        assert len(out.records) == 3 * 3 * 3
        # measured channels replace the synthetic draw but the rest of
        # the pipeline is unchanged, so a rerun is still deterministic
        assert out.records == run_experiment(spec).records

    def test_partially_valid_instances_are_skipped(self, tmp_path):
        # instance 1 has a hole; instances 0, 2, 3 carry the run
        path = tmp_path / "tensor.csv"
        path.write_text(tensor_csv_text(F=4, M=8, K=3,
                                        invalid=[(1, 0, 0)]))
        out = run_experiment(small_spec(measurement_csv=str(path)))
        assert len(out.records) == 3 * 3 * 3

    def test_too_few_valid_instances(self, tmp_path):
        path = tmp_path / "tensor.csv"
        path.write_text(tensor_csv_text(F=4, M=8, K=3,
                                        invalid=[(1, 0, 0), (3, 2, 1)]))
        spec = small_spec(measurement_csv=str(path))
        with pytest.raises(IngestError, match="fully valid"):
            run_experiment(spec)


class TestCsvOutput:
    def test_records_csv_shape(self, tmp_path):
        spec = small_spec()
        out = run_experiment(spec)
        path = tmp_path / "records.csv"
        write_records_csv(out.records, path)
        lines = path.read_text().splitlines()
        assert lines[0] == RECORDS_HEADER
        assert lines[0] == ("realization,ue,algorithm,target_se,q,sinr,"
                            "se_bits_s_hz,power_w,ee_bits_j")
        assert len(lines) == 1 + len(out.records)
        first = lines[1].split(",")
        assert first[0] == "0" and first[1] == "0"
        # 9 significant digits
        q = float(first[4])
        assert f"{q:.9g}" == first[4]

    def test_infeasible_rows_have_empty_metrics(self, tmp_path):
        spec = small_spec(target_se_list=(1e6,))
        out = run_experiment(spec)
        path = tmp_path / "records.csv"
        write_records_csv(out.records, path)
        for line in path.read_text().splitlines()[1:]:
            cells = line.split(",")
            if cells[2] == "max_min_ee":
                assert cells[4:] == ["", "", "", "", ""]

    def test_cdf_outputs_single_target(self):
        out = run_experiment(small_spec())
        series = cdf_outputs(out.records)
        assert sorted(series) == [
            "cdf_ee_max_min_ee.csv", "cdf_ee_max_min_se.csv",
            "cdf_ee_max_power.csv", "cdf_se_max_min_ee.csv",
            "cdf_se_max_min_se.csv", "cdf_se_max_power.csv"]
        for s in series.values():
            assert s.values.size == 3 * 3
            assert s.probs[-1] == 1.0

    def test_cdf_outputs_multi_target_suffix(self):
        out = run_experiment(small_spec(target_se_list=(0.02, 0.05)))
        series = cdf_outputs(out.records)
        assert "cdf_se_max_min_ee_sr0.02.csv" in series
        assert "cdf_se_max_min_ee_sr0.05.csv" in series
        assert "cdf_se_max_power.csv" in series

    def test_cdf_outputs_drop_infeasible(self):
        out = run_experiment(small_spec(target_se_list=(1e6,)))
        series = cdf_outputs(out.records)
        # every EE-target record is infeasible: no max_min_ee series
        assert "cdf_se_max_min_ee.csv" not in series
        assert "cdf_se_max_power.csv" in series

    def test_cdf_csv_round_trip(self, tmp_path):
        out = run_experiment(small_spec())
        series = cdf_outputs(out.records)
        name, s = sorted(series.items())[0]
        path = tmp_path / name
        write_cdf_csv(s, path)
        lines = path.read_text().splitlines()
        assert lines[0] == CDF_HEADER == "value,cdf"
        data = np.array([[float(c) for c in ln.split(",")]
                         for ln in lines[1:]])
        assert np.all(np.diff(data[:, 0]) >= 0)
        assert np.all(np.diff(data[:, 1]) > 0)
        assert data[-1, 1] == 1.0


class TestSweep:
    def sweep_spec(self) -> ExperimentSpec:
        return small_spec(sweep_p_bar_w=(0.1, 0.2), sweep_p_u_w=(0.1, 0.2),
                          cfg_kw=dict(num_realizations=4, target_se=0.05))

    def test_row_grid_and_order(self):
        res = sweep_power(self.sweep_spec())
        assert len(res.rows) == 2 * 2 * 3
        keys = [(r.p_bar_w, r.p_u_w, r.algorithm) for r in res.rows]
        assert keys == sorted(keys)

    def test_max_power_se_invariant_to_circuit_power(self):
        res = sweep_power(self.sweep_spec())
        for p_bar in (0.1, 0.2):
            ses = {r.median_se for r in res.rows
                   if r.algorithm == "max_power" and r.p_bar_w == p_bar}
            assert len(ses) == 1

    def test_max_power_ee_decreases_with_circuit_power(self):
        res = sweep_power(self.sweep_spec())
        for p_bar in (0.1, 0.2):
            ees = [r.median_ee for r in res.rows
                   if r.algorithm == "max_power" and r.p_bar_w == p_bar]
            assert ees[0] > ees[1]

    def test_requires_grids(self):
        with pytest.raises(ValueError, match="grid"):
            sweep_power(small_spec())

    def test_sweep_csv_schema(self, tmp_path):
        res = sweep_power(self.sweep_spec())
        path = tmp_path / "sweep.csv"
        write_sweep_csv(res.rows, path)
        lines = path.read_text().splitlines()
        assert lines[0] == SWEEP_HEADER == \
            "p_bar_w,p_u_w,algorithm,median_se,median_ee"
        assert len(lines) == 1 + len(res.rows)
