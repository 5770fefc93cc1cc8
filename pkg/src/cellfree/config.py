"""Configuration types and the experiment config file parser.

The config file is plain text. Keys live in four sections (system,
geometry, solver, experiment) and may be written either with a
``[section]`` header or inline as ``section.key = value``. ``#`` and
``;`` start comments. List values are comma separated.
"""

from __future__ import annotations

from dataclasses import dataclass, field, fields
from pathlib import Path

import numpy as np

from .errors import ConfigError

ALGORITHMS = ("max_power", "max_min_se", "max_min_ee")


@dataclass(frozen=True)
class SystemConfig:
    """Radio-system level parameters.

    Powers are in watt, bandwidth in Hz, temperature in kelvin. The
    per-UE cap is p_bar_w; q coefficients are normalized to [0, 1].
    """

    M: int = 64                  # access points
    K: int = 8                   # user terminals
    bandwidth_hz: float = 20e6
    temperature_K: float = 290.0
    noise_figure_db: float = 9.0
    p_bar_w: float = 0.2         # per-UE transmit power cap
    p_u_w: float = 0.1           # fixed per-UE circuit power
    pilot_len: int | None = None     # pilot symbols; None means K
    pilot_snr: float | None = None   # linear; None tracks the data SNR
    target_se: float = 1.0       # SE floor used by the EE solver
    ue_weights: tuple[float, ...] | None = None  # None means all ones
    master_seed: int = 0
    num_realizations: int = 100

    def __post_init__(self):
        if self.M < 1 or self.K < 1 or self.M < self.K:
            raise ConfigError(f"need M >= K >= 1, got M={self.M} K={self.K}")
        for name in ("bandwidth_hz", "temperature_K", "p_bar_w", "p_u_w"):
            if getattr(self, name) <= 0:
                raise ConfigError(f"{name} must be positive")
        if self.noise_figure_db < 0:
            raise ConfigError("noise_figure_db must be >= 0")
        if self.pilot_len is not None and self.pilot_len < self.K:
            raise ConfigError(
                f"pilot_len={self.pilot_len} too short for K={self.K} "
                "orthogonal pilots")
        if self.pilot_snr is not None and self.pilot_snr <= 0:
            raise ConfigError("pilot_snr must be positive when given")
        if self.target_se < 0:
            raise ConfigError("target_se must be >= 0")
        if self.ue_weights is not None:
            if len(self.ue_weights) != self.K:
                raise ConfigError("ue_weights must have K entries")
            if any(w <= 0 for w in self.ue_weights):
                raise ConfigError("ue_weights must all be > 0")
        if self.master_seed < 0:
            raise ConfigError("master_seed must be >= 0")
        if self.num_realizations < 1:
            raise ConfigError("num_realizations must be >= 1")

    @property
    def tau_p(self) -> int:
        """Pilot length actually used."""
        return self.K if self.pilot_len is None else self.pilot_len

    def weights(self) -> np.ndarray:
        if self.ue_weights is None:
            return np.ones(self.K)
        return np.asarray(self.ue_weights, dtype=float)


@dataclass(frozen=True)
class Geometry:
    """Synthetic deployment: nodes uniform in a square service area."""

    area_side_m: float = 200.0
    ap_height_m: float = 35.0
    ue_height_m: float = 1.5
    pathloss_exponent: float = 3.5
    pathloss_ref_db: float = 35.0    # loss at the reference distance
    ref_distance_m: float = 1.0
    shadowing_sigma_db: float = 8.0

    def __post_init__(self):
        if self.area_side_m <= 0:
            raise ConfigError("area_side_m must be positive")
        if self.ref_distance_m <= 0:
            raise ConfigError("ref_distance_m must be positive")
        if self.pathloss_exponent <= 0:
            raise ConfigError("pathloss_exponent must be positive")
        if self.shadowing_sigma_db < 0:
            raise ConfigError("shadowing_sigma_db must be >= 0")
        if self.ap_height_m < 0 or self.ue_height_m < 0:
            raise ConfigError("antenna heights must be >= 0")


@dataclass(frozen=True)
class SolverSettings:
    """Tolerances and budgets for the power-control solvers."""

    bisection_rel_tol: float = 1e-5
    fixedpoint_tol: float = 1e-10
    fixedpoint_max_iter: int = 500
    bisection_max_iter: int = 100
    nu_grid_points: int = 64
    nu_refine_rounds: int = 2

    def __post_init__(self):
        if not 0 < self.bisection_rel_tol < 1:
            raise ConfigError("bisection_rel_tol must be in (0, 1)")
        if self.fixedpoint_tol <= 0:
            raise ConfigError("fixedpoint_tol must be positive")
        if self.fixedpoint_max_iter < 1 or self.bisection_max_iter < 1:
            raise ConfigError("iteration budgets must be >= 1")
        if self.nu_grid_points < 3:
            raise ConfigError("nu_grid_points must be >= 3")
        if self.nu_refine_rounds < 0:
            raise ConfigError("nu_refine_rounds must be >= 0")


@dataclass(frozen=True)
class ExperimentSpec:
    """Everything one run needs: system, placement, solver, schedule."""

    cfg: SystemConfig = field(default_factory=SystemConfig)
    geom: Geometry = field(default_factory=Geometry)
    solver: SolverSettings = field(default_factory=SolverSettings)
    algorithms: tuple[str, ...] = ALGORITHMS
    target_se_list: tuple[float, ...] | None = None  # None: (cfg.target_se,)
    sweep_p_bar_w: tuple[float, ...] = ()
    sweep_p_u_w: tuple[float, ...] = ()
    measurement_csv: str | None = None   # channels from file when set
    freeze_pilot_snr: bool = False       # pin pilot SNR across a sweep
    fix_placement: bool = False          # one placement for all realizations
    jobs: int = 1

    def __post_init__(self):
        if not self.algorithms:
            raise ConfigError("algorithms must not be empty")
        for name in self.algorithms:
            if name not in ALGORITHMS:
                raise ConfigError(f"unknown algorithm '{name}'")
        if len(set(self.algorithms)) != len(self.algorithms):
            raise ConfigError("algorithms must not repeat")
        for name in ("target_se_list", "sweep_p_bar_w", "sweep_p_u_w"):
            vals = getattr(self, name)
            if vals is None:
                continue
            if any(v < 0 for v in vals):
                raise ConfigError(f"{name} entries must be >= 0")
        if self.target_se_list is not None and not self.target_se_list:
            raise ConfigError("target_se_list must not be empty when given")
        for name in ("sweep_p_bar_w", "sweep_p_u_w"):
            if any(v <= 0 for v in getattr(self, name)):
                raise ConfigError(f"{name} entries must be > 0")
        if self.jobs < 1:
            raise ConfigError("jobs must be >= 1")

    @property
    def targets(self) -> tuple[float, ...]:
        if self.target_se_list is None:
            return (self.cfg.target_se,)
        return self.target_se_list


# --- config file parsing ---------------------------------------------------

def _to_int(s: str) -> int:
    try:
        return int(s)
    except ValueError as exc:
        raise ConfigError(f"expected integer, got '{s}'") from exc


def _to_float(s: str) -> float:
    try:
        return float(s)
    except ValueError as exc:
        raise ConfigError(f"expected number, got '{s}'") from exc


def _to_bool(s: str) -> bool:
    low = s.lower()
    if low in ("true", "yes", "on", "1"):
        return True
    if low in ("false", "no", "off", "0"):
        return False
    raise ConfigError(f"expected boolean, got '{s}'")


def _to_float_list(s: str) -> tuple[float, ...]:
    parts = [p.strip() for p in s.split(",") if p.strip()]
    return tuple(_to_float(p) for p in parts)


def _to_str_list(s: str) -> tuple[str, ...]:
    return tuple(p.strip() for p in s.split(",") if p.strip())


_SYSTEM_KEYS = {
    "M": _to_int,
    "K": _to_int,
    "bandwidth_hz": _to_float,
    "temperature_K": _to_float,
    "noise_figure_db": _to_float,
    "p_bar_w": _to_float,
    "p_u_w": _to_float,
    "pilot_len": _to_int,
    "pilot_snr": _to_float,
    "target_se": _to_float,
    "ue_weights": _to_float_list,
    "master_seed": _to_int,
    "num_realizations": _to_int,
}

_GEOMETRY_KEYS = {f.name: _to_float for f in fields(Geometry)}

_SOLVER_KEYS = {
    "bisection_rel_tol": _to_float,
    "fixedpoint_tol": _to_float,
    "fixedpoint_max_iter": _to_int,
    "bisection_max_iter": _to_int,
    "nu_grid_points": _to_int,
    "nu_refine_rounds": _to_int,
}

_EXPERIMENT_KEYS = {
    "algorithms": _to_str_list,
    "target_se_list": _to_float_list,
    "sweep_p_bar_w": _to_float_list,
    "sweep_p_u_w": _to_float_list,
    "measurement_csv": str,
    "freeze_pilot_snr": _to_bool,
    "fix_placement": _to_bool,
    "jobs": _to_int,
}

_SECTIONS = {
    "system": _SYSTEM_KEYS,
    "geometry": _GEOMETRY_KEYS,
    "solver": _SOLVER_KEYS,
    "experiment": _EXPERIMENT_KEYS,
}


def _strip_comment(line: str) -> str:
    for mark in ("#", ";"):
        pos = line.find(mark)
        if pos >= 0:
            line = line[:pos]
    return line.strip()


def parse_experiment(text: str) -> ExperimentSpec:
    """Parse config text into an ExperimentSpec.

    Raises ConfigError on unknown sections or keys, malformed lines,
    or values that fail validation.
    """
    raw: dict[str, dict[str, object]] = {name: {} for name in _SECTIONS}
    section = None
    for lineno, rawline in enumerate(text.splitlines(), start=1):
        line = _strip_comment(rawline)
        if not line:
            continue
        if line.startswith("[") and line.endswith("]"):
            section = line[1:-1].strip()
            if section not in _SECTIONS:
                raise ConfigError(f"line {lineno}: unknown section "
                                  f"'[{section}]'")
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value'")
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        if "." in key:
            sec, _, key = key.partition(".")
            sec = sec.strip()
            key = key.strip()
        else:
            sec = section
        if sec is None:
            raise ConfigError(f"line {lineno}: key '{key}' outside any "
                              "section")
        if sec not in _SECTIONS:
            raise ConfigError(f"line {lineno}: unknown section '{sec}'")
        keys = _SECTIONS[sec]
        if key not in keys:
            raise ConfigError(f"line {lineno}: unknown key '{sec}.{key}'")
        try:
            raw[sec][key] = keys[key](value)
        except ConfigError as exc:
            raise ConfigError(f"line {lineno}: {sec}.{key}: {exc}") from exc

    cfg = SystemConfig(**raw["system"])
    geom = Geometry(**raw["geometry"])
    solver = SolverSettings(**raw["solver"])
    exp = raw["experiment"]
    if "algorithms" in exp:
        exp["algorithms"] = tuple(exp["algorithms"])
    return ExperimentSpec(cfg=cfg, geom=geom, solver=solver, **exp)


def load_experiment(path: str | Path) -> ExperimentSpec:
    """Read and parse a config file."""
    p = Path(path)
    if not p.is_file():
        raise ConfigError(f"config file not found: {p}")
    return parse_experiment(p.read_text())
