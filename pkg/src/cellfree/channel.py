"""Channel models: link budget, synthetic fading, measured channels.

A channel realization is an M x K complex matrix H whose (m, k) entry
couples access point m to user terminal k, h = sqrt(beta) * p with
large-scale gain beta and unit-variance Rayleigh fading p.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .config import Geometry, SystemConfig
from .errors import IngestError, PlacementError

BOLTZMANN_J_PER_K = 1.380649e-23

_MIN_LINK_DISTANCE_M = 1e-9


@dataclass(frozen=True)
class ChannelRealization:
    """One draw of the propagation state."""

    H: np.ndarray      # (M, K) complex channel coefficients
    beta: np.ndarray   # (M, K) large-scale gains, linear

    def __post_init__(self):
        if self.H.shape != self.beta.shape or self.H.ndim != 2:
            raise ValueError("H and beta must be matching 2-D arrays")
        if not np.all(np.isfinite(self.beta)) or np.any(self.beta <= 0):
            raise ValueError("beta must be finite and positive")
        if not np.all(np.isfinite(self.H)):
            raise ValueError("H must be finite")


@dataclass(frozen=True)
class MeasurementTensor:
    """Measured channel snapshots: instances x APs x UEs with a mask."""

    values: np.ndarray             # (F, M, K) complex
    valid: np.ndarray              # (F, M, K) bool
    source: str = field(default="", compare=False)

    def __post_init__(self):
        if self.values.shape != self.valid.shape or self.values.ndim != 3:
            raise IngestError("values and valid must be matching 3-D arrays")
        if self.values.shape[0] < 1:
            raise IngestError("need at least one instance")
        per_link = self.valid.any(axis=0)
        if not per_link.all():
            m, k = np.argwhere(~per_link)[0]
            raise IngestError(
                f"no valid instance for link (ap={m}, ue={k})"
                + (f" in {self.source}" if self.source else ""))

    @property
    def num_instances(self) -> int:
        return self.values.shape[0]

    def fully_valid_instances(self) -> np.ndarray:
        """Indices of instances with every link marked valid."""
        return np.flatnonzero(self.valid.all(axis=(1, 2)))


def noise_power(cfg: SystemConfig) -> float:
    """Receiver noise power in watt: k_B * T * B * noise factor."""
    noise_factor = 10.0 ** (cfg.noise_figure_db / 10.0)
    return BOLTZMANN_J_PER_K * cfg.temperature_K * cfg.bandwidth_hz \
        * noise_factor


def transmit_snr(cfg: SystemConfig) -> float:
    """Normalized uplink SNR rho: power cap over noise power (linear)."""
    return cfg.p_bar_w / noise_power(cfg)


def effective_pilot_snr(cfg: SystemConfig) -> float:
    """Pilot SNR; tracks the data SNR unless pinned in the config."""
    if cfg.pilot_snr is not None:
        return cfg.pilot_snr
    return transmit_snr(cfg)


def small_scale_fading(M: int, K: int, rng: np.random.Generator) \
        -> np.ndarray:
    """i.i.d. unit-variance circularly symmetric complex Gaussian draws."""
    re = rng.standard_normal((M, K))
    im = rng.standard_normal((M, K))
    return (re + 1j * im) / np.sqrt(2.0)


def _draw_positions(geom: Geometry, cfg: SystemConfig,
                    rng: np.random.Generator):
    ap = np.empty((cfg.M, 3))
    ue = np.empty((cfg.K, 3))
    ap[:, :2] = rng.uniform(0.0, geom.area_side_m, size=(cfg.M, 2))
    ap[:, 2] = geom.ap_height_m
    ue[:, :2] = rng.uniform(0.0, geom.area_side_m, size=(cfg.K, 2))
    ue[:, 2] = geom.ue_height_m
    return ap, ue


def large_scale_gains(geom: Geometry, ap_xyz: np.ndarray, ue_xyz: np.ndarray,
                      rng: np.random.Generator) -> np.ndarray:
    """Distance pathloss plus log-normal shadowing, linear scale."""
    diff = ap_xyz[:, None, :] - ue_xyz[None, :, :]
    dist = np.sqrt(np.sum(diff * diff, axis=2))
    if np.min(dist) < _MIN_LINK_DISTANCE_M:
        m, k = np.unravel_index(np.argmin(dist), dist.shape)
        raise PlacementError(f"ap {m} and ue {k} are coincident")
    loss_db = geom.pathloss_ref_db + 10.0 * geom.pathloss_exponent \
        * np.log10(dist / geom.ref_distance_m)
    shadow_db = geom.shadowing_sigma_db * rng.standard_normal(dist.shape)
    return 10.0 ** (-(loss_db - shadow_db) / 10.0)


def generate_channel(geom: Geometry, cfg: SystemConfig, seed) \
        -> ChannelRealization:
    """Draw placement, shadowing and fading for one realization.

    The same seed always reproduces the same realization.
    """
    rng = np.random.default_rng(seed)
    ap, ue = _draw_positions(geom, cfg, rng)
    beta = large_scale_gains(geom, ap, ue, rng)
    p = small_scale_fading(cfg.M, cfg.K, rng)
    return ChannelRealization(H=np.sqrt(beta) * p, beta=beta)


def sample_large_scale(geom: Geometry, cfg: SystemConfig, seed) -> np.ndarray:
    """Draw one placement and its shadowed gains, without fading."""
    rng = np.random.default_rng(seed)
    ap, ue = _draw_positions(geom, cfg, rng)
    return large_scale_gains(geom, ap, ue, rng)


def rayleigh_realization(beta: np.ndarray, seed) -> ChannelRealization:
    """Fresh fading on top of fixed large-scale gains."""
    beta = np.asarray(beta, dtype=float)
    rng = np.random.default_rng(seed)
    p = small_scale_fading(beta.shape[0], beta.shape[1], rng)
    return ChannelRealization(H=np.sqrt(beta) * p, beta=beta)


# --- measured channels ------------------------------------------------------

def beta_from_measurements(tensor: MeasurementTensor) -> np.ndarray:
    """Per-link mean squared magnitude over the valid instances."""
    power = np.abs(tensor.values) ** 2
    counts = tensor.valid.sum(axis=0)
    if np.any(counts == 0):
        m, k = np.argwhere(counts == 0)[0]
        raise IngestError(f"no valid instance for link (ap={m}, ue={k})")
    total = np.where(tensor.valid, power, 0.0).sum(axis=0)
    return total / counts


def realization_from_instance(tensor: MeasurementTensor, instance: int) \
        -> ChannelRealization:
    """Use one measured instance as the channel of a realization."""
    if not 0 <= instance < tensor.num_instances:
        raise IngestError(f"instance {instance} out of range "
                          f"[0, {tensor.num_instances})")
    mask = tensor.valid[instance]
    if not mask.all():
        bad = int((~mask).sum())
        raise IngestError(f"instance {instance} has {bad} invalid entries")
    return ChannelRealization(H=tensor.values[instance].copy(),
                              beta=beta_from_measurements(tensor))


_CSV_HEADER = ["instance", "ap", "ue", "re", "im", "valid"]


def load_measurement_csv(path: str | Path) -> MeasurementTensor:
    """Read a measurement tensor from CSV.

    Columns: instance, ap, ue, re, im, valid with zero-based indices.
    Rows absent from the file are treated as invalid entries.
    """
    p = Path(path)
    if not p.is_file():
        raise IngestError(f"measurement file not found: {p}")
    rows = []
    with p.open(newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or [h.strip() for h in header] != _CSV_HEADER:
            raise IngestError(
                f"{p}: expected header {','.join(_CSV_HEADER)}")
        for lineno, row in enumerate(reader, start=2):
            if not row or (len(row) == 1 and not row[0].strip()):
                continue
            if len(row) != 6:
                raise IngestError(f"{p}:{lineno}: expected 6 fields")
            try:
                f, m, k = int(row[0]), int(row[1]), int(row[2])
                re, im = float(row[3]), float(row[4])
                flag = int(row[5])
            except ValueError as exc:
                raise IngestError(f"{p}:{lineno}: {exc}") from exc
            if f < 0 or m < 0 or k < 0 or flag not in (0, 1):
                raise IngestError(f"{p}:{lineno}: bad indices or flag")
            rows.append((f, m, k, re, im, flag))
    if not rows:
        raise IngestError(f"{p}: no data rows")
    F = max(r[0] for r in rows) + 1
    M = max(r[1] for r in rows) + 1
    K = max(r[2] for r in rows) + 1
    values = np.zeros((F, M, K), dtype=complex)
    valid = np.zeros((F, M, K), dtype=bool)
    for f, m, k, re, im, flag in rows:
        values[f, m, k] = re + 1j * im
        valid[f, m, k] = bool(flag)
    return MeasurementTensor(values=values, valid=valid, source=str(p))


def save_beta_csv(beta: np.ndarray, path: str | Path) -> None:
    """Write an M x K gain matrix as plain CSV rows."""
    beta = np.asarray(beta)
    with Path(path).open("w", newline="") as fh:
        for row in beta:
            fh.write(",".join(f"{v:.9g}" for v in row) + "\n")
