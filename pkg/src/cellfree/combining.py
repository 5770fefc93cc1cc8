"""Zero-forcing combining and the per-UE performance metrics."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .config import SystemConfig
from .errors import RankDeficient

COND_THRESHOLD = 1e12

_LN2 = np.log(2.0)


@dataclass(frozen=True)
class InterferenceProfile:
    """All the combiner output statistics the power control needs.

    g[k, j] is the residual interference gain |w_k^H h_tilde_j|^2 and
    n[k] the combiner noise gain ||w_k||^2. Together with the SNR rho
    and a power allocation q they determine every SINR.
    """

    g: np.ndarray   # (K, K) nonnegative
    n: np.ndarray   # (K,) positive

    def __post_init__(self):
        if self.g.ndim != 2 or self.g.shape[0] != self.g.shape[1]:
            raise ValueError("g must be square")
        if self.n.shape != (self.g.shape[0],):
            raise ValueError("n must have one entry per UE")
        if not (np.all(np.isfinite(self.g)) and np.all(self.g >= 0)):
            raise ValueError("g must be finite and nonnegative")
        if not (np.all(np.isfinite(self.n)) and np.all(self.n > 0)):
            raise ValueError("n must be finite and positive")

    @property
    def K(self) -> int:
        return self.n.shape[0]

    def interference_matrix(self) -> np.ndarray:
        """Cross gains with the self term removed (used by the solvers)."""
        off = np.ascontiguousarray(self.g, dtype=float).copy()
        np.fill_diagonal(off, 0.0)
        return off


@dataclass(frozen=True)
class PowerAllocation:
    """Normalized per-UE power coefficients q in [0, 1]."""

    q: np.ndarray
    meta: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if self.q.ndim != 1:
            raise ValueError("q must be a vector")
        if not np.all(np.isfinite(self.q)):
            raise ValueError("q must be finite")
        if np.any(self.q < 0) or np.any(self.q > 1.0 + 1e-9):
            raise ValueError("q must lie in [0, 1]")


@dataclass(frozen=True)
class PerUEMetrics:
    """Per-UE link metrics for one realization and one allocation."""

    sinr: np.ndarray
    se: np.ndarray        # bits/s/Hz
    power_w: np.ndarray   # transmit plus circuit power, watt
    ee: np.ndarray        # bits/J

    @classmethod
    def evaluate(cls, profile: InterferenceProfile, q: np.ndarray,
                 rho: float, cfg: SystemConfig) -> "PerUEMetrics":
        sinr, se = sinr_and_se(profile, q, rho)
        power_w, ee = energy_efficiency(se, q, cfg)
        return cls(sinr=sinr, se=se, power_w=power_w, ee=ee)


def zf_weights(h_hat: np.ndarray, cond_threshold: float = COND_THRESHOLD) \
        -> np.ndarray:
    """Zero-forcing receive weights, one row per UE (K x M).

    Solves the Gram system instead of forming an explicit inverse.
    Raises RankDeficient when the Gram matrix is ill-conditioned.
    """
    if h_hat.ndim != 2:
        raise ValueError("h_hat must be M x K")
    M, K = h_hat.shape
    if M < K:
        raise RankDeficient(f"cannot zero-force K={K} UEs with M={M} APs")
    gram = h_hat.conj().T @ h_hat
    svals = np.linalg.svd(gram, compute_uv=False)
    if svals[-1] <= 0 or not np.all(np.isfinite(svals)) \
            or svals[0] / svals[-1] > cond_threshold:
        raise RankDeficient("estimated channel Gram matrix is singular "
                            "or ill-conditioned")
    return np.linalg.solve(gram, h_hat.conj().T)


def interference_profile(W: np.ndarray, h_tilde: np.ndarray) \
        -> InterferenceProfile:
    """Residual interference and noise gains at the combiner output."""
    if W.ndim != 2 or h_tilde.ndim != 2 or W.shape[1] != h_tilde.shape[0]:
        raise ValueError("W must be K x M and h_tilde M x K")
    if W.shape[0] != h_tilde.shape[1]:
        raise ValueError("W and h_tilde disagree on K")
    g = np.abs(W @ h_tilde) ** 2
    n = np.sum(np.abs(W) ** 2, axis=1)
    return InterferenceProfile(g=g, n=n)


def sinr_and_se(profile: InterferenceProfile, q: np.ndarray, rho: float) \
        -> tuple[np.ndarray, np.ndarray]:
    """Effective SINR and spectral efficiency for an allocation q."""
    q = np.asarray(q, dtype=float)
    if q.shape != (profile.K,):
        raise ValueError("q must have one entry per UE")
    if rho <= 0:
        raise ValueError("rho must be positive")
    cross = profile.g @ q - np.diag(profile.g) * q   # excludes the self term
    sinr = rho * q / (rho * cross + profile.n)
    se = np.log1p(sinr) / _LN2
    return sinr, se


def energy_efficiency(se: np.ndarray, q: np.ndarray, cfg: SystemConfig) \
        -> tuple[np.ndarray, np.ndarray]:
    """Consumed power (watt) and energy efficiency (bits/J) per UE."""
    se = np.asarray(se, dtype=float)
    q = np.asarray(q, dtype=float)
    if se.shape != q.shape:
        raise ValueError("se and q must have the same shape")
    power_w = cfg.p_bar_w * q + cfg.p_u_w
    ee = cfg.bandwidth_hz * se / power_w
    return power_w, ee
