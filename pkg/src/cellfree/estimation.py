"""Pilot signaling and per-AP MMSE channel estimation."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .channel import ChannelRealization

_UNIT_NORM_TOL = 1e-9


@dataclass(frozen=True)
class PilotBook:
    """Row k holds the unit-norm pilot sequence of UE k (K x tau)."""

    phi: np.ndarray

    def __post_init__(self):
        if self.phi.ndim != 2 or self.phi.shape[1] < 1:
            raise ValueError("phi must be K x tau with tau >= 1")
        norms = np.linalg.norm(self.phi, axis=1)
        if np.any(np.abs(norms - 1.0) > _UNIT_NORM_TOL):
            raise ValueError("pilot sequences must have unit norm")

    @property
    def K(self) -> int:
        return self.phi.shape[0]

    @property
    def tau(self) -> int:
        return self.phi.shape[1]

    def cross_gains(self) -> np.ndarray:
        """|phi_k^H phi_j|^2 for every pilot pair (K x K)."""
        inner = self.phi.conj() @ self.phi.T
        return np.abs(inner) ** 2


@dataclass(frozen=True)
class PilotObservation:
    """Received pilot block, one row per AP (M x tau)."""

    y_p: np.ndarray

    def __post_init__(self):
        if self.y_p.ndim != 2:
            raise ValueError("y_p must be 2-D")


@dataclass(frozen=True)
class ChannelEstimate:
    """MMSE estimate and the corresponding estimation error."""

    h_hat: np.ndarray
    h_tilde: np.ndarray

    def __post_init__(self):
        if self.h_hat.shape != self.h_tilde.shape:
            raise ValueError("h_hat and h_tilde must have the same shape")


def orthogonal_pilots(K: int, tau: int | None = None) -> PilotBook:
    """Mutually orthogonal unit-norm pilots; tau defaults to K."""
    if K < 1:
        raise ValueError("K must be >= 1")
    if tau is None:
        tau = K
    if tau < K:
        raise ValueError(f"tau={tau} cannot carry {K} orthogonal pilots")
    phi = np.zeros((K, tau), dtype=complex)
    phi[:, :K] = np.eye(K)
    return PilotBook(phi=phi)


def pilot_phase(H: np.ndarray, pilots: PilotBook, pilot_snr: float, seed,
                noiseless: bool = False) -> PilotObservation:
    """Simulate the uplink pilot block.

    Every UE sends its pilot at the full pilot power. Set noiseless for
    deterministic tests; the seed is ignored in that case.
    """
    if H.shape[1] != pilots.K:
        raise ValueError("H and pilot book disagree on K")
    if pilot_snr <= 0:
        raise ValueError("pilot_snr must be positive")
    scale = np.sqrt(pilot_snr * pilots.tau)
    y = scale * (H @ pilots.phi)
    if not noiseless:
        rng = np.random.default_rng(seed)
        shape = (H.shape[0], pilots.tau)
        z = (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) \
            / np.sqrt(2.0)
        y = y + z
    return PilotObservation(y_p=y)


def mmse_estimate(obs: PilotObservation, beta: np.ndarray, pilots: PilotBook,
                  pilot_snr: float) -> np.ndarray:
    """Per-entry MMSE channel estimate from the pilot observation.

    Pilot contamination enters through the pilot cross gains: UEs with
    non-orthogonal pilots leak into each other's estimates.
    """
    y = obs.y_p
    if y.shape[1] != pilots.tau:
        raise ValueError("observation and pilot book disagree on tau")
    if beta.shape != (y.shape[0], pilots.K):
        raise ValueError("beta must be M x K")
    if pilot_snr <= 0:
        raise ValueError("pilot_snr must be positive")
    rho_tau = pilot_snr * pilots.tau
    # projection of each AP's observation onto each pilot sequence
    proj = y @ pilots.phi.conj().T                      # (M, K)
    denom = rho_tau * (beta @ pilots.cross_gains()) + 1.0
    return (np.sqrt(rho_tau) * beta / denom) * proj


def estimation_error(H: np.ndarray, h_hat: np.ndarray) -> np.ndarray:
    """Residual the combiner cannot see: H minus its estimate."""
    if H.shape != h_hat.shape:
        raise ValueError("H and h_hat must have the same shape")
    return H - h_hat


def estimate_channel(realization: ChannelRealization, pilots: PilotBook,
                     pilot_snr: float, seed,
                     noiseless: bool = False) -> ChannelEstimate:
    """Run the pilot phase and MMSE estimation for one realization."""
    obs = pilot_phase(realization.H, pilots, pilot_snr, seed,
                      noiseless=noiseless)
    h_hat = mmse_estimate(obs, realization.beta, pilots, pilot_snr)
    return ChannelEstimate(h_hat=h_hat,
                           h_tilde=estimation_error(realization.H, h_hat))
