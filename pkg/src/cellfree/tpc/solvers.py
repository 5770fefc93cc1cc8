"""Transmit power control: max-power, max-min SE, max-min EE.

All solvers work on an InterferenceProfile, which fixes the combiner
and channel state; only the power coefficients q in [0, cap] vary.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..combining import InterferenceProfile, PowerAllocation, sinr_and_se
from ..config import SolverSettings, SystemConfig
from ..errors import Infeasible, InfeasibleTargetSE
from . import _backend

# floor-feasibility slack for grid candidates: the SE floor is met by
# construction at nu >= nu_star, but the inner bisection may undershoot
# the floor by its own relative tolerance
_FLOOR_SLACK_REL = 1e-6


@dataclass(frozen=True)
class TpcResult:
    """Solver output: allocation plus the achieved objective.

    objective is the min (weighted) SE or EE across UEs; None for
    max_power, which never sees a profile to evaluate.
    """

    q: PowerAllocation
    objective: float | None
    nu_opt: float | None = None
    nu_star: float | None = None


def max_power(K: int) -> TpcResult:
    """Every UE transmits at its cap."""
    if K < 1:
        raise ValueError("K must be >= 1")
    alloc = PowerAllocation(q=np.ones(K), meta={"algorithm": "max_power"})
    return TpcResult(q=alloc, objective=None)


def _prepare(profile: InterferenceProfile):
    g_off = profile.interference_matrix()
    n = np.ascontiguousarray(profile.n, dtype=float)
    return g_off, n


def min_power_for_sinr(profile: InterferenceProfile, rho: float,
                       gamma, cap: float = 1.0,
                       settings: SolverSettings | None = None) \
        -> PowerAllocation:
    """Least power meeting per-UE SINR floors, by fixed-point iteration.

    The iteration map is a standard interference function, so starting
    from zero it climbs monotonically to the componentwise-minimal
    feasible allocation. Raises Infeasible when a component would have
    to exceed cap.
    """
    settings = settings or SolverSettings()
    _check_rho_cap(rho, cap)
    g_off, n = _prepare(profile)
    gamma = np.ascontiguousarray(
        np.broadcast_to(np.asarray(gamma, dtype=float), n.shape))
    if np.any(gamma < 0) or not np.all(np.isfinite(gamma)):
        raise ValueError("gamma must be finite and >= 0")
    q = np.empty_like(n)
    scratch = np.empty_like(n)
    status = _backend.active().fp_min_power(
        g_off, n, gamma, rho, cap, settings.fixedpoint_tol,
        settings.fixedpoint_max_iter, q, scratch)
    if status == -1:
        raise Infeasible("SINR floors exceed the power cap")
    if status == -2:
        raise Infeasible("fixed point did not converge within budget; "
                         "floors are at the feasibility boundary")
    return PowerAllocation(q=q, meta={"iterations": int(status)})


def max_min_se(profile: InterferenceProfile, rho: float, cap: float = 1.0,
               settings: SolverSettings | None = None) -> TpcResult:
    """Equalize SINRs at the highest level the cap allows.

    Bisects on the common SINR target, testing feasibility with the
    fixed-point kernel, then scales the allocation so the binding UE
    sits exactly at the cap.
    """
    settings = settings or SolverSettings()
    _check_rho_cap(rho, cap)
    g_off, n = _prepare(profile)
    K = n.shape[0]
    kern = _backend.active().fp_min_power
    q = np.empty(K)
    scratch = np.empty(K)
    gamma = np.empty(K)

    def feasible(t: float) -> bool:
        gamma[:] = t
        return kern(g_off, n, gamma, rho, cap, settings.fixedpoint_tol,
                    settings.fixedpoint_max_iter, q, scratch) >= 0

    # the all-cap allocation certifies its own min SINR as feasible,
    # which anchors the bracket above any single allocation's minimum
    full = rho * cap
    sinr_full = full / (full * g_off.sum(axis=1) + n)
    lo = float(sinr_full.min())
    hi = float(rho * cap / n.min())
    best = None
    if feasible(lo):
        best = q.copy()
    else:  # rounding pushed the certified point over the cap
        lo = 0.0
        best = np.zeros(K)
    iters = 0
    while (hi - lo) > settings.bisection_rel_tol * hi \
            and iters < settings.bisection_max_iter:
        mid = 0.5 * (lo + hi)
        if feasible(mid):
            lo = mid
            best = q.copy()
        else:
            hi = mid
        iters += 1

    q_final = best
    qmax = q_final.max()
    if qmax > 0.0:
        scale = cap / qmax
        if scale > 1.0:
            q_final = q_final * scale
        q_final[int(np.argmax(q_final))] = cap  # exact saturation
    sinr, se = sinr_and_se(profile, q_final, rho)
    t_ach = float(sinr.min())
    alloc = PowerAllocation(
        q=q_final,
        meta={"algorithm": "max_min_se", "t": t_ach,
              "bisection_iters": iters})
    return TpcResult(q=alloc, objective=float(se.min()))


def max_min_ee(profile: InterferenceProfile, rho: float, cfg: SystemConfig,
               settings: SolverSettings | None = None) -> TpcResult:
    """Maximize the worst weighted per-UE energy efficiency.

    Two steps: find the smallest cap nu_star that still meets the SE
    floor, then search the cap nu over [nu_star, 1] on a uniform grid
    with local refinement, scoring each candidate by the max-min SE
    solution it induces. Ties go to the smaller nu.
    """
    settings = settings or SolverSettings()
    _check_rho_cap(rho, 1.0)
    if profile.K != cfg.K:
        raise ValueError("profile and config disagree on K")
    g_off, n = _prepare(profile)
    K = n.shape[0]
    weights = cfg.weights()
    bw = cfg.bandwidth_hz
    floor_se = cfg.target_se
    with np.errstate(over="ignore"):
        gamma_floor = float(np.exp2(floor_se)) - 1.0

    if gamma_floor == 0.0:
        nu_star = 0.0
    else:
        kern = _backend.active().fp_min_power
        q = np.empty(K)
        scratch = np.empty(K)
        gamma = np.full(K, gamma_floor)
        status = kern(g_off, n, gamma, rho, 1.0, settings.fixedpoint_tol,
                      settings.fixedpoint_max_iter, q, scratch)
        if status < 0:
            raise InfeasibleTargetSE(
                f"SE floor {floor_se} unreachable even at full power")
        nu_star = float(q.max())

    floor_cut = floor_se * (1.0 - _FLOOR_SLACK_REL) - 1e-12

    def evaluate(nu: float):
        """Score one cap candidate; None when it misses the SE floor."""
        if nu <= 0.0:
            if floor_se > 0.0:
                return None
            zeros = np.zeros(K)
            return 0.0, zeros, zeros
        inner = max_min_se(profile, rho, cap=nu, settings=settings)
        q_nu = inner.q.q
        _, se = sinr_and_se(profile, q_nu, rho)
        if float(se.min()) < floor_cut:
            return None
        score = float(np.min(weights * bw * se)) \
            / (cfg.p_bar_w * nu + cfg.p_u_w)
        return score, q_nu, se

    if nu_star >= 1.0:
        points = np.array([1.0])
        spacing = 0.0
    else:
        points = np.linspace(nu_star, 1.0, settings.nu_grid_points)
        spacing = float(points[1] - points[0])

    best_obj = None
    best_nu = None
    best_q = None
    best_se = None
    for nu in points:
        out = evaluate(float(nu))
        if out is None:
            continue
        score, q_nu, se = out
        if best_obj is None or score > best_obj:
            best_obj, best_nu, best_q, best_se = score, float(nu), q_nu, se
    if best_obj is None:
        raise InfeasibleTargetSE(
            f"no cap in [{nu_star}, 1] meets the SE floor {floor_se}")

    for _ in range(settings.nu_refine_rounds):
        if spacing <= 0.0:
            break
        w_lo = max(nu_star, best_nu - spacing)
        w_hi = min(1.0, best_nu + spacing)
        pts = np.linspace(w_lo, w_hi, 7)
        spacing = float(w_hi - w_lo) / 6.0
        for nu in pts:
            nu = float(nu)
            out = evaluate(nu)
            if out is None:
                continue
            score, q_nu, se = out
            if score > best_obj or (score == best_obj and nu < best_nu):
                best_obj, best_nu, best_q, best_se = score, nu, q_nu, se

    power_w = cfg.p_bar_w * best_q + cfg.p_u_w
    actual = float(np.min(weights * bw * best_se / power_w))
    alloc = PowerAllocation(
        q=best_q,
        meta={"algorithm": "max_min_ee", "nu_star": nu_star,
              "nu_opt": best_nu, "search_objective": best_obj})
    return TpcResult(q=alloc, objective=actual, nu_opt=best_nu,
                     nu_star=nu_star)


def _check_rho_cap(rho: float, cap: float) -> None:
    if rho <= 0 or not np.isfinite(rho):
        raise ValueError("rho must be positive and finite")
    if not 0.0 < cap <= 1.0:
        raise ValueError("cap must be in (0, 1]")
