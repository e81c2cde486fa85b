"""Time-stepped check of the protocols against a worst-case wavefront.

The threat is not simulated as individual invaders: since they are
assumed smart and bounded only by speed, the worst case is the whole
unswept frontier creeping inward at VT. The state is one radius per
angular bin. Each tick the frontier decays; each defender then clears the
bins its sensor line crossed, recording the clearance margin (frontier
minus sensor inner tip) and raising a breach when the frontier has
already slipped below the sensor.

Two drive modes share the engine. Defense runs re-anchor the sensors at
R0 every cycle and probe whether the protocol can hold the initial
radius; the clearance margin localizes the critical speed. Expansion runs
play the analytic per-sweep schedule open loop and let the wavefront
verify it: sweep-end radii must land where the schedule says.

The first sweep is a warm-up artifact of starting the frontier exactly at
R0 with the sensors still on their marks, so its margins and breaches are
excluded from reporting; steady state begins with the second sweep.
"""

import math
from dataclasses import dataclass, replace
from enum import Enum
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np

from . import circular_pincer, same_direction, spiral_pincer
from .errors import ConfigError, NoExpansion, SpeedTooLow
from .scenario import ProtocolKind, ScenarioParams, validate

_TWO_PI = 2.0 * math.pi

_PINCER_KINDS = (ProtocolKind.CIRCULAR_PINCER, ProtocolKind.SPIRAL_PINCER)
_SPIRAL_KINDS = (ProtocolKind.SPIRAL_PINCER, ProtocolKind.SPIRAL_SAME_DIRECTION)


class BreachKind(Enum):
    UNDER_SENSOR = "UnderSensor"
    CENTER_REACHED = "CenterReached"


@dataclass(frozen=True)
class BreachEvent:
    t: float             # simulation time of the event
    bin: int             # angular bin index
    rho_at_pass: float   # frontier radius when the sensor passed (0 for center hits)
    sensor_inner: float  # sensor inner-tip radius at that moment
    kind: BreachKind


@dataclass(frozen=True)
class DefenderPose:
    id: int
    angle: float     # polar angle of the sensor line, radians
    r_inner: float   # sensor span is [r_inner, r_outer], r_outer - r_inner = 2r
    r_outer: float
    direction: int   # +1 counter-clockwise, -1 clockwise


@dataclass
class WavefrontState:
    bins: int
    rho: np.ndarray  # per-bin frontier radius
    t: float
    breaches: List[BreachEvent]


@dataclass(frozen=True)
class SweepRecord:
    index: int
    t: float         # time at sweep end
    rho_min: float   # frontier extremes over bins at sweep end
    rho_max: float
    margin: float    # smallest clearance margin seen during the sweep


@dataclass(frozen=True)
class SimConfig:
    bins: int = 3600
    dt: Optional[float] = None          # auto: stability-limited when None
    mode: str = "auto"                  # auto | defense | expansion
    cycles: int = 3                     # defense cycles to run
    max_sweeps: Optional[int] = None    # truncate expansion schedules
    breach_tol: Optional[float] = None  # default: the grid tolerance
    capture_profiles: bool = False      # keep a frontier copy per sweep end


@dataclass(frozen=True)
class SimReport:
    kind: ProtocolKind
    mode: str
    bins: int
    dt: float
    grid_tolerance: float
    t_final: float
    sweeps: List[SweepRecord]
    min_margin: float          # over all clearing events after the warm-up sweep
    breaches: List[BreachEvent]
    profiles: Optional[List[np.ndarray]] = None


@dataclass(frozen=True)
class _SweepPhase:
    index: int
    duration: float
    span: float      # angular sector each defender covers this sweep
    anchor: float    # protected radius at sweep start (sensor inner tip)
    max_rate: float  # peak angular speed, for the dt stability limit
    progress: Callable[[float], float]  # angular progress s(t), s(0) = 0
    inner: Callable[[float], float]     # sensor inner radius at phase time t
    starts: np.ndarray
    dirs: np.ndarray
    poses: List[DefenderPose]


@dataclass(frozen=True)
class _AdvancePhase:
    duration: float


def _critical_speed(params: ScenarioParams, kind: ProtocolKind) -> float:
    if kind is ProtocolKind.CIRCULAR_PINCER:
        return circular_pincer.critical_speed(params)
    if kind is ProtocolKind.SPIRAL_PINCER:
        return spiral_pincer.critical_speed(params)
    if kind is ProtocolKind.CIRCULAR_SAME_DIRECTION:
        return same_direction.circular_same_critical_speed(params)
    return same_direction.spiral_same_critical_speed(params)


def _span_at(params: ScenarioParams, Vs: float, kind: ProtocolKind, R: float) -> float:
    base = _TWO_PI / params.n
    if kind is ProtocolKind.CIRCULAR_SAME_DIRECTION:
        return base + params.r / R
    if kind is ProtocolKind.SPIRAL_SAME_DIRECTION:
        return base + same_direction.guard_angle(params, Vs, R)
    return base


def _sweep_poses(
    params: ScenarioParams, kind: ProtocolKind, index: int, anchor: float, span: float
) -> Tuple[np.ndarray, np.ndarray, List[DefenderPose]]:
    n = params.n
    starts = np.empty(n)
    dirs = np.empty(n, dtype=np.int64)
    if kind in _PINCER_KINDS:
        outbound = index % 2 == 0  # even sweeps move apart from the pair axis
        for p in range(n // 2):
            axis = _TWO_PI * (2 * p) / n
            if outbound:
                starts[2 * p], dirs[2 * p] = axis, 1
                starts[2 * p + 1], dirs[2 * p + 1] = axis, -1
            else:
                starts[2 * p], dirs[2 * p] = axis + span, -1
                starts[2 * p + 1], dirs[2 * p + 1] = axis - span, 1
    else:
        # same direction: everyone advances one sector per sweep, the span
        # overlapping into the stretch the neighbour ahead has vacated
        for d in range(n):
            starts[d] = _TWO_PI * d / n + index * (_TWO_PI / n)
            dirs[d] = 1
    poses = [
        DefenderPose(
            id=d,
            angle=starts[d] % _TWO_PI,
            r_inner=anchor,
            r_outer=anchor + 2.0 * params.r,
            direction=int(dirs[d]),
        )
        for d in range(n)
    ]
    return starts, dirs, poses


def _make_sweep(
    params: ScenarioParams,
    Vs: float,
    kind: ProtocolKind,
    index: int,
    anchor: float,
    duration: float,
    span: float,
) -> _SweepPhase:
    VT = params.VT
    if kind in _SPIRAL_KINDS:
        lateral = math.sqrt(Vs * Vs - VT * VT)
        Rt0 = anchor + params.r

        def progress(t: float) -> float:
            return (lateral / VT) * math.log(Rt0 / (Rt0 - VT * t))

        def inner(t: float) -> float:
            return anchor - VT * t

        max_rate = lateral / (Rt0 - VT * duration)
    else:
        omega = Vs / anchor

        def progress(t: float) -> float:
            return omega * t

        def inner(t: float) -> float:
            return anchor

        max_rate = omega
    starts, dirs, poses = _sweep_poses(params, kind, index, anchor, span)
    return _SweepPhase(
        index=index,
        duration=duration,
        span=span,
        anchor=anchor,
        max_rate=max_rate,
        progress=progress,
        inner=inner,
        starts=starts,
        dirs=dirs,
        poses=poses,
    )


def _defense_plan(params: ScenarioParams, Vs: float, kind: ProtocolKind, cycles: int):
    """Hold-the-line phases: every cycle sweeps anchored at R0.

    Circular sensors stay put between sweeps. Spiral sensors end each
    sweep a full sensor length below the frontier and climb back during a
    gap-closing advance of 2r/(Vs+VT) before re-anchoring.
    """
    span = _span_at(params, Vs, kind, params.R0)
    if kind in _SPIRAL_KINDS:
        lateral = math.sqrt(Vs * Vs - params.VT * params.VT)
        lam = math.exp(-span * params.VT / lateral)
        duration = (params.R0 + params.r) * (1.0 - lam) / params.VT
        advance = 2.0 * params.r / (Vs + params.VT)
    else:
        duration = span * params.R0 / Vs
        advance = 0.0
    phases: List = []
    for c in range(cycles):
        phases.append(_make_sweep(params, Vs, kind, c, params.R0, duration, span))
        if advance > 0.0:
            phases.append(_AdvancePhase(advance))
    return phases, params.R0 + 2.0 * params.r


def _expansion_plan(
    params: ScenarioParams, Vs: float, kind: ProtocolKind, max_sweeps: Optional[int]
):
    """Open-loop phases from the analytic schedule.

    Sweep i is anchored at the schedule's R_i. Spiral sensor poses jump
    outward between an advance and the next sweep: the schedule counts
    only the effective outward time delta_eff/Vs, re-anchoring the sensor
    on the frontier where the next sweep's bookkeeping starts.
    """
    if kind is ProtocolKind.CIRCULAR_PINCER:
        steps = circular_pincer.expansion_schedule(params, Vs)
        summary = circular_pincer.totals(params, Vs)
    elif kind is ProtocolKind.SPIRAL_PINCER:
        steps = spiral_pincer.expansion_schedule(params, Vs)
        summary = spiral_pincer.totals(params, Vs)
    else:
        steps, summary = same_direction.expansion_schedule_same(params, Vs, kind)
    truncated = max_sweeps is not None and max_sweeps < len(steps)
    if truncated:
        steps = steps[:max_sweeps]
    phases: List = []
    for s in steps:
        span = _span_at(params, Vs, kind, s.R_i)
        phases.append(
            _make_sweep(params, Vs, kind, s.index, s.R_i, s.T_sweep_i, span)
        )
        last = s.index == steps[-1].index
        if last and not truncated:
            phases.append(_AdvancePhase(summary.T_out_last))
        else:
            phases.append(_AdvancePhase(s.T_out_i))
    return phases, summary.R_asym


def _resolve_mode(params: ScenarioParams, Vs: float, kind: ProtocolKind, mode: str):
    if mode == "defense":
        return "defense"
    if mode == "expansion":
        return "expansion"
    if Vs <= _critical_speed(params, kind):
        return "defense"
    return "expansion"


def _check_config(grid: SimConfig) -> None:
    if grid.bins < 360:
        raise ConfigError(f"bins={grid.bins}: need at least 360 angular bins")
    if grid.mode not in ("auto", "defense", "expansion"):
        raise ConfigError(f"mode={grid.mode!r}: expected auto, defense or expansion")
    if grid.cycles < 1:
        raise ConfigError(f"cycles={grid.cycles}: need at least one defense cycle")
    if grid.max_sweeps is not None and grid.max_sweeps < 1:
        raise ConfigError(f"max_sweeps={grid.max_sweeps}: must be positive")
    if grid.dt is not None and grid.dt <= 0.0:
        raise ConfigError(f"dt={grid.dt}: must be positive")
    if grid.breach_tol is not None and grid.breach_tol < 0.0:
        raise ConfigError(f"breach_tol={grid.breach_tol}: must be nonnegative")


def run(
    params: ScenarioParams,
    Vs: float,
    kind: ProtocolKind,
    grid: SimConfig = SimConfig(),
) -> SimReport:
    """Simulate one protocol run and report margins, radii and breaches.

    Mode "auto" picks defense when Vs is at or below the protocol's
    critical speed (or when eps leaves no room to expand) and expansion
    otherwise.
    """
    params = validate(params)
    if Vs <= params.VT:
        raise SpeedTooLow(f"Vs={Vs} must exceed the threat speed VT={params.VT}")
    _check_config(grid)

    mode = _resolve_mode(params, Vs, kind, grid.mode)
    if mode == "expansion":
        try:
            phases, R_ref = _expansion_plan(params, Vs, kind, grid.max_sweeps)
        except NoExpansion:
            if grid.mode == "expansion":
                raise
            mode = "defense"
    if mode == "defense":
        phases, R_ref = _defense_plan(params, Vs, kind, grid.cycles)

    M = grid.bins
    binwidth = _TWO_PI / M
    max_rate = max(p.max_rate for p in phases if isinstance(p, _SweepPhase))
    if grid.dt is None:
        dt = min(0.5 * binwidth / max_rate, params.r / (50.0 * Vs))
    else:
        dt = grid.dt
        if dt * max_rate >= binwidth:
            raise ConfigError(
                f"dt={dt}: a defender can cross a whole bin per tick "
                f"(max rate {max_rate:.6g}, bin width {binwidth:.6g})"
            )
    grid_tolerance = R_ref * binwidth + params.VT * dt
    breach_tol = grid_tolerance if grid.breach_tol is None else grid.breach_tol

    centers = (np.arange(M) + 0.5) * binwidth
    state = WavefrontState(bins=M, rho=np.full(M, params.R0), t=0.0, breaches=[])
    center_hit = np.zeros(M, dtype=bool)
    two_r = 2.0 * params.r
    VT = params.VT

    sweeps: List[SweepRecord] = []
    profiles: Optional[List[np.ndarray]] = [] if grid.capture_profiles else None
    min_margin = math.inf

    def decay(h: float) -> None:
        state.rho -= VT * h
        hit = (state.rho <= 0.0) & ~center_hit
        if hit.any():
            for j in np.flatnonzero(hit):
                state.breaches.append(
                    BreachEvent(
                        t=state.t,
                        bin=int(j),
                        rho_at_pass=0.0,
                        sensor_inner=0.0,
                        kind=BreachKind.CENTER_REACHED,
                    )
                )
            center_hit[hit] = True
        np.maximum(state.rho, 0.0, out=state.rho)

    for phase in phases:
        if isinstance(phase, _AdvancePhase):
            # no detection while moving outward; one exact decay step
            state.t += phase.duration
            decay(phase.duration)
            continue

        # distance-from-start of every bin center, per defender, so each
        # tick's cleared set is one sorted-range lookup
        dist = ((centers[None, :] - phase.starts[:, None]) * phase.dirs[:, None]) % _TWO_PI
        order = np.argsort(dist, axis=1, kind="stable")
        sorted_dist = np.take_along_axis(dist, order, axis=1)

        counted = phase.index >= 1  # warm-up sweep excluded from reporting
        sweep_margin = math.inf
        n_full = int(phase.duration / dt)
        remainder = phase.duration - n_full * dt
        ticks = [dt] * n_full + ([remainder] if remainder > 1e-12 * dt else [])
        t_local = 0.0
        s_prev = 0.0
        for k, h in enumerate(ticks):
            t_local = phase.duration if k == len(ticks) - 1 else t_local + h
            state.t += h
            decay(h)
            s_now = phase.span if k == len(ticks) - 1 else phase.progress(t_local)
            r_inner = phase.inner(t_local)
            r_outer = r_inner + two_r
            for d in range(params.n):
                i0 = np.searchsorted(sorted_dist[d], s_prev, side="right")
                i1 = np.searchsorted(sorted_dist[d], s_now, side="right")
                if i1 == i0:
                    continue
                idx = order[d, i0:i1]
                margins = state.rho[idx] - r_inner
                low = float(margins.min())
                if low < sweep_margin:
                    sweep_margin = low
                if counted:
                    bad = margins < -breach_tol
                    if bad.any():
                        for j, m in zip(idx[bad], margins[bad]):
                            state.breaches.append(
                                BreachEvent(
                                    t=state.t,
                                    bin=int(j),
                                    rho_at_pass=float(state.rho[j]),
                                    sensor_inner=r_inner,
                                    kind=BreachKind.UNDER_SENSOR,
                                )
                            )
                state.rho[idx] = np.maximum(state.rho[idx], r_outer)
            s_prev = s_now

        if counted and sweep_margin < min_margin:
            min_margin = sweep_margin
        sweeps.append(
            SweepRecord(
                index=phase.index,
                t=state.t,
                rho_min=float(state.rho.min()),
                rho_max=float(state.rho.max()),
                margin=sweep_margin,
            )
        )
        if profiles is not None:
            profiles.append(state.rho.copy())

    return SimReport(
        kind=kind,
        mode=mode,
        bins=M,
        dt=dt,
        grid_tolerance=grid_tolerance,
        t_final=state.t,
        sweeps=sweeps,
        min_margin=min_margin,
        breaches=state.breaches,
        profiles=profiles,
    )


def initial_poses(
    params: ScenarioParams, Vs: float, kind: ProtocolKind
) -> List[DefenderPose]:
    """Defender poses at the start of the first sweep (anchor R0)."""
    params = validate(params)
    if Vs <= params.VT:
        raise SpeedTooLow(f"Vs={Vs} must exceed the threat speed VT={params.VT}")
    span = _span_at(params, Vs, kind, params.R0)
    _, _, poses = _sweep_poses(params, kind, 0, params.R0, span)
    return poses


def margin_curve(
    params: ScenarioParams,
    kind: ProtocolKind,
    speeds: Sequence[float],
    grid: SimConfig = SimConfig(),
) -> List[Tuple[float, float]]:
    """Defense-mode minimum clearance margin at each speed.

    The margin rises with speed and crosses zero at the protocol's
    critical speed, so the curve localizes criticality empirically.
    """
    speeds = list(speeds)
    if any(b <= a for a, b in zip(speeds, speeds[1:])):
        raise ConfigError("speeds must be strictly ascending")
    if speeds and speeds[0] <= params.VT:
        raise ConfigError(f"speeds must exceed the threat speed VT={params.VT}")
    defense = replace(grid, mode="defense")
    return [(Vs, run(params, Vs, kind, defense).min_margin) for Vs in speeds]
