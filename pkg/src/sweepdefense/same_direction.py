"""Baselines where every defender sweeps the same way around.

Without a partner closing in from the other side, each defender must also
cover the stretch its neighbour vacates, so the circular variant pays a
flat speed surcharge of VT and the spiral variant guards an extra sector
beta0 that shrinks as the region grows.

The critical speeds below are printed formulas (circular) or a root of
the published balance (spiral). The expansion schedules have no published
recursion; they are derived here by carrying the pincer advance
kinematics over to the same-direction sweep times, vanish their budget at
the matching critical speeds, and are labeled "derived baseline" wherever
the CLI serializes them. Their summaries come from direct summation only;
no closed forms are claimed.
"""

import math
from dataclasses import dataclass
from typing import List, Tuple

from .circular_pincer import critical_speed as _circular_pincer_speed
from .errors import (
    InvalidParam,
    MaxIterations,
    NoBracket,
    NoExpansion,
    RootNotFound,
    SubcriticalSpeed,
)
from .rootfind import RootProblem, solve
from .scenario import ExpansionStep, ProtocolKind, ProtocolSummary, ScenarioParams
from .spiral_pincer import critical_speed as _spiral_pincer_speed

_TWO_PI = 2.0 * math.pi

_ITERATION_CAP = 10_000_000

# Fixed bisection depth for the spiral same-direction asymptote; enough to
# reach a few ulps on any double bracket.
_BISECT_STEPS = 200


@dataclass(frozen=True)
class SameDirectionGeometry:
    """Guard angle and the two same-direction critical speeds."""

    beta0: float         # extra sector guarded at the initial radius, radians
    Vc_circ_same: float  # circular same-direction critical speed
    Vc_spiral_same: float


def circular_same_critical_speed(params: ScenarioParams) -> float:
    """Circular same-direction critical speed: the pincer speed plus VT."""
    return _circular_pincer_speed(params) + params.VT


def guard_angle(params: ScenarioParams, Vs: float, R: float) -> float:
    """Extra angular sector a same-direction spiral defender must cover
    when the protected radius is R."""
    return math.asin(2.0 * params.r * Vs / ((Vs + params.VT) * (R + 2.0 * params.r)))


def _spiral_same_lam(params: ScenarioParams, Vs: float, R: float) -> float:
    span = _TWO_PI / params.n + guard_angle(params, Vs, R)
    return math.exp(-span * params.VT / math.sqrt(Vs * Vs - params.VT * params.VT))


def spiral_same_critical_speed(params: ScenarioParams) -> float:
    """Spiral same-direction critical speed, by safeguarded root search.

    The balance adds the guard angle to the sweep span; it is negative at
    the pincer root, so the pincer root brackets from below and doubling
    finds an upper end where the sensor wins.
    """

    def balance(Vs: float) -> float:
        lam = _spiral_same_lam(params, Vs, params.R0)
        return 2.0 * params.r * Vs / (Vs + params.VT) - (params.R0 + params.r) * (
            1.0 - lam
        )

    lo = _spiral_pincer_speed(params)
    hi = 2.0 * lo
    for _ in range(60):
        if balance(hi) > 0.0:
            break
        hi *= 2.0
    else:
        raise RootNotFound("no upper bracket for the same-direction spiral speed")
    problem = RootProblem(
        objective=balance,
        bracket_lo=lo,
        bracket_hi=hi,
        # start essentially at the pincer root, nudged inside the bracket
        guess=lo * (1.0 + 1e-6),
        tol_f=1e-10 * params.r,
    )
    try:
        return solve(problem)
    except (NoBracket, MaxIterations) as exc:
        raise RootNotFound(f"same-direction spiral speed search failed: {exc}") from exc


def geometry(params: ScenarioParams) -> SameDirectionGeometry:
    """Both same-direction critical speeds plus the guard angle at R0,
    evaluated at the spiral root."""
    Vc_spiral = spiral_same_critical_speed(params)
    return SameDirectionGeometry(
        beta0=guard_angle(params, Vc_spiral, params.R0),
        Vc_circ_same=circular_same_critical_speed(params),
        Vc_spiral_same=Vc_spiral,
    )


def _spiral_same_asymptote(params: ScenarioParams, Vs: float) -> float:
    """Radius where the same-direction spiral budget runs out.

    The budget 2r - (R+r)*(1-lam(R)) falls with R; bisect between R0 and
    the (larger) pincer asymptote, where it is already negative.
    """

    def budget(R: float) -> float:
        return 2.0 * params.r - (R + params.r) * (1.0 - _spiral_same_lam(params, Vs, R))

    lam_pincer = math.exp(
        -_TWO_PI * params.VT / (params.n * math.sqrt(Vs * Vs - params.VT * params.VT))
    )
    lo, hi = params.R0, 2.0 * params.r / (1.0 - lam_pincer) - params.r
    for _ in range(_BISECT_STEPS):
        mid = 0.5 * (lo + hi)
        if budget(mid) > 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _circular_same_step(params: ScenarioParams, Vs: float, R: float):
    T = (_TWO_PI * R / params.n + params.r) / Vs
    delta = params.r - params.VT * T
    return T, delta, None


def _spiral_same_step(params: ScenarioParams, Vs: float, R: float):
    lam = _spiral_same_lam(params, Vs, R)
    T = (R + params.r) * (1.0 - lam) / params.VT
    delta = 2.0 * params.r - params.VT * T
    return T, delta, R + params.r


def expansion_schedule_same(
    params: ScenarioParams, Vs: float, kind: ProtocolKind
) -> Tuple[List[ExpansionStep], ProtocolSummary]:
    """Derived same-direction expansion: per-sweep steps plus a summary.

    Everything is produced by direct iteration and summation; the guard
    angle of the spiral variant is re-evaluated at every sweep-start
    radius, so its contraction factor changes from step to step.
    """
    if kind is ProtocolKind.CIRCULAR_SAME_DIRECTION:
        Vc = circular_same_critical_speed(params)
        if Vs < Vc:
            raise SubcriticalSpeed(
                f"Vs={Vs} is below the circular same-direction critical speed {Vc}"
            )
        if Vs == Vc:
            raise NoExpansion("at the critical speed the region never grows")
        R_asym = params.n * params.r * (Vs - params.VT) / (_TWO_PI * params.VT)
        step = _circular_same_step
    elif kind is ProtocolKind.SPIRAL_SAME_DIRECTION:
        Vc = spiral_same_critical_speed(params)
        if Vs < Vc:
            raise SubcriticalSpeed(
                f"Vs={Vs} is below the spiral same-direction critical speed {Vc}"
            )
        R_asym = _spiral_same_asymptote(params, Vs)
        step = _spiral_same_step
    else:
        raise InvalidParam(
            "kind", f"expected a same-direction protocol kind, got {kind}"
        )
    R_target = R_asym - params.eps
    if R_target <= params.R0:
        raise NoExpansion(
            f"eps={params.eps} leaves no expansion target above R0={params.R0}"
        )

    steps: List[ExpansionStep] = []
    R = params.R0
    while True:
        T, delta, Rtilde = step(params, Vs, R)
        delta_eff = delta * Vs / (Vs + params.VT)
        steps.append(
            ExpansionStep(
                index=len(steps),
                R_i=R,
                Rtilde_i=Rtilde,
                delta_i=delta,
                delta_eff_i=delta_eff,
                T_sweep_i=T,
                T_out_i=delta_eff / Vs,
            )
        )
        R += delta_eff
        if R >= R_target:
            break
        if len(steps) >= _ITERATION_CAP:
            raise MaxIterations(f"schedule exceeded {_ITERATION_CAP} sweeps")

    R_last = steps[-1].R_i
    T_out_last = (R_target - R_last) / Vs
    T_sweep_total = sum(s.T_sweep_i for s in steps)
    T_out_total = sum(s.T_out_i for s in steps[:-1]) + T_out_last
    summary = ProtocolSummary(
        N_n=len(steps),
        R_last=R_last,
        R_max=R_target,
        R_asym=R_asym,
        T_out_total=T_out_total,
        T_sweep_total=T_sweep_total,
        T_total=T_sweep_total + T_out_total,
        T_out_last=T_out_last,
    )
    return steps, summary
