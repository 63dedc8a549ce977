"""C4-smooth, kinematically limited joint trajectories through via points.

Each joint's move between two via points uses a trapezoidal-like velocity
profile with three phases: lift-off, cruise, and set-down.  The ramps are
shaped by the degree-9 smoothstep, whose first four derivatives vanish at
both ends, so velocity is C4-continuous everywhere, including across
segment blends.  Per segment the joints are synchronized to a common
duration, consecutive segments may overlap by a configurable fraction of
the adjoining ramps, and a final uniform time dilation restores the
velocity/acceleration limits wherever superposition exceeded them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np
from scipy.optimize import minimize_scalar

from .errors import InvalidParameter, OutOfRange
from .fileio import write_csv

# Peak slope of the degree-9 smoothstep (attained mid-ramp); the realized
# peak acceleration of a ramp is PEAK_SLOPE * v_peak / t_ramp.
PEAK_SLOPE = 315.0 / 128.0

# Kinematic limits used throughout the demos: v = 0.01*pi m/s and
# a = dec = 0.125*pi m/s^2.
DEFAULT_V_MAX = 0.01 * math.pi
DEFAULT_A_MAX = 0.125 * math.pi


def smoothstep(tau):
    """Degree-9 smoothstep on [0, 1], clamped outside."""
    tau = np.clip(tau, 0.0, 1.0)
    return tau**5 * (126.0 + tau * (-420.0 + tau * (540.0 + tau * (-315.0 + tau * 70.0))))


def smoothstep_slope(tau):
    """First derivative of the smoothstep; equals 630 * tau^4 * (1 - tau)^4."""
    tau = np.clip(tau, 0.0, 1.0)
    return 630.0 * tau**4 * (1.0 - tau)**4


def smoothstep_integral(tau):
    """Running integral of the smoothstep from 0; equals 1/2 at tau = 1."""
    tau = np.clip(tau, 0.0, 1.0)
    return tau**6 * (21.0 + tau * (-60.0 + tau * (67.5 + tau * (-35.0 + tau * 7.0))))


@dataclass(frozen=True)
class KinematicLimits:
    """Velocity, lift-off acceleration, and set-down deceleration bounds."""

    v_max: float = DEFAULT_V_MAX
    a_max: float = DEFAULT_A_MAX
    dec_max: float = DEFAULT_A_MAX

    def __post_init__(self):
        for label, value in (("v_max", self.v_max), ("a_max", self.a_max),
                             ("dec_max", self.dec_max)):
            if not (math.isfinite(value) and value > 0.0):
                raise InvalidParameter(f"{label} must be positive and finite, got {value}")


DEFAULT_LIMITS = KinematicLimits()


@dataclass(frozen=True)
class TrajectoryState:
    """One joint's move within one segment.

    delta_rho is the signed distance to cover, v the peak velocity of the
    profile, a and dec the acceleration/deceleration bounds it was planned
    under, t_lo/t_cr/t_sd the phase durations, and t_enb the absolute time
    at which the segment is enabled (set during blending).
    """

    delta_rho: float
    v: float
    a: float
    dec: float
    t_lo: float
    t_cr: float
    t_sd: float
    t_enb: float | None = None

    @property
    def duration(self) -> float:
        return self.t_lo + self.t_cr + self.t_sd


def plan_segment(delta: float, limits: KinematicLimits = DEFAULT_LIMITS) -> TrajectoryState:
    """Plan one joint's profile for a signed distance.

    The ramp durations satisfy PEAK_SLOPE * v / t_ramp <= bound; when the
    distance is too short for a full trapezoid the cruise phase drops out
    and the peak velocity is reduced (triangular fallback).  Because the
    smoothstep integrates to 1/2 over a ramp, the distance closes as
    |delta| = v * (t_lo / 2 + t_cr + t_sd / 2).
    """
    if not math.isfinite(delta):
        raise InvalidParameter(f"segment distance must be finite, got {delta}")
    dist = abs(delta)
    if dist == 0.0:
        return TrajectoryState(delta, 0.0, limits.a_max, limits.dec_max, 0.0, 0.0, 0.0)
    t_lo_full = PEAK_SLOPE * limits.v_max / limits.a_max
    t_sd_full = PEAK_SLOPE * limits.v_max / limits.dec_max
    ramp_dist = 0.5 * limits.v_max * (t_lo_full + t_sd_full)
    if dist >= ramp_dist:
        v_peak = limits.v_max
        t_lo, t_sd = t_lo_full, t_sd_full
        t_cr = dist / v_peak - 0.5 * (t_lo + t_sd)
    else:
        v_peak = math.sqrt(2.0 * dist * limits.a_max * limits.dec_max
                           / (PEAK_SLOPE * (limits.a_max + limits.dec_max)))
        t_lo = PEAK_SLOPE * v_peak / limits.a_max
        t_sd = PEAK_SLOPE * v_peak / limits.dec_max
        t_cr = 0.0
    return TrajectoryState(delta, v_peak, limits.a_max, limits.dec_max, t_lo, t_cr, t_sd)


def synchronize(per_joint_states: list[TrajectoryState]) -> list[TrajectoryState]:
    """Stretch the joints of one segment to a common duration.

    Each profile is uniformly time-dilated to the slowest joint's duration,
    scaling its peak velocity down by the same factor, which preserves the
    distance closure and never increases peak velocity or acceleration.
    Zero-distance joints idle through the common duration.
    """
    if not per_joint_states:
        raise InvalidParameter("need at least one joint state")
    common = max(state.duration for state in per_joint_states)
    out = []
    for state in per_joint_states:
        if state.duration == 0.0:
            out.append(replace(state, t_cr=common))
        elif state.duration == common:
            out.append(state)
        else:
            factor = common / state.duration
            out.append(replace(state, v=state.v / factor, t_lo=state.t_lo * factor,
                               t_cr=state.t_cr * factor, t_sd=state.t_sd * factor))
    return out


@dataclass(frozen=True, eq=False)
class PlannedTrajectory:
    """Blended multi-segment trajectory for all joints of one design.

    states is the m x n grid of per-segment, per-joint profiles; all joints
    of a segment share its enable time.  dilation records the uniform time
    stretch applied after blending to restore the kinematic limits (1.0
    when superposition never exceeded them).
    """

    start: np.ndarray
    states: tuple[tuple[TrajectoryState, ...], ...]
    enable_times: np.ndarray
    segment_durations: np.ndarray
    horizon: float
    overlap_fraction: float
    dilation: float = 1.0

    @property
    def n(self) -> int:
        return self.start.size

    @property
    def segment_count(self) -> int:
        return len(self.states)

    def goal(self) -> np.ndarray:
        deltas = np.array([[s.delta_rho for s in seg] for seg in self.states])
        return self.start + deltas.sum(axis=0)


def _profile_eval(state: TrajectoryState, local: np.ndarray):
    """Position/velocity/acceleration contribution of one profile at local times."""
    pos = np.zeros_like(local)
    vel = np.zeros_like(local)
    acc = np.zeros_like(local)
    if state.v == 0.0:
        return pos, vel, acc
    t_lo, t_cr, t_sd = state.t_lo, state.t_cr, state.t_sd
    v = state.v
    duration = state.duration
    done = local >= duration
    pos[done] = abs(state.delta_rho)
    lift = (local > 0.0) & (local < t_lo)
    if lift.any():
        tau = local[lift] / t_lo
        pos[lift] = v * t_lo * smoothstep_integral(tau)
        vel[lift] = v * smoothstep(tau)
        acc[lift] = v / t_lo * smoothstep_slope(tau)
    cruise = (local >= t_lo) & (local < t_lo + t_cr)
    if cruise.any():
        pos[cruise] = v * (0.5 * t_lo + local[cruise] - t_lo)
        vel[cruise] = v
    setdown = (local >= t_lo + t_cr) & ~done
    if setdown.any():
        tau = (local[setdown] - t_lo - t_cr) / t_sd
        pos[setdown] = v * (0.5 * t_lo + t_cr) + v * t_sd * (tau - smoothstep_integral(tau))
        vel[setdown] = v * (1.0 - smoothstep(tau))
        acc[setdown] = -v / t_sd * smoothstep_slope(tau)
    if state.delta_rho < 0.0:
        return -pos, -vel, -acc
    return pos, vel, acc


def evaluate(traj: PlannedTrajectory, t):
    """Positions, velocities and accelerations at time(s) t in [0, horizon].

    Closed-form piecewise-polynomial evaluation; accepts a scalar or an
    array of query times and raises OutOfRange outside the horizon.
    """
    times = np.atleast_1d(np.asarray(t, dtype=float))
    scalar = np.ndim(t) == 0
    if times.size and (times.min() < -1e-9 or times.max() > traj.horizon + 1e-9):
        raise OutOfRange(f"query time outside [0, {traj.horizon}]")
    times = np.clip(times, 0.0, traj.horizon)
    pos = np.tile(traj.start, (times.size, 1))
    vel = np.zeros((times.size, traj.n))
    acc = np.zeros((times.size, traj.n))
    for enable, joint_states in zip(traj.enable_times, traj.states):
        local = times - enable
        for i, state in enumerate(joint_states):
            p, v, a = _profile_eval(state, local)
            pos[:, i] += p
            vel[:, i] += v
            acc[:, i] += a
    if scalar:
        return pos[0], vel[0], acc[0]
    return pos, vel, acc


def peak_abs(traj: PlannedTrajectory, channel: str = "velocity", weights=None) -> float:
    """Maximum absolute velocity or acceleration anywhere on the horizon.

    With a weight matrix the per-joint vector is projected through it
    first, which bounds retargeted streams instead of the planned joints.
    Dense-grid scan followed by a bounded local refinement, so the result
    is the continuous peak, not a sampled underestimate.
    """
    index = {"velocity": 1, "acceleration": 2}[channel]
    if traj.horizon == 0.0:
        return 0.0
    step = min(1e-4, traj.horizon / 1000.0)
    grid = np.arange(0.0, traj.horizon + step, step)
    grid[-1] = traj.horizon
    values = evaluate(traj, grid)[index]
    if weights is not None:
        values = values @ np.asarray(weights, dtype=float).T
    best = 0.0
    for column in range(values.shape[1]):
        signal = np.abs(values[:, column])
        k = int(np.argmax(signal))
        lo = grid[max(k - 1, 0)]
        hi = grid[min(k + 1, grid.size - 1)]
        peak = float(signal[k])

        def magnitude(t, column=column):
            vector = evaluate(traj, float(t))[index]
            if weights is not None:
                return -abs(float(np.asarray(weights)[column] @ vector))
            return -abs(float(vector[column]))

        if hi > lo:
            result = minimize_scalar(magnitude, bounds=(lo, hi), method="bounded",
                                     options={"xatol": 1e-12})
            peak = max(peak, -float(result.fun))
        best = max(best, peak)
    return best


def _dilate(traj: PlannedTrajectory, factor: float) -> PlannedTrajectory:
    states = tuple(
        tuple(replace(s, v=s.v / factor, t_lo=s.t_lo * factor, t_cr=s.t_cr * factor,
                      t_sd=s.t_sd * factor, t_enb=s.t_enb * factor)
              for s in joint_states)
        for joint_states in traj.states)
    return replace(traj, states=states,
                   enable_times=traj.enable_times * factor,
                   segment_durations=traj.segment_durations * factor,
                   horizon=traj.horizon * factor,
                   dilation=traj.dilation * factor)


def blend(segments: list[list[TrajectoryState]], start,
          overlap_fraction: float = 0.5,
          limits: KinematicLimits | None = None) -> PlannedTrajectory:
    """Blend synchronized segments into one trajectory per joint.

    Consecutive segments overlap by overlap_fraction of the smaller of the
    adjoining set-down and lift-off ramps (minimized over joints, so all
    joints share each enable time); joint positions superpose the segment
    profiles.  If the superposed velocity or acceleration exceeds the
    limits anywhere, every duration is uniformly dilated by the smallest
    factor restoring feasibility.  With no limits given, the bounds are
    inferred from the planned segment states.
    """
    if not 0.0 <= overlap_fraction <= 1.0:
        raise InvalidParameter(f"overlap_fraction must lie in [0, 1], got {overlap_fraction}")
    if not segments:
        raise InvalidParameter("need at least one segment")
    n = len(segments[0])
    if any(len(joint_states) != n for joint_states in segments):
        raise InvalidParameter("all segments must cover the same joints")
    start = np.asarray(start, dtype=float).copy()
    if start.shape != (n,) or not np.all(np.isfinite(start)):
        raise InvalidParameter(f"start must hold {n} finite values")

    durations = np.array([max(s.duration for s in joint_states) for joint_states in segments])
    enable_times = np.zeros(len(segments))
    for j in range(1, len(segments)):
        window = min(min(prev.t_sd, nxt.t_lo)
                     for prev, nxt in zip(segments[j - 1], segments[j]))
        enable_times[j] = enable_times[j - 1] + durations[j - 1] - overlap_fraction * window
    states = tuple(
        tuple(replace(s, t_enb=enable_times[j]) for s in joint_states)
        for j, joint_states in enumerate(segments))
    start.setflags(write=False)
    enable_times.setflags(write=False)
    durations.setflags(write=False)
    traj = PlannedTrajectory(start=start, states=states, enable_times=enable_times,
                             segment_durations=durations,
                             horizon=float(enable_times[-1] + durations[-1]),
                             overlap_fraction=overlap_fraction)

    if limits is None:
        v_cap = max((s.v for joint_states in segments for s in joint_states), default=0.0)
        a_cap = min((min(s.a, s.dec) for joint_states in segments for s in joint_states),
                    default=math.inf)
    else:
        v_cap = limits.v_max
        a_cap = min(limits.a_max, limits.dec_max)
    factor = 1.0
    if v_cap > 0.0:
        factor = max(factor, peak_abs(traj, "velocity") / v_cap)
    if math.isfinite(a_cap) and a_cap > 0.0:
        factor = max(factor, math.sqrt(peak_abs(traj, "acceleration") / a_cap))
    if factor > 1.0:
        traj = _dilate(traj, factor * (1.0 + 1e-12))
    return traj


def plan_trajectory(via_points, limits: KinematicLimits = DEFAULT_LIMITS,
                    overlap_fraction: float = 0.5) -> PlannedTrajectory:
    """Plan a blended trajectory through an (m+1) x n table of via points.

    Row 0 is the start configuration; each subsequent row adds one segment.
    """
    via = np.atleast_2d(np.asarray(via_points, dtype=float))
    if via.ndim != 2 or via.shape[0] < 2:
        raise InvalidParameter("need a 2-D via table with at least start and goal rows")
    if not np.all(np.isfinite(via)):
        raise InvalidParameter("via points must be finite")
    segments = [
        synchronize([plan_segment(float(delta), limits) for delta in via[j + 1] - via[j]])
        for j in range(via.shape[0] - 1)
    ]
    return blend(segments, via[0], overlap_fraction, limits=limits)


def write_trajectory_csv(path, traj: PlannedTrajectory, dt: float = 1e-3) -> None:
    """CSV export on an exact dt grid: t_s, then rho/vel/acc per joint."""
    if dt <= 0.0:
        raise InvalidParameter(f"dt must be positive, got {dt}")
    ticks = int(math.floor(traj.horizon / dt)) + 1
    times = np.arange(ticks) * dt
    pos, vel, acc = evaluate(traj, np.clip(times, 0.0, traj.horizon))
    header = ["t_s"]
    for i in range(traj.n):
        header += [f"rho_{i + 1}_m", f"vel_{i + 1}_mps", f"acc_{i + 1}_mps2"]
    rows = []
    for k in range(ticks):
        row = [times[k]]
        for i in range(traj.n):
            row += [pos[k, i], vel[k, i], acc[k, i]]
        rows.append(row)
    write_csv(path, header, rows)
