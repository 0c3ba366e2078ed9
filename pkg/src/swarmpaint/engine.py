"""Deterministic asynchronous scheduler for the painting protocol.

Every robot runs independent observe/compute/move cycles.  Scheduling
delays and sleep decisions come from a per-robot RNG stream derived from
the run seed, so a (configuration, seed) pair replays to a bit-identical
trace.  Motion is continuous at constant speed along vertical-then-
horizontal legs; the engine computes leg boundary times exactly and
interpolates positions analytically, which keeps the event count small
while matching fixed-step integration to machine precision.  The
``time_step`` of the schedule is the sampling pitch used by verification
and rendering, not an integration step.

Cycle anatomy (all four gaps drawn uniformly from cycle_length_range/4):

    previous cycle end --gap-- Observe --gap-- Compute --gap-- Move ... --gap-- next cycle

A robot may fall asleep only between cycles, never mid-motion, and
painting runs start to finish without interruption.
"""

from __future__ import annotations

import dataclasses
import enum
import heapq
import itertools
import math
import random
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigurationError, LivenessError
from .geometry import LocalFrame, Point, WorldRect, observe, to_global
from .protocol import (
    FINAL,
    TieDecision,
    compute_destination,
    compute_rank,
    compute_strip,
    decide_tie,
    generate_paint_path,
    strip_empty,
)

# Event kinds, in the order they typically appear in a cycle.
WAKE = "Wake"
OBSERVE_DONE = "ObserveDone"
COMPUTE_DONE = "ComputeDone"
MOVE_STEP = "MoveStep"
REACHED_SECONDARY = "ReachedSecondary"
REACHED_FINAL = "ReachedFinal"
WAITING_STRIP_OCCUPIED = "WaitingStripOccupied"
TIE_WAIT = "TieWait"
PAINT_START = "PaintStart"
PAINT_STEP = "PaintStep"
PAINT_DONE = "PaintDone"
SLEEP = "Sleep"

_POSITION_KINDS = frozenset(
    {MOVE_STEP, REACHED_SECONDARY, REACHED_FINAL, PAINT_START, PAINT_STEP, PAINT_DONE}
)


class Mode(enum.Enum):
    SLEEPING = "sleeping"
    CYCLING = "cycling"
    AT_FINAL_WAITING = "at_final_waiting"
    PAINTING = "painting"
    DONE = "done"


@dataclass(frozen=True)
class ScheduleConfig:
    """Timing model of the asynchronous scheduler."""

    seed: int = 0
    cycle_length_range: tuple[float, float] = (0.2, 1.0)
    sleep_probability: float = 0.1
    s_max: float = 2.0
    velocity: float = 1.0
    time_step: float = 0.05

    def __post_init__(self):
        lo, hi = self.cycle_length_range
        if not (0 <= lo <= hi):
            raise ConfigurationError(f"bad cycle_length_range {self.cycle_length_range}")
        if not 0 <= self.sleep_probability < 1:
            raise ConfigurationError(
                f"sleep_probability must be in [0, 1), got {self.sleep_probability}"
            )
        if not (math.isfinite(self.s_max) and self.s_max >= 0):
            raise ConfigurationError(f"s_max must be finite and >= 0, got {self.s_max}")
        if not self.velocity > 0:
            raise ConfigurationError(f"velocity must be positive, got {self.velocity}")
        if not self.time_step > 0:
            raise ConfigurationError(f"time_step must be positive, got {self.time_step}")

    def to_dict(self) -> dict:
        return {
            "seed": self.seed,
            "cycle_length_range": list(self.cycle_length_range),
            "sleep_probability": self.sleep_probability,
            "s_max": self.s_max,
            "velocity": self.velocity,
            "time_step": self.time_step,
        }


@dataclass(frozen=True)
class SimEvent:
    time: float
    robot_id: int
    kind: str
    payload: dict = field(default_factory=dict)


@dataclass
class RobotState:
    """Public view of one robot inside a running simulation."""

    id: int
    position: Point
    orientation: int
    scale: float
    mode: Mode = Mode.CYCLING
    wake_time: float | None = None

    @property
    def frame(self) -> LocalFrame:
        return LocalFrame(self.position, self.orientation, self.scale)


@dataclass
class Trace:
    """Complete record of one run: config, events, and motion polylines."""

    config: dict
    events: list[SimEvent]
    final_positions: list[Point]
    paths: list[list[tuple[float, float, float]]]
    completion_time: float
    watchdog_bound: float

    @property
    def n_robots(self) -> int:
        return len(self.config["robots"])

    def events_of(self, kind: str, robot_id: int | None = None) -> list[SimEvent]:
        return [
            e
            for e in self.events
            if e.kind == kind and (robot_id is None or e.robot_id == robot_id)
        ]

    def t1(self) -> float:
        """Time at which the last robot reached its final pre-paint position."""
        arrivals = self.events_of(REACHED_FINAL)
        return max(e.time for e in arrivals) if arrivals else math.nan

    def paint_durations(self) -> list[float]:
        out = []
        for i in range(self.n_robots):
            starts = self.events_of(PAINT_START, i)
            dones = self.events_of(PAINT_DONE, i)
            out.append(dones[0].time - starts[0].time if starts and dones else math.nan)
        return out

    def paint_lengths(self) -> list[float]:
        out = []
        for i in range(self.n_robots):
            dones = self.events_of(PAINT_DONE, i)
            out.append(dones[0].payload["path_length"] if dones else math.nan)
        return out

    def initial_positions(self) -> list[Point]:
        return [(r["x"], r["y"]) for r in self.config["robots"]]


def _sign(x: float) -> float:
    return math.copysign(1.0, x) if x != 0.0 else 0.0


def l_path_legs(start: Point, target: Point) -> list[tuple[Point, Point]]:
    """Vertical-first then horizontal legs from start to target.

    Zero-length legs are dropped; a purely vertical move (matching x)
    yields a single leg.
    """
    legs = []
    mid = (start[0], target[1])
    if abs(mid[1] - start[1]) > 0.0:
        legs.append((start, mid))
    if abs(target[0] - mid[0]) > 0.0:
        legs.append((mid, target))
    return legs


def step_motion(state: RobotState, target: Point, dt: float, v: float) -> RobotState:
    """Advance dt seconds at speed v along the L-path toward target.

    The vertical leg completes exactly before any horizontal motion, and
    the robot never overshoots the target.
    """
    budget = dt * v
    x, y = state.position
    dy = target[1] - y
    step = min(abs(dy), budget)
    y += step * _sign(dy)
    budget -= step
    if budget > 0.0:
        dx = target[0] - x
        step = min(abs(dx), budget)
        x += step * _sign(dx)
    return dataclasses.replace(state, position=(x, y))


class _Sim:
    def __init__(
        self,
        world: WorldRect,
        robots: list[tuple[Point, int, float]],
        sched: ScheduleConfig,
        eta: float,
        eps: float,
        name: str,
        watchdog_factor: float,
    ):
        n = len(robots)
        if n < 1:
            raise ConfigurationError("need at least one robot")
        if eta <= 0 or eps <= 0:
            raise ConfigurationError(f"eta and eps must be positive (eta={eta}, eps={eps})")
        if not eps < 2 * eta:
            raise ConfigurationError(f"eps={eps} must be smaller than 2*eta={2 * eta}")
        if n * 2 * eta > world.breadth + 1e-9:
            raise ConfigurationError(
                f"strip too thin: {n} robots with brush width 2*eta={2 * eta:.6g} "
                f"need N*2*eta <= breadth={world.breadth:.6g}"
            )
        positions = [tuple(p) for p, _, _ in robots]
        if len(set(positions)) != n:
            raise ConfigurationError("duplicate position: no two robots may coincide")
        for p in positions:
            if not world.contains(p, strict=True):
                raise ConfigurationError(f"robot at {p} must start strictly inside the world")

        self.world = world
        self.sched = sched
        self.eta = eta
        self.eps = eps
        self.n = n
        self.v = sched.velocity
        self.robots = []
        for i, (p, o, sc) in enumerate(robots):
            r = RobotState(id=i, position=tuple(p), orientation=o, scale=sc)
            r._legs = []  # active motion plan: list of (t0, t1, p0, p1)
            r._terminal = None
            r._obs = None
            r._reached_final = False
            r._paint_length = 0.0
            r._path = [(0.0, p[0], p[1])]
            self.robots.append(r)
        self.rng = [random.Random(f"{sched.seed}:{i}") for i in range(n)]
        self.events: list[SimEvent] = []
        self.heap: list = []
        self.seq = itertools.count()
        self.done_count = 0
        diam = math.hypot(world.length, world.breadth)
        self.bound = watchdog_factor * (
            diam / self.v
            + world.length * world.breadth / (2 * eta * n * self.v)
            + n * sched.s_max
        )
        self.config = {
            "name": name,
            "world": {
                "x_min": world.x_min,
                "x_max": world.x_max,
                "y_min": world.y_min,
                "y_max": world.y_max,
            },
            "robots": [
                {"x": p[0], "y": p[1], "orientation": "P" if o == 1 else "N", "scale": sc}
                for p, o, sc in robots
            ],
            "params": {"eta": eta, "eps": eps},
            "schedule": sched.to_dict(),
        }

    # -- scheduling primitives -------------------------------------------

    def push(self, t: float, rid: int, action: str, data=None):
        heapq.heappush(self.heap, (t, rid, next(self.seq), action, data))

    def emit(self, t: float, rid: int, kind: str, **payload):
        self.events.append(SimEvent(t, rid, kind, payload))

    def gap(self, rid: int) -> float:
        lo, hi = self.sched.cycle_length_range
        return self.rng[rid].uniform(lo, hi) / 4.0

    def position_at(self, rid: int, t: float) -> Point:
        r = self.robots[rid]
        for t0, t1, p0, p1 in r._legs:
            if t <= t0:
                return p0
            if t < t1:
                a = (t - t0) / (t1 - t0)
                return (p0[0] + a * (p1[0] - p0[0]), p0[1] + a * (p1[1] - p0[1]))
        return r._legs[-1][3] if r._legs else r.position

    # -- cycle handlers ----------------------------------------------------

    def schedule_cycle(self, rid: int, t: float):
        self.push(t + self.gap(rid), rid, "observe")

    def on_observe(self, rid: int, t: float):
        r = self.robots[rid]
        positions = [self.position_at(j, t) for j in range(self.n)]
        r._obs = positions
        self.emit(t, rid, OBSERVE_DONE)
        self.push(t + self.gap(rid), rid, "act")

    def on_act(self, rid: int, t: float):
        r = self.robots[rid]
        positions = r._obs
        frame = LocalFrame(positions[rid], r.orientation, r.scale)
        snap = observe(self.world, positions, rid, frame)
        eta_l = self.eta / r.scale
        eps_l = self.eps / r.scale
        tol_l = 1e-9 / r.scale

        rank = compute_rank(snap)
        strip = compute_strip(snap, rank)
        dest = compute_destination(snap, rank, strip, eps_l, eta_l)
        target = to_global(frame, dest.target)
        payload = {"dest": dest.kind, "x": target[0], "y": target[1], "rank": rank.value}
        if dest.blocking_rank is not None:
            payload["blocking_rank"] = dest.blocking_rank
        self.emit(t, rid, COMPUTE_DONE, **payload)

        move_t = t + self.gap(rid)
        here = positions[rid]
        at_final = dest.kind == FINAL and math.dist(here, target) <= 1e-9

        if at_final:
            if not r._reached_final:
                r._reached_final = True
                self.emit(move_t, rid, REACHED_FINAL, x=here[0], y=here[1])
            if strip_empty(snap, strip):
                self.start_paint(rid, move_t, frame, strip, eta_l)
            else:
                r.mode = Mode.AT_FINAL_WAITING
                self.emit(move_t, rid, WAITING_STRIP_OCCUPIED)
                self.end_cycle(rid, move_t)
            return

        tied = any(abs(p[1]) <= tol_l for p in snap.others)
        if tied and decide_tie(snap, rank, dest, tol_l) is TieDecision.WAIT:
            r.mode = Mode.CYCLING
            self.emit(move_t, rid, TIE_WAIT)
            self.end_cycle(rid, move_t)
            return

        r.mode = Mode.CYCLING
        legs = l_path_legs(here, target)
        if not legs:
            # halt clamped onto the current position: wait this cycle out
            self.emit(move_t, rid, REACHED_SECONDARY, x=here[0], y=here[1])
            self.end_cycle(rid, move_t)
            return
        paint_on_arrival = dest.kind == FINAL and strip_empty(snap, strip)
        r._terminal = (dest.kind, paint_on_arrival, frame, strip, eta_l)
        self.set_plan(rid, move_t, legs)
        self.emit(move_t, rid, MOVE_STEP, x=here[0], y=here[1])

    def set_plan(self, rid: int, t: float, legs: list[tuple[Point, Point]]):
        r = self.robots[rid]
        r._legs = []
        r._path.append((t, legs[0][0][0], legs[0][0][1]))
        t0 = t
        for p0, p1 in legs:
            t1 = t0 + math.dist(p0, p1) / self.v
            r._legs.append((t0, t1, p0, p1))
            t0 = t1
        for k, (_, t1, _, _) in enumerate(r._legs):
            self.push(t1, rid, "arrive", k)

    def on_arrive(self, rid: int, t: float, k: int):
        r = self.robots[rid]
        _, _, _, p1 = r._legs[k]
        r.position = p1
        r._path.append((t, p1[0], p1[1]))
        last = k == len(r._legs) - 1

        if r.mode is Mode.PAINTING:
            r._paint_length += math.dist(r._legs[k][2], p1)
            if last:
                self.emit(t, rid, PAINT_DONE, x=p1[0], y=p1[1], path_length=r._paint_length)
                r.mode = Mode.DONE
                self.done_count += 1
            else:
                self.emit(t, rid, PAINT_STEP, x=p1[0], y=p1[1])
            return

        if not last:
            self.emit(t, rid, MOVE_STEP, x=p1[0], y=p1[1])
            return

        kind, paint_on_arrival, frame, strip, eta_l = r._terminal
        if kind == FINAL:
            r._reached_final = True
            self.emit(t, rid, REACHED_FINAL, x=p1[0], y=p1[1])
            if paint_on_arrival:
                self.start_paint(rid, t, frame, strip, eta_l)
            else:
                r.mode = Mode.AT_FINAL_WAITING
                self.emit(t, rid, WAITING_STRIP_OCCUPIED)
                self.end_cycle(rid, t)
        else:
            self.emit(t, rid, REACHED_SECONDARY, x=p1[0], y=p1[1])
            self.end_cycle(rid, t)

    def start_paint(self, rid: int, t: float, frame: LocalFrame, strip, eta_l: float):
        r = self.robots[rid]
        r.mode = Mode.PAINTING
        path = generate_paint_path(strip, eta_l)
        here = self.position_at(rid, t)
        pts = [here, *(to_global(frame, w) for w in path.waypoints)]
        legs = [(a, b) for a, b in zip(pts, pts[1:]) if math.dist(a, b) > 0.0]
        self.emit(t, rid, PAINT_START, x=here[0], y=here[1])
        r._paint_length = 0.0
        self.set_plan(rid, t, legs)

    def end_cycle(self, rid: int, t: float):
        r = self.robots[rid]
        rng = self.rng[rid]
        if rng.random() < self.sched.sleep_probability:
            dur = rng.uniform(0.0, self.sched.s_max)
            r.mode = Mode.SLEEPING
            r.wake_time = t + dur
            self.emit(t, rid, SLEEP, until=t + dur)
            self.push(t + dur, rid, "wake")
        else:
            self.schedule_cycle(rid, t + self.gap(rid))

    def on_wake(self, rid: int, t: float):
        r = self.robots[rid]
        r.mode = Mode.CYCLING
        r.wake_time = None
        self.emit(t, rid, WAKE)
        self.schedule_cycle(rid, t)

    # -- main loop ---------------------------------------------------------

    def run(self) -> Trace:
        for i in range(self.n):
            self.schedule_cycle(i, 0.0)
        while self.heap:
            t, rid, _, action, data = heapq.heappop(self.heap)
            if t > self.bound:
                raise LivenessError(
                    f"simulation exceeded watchdog bound {self.bound:.6g} s",
                    trace=self.build_trace(t),
                )
            if self.robots[rid].mode is Mode.DONE:
                continue
            if action == "observe":
                self.on_observe(rid, t)
            elif action == "act":
                self.on_act(rid, t)
            elif action == "arrive":
                self.on_arrive(rid, t, data)
            elif action == "wake":
                self.on_wake(rid, t)
        if self.done_count != self.n:
            raise LivenessError(
                "simulation stalled: event queue drained before all robots finished",
                trace=self.build_trace(math.nan),
            )
        completion = max(e.time for e in self.events)
        return self.build_trace(completion)

    def build_trace(self, completion: float) -> Trace:
        events = sorted(self.events, key=lambda e: (e.time, e.robot_id))
        paths = []
        for r in self.robots:
            path = list(r._path)
            if math.isfinite(completion) and (not path or path[-1][0] < completion):
                path.append((completion, r.position[0], r.position[1]))
            paths.append(path)
        return Trace(
            config=self.config,
            events=events,
            final_positions=[r.position for r in self.robots],
            paths=paths,
            completion_time=completion,
            watchdog_bound=self.bound,
        )


def run(
    world: WorldRect,
    robots: list[tuple[Point, int, float]],
    sched: ScheduleConfig,
    *,
    eta: float,
    eps: float,
    name: str = "adhoc",
    watchdog_factor: float = 50.0,
) -> Trace:
    """Simulate one full run and return its trace.

    ``robots`` lists (position, orientation, scale) per robot; orientation
    is +1 or -1.  Raises :class:`LivenessError` (carrying the partial
    trace) if simulated time passes the watchdog bound.
    """
    return _Sim(world, robots, sched, eta, eps, name, watchdog_factor).run()


def check_no_crossing(trace: Trace, tol: float = 1e-9) -> list[dict]:
    """Scan a trace for vertical order inversions.

    Robots are ranked once from the initial configuration (y, then x,
    ascending); afterwards a lower-ranked robot's y must never exceed a
    higher-ranked robot's y by more than ``tol``.  Positions are piecewise
    linear in time, so checking every motion breakpoint is exact.
    """
    initial = trace.initial_positions()
    order = sorted(range(len(initial)), key=lambda i: (initial[i][1], initial[i][0]))
    times = np.unique(np.concatenate([[p[0] for p in path] for path in trace.paths]))
    ys = np.empty((len(initial), times.size))
    for i, path in enumerate(trace.paths):
        pt = np.asarray(path)
        ys[i] = np.interp(times, pt[:, 0], pt[:, 2])
    violations = []
    for a in range(len(order)):
        for b in range(a + 1, len(order)):
            low, high = order[a], order[b]
            gap = ys[high] - ys[low]
            worst = int(np.argmin(gap))
            if gap[worst] < -tol:
                violations.append(
                    {
                        "low_robot": low,
                        "high_robot": high,
                        "time": float(times[worst]),
                        "gap": float(gap[worst]),
                    }
                )
    return violations
