"""Independent checks that validate traces and the pure decision rules.

The brute-force helpers here (global ranking, strip rectangles, expected
sweep length, raster coverage) deliberately reimplement their results with
plain sorting and arithmetic in the global frame, without calling into
:mod:`swarmpaint.protocol`, so they can serve as oracles for it.  The
exhaustive scheduler is different in nature: it drives the production
per-robot rules through *all* activation interleavings of a tiny swarm and
applies the independent checks to every reached state.
"""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass

import numpy as np

from .engine import (
    PAINT_DONE,
    PAINT_START,
    PAINT_STEP,
    SLEEP,
    Trace,
    check_no_crossing,
)
from .errors import ConfigurationError
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

GlobalStrip = tuple[float, float, float, float]  # x_min, x_max, lower_y, upper_y


def brute_force_assignment(
    positions: list[Point], world: WorldRect
) -> list[tuple[int, GlobalStrip]]:
    """Canonical global rank and strip rectangle for every robot.

    Ranks follow ascending (y, then x); rank k owns the k-th strip counted
    from the bottom of the world.  Pure sort plus arithmetic.
    """
    n = len(positions)
    if len(set(positions)) != n:
        raise ConfigurationError("positions must be distinct")
    order = sorted(range(n), key=lambda i: (positions[i][1], positions[i][0]))
    h = world.breadth / n
    out: list[tuple[int, GlobalStrip]] = [None] * n  # type: ignore[list-item]
    for pos, i in enumerate(order):
        k = pos + 1
        out[i] = (
            k,
            (world.x_min, world.x_max, world.y_min + (k - 1) * h, world.y_min + k * h),
        )
    return out


def expected_paint_length(world: WorldRect, n: int, eta: float) -> float:
    """Independent recomputation of one strip's sweep length.

    Lane count and spacing are derived arithmetically: lanes sit 2*eta
    apart starting eta above the strip bottom, the last clamped eta below
    the strip top; the sweep also includes the vertical hops between lanes
    and the eta-long approach from the pre-paint corner to the first lane
    start.
    """
    h = world.breadth / n
    k = max(0, math.ceil((h - 2 * eta) / (2 * eta) - 1e-12))
    lane_count = k + 1
    vertical = (h - 2 * eta) if lane_count > 1 else 0.0
    return lane_count * world.length + vertical + eta


def nominal_sweep_length(world: WorldRect, n: int, eta: float) -> float:
    """Idealized per-strip sweep length: strip area divided by brush width."""
    return world.length * world.breadth / (n * 2 * eta)


def nominal_paint_time(world: WorldRect, n: int, v: float) -> float:
    """The headline estimate length*breadth/(N*v), which ignores the brush width."""
    return world.length * world.breadth / (n * v)


@dataclass
class CoverageRaster:
    """Boolean paint grid over the world with per-cell strip ownership."""

    cell_size: float  # requested pitch; actual dx, dy divide the world exactly
    dx: float
    dy: float
    nx: int
    ny: int
    counts: np.ndarray  # (ny, nx) number of distinct robots that painted each cell
    owner: np.ndarray  # (ny, nx) strip index (0-based) containing each cell center

    @classmethod
    def build(cls, world: WorldRect, n_strips: int, eta: float) -> "CoverageRaster":
        cell = eta / 4.0
        nx = max(1, math.ceil(world.length / cell - 1e-9))
        ny = max(1, math.ceil(world.breadth / cell - 1e-9))
        dx = world.length / nx
        dy = world.breadth / ny
        cy = (np.arange(ny) + 0.5) * dy
        owner = np.minimum((cy / (world.breadth / n_strips)).astype(int), n_strips - 1)
        owner = np.repeat(owner[:, None], nx, axis=1)
        return cls(cell, dx, dy, nx, ny, np.zeros((ny, nx), dtype=np.int16), owner)

    def _span(self, lo: float, hi: float, offset: float, d: float, n: int):
        i0 = math.ceil((lo - offset) / d - 0.5 - 1e-9)
        i1 = math.floor((hi - offset) / d - 0.5 + 1e-9)
        return max(i0, 0), min(i1, n - 1)

    def mark_brush(self, world: WorldRect, mask: np.ndarray, a: Point, b: Point, eta: float):
        """Mark cells whose center lies in the 2*eta band swept from a to b."""
        if abs(a[1] - b[1]) <= 1e-9:  # horizontal stroke
            x0, x1 = sorted((a[0], b[0]))
            y0, y1 = a[1] - eta, a[1] + eta
        elif abs(a[0] - b[0]) <= 1e-9:  # vertical stroke
            y0, y1 = sorted((a[1], b[1]))
            x0, x1 = a[0] - eta, a[0] + eta
        else:
            raise ConfigurationError("paint strokes must be axis-aligned")
        ix0, ix1 = self._span(x0, x1, world.x_min, self.dx, self.nx)
        iy0, iy1 = self._span(y0, y1, world.y_min, self.dy, self.ny)
        if ix0 <= ix1 and iy0 <= iy1:
            mask[iy0 : iy1 + 1, ix0 : ix1 + 1] = True


def paint_segments(trace: Trace, robot_id: int) -> list[tuple[Point, Point]]:
    """Consecutive stroke segments of one robot's painting phase."""
    pts = [
        (e.payload["x"], e.payload["y"])
        for e in trace.events
        if e.robot_id == robot_id and e.kind in (PAINT_START, PAINT_STEP, PAINT_DONE)
    ]
    return [(a, b) for a, b in zip(pts, pts[1:]) if a != b]


def verify_coverage(trace: Trace, world: WorldRect | None = None, eta: float | None = None) -> dict:
    """Rasterize every robot's painting sweep dilated by eta and check that
    the whole world is covered with no interior cross-strip overlap.

    Overlap is tolerated only within two cells of a shared strip boundary,
    where abutting brushes meet.
    """
    cfg = trace.config
    if world is None:
        world = WorldRect(**cfg["world"])
    if eta is None:
        eta = cfg["params"]["eta"]
    n = trace.n_robots
    raster = CoverageRaster.build(world, n, eta)
    for i in range(n):
        mask = np.zeros_like(raster.counts, dtype=bool)
        for a, b in paint_segments(trace, i):
            raster.mark_brush(world, mask, a, b, eta)
        raster.counts += mask

    covered = raster.counts >= 1
    overlap = raster.counts >= 2
    boundary_tol = 2.0 * max(raster.dx, raster.dy)
    cy = (np.arange(raster.ny) + 0.5) * raster.dy
    strip_h = world.breadth / n
    edges = np.array([k * strip_h for k in range(1, n)])
    if edges.size:
        near_edge = (np.abs(cy[:, None] - edges[None, :]) <= boundary_tol).any(axis=1)
    else:
        near_edge = np.zeros(raster.ny, dtype=bool)
    interior_overlap = overlap & ~near_edge[:, None]
    cell_area = raster.dx * raster.dy
    return {
        "complete": bool(covered.all()),
        "uncovered_cells": int((~covered).sum()),
        "cross_strip_overlap_area": float(overlap.sum() * cell_area),
        "interior_overlap_cells": int(interior_overlap.sum()),
        "cell_size": raster.cell_size,
        "total_cells": int(raster.counts.size),
    }


def sample_min_distance(trace: Trace, time_step: float | None = None) -> dict:
    """Minimum pairwise robot distance over a regular time grid."""
    if time_step is None:
        time_step = trace.config["schedule"]["time_step"]
    n = trace.n_robots
    if n < 2:
        return {"min_distance": math.inf, "time": 0.0, "pair": None}
    horizon = max(trace.completion_time, time_step)
    times = np.arange(0.0, horizon + time_step, time_step)
    xs = np.empty((n, times.size))
    ys = np.empty((n, times.size))
    for i, path in enumerate(trace.paths):
        pt = np.asarray(path)
        xs[i] = np.interp(times, pt[:, 0], pt[:, 1])
        ys[i] = np.interp(times, pt[:, 0], pt[:, 2])
    best = (math.inf, 0.0, None)
    for i in range(n):
        for j in range(i + 1, n):
            d = np.hypot(xs[i] - xs[j], ys[i] - ys[j])
            k = int(np.argmin(d))
            if d[k] < best[0]:
                best = (float(d[k]), float(times[k]), (i, j))
    return {"min_distance": best[0], "time": best[1], "pair": best[2]}


def check_atomic_painting(trace: Trace) -> list[dict]:
    """No sleep or non-paint event may occur between PaintStart and PaintDone."""
    violations = []
    for i in range(trace.n_robots):
        evs = [e for e in trace.events if e.robot_id == i]
        painting = False
        for e in evs:
            if e.kind == PAINT_START:
                painting = True
            elif e.kind == PAINT_DONE:
                painting = False
            elif painting and e.kind != PAINT_STEP:
                violations.append({"robot": i, "time": e.time, "kind": e.kind})
    return violations


def check_bounded_sleep(trace: Trace) -> list[dict]:
    s_max = trace.config["schedule"]["s_max"]
    return [
        {"robot": e.robot_id, "time": e.time, "duration": e.payload["until"] - e.time}
        for e in trace.events
        if e.kind == SLEEP and e.payload["until"] - e.time > s_max + 1e-6
    ]


def globalized_assignment(
    world: WorldRect, positions: list[Point], orientations: list[int], scales: list[float]
) -> list[tuple[int, GlobalStrip]]:
    """Each robot's own rank and strip, computed in its private frame and
    mapped back to global coordinates."""
    out = []
    for i, pos in enumerate(positions):
        frame = LocalFrame(pos, orientations[i], scales[i])
        snap = observe(world, positions, i, frame)
        rank = compute_rank(snap)
        strip = compute_strip(snap, rank)
        c1 = to_global(frame, (strip.left_x, strip.lower_y))
        c2 = to_global(frame, (strip.right_x, strip.upper_y))
        rect = (min(c1[0], c2[0]), max(c1[0], c2[0]), min(c1[1], c2[1]), max(c1[1], c2[1]))
        canonical = rank.value if orientations[i] == 1 else rank.n_total + 1 - rank.value
        out.append((canonical, rect))
    return out


def check_assignment_agreement(trace: Trace, tol: float = 1e-9) -> list[dict]:
    """Every robot's locally computed (rank, strip), globalized, must equal
    the brute-force canonical assignment."""
    cfg = trace.config
    world = WorldRect(**cfg["world"])
    positions = trace.initial_positions()
    orientations = [1 if r["orientation"] == "P" else -1 for r in cfg["robots"]]
    scales = [r["scale"] for r in cfg["robots"]]
    expected = brute_force_assignment(positions, world)
    got = globalized_assignment(world, positions, orientations, scales)
    violations = []
    for i, ((rank_e, rect_e), (rank_g, rect_g)) in enumerate(zip(expected, got)):
        if rank_e != rank_g or any(abs(a - b) > tol for a, b in zip(rect_e, rect_g)):
            violations.append(
                {"robot": i, "expected": (rank_e, rect_e), "got": (rank_g, rect_g)}
            )
    return violations


def _event_index_at(trace: Trace, t: float) -> int:
    """Index of the last event at or before time t (counterexample anchor)."""
    times = [e.time for e in trace.events]
    return max(0, bisect.bisect_right(times, t) - 1)


def run_all_checks(trace: Trace) -> dict:
    """Full verification report for one trace; ``passed`` aggregates all checks."""
    cfg = trace.config
    world = WorldRect(**cfg["world"])
    eta = cfg["params"]["eta"]
    eps = cfg["params"]["eps"]
    v = cfg["schedule"]["velocity"]
    n = trace.n_robots

    crossing = check_no_crossing(trace)
    for violation in crossing:
        violation["event_index"] = _event_index_at(trace, violation["time"])
    spacing = sample_min_distance(trace)
    threshold = min(eps, 2 * eta) / 2.0
    atomic = check_atomic_painting(trace)
    sleeps = check_bounded_sleep(trace)
    coverage = verify_coverage(trace, world, eta)
    agreement = check_assignment_agreement(trace)

    lengths = trace.paint_lengths()
    durations = trace.paint_durations()
    expected = expected_paint_length(world, n, eta)
    nominal = nominal_sweep_length(world, n, eta)
    # 5e-6 absorbs the 9-significant-digit rounding of times in trace files;
    # in-memory traces satisfy this to ~1e-12.
    geometry_ok = all(
        abs(length - expected) <= 5e-6
        and abs(duration - length / v) <= 5e-6
        and abs(length / nominal - 1.0) <= 0.15
        for length, duration in zip(lengths, durations)
    )

    checks = {
        "no_crossing": {"passed": not crossing, "violations": crossing},
        "collision_spacing": {
            "passed": spacing["min_distance"] >= threshold,
            "threshold": threshold,
            **spacing,
        },
        "exact_coincidence": {"passed": spacing["min_distance"] >= 1e-9},
        "atomic_painting": {"passed": not atomic, "violations": atomic},
        "bounded_sleep": {"passed": not sleeps, "violations": sleeps},
        "liveness": {
            "passed": math.isfinite(trace.completion_time)
            and trace.completion_time <= trace.watchdog_bound,
            "completion_time": trace.completion_time,
            "watchdog_bound": trace.watchdog_bound,
        },
        "coverage": {
            "passed": coverage["complete"] and coverage["interior_overlap_cells"] == 0,
            **coverage,
        },
        "assignment_agreement": {"passed": not agreement, "violations": agreement},
        "paint_geometry": {
            "passed": geometry_ok,
            "path_lengths": lengths,
            "paint_durations": durations,
            "expected_length": expected,
            "nominal_sweep_length": nominal,
            "nominal_paint_time": nominal_paint_time(world, n, v),
        },
    }
    return {
        "scenario": cfg["name"],
        "seed": cfg["schedule"]["seed"],
        "passed": all(c["passed"] for c in checks.values()),
        "checks": checks,
    }


# -- exhaustive interleaving exploration ------------------------------------


def _activate(world, positions, i, orientations, scales, eta, eps):
    """One atomic cycle of robot i with all others frozen.

    Returns (new_position, now_done, info); info flags vertical motion and
    any exact pass-through collision with a frozen robot.
    """
    pos = positions[i]
    frame = LocalFrame(pos, orientations[i], scales[i])
    snap = observe(world, list(positions), i, frame)
    eta_l = eta / scales[i]
    eps_l = eps / scales[i]
    tol_l = 1e-9 / scales[i]
    rank = compute_rank(snap)
    strip = compute_strip(snap, rank)
    dest = compute_destination(snap, rank, strip, eps_l, eta_l)
    target = to_global(frame, dest.target)
    at_final = dest.kind == FINAL and math.dist(pos, target) <= 1e-9

    info = {"moved": False, "moved_vertically": False, "collisions": []}
    if at_final:
        if not strip_empty(snap, strip):
            return pos, False, info
        path = generate_paint_path(strip, eta_l)
        end = to_global(frame, path.waypoints[-1])
        info["moved"] = True
        return end, True, info

    if any(abs(p[1]) <= tol_l for p in snap.others):
        if decide_tie(snap, rank, dest, tol_l) is TieDecision.WAIT:
            return pos, False, info

    others = [p for j, p in enumerate(positions) if j != i]
    mid = (pos[0], target[1])
    for ox, oy in others:
        on_vertical = abs(ox - pos[0]) <= 1e-12 and min(pos[1], mid[1]) - 1e-12 <= oy <= max(
            pos[1], mid[1]
        ) + 1e-12
        on_horizontal = abs(oy - target[1]) <= 1e-12 and min(mid[0], target[0]) - 1e-12 <= ox <= max(
            mid[0], target[0]
        ) + 1e-12
        if on_vertical or on_horizontal:
            info["collisions"].append((ox, oy))
    info["moved"] = target != pos
    info["moved_vertically"] = abs(target[1] - pos[1]) > 1e-12
    return target, False, info


def exhaustive_schedule_check(
    world: WorldRect,
    robots: list[tuple[Point, int, float]],
    *,
    eta: float,
    eps: float,
    depth: int = 12,
) -> dict:
    """Explore every activation interleaving of a tiny swarm.

    Asynchrony is reduced to the order in which robots run their atomic
    observe/compute/move cycles, one robot at a time.  Every reached state
    is checked for rank-order inversions, exact pass-through collisions,
    and deadlock; ``partial`` is set when the depth budget cut exploration
    short.
    """
    n = len(robots)
    if n > 3:
        raise ConfigurationError("exhaustive exploration is limited to N <= 3")
    positions0 = tuple(tuple(p) for p, _, _ in robots)
    orientations = [o for _, o, _ in robots]
    scales = [s for _, _, s in robots]
    order = sorted(range(n), key=lambda i: (positions0[i][1], positions0[i][0]))

    report = {
        "explored_states": 0,
        "completed_runs": 0,
        "violations": [],
        "partial": False,
        "initial_tie_movers": set(),
        "tie_movers": {},
    }

    def rank_violation(positions):
        for a in range(n):
            for b in range(a + 1, n):
                if positions[order[a]][1] > positions[order[b]][1] + 1e-9:
                    return (order[a], order[b])
        return None

    def tied_ids(positions):
        return tuple(
            sorted(
                i
                for i in range(n)
                for j in range(n)
                if i != j and abs(positions[i][1] - positions[j][1]) <= 1e-9
            )
        )

    seen = set()
    initial_state = (positions0, (False,) * n)

    def dfs(state, budget):
        positions, done = state
        if all(done):
            report["completed_runs"] += 1
            return
        if budget == 0:
            report["partial"] = True
            return
        if state in seen:
            return
        seen.add(state)
        report["explored_states"] += 1
        tied = tied_ids(positions)
        progress = False
        for i in range(n):
            if done[i]:
                continue
            new_pos, now_done, info = _activate(
                world, positions, i, orientations, scales, eta, eps
            )
            for c in info["collisions"]:
                report["violations"].append(
                    {"kind": "collision", "robot": i, "through": c, "state": positions}
                )
            if not info["moved"] and not now_done:
                continue
            progress = True
            if tied and info["moved_vertically"]:
                key = (positions, tied)
                report["tie_movers"].setdefault(key, set()).add(i)
                if state == initial_state:
                    report["initial_tie_movers"].add(i)
            new_positions = tuple(
                new_pos if j == i else p for j, p in enumerate(positions)
            )
            bad = rank_violation(new_positions)
            if bad:
                report["violations"].append(
                    {"kind": "crossing", "pair": bad, "state": new_positions}
                )
            new_done = tuple(now_done if j == i else d for j, d in enumerate(done))
            dfs((new_positions, new_done), budget - 1)
        if not progress:
            report["violations"].append({"kind": "deadlock", "state": positions})

    dfs(initial_state, depth)
    return report
