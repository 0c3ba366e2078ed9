"""Per-robot decision rules of the painting protocol.

Given only a :class:`~swarmpaint.geometry.Snapshot`, a robot derives its
rank in the swarm, the horizontal strip it owns, where to move next (or
whether to halt short of another robot), whether it may move when tied at
the same height with a peer, and finally the serpentine sweep that paints
its strip.

Every function here is pure and memoryless: calling twice with equal
inputs yields identical outputs.  All lengths are in the snapshot's local
units, so callers with a scaled frame must pass eta/eps already divided by
the frame scale.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .errors import ConfigurationError, ProtocolViolation, StripTooThinError
from .geometry import Point, Snapshot

FINAL = "final"
SECONDARY = "secondary"


@dataclass(frozen=True)
class Rank:
    """Position in the ascending (y, then x) ordering; 1-based."""

    value: int
    n_total: int

    def __post_init__(self):
        if not 1 <= self.value <= self.n_total:
            raise ConfigurationError(f"rank {self.value} out of [1, {self.n_total}]")


@dataclass(frozen=True)
class Strip:
    """One of the N equal-height horizontal sub-rectangles, in local coords."""

    index: int
    lower_y: float
    upper_y: float
    left_x: float
    right_x: float

    @property
    def height(self) -> float:
        return self.upper_y - self.lower_y


@dataclass(frozen=True)
class Destination:
    """Where to move this cycle and why motion will stop there.

    ``kind`` is FINAL (the strip corner, offset inward by eta) or SECONDARY
    (a purely vertical halt eps short of the first robot the move would
    otherwise cross; local x stays 0).  ``blocking_rank`` names the rank of
    the robot that forced a secondary halt.
    """

    kind: str
    target: Point
    blocking_rank: int | None = None


class TieDecision(enum.Enum):
    MOVE_NOW = "move_now"
    WAIT = "wait"


@dataclass(frozen=True)
class PaintPath:
    """Serpentine sweep waypoints; consecutive lanes are at most 2*eta apart."""

    waypoints: tuple[Point, ...]
    lane_spacing: float

    @property
    def length(self) -> float:
        return sum(
            math.dist(a, b) for a, b in zip(self.waypoints, self.waypoints[1:])
        )


def _all_positions(snap: Snapshot) -> list[Point]:
    return [(0.0, 0.0), *snap.others]


def _check_distinct(points: list[Point]) -> None:
    if len(set(points)) != len(points):
        raise ProtocolViolation("two robots occupy the same position")


def compute_rank(snap: Snapshot) -> Rank:
    """Rank the observer among all robots by (y, then x), ascending."""
    pts = _all_positions(snap)
    _check_distinct(pts)
    below = sum(1 for p in snap.others if (p[1], p[0]) < (0.0, 0.0))
    return Rank(value=1 + below, n_total=len(pts))


def peer_ranks(snap: Snapshot) -> tuple[int, ...]:
    """Rank of each robot in ``snap.others``, in listing order."""
    pts = _all_positions(snap)
    _check_distinct(pts)
    order = sorted(pts, key=lambda p: (p[1], p[0]))
    lookup = {p: i + 1 for i, p in enumerate(order)}
    return tuple(lookup[p] for p in snap.others)


def compute_strip(snap: Snapshot, rank: Rank) -> Strip:
    """Boundaries of the rank-th strip counted from the local bottom."""
    if rank.n_total != snap.n_total:
        raise ConfigurationError("rank computed for a different swarm size")
    s, f, n, k = snap.upper, snap.lower, rank.n_total, rank.value
    h = (s - f) / n
    return Strip(
        index=k,
        lower_y=f + (k - 1) * h,
        upper_y=f + k * h,
        left_x=snap.left,
        right_x=snap.right,
    )


def compute_destination(
    snap: Snapshot, rank: Rank, strip: Strip, eps: float, eta: float
) -> Destination:
    """Final corner target, or a secondary halt if the move would cross someone.

    The final target is the strip's bottom-left corner pulled inward by eta
    on both axes, so the 2*eta brush seals the strip's bottom and left
    edges.  If the vertical move from y=0 toward the target height would
    pass another robot's y-coordinate, the robot instead stops eps short of
    the first such robot in the travel direction.  A halt that would demand
    backward motion (blocker already within eps) clamps to the current
    height.
    """
    if eps <= 0 or eta <= 0:
        raise ConfigurationError(f"eps and eta must be positive (eps={eps}, eta={eta})")
    target = (strip.left_x + eta, strip.lower_y + eta)
    ty = target[1]
    ranks = peer_ranks(snap)

    if ty < 0.0:  # descending
        blockers = [(p, r) for p, r in zip(snap.others, ranks) if ty < p[1] < 0.0]
        if blockers:
            first, r = max(blockers, key=lambda br: br[0][1])
            return Destination(SECONDARY, (0.0, min(first[1] + eps, 0.0)), r)
    elif ty > 0.0:  # ascending
        blockers = [(p, r) for p, r in zip(snap.others, ranks) if 0.0 < p[1] < ty]
        if blockers:
            first, r = min(blockers, key=lambda br: br[0][1])
            return Destination(SECONDARY, (0.0, max(first[1] - eps, 0.0)), r)
    return Destination(FINAL, target)


def decide_tie(
    snap: Snapshot, rank: Rank, dest: Destination, tie_tol: float = 1e-9
) -> TieDecision:
    """Whether a robot tied at the same height as peers may move this cycle.

    Against every tied robot the rule is: move first when holding the
    higher rank and heading in local +y, or the lower rank and heading in
    local -y; otherwise wait.  Destinations in opposite vertical directions
    satisfy the rule for both robots at once, so diverging pairs are both
    free to move.  A robot with no vertical leg (target y = 0) is never
    restricted.
    """
    ranks = peer_ranks(snap)
    tied = [r for p, r in zip(snap.others, ranks) if abs(p[1]) <= tie_tol]
    if not tied:
        raise ProtocolViolation("decide_tie called with no robot at the same height")
    ty = dest.target[1]
    if ty == 0.0:
        return TieDecision.MOVE_NOW
    for r in tied:
        wins = rank.value > r if ty > 0.0 else rank.value < r
        if not wins:
            return TieDecision.WAIT
    return TieDecision.MOVE_NOW


def strip_empty(snap: Snapshot, strip: Strip) -> bool:
    """True iff no other robot lies strictly inside the strip's rectangle.

    Boundaries are exclusive: a robot exactly on a shared strip edge blocks
    neither adjacent strip.
    """
    for x, y in snap.others:
        if strip.lower_y < y < strip.upper_y and strip.left_x < x < strip.right_x:
            return False
    return True


def paint_lanes(strip: Strip, eta: float) -> list[float]:
    """Lane heights y = lower+eta, lower+3*eta, ... with the last clamped
    to upper-eta. Raises when the strip is thinner than the 2*eta brush."""
    if eta <= 0:
        raise ConfigurationError(f"eta must be positive, got {eta}")
    h = strip.height
    if h < 2 * eta - 1e-9:
        raise StripTooThinError(
            f"strip {strip.index} height {h:.6g} is below the brush width "
            f"2*eta={2 * eta:.6g}; the configuration must satisfy N*2*eta <= breadth"
        )
    first = strip.lower_y + eta
    last = strip.upper_y - eta
    k = max(0, math.ceil((h - 2 * eta) / (2 * eta) - 1e-12))
    if k == 0:
        return [first]
    return [first + 2 * eta * i for i in range(k)] + [last]


def generate_paint_path(strip: Strip, eta: float) -> PaintPath:
    """Boustrophedon sweep covering the strip with a 2*eta brush.

    Lanes span the strip's full horizontal extent so the brush overhangs
    and seals the side edges; consecutive lanes are joined by vertical hops
    at alternating ends.
    """
    lanes = paint_lanes(strip, eta)
    waypoints: list[Point] = []
    for i, y in enumerate(lanes):
        ends = (strip.left_x, strip.right_x) if i % 2 == 0 else (strip.right_x, strip.left_x)
        waypoints.append((ends[0], y))
        waypoints.append((ends[1], y))
    return PaintPath(waypoints=tuple(waypoints), lane_spacing=2 * eta)
