"""World rectangle and private robot coordinate frames.

Coordinate conventions:

- The world is an axis-aligned rectangle in one fixed global frame.
- Each robot carries a private frame: origin at the robot itself, axes
  parallel to the global axes, both axes flipped together when
  ``orientation`` is -1, and an arbitrary positive unit length (``scale``).
  The local y-axis therefore always stays 90 degrees counterclockwise from
  the local x-axis; frames never rotate freely.
- A global point p maps to ``orientation * (p - origin) / scale`` locally,
  so the owning robot always sits at (0, 0) in its own frame.

All geometry is plain 64-bit float; boundary comparisons elsewhere in the
package use an absolute tolerance of 1e-9 length units.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ConfigurationError, ProtocolViolation

Point = tuple[float, float]


@dataclass(frozen=True)
class WorldRect:
    """The rectangular region to be painted, in global coordinates."""

    x_min: float
    x_max: float
    y_min: float
    y_max: float

    def __post_init__(self):
        if not (self.x_min < self.x_max and self.y_min < self.y_max):
            raise ConfigurationError(
                f"degenerate world rectangle: x [{self.x_min}, {self.x_max}], "
                f"y [{self.y_min}, {self.y_max}]"
            )

    @property
    def length(self) -> float:
        """Horizontal extent (x_max - x_min)."""
        return self.x_max - self.x_min

    @property
    def breadth(self) -> float:
        """Vertical extent (y_max - y_min); strips divide this."""
        return self.y_max - self.y_min

    def contains(self, p: Point, strict: bool = True) -> bool:
        x, y = p
        if strict:
            return self.x_min < x < self.x_max and self.y_min < y < self.y_max
        return self.x_min <= x <= self.x_max and self.y_min <= y <= self.y_max


@dataclass(frozen=True)
class LocalFrame:
    """A robot's private coordinate system.

    ``orientation`` is +1 or -1 and applies to both axes at once;
    ``scale`` is the robot's private unit length in global units.
    """

    origin: Point
    orientation: int = 1
    scale: float = 1.0

    def __post_init__(self):
        if self.orientation not in (1, -1):
            raise ConfigurationError(f"orientation must be +1 or -1, got {self.orientation}")
        if not self.scale > 0:
            raise ConfigurationError(f"scale must be positive, got {self.scale}")


def to_local(frame: LocalFrame, p: Point) -> Point:
    """Express a global point in the frame's local coordinates."""
    o = frame.orientation
    return (
        o * (p[0] - frame.origin[0]) / frame.scale,
        o * (p[1] - frame.origin[1]) / frame.scale,
    )


def to_global(frame: LocalFrame, q: Point) -> Point:
    """Inverse of :func:`to_local`."""
    o = frame.orientation
    return (
        frame.origin[0] + o * frame.scale * q[0],
        frame.origin[1] + o * frame.scale * q[1],
    )


@dataclass(frozen=True)
class Snapshot:
    """What one robot sees of the world, in its own frame.

    The observer itself is always at (0, 0).  ``upper`` (>= 0) and ``lower``
    (<= 0) are the local y-values of the region's horizontal boundaries;
    ``left`` < 0 < ``right`` are the local x-values of the region's sides.
    Which global boundary maps to which local one depends on orientation.
    """

    others: tuple[Point, ...]
    upper: float
    lower: float
    left: float
    right: float

    def __post_init__(self):
        if self.upper < 0 or self.lower > 0:
            raise ProtocolViolation(
                f"observer outside region: upper={self.upper}, lower={self.lower}"
            )

    @property
    def n_total(self) -> int:
        """Number of robots including the observer."""
        return len(self.others) + 1


def observe(
    world: WorldRect,
    positions: list[Point],
    self_index: int,
    frame: LocalFrame,
) -> Snapshot:
    """Build the observer's snapshot from global robot positions.

    Rejects positions outside the world and duplicated positions; the frame
    origin must coincide with the observer's own position.
    """
    if not 0 <= self_index < len(positions):
        raise ProtocolViolation(f"self_index {self_index} out of range")
    if frame.origin != tuple(positions[self_index]):
        raise ProtocolViolation("frame origin does not match observer position")
    seen = set()
    for i, p in enumerate(positions):
        # Boundary contact is legal mid-run: paint lanes span the full region
        # width, so a sweeping robot touches the sides.  Only strictly
        # exterior positions are protocol violations.
        if not world.contains(p, strict=False):
            raise ProtocolViolation(f"robot {i} at {p} lies outside the region")
        if p in seen:
            raise ProtocolViolation(f"duplicate robot position {p}")
        seen.add(p)

    others = tuple(
        to_local(frame, p) for i, p in enumerate(positions) if i != self_index
    )
    ya = to_local(frame, (frame.origin[0], world.y_max))[1]
    yb = to_local(frame, (frame.origin[0], world.y_min))[1]
    xa = to_local(frame, (world.x_min, frame.origin[1]))[0]
    xb = to_local(frame, (world.x_max, frame.origin[1]))[0]
    return Snapshot(
        others=others,
        upper=max(ya, yb),
        lower=min(ya, yb),
        left=min(xa, xb),
        right=max(xa, xb),
    )
