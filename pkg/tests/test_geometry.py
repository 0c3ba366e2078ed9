"""Frame conversions and observation snapshots."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from swarmpaint.errors import ConfigurationError, ProtocolViolation
from swarmpaint.geometry import LocalFrame, Snapshot, WorldRect, observe, to_global, to_local

WORLD = WorldRect(-20.0, 20.0, -15.0, 15.0)

# Table 1 instance 1 positions (x, y), all orientation P.
T1I1 = [(6.0, -3.0), (5.0, 4.0), (-5.0, 11.0), (-3.0, -5.0)]


def affine_oracle(frame: LocalFrame, p):
    """Independent route: build the 3x3 homogeneous transform and apply it."""
    o, s = frame.orientation, frame.scale
    t = np.array([[1, 0, -frame.origin[0]], [0, 1, -frame.origin[1]], [0, 0, 1]], dtype=float)
    m = np.diag([o / s, o / s, 1.0]) @ t
    v = m @ np.array([p[0], p[1], 1.0])
    return (v[0], v[1])


frames = st.builds(
    LocalFrame,
    origin=st.tuples(
        st.floats(-50, 50, allow_nan=False), st.floats(-50, 50, allow_nan=False)
    ),
    orientation=st.sampled_from([1, -1]),
    scale=st.floats(0.1, 10.0),
)
points = st.tuples(st.floats(-50, 50, allow_nan=False), st.floats(-50, 50, allow_nan=False))


class TestConversions:
    def test_reflected_frame(self):
        frame = LocalFrame(origin=(6.0, -3.0), orientation=-1, scale=1.0)
        assert to_local(frame, (5.0, 4.0)) == (1.0, -7.0)
        assert to_local(frame, (5.0, 4.0)) == pytest.approx(affine_oracle(frame, (5.0, 4.0)))

    def test_identity_frame(self):
        frame = LocalFrame(origin=(0.0, 0.0))
        assert to_local(frame, (3.0, 5.0)) == (3.0, 5.0)

    def test_scaled_frame(self):
        frame = LocalFrame(origin=(2.0, 2.0), orientation=1, scale=2.0)
        assert to_local(frame, (4.0, 6.0)) == (1.0, 2.0)
        assert to_local(frame, (4.0, 6.0)) == pytest.approx(affine_oracle(frame, (4.0, 6.0)))
        assert to_global(frame, (1.0, 2.0)) == (4.0, 6.0)

    def test_round_trip_example(self):
        frame = LocalFrame(origin=(6.0, -3.0), orientation=-1, scale=1.0)
        assert to_global(frame, to_local(frame, (5.0, 4.0))) == (5.0, 4.0)

    def test_origin_maps_to_zero(self):
        frame = LocalFrame(origin=(6.0, -3.0), orientation=-1, scale=3.7)
        assert to_local(frame, frame.origin) == (0.0, 0.0)
        assert to_global(frame, (0.0, 0.0)) == frame.origin

    @settings(max_examples=500)
    @given(frame=frames, p=points)
    def test_round_trip_property(self, frame, p):
        q = to_global(frame, to_local(frame, p))
        assert math.dist(p, q) < 1e-9

    @settings(max_examples=200)
    @given(frame=frames, p=points)
    def test_orientation_involution(self, frame, p):
        flipped = LocalFrame(frame.origin, -frame.orientation, frame.scale)
        a = to_local(frame, p)
        b = to_local(flipped, p)
        assert a[0] == -b[0] and a[1] == -b[1]

    def test_invalid_frames(self):
        with pytest.raises(ConfigurationError):
            LocalFrame((0.0, 0.0), orientation=2)
        with pytest.raises(ConfigurationError):
            LocalFrame((0.0, 0.0), scale=0.0)


class TestWorldRect:
    def test_dimensions(self):
        assert WORLD.length == 40.0
        assert WORLD.breadth == 30.0

    def test_degenerate_rejected(self):
        with pytest.raises(ConfigurationError):
            WorldRect(0, 0, 0, 1)

    def test_containment(self):
        assert WORLD.contains((0.0, 0.0))
        assert not WORLD.contains((20.0, 0.0), strict=True)
        assert WORLD.contains((20.0, 0.0), strict=False)


class TestObserve:
    def test_table1_observer(self):
        frame = LocalFrame(origin=T1I1[0], orientation=1, scale=1.0)
        snap = observe(WORLD, T1I1, 0, frame)
        # offsets by plain subtraction from (6, -3)
        assert snap.others == ((-1.0, 7.0), (-11.0, 14.0), (-9.0, -2.0))
        assert snap.upper == 15.0 - (-3.0)
        assert snap.lower == -15.0 - (-3.0)
        assert snap.left == -20.0 - 6.0
        assert snap.right == 20.0 - 6.0

    def test_single_robot(self):
        frame = LocalFrame(origin=(1.0, 1.0))
        snap = observe(WORLD, [(1.0, 1.0)], 0, frame)
        assert snap.others == ()
        assert snap.n_total == 1

    def test_reversed_orientation_uses_lower_boundary(self):
        frame = LocalFrame(origin=(6.0, -3.0), orientation=-1, scale=1.0)
        snap = observe(WORLD, T1I1, 0, frame)
        # sign-flip oracle: upper boundary seen by a reversed frame is the
        # global lower one
        assert snap.upper == -(WORLD.y_min - (-3.0))
        assert snap.upper >= 0.0 >= snap.lower

    def test_rejects_outside(self):
        frame = LocalFrame(origin=(0.0, 0.0))
        with pytest.raises(ProtocolViolation):
            observe(WORLD, [(0.0, 0.0), (25.0, 0.0)], 0, frame)

    def test_rejects_duplicates(self):
        frame = LocalFrame(origin=(0.0, 0.0))
        with pytest.raises(ProtocolViolation):
            observe(WORLD, [(0.0, 0.0), (0.0, 0.0)], 0, frame)

    def test_rejects_mismatched_origin(self):
        frame = LocalFrame(origin=(1.0, 0.0))
        with pytest.raises(ProtocolViolation):
            observe(WORLD, [(0.0, 0.0)], 0, frame)

    @settings(max_examples=300)
    @given(
        orientation=st.sampled_from([1, -1]),
        scale=st.floats(0.1, 10.0),
        x=st.floats(-19.9, 19.9),
        y=st.floats(-14.9, 14.9),
    )
    def test_boundary_signs(self, orientation, scale, x, y):
        frame = LocalFrame((x, y), orientation, scale)
        snap = observe(WORLD, [(x, y)], 0, frame)
        assert snap.upper >= 0.0 >= snap.lower
        assert snap.left <= 0.0 <= snap.right

    @settings(max_examples=200)
    @given(scale_a=st.floats(0.1, 10.0), scale_b=st.floats(0.1, 10.0))
    def test_ordering_scale_invariance(self, scale_a, scale_b):
        fa = LocalFrame(T1I1[0], 1, scale_a)
        fb = LocalFrame(T1I1[0], 1, scale_b)
        sa = observe(WORLD, T1I1, 0, fa)
        sb = observe(WORLD, T1I1, 0, fb)
        order_a = sorted(range(3), key=lambda i: sa.others[i][1])
        order_b = sorted(range(3), key=lambda i: sb.others[i][1])
        assert order_a == order_b

    def test_snapshot_invariant(self):
        with pytest.raises(ProtocolViolation):
            Snapshot(others=(), upper=-1.0, lower=-2.0, left=-1.0, right=1.0)
