"""Brute-force oracles, raster coverage, and the exhaustive scheduler."""

import random

import pytest

from swarmpaint.engine import ScheduleConfig, run
from swarmpaint.errors import ConfigurationError, LivenessError
from swarmpaint.geometry import WorldRect
from swarmpaint.protocol import Strip, generate_paint_path
from swarmpaint.scenario import load_bundled, run_scenario
from swarmpaint.verify import (
    brute_force_assignment,
    check_assignment_agreement,
    exhaustive_schedule_check,
    expected_paint_length,
    globalized_assignment,
    nominal_paint_time,
    nominal_sweep_length,
    run_all_checks,
    sample_min_distance,
    verify_coverage,
)

WORLD = WorldRect(-20.0, 20.0, -15.0, 15.0)
T1I1 = [(6.0, -3.0), (5.0, 4.0), (-5.0, 11.0), (-3.0, -5.0)]
QUIET = ScheduleConfig(seed=0, sleep_probability=0.0, s_max=0.0)


class TestBruteForce:
    def test_table1_ranks_and_strips(self):
        out = brute_force_assignment(T1I1, WORLD)
        assert [rank for rank, _ in out] == [2, 3, 4, 1]
        for _, (x0, x1, lo, hi) in out:
            assert (x0, x1) == (-20.0, 20.0)
            assert hi - lo == pytest.approx(7.5)
        assert out[3][1] == (-20.0, 20.0, -15.0, -7.5)

    def test_y_tie_resolved_by_x(self):
        positions = [(12.0, -11.0), (0.0, -11.0), (3.0, 4.0)]
        out = brute_force_assignment(positions, WORLD)
        assert [rank for rank, _ in out] == [2, 1, 3]

    def test_distinct_required(self):
        with pytest.raises(ConfigurationError):
            brute_force_assignment([(0.0, 0.0), (0.0, 0.0)], WORLD)

    def test_oracle_agreement_campaign(self):
        rng = random.Random(2024)
        for _ in range(1000):
            n = rng.randint(1, 8)
            positions = []
            while len(positions) < n:
                p = (rng.uniform(-19, 19), rng.uniform(-14, 14))
                if p not in positions:
                    positions.append(p)
            orientations = [rng.choice((1, -1)) for _ in range(n)]
            scales = [10 ** rng.uniform(-1, 1) for _ in range(n)]
            expected = brute_force_assignment(positions, WORLD)
            got = globalized_assignment(WORLD, positions, orientations, scales)
            for (rank_e, rect_e), (rank_g, rect_g) in zip(expected, got):
                assert rank_e == rank_g
                for a, b in zip(rect_e, rect_g):
                    assert abs(a - b) <= 1e-9


class TestPaintLengthOracle:
    def test_matches_generated_path(self):
        # dual route: arithmetic oracle vs the waypoint generator, plus the
        # engine's eta-long approach leg
        for n in (1, 2, 4, 5, 6, 8):
            for eta in (0.4, 0.625, 0.75):
                h = WORLD.breadth / n
                strip = Strip(1, 0.0, h, WORLD.x_min, WORLD.x_max)
                path = generate_paint_path(strip, eta)
                assert path.length + eta == pytest.approx(
                    expected_paint_length(WORLD, n, eta)
                )

    def test_nominals(self):
        assert nominal_paint_time(WORLD, 4, 1.0) == pytest.approx(300.0)
        assert nominal_paint_time(WORLD, 6, 1.0) == pytest.approx(200.0)
        assert nominal_paint_time(WORLD, 8, 1.0) == pytest.approx(150.0)
        assert nominal_sweep_length(WORLD, 4, 0.75) == pytest.approx(200.0)


class TestCoverage:
    def test_successful_run_complete(self):
        trace = run_scenario(load_bundled("table2_instance4"), seed=6)
        cov = verify_coverage(trace)
        assert cov["complete"]
        assert cov["uncovered_cells"] == 0
        assert cov["interior_overlap_cells"] == 0
        # abutting brushes may share only boundary-adjacent cells
        assert cov["cross_strip_overlap_area"] <= 6 * 2 * 2 * cov["cell_size"] * 40.0

    def test_truncated_trace_incomplete(self):
        with pytest.raises(LivenessError) as exc:
            run_scenario(load_bundled("table1_instance1"), seed=1, watchdog_factor=0.05)
        cov = verify_coverage(exc.value.trace)
        assert not cov["complete"]
        assert cov["uncovered_cells"] == cov["total_cells"]

    def test_single_robot_half_breadth_brush(self):
        trace = run(WORLD, [((3.0, 2.0), 1, 1.0)], QUIET, eta=15.0, eps=1.0)
        cov = verify_coverage(trace)
        assert cov["complete"]
        assert cov["cross_strip_overlap_area"] == 0.0


class TestReport:
    def test_all_checks_pass_on_good_run(self):
        trace = run_scenario(load_bundled("table3_instance3"), seed=2)
        report = run_all_checks(trace)
        assert report["passed"]
        assert set(report["checks"]) == {
            "no_crossing",
            "collision_spacing",
            "exact_coincidence",
            "atomic_painting",
            "bounded_sleep",
            "liveness",
            "coverage",
            "assignment_agreement",
            "paint_geometry",
        }

    def test_min_distance_threshold(self):
        trace = run_scenario(load_bundled("table1_instance4"), seed=8)
        spacing = sample_min_distance(trace)
        assert spacing["min_distance"] >= min(0.1875, 1.5) / 2
        assert spacing["pair"] is not None

    def test_agreement_check_runs_on_trace(self):
        trace = run_scenario(load_bundled("table2_instance2"), seed=1)
        assert check_assignment_agreement(trace) == []


class TestExhaustive:
    def test_two_robots_no_violations(self):
        robots = [((-5.0, 10.0), 1, 1.0), ((5.0, -10.0), -1, 1.0)]
        report = exhaustive_schedule_check(WORLD, robots, eta=0.75, eps=0.1875, depth=14)
        assert report["violations"] == []
        assert not report["partial"]
        assert report["completed_runs"] >= 1

    def test_initial_tie_exactly_one_mover(self):
        robots = [((-5.0, 10.0), 1, 1.0), ((5.0, 10.0), 1, 1.0)]
        report = exhaustive_schedule_check(WORLD, robots, eta=0.75, eps=0.1875, depth=16)
        assert report["violations"] == []
        assert len(report["initial_tie_movers"]) == 1
        for movers in report["tie_movers"].values():
            assert len(movers) == 1

    def test_single_robot_trivial(self):
        report = exhaustive_schedule_check(
            WORLD, [((0.0, 0.0), 1, 1.0)], eta=0.75, eps=0.1875, depth=6
        )
        assert report["violations"] == []
        assert report["completed_runs"] == 1

    def test_depth_cap_flags_partial(self):
        robots = [((-5.0, 10.0), 1, 1.0), ((5.0, -10.0), -1, 1.0)]
        report = exhaustive_schedule_check(WORLD, robots, eta=0.75, eps=0.1875, depth=1)
        assert report["partial"]

    def test_three_robot_micro(self):
        robots = [((-5.0, 8.0), 1, 1.0), ((5.0, -2.0), -1, 1.0), ((0.0, -9.0), 1, 1.0)]
        report = exhaustive_schedule_check(WORLD, robots, eta=2.0, eps=0.5, depth=20)
        assert report["violations"] == []
        assert not report["partial"]

    def test_size_limit(self):
        robots = [((float(i), float(i)), 1, 1.0) for i in range(4)]
        with pytest.raises(ConfigurationError):
            exhaustive_schedule_check(WORLD, robots, eta=0.75, eps=0.1875)
