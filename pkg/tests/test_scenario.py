"""Scenario schema, validation messages, and the bundled library."""

import json
import math

import pytest

from swarmpaint.errors import ConfigurationError, StripTooThinError
from swarmpaint.scenario import (
    bundled_names,
    load_bundled,
    load_scenario,
    random_scenario,
    save_scenario,
    scenario_from_dict,
    scenario_to_dict,
)


def base_doc(**overrides):
    doc = {
        "name": "test",
        "world": {"x_min": -20.0, "x_max": 20.0, "y_min": -15.0, "y_max": 15.0},
        "robots": [
            {"x": 0.0, "y": 0.0, "orientation": "P", "scale": 1.0},
            {"x": 5.0, "y": 5.0, "orientation": "N", "scale": 1.0},
        ],
        "params": {"eta": 0.75, "eps": 0.1875},
        "schedule": {"seed": 0},
    }
    doc.update(overrides)
    return doc


class TestBundledLibrary:
    def test_twelve_table_instances_plus_extremes(self):
        names = bundled_names()
        tables = [n for n in names if n.startswith("table")]
        assert len(tables) == 12
        assert "tie_line_bottom" in names and "tie_line_middle" in names

    def test_table1_instance1_contents(self):
        sc = load_bundled("table1_instance1")
        assert sc.n == 4
        assert [(r.x, r.y, r.letter) for r in sc.robots] == [
            (6.0, -3.0, "P"),
            (5.0, 4.0, "P"),
            (-5.0, 11.0, "P"),
            (-3.0, -5.0, "P"),
        ]
        assert (sc.world.length, sc.world.breadth) == (40.0, 30.0)

    def test_table_sizes(self):
        for table, n in ((1, 4), (2, 6), (3, 8)):
            for inst in range(1, 5):
                sc = load_bundled(f"table{table}_instance{inst}")
                assert sc.n == n
                assert sc.n * 2 * sc.eta <= sc.world.breadth

    def test_unknown_bundled_name(self):
        with pytest.raises(ConfigurationError, match="available"):
            load_bundled("nope")


class TestValidation:
    def test_duplicate_position(self):
        doc = base_doc()
        doc["robots"][1] = dict(doc["robots"][0])
        with pytest.raises(ConfigurationError, match="duplicate position"):
            scenario_from_dict(doc)

    def test_strip_too_thin(self):
        doc = base_doc(params={"eta": 10.0, "eps": 1.0})
        with pytest.raises(StripTooThinError, match="strip too thin"):
            scenario_from_dict(doc)

    def test_unknown_top_level_field(self):
        with pytest.raises(ConfigurationError, match="unknown field"):
            scenario_from_dict(base_doc(extra=1))

    def test_unknown_nested_field(self):
        doc = base_doc()
        doc["robots"][0]["color"] = "red"
        with pytest.raises(ConfigurationError, match="robots\\[0\\]"):
            scenario_from_dict(doc)

    def test_bad_orientation(self):
        doc = base_doc()
        doc["robots"][0]["orientation"] = "Q"
        with pytest.raises(ConfigurationError, match="orientation"):
            scenario_from_dict(doc)

    def test_outside_world(self):
        doc = base_doc()
        doc["robots"][0]["x"] = 30.0
        with pytest.raises(ConfigurationError, match="strictly inside"):
            scenario_from_dict(doc)

    def test_eps_bound(self):
        doc = base_doc(params={"eta": 0.75, "eps": 2.0})
        with pytest.raises(ConfigurationError, match="2\\*eta"):
            scenario_from_dict(doc)

    def test_defaults_applied(self):
        doc = base_doc()
        del doc["params"], doc["schedule"]
        sc = scenario_from_dict(doc)
        assert sc.eta == 0.75
        assert sc.eps == pytest.approx(0.75 / 4)
        assert sc.schedule.velocity == 1.0

    def test_parse_error_carries_location(self, tmp_path):
        p = tmp_path / "bad.json"
        p.write_text('{"name": "x",\n  "world": }\n')
        with pytest.raises(ConfigurationError, match="bad.json:2"):
            load_scenario(p)

    def test_missing_required_field(self):
        doc = base_doc()
        del doc["world"]
        with pytest.raises(ConfigurationError, match="world"):
            scenario_from_dict(doc)


class TestRoundTrip:
    def test_dict_round_trip(self):
        sc = load_bundled("table2_instance3")
        assert scenario_from_dict(scenario_to_dict(sc)) == sc

    def test_file_round_trip(self, tmp_path):
        sc = load_bundled("table3_instance4")
        path = save_scenario(sc, tmp_path / "sc.json")
        assert load_scenario(path) == sc
        # the file is plain JSON
        json.loads(path.read_text())


class TestRandomScenario:
    def test_separation_and_interior(self):
        sc = random_scenario(8, seed=5)
        pts = [(r.x, r.y) for r in sc.robots]
        for i in range(8):
            assert sc.world.contains(pts[i], strict=True)
            for j in range(i + 1, 8):
                assert math.dist(pts[i], pts[j]) >= 1.0

    def test_reproducible(self):
        assert random_scenario(5, seed=9) == random_scenario(5, seed=9)
        assert random_scenario(5, seed=9) != random_scenario(5, seed=10)
