"""Scenario files: schema, validation, bundled library, random generation.

A scenario is a JSON document:

    {
      "name": "table1_instance1",
      "world": {"x_min": -20, "x_max": 20, "y_min": -15, "y_max": 15},
      "robots": [{"x": 6, "y": -3, "orientation": "P", "scale": 1.0}, ...],
      "params": {"eta": 0.75, "eps": 0.1875},
      "schedule": {"seed": 0, "cycle_length_range": [0.2, 1.0],
                   "sleep_probability": 0.1, "s_max": 2.0,
                   "velocity": 1.0, "time_step": 0.05}
    }

Orientation letters P/N map to +1/-1.  Unknown fields are rejected;
missing params/schedule entries fall back to defaults (eps defaults to
eta/4).  Every simulator precondition is checked at load time with a
message naming the violated constraint.
"""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass, replace
from importlib import resources
from pathlib import Path

from .engine import ScheduleConfig, Trace, run
from .errors import ConfigurationError, StripTooThinError
from .geometry import WorldRect

_TOP_KEYS = {"name", "world", "robots", "params", "schedule"}
_WORLD_KEYS = {"x_min", "x_max", "y_min", "y_max"}
_ROBOT_KEYS = {"x", "y", "orientation", "scale"}
_PARAM_KEYS = {"eta", "eps"}
_SCHED_KEYS = {
    "seed",
    "cycle_length_range",
    "sleep_probability",
    "s_max",
    "velocity",
    "time_step",
}

DEFAULT_ETA = 0.75


@dataclass(frozen=True)
class RobotSpec:
    x: float
    y: float
    orientation: int  # +1 or -1
    scale: float = 1.0

    @property
    def letter(self) -> str:
        return "P" if self.orientation == 1 else "N"


@dataclass(frozen=True)
class Scenario:
    name: str
    world: WorldRect
    robots: tuple[RobotSpec, ...]
    eta: float
    eps: float
    schedule: ScheduleConfig

    @property
    def n(self) -> int:
        return len(self.robots)


def _reject_unknown(d: dict, allowed: set, where: str):
    unknown = set(d) - allowed
    if unknown:
        raise ConfigurationError(f"unknown field(s) {sorted(unknown)} in {where}")


def scenario_from_dict(data: dict) -> Scenario:
    if not isinstance(data, dict):
        raise ConfigurationError("scenario document must be a JSON object")
    _reject_unknown(data, _TOP_KEYS, "scenario")
    for key in ("name", "world", "robots"):
        if key not in data:
            raise ConfigurationError(f"scenario is missing required field '{key}'")

    wd = data["world"]
    _reject_unknown(wd, _WORLD_KEYS, "world")
    world = WorldRect(**{k: float(wd[k]) for k in _WORLD_KEYS})

    robots = []
    for i, rd in enumerate(data["robots"]):
        _reject_unknown(rd, _ROBOT_KEYS, f"robots[{i}]")
        raw = rd.get("orientation", "P")
        if raw in ("P", 1, +1):
            orientation = 1
        elif raw in ("N", -1):
            orientation = -1
        else:
            raise ConfigurationError(
                f"robots[{i}].orientation must be 'P' or 'N', got {raw!r}"
            )
        scale = float(rd.get("scale", 1.0))
        if scale <= 0:
            raise ConfigurationError(f"robots[{i}].scale must be positive")
        robots.append(RobotSpec(float(rd["x"]), float(rd["y"]), orientation, scale))
    if not robots:
        raise ConfigurationError("scenario needs at least one robot")

    params = data.get("params", {})
    _reject_unknown(params, _PARAM_KEYS, "params")
    eta = float(params.get("eta", DEFAULT_ETA))
    eps = float(params.get("eps", eta / 4.0))

    sched_dict = dict(data.get("schedule", {}))
    _reject_unknown(sched_dict, _SCHED_KEYS, "schedule")
    if "cycle_length_range" in sched_dict:
        sched_dict["cycle_length_range"] = tuple(sched_dict["cycle_length_range"])
    schedule = ScheduleConfig(**sched_dict)

    scenario = Scenario(
        name=str(data["name"]),
        world=world,
        robots=tuple(robots),
        eta=eta,
        eps=eps,
        schedule=schedule,
    )
    validate_scenario(scenario)
    return scenario


def validate_scenario(sc: Scenario) -> None:
    if sc.eta <= 0 or sc.eps <= 0:
        raise ConfigurationError(f"eta and eps must be positive (eta={sc.eta}, eps={sc.eps})")
    if not sc.eps < 2 * sc.eta:
        raise ConfigurationError(f"eps={sc.eps} must be smaller than 2*eta={2 * sc.eta}")
    if sc.n * 2 * sc.eta > sc.world.breadth + 1e-9:
        raise StripTooThinError(
            f"strip too thin: {sc.n} robots with brush width 2*eta={2 * sc.eta:.6g} "
            f"need N*2*eta <= breadth={sc.world.breadth:.6g}"
        )
    seen = set()
    for i, r in enumerate(sc.robots):
        if not sc.world.contains((r.x, r.y), strict=True):
            raise ConfigurationError(
                f"robots[{i}] at ({r.x}, {r.y}) must lie strictly inside the world"
            )
        if (r.x, r.y) in seen:
            raise ConfigurationError(f"duplicate position ({r.x}, {r.y}) in robots[{i}]")
        seen.add((r.x, r.y))


def scenario_to_dict(sc: Scenario) -> dict:
    return {
        "name": sc.name,
        "world": {
            "x_min": sc.world.x_min,
            "x_max": sc.world.x_max,
            "y_min": sc.world.y_min,
            "y_max": sc.world.y_max,
        },
        "robots": [
            {"x": r.x, "y": r.y, "orientation": r.letter, "scale": r.scale}
            for r in sc.robots
        ],
        "params": {"eta": sc.eta, "eps": sc.eps},
        "schedule": sc.schedule.to_dict(),
    }


def load_scenario(path: str | Path) -> Scenario:
    path = Path(path)
    try:
        data = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise ConfigurationError(
            f"{path}:{exc.lineno}:{exc.colno}: not valid JSON: {exc.msg}"
        ) from exc
    try:
        return scenario_from_dict(data)
    except ConfigurationError as exc:
        raise type(exc)(f"{path}: {exc}") from exc


def save_scenario(sc: Scenario, path: str | Path) -> Path:
    path = Path(path)
    path.write_text(json.dumps(scenario_to_dict(sc), indent=2) + "\n")
    return path


def bundled_names() -> list[str]:
    root = resources.files(__package__) / "scenarios"
    return sorted(p.name.removesuffix(".json") for p in root.iterdir() if p.name.endswith(".json"))


def load_bundled(name: str) -> Scenario:
    ref = resources.files(__package__) / "scenarios" / f"{name}.json"
    if not ref.is_file():
        raise ConfigurationError(
            f"no bundled scenario named {name!r}; available: {', '.join(bundled_names())}"
        )
    return scenario_from_dict(json.loads(ref.read_text()))


def resolve_scenario(ref: str) -> Scenario:
    """Accept either a path to a scenario file or a bundled scenario name."""
    if Path(ref).exists():
        return load_scenario(ref)
    return load_bundled(ref)


def run_scenario(
    sc: Scenario, seed: int | None = None, watchdog_factor: float = 50.0
) -> Trace:
    """Simulate a scenario; ``seed`` overrides the one in the file."""
    schedule = sc.schedule if seed is None else replace(sc.schedule, seed=seed)
    return run(
        sc.world,
        [((r.x, r.y), r.orientation, r.scale) for r in sc.robots],
        schedule,
        eta=sc.eta,
        eps=sc.eps,
        name=sc.name,
        watchdog_factor=watchdog_factor,
    )


def snug_eta(world: WorldRect, n: int, target: float = DEFAULT_ETA) -> float:
    """Largest eta <= target whose lanes tile the strip height exactly.

    A strip of height h takes ceil(h / (2*eta)) lanes; a fractional last
    lane is clamped and sweeps extra distance, which for some (n, eta)
    pushes the sweep well past the idealized area/(2*eta) length.  Snapping
    eta so that 2*eta divides h keeps every configuration within a few
    percent of the ideal.
    """
    h = world.breadth / n
    lanes = math.ceil(h / (2 * target) - 1e-12)
    return h / (2 * lanes)


def random_scenario(
    n: int,
    seed: int,
    *,
    world: WorldRect | None = None,
    eta: float | None = None,
    eps: float | None = None,
    margin: float = 1.0,
    min_separation: float = 1.0,
    schedule: ScheduleConfig | None = None,
    random_scales: bool = True,
    name: str | None = None,
) -> Scenario:
    """Seeded random configuration for batch campaigns.

    Positions keep ``margin`` away from the walls and ``min_separation``
    from each other so the spacing invariant starts satisfiable; scales are
    log-uniform in [0.1, 10] and orientations are coin flips.  When eta is
    not given it is snapped per robot count (see :func:`snug_eta`).
    """
    if world is None:
        world = WorldRect(-20.0, 20.0, -15.0, 15.0)
    if eta is None:
        eta = snug_eta(world, n)
    rng = random.Random(f"scenario:{seed}:{n}")
    positions: list[tuple[float, float]] = []
    while len(positions) < n:
        p = (
            rng.uniform(world.x_min + margin, world.x_max - margin),
            rng.uniform(world.y_min + margin, world.y_max - margin),
        )
        if all((p[0] - q[0]) ** 2 + (p[1] - q[1]) ** 2 >= min_separation**2 for q in positions):
            positions.append(p)
    robots = tuple(
        RobotSpec(
            x=p[0],
            y=p[1],
            orientation=rng.choice((1, -1)),
            scale=10.0 ** rng.uniform(-1.0, 1.0) if random_scales else 1.0,
        )
        for p in positions
    )
    if schedule is None:
        schedule = ScheduleConfig(
            seed=seed, cycle_length_range=(0.1, 0.5), sleep_probability=0.0, s_max=0.0
        )
    sc = Scenario(
        name=name or f"random_n{n}_s{seed}",
        world=world,
        robots=robots,
        eta=eta,
        eps=eps if eps is not None else eta / 4.0,
        schedule=schedule,
    )
    validate_scenario(sc)
    return sc
