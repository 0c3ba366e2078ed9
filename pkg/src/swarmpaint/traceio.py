"""Trace persistence: JSON lines with byte-stable formatting.

One record per line with fixed field order (time, robot_id, kind,
payload).  Floats are printed with 9 significant digits, payload keys are
sorted, and records are sorted by (time, robot_id), so serializing the
same trace twice yields identical bytes.  The first line is a ``Meta``
record carrying the run configuration and the last an ``End`` record with
completion data, which lets a file round-trip back into a full
:class:`~swarmpaint.engine.Trace` (motion polylines are rebuilt from the
position-bearing events).
"""

from __future__ import annotations

import hashlib
import json
from pathlib import Path

from .engine import _POSITION_KINDS, SimEvent, Trace

META = "Meta"
END = "End"


def _fmt(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return "%.9g" % v
    if isinstance(v, int):
        return str(v)
    if isinstance(v, str):
        return json.dumps(v)
    if isinstance(v, (list, tuple)):
        return "[" + ", ".join(_fmt(x) for x in v) + "]"
    if isinstance(v, dict):
        items = (f"{json.dumps(str(k))}: {_fmt(val)}" for k, val in sorted(v.items()))
        return "{" + ", ".join(items) + "}"
    raise TypeError(f"cannot serialize {type(v)!r} into a trace")


def _record(time: float, robot_id: int, kind: str, payload: dict) -> str:
    return (
        f'{{"time": {_fmt(float(time))}, "robot_id": {robot_id}, '
        f'"kind": {json.dumps(kind)}, "payload": {_fmt(payload)}}}'
    )


def dumps_trace(trace: Trace) -> str:
    lines = [_record(0.0, -1, META, trace.config)]
    lines.extend(_record(e.time, e.robot_id, e.kind, e.payload) for e in trace.events)
    lines.append(
        _record(
            trace.completion_time,
            -1,
            END,
            {
                "completion_time": trace.completion_time,
                "watchdog_bound": trace.watchdog_bound,
                "final_positions": [list(p) for p in trace.final_positions],
            },
        )
    )
    return "\n".join(lines) + "\n"


def write_trace(trace: Trace, path: str | Path) -> Path:
    path = Path(path)
    path.write_text(dumps_trace(trace))
    return path


def trace_hash(trace: Trace) -> str:
    return hashlib.sha256(dumps_trace(trace).encode()).hexdigest()


def build_paths(
    config: dict, events: list[SimEvent], completion_time: float
) -> list[list[tuple[float, float, float]]]:
    """Rebuild per-robot motion polylines from position-bearing events."""
    n = len(config["robots"])
    paths = [[(0.0, r["x"], r["y"])] for r in config["robots"]]
    for e in events:
        if e.kind in _POSITION_KINDS:
            paths[e.robot_id].append((e.time, e.payload["x"], e.payload["y"]))
    for path in paths:
        t, x, y = path[-1]
        if t < completion_time:
            path.append((completion_time, x, y))
    return paths


def read_trace(path: str | Path) -> Trace:
    config = None
    end = None
    events: list[SimEvent] = []
    for lineno, line in enumerate(Path(path).read_text().splitlines(), start=1):
        if not line.strip():
            continue
        try:
            rec = json.loads(line)
        except json.JSONDecodeError as exc:
            raise ValueError(f"{path}:{lineno}: bad trace record: {exc}") from exc
        kind = rec["kind"]
        if kind == META:
            config = rec["payload"]
        elif kind == END:
            end = rec["payload"]
        else:
            events.append(SimEvent(rec["time"], rec["robot_id"], kind, rec["payload"]))
    if config is None or end is None:
        raise ValueError(f"{path}: trace file lacks Meta/End records")
    completion = end["completion_time"]
    return Trace(
        config=config,
        events=events,
        final_positions=[tuple(p) for p in end["final_positions"]],
        paths=build_paths(config, events, completion),
        completion_time=completion,
        watchdog_bound=end["watchdog_bound"],
    )
