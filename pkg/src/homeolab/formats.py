"""JSON text formats for maps, lifts and operators.

Maps and lifts share one shape::

    {"kind": "interval" | "lift", "breakpoints": [["p/q", "p/q"], ...]}

Rationals are decimal-free strings; emission always writes the reduced
``p/q`` form and sorted keys, so equal maps give equal bytes.
"""
from __future__ import annotations

import json
from typing import Any, Union

from .circle_dynamics import CircleLift
from .pl_core import DomainError, MalformedMapError, PLMap
from .rational import fmt, rat

MapLike = Union[PLMap, CircleLift]


def dumps(obj: Any) -> str:
    """Deterministic JSON: sorted keys, no trailing whitespace."""
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def emit_map_obj(f: MapLike) -> dict:
    kind = "lift" if isinstance(f, CircleLift) else "interval"
    return {"kind": kind, "breakpoints": [[fmt(x), fmt(y)] for x, y in zip(f.xs, f.ys)]}


def emit_map(f: MapLike) -> str:
    return dumps(emit_map_obj(f))


def _rat_field(v: Any, where: str):
    if isinstance(v, bool) or not isinstance(v, (str, int)):
        raise MalformedMapError(f"{where}: expected a 'p/q' string, got {v!r}")
    try:
        return rat(v)
    except (ValueError, ZeroDivisionError) as exc:
        raise MalformedMapError(f"{where}: {exc}") from None


def map_from_obj(obj: Any, expect: str | None = None) -> MapLike:
    if not isinstance(obj, dict):
        raise MalformedMapError("map payload must be a JSON object")
    kind = obj.get("kind")
    if kind not in ("interval", "lift"):
        raise MalformedMapError(f"kind must be 'interval' or 'lift', got {kind!r}")
    if expect is not None and kind != expect:
        raise MalformedMapError(f"expected a map of kind {expect!r}, got {kind!r}")
    bps = obj.get("breakpoints")
    if not isinstance(bps, list):
        raise MalformedMapError("breakpoints must be a list")
    xs, ys = [], []
    for i, pair in enumerate(bps):
        if not isinstance(pair, list) or len(pair) != 2:
            raise MalformedMapError(f"breakpoint {i} must be a pair")
        xs.append(_rat_field(pair[0], f"breakpoint {i} x"))
        ys.append(_rat_field(pair[1], f"breakpoint {i} y"))
    if kind == "interval":
        return PLMap(xs, ys)
    lift = CircleLift(xs, ys)
    if not lift.is_normalized:
        raise DomainError(f"lift must have y_0 in [0, 1), got {lift.ys[0]}")
    return lift


def parse_map(text: str, expect: str | None = None) -> MapLike:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedMapError(f"invalid JSON: {exc}") from None
    return map_from_obj(obj, expect)
