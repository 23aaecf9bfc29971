"""JSON wire protocol shared by the engine and its UI clients.

One message per WebSocket text frame, canonical JSON (sorted keys, no
extra whitespace).  Decoding is strict both ways: missing required fields
and unknown fields are both protocol errors, so schema drift surfaces
instead of hiding.  The machine-readable schema ships at
docs/wire-schema.json.
"""

from __future__ import annotations

import json
from typing import Optional

from sonoviz.audio.features import SoundFeatures
from sonoviz.script.diagnostics import Diagnostic
from sonoviz.script.values import (
    Arc,
    Color,
    Disc,
    Line,
    Polygon,
    Polyline,
    Rect,
    RegularPolygon,
    Ring,
    Triangle,
    Vec2,
)

PHASES = ("enhance", "generate", "compile", "check", "done", "failed")

SERVER_TYPES = (
    "features",
    "frame",
    "script_list",
    "author_status",
    "diagnostics",
    "protocol_error",
)
CLIENT_TYPES = ("author", "set_draw_ui", "list_scripts")


class ProtocolError(Exception):
    pass


# -- field validators ---------------------------------------------------------


def _is_num(v) -> bool:
    return isinstance(v, (int, float)) and not isinstance(v, bool)


def _need(obj: dict, name: str, what: str):
    if name not in obj:
        raise ProtocolError(f"{what}: missing field '{name}'")
    return obj[name]


def _need_num(obj, name, what) -> float:
    v = _need(obj, name, what)
    if not _is_num(v):
        raise ProtocolError(f"{what}: field '{name}' must be a number")
    return float(v)


def _need_int(obj, name, what) -> int:
    v = _need(obj, name, what)
    if not isinstance(v, int) or isinstance(v, bool):
        raise ProtocolError(f"{what}: field '{name}' must be an integer")
    return v


def _need_str(obj, name, what) -> str:
    v = _need(obj, name, what)
    if not isinstance(v, str):
        raise ProtocolError(f"{what}: field '{name}' must be a string")
    return v


def _need_bool(obj, name, what) -> bool:
    v = _need(obj, name, what)
    if not isinstance(v, bool):
        raise ProtocolError(f"{what}: field '{name}' must be a boolean")
    return v


def _need_list(obj, name, what) -> list:
    v = _need(obj, name, what)
    if not isinstance(v, list):
        raise ProtocolError(f"{what}: field '{name}' must be an array")
    return v


def _no_extras(obj: dict, allowed: set, what: str):
    extras = set(obj) - allowed
    if extras:
        raise ProtocolError(f"{what}: unknown field(s) {sorted(extras)}")


def _pair(v, what) -> list:
    if not (isinstance(v, list) and len(v) == 2 and all(_is_num(c) for c in v)):
        raise ProtocolError(f"{what} must be a [x, y] pair")
    return [float(v[0]), float(v[1])]


def _rgba(v, what) -> list:
    if not (isinstance(v, list) and len(v) == 4 and all(_is_num(c) for c in v)):
        raise ProtocolError(f"{what} must be an [r, g, b, a] quad")
    return [float(c) for c in v]


# -- shape command codec ------------------------------------------------------


def command_to_json(cmd) -> dict:
    if isinstance(cmd, Rect):
        return {
            "kind": "rect",
            "center": [cmd.center.x, cmd.center.y],
            "width": cmd.width,
            "height": cmd.height,
            "corner_radius": cmd.corner_radius,
            "color": list(cmd.color),
        }
    if isinstance(cmd, Disc):
        return {
            "kind": "disc",
            "center": [cmd.center.x, cmd.center.y],
            "radius": cmd.radius,
            "color": list(cmd.color),
        }
    if isinstance(cmd, Ring):
        return {
            "kind": "ring",
            "center": [cmd.center.x, cmd.center.y],
            "radius": cmd.radius,
            "thickness": cmd.thickness,
            "color": list(cmd.color),
        }
    if isinstance(cmd, Arc):
        return {
            "kind": "arc",
            "center": [cmd.center.x, cmd.center.y],
            "radius": cmd.radius,
            "thickness": cmd.thickness,
            "angle_start_rad": cmd.angle_start_rad,
            "angle_end_rad": cmd.angle_end_rad,
            "color": list(cmd.color),
        }
    if isinstance(cmd, Line):
        return {
            "kind": "line",
            "a": [cmd.a.x, cmd.a.y],
            "b": [cmd.b.x, cmd.b.y],
            "thickness": cmd.thickness,
            "color": list(cmd.color),
        }
    if isinstance(cmd, Polyline):
        return {
            "kind": "polyline",
            "points": [[p.x, p.y] for p in cmd.points],
            "thickness": cmd.thickness,
            "color": list(cmd.color),
        }
    if isinstance(cmd, Polygon):
        return {
            "kind": "polygon",
            "points": [[p.x, p.y] for p in cmd.points],
            "color": list(cmd.color),
        }
    if isinstance(cmd, Triangle):
        return {
            "kind": "triangle",
            "a": [cmd.a.x, cmd.a.y],
            "b": [cmd.b.x, cmd.b.y],
            "c": [cmd.c.x, cmd.c.y],
            "color": list(cmd.color),
        }
    if isinstance(cmd, RegularPolygon):
        return {
            "kind": "regular_polygon",
            "center": [cmd.center.x, cmd.center.y],
            "sides": cmd.sides,
            "radius": cmd.radius,
            "rotation_rad": cmd.rotation_rad,
            "color": list(cmd.color),
        }
    raise ProtocolError(f"not a shape command: {cmd!r}")


_COMMAND_FIELDS = {
    "rect": {"kind", "center", "width", "height", "corner_radius", "color"},
    "disc": {"kind", "center", "radius", "color"},
    "ring": {"kind", "center", "radius", "thickness", "color"},
    "arc": {
        "kind",
        "center",
        "radius",
        "thickness",
        "angle_start_rad",
        "angle_end_rad",
        "color",
    },
    "line": {"kind", "a", "b", "thickness", "color"},
    "polyline": {"kind", "points", "thickness", "color"},
    "polygon": {"kind", "points", "color"},
    "triangle": {"kind", "a", "b", "c", "color"},
    "regular_polygon": {"kind", "center", "sides", "radius", "rotation_rad", "color"},
}


def command_from_json(obj: dict):
    if not isinstance(obj, dict):
        raise ProtocolError("shape command must be an object")
    kind = _need_str(obj, "kind", "command")
    if kind not in _COMMAND_FIELDS:
        raise ProtocolError(f"unknown shape command kind {kind!r}")
    what = f"command {kind}"
    _no_extras(obj, _COMMAND_FIELDS[kind], what)
    color = Color(*_rgba(_need(obj, "color", what), f"{what} color"))
    vec = lambda name: Vec2(*_pair(_need(obj, name, what), f"{what} {name}"))
    if kind == "rect":
        return Rect(
            center=vec("center"),
            width=_need_num(obj, "width", what),
            height=_need_num(obj, "height", what),
            corner_radius=_need_num(obj, "corner_radius", what),
            color=color,
        )
    if kind == "disc":
        return Disc(center=vec("center"), radius=_need_num(obj, "radius", what), color=color)
    if kind == "ring":
        return Ring(
            center=vec("center"),
            radius=_need_num(obj, "radius", what),
            thickness=_need_num(obj, "thickness", what),
            color=color,
        )
    if kind == "arc":
        return Arc(
            center=vec("center"),
            radius=_need_num(obj, "radius", what),
            thickness=_need_num(obj, "thickness", what),
            angle_start_rad=_need_num(obj, "angle_start_rad", what),
            angle_end_rad=_need_num(obj, "angle_end_rad", what),
            color=color,
        )
    if kind == "line":
        return Line(
            a=vec("a"), b=vec("b"), thickness=_need_num(obj, "thickness", what), color=color
        )
    if kind == "polyline":
        points = tuple(
            Vec2(*_pair(p, f"{what} point")) for p in _need_list(obj, "points", what)
        )
        return Polyline(points=points, thickness=_need_num(obj, "thickness", what), color=color)
    if kind == "polygon":
        points = tuple(
            Vec2(*_pair(p, f"{what} point")) for p in _need_list(obj, "points", what)
        )
        return Polygon(points=points, color=color)
    if kind == "triangle":
        return Triangle(a=vec("a"), b=vec("b"), c=vec("c"), color=color)
    return RegularPolygon(
        center=vec("center"),
        sides=_need_int(obj, "sides", what),
        radius=_need_num(obj, "radius", what),
        rotation_rad=_need_num(obj, "rotation_rad", what),
        color=color,
    )


# -- diagnostics codec --------------------------------------------------------


def diagnostic_to_json(diagnostic: Diagnostic) -> dict:
    return {
        "severity": diagnostic.severity.value,
        "code": diagnostic.code,
        "line": diagnostic.line,
        "col": diagnostic.col,
        "message": diagnostic.message,
    }


def _validate_diagnostic_item(obj, what: str):
    if not isinstance(obj, dict):
        raise ProtocolError(f"{what}: diagnostic items must be objects")
    _no_extras(obj, {"severity", "code", "line", "col", "message"}, what)
    severity = _need_str(obj, "severity", what)
    if severity not in ("error", "warning"):
        raise ProtocolError(f"{what}: bad severity {severity!r}")
    _need_str(obj, "code", what)
    if _need_int(obj, "line", what) < 1 or _need_int(obj, "col", what) < 1:
        raise ProtocolError(f"{what}: line/col are 1-based")
    _need_str(obj, "message", what)


# -- message validation -------------------------------------------------------


def validate_message(msg) -> dict:
    if not isinstance(msg, dict):
        raise ProtocolError("message must be a JSON object")
    type_ = _need_str(msg, "type", "message")
    what = f"{type_} message"

    if type_ == "features":
        _no_extras(msg, {"type", "seq", "t_ms", "dominant_hz", "norm", "rms"}, what)
        _need_int(msg, "seq", what)
        _need_num(msg, "t_ms", what)
        dominant = _need(msg, "dominant_hz", what)
        if dominant is not None and not _is_num(dominant):
            raise ProtocolError(f"{what}: dominant_hz must be a number or null")
        _need_num(msg, "norm", what)
        _need_num(msg, "rms", what)
    elif type_ == "frame":
        _no_extras(msg, {"type", "frame_seq", "t_ms", "scripts"}, what)
        _need_int(msg, "frame_seq", what)
        _need_num(msg, "t_ms", what)
        for entry in _need_list(msg, "scripts", what):
            if not isinstance(entry, dict):
                raise ProtocolError(f"{what}: script entries must be objects")
            _no_extras(entry, {"title", "commands"}, what)
            _need_str(entry, "title", what)
            for cmd in _need_list(entry, "commands", what):
                command_from_json(cmd)
    elif type_ == "script_list":
        _no_extras(msg, {"type", "records"}, what)
        for record in _need_list(msg, "records", what):
            if not isinstance(record, dict):
                raise ProtocolError(f"{what}: records must be objects")
            _no_extras(record, {"userPrompt", "scriptContent", "drawUI"}, what)
            _need_str(record, "userPrompt", what)
            _need_str(record, "scriptContent", what)
            _need_bool(record, "drawUI", what)
    elif type_ == "author_status":
        _no_extras(msg, {"type", "phase", "detail"}, what)
        phase = _need_str(msg, "phase", what)
        if phase not in PHASES:
            raise ProtocolError(f"{what}: unknown phase {phase!r}")
        _need_str(msg, "detail", what)
    elif type_ == "diagnostics":
        _no_extras(msg, {"type", "title", "items"}, what)
        if "title" in msg and not isinstance(msg["title"], str):
            raise ProtocolError(f"{what}: title must be a string")
        for item in _need_list(msg, "items", what):
            _validate_diagnostic_item(item, what)
    elif type_ == "protocol_error":
        _no_extras(msg, {"type", "detail"}, what)
        _need_str(msg, "detail", what)
    elif type_ == "author":
        _no_extras(msg, {"type", "prompt"}, what)
        if not _need_str(msg, "prompt", what).strip():
            raise ProtocolError(f"{what}: prompt must not be empty")
    elif type_ == "set_draw_ui":
        _no_extras(msg, {"type", "title", "value"}, what)
        _need_str(msg, "title", what)
        _need_bool(msg, "value", what)
    elif type_ == "list_scripts":
        _no_extras(msg, {"type"}, what)
    else:
        raise ProtocolError(f"unknown message type {type_!r}")
    return msg


def encode_message(msg: dict) -> str:
    validate_message(msg)
    return json.dumps(msg, sort_keys=True, separators=(",", ":"), allow_nan=False)


def decode_message(payload: str) -> dict:
    try:
        msg = json.loads(payload)
    except json.JSONDecodeError as exc:
        raise ProtocolError(f"invalid JSON: {exc.msg}") from exc
    return validate_message(msg)


# -- constructors -------------------------------------------------------------


def features_message(features: SoundFeatures) -> dict:
    return {
        "type": "features",
        "seq": int(features.seq),
        "t_ms": float(features.timestamp_ms),
        "dominant_hz": features.dominant_freq_hz,
        "norm": features.normalized,
        "rms": features.rms,
    }


def frame_message(frame_seq: int, t_ms: float, scripts: list[tuple[str, list]]) -> dict:
    return {
        "type": "frame",
        "frame_seq": frame_seq,
        "t_ms": t_ms,
        "scripts": [
            {"title": title, "commands": [command_to_json(c) for c in commands]}
            for title, commands in scripts
        ],
    }


def script_list_message(records) -> dict:
    return {
        "type": "script_list",
        "records": [
            {
                "userPrompt": r.userPrompt,
                "scriptContent": r.scriptContent,
                "drawUI": r.drawUI,
            }
            for r in records
        ],
    }


def author_status_message(phase: str, detail: str = "") -> dict:
    return {"type": "author_status", "phase": phase, "detail": detail}


def diagnostics_message(items, title: Optional[str] = None) -> dict:
    msg = {
        "type": "diagnostics",
        "items": [
            diagnostic_to_json(d) if isinstance(d, Diagnostic) else d for d in items
        ],
    }
    if title is not None:
        msg["title"] = title
    return msg


def protocol_error_message(detail: str) -> dict:
    return {"type": "protocol_error", "detail": detail}


def author_message(prompt: str) -> dict:
    return {"type": "author", "prompt": prompt}


def set_draw_ui_message(title: str, value: bool) -> dict:
    return {"type": "set_draw_ui", "title": title, "value": value}


def list_scripts_message() -> dict:
    return {"type": "list_scripts"}
