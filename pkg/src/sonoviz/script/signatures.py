"""Builtin and draw-primitive signatures shared by the checker and interpreter.

Argument kinds use the names from values.py; None means "any kind" (the
static checker skips it, the runtime validates dynamically).
"""

from __future__ import annotations

from sonoviz.script.values import (
    KIND_COLOR,
    KIND_LIST,
    KIND_NUMBER,
    KIND_VEC2,
)

HANDLER_ARITIES = {
    "on_sound": 3,  # (classification, frequency, distance)
    "update": 1,  # (dt)
    "draw": 0,
}

# name -> list of accepted (arg kinds, result kind) signatures
BUILTIN_SIGNATURES: dict[str, list[tuple[tuple, str | None]]] = {
    "clamp": [((KIND_NUMBER, KIND_NUMBER, KIND_NUMBER), KIND_NUMBER)],
    "lerp": [
        ((KIND_NUMBER, KIND_NUMBER, KIND_NUMBER), KIND_NUMBER),
        ((KIND_VEC2, KIND_VEC2, KIND_NUMBER), KIND_VEC2),
        ((KIND_COLOR, KIND_COLOR, KIND_NUMBER), KIND_COLOR),
    ],
    "abs": [((KIND_NUMBER,), KIND_NUMBER)],
    "min": [((KIND_NUMBER, KIND_NUMBER), KIND_NUMBER)],
    "max": [((KIND_NUMBER, KIND_NUMBER), KIND_NUMBER)],
    "floor": [((KIND_NUMBER,), KIND_NUMBER)],
    "sin": [((KIND_NUMBER,), KIND_NUMBER)],
    "cos": [((KIND_NUMBER,), KIND_NUMBER)],
    "rgb": [
        ((KIND_NUMBER, KIND_NUMBER, KIND_NUMBER), KIND_COLOR),
        ((KIND_NUMBER, KIND_NUMBER, KIND_NUMBER, KIND_NUMBER), KIND_COLOR),
    ],
    "rgb255": [
        ((KIND_NUMBER, KIND_NUMBER, KIND_NUMBER), KIND_COLOR),
        ((KIND_NUMBER, KIND_NUMBER, KIND_NUMBER, KIND_NUMBER), KIND_COLOR),
    ],
    "vec2": [((KIND_NUMBER, KIND_NUMBER), KIND_VEC2)],
}

BUILTIN_CONSTANTS = {"pi"}

# primitive -> (arg names, arg kinds); names feed diagnostics and docs
DRAW_SIGNATURES: dict[str, tuple[tuple[str, ...], tuple[str, ...]]] = {
    "rect": (
        ("center", "width", "height", "corner_radius", "color"),
        (KIND_VEC2, KIND_NUMBER, KIND_NUMBER, KIND_NUMBER, KIND_COLOR),
    ),
    "disc": (("center", "radius", "color"), (KIND_VEC2, KIND_NUMBER, KIND_COLOR)),
    "ring": (
        ("center", "radius", "thickness", "color"),
        (KIND_VEC2, KIND_NUMBER, KIND_NUMBER, KIND_COLOR),
    ),
    "arc": (
        ("center", "radius", "thickness", "angle_start_rad", "angle_end_rad", "color"),
        (KIND_VEC2, KIND_NUMBER, KIND_NUMBER, KIND_NUMBER, KIND_NUMBER, KIND_COLOR),
    ),
    "line": (
        ("a", "b", "thickness", "color"),
        (KIND_VEC2, KIND_VEC2, KIND_NUMBER, KIND_COLOR),
    ),
    "polyline": (
        ("points", "thickness", "color"),
        (KIND_LIST, KIND_NUMBER, KIND_COLOR),
    ),
    "polygon": (("points", "color"), (KIND_LIST, KIND_COLOR)),
    "triangle": (
        ("a", "b", "c", "color"),
        (KIND_VEC2, KIND_VEC2, KIND_VEC2, KIND_COLOR),
    ),
    "regular_polygon": (
        ("center", "sides", "radius", "rotation_rad", "color"),
        (KIND_VEC2, KIND_NUMBER, KIND_NUMBER, KIND_NUMBER, KIND_COLOR),
    ),
}

# reserved words that cannot name variables, params, or loop variables
RESERVED_NAMES = (
    set(BUILTIN_SIGNATURES) | BUILTIN_CONSTANTS | set(HANDLER_ARITIES) | {"draw"}
)

RECT_LITERAL_SIZE_RANGE = (2.5, 5.0)
