"""Runtime value kinds and the immediate-mode shape command vocabulary.

Scripts manipulate six value kinds: number (float), boolean, string,
color, vec2, and list.  All are immutable, so snapshotting a variable
store is a shallow copy.  Draw handlers emit ShapeCommand values; every
command is pure data with z fixed at 0.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Union


class Vec2(NamedTuple):
    x: float
    y: float


class Color(NamedTuple):
    """RGBA with each component clamped into [0, 1]."""

    r: float
    g: float
    b: float
    a: float = 1.0

    @staticmethod
    def clamped(r: float, g: float, b: float, a: float = 1.0) -> "Color":
        clamp = lambda v: min(1.0, max(0.0, float(v)))
        return Color(clamp(r), clamp(g), clamp(b), clamp(a))


Value = Union[float, bool, str, Color, Vec2, tuple]

KIND_NUMBER = "number"
KIND_BOOL = "bool"
KIND_STRING = "string"
KIND_COLOR = "color"
KIND_VEC2 = "vec2"
KIND_LIST = "list"


def kind_of(value: Value) -> str:
    if value is True or value is False:
        return KIND_BOOL
    if isinstance(value, float):
        return KIND_NUMBER
    if isinstance(value, str):
        return KIND_STRING
    if isinstance(value, Color):
        return KIND_COLOR
    if isinstance(value, Vec2):
        return KIND_VEC2
    if isinstance(value, tuple):
        return KIND_LIST
    raise TypeError(f"not a script value: {value!r}")


@dataclass(frozen=True)
class Rect:
    center: Vec2
    width: float
    height: float
    corner_radius: float
    color: Color


@dataclass(frozen=True)
class Disc:
    center: Vec2
    radius: float
    color: Color


@dataclass(frozen=True)
class Ring:
    center: Vec2
    radius: float
    thickness: float
    color: Color


@dataclass(frozen=True)
class Arc:
    center: Vec2
    radius: float
    thickness: float
    angle_start_rad: float
    angle_end_rad: float
    color: Color


@dataclass(frozen=True)
class Line:
    a: Vec2
    b: Vec2
    thickness: float
    color: Color


@dataclass(frozen=True)
class Polyline:
    points: tuple[Vec2, ...]
    thickness: float
    color: Color


@dataclass(frozen=True)
class Polygon:
    points: tuple[Vec2, ...]
    color: Color


@dataclass(frozen=True)
class Triangle:
    a: Vec2
    b: Vec2
    c: Vec2
    color: Color


@dataclass(frozen=True)
class RegularPolygon:
    center: Vec2
    sides: int
    radius: float
    rotation_rad: float
    color: Color


ShapeCommand = Union[
    Rect, Disc, Ring, Arc, Line, Polyline, Polygon, Triangle, RegularPolygon
]
