"""Vertex labels: structured names for every vertex a builder creates.

A label is carried around as a single whitespace-free token (the form that
appears in ``.agr`` files).  Builders attach structured info (kind, grid
coordinates) so tests and the region machinery can address vertices without
string surgery.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum
from typing import Optional


class Kind(Enum):
    BLUE = "blue"
    RED = "red"
    GADGET = "gadget"
    SUBDIVIDING = "subdividing"
    THICK_INTERNAL = "thick_internal"
    APEX = "apex"
    PLAIN = "plain"


@dataclass(frozen=True)
class VertexLabel:
    """One vertex name.  ``coords`` is ``(a, b)`` or ``((i, j), (a, b))``."""

    kind: Kind
    coords: Optional[tuple] = None
    tag: str = ""

    def token(self) -> str:
        return self.tag

    def __str__(self) -> str:  # pragma: no cover - convenience
        return self.tag


_GRID = re.compile(r"^([bruv])\((-?\d+),(-?\d+)\)$")
_RED_ID = re.compile(r"^r'?\(x\d+\)$")
_TILE = re.compile(r"^([uv]'?)(?:\((-?\d+),(-?\d+)\))?@\((-?\d+),(-?\d+)\)$")
_INTERNAL = re.compile(r"^i:")
_SUB = re.compile(r"^sub:")


def blue(a: int, b: int) -> VertexLabel:
    return VertexLabel(Kind.BLUE, (a, b), f"b({a},{b})")


def red(a: int, b: int) -> VertexLabel:
    return VertexLabel(Kind.RED, (a, b), f"r({a},{b})")


def red_var(i: int, primed: bool = False) -> VertexLabel:
    return VertexLabel(Kind.RED, None, f"r'(x{i})" if primed else f"r(x{i})")


def gadget_u(a: int, b: int) -> VertexLabel:
    """Blue tiling-grid vertex at global coordinates (a, b)."""
    return VertexLabel(Kind.BLUE, (a, b), f"u({a},{b})")


def gadget_v(p: int, q: int) -> VertexLabel:
    """Red overlay-lattice vertex at global coordinates (p, q)."""
    return VertexLabel(Kind.RED, (p, q), f"v({p},{q})")


def spider(i: int, j: int, primed: bool = False) -> VertexLabel:
    tag = f"v'@({i},{j})" if primed else f"v@({i},{j})"
    return VertexLabel(Kind.GADGET, (i, j), tag)


def pendant_anchor(name: str) -> VertexLabel:
    return VertexLabel(Kind.RED, None, name)


def internal(u_tag: str, v_tag: str, strand: int, pos: int) -> VertexLabel:
    """Interior degree-2 vertex ``pos`` of strand ``strand`` of edge u-v."""
    return VertexLabel(Kind.THICK_INTERNAL, None, f"i:{u_tag}-{v_tag}:{strand}:{pos}")


def subdividing(u_tag: str, v_tag: str, index: int) -> VertexLabel:
    return VertexLabel(Kind.SUBDIVIDING, None, f"sub:{u_tag}-{v_tag}:{index}")


def apex() -> VertexLabel:
    return VertexLabel(Kind.APEX, None, "apex")


def parse(token: str) -> VertexLabel:
    """Reconstruct a structured label from its token.

    Unknown shapes come back as PLAIN; parse(lbl.token()) == lbl for every
    label produced by the constructors above.
    """
    m = _GRID.match(token)
    if m:
        kind = Kind.BLUE if m.group(1) in ("b", "u") else Kind.RED
        return VertexLabel(kind, (int(m.group(2)), int(m.group(3))), token)
    if _RED_ID.match(token):
        return VertexLabel(Kind.RED, None, token)
    m = _TILE.match(token)
    if m and m.group(1) in ("v", "v'") and m.group(2) is None:
        return VertexLabel(Kind.GADGET, (int(m.group(4)), int(m.group(5))), token)
    if _INTERNAL.match(token):
        return VertexLabel(Kind.THICK_INTERNAL, None, token)
    if _SUB.match(token):
        return VertexLabel(Kind.SUBDIVIDING, None, token)
    if token == "apex":
        return VertexLabel(Kind.APEX, None, token)
    if re.match(r"^[abcd]'?\d+$", token):
        return VertexLabel(Kind.RED, None, token)
    return VertexLabel(Kind.PLAIN, None, token)
