"""Vertices, arcs, cycles and resolvable decompositions of K*_{2m}.

The vertex set is X ∪ Y with X = {x_0..x_{m-1}} and Y = {y_0..y_{m-1}}.
All index arithmetic is mod m.
"""
from __future__ import annotations

import enum
import json
import re
from dataclasses import dataclass
from typing import Iterable, Iterator, NamedTuple, Sequence

X = "X"
Y = "Y"


class ParseError(ValueError):
    """Raised for malformed decomposition documents."""


@dataclass(frozen=True)
class Modulus:
    m: int

    def __post_init__(self):
        if not isinstance(self.m, int) or self.m % 2 == 0:
            raise ValueError(f"m must be odd (got {self.m})")
        if self.m < 5:
            raise ValueError(f"m must be at least 5 (got {self.m})")

    @property
    def k(self) -> int:
        return (self.m - 1) // 2


class Vertex(NamedTuple):
    side: str
    index: int

    def __str__(self):
        return f"{self.side.lower()}{self.index}"

    def __repr__(self):
        return str(self)


def x(i: int, m: int) -> Vertex:
    return Vertex(X, i % m)


def y(i: int, m: int) -> Vertex:
    return Vertex(Y, i % m)


class Arc(NamedTuple):
    tail: Vertex
    head: Vertex


class Family(enum.Enum):
    PURE_LEFT = "pure_left"
    PURE_RIGHT = "pure_right"
    MIXED_XY = "mixed_xy"
    MIXED_YX = "mixed_yx"


class DifferenceClass(NamedTuple):
    family: Family
    d: int


_FAMILY = {
    (X, X): Family.PURE_LEFT,
    (Y, Y): Family.PURE_RIGHT,
    (X, Y): Family.MIXED_XY,
    (Y, X): Family.MIXED_YX,
}


def arc_difference(a: Arc, m: int) -> DifferenceClass:
    """Difference class of an arc: family from the side pattern, d = head - tail mod m."""
    tail, head = a
    return DifferenceClass(_FAMILY[tail.side, head.side], (head.index - tail.index) % m)


def all_vertices(m: int) -> list[Vertex]:
    return [Vertex(X, i) for i in range(m)] + [Vertex(Y, i) for i in range(m)]


def complete_arcs(m: int) -> list[Arc]:
    """Every arc of K*_{2m}, sorted."""
    vs = all_vertices(m)
    return [Arc(u, v) for u in vs for v in vs if u != v]


@dataclass(frozen=True)
class DirectedPath:
    vertices: tuple

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(self.vertices))
        if len(self.vertices) < 2:
            raise ValueError("a path needs at least one arc")
        if len(set(self.vertices)) != len(self.vertices):
            raise ValueError(f"repeated vertex in path {self.vertices}")

    @property
    def source(self):
        return self.vertices[0]

    @property
    def target(self):
        return self.vertices[-1]

    @property
    def length(self) -> int:
        return len(self.vertices) - 1

    def arcs(self) -> list[Arc]:
        vs = self.vertices
        return [Arc(vs[i], vs[i + 1]) for i in range(len(vs) - 1)]


@dataclass(frozen=True)
class DirectedCycle:
    """A directed cycle; the closing arc from the last vertex to the first is implied."""

    vertices: tuple

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(self.vertices))
        if len(self.vertices) < 2:
            raise ValueError("a cycle needs at least two vertices")
        if len(set(self.vertices)) != len(self.vertices):
            raise ValueError(f"repeated vertex in cycle {self.vertices}")

    def __len__(self):
        return len(self.vertices)

    def __iter__(self) -> Iterator:
        return iter(self.vertices)

    def arcs(self) -> list[Arc]:
        vs = self.vertices
        n = len(vs)
        return [Arc(vs[i], vs[(i + 1) % n]) for i in range(n)]

    def __str__(self):
        return "".join(str(v) for v in self.vertices)


def canonical_cycle(c: DirectedCycle) -> DirectedCycle:
    """Rotate so the cycle starts at its least vertex (X before Y, then index)."""
    vs = c.vertices
    i = vs.index(min(vs))
    if i == 0:
        return c
    return DirectedCycle(vs[i:] + vs[:i])


def join(*pieces: Sequence) -> DirectedCycle:
    """Concatenate path pieces that share endpoints into a closed cycle.

    Each piece is a vertex sequence; consecutive pieces either share their
    boundary vertex (``P_1 ... Q_1`` style) or are linked by the arc between
    them (``P_1 y_a y_b`` style). The final vertex may repeat the first.
    """
    out: list = []
    for piece in pieces:
        piece = list(piece)
        if out and piece and out[-1] == piece[0]:
            piece = piece[1:]
        out.extend(piece)
    if len(out) > 1 and out[-1] == out[0]:
        out.pop()
    return DirectedCycle(out)


ResolutionClass = tuple  # tuple[DirectedCycle, ...]


@dataclass(frozen=True)
class Decomposition:
    m: int
    classes: tuple

    def __post_init__(self):
        object.__setattr__(
            self, "classes", tuple(tuple(cls) for cls in self.classes)
        )

    def canonical(self) -> "Decomposition":
        classes = tuple(
            tuple(sorted((canonical_cycle(c) for c in cls), key=lambda c: c.vertices))
            for cls in self.classes
        )
        return Decomposition(self.m, classes)

    def arcs(self) -> Iterator[Arc]:
        for cls in self.classes:
            for c in cls:
                yield from c.arcs()

    def __len__(self):
        return len(self.classes)


def is_resolution_class(cycles: Iterable[DirectedCycle], m: int) -> bool:
    seen = [v for c in cycles for v in c.vertices]
    return len(seen) == 2 * m and set(seen) == set(all_vertices(m))


# -- serialization ----------------------------------------------------------

_TOKEN = re.compile(r"^([xy])(\d+)$")


def parse_vertex(token: str, m: int) -> Vertex:
    match = _TOKEN.match(token) if isinstance(token, str) else None
    if not match:
        raise ParseError(f"malformed vertex token {token!r}")
    index = int(match.group(2))
    if index >= m:
        raise ParseError(f"vertex {token!r}: index out of range for m={m}")
    return Vertex(match.group(1).upper(), index)


def to_document(d: Decomposition) -> dict:
    d = d.canonical()
    return {
        "m": d.m,
        "classes": [[[str(v) for v in c.vertices] for c in cls] for cls in d.classes],
    }


def serialize(d: Decomposition) -> bytes:
    doc = to_document(d)
    lines = ['{', f'  "m": {doc["m"]},', '  "classes": [']
    for i, cls in enumerate(doc["classes"]):
        comma = "," if i < len(doc["classes"]) - 1 else ""
        lines.append("    " + json.dumps(cls) + comma)
    lines += ["  ]", "}", ""]
    return "\n".join(lines).encode()


def from_document(doc, expected_m: int | None = None) -> Decomposition:
    if not isinstance(doc, dict):
        raise ParseError("document must be an object with fields m and classes")
    m = doc.get("m")
    if not isinstance(m, int) or isinstance(m, bool) or m < 2:
        raise ParseError(f"bad m: {m!r}")
    if expected_m is not None and m != expected_m:
        raise ParseError(f"wrong m: expected {expected_m}, got {m}")
    classes = doc.get("classes")
    if not isinstance(classes, list):
        raise ParseError("missing classes array")
    if not classes:
        raise ParseError("no classes")
    out = []
    for ci, cls in enumerate(classes):
        if not isinstance(cls, list) or not cls:
            raise ParseError(f"class {ci}: must be a non-empty array of cycles")
        cycles = []
        for cj, cyc in enumerate(cls):
            if not isinstance(cyc, list):
                raise ParseError(f"class {ci} cycle {cj}: must be an array of vertex tokens")
            vs = [parse_vertex(t, m) for t in cyc]
            if len(set(vs)) != len(vs):
                raise ParseError(f"class {ci} cycle {cj}: repeated vertex")
            if len(vs) < 2:
                raise ParseError(f"class {ci} cycle {cj}: too short")
            cycles.append(DirectedCycle(vs))
        out.append(tuple(cycles))
    return Decomposition(m, tuple(out)).canonical()


def parse(data: bytes | str, expected_m: int | None = None) -> Decomposition:
    if isinstance(data, bytes):
        data = data.decode()
    if not data.strip():
        raise ParseError("empty document")
    try:
        doc = json.loads(data)
    except json.JSONDecodeError as exc:
        raise ParseError(f"not valid JSON: {exc}") from exc
    return from_document(doc, expected_m)
