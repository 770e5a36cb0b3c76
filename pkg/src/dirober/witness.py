"""Witness and condition-system value types, with the witness document format.

A witness certifies one side of one m: a connection set S, a partition of
the leftover differences into Hamiltonian cells, and a decomposition of the
adjusted circulant C(m; S) - removed + added into directed m-cycles and the
required vertex-disjoint paths.
"""
from __future__ import annotations

import json
from dataclasses import dataclass

from .circulant import DifferencePartition


@dataclass(frozen=True)
class PathReq:
    """A required (source, target)-path whose length is ``const + coef * q``."""

    source: int
    target: int
    const: int
    coef: int = 0

    def length(self, q: int | None = None) -> int:
        if self.coef and q is None:
            raise ValueError("symbolic path length needs a value of q")
        return self.const + self.coef * (q or 0)


@dataclass(frozen=True)
class ConditionSpec:
    m: int
    side: str
    forbidden: frozenset
    required: frozenset
    removed: tuple = ()  # arcs (u, v) on Z_m
    added: tuple = ()
    paths: tuple = ()  # of PathReq
    q_range: tuple = ()  # admissible q when some path length is symbolic

    def __post_init__(self):
        if self.forbidden & self.required:
            raise ValueError("a difference cannot be both forbidden and required")
        for u, v in self.removed:
            if (v - u) % self.m not in self.required:
                raise ValueError(f"removed arc {(u, v)} has a difference outside the required set")
        for p in self.paths:
            if p.source == p.target:
                raise ValueError("path endpoints must differ")

    @property
    def symbolic(self) -> bool:
        return any(p.coef for p in self.paths)

    def concrete_paths(self, q: int | None = None) -> list[tuple[int, int, int]]:
        return [(p.source, p.target, p.length(q)) for p in self.paths]

    def q_values(self) -> tuple:
        return self.q_range if self.symbolic else (None,)


@dataclass(frozen=True)
class Witness:
    m: int
    side: str
    S: tuple
    cycles: tuple = ()  # of residue tuples, closing arc implied
    paths: tuple = ()  # of residue tuples, both endpoints listed
    partition: DifferencePartition | None = None
    q: int | None = None
    required: tuple = ()  # differences marked as required in the source data
    source: str = ""

    def path_from(self, source: int) -> tuple:
        (p,) = [p for p in self.paths if p[0] == source]
        return p


def witness_to_dict(w: Witness) -> dict:
    doc = {
        "m": w.m,
        "side": w.side,
        "S": sorted(w.S),
        "partition": None,
        "paths": [{"from": p[0], "to": p[-1], "vertices": list(p)} for p in w.paths],
        "cycles": [list(c) for c in w.cycles],
    }
    if w.partition is not None:
        doc["partition"] = {
            "singletons": sorted(w.partition.singletons),
            "quads": [list(q) for q in sorted(w.partition.quads)],
        }
    if w.q is not None:
        doc["q"] = w.q
    return doc


def dump_witness(w: Witness) -> str:
    return json.dumps(witness_to_dict(w), indent=1) + "\n"


def witness_from_dict(doc: dict) -> Witness:
    try:
        m = int(doc["m"])
        side = doc["side"]
        if side not in ("X", "Y"):
            raise ValueError(f"bad side {side!r}")
        part = doc.get("partition")
        partition = None
        if part is not None:
            partition = DifferencePartition.make(
                part.get("singletons", ()), [tuple(q) for q in part.get("quads", ())], m
            )
        paths = []
        for p in doc.get("paths", ()):
            vs = tuple(int(v) for v in p["vertices"])
            if (p.get("from", vs[0]), p.get("to", vs[-1])) != (vs[0], vs[-1]):
                raise ValueError(f"path endpoints disagree with its vertices: {p}")
            paths.append(vs)
        return Witness(
            m=m,
            side=side,
            S=tuple(sorted(int(d) for d in doc["S"])),
            cycles=tuple(tuple(int(v) for v in c) for c in doc.get("cycles", ())),
            paths=tuple(paths),
            partition=partition,
            q=doc.get("q"),
        )
    except (KeyError, TypeError, IndexError) as exc:
        raise ValueError(f"malformed witness document: {exc!r}") from exc


def load_witness(text: str) -> Witness:
    return witness_from_dict(json.loads(text))
