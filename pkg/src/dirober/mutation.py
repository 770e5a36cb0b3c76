"""Single-arc corruptions of a decomposition, for checking verifier sensitivity.

flip       swap two consecutive vertices of one cycle, reversing the arc between them
delete     drop one vertex from one cycle
duplicate  repeat one vertex of one cycle immediately after itself
"""
from __future__ import annotations

import random
from dataclasses import dataclass

from .core import Decomposition

KINDS = ("flip", "delete", "duplicate")


@dataclass(frozen=True)
class RawCycle:
    """A vertex sequence with no validity checks, so broken cycles can be represented."""

    vertices: tuple


def mutate(d: Decomposition, kind: str, rng: random.Random) -> tuple[Decomposition, str]:
    """A mutated copy of d and a description of the change."""
    if kind not in KINDS:
        raise ValueError(f"unknown mutation {kind!r}")
    classes = [list(cls) for cls in d.classes]
    ci = rng.randrange(len(classes))
    cj = rng.randrange(len(classes[ci]))
    vs = list(classes[ci][cj].vertices)
    i = rng.randrange(len(vs))
    if kind == "flip":
        j = (i + 1) % len(vs)
        vs[i], vs[j] = vs[j], vs[i]
        what = f"reversed {d.classes[ci][cj].vertices[i]}->{d.classes[ci][cj].vertices[j]}"
    elif kind == "delete":
        what = f"deleted {vs.pop(i)}"
    else:
        vs.insert(i + 1, vs[i])
        what = f"duplicated {vs[i]}"
    classes[ci][cj] = RawCycle(tuple(vs))
    return Decomposition(d.m, tuple(tuple(c) for c in classes)), f"class {ci} cycle {cj}: {what}"


def random_mutations(d: Decomposition, count: int, seed: int = 0):
    rng = random.Random(seed)
    for n in range(count):
        yield mutate(d, KINDS[n % len(KINDS)], rng)
