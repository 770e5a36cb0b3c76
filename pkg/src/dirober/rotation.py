"""The shared rotation construction: m resolution classes R_0..R_{m-1} built
from two base cycles, and the 2m mixed arcs they leave behind."""
from __future__ import annotations

from dataclasses import dataclass

from .core import Arc, DirectedCycle, Modulus, x, y


@dataclass(frozen=True)
class RotationOutput:
    classes: tuple  # of (C_i, C_i')
    leftover: frozenset  # of Arc
    used_pure: int  # the pure difference k+1, consumed on both sides


def base_cycles(m: int) -> tuple[DirectedCycle, DirectedCycle]:
    """C_0 = x_0 y_0 x_1 y_1 ... x_k and C_0' = y_k x_{k+1} y_{k+1} ... y_{2k}."""
    k = Modulus(m).k
    c0 = []
    for i in range(k):
        c0 += [x(i, m), y(i, m)]
    c0.append(x(k, m))
    c0p = [y(k, m)]
    for i in range(k + 1, 2 * k + 1):
        c0p += [x(i, m), y(i, m)]
    return DirectedCycle(c0), DirectedCycle(c0p)


def shift(c: DirectedCycle, i: int, m: int) -> DirectedCycle:
    """Add i to X subscripts and 2i to Y subscripts."""
    return DirectedCycle(
        x(v.index + i, m) if v.side == "X" else y(v.index + 2 * i, m) for v in c.vertices
    )


def rotation_classes(m: int) -> RotationOutput:
    k = Modulus(m).k
    c0, c0p = base_cycles(m)
    classes = tuple((shift(c0, i, m), shift(c0p, i, m)) for i in range(m))
    leftover = frozenset(
        [Arc(x(k + i, m), y(k + 2 * i, m)) for i in range(m)]
        + [Arc(y(2 * k + 2 * i, m), x(i, m)) for i in range(m)]
    )
    return RotationOutput(classes, leftover, k + 1)


def trace_cycles(arcs) -> list[list]:
    """Split a 1-in 1-out arc set into its cycles by following successors."""
    succ = {}
    for a in arcs:
        if a.tail in succ:
            raise ValueError(f"vertex {a.tail} has two successors")
        succ[a.tail] = a.head
    if set(succ) != set(succ.values()):
        raise ValueError("arc set is not a union of cycles")
    seen = set()
    out = []
    for start in sorted(succ):
        if start in seen:
            continue
        cyc = [start]
        seen.add(start)
        v = succ[start]
        while v != start:
            cyc.append(v)
            seen.add(v)
            v = succ[v]
        out.append(cyc)
    return out


def _rooted(cyc: list, root) -> DirectedCycle:
    i = cyc.index(root)
    return DirectedCycle(cyc[i:] + cyc[:i])


def leftover_structure(m: int) -> list[DirectedCycle]:
    """The leftover mixed arcs as traced cycles.

    One 2m-cycle rooted at y_k when 3 does not divide m, otherwise three
    2m/3-cycles rooted at x_0, x_1, x_2.
    """
    k = Modulus(m).k
    cycles = trace_cycles(rotation_classes(m).leftover)
    if m % 3:
        if len(cycles) != 1:
            raise AssertionError(f"m={m}: expected one leftover cycle, traced {len(cycles)}")
        return [_rooted(cycles[0], y(k, m))]
    if sorted(map(len, cycles)) != [2 * m // 3] * 3:
        raise AssertionError(f"m={m}: expected three 2m/3-cycles, traced {list(map(len, cycles))}")
    out = []
    for r in range(3):
        root = x(r, m)
        (cyc,) = [c for c in cycles if root in c]
        out.append(_rooted(cyc, root))
    return out
