"""Assemble a full resolvable decomposition from the rotation classes, the two
extra classes built from the leftover mixed arcs, and the remainders of D[X]
and D[Y].

Witnesses come from the stored dataset unless supplied explicitly; assembly
never searches.
"""
from __future__ import annotations

from .circulant import decompose_circulant
from .core import Decomposition, DirectedCycle, Modulus, canonical_cycle, join, x, y
from .params import ParamsB, params_nonzero, params_zero
from .rotation import leftover_structure, rotation_classes, trace_cycles, _rooted
from .search import derive_spec, find_complement_partition

class AssemblyError(RuntimeError):
    pass


def _on(side: str, seq, m: int) -> list:
    make = x if side == "X" else y
    return [make(i, m) for i in seq]


def _cycles_on(side, cycles, m) -> list[DirectedCycle]:
    return [DirectedCycle(_on(side, c, m)) for c in cycles]


def split_path(cycle: DirectedCycle, lengths) -> list[list]:
    """Cut a rooted cycle into consecutive paths with the given arc counts.

    Consecutive pieces share their boundary vertex; the last piece ends at the root.
    """
    vs = list(cycle.vertices)
    if sum(lengths) != len(vs):
        raise ValueError(f"lengths {lengths} do not add up to the cycle length {len(vs)}")
    pieces, pos = [], 0
    for n in lengths:
        pieces.append([vs[(pos + j) % len(vs)] for j in range(n + 1)])
        pos += n
    return pieces


def _expect(piece, first, last, name):
    if piece[0] != first or piece[-1] != last:
        raise AssertionError(f"{name} runs {piece[0]}..{piece[-1]}, expected {first}..{last}")


def difference_path(m: int, start: int, step: int, steps: int) -> list[int]:
    return [(start + j * step) % m for j in range(steps + 1)]


def remainder_partition(m: int, side: str, witness, forbidden):
    """Hamiltonian cells for the differences no earlier step touched on one side."""
    used = set(forbidden)
    partition = None
    if witness is not None:
        used |= set(witness.S)
        partition = witness.partition
    rest = set(range(1, m)) - used
    if partition is None or partition.covered(m) != rest:
        partition = find_complement_partition(m, rest)
        if partition is None:
            raise AssemblyError(f"m={m} side {side}: leftover differences {sorted(rest)} "
                                "admit no Hamiltonian partition")
    return partition


def remainder_cycles(m: int, side: str, witness, forbidden) -> list[DirectedCycle]:
    """Witness cycles plus a decomposition of the untouched circulant on one side."""
    out = _cycles_on(side, witness.cycles, m) if witness is not None else []
    partition = remainder_partition(m, side, witness, forbidden)
    return out + _cycles_on(side, decompose_circulant(m, partition), m)


def pair_into_classes(xs, ys) -> list[tuple]:
    """Pair X-cycles with Y-cycles in canonical order, one pair per class."""
    if len(xs) != len(ys):
        raise AssemblyError(f"{len(xs)} cycles in D[X] but {len(ys)} in D[Y]")
    key = lambda c: canonical_cycle(c).vertices  # noqa: E731
    return list(zip(sorted(xs, key=key), sorted(ys, key=key)))


def _checked(m: int, witnesses: dict):
    from .verify import verify_witness

    specs = {s.side: s for s in derive_spec(m)}
    for side, spec in specs.items():
        w = witnesses.get(side)
        if w is None:
            raise AssemblyError(f"m={m}: no witness; run search (side {side})")
        report = verify_witness(spec, w)
        if not report.ok:
            raise AssemblyError(f"m={m}: side {side} witness rejected: "
                                + "; ".join(map(str, report.violations)))
    return specs


def assemble_nonzero(m: int, w) -> list[tuple]:
    """The two extra classes and the remainders for 3 not dividing m, m != 11."""
    p = params_nonzero(m)
    (C,) = leftover_structure(m)
    P = split_path(C, (m - 1, 1, 1, 1, m - 5, 1, 1, 1))
    ends = [
        (y(p.s2, m), y(p.t2, m)), (y(p.t2, m), x(p.s1p, m)),
        (x(p.s1p, m), y(p.t1, m)), (y(p.t1, m), x(p.s2p, m)),
        (x(p.s2p, m), x(p.t2p, m)), (x(p.t2p, m), y(p.s1, m)),
        (y(p.s1, m), x(p.t1p, m)), (x(p.t1p, m), y(p.s2, m)),
    ]
    for i, (piece, (a, b)) in enumerate(zip(P, ends), 1):
        _expect(piece, a, b, f"piece {i}")
    first = (join(P[0]), join(P[4], P[2], P[6]))
    q1x = _on("X", difference_path(m, p.s1p, p.d, p.r1), m)
    q2x = _on("X", difference_path(m, p.s2p, p.d, p.r2), m)
    if q1x[-1] != x(p.t1p, m) or q2x[-1] != x(p.t2p, m):
        raise AssertionError("left difference paths miss their targets")
    q1 = _on("Y", w.path_from(p.s1), m)
    q2 = _on("Y", w.path_from(p.s2), m)
    second = (join(P[1], q1x, P[7], q2), join(P[3], q2x, P[5], q1))
    xs = remainder_cycles(m, "X", None, {p.k + 1, p.d})
    ys = remainder_cycles(m, "Y", w, {p.k + 1})
    return [first, second] + pair_into_classes(xs, ys)


def _split_thirds(m: int, p: ParamsB):
    third = m // 3
    cycles = leftover_structure(m)
    px, py = [], []
    for i, C in enumerate(cycles):
        vs = list(C.vertices)
        a, b = vs[:third], vs[third:]
        _expect(a, x(i, m), x(p.t[i], m), f"left piece {i + 1}")
        _expect(b, y(p.s[i], m), y((-1, 1, 3)[i], m), f"right piece {i + 1}")
        px.append(a)
        py.append(b)
    return px, py


def _first_class_zero(m, p):
    px, py = _split_thirds(m, p)
    return (join(px[0], px[1], px[2]), join(py[0], py[2], py[1]))


def assemble_zero(m: int, wx, wy) -> list[tuple]:
    """The two extra classes and the remainders for 3 | m, m >= 15."""
    p = params_zero(m)
    third = m // 3
    first = _first_class_zero(m, p)
    qx = [_on("X", difference_path(m, i, p.dX, third - 1), m) for i in range(3)]
    for i, q in enumerate(qx):
        if q[-1] != x(p.t[i], m):
            raise AssertionError(f"left path {i + 1} ends at {q[-1]}, expected x{p.t[i]}")
    qy = [_on("Y", wy.path_from(s), m) for s in p.s]
    second = (join(qx[0], qy[0]), join(qx[1], qy[1], qx[2], qy[2]))
    xs = remainder_cycles(m, "X", wx, {p.k + 1, p.dX})
    ys = remainder_cycles(m, "Y", wy, {p.k + 1})
    return [first, second] + pair_into_classes(xs, ys)


def assemble_nine(wx, wy) -> list[tuple]:
    m = 9
    p = params_zero(m, check_scope=False)
    first = _first_class_zero(m, p)
    qx = {s: _on("X", wx.path_from(s), m) for s in (1, 2, 0)}
    qy = {s: _on("Y", wy.path_from(s), m) for s in p.s}
    s1, s2, s3 = p.s
    second = (join(qx[1], qy[s1], qx[2], qy[s2]), join(qx[0], qy[s3]))
    xs = remainder_cycles(m, "X", wx, {5})
    ys = remainder_cycles(m, "Y", wy, {5})
    return [first, second] + pair_into_classes(xs, ys)


def assemble_eleven(wx) -> list[tuple]:
    m = 11
    arcs = rotation_classes(m).leftover
    (C,) = [_rooted(c, x(5, m)) for c in trace_cycles(arcs)]
    P = split_path(C, (10, 1, 1, 1, 6, 1, 1, 1))
    ends = [(x(5, m), x(6, m)), (x(6, m), y(7, m)), (y(7, m), x(4, m)), (x(4, m), y(3, m)),
            (y(3, m), y(2, m)), (y(2, m), x(7, m)), (x(7, m), y(9, m)), (y(9, m), x(5, m))]
    for i, (piece, (a, b)) in enumerate(zip(P, ends), 1):
        _expect(piece, a, b, f"piece {i}")
    first = (join(P[0]), join(P[2], P[6], P[4]))
    q1y = _on("Y", difference_path(m, 3, 5, 2), m)
    q2y = _on("Y", difference_path(m, 7, 5, 7), m)
    q1 = _on("X", wx.path_from(7), m)
    q2 = _on("X", wx.path_from(5), m)
    second = (join(P[1], q2y, P[7], q2), join(P[3], q1y, P[5], q1))
    xs = remainder_cycles(m, "X", wx, {6})
    ys = remainder_cycles(m, "Y", None, {5, 6})
    return [first, second] + pair_into_classes(xs, ys)


def construct(m: int, witnesses: dict | None = None) -> Decomposition:
    """A resolvable decomposition of K*_{2m} into directed m-cycles.

    ``witnesses`` maps a side ("X" or "Y") to a Witness; missing sides are
    taken from the stored dataset.
    """
    from . import dataset

    if not isinstance(m, int) or m % 2 == 0:
        raise ValueError(f"m must be odd (got {m})")
    Modulus(m)
    if m == 5:
        return dataset.load(5).decomposition.canonical()
    chosen = {}
    try:
        chosen.update(dataset.load(m).witnesses)
    except dataset.MissingEntry:
        pass
    chosen.update(witnesses or {})
    _checked(m, chosen)
    rot = [tuple(pair) for pair in rotation_classes(m).classes]
    if m == 11:
        extra = assemble_eleven(chosen["X"])
    elif m == 9:
        extra = assemble_nine(chosen["X"], chosen["Y"])
    elif m % 3:
        extra = assemble_nonzero(m, chosen["Y"])
    else:
        extra = assemble_zero(m, chosen["X"], chosen["Y"])
    return Decomposition(m, tuple(rot + extra)).canonical()


def remainder_plan(m: int, witnesses: dict | None = None) -> dict:
    """side -> (witness or None, forbidden differences) for the remainder step."""
    from . import dataset

    chosen = dict(dataset.load(m).witnesses) if m in dataset.SUPPORTED and m != 5 else {}
    chosen.update(witnesses or {})
    k = Modulus(m).k
    if m == 11:
        return {"X": (chosen["X"], {6}), "Y": (None, {5, 6})}
    if m == 9:
        return {"X": (chosen["X"], {5}), "Y": (chosen["Y"], {5})}
    if m % 3:
        return {"X": (None, {k + 1, params_nonzero(m).d}), "Y": (chosen["Y"], {k + 1})}
    p = params_zero(m)
    return {"X": (chosen["X"], {k + 1, p.dX}), "Y": (chosen["Y"], {k + 1})}


def partitions_used(m: int, witnesses: dict | None = None) -> dict:
    """side -> the difference partition decomposed by ``construct`` for m."""
    if m == 5:
        return {}
    return {side: remainder_partition(m, side, w, forbidden)
            for side, (w, forbidden) in remainder_plan(m, witnesses).items()}
