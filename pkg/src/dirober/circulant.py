"""Directed circulants C(m; S) and their decomposition into directed m-cycles.

A connection set S is decomposed cell by cell: a singleton {d} with
gcd(d, m) = 1 is the single cycle 0, d, 2d, ...; a quad {±a, ±b} with
gcd(a, b, m) = 1 is split into four directed Hamiltonian cycles by search.
"""
from __future__ import annotations

import logging
import os
import sys
from dataclasses import dataclass
from functools import lru_cache
from math import gcd
from pathlib import Path

log = logging.getLogger(__name__)

CACHE_ENV = "DIROBER_CACHE"


class QuadSearchError(RuntimeError):
    """Search exhaustion on a quad cell that should be decomposable (a bug)."""


@dataclass(frozen=True)
class DifferencePartition:
    singletons: frozenset = frozenset()
    quads: frozenset = frozenset()  # of (a, b) with a < b, cell {±a, ±b}

    @classmethod
    def make(cls, singletons=(), quads=(), m: int | None = None):
        qs = []
        for a, b in quads:
            if m is not None:
                a, b = a % m, b % m
            qs.append((min(a, b), max(a, b)))
        ss = [s % m if m is not None else s for s in singletons]
        return cls(frozenset(ss), frozenset(qs))

    def cells(self, m: int) -> list[frozenset]:
        out = [frozenset({d % m}) for d in sorted(self.singletons)]
        out += [quad_cell(m, a, b) for a, b in sorted(self.quads)]
        return out

    def covered(self, m: int) -> set:
        return set().union(*self.cells(m)) if (self.singletons or self.quads) else set()


def quad_cell(m: int, a: int, b: int) -> frozenset:
    return frozenset({a % m, -a % m, b % m, -b % m})


def circulant_arcs(m: int, S) -> set:
    """Arc set {(i, i+d) : i in Z_m, d in S}."""
    return {(i, (i + d) % m) for d in S for i in range(m)}


def validate_partition(m: int, S, p: DifferencePartition) -> list[str]:
    """Violations of the cell conditions; an empty list means the partition is valid."""
    S = {d % m for d in S}
    problems = []
    seen: dict[int, str] = {}
    for d in sorted(p.singletons):
        if d % m == 0:
            problems.append(f"degenerate singleton {{{d}}}: zero difference")
            continue
        if gcd(d, m) != 1:
            problems.append(f"gcd failure: gcd({d},{m})={gcd(d, m)}")
        for e in [d % m]:
            if e in seen:
                problems.append(f"overlap: {e} in {seen[e]} and {{{d}}}")
            seen[e] = f"{{{d}}}"
    for a, b in sorted(p.quads):
        cell = quad_cell(m, a, b)
        label = f"{{±{a},±{b}}}"
        if len(cell) != 4 or 0 in cell:
            problems.append(f"degenerate quad {label}: |cell|={len(cell - {0})}")
        g = gcd(gcd(a, b), m)
        if g != 1:
            problems.append(f"gcd failure: gcd({a},{b},{m})={g}")
        for e in sorted(cell):
            if e in seen:
                problems.append(f"overlap: {e} in {seen[e]} and {label}")
            seen[e] = label
    covered = set(seen)
    for e in sorted(S - covered):
        problems.append(f"coverage gap: {e} not in any cell")
    for e in sorted(covered - S):
        problems.append(f"coverage excess: {e} not in S")
    return problems


def singleton_cycle(m: int, d: int) -> tuple:
    if gcd(d, m) != 1:
        raise ValueError(f"gcd({d},{m})={gcd(d, m)}; {{{d}}} is not a Hamiltonian cell")
    return tuple(i * d % m for i in range(m))


# -- quad cells -------------------------------------------------------------


def _hamiltonian_split(m: int, diffs: tuple) -> tuple | None:
    """Difference sequence of an undirected Hamiltonian cycle H of Cay(Z_m, ±diffs)
    whose complement is also one Hamiltonian cycle.

    H is grown from vertex 0; once H passes through a vertex its two unused
    edges are forced into the complement, which must never close early.
    """
    a, b = diffs
    steps = sorted({a % m, -a % m, b % m, -b % m})
    # complement fragments: end[u] is the far end of the complement path at u
    end = list(range(m))
    cdeg = [0] * m
    cedges = [0]
    visited = bytearray(m)
    seq: list[int] = []
    used = set()  # undirected H-edges as (min, max)
    cset = set()  # undirected complement edges as (min, max)

    def edge(u, s):
        v = (u + s) % m
        return (u, v) if u < v else (v, u)

    def force(u, v, undo):
        # add complement edge uv; False if it closes a short cycle or overloads a vertex
        if (u, v) in cset:
            return True
        if cdeg[u] >= 2 or cdeg[v] >= 2:
            return False
        eu, ev = end[u], end[v]
        if eu == v and cedges[0] != m - 1:
            return False
        undo.append((u, v, eu, end[eu], ev, end[ev]))
        cdeg[u] += 1
        cdeg[v] += 1
        cedges[0] += 1
        cset.add((u, v))
        if eu != v:
            end[eu] = ev
            end[ev] = eu
        return True

    def unforce(undo):
        while undo:
            u, v, eu, old_eu, ev, old_ev = undo.pop()
            end[ev] = old_ev
            end[eu] = old_eu
            cdeg[u] -= 1
            cdeg[v] -= 1
            cedges[0] -= 1
            cset.discard((u, v))

    def close_vertex(v, e_in, e_out, undo):
        for s in steps:
            e = edge(v, s)
            if e == e_in or e == e_out:
                continue
            w = (v + s) % m
            if not force(min(v, w), max(v, w), undo):
                return False
        return True

    def dfs(u, e_in):
        if len(seq) == m - 1:
            # close back to 0
            for s in steps:
                if (u + s) % m == 0:
                    e_out = edge(u, s)
                    if e_out in used:
                        continue
                    undo: list = []
                    ok = close_vertex(u, e_in, e_out, undo)
                    if ok:
                        used.add(e_out)
                        ok = close_vertex(0, first_edge[0], e_out, undo)
                        if ok and cedges[0] == m:
                            seq.append(s)
                            return True
                        used.discard(e_out)
                    unforce(undo)
            return False
        for s in steps:
            v = (u + s) % m
            if visited[v]:
                continue
            e_out = edge(u, s)
            undo = []
            if not close_vertex(u, e_in, e_out, undo):
                unforce(undo)
                continue
            visited[v] = 1
            used.add(e_out)
            seq.append(s)
            if dfs(v, e_out):
                return True
            seq.pop()
            used.discard(e_out)
            visited[v] = 0
            unforce(undo)
        return False

    first_edge = [None]
    visited[0] = 1
    # first difference fixed to the smallest cell element
    s0 = steps[0]
    v0 = s0 % m
    e0 = edge(0, s0)
    visited[v0] = 1
    used.add(e0)
    seq.append(s0)
    first_edge[0] = e0
    if dfs(v0, e0):
        return tuple(seq)
    return None


def _walk(m: int, start: int, diffs) -> tuple:
    out = [start]
    for s in diffs[:-1]:
        out.append((out[-1] + s) % m)
    return tuple(out)


def _orientations(m: int, seq: tuple, cell) -> list[tuple]:
    """H in both directions plus the complement in both directions."""
    h = _walk(m, 0, seq)
    h_edges = {frozenset((h[i], h[(i + 1) % m])) for i in range(m)}
    diffs = {d for d in seq} | {-d % m for d in seq} | set(cell)
    # successor structure of the complement
    adj: dict[int, list[int]] = {v: [] for v in range(m)}
    for v in range(m):
        for s in sorted(diffs):
            w = (v + s) % m
            if frozenset((v, w)) not in h_edges and w not in adj[v]:
                adj[v].append(w)
    comp = [0]
    prev = None
    while len(comp) < m:
        nxt = [w for w in adj[comp[-1]] if w != prev]
        prev = comp[-1]
        comp.append(nxt[0])
    rev = lambda c: (c[0],) + tuple(reversed(c[1:]))  # noqa: E731
    return [h, rev(h), tuple(comp), rev(tuple(comp))]


def _cache_path() -> Path:
    env = os.environ.get(CACHE_ENV)
    if env:
        return Path(env)
    base = os.environ.get("XDG_CACHE_HOME") or os.path.join(os.path.expanduser("~"), ".cache")
    return Path(base) / "dirober" / "quads.txt"


def _check_quad(m, a, b, cycles) -> bool:
    arcs = []
    for c in cycles:
        if len(c) != m or len(set(c)) != m:
            return False
        arcs += [(c[i], c[(i + 1) % m]) for i in range(m)]
    return len(arcs) == len(set(arcs)) and set(arcs) == circulant_arcs(m, quad_cell(m, a, b))


def _load_cache() -> dict:
    out = {}
    path = _cache_path()
    try:
        text = path.read_text()
    except OSError:
        return out
    for line in text.splitlines():
        try:
            head, *rest = line.split(";")
            m, a, b = map(int, head.split())
            cycles = [tuple(map(int, part.split())) for part in rest]
        except ValueError:
            continue
        if len(cycles) == 4 and _check_quad(m, a, b, cycles):
            out[m, a, b] = tuple(cycles)
    return out


_MEMO: dict | None = None


def _append_cache(m, a, b, cycles):
    path = _cache_path()
    line = f"{m} {a} {b};" + ";".join(" ".join(map(str, c)) for c in cycles) + "\n"
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        # single O_APPEND write per record: concurrent writers do not interleave
        fd = os.open(path, os.O_WRONLY | os.O_APPEND | os.O_CREAT, 0o644)
        try:
            os.write(fd, line.encode())
        finally:
            os.close(fd)
    except OSError as exc:
        log.debug("quad cache not written: %s", exc)


def quad_decompose(m: int, a: int, b: int, use_cache: bool = True) -> tuple:
    """Four directed Hamiltonian cycles of Z_m partitioning C(m; {±a, ±b})."""
    global _MEMO
    a, b = a % m, b % m
    cell = quad_cell(m, a, b)
    if len(cell) != 4 or 0 in cell:
        raise ValueError(f"{{±{a},±{b}}} is degenerate mod {m}")
    if gcd(gcd(a, b), m) != 1:
        raise ValueError(f"gcd({a},{b},{m})={gcd(gcd(a, b), m)}; quad cell not decomposable")
    key = (m,) + tuple(sorted((min(a, -a % m), min(b, -b % m))))
    if use_cache:
        if _MEMO is None:
            _MEMO = _load_cache()
        if key in _MEMO:
            return _MEMO[key]
    seq = _search_quad(*key)
    cycles = tuple(_orientations(m, seq, cell))
    if not _check_quad(m, key[1], key[2], cycles):
        raise QuadSearchError(f"internal: bad quad decomposition for {key}")
    if use_cache:
        _MEMO[key] = cycles
        _append_cache(*key, cycles)
    return cycles


@lru_cache(maxsize=None)
def _search_quad(m, a, b):
    limit = sys.getrecursionlimit()
    if limit < 4 * m + 100:
        sys.setrecursionlimit(4 * m + 100)
    seq = _hamiltonian_split(m, (a, b))
    if seq is None:
        log.error("quad search exhausted for m=%d cell {±%d,±%d}", m, a, b)
        raise QuadSearchError(f"no Hamiltonian split found for m={m}, {{±{a},±{b}}}")
    return seq


def decompose_circulant(m: int, p: DifferencePartition) -> list[tuple]:
    """Directed m-cycles partitioning C(m; union of the cells of p)."""
    covered = p.covered(m)
    problems = validate_partition(m, covered, p)
    if problems:
        raise ValueError("invalid partition: " + "; ".join(problems))
    out = [singleton_cycle(m, d) for d in sorted(p.singletons)]
    for a, b in sorted(p.quads):
        out.extend(quad_decompose(m, a, b))
    return out
