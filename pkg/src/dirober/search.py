"""Condition systems for one side of one m, and a search for witnesses.

The covering problem is solved as an exact cover over arcs: every arc of
C(m; S) - removed + added receives exactly one colour. Each cycle colour must
leave and enter every vertex once and close into a single m-cycle; one extra
path colour carries the required vertex-disjoint paths. Candidate sets S are
explored by iterative deepening on a per-S node cap, so an unlucky S cannot
swallow the whole budget.
"""
from __future__ import annotations

import itertools
import logging
import random
import time
from dataclasses import dataclass
from math import gcd

from .circulant import DifferencePartition
from .core import Modulus
from .params import OutOfScope, params_nonzero, params_zero
from .witness import ConditionSpec, PathReq, Witness

log = logging.getLogger(__name__)


# -- condition systems ------------------------------------------------------


def derive_spec(m: int) -> list[ConditionSpec]:
    """Condition systems that stored or searched witnesses must satisfy for m."""
    k = Modulus(m).k
    if m == 5:
        raise OutOfScope("m=5 is handled by a stored decomposition, not by witnesses")
    if m == 11:
        return [ConditionSpec(
            m, "X", forbidden=frozenset({6}), required=frozenset({3, 10}),
            removed=((6, 5), (4, 7)),
            paths=(PathReq(5, 6, 2), PathReq(7, 4, 7)),
        )]
    if m % 3:
        p = params_nonzero(m)
        return [ConditionSpec(
            m, "Y", forbidden=frozenset({k + 1}), required=frozenset({p.d1Y, p.d2Y}),
            removed=(p.a1, p.a2),
            paths=(PathReq(p.s1, p.t1, p.r1), PathReq(p.s2, p.t2, p.r2)),
        )]
    p = params_zero(m, check_scope=False)
    t, s = p.t, p.s
    if m == 9:
        return [
            ConditionSpec(
                m, "X", forbidden=frozenset({k + 1}), required=frozenset({p.d1X, p.d2X}),
                removed=p.bX,
                paths=(PathReq(1, t[0], 1), PathReq(2, t[1], 1), PathReq(0, t[2], 4)),
            ),
            ConditionSpec(
                m, "Y", forbidden=frozenset({k + 1}), required=frozenset({p.d1Y, p.d2Y}),
                removed=p.bY,
                paths=(PathReq(s[0], 3, 1), PathReq(s[1], 1, 2), PathReq(s[2], m - 1, 3)),
            ),
        ]
    third = m // 3
    return [
        ConditionSpec(
            m, "X", forbidden=frozenset({k + 1, p.dX}), required=frozenset({p.d1X, p.d2X}),
            removed=p.bX, added=p.c,
        ),
        ConditionSpec(
            m, "Y", forbidden=frozenset({k + 1}), required=frozenset({p.d1Y, p.d2Y}),
            removed=p.bY,
            paths=(
                PathReq(s[0], m - 1, 2 * third - 1),
                PathReq(s[1], 3, 0, 1),
                PathReq(s[2], 1, third - 2, -1),
            ),
            q_range=tuple(range(1, third - 2)),
        ),
    ]


def spec_for(m: int, side: str | None = None) -> ConditionSpec:
    specs = derive_spec(m)
    if side is None:
        if len(specs) > 1:
            raise ValueError(f"m={m} has conditions on both sides; choose X or Y")
        return specs[0]
    for s in specs:
        if s.side == side:
            return s
    raise ValueError(f"m={m} has no conditions on side {side}")


# -- complement partitions --------------------------------------------------


def find_complement_partition(m: int, T) -> DifferencePartition | None:
    """Partition T into coprime singletons and quads {±a, ±b} with gcd(a, b, m) = 1.

    Differences not coprime to m must go into quads; coprime ones are left as
    singletons unless needed as quad partners. Returns None when no such
    partition exists.
    """
    T = {e % m for e in T}
    if 0 in T:
        return None
    classes = sorted({min(e, m - e) for e in T})
    full = [a for a in classes if a in T and m - a in T]
    bad = [a for a in classes if gcd(a, m) != 1]
    if any(a not in full for a in bad):
        return None
    bad_set = set(bad)
    # partners: other bad classes first, then full coprime classes
    partners = [a for a in full if a in bad_set] + [a for a in full if a not in bad_set]

    def solve(todo, taken):
        if not todo:
            return []
        a = todo[0]
        for b in partners:
            if b == a or b in taken or gcd(gcd(a, b), m) != 1:
                continue
            rest = [e for e in todo[1:] if e != b]
            sub = solve(rest, taken | {a, b})
            if sub is not None:
                return [(min(a, b), max(a, b))] + sub
        return None

    quads = solve(bad, frozenset())
    if quads is None:
        return None
    rest = set(T)
    for a, b in quads:
        rest -= {a, m - a, b, m - b}
    return DifferencePartition.make(sorted(rest), quads, m)


# -- the covering solver ----------------------------------------------------


@dataclass(frozen=True)
class SearchBudget:
    nodes: int | None = 2_000_000
    seconds: float | None = 600.0
    seed: int | None = None

    def __post_init__(self):
        if self.nodes is not None and self.nodes <= 0:
            raise ValueError("node limit must be positive")
        if self.seconds is not None and self.seconds <= 0:
            raise ValueError("time limit must be positive")


class SearchExhausted(RuntimeError):
    def __init__(self, message, nodes=0, candidates=0):
        super().__init__(message)
        self.nodes = nodes
        self.candidates = candidates


class _Stop(Exception):
    pass


class _Cap(Exception):
    pass


class CoverProblem:
    """Colour the arcs of C(m; S) - removed + added into m-cycles and paths."""

    def __init__(self, m, S, removed=(), added=(), paths=(), rng=None):
        self.m = m
        removed = {tuple(a) for a in removed}
        arcs = [(i, (i + d) % m) for d in sorted(S) for i in range(m) if (i, (i + d) % m) not in removed]
        arcs += [tuple(a) for a in added]
        self.arcs = arcs
        self.paths = [tuple(p) for p in paths]  # (source, target, length)
        total = len(arcs) - sum(n for _, _, n in self.paths)
        self.feasible = total >= 0 and total % m == 0
        self.c = total // m if self.feasible else 0
        out = [[] for _ in range(m)]
        indeg = [0] * m
        for u, v in arcs:
            out[u].append(v)
            indeg[v] += 1
        self.rng = rng
        self.out = out
        c = self.c
        pout = {u for u in range(m) if len(out[u]) == c + 1}
        pin = {v for v in range(m) if indeg[v] == c + 1}
        if any(len(out[u]) not in (c, c + 1) for u in range(m)) or any(
            d not in (c, c + 1) for d in indeg
        ):
            self.feasible = False
        sources = {s for s, _, _ in self.paths}
        targets = {t for _, t, _ in self.paths}
        if pout - pin != sources or pin - pout != targets:
            self.feasible = False
        if sum(n for _, _, n in self.paths) != len(pout):
            self.feasible = False
        self.pout, self.pin = pout, pin
        self.source_len = {s: n for s, _, n in self.paths}
        self.source_target = {s: t for s, t, _ in self.paths}
        self.target_len = {t: n for _, t, n in self.paths}

    def solve(self, node_cap=None, counter=None, deadline=None):
        """Successor tables per colour, or None if the instance has no solution.

        Raises _Cap when the node cap is hit and _Stop when the deadline passes.
        """
        if not self.feasible:
            return None
        m, c = self.m, self.c
        P = c
        ncol = c + 1
        arcs = self.arcs
        n_arcs = len(arcs)
        colour = [-1] * n_arcs
        used = [0] * ncol
        succ = [[-1] * m for _ in range(ncol)]
        pred = [[-1] * m for _ in range(ncol)]
        # fragment bookkeeping: fend[col][start] = end, fstart[col][end] = start
        fend = [list(range(m)) for _ in range(ncol)]
        fstart = [list(range(m)) for _ in range(ncol)]
        flen = [[0] * m for _ in range(ncol)]
        pin, pout = self.pin, self.pout
        source_len, source_target, target_len = self.source_len, self.source_target, self.target_len
        out_arcs = [[] for _ in range(m)]
        in_arcs = [[] for _ in range(m)]
        for i, (u, v) in enumerate(arcs):
            out_arcs[u].append(i)
            in_arcs[v].append(i)
        out_slots = [(u, col) for u in range(m) for col in range(ncol) if col < c or u in pout]
        in_slots = [(v, col) for v in range(m) for col in range(ncol) if col < c or v in pin]
        counter = counter if counter is not None else [0]
        local = [0]
        rng = self.rng

        def valid(u, v, col):
            if succ[col][u] != -1 or pred[col][v] != -1:
                return False
            a = fstart[col][u]
            if col != P:
                return a != v or flen[col][a] + 1 == m
            if u not in pout or v not in pin or a == v:
                return False
            b = fend[col][v]
            length = flen[col][a] + 1 + flen[col][v]
            if a in source_len:
                if b in target_len:
                    return source_target[a] == b and length == source_len[a]
                return length < source_len[a]
            if b in target_len:
                return length < target_len[b]
            return True

        def apply(i, col):
            u, v = arcs[i]
            a = fstart[col][u]
            b = fend[col][v]
            rec = (i, col, a, b, fend[col][a], flen[col][a])
            colour[i] = col
            used[col] += 1
            succ[col][u] = v
            pred[col][v] = u
            if a != v:
                fend[col][a] = b
                fstart[col][b] = a
                flen[col][a] = flen[col][a] + 1 + flen[col][v]
            return rec

        def revert(rec):
            i, col, a, b, old_end, old_len = rec
            u, v = arcs[i]
            colour[i] = -1
            used[col] -= 1
            succ[col][u] = -1
            pred[col][v] = -1
            if a != v:
                fstart[col][b] = v
                fend[col][a] = old_end
                flen[col][a] = old_len

        def choose():
            """The most constrained open constraint and its options, or None when done."""
            out_opts = {}
            in_opts = {}
            best = None
            # unused cycle colours are interchangeable; only the lowest is offered
            fresh = next((col for col in range(c) if not used[col]), None)
            live = [col for col in range(ncol) if col == P or used[col] or col == fresh]
            for i in range(n_arcs):
                if colour[i] != -1:
                    continue
                u, v = arcs[i]
                opts = []
                for col in live:
                    if valid(u, v, col):
                        opts.append(col)
                        out_opts.setdefault((u, col), []).append(i)
                        in_opts.setdefault((v, col), []).append(i)
                if not opts:
                    return "dead", None
                if best is None or len(opts) < len(best[1]):
                    best = (("arc", i), opts)
            if best is None:
                return None
            for u, col in out_slots:
                if succ[col][u] == -1 and (col == P or used[col] or col == fresh):
                    opts = out_opts.get((u, col))
                    if not opts:
                        return "dead", None
                    if len(opts) < len(best[1]):
                        best = (("out", col), opts)
            for v, col in in_slots:
                if pred[col][v] == -1 and (col == P or used[col] or col == fresh):
                    opts = in_opts.get((v, col))
                    if not opts:
                        return "dead", None
                    if len(opts) < len(best[1]):
                        best = (("in", col), opts)
            return best

        def search():
            pick = choose()
            if pick is None:
                return True
            what, opts = pick
            if what == "dead":
                return False
            kind, ref = what
            if rng is not None:
                opts = list(opts)
                rng.shuffle(opts)
            for o in opts:
                counter[0] += 1
                local[0] += 1
                if node_cap is not None and local[0] > node_cap:
                    raise _Cap
                if deadline is not None and not counter[0] & 255 and time.monotonic() > deadline:
                    raise _Stop
                i, col = (ref, o) if kind == "arc" else (o, ref)
                rec = apply(i, col)
                if search():
                    return True
                revert(rec)
            return False

        if search():
            return succ
        return None


def _walk(succ, start, stop=None):
    out = [start]
    v = succ[start]
    while v != start and v != -1:
        out.append(v)
        if v == stop:
            break
        v = succ[v]
    return tuple(out)


def candidate_sets(spec: ConditionSpec, sizes=None, rng=None):
    """Connection sets containing the required differences, avoiding the forbidden
    ones, whose leftover differences split into Hamiltonian cells."""
    m = spec.m
    optional = sorted(set(range(1, m)) - spec.forbidden - spec.required)
    base = sorted(spec.required)
    if sizes is None:
        sizes = range(len(base), m)
    for size in sizes:
        extra = size - len(base)
        if extra < 0 or extra > len(optional):
            continue
        combos = list(itertools.combinations(optional, extra))
        if rng is not None:
            rng.shuffle(combos)
        for combo in combos:
            S = tuple(sorted(base + list(combo)))
            partition = find_complement_partition(m, set(range(1, m)) - set(S) - spec.forbidden)
            if partition is not None:
                yield S, partition


def solve_for(spec: ConditionSpec, S, q=None, node_cap=None, rng=None, counter=None, deadline=None):
    """Witness for a fixed S (and q), or None if that S admits none."""
    problem = CoverProblem(spec.m, S, spec.removed, spec.added, spec.concrete_paths(q), rng)
    succ = problem.solve(node_cap, counter, deadline)
    if succ is None:
        return None
    c = problem.c
    cycles = tuple(_walk(succ[col], 0) for col in range(c))
    paths = tuple(_walk(succ[c], s, stop=t) for s, t, _ in problem.paths)
    return cycles, paths


def search_witness(spec: ConditionSpec, budget: SearchBudget = SearchBudget(),
                   sizes=None, initial_cap: int = 2000) -> Witness:
    """Search for a witness; raises SearchExhausted when the budget runs out."""
    from .verify import verify_witness

    rng = random.Random(budget.seed) if budget.seed is not None else None
    deadline = time.monotonic() + budget.seconds if budget.seconds else None
    counter = [0]
    pending = []
    for q in spec.q_values():
        for S, partition in candidate_sets(spec, sizes, rng):
            pending.append((q, S, partition))
    n_candidates = len(pending)
    cap = initial_cap
    while pending:
        still = []
        for q, S, partition in pending:
            if budget.nodes is not None and counter[0] >= budget.nodes:
                raise SearchExhausted(
                    f"node budget of {budget.nodes} exhausted after {counter[0]} nodes",
                    counter[0], n_candidates)
            remaining = None if budget.nodes is None else budget.nodes - counter[0]
            this_cap = cap if remaining is None else min(cap, remaining)
            sub_rng = random.Random(rng.random()) if rng is not None else None
            try:
                found = solve_for(spec, S, q, this_cap, sub_rng, counter, deadline)
            except _Cap:
                still.append((q, S, partition))
                continue
            except _Stop:
                raise SearchExhausted(
                    f"time budget of {budget.seconds}s exhausted after {counter[0]} nodes",
                    counter[0], n_candidates) from None
            if found is None:
                log.debug("S=%s q=%s has no decomposition", S, q)
                continue
            cycles, paths = found
            w = Witness(spec.m, spec.side, S, cycles, paths, partition,
                        q if spec.symbolic else None, tuple(sorted(spec.required)), "search")
            report = verify_witness(spec, w)
            if not report.ok:
                raise AssertionError("search produced an uncertified witness: "
                                     + "; ".join(map(str, report.violations)))
            log.info("witness for m=%d side %s: S=%s after %d nodes", spec.m, spec.side, S, counter[0])
            return w
        if budget.nodes is not None and counter[0] >= budget.nodes and still:
            raise SearchExhausted(
                f"node budget of {budget.nodes} exhausted after {counter[0]} nodes",
                counter[0], n_candidates)
        pending = still
        cap *= 4
    raise SearchExhausted(f"no candidate set admits a witness ({n_candidates} tried)",
                          counter[0], n_candidates)
