"""Independent certification of decompositions, witnesses and parameter tables.

Nothing here calls into the constructions: arcs, differences, coverage and
disjointness are recomputed from raw vertex sequences.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from math import gcd

from .params import OutOfScope, params_nonzero, params_zero


@dataclass(frozen=True)
class Violation:
    kind: str
    detail: str
    locus: tuple = ()

    def __str__(self):
        where = " ".join(str(p) for p in self.locus)
        return f"{self.kind}: {self.detail}" + (f" [{where}]" if where else "")


@dataclass
class Report:
    subject: str
    violations: list = field(default_factory=list)
    stats: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.violations

    @property
    def verdict(self) -> str:
        return "PASS" if self.ok else "FAIL"

    def kinds(self) -> set:
        return {v.kind for v in self.violations}

    def add(self, kind, detail, *locus):
        self.violations.append(Violation(kind, detail, tuple(locus)))

    def lines(self) -> list[str]:
        head = f"{self.subject}: {self.verdict}"
        if self.stats:
            head += " (" + ", ".join(f"{k}={v}" for k, v in self.stats.items()) + ")"
        return [head] + [f"  {v}" for v in self.violations]

    def to_dict(self) -> dict:
        return {
            "subject": self.subject,
            "verdict": self.verdict,
            "stats": dict(self.stats),
            "violations": [
                {"kind": v.kind, "detail": v.detail, "locus": [str(p) for p in v.locus]}
                for v in self.violations
            ],
        }


def _fmt(v) -> str:
    side, index = v
    return f"{side.lower()}{index}"


def _multiset_diff(have: list, want: list):
    """Sort-and-scan comparison: (duplicates, missing, extra)."""
    have = sorted(have)
    want = sorted(want)
    dup, missing, extra = [], [], []
    i = j = 0
    while i < len(have) or j < len(want):
        if i < len(have) and i > 0 and have[i] == have[i - 1]:
            dup.append(have[i])
            i += 1
        elif j >= len(want) or (i < len(have) and have[i] < want[j]):
            extra.append(have[i])
            i += 1
        elif i >= len(have) or want[j] < have[i]:
            missing.append(want[j])
            j += 1
        else:
            i += 1
            j += 1
    return dup, missing, extra


def verify_decomposition(d) -> Report:
    """PASS iff d is a resolvable decomposition of K*_{2m} into directed m-cycles."""
    m = d.m
    rep = Report(f"decomposition m={m}")
    everyone = [("X", i) for i in range(m)] + [("Y", i) for i in range(m)]
    if len(d.classes) != 2 * m - 1:
        rep.add("class_count", f"{len(d.classes)} classes, expected {2 * m - 1}")
    arcs = []
    for ci, cls in enumerate(d.classes):
        seen = []
        for cj, cyc in enumerate(cls):
            vs = [tuple(v) for v in cyc.vertices]
            bad = [v for v in vs if v[0] not in ("X", "Y") or not 0 <= v[1] < m]
            if bad:
                rep.add("bad_vertex", f"{bad}", f"class={ci}", f"cycle={cj}")
                continue
            if len(vs) != m:
                rep.add("cycle_length", f"length {len(vs)}, expected {m}", f"class={ci}", f"cycle={cj}")
            counts = Counter(vs)
            for v, c in counts.items():
                if c > 1:
                    rep.add("repeated_vertex", f"{_fmt(v)} appears {c} times", f"class={ci}", f"cycle={cj}")
            n = len(vs)
            for i in range(n):
                arcs.append((vs[i], vs[(i + 1) % n]))
            seen += vs
        counts = Counter(seen)
        overlap = sorted(v for v, c in counts.items() if c > 1)
        absent = sorted(set(everyone) - set(counts))
        if overlap:
            rep.add("class_overlap", "vertices " + " ".join(map(_fmt, overlap)) + " in several cycles", f"class={ci}")
        if absent:
            rep.add("class_uncovered", "vertices " + " ".join(map(_fmt, absent)) + " not covered", f"class={ci}")
    loops = [a for a in arcs if a[0] == a[1]]
    for a in loops:
        rep.add("loop", f"{_fmt(a[0])}->{_fmt(a[1])}")
    want = [(u, v) for u in everyone for v in everyone if u != v]
    dup, missing, extra = _multiset_diff([a for a in arcs if a[0] != a[1]], want)
    for a in dup:
        rep.add("duplicate_arc", f"{_fmt(a[0])}->{_fmt(a[1])}")
    for a in missing:
        rep.add("missing_arc", f"{_fmt(a[0])}->{_fmt(a[1])}")
    for a in extra:
        rep.add("extra_arc", f"{_fmt(a[0])}->{_fmt(a[1])}")
    rep.stats = {"classes": len(d.classes), "arcs": len(arcs)}
    return rep


def check_partition(m: int, target, singletons, quads) -> list[tuple[str, str]]:
    """Cell conditions: singletons coprime to m, quads {±a,±b} with
    gcd(a,b,m)=1 and four distinct residues, cells disjoint and covering target."""
    out = []
    owner: dict[int, str] = {}

    def claim(e, label):
        if e in owner:
            out.append(("partition_overlap", f"{e} in {owner[e]} and {label}"))
        owner[e] = label

    for s in singletons:
        s %= m
        if s == 0 or gcd(s, m) != 1:
            out.append(("partition_gcd", f"singleton {{{s}}}: gcd({s},{m})={gcd(s, m)}"))
        claim(s, f"{{{s}}}")
    for a, b in quads:
        cell = {a % m, -a % m, b % m, -b % m}
        label = f"{{±{a},±{b}}}"
        if len(cell) != 4 or 0 in cell:
            out.append(("partition_degenerate", f"{label} has {len(cell - {0})} distinct nonzero residues"))
        g = gcd(gcd(a, b), m)
        if g != 1:
            out.append(("partition_gcd", f"{label}: gcd({a},{b},{m})={g}"))
        for e in sorted(cell):
            claim(e, label)
    target = {e % m for e in target}
    for e in sorted(target - set(owner)):
        out.append(("partition_gap", f"difference {e} not covered"))
    for e in sorted(set(owner) - target):
        out.append(("partition_excess", f"difference {e} is not a leftover difference"))
    return out


def verify_witness(spec, w) -> Report:
    """PASS iff w meets all four conditions of spec."""
    if spec.m != w.m or spec.side != w.side:
        raise ValueError(f"spec is for m={spec.m} side {spec.side}, witness for m={w.m} side {w.side}")
    m = spec.m
    rep = Report(f"witness m={m} side={w.side}")
    S = {d % m for d in w.S}
    if len(S) != len(w.S) or 0 in S:
        rep.add("bad_S", f"S={sorted(w.S)} is not a subset of Z_{m}^*")
    for d in sorted(S & set(spec.forbidden)):
        rep.add("forbidden_in_S", f"{d} must not be in S")
    for d in sorted(set(spec.required) - S):
        rep.add("required_missing", f"{d} must be in S")

    target = set(range(1, m)) - S - set(spec.forbidden)
    if w.partition is None:
        singles, quads = sorted(target), []
    else:
        singles, quads = sorted(w.partition.singletons), sorted(w.partition.quads)
    for kind, detail in check_partition(m, target, singles, quads):
        rep.add(kind, detail)

    base = [(i, (i + d) % m) for d in sorted(S) for i in range(m)]
    base_set = set(base)
    for a in spec.removed:
        if tuple(a) not in base_set:
            rep.add("removed_not_present", f"{a} is not an arc of C({m};S)")
    for a in spec.added:
        if tuple(a) in base_set:
            rep.add("added_present", f"{a} is already an arc of C({m};S)")
    want = [a for a in base if a not in set(map(tuple, spec.removed))] + [tuple(a) for a in spec.added]

    have = []
    for ci, cyc in enumerate(w.cycles):
        if len(cyc) != m:
            rep.add("cycle_length", f"length {len(cyc)}, expected {m}", f"cycle={ci}")
        if len(set(cyc)) != len(cyc):
            rep.add("repeated_vertex", "cycle revisits a vertex", f"cycle={ci}")
        if any(not 0 <= v < m for v in cyc):
            rep.add("bad_vertex", "vertex out of range", f"cycle={ci}")
        n = len(cyc)
        have += [(cyc[i], cyc[(i + 1) % n]) for i in range(n)]
    for pi, path in enumerate(w.paths):
        if len(set(path)) != len(path):
            rep.add("repeated_vertex", "path revisits a vertex", f"path={pi}")
        have += [(path[i], path[i + 1]) for i in range(len(path) - 1)]

    # required paths, matched by source
    if spec.symbolic:
        if w.q is not None and w.q not in spec.q_range:
            rep.add("bad_q", f"q={w.q} not in {list(spec.q_range)}")
        candidates = [w.q] if w.q is not None else list(spec.q_range)
    else:
        candidates = [None]
    by_source = {p[0]: p for p in w.paths}
    fits = [
        q for q in candidates
        if len(w.paths) == len(spec.paths) and all(
            s in by_source and by_source[s][-1] == t and len(by_source[s]) - 1 == n
            for s, t, n in spec.concrete_paths(q))
    ]
    if fits:
        if spec.symbolic:
            rep.stats["q"] = fits[0]
    else:
        if len(w.paths) != len(spec.paths):
            rep.add("path_count", f"{len(w.paths)} paths, expected {len(spec.paths)}")
        q = candidates[0] if len(candidates) == 1 else None
        for req in spec.paths:
            p = by_source.get(req.source)
            if p is None:
                rep.add("path_missing", f"no path from {req.source}")
                continue
            if p[-1] != req.target:
                rep.add("path_endpoint", f"path from {req.source} ends at {p[-1]}, expected {req.target}")
            if req.coef and q is None:
                continue
            if len(p) - 1 != req.length(q):
                rep.add("path_length", f"path from {req.source} has length {len(p) - 1}, expected {req.length(q)}")
        if spec.symbolic and q is None:
            rep.add("path_length", f"path lengths fit no admissible q in {list(spec.q_range)}")

    used = Counter(v for p in w.paths for v in p)
    shared = sorted(v for v, c in used.items() if c > 1)
    if shared:
        rep.add("paths_not_disjoint", f"vertices {shared} lie on several paths")

    dup, missing, extra = _multiset_diff(have, want)
    for a in dup:
        rep.add("duplicate_arc", f"{a}")
    for a in missing:
        rep.add("uncovered_arc", f"{a}")
    for a in extra:
        rep.add("extra_arc", f"{a}")
    rep.stats.update(cycles=len(w.cycles), paths=len(w.paths))
    return rep


def verify_params(m: int) -> Report:
    """Re-derive the parameter invariants by plain modular arithmetic."""
    rep = Report(f"parameters m={m}")
    k = (m - 1) // 2
    if m % 3:
        try:
            p = params_nonzero(m, check_scope=False)
        except OutOfScope as exc:
            raise ValueError(str(exc)) from exc
        if m < 7:
            raise ValueError(f"m={m}: no parameter table for m < 7")
        if gcd(p.d, m) != 1:
            rep.add("gcd", f"gcd(d={p.d}, m) = {gcd(p.d, m)}")
        if (p.t1p, p.s2, p.s1, p.t2) != (k, k, (2 * k - 1) % m, p.t2p):
            rep.add("identity", "t_1' = s_2 = k, s_1 = 2k-1, t_2 = t_2' fails")
        for i, (sp, tp, r) in enumerate(((p.s1p, p.t1p, p.r1), (p.s2p, p.t2p, p.r2)), 1):
            if (sp + r * p.d - tp) % m:
                rep.add("r", f"s_{i}' + r_{i} d != t_{i}'")
        if p.r1 + p.r2 != m - 2:
            rep.add("r_sum", f"r_1 + r_2 = {p.r1 + p.r2}, expected {m - 2}")
        if (p.s1p - p.t2p) % m != p.d or (p.s2p - p.t1p) % m != p.d:
            rep.add("linking", "linking arcs do not have pure left difference d")
        for name, val in (("d", p.d), ("d_1^Y", (p.s1 - p.t1) % m), ("d_2^Y", (p.s2 - p.t2) % m)):
            if val == k + 1:
                rep.add("collision", f"{name} = {val} equals k+1")
        rep.stats = {"d": p.d, "d_1^Y": (p.s1 - p.t1) % m, "d_2^Y": (p.s2 - p.t2) % m,
                     "r_1": p.r1, "r_2": p.r2}
        return rep
    if m < 9:
        raise ValueError(f"m={m}: no parameter table")
    p = params_zero(m, check_scope=False)
    s1, t1 = p.s[0], p.t[0]
    if gcd(m, t1) != 3:
        rep.add("gcd", f"gcd(m, t_1={t1}) = {gcd(m, t1)}")
    for i in range(3):
        if p.s[i] != (s1 + 2 * i) % m or p.t[i] != (t1 + i) % m:
            rep.add("recurrence", f"s_{i + 1} / t_{i + 1} recurrence fails")
    diffs = {"d_1^X": (1 - t1) % m, "d_2^X": (-2 - t1) % m, "d_1^Y": (s1 - 1) % m, "d_2^Y": (s1 + 5) % m}
    for name, val in diffs.items():
        if val == k + 1:
            rep.add("collision", f"{name} = {val} equals k+1")
    want_b = [diffs["d_1^X"], diffs["d_1^X"], diffs["d_2^X"]]
    for (u, v), dd in zip(p.bX, want_b):
        if (v - u) % m != dd:
            rep.add("linking", f"b^X arc {(u, v)} has difference {(v - u) % m}, expected {dd}")
    want_b = [diffs["d_1^Y"], diffs["d_1^Y"], diffs["d_2^Y"]]
    for (u, v), dd in zip(p.bY, want_b):
        if (v - u) % m != dd:
            rep.add("linking", f"b^Y arc {(u, v)} has difference {(v - u) % m}, expected {dd}")
    # arithmetic paths x_i, x_{i-t1}, ... reach x_{t_{i+1}} after m/3 - 1 steps,
    # covering every difference -t1 arc except the c_i
    used = set()
    for i in range(3):
        v = i
        for _ in range(m // 3 - 1):
            used.add((v, (v - t1) % m))
            v = (v - t1) % m
        if v != p.t[i]:
            rep.add("arithmetic_path", f"path from x_{i} ends at x_{v}, expected x_{p.t[i]}")
    rest = {(v, (v - t1) % m) for v in range(m)} - used
    if rest != set(p.c):
        rep.add("arithmetic_path", f"unused difference -t_1 arcs {sorted(rest)} != c arcs {sorted(p.c)}")
    rep.stats = dict(diffs, t_1=t1, s_1=s1)
    return rep
