"""Stored witnesses for 7 <= m <= 49 and the literal m = 5 decomposition.

The text files under ``data/`` are the single source of truth; they follow the
published tables line for line (cycles repeat their first vertex, paths list
both endpoints).
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources

from .circulant import DifferencePartition, quad_cell
from .core import Decomposition, DirectedCycle, Vertex
from .params import params_zero
from .witness import Witness

SUPPORTED = tuple(range(5, 50, 2))


class MissingEntry(KeyError):
    pass


@dataclass(frozen=True)
class AppendixEntry:
    m: int
    appendix: str  # "A", "B" or "L4"
    witnesses: dict = field(default_factory=dict)  # side -> Witness
    decomposition: Decomposition | None = None


def forbidden_differences(m: int, side: str) -> frozenset:
    """Differences already consumed before the witness side is decomposed."""
    k = (m - 1) // 2
    out = {k + 1}
    if m % 3 == 0 and m >= 15 and side == "X":
        out.add(params_zero(m).dX)
    return frozenset(out)


def complement_partition(m: int, S, forbidden, quads) -> DifferencePartition:
    """Stored quads plus a singleton for every other leftover difference."""
    rest = set(range(1, m)) - set(S) - set(forbidden)
    quads = [(a % m, b % m) for a, b in quads]
    for a, b in quads:
        rest -= quad_cell(m, a, b)
    return DifferencePartition.make(sorted(rest), quads, m)


_HEADER = re.compile(r"^\[m=(\d+) side=([XY]) appendix=([AB])\]$")


def _numbers(text: str) -> list[int]:
    return [int(t) for t in re.findall(r"\d+", text)]


def parse_appendix(text: str) -> list[Witness]:
    out = []
    block: dict | None = None

    def flush():
        if block is None:
            return
        m, side = block["m"], block["side"]
        forbidden = forbidden_differences(m, side)
        out.append(
            Witness(
                m=m,
                side=side,
                S=tuple(sorted(block["S"])),
                cycles=tuple(block["cycles"]),
                paths=tuple(block["paths"]),
                partition=complement_partition(m, block["S"], forbidden, block["quads"]),
                q=None,
                required=tuple(sorted(block["bold"])),
                source=f"appendix {block['appendix']}",
            )
        )

    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        head = _HEADER.match(line)
        if head:
            flush()
            block = dict(
                m=int(head.group(1)), side=head.group(2), appendix=head.group(3),
                S=[], bold=[], cycles=[], paths=[], quads=[],
            )
            continue
        if block is None or "=" not in line:
            raise ValueError(f"line {lineno}: unexpected {line!r}")
        name, value = (s.strip() for s in line.split("=", 1))
        if name == "S":
            for tok in value.strip("{}").split(","):
                tok = tok.strip()
                block["S"].append(int(tok.lstrip("*")))
                if tok.startswith("*"):
                    block["bold"].append(int(tok.lstrip("*")))
        elif name == "Partition":
            for cell in re.findall(r"\{([^}]*)\}", value):
                nums = _numbers(cell)
                if len(nums) == 2 and "±" in cell:
                    block["quads"].append(tuple(nums))
                elif len(nums) != 1:
                    raise ValueError(f"line {lineno}: bad cell {cell!r}")
        elif name.startswith("C"):
            vs = _numbers(value)
            if vs[0] != vs[-1]:
                raise ValueError(f"line {lineno}: cycle does not return to its start")
            block["cycles"].append(tuple(vs[:-1]))
        elif name.startswith("Q"):
            block["paths"].append(tuple(_numbers(value)))
        else:
            raise ValueError(f"line {lineno}: unknown field {name!r}")
    flush()
    return out


def parse_flat_table(text: str, m: int = 5) -> Decomposition:
    classes = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        _, value = line.split("=", 1)
        cycles = []
        for group in re.findall(r"\(([^)]*)\)", value):
            vs = _numbers(group)
            if vs[0] != vs[-1]:
                raise ValueError(f"cycle {group!r} does not return to its start")
            cycles.append(
                DirectedCycle(Vertex("X", v) if v < m else Vertex("Y", v - m) for v in vs[:-1])
            )
        classes.append(tuple(cycles))
    return Decomposition(m, tuple(classes))


def _read(name: str) -> str:
    return resources.files(__package__).joinpath("data").joinpath(name).read_text()


@lru_cache(maxsize=None)
def _entries() -> dict:
    table: dict[int, AppendixEntry] = {}
    for fname, letter in (("appendix_a.txt", "A"), ("appendix_b.txt", "B")):
        for w in parse_appendix(_read(fname)):
            entry = table.setdefault(w.m, AppendixEntry(w.m, letter, {}))
            entry.witnesses[w.side] = w
    table[5] = AppendixEntry(5, "L4", {}, parse_flat_table(_read("m5_table.txt")))
    return table


def load(m: int) -> AppendixEntry:
    try:
        return _entries()[m]
    except KeyError:
        raise MissingEntry(f"no stored entry for m={m}") from None


def manifest() -> list[tuple[int, str, str]]:
    """Every stored (m, side, appendix) triple."""
    out = []
    for m, entry in sorted(_entries().items()):
        if entry.decomposition is not None:
            out.append((m, "XY", entry.appendix))
        out += [(m, side, entry.appendix) for side in sorted(entry.witnesses)]
    return out


@dataclass
class AuditReport:
    results: dict = field(default_factory=dict)  # (m, side) -> list of violations

    @property
    def ok(self) -> bool:
        return all(not v for v in self.results.values())

    def values_of_m(self) -> list[int]:
        return sorted({m for m, _ in self.results})

    def failed(self) -> list:
        return [key for key, v in sorted(self.results.items()) if v]

    def lines(self) -> list[str]:
        out = []
        for (m, side), violations in sorted(self.results.items()):
            status = "PASS" if not violations else "FAIL"
            out.append(f"m={m} side={side} {status}")
            out += [f"  {v}" for v in violations]
        passed = sum(1 for m in self.values_of_m() if all(
            not v for (mm, _), v in self.results.items() if mm == m))
        out.append(f"{passed}/{len(self.values_of_m())} values of m PASS")
        return out


def verify_all(appendix: str | None = None, entries: dict | None = None) -> AuditReport:
    """Certify every stored entry, optionally restricted to one appendix letter."""
    from .search import derive_spec
    from .verify import verify_decomposition, verify_witness

    report = AuditReport()
    entries = entries if entries is not None else _entries()
    for m, entry in sorted(entries.items()):
        if appendix and entry.appendix != appendix:
            continue
        if entry.decomposition is not None:
            rep = verify_decomposition(entry.decomposition)
            report.results[m, "XY"] = [str(v) for v in rep.violations]
        specs = {s.side: s for s in derive_spec(m)} if entry.witnesses else {}
        for side, w in sorted(entry.witnesses.items()):
            if side not in specs:
                report.results[m, side] = [f"no condition system for side {side}"]
                continue
            rep = verify_witness(specs[side], w)
            problems = [str(v) for v in rep.violations]
            if w.required and set(w.required) != set(specs[side].required):
                problems.append(
                    f"marked differences {sorted(w.required)} differ from required "
                    f"{sorted(specs[side].required)}"
                )
            report.results[m, side] = problems
    return report
