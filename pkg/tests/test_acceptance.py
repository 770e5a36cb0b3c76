"""End-to-end acceptance criteria, one test per criterion.

Each test records a one-line verdict; the lines are printed in the pytest
terminal summary, or directly when this file is run as a script.
"""
import random
import time
from math import gcd

import pytest

from dirober import dataset
from dirober.assembly import partitions_used
from dirober.circulant import DifferencePartition, circulant_arcs, decompose_circulant, quad_cell, quad_decompose, singleton_cycle
from dirober.cli import main
from dirober.core import parse, x, y
from dirober.mutation import random_mutations
from dirober.params import params_nonzero, params_zero
from dirober.rotation import leftover_structure
from dirober.search import SearchBudget, search_witness, spec_for
from dirober.verify import verify_decomposition, verify_witness

ALL_M = list(range(5, 50, 2))
APPENDIX_A = [7, 11, 13, 17, 19, 23, 25, 29, 31, 35, 37, 41, 43, 47, 49]
APPENDIX_B = [9, 15, 21, 27, 33, 39, 45]
RESULTS = {}


def record(n, ok, detail):
    RESULTS[n] = f"criterion {n} {'PASS' if ok else 'FAIL'}: {detail}"
    assert ok, RESULTS[n]


def test_criterion_1_full_reproduction(tmp_path, capsys):
    start = time.monotonic()
    failures = []
    for m in ALL_M:
        path = tmp_path / f"d{m}.json"
        code = main(["construct", "-m", str(m), "-o", str(path)])
        capsys.readouterr()
        if code != 0:
            failures.append(f"m={m} exit {code}")
            continue
        d = parse(path.read_bytes(), m)
        rep = verify_decomposition(d)
        classes_ok = len(d.classes) == 2 * m - 1 and all(
            len(cls) == 2 and all(len(c) == m for c in cls) for cls in d.classes)
        arcs = sum(len(c) for cls in d.classes for c in cls)
        if not (rep.ok and classes_ok and arcs == 2 * m * (2 * m - 1)):
            failures.append(f"m={m}")
    elapsed = time.monotonic() - start
    record(1, not failures and elapsed < 60,
           f"{len(ALL_M) - len(failures)}/{len(ALL_M)} values of m certified in {elapsed:.1f}s"
           + (f"; failed {failures}" if failures else ""))


def test_criterion_2_appendix_fidelity():
    report = dataset.verify_all()
    ms = report.values_of_m()
    by_letter = {letter: sorted({m for m, _, a in dataset.manifest() if a == letter}) for letter in "AB"}
    ok = (report.ok and ms == ALL_M and by_letter["A"] == APPENDIX_A and by_letter["B"] == APPENDIX_B
          and all((m, s) in report.results for m in APPENDIX_B for s in "XY"))
    record(2, ok, report.lines()[-1] + (f"; failed {report.failed()}" if report.failed() else ""))


def test_criterion_3_parameter_tables():
    problems = []
    for m in [m for m in range(7, 50, 2) if m % 3 and m != 11]:
        p = params_nonzero(m)
        if gcd(p.d, m) != 1 or p.r1 + p.r2 != m - 2 or p.k + 1 in (p.d, p.d1Y, p.d2Y):
            problems.append(f"m={m} invariants")
        if {p.d1Y, p.d2Y} != set(dataset.load(m).witnesses["Y"].required):
            problems.append(f"m={m} bold Y")
    for m in [m for m in range(15, 46, 2) if m % 3 == 0]:
        p = params_zero(m)
        e = dataset.load(m)
        if gcd(m, p.t1) != 3:
            problems.append(f"m={m} gcd")
        if {p.d1Y, p.d2Y} != set(e.witnesses["Y"].required):
            problems.append(f"m={m} bold Y")
        if {p.d1X, p.d2X} != set(e.witnesses["X"].required):
            problems.append(f"m={m} bold X")
    p17 = params_nonzero(17)
    if {p17.d1Y, p17.d2Y} != {2, 5}:
        problems.append("m=17 example")
    record(3, not problems, "14 + 6 parameter rows match invariants and marked differences"
           if not problems else f"problems {problems}")


def test_criterion_4_leftover_dichotomy():
    bad = []
    for m in ALL_M:
        lengths = [len(c) for c in leftover_structure(m)]
        expected = [2 * m] if m % 3 else [2 * m // 3] * 3
        if lengths != expected:
            bad.append(m)
    c1 = leftover_structure(9)[0].vertices
    want = (x(0, 9), y(5, 9), x(3, 9), y(2, 9), x(6, 9), y(8, 9))
    record(4, not bad and c1 == want,
           f"dichotomy holds for {len(ALL_M) - len(bad)}/{len(ALL_M)} values; m=9 first cycle "
           + ("matches" if c1 == want else f"is {c1}"))


def _cell_ok(m, cell, cycles):
    arcs = []
    for c in cycles:
        if sorted(c) != list(range(m)):
            return False
        arcs += [(c[i], c[(i + 1) % m]) for i in range(m)]
    return sorted(arcs) == sorted(circulant_arcs(m, cell))


def test_criterion_5_circulant_cells():
    start = time.monotonic()
    cells = set()
    for m in ALL_M:
        parts = list(partitions_used(m).values())
        parts += [w.partition for w in (dataset.load(m).witnesses.values() if m != 5 else ())]
        for part in parts:
            cells |= {(m, "s", d) for d in part.singletons}
            cells |= {(m, "q", a, b) for a, b in part.quads}
    bad = []
    for cell in sorted(cells):
        m = cell[0]
        if cell[1] == "s":
            ok = _cell_ok(m, {cell[2]}, [singleton_cycle(m, cell[2])])
        else:
            ok = _cell_ok(m, quad_cell(m, cell[2], cell[3]), quad_decompose(m, cell[2], cell[3], use_cache=False))
        if not ok:
            bad.append(cell)
    rng = random.Random(2024)
    pool = [(m, a, b) for m in range(5, 26, 2) for a in range(1, m // 2 + 1)
            for b in range(a + 1, m // 2 + 1) if gcd(gcd(a, b), m) == 1]
    sample = [pool[rng.randrange(len(pool))] for _ in range(50)]
    for m, a, b in sample:
        p = DifferencePartition.make([], [(a, b)], m)
        if not _cell_ok(m, quad_cell(m, a, b), decompose_circulant(m, p)):
            bad.append((m, "random", a, b))
    elapsed = time.monotonic() - start
    record(5, not bad and elapsed < 300,
           f"{len(cells)} construction cells and 50 random quads decomposed exactly in {elapsed:.1f}s"
           + (f"; bad {bad[:5]}" if bad else ""))


def test_criterion_6_search_reproduction():
    lines, ok = [], True
    for m, side in [(7, None), (9, "X"), (9, "Y"), (13, None)]:
        spec = spec_for(m, side)
        start = time.monotonic()
        try:
            w = search_witness(spec, SearchBudget(nodes=None, seconds=600))
            good = verify_witness(spec, w).ok
        except Exception as exc:  # exhaustion is a failure of the criterion
            good, w = False, exc
        elapsed = time.monotonic() - start
        ok &= good and elapsed < 600
        label = f"m={m}{side or ''}"
        lines.append(f"{label} S={{{','.join(map(str, w.S))}}} {elapsed:.1f}s" if good else f"{label} failed")
    record(6, ok, "; ".join(lines))


def test_criterion_7_mutation_sensitivity():
    from dirober.assembly import construct

    counts = {}
    for m in (5, 9, 15, 21):
        d = construct(m)
        assert verify_decomposition(d).ok
        caught = 0
        for bad, _ in random_mutations(d, 100, seed=m):
            rep = verify_decomposition(bad)
            caught += (not rep.ok) and bool(rep.violations)
        counts[m] = caught
    record(7, all(v == 100 for v in counts.values()),
           ", ".join(f"m={m}: {c}/100 caught" for m, c in counts.items()))


if __name__ == "__main__":
    import sys

    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
