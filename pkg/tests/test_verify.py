import json
import random
from dataclasses import replace

import pytest
from hypothesis import given, settings, strategies as st

from dirober import dataset
from dirober.circulant import DifferencePartition
from dirober.core import Decomposition, DirectedCycle
from dirober.mutation import KINDS, RawCycle, mutate, random_mutations
from dirober.search import spec_for
from conftest import built
from dirober.verify import check_partition, verify_decomposition, verify_witness


def test_stored_m5_table_passes():
    rep = verify_decomposition(dataset.load(5).decomposition)
    assert rep.ok and rep.stats["classes"] == 9


def test_reversed_arc_in_first_class():
    d = dataset.load(5).decomposition
    c = d.classes[0][0].vertices
    flipped = (c[1], c[0]) + c[2:]
    classes = list(d.classes)
    classes[0] = (DirectedCycle(flipped),) + tuple(d.classes[0][1:])
    rep = verify_decomposition(Decomposition(5, tuple(classes)))
    assert not rep.ok
    assert {"duplicate_arc", "missing_arc"} <= rep.kinds()


def test_construct_21_passes(build):
    rep = verify_decomposition(build(21))
    assert rep.ok and rep.stats["classes"] == 41


def test_report_shapes(build):
    d, _ = mutate(build(7), "delete", random.Random(1))
    rep = verify_decomposition(d)
    doc = rep.to_dict()
    assert doc["verdict"] == "FAIL" and doc["violations"]
    assert all({"kind", "detail", "locus"} <= set(v) for v in doc["violations"])
    json.dumps(doc)
    assert rep.lines()[0].endswith(")") and rep.lines()[1].startswith("  ")


def test_class_count_and_overlap():
    d = dataset.load(5).decomposition
    rep = verify_decomposition(Decomposition(5, d.classes[:-1]))
    assert {"class_count", "missing_arc"} <= rep.kinds()
    twice = Decomposition(5, d.classes[:-1] + (d.classes[0],))
    assert "duplicate_arc" in verify_decomposition(twice).kinds()


def test_bad_vertex_reported():
    d = dataset.load(5).decomposition
    c = list(d.classes[0][0].vertices)
    c[0] = ("X", 9)
    classes = ((RawCycle(tuple(c)),) + tuple(d.classes[0][1:]),) + d.classes[1:]
    assert "bad_vertex" in verify_decomposition(Decomposition(5, classes)).kinds()


@pytest.mark.parametrize("m", [5, 9, 15, 21])
def test_mutations_fail(build, m):
    d = build(m)
    for bad, what in random_mutations(d, 60, seed=m):
        rep = verify_decomposition(bad)
        assert not rep.ok and rep.violations, what


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([5, 7, 9, 11, 13]), st.sampled_from(KINDS), st.integers(0, 2**32))
def test_any_single_mutation_fails(m, kind, seed):
    bad, what = mutate(built(m), kind, random.Random(seed))
    assert not verify_decomposition(bad).ok, what


def test_appendix_witnesses_pass():
    assert verify_witness(spec_for(19), dataset.load(19).witnesses["Y"]).ok
    for side in "XY":
        assert verify_witness(spec_for(33, side), dataset.load(33).witnesses[side]).ok


def test_shortened_path_fails():
    w = dataset.load(7).witnesses["Y"]
    paths = tuple((p[0], p[-1]) if p[0] == 5 else p for p in w.paths)
    rep = verify_witness(spec_for(7), replace(w, paths=paths))
    assert {"path_length", "uncovered_arc"} <= rep.kinds()


def test_witness_violations():
    spec = spec_for(7)
    w = dataset.load(7).witnesses["Y"]
    assert "forbidden_in_S" in verify_witness(spec, replace(w, S=w.S + (4,))).kinds()
    assert "required_missing" in verify_witness(spec, replace(w, S=(2, 3))).kinds()
    assert "uncovered_arc" in verify_witness(spec, replace(w, cycles=w.cycles[:1])).kinds()
    bad_part = DifferencePartition.make([1], [], 7)
    assert "partition_gap" in verify_witness(spec, replace(w, partition=bad_part)).kinds()
    with pytest.raises(ValueError):
        verify_witness(spec_for(9, "X"), w)


def test_overlapping_paths_fail():
    spec = spec_for(9, "Y")
    w = dataset.load(9).witnesses["Y"]
    p = list(w.paths)
    # reroute the long path through a vertex of another path
    other = p[0][1] if len(p[0]) > 2 else p[0][0]
    longest = max(range(3), key=lambda i: len(p[i]))
    p[longest] = p[longest][:1] + (other,) + p[longest][2:]
    rep = verify_witness(spec, replace(w, paths=tuple(p)))
    assert not rep.ok


def test_check_partition():
    assert check_partition(9, {1, 8}, [1, 8], []) == []
    kinds = {k for k, _ in check_partition(9, {3, 6, 1, 8}, [], [(3, 6)])}
    assert "partition_gcd" in kinds and "partition_gap" in kinds
    assert {k for k, _ in check_partition(7, {1}, [1, 2], [])} == {"partition_excess"}
