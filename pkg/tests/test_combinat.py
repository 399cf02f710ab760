from collections import Counter
from fractions import Fraction
from itertools import permutations
from math import factorial

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from psym.combinat import (
    FAMILY_TAGS,
    Block,
    Polycomposition,
    TypeIndex,
    Z_composition,
    block_stats,
    compositions,
    distinct_parts,
    enum_family,
    harmonic_Z_sum,
    is_member,
    part_multiplicities,
    partitions,
    psort,
    types_of,
    z_partition,
    z_tensor,
)
from psym.notation import parse_expr, render_expr

RUNNING = Polycomposition(((1, (3, 1, 2, 2)), (2, (1, 2, 1)), (4, (1, 5))))


def test_partitions_of_4():
    assert partitions(4) == ((1, 1, 1, 1), (2, 1, 1), (2, 2), (3, 1), (4,))
    assert enum_family("par", 4) == partitions(4)


def test_compositions_counts():
    assert compositions(0) == ((),)
    for n in range(1, 11):
        assert len(compositions(n)) == 2 ** (n - 1)


def test_pcom_4_has_14():
    assert len(enum_family("pcom", 4)) == 14
    assert enum_family("pcom", 0) == (Polycomposition(),)


def test_types_of_4_match_appendix_labels():
    labels = {
        "(1)^4", "(1)^1(1)^3", "(1,1)^2", "(1,1)^1(1)^2", "(1,1,1,1)^1", "(2)^1(1)^2",
        "(2,1,1)^1", "(3,1)^1", "(2)^2", "(2,2)^1", "(4)^1",
    }
    assert {render_expr(t) for t in types_of(4)} == labels


def test_psort_running_example():
    assert psort(RUNNING) == parse_expr("(3,2,2,1)^1(2,1,1)^2(5,1)^4")
    assert psort(Polycomposition()) == TypeIndex()
    t = parse_expr("(2,2)^3")
    assert psort(t) == t


def test_block_stats():
    assert block_stats(RUNNING).length == 9
    assert block_stats(parse_expr("(2,1)^2(5,1,4)^5", "pcom")).last_block_size == 20
    empty = block_stats(Polycomposition())
    assert empty.length == 0 and empty.last_block_size is None
    with pytest.raises(ValueError):
        Polycomposition().last_block_size


def test_block_form():
    assert RUNNING.blocks() == ((3, 1), (1, 1), (2, 1), (2, 1), (1, 2), (2, 2), (1, 2), (1, 4), (5, 4))
    assert Block(3, 4).size == 12
    with pytest.raises(ValueError):
        Block(0, 1)


def test_z_values():
    assert z_partition((2, 2, 1)) == 8
    assert z_partition(()) == 1
    assert z_partition((1,) * 5) == 120
    assert z_partition((7,)) == 7
    assert Z_composition((3, 2, 4)) == 135
    assert Z_composition((6,)) == 6
    assert Z_composition(()) == 1
    assert Fraction(1, Z_composition((2, 1))) + Fraction(1, Z_composition((1, 2))) == Fraction(1, 2)


def test_z_tensor():
    assert z_tensor(parse_expr("(2,2,1)^1(1,1)^2")) == 16
    assert z_tensor(parse_expr("(2,1)^1(2,1,1)^2")) == 8
    assert z_tensor(TypeIndex()) == 1


def test_invalid_objects():
    with pytest.raises(ValueError):
        Polycomposition(((2, (1,)), (1, (1,))))
    with pytest.raises(ValueError):
        Polycomposition(((1, ()),))
    with pytest.raises(ValueError):
        TypeIndex(((1, (1, 2)),))
    with pytest.raises(ValueError):
        enum_family("nope", 3)
    with pytest.raises(ValueError):
        enum_family("pcom", -1)


@pytest.mark.parametrize("n", range(13))
def test_pcom_count_formula(n):
    expected = sum(2 ** (len(lam) - distinct_parts(lam)) for lam in partitions(n))
    assert len(enum_family("pcom", n)) == expected


@pytest.mark.parametrize("n", range(1, 11))
def test_harmonic_mean_of_Z(n):
    for lam in partitions(n):
        assert harmonic_Z_sum(lam) == Fraction(1, z_partition(lam))


def _cycle_lengths_canonical(perm):
    # cycles written with minima decreasing; read their lengths left to right
    n, seen, cycles = len(perm), set(), []
    for start in range(n):
        if start in seen:
            continue
        c, i = [], start
        while i not in seen:
            seen.add(i)
            c.append(i)
            i = perm[i]
        cycles.append(c)
    cycles.sort(key=lambda c: -min(c))
    return tuple(len(c) for c in cycles)


@pytest.mark.parametrize("n", range(1, 7))
def test_K_alpha_counts_by_brute_force(n):
    counts = Counter(_cycle_lengths_canonical(p) for p in permutations(range(n)))
    for alpha in compositions(n):
        assert counts[alpha] == factorial(n) // Z_composition(alpha)


@pytest.mark.parametrize("n", range(9))
def test_sqf_matches_compositions(n):
    sqf = enum_family("pcom_sqf", n)
    assert len(sqf) == len(compositions(n))
    assert {Polycomposition.square_free(a) for a in compositions(n)} == set(sqf)


@pytest.mark.parametrize("kind", FAMILY_TAGS)
@pytest.mark.parametrize("n", range(7))
def test_families_complete_and_consistent(kind, n):
    objs = enum_family(kind, n)
    assert len(set(objs)) == len(objs)
    assert enum_family(kind, n) == objs
    for obj in objs:
        assert is_member(kind, obj)
        if kind not in ("par", "com"):
            assert obj.size == n
    if kind.startswith("pcom") and kind != "pcom":
        full = set(enum_family("pcom", n))
        assert set(objs) <= full
        members = {d for d in full if is_member(kind, d)}
        assert members == set(objs)


def test_restricted_family_examples():
    assert is_member("pcom_sqf", parse_expr("(3,1,2,1)^1", "pcom"))
    assert is_member("pcom_P", parse_expr("(3,1)^1(1,2,1)^2", "pcom"))
    assert is_member("pcom_E", parse_expr("(3,1)^1(4)^2", "pcom"))
    assert is_member("pcom_H", parse_expr("(2)^1(1,2,2)^2", "pcom"))
    assert is_member("pcom_dyad", parse_expr("(1,1)^1(1)^2(2,1)^8", "pcom"))
    assert is_member("pcom_dyad_rows1", parse_expr("(1)^1(3)^2(2)^4(1)^8", "pcom"))
    assert is_member("pcom_dyad_singular", parse_expr("(1,2,2,1)^8", "pcom"))
    assert not is_member("pcom_dyad", parse_expr("(1)^3", "pcom"))
    assert not is_member("pcom_E", parse_expr("(1)^1(1,1)^2", "pcom"))


def test_type_order_is_graded():
    ts = [t for n in range(6) for t in types_of(n)]
    assert ts == sorted(ts)
    assert all(a.size <= b.size for a, b in zip(ts, ts[1:]))


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 8).flatmap(lambda n: st.sampled_from(enum_family("pcom", n))))
def test_psort_idempotent_and_size_preserving(delta):
    tau = psort(delta)
    assert tau.size == delta.size
    assert psort(tau) == tau
    assert TypeIndex.from_blocks(delta.blocks()) == tau
    assert Counter(tau.blocks()) == Counter(delta.blocks())


@given(st.lists(st.integers(1, 6), max_size=8))
def test_multiplicity_statistics(parts):
    m = part_multiplicities(parts)
    assert sum(i * k for i, k in m.items()) == sum(parts)
    assert distinct_parts(parts) == len(m)
