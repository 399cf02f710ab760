import pytest
from hypothesis import given
from hypothesis import strategies as st

from psym.combinat import enum_family, partitions
from psym.oeis import (
    SEQUENCE_PAIRS,
    SEQUENCE_TAGS,
    A_sup,
    cancelled_fibers,
    count_nonzero_types,
    divisor_identity_check,
    divisor_identity_terms,
    p,
    sequence,
    sequence_table,
)

PUBLISHED = {
    "A006951": [1, 1, 3, 6, 14, 27, 60, 117, 246, 490, 1002],
    "A025065_TH": [1, 1, 2, 2, 4, 4, 7, 7, 12, 12, 19, 19],
    "A002513_TP": [1, 1, 3, 4, 9, 12, 23, 31, 54, 73, 118, 159],
    "A018819_THsup": [1, 1, 2, 2, 4, 4, 6, 6, 10, 10, 14, 14],
}


@pytest.mark.parametrize("name", sorted(PUBLISHED))
def test_published_prefixes(name):
    ref = PUBLISHED[name]
    assert sequence(name, len(ref)) == ref


def test_te_prefix():
    values = sequence("A024786_TE", 13)
    assert values[:4] == [1, 1, 3, 4]
    # the commonly quoted listing skips the d = 1 term
    assert values[:1] + values[2:] == [1, 3, 4, 8, 11, 19, 26, 41, 56, 83, 112, 160]


def test_te_sup_and_tp_sup_values():
    assert sequence("A092119_TEsup", 6)[5] == 13
    assert [A_sup(k) for k in (1, 2, 3, 4, 6, 12)] == [1, 3, 3, 8, 14, 91]


@pytest.mark.parametrize("name", sorted(SEQUENCE_PAIRS))
@pytest.mark.parametrize("d", range(9))
def test_formula_counts_expansion(name, d):
    F, G = SEQUENCE_PAIRS[name]
    assert count_nonzero_types(F, G, d) == sequence(name, d + 1)[d]


@pytest.mark.parametrize("name", sorted(SEQUENCE_PAIRS))
def test_formula_counts_expansion_up_to_ten(name):
    F, G = SEQUENCE_PAIRS[name]
    assert [count_nonzero_types(F, G, d) for d in (9, 10)] == sequence(name, 11)[9:]


def test_pcom_count_matches_enumeration():
    assert [len(enum_family("pcom", d)) for d in range(9)] == sequence("A006951", 9)


@pytest.mark.parametrize("name", sorted(SEQUENCE_PAIRS))
def test_no_cancelled_fibers(name):
    F, G = SEQUENCE_PAIRS[name]
    for d in range(8):
        assert cancelled_fibers(F, G, d) == []


def test_partition_numbers():
    assert [p(n) for n in range(25)] == [sum(1 for _ in partitions(n)) for n in range(25)]
    assert p(-1) == 0
    assert p(100) == 190569292


def test_divisor_identity_at_twelve():
    s = divisor_identity_terms(12)
    assert (s.positive, s.negative, s.value) == (180, 180, 0)


@pytest.mark.parametrize("m", range(1, 61))
def test_divisor_identity(m):
    assert divisor_identity_check(m) == 0


def test_divisor_identity_rejects_zero():
    with pytest.raises(ValueError):
        divisor_identity_terms(0)


@given(st.integers(min_value=1, max_value=30))
def test_a_sup_halving(k):
    assert A_sup(2 * k) == p(2 * k) + A_sup(k)
    assert A_sup(2 * k - 1) == p(2 * k - 1)


def test_sequence_table_flags():
    rows = sequence_table("A002513_TP", 13, expand_up_to=6)
    assert [r.d for r in rows] == list(range(13))
    assert all(r.match for r in rows[:7])
    assert all(r.expansion is None and r.match is None for r in rows[7:])
    assert [r.extrapolated for r in rows] == [False] * 12 + [True]
    assert not any(r.extrapolated for r in sequence_table("A025065_TH", 13, expand_up_to=4))


def test_sequence_arguments():
    assert set(SEQUENCE_TAGS) == set(SEQUENCE_PAIRS) | {"A006951"}
    with pytest.raises(ValueError):
        sequence("A000045", 3)
    with pytest.raises(ValueError):
        sequence("A006951", 0)
