from dataclasses import replace
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from psym.combinat import TypeIndex, enum_family, psort, types_of
from psym.expansions import (
    IDENTITY_TAGS,
    PAIRS,
    RECURSIONS,
    Expansion,
    TransitionMatrix,
    collect_types,
    expand_elementary,
    expand_type_element,
    matrix_checks,
    omega_conjugate_P,
    oracle_verify,
    transition_matrix,
    verify_expansion,
)
from psym.notation import parse_expr, render_expr

T = parse_expr


def column(e):
    return {render_expr(k): v for k, v in e.terms.items()}


def test_h_in_e_degree_4():
    assert column(collect_types(expand_elementary("H", "E", 4))) == {
        "(1,1,1,1)^1": 1, "(2,1,1)^1": -3, "(3,1)^1": 2, "(2,2)^1": 1, "(4)^1": -1,
    }


def test_h_in_p_entry():
    assert collect_types(expand_elementary("H", "P", 4)).coefficient(T("(1,1,1,1)^1")) == Fraction(1, 24)


def test_eplus_in_e_column():
    col = column(collect_types(expand_elementary("Eplus", "E", 4)))
    assert col["(2)^1(1)^2"] == -1
    assert col["(2)^2"] == 1


def test_p_in_h_entry():
    assert collect_types(expand_elementary("P", "H", 4)).coefficient(T("(3,1)^1")) == -4


def test_fiber_sum():
    e = expand_elementary("H", "E", 4)
    fiber = [d for d in e.terms if psort(d) == T("(2,1,1)^1")]
    assert len(fiber) == 3 and all(e.terms[d] == -1 for d in fiber)
    assert collect_types(Expansion("H", "E", 0, {})).terms == {}
    hp3 = collect_types(expand_elementary("H", "P", 3))
    assert hp3.coefficient(T("(2,1)^1")) == Fraction(1, 2)


def test_degree_zero():
    for F, G in PAIRS:
        e = expand_elementary(F, G, 0)
        assert list(e.terms.values()) == [1]


def test_unsupported_pair():
    with pytest.raises(ValueError):
        expand_elementary("H", "H", 2)
    with pytest.raises(ValueError):
        expand_elementary("H", "S", 2)


def test_type_element_examples():
    e = expand_type_element("E", "H", T("(3,2)^1(2,2)^2"))
    assert e.coefficient(T("(2,1,1,1)^1(2,1,1)^2")) == -6
    p = expand_type_element("P", "H", T("(3,3)^1(2,1)^2"))
    assert p.coefficient(T("(3,2,1)^1(2,1)^2")) == -36
    assert column(expand_type_element("H", "E", T("(3,1)^1"))) == {"(1,1,1,1)^1": 1, "(2,1,1)^1": -2, "(3,1)^1": 1}


def test_p_in_eplus_column():
    M = transition_matrix("P", "Eplus", 4)
    col = {render_expr(r): v for r, v in M.column(T("(4)^1")).items()}
    assert col == {
        "(1)^4": 4, "(1,1)^2": -2, "(1,1,1,1)^1": -1, "(2,1,1)^1": 4,
        "(3,1)^1": -4, "(2)^2": 4, "(2,2)^1": -2, "(4)^1": 4,
    }


def test_trivial_matrix():
    M = transition_matrix("H", "E", 0)
    assert M.dense() == [[1]]


@pytest.mark.parametrize("pair", PAIRS)
def test_appendix_matrices(appendix, pair):
    M = transition_matrix(*pair, 4)
    expected = appendix[pair]
    assert len(expected) == 121
    for (row, col), v in expected.items():
        assert M.entry(T(row), T(col)) == v, (pair, row, col)


@pytest.mark.parametrize("n", range(6))
def test_matrix_checks(n):
    report = matrix_checks(n)
    assert report.ok, report.failures[:3]


@pytest.mark.parametrize("n", range(6))
def test_omega_diagonal(n):
    omega = omega_conjugate_P(n)
    for s in types_of(n):
        for t in types_of(n):
            assert omega.entry(t, s) == ((-1) ** s.length if s == t else 0)


@pytest.mark.parametrize("identity", IDENTITY_TAGS)
@pytest.mark.parametrize("d", range(5))
def test_oracle(identity, d):
    r = oracle_verify(identity, d, max(d, 1))
    assert r.ok, (r.witness, r.left, r.right)


def test_oracle_named_cases():
    assert oracle_verify("H-in-E", 3, 3)
    assert oracle_verify("HE_conv", 4, 4)
    assert oracle_verify("HE_conv", 0)
    assert set(RECURSIONS) <= set(IDENTITY_TAGS) and len(IDENTITY_TAGS) == 17
    with pytest.raises(ValueError):
        oracle_verify("bogus", 2)


def test_oracle_detects_perturbation():
    e = expand_elementary("P", "Eplus", 4)
    key = next(iter(e.terms))
    bad = replace(e, terms={**e.terms, key: e.terms[key] + 1})
    r = verify_expansion(bad, 4)
    assert not r.ok
    assert r.witness is not None and r.left != r.right


def test_matrix_serialization():
    M = transition_matrix("H", "P", 4)
    assert TransitionMatrix.from_json(M.to_json()) == M
    assert "\\frac{1}{24}" in M.to_latex()
    assert "1/24" in M.to_csv() and "1/24" in M.to_text()
    assert "." not in M.to_csv()


def test_matrix_product_orientation():
    a, b = transition_matrix("H", "E", 3), transition_matrix("E", "P", 3)
    assert (b @ a) == transition_matrix("H", "P", 3)
    with pytest.raises(ValueError):
        a @ a


@pytest.mark.parametrize("F, G", PAIRS)
@pytest.mark.parametrize("d", range(7))
def test_terms_sizes_and_families(F, G, d):
    e = expand_elementary(F, G, d)
    assert all(k.size == d for k in e.terms)
    assert all(v != 0 for v in e.terms.values())


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(PAIRS), st.integers(0, 5).flatmap(lambda n: st.sampled_from(types_of(n))))
def test_type_element_rows_have_source_size(pair, sigma):
    e = expand_type_element(*pair, sigma)
    assert all(t.size == sigma.size for t in e.terms)


@pytest.mark.parametrize("F, G", [("Eplus", "E"), ("Eplus", "H"), ("Eplus", "P"), ("H", "Eplus"), ("E", "Eplus"), ("P", "Eplus")])
def test_type_element_single_block_matches_elementary(F, G):
    for d in range(1, 6):
        assert expand_type_element(F, G, TypeIndex.single(d)).terms == collect_types(expand_elementary(F, G, d)).terms
