import json
from fractions import Fraction

import pytest

from psym.combinat import types_of
from psym.expansions import transition_matrix
from psym.notation import parse_expr, render_expr
from psym.tabloids import (
    FAMILIES,
    PAIR_FAMILY,
    coefficient_via_tabloids,
    crosscheck_matrices,
    enum_tabloids,
    tabloid_weights,
)

T = parse_expr


@pytest.mark.parametrize(
    "F, G, sigma, tau, value",
    [
        ("E", "H", "(3,2)^1(2,2)^2", "(2,1,1,1)^1(2,1,1)^2", -6),
        ("P", "H", "(3,3)^1(2,1)^2", "(3,2,1)^1(2,1)^2", -36),
        ("E", "P", "(3,2)^1(1,1)^2", "(2,2,1)^1(1,1)^2", Fraction(-1, 4)),
        ("Eplus", "E", "(5,2)^1(2)^2", "(2,1)^1(2,1,1)^2", -1),
        ("Eplus", "H", "(4,2)^1(2,1)^2", "(2)^1(1,1,1)^2(1)^4", -2),
        ("Eplus", "P", "(5,2)^1(2)^2", "(2,1)^1(2,1,1)^2", Fraction(1, 4)),
        ("E", "Eplus", "(6,2)^1(2)^2", "(2,2)^1(1,1)^2(1)^4", -3),
        ("H", "Eplus", "(4,2)^1(2,2)^2", "(2)^1(2)^2(1,1)^4", 3),
        ("P", "Eplus", "(4,2)^1(2,2)^2", "(2,2,1,1,1)^2", -48),
        ("P", "Eplus", "(3,2)^1(1)^2", "(2,1,1,1)^1(1)^2", 5),
    ],
)
def test_worked_coefficients(F, G, sigma, tau, value):
    assert coefficient_via_tabloids(F, G, T(sigma), T(tau)) == value


@pytest.mark.parametrize(
    "family, sigma, tau, count",
    [
        ("simple", "(5,3)^1(2,1)^2(3,2)^3", "(3,2,2,1)^1(2,1)^2(2,2,1)^3", 14),
        ("osimp", "(5,3)^1(2,1)^2(3,2)^3", "(3,2,2,1)^1(2,1)^2(2,2,1)^3", 6),
        ("simple", "(3,2)^1(2,2)^2", "(2,1,1,1)^1(2,1,1)^2", 6),
        ("simple", "(3,3)^1(2,1)^2", "(3,2,1)^1(2,1)^2", 4),
        ("osimp", "(3,2)^1(1,1)^2", "(2,2,1)^1(1,1)^2", 4),
        ("odoub", "(5,2)^1(2)^2", "(2,1)^1(2,1,1)^2", 4),
        ("dyad", "(6,2)^1(2)^2", "(2,2)^1(1,1)^2(1)^4", 3),
        ("dyad_singular", "(4,2)^1(2,2)^2", "(2,2,1,1,1)^2", 3),
        ("dyad_singular", "(3,2)^1(1)^2", "(2,1,1,1)^1(1)^2", 3),
    ],
)
def test_enumeration_counts(family, sigma, tau, count):
    tabs = enum_tabloids(family, T(sigma), T(tau))
    assert len(tabs) == count
    assert len(set(tabs)) == count


def test_row_end_products():
    tabs = enum_tabloids("simple", T("(3,3)^1(2,1)^2"), T("(3,2,1)^1(2,1)^2"))
    assert sorted(tabloid_weights(t).L for t in tabs) == [6, 6, 12, 12]
    tabs = enum_tabloids("dyad_singular", T("(4,2)^1(2,2)^2"), T("(2,2,1,1,1)^2"))
    assert [tabloid_weights(t).L_star for t in tabs] == [16, 16, 16]
    tabs = enum_tabloids("dyad_singular", T("(3,2)^1(1)^2"), T("(2,1,1,1)^1(1)^2"))
    assert sorted(tabloid_weights(t).L_star for t in tabs) == [1, 2, 2]


def test_weights_split_by_family():
    w = tabloid_weights(enum_tabloids("simple", T("(2)^1"), T("(2)^1"))[0])
    assert w.L == 2 and w.L_star is None
    w = tabloid_weights(enum_tabloids("dyad", T("(2)^1"), T("(1)^2"))[0])
    assert w.L is None and w.L_star == 2


@pytest.mark.parametrize("n", range(5))
def test_crosscheck_against_matrices(n):
    report = crosscheck_matrices(n)
    assert report.ok, report.mismatches[:3]
    assert report.compared == len(PAIR_FAMILY) * len(types_of(n)) ** 2


def test_crosscheck_size_five():
    assert crosscheck_matrices(5).ok


def test_orientation_entry():
    M = transition_matrix("H", "E", 3)
    assert M.entry(T("(2,1)^1"), T("(3)^1")) == coefficient_via_tabloids("H", "E", T("(3)^1"), T("(2,1)^1"))
    M = transition_matrix("H", "E", 4)
    assert M.entry(T("(2,1,1)^1"), T("(3,1)^1")) == -2


@pytest.mark.parametrize("family", FAMILIES)
def test_tabloids_tile_shape_with_content(family):
    n = 4
    sigmas = types_of(n)
    if family in ("brick", "ordered_brick"):
        sigmas = [s for s in sigmas if set(s.multiplicities) <= {1}]
    seen = 0
    for sigma in sigmas:
        for tau in sigmas:
            for t in enum_tabloids(family, sigma, tau):
                assert t.tiles_shape()
                assert t.content() == tau
                assert t.shape == sigma
                seen += 1
    assert seen > 0


def test_brick_tabloids_take_partitions():
    assert len(enum_tabloids("brick", (2, 1), (1, 1, 1))) == 1
    assert len(enum_tabloids("brick", (3,), (2, 1))) == 2
    with pytest.raises(ValueError):
        enum_tabloids("brick", T("(1)^2"), T("(1,1)^1"))


def test_bad_arguments():
    with pytest.raises(ValueError):
        enum_tabloids("nope", T("(1)^1"), T("(1)^1"))
    with pytest.raises(ValueError):
        enum_tabloids("simple", T("(2)^1"), T("(1)^1"))
    with pytest.raises(ValueError):
        coefficient_via_tabloids("H", "H", T("(1)^1"), T("(1)^1"))
    assert coefficient_via_tabloids("H", "E", T("(2)^1"), T("(1)^1")) == 0


def test_empty_type():
    empty = T("0")
    for F, G in PAIR_FAMILY:
        assert coefficient_via_tabloids(F, G, empty, empty) == 1


def test_json_output():
    t = enum_tabloids("odoub", T("(5,2)^1(2)^2"), T("(2,1)^1(2,1,1)^2"))[0]
    data = json.loads(json.dumps(t.to_json()))
    assert data["family"] == "odoub"
    assert data["shape"] == "(5,2)^1(2)^2"
    assert data["content"] == "(2,1)^1(2,1,1)^2"
    assert sum(b["len"] for b in data["bricks"]) == 9
    assert sum(b["factor"] * b["len"] for b in data["bricks"]) == 11
    assert any("label" in b for b in data["bricks"])
