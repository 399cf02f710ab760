"""Brick tabloids on the tensor diagram of a type, and transition coefficients
recomputed from them.

The diagram of a type sigma has one tensor factor per multiplicity r, whose
rows are the parts of sigma's group at r.  A tabloid tiles every row with
bricks.  A plain brick of length a in factor m contributes the block a^m to
the content; a doublebrick of length 2b contributes b^(2m); a k-brick of
length 2^k b contributes b^(2^k m).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product as cartesian
from math import prod
from typing import Iterator, Optional

from .combinat import TypeIndex, compositions, types_of, z_tensor
from .notation import render_expr

FAMILIES = (
    "simple",
    "osimp",
    "doub",
    "doub_E",
    "doub_H",
    "odoub",
    "dyad",
    "dyad_distinct",
    "dyad_singular",
    "brick",
    "ordered_brick",
)

LABELED = ("osimp", "odoub", "ordered_brick")
DYADIC = ("dyad", "dyad_distinct", "dyad_singular")

# (from, to) -> the family whose tabloids compute that coefficient
PAIR_FAMILY = {
    ("H", "E"): "simple",
    ("E", "H"): "simple",
    ("P", "H"): "simple",
    ("P", "E"): "simple",
    ("H", "P"): "osimp",
    ("E", "P"): "osimp",
    ("Eplus", "E"): "doub_E",
    ("Eplus", "H"): "doub_H",
    ("Eplus", "P"): "odoub",
    ("E", "Eplus"): "dyad",
    ("H", "Eplus"): "dyad_distinct",
    ("P", "Eplus"): "dyad_singular",
}


@dataclass(frozen=True, order=True)
class Brick:
    """A brick in row ``row`` (0 = longest) of tensor factor ``factor``.

    ``kind`` is "plain", "double" or "kbrick"; ``k`` is the dyadic marking of
    a k-brick and ``label`` the label of an ordered tabloid's brick.
    """

    factor: int
    row: int
    start: int
    length: int
    kind: str = "plain"
    k: int = 0
    label: Optional[int] = None

    def block(self) -> tuple[int, int]:
        """The (degree, multiplicity) block this brick contributes to the content."""
        if self.kind == "plain":
            return self.length, self.factor
        if self.kind == "double":
            return self.length // 2, 2 * self.factor
        return self.length >> self.k, self.factor << self.k

    def is_valid(self) -> bool:
        if self.length < 1:
            return False
        if self.kind == "double":
            return self.length % 2 == 0
        if self.kind == "kbrick":
            return self.k >= 0 and self.length % (1 << self.k) == 0
        return self.kind == "plain"

    def to_json(self) -> dict:
        out = {"factor": self.factor, "row": self.row, "start": self.start, "len": self.length, "kind": self.kind}
        if self.kind == "kbrick":
            out["k"] = self.k
        if self.label is not None:
            out["label"] = self.label
        return out


@dataclass(frozen=True)
class Tabloid:
    shape: TypeIndex
    family: str
    bricks: tuple[Brick, ...]

    def content(self) -> TypeIndex:
        return TypeIndex.from_blocks(b.block() for b in self.bricks)

    def rows(self) -> dict[tuple[int, int], list[Brick]]:
        out: dict[tuple[int, int], list[Brick]] = {}
        for b in sorted(self.bricks):
            out.setdefault((b.factor, b.row), []).append(b)
        return out

    def tiles_shape(self) -> bool:
        """Bricks cover every row of the shape exactly, without overlap."""
        rows = self.rows()
        expected = {(r, i): length for r, parts in self.shape.groups for i, length in enumerate(parts)}
        if set(rows) != set(expected):
            return False
        for key, bricks in rows.items():
            pos = 0
            for b in bricks:
                if b.start != pos or not b.is_valid():
                    return False
                pos += b.length
            if pos != expected[key]:
                return False
        return True

    def to_json(self) -> dict:
        return {
            "shape": render_expr(self.shape),
            "content": render_expr(self.content()),
            "family": self.family,
            "bricks": [b.to_json() for b in self.bricks],
        }


@dataclass(frozen=True)
class TabloidWeights:
    l1: int
    l2: int
    L: Optional[int]
    L_star: Optional[int]


def tabloid_weights(t: Tabloid) -> TabloidWeights:
    """Brick and doublebrick counts and the product of row-ending brick lengths.

    The row-end product is reported as ``L`` for brick families and as
    ``L_star`` for dyadic ones.
    """
    l1 = sum(1 for b in t.bricks if b.kind != "double")
    l2 = sum(1 for b in t.bricks if b.kind == "double")
    ends = prod(bricks[-1].length for bricks in t.rows().values())
    if t.family in DYADIC:
        return TabloidWeights(l1, l2, None, ends)
    return TabloidWeights(l1, l2, ends, None)


# -- row tilings for the unlabeled families -----------------------------------------

Piece = tuple[int, str, int]  # (length, kind, k)


def _plain(parts) -> tuple[Piece, ...]:
    return tuple((a, "plain", 0) for a in parts)


def _doubles(parts) -> tuple[Piece, ...]:
    return tuple((2 * b, "double", 0) for b in parts)


@lru_cache(maxsize=None)
def _row_tilings(family: str, length: int) -> tuple[tuple[Piece, ...], ...]:
    if family in ("simple", "brick"):
        return tuple(_plain(c) for c in compositions(length))
    if family in ("doub", "doub_E", "doub_H"):
        out = []
        for a in range(length, -1, -2):
            half = (length - a) // 2
            plains = compositions(a) if family != "doub_H" else ([(a,)] if a else [()])
            doubles = compositions(half) if family != "doub_E" else ([(half,)] if half else [()])
            for alpha in plains:
                for beta in doubles:
                    out.append(_plain(alpha) + _doubles(beta))
        return tuple(out)
    if family in DYADIC:
        out = []

        def rec(remaining: int, kmin: int, acc: tuple[Piece, ...]):
            if remaining == 0:
                out.append(acc)
                return
            ks = [acc[-1][2]] if (family == "dyad_singular" and acc) else range(kmin, remaining.bit_length())
            for k in ks:
                step = 1 << k
                for size in range(step, remaining + 1, step):
                    nxt = k + 1 if family == "dyad_distinct" else k
                    rec(remaining - size, nxt, acc + ((size, "kbrick", k),))

        rec(length, 0, ())
        return tuple(out)
    raise ValueError(f"no row tilings for family {family!r}")


def _rows_of(sigma: TypeIndex) -> list[tuple[int, int, int]]:
    return [(r, i, length) for r, parts in sigma.groups for i, length in enumerate(parts)]


def _place(rows, tilings) -> tuple[Brick, ...]:
    bricks = []
    for (factor, row, _), pieces in zip(rows, tilings):
        pos = 0
        for length, kind, k in pieces:
            bricks.append(Brick(factor, row, pos, length, kind, k))
            pos += length
    return tuple(bricks)


@lru_cache(maxsize=None)
def _unlabeled_by_content(family: str, sigma: TypeIndex) -> dict[TypeIndex, tuple[Tabloid, ...]]:
    rows = _rows_of(sigma)
    out: dict[TypeIndex, list[Tabloid]] = {}
    for tilings in cartesian(*(_row_tilings(family, length) for _, _, length in rows)):
        t = Tabloid(sigma, family, _place(rows, tilings))
        out.setdefault(t.content(), []).append(t)
    return {k: tuple(v) for k, v in out.items()}


# -- ordered (labeled) families ----------------------------------------------------

def _labeled_options(family: str, tau: TypeIndex) -> list[list[tuple[int, int, str]]]:
    """Per label (tau's canonical block order), the possible (factor, length, kind) placements."""
    options = []
    for d, r in tau.blocks():
        opts = [(r, d, "plain")]
        if family == "odoub" and r % 2 == 0:
            opts.append((r // 2, 2 * d, "double"))
        options.append(opts)
    return options


def _labeled(family: str, sigma: TypeIndex, tau: TypeIndex) -> Iterator[Tabloid]:
    rows = _rows_of(sigma)
    options = _labeled_options(family, tau)
    capacity = [length for _, _, length in rows]
    assignment: list[tuple[int, int, int, str]] = []  # (row index, label, length, kind)

    def rec(label: int) -> Iterator[Tabloid]:
        if label == len(options):
            if all(c == 0 for c in capacity):
                yield _labeled_tabloid(family, sigma, rows, assignment)
            return
        for factor, length, kind in options[label]:
            for idx, (r, _, _) in enumerate(rows):
                if r == factor and capacity[idx] >= length:
                    capacity[idx] -= length
                    assignment.append((idx, label + 1, length, kind))
                    yield from rec(label + 1)
                    assignment.pop()
                    capacity[idx] += length

    yield from rec(0)


def _labeled_tabloid(family, sigma, rows, assignment) -> Tabloid:
    bricks = []
    for idx, (factor, row, _) in enumerate(rows):
        pos = 0
        for _, label, length, kind in sorted(a for a in assignment if a[0] == idx):
            bricks.append(Brick(factor, row, pos, length, kind, 0, label))
            pos += length
    return Tabloid(sigma, family, tuple(bricks))


# -- public operations -------------------------------------------------------------

def _as_type(obj) -> TypeIndex:
    if isinstance(obj, TypeIndex):
        return obj
    parts = tuple(obj)
    return TypeIndex(((1, parts),) if parts else ())


def enum_tabloids(family: str, sigma, tau) -> tuple[Tabloid, ...]:
    """All tabloids of a family with shape sigma and content tau.

    ``brick`` and ``ordered_brick`` take partitions and work on a single
    tensor factor.
    """
    if family not in FAMILIES:
        raise ValueError(f"unknown tabloid family {family!r}")
    sigma, tau = _as_type(sigma), _as_type(tau)
    if sigma.size != tau.size:
        raise ValueError("shape and content must have the same size")
    if family in ("brick", "ordered_brick") and (set(sigma.multiplicities) | set(tau.multiplicities)) - {1}:
        raise ValueError("brick tabloids take partitions")
    if family in LABELED:
        inner = "osimp" if family == "ordered_brick" else family
        return tuple(Tabloid(t.shape, family, t.bricks) for t in _labeled(inner, sigma, tau))
    inner = "simple" if family == "brick" else family
    found = _unlabeled_by_content(inner, sigma).get(tau, ())
    return tuple(Tabloid(t.shape, family, t.bricks) for t in found)


def _sign(k: int) -> int:
    return -1 if k % 2 else 1


def coefficient_via_tabloids(F: str, G: str, sigma: TypeIndex, tau: TypeIndex) -> Fraction:
    """The coefficient of G_tau in F_sigma, computed from signed, weighted tabloid counts."""
    if (F, G) not in PAIR_FAMILY:
        raise ValueError(f"unsupported basis pair {F!r} -> {G!r}")
    if sigma.size != tau.size:
        return Fraction(0)
    family = PAIR_FAMILY[(F, G)]
    tabs = enum_tabloids(family, sigma, tau)
    lt, ls = tau.length, sigma.length
    if (F, G) in (("H", "E"), ("E", "H")):
        return Fraction(_sign(lt) * len(tabs))
    if (F, G) == ("P", "H"):
        return Fraction(_sign(lt - ls) * sum(tabloid_weights(t).L for t in tabs))
    if (F, G) == ("P", "E"):
        return Fraction(_sign(lt) * sum(tabloid_weights(t).L for t in tabs))
    if (F, G) == ("H", "P"):
        return Fraction(len(tabs), z_tensor(tau))
    if (F, G) == ("E", "P"):
        return Fraction(_sign(lt) * len(tabs), z_tensor(tau))
    if (F, G) == ("Eplus", "E"):
        return Fraction(sum(_sign(tabloid_weights(t).l1) for t in tabs))
    if (F, G) == ("Eplus", "H"):
        return Fraction(sum(_sign(tabloid_weights(t).l2) for t in tabs))
    if (F, G) == ("Eplus", "P"):
        return Fraction(sum(_sign(tabloid_weights(t).l2) for t in tabs), z_tensor(tau))
    if (F, G) == ("E", "Eplus"):
        return Fraction(_sign(lt) * len(tabs))
    if (F, G) == ("H", "Eplus"):
        return Fraction(len(tabs))
    return Fraction(_sign(lt - ls) * sum(tabloid_weights(t).L_star for t in tabs))


@dataclass
class CrosscheckReport:
    n: int
    compared: int = 0
    mismatches: list[tuple[str, str, str, str, Fraction, Fraction]] = None

    def __post_init__(self):
        if self.mismatches is None:
            self.mismatches = []

    @property
    def ok(self) -> bool:
        return not self.mismatches


def crosscheck_matrices(n: int, pairs=None) -> CrosscheckReport:
    """Compare every tabloid coefficient against the expansion-built matrices at size n."""
    from .expansions import transition_matrix

    report = CrosscheckReport(n)
    for F, G in pairs or PAIR_FAMILY:
        M = transition_matrix(F, G, n)
        for sigma in types_of(n):
            for tau in types_of(n):
                report.compared += 1
                a, b = coefficient_via_tabloids(F, G, sigma, tau), M.entry(tau, sigma)
                if a != b:
                    report.mismatches.append((F, G, render_expr(sigma), render_expr(tau), a, b))
    return report
