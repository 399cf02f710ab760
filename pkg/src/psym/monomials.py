"""Truncated monomials in the variables x_{i,j} (degree i, label j) and the bar
tableaux whose monomials realize the bases H, E, E+ and P.

This is the brute-force oracle: every expansion identity can be checked by
expanding both sides here, with labels restricted to 1..J.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Iterator, Mapping, Optional, Union

from .combinat import Polycomposition, TypeIndex

BASES = ("H", "E", "Eplus", "P")

Bar = tuple[int, int]  # (length i, label j)


class Monomial(tuple):
    """A monomial as a sorted tuple of (i, j, exponent) triples with positive exponents."""

    def __new__(cls, triples: Iterable[tuple[int, int, int]] = ()):
        acc: dict[tuple[int, int], int] = {}
        for i, j, e in triples:
            if i < 1 or j < 1:
                raise ValueError(f"bad variable x_{{{i},{j}}}")
            acc[(i, j)] = acc.get((i, j), 0) + e
        return super().__new__(cls, tuple(sorted((i, j, e) for (i, j), e in acc.items() if e)))

    @classmethod
    def from_bars(cls, bars: Iterable[Bar], power: int = 1) -> "Monomial":
        return cls((i, j, power) for i, j in bars)

    @property
    def degree(self) -> int:
        return sum(i * e for i, _, e in self)

    @property
    def variable_count(self) -> int:
        """Number of indeterminates counted with exponent."""
        return sum(e for _, _, e in self)

    @property
    def sign(self) -> int:
        return -1 if self.variable_count % 2 else 1

    @property
    def is_square_free(self) -> bool:
        return all(e == 1 for _, _, e in self)

    def exponent(self, i: int, j: int) -> int:
        for a, b, e in self:
            if (a, b) == (i, j):
                return e
        return 0

    def __mul__(self, other: "Monomial") -> "Monomial":
        return Monomial(tuple(self) + tuple(other))

    def power(self, r: int) -> "Monomial":
        return Monomial((i, j, e * r) for i, j, e in self)

    def max_label(self) -> int:
        return max((j for _, j, _ in self), default=0)

    def __repr__(self) -> str:
        if not self:
            return "1"
        return "*".join(f"x[{i},{j}]" + (f"^{e}" if e > 1 else "") for i, j, e in self)


ONE = Monomial()


def _frac(c) -> Fraction:
    return c if isinstance(c, Fraction) else Fraction(c)


@dataclass(frozen=True)
class MonomialSum:
    """Finite linear combination of monomials with exact rational coefficients."""

    terms: Mapping[Monomial, Fraction] = field(default_factory=dict)

    def __post_init__(self):
        clean = {m: _frac(c) for m, c in self.terms.items() if c}
        object.__setattr__(self, "terms", dict(sorted(clean.items())))

    @classmethod
    def one(cls) -> "MonomialSum":
        return cls({ONE: Fraction(1)})

    @classmethod
    def zero(cls) -> "MonomialSum":
        return cls({})

    def __add__(self, other: "MonomialSum") -> "MonomialSum":
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, 0) + c
        return MonomialSum(out)

    def __neg__(self) -> "MonomialSum":
        return MonomialSum({m: -c for m, c in self.terms.items()})

    def __sub__(self, other: "MonomialSum") -> "MonomialSum":
        return self + (-other)

    def scale(self, c) -> "MonomialSum":
        c = _frac(c)
        return MonomialSum({m: c * v for m, v in self.terms.items()})

    def __mul__(self, other: "MonomialSum") -> "MonomialSum":
        out: dict[Monomial, Fraction] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = m1 * m2
                out[m] = out.get(m, 0) + c1 * c2
        return MonomialSum(out)

    def __eq__(self, other) -> bool:
        return isinstance(other, MonomialSum) and self.terms == other.terms

    def __hash__(self):
        return hash(tuple(self.terms.items()))

    def __len__(self) -> int:
        return len(self.terms)

    def __iter__(self) -> Iterator[tuple[Monomial, Fraction]]:
        return iter(self.terms.items())

    def coefficient(self, m: Monomial) -> Fraction:
        return self.terms.get(m, Fraction(0))

    def adams(self, r: int) -> "MonomialSum":
        return adams_pow(self, r)

    def truncate(self, J: int) -> "MonomialSum":
        """Set every variable with label > J to zero."""
        return MonomialSum({m: c for m, c in self.terms.items() if m.max_label() <= J})

    def first_difference(self, other: "MonomialSum") -> Optional[tuple[Monomial, Fraction, Fraction]]:
        """The smallest monomial where the two sums disagree, with both coefficients."""
        for m in sorted(set(self.terms) | set(other.terms)):
            a, b = self.coefficient(m), other.coefficient(m)
            if a != b:
                return m, a, b
        return None

    def to_json(self) -> list[dict]:
        return [
            {"vars": [list(t) for t in m], "num": c.numerator, "den": c.denominator}
            for m, c in self.terms.items()
        ]

    @classmethod
    def from_json(cls, data: list[dict]) -> "MonomialSum":
        return cls({Monomial(tuple(v) for v in item["vars"]): Fraction(item["num"], item["den"]) for item in data})

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(f"{c}*{m!r}" for m, c in self.terms.items())


def product(sums: Iterable[MonomialSum]) -> MonomialSum:
    out = MonomialSum.one()
    for s in sums:
        out = out * s
    return out


# -- bar tableaux ---------------------------------------------------------------

TableauKind = str  # "weak" | "strict" | "rectangular"


def _row_order(bar: Bar) -> tuple[int, int]:
    return (-bar[0], bar[1])


@dataclass(frozen=True)
class BarTableau:
    """Rows of constant-label bars, lengths weakly decreasing top to bottom.

    ``mark`` is an optional (row, column) cell, both 0-based.
    """

    rows: tuple[Bar, ...]
    kind: TableauKind = "weak"
    mark: Optional[tuple[int, int]] = None

    def __post_init__(self):
        object.__setattr__(self, "rows", tuple((int(i), int(j)) for i, j in self.rows))

    @classmethod
    def from_bars(cls, bars: Iterable[Bar], kind: TableauKind = "weak", mark=None) -> "BarTableau":
        """Sort a multiset of bars into tableau order."""
        return cls(tuple(sorted(bars, key=_row_order)), kind, mark)

    @property
    def size(self) -> int:
        return sum(i for i, _ in self.rows)

    @property
    def length(self) -> int:
        return len(self.rows)

    def bar_counts(self) -> dict[Bar, int]:
        out: dict[Bar, int] = {}
        for b in self.rows:
            out[b] = out.get(b, 0) + 1
        return out

    def is_valid(self) -> bool:
        rows = self.rows
        if any(i < 1 or j < 1 for i, j in rows):
            return False
        for a, b in zip(rows, rows[1:]):
            if a[0] < b[0]:
                return False
            if a[0] == b[0]:
                if self.kind == "weak" and a[1] > b[1]:
                    return False
                if self.kind == "strict" and a[1] >= b[1]:
                    return False
        if self.kind == "rectangular" and len(set(rows)) > 1:
            return False
        if self.mark is not None:
            r, c = self.mark
            if not (0 <= r < len(rows) and 0 <= c < rows[r][0]):
                return False
            if self.kind == "rectangular" and r != 0:
                return False
        return True

    def monomial(self) -> Monomial:
        return Monomial.from_bars(self.rows)

    def __repr__(self) -> str:
        body = " ".join(f"{i}:{j}" for i, j in self.rows)
        mark = f" *{self.mark}" if self.mark else ""
        return f"[{body}{mark}]"


def _bars(d: int, J: int) -> list[Bar]:
    return sorted(((i, j) for i in range(1, d + 1) for j in range(1, J + 1)), key=_row_order)


def _bar_multisets(d: int, J: int, max_count: Optional[int]) -> Iterator[tuple[Bar, ...]]:
    bars = _bars(d, J)

    def rec(idx: int, remaining: int) -> Iterator[tuple[Bar, ...]]:
        if remaining == 0:
            yield ()
            return
        if idx == len(bars):
            return
        i, j = bars[idx]
        top = remaining // i if max_count is None else min(max_count, remaining // i)
        for count in range(top, -1, -1):
            for rest in rec(idx + 1, remaining - count * i):
                yield ((i, j),) * count + rest

    yield from rec(0, d)


@lru_cache(maxsize=None)
def enum_bar_tableaux(kind: str, d: int, J: int) -> tuple[BarTableau, ...]:
    """All weak (``wbt``), strict (``sbt``) or marked rectangular (``rbt_marked``)
    bar tableaux with d cells and labels at most J."""
    if d < 0 or J < 0:
        raise ValueError("need d >= 0 and J >= 0")
    if kind == "wbt":
        return tuple(BarTableau(rows, "weak") for rows in _bar_multisets(d, J, None))
    if kind == "sbt":
        return tuple(BarTableau(rows, "strict") for rows in _bar_multisets(d, J, 1))
    if kind == "rbt_marked":
        if d == 0:
            return (BarTableau((), "rectangular"),)
        out = []
        for k in range(d, 0, -1):
            if d % k:
                continue
            for j in range(1, J + 1):
                for col in range(k):
                    out.append(BarTableau(((k, j),) * (d // k), "rectangular", (0, col)))
        return tuple(out)
    raise ValueError(f"unknown tableau kind {kind!r}")


@dataclass(frozen=True)
class PolyBarTableau:
    """Tableaux arranged in layers; layer r contributes x_T^r for each tableau T.

    ``mark`` is (layer, tableau position, row, column) when present.
    """

    layers: tuple[tuple[int, tuple[BarTableau, ...]], ...]
    mark: Optional[tuple[int, int, int, int]] = None

    def __post_init__(self):
        layers = tuple((r, tuple(ts)) for r, ts in self.layers if ts)
        object.__setattr__(self, "layers", tuple(sorted(layers)))

    def layer(self, r: int) -> tuple[BarTableau, ...]:
        for m, ts in self.layers:
            if m == r:
                return ts
        return ()

    def shape(self) -> Polycomposition:
        return Polycomposition(tuple((r, tuple(t.size for t in ts)) for r, ts in self.layers))

    def scan(self) -> Iterator[tuple[int, int, int, Bar]]:
        """(layer, tableau position, row, bar) in scanning order."""
        for r, ts in self.layers:
            for p, t in enumerate(ts):
                for k, bar in enumerate(t.rows):
                    yield r, p, k, bar

    @property
    def bar_count(self) -> int:
        return sum(t.length for _, ts in self.layers for t in ts)

    @property
    def psgn(self) -> int:
        return -1 if self.bar_count % 2 else 1

    @property
    def wt_star(self) -> int:
        return self.mark[0] if self.mark else 1

    def monomial(self) -> Monomial:
        return Monomial((i, j, r) for r, ts in self.layers for t in ts for i, j in t.rows)


def tableau_monomial(t: Union[BarTableau, PolyBarTableau]) -> Monomial:
    return t.monomial()


# -- basis monomials --------------------------------------------------------------

@lru_cache(maxsize=None)
def basis_monomials(F: str, d: int, J: int) -> MonomialSum:
    """F_d truncated to labels <= J, read off its bar-tableau model."""
    acc: dict[Monomial, int] = {}
    if F == "H":
        source = ((t.monomial(), 1) for t in enum_bar_tableaux("wbt", d, J))
    elif F == "Eplus":
        source = ((t.monomial(), 1) for t in enum_bar_tableaux("sbt", d, J))
    elif F == "E":
        source = ((t.monomial(), -1 if t.length % 2 else 1) for t in enum_bar_tableaux("sbt", d, J))
    elif F == "P":
        source = ((t.monomial(), 1) for t in enum_bar_tableaux("rbt_marked", d, J))
    else:
        raise ValueError(f"unknown basis {F!r}")
    for m, c in source:
        acc[m] = acc.get(m, 0) + c
    return MonomialSum(acc)


def adams_pow(s: MonomialSum, r: int) -> MonomialSum:
    """Raise every variable to the r-th power."""
    if r < 1:
        raise ValueError("Adams operation needs r >= 1")
    return MonomialSum({m.power(r): c for m, c in s.terms.items()})


@lru_cache(maxsize=None)
def _block_monomials(F: str, d: int, r: int, J: int) -> MonomialSum:
    return adams_pow(basis_monomials(F, d, J), r)


def expand_over_pcom(F: str, delta: Union[Polycomposition, TypeIndex], J: int) -> MonomialSum:
    """F_delta: the product of F_{d^r} over the blocks of delta."""
    return product(_block_monomials(F, d, r, J) for d, r in delta.blocks())
