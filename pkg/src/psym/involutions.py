"""Sign-reversing involutions and bijections on bar tableau configurations.

Every map works on plain tuples of bars ``(length, label)`` listed top to bottom,
wrapped in one of four configuration shapes: a single tableau (:class:`Flat`),
a pair of tableaux (:class:`Pair`), tableaux arranged in layers
(:class:`Layered`), or marked rectangular tableaux beside a permutation
(:class:`Permuted`).  The maps never look at the label bound; only the
enumeration harness in :func:`check_involution` does.
"""

from __future__ import annotations

import random
from bisect import insort
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product
from math import factorial
from typing import Callable, Iterable, Iterator, Optional, Sequence, Union

from .combinat import Z_composition, compositions
from .monomials import BarTableau, Monomial, MonomialSum, basis_monomials, enum_bar_tableaux

Bar = tuple[int, int]
Rows = tuple[Bar, ...]
Cell = tuple[int, int]

INVOLUTION_TAGS = (
    "weak_sos",
    "strict_sos",
    "psi_conv",
    "varphi_insert",
    "rho_marked",
    "sigma_PH",
    "sigma_PE",
    "pair_halve",
    "Fprime",
    "sigma_layer2_E",
    "sigma_layer2_H",
    "binary_split",
    "sigma_E_Eplus",
    "sigma_P_Eplus",
)

# maps that are bijections between two different models rather than involutions
BIJECTION_TAGS = ("varphi_insert", "pair_halve", "binary_split")


# -- configurations ---------------------------------------------------------------

def _rows(rows: Iterable) -> Rows:
    return tuple((int(i), int(j)) for i, j in rows)


def _cell(mark) -> Optional[Cell]:
    return None if mark is None else (int(mark[0]), int(mark[1]))


def _rows_json(rows: Rows) -> list:
    return [list(b) for b in rows]


@dataclass(frozen=True)
class Flat:
    """One bar tableau, optionally with a marked cell (row, column)."""

    rows: Rows
    mark: Optional[Cell] = None

    def __post_init__(self):
        object.__setattr__(self, "rows", _rows(self.rows))
        object.__setattr__(self, "mark", _cell(self.mark))

    def to_json(self) -> dict:
        return {"kind": "flat", "rows": _rows_json(self.rows), "mark": _mark_json(self.mark)}


@dataclass(frozen=True)
class Pair:
    """Two tableaux side by side; ``mark`` is a cell of ``second``."""

    first: Rows
    second: Rows
    mark: Optional[Cell] = None

    def __post_init__(self):
        object.__setattr__(self, "first", _rows(self.first))
        object.__setattr__(self, "second", _rows(self.second))
        object.__setattr__(self, "mark", _cell(self.mark))

    def to_json(self) -> dict:
        return {
            "kind": "pair",
            "first": _rows_json(self.first),
            "second": _rows_json(self.second),
            "mark": _mark_json(self.mark),
        }


@dataclass(frozen=True)
class Layered:
    """Tableaux in layers; ``mark`` is a cell of the last tableau in scanning order.

    Layers without tableaux are dropped and layers are kept in increasing order.
    """

    layers: tuple[tuple[int, tuple[Rows, ...]], ...]
    mark: Optional[Cell] = None

    def __post_init__(self):
        items = self.layers.items() if isinstance(self.layers, dict) else self.layers
        layers = tuple(sorted((int(r), tuple(_rows(t) for t in ts)) for r, ts in items if ts))
        object.__setattr__(self, "layers", layers)
        object.__setattr__(self, "mark", _cell(self.mark))

    @classmethod
    def single(cls, tableaux: Iterable, mark=None, r: int = 1) -> "Layered":
        return cls(((r, tuple(tableaux)),), mark)

    def layer(self, r: int) -> tuple[Rows, ...]:
        for m, ts in self.layers:
            if m == r:
                return ts
        return ()

    def with_layer(self, r: int, tableaux: Iterable[Rows], mark="keep") -> "Layered":
        out = dict(self.layers)
        out[r] = tuple(tableaux)
        return Layered(out, self.mark if mark == "keep" else mark)

    def tableaux(self) -> tuple[Rows, ...]:
        return tuple(t for _, ts in self.layers for t in ts)

    @property
    def length(self) -> int:
        return sum(len(ts) for _, ts in self.layers)

    @property
    def bar_count(self) -> int:
        return sum(len(t) for _, ts in self.layers for t in ts)

    @property
    def top_layer(self) -> int:
        return self.layers[-1][0] if self.layers else 0

    def monomial(self) -> Monomial:
        return Monomial((i, j, r) for r, ts in self.layers for t in ts for i, j in t)

    def to_json(self) -> dict:
        return {
            "kind": "layered",
            "layers": [{"r": r, "tableaux": [_rows_json(t) for t in ts]} for r, ts in self.layers],
            "mark": _mark_json(self.mark),
        }


@dataclass(frozen=True)
class Permuted:
    """A permutation beside marked rectangular tableaux, aligned cycle by cycle.

    ``marks[q]`` is the marked column in the top row of ``tableaux[q]``.
    """

    perm: "Permutation"
    tableaux: tuple[Rows, ...]
    marks: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "tableaux", tuple(_rows(t) for t in self.tableaux))
        object.__setattr__(self, "marks", tuple(int(c) for c in self.marks))

    def to_json(self) -> dict:
        return {
            "kind": "permuted",
            "cycles": [list(c) for c in self.perm.cycles],
            "n": self.perm.n,
            "tableaux": [_rows_json(t) for t in self.tableaux],
            "marks": list(self.marks),
        }


Config = Union[Flat, Pair, Layered, Permuted]


def _mark_json(mark: Optional[Cell]):
    return None if mark is None else list(mark)


def config_from_json(data: dict) -> Config:
    kind = data.get("kind")
    if kind == "flat":
        return Flat(data["rows"], data.get("mark"))
    if kind == "pair":
        return Pair(data["first"], data["second"], data.get("mark"))
    if kind == "layered":
        return Layered(tuple((e["r"], tuple(e["tableaux"])) for e in data["layers"]), data.get("mark"))
    if kind == "permuted":
        perm = Permutation(tuple(tuple(c) for c in data["cycles"]), data["n"])
        return Permuted(perm, tuple(data["tableaux"]), tuple(data["marks"]))
    raise ValueError(f"unknown configuration kind {kind!r}")


# -- bar orderings ----------------------------------------------------------------

def _wkey(b: Bar) -> tuple[int, int]:
    """Row order inside a tableau: longer first, then smaller label."""
    return (-b[0], b[1])


def _lkey(b: Bar) -> tuple[int, int]:
    """Order of single bars along a layer at a fixed point: shorter first, then larger label."""
    return (b[0], -b[1])


def _is_weak(rows: Rows) -> bool:
    return all(_wkey(a) <= _wkey(b) for a, b in zip(rows, rows[1:]))


def _is_strict(rows: Rows) -> bool:
    return all(_wkey(a) < _wkey(b) for a, b in zip(rows, rows[1:]))


def _is_rect(rows: Rows) -> bool:
    return len(set(rows)) <= 1


def _size(rows: Rows) -> int:
    return sum(i for i, _ in rows)


def _insert_block(rows: Rows, block: Rows) -> tuple[Rows, int]:
    """Insert identical bars below every row that does not come after them."""
    k = _wkey(block[0])
    idx = sum(1 for b in rows if _wkey(b) <= k)
    return rows[:idx] + block + rows[idx:], idx


def _sorted_rows(bars: Iterable[Bar]) -> Rows:
    return tuple(sorted(bars, key=_wkey))


def _insert_in_layer(bars: tuple[Bar, ...], bar: Bar, copies: int) -> tuple[Bar, ...]:
    k = _lkey(bar)
    idx = sum(1 for b in bars if _lkey(b) <= k)
    return bars[:idx] + (bar,) * copies + bars[idx:]


def _rightmost_pair(bars: Sequence[Bar]) -> Optional[int]:
    for i in range(len(bars) - 2, -1, -1):
        if bars[i] == bars[i + 1]:
            return i
    return None


def _valid_mark(rows: Rows, mark: Optional[Cell], top_only: bool = False) -> bool:
    if mark is None:
        return False
    r, c = mark
    if top_only and r != 0:
        return False
    return 0 <= r < len(rows) and 0 <= c < rows[r][0]


# -- stack-or-slash and pairing ----------------------------------------------------

def _first_instance(b: Bar, b2: Bar, strict: bool) -> bool:
    if b[0] > b2[0]:
        return True
    if b[0] == b2[0]:
        return b2[1] > b[1] if strict else b2[1] >= b[1]
    return False


def stack_or_slash(tableaux: Sequence[Rows], strict: bool) -> Optional[tuple[tuple[Rows, ...], str]]:
    """Act on the first instance of one layer; None when there is none."""
    ts = tuple(tableaux)
    prev: Optional[tuple[int, int, Bar]] = None
    for t, rows in enumerate(ts):
        for k, bar in enumerate(rows):
            if prev is not None and _first_instance(prev[2], bar, strict):
                if prev[0] == t:
                    return ts[:t] + (rows[:k], rows[k:]) + ts[t + 1:], "slash"
                return ts[: t - 1] + (ts[t - 1] + rows,) + ts[t + 1:], "stack"
            prev = (t, k, bar)
    return None


def pair_split(rows: Rows) -> tuple[Rows, Rows]:
    """Pair consecutive identical bars from the top; one copy of each pair, then the leftovers."""
    F: list[Bar] = []
    G: list[Bar] = []
    k = 0
    while k < len(rows):
        if k + 1 < len(rows) and rows[k + 1] == rows[k]:
            F.append(rows[k])
            k += 2
        else:
            G.append(rows[k])
            k += 1
    return tuple(F), tuple(G)


def pair_merge(F: Rows, G: Rows) -> Rows:
    return _sorted_rows(F + F + G)


# -- the maps -----------------------------------------------------------------------

Step = tuple[Config, str]


def _sos_map(strict: bool) -> Callable[[Layered], Step]:
    def run(x: Layered) -> Step:
        out = stack_or_slash(x.layer(1), strict)
        if out is None:
            return x, "fixed"
        return Layered.single(out[0]), out[1]

    return run


def _psi_conv(x: Pair) -> Step:
    T, U = x.first, x.second
    if not T and not U:
        return x, "fixed"
    if not U:
        return Pair(T[1:], T[:1]), "T-empty-U"
    if not T:
        return Pair(U[:1], U[1:]), "U-empty-T"
    a, b = T[0], U[0]
    if a[0] > b[0] or (a[0] == b[0] and a[1] < b[1]):
        return Pair(T[1:], (a,) + U), "T-to-U"
    return Pair((b,) + T, U[1:]), "U-to-T"


def _varphi(x: Pair) -> Step:
    rows, idx = _insert_block(x.first, x.second)
    return Flat(rows, (idx, x.mark[1])), "insert"


def _varphi_inverse(y: Flat) -> Pair:
    r, c = y.mark
    B = y.rows[r]
    end = r
    while end < len(y.rows) and y.rows[end] == B:
        end += 1
    return Pair(y.rows[:r] + y.rows[end:], y.rows[r:end], (0, c))


def _rho(x: Pair) -> Step:
    U, V = x.first, x.second
    B = V[-1]
    if B in U:
        return Pair(tuple(b for b in U if b != B), V + (B,), x.mark), "absorb"
    if len(V) > 1:
        return Pair(_insert_block(U, (B,))[0], V[:-1], x.mark), "release"
    return x, "fixed"


def _sigma_ph(x: Layered) -> Step:
    ts = x.layer(1)
    star = ts[-1]
    r, c = x.mark
    B = star[r]
    if r != 0 or any(b != B for b in star):
        end = r
        while end < len(star) and star[end] == B:
            end += 1
        return Layered.single(ts[:-1] + (star[:r] + star[end:], star[r:end]), (0, c)), "split"
    if len(ts) > 1:
        merged, idx = _insert_block(ts[-2], star)
        return Layered.single(ts[:-2] + (merged,), (idx, c)), "merge"
    return x, "fixed"


def _sigma_pe_layer(ts: tuple[Rows, ...], mark: Cell) -> Optional[tuple[tuple[Rows, ...], Cell, str]]:
    r, c = mark
    star = ts[-1][r]
    last = len(ts) - 1
    for j, T in enumerate(ts):
        if len(T) > 1 and star in T:
            rest = tuple(b for b in T if b != star)
            new_mark = (0, c) if j == last else mark
            return ts[:j] + (rest, (star,)) + ts[j + 1:], new_mark, "i"
        if j > 0 and T == (star,) and star not in ts[j - 1]:
            merged, idx = _insert_block(ts[j - 1], (star,))
            new_mark = (idx, c) if j == last else mark
            return ts[: j - 1] + (merged,) + ts[j + 1:], new_mark, "ii"
    return None


def _sigma_pe(x: Layered) -> Step:
    r = x.top_layer
    out = _sigma_pe_layer(x.layer(r), x.mark)
    if out is None:
        return x, "fixed"
    return Layered.single(out[0], out[1], r), out[2]


def _pair_halve(x: Flat) -> Step:
    F, G = pair_split(x.rows)
    return Pair(F, G), "halve"


def _pair_halve_inverse(y: Pair) -> Flat:
    return Flat(pair_merge(y.first, y.second))


def _fprime(x: Pair) -> Step:
    U, V = x.first, x.second
    rep = next((k for k in range(len(U) - 1) if U[k] == U[k + 1]), None)
    if rep is None:
        if not V:
            return x, "fixed"
        return Pair(_insert_block(U, V[:1] * 2)[0], V[1:]), "1"
    B = U[rep]
    if not V or B[0] > V[0][0] or (B[0] == V[0][0] and B[1] < V[0][1]):
        return Pair(U[:rep] + U[rep + 2:], (B,) + V), "2a"
    return Pair(_insert_block(U, V[:1] * 2)[0], V[1:]), "2b"


def _sigma_layer2_e(x: Layered) -> Step:
    L1 = x.layer(1)
    T2 = x.layer(2)[0] if x.layer(2) else ()
    out = stack_or_slash(L1, strict=True)
    if out is not None:
        return Layered({1: out[0], 2: (T2,) if T2 else ()}), "2-" + out[1]
    bars = tuple(t[0] for t in L1)
    i = _rightmost_pair(bars)
    if i is not None:
        B = bars[i]
        if not T2 or B[0] > T2[0][0] or (B[0] == T2[0][0] and B[1] < T2[0][1]):
            rest = bars[:i] + bars[i + 2:]
            return Layered({1: tuple((b,) for b in rest), 2: ((B,) + T2,)}), "3a"
        case = "3b"
    elif T2:
        case = "4a"
    else:
        return x, "fixed"
    A = T2[0]
    bars = _insert_in_layer(bars, A, 2)
    return Layered({1: tuple((b,) for b in bars), 2: (T2[1:],) if T2[1:] else ()}), case


def _sigma_layer2_h(x: Layered) -> Step:
    T1 = x.layer(1)[0] if x.layer(1) else ()
    L2 = x.layer(2)
    F, G = pair_split(T1)
    if F:
        return Layered({1: (G,) if G else (), 2: (F,) + L2}), "halve"
    if L2:
        return Layered({1: (pair_merge(L2[0], T1),), 2: L2[1:]}), "merge"
    return x, "fixed"


def _binary_split(x: Flat) -> Step:
    counts: dict[Bar, int] = {}
    for b in x.rows:
        counts[b] = counts.get(b, 0) + 1
    layers: dict[int, list[Bar]] = {}
    for b, n in counts.items():
        k = 0
        while n >> k:
            if (n >> k) & 1:
                layers.setdefault(1 << k, []).append(b)
            k += 1
    return Layered({r: (_sorted_rows(bs),) for r, bs in layers.items()}), "split"


def _binary_split_inverse(y: Layered) -> Flat:
    return Flat(_sorted_rows(b for r, ts in y.layers for t in ts for b in t for _ in range(r)))


def _sigma_e_eplus(x: Layered) -> Step:
    for r, ts in x.layers:
        out = stack_or_slash(ts, strict=True)
        if out is not None:
            return x.with_layer(r, out[0]), "1-" + out[1]
    K = x.top_layer
    if K == 0:
        return x, "fixed"
    top = tuple(t[0] for t in x.layer(K))
    i = _rightmost_pair(top)
    if i is not None:
        B = top[i]
        y = x.with_layer(K, tuple((b,) for b in top[:i] + top[i + 2:]))
        return y.with_layer(2 * K, ((B,),)), "2a"
    if K == 1:
        return x, "fixed"
    B = top[-1]
    low = tuple(t[0] for t in x.layer(K // 2))
    u = _rightmost_pair(low)
    if u is None or B[0] > low[u][0] or (B[0] == low[u][0] and B[1] <= low[u][1]):
        y = x.with_layer(K, tuple((b,) for b in top[:-1]))
        return y.with_layer(K // 2, tuple((b,) for b in _insert_in_layer(low, B, 2))), (
            "2b-i-A" if u is None else "2b-i-B"
        )
    U = low[u]
    y = x.with_layer(K // 2, tuple((b,) for b in low[:u] + low[u + 2:]))
    return y.with_layer(K, tuple((b,) for b in _insert_in_layer(top, U, 1))), "2b-i-C"


# -- domains --------------------------------------------------------------------------

@lru_cache(maxsize=None)
def _tabs(kind: str, m: int, J: int) -> tuple[Rows, ...]:
    return tuple(t.rows for t in enum_bar_tableaux(kind, m, J))


@lru_cache(maxsize=None)
def _rbts(m: int, J: int) -> tuple[tuple[Rows, int], ...]:
    if m == 0:
        return ()
    return tuple((t.rows, t.mark[1]) for t in enum_bar_tableaux("rbt_marked", m, J))


@lru_cache(maxsize=None)
def _sequences(kind: str, total: int, J: int) -> tuple[tuple[Rows, ...], ...]:
    """All sequences of non-empty tableaux whose sizes form a composition of ``total``."""
    out: list[tuple[Rows, ...]] = []
    for comp in compositions(total):
        out.extend(product(*(_tabs(kind, part, J) for part in comp)))
    return tuple(out)


def _cells(rows: Rows) -> Iterator[Cell]:
    for r, (i, _) in enumerate(rows):
        for c in range(i):
            yield (r, c)


def _marked_sequences(kind: str, total: int, J: int) -> Iterator[tuple[tuple[Rows, ...], Cell]]:
    for seq in _sequences(kind, total, J):
        if seq:
            for cell in _cells(seq[-1]):
                yield seq, cell


def _dyadic_sizes(d: int, r: int = 1) -> Iterator[tuple[tuple[int, int], ...]]:
    """Ways to write d as a sum of r*s_r over powers of two r, as (r, s_r) with s_r > 0."""
    if d == 0:
        yield ()
        return
    if r > d:
        return
    for s in range(d // r + 1):
        for rest in _dyadic_sizes(d - r * s, 2 * r):
            yield (((r, s),) if s else ()) + rest


def _dom_layer1(kind: str):
    def dom(d: int, J: int) -> Iterator[Config]:
        for seq in _sequences(kind, d, J):
            yield Layered.single(seq)

    return dom


def _dom_psi(d: int, J: int) -> Iterator[Config]:
    for k in range(d + 1):
        for T in _tabs("wbt", k, J):
            for U in _tabs("sbt", d - k, J):
                yield Pair(T, U)


def _dom_marked_pairs(kind: str):
    def dom(d: int, J: int) -> Iterator[Config]:
        for i in range(1, d + 1):
            for U in _tabs(kind, d - i, J):
                for V, c in _rbts(i, J):
                    yield Pair(U, V, (0, c))

    return dom


def _dom_marked_layer1(kind: str):
    def dom(d: int, J: int) -> Iterator[Config]:
        for seq, cell in _marked_sequences(kind, d, J):
            yield Layered.single(seq, cell)

    return dom


def _dom_wbt(d: int, J: int) -> Iterator[Config]:
    for T in _tabs("wbt", d, J):
        yield Flat(T)


def _dom_fprime(d: int, J: int) -> Iterator[Config]:
    for k in range(d // 2 + 1):
        for U in _tabs("wbt", d - 2 * k, J):
            for V in _tabs("sbt", k, J):
                yield Pair(U, V)


def _dom_layer2_e(d: int, J: int) -> Iterator[Config]:
    for b in range(d // 2 + 1):
        for seq in _sequences("sbt", d - 2 * b, J):
            for T2 in _tabs("sbt", b, J) if b else ((),):
                yield Layered({1: seq, 2: (T2,) if T2 else ()})


def _dom_layer2_h(d: int, J: int) -> Iterator[Config]:
    for b in range(d // 2 + 1):
        a = d - 2 * b
        for T1 in _tabs("wbt", a, J) if a else ((),):
            for seq in _sequences("wbt", b, J):
                yield Layered({1: (T1,) if T1 else (), 2: seq})


def _dom_dyadic(d: int, J: int) -> Iterator[Config]:
    for sizes in _dyadic_sizes(d):
        pools = [_sequences("sbt", s, J) for _, s in sizes]
        for seqs in product(*pools):
            yield Layered(tuple((r, seq) for (r, _), seq in zip(sizes, seqs)))


def _dom_singular_dyadic(d: int, J: int) -> Iterator[Config]:
    r = 1
    while r <= d:
        if d % r == 0:
            for seq, cell in _marked_sequences("sbt", d // r, J):
                yield Layered.single(seq, cell, r)
        r *= 2


def _codom_marked_wbt(d: int, J: int) -> Iterator[Config]:
    for T in _tabs("wbt", d, J):
        for cell in _cells(T):
            yield Flat(T, cell)


def _codom_halves(d: int, J: int) -> Iterator[Config]:
    for k in range(d // 2 + 1):
        for F in _tabs("wbt", k, J):
            for G in _tabs("sbt", d - 2 * k, J):
                yield Pair(F, G)


def _codom_binary(d: int, J: int) -> Iterator[Config]:
    for sizes in _dyadic_sizes(d):
        for tabs in product(*(_tabs("sbt", s, J) for _, s in sizes)):
            yield Layered(tuple((r, (t,)) for (r, _), t in zip(sizes, tabs)))


# -- domain predicates ----------------------------------------------------------------

def _layers_ok(
    x: Config,
    layer_ok: Callable[[int, tuple[Rows, ...]], bool],
    tab_ok: Callable[[Rows], bool],
    marked: bool = False,
) -> bool:
    if not isinstance(x, Layered):
        return False
    for r, ts in x.layers:
        if not layer_ok(r, ts):
            return False
        if any(not t or not tab_ok(t) for t in ts):
            return False
    if marked:
        return bool(x.layers) and _valid_mark(x.layers[-1][1][-1], x.mark)
    return x.mark is None


def _power_of_two(r: int) -> bool:
    return r >= 1 and r & (r - 1) == 0


def _pair_ok(first_ok, second_ok, marked: bool = False, second_nonempty: bool = False):
    def ok(x: Config) -> bool:
        if not isinstance(x, Pair) or not first_ok(x.first) or not second_ok(x.second):
            return False
        if second_nonempty and not x.second:
            return False
        if marked:
            return _valid_mark(x.second, x.mark, top_only=True)
        return x.mark is None

    return ok


def _flat_ok(tab_ok, marked: bool = False):
    def ok(x: Config) -> bool:
        if not isinstance(x, Flat) or not tab_ok(x.rows):
            return False
        return _valid_mark(x.rows, x.mark) if marked else x.mark is None

    return ok


def _only(*allowed: int, single: Optional[set] = None):
    single = single or set()

    def ok(r: int, ts: tuple[Rows, ...]) -> bool:
        return r in allowed and (r not in single or len(ts) <= 1)

    return ok


def _singular_dyadic_ok(x: Config) -> bool:
    return (
        _layers_ok(x, lambda r, ts: _power_of_two(r), _is_strict, marked=True)
        and len(x.layers) == 1
    )


def _binary_codomain_ok(x: Config) -> bool:
    return _layers_ok(x, lambda r, ts: _power_of_two(r) and len(ts) == 1, _is_strict)


# -- weights and fixed-point characterizations ----------------------------------------

def _parity(n: int) -> int:
    return -1 if n % 2 else 1


def _w_sos_weak(x: Layered):
    return _parity(x.length), x.monomial()


def _w_sos_strict(x: Layered):
    return _parity(x.length + x.bar_count), x.monomial()


def _w_psi(x: Pair):
    return _parity(len(x.second)), Monomial.from_bars(x.first + x.second)


def _w_pair_plain(x: Pair):
    return 1, Monomial.from_bars(x.first + x.second)


def _w_rho(x: Pair):
    return _parity(len(x.first) + 1), Monomial.from_bars(x.first + x.second)


def _w_sigma_ph(x: Layered):
    return _parity(x.length - 1), x.monomial()


def _w_sigma_pe(x: Layered):
    return _parity(x.length + x.bar_count), x.monomial()


def _w_fprime(x: Pair):
    return _parity(len(x.second)), Monomial.from_bars(x.first) * Monomial.from_bars(x.second, 2)


def _w_halves(x: Pair):
    return 1, Monomial.from_bars(x.first, 2) * Monomial.from_bars(x.second)


def _w_layer2_e(x: Layered):
    return _parity(len(x.layer(1)) + x.bar_count), x.monomial()


def _w_layer2_h(x: Layered):
    return _parity(len(x.layer(2))), x.monomial()


def _w_e_eplus(x: Layered):
    return _parity(x.length), x.monomial()


def _w_p_eplus(x: Layered):
    return _parity(x.length - 1) * x.top_layer, x.monomial()


def _w_flat(x: Flat):
    return 1, Monomial.from_bars(x.rows)


def _w_layered_plain(x: Layered):
    return 1, x.monomial()


def _sorted_distinct_bars(ts: tuple[Rows, ...]) -> bool:
    if any(len(t) != 1 for t in ts):
        return False
    bars = [t[0] for t in ts]
    return all(_lkey(a) < _lkey(b) for a, b in zip(bars, bars[1:]))


def _fix_weak_sos(x: Layered) -> bool:
    # single bars, lengths weakly increasing, labels strictly decreasing among equal lengths
    return _sorted_distinct_bars(x.layer(1))


def _fix_strict_sos(x: Layered) -> bool:
    ts = x.layer(1)
    if any(len(t) != 1 for t in ts):
        return False
    bars = [t[0] for t in ts]
    return all(_lkey(a) <= _lkey(b) for a, b in zip(bars, bars[1:]))


def _bars_reversed(x: Layered) -> Flat:
    return Flat(tuple(t[0] for t in reversed(x.tableaux())))


def _fix_psi(x: Pair) -> bool:
    return not x.first and not x.second


def _fix_rho(x: Pair) -> bool:
    return len(x.second) == 1 and x.second[0] not in x.first


def _img_rho(x: Pair) -> Flat:
    rows, idx = _insert_block(x.first, x.second)
    return Flat(rows, (idx, x.mark[1]))


def _fix_sigma_ph(x: Layered) -> bool:
    ts = x.layer(1)
    return len(ts) == 1 and x.mark[0] == 0 and _is_rect(ts[0])


def _fix_identical_bars(x: Layered) -> bool:
    ts = x.tableaux()
    star = ts[-1][x.mark[0]]
    return all(t == (star,) for t in ts)


def _img_rbt(x: Layered) -> Flat:
    bars = tuple(b for _ in range(x.top_layer) for t in x.tableaux() for b in t)
    return Flat(bars, (0, x.mark[1]))


def _fix_fprime(x: Pair) -> bool:
    return not x.second and len(set(x.first)) == len(x.first)


def _img_first(x: Pair) -> Flat:
    return Flat(x.first)


def _fix_layer2_e(x: Layered) -> bool:
    return not x.layer(2) and _sorted_distinct_bars(x.layer(1))


def _fix_layer2_h(x: Layered) -> bool:
    T1 = x.layer(1)[0] if x.layer(1) else ()
    return not x.layer(2) and len(set(T1)) == len(T1)


def _img_layer1(x: Layered) -> Flat:
    return Flat(x.layer(1)[0] if x.layer(1) else ())


def _fix_e_eplus(x: Layered) -> bool:
    return x.top_layer <= 1 and _sorted_distinct_bars(x.layer(1))


# -- target models: objects the fixed points are matched against ---------------------

def _model(kind: str, coef: Callable[[Flat], int]):
    def enum(d: int, J: int) -> dict[Flat, tuple[int, Monomial]]:
        out: dict[Flat, tuple[int, Monomial]] = {}
        if kind == "unit":
            if d == 0:
                out[Flat(())] = (1, Monomial())
            return out
        if kind == "rbt_marked":
            for rows, c in _rbts(d, J):
                y = Flat(rows, (0, c))
                out[y] = (coef(y), Monomial.from_bars(rows))
            return out
        base = "sbt" if kind.startswith("sbt") else "wbt"
        for rows in _tabs(base, d, J):
            cells = list(_cells(rows)) if kind.endswith("marked") else [None]
            for cell in cells:
                y = Flat(rows, cell)
                out[y] = (coef(y), Monomial.from_bars(rows))
        return out

    return enum


def _one(y: Flat) -> int:
    return 1


def _sgn(y: Flat) -> int:
    return _parity(len(y.rows))


def _basis(F: str, scale_by_d: bool = False, marked: bool = False):
    def target(d: int, J: int) -> MonomialSum:
        if marked and d == 0:
            # marked configurations need at least one cell
            return MonomialSum.zero()
        s = basis_monomials(F, d, J)
        return s.scale(d) if scale_by_d else s

    return target


def _unit_target(d: int, J: int) -> MonomialSum:
    return MonomialSum.one() if d == 0 else MonomialSum.zero()


# -- registry ----------------------------------------------------------------------------

@dataclass(frozen=True)
class MapInfo:
    """Everything the harness needs to know about one named map."""

    name: str
    forward: Callable[[Config], Step]
    valid: Callable[[Config], bool]
    domain: Callable[[int, int], Iterable[Config]]
    weight: Callable[[Config], tuple[int, Monomial]]
    # involutions
    fixed: Optional[Callable[[Config], bool]] = None
    image: Optional[Callable[[Config], Config]] = None
    model: Optional[Callable[[int, int], dict]] = None
    target: Optional[Callable[[int, int], MonomialSum]] = None
    # bijections
    inverse: Optional[Callable[[Config], Config]] = None
    codomain: Optional[Callable[[int, int], Iterable[Config]]] = None
    codomain_valid: Optional[Callable[[Config], bool]] = None
    codomain_weight: Optional[Callable[[Config], tuple[int, Monomial]]] = None

    @property
    def is_bijection(self) -> bool:
        return self.inverse is not None


_layer1_only = _only(1)

MAPS: dict[str, MapInfo] = {
    "weak_sos": MapInfo(
        "weak_sos", _sos_map(False), lambda x: _layers_ok(x, _layer1_only, _is_weak),
        _dom_layer1("wbt"), _w_sos_weak,
        _fix_weak_sos, _bars_reversed, _model("sbt", _sgn), _basis("E"),
    ),
    "strict_sos": MapInfo(
        "strict_sos", _sos_map(True), lambda x: _layers_ok(x, _layer1_only, _is_strict),
        _dom_layer1("sbt"), _w_sos_strict,
        _fix_strict_sos, _bars_reversed, _model("wbt", _one), _basis("H"),
    ),
    "psi_conv": MapInfo(
        "psi_conv", _psi_conv, _pair_ok(_is_weak, _is_strict), _dom_psi, _w_psi,
        _fix_psi, lambda x: Flat(()), _model("unit", _one), _unit_target,
    ),
    "varphi_insert": MapInfo(
        "varphi_insert", _varphi, _pair_ok(_is_weak, _is_rect, marked=True, second_nonempty=True),
        _dom_marked_pairs("wbt"), _w_pair_plain,
        inverse=_varphi_inverse, codomain=_codom_marked_wbt,
        codomain_valid=_flat_ok(_is_weak, marked=True), codomain_weight=_w_flat,
    ),
    "rho_marked": MapInfo(
        "rho_marked", _rho, _pair_ok(_is_strict, _is_rect, marked=True, second_nonempty=True),
        _dom_marked_pairs("sbt"), _w_rho,
        _fix_rho, _img_rho, _model("sbt_marked", _sgn), _basis("E", scale_by_d=True),
    ),
    "sigma_PH": MapInfo(
        "sigma_PH", _sigma_ph, lambda x: _layers_ok(x, _layer1_only, _is_weak, marked=True),
        _dom_marked_layer1("wbt"), _w_sigma_ph,
        _fix_sigma_ph, _img_rbt, _model("rbt_marked", _one), _basis("P", marked=True),
    ),
    "sigma_PE": MapInfo(
        "sigma_PE", _sigma_pe, lambda x: _layers_ok(x, _layer1_only, _is_strict, marked=True),
        _dom_marked_layer1("sbt"), _w_sigma_pe,
        _fix_identical_bars, _img_rbt, _model("rbt_marked", _one), _basis("P", marked=True),
    ),
    "pair_halve": MapInfo(
        "pair_halve", _pair_halve, _flat_ok(_is_weak), _dom_wbt, _w_flat,
        inverse=_pair_halve_inverse, codomain=_codom_halves,
        codomain_valid=_pair_ok(_is_weak, _is_strict), codomain_weight=_w_halves,
    ),
    "Fprime": MapInfo(
        "Fprime", _fprime, _pair_ok(_is_weak, _is_strict), _dom_fprime, _w_fprime,
        _fix_fprime, _img_first, _model("sbt", _one), _basis("Eplus"),
    ),
    "sigma_layer2_E": MapInfo(
        "sigma_layer2_E", _sigma_layer2_e,
        lambda x: _layers_ok(x, _only(1, 2, single={2}), _is_strict),
        _dom_layer2_e, _w_layer2_e,
        _fix_layer2_e, _bars_reversed, _model("sbt", _one), _basis("Eplus"),
    ),
    "sigma_layer2_H": MapInfo(
        "sigma_layer2_H", _sigma_layer2_h,
        lambda x: _layers_ok(x, _only(1, 2, single={1}), _is_weak),
        _dom_layer2_h, _w_layer2_h,
        _fix_layer2_h, _img_layer1, _model("sbt", _one), _basis("Eplus"),
    ),
    "binary_split": MapInfo(
        "binary_split", _binary_split, _flat_ok(_is_weak), _dom_wbt, _w_flat,
        inverse=_binary_split_inverse, codomain=_codom_binary,
        codomain_valid=_binary_codomain_ok, codomain_weight=_w_layered_plain,
    ),
    "sigma_E_Eplus": MapInfo(
        "sigma_E_Eplus", _sigma_e_eplus,
        lambda x: _layers_ok(x, lambda r, ts: _power_of_two(r), _is_strict),
        _dom_dyadic, _w_e_eplus,
        _fix_e_eplus, _bars_reversed, _model("sbt", _sgn), _basis("E"),
    ),
    "sigma_P_Eplus": MapInfo(
        "sigma_P_Eplus", _sigma_pe, _singular_dyadic_ok, _dom_singular_dyadic, _w_p_eplus,
        _fix_identical_bars, _img_rbt, _model("rbt_marked", _one), _basis("P", marked=True),
    ),
}


def map_info(name: str) -> MapInfo:
    try:
        return MAPS[name]
    except KeyError:
        raise ValueError(f"unknown map {name!r}; expected one of {', '.join(INVOLUTION_TAGS)}") from None


# -- public entry points -------------------------------------------------------------------

@dataclass(frozen=True)
class TraceStep:
    name: str
    input: Config
    rule: str
    output: Config

    def to_json(self) -> dict:
        return {"map": self.name, "input": self.input.to_json(), "rule": self.rule, "output": self.output.to_json()}


def apply(name: str, x: Config, trace: Optional[list] = None) -> Config:
    """Apply a named map; ``trace`` (a list) receives one :class:`TraceStep`."""
    info = map_info(name)
    if not info.valid(x):
        raise ValueError(f"{name}: input outside the map's domain")
    y, rule = info.forward(x)
    if trace is not None:
        trace.append(TraceStep(name, x, rule, y))
    return y


def invert(name: str, y: Config) -> Config:
    """Inverse of one of the bijections."""
    info = map_info(name)
    if not info.is_bijection:
        raise ValueError(f"{name} is an involution; apply it again to invert")
    if not info.codomain_valid(y):
        raise ValueError(f"{name}: input outside the map's image")
    return info.inverse(y)


def domain(name: str, d: int, J: int) -> list[Config]:
    if d < 0 or J < 0:
        raise ValueError("need d >= 0 and J >= 0")
    return list(map_info(name).domain(d, J))


def fixed_points(name: str, d: int, J: int) -> list[tuple[Config, Config]]:
    """Each fixed point of an involution paired with its object in the target model.

    The bijections have no fixed points and give an empty list.
    """
    info = map_info(name)
    if info.is_bijection:
        return []
    out = []
    for x in domain(name, d, J):
        y, _ = info.forward(x)
        if y == x:
            out.append((x, info.image(x)))
    return out


# -- harness ------------------------------------------------------------------------------

@dataclass
class InvolutionReport:
    name: str
    d: int
    J: int
    domain_size: int = 0
    fixed_count: int = 0
    checks: list[str] = field(default_factory=list)
    failures: list[tuple[str, dict]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def fail(self, check: str, witness: dict) -> None:
        if len(self.failures) < 20:
            self.failures.append((check, witness))

    def to_json(self) -> dict:
        return {
            "map": self.name,
            "d": self.d,
            "J": self.J,
            "ok": self.ok,
            "domain_size": self.domain_size,
            "fixed_count": self.fixed_count,
            "checks": self.checks,
            "failures": [{"check": c, "witness": w} for c, w in self.failures],
        }


def _add(acc: dict, mono: Monomial, c: int) -> None:
    acc[mono] = acc.get(mono, 0) + c


def _shard(name: str, items: list[Config], domain_set: frozenset) -> dict:
    """Per-element checks for an involution on one slice of its domain."""
    info = MAPS[name]
    failures: list[tuple[str, dict]] = []
    total: dict[Monomial, int] = {}
    fixed_total: dict[Monomial, int] = {}
    images: dict[Config, int] = {}
    image_monos: dict[Config, Monomial] = {}
    fixed_count = 0
    for x in items:
        c, m = info.weight(x)
        _add(total, m, c)
        y, rule = info.forward(x)
        if y not in domain_set:
            failures.append(("closure", {"input": x.to_json(), "output": y.to_json()}))
            continue
        if info.forward(y)[0] != x:
            failures.append(("involution", {"input": x.to_json(), "output": y.to_json()}))
        is_fixed = y == x
        if is_fixed != info.fixed(x):
            failures.append(("fixed-point characterization", {"input": x.to_json(), "fixed": is_fixed}))
        if is_fixed:
            fixed_count += 1
            _add(fixed_total, m, c)
            img = info.image(x)
            images[img] = images.get(img, 0) + c
            prev = image_monos.setdefault(img, m)
            if prev != m:
                failures.append(("image monomial", {"input": x.to_json(), "image": img.to_json()}))
        else:
            c2, m2 = info.weight(y)
            if m2 != m:
                failures.append(("monomial", {"input": x.to_json(), "output": y.to_json()}))
            if c2 != -c:
                failures.append(("sign", {"input": x.to_json(), "output": y.to_json(), "rule": rule}))
    return {
        "failures": failures,
        "total": total,
        "fixed_total": fixed_total,
        "images": images,
        "image_monos": image_monos,
        "fixed_count": fixed_count,
    }


def _chunks(items: list, n: int) -> list[list]:
    size = max(1, -(-len(items) // n))
    return [items[i: i + size] for i in range(0, len(items), size)]


def check_involution(name: str, d: int, J: Optional[int] = None, workers: int = 1) -> InvolutionReport:
    """Exhaustively check a named map over its domain at size d and labels <= J.

    Involutions: closure, sigma o sigma = id, monomial preservation and sign
    reversal off the fixed points, the fixed-point characterization, the
    fixed points matching the target model object by object, and both signed
    totals equal to the basis-level target.  Bijections: image inside the
    codomain, injectivity, surjectivity, both round trips and monomials.
    """
    J = max(d, 1) if J is None else J
    info = map_info(name)
    report = InvolutionReport(name, d, J)
    items = domain(name, d, J)
    report.domain_size = len(items)
    if info.is_bijection:
        _check_bijection(info, d, J, items, report)
        return report

    domain_set = frozenset(items)
    if len(domain_set) != len(items):
        report.fail("domain enumeration", {"duplicates": len(items) - len(domain_set)})
    if workers > 1 and len(items) > 1000:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_shard, [name] * workers, _chunks(items, workers), [domain_set] * workers))
    else:
        parts = [_shard(name, items, domain_set)]

    total: dict[Monomial, int] = {}
    fixed_total: dict[Monomial, int] = {}
    images: dict[Config, int] = {}
    image_monos: dict[Config, Monomial] = {}
    for part in parts:
        for f in part["failures"]:
            report.fail(*f)
        for m, c in part["total"].items():
            _add(total, m, c)
        for m, c in part["fixed_total"].items():
            _add(fixed_total, m, c)
        for img, c in part["images"].items():
            images[img] = images.get(img, 0) + c
        image_monos.update(part["image_monos"])
        report.fixed_count += part["fixed_count"]
    report.checks += ["closure", "involution", "monomial", "sign", "fixed-point characterization"]

    model = info.model(d, J)
    missing = [y for y in model if y not in images]
    extra = [y for y in images if y not in model]
    if missing or extra:
        report.fail(
            "fixed points vs target model",
            {
                "missing": [y.to_json() for y in missing[:3]],
                "extra": [y.to_json() for y in extra[:3]],
            },
        )
    for y, c in images.items():
        if y in model and (model[y][0] != c or model[y][1] != image_monos[y]):
            report.fail("fixed-point weight", {"image": y.to_json(), "signed sum": c, "expected": model[y][0]})
    report.checks.append("fixed points vs target model")

    target = info.target(d, J)
    for label, acc in (("signed total", total), ("fixed-point total", fixed_total)):
        got = MonomialSum(acc)
        if got != target:
            diff = got.first_difference(target)
            report.fail(label, {"monomial": repr(diff[0]), "got": str(diff[1]), "expected": str(diff[2])})
    report.checks.append("signed-sum identity")
    return report


def _check_bijection(info: MapInfo, d: int, J: int, items: list[Config], report: InvolutionReport) -> None:
    codomain = list(info.codomain(d, J))
    codomain_set = frozenset(codomain)
    seen: dict[Config, Config] = {}
    for x in items:
        y, _ = info.forward(x)
        if y not in codomain_set or not info.codomain_valid(y):
            report.fail("image in codomain", {"input": x.to_json(), "output": y.to_json()})
            continue
        if y in seen:
            report.fail("injective", {"input": x.to_json(), "other": seen[y].to_json()})
        seen[y] = x
        if info.inverse(y) != x:
            report.fail("inverse", {"input": x.to_json(), "output": y.to_json()})
        if info.weight(x) != info.codomain_weight(y):
            report.fail("monomial", {"input": x.to_json(), "output": y.to_json()})
        if info.name == "binary_split" and not _binary_digits_ok(x, y):
            report.fail("binary expansion", {"input": x.to_json(), "output": y.to_json()})
    if len(seen) != len(codomain_set):
        unreached = [y for y in codomain if y not in seen][:3]
        report.fail("surjective", {"unreached": [y.to_json() for y in unreached]})
    for y in codomain:
        if info.forward(info.inverse(y))[0] != y:
            report.fail("forward o inverse", {"input": y.to_json()})
    report.checks += ["image in codomain", "injective", "surjective", "inverse", "monomial"]
    if info.name == "binary_split":
        report.checks.append("binary expansion")


def _binary_digits_ok(x: Flat, y: Layered) -> bool:
    counts: dict[Bar, int] = {}
    for b in x.rows:
        counts[b] = counts.get(b, 0) + 1
    for b, n in counts.items():
        placed = [r for r, ts in y.layers if b in ts[0]]
        if sum(placed) != n or len(set(placed)) != len(placed):
            return False
    return all(len(ts) == 1 and _is_strict(ts[0]) for _, ts in y.layers)


# -- permutations and choice sequences ----------------------------------------------------

@dataclass(frozen=True)
class Permutation:
    """A permutation of {1..n} by its cycles, in written order.

    In canonical form each cycle starts at its minimum and cycles are written
    so that minima decrease from left to right; the rightmost cycle holds 1.
    """

    cycles: tuple[tuple[int, ...], ...]
    n: int

    def __post_init__(self):
        cycles = tuple(tuple(int(e) for e in c) for c in self.cycles)
        object.__setattr__(self, "cycles", cycles)
        flat = [e for c in cycles for e in c]
        if any(not c for c in cycles) or sorted(flat) != list(range(1, self.n + 1)):
            raise ValueError(f"cycles {cycles} do not partition 1..{self.n}")

    @classmethod
    def from_cycles(cls, cycles: Iterable[Iterable[int]], n: Optional[int] = None) -> "Permutation":
        cs = [tuple(c) for c in cycles]
        if n is None:
            n = sum(len(c) for c in cs)
        return cls(tuple(cs), n).canonical()

    @classmethod
    def parse(cls, text: str) -> "Permutation":
        """Read cycle notation such as ``(8,13)(2,3)(1,4,11,5)``; fixed points must be written."""
        body = text.replace(" ", "")
        if not body.startswith("(") or not body.endswith(")"):
            raise ValueError(f"bad cycle notation {text!r}")
        cycles = [tuple(int(e) for e in part.split(",")) for part in body[1:-1].split(")(")]
        return cls(tuple(cycles), sum(len(c) for c in cycles))

    def canonical(self) -> "Permutation":
        rotated = []
        for c in self.cycles:
            k = c.index(min(c))
            rotated.append(c[k:] + c[:k])
        rotated.sort(key=lambda c: -c[0])
        return Permutation(tuple(rotated), self.n)

    @property
    def is_canonical(self) -> bool:
        return self == self.canonical()

    @property
    def cyc_c(self) -> tuple[int, ...]:
        return tuple(len(c) for c in self.canonical().cycles)

    @property
    def cyc_p(self) -> tuple[int, ...]:
        return tuple(sorted((len(c) for c in self.cycles), reverse=True))

    def __call__(self, i: int) -> int:
        for c in self.cycles:
            if i in c:
                return c[(c.index(i) + 1) % len(c)]
        raise ValueError(f"{i} is not in 1..{self.n}")

    def one_line(self) -> tuple[int, ...]:
        return tuple(self(i) for i in range(1, self.n + 1))

    def __str__(self) -> str:
        return "".join("(" + ",".join(map(str, c)) + ")" for c in self.cycles)


@dataclass(frozen=True)
class ChoiceSequence:
    """Entries (c_n, ..., c_1) with 1 <= c_i <= i."""

    entries: tuple[int, ...]

    def __post_init__(self):
        entries = tuple(int(e) for e in self.entries)
        object.__setattr__(self, "entries", entries)
        n = len(entries)
        for pos, e in enumerate(entries):
            if not 1 <= e <= n - pos:
                raise ValueError(f"c_{n - pos} = {e} is outside 1..{n - pos}")

    @property
    def n(self) -> int:
        return len(self.entries)

    def c(self, i: int) -> int:
        return self.entries[self.n - i]

    @classmethod
    def all(cls, n: int) -> Iterator["ChoiceSequence"]:
        for entries in product(*(range(1, i + 1) for i in range(n, 0, -1))):
            yield cls(entries)

    @classmethod
    def random(cls, n: int, rng: random.Random) -> "ChoiceSequence":
        return cls(tuple(rng.randint(1, i) for i in range(n, 0, -1)))


def select(choices: Sequence[int], pool: Iterable[int]) -> tuple[int, ...]:
    """Take the c-th smallest remaining entry of the pool for each c in turn."""
    remaining = sorted(pool)
    return tuple(remaining.pop(c - 1) for c in choices)


def _as_rows(T: Union[BarTableau, Rows, Flat]) -> Rows:
    if isinstance(T, BarTableau):
        return T.rows
    if isinstance(T, Flat):
        return T.rows
    return _rows(T)


def phi_forward(c: ChoiceSequence, T: Union[BarTableau, Rows]) -> tuple[Permutation, tuple[BarTableau, ...]]:
    """Send a choice sequence and a weak bar tableau to a permutation and marked RBTs.

    The cell numbered by the current choice is marked, the bars identical to the
    marked bar from there down are peeled off, and the choices that follow fill
    a cycle of that size starting at the smallest unused value.  Cycles and
    tableaux come out in written order, last peeled first.
    """
    rows = _as_rows(T)
    if not _is_weak(rows):
        raise ValueError("phi_forward needs a weak bar tableau")
    d = _size(rows)
    if c.n != d:
        raise ValueError(f"choice sequence has length {c.n} but the tableau has {d} cells")
    pending = list(c.entries)
    pool = list(range(1, d + 1))
    peeled: list[tuple[Rows, int]] = []
    cycles: list[tuple[int, ...]] = []
    while rows:
        m = pending.pop(0)
        acc = 0
        for r, (length, _) in enumerate(rows):
            if m <= acc + length:
                break
            acc += length
        col = m - acc - 1
        bar = rows[r]
        end = r
        while end < len(rows) and rows[end] == bar:
            end += 1
        block = rows[r:end]
        cycle = [pool.pop(0)]
        for _ in range(_size(block) - 1):
            cycle.append(pool.pop(pending.pop(0) - 1))
        rows = rows[:r] + rows[end:]
        peeled.append((block, col))
        cycles.append(tuple(cycle))
    perm = Permutation(tuple(reversed(cycles)), d)
    tabs = tuple(BarTableau(block, "rectangular", (0, col)) for block, col in reversed(peeled))
    return perm, tabs


def phi_inverse(pi: Permutation, T_seq: Sequence[BarTableau]) -> tuple[ChoiceSequence, BarTableau]:
    """Undo :func:`phi_forward`: read the cycles left to right, each from its end."""
    T_seq = tuple(T_seq)
    if len(T_seq) != len(pi.cycles):
        raise ValueError(f"{len(pi.cycles)} cycles but {len(T_seq)} tableaux")
    starts: dict[int, BarTableau] = {}
    reading: list[int] = []
    for C, T in zip(pi.cycles, T_seq):
        if len(C) != T.size:
            raise ValueError(f"cycle {C} has length {len(C)} but its tableau has {T.size} cells")
        if T.mark is None or T.mark[0] != 0 or not _is_rect(T.rows):
            raise ValueError("each tableau must be rectangular with a mark in its top row")
        starts[C[0]] = T
        reading.extend(reversed(C))
    inserted: list[int] = []
    rows: Rows = ()
    out: list[int] = []
    for a in reading:
        insort(inserted, a)
        T = starts.get(a)
        if T is None:
            out.append(inserted.index(a) + 1)
        else:
            rows, idx = _insert_block(rows, T.rows)
            out.append(_size(rows[:idx]) + T.mark[1] + 1)
    return ChoiceSequence(tuple(reversed(out))), BarTableau(rows, "weak")


def phi_config(c: ChoiceSequence, T: Union[BarTableau, Rows]) -> Permuted:
    perm, tabs = phi_forward(c, T)
    return Permuted(perm, tuple(t.rows for t in tabs), tuple(t.mark[1] for t in tabs))


def K_size(alpha: Sequence[int]) -> int:
    """Number of permutations whose canonical cycle lengths read alpha."""
    n = sum(alpha)
    return factorial(n) // Z_composition(alpha)


def phi_cardinalities(d: int, J: int) -> tuple[int, int]:
    """|CS_d| |WBT[d]| beside the sum over compositions alpha of |K_alpha| |PRBT*(alpha)|."""
    left = factorial(d) * len(_tabs("wbt", d, J))
    right = 0
    for alpha in compositions(d):
        count = 1
        for part in alpha:
            count *= len(_rbts(part, J))
        right += K_size(alpha) * count
    return left, right


def random_wbt(d: int, J: int, rng: random.Random) -> BarTableau:
    bars = []
    left = d
    while left:
        i = rng.randint(1, left)
        bars.append((i, rng.randint(1, J)))
        left -= i
    return BarTableau.from_bars(bars, "weak")
