"""Partitions, compositions, polycompositions and types.

A polycomposition is a sequence of blocks ``d^r`` whose multiplicities
weakly increase; it is stored grouped by multiplicity, each group holding
the composition of degrees that carry that multiplicity.  A type is the
multiset version: every group holds a partition.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache, total_ordering
from math import factorial, prod
from typing import Callable, Iterable, Iterator, Union

Parts = tuple[int, ...]
Groups = tuple[tuple[int, Parts], ...]

FAMILY_TAGS = (
    "par",
    "com",
    "pcom",
    "typ",
    "pcom_sqf",
    "pcom_P",
    "pcom_E",
    "pcom_H",
    "pcom_dyad",
    "pcom_dyad_rows1",
    "pcom_dyad_singular",
)


# -- partitions and compositions ---------------------------------------------

@lru_cache(maxsize=None)
def compositions(n: int) -> tuple[Parts, ...]:
    """All compositions of n in lexicographic order; () is the composition of 0."""
    if n < 0:
        raise ValueError(f"negative size {n}")
    if n == 0:
        return ((),)
    out = []
    for first in range(1, n + 1):
        for rest in compositions(n - first):
            out.append((first,) + rest)
    return tuple(out)


@lru_cache(maxsize=None)
def partitions(n: int) -> tuple[Parts, ...]:
    """All partitions of n (weakly decreasing tuples) in lexicographic order."""
    if n < 0:
        raise ValueError(f"negative size {n}")

    def gen(m: int, cap: int) -> Iterator[Parts]:
        if m == 0:
            yield ()
            return
        for first in range(min(m, cap), 0, -1):
            for rest in gen(m - first, first):
                yield (first,) + rest

    return tuple(sorted(gen(n, n)))


def is_partition(parts: Iterable[int]) -> bool:
    parts = tuple(parts)
    return all(p >= 1 for p in parts) and all(a >= b for a, b in zip(parts, parts[1:]))


def part_multiplicities(parts: Iterable[int]) -> dict[int, int]:
    """m_i: how many times each part i occurs."""
    return dict(Counter(parts))


def distinct_parts(parts: Iterable[int]) -> int:
    return len(set(parts))


def sort_parts(parts: Iterable[int]) -> Parts:
    return tuple(sorted(parts, reverse=True))


def z_partition(parts: Iterable[int]) -> int:
    """z_lambda = prod_i i^{m_i} m_i!."""
    return prod(i ** m * factorial(m) for i, m in Counter(parts).items())


def Z_composition(parts: Iterable[int]) -> int:
    """Product of the partial sums a_1 (a_1 + a_2) ... of a composition."""
    total, out = 0, 1
    for a in parts:
        total += a
        out *= total
    return out


def harmonic_Z_sum(parts: Iterable[int]) -> Fraction:
    """Sum of 1/Z_alpha over the distinct rearrangements alpha of a partition."""
    from itertools import permutations

    return sum((Fraction(1, Z_composition(a)) for a in set(permutations(tuple(parts)))), Fraction(0))


# -- blocks, polycompositions, types ----------------------------------------

@dataclass(frozen=True)
class Block:
    degree: int
    multiplicity: int

    def __post_init__(self):
        if self.degree < 1 or self.multiplicity < 1:
            raise ValueError(f"block {self.degree}^{self.multiplicity} needs positive degree and multiplicity")

    @property
    def size(self) -> int:
        return self.degree * self.multiplicity


def _check_groups(groups: Groups, sorted_parts: bool) -> None:
    last = 0
    for r, parts in groups:
        if r <= last:
            raise ValueError(f"multiplicities must strictly increase across groups, got {r} after {last}")
        if not parts:
            raise ValueError(f"empty group at multiplicity {r}")
        if any(p < 1 for p in parts):
            raise ValueError(f"non-positive degree in group {parts}^{r}")
        if sorted_parts and not is_partition(parts):
            raise ValueError(f"type group {parts}^{r} is not weakly decreasing")
        last = r


class _Blocked:
    groups: Groups

    @property
    def size(self) -> int:
        return sum(r * sum(parts) for r, parts in self.groups)

    @property
    def length(self) -> int:
        """Number of blocks, counted with repetition."""
        return sum(len(parts) for _, parts in self.groups)

    @property
    def multiplicities(self) -> tuple[int, ...]:
        return tuple(r for r, _ in self.groups)

    def blocks(self) -> tuple[tuple[int, int], ...]:
        """The (degree, multiplicity) pairs in stored order."""
        return tuple((d, r) for r, parts in self.groups for d in parts)

    def restrict(self, r: int) -> Parts:
        """The degrees carrying multiplicity r."""
        for m, parts in self.groups:
            if m == r:
                return parts
        return ()

    def __bool__(self) -> bool:
        return bool(self.groups)

    def __len__(self) -> int:
        return self.length

    def __str__(self) -> str:
        from .notation import render_expr

        return render_expr(self)


@dataclass(frozen=True)
class Polycomposition(_Blocked):
    groups: Groups = ()

    def __post_init__(self):
        object.__setattr__(self, "groups", tuple((int(r), tuple(p)) for r, p in self.groups))
        _check_groups(self.groups, sorted_parts=False)

    @classmethod
    def from_blocks(cls, blocks: Iterable[tuple[int, int]]) -> "Polycomposition":
        """Build from (degree, multiplicity) pairs with weakly increasing multiplicities."""
        groups: list[tuple[int, list[int]]] = []
        for d, r in blocks:
            if groups and r < groups[-1][0]:
                raise ValueError("block multiplicities must weakly increase")
            if groups and groups[-1][0] == r:
                groups[-1][1].append(d)
            else:
                groups.append((r, [d]))
        return cls(tuple((r, tuple(p)) for r, p in groups))

    @classmethod
    def square_free(cls, parts: Iterable[int]) -> "Polycomposition":
        parts = tuple(parts)
        return cls(((1, parts),) if parts else ())

    @property
    def last_block_size(self) -> int:
        if not self.groups:
            raise ValueError("the empty polycomposition has no last block")
        r, parts = self.groups[-1]
        return r * parts[-1]

    def scale(self, r: int) -> "Polycomposition":
        """delta^r: every multiplicity multiplied by r."""
        return Polycomposition(tuple((m * r, p) for m, p in self.groups))

    def Z(self) -> int:
        """Product of Z over the compositions of all groups."""
        return prod(Z_composition(p) for _, p in self.groups)


@total_ordering
@dataclass(frozen=True, eq=True)
class TypeIndex(_Blocked):
    groups: Groups = ()

    def __post_init__(self):
        object.__setattr__(self, "groups", tuple((int(r), tuple(p)) for r, p in self.groups))
        _check_groups(self.groups, sorted_parts=True)

    @classmethod
    def from_blocks(cls, blocks: Iterable[tuple[int, int]]) -> "TypeIndex":
        """Build from (degree, multiplicity) pairs in any order."""
        by_mult: dict[int, list[int]] = {}
        for d, r in blocks:
            by_mult.setdefault(r, []).append(d)
        return cls(tuple((r, sort_parts(by_mult[r])) for r in sorted(by_mult)))

    @classmethod
    def single(cls, d: int, r: int = 1) -> "TypeIndex":
        return cls(((r, (d,)),))

    def key(self) -> tuple:
        return (self.size, self.groups)

    def __lt__(self, other: "TypeIndex") -> bool:
        return self.key() < other.key()

    def __add__(self, other: "TypeIndex") -> "TypeIndex":
        """Multiset union of blocks."""
        if not other.groups:
            return self
        if not self.groups:
            return other
        return TypeIndex.from_blocks(self.blocks() + other.blocks())

    def scale(self, r: int) -> "TypeIndex":
        return TypeIndex(tuple((m * r, p) for m, p in self.groups))

    def z_tensor(self) -> int:
        return z_tensor(self)


PolyLike = Union[Polycomposition, TypeIndex]


def psort(delta: PolyLike) -> TypeIndex:
    """Sort each group of a polycomposition into a partition."""
    return TypeIndex(tuple((r, sort_parts(p)) for r, p in delta.groups))


@dataclass(frozen=True)
class BlockStats:
    length: int
    last_block_size: int | None


def block_stats(delta: PolyLike) -> BlockStats:
    """Block count and the size of the last block (None for the empty object)."""
    if not delta.groups:
        return BlockStats(0, None)
    r, parts = delta.groups[-1]
    return BlockStats(delta.length, r * parts[-1])


def z_tensor(tau: TypeIndex) -> int:
    """Product of z over the partitions of all groups of a type."""
    return prod(z_partition(p) for _, p in tau.groups)


# -- families -----------------------------------------------------------------

def _is_power_of_two(r: int) -> bool:
    return r >= 1 and r & (r - 1) == 0


def _single(k: int) -> tuple[Parts, ...]:
    return ((k,),)


def _grouped(
    n: int,
    mults: Callable[[int], Iterable[int]],
    parts_for: Callable[[int, int], Iterable[Parts]],
) -> Iterator[Groups]:
    """Distribute n over increasing multiplicities, each group a nonempty composition."""

    def rec(m: int, allowed: tuple[int, ...]) -> Iterator[Groups]:
        if m == 0:
            yield ()
            return
        for idx, r in enumerate(allowed):
            for k in range(1, m // r + 1):
                for parts in parts_for(r, k):
                    for rest in rec(m - r * k, allowed[idx + 1:]):
                        yield ((r, parts),) + rest

    yield from rec(n, tuple(r for r in mults(n) if r <= max(n, 1)))


def _range_mults(n: int) -> Iterable[int]:
    return range(1, n + 1)


def _dyadic_mults(n: int) -> Iterable[int]:
    r = 1
    while r <= n:
        yield r
        r *= 2


def _pcom_family(kind: str, n: int) -> Iterator[Groups]:
    any_comp = lambda r, k: compositions(k)
    if kind == "pcom":
        return _grouped(n, _range_mults, any_comp)
    if kind == "pcom_sqf":
        return _grouped(n, lambda n: (1,), any_comp)
    if kind == "pcom_P":
        return _grouped(n, lambda n: (1, 2), any_comp)
    if kind == "pcom_E":
        return _grouped(n, lambda n: (1, 2), lambda r, k: compositions(k) if r == 1 else _single(k))
    if kind == "pcom_H":
        return _grouped(n, lambda n: (1, 2), lambda r, k: _single(k) if r == 1 else compositions(k))
    if kind == "pcom_dyad":
        return _grouped(n, _dyadic_mults, any_comp)
    if kind == "pcom_dyad_rows1":
        return _grouped(n, _dyadic_mults, lambda r, k: _single(k))
    if kind == "pcom_dyad_singular":
        if n == 0:
            return iter([()])
        return (((r, c),) for r in _dyadic_mults(n) if n % r == 0 for c in compositions(n // r))
    raise ValueError(f"unknown family kind {kind!r}")


@lru_cache(maxsize=None)
def enum_family(kind: str, n: int) -> tuple:
    """Complete, duplicate-free enumeration of a family at size n."""
    if n < 0:
        raise ValueError(f"negative size {n}")
    if kind == "par":
        return partitions(n)
    if kind == "com":
        return compositions(n)
    if kind == "typ":
        types = (TypeIndex(g) for g in _grouped(n, _range_mults, lambda r, k: partitions(k)))
        return tuple(sorted(types))
    return tuple(Polycomposition(g) for g in _pcom_family(kind, n))


def types_of(n: int) -> tuple[TypeIndex, ...]:
    return enum_family("typ", n)


def is_member(kind: str, obj) -> bool:
    """Membership predicate matching enum_family."""
    if kind == "par":
        return is_partition(obj)
    if kind == "com":
        return all(p >= 1 for p in obj)
    if kind == "typ":
        return isinstance(obj, TypeIndex)
    if kind not in FAMILY_TAGS:
        raise ValueError(f"unknown family kind {kind!r}")
    if not isinstance(obj, Polycomposition):
        return False
    mults = obj.multiplicities
    sizes = [len(p) for _, p in obj.groups]
    if kind == "pcom":
        return True
    if kind == "pcom_sqf":
        return set(mults) <= {1}
    if kind == "pcom_P":
        return set(mults) <= {1, 2}
    if kind == "pcom_E":
        return set(mults) <= {1, 2} and len(obj.restrict(2)) <= 1
    if kind == "pcom_H":
        return set(mults) <= {1, 2} and len(obj.restrict(1)) <= 1
    if kind == "pcom_dyad":
        return all(map(_is_power_of_two, mults))
    if kind == "pcom_dyad_rows1":
        return all(map(_is_power_of_two, mults)) and all(s == 1 for s in sizes)
    return all(map(_is_power_of_two, mults)) and len(mults) <= 1
