"""Parser and printer for block-exponent expressions such as ``(3,2)^1(2,2)^2``.

Grammar (whitespace is ignored)::

    expr  := group+ | "0"
    group := "(" int ("," int)* ")" "^" int

``"0"`` stands for the empty type or polycomposition.
"""

from __future__ import annotations

from typing import Literal, Union

from .combinat import Polycomposition, TypeIndex, sort_parts

Mode = Literal["type", "pcom"]


class NotationError(ValueError):
    """Malformed expression; ``position`` is a 0-based offset into the input text."""

    def __init__(self, message: str, position: int, text: str = ""):
        super().__init__(f"{message} at position {position}")
        self.position = position
        self.text = text


class _Scanner:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0
        self._skip()

    def _skip(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, ch: str):
        if self.peek() != ch:
            found = repr(self.peek()) if self.peek() else "end of input"
            raise NotationError(f"expected {ch!r}, found {found}", self.pos, self.text)
        self.pos += 1
        self._skip()

    def integer(self) -> int:
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if start == self.pos:
            found = repr(self.peek()) if self.peek() else "end of input"
            raise NotationError(f"expected a positive integer, found {found}", start, self.text)
        value = int(self.text[start:self.pos])
        if value < 1:
            raise NotationError("integers must be at least 1", start, self.text)
        self._skip()
        return value

    def at_end(self) -> bool:
        return self.pos >= len(self.text)


def parse_groups(text: str) -> list[tuple[int, tuple[int, ...], int]]:
    """Raw (multiplicity, entries, offset) triples in input order."""
    sc = _Scanner(text)
    if sc.at_end():
        raise NotationError("empty expression", 0, text)
    if sc.peek() == "0":
        sc.pos += 1
        sc._skip()
        if not sc.at_end():
            raise NotationError("unexpected text after '0'", sc.pos, text)
        return []
    groups = []
    while not sc.at_end():
        start = sc.pos
        sc.expect("(")
        entries = [sc.integer()]
        while sc.peek() == ",":
            sc.expect(",")
            entries.append(sc.integer())
        sc.expect(")")
        sc.expect("^")
        r = sc.integer()
        groups.append((r, tuple(entries), start))
    return groups


def parse_expr(text: str, mode: Mode = "type") -> Union[TypeIndex, Polycomposition]:
    """Parse a block expression as a type (entries sorted, equal multiplicities
    merged) or as a polycomposition (order kept, multiplicities weakly increasing)."""
    groups = parse_groups(text)
    if mode == "type":
        merged: dict[int, list[int]] = {}
        for r, entries, _ in groups:
            merged.setdefault(r, []).extend(entries)
        return TypeIndex(tuple((r, sort_parts(merged[r])) for r in sorted(merged)))
    if mode == "pcom":
        out: list[tuple[int, list[int]]] = []
        for r, entries, start in groups:
            if out and r < out[-1][0]:
                raise NotationError(
                    f"multiplicity {r} follows {out[-1][0]}; polycomposition multiplicities must weakly increase",
                    start,
                    text,
                )
            if out and out[-1][0] == r:
                out[-1][1].extend(entries)
            else:
                out.append((r, list(entries)))
        return Polycomposition(tuple((r, tuple(e)) for r, e in out))
    raise ValueError(f"unknown mode {mode!r}")


def render_expr(obj: Union[TypeIndex, Polycomposition]) -> str:
    if not obj.groups:
        return "0"
    return "".join(f"({','.join(map(str, parts))})^{r}" for r, parts in obj.groups)
