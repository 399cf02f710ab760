"""The twelve expansions between H, E, E+ and P, lifted to types and assembled
into exact transition matrices, plus the monomial-oracle verifier."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping, Optional, Sequence, Union

from .combinat import Polycomposition, TypeIndex, enum_family, psort, types_of
from .monomials import BASES, Monomial, MonomialSum, basis_monomials, expand_over_pcom
from .notation import render_expr

PAIRS = tuple((F, G) for F in BASES for G in BASES if F != G)

RECURSIONS = ("HE_conv", "dH", "dE", "HU", "UF")


def _sign(k: int) -> int:
    return -1 if k % 2 else 1


def _c_sqf_signed(delta: Polycomposition) -> Fraction:
    return Fraction(_sign(delta.length))


def _c_P_H(delta: Polycomposition) -> Fraction:
    return Fraction(_sign(delta.length - 1) * delta.last_block_size)


def _c_P_E(delta: Polycomposition) -> Fraction:
    return Fraction(_sign(delta.length) * delta.last_block_size)


def _c_H_P(delta: Polycomposition) -> Fraction:
    return Fraction(1, delta.Z())


def _c_E_P(delta: Polycomposition) -> Fraction:
    return Fraction(_sign(delta.length), delta.Z())


def _c_Ep_E(delta: Polycomposition) -> Fraction:
    return Fraction(_sign(len(delta.restrict(1))))


def _c_Ep_H(delta: Polycomposition) -> Fraction:
    return Fraction(_sign(len(delta.restrict(2))))


def _c_Ep_P(delta: Polycomposition) -> Fraction:
    return Fraction(_sign(len(delta.restrict(2))), delta.Z())


def _c_one(delta: Polycomposition) -> Fraction:
    return Fraction(1)


# (family of index polycompositions, coefficient rule)
RULES = {
    ("H", "E"): ("pcom_sqf", _c_sqf_signed),
    ("E", "H"): ("pcom_sqf", _c_sqf_signed),
    ("P", "H"): ("pcom_sqf", _c_P_H),
    ("P", "E"): ("pcom_sqf", _c_P_E),
    ("H", "P"): ("pcom_sqf", _c_H_P),
    ("E", "P"): ("pcom_sqf", _c_E_P),
    ("Eplus", "E"): ("pcom_E", _c_Ep_E),
    ("Eplus", "H"): ("pcom_H", _c_Ep_H),
    ("Eplus", "P"): ("pcom_P", _c_Ep_P),
    ("H", "Eplus"): ("pcom_dyad_rows1", _c_one),
    ("E", "Eplus"): ("pcom_dyad", _c_sqf_signed),
    ("P", "Eplus"): ("pcom_dyad_singular", _c_P_H),
}


def _check_pair(F: str, G: str) -> None:
    if (F, G) not in RULES:
        raise ValueError(f"unsupported basis pair {F!r} -> {G!r}")


@dataclass(frozen=True)
class Expansion:
    """F_source written as a combination of G_index; terms never hold zeros."""

    from_basis: str
    to_basis: str
    source: Union[TypeIndex, int]
    terms: Mapping[Union[Polycomposition, TypeIndex], Fraction] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "terms", {k: Fraction(v) for k, v in self.terms.items() if v})

    def coefficient(self, key) -> Fraction:
        return self.terms.get(key, Fraction(0))

    def sorted_terms(self) -> list:
        if all(isinstance(k, TypeIndex) for k in self.terms):
            return sorted(self.terms.items())
        return sorted(self.terms.items(), key=lambda kv: render_expr(kv[0]))

    def to_json(self) -> dict:
        source = self.source if isinstance(self.source, TypeIndex) else TypeIndex.single(self.source) if self.source else TypeIndex()
        return {
            "from": self.from_basis,
            "to": self.to_basis,
            "source": render_expr(source),
            "terms": [
                {"type": render_expr(k), "num": v.numerator, "den": v.denominator}
                for k, v in self.sorted_terms()
            ],
        }


@lru_cache(maxsize=None)
def expand_elementary(F: str, G: str, d: int) -> Expansion:
    """F_d in the G basis, indexed by polycompositions."""
    _check_pair(F, G)
    if d == 0:
        return Expansion(F, G, 0, {Polycomposition(): Fraction(1)})
    family, rule = RULES[(F, G)]
    return Expansion(F, G, d, {delta: rule(delta) for delta in enum_family(family, d)})


def collect_types(e: Expansion) -> Expansion:
    """Sum coefficients over each psort fiber, dropping zero totals."""
    out: dict[TypeIndex, Fraction] = {}
    for delta, c in e.terms.items():
        tau = psort(delta)
        out[tau] = out.get(tau, Fraction(0)) + c
    return Expansion(e.from_basis, e.to_basis, e.source, out)


@lru_cache(maxsize=None)
def _block_expansion(F: str, G: str, d: int, r: int) -> tuple[tuple[TypeIndex, Fraction], ...]:
    """F_{d^r} in G by types: the elementary expansion with every block scaled by r."""
    collected = collect_types(expand_elementary(F, G, d))
    return tuple((tau.scale(r), c) for tau, c in collected.terms.items())


def _multiply(a: Mapping[TypeIndex, Fraction], b: Iterable[tuple[TypeIndex, Fraction]]) -> dict[TypeIndex, Fraction]:
    b = tuple(b)
    out: dict[TypeIndex, Fraction] = {}
    for t1, c1 in a.items():
        for t2, c2 in b:
            t = t1 + t2
            out[t] = out.get(t, Fraction(0)) + c1 * c2
    return out


@lru_cache(maxsize=None)
def expand_type_element(F: str, G: str, sigma: TypeIndex) -> Expansion:
    """F_sigma in the G basis: the product of its block expansions, collected by type."""
    _check_pair(F, G)
    acc: dict[TypeIndex, Fraction] = {TypeIndex(): Fraction(1)}
    for d, r in sigma.blocks():
        acc = _multiply(acc, _block_expansion(F, G, d, r))
    return Expansion(F, G, sigma, acc)


# -- matrices ---------------------------------------------------------------------

def _format_fraction(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def _latex_fraction(c: Fraction) -> str:
    if c.denominator == 1:
        return str(c.numerator)
    sign = "-" if c < 0 else ""
    return f"{sign}\\frac{{{abs(c.numerator)}}}{{{c.denominator}}}"


@dataclass(frozen=True)
class TransitionMatrix:
    """Column sigma holds the coefficients of F_sigma in the G basis; row tau is G_tau."""

    from_basis: str
    to_basis: str
    n: int
    entries: Mapping[tuple[TypeIndex, TypeIndex], Fraction]

    def __post_init__(self):
        object.__setattr__(self, "entries", {k: Fraction(v) for k, v in self.entries.items() if v})

    @property
    def types(self) -> tuple[TypeIndex, ...]:
        return types_of(self.n)

    def entry(self, row: TypeIndex, col: TypeIndex) -> Fraction:
        return self.entries.get((row, col), Fraction(0))

    def column(self, col: TypeIndex) -> dict[TypeIndex, Fraction]:
        return {r: c for (r, s), c in self.entries.items() if s == col}

    def dense(self, order: Optional[Sequence[TypeIndex]] = None) -> list[list[Fraction]]:
        order = list(order or self.types)
        return [[self.entry(r, c) for c in order] for r in order]

    def __matmul__(self, other: "TransitionMatrix") -> "TransitionMatrix":
        """Compose: (M(G,K) @ M(F,G)) is M(F,K)."""
        if self.n != other.n or other.to_basis != self.from_basis:
            raise ValueError("incompatible matrices")
        by_row: dict[TypeIndex, list[tuple[TypeIndex, Fraction]]] = {}
        for (t, s), c in other.entries.items():
            by_row.setdefault(t, []).append((s, c))
        out: dict[tuple[TypeIndex, TypeIndex], Fraction] = {}
        for (r, t), c1 in self.entries.items():
            for s, c2 in by_row.get(t, ()):
                out[(r, s)] = out.get((r, s), Fraction(0)) + c1 * c2
        return TransitionMatrix(other.from_basis, self.to_basis, self.n, out)

    def is_identity(self) -> bool:
        return self.first_non_identity() is None

    def first_non_identity(self) -> Optional[tuple[TypeIndex, TypeIndex, Fraction]]:
        for r in self.types:
            for c in self.types:
                want = Fraction(1 if r == c else 0)
                got = self.entry(r, c)
                if got != want:
                    return r, c, got
        return None

    # -- rendering

    def to_text(self, order: Optional[Sequence[TypeIndex]] = None) -> str:
        order = list(order or self.types)
        labels = [render_expr(t) for t in order]
        cells = [[_format_fraction(v) for v in row] for row in self.dense(order)]
        width = max([len(s) for s in labels] + [len(c) for row in cells for c in row] + [1])
        lines = [f"M({self.from_basis},{self.to_basis}) n={self.n}", " " * width + " " + " ".join(s.rjust(width) for s in labels)]
        for lab, row in zip(labels, cells):
            lines.append(lab.rjust(width) + " " + " ".join(c.rjust(width) for c in row))
        return "\n".join(lines) + "\n"

    def to_csv(self, order: Optional[Sequence[TypeIndex]] = None) -> str:
        import csv
        import io

        order = list(order or self.types)
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow([""] + [render_expr(t) for t in order])
        for t, row in zip(order, self.dense(order)):
            writer.writerow([render_expr(t)] + [_format_fraction(v) for v in row])
        return buf.getvalue()

    def to_latex(self, order: Optional[Sequence[TypeIndex]] = None) -> str:
        order = list(order or self.types)
        lines = [f"% M({self.from_basis},{self.to_basis}), n = {self.n}; column = source, row = target"]
        lines.append("\\begin{array}{r|" + "c" * len(order) + "}")
        lines.append(" & " + " & ".join(render_expr(t) for t in order) + " \\\\ \\hline")
        for t, row in zip(order, self.dense(order)):
            lines.append(render_expr(t) + " & " + " & ".join(_latex_fraction(v) for v in row) + " \\\\")
        lines.append("\\end{array}")
        return "\n".join(lines) + "\n"

    def to_json(self) -> dict:
        return {
            "from": self.from_basis,
            "to": self.to_basis,
            "n": self.n,
            "types": [render_expr(t) for t in self.types],
            "entries": [
                {"row": render_expr(r), "col": render_expr(c), "num": v.numerator, "den": v.denominator}
                for (r, c), v in sorted(self.entries.items())
            ],
        }

    @classmethod
    def from_json(cls, data: dict) -> "TransitionMatrix":
        from .notation import parse_expr

        entries = {
            (parse_expr(e["row"]), parse_expr(e["col"])): Fraction(e["num"], e["den"]) for e in data["entries"]
        }
        return cls(data["from"], data["to"], data["n"], entries)


@lru_cache(maxsize=None)
def transition_matrix(F: str, G: str, n: int) -> TransitionMatrix:
    _check_pair(F, G)
    entries = {}
    for sigma in types_of(n):
        for tau, c in expand_type_element(F, G, sigma).terms.items():
            entries[(tau, sigma)] = c
    return TransitionMatrix(F, G, n, entries)


def identity_matrix(F: str, n: int) -> TransitionMatrix:
    return TransitionMatrix(F, F, n, {(t, t): Fraction(1) for t in types_of(n)})


@dataclass
class CheckReport:
    ok: bool = True
    checked: int = 0
    failures: list[str] = field(default_factory=list)

    def fail(self, message: str) -> None:
        self.ok = False
        self.failures.append(message)


def omega_conjugate_P(n: int) -> TransitionMatrix:
    """Expand P in H, replace each H_tau by E_tau, and expand back into P."""
    to_H = transition_matrix("P", "H", n)
    swapped = TransitionMatrix("P", "E", n, to_H.entries)
    return transition_matrix("E", "P", n) @ swapped


def matrix_checks(n: int) -> CheckReport:
    """Inverse pairs, the Omega conjugation of P, and M(H,E) = M(E,H)."""
    report = CheckReport()
    for F, G in PAIRS:
        prod_ = transition_matrix(G, F, n) @ transition_matrix(F, G, n)
        report.checked += 1
        bad = prod_.first_non_identity()
        if bad:
            r, c, got = bad
            report.fail(f"M({G},{F})*M({F},{G}) at row {render_expr(r)}, col {render_expr(c)}: got {got}")
    omega = omega_conjugate_P(n)
    report.checked += 1
    for r in types_of(n):
        for c in types_of(n):
            want = Fraction(_sign(c.length) if r == c else 0)
            got = omega.entry(r, c)
            if got != want:
                report.fail(f"Omega on P at row {render_expr(r)}, col {render_expr(c)}: got {got}, expected {want}")
    he, eh = transition_matrix("H", "E", n), transition_matrix("E", "H", n)
    report.checked += 1
    if he.entries != eh.entries:
        diff = next(k for k in set(he.entries) | set(eh.entries) if he.entry(*k) != eh.entry(*k))
        report.fail(f"M(H,E) != M(E,H) at {render_expr(diff[0])}, {render_expr(diff[1])}: {he.entry(*diff)} vs {eh.entry(*diff)}")
    return report


# -- monomial oracle --------------------------------------------------------------

def expansion_tag(F: str, G: str) -> str:
    return f"{F}-in-{G}"


IDENTITY_TAGS = tuple(expansion_tag(F, G) for F, G in PAIRS) + RECURSIONS


@dataclass(frozen=True)
class OracleResult:
    identity: str
    d: int
    J: int
    ok: bool
    witness: Optional[Monomial] = None
    left: Fraction = Fraction(0)
    right: Fraction = Fraction(0)

    def __bool__(self) -> bool:
        return self.ok


def _compare(identity: str, d: int, J: int, lhs: MonomialSum, rhs: MonomialSum) -> OracleResult:
    diff = lhs.first_difference(rhs)
    if diff is None:
        return OracleResult(identity, d, J, True)
    m, a, b = diff
    return OracleResult(identity, d, J, False, m, a, b)


def expansion_monomials(e: Expansion, J: int) -> MonomialSum:
    """The right-hand side sum of coefficient * G_index as monomials."""
    out = MonomialSum.zero()
    for key, c in e.terms.items():
        out = out + expand_over_pcom(e.to_basis, key, J).scale(c)
    return out


def verify_expansion(e: Expansion, J: int) -> OracleResult:
    """Compare F_d against an elementary expansion of it, monomial by monomial."""
    d = e.source if isinstance(e.source, int) else e.source.size
    lhs = basis_monomials(e.from_basis, d, J) if isinstance(e.source, int) else expand_over_pcom(e.from_basis, e.source, J)
    return _compare(expansion_tag(e.from_basis, e.to_basis), d, J, lhs, expansion_monomials(e, J))


def _F(F: str, d: int, J: int, r: int = 1) -> MonomialSum:
    return expand_over_pcom(F, TypeIndex.single(d, r), J) if d else MonomialSum.one()


def _recursion_sides(identity: str, d: int, J: int) -> tuple[MonomialSum, MonomialSum]:
    zero = MonomialSum.zero()
    if identity == "HE_conv":
        lhs = sum((_F("H", k, J) * _F("E", d - k, J) for k in range(d + 1)), zero)
        return lhs, MonomialSum.one() if d == 0 else zero
    if identity == "dH":
        rhs = sum((_F("H", d - i, J) * _F("P", i, J) for i in range(1, d + 1)), zero)
        return _F("H", d, J).scale(d), rhs
    if identity == "dE":
        rhs = sum((_F("E", d - i, J) * _F("P", i, J) for i in range(1, d + 1)), zero)
        return _F("E", d, J).scale(d), -rhs
    if identity == "HU":
        rhs = sum((_F("H", k, J, 2) * _F("Eplus", d - 2 * k, J) for k in range(d // 2 + 1)), zero)
        return _F("H", d, J), rhs
    if identity == "UF":
        rhs = sum((_F("H", d - 2 * k, J) * _F("E", k, J, 2) for k in range(d // 2 + 1)), zero)
        return _F("Eplus", d, J), rhs
    raise ValueError(f"unknown identity {identity!r}")


def oracle_verify(identity: str, d: int, J: Optional[int] = None) -> OracleResult:
    """Evaluate both sides of an identity as truncated monomial sums and compare exactly."""
    J = J if J is not None else max(d, 1)
    if identity in RECURSIONS:
        lhs, rhs = _recursion_sides(identity, d, J)
        return _compare(identity, d, J, lhs, rhs)
    for F, G in PAIRS:
        if identity == expansion_tag(F, G):
            return verify_expansion(expand_elementary(F, G, d), J)
    raise ValueError(f"unknown identity {identity!r}; expected one of {', '.join(IDENTITY_TAGS)}")
