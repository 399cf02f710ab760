"""Command-line front end.

Exit status: 0 on success, 1 when a verification finds a counterexample,
2 on usage errors (bad flags, malformed expressions, out-of-range values).
Nothing is written to ``--out`` unless the command succeeds.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import tempfile
from pathlib import Path
from typing import Optional, Sequence

from . import __version__
from .combinat import FAMILY_TAGS, enum_family, types_of
from .monomials import BASES, enum_bar_tableaux
from .notation import NotationError, parse_expr, render_expr

# bumped whenever a change could alter computed matrices; older cache files are ignored
ENGINE_VERSION = f"{__version__}+1"

FORMATS = ("json", "csv", "latex", "text")
TABLEAU_KINDS = ("wbt", "sbt", "rbt_marked")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(2, f"{self.prog}: error: {message}\n")


# -- output -------------------------------------------------------------------------

def _emit(text: str, out: Optional[str]) -> None:
    if not text.endswith("\n"):
        text += "\n"
    if out is None:
        sys.stdout.write(text)
        return
    path = Path(out)
    directory = path.parent if str(path.parent) else Path(".")
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _dumps(obj) -> str:
    return json.dumps(obj, indent=2)


# -- matrix cache -------------------------------------------------------------------------

def cache_dir() -> Path:
    return Path(os.environ.get("PSYM_CACHE_DIR", ".psym-cache"))


def _checksum(payload: dict) -> str:
    canonical = json.dumps(payload, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode()).hexdigest()


def _cache_path(F: str, G: str, n: int) -> Path:
    return cache_dir() / f"M_{F}_{G}_{n}.json"


def load_cached_matrix(F: str, G: str, n: int):
    """The cached matrix, or None when missing, stale or corrupt."""
    from .expansions import TransitionMatrix

    path = _cache_path(F, G, n)
    try:
        entry = json.loads(path.read_text())
        key = entry["key"]
        if key != {"from": F, "to": G, "n": n, "engine": ENGINE_VERSION}:
            return None
        if _checksum(entry["payload"]) != entry["checksum"]:
            return None
        return TransitionMatrix.from_json(entry["payload"])
    except (OSError, ValueError, KeyError, TypeError):
        return None


def store_cached_matrix(M) -> Path:
    payload = M.to_json()
    entry = {
        "key": {"from": M.from_basis, "to": M.to_basis, "n": M.n, "engine": ENGINE_VERSION},
        "checksum": _checksum(payload),
        "payload": payload,
    }
    path = _cache_path(M.from_basis, M.to_basis, M.n)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=".tmp-", suffix=".json")
    with os.fdopen(fd, "w") as fh:
        json.dump(entry, fh, sort_keys=True)
    os.replace(tmp, path)
    return path


def cached_transition_matrix(F: str, G: str, n: int, use_cache: bool = True):
    from .expansions import transition_matrix

    if use_cache:
        M = load_cached_matrix(F, G, n)
        if M is not None:
            return M
    M = transition_matrix(F, G, n)
    if use_cache:
        try:
            store_cached_matrix(M)
        except OSError:
            pass  # an unwritable cache only costs recomputation
    return M


# -- argument helpers -------------------------------------------------------------------------

def _nonneg(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if v < 0:
        raise argparse.ArgumentTypeError(f"expected a non-negative integer, got {v}")
    return v


def _positive(text: str) -> int:
    v = _nonneg(text)
    if v == 0:
        raise argparse.ArgumentTypeError("expected a positive integer")
    return v


def _parse(text: str, mode: str = "type"):
    try:
        return parse_expr(text, mode)
    except NotationError as exc:
        pointer = " " * exc.position + "^"
        raise UsageError(f"{exc}\n  {text}\n  {pointer}") from None


def _read_order(path: str, n: int):
    try:
        lines = [ln.strip() for ln in Path(path).read_text().splitlines()]
    except OSError as exc:
        raise UsageError(f"cannot read order file: {exc}") from None
    order = [_parse(ln) for ln in lines if ln and not ln.startswith("#")]
    if sorted(order) != sorted(types_of(n)) or len(set(order)) != len(order):
        raise UsageError(f"order file must list each type of size {n} exactly once")
    return order


# -- subcommands --------------------------------------------------------------------------------

def cmd_enumerate(args) -> int:
    if args.kind in TABLEAU_KINDS:
        items = [repr(t) for t in enum_bar_tableaux(args.kind, args.n, args.labels)]
    else:
        items = [render_expr(x) if hasattr(x, "groups") else ",".join(map(str, x)) for x in enum_family(args.kind, args.n)]
    if args.format == "json":
        _emit(_dumps({"kind": args.kind, "n": args.n, "count": len(items), "items": items}), args.out)
    else:
        _emit("\n".join(items), args.out)
    return 0


def cmd_expand(args) -> int:
    from .expansions import collect_types, expand_elementary, expand_type_element

    if args.source is not None:
        e = expand_type_element(args.from_basis, args.to_basis, _parse(args.source))
    else:
        e = expand_elementary(args.from_basis, args.to_basis, args.d)
        if args.by_type:
            e = collect_types(e)
    if args.format == "json":
        _emit(_dumps(e.to_json()), args.out)
    else:
        lines = [f"{t['num']}/{t['den']}  {t['type']}" if t["den"] != 1 else f"{t['num']}  {t['type']}" for t in e.to_json()["terms"]]
        _emit("\n".join(lines), args.out)
    return 0


def cmd_matrix(args) -> int:
    order = None
    if args.order == "file":
        if not args.order_file:
            raise UsageError("--order file needs --order-file PATH")
        order = _read_order(args.order_file, args.n)
    elif args.order_file:
        raise UsageError("--order-file is only used with --order file")
    M = cached_transition_matrix(args.from_basis, args.to_basis, args.n, not args.no_cache)
    if args.format == "json":
        text = _dumps(M.to_json())
    elif args.format == "csv":
        text = M.to_csv(order)
    elif args.format == "latex":
        text = M.to_latex(order)
    else:
        text = M.to_text(order)
    _emit(text, args.out)
    return 0


def cmd_verify(args) -> int:
    from .expansions import IDENTITY_TAGS, oracle_verify

    tags = IDENTITY_TAGS if args.identity == "all" else (args.identity,)
    results = []
    for tag in tags:
        for d in range(args.max_d + 1):
            J = args.labels if args.labels is not None else max(d, 1)
            results.append(oracle_verify(tag, d, J))
    failed = [r for r in results if not r.ok]
    if args.format == "json":
        rows = [
            {
                "identity": r.identity,
                "d": r.d,
                "J": r.J,
                "ok": r.ok,
                "witness": None if r.ok else {"monomial": repr(r.witness), "left": str(r.left), "right": str(r.right)},
            }
            for r in results
        ]
        _emit(_dumps({"ok": not failed, "results": rows}), args.out)
    else:
        lines = []
        for r in results:
            line = f"{r.identity:<14} d={r.d} J={r.J} {'ok' if r.ok else 'FAIL'}"
            if not r.ok:
                line += f"  witness {r.witness!r}: left {r.left}, right {r.right}"
            lines.append(line)
        lines.append(f"{len(results) - len(failed)}/{len(results)} passed")
        _emit("\n".join(lines), args.out)
    for r in failed[:1]:
        print(f"counterexample: {r.identity} d={r.d} J={r.J} at {r.witness!r}", file=sys.stderr)
    return 1 if failed else 0


def cmd_tabloids(args) -> int:
    from .tabloids import enum_tabloids, tabloid_weights

    shape, content = _parse(args.shape), _parse(args.content)
    if shape.size != content.size:
        raise UsageError("shape and content must have the same size")
    try:
        tabs = enum_tabloids(args.family, shape, content)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    rows = []
    for t in tabs:
        w = tabloid_weights(t)
        rows.append({**t.to_json(), "weights": {"l1": w.l1, "l2": w.l2, "L": w.L, "L_star": w.L_star}})
    if args.format == "json":
        payload = {"family": args.family, "shape": render_expr(shape), "content": render_expr(content), "count": len(rows), "tabloids": rows}
        _emit(_dumps(payload), args.out)
    else:
        _emit(f"{len(rows)} {args.family} tabloids of shape {render_expr(shape)} and content {render_expr(content)}", args.out)
    return 0


def cmd_oeis(args) -> int:
    from .oeis import sequence_table

    table = sequence_table(args.seq, args.count, args.expand_up_to)
    if args.format == "json":
        rows = [{"d": r.d, "formula": r.formula, "expansion": r.expansion, "match": r.match, "extrapolated": r.extrapolated} for r in table]
        _emit(_dumps({"seq": args.seq, "count": args.count, "rows": rows}), args.out)
    elif args.format == "csv":
        lines = ["d,formula,expansion,match,extrapolated"]
        for r in table:
            exp = "" if r.expansion is None else str(r.expansion)
            match = "" if r.match is None else str(r.match).lower()
            lines.append(f"{r.d},{r.formula},{exp},{match},{str(r.extrapolated).lower()}")
        _emit("\n".join(lines), args.out)
    else:
        _emit(" ".join(str(r.formula) for r in table), args.out)
    bad = [r for r in table if r.match is False]
    return 1 if bad else 0


def cmd_involution(args) -> int:
    from .involutions import apply, check_involution, domain

    J = args.labels if args.labels is not None else max(args.d, 1)
    report = check_involution(args.name, args.d, J)
    payload = {"report": report.to_json()}
    if args.trace:
        steps: list = []
        for x in domain(args.name, args.d, J):
            apply(args.name, x, steps)
        payload["trace"] = [s.to_json() for s in steps]
    if args.format == "json":
        _emit(_dumps(payload), args.out)
    else:
        status = "pass" if report.ok else "FAIL"
        lines = [f"{args.name} d={args.d} J={J}: {status} ({report.domain_size} elements, {report.fixed_count} fixed)"]
        lines += [f"  {c}: {json.dumps(w)}" for c, w in report.failures]
        if args.trace:
            lines += [json.dumps(s) for s in payload["trace"]]
        _emit("\n".join(lines), args.out)
    return 0 if report.ok else 1


# -- parser ----------------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    from .expansions import IDENTITY_TAGS
    from .involutions import INVOLUTION_TAGS
    from .oeis import SEQUENCE_TAGS
    from .tabloids import FAMILIES

    p = _Parser(prog="psym", description="Exact transition matrices among the polysymmetric bases H, E, E+ and P.")
    p.add_argument("--version", action="version", version=f"psym {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, formats=("json", "text"), default="json"):
        sp.add_argument("--format", choices=formats, default=default)
        sp.add_argument("--out", help="write the result to this file instead of stdout")

    sp = sub.add_parser("enumerate", help="list a combinatorial family")
    sp.add_argument("--kind", required=True, choices=FAMILY_TAGS + TABLEAU_KINDS)
    sp.add_argument("--n", required=True, type=_nonneg)
    sp.add_argument("--labels", type=_positive, default=1, help="label bound for bar tableaux")
    common(sp)
    sp.set_defaults(func=cmd_enumerate)

    sp = sub.add_parser("expand", help="expand one basis element in another basis")
    sp.add_argument("--from", dest="from_basis", required=True, choices=BASES)
    sp.add_argument("--to", dest="to_basis", required=True, choices=BASES)
    src = sp.add_mutually_exclusive_group(required=True)
    src.add_argument("--d", type=_nonneg)
    src.add_argument("--source", help="type expression such as '(2,1)^1(1)^2'")
    sp.add_argument("--by-type", action="store_true", help="collect polycomposition terms by type")
    common(sp)
    sp.set_defaults(func=cmd_expand)

    sp = sub.add_parser("matrix", help="transition matrix between two bases")
    sp.add_argument("--from", dest="from_basis", required=True, choices=BASES)
    sp.add_argument("--to", dest="to_basis", required=True, choices=BASES)
    sp.add_argument("--n", required=True, type=_nonneg)
    sp.add_argument("--order", choices=("canonical", "file"), default="canonical")
    sp.add_argument("--order-file", help="one type expression per line")
    sp.add_argument("--no-cache", action="store_true")
    common(sp, FORMATS, "text")
    sp.set_defaults(func=cmd_matrix)

    sp = sub.add_parser("verify", help="check identities against brute-force monomial sums")
    sp.add_argument("--identity", required=True, choices=IDENTITY_TAGS + ("all",))
    sp.add_argument("--max-d", required=True, type=_nonneg)
    sp.add_argument("--labels", type=_positive)
    common(sp, default="text")
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("tabloids", help="list tabloids of a family")
    sp.add_argument("--family", required=True, choices=FAMILIES)
    sp.add_argument("--shape", required=True)
    sp.add_argument("--content", required=True)
    common(sp)
    sp.set_defaults(func=cmd_tabloids)

    sp = sub.add_parser("oeis", help="sequence terms beside expansion counts")
    sp.add_argument("--seq", required=True, choices=SEQUENCE_TAGS)
    sp.add_argument("--count", required=True, type=_positive)
    sp.add_argument("--expand-up-to", type=_nonneg, default=8, help="largest d compared against expansions")
    common(sp, ("json", "csv", "text"))
    sp.set_defaults(func=cmd_oeis)

    sp = sub.add_parser("involution", help="exhaustively check a named involution or bijection")
    sp.add_argument("--name", required=True, choices=INVOLUTION_TAGS)
    sp.add_argument("--d", required=True, type=_nonneg)
    sp.add_argument("--labels", type=_positive)
    sp.add_argument("--trace", action="store_true", help="include the step log for every domain element")
    common(sp)
    sp.set_defaults(func=cmd_involution)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "from_basis", None) is not None and args.from_basis == args.to_basis:
        parser.exit(2, "psym: error: --from and --to must differ\n")
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"psym: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
