"""Command line interface.

    gradpi catalog list|build NAME|verify (NAME | --all)
    gradpi verify grading --file PATH
    gradpi smash NAME [--radius R]
    gradpi pi1 TAG [--radius R]
    gradpi report k4-table | common-quotient N | no-universal TAG

Exit status: 0 on success, 2 when a verification fails (the witness is
printed), 1 on usage errors.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import random
import sys
from typing import Optional

from . import catalog as cat
from .grading import Grading, is_connected, verify_grading
from .groups import CertificateFailure, ConeDoesNotCommute, UnsupportedShape
from .scalars import parse_field
from .smash import (
    InfiniteWithoutRadius,
    StarMismatch,
    smash_product,
    verify_covering,
    verify_galois,
)

SCHEMA = 1


class VerificationFailed(Exception):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


def _field(args, tag: Optional[str] = None):
    if args.field:
        return parse_field(args.field)
    return cat.default_field(tag) if tag else None


def _emit(args, payload: dict, text: str, rows: Optional[list] = None):
    if args.format == "json":
        out = json.dumps({"schema": SCHEMA, **payload}, indent=2, sort_keys=True, default=str) + "\n"
    elif args.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        for r in rows if rows is not None else [[k, json.dumps(v, default=str)] for k, v in payload.items()]:
            w.writerow(r)
        out = buf.getvalue()
    else:
        out = text.rstrip("\n") + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(out)
    else:
        sys.stdout.write(out)


def _check_grading(g: Grading) -> dict:
    cert = verify_grading(g)
    if not cert:
        raise VerificationFailed(f"{g.name or 'grading'} violates the grading axiom", cert.to_json())
    return {"name": g.name, "group": g.group.name(), "pairs_checked": cert.pairs_checked, "connected": is_connected(g)}


# ---------------------------------------------------------------------------
# verbs


def cmd_catalog(args):
    if args.action == "list":
        rows = [[e.name, e.construction, e.default_field] for e in cat.CATALOG.values()]
        payload = {"entries": [dict(zip(("name", "construction", "field"), r)) for r in rows]}
        _emit(args, payload, "\n".join(f"{r[0]:20s} {r[1]}" for r in rows), [["name", "construction", "field"]] + rows)
        return 0
    if args.action == "build":
        if not args.name:
            raise SystemExit("catalog build needs an entry name")
        g = cat.build(args.name, _field(args))
        payload = g.to_json()
        payload.pop("schema", None)
        text = f"{g.name}: {g.group.name()} grading, {len(g.degrees)} basis vectors"
        if args.format == "text" and not args.out:
            _emit(args, payload, text)
        else:
            # building is only useful as a file, so text falls back to JSON
            args.format = "json" if args.format == "text" else args.format
            _emit(args, payload, text)
        return 0
    names = cat.list_entries() if args.all or not args.name else [args.name]
    results = [_check_grading(cat.build(n, _field(args))) for n in names]
    text = "\n".join(f"{r['name']:20s} ok ({r['pairs_checked']} pairs, connected={r['connected']})" for r in results)
    _emit(args, {"results": results}, text, [list(results[0])] + [list(r.values()) for r in results])
    return 0


def cmd_verify(args):
    with open(args.file) as fh:
        data = json.load(fh)
    g = Grading.from_json(data)
    r = _check_grading(g)
    _emit(args, {"result": r}, f"{r['name'] or args.file}: ok ({r['pairs_checked']} pairs)")
    return 0


def cmd_smash(args):
    g = cat.build(args.name, _field(args))
    radius = None if g.group.is_finite else args.radius
    s = smash_product(g, radius=radius)
    rep = verify_covering(s)
    if s.radius is None:
        try:
            rep.galois = verify_galois(s)
        except Exception as exc:  # disconnected smash products are not Galois
            rep.galois = False
            rep.note += f"; {exc}"
    payload = {"grading": g.name, "objects": len(s.realization.objects), "covering": rep.to_json()}
    text = (
        f"{g.name}: smash product with {len(s.realization.objects)} objects, "
        f"star checked at {len(rep.checked)}, galois={rep.galois} ({rep.note})"
    )
    _emit(args, payload, text)
    return 0


def cmd_pi1(args):
    from .pi1 import fundamental_group

    res = fundamental_group(args.tag, _field(args, args.tag), radius=args.radius)
    payload = res.to_json()
    payload.pop("schema", None)
    _emit(args, payload, res.group_name)
    return 0


def cmd_report(args):
    if args.kind == "k4-table":
        rows = cat.k4_table_report(_field(args))
        data = [r.as_list() for r in rows]
        payload = {"rows": [dict(zip(("group", "trivial_dim", "other_dims"), r)) for r in data]}
        text = "\n".join(f"{r[0]:12s} {r[1]}  {r[2]}" for r in data)
        _emit(args, payload, text, data)
        return 0
    if args.kind == "common-quotient":
        n = int(args.arg or 2)
        c = cat.verify_common_quotient(n, _field(args) or cat.default_field(f"Mn:{n}"))
        _emit(args, c.to_json(), f"M{n}: every good quotient of the fine grading factors through {c.minimal}")
        return 0
    if args.kind == "no-universal":
        from .pi1 import check_no_universal

        if not args.arg:
            raise SystemExit("report no-universal needs a tag")
        r = check_no_universal(args.arg, _field(args, args.arg), radius=min(args.radius, 3))
        a, b = r.values
        text = f"{r.tag}: {r.first} and {r.second} are simply connected; {r.invariant} differs ({a} vs {b})"
        payload = r.to_json()
        payload.pop("schema", None)
        _emit(args, payload, text)
        return 0
    raise SystemExit(f"unknown report {args.kind!r}")


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--field", help="Q, Q(z12), F5, ... (default depends on the tag)")
    common.add_argument("--radius", type=int, default=6, help="truncation radius (default 6)")
    common.add_argument("--format", "--emit", dest="format", choices=("json", "csv", "text"), default="text")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--out", help="write output to this path")

    p = argparse.ArgumentParser(prog="gradpi", description="gradings, smash products and fundamental groups")
    sub = p.add_subparsers(dest="verb", required=True)

    c = sub.add_parser("catalog", parents=[common], help="list, build or verify catalog gradings")
    c.add_argument("action", choices=("list", "build", "verify"))
    c.add_argument("name", nargs="?")
    c.add_argument("--all", action="store_true")
    c.set_defaults(func=cmd_catalog)

    v = sub.add_parser("verify", parents=[common], help="verify a grading stored as JSON")
    v.add_argument("what", choices=("grading",))
    v.add_argument("--file", required=True)
    v.set_defaults(func=cmd_verify)

    s = sub.add_parser("smash", parents=[common], help="build a smash product and check the covering")
    s.add_argument("name")
    s.set_defaults(func=cmd_smash)

    f = sub.add_parser("pi1", parents=[common], help="fundamental group of a tagged algebra")
    f.add_argument("tag")
    f.set_defaults(func=cmd_pi1)

    r = sub.add_parser("report", parents=[common], help="tables and certificates")
    r.add_argument("kind", choices=("k4-table", "common-quotient", "no-universal"))
    r.add_argument("arg", nargs="?")
    r.set_defaults(func=cmd_report)
    return p


def main(argv: Optional[list] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 1
    random.seed(args.seed)
    try:
        return args.func(args)
    except (VerificationFailed, CertificateFailure, StarMismatch, ConeDoesNotCommute) as exc:
        witness = getattr(exc, "witness", None)
        print(json.dumps({"schema": SCHEMA, "ok": False, "error": str(exc), "witness": witness}, default=str))
        return 2
    except (cat.UnknownTag, UnsupportedShape, InfiniteWithoutRadius, FileNotFoundError, ValueError, KeyError) as exc:
        print(f"gradpi: error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    except SystemExit as exc:
        print(f"gradpi: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
