"""Command-line front end."""
from __future__ import annotations

import argparse
import json
import sys
from importlib import resources
from pathlib import Path

from .config import get_config, load_config, set_config
from .errors import EichlerKitError, EnumerationOverflow, InvalidSpec, ParseError, ResourceExceeded
from .zoo import GroupSpec, get_group, load_catalog, parse_group_expr

EXIT_OK, EXIT_FAIL, EXIT_PARSE, EXIT_RESOURCE = 0, 1, 2, 3


def parse_spec(text: str, catalog=None) -> GroupSpec:
    """Group expression to a GroupSpec; catalog names are resolved when given."""
    names = {g.name: g.spec for g in catalog} if catalog else {}
    return parse_group_expr(text, names)


def _catalog(args):
    paths = args.catalog or get_config().catalog_paths
    if not paths:
        from .zoo import default_catalog

        return default_catalog()
    out = []
    for p in paths:
        out.extend(load_catalog(_catalog_path(p)))
    return out


def _catalog_path(p):
    path = Path(p)
    if not path.exists() and path.name == p:
        shipped = resources.files("eichlerkit").joinpath("data", p)
        if shipped.is_file():
            return str(shipped)
    return str(path)


def _group(args, text):
    if text == "-":
        text = sys.stdin.read().strip()
    return get_group(text, _catalog(args))


def _emit(args, obj, text):
    if args.format == "json":
        print(json.dumps(obj, indent=2, sort_keys=True))
    else:
        print(text)


def _verdict_text(v):
    lines = [f"{v.name}  order={v.order}  mH={v.mh}  status={v.status}  mode={v.mode}"]
    for t in v.trace:
        wit = t.witness.get("quotient") or t.witness.get("identity") or ""
        extra = f"  [{wit}]" if wit else ""
        lines.append(f"  {t.rule}: {t.citation}{extra}")
    for n in v.notes:
        lines.append(f"  note: {n}")
    return "\n".join(lines)


def cmd_classify(args, fn_name):
    from . import verdict

    v = getattr(verdict, fn_name)(_group(args, args.group))
    _emit(args, v.to_json(), _verdict_text(v))
    return EXIT_OK


def cmd_mh(args):
    from .quotients import m_h

    g = _group(args, args.group)
    value = m_h(g)
    _emit(args, {"name": g.name, "mH": value}, str(value))
    return EXIT_OK


def cmd_chartab(args):
    from .chartab import character_table

    g = _group(args, args.group)
    tab = character_table(g)
    _emit(args, tab.to_json(), tab.format_grid())
    return EXIT_OK


def cmd_quotients(args):
    from .quotients import binary_polyhedral_quotients, quotient_witnesses

    g = _group(args, args.group)
    if args.target:
        h = _group(args, args.target)
        ws = quotient_witnesses(g, h)
        obj = {"group": g.name, "target": h.name, "witnesses": [w.to_json() for w in ws]}
        text = f"{g.name} ->> {h.name}: {len(ws)} kernel(s)"
        for w in ws:
            text += f"\n  kernel order {w.kernel.order} ({w.method})"
        _emit(args, obj, text)
        return EXIT_OK
    all_q, maximal = binary_polyhedral_quotients(g)
    obj = {"group": g.name, "binary_polyhedral": [n for n, _ in all_q], "maximal": [n for n, _ in maximal]}
    text = (f"binary polyhedral quotients of {g.name}: {', '.join(obj['binary_polyhedral']) or 'none'}\n"
            f"maximal: {', '.join(obj['maximal']) or 'none'}")
    _emit(args, obj, text)
    return EXIT_OK


def cmd_eichler_simple(args):
    from .quotients import is_eichler_simple

    g = _group(args, args.group)
    value = is_eichler_simple(g)
    _emit(args, {"name": g.name, "eichler_simple": value}, str(value).lower())
    return EXIT_OK


def cmd_mnec(args):
    from .mnec import is_minimal_nec, is_non_eichler_cover

    g, h = _group(args, args.group), _group(args, args.target)
    cover = is_non_eichler_cover(g, h)
    minimal = cover and is_minimal_nec(g, h)
    obj = {"group": g.name, "target": h.name, "non_eichler_cover": cover, "minimal": minimal}
    _emit(args, obj, f"non-Eichler cover: {str(cover).lower()}\nminimal: {str(minimal).lower()}")
    return EXIT_OK


def cmd_gamma(args):
    from .mnec import gamma_levels

    graph = gamma_levels(_catalog(args), depth=args.depth, status=args.status)
    if args.format == "dot":
        print(graph.to_dot(), end="")
    elif args.format == "json":
        print(json.dumps(graph.to_json(), indent=2, sort_keys=True))
    else:
        for n in graph.nodes:
            edges = ", ".join(f"({a},{b})" for a, b in graph.edges_to(n.name)) or "-"
            print(f"({n.level},{n.index})  {n.name:<12} mH={n.mh:<3} edges to {edges}  {n.status}")
    return EXIT_OK


def computed_rows(catalog):
    """Reference-table rows computed from scratch: id, group id/order, edges, mH, status."""
    from .mnec import gamma_levels
    from .verdict import classify

    graph = gamma_levels(catalog, depth=3)
    rows = []
    for n in graph.nodes[1:]:
        ident = n.group.meta.get("id")
        rows.append({
            "name": n.name, "mnec": [n.level, n.index],
            "group_id": ident if ident else str(n.group.order()),
            "edges": [list(e) for e in graph.edges_to(n.name)],
            "mH": n.mh, "status": classify(n.group).status,
        })
    return rows


def _fmt_ids(ids):
    return ", ".join(f"({a},{b})" for a, b in ids)


def cmd_table(args):
    rows = computed_rows(_catalog(args))
    if args.format == "json":
        print(json.dumps(rows, indent=2, sort_keys=True))
        return EXIT_OK
    print(f"{'MNEC ID':<9}{'Group ID/Order':<18}{'Edges To':<20}{'mH':<4}{'Description':<13}Cancellation")
    for r in rows:
        print(f"({r['mnec'][0]},{r['mnec'][1]})".ljust(9) + str(r["group_id"]).ljust(18)
              + _fmt_ids(r["edges"]).ljust(20) + str(r["mH"]).ljust(4) + r["name"].ljust(13) + r["status"])
    return EXIT_OK


def load_expected(path=None):
    if path is None:
        text = resources.files("eichlerkit").joinpath("data/appendixA.expected").read_text()
    else:
        text = Path(path).read_text()
    rows = {}
    for raw in text.splitlines():
        if not raw.strip() or raw.startswith("#"):
            continue
        name, ident, edges, mh, status = raw.split("\t")
        rows[name] = {
            "mnec": [int(x) for x in ident.split(",")],
            "edges": [[int(x) for x in e.split(",")] for e in edges.split(";")],
            "mH": int(mh), "status": status,
        }
    return rows


def cmd_check_table(args):
    expected = load_expected(args.expected)
    rows = {r["name"]: r for r in computed_rows(_catalog(args))}
    report, bad = [], 0
    for name, exp in expected.items():
        got = rows.get(name)
        diffs = []
        if got is None:
            diffs.append("missing")
        else:
            for key in ("mnec", "edges", "mH", "status"):
                if got[key] != exp[key]:
                    diffs.append(f"{key}: expected {exp[key]}, computed {got[key]}")
        bad += bool(diffs)
        report.append({"name": name, "match": not diffs, "differences": diffs})
    for name in rows:
        if name not in expected:
            bad += 1
            report.append({"name": name, "match": False, "differences": ["not in the reference table"]})
    if args.format == "json":
        print(json.dumps({"rows": report, "all_match": bad == 0}, indent=2, sort_keys=True))
    else:
        for r in report:
            print(f"{'ok  ' if r['match'] else 'FAIL'} {r['name']}" +
                  ("" if r["match"] else "  " + "; ".join(r["differences"])))
        print("all rows match" if bad == 0 else f"{bad} row(s) differ")
    return EXIT_OK if bad == 0 else EXIT_FAIL


def build_parser():
    p = argparse.ArgumentParser(prog="eichlerkit",
                                description="Eichler quotients, non-Eichler covers and cancellation verdicts.")
    p.add_argument("--format", choices=("table", "json", "dot"), default=None)
    p.add_argument("--catalog", action="append", help="catalog file (repeatable); default: the shipped one")
    p.add_argument("--order-cap", type=int)
    p.add_argument("--class-cap", type=int)
    p.add_argument("--budget", type=int, help="backtracking budget")
    sub = p.add_subparsers(dest="command", required=True)

    def group_cmd(name, helptext, func, target=False, target_required=True):
        s = sub.add_parser(name, help=helptext)
        s.add_argument("group", help="group expression or catalog name; '-' reads stdin")
        if target:
            if target_required:
                s.add_argument("target")
            else:
                s.add_argument("--target")
        s.set_defaults(func=func)
        return s

    group_cmd("classify", "cancellation verdict", lambda a: cmd_classify(a, "classify"))
    group_cmd("classify2", "verdict for 2-groups", lambda a: cmd_classify(a, "classify_two_group"))
    group_cmd("classifyc22", "verdict for groups onto C2 x C2", lambda a: cmd_classify(a, "classify_c22"))
    group_cmd("periodic", "verdict for periodic cohomology", lambda a: cmd_classify(a, "classify_periodic"))
    group_cmd("mh", "number of quaternionic 2-dimensional characters", cmd_mh)
    group_cmd("chartab", "character table", cmd_chartab)
    group_cmd("quotients", "binary polyhedral quotients, or quotients onto --target", cmd_quotients,
              target=True, target_required=False)
    group_cmd("eichler-simple", "no proper Eichler quotient", cmd_eichler_simple)
    group_cmd("mnec", "is GROUP a minimal non-Eichler cover of TARGET", cmd_mnec, target=True)
    g = sub.add_parser("gamma", help="levels of minimal non-Eichler covers")
    g.add_argument("--depth", type=int, default=3)
    g.add_argument("--status", action="store_true", help="colour nodes by verdict")
    g.set_defaults(func=cmd_gamma)
    t = sub.add_parser("table", help="recompute the reference table")
    t.set_defaults(func=cmd_table)
    c = sub.add_parser("check-table", help="compare the recomputed table with the reference rows")
    c.add_argument("--expected", help="reference rows (default: shipped)")
    c.set_defaults(func=cmd_check_table)
    return p


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_PARSE if exc.code else EXIT_OK
    try:
        cfg = load_config(order_cap=args.order_cap, class_cap=args.class_cap,
                          backtrack_budget=args.budget, output_format=args.format)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    set_config(cfg)
    args.format = cfg.output_format
    try:
        return args.func(args)
    except (ParseError, InvalidSpec) as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (ResourceExceeded, EnumerationOverflow) as exc:
        print(f"resource limit: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except EichlerKitError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAIL


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
