"""Command line front end.

    fibercomp classify     --knot "torus(2,3)"
    fibercomp classify     --surface "S{(1,1)}" --map "Ta Tb"
    fibercomp dilatation   --knot fig8
    fibercomp compressions --knot "cable(2,1,fig8)"
    fibercomp predecessors --knot "sum(fig8,fig8)"
    fibercomp ribbon-check --knot "sum(fig8,fig8)"
    fibercomp growth       --knot fig8 --iterations 40

Output is JSON with sorted keys and ``schema: 1``. Exit codes: 0 success,
1 unsupported input, 2 parse error, 3 search budget exhausted (the partial
report is still written, marked ``completeness: bounded``).
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from .compression_enum import FORMS, all_compressed_classes, is_disk_identity
from .fdtc import fdtc_report
from .fibered_knots import (
    UnsupportedExpression,
    alexander,
    check_divisibility,
    genus,
    is_homotopy_ribbon,
    monodromy,
    parse_knot,
    predecessors,
    root_label,
)
from .growth_rate import growth_estimate, torus_endo
from .nt_classify import canonical_key, classify, decompose, max_dilatation
from .surface_kernel import MappingClass, ParseError, parse_mapping_class, parse_surface, word_presentation

SCHEMA = 1
COMMANDS = ("classify", "dilatation", "compressions", "predecessors", "ribbon-check", "growth")


class BudgetExhausted(Exception):
    def __init__(self, report: dict):
        super().__init__("search budget exhausted")
        self.report = report


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="fibercomp", description="Compressions of fibered knot monodromies.")
    p.add_argument("command", choices=COMMANDS)
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--knot", help='knot expression, e.g. "cable(2,1,fig8)"')
    src.add_argument("--surface", help='surface, e.g. "S{(1,1)}"; use with --map')
    p.add_argument("--map", default=None, help="twist word on the surface; empty for the identity")
    p.add_argument("--length-bound", type=int, default=32)
    p.add_argument("--iterations", type=int, default=40)
    p.add_argument("--max-classes", type=int, default=64)
    p.add_argument("--json", metavar="PATH", help="also write the report to PATH")
    return p


def _load(args) -> tuple[MappingClass, object]:
    if args.knot is not None:
        if args.map is not None:
            raise ParseError("--map only goes with --surface", "--map", 0)
        k = parse_knot(args.knot)
        return monodromy(k), k
    dom = parse_surface(args.surface)
    return parse_mapping_class(dom, args.map or ""), None


def _input_json(args) -> dict:
    if args.knot is not None:
        return {"knot": args.knot}
    return {"surface": args.surface, "map": args.map or ""}


def _class_json(g: MappingClass) -> dict:
    d = {"key": canonical_key(g), "surface": [list(c) for c in g.surface.components]}
    pres = word_presentation(g)
    if pres is not None:
        d["surface_text"], d["map"] = pres
    return d


def cmd_classify(f: MappingClass, knot, args) -> dict:
    out = classify(f).to_json()
    out["decomposition"] = decompose(f).to_json()
    rep = fdtc_report(f)
    out["fdtc"] = rep.to_json()
    if knot is not None:
        out["genus"] = genus(knot)
        out["root_fdtc"] = str(rep.per_boundary[root_label(knot)])
        out["alexander"] = list(alexander(knot))
    return out


def cmd_dilatation(f: MappingClass, knot, args) -> dict:
    return {"max_dilatation": max_dilatation(f).to_json()}


def cmd_compressions(f: MappingClass, knot, args) -> dict:
    closure = all_compressed_classes(f, args.length_bound, args.max_classes)
    root = closure.keys[0]
    forms = {x.lower(): [] for x in FORMS}
    for r in closure.results.get(root, []):
        forms[r.body.form.lower()].append(r.to_json())
    classes = []
    for g, key in zip(closure.classes, closure.keys):
        d = _class_json(g)
        d["route"] = closure.route(g)
        d["minimal"] = sorted(r.key for r in closure.results.get(key, []))
        classes.append(d)
    return {
        "input": _input_json(args),
        "forms": forms,
        "compressed_classes": classes,
        "completeness": closure.completeness,
    }


def _need_knot(knot, what: str):
    if knot is None:
        raise UnsupportedExpression(f"{what} needs --knot")


def cmd_predecessors(f: MappingClass, knot, args) -> dict:
    _need_knot(knot, "predecessors")
    preds, comp = predecessors(knot, args.length_bound, args.max_classes)
    items = []
    for p in preds:
        d = _class_json(p.monodromy)
        d["knot"] = None if p.knot is None else str(p.knot)
        if p.knot is not None:
            d["alexander_divides"] = check_divisibility(p.knot, knot)
        items.append(d)
    items.sort(key=lambda d: (d["knot"] or "", d["key"]))
    return {"predecessors": items, "completeness": comp}


def cmd_ribbon(f: MappingClass, knot, args) -> dict:
    if knot is not None:
        ans, comp, route = is_homotopy_ribbon(knot, args.length_bound, args.max_classes)
    else:
        closure = all_compressed_classes(f, args.length_bound, args.max_classes)
        hits = [g for g in closure.classes if is_disk_identity(g)]
        ans, comp = bool(hits), closure.completeness
        route = closure.route(hits[0]) if hits else None
    return {"strongly_homotopy_ribbon": ans, "completeness": comp, "route": route}


def cmd_growth(f: MappingClass, knot, args) -> dict:
    """Growth of the free group action, per pseudo-Anosov piece of a bounded fiber."""
    d = decompose(f)
    pieces = []
    best = (Fraction(0), Fraction(0))
    for p in d.pieces:
        if p.tag != "pA":
            continue
        i0 = p.cycles[0][0]
        if not f.domain.blocks[i0].boundaries:
            raise UnsupportedExpression("closed fibers have no free fundamental group")
        k = len(p.cycles[0])
        lo, hi = growth_estimate(torus_endo(f.power(k).elems[i0].L), args.iterations)
        lo, hi = lo / k, hi / k
        pieces.append({"orbit": [f.domain.blocks[i].name for i in p.cycles[0]], "interval": [str(lo), str(hi)]})
        if hi > best[1]:
            best = (lo, hi)
    return {
        "iterations": args.iterations,
        "interval": [str(best[0]), str(best[1])],
        "approx": round(float((best[0] + best[1]) / 2), 12),
        "pieces": pieces,
    }


HANDLERS = {
    "classify": cmd_classify,
    "dilatation": cmd_dilatation,
    "compressions": cmd_compressions,
    "predecessors": cmd_predecessors,
    "ribbon-check": cmd_ribbon,
    "growth": cmd_growth,
}


def dumps(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2) + "\n"


def run(argv: list[str] | None = None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    args = build_parser().parse_args(argv)
    report: dict = {"schema": SCHEMA, "command": args.command, "input": _input_json(args)}
    code = 0
    try:
        if args.command == "growth" and args.iterations < 2:
            raise ParseError("--iterations must be at least 2", str(args.iterations), 0)
        f, knot = _load(args)
        body = HANDLERS[args.command](f, knot, args)
        report.update(body)
        if report.get("completeness") == "bounded":
            code = 3
    except ParseError as e:
        report["error"] = {"kind": "parse", "message": str(e), "token": e.token, "position": e.position}
        code = 2
    except (UnsupportedExpression, NotImplementedError, ValueError) as e:
        report["error"] = {"kind": "unsupported", "message": str(e)}
        code = 1
    text = dumps(report)
    stdout.write(text)
    if args.json:
        with open(args.json, "w", encoding="utf-8") as fh:
            fh.write(text)
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
