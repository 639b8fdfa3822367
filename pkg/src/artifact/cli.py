"""Command-line frontend: load a domain, run one pipeline stage, print JSON.

A domain argument is a JSON file path, a named fixture (``HOLE1``) or a
generated one (``gen:pinch:3``). Every number is printed twice, as an exact
fraction and as a 12-digit decimal. Failures print an error object and exit
with status 1.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import json
import sys
import time
import warnings
from pathlib import Path

from . import __version__
from .center import center_improved, center_preliminary
from .decomposition import decompositions
from .diameter import diameter_improved, diameter_preliminary
from .distance_engine import build_visgraph, geodesic_dist
from .errors import ArtifactError, ParseError
from .fixtures import NAMED, generate, named
from .geometry import P, Point, PolygonalDomain, dec, dump_domain, fmt, load_domain, validate_domain
from .oracle import oracle_dist, sample_points
from .svg import draw

ALGOS = {"prelim": "preliminary", "improved": "improved"}


def load(arg: str) -> PolygonalDomain:
    if arg in NAMED:
        return named(arg)
    if arg.startswith("gen:"):
        try:
            _, kind, seed = arg.split(":")
            return generate(kind, int(seed))
        except (ValueError, KeyError) as exc:
            raise ParseError(f"bad generated fixture {arg!r}: {exc}") from exc
    if not Path(arg).exists():
        raise ParseError(f"no such file or fixture: {arg}")
    dom = load_domain(arg)
    return dom if dom.name else dataclasses.replace(dom, name=Path(arg).stem)


def parse_point(text: str) -> Point:
    try:
        x, y = text.split(",")
        return P(x.strip(), y.strip())
    except ValueError as exc:
        raise ParseError(f"a point is written x,y; got {text!r}") from exc


def point_json(p: Point) -> dict:
    return {"x": fmt(p.x), "y": fmt(p.y), "decimal": [dec(p.x), dec(p.y)]}


def _algos(choice: str) -> list[str]:
    return list(ALGOS) if choice == "both" else [choice]


def _write_svg(path: Path | None, text: str) -> None:
    if path is not None:
        path.write_text(text, encoding="utf-8")


# ------------------------------------------------------------ commands


def cmd_validate(args) -> dict:
    dom = load(args.domain)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        report = validate_domain(dom, strict=False)
    return {"domain": dom.name, **report.to_json()}


def cmd_decompose(args) -> dict:
    dom = load(args.domain)
    X = decompositions(dom)
    cells = {"D": X.D.cells, "DM": X.DM.cells, "Daug": X.D_aug.cells, "Df": X.Df}[args.flavor]
    out = {
        "domain": dom.name,
        "flavor": args.flavor,
        "count": len(cells),
        "cells": [
            {
                "id": c.id,
                "flavor": c.flavor,
                "kind": c.kind,
                "ring": [[fmt(p.x), fmt(p.y)] for p in c.ring],
                "corners": [[fmt(p.x), fmt(p.y)] for p in c.corners],
            }
            for c in cells
        ],
    }
    _write_svg(args.svg, draw(dom, cells=[c.ring for c in cells], title=f"{dom.name} {args.flavor}"))
    return out


def cmd_distance(args) -> dict:
    dom = load(args.domain)
    s, t = parse_point(args.s), parse_point(args.t)
    value, path = geodesic_dist(build_visgraph(dom), s, t)
    _write_svg(args.svg, draw(dom, paths=[path], points=[(s, "s"), (t, "t")], title=f"{dom.name} distance"))
    return {
        "domain": dom.name,
        "s": point_json(s),
        "t": point_json(t),
        "value": fmt(value),
        "decimal": dec(value),
        "path": [[fmt(p.x), fmt(p.y)] for p in path],
    }


def cmd_diameter(args) -> dict:
    dom = load(args.domain)
    runs = {}
    for a in _algos(args.algo):
        fn = diameter_preliminary if a == "prelim" else diameter_improved
        runs[a] = fn(dom).to_json()
    out = {"domain": dom.name, "results": runs, "value": next(iter(runs.values()))["value"]}
    if len(runs) == 2:
        out["agree"] = runs["prelim"]["value"] == runs["improved"]["value"]
    if args.svg is not None:
        first = next(iter(runs.values()))
        s, t = (P(*w) for w in first["witness"])
        _, path = geodesic_dist(build_visgraph(dom), s, t)
        _write_svg(args.svg, draw(dom, paths=[path], points=[(s, "s"), (t, "t")], title=f"{dom.name} diameter"))
    return out


def cmd_center(args) -> dict:
    dom = load(args.domain)
    runs = {}
    for a in _algos(args.algo):
        fn = center_preliminary if a == "prelim" else center_improved
        runs[a] = fn(dom).to_json()
    first = next(iter(runs.values()))
    out = {"domain": dom.name, "results": runs, "radius": first["radius"], "center": first["center"]}
    if len(runs) == 2:
        out["agree"] = runs["prelim"]["radius"] == runs["improved"]["radius"]
    if args.svg is not None:
        q, w = P(*first["center"]), P(*first["witness"])
        _, path = geodesic_dist(build_visgraph(dom), q, w)
        _write_svg(args.svg, draw(dom, paths=[path], points=[(q, "q*"), (w, "far")], title=f"{dom.name} center"))
    return out


def cmd_oracle_check(args) -> dict:
    dom = load(args.domain)
    g = build_visgraph(dom)
    pts = sample_points(dom, 2 * args.pairs, args.seed)
    bad = []
    for s, t in zip(pts[::2], pts[1::2]):
        a = g.dist(s, t)
        b = oracle_dist(dom, s, t)
        if a != b:
            bad.append({"s": point_json(s), "t": point_json(t), "engine": fmt(a), "oracle": fmt(b)})
    return {"domain": dom.name, "pairs": args.pairs, "seed": args.seed, "pass": not bad, "mismatches": bad[:10]}


def cmd_gen(args) -> dict:
    kw = {}
    if args.h is not None:
        kw["h"] = args.h
    if args.teeth is not None:
        kw["teeth"] = args.teeth
    dom = generate(args.kind, args.seed, **kw)
    text = dump_domain(dom)
    if args.out is not None:
        args.out.write_text(text + "\n", encoding="utf-8")
    return {"domain": dom.name, "n": dom.n, "h": dom.h, **json.loads(text)}


def cmd_bench(args) -> None:
    writer = csv.writer(sys.stdout, lineterminator="\n")
    writer.writerow(["domain", "n", "h", "task", "algo", "value", "seconds"])
    tasks = {
        ("diameter", "prelim"): lambda d: diameter_preliminary(d).value,
        ("diameter", "improved"): lambda d: diameter_improved(d).value,
        ("center", "prelim"): lambda d: center_preliminary(d).radius,
        ("center", "improved"): lambda d: center_improved(d).radius,
    }
    for arg in args.corpus:
        dom = load(arg)
        for (task, algo), fn in tasks.items():
            if task not in args.tasks or algo not in _algos(args.algo):
                continue
            t0 = time.perf_counter()
            value = fn(dom)
            writer.writerow([dom.name or arg, dom.n, dom.h, task, algo, dec(value), f"{time.perf_counter() - t0:.3f}"])


def cmd_render(args) -> None:
    dom = load(args.domain)
    cells = []
    if args.flavor:
        X = decompositions(dom)
        cells = [c.ring for c in {"D": X.D.cells, "DM": X.DM.cells, "Daug": X.D_aug.cells, "Df": X.Df}[args.flavor]]
    sys.stdout.write(draw(dom, cells=cells, title=dom.name))


# ------------------------------------------------------------ parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="artifact", description="L1 geodesic distance, diameter and center.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def with_domain(name: str, help_: str, svg: bool = False) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help_)
        p.add_argument("domain", help="JSON file, fixture name or gen:KIND:SEED")
        if svg:
            p.add_argument("--svg", type=Path, help="also write an SVG drawing here")
        return p

    with_domain("validate", "check a domain file")
    p = with_domain("decompose", "list the cells of one decomposition", svg=True)
    p.add_argument("--flavor", choices=["D", "DM", "Daug", "Df"], default="D")
    p = with_domain("distance", "geodesic distance and a shortest path", svg=True)
    p.add_argument("s", help="x,y")
    p.add_argument("t", help="x,y")
    for name, help_ in (("diameter", "geodesic diameter"), ("center", "geodesic center")):
        p = with_domain(name, help_, svg=True)
        p.add_argument("--algo", choices=["prelim", "improved", "both"], default="both")
    p = with_domain("oracle-check", "compare the engine with the track-graph oracle")
    p.add_argument("--pairs", type=int, default=500)
    p.add_argument("--seed", type=int, default=7)
    p = sub.add_parser("gen", help="generate a domain")
    p.add_argument("kind", choices=["random-holes", "pinch", "comb"])
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--h", type=int, help="number of holes (random-holes)")
    p.add_argument("--teeth", type=int, help="number of notches (comb)")
    p.add_argument("--out", type=Path, help="write the domain JSON here")
    p = sub.add_parser("bench", help="time the algorithms over a corpus, CSV on stdout")
    p.add_argument("corpus", nargs="+", help="domains")
    p.add_argument("--algo", choices=["prelim", "improved", "both"], default="both")
    p.add_argument("--tasks", nargs="+", choices=["diameter", "center"], default=["diameter", "center"])
    p = with_domain("render", "SVG of the domain on stdout")
    p.add_argument("--flavor", choices=["D", "DM", "Daug", "Df"])
    return parser


COMMANDS = {
    "validate": cmd_validate,
    "decompose": cmd_decompose,
    "distance": cmd_distance,
    "diameter": cmd_diameter,
    "center": cmd_center,
    "oracle-check": cmd_oracle_check,
    "gen": cmd_gen,
    "bench": cmd_bench,
    "render": cmd_render,
}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        out = COMMANDS[args.command](args)
    except ArtifactError as exc:
        print(json.dumps(exc.to_json(), sort_keys=True))
        return 1
    except KeyError as exc:
        print(json.dumps({"error": "unknown_name", "message": str(exc.args[0])}, sort_keys=True))
        return 1
    if out is not None:
        print(json.dumps(out, indent=2, sort_keys=True))
        if out.get("pass") is False or out.get("agree") is False or out.get("accepted") is False:
            return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
