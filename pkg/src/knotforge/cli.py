"""Command-line interface.

Diagram arguments accept ``fixtures:NAME``, a path to a file holding one code
per line, or a literal code such as ``"DT[4 6 2]"``.  Exit status is 0 on
success, 1 on a domain error and 2 on a usage error.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
import time
from dataclasses import dataclass
from pathlib import Path

from . import fixtures
from .bracket import bracket, bracket_general, jones_via_bracket, kauffman_F, kauffman_lambda, state_counts
from .census import DEFAULT_CAP, run_census
from .classical import (
    chromatic_polynomial,
    format_curves,
    gauss_integral,
    linking_matrix,
    linking_number,
    read_curves,
    tait_graph,
)
from .codes import emit_gauss, emit_pd, parse, read_diagram_file, to_json
from .diagram import Diagram, canonical_code, diagram_from_code
from .errors import KnotforgeError
from .moves import KINDS, apply_move, find_moves, simplify
from .randomdiag import braid_closure
from .skein import JONES, SkeinEngine, conway, determinant, homfly, jones_skein

STORE_ENV = "KNOTFORGE_STORE"
STRETCH_FROM = 9


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    budget: int | None = None
    threads: int = 1
    store: str | None = None
    output: str = "text"
    cap: int = DEFAULT_CAP
    unsafe_cap: bool = False

    def __post_init__(self):
        if self.budget is not None and self.budget < 1:
            raise UsageError("--budget must be at least 1")
        if self.threads < 1:
            raise UsageError("--threads must be at least 1")
        if self.cap > DEFAULT_CAP and not self.unsafe_cap:
            raise UsageError(f"--cap above {DEFAULT_CAP} needs --unsafe-cap")

    @property
    def json(self) -> bool:
        return self.output == "json"


def _config(args) -> RunConfig:
    return RunConfig(
        budget=getattr(args, "budget", None),
        threads=getattr(args, "threads", 1),
        store=getattr(args, "store", None) or os.environ.get(STORE_ENV) or None,
        output="json" if getattr(args, "json", False) else "text",
        cap=getattr(args, "cap", DEFAULT_CAP),
        unsafe_cap=getattr(args, "unsafe_cap", False),
    )


# -- input resolution -------------------------------------------------------------


def load_diagrams(ref: str) -> list[Diagram]:
    if fixtures.is_fixture_ref(ref):
        return [fixtures.diagram(ref)]
    if os.path.exists(ref):
        ds = read_diagram_file(ref)
        if not ds:
            raise KnotforgeError(f"{ref}: no diagram codes found")
        return ds
    return [parse(ref)]


def load_diagram(ref: str) -> Diagram:
    ds = load_diagrams(ref)
    if len(ds) != 1:
        raise KnotforgeError(f"{ref}: expected one diagram, found {len(ds)}")
    return ds[0]


def load_curves(ref: str):
    if fixtures.is_fixture_ref(ref):
        return fixtures.curves(ref)
    return read_curves(ref)


def _emit(obj, cfg: RunConfig) -> None:
    if cfg.json:
        print(json.dumps(obj, sort_keys=True))
    else:
        print(obj)


# -- commands ---------------------------------------------------------------------


def cmd_parse(args, cfg: RunConfig) -> int:
    for d in load_diagrams(args.diagram):
        if cfg.json or args.format == "json":
            print(json.dumps(to_json(d), sort_keys=True))
        elif args.format == "gauss":
            print(emit_gauss(d))
        elif args.format == "canonical":
            print(emit_pd(diagram_from_code(canonical_code(d))))
        else:
            print(emit_pd(d))
        if args.info:
            print(
                f"crossings={len(d)} components={d.num_components} writhe={d.writhe()} "
                f"alternating={str(d.is_alternating()).lower()} faces={d.num_faces()}"
            )
    return 0


_INVARIANTS = ("bracket", "bracket_general", "jones", "kauffman_lambda", "kauffman_f", "conway", "homfly", "det")


def cmd_invariant(args, cfg: RunConfig) -> int:
    chosen = [k for k in _INVARIANTS if getattr(args, k)]
    for d in load_diagrams(args.diagram):
        wanted = chosen or ["bracket", "jones", "kauffman_f", "conway", "homfly"] + (
            ["det"] if d.num_components == 1 else []
        )
        tree = [] if args.show_tree else None
        out = {}
        for k in wanted:
            if k == "bracket":
                out[k] = bracket(d, cfg.threads)
            elif k == "bracket_general":
                out[k] = bracket_general(d, cfg.threads)
            elif k == "jones":
                if args.route == "skein":
                    out[k] = jones_skein(d, cfg.budget, trace=tree)
                else:
                    out[k] = jones_via_bracket(d, cfg.threads)
            elif k == "kauffman_lambda":
                out[k] = kauffman_lambda(d, cfg.budget)
            elif k == "kauffman_f":
                out[k] = kauffman_F(d, cfg.budget)
            elif k == "conway":
                out[k] = conway(d, cfg.budget, trace=tree)
            elif k == "homfly":
                out[k] = homfly(d, cfg.budget, trace=tree)
            elif k == "det":
                if d.num_components != 1:
                    raise KnotforgeError("the determinant is computed for knots only")
                out[k] = determinant(d)
        if cfg.json:
            data = {k: (v if isinstance(v, int) else {"text": str(v), "terms": v.to_json()}) for k, v in out.items()}
            if tree is not None:
                data["tree"] = tree
            print(json.dumps(data, sort_keys=True))
            continue
        if len(out) == 1:
            print(next(iter(out.values())))
        else:
            for k, v in out.items():
                print(f"{k}: {v}")
        if tree is not None:
            if not tree:
                print("(no skein invariant requested)", file=sys.stderr)
            print("\n".join(tree))
    return 0


def cmd_lk(args, cfg: RunConfig) -> int:
    d = load_diagram(args.diagram)
    if args.i is None and args.j is None:
        if d.num_components == 2:
            _emit(linking_number(d, 0, 1), cfg)
        else:
            m = linking_matrix(d)
            _emit(m if cfg.json else "\n".join(" ".join(f"{v:3d}" for v in row) for row in m), cfg)
        return 0
    if args.i is None or args.j is None:
        raise UsageError("give both -i and -j, or neither")
    _emit(linking_number(d, args.i, args.j), cfg)
    return 0


def cmd_gauss_lk(args, cfg: RunConfig) -> int:
    import numpy as np

    curves = load_curves(args.curves)
    if len(curves) < 2:
        raise KnotforgeError("need two closed curves")
    if args.write:
        Path(args.write).write_text(format_curves(curves), encoding="utf-8")
    value = gauss_integral(curves[args.i], curves[args.j])
    values = [value]
    rng = np.random.default_rng(args.seed)
    for _ in range(args.perturb):
        c1, c2 = curves[args.i].perturbed(rng, args.scale), curves[args.j].perturbed(rng, args.scale)
        values.append(gauss_integral(c1, c2))
    values = [0.0 if abs(v) < 5e-7 else v for v in values]
    value = values[0]
    if cfg.json:
        print(json.dumps({"value": value, "rounded": round(value), "perturbed": values[1:]}))
    else:
        print(f"{value:.6f}")
        for v in values[1:]:
            print(f"{v:.6f}")
    return 0


def cmd_tait(args, cfg: RunConfig) -> int:
    d = load_diagram(args.diagram)
    g = tait_graph(d, args.color)
    chrom = chromatic_polynomial(g) if args.chromatic else None
    if cfg.json:
        data = g.to_json()
        if chrom is not None:
            data["chromatic"] = str(chrom)
        print(json.dumps(data, sort_keys=True))
        return 0
    print(f"vertices: {g.num_vertices}")
    print(f"edges: {g.num_edges}")
    for u, v, s in g.edges:
        print(f"  {u} -- {v}  {'+' if s > 0 else '-'}")
    if chrom is not None:
        print(f"chromatic: {chrom}")
    return 0


def _sites(d: Diagram, args):
    kinds = [args.kind] if args.kind else list(KINDS)
    direction = "increase" if args.increase else "reduce"
    out = []
    for k in kinds:
        if direction == "increase" and k not in ("R1", "R2"):
            continue
        out.extend(find_moves(d, k, direction))
    return out


def cmd_moves(args, cfg: RunConfig) -> int:
    d = load_diagram(args.diagram)
    sites = _sites(d, args)
    if args.action == "list":
        if cfg.json:
            print(json.dumps([s.describe() for s in sites]))
        else:
            for k, s in enumerate(sites):
                print(f"{k}: {s.describe()}")
        return 0
    if args.index is None:
        raise UsageError("moves apply needs --index")
    if not 0 <= args.index < len(sites):
        raise KnotforgeError(f"no move with index {args.index} ({len(sites)} available)")
    out = apply_move(d, sites[args.index])
    print(json.dumps(to_json(out), sort_keys=True) if cfg.json else emit_pd(out))
    return 0


def cmd_simplify(args, cfg: RunConfig) -> int:
    for d in load_diagrams(args.diagram):
        out = simplify(d)
        print(json.dumps(to_json(out), sort_keys=True) if cfg.json else emit_pd(out))
    return 0


def cmd_census(args, cfg: RunConfig) -> int:
    if args.n < args.min:
        raise UsageError("-n must be at least --min")
    if args.n >= STRETCH_FROM and not args.stretch:
        raise UsageError(f"n >= {STRETCH_FROM} is a stretch run; pass --stretch")
    if args.n > cfg.cap and not cfg.unsafe_cap:
        raise UsageError(f"n = {args.n} exceeds the cap {cfg.cap}; pass --unsafe-cap")
    res = run_census(
        args.n,
        n_min=args.min,
        fold_mirrors=args.fold_mirrors,
        tait=args.check_tait,
        store=cfg.store,
        cap=cfg.cap,
        unsafe_cap=cfg.unsafe_cap,
    )
    if cfg.json:
        data = {"counts": {str(n): c for n, c in res.counts.items()}, "fold_mirrors": args.fold_mirrors}
        if res.report is not None:
            data["tait"] = res.report.to_json()
        print(json.dumps(data, sort_keys=True))
    else:
        print(res.table())
        if res.report is not None:
            print(json.dumps(res.report.to_json(), sort_keys=True, indent=2))
    if res.report is not None and not res.report.ok:
        return 1
    return 0


def _bench_diagram(n: int, rng: random.Random) -> Diagram:
    """Knot diagram with exactly n crossings that R1/R2 reduction leaves alone."""
    while True:
        strands = rng.randint(2, max(2, min(4, n - 1)))
        word = [rng.randint(1, strands - 1) * rng.choice((1, -1)) for _ in range(n)]
        d = braid_closure(word, strands)
        if d.num_components == 1 and len(simplify(d)) == n:
            return d


def _bench_rows(d: Diagram, n, budget):
    rows = []
    t0 = time.perf_counter()
    counts = state_counts(d)
    ref = jones_via_bracket(d)
    rows.append((n, "state-sum", sum(counts.values()), time.perf_counter() - t0, True))
    for name, memo in (("skein-memo", True), ("skein-naive", False)):
        eng = SkeinEngine(budget=budget, memo=memo, relation=JONES)
        t0 = time.perf_counter()
        v = eng.value(d)
        rows.append((n, name, eng.nodes, time.perf_counter() - t0, v == ref))
    return rows


def cmd_bench(args, cfg: RunConfig) -> int:
    rows = []
    if args.diagram:
        d = load_diagram(args.diagram)
        rows.extend(_bench_rows(d, len(d), cfg.budget))
    else:
        rng = random.Random(args.seed)
        for n in range(args.n_min, args.n_max + 1):
            rows.extend(_bench_rows(_bench_diagram(n, rng), n, cfg.budget))
    print("n,strategy,nodes,seconds,agrees")
    for n, s, nodes, sec, ok in rows:
        print(f"{n},{s},{nodes},{sec:.6f},{str(ok).lower()}")
    return 0 if all(r[4] for r in rows) else 1


def cmd_fixtures(args, cfg: RunConfig) -> int:
    if args.name is None:
        names = fixtures.names() + fixtures.curve_names()
        _emit(names if cfg.json else "\n".join(names), cfg)
        return 0
    name = args.name.removeprefix(fixtures.PREFIX)
    if name in fixtures.CURVES:
        sys.stdout.write(format_curves(fixtures.curves(name)))
    else:
        d = fixtures.diagram(name)
        print(json.dumps(to_json(d), sort_keys=True) if cfg.json else emit_pd(d))
    return 0


# -- parser -----------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--budget", type=int, default=None, help="skein recursion node budget")
    common.add_argument("--threads", type=int, default=1, help="worker processes for state sums")

    p = argparse.ArgumentParser(prog="knotforge", description="Exact invariants of knot and link diagrams.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("parse", parents=[common], help="parse and re-emit a diagram code")
    s.add_argument("diagram")
    s.add_argument("--format", choices=("pd", "gauss", "json", "canonical"), default="pd")
    s.add_argument("--info", action="store_true", help="print crossing count, writhe and similar")
    s.set_defaults(func=cmd_parse)

    s = sub.add_parser("invariant", parents=[common], help="polynomial invariants")
    s.add_argument("diagram")
    s.add_argument("--bracket", action="store_true")
    s.add_argument("--bracket-general", action="store_true", help="bracket in A, B, mu")
    s.add_argument("--jones", action="store_true")
    s.add_argument("--kauffman-f", action="store_true")
    s.add_argument("--kauffman-lambda", action="store_true")
    s.add_argument("--conway", action="store_true")
    s.add_argument("--homfly", action="store_true")
    s.add_argument("--det", action="store_true")
    s.add_argument("--route", choices=("bracket", "skein"), default="bracket", help="how to compute Jones")
    s.add_argument("--show-tree", action="store_true", help="print the skein recursion tree")
    s.set_defaults(func=cmd_invariant)

    s = sub.add_parser("lk", parents=[common], help="linking number from a diagram")
    s.add_argument("diagram")
    s.add_argument("-i", type=int)
    s.add_argument("-j", type=int)
    s.set_defaults(func=cmd_lk)

    s = sub.add_parser("gauss-lk", parents=[common], help="Gauss linking integral of two polygons")
    s.add_argument("curves", help="curve file or fixtures:NAME")
    s.add_argument("-i", type=int, default=0)
    s.add_argument("-j", type=int, default=1)
    s.add_argument("--perturb", type=int, default=0, help="also evaluate N random perturbations")
    s.add_argument("--scale", type=float, default=0.02)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--write", metavar="FILE", help="save the curves in x y z format")
    s.set_defaults(func=cmd_gauss_lk)

    s = sub.add_parser("tait-graph", parents=[common], help="checkerboard graph")
    s.add_argument("diagram")
    s.add_argument("--color", choices=("white", "black"), default="white")
    s.add_argument("--chromatic", action="store_true")
    s.set_defaults(func=cmd_tait)

    s = sub.add_parser("moves", parents=[common], help="list or apply Reidemeister moves and flypes")
    s.add_argument("action", choices=("list", "apply"))
    s.add_argument("diagram")
    s.add_argument("--kind", choices=KINDS)
    s.add_argument("--increase", action="store_true", help="crossing-increasing R1/R2 sites")
    s.add_argument("--index", type=int)
    s.set_defaults(func=cmd_moves)

    s = sub.add_parser("simplify", parents=[common], help="greedy R1/R2 reduction")
    s.add_argument("diagram")
    s.set_defaults(func=cmd_simplify)

    s = sub.add_parser("census", parents=[common], help="alternating knot census")
    s.add_argument("-n", type=int, required=True, help="largest crossing number")
    s.add_argument("--min", type=int, default=3)
    s.add_argument("--fold-mirrors", action="store_true")
    s.add_argument("--check-tait", action="store_true")
    s.add_argument("--store", help=f"cache directory (default ${STORE_ENV})")
    s.add_argument("--cap", type=int, default=DEFAULT_CAP)
    s.add_argument("--unsafe-cap", action="store_true")
    s.add_argument("--stretch", action="store_true", help=f"allow n >= {STRETCH_FROM}")
    s.set_defaults(func=cmd_census)

    s = sub.add_parser("bench", parents=[common], help="state sum vs skein recursion timings (CSV)")
    s.add_argument("--n-min", type=int, default=4)
    s.add_argument("--n-max", type=int, default=10)
    s.add_argument("--seed", type=int, default=1)
    s.add_argument("--diagram", help="bench a single diagram instead")
    s.set_defaults(func=cmd_bench)

    s = sub.add_parser("fixtures", parents=[common], help="list fixtures or print one")
    s.add_argument("name", nargs="?")
    s.set_defaults(func=cmd_fixtures)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = _config(args)
        return args.func(args, cfg)
    except UsageError as exc:
        print(f"knotforge {args.command}: error: {exc}", file=sys.stderr)
        return 2
    except (KnotforgeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
