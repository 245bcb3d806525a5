"""Operator-facing harness: seeded generation, suite execution, reporting.

Subcommands:

* ``verify`` runs identity suites over a seeded sweep and writes a JSON
  lines report (one record per case plus a summary).  Exit code 0 means
  every case passed, 1 an identity failed, 2 the configuration is bad.
* ``gen`` writes a seeded random field as JSON.
* ``show`` pretty-prints a field file.

A JSON config file supplies defaults that flags override; the WF_SEED
environment variable overrides the seed list entirely.  ``--corrupt``
deliberately breaks an operator (negative controls).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from . import corruption
from .errors import ConfigError, WienerFormsError
from .grid import TimeGrid
from .io import dumps_field, load_field, save_field
from .randomfields import generate_field
from .suites import SUITES, SuiteConfig, run_suite


def _parse_seeds(text: str) -> tuple[int, ...]:
    text = text.strip()
    if "," in text:
        return tuple(int(tok) for tok in text.split(",") if tok.strip())
    count = int(text)
    if count <= 0:
        raise ConfigError("seed count must be positive")
    return tuple(range(count))


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="wienerforms")
    sub = parser.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="run verification suites")
    v.add_argument("--suite", default="all", help="suite id or 'all' "
                   f"(known: {', '.join(sorted(SUITES))})")
    v.add_argument("--config", help="JSON config file (flags override)")
    v.add_argument("--n", type=int, help="number of uniform grid cells")
    v.add_argument("--breakpoints", help="comma-separated rational breakpoints")
    v.add_argument("--horizon", help="rational horizon T (uniform grid)")
    v.add_argument("--m", type=int, help="space dimension")
    v.add_argument("--q", type=int, nargs="+", help="form orders to sweep")
    v.add_argument("--pmax", type=int, help="chaos degree cap")
    v.add_argument("--atom-cap", type=int, help="atom count cap")
    v.add_argument("--seeds", help="seed count or comma-separated list")
    v.add_argument("--mode", choices=["exact", "mc", "both"], help="verification mode")
    v.add_argument("--mc-n", type=int, help="Monte-Carlo path count")
    v.add_argument("--mc-r", type=int, help="Monte-Carlo refinement per cell")
    v.add_argument("--out", help="write JSONL report here")
    v.add_argument("--csv", help="also write a CSV report here")
    v.add_argument("--corrupt", choices=sorted(corruption.KNOWN_TAGS),
                   help="debug: deliberately break an operator")

    g = sub.add_parser("gen", help="generate a seeded random field")
    g.add_argument("--seed", type=int, required=True)
    g.add_argument("--q", type=int, default=1)
    g.add_argument("--skew", action="store_true", default=True)
    g.add_argument("--no-skew", dest="skew", action="store_false")
    g.add_argument("--n", type=int, default=2)
    g.add_argument("--m", type=int, default=1)
    g.add_argument("--pmax", type=int, default=3)
    g.add_argument("--out", required=True)

    s = sub.add_parser("show", help="pretty-print a field file")
    s.add_argument("--in", dest="path", required=True)
    return parser


def _config_from_args(args) -> SuiteConfig:
    base: dict = {}
    if args.config:
        with open(args.config) as fh:
            base = json.load(fh)
    cfg = dict(
        n_cells=base.get("n", 2),
        breakpoints=tuple(base["breakpoints"]) if "breakpoints" in base else None,
        horizon=base.get("horizon", 1),
        m=base.get("m", 1),
        q_values=tuple(base.get("q", (1, 2))),
        p_max=base.get("pmax", 3),
        atom_cap=base.get("atom_cap", 500_000),
        seeds=_parse_seeds(str(base.get("seeds", "10"))),
        mode=base.get("mode", "exact"),
        mc_paths=base.get("mc_n", 10_000),
        mc_refinement=base.get("mc_r", 1),
    )
    if args.n is not None:
        cfg["n_cells"] = args.n
    if args.breakpoints:
        cfg["breakpoints"] = tuple(Fraction(tok) for tok in args.breakpoints.split(","))
    if args.horizon:
        cfg["horizon"] = args.horizon
    if args.m is not None:
        cfg["m"] = args.m
    if args.q:
        cfg["q_values"] = tuple(args.q)
    if args.pmax is not None:
        cfg["p_max"] = args.pmax
    if args.atom_cap is not None:
        cfg["atom_cap"] = args.atom_cap
    if args.seeds:
        cfg["seeds"] = _parse_seeds(args.seeds)
    if args.mode:
        cfg["mode"] = args.mode
    if args.mc_n is not None:
        cfg["mc_paths"] = args.mc_n
    if args.mc_r is not None:
        cfg["mc_refinement"] = args.mc_r
    env_seed = os.environ.get("WF_SEED")
    if env_seed:
        cfg["seeds"] = _parse_seeds(env_seed)
    return SuiteConfig(**cfg)


def _cmd_verify(args) -> int:
    cfg = _config_from_args(args)
    if args.corrupt:
        corruption.activate(args.corrupt)
    try:
        report = run_suite(cfg, args.suite)
    finally:
        corruption.clear()
    if args.out:
        report.write_jsonl(args.out)
    if args.csv:
        report.write_csv(args.csv)
    report.print_summary()
    return report.exit_code


def _cmd_gen(args) -> int:
    grid = TimeGrid.uniform(args.n)
    u = generate_field(grid, args.m, args.q, args.pmax, args.seed, skew=args.skew)
    save_field(u, args.out)
    print(f"wrote order-{u.q} field with chaos degrees {list(u.degrees())} to {args.out}")
    return 0


def _cmd_show(args) -> int:
    u = load_field(args.path)
    print(f"order q = {u.q}, m = {u.m}, skew = {u.skew}")
    print(f"grid breakpoints: {[str(b) for b in u.grid.breakpoints]}")
    for p, k in u.levels:
        print(f"level p = {p}: {len(k.atoms)} atom(s)")
        for atom in k.atoms:
            cells = [c + 1 for c in atom.cells]
            orders = {atom.cells[ch[0]] + 1: [a + 1 for a in ch] for ch in atom.chains}
            for comps, val in atom.coeff:
                print(
                    f"  cells {cells} orders {orders or '-'} "
                    f"components {[i + 1 for i in comps]} coeff {val}"
                )
    return 0


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "verify":
            return _cmd_verify(args)
        if args.command == "gen":
            return _cmd_gen(args)
        if args.command == "show":
            return _cmd_show(args)
    except (ConfigError, FileNotFoundError, json.JSONDecodeError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    except WienerFormsError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 2


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
