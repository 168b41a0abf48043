"""Command line front end.

Exit codes: 0 success, 1 usage errors, 2 solver or domain errors,
3 I/O or serialization failures.

Graph files for verify-reduction are plain text: one edge "u v" per line
(0-based vertex ids), blank lines and lines starting with # ignored, and a
line with a single id declares an isolated vertex.  The vertex count is the
largest id seen plus one.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import fields as dataclass_fields
from pathlib import Path

from .analysis import (LemmaCheckConfig, PRESET_ROWS, brute_force_mis,
                       preset_configs, recover_mis_size, verify_sublevel)
from .distributed import dump_trace, solve_distributed
from .errors import IcicError
from .exact import SearchBudget, exhaustive_search
from .fileio import load_scenario, save_scenario
from .generate import ScenarioConfig, generate, mis_gadget_scenario
from .matching import check_conditions, solve_via_matching
from .model import Params
from .report import report_to_dict
from .sweep import SweepSpec, emit_outputs, plot_sweep, run_sweep

_GEN_FIELDS = ("num_bs", "num_ms", "num_subchannels", "seed", "d_min",
               "neighbor_radius", "path_loss_exponent", "gain_constant",
               "shadow_sigma_db", "rayleigh_scale")


class _IoFailure(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(1)


def _add_generation_flags(p: argparse.ArgumentParser, require_sizes: bool):
    p.add_argument("-K", "--num-bs", type=int, default=None)
    p.add_argument("-M", "--num-ms", type=int, default=None)
    p.add_argument("-N", "--num-subchannels", type=int, default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--d-min", type=float, default=None)
    p.add_argument("--neighbor-radius", type=float, default=None)
    p.add_argument("--path-loss-exponent", type=float, default=None)
    p.add_argument("--gain-constant", type=float, default=None)
    p.add_argument("--shadow-sigma-db", type=float, default=None)
    p.add_argument("--rayleigh-scale", type=float, default=None)
    if require_sizes:
        p.add_argument("--config", type=Path, default=None,
                       help="JSON file with ScenarioConfig keys; "
                            "flags override it")


def _scenario_config(args) -> ScenarioConfig:
    doc = {}
    if getattr(args, "config", None) is not None:
        try:
            doc = json.loads(Path(args.config).read_text())
        except OSError:
            raise
        except ValueError as err:
            raise _IoFailure(f"bad config file: {err}")
        unknown = set(doc) - set(_GEN_FIELDS)
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
    for name in _GEN_FIELDS:
        value = getattr(args, name, None)
        if value is not None:
            doc[name] = value
    doc.setdefault("seed", 0)
    missing = [k for k in ("num_bs", "num_ms", "num_subchannels")
               if k not in doc]
    if missing:
        raise ValueError(f"missing scenario sizes: {missing}")
    valid = {f.name for f in dataclass_fields(ScenarioConfig)}
    return ScenarioConfig(**{k: v for k, v in doc.items() if k in valid})


def _load_scenario(path) -> object:
    try:
        return load_scenario(path)
    except OSError:
        raise
    except (ValueError, KeyError, TypeError) as err:
        raise _IoFailure(f"bad scenario file {path}: {err}")


def _cmd_generate(args) -> int:
    cfg = _scenario_config(args)
    scn = generate(cfg)
    if args.out is None:
        from .fileio import scenario_to_dict
        print(json.dumps(scenario_to_dict(scn), indent=1))
    else:
        save_scenario(scn, args.out)
        print(f"wrote scenario K={scn.num_bs} M={scn.num_ms} "
              f"N={scn.num_subchannels} to {args.out}")
    return 0


def _cmd_solve(args) -> int:
    scn = _load_scenario(args.scenario)
    p = Params(alpha=args.alpha, tau=args.tau,
               power=args.power, noise=args.noise)
    trace = None
    if args.method == "exhaustive":
        report = exhaustive_search(scn, p, SearchBudget(args.max_states))
    elif args.method == "matching":
        report = solve_via_matching(scn, p)
    else:
        report, trace = solve_distributed(scn, p, args.p0)
    doc = report_to_dict(report)
    print(json.dumps(doc, indent=1))
    if args.out is not None:
        Path(args.out).write_text(json.dumps(doc, indent=1) + "\n")
    if args.trace is not None:
        if trace is None:
            raise ValueError("--trace only applies to --method distributed")
        dump_trace(trace, scn, p, args.trace)
    return 0


def _cmd_certify(args) -> int:
    scn = _load_scenario(args.scenario)
    p = Params(alpha=args.alpha, tau=args.tau,
               power=args.power, noise=args.noise)
    rep = check_conditions(scn, p)
    print("bs ms subchannel eta beta thr_c1 thr_c2 thr_c3")
    for e in rep.entries:
        print(f"{e.bs} {e.ms} {e.subchannel} {e.eta!r} {e.beta!r} "
              f"{e.threshold_c1!r} {e.threshold_c2!r} {e.threshold_c3!r}")
    print(f"cond1_holds={rep.cond1_holds} cond2_holds={rep.cond2_holds} "
          f"cond3_holds={rep.cond3_holds} cond4_holds={rep.cond4_holds}")
    print(f"note: {rep.cond4_note}")
    print(f"applicable={rep.applicable} holds={rep.applicable_holds}")
    if args.out is not None:
        doc = {
            "entries": [{
                "bs": e.bs, "ms": e.ms, "subchannel": e.subchannel,
                "eta": e.eta, "beta": e.beta,
                "threshold_c1": e.threshold_c1,
                "threshold_c2": e.threshold_c2,
                "threshold_c3": e.threshold_c3,
            } for e in rep.entries],
            "cond1_holds": rep.cond1_holds,
            "cond2_holds": rep.cond2_holds,
            "cond3_holds": rep.cond3_holds,
            "cond4_holds": rep.cond4_holds,
            "cond4_note": rep.cond4_note,
            "applicable": rep.applicable,
            "applicable_holds": rep.applicable_holds,
        }
        Path(args.out).write_text(json.dumps(doc, indent=1) + "\n")
    return 0


def _print_sublevel(cfg: LemmaCheckConfig, rep) -> None:
    print(f"alpha={cfg.alpha!r} tau={cfg.tau!r} eta={cfg.eta!r} "
          f"beta={cfg.beta!r} condition={rep.condition} "
          f"applicable={rep.applicable} holds={rep.holds} "
          f"worst_x={rep.worst_x!r} worst_gap={rep.worst_gap!r}")


def _cmd_verify_lemmas(args) -> int:
    kwargs = {}
    if args.x_max is not None:
        kwargs["x_max"] = args.x_max
    if args.grid_points is not None:
        kwargs["grid_points"] = args.grid_points
    if args.presets:
        violations = 0
        uncovered = 0
        for row in PRESET_ROWS:
            for cfg in preset_configs(row, **kwargs):
                rep = verify_sublevel(cfg)
                _print_sublevel(cfg, rep)
                if not rep.applicable:
                    uncovered += 1
                elif not rep.holds:
                    violations += 1
        print(f"presets: {violations} violations, "
              f"{uncovered} not covered by any certificate")
        return 2 if violations else 0
    if None in (args.alpha, args.tau, args.eta, args.beta):
        raise ValueError("need --alpha --tau --eta --beta (or --presets)")
    cfg = LemmaCheckConfig(alpha=args.alpha, tau=args.tau, eta=args.eta,
                           beta=args.beta, **kwargs)
    _print_sublevel(cfg, verify_sublevel(cfg))
    return 0


def _read_graph(path) -> tuple:
    try:
        text = Path(path).read_text()
    except OSError:
        raise
    edges = []
    seen = -1
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) == 1:
            seen = max(seen, int(parts[0]))
        elif len(parts) == 2:
            u, w = int(parts[0]), int(parts[1])
            edges.append((u, w))
            seen = max(seen, u, w)
        else:
            raise _IoFailure(f"{path}:{lineno}: expected 1 or 2 vertex ids")
    if seen < 0:
        raise _IoFailure(f"{path}: empty graph file")
    return seen + 1, edges


def _cmd_verify_reduction(args) -> int:
    num_vertices, edges = _read_graph(args.graph)
    scn, template = mis_gadget_scenario(num_vertices, edges)
    p = Params(alpha=args.alpha, tau=args.tau, **template)
    report = exhaustive_search(scn, p, SearchBudget(args.max_states))
    recovered = recover_mis_size(report, num_vertices, p)
    brute = brute_force_mis(num_vertices, edges)
    print(f"vertices={num_vertices} edges={len(edges)} "
          f"optimal_utility={report.utility!r}")
    print(f"recovered_set_size={recovered} brute_force_size={brute} "
          f"match={recovered == brute}")
    return 0 if recovered == brute else 2


def _grid_arg(text: str) -> tuple:
    return tuple(float(v) for v in text.split(","))


def _cmd_sweep(args) -> int:
    cfg = _scenario_config(args)
    spec = SweepSpec(config=cfg, method=args.method, var=args.var,
                     grid=args.grid,
                     num_seeds=args.num_seeds, alpha=args.alpha, tau=args.tau,
                     power=args.power, noise=args.noise, p0=args.p0,
                     max_states=args.max_states)
    rows = run_sweep(spec)
    raw_path, agg_path = emit_outputs(rows, args.out)
    print(f"wrote {raw_path} and {agg_path} "
          f"({len(rows)} rows, {sum(r.status == 'ok' for r in rows)} ok)")
    if args.plot is not None:
        plot_sweep(agg_path, args.plot)
        print(f"wrote {args.plot}")
    return 0


def _build_parser() -> _Parser:
    parser = _Parser(prog="icicfair",
                     description="Fairness-tunable subchannel allocation: "
                                 "generate scenarios, solve them, certify "
                                 "optimality, and run studies.")
    sub = parser.add_subparsers(dest="command", required=True,
                                parser_class=_Parser)

    g = sub.add_parser("generate", help="draw a random scenario")
    _add_generation_flags(g, require_sizes=True)
    g.add_argument("--out", type=Path, default=None)
    g.set_defaults(func=_cmd_generate)

    s = sub.add_parser("solve", help="solve a scenario file")
    s.add_argument("--scenario", type=Path, required=True)
    s.add_argument("--method", required=True,
                   choices=("exhaustive", "matching", "distributed"))
    s.add_argument("--alpha", type=float, required=True)
    s.add_argument("--tau", type=float, required=True)
    s.add_argument("--power", type=float, default=1.0)
    s.add_argument("--noise", type=float, default=1.0)
    s.add_argument("--p0", type=float, default=None,
                   help="distributed threshold; default is the "
                        "alpha-adjusted closed form")
    s.add_argument("--max-states", type=int, default=10 ** 8)
    s.add_argument("--trace", type=Path, default=None,
                   help="write the distributed round trace here")
    s.add_argument("--out", type=Path, default=None)
    s.set_defaults(func=_cmd_solve)

    c = sub.add_parser("certify",
                       help="evaluate the optimality certificates")
    c.add_argument("--scenario", type=Path, required=True)
    c.add_argument("--alpha", type=float, required=True)
    c.add_argument("--tau", type=float, required=True)
    c.add_argument("--power", type=float, default=1.0)
    c.add_argument("--noise", type=float, default=1.0)
    c.add_argument("--out", type=Path, default=None)
    c.set_defaults(func=_cmd_certify)

    v = sub.add_parser("verify-lemmas",
                       help="numeric sublevel checks behind the certificates")
    v.add_argument("--alpha", type=float, default=None)
    v.add_argument("--tau", type=float, default=None)
    v.add_argument("--eta", type=float, default=None)
    v.add_argument("--beta", type=float, default=None)
    v.add_argument("--x-max", type=float, default=None)
    v.add_argument("--grid-points", type=int, default=None)
    v.add_argument("--presets", action="store_true",
                   help="run every bundled known-good parameter row and "
                        "exit 2 on any sublevel violation")
    v.set_defaults(func=_cmd_verify_lemmas)

    r = sub.add_parser("verify-reduction",
                       help="check the independent-set encoding on a graph")
    r.add_argument("--graph", type=Path, required=True)
    r.add_argument("--alpha", type=float, default=0.5)
    r.add_argument("--tau", type=float, default=0.5)
    r.add_argument("--max-states", type=int, default=10 ** 8)
    r.set_defaults(func=_cmd_verify_reduction)

    w = sub.add_parser("sweep", help="seeded parameter sweep to CSV")
    _add_generation_flags(w, require_sizes=True)
    w.add_argument("--var", required=True, choices=("alpha", "tau", "p0"))
    w.add_argument("--grid", required=True, type=_grid_arg,
                   help="comma-separated increasing values")
    w.add_argument("--method", required=True,
                   choices=("exhaustive", "matching", "distributed"))
    w.add_argument("--num-seeds", type=int, default=50)
    w.add_argument("--alpha", type=float, default=0.0)
    w.add_argument("--tau", type=float, default=8.5)
    w.add_argument("--power", type=float, default=1.0)
    w.add_argument("--noise", type=float, default=1.0)
    w.add_argument("--p0", type=float, default=None)
    w.add_argument("--max-states", type=int, default=10 ** 8)
    w.add_argument("--format", choices=("csv",), default="csv")
    w.add_argument("--out", type=Path, required=True)
    w.add_argument("--plot", type=Path, default=None)
    w.set_defaults(func=_cmd_sweep)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except _IoFailure as err:
        print(f"error: {err}", file=sys.stderr)
        return 3
    except OSError as err:
        print(f"io error: {err}", file=sys.stderr)
        return 3
    except (IcicError, ValueError, RuntimeError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
