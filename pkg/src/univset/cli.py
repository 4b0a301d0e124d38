"""Command line front end.

Exit codes: 0 construction succeeded with exact verification, 1 succeeded
with sampled verification only, 2 usage error, 3 a verifier rejected the
output, 4 the construction itself failed. Reports replay identically for a
fixed command line and seed, except for the wall_time field.
"""

from __future__ import annotations

import argparse
import json
import sys
import time

from .basis import en_basis
from .errors import BudgetExceeded, UnivsetError
from .groups import CyclicGroup, Group, ProductGroup, SymmetricGroup, make_group
from .powers import (
    build_basis_graph,
    count_walks_from,
    lower_bound_exponent,
    min_degree_subgraph,
    power_set,
)
from .universal import (
    _json_safe,
    abelian_tuple,
    binary_tuple,
    cyclic_universal,
    random_universal_for,
    symmetric_universal,
    tuple_to_universal_set,
)

DEFAULT_WALK_BUDGET = 10**6


def _parse_group(text: str, parser: argparse.ArgumentParser) -> Group:
    kind, _, rest = text.partition(":")
    try:
        if kind == "cyclic":
            return make_group(("cyclic", int(rest)))
        if kind in ("sym", "symmetric"):
            return make_group(("symmetric", int(rest)))
        if kind == "product":
            return make_group(("product", tuple(int(v) for v in rest.split(","))))
    except (ValueError, UnivsetError) as e:
        parser.error(f"bad group spec {text!r}: {e}")
    parser.error(f"unknown group kind {kind!r}; use cyclic:N, sym:N or product:N1,N2,..")


def _read_int_file(path: str, parser: argparse.ArgumentParser) -> list[int]:
    try:
        with open(path) as fh:
            return [int(line) for line in fh if line.strip()]
    except (OSError, ValueError) as e:
        parser.error(f"cannot read integers from {path!r}: {e}")


def _verdict_exit(verdicts: dict) -> int:
    if any(not v.passed for v in verdicts.values()):
        return 3
    if all(v.mode == "exact" for v in verdicts.values()):
        return 0
    return 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="univset",
        description="construct certified k-universal sets and additive bases",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    pu = sub.add_parser("universal", help="build a k-universal set for a group")
    pu.add_argument("--group", required=True, help="cyclic:N | sym:N | product:N1,N2,..")
    pu.add_argument("--k", type=int, required=True)
    pu.add_argument(
        "--method", default="auto",
        choices=["auto", "random", "singer", "tuple", "abelian", "symmetric"],
    )
    pu.add_argument("--mode", default="auto", choices=["auto", "exact", "sampled"],
                    help="verification mode")
    pu.add_argument("--trials", type=int, default=100_000)
    pu.add_argument("--seed", type=int, default=0)
    pu.add_argument("--format", default="text", choices=["text", "json"])

    pb = sub.add_parser("basis", help="build an additive basis covering a target set")
    pb.add_argument("--group", required=True)
    pb.add_argument("--a", help="comma separated target elements")
    pb.add_argument("--a-file", help="file with one target element per line")
    pb.add_argument("--k", type=int, help="block length override")
    pb.add_argument("--seed", type=int, default=0)
    pb.add_argument("--format", default="text", choices=["text", "json"])

    pp = sub.add_parser("powers", help="basis graph of the d-th powers up to n")
    pp.add_argument("--d", type=int, required=True)
    pp.add_argument("--n", type=int, required=True)
    pp.add_argument("--basis", default="trivial",
                    help='"trivial" for {0} plus the powers themselves')
    pp.add_argument("--basis-file", help="file with one basis integer per line")
    pp.add_argument("--k", type=int, help="walk length to count from a core vertex")
    pp.add_argument("--budget", type=int, default=DEFAULT_WALK_BUDGET)
    pp.add_argument("--format", default="text", choices=["text", "json"])
    return parser


# ----------------------------------------------------------- universal sets

def _run_universal(args, parser) -> tuple[dict, int]:
    G = _parse_group(args.group, parser)
    kind = G.spec()["kind"]
    method = args.method
    if method == "auto":
        method = {"cyclic": "singer", "product": "abelian",
                  "symmetric": "symmetric"}.get(kind, "random")

    verdicts = {}
    if method == "random":
        res = random_universal_for(G, args.k, seed=args.seed, mode=args.mode,
                                   trials=args.trials)
    elif method == "singer":
        if not isinstance(G, CyclicGroup):
            parser.error("--method singer needs a cyclic group")
        res = cyclic_universal(G.n, args.k, mode=args.mode)
    elif method == "tuple":
        if not isinstance(G, CyclicGroup):
            parser.error("--method tuple needs a cyclic group")
        s = G.n ** (1.0 - 1.0 / args.k)
        t = binary_tuple(G.n, (s,) * args.k, mode=args.mode)
        verdicts["tuple"] = t.verdict
        res = tuple_to_universal_set(t, mode=args.mode)
    elif method == "abelian":
        if not isinstance(G, (CyclicGroup, ProductGroup)):
            parser.error("--method abelian needs a cyclic group or product")
        s = G.order ** (1.0 - 1.0 / args.k)
        t = abelian_tuple(G, (s,) * args.k, mode=args.mode)
        verdicts["tuple"] = t.verdict
        res = tuple_to_universal_set(t, mode=args.mode)
    else:  # symmetric
        if not isinstance(G, SymmetricGroup):
            parser.error("--method symmetric needs a symmetric group")
        res = symmetric_universal(G.n, args.k, mode=args.mode)
    verdicts["set"] = res.verdict

    floor = 0.5 * (len(res.scope_set) if res.scope_set is not None
                   else G.order) ** (1.0 - 1.0 / args.k)
    report = {
        "command": "universal",
        "group": G.spec(),
        "params": {"k": args.k, "method": method, "mode": args.mode,
                   "seed": args.seed},
        "result": res.to_json(),
        "bounds": {
            "size_bound": res.size_bound,
            "bound_guaranteed": res.bound_guaranteed,
            "floor": floor,
            "ratio_vs_floor": res.lower_bound_ratio(),
        },
        "verdicts": {name: v.to_json() for name, v in verdicts.items()},
        "seed": args.seed,
    }
    return report, _verdict_exit(verdicts)


def _text_universal(report) -> str:
    r = report["result"]
    b = report["bounds"]
    lines = [
        f"universal set: method={report['params']['method']} "
        f"group={_group_str(report['group'])} k={report['params']['k']}",
        f"  size={r['size']} scope={r['scope']} "
        f"bound={b['size_bound']:.4g} guaranteed={b['bound_guaranteed']}",
        f"  floor={b['floor']:.4g} ratio_vs_floor={b['ratio_vs_floor']:.3f}",
    ]
    for name, v in sorted(report["verdicts"].items()):
        lines.append("  " + _verdict_str(name, v))
    lines.append("  members: " + _int_list_str(r["members"]))
    return "\n".join(lines)


# ------------------------------------------------------------------- bases

def _run_basis(args, parser) -> tuple[dict, int]:
    G = _parse_group(args.group, parser)
    if (args.a is None) == (args.a_file is None):
        parser.error("give exactly one of --a or --a-file")
    if args.a is not None:
        try:
            elems = [int(v) for v in args.a.split(",") if v.strip()]
        except ValueError as e:
            parser.error(f"bad --a list: {e}")
    else:
        elems = _read_int_file(args.a_file, parser)
    # elements are residues for cyclic groups, element indices otherwise
    A = G.subset([v % G.order for v in elems])
    res = en_basis(G, A, k=args.k, seed=args.seed)
    report = {
        "command": "basis",
        "group": G.spec(),
        "params": {"k": res.k, "seed": args.seed, "target_size": len(A)},
        "result": res.to_json(),
        "verdicts": {"basis": res.verdict.to_json()},
        "seed": args.seed,
    }
    return report, _verdict_exit({"basis": res.verdict})


def _text_basis(report) -> str:
    r = report["result"]
    lines = [
        f"additive basis: group={_group_str(report['group'])} "
        f"target_size={report['params']['target_size']} k={r['k']}",
        f"  size={r['size']} universal_part={r['universal_size']} "
        f"translators={len(r['translators'])} covering={r['covering_size']} "
        f"core={r['core_size']}",
        f"  size_budget={r['size_budget']} "
        f"en_bound_applicable={r['en_bound_applicable']}",
        "  " + _verdict_str("basis", report["verdicts"]["basis"]),
        "  members: " + _int_list_str(r["basis"]),
    ]
    return "\n".join(lines)


# ------------------------------------------------------------------ powers

def _run_powers(args, parser) -> tuple[dict, int]:
    if args.d < 2:
        parser.error("--d must be >= 2")
    if args.n < 1:
        parser.error("--n must be >= 1")
    if args.basis_file is not None:
        basis = _read_int_file(args.basis_file, parser)
    elif args.basis == "trivial":
        basis = [0, *power_set(args.d, args.n)]
    else:
        parser.error('--basis must be "trivial" or use --basis-file')
    g = build_basis_graph(basis, args.d, args.n)
    core = min_degree_subgraph(g, g.density()) if g.n_edges else g

    walks = None
    if args.k is not None:
        start = core.vertices[0] if core.n_vertices else (
            g.vertices[0] if g.n_vertices else None)
        if start is not None:
            try:
                walks = {"start": start, "k": args.k, "exact": True,
                         "count": count_walks_from(g, start, args.k,
                                                   budget=args.budget)}
            except BudgetExceeded as e:
                walks = {"start": start, "k": args.k, "exact": False,
                         "count": e.partial_count,
                         "note": "budget exceeded; count is a lower bound"}

    report = {
        "command": "powers",
        "params": {"d": args.d, "n": args.n, "basis_size": len(set(basis)),
                   "k": args.k, "budget": args.budget},
        "graph": {"vertices": g.n_vertices, "edges": g.n_edges,
                  "density": g.density(), "missing": list(g.missing)},
        "core": {"vertices": core.n_vertices, "edges": core.n_edges,
                 "members": list(core.vertices)},
        "walks": walks,
        "lower_bound_exponent": lower_bound_exponent(args.d),
        "full_graph": g.to_json(),
    }
    return report, 0


def _text_powers(report) -> str:
    gr, co = report["graph"], report["core"]
    p = report["params"]
    lines = [
        f"power basis graph: d={p['d']} n={p['n']} basis_size={p['basis_size']}",
        f"  vertices={gr['vertices']} edges={gr['edges']} "
        f"density={gr['density']:.3f} missing={len(gr['missing'])}",
        f"  core: vertices={co['vertices']} edges={co['edges']}",
        f"  lower_bound_exponent={report['lower_bound_exponent']:.4f}",
    ]
    w = report["walks"]
    if w is not None:
        extra = "" if w["exact"] else " (lower bound, budget hit)"
        lines.append(
            f"  walks of length {w['k']} from {w['start']}: {w['count']}{extra}")
    return "\n".join(lines)


# ---------------------------------------------------------------- plumbing

def _group_str(spec: dict) -> str:
    if spec["kind"] == "cyclic":
        return f"cyclic:{spec['n']}"
    if spec["kind"] == "symmetric":
        return f"sym:{spec['n']}"
    if spec["kind"] == "product":
        return "product:" + ",".join(str(f["n"]) for f in spec["factors"])
    return spec["kind"]


def _verdict_str(name: str, v: dict) -> str:
    out = f"verdict[{name}]: {v['mode']} {'pass' if v['passed'] else 'FAIL'}"
    if v["mode"] == "sampled" and v["passed"]:
        out += f" trials={v['trials']} failure_bound={v['failure_bound']:.3g}"
    if not v["passed"]:
        out += f" witness={v['witness']}"
    return out


def _int_list_str(vals, cap: int = 64) -> str:
    s = " ".join(str(v) for v in vals[:cap])
    if len(vals) > cap:
        s += f" ... ({len(vals)} total)"
    return s


_RUNNERS = {"universal": (_run_universal, _text_universal),
            "basis": (_run_basis, _text_basis),
            "powers": (_run_powers, _text_powers)}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        run, render = _RUNNERS[args.command]
        t0 = time.perf_counter()
        report, code = run(args, parser)
    except SystemExit as e:  # argparse usage errors and --help
        return int(e.code or 0)
    except (UnivsetError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 4
    report["exit_code"] = code
    report["wall_time"] = time.perf_counter() - t0
    if args.format == "json":
        print(json.dumps(_json_safe(report), sort_keys=True, indent=2))
    else:
        print(render(report))
        print(f"exit={code} wall_time={report['wall_time']:.3f}s")
    return code


def main_entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    main_entry()
