"""Command line front end.

Subcommands: solve, check, estimate-k, oracle, bounds, export-example.
Human-readable summaries go to stdout, diagnostics to stderr, and
machine-readable artifacts are written only when --out / --trace paths
are given.  Exit codes: 0 ok, 1 violated check or non-convergence,
2 bad input.  For a fixed command line and seed every artifact is
byte-identical between runs.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from .metric import (
    CoupledFPError,
    ValidationError,
    check_metric_axioms,
    real_line,
    real_vector,
    union_sampler,
)
from .mappings import (
    check_banach_coupling,
    check_commutativity,
    check_coupled_banach_contraction,
    check_injectivity,
    estimate_contraction_constant,
    is_coupling,
    is_cyclic,
    is_g_coupling,
    is_self_cyclic,
    test_g_coupling_implies_coupling,
    _report,
)
from .solver import (
    BOUND_TOL,
    MEMBERSHIP_POLICIES,
    SolverConfig,
    _fmt_point,
    _fmt_scalar,
    solve_coupled_coincidence,
    solve_result_document,
    trace_from_csv,
    trace_to_csv,
    verify_trace_bounds,
)
from .oracle import (
    ORACLE_DEFINITIONS,
    brute_force_coincidence_points,
    exhaustive_definition_check,
    strong_coincidence_points,
)
from .problems import (
    BUILTIN_NAMES,
    builtin_problem,
    builtin_spec,
    finite_problem_of,
    instantiate,
    load_spec,
    serialize_spec,
)

CHECK_DEFINITIONS = ("metric-axioms", "cyclic", "self-cyclic", "coupling",
                     "g-coupling", "banach-coupling",
                     "coupled-banach-contraction", "commutativity",
                     "injectivity", "g-coupling-implies-coupling")


def _resolve_problem(args):
    """(instance, spec) from --builtin NAME or --problem PATH."""
    if getattr(args, "builtin", None):
        return builtin_problem(args.builtin), builtin_spec(args.builtin)
    spec = load_spec(args.problem)
    return instantiate(spec), spec


def _parse_point(text: str, space):
    t = text.strip()
    if space.is_finite:
        try:
            idx = int(t)
        except ValueError:
            raise ValidationError(
                f"finite-space points are integer indices, got {text!r}") from None
        space.check_point(idx)
        return idx
    if space.kind == "real-vector":
        try:
            vec = np.array([float(c) for c in t.split(",")])
        except ValueError:
            raise ValidationError(
                f"vector points are comma-separated numbers, got {text!r}") from None
        space.check_point(vec)
        return vec
    try:
        return float(t)
    except ValueError:
        raise ValidationError(f"not a number: {text!r}") from None


def _invocation_lines(inv: dict) -> list:
    lines = ["[invocation]"]
    for key in sorted(inv):
        lines.append(f"{key} = {_fmt_scalar(inv[key])}")
    lines.append("")
    return lines


def _report_document(inv: dict, report) -> str:
    lines = _invocation_lines(inv)
    lines += ["[report]",
              f"name = {report.name}",
              f"verdict = {report.verdict}",
              f"samples_used = {report.samples_used}",
              f"seed = {report.seed}",
              f"witnesses = {len(report.witnesses)}"]
    for w in report.witnesses[:5]:
        lines.append(f"witness = {w!r}")
    for note in report.notes:
        lines.append(f"note = {note}")
    lines.append("")
    return "\n".join(lines)


def _print_report(report):
    print(f"{report.name}: {report.verdict}")
    print(f"samples used: {report.samples_used}, seed: {report.seed}")
    if report.witnesses:
        print(f"witnesses: {len(report.witnesses)}")
        for w in report.witnesses[:3]:
            print(f"  {w!r}", file=sys.stderr)
    for note in report.notes:
        print(f"note: {note}", file=sys.stderr)


def _cmd_solve(args) -> int:
    inst, _ = _resolve_problem(args)
    x0 = _parse_point(args.x0, inst.space)
    y0 = _parse_point(args.y0, inst.space)
    tol = args.tol if args.tol is not None else (inst.default_tol or 1e-10)
    max_iter = (args.max_iter if args.max_iter is not None
                else (inst.default_max_iter or 200))
    cfg = SolverConfig(residual_tol=tol, max_iter=max_iter,
                       membership_checks=args.membership)
    result = solve_coupled_coincidence(inst, x0, y0, cfg, seed=args.seed)
    print(f"problem: {inst.name}")
    print(f"converged: {'yes' if result.converged else 'no'} "
          f"({result.message})")
    print(f"pair: a = {_fmt_point(result.a)}  b = {_fmt_point(result.b)}")
    print(f"residuals: {result.residual_x:.17g} {result.residual_y:.17g}")
    print(f"k: {_fmt_scalar(result.k_used)} ({result.k_source})")
    if result.strong is not None:
        print(f"strong point: {_fmt_point(result.strong.point)} "
              f"(residual {result.strong.residual:.17g})")
    if result.bound_report is not None:
        print(f"bound check: {result.bound_report.verdict} "
              f"({len(result.bound_report.witnesses)} witnesses)")
    for note in result.notes:
        print(f"note: {note}", file=sys.stderr)
    if args.out:
        inv = {"command": "solve", "problem": inst.name, "x0": args.x0,
               "y0": args.y0, "tol": tol, "max_iter": max_iter,
               "membership": args.membership, "seed": args.seed}
        Path(args.out).write_text(solve_result_document(result, inst, inv))
    if args.trace:
        if result.trace is None:
            raise ValidationError("no trace was recorded")
        Path(args.trace).write_text(trace_to_csv(result.trace))
    return 0 if result.converged else 1


def _cmd_check(args) -> int:
    inst, _ = _resolve_problem(args)
    n, seed, threads = args.samples, args.seed, args.threads
    defn = args.definition
    if defn == "metric-axioms":
        sampler = inst.space.sampler or union_sampler(inst.pair)
        violations = check_metric_axioms(inst.space, n, seed, sampler=sampler)
        report = _report("metric-axioms", violations, n, seed)
    elif defn == "cyclic":
        report = is_cyclic(inst.g, inst.pair, n, seed, threads=threads)
    elif defn == "self-cyclic":
        report = is_self_cyclic(inst.g, inst.pair, n, seed, threads=threads)
    elif defn == "coupling":
        report = is_coupling(inst.F, inst.pair, n, seed, threads=threads)
    elif defn == "g-coupling":
        report = is_g_coupling(inst.F, inst.g, inst.pair, inst.space, n, seed,
                               threads=threads)
    elif defn == "banach-coupling":
        k = args.k if args.k is not None else inst.k
        if k is None:
            raise ValidationError(f"{defn} needs --k or a declared k")
        report = check_banach_coupling(inst.F, inst.pair, inst.space, k, n,
                                       seed, threads=threads)
    elif defn == "coupled-banach-contraction":
        k = args.k if args.k is not None else inst.k
        if k is None:
            raise ValidationError(f"{defn} needs --k or a declared k")
        sampler = inst.space.sampler or union_sampler(inst.pair)
        report = check_coupled_banach_contraction(inst.F, inst.space, k, n,
                                                  seed, sampler=sampler,
                                                  threads=threads)
    elif defn == "commutativity":
        report = check_commutativity(inst.F, inst.g, inst.space, n, seed,
                                     pair=inst.pair, threads=threads)
    elif defn == "injectivity":
        report = check_injectivity(inst.g, inst.space, n, seed,
                                   pair=inst.pair, threads=threads)
    else:
        report = test_g_coupling_implies_coupling(inst.F, inst.g, inst.pair,
                                                  inst.space, n, seed,
                                                  threads=threads)
    _print_report(report)
    if args.out:
        inv = {"command": "check", "definition": defn, "problem": inst.name,
               "samples": n, "seed": seed, "threads": threads}
        if args.k is not None:
            inv["k"] = args.k
        Path(args.out).write_text(_report_document(inv, report))
    return 1 if not report.ok else 0


def _cmd_estimate_k(args) -> int:
    inst, _ = _resolve_problem(args)
    k_hat, violation = estimate_contraction_constant(
        inst.F, inst.g, inst.pair, inst.space, n=args.samples, seed=args.seed,
        pattern=args.pattern, threads=args.threads)
    print(f"k_hat = {k_hat!r}")
    if inst.k is not None:
        print(f"declared k = {inst.k!r}")
    if violation is not None:
        print(f"violation: {violation!r}", file=sys.stderr)
    if args.out:
        inv = {"command": "estimate-k", "problem": inst.name,
               "samples": args.samples, "seed": args.seed,
               "pattern": args.pattern, "threads": args.threads}
        lines = _invocation_lines(inv)
        lines += ["[estimate]",
                  f"k_hat = {_fmt_scalar(k_hat)}",
                  f"declared_k = {_fmt_scalar(inst.k) if inst.k is not None else 'none'}",
                  f"violation = {violation!r}" if violation is not None
                  else "violation = none",
                  ""]
        Path(args.out).write_text("\n".join(lines))
    return 1 if violation is not None else 0


def _cmd_oracle(args) -> int:
    _, spec = _resolve_problem(args)
    if spec.kind != "finite":
        raise ValidationError("oracle enumeration needs a finite problem")
    fp = finite_problem_of(spec)
    pairs = brute_force_coincidence_points(fp)
    strong = strong_coincidence_points(fp)
    print(f"problem: {fp.name} ({fp.size} points)")
    print(f"coincidence pairs: {len(pairs)}")
    for i, j in pairs:
        print(f"  ({i}, {j})  labels ({fp.labels[i]}, {fp.labels[j]})")
    print(f"strong points: "
          f"{', '.join(str(i) for i in strong) if strong else 'none'}")
    verdicts = {}
    names = ()
    if args.definition == "all":
        names = ORACLE_DEFINITIONS
    elif args.definition:
        names = (args.definition,)
    for name in names:
        v = exhaustive_definition_check(fp, name)
        verdicts[name] = v
        extra = ""
        if v.min_k is not None:
            extra = (f"  min_k = {v.min_k!r}"
                     f"{'' if v.finite_k else '  (no finite k)'}")
        print(f"{name}: {'ok' if v.ok else 'violated'}"
              f" ({len(v.witnesses)} witnesses){extra}")
    if args.out:
        inv = {"command": "oracle", "problem": fp.name,
               "definition": args.definition or "none"}
        lines = _invocation_lines(inv)
        lines += ["[oracle]", f"points = {fp.size}",
                  f"coincidence_pairs = {len(pairs)}"]
        for i, j in pairs:
            lines.append(f"pair = {i}, {j}")
        lines.append(f"strong_points = "
                     f"{', '.join(str(i) for i in strong) if strong else 'none'}")
        for name in names:
            v = verdicts[name]
            val = "ok" if v.ok else "violated"
            if v.min_k is not None:
                val += f"; min_k = {_fmt_scalar(v.min_k)}; finite = {_fmt_scalar(v.finite_k)}"
            lines.append(f"{name} = {val}")
        lines.append("")
        Path(args.out).write_text("\n".join(lines))
    return 0


def _infer_trace_space(trace):
    pts = []
    for s in trace.steps:
        pts += [s.x, s.y, s.gx, s.gy]
    if any(isinstance(p, np.ndarray) for p in pts):
        dims = {p.shape[0] for p in pts if isinstance(p, np.ndarray)}
        if len(dims) != 1 or not all(isinstance(p, np.ndarray) for p in pts):
            raise ValidationError("trace mixes vector and scalar points")
        return real_vector(dims.pop())
    if any(isinstance(p, float) for p in pts):
        return real_line()
    raise ValidationError("every trace point parses as an integer index; "
                          "pass --builtin or --problem so distances come "
                          "from the right matrix")


def _cmd_bounds(args) -> int:
    try:
        text = Path(args.trace).read_text()
    except OSError as exc:
        raise ValidationError(f"cannot read trace {args.trace}: {exc}") from exc
    trace = trace_from_csv(text)
    inst = None
    if args.builtin or args.problem:
        inst, _ = _resolve_problem(args)
    k = args.k if args.k is not None else (inst.k if inst else None)
    if k is None:
        raise ValidationError("bounds needs --k or a problem with declared k")
    space = inst.space if inst is not None else _infer_trace_space(trace)
    report = verify_trace_bounds(trace, k, space, tol=args.tol)
    print(f"steps: {len(trace)}")
    print(f"k: {k!r}")
    _print_report(report)
    if args.out:
        inv = {"command": "bounds", "trace": str(args.trace), "k": k,
               "tol": args.tol}
        Path(args.out).write_text(_report_document(inv, report))
    return 0 if report.ok else 1


def _cmd_export_example(args) -> int:
    text = serialize_spec(builtin_spec(args.builtin))
    if args.out:
        Path(args.out).write_text(text)
        print(f"wrote {args.out}")
    else:
        sys.stdout.write(text)
    return 0


_DISPATCH = {
    "solve": _cmd_solve,
    "check": _cmd_check,
    "estimate-k": _cmd_estimate_k,
    "oracle": _cmd_oracle,
    "bounds": _cmd_bounds,
    "export-example": _cmd_export_example,
}


def _add_problem_args(p, required=True):
    grp = p.add_mutually_exclusive_group(required=required)
    grp.add_argument("--builtin", metavar="NAME",
                     help=f"built-in problem: {', '.join(BUILTIN_NAMES)}")
    grp.add_argument("--problem", metavar="PATH", help="problem config file")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="coupledfp",
        description="Coupled coincidence point iteration on metric spaces: "
                    "solve, check definitions on samples, estimate the "
                    "contraction factor, or enumerate finite problems exactly.")
    sub = ap.add_subparsers(dest="command", required=True)

    ps = sub.add_parser("solve", help="run the coupled iteration to a "
                                      "coincidence pair")
    _add_problem_args(ps)
    ps.add_argument("--x0", required=True,
                    help="start in A: scalar, comma-separated vector, or index")
    ps.add_argument("--y0", required=True, help="start in B")
    ps.add_argument("--tol", type=float, default=None,
                    help="residual tolerance (default: problem or 1e-10)")
    ps.add_argument("--max-iter", type=int, default=None)
    ps.add_argument("--membership", choices=MEMBERSHIP_POLICIES, default="warn")
    ps.add_argument("--seed", type=int, default=0)
    ps.add_argument("--out", metavar="PATH", help="write the result document")
    ps.add_argument("--trace", metavar="PATH", help="write the trace CSV")

    pc = sub.add_parser("check", help="run one definition check on samples")
    pc.add_argument("definition", choices=CHECK_DEFINITIONS)
    _add_problem_args(pc)
    pc.add_argument("--samples", type=int, default=1000)
    pc.add_argument("--seed", type=int, default=0)
    pc.add_argument("--threads", type=int, default=1)
    pc.add_argument("--k", type=float, default=None,
                    help="factor for the banach checks (default: declared k)")
    pc.add_argument("--out", metavar="PATH")

    pe = sub.add_parser("estimate-k", help="sampled contraction factor")
    _add_problem_args(pe)
    pe.add_argument("--samples", type=int, default=1000)
    pe.add_argument("--seed", type=int, default=0)
    pe.add_argument("--threads", type=int, default=1)
    pe.add_argument("--pattern", choices=("subset", "unrestricted"),
                    default="subset")
    pe.add_argument("--out", metavar="PATH")

    po = sub.add_parser("oracle", help="exact enumeration on a finite problem")
    _add_problem_args(po)
    po.add_argument("--definition", choices=("all",) + ORACLE_DEFINITIONS,
                    default=None)
    po.add_argument("--out", metavar="PATH")

    pb = sub.add_parser("bounds", help="replay the decay-bound check on a "
                                       "stored trace")
    _add_problem_args(pb, required=False)
    pb.add_argument("--trace", metavar="PATH", required=True,
                    help="trace CSV written by solve")
    pb.add_argument("--k", type=float, default=None)
    pb.add_argument("--tol", type=float, default=BOUND_TOL)
    pb.add_argument("--out", metavar="PATH")

    px = sub.add_parser("export-example", help="write a built-in problem "
                                               "config file")
    px.add_argument("--builtin", default="averaging", choices=BUILTIN_NAMES)
    px.add_argument("--out", metavar="PATH")
    return ap


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else 0
    try:
        return _DISPATCH[args.command](args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except CoupledFPError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
