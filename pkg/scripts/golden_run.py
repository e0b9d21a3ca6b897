"""Convergence study on the averaging instance.

Solves from a grid of starts, compares the recorded orbit against the
closed form x_n = y_n = k^(n-1) * (x0+y0)/5 ... well, against the
geometric envelope, and prints the per-step bound margins so you can
eyeball how slack the certificate actually is.

Usage: python3 scripts/golden_run.py [--tol 1e-10] [--starts N]
"""

import argparse

import numpy as np

from coupledfp import (
    SolverConfig,
    a_priori_iterations,
    builtin_problem,
    solve_coupled_coincidence,
    uniqueness_probe,
    verify_trace_bounds,
)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--tol", type=float, default=1e-10)
    ap.add_argument("--starts", type=int, default=6,
                    help="starts per axis on the A x B grid")
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    inst = builtin_problem("averaging")
    cfg = SolverConfig(residual_tol=args.tol)
    k = inst.k
    print(f"instance: {inst.name}  declared k = {k}")

    res = solve_coupled_coincidence(inst, 2.0, 3.0, cfg)
    print(f"\nreference run from (2, 3): {res.iterations_used} iterations, "
          f"a = {res.a!r}")
    gap0 = inst.space.distance(inst.g(2.0), inst.g(3.0))
    n_star = a_priori_iterations(k, gap0, args.tol)
    print(f"a priori iteration count for gap tolerance {args.tol}: {n_star}")

    # the diagonal gap collapses to 0 after one step here (the orbit
    # symmetrizes), so the step family is the informative one: compare
    # d(gx_n, gx_{n+1}) against 2 k^n gap0 + k^n C
    steps = res.trace.steps
    C = (inst.space.distance(steps[0].gx, steps[1].gy)
         + inst.space.distance(steps[0].gy, steps[1].gx))
    print("\n n   x_n           step gap      step bound    margin")
    for s, nxt in zip(steps, steps[1:]):
        gap = inst.space.distance(s.gx, nxt.gx)
        bound = 2 * k ** s.n * gap0 + k ** s.n * C
        margin = bound / gap if gap > 0 else float("inf")
        if s.n % 5 == 0 or s.n == res.iterations_used - 1:
            print(f"{s.n:3d}  {s.x:.6e}  {gap:.6e}  {bound:.6e}  "
                  f"{margin:8.3f}")

    rep = verify_trace_bounds(res.trace, k, inst.space)
    print(f"\nbound certificate: ok={rep.ok} witnesses={len(rep.witnesses)} "
          f"checks={rep.samples_used}")

    # grid of starts; every strong point should coincide
    rng = np.random.default_rng(args.seed)
    ax = np.linspace(0.0, 2.0, args.starts)
    bx = np.linspace(0.0, 3.0, args.starts)
    starts = [(float(a), float(b)) for a in ax for b in bx]
    starts += [(float(rng.uniform(0, 2)), float(rng.uniform(0, 3)))
               for _ in range(4)]
    probe = uniqueness_probe(inst, starts, cfg, tol=1e-8)
    pts = [solve_coupled_coincidence(inst, sx, sy, cfg).strong.point
           for sx, sy in starts[:8]]
    print(f"\nuniqueness probe over {len(starts)} starts: verdict "
          f"{probe.verdict} ({len(probe.witnesses)} witnesses)")
    print("first strong points:", ", ".join(f"{p:.3e}" for p in pts))


if __name__ == "__main__":
    main()
