"""Sweep random finite problems and cross-check solver against oracle.

Classifies each generated instance by contraction regime, then for every
strictly contractive instance with a nonempty coincidence set runs the
solver from all admissible starts and checks the answer against the
brute-force list.  Disagreements print immediately; the summary table at
the end shows how the generator distributes over regimes.

Usage: python3 scripts/finite_sweep.py [--seeds 200] [--max-points 12]
"""

import argparse
import collections
import itertools
import time

from coupledfp import (
    SolverConfig,
    brute_force_coincidence_points,
    exhaustive_definition_check,
    random_finite_problem,
    solve_coupled_coincidence,
    to_instance,
)


def regime(v, pairs):
    if not v.finite_k:
        tag = "no-finite-k"
    elif v.min_k >= 1.0:
        tag = "k>=1"
    elif v.min_k == 0.0:
        tag = "k=0"
    else:
        tag = "0<k<1"
    return tag + ("+pairs" if pairs else "")


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--seeds", type=int, default=200)
    ap.add_argument("--max-points", type=int, default=12)
    ap.add_argument("--tol", type=float, default=1e-12)
    args = ap.parse_args()

    counts = collections.Counter()
    solved = mismatches = 0
    cfg = SolverConfig(residual_tol=args.tol, max_iter=300)
    t0 = time.time()

    for seed in range(args.seeds):
        fp = random_finite_problem(seed, max_points=args.max_points)
        v = exhaustive_definition_check(fp, "banach-g-coupling")
        pairs = brute_force_coincidence_points(fp)
        counts[regime(v, pairs)] += 1
        if not (v.finite_k and v.min_k < 1.0 and pairs):
            continue
        inst = to_instance(fp)
        listed = set(pairs)
        for i, j in itertools.product(fp.a_indices, fp.b_indices):
            res = solve_coupled_coincidence(inst, i, j, cfg)
            solved += 1
            if not (res.converged and (res.a, res.b) in listed):
                mismatches += 1
                print(f"MISMATCH seed={seed} start=({i},{j}) -> "
                      f"({res.a},{res.b}) converged={res.converged} "
                      f"listed={sorted(listed)}")

    print(f"\n{args.seeds} seeds in {time.time() - t0:.1f}s")
    for tag, c in counts.most_common():
        print(f"  {tag:>18}: {c}")
    print(f"solver runs on contractive instances: {solved}, "
          f"mismatches: {mismatches}")
    if mismatches:
        raise SystemExit(1)


if __name__ == "__main__":
    main()
