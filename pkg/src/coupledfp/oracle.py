"""Exact brute-force oracle on finite metric spaces.

Everything here enumerates; nothing samples.  Verdicts from this module
are ground truth against which the sampled checkers can be validated on
the same instance.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .metric import ValidationError, finite_matrix_violations, finite_space, index_pair
from .mappings import CoupledMap, SelfMap
from .solver import ProblemInstance

ORACLE_DEFINITIONS = ("cyclic", "self-cyclic", "coupling", "g-coupling",
                      "commutativity", "injectivity", "coincidence",
                      "banach-coupling", "banach-g-coupling",
                      "coupled-banach-contraction")


@dataclass
class FiniteProblem:
    """A fully tabulated problem: distance matrix plus value tables.

    ``f_table[i, j]`` is the index of F(i, j) and ``g_table[i]`` the
    index of g(i), so every question about the instance is decidable by
    enumeration.
    """

    labels: tuple
    dist: np.ndarray
    a_indices: tuple
    b_indices: tuple
    f_table: np.ndarray
    g_table: np.ndarray
    name: str = "finite-problem"

    def __post_init__(self):
        self.labels = tuple(str(s) for s in self.labels)
        self.dist = np.asarray(self.dist, dtype=float)
        n = len(self.labels)
        if self.dist.shape != (n, n):
            raise ValidationError(f"distance matrix shape {self.dist.shape} "
                                  f"does not match {n} labels")
        bad = finite_matrix_violations(self.dist)
        if bad:
            raise ValidationError("distance matrix is not a metric: "
                                  + bad[0]["detail"])
        self.a_indices = tuple(sorted({int(i) for i in self.a_indices}))
        self.b_indices = tuple(sorted({int(i) for i in self.b_indices}))
        if not self.a_indices or not self.b_indices:
            raise ValidationError("A and B must be non-empty")
        for idx in self.a_indices + self.b_indices:
            if not 0 <= idx < n:
                raise ValidationError(f"subset index {idx} out of range")
        self.f_table = np.asarray(self.f_table, dtype=int)
        self.g_table = np.asarray(self.g_table, dtype=int)
        if self.f_table.shape != (n, n):
            raise ValidationError(f"f_table shape {self.f_table.shape} must be "
                                  f"({n}, {n})")
        if self.g_table.shape != (n,):
            raise ValidationError(f"g_table shape {self.g_table.shape} must be "
                                  f"({n},)")
        if (self.f_table < 0).any() or (self.f_table >= n).any():
            raise ValidationError("f_table values must be point indices")
        if (self.g_table < 0).any() or (self.g_table >= n).any():
            raise ValidationError("g_table values must be point indices")

    @property
    def size(self) -> int:
        return len(self.labels)


@dataclass
class ExactVerdict:
    """Outcome of one exhaustive check (ground truth, not evidence)."""

    definition: str
    ok: bool
    min_k: Optional[float] = None
    finite_k: Optional[bool] = None
    witnesses: list = field(default_factory=list)


def brute_force_coincidence_points(fp: FiniteProblem) -> list:
    """All pairs (i, j) in A x B with F(i,j) = g(i) and F(j,i) = g(j)."""
    f, g = fp.f_table, fp.g_table
    return [(i, j) for i in fp.a_indices for j in fp.b_indices
            if int(f[i, j]) == int(g[i]) and int(f[j, i]) == int(g[j])]


def strong_coincidence_points(fp: FiniteProblem) -> list:
    """All i in A inter B with F(i, i) = g(i)."""
    f, g = fp.f_table, fp.g_table
    inter = sorted(set(fp.a_indices) & set(fp.b_indices))
    return [i for i in inter if int(f[i, i]) == int(g[i])]


def min_contraction_constant(fp: FiniteProblem, pattern: str = "subset",
                             g_relative: bool = True):
    """Exact infimum of admissible contraction factors, by enumeration.

    Returns ``(min_k, finite_k, witnesses)``.  min_k is the maximum of
    2 d(F(x,y), F(u,v)) / (d(gx, gu) + d(gy, gv)) over the quadruple
    pattern (plain distances when ``g_relative`` is false); finite_k is
    False when a quadruple has zero denominator but positive numerator.
    The arithmetic matches the sampled estimator operation for
    operation, so the estimator run on the full enumeration reproduces
    min_k bit for bit.
    """
    n = fp.size
    if pattern == "subset":
        xs = np.fromiter(fp.a_indices, dtype=int)
        ys = np.fromiter(fp.b_indices, dtype=int)
        us, vs = ys, xs
    elif pattern == "unrestricted":
        xs = ys = us = vs = np.arange(n)
    else:
        raise ValidationError(f"unknown quadruple pattern {pattern!r}")
    den_map = fp.g_table if g_relative else np.arange(n)
    m, f = fp.dist, fp.f_table
    fxy = f[np.ix_(xs, ys)]
    fuv = f[np.ix_(us, vs)]
    num = m[fxy[:, :, None, None], fuv[None, None, :, :]]
    dxu = m[np.ix_(den_map[xs], den_map[us])]
    dyv = m[np.ix_(den_map[ys], den_map[vs])]
    den = dxu[:, None, :, None] + dyv[None, :, None, :]
    pos = den > 0.0
    witnesses = []
    zero_bad = ~pos & (num > 0.0)
    finite_k = not bool(zero_bad.any())
    for p in np.argwhere(zero_bad)[:5]:
        i, j, l, w = (int(t) for t in p)
        witnesses.append({"kind": "no-finite-k",
                          "quadruple": (int(xs[i]), int(ys[j]), int(us[l]), int(vs[w])),
                          "numerator": float(num[i, j, l, w])})
    if pos.any():
        with np.errstate(divide="ignore", invalid="ignore"):
            ratios = 2.0 * num / den
        ratios = np.where(pos, ratios, -np.inf)
        i, j, l, w = np.unravel_index(int(np.argmax(ratios)), ratios.shape)
        min_k = float(ratios[i, j, l, w])
        if min_k >= 1.0:
            witnesses.append({"kind": "not-contractive", "k": min_k,
                              "quadruple": (int(xs[i]), int(ys[j]),
                                            int(us[l]), int(vs[w]))})
    else:
        min_k = 0.0
    return min_k, finite_k, witnesses


def exhaustive_definition_check(fp: FiniteProblem, definition: str) -> ExactVerdict:
    """Ground-truth verdict for one definition by full enumeration.

    For the three contraction families the verdict carries the exact
    smallest admissible factor; ok means a finite factor below 1 exists.
    """
    f, g = fp.f_table, fp.g_table
    aset, bset = set(fp.a_indices), set(fp.b_indices)
    wit: list = []
    if definition == "cyclic":
        for i in fp.a_indices:
            if int(g[i]) not in bset:
                wit.append({"index": i, "side": "A", "image": int(g[i])})
        for j in fp.b_indices:
            if int(g[j]) not in aset:
                wit.append({"index": j, "side": "B", "image": int(g[j])})
        return ExactVerdict(definition, not wit, witnesses=wit)
    if definition == "self-cyclic":
        for i in fp.a_indices:
            if int(g[i]) not in aset:
                wit.append({"index": i, "side": "A", "image": int(g[i])})
        for j in fp.b_indices:
            if int(g[j]) not in bset:
                wit.append({"index": j, "side": "B", "image": int(g[j])})
        return ExactVerdict(definition, not wit, witnesses=wit)
    if definition == "coupling":
        for i in fp.a_indices:
            for j in fp.b_indices:
                reasons = []
                if int(f[i, j]) not in bset:
                    reasons.append("F(x,y) not in B")
                if int(f[j, i]) not in aset:
                    reasons.append("F(y,x) not in A")
                if reasons:
                    wit.append({"x": i, "y": j, "reason": "; ".join(reasons)})
        return ExactVerdict(definition, not wit, witnesses=wit)
    if definition == "g-coupling":
        g_of_a = {int(g[i]) for i in fp.a_indices}
        g_of_b = {int(g[j]) for j in fp.b_indices}
        for i in fp.a_indices:
            for j in fp.b_indices:
                fij, fji = int(f[i, j]), int(f[j, i])
                reasons = []
                if fij not in g_of_a:
                    reasons.append("F(x,y) not in g(A)")
                if fij not in bset:
                    reasons.append("F(x,y) not in B")
                if fji not in g_of_b:
                    reasons.append("F(y,x) not in g(B)")
                if fji not in aset:
                    reasons.append("F(y,x) not in A")
                if reasons:
                    wit.append({"x": i, "y": j, "reason": "; ".join(reasons)})
        return ExactVerdict(definition, not wit, witnesses=wit)
    if definition == "commutativity":
        lhs = g[f]
        rhs = f[np.ix_(g, g)]
        for i, j in np.argwhere(lhs != rhs):
            wit.append({"x": int(i), "y": int(j), "g_of_F": int(lhs[i, j]),
                        "F_of_g": int(rhs[i, j])})
        return ExactVerdict(definition, not wit, witnesses=wit)
    if definition == "injectivity":
        n = fp.size
        for i in range(n):
            for j in range(i + 1, n):
                if int(g[i]) == int(g[j]):
                    wit.append({"p": i, "q": j, "image": int(g[i])})
        return ExactVerdict(definition, not wit, witnesses=wit)
    if definition == "coincidence":
        pairs = brute_force_coincidence_points(fp)
        return ExactVerdict(definition, bool(pairs),
                            witnesses=[{"x": i, "y": j} for i, j in pairs])
    if definition in ("banach-coupling", "banach-g-coupling",
                      "coupled-banach-contraction"):
        pattern = ("unrestricted" if definition == "coupled-banach-contraction"
                   else "subset")
        min_k, finite_k, wit = min_contraction_constant(
            fp, pattern=pattern, g_relative=definition == "banach-g-coupling")
        return ExactVerdict(definition, finite_k and min_k < 1.0,
                            min_k=min_k, finite_k=finite_k, witnesses=wit)
    raise ValidationError(f"unknown definition {definition!r}; choose from "
                          f"{ORACLE_DEFINITIONS}")


def exhaustive_report(fp: FiniteProblem) -> dict:
    """Run every definition and key the verdicts by definition name."""
    return {name: exhaustive_definition_check(fp, name)
            for name in ORACLE_DEFINITIONS}


def to_instance(fp: FiniteProblem, declare_k: bool = True) -> ProblemInstance:
    """Wrap a finite problem as a solvable instance over its index space.

    Preimage oracles return the smallest-index representative inside
    each subset.  Injectivity is computed exactly from the table, and
    the exact contraction factor is declared when one below 1 exists.
    """
    space = finite_space(fp.labels, fp.dist)
    pair = index_pair(fp.a_indices, fp.b_indices)
    f, g = fp.f_table, fp.g_table
    pre_a: dict = {}
    pre_b: dict = {}
    for i in fp.a_indices:
        pre_a.setdefault(int(g[i]), i)
    for j in fp.b_indices:
        pre_b.setdefault(int(g[j]), j)
    F = CoupledMap(lambda i, j: int(f[int(i), int(j)]))
    gmap = SelfMap(
        fn=lambda i: int(g[int(i)]),
        preimage_a=lambda z: pre_a.get(int(z)),
        preimage_b=lambda z: pre_b.get(int(z)),
        injective_declared=len({int(v) for v in g}) == len(g),
    )
    k = None
    if declare_k:
        min_k, finite_k, _ = min_contraction_constant(fp)
        if finite_k and 0.0 < min_k < 1.0:
            k = min_k
    return ProblemInstance(space=space, pair=pair, F=F, g=gmap, k=k,
                           name=fp.name)


def random_finite_problem(seed: int, max_points: int = 12,
                          name: Optional[str] = None) -> FiniteProblem:
    """Random integers-on-a-line instance for oracle cross-validation.

    Points get distinct integer coordinates so every distance is exact
    in floats.  Subsets are biased to overlap, and the coupled map is
    usually funneled toward a hub inside the admissible image pool,
    which keeps a useful fraction of draws in the contractive
    g-coupling regime without forcing every draw there.
    """
    rng = np.random.default_rng(seed)
    n = int(rng.integers(4, max_points + 1))
    coords = np.sort(rng.choice(np.arange(4 * n), size=n, replace=False))
    dist = np.abs(coords[:, None] - coords[None, :]).astype(float)
    labels = [str(int(c)) for c in coords]

    def pick_subset():
        mask = rng.random(n) < 0.6
        if not mask.any():
            mask[int(rng.integers(0, n))] = True
        return tuple(int(i) for i in np.flatnonzero(mask))

    def pick(pool):
        return pool[int(rng.integers(0, len(pool)))]

    a_idx, b_idx = pick_subset(), pick_subset()
    aset, bset = set(a_idx), set(b_idx)
    both = sorted(aset & bset)

    style = rng.random()
    if style < 0.25:
        g_table = np.arange(n)
    elif style < 0.5:
        g_table = rng.integers(0, n, size=n)
    else:
        # mostly self-cyclic, funneled toward per-side hubs
        g_table = np.empty(n, dtype=int)
        hub_a, hub_b = pick(a_idx), pick(b_idx)
        hub_both = pick(both) if both else None
        for i in range(n):
            if i in aset and i in bset and both:
                pool, hub = both, hub_both
            elif i in aset:
                pool, hub = a_idx, hub_a
            elif i in bset:
                pool, hub = b_idx, hub_b
            else:
                pool, hub = tuple(range(n)), None
            if hub is not None and rng.random() < 0.5:
                g_table[i] = hub
            else:
                g_table[i] = pick(pool)

    g_of_a = {int(g_table[i]) for i in a_idx}
    g_of_b = {int(g_table[j]) for j in b_idx}
    pool_ab = sorted(g_of_a & bset)
    pool_ba = sorted(g_of_b & aset)
    f_table = rng.integers(0, n, size=(n, n))
    if rng.random() >= 0.2 and (pool_ab or pool_ba):
        common = sorted(set(pool_ab) & set(pool_ba))
        hub = pick(common or pool_ab or pool_ba)
        for i in range(n):
            for j in range(n):
                pools = []
                if i in aset and j in bset:
                    pools.append(pool_ab)
                if i in bset and j in aset:
                    pools.append(pool_ba)
                if not pools:
                    continue  # unconstrained cell keeps its random value
                if len(pools) == 2:
                    allowed = sorted(set(pools[0]) & set(pools[1]))
                    if not allowed:
                        allowed = pools[0] or pools[1]
                else:
                    allowed = pools[0]
                if not allowed:
                    continue
                if hub in allowed and rng.random() < 0.75:
                    f_table[i, j] = hub
                else:
                    f_table[i, j] = pick(allowed)
    return FiniteProblem(labels, dist, a_idx, b_idx, f_table, g_table,
                         name=name or f"random-{seed}")


def commuting_modular_problem(n_points: int, mult: int = 1, shift: int = 1,
                              offset: int = 0) -> FiniteProblem:
    """A commuting pair on 0..n-1: g shifts, F combines affinely.

    F(i, j) = (mult*i + (1 - mult)*j + offset) mod n and g(i) = (i +
    shift) mod n commute exactly for any mult because F's coefficients
    sum to 1, so shifting both arguments shifts the value.
    """
    if n_points < 2:
        raise ValidationError(f"need at least 2 points, got {n_points}")
    n = int(n_points)
    idx = np.arange(n)
    dist = np.abs(idx[:, None] - idx[None, :]).astype(float)
    g_table = (idx + shift) % n
    f_table = (mult * idx[:, None] + (1 - mult) * idx[None, :] + offset) % n
    every = tuple(range(n))
    return FiniteProblem([str(i) for i in range(n)], dist, every, every,
                         f_table, g_table,
                         name=f"modular-{n}-m{mult}-s{shift}-o{offset}")
