"""Coupled maps, self maps, and sampled checkers for the coupling definitions.

Every checker draws its samples from an explicit seed (or takes an
explicit ``samples`` list, in which case the seed is unused and recorded
as None) and returns a CheckReport.  A "holds-on-samples" verdict is
evidence, never a proof; "violated" comes with reproducible witnesses.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional, Sequence

import numpy as np

from .metric import (
    CoupledFPError,
    MetricSpace,
    Point,
    SubsetPair,
    ValidationError,
    draw,
    membership,
    union_sampler,
)

HOLDS = "holds-on-samples"
VIOLATED = "violated"
INAPPLICABLE = "inapplicable"

# Tolerance used by the Banach-type inequality checkers: the inequality
# may be an equality on extremal samples, so a small additive slack
# absorbs floating-point rounding of the two sides.
INEQ_TOL = 1e-12


class UnsupportedCheckError(CoupledFPError):
    """The check needs a capability the inputs do not provide."""


@dataclass(frozen=True)
class CoupledMap:
    """A two-argument map on the space."""

    fn: Callable[[Point, Point], Point]

    def __call__(self, x: Point, y: Point) -> Point:
        return self.fn(x, y)


@dataclass(frozen=True)
class SelfMap:
    """A one-argument map, optionally with right inverses into A and B.

    ``preimage_a(z)`` must return some w in A with g(w) = z, or None when
    no such point exists (for non-injective g any representative is
    acceptable).  ``injective_declared`` is a user assertion consumed by
    the strong-point extraction; it is checkable only by sampling.
    """

    fn: Callable[[Point], Point]
    preimage_a: Optional[Callable[[Point], Optional[Point]]] = None
    preimage_b: Optional[Callable[[Point], Optional[Point]]] = None
    injective_declared: bool = False

    def __call__(self, x: Point) -> Point:
        return self.fn(x)

    @property
    def has_preimages(self) -> bool:
        return self.preimage_a is not None and self.preimage_b is not None

    @staticmethod
    def identity() -> "SelfMap":
        ident = lambda x: x
        return SelfMap(ident, preimage_a=ident, preimage_b=ident,
                       injective_declared=True)


@dataclass
class CheckReport:
    """Outcome of one sampled check.

    verdict is "violated" exactly when ``witnesses`` is non-empty;
    "inapplicable" means a precondition failed (reasons in ``notes``).
    """

    name: str
    verdict: str
    witnesses: list = field(default_factory=list)
    samples_used: int = 0
    seed: Optional[int] = None
    notes: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.verdict != VIOLATED


def _report(name, witnesses, samples_used, seed, notes=None, applicable=True):
    if not applicable:
        return CheckReport(name, INAPPLICABLE, [], samples_used, seed,
                           list(notes or []))
    verdict = VIOLATED if witnesses else HOLDS
    return CheckReport(name, verdict, list(witnesses), samples_used, seed,
                       list(notes or []))


def _map_samples(fn, samples, threads=1):
    """Apply fn over samples, optionally on a thread pool.

    ``ThreadPoolExecutor.map`` preserves input order, so witness lists
    come out identical for any thread count.
    """
    if threads and threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as ex:
            return list(ex.map(fn, samples))
    return [fn(s) for s in samples]


def _draw_pairs(pair: SubsetPair, n: int, rng) -> list:
    return [(draw(pair, "A", rng), draw(pair, "B", rng)) for _ in range(n)]


def _draw_quads(pair: SubsetPair, n: int, rng) -> list:
    # Quantifier pattern of the subset-restricted contraction: x, v from A
    # and y, u from B.  Drawn one quadruple at a time so that a longer run
    # extends a shorter run with the same seed sample-for-sample.
    return [(draw(pair, "A", rng), draw(pair, "B", rng),
             draw(pair, "B", rng), draw(pair, "A", rng)) for _ in range(n)]


def _draw_free(smp, n: int, rng, width: int) -> list:
    return [tuple(smp(rng) for _ in range(width)) for _ in range(n)]


def _resolve(samples, n, seed, drawfn):
    if samples is not None:
        return list(samples), None
    rng = np.random.default_rng(seed)
    return drawfn(n, rng), seed


def is_cyclic(f: SelfMap, pair: SubsetPair, n: int = 1000, seed: int = 0,
              samples_a=None, samples_b=None, threads: int = 1) -> CheckReport:
    """Sampled check that f maps A into B and B into A."""
    if samples_a is None or samples_b is None:
        rng = np.random.default_rng(seed)
        samples_a = [draw(pair, "A", rng) for _ in range(n)]
        samples_b = [draw(pair, "B", rng) for _ in range(n)]
        used_seed = seed
    else:
        samples_a, samples_b = list(samples_a), list(samples_b)
        used_seed = None

    def check(item):
        idx, side, p = item
        target = "B" if side == "A" else "A"
        img = f(p)
        if not membership(pair, target, img):
            return {"index": idx, "side": side, "point": p, "image": img,
                    "reason": f"f({side}) not inside {target}"}
        return None

    tagged = [(i, "A", p) for i, p in enumerate(samples_a)]
    tagged += [(i, "B", p) for i, p in enumerate(samples_b)]
    wit = [w for w in _map_samples(check, tagged, threads) if w is not None]
    return _report("cyclic", wit, len(tagged), used_seed)


def is_self_cyclic(g: SelfMap, pair: SubsetPair, n: int = 1000, seed: int = 0,
                   samples_a=None, samples_b=None, threads: int = 1) -> CheckReport:
    """Sampled check that g maps A into A and B into B."""
    if samples_a is None or samples_b is None:
        rng = np.random.default_rng(seed)
        samples_a = [draw(pair, "A", rng) for _ in range(n)]
        samples_b = [draw(pair, "B", rng) for _ in range(n)]
        used_seed = seed
    else:
        samples_a, samples_b = list(samples_a), list(samples_b)
        used_seed = None

    def check(item):
        idx, side, p = item
        img = g(p)
        if not membership(pair, side, img):
            return {"index": idx, "side": side, "point": p, "image": img,
                    "reason": f"g({side}) not inside {side}"}
        return None

    tagged = [(i, "A", p) for i, p in enumerate(samples_a)]
    tagged += [(i, "B", p) for i, p in enumerate(samples_b)]
    wit = [w for w in _map_samples(check, tagged, threads) if w is not None]
    return _report("self-cyclic", wit, len(tagged), used_seed)


def is_coupling(F: CoupledMap, pair: SubsetPair, n: int = 1000, seed: int = 0,
                samples=None, threads: int = 1) -> CheckReport:
    """Sampled check that F(A,B) lies in B and F(B,A) lies in A."""
    samples, used_seed = _resolve(samples, n, seed,
                                  lambda m, rng: _draw_pairs(pair, m, rng))

    def check(item):
        idx, (x, y) = item
        fxy, fyx = F(x, y), F(y, x)
        reasons = []
        if not membership(pair, "B", fxy):
            reasons.append("F(x,y) not in B")
        if not membership(pair, "A", fyx):
            reasons.append("F(y,x) not in A")
        if reasons:
            return {"index": idx, "x": x, "y": y, "Fxy": fxy, "Fyx": fyx,
                    "reason": "; ".join(reasons)}
        return None

    wit = [w for w in _map_samples(check, list(enumerate(samples)), threads)
           if w is not None]
    return _report("coupling", wit, len(samples), used_seed)


def in_image(g: SelfMap, pair: SubsetPair, side: str, z: Point,
             space: MetricSpace) -> bool:
    """Positive certificate that z lies in g(A) (side "A") or g(B).

    Uses the preimage oracle: w = preimage(z) must land in the subset and
    reproduce z under g within the space equality tolerance.
    """
    pre = g.preimage_a if side.upper() == "A" else g.preimage_b
    if pre is None:
        raise UnsupportedCheckError(
            f"image membership in g({side}) needs a preimage oracle")
    w = pre(z)
    if w is None:
        return False
    if not membership(pair, side, w):
        return False
    return space.distance(g(w), z) <= space.eq_tol


def is_g_coupling(F: CoupledMap, g: SelfMap, pair: SubsetPair,
                  space: MetricSpace, n: int = 1000, seed: int = 0,
                  samples=None, threads: int = 1) -> CheckReport:
    """Sampled check that F(A,B) lies in g(A) inter B and F(B,A) in g(B) inter A."""
    if not g.has_preimages:
        raise UnsupportedCheckError("is_g_coupling needs preimage oracles on g")
    samples, used_seed = _resolve(samples, n, seed,
                                  lambda m, rng: _draw_pairs(pair, m, rng))

    def check(item):
        idx, (x, y) = item
        fxy, fyx = F(x, y), F(y, x)
        reasons = []
        if not in_image(g, pair, "A", fxy, space):
            reasons.append("F(x,y) not certified in g(A)")
        if not membership(pair, "B", fxy):
            reasons.append("F(x,y) not in B")
        if not in_image(g, pair, "B", fyx, space):
            reasons.append("F(y,x) not certified in g(B)")
        if not membership(pair, "A", fyx):
            reasons.append("F(y,x) not in A")
        if reasons:
            return {"index": idx, "x": x, "y": y, "Fxy": fxy, "Fyx": fyx,
                    "reason": "; ".join(reasons)}
        return None

    wit = [w for w in _map_samples(check, list(enumerate(samples)), threads)
           if w is not None]
    return _report("g-coupling", wit, len(samples), used_seed)


def estimate_contraction_constant(F: CoupledMap, g: SelfMap, pair: SubsetPair,
                                  space: MetricSpace, n: int = 1000,
                                  seed: int = 0, pattern: str = "subset",
                                  samples=None, zero_tol: Optional[float] = None,
                                  threads: int = 1):
    """Estimate the smallest admissible contraction factor from samples.

    Each quadruple (x, y, u, v) contributes the ratio
    ``2 d(F(x,y), F(u,v)) / (d(gx, gu) + d(gy, gv))`` and the estimate is
    the running maximum, so it can only grow as more samples are added.

    Returns ``(k_hat, violation)``.  ``violation`` is None, or a record
    flagging either a zero-denominator quadruple with positive numerator
    (no finite factor exists) or an estimate >= 1.  With ``pattern =
    "subset"`` quadruples follow the x, v in A / y, u in B pattern; with
    ``"unrestricted"`` all four points come from the universe sampler.
    """
    if pattern not in ("subset", "unrestricted"):
        raise ValidationError(f"unknown sampling pattern {pattern!r}")
    if pattern == "subset":
        drawfn = lambda m, rng: _draw_quads(pair, m, rng)
    else:
        smp = space.sampler or union_sampler(pair)
        drawfn = lambda m, rng: _draw_free(smp, m, rng, 4)
    samples, used_seed = _resolve(samples, n, seed, drawfn)
    zt = space.eq_tol if zero_tol is None else zero_tol

    def ratio(item):
        idx, (x, y, u, v) = item
        num = space.distance(F(x, y), F(u, v))
        den = space.distance(g(x), g(u)) + space.distance(g(y), g(v))
        if den <= zt:
            if num <= space.eq_tol:
                return None  # degenerate quadruple, carries no information
            return {"index": idx, "kind": "no-finite-k",
                    "quadruple": (x, y, u, v), "numerator": num,
                    "denominator": den}
        return (idx, 2.0 * num / den, (x, y, u, v))

    results = _map_samples(ratio, list(enumerate(samples)), threads)
    violation = None
    k_hat = 0.0
    arg = None
    for r in results:
        if r is None:
            continue
        if isinstance(r, dict):
            if violation is None:
                violation = r
            continue
        _, val, quad = r
        if val > k_hat:
            k_hat, arg = val, quad
    if violation is None and k_hat >= 1.0:
        violation = {"kind": "not-contractive", "k_hat": k_hat, "quadruple": arg}
    return k_hat, violation


def check_banach_coupling(F: CoupledMap, pair: SubsetPair, space: MetricSpace,
                          k: float, n: int = 1000, seed: int = 0,
                          samples=None, tol: float = INEQ_TOL,
                          threads: int = 1) -> CheckReport:
    """Sampled check of the plain coupling contraction with factor k.

    Inequality: d(F(x,y), F(u,v)) <= k/2 * (d(x,u) + d(y,v)) over the
    subset quantifier pattern (x, v in A; y, u in B).
    """
    if not 0.0 < k < 1.0:
        raise ValidationError(f"k outside (0,1): {k!r}")
    samples, used_seed = _resolve(samples, n, seed,
                                  lambda m, rng: _draw_quads(pair, m, rng))

    def check(item):
        idx, (x, y, u, v) = item
        lhs = space.distance(F(x, y), F(u, v))
        rhs = 0.5 * k * (space.distance(x, u) + space.distance(y, v))
        if lhs > rhs + tol:
            return {"index": idx, "quadruple": (x, y, u, v), "lhs": lhs,
                    "rhs": rhs}
        return None

    wit = [w for w in _map_samples(check, list(enumerate(samples)), threads)
           if w is not None]
    return _report("banach-coupling", wit, len(samples), used_seed)


def check_coupled_banach_contraction(F: CoupledMap, space: MetricSpace,
                                     k: float, n: int = 1000, seed: int = 0,
                                     sampler=None, samples=None,
                                     tol: float = INEQ_TOL,
                                     threads: int = 1) -> CheckReport:
    """Sampled check of the unrestricted coupled contraction with factor k.

    Same inequality as check_banach_coupling but quantified over the
    whole space, so it needs a universe sampler.
    """
    if not 0.0 < k < 1.0:
        raise ValidationError(f"k outside (0,1): {k!r}")
    smp = sampler or space.sampler
    if samples is None and smp is None:
        raise ValidationError("check_coupled_banach_contraction needs a "
                              "universe sampler")
    samples, used_seed = _resolve(samples, n, seed,
                                  lambda m, rng: _draw_free(smp, m, rng, 4))

    def check(item):
        idx, (x, y, u, v) = item
        lhs = space.distance(F(x, y), F(u, v))
        rhs = 0.5 * k * (space.distance(x, u) + space.distance(y, v))
        if lhs > rhs + tol:
            return {"index": idx, "quadruple": (x, y, u, v), "lhs": lhs,
                    "rhs": rhs}
        return None

    wit = [w for w in _map_samples(check, list(enumerate(samples)), threads)
           if w is not None]
    return _report("coupled-banach-contraction", wit, len(samples), used_seed)


def check_commutativity(F: CoupledMap, g: SelfMap, space: MetricSpace,
                        n: int = 1000, seed: int = 0, sampler=None,
                        pair: Optional[SubsetPair] = None, samples=None,
                        tol: Optional[float] = None,
                        threads: int = 1) -> CheckReport:
    """Sampled check that g(F(x,y)) = F(g(x), g(y))."""
    smp = sampler or space.sampler or (union_sampler(pair) if pair else None)
    if samples is None and smp is None:
        raise ValidationError("check_commutativity needs a point sampler")
    samples, used_seed = _resolve(samples, n, seed,
                                  lambda m, rng: _draw_free(smp, m, rng, 2))
    eps = space.eq_tol if tol is None else tol

    def check(item):
        idx, (x, y) = item
        lhs = g(F(x, y))
        rhs = F(g(x), g(y))
        gap = space.distance(lhs, rhs)
        if gap > eps:
            return {"index": idx, "x": x, "y": y, "g_of_F": lhs, "F_of_g": rhs,
                    "gap": gap}
        return None

    wit = [w for w in _map_samples(check, list(enumerate(samples)), threads)
           if w is not None]
    return _report("commutativity", wit, len(samples), used_seed)


def check_injectivity(g: SelfMap, space: MetricSpace, n: int = 1000,
                      seed: int = 0, sampler=None,
                      pair: Optional[SubsetPair] = None, samples=None,
                      tol: Optional[float] = None,
                      threads: int = 1) -> CheckReport:
    """Sampled search for distinct points with equal images under g."""
    smp = sampler or space.sampler or (union_sampler(pair) if pair else None)
    if samples is None and smp is None:
        raise ValidationError("check_injectivity needs a point sampler")
    samples, used_seed = _resolve(samples, n, seed,
                                  lambda m, rng: _draw_free(smp, m, rng, 2))
    eps = space.eq_tol if tol is None else tol

    def check(item):
        idx, (p, q) = item
        if space.distance(p, q) > eps and space.distance(g(p), g(q)) <= eps:
            return {"index": idx, "p": p, "q": q, "gp": g(p), "gq": g(q)}
        return None

    wit = [w for w in _map_samples(check, list(enumerate(samples)), threads)
           if w is not None]
    return _report("injectivity", wit, len(samples), used_seed)


def is_coupled_coincidence_point(F: CoupledMap, g: SelfMap, space: MetricSpace,
                                 x: Point, y: Point, tol: Optional[float] = None,
                                 strong: bool = False):
    """Decide whether (x, y) satisfies F(x,y) = g(x) and F(y,x) = g(y).

    Returns ``(flag, (residual_x, residual_y))``.  With ``strong=True``
    the pair must additionally satisfy d(x, y) <= tol.
    """
    eps = space.eq_tol if tol is None else tol
    rx = space.distance(F(x, y), g(x))
    ry = space.distance(F(y, x), g(y))
    ok = rx <= eps and ry <= eps
    if strong:
        ok = ok and space.distance(x, y) <= eps
    return ok, (rx, ry)


def test_g_coupling_implies_coupling(F: CoupledMap, g: SelfMap,
                                     pair: SubsetPair, space: MetricSpace,
                                     n: int = 1000, seed: int = 0,
                                     samples=None, threads: int = 1) -> CheckReport:
    """Pointwise implication check: the g-image condition entails the plain one.

    For each sampled (x, y) where F satisfies the g-coupling membership
    conditions, the plain coupling conditions must hold at the same
    sample.  A witness would expose an internal contradiction between
    the two membership checkers.
    """
    if not g.has_preimages:
        raise UnsupportedCheckError("implication check needs preimage oracles")
    samples, used_seed = _resolve(samples, n, seed,
                                  lambda m, rng: _draw_pairs(pair, m, rng))

    def check(item):
        idx, (x, y) = item
        fxy, fyx = F(x, y), F(y, x)
        g_side = (in_image(g, pair, "A", fxy, space)
                  and membership(pair, "B", fxy)
                  and in_image(g, pair, "B", fyx, space)
                  and membership(pair, "A", fyx))
        if not g_side:
            return None  # implication is vacuous at this sample
        if membership(pair, "B", fxy) and membership(pair, "A", fyx):
            return None
        return {"index": idx, "x": x, "y": y, "Fxy": fxy, "Fyx": fyx,
                "reason": "g-coupling held but plain coupling failed"}

    wit = [w for w in _map_samples(check, list(enumerate(samples)), threads)
           if w is not None]
    return _report("g-coupling-implies-coupling", wit, len(samples), used_seed)
