"""Metric spaces, paired subsets, and sampled validation of the metric axioms.

Points are plain floats on the real line, 1-d numpy arrays in vector
spaces, and integer indices into the distance matrix in finite spaces.
All randomized routines take an explicit seed and are pure functions of
their inputs.
"""

from __future__ import annotations

import numbers
from dataclasses import dataclass
from typing import Callable, Optional, Sequence, Union

import numpy as np

Point = Union[float, int, np.ndarray]

# Equality tolerance for the continuous built-in spaces.  Finite spaces
# compare distances exactly (tolerance 0).
DEFAULT_EQ_TOL = 1e-9

# Closed-set membership slack for interval and box subsets, so that
# boundary points produced by round-tripped arithmetic still count.
MEMBER_EPS = 1e-12

# Additive slack for sampled triangle-inequality checks on real spaces.
TRIANGLE_TOL = 1e-12


class CoupledFPError(Exception):
    """Base class for toolkit errors."""


class ValidationError(CoupledFPError, ValueError):
    """Invalid input: bad matrix, bad config value, argument out of range."""


@dataclass
class MetricSpace:
    """A point universe with a distance function and an equality tolerance.

    ``kind`` is one of ``"real-line"``, ``"real-vector"``, ``"finite"``.
    ``sampler``, when set, draws a point of the whole universe from a
    numpy Generator; subset-restricted sampling lives on SubsetPair.
    """

    kind: str
    distance_fn: Callable[[Point, Point], float]
    eq_tol: float = DEFAULT_EQ_TOL
    dim: Optional[int] = None
    labels: Optional[tuple] = None
    matrix: Optional[np.ndarray] = None
    sampler: Optional[Callable[[np.random.Generator], Point]] = None

    @property
    def is_finite(self) -> bool:
        return self.kind == "finite"

    @property
    def size(self) -> int:
        if self.labels is None:
            raise ValidationError("size is only defined for finite spaces")
        return len(self.labels)

    def check_point(self, p: Point) -> None:
        if self.kind == "real-line":
            if not isinstance(p, numbers.Real) or isinstance(p, bool):
                raise ValidationError(f"real-line point must be a number, got {p!r}")
        elif self.kind == "real-vector":
            if not isinstance(p, np.ndarray) or p.shape != (self.dim,):
                raise ValidationError(
                    f"vector point must be a 1-d array of length {self.dim}, got {p!r}"
                )
        elif self.kind == "finite":
            if not isinstance(p, (int, np.integer)):
                raise ValidationError(f"finite-space point must be an index, got {p!r}")
            if not 0 <= int(p) < self.size:
                raise ValidationError(
                    f"point index {int(p)} out of range for {self.size} points"
                )

    def distance(self, p: Point, q: Point) -> float:
        self.check_point(p)
        self.check_point(q)
        return float(self.distance_fn(p, q))

    def equal(self, p: Point, q: Point) -> bool:
        return self.distance(p, q) <= self.eq_tol


def real_line(eq_tol: float = DEFAULT_EQ_TOL,
              sampler: Optional[Callable] = None) -> MetricSpace:
    """The real line with the absolute-difference metric."""
    return MetricSpace("real-line", lambda p, q: abs(p - q), eq_tol=eq_tol,
                       dim=1, sampler=sampler)


def real_vector(dim: int, eq_tol: float = DEFAULT_EQ_TOL,
                sampler: Optional[Callable] = None) -> MetricSpace:
    """R^dim with the 1-norm metric."""
    if dim < 1:
        raise ValidationError(f"dimension must be >= 1, got {dim}")
    return MetricSpace("real-vector", lambda p, q: float(np.abs(p - q).sum()),
                       eq_tol=eq_tol, dim=dim, sampler=sampler)


def finite_matrix_violations(matrix: np.ndarray) -> list:
    """Exact axiom check of a finite distance matrix.

    Returns a list of violation records (empty when the matrix is a
    genuine metric).  Symmetry and triangle checks use tolerance 0: the
    matrix is the ground truth, not a sampled formula.
    """
    m = np.asarray(matrix, dtype=float)
    out = []
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        return [{"axiom": "shape", "detail": f"matrix must be square, got {m.shape}"}]
    n = m.shape[0]
    for i in range(n):
        if m[i, i] != 0.0:
            out.append({"axiom": "identity", "points": (i, i),
                        "detail": f"d({i},{i}) = {m[i, i]!r} != 0"})
    neg = np.argwhere(m < 0.0)
    for i, j in neg[:5]:
        out.append({"axiom": "non-negativity", "points": (int(i), int(j)),
                    "detail": f"d({i},{j}) = {m[i, j]!r} < 0"})
    asym = np.argwhere(m != m.T)
    for i, j in asym[:5]:
        if i < j:
            out.append({"axiom": "symmetry", "points": (int(i), int(j)),
                        "detail": f"d({i},{j}) = {m[i, j]!r} != d({j},{i}) = {m[j, i]!r}"})
    zero_off = np.argwhere((m == 0.0) & ~np.eye(n, dtype=bool))
    for i, j in zero_off[:5]:
        if i < j:
            out.append({"axiom": "identity", "points": (int(i), int(j)),
                        "detail": f"d({i},{j}) = 0 for distinct points"})
    # d(i,k) <= d(i,j) + d(j,k) for every triple
    lhs = m[:, None, :]
    rhs = m[:, :, None] + m[None, :, :]
    bad = np.argwhere(lhs > rhs)
    for i, j, k in bad[:5]:
        out.append({"axiom": "triangle", "points": (int(i), int(j), int(k)),
                    "detail": f"d({i},{k}) = {m[i, k]!r} > "
                              f"d({i},{j}) + d({j},{k}) = {m[i, j] + m[j, k]!r}"})
    return out


def finite_space(labels: Sequence[str], matrix, check: bool = True) -> MetricSpace:
    """A finite metric space over integer indices with a full distance matrix."""
    m = np.asarray(matrix, dtype=float)
    labels = tuple(str(s) for s in labels)
    if m.shape != (len(labels), len(labels)):
        raise ValidationError(
            f"distance matrix shape {m.shape} does not match {len(labels)} labels")
    if check:
        bad = finite_matrix_violations(m)
        if bad:
            msgs = "; ".join(v["detail"] for v in bad[:3])
            raise ValidationError(f"distance matrix is not a metric: {msgs}")
    n = len(labels)
    return MetricSpace(
        "finite", lambda p, q: m[int(p), int(q)], eq_tol=0.0,
        labels=labels, matrix=m,
        sampler=lambda rng: int(rng.integers(0, n)),
    )


def check_metric_axioms(space: MetricSpace, sample_count: int = 1000, seed: int = 0,
                        sampler: Optional[Callable] = None,
                        sym_tol: float = 0.0,
                        tri_tol: float = TRIANGLE_TOL) -> list:
    """Sampled check of non-negativity, identity, symmetry and triangle.

    Finite spaces are checked exhaustively from their matrix and
    ``sample_count`` is ignored.  Returns the list of violations found
    (empty means "no violation found on these samples", not a proof).
    """
    if space.is_finite:
        return finite_matrix_violations(space.matrix)
    smp = sampler or space.sampler
    if smp is None:
        raise ValidationError("check_metric_axioms needs a point sampler for "
                              "non-finite spaces")
    rng = np.random.default_rng(seed)
    out = []
    for idx in range(sample_count):
        p, q, r = smp(rng), smp(rng), smp(rng)
        dpq = space.distance(p, q)
        if dpq < 0.0:
            out.append({"axiom": "non-negativity", "index": idx, "points": (p, q),
                        "detail": f"d = {dpq!r} < 0"})
        dpp = space.distance(p, p)
        if dpp != 0.0:
            out.append({"axiom": "identity", "index": idx, "points": (p,),
                        "detail": f"d(p,p) = {dpp!r} != 0"})
        dqp = space.distance(q, p)
        if abs(dpq - dqp) > sym_tol:
            out.append({"axiom": "symmetry", "index": idx, "points": (p, q),
                        "detail": f"d(p,q) = {dpq!r} != d(q,p) = {dqp!r}"})
        dpr = space.distance(p, r)
        dqr = space.distance(q, r)
        if dpr > dpq + dqr + tri_tol:
            out.append({"axiom": "triangle", "index": idx, "points": (p, q, r),
                        "detail": f"d(p,r) = {dpr!r} > {dpq + dqr!r}"})
    return out


@dataclass
class SubsetPair:
    """The two subsets A, B: membership predicates plus seeded samplers.

    ``closedness_declared`` is a user assertion that the images of A and
    B under the problem's self-map are closed; it cannot be verified by
    sampling and is echoed into solver certificates.
    """

    contains_a: Callable[[Point], bool]
    contains_b: Callable[[Point], bool]
    sample_a: Callable[[np.random.Generator], Point]
    sample_b: Callable[[np.random.Generator], Point]
    closedness_declared: bool = True


def membership(pair: SubsetPair, which: str, p: Point) -> bool:
    """Is p a member of subset "A" or "B"?"""
    w = which.upper()
    if w == "A":
        return bool(pair.contains_a(p))
    if w == "B":
        return bool(pair.contains_b(p))
    raise ValidationError(f'subset name must be "A" or "B", got {which!r}')


def draw(pair: SubsetPair, which: str, rng: np.random.Generator) -> Point:
    """Draw one sample from a subset and assert the sampler contract."""
    p = pair.sample_a(rng) if which.upper() == "A" else pair.sample_b(rng)
    if not membership(pair, which, p):
        raise ValidationError(
            f"sampler for {which} produced a point outside {which}: {p!r}")
    return p


def union_sampler(pair: SubsetPair) -> Callable[[np.random.Generator], Point]:
    """A sampler over A union B, picking the side with one rng bit."""
    def smp(rng: np.random.Generator) -> Point:
        return draw(pair, "A" if int(rng.integers(0, 2)) == 0 else "B", rng)
    return smp


def interval_pair(a: tuple, b: tuple, eps: float = MEMBER_EPS) -> SubsetPair:
    """Closed intervals A = [a0, a1], B = [b0, b1] on the real line."""
    (alo, ahi), (blo, bhi) = (float(a[0]), float(a[1])), (float(b[0]), float(b[1]))
    if alo > ahi or blo > bhi:
        raise ValidationError(f"empty interval: A = {a!r}, B = {b!r}")
    return SubsetPair(
        contains_a=lambda p: alo - eps <= p <= ahi + eps,
        contains_b=lambda p: blo - eps <= p <= bhi + eps,
        sample_a=lambda rng: float(rng.uniform(alo, ahi)),
        sample_b=lambda rng: float(rng.uniform(blo, bhi)),
    )


def box_pair(a_lo, a_hi, b_lo, b_hi, eps: float = MEMBER_EPS) -> SubsetPair:
    """Axis-aligned closed boxes in R^dim."""
    alo, ahi = np.asarray(a_lo, float), np.asarray(a_hi, float)
    blo, bhi = np.asarray(b_lo, float), np.asarray(b_hi, float)
    if alo.shape != ahi.shape or blo.shape != bhi.shape or alo.shape != blo.shape:
        raise ValidationError("box corners must share one shape")
    if np.any(alo > ahi) or np.any(blo > bhi):
        raise ValidationError("empty box: lower corner exceeds upper corner")
    return SubsetPair(
        contains_a=lambda p: bool(np.all(p >= alo - eps) and np.all(p <= ahi + eps)),
        contains_b=lambda p: bool(np.all(p >= blo - eps) and np.all(p <= bhi + eps)),
        sample_a=lambda rng: rng.uniform(alo, ahi),
        sample_b=lambda rng: rng.uniform(blo, bhi),
    )


def index_pair(a_indices: Sequence[int], b_indices: Sequence[int]) -> SubsetPair:
    """Finite subsets given as index collections."""
    a = tuple(int(i) for i in a_indices)
    b = tuple(int(i) for i in b_indices)
    if not a or not b:
        raise ValidationError("A and B must be non-empty")
    aset, bset = set(a), set(b)
    return SubsetPair(
        contains_a=lambda p: int(p) in aset,
        contains_b=lambda p: int(p) in bset,
        sample_a=lambda rng: a[int(rng.integers(0, len(a)))],
        sample_b=lambda rng: b[int(rng.integers(0, len(b)))],
    )
