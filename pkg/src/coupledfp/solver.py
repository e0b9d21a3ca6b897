"""Coupled coincidence iteration with geometric error-bound certificates.

The solver realizes the update g(x_{n+1}) = F(x_n, y_n), g(y_{n+1}) =
F(y_n, x_n) through user-supplied preimage oracles, stops on the
coincidence residual, and can verify three families of geometric decay
bounds on the recorded orbit.
"""

from __future__ import annotations

import csv
import io
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .metric import (
    CoupledFPError,
    MetricSpace,
    Point,
    SubsetPair,
    ValidationError,
    membership,
    union_sampler,
)
from .mappings import (
    CheckReport,
    CoupledMap,
    SelfMap,
    UnsupportedCheckError,
    _draw_quads,
    _map_samples,
    _report,
    estimate_contraction_constant,
)

MEMBERSHIP_POLICIES = ("off", "warn", "strict")

# Sample count used when no contraction factor is declared and the
# solver falls back to the sampled estimator.
ESTIMATE_SAMPLES = 2000

# Default additive slack when checking recorded distances against the
# geometric bounds; several bounds are exact equalities on conforming
# problems and differ from the recomputed side only by rounding.
BOUND_TOL = 1e-9


class PreimageError(CoupledFPError):
    """A preimage oracle returned nothing or broke its contract."""


class MembershipError(CoupledFPError):
    """An orbit point left its subset under the strict membership policy."""


class StrongPointError(CoupledFPError):
    """The solved pair does not collapse to a single representative."""


@dataclass(frozen=True)
class Assumptions:
    """User-declared hypotheses that sampling cannot establish."""

    complete_space: bool = True
    ga_closed: bool = True
    gb_closed: bool = True

    def as_dict(self) -> dict:
        return {"complete_space": self.complete_space,
                "ga_closed": self.ga_closed, "gb_closed": self.gb_closed}


@dataclass
class ProblemInstance:
    """One solvable problem: space, subset pair, coupled map, self map."""

    space: MetricSpace
    pair: SubsetPair
    F: CoupledMap
    g: SelfMap
    k: Optional[float] = None
    k_analytic: Optional[float] = None
    assumptions: Assumptions = Assumptions()
    name: str = "problem"
    default_tol: Optional[float] = None
    default_max_iter: Optional[int] = None

    def __post_init__(self):
        if self.k is not None and not 0.0 < self.k < 1.0:
            raise ValidationError(f"k outside (0,1): {self.k!r}")
        if not self.g.has_preimages:
            raise ValidationError(
                "problem instance needs preimage oracles on the self map")


@dataclass
class SolverConfig:
    residual_tol: float = 1e-10
    max_iter: int = 200
    record_trace: bool = True
    membership_checks: str = "warn"

    def __post_init__(self):
        if not self.residual_tol > 0.0:
            raise ValidationError(f"residual_tol must be positive, got "
                                  f"{self.residual_tol!r}")
        if self.max_iter < 1:
            raise ValidationError(f"max_iter must be >= 1, got {self.max_iter!r}")
        if self.membership_checks not in MEMBERSHIP_POLICIES:
            raise ValidationError(
                f"membership_checks must be one of {MEMBERSHIP_POLICIES}, "
                f"got {self.membership_checks!r}")


@dataclass
class TraceStep:
    n: int
    x: Point
    y: Point
    gx: Point
    gy: Point
    gap: float
    residual_x: float
    residual_y: float
    diagonal_bound: float
    pair_bound: float


@dataclass
class IterationTrace:
    steps: list = field(default_factory=list)
    k_used: Optional[float] = None
    membership_notes: list = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.steps)


@dataclass
class StrongPoint:
    point: Point
    residual: float
    gap: float


@dataclass
class SolveResult:
    a: Point
    b: Point
    u: Point
    v: Point
    residual_x: float
    residual_y: float
    iterations_used: int
    converged: bool
    message: str
    k_used: Optional[float]
    k_source: str
    k_violation: Optional[dict] = None
    strong: Optional[StrongPoint] = None
    symmetric_gap: float = float("nan")
    pair_gap: float = float("nan")
    assumptions: Assumptions = Assumptions()
    config: SolverConfig = None
    trace: Optional[IterationTrace] = None
    bound_report: Optional[CheckReport] = None
    notes: list = field(default_factory=list)


def residual_pair(problem: ProblemInstance, x: Point, y: Point):
    """The two coincidence residuals d(F(x,y), g(x)) and d(F(y,x), g(y))."""
    rx = problem.space.distance(problem.F(x, y), problem.g(x))
    ry = problem.space.distance(problem.F(y, x), problem.g(y))
    return rx, ry


def _membership_step(problem, p, side, label, policy, notes):
    if policy == "off":
        return
    if membership(problem.pair, side, p):
        return
    msg = f"{label} = {p!r} outside {side}"
    if policy == "strict":
        raise MembershipError(msg)
    notes.append(msg)


def iterate_once(problem: ProblemInstance, x: Point, y: Point,
                 policy: str = "warn", notes: Optional[list] = None):
    """One update step: pull both F values back through the self map.

    Each preimage is verified to reproduce its target under g within the
    space equality tolerance; a silent failure there would corrupt every
    quantity derived from the orbit.
    """
    if notes is None:
        notes = []
    space, g = problem.space, problem.g
    z1 = problem.F(x, y)
    z2 = problem.F(y, x)
    x1 = g.preimage_a(z1)
    if x1 is None:
        raise PreimageError(f"no preimage in A for F(x,y) = {z1!r}")
    y1 = g.preimage_b(z2)
    if y1 is None:
        raise PreimageError(f"no preimage in B for F(y,x) = {z2!r}")
    err_a = space.distance(g(x1), z1)
    if err_a > space.eq_tol:
        raise PreimageError(
            f"preimage_a broke its contract: d(g(w), z) = {err_a!r}")
    err_b = space.distance(g(y1), z2)
    if err_b > space.eq_tol:
        raise PreimageError(
            f"preimage_b broke its contract: d(g(w), z) = {err_b!r}")
    _membership_step(problem, x1, "A", "x_next", policy, notes)
    _membership_step(problem, y1, "B", "y_next", policy, notes)
    return x1, y1


def a_priori_iterations(k: float, initial_gap: float, tol: float) -> int:
    """Smallest n with k^n * initial_gap <= tol (0 when already below)."""
    if not 0.0 < k < 1.0:
        raise ValidationError(f"k outside (0,1): {k!r}")
    if initial_gap < 0.0 or not tol > 0.0:
        raise ValidationError("initial_gap must be >= 0 and tol > 0")
    if initial_gap <= tol:
        return 0
    n = max(0, math.ceil(math.log(tol / initial_gap) / math.log(k)) - 2)
    while k ** n * initial_gap > tol:
        n += 1
    while n > 0 and k ** (n - 1) * initial_gap <= tol:
        n -= 1
    return n


def _resolve_k(problem: ProblemInstance, seed: int):
    if problem.k is not None:
        return problem.k, "declared", None
    k_hat, violation = estimate_contraction_constant(
        problem.F, problem.g, problem.pair, problem.space,
        n=ESTIMATE_SAMPLES, seed=seed)
    return k_hat, "estimated", violation


def solve_coupled_coincidence(problem: ProblemInstance, x0: Point, y0: Point,
                              config: Optional[SolverConfig] = None,
                              seed: int = 0) -> SolveResult:
    """Iterate the coupled update until the coincidence residual is small.

    Success requires max(residual_x, residual_y) <= residual_tol.  Once
    the criterion fires the solver takes one extra refinement step (its
    g-values were already computed as the stopping pair's F-values) and
    returns the recorded pair with the smallest residual, which on a
    contracting problem is that refined pair.  On failure the best pair
    seen is reported with converged=False.
    """
    cfg = config or SolverConfig()
    space, g = problem.space, problem.g
    k_used, k_source, k_violation = _resolve_k(problem, seed)
    notes: list = []
    if k_violation is not None:
        notes.append(f"contraction estimate flagged: {k_violation.get('kind')}")

    policy = cfg.membership_checks
    _membership_step(problem, x0, "A", "x0", policy, notes)
    _membership_step(problem, y0, "B", "y0", policy, notes)

    trace = IterationTrace(k_used=k_used) if cfg.record_trace else None
    gx0, gy0 = g(x0), g(y0)
    gap0 = space.distance(gx0, gy0)
    cross0: Optional[float] = None  # d(gx0, gy1) + d(gy0, gx1), known after step 1

    def record(n, x, y, gx, gy, rx, ry):
        if trace is None:
            return
        diag = k_used ** n * gap0 if k_used is not None else float("nan")
        pairb = (0.5 * k_used ** n * cross0
                 if (k_used is not None and cross0 is not None) else float("nan"))
        trace.steps.append(TraceStep(n, x, y, gx, gy, space.distance(gx, gy),
                                     rx, ry, diag, pairb))

    rx, ry = residual_pair(problem, x0, y0)
    record(0, x0, y0, gx0, gy0, rx, ry)
    best = (max(rx, ry), x0, y0, rx, ry)

    def assemble(iterations, converged, message):
        _, a, b, brx, bry = best
        u, v = g(a), g(b)
        strong = None
        if g.injective_declared and converged:
            stol = max(cfg.residual_tol, space.eq_tol)
            gap_ab = space.distance(a, b)
            if (gap_ab <= stol and membership(problem.pair, "A", a)
                    and membership(problem.pair, "B", a)):
                strong = StrongPoint(point=a, gap=gap_ab,
                                     residual=space.distance(problem.F(a, a), g(a)))
            else:
                notes.append(f"no strong point: pair gap {gap_ab!r} or "
                             f"membership failed despite injective self map")
        bound_report = None
        if trace is not None:
            trace.membership_notes.extend(notes)
            # k >= 1 certifies nothing; the k_violation field already says so
            if len(trace) >= 2 and k_used is not None and k_used < 1.0:
                bound_report = verify_trace_bounds(trace, k_used, space)
                if not bound_report.ok:
                    notes.append(f"recorded orbit violates the declared decay "
                                 f"bounds at {len(bound_report.witnesses)} steps")
        return SolveResult(
            a=a, b=b, u=u, v=v, residual_x=brx, residual_y=bry,
            iterations_used=iterations, converged=converged, message=message,
            k_used=k_used, k_source=k_source, k_violation=k_violation,
            strong=strong, symmetric_gap=space.distance(problem.F(a, b), problem.F(b, a)),
            pair_gap=space.distance(u, v), assumptions=problem.assumptions,
            config=cfg, trace=trace, bound_report=bound_report, notes=notes)

    if max(rx, ry) <= cfg.residual_tol:
        return assemble(0, True, "start already satisfies the residual criterion")

    x, y = x0, y0
    iterations = 0
    for n in range(1, cfg.max_iter + 1):
        x, y = iterate_once(problem, x, y, policy, notes)
        iterations = n
        gx, gy = g(x), g(y)
        rx, ry = residual_pair(problem, x, y)
        if cross0 is None:
            cross0 = space.distance(gx0, gy) + space.distance(gy0, gx)
            if trace is not None and trace.steps:
                s0 = trace.steps[0]
                s0.pair_bound = (0.5 * cross0 if k_used is not None
                                 else float("nan"))
        record(n, x, y, gx, gy, rx, ry)
        if max(rx, ry) <= best[0]:
            best = (max(rx, ry), x, y, rx, ry)
        if max(rx, ry) <= cfg.residual_tol:
            if n < cfg.max_iter:
                try:
                    x2, y2 = iterate_once(problem, x, y, policy, notes)
                except (PreimageError, MembershipError) as exc:
                    notes.append(f"refinement step skipped: {exc}")
                else:
                    iterations = n + 1
                    gx2, gy2 = g(x2), g(y2)
                    rx2, ry2 = residual_pair(problem, x2, y2)
                    record(n + 1, x2, y2, gx2, gy2, rx2, ry2)
                    if max(rx2, ry2) <= best[0]:
                        best = (max(rx2, ry2), x2, y2, rx2, ry2)
            return assemble(iterations, True,
                            f"converged in {iterations} iterations")
    return assemble(iterations, False,
                    f"no convergence after {cfg.max_iter} iterations; "
                    f"best residual {best[0]!r} (incomplete space or "
                    f"non-closed images would produce exactly this)")


def verify_trace_bounds(trace: IterationTrace, k: float, space: MetricSpace,
                        tol: float = BOUND_TOL) -> CheckReport:
    """Check a recorded orbit against three geometric decay bound families.

    diagonal:  d(gx_n, gy_n)      <= k^n * d(gx_0, gy_0)              (all n)
    cross:     d(gx_n, gy_{n+1})  <= k^n/2 * C   and symmetrically    (n >= 1)
    step:      d(gx_n, gx_{n+1}) + d(gy_n, gy_{n+1})
                                  <= 2 k^n d(gx_0, gy_0) + k^n C      (n >= 1)

    where C = d(gx_0, gy_1) + d(gy_0, gx_1).  Distances are recomputed
    from the recorded g-values; the additive slack absorbs rounding on
    problems where a bound is attained exactly.
    """
    steps = trace.steps
    if len(steps) < 2:
        raise ValidationError("bound verification needs at least 2 trace steps")
    if not 0.0 <= k < 1.0:
        raise ValidationError(f"k outside [0,1): {k!r}")
    d = space.distance
    gap0 = d(steps[0].gx, steps[0].gy)
    cross0 = d(steps[0].gx, steps[1].gy) + d(steps[0].gy, steps[1].gx)
    witnesses = []
    checks = 0
    for s in steps:
        checks += 1
        bound = k ** s.n * gap0
        lhs = d(s.gx, s.gy)
        if lhs > bound + tol:
            witnesses.append({"family": "diagonal", "n": s.n, "lhs": lhs,
                              "bound": bound})
    for i in range(1, len(steps) - 1):
        s, t = steps[i], steps[i + 1]
        scale = k ** s.n
        checks += 3
        lhs = d(s.gx, t.gy)
        bound = 0.5 * scale * cross0
        if lhs > bound + tol:
            witnesses.append({"family": "cross", "n": s.n, "lhs": lhs,
                              "bound": bound})
        lhs = d(s.gy, t.gx)
        if lhs > bound + tol:
            witnesses.append({"family": "cross", "n": s.n, "lhs": lhs,
                              "bound": bound})
        lhs = d(s.gx, t.gx) + d(s.gy, t.gy)
        bound = 2.0 * scale * gap0 + scale * cross0
        if lhs > bound + tol:
            witnesses.append({"family": "step", "n": s.n, "lhs": lhs,
                              "bound": bound})
    return _report("trace-bounds", witnesses, checks, None)


def extract_strong_point(result: SolveResult, problem: ProblemInstance,
                         tol: float = 1e-8) -> StrongPoint:
    """Collapse a solved pair (a, b) to its single representative.

    Requires the self map to be declared injective; with an injective
    self map a conforming solve drives both components to one point.
    """
    if not problem.g.injective_declared:
        raise UnsupportedCheckError(
            "strong-point extraction requires injective_declared on the self map")
    gap = problem.space.distance(result.a, result.b)
    if gap > tol:
        raise StrongPointError(
            f"pair gap d(a,b) = {gap!r} exceeds {tol!r}: the self map may "
            f"not be injective or tolerances are too tight")
    s = result.a
    if not (membership(problem.pair, "A", s) and membership(problem.pair, "B", s)):
        raise StrongPointError(f"representative {s!r} is not in both subsets")
    res = problem.space.distance(problem.F(s, s), problem.g(s))
    return StrongPoint(point=s, residual=res, gap=gap)


def verify_symmetric_point(F: CoupledMap, a: Point, b: Point,
                           space: MetricSpace, tol: Optional[float] = None) -> bool:
    """Does F(a,b) = F(b,a) within tolerance?"""
    eps = space.eq_tol if tol is None else tol
    return space.distance(F(a, b), F(b, a)) <= eps


def uniqueness_probe(problem: ProblemInstance, starts: Sequence,
                     config: Optional[SolverConfig] = None, tol: float = 1e-8,
                     seed: int = 0, threads: int = 1) -> CheckReport:
    """Solve from several starts and compare the strong points pairwise.

    Witnesses are start index pairs whose strong points sit farther than
    ``tol`` apart.  Starts that fail to converge or to yield a strong
    point are reported in the notes and excluded from the comparison.
    """
    cfg = config or SolverConfig()
    notes = []

    def run(item):
        idx, (sx, sy) = item
        try:
            res = solve_coupled_coincidence(problem, sx, sy, cfg, seed=seed)
            if not res.converged:
                return idx, None, f"start {idx}: {res.message}"
            sp = extract_strong_point(res, problem, tol)
            return idx, sp, None
        except CoupledFPError as exc:
            return idx, None, f"start {idx}: {exc}"

    items = list(enumerate(starts))
    if threads and threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as ex:
            outcomes = list(ex.map(run, items))
    else:
        outcomes = [run(it) for it in items]

    points = []
    for idx, sp, err in outcomes:
        if err is not None:
            notes.append(err)
        else:
            points.append((idx, sp))
    witnesses = []
    for i in range(len(points)):
        for j in range(i + 1, len(points)):
            ia, pa = points[i]
            ib, pb = points[j]
            dist = problem.space.distance(pa.point, pb.point)
            if dist > tol:
                witnesses.append({"start_i": ia, "start_j": ib,
                                  "point_i": pa.point, "point_j": pb.point,
                                  "distance": dist})
    return _report("uniqueness-probe", witnesses, len(items), None, notes)


def check_coincidence_pullback(F: CoupledMap, g: SelfMap, x: Point, y: Point,
                               space: MetricSpace,
                               tol: Optional[float] = None) -> CheckReport:
    """If (g(x), g(y)) is a coincidence pair of F, so is (x, y).

    Preconditions (report is inapplicable when any fails): the self map
    is declared injective, F and g commute at the probed points, and
    F(gx, gy) = gx with F(gy, gx) = gy within tolerance.  The conclusion
    checked is F(x, y) = x and F(y, x) = y.
    """
    eps = space.eq_tol if tol is None else tol
    notes = []
    if not g.injective_declared:
        notes.append("self map not declared injective")
    gx, gy = g(x), g(y)
    pre1 = space.distance(F(gx, gy), gx)
    pre2 = space.distance(F(gy, gx), gy)
    if pre1 > eps or pre2 > eps:
        notes.append(f"(g(x), g(y)) is not a coincidence pair: residuals "
                     f"({pre1!r}, {pre2!r})")
    comm1 = space.distance(g(F(x, y)), F(gx, gy))
    comm2 = space.distance(g(F(y, x)), F(gy, gx))
    if comm1 > eps or comm2 > eps:
        notes.append(f"maps do not commute at the probed points: gaps "
                     f"({comm1!r}, {comm2!r})")
    if notes:
        return _report("coincidence-pullback", [], 1, None, notes,
                       applicable=False)
    witnesses = []
    r1 = space.distance(F(x, y), x)
    if r1 > eps:
        witnesses.append({"equation": "F(x,y) = x", "x": x, "y": y,
                          "residual": r1})
    r2 = space.distance(F(y, x), y)
    if r2 > eps:
        witnesses.append({"equation": "F(y,x) = y", "x": x, "y": y,
                          "residual": r2})
    return _report("coincidence-pullback", witnesses, 1, None)


def check_contraction_composition(F: CoupledMap, g: SelfMap, pair: SubsetPair,
                                  space: MetricSpace, alpha: float, k: float,
                                  n: int = 1000, seed: int = 0,
                                  tol: float = 1e-12,
                                  threads: int = 1) -> CheckReport:
    """Composing the g-relative contraction with a contractive self map.

    Preconditions, verified on samples: g is an alpha-contraction
    (d(gx, gy) <= alpha d(x, y)) and F satisfies the g-relative coupling
    contraction with factor k.  The asserted conclusion is the plain
    coupling contraction with factor alpha * k on the same quadruples.
    """
    if not 0.0 < alpha < 1.0 or not 0.0 < k < 1.0:
        raise ValidationError(f"alpha and k must lie in (0,1), got "
                              f"({alpha!r}, {k!r})")
    rng = np.random.default_rng(seed)
    smp = space.sampler or union_sampler(pair)
    pairs = [(smp(rng), smp(rng)) for _ in range(n)]
    quads = _draw_quads(pair, n, rng)
    notes = []
    for idx, (p, q) in enumerate(pairs):
        lhs = space.distance(g(p), g(q))
        rhs = alpha * space.distance(p, q)
        if lhs > rhs + tol:
            notes.append(f"self map is not an alpha-contraction at sample "
                         f"{idx}: d(gp,gq) = {lhs!r} > {rhs!r}")
            break
    for idx, (x, y, u, v) in enumerate(quads):
        lhs = space.distance(F(x, y), F(u, v))
        rhs = 0.5 * k * (space.distance(g(x), g(u)) + space.distance(g(y), g(v)))
        if lhs > rhs + tol:
            notes.append(f"F misses the g-relative contraction with factor "
                         f"{k!r} at sample {idx}")
            break
    if notes:
        return _report("contraction-composition", [], 2 * n, seed, notes,
                       applicable=False)
    k1 = alpha * k

    def check(item):
        idx, (x, y, u, v) = item
        lhs = space.distance(F(x, y), F(u, v))
        rhs = 0.5 * k1 * (space.distance(x, u) + space.distance(y, v))
        if lhs > rhs + tol:
            return {"index": idx, "quadruple": (x, y, u, v), "lhs": lhs,
                    "rhs": rhs, "k1": k1}
        return None

    wit = [w for w in _map_samples(check, list(enumerate(quads)), threads)
           if w is not None]
    return _report("contraction-composition", wit, 2 * n, seed)


TRACE_COLUMNS = ("n", "x", "y", "gx", "gy", "gap", "residual_x", "residual_y",
                 "diagonal_bound", "pair_bound")


def _fmt_point(p) -> str:
    if isinstance(p, np.ndarray):
        return ";".join(f"{float(c):.17g}" for c in p)
    if isinstance(p, (int, np.integer)):
        return str(int(p))
    return f"{float(p):.17g}"


def _parse_point(s: str):
    if ";" in s:
        return np.array([float(c) for c in s.split(";")])
    try:
        return int(s)
    except ValueError:
        return float(s)


def trace_to_csv(trace: IterationTrace) -> str:
    """Render a trace as CSV with 17 significant digits per value."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(TRACE_COLUMNS)
    for s in trace.steps:
        w.writerow([s.n, _fmt_point(s.x), _fmt_point(s.y), _fmt_point(s.gx),
                    _fmt_point(s.gy), f"{s.gap:.17g}", f"{s.residual_x:.17g}",
                    f"{s.residual_y:.17g}", f"{s.diagonal_bound:.17g}",
                    f"{s.pair_bound:.17g}"])
    return buf.getvalue()


def trace_from_csv(text: str) -> IterationTrace:
    """Parse a trace written by trace_to_csv."""
    rows = list(csv.reader(io.StringIO(text)))
    if not rows or tuple(rows[0]) != TRACE_COLUMNS:
        raise ValidationError(f"trace header must be {','.join(TRACE_COLUMNS)}")
    trace = IterationTrace()
    for lineno, row in enumerate(rows[1:], start=2):
        if len(row) != len(TRACE_COLUMNS):
            raise ValidationError(f"trace line {lineno}: expected "
                                  f"{len(TRACE_COLUMNS)} fields, got {len(row)}")
        try:
            trace.steps.append(TraceStep(
                n=int(row[0]), x=_parse_point(row[1]), y=_parse_point(row[2]),
                gx=_parse_point(row[3]), gy=_parse_point(row[4]),
                gap=float(row[5]), residual_x=float(row[6]),
                residual_y=float(row[7]), diagonal_bound=float(row[8]),
                pair_bound=float(row[9])))
        except ValueError as exc:
            raise ValidationError(f"trace line {lineno}: {exc}") from exc
    return trace


def _fmt_scalar(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v)
    return str(v)


def solve_result_document(result: SolveResult, problem: ProblemInstance,
                          invocation: Optional[dict] = None) -> str:
    """Serialize a SolveResult as a deterministic sectioned text document."""
    lines = []
    if invocation:
        lines.append("[invocation]")
        for key in sorted(invocation):
            lines.append(f"{key} = {_fmt_scalar(invocation[key])}")
        lines.append("")
    lines.append("[result]")
    lines.append(f"problem = {problem.name}")
    lines.append(f"converged = {_fmt_scalar(result.converged)}")
    lines.append(f"iterations = {result.iterations_used}")
    lines.append(f"a = {_fmt_point(result.a)}")
    lines.append(f"b = {_fmt_point(result.b)}")
    lines.append(f"ga = {_fmt_point(result.u)}")
    lines.append(f"gb = {_fmt_point(result.v)}")
    lines.append(f"residual_x = {_fmt_scalar(result.residual_x)}")
    lines.append(f"residual_y = {_fmt_scalar(result.residual_y)}")
    lines.append(f"pair_gap = {_fmt_scalar(result.pair_gap)}")
    lines.append(f"symmetric_gap = {_fmt_scalar(result.symmetric_gap)}")
    lines.append(f"k = {_fmt_scalar(result.k_used)}")
    lines.append(f"k_source = {result.k_source}")
    lines.append(f"message = {result.message}")
    lines.append("")
    if result.strong is not None:
        lines.append("[strong-point]")
        lines.append(f"point = {_fmt_point(result.strong.point)}")
        lines.append(f"residual = {_fmt_scalar(result.strong.residual)}")
        lines.append(f"pair_gap = {_fmt_scalar(result.strong.gap)}")
        lines.append("")
    lines.append("[assumptions]")
    for key, val in result.assumptions.as_dict().items():
        lines.append(f"{key} = {_fmt_scalar(val)}")
    lines.append(f"injective_declared = {_fmt_scalar(problem.g.injective_declared)}")
    lines.append(f"closedness_declared = {_fmt_scalar(problem.pair.closedness_declared)}")
    lines.append("")
    lines.append("[config]")
    lines.append(f"residual_tol = {_fmt_scalar(result.config.residual_tol)}")
    lines.append(f"max_iter = {result.config.max_iter}")
    lines.append(f"membership_checks = {result.config.membership_checks}")
    lines.append("")
    lines.append("[bound-check]")
    if result.bound_report is None:
        lines.append("checked = false")
    else:
        lines.append("checked = true")
        lines.append(f"verdict = {result.bound_report.verdict}")
        lines.append(f"witnesses = {len(result.bound_report.witnesses)}")
        lines.append(f"quality = {'declared-k' if result.k_source == 'declared' else 'sampled-k'}")
    for note in result.notes:
        lines.append(f"note = {note}")
    lines.append("")
    return "\n".join(lines)
