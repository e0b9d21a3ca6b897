"""Built-in problem instances and config-file ingestion.

Problem files are sectioned text with [space], [subsets], [F], [g] and
an optional [solver-defaults] section.  ``serialize_spec`` writes a
canonical form that round-trips byte for byte through ``parse_spec``;
numbers are decimal doubles in shortest round-trip notation.
"""

from __future__ import annotations

import configparser
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

import numpy as np

from .metric import (
    DEFAULT_EQ_TOL,
    ValidationError,
    box_pair,
    interval_pair,
    real_line,
    real_vector,
)
from .mappings import CoupledMap, SelfMap
from .solver import Assumptions, ProblemInstance
from .oracle import FiniteProblem, to_instance

# Affine preimage coefficients must invert the forward part to the
# identity within this tolerance.
INV_TOL = 1e-12

SPACE_KINDS = ("real-line", "real-vector", "finite")


@dataclass
class ProblemSpec:
    """Parsed form of a problem file; plain values, no closures."""

    name: str = "problem"
    kind: str = "real-line"
    dim: int = 1
    eq_tol: float = DEFAULT_EQ_TOL
    complete_space: bool = True
    labels: Optional[tuple] = None
    matrix: Optional[list] = None
    interval_a: Optional[list] = None
    interval_b: Optional[list] = None
    box_a_lo: Optional[list] = None
    box_a_hi: Optional[list] = None
    box_b_lo: Optional[list] = None
    box_b_hi: Optional[list] = None
    a_indices: Optional[tuple] = None
    b_indices: Optional[tuple] = None
    ga_closed: bool = True
    gb_closed: bool = True
    f_form: str = "affine"
    f_p: object = None
    f_q: object = None
    f_c: object = None
    f_table: Optional[list] = None
    k: Optional[float] = None
    k_analytic: Optional[float] = None
    g_form: str = "affine"
    g_m: object = None
    g_t: object = None
    g_minv: object = None
    g_table: Optional[list] = None
    injective: bool = False
    residual_tol: Optional[float] = None
    max_iter: Optional[int] = None


def _fnum(x) -> str:
    return repr(float(x))


def _fvec(v) -> str:
    return ", ".join(_fnum(c) for c in v)


def _fmat(m) -> str:
    return "; ".join(_fvec(row) for row in m)


def _ivec(v) -> str:
    return ", ".join(str(int(c)) for c in v)


def _imat(m) -> str:
    return "; ".join(_ivec(row) for row in m)


def _fbool(b) -> str:
    return "true" if b else "false"


def serialize_spec(spec: ProblemSpec) -> str:
    """Canonical text form of a spec (fixed field order, repr floats)."""
    L = ["[space]", f"name = {spec.name}", f"kind = {spec.kind}"]
    if spec.kind == "real-vector":
        L.append(f"dim = {spec.dim}")
    if spec.kind == "finite":
        L.append(f"labels = {', '.join(spec.labels)}")
        L.append(f"matrix = {_fmat(spec.matrix)}")
    else:
        L.append(f"eq_tol = {_fnum(spec.eq_tol)}")
    L.append(f"complete_space = {_fbool(spec.complete_space)}")
    L.append("")
    L.append("[subsets]")
    if spec.kind == "real-line":
        L.append(f"a = {_fvec(spec.interval_a)}")
        L.append(f"b = {_fvec(spec.interval_b)}")
    elif spec.kind == "real-vector":
        L.append(f"a_lo = {_fvec(spec.box_a_lo)}")
        L.append(f"a_hi = {_fvec(spec.box_a_hi)}")
        L.append(f"b_lo = {_fvec(spec.box_b_lo)}")
        L.append(f"b_hi = {_fvec(spec.box_b_hi)}")
    else:
        L.append(f"a_indices = {_ivec(spec.a_indices)}")
        L.append(f"b_indices = {_ivec(spec.b_indices)}")
    L.append(f"ga_closed = {_fbool(spec.ga_closed)}")
    L.append(f"gb_closed = {_fbool(spec.gb_closed)}")
    L.append("")
    L.append("[F]")
    L.append(f"form = {spec.f_form}")
    if spec.f_form == "affine":
        if spec.kind == "real-line":
            L.append(f"p = {_fnum(spec.f_p)}")
            L.append(f"q = {_fnum(spec.f_q)}")
            L.append(f"c = {_fnum(spec.f_c)}")
        else:
            L.append(f"p = {_fmat(spec.f_p)}")
            L.append(f"q = {_fmat(spec.f_q)}")
            L.append(f"c = {_fvec(spec.f_c)}")
    else:
        L.append(f"table = {_imat(spec.f_table)}")
    if spec.k is not None:
        L.append(f"k = {_fnum(spec.k)}")
    if spec.k_analytic is not None:
        L.append(f"k_analytic = {_fnum(spec.k_analytic)}")
    L.append("")
    L.append("[g]")
    L.append(f"form = {spec.g_form}")
    if spec.g_form == "affine":
        if spec.kind == "real-line":
            L.append(f"m = {_fnum(spec.g_m)}")
            L.append(f"t = {_fnum(spec.g_t)}")
            if spec.g_minv is not None:
                L.append(f"minv = {_fnum(spec.g_minv)}")
        else:
            L.append(f"m = {_fmat(spec.g_m)}")
            L.append(f"t = {_fvec(spec.g_t)}")
            if spec.g_minv is not None:
                L.append(f"minv = {_fmat(spec.g_minv)}")
    else:
        L.append(f"table = {_ivec(spec.g_table)}")
    L.append(f"injective = {_fbool(spec.injective)}")
    if spec.residual_tol is not None or spec.max_iter is not None:
        L.append("")
        L.append("[solver-defaults]")
        if spec.residual_tol is not None:
            L.append(f"residual_tol = {_fnum(spec.residual_tol)}")
        if spec.max_iter is not None:
            L.append(f"max_iter = {spec.max_iter}")
    L.append("")
    return "\n".join(L)


def _want(section, key, where):
    val = section.get(key)
    if val is None:
        raise ValidationError(f"[{where}] is missing required field {key!r}")
    return val.strip()


def _pfloat(s, where):
    try:
        return float(s)
    except ValueError as exc:
        raise ValidationError(f"[{where}] is not a number: {s!r}") from exc


def _pint(s, where):
    try:
        return int(s)
    except ValueError as exc:
        raise ValidationError(f"[{where}] is not an integer: {s!r}") from exc


def _pbool(s, where):
    low = s.strip().lower()
    if low in ("true", "yes", "1"):
        return True
    if low in ("false", "no", "0"):
        return False
    raise ValidationError(f"[{where}] is not a boolean: {s!r}")


def _pvec(s, where):
    return [_pfloat(t, where) for t in s.split(",")]


def _pmat(s, where):
    return [_pvec(row, where) for row in s.split(";")]


def _pivec(s, where):
    return [_pint(t, where) for t in s.split(",")]


def _pimat(s, where):
    return [_pivec(row, where) for row in s.split(";")]


def parse_spec(text: str) -> ProblemSpec:
    """Parse a problem file; raises ValidationError with field context."""
    cp = configparser.ConfigParser(interpolation=None)
    try:
        cp.read_string(text)
    except configparser.Error as exc:
        raise ValidationError(f"config parse error: {exc}") from exc
    for sec in ("space", "subsets", "F", "g"):
        if not cp.has_section(sec):
            raise ValidationError(f"missing [{sec}] section")
    sp, su, sf, sg = cp["space"], cp["subsets"], cp["F"], cp["g"]
    kind = _want(sp, "kind", "space kind")
    if kind not in SPACE_KINDS:
        raise ValidationError(f"[space] kind must be one of {SPACE_KINDS}, "
                              f"got {kind!r}")
    spec = ProblemSpec(name=sp.get("name", "problem").strip(), kind=kind)
    spec.complete_space = _pbool(sp.get("complete_space", "true"),
                                 "space complete_space")
    spec.ga_closed = _pbool(su.get("ga_closed", "true"), "subsets ga_closed")
    spec.gb_closed = _pbool(su.get("gb_closed", "true"), "subsets gb_closed")

    if kind == "finite":
        spec.labels = tuple(t.strip() for t in
                            _want(sp, "labels", "space labels").split(","))
        spec.matrix = _pmat(_want(sp, "matrix", "space matrix"), "space matrix")
        spec.a_indices = tuple(_pivec(_want(su, "a_indices", "subsets a_indices"),
                                      "subsets a_indices"))
        spec.b_indices = tuple(_pivec(_want(su, "b_indices", "subsets b_indices"),
                                      "subsets b_indices"))
    elif kind == "real-line":
        spec.eq_tol = _pfloat(sp.get("eq_tol", repr(DEFAULT_EQ_TOL)),
                              "space eq_tol")
        spec.interval_a = _pvec(_want(su, "a", "subsets a"), "subsets a")
        spec.interval_b = _pvec(_want(su, "b", "subsets b"), "subsets b")
        if len(spec.interval_a) != 2 or len(spec.interval_b) != 2:
            raise ValidationError("[subsets] intervals need exactly lo, hi")
    else:
        spec.dim = _pint(_want(sp, "dim", "space dim"), "space dim")
        if spec.dim < 1:
            raise ValidationError(f"[space] dim must be >= 1, got {spec.dim}")
        spec.eq_tol = _pfloat(sp.get("eq_tol", repr(DEFAULT_EQ_TOL)),
                              "space eq_tol")
        spec.box_a_lo = _pvec(_want(su, "a_lo", "subsets a_lo"), "subsets a_lo")
        spec.box_a_hi = _pvec(_want(su, "a_hi", "subsets a_hi"), "subsets a_hi")
        spec.box_b_lo = _pvec(_want(su, "b_lo", "subsets b_lo"), "subsets b_lo")
        spec.box_b_hi = _pvec(_want(su, "b_hi", "subsets b_hi"), "subsets b_hi")

    spec.f_form = sf.get("form", "affine").strip()
    if spec.f_form == "affine":
        if kind == "finite":
            raise ValidationError("[F] finite problems need form = table")
        if kind == "real-line":
            spec.f_p = _pfloat(_want(sf, "p", "F p"), "F p")
            spec.f_q = _pfloat(_want(sf, "q", "F q"), "F q")
            spec.f_c = _pfloat(_want(sf, "c", "F c"), "F c")
        else:
            spec.f_p = _pmat(_want(sf, "p", "F p"), "F p")
            spec.f_q = _pmat(_want(sf, "q", "F q"), "F q")
            spec.f_c = _pvec(_want(sf, "c", "F c"), "F c")
    elif spec.f_form == "table":
        if kind != "finite":
            raise ValidationError("[F] form = table needs a finite space")
        spec.f_table = _pimat(_want(sf, "table", "F table"), "F table")
    else:
        raise ValidationError(f"[F] form must be affine or table, got "
                              f"{spec.f_form!r}")
    if sf.get("k") is not None:
        spec.k = _pfloat(sf.get("k"), "F k")
        if not 0.0 < spec.k < 1.0:
            raise ValidationError(f"k outside (0,1): {spec.k!r}")
    if sf.get("k_analytic") is not None:
        spec.k_analytic = _pfloat(sf.get("k_analytic"), "F k_analytic")

    spec.g_form = sg.get("form", "affine").strip()
    if spec.g_form == "affine":
        if kind == "finite":
            raise ValidationError("[g] finite problems need form = table")
        if kind == "real-line":
            spec.g_m = _pfloat(_want(sg, "m", "g m"), "g m")
            spec.g_t = _pfloat(_want(sg, "t", "g t"), "g t")
            if sg.get("minv") is not None:
                spec.g_minv = _pfloat(sg.get("minv"), "g minv")
        else:
            spec.g_m = _pmat(_want(sg, "m", "g m"), "g m")
            spec.g_t = _pvec(_want(sg, "t", "g t"), "g t")
            if sg.get("minv") is not None:
                spec.g_minv = _pmat(sg.get("minv"), "g minv")
    elif spec.g_form == "table":
        if kind != "finite":
            raise ValidationError("[g] form = table needs a finite space")
        spec.g_table = _pivec(_want(sg, "table", "g table"), "g table")
    else:
        raise ValidationError(f"[g] form must be affine or table, got "
                              f"{spec.g_form!r}")
    spec.injective = _pbool(sg.get("injective", "false"), "g injective")

    if cp.has_section("solver-defaults"):
        sd = cp["solver-defaults"]
        if sd.get("residual_tol") is not None:
            spec.residual_tol = _pfloat(sd.get("residual_tol"),
                                        "solver-defaults residual_tol")
        if sd.get("max_iter") is not None:
            spec.max_iter = _pint(sd.get("max_iter"),
                                  "solver-defaults max_iter")
    return spec


def _norm1(mat) -> float:
    # induced 1-norm: max absolute column sum
    return float(np.abs(np.asarray(mat, float)).sum(axis=0).max())


def affine_problem(spec: ProblemSpec) -> ProblemInstance:
    """Instance with F(x,y) = P x + Q y + c and g(x) = M x + t.

    The preimage of g is z -> Minv (z - t) on both subsets (computed
    from M when no minv is given, then checked against M to 1e-12).
    When M is a positive multiple m of the identity, the conservative
    norm bound 2 (|P| + |Q|) / m is recorded as k_analytic; the tight
    constant depends on sign alignment of the argument differences, so
    the sampled estimate is the operational value.
    """
    assumptions = Assumptions(complete_space=spec.complete_space,
                              ga_closed=spec.ga_closed,
                              gb_closed=spec.gb_closed)
    if spec.kind == "real-line":
        p, q, c = float(spec.f_p), float(spec.f_q), float(spec.f_c)
        m, t = float(spec.g_m), float(spec.g_t)
        if m == 0.0:
            raise ValidationError("g is constant; its affine part is singular")
        minv = float(spec.g_minv) if spec.g_minv is not None else 1.0 / m
        if abs(m * minv - 1.0) > INV_TOL:
            raise ValidationError(f"minv does not invert m: m*minv = "
                                  f"{m * minv!r}")
        space = real_line(eq_tol=spec.eq_tol)
        pair = interval_pair(spec.interval_a, spec.interval_b)
        F = CoupledMap(lambda x, y: p * x + q * y + c)
        pre = lambda z: minv * (z - t)
        g = SelfMap(lambda x: m * x + t, preimage_a=pre, preimage_b=pre,
                    injective_declared=spec.injective)
        derived = 2.0 * (abs(p) + abs(q)) / m if m > 0.0 else None
    else:
        dim = spec.dim
        P = np.asarray(spec.f_p, float)
        Q = np.asarray(spec.f_q, float)
        c = np.asarray(spec.f_c, float)
        M = np.asarray(spec.g_m, float)
        t = np.asarray(spec.g_t, float)
        for nm, arr, shape in (("p", P, (dim, dim)), ("q", Q, (dim, dim)),
                               ("c", c, (dim,)), ("m", M, (dim, dim)),
                               ("t", t, (dim,))):
            if arr.shape != shape:
                raise ValidationError(f"[{'F' if nm in 'pqc' else 'g'}] {nm} "
                                      f"must have shape {shape}, got {arr.shape}")
        if spec.g_minv is not None:
            Minv = np.asarray(spec.g_minv, float)
        else:
            try:
                Minv = np.linalg.inv(M)
            except np.linalg.LinAlgError as exc:
                raise ValidationError("g affine part is singular") from exc
        if Minv.shape != (dim, dim) or np.abs(M @ Minv - np.eye(dim)).max() > INV_TOL:
            raise ValidationError("minv does not invert m within 1e-12")
        space = real_vector(dim, eq_tol=spec.eq_tol)
        pair = box_pair(spec.box_a_lo, spec.box_a_hi,
                        spec.box_b_lo, spec.box_b_hi)
        F = CoupledMap(lambda x, y: P @ x + Q @ y + c)
        pre = lambda z: Minv @ (z - t)
        g = SelfMap(lambda x: M @ x + t, preimage_a=pre, preimage_b=pre,
                    injective_declared=spec.injective)
        m_scalar = float(M[0, 0])
        if m_scalar > 0.0 and np.array_equal(M, m_scalar * np.eye(dim)):
            derived = 2.0 * (_norm1(P) + _norm1(Q)) / m_scalar
        else:
            derived = None
    pair.closedness_declared = spec.ga_closed and spec.gb_closed
    k_analytic = spec.k_analytic if spec.k_analytic is not None else derived
    k = spec.k
    # a declared factor must sit strictly inside (0,1); the degenerate
    # bound 0 (constant F) is still recorded as k_analytic above
    if k is None and derived is not None and 0.0 < derived < 1.0:
        k = derived
    return ProblemInstance(space=space, pair=pair, F=F, g=g, k=k,
                           k_analytic=k_analytic, assumptions=assumptions,
                           name=spec.name, default_tol=spec.residual_tol,
                           default_max_iter=spec.max_iter)


def finite_problem_of(spec: ProblemSpec) -> FiniteProblem:
    """Build the exact finite problem a finite-kind spec describes."""
    if spec.kind != "finite":
        raise ValidationError(f"spec kind is {spec.kind!r}, not finite")
    return FiniteProblem(spec.labels, spec.matrix, spec.a_indices,
                         spec.b_indices, spec.f_table, spec.g_table,
                         name=spec.name)


def instantiate(spec: ProblemSpec) -> ProblemInstance:
    """Turn a parsed spec into a solvable instance.

    Finite instances compute injectivity and (absent a declared k) the
    exact contraction factor from their tables; the declared flags only
    matter for continuous spaces where nothing is decidable.
    """
    if spec.kind == "finite":
        inst = to_instance(finite_problem_of(spec), declare_k=spec.k is None)
        if spec.k is not None:
            inst.k = spec.k
        inst.name = spec.name
        inst.k_analytic = spec.k_analytic
        inst.assumptions = Assumptions(complete_space=spec.complete_space,
                                       ga_closed=spec.ga_closed,
                                       gb_closed=spec.gb_closed)
        inst.default_tol = spec.residual_tol
        inst.default_max_iter = spec.max_iter
        inst.pair.closedness_declared = spec.ga_closed and spec.gb_closed
        return inst
    return affine_problem(spec)


def load_spec(path) -> ProblemSpec:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ValidationError(f"cannot read problem file {path}: {exc}") from exc
    return parse_spec(text)


def load_problem(path) -> ProblemInstance:
    """Load and validate a problem file."""
    return instantiate(load_spec(path))


def save_spec(spec: ProblemSpec, path) -> None:
    Path(path).write_text(serialize_spec(spec))


def _averaging_spec() -> ProblemSpec:
    return ProblemSpec(
        name="averaging", kind="real-line",
        interval_a=[0.0, 2.0], interval_b=[0.0, 3.0],
        f_p=0.1, f_q=0.1, f_c=0.0, k=0.4, k_analytic=0.8,
        g_m=0.5, g_t=0.0, g_minv=2.0, injective=True,
        residual_tol=1e-10, max_iter=200)


def _averaging_2d_spec() -> ProblemSpec:
    return ProblemSpec(
        name="averaging-2d", kind="real-vector", dim=2,
        box_a_lo=[0.0, 0.0], box_a_hi=[2.0, 2.0],
        box_b_lo=[0.0, 0.0], box_b_hi=[3.0, 3.0],
        f_p=[[0.05, 0.0], [0.0, 0.05]], f_q=[[0.05, 0.0], [0.0, 0.05]],
        f_c=[0.0, 0.0], k=0.2, k_analytic=0.4,
        g_m=[[0.5, 0.0], [0.0, 0.5]], g_t=[0.0, 0.0],
        g_minv=[[2.0, 0.0], [0.0, 2.0]], injective=True,
        residual_tol=1e-10, max_iter=200)


def _three_point_spec() -> ProblemSpec:
    # 3-point integer-grid discretization of the averaging maps: both
    # map outputs rounded to the nearest grid index, which flattens F
    # to the 0 cell and makes g non-injective.
    return ProblemSpec(
        name="three-point", kind="finite",
        labels=("p0", "p1", "p2"),
        matrix=[[0.0, 1.0, 2.0], [1.0, 0.0, 1.0], [2.0, 1.0, 0.0]],
        a_indices=(0, 1, 2), b_indices=(0, 1, 2),
        f_form="table", f_table=[[0, 0, 0], [0, 0, 0], [0, 0, 0]],
        g_form="table", g_table=[0, 0, 1], injective=False,
        residual_tol=1e-12, max_iter=100)


_BUILTIN_FACTORIES = {
    "averaging": _averaging_spec,
    "averaging-2d": _averaging_2d_spec,
    "three-point": _three_point_spec,
}

BUILTIN_NAMES = tuple(sorted(_BUILTIN_FACTORIES))


def builtin_spec(name: str) -> ProblemSpec:
    """A fresh spec for one of the built-in problems."""
    try:
        factory = _BUILTIN_FACTORIES[name]
    except KeyError:
        raise ValidationError(f"unknown builtin {name!r}; available: "
                              f"{', '.join(BUILTIN_NAMES)}") from None
    return factory()


def builtin_problem(name: str) -> ProblemInstance:
    return instantiate(builtin_spec(name))
