"""Problem file parsing, serialization round trips, and instantiation."""

import hashlib
from pathlib import Path

import numpy as np
import pytest

from coupledfp import (
    BUILTIN_NAMES,
    ValidationError,
    builtin_problem,
    builtin_spec,
    finite_problem_of,
    instantiate,
    load_problem,
    load_spec,
    parse_spec,
    save_spec,
    serialize_spec,
    solve_coupled_coincidence,
)

REPO = Path(__file__).resolve().parents[1]

# the committed example config is a build artifact of the serializer and
# must never drift from it
AVERAGING_INI_SHA256 = (
    "483350ad3e6ac8c055d5528876648f1063cc032b04330d1f44afd1bd079c7c68")


def test_builtin_catalog():
    assert BUILTIN_NAMES == ("averaging", "averaging-2d", "three-point")
    with pytest.raises(ValidationError, match="averaging"):
        builtin_spec("no-such-problem")
    with pytest.raises(ValidationError):
        builtin_problem("no-such-problem")


def test_builtin_specs_are_fresh_copies():
    a = builtin_spec("averaging")
    a.k = 0.9
    assert builtin_spec("averaging").k == 0.4


def test_averaging_spec_values():
    spec = builtin_spec("averaging")
    assert spec.kind == "real-line"
    assert spec.interval_a == [0.0, 2.0] and spec.interval_b == [0.0, 3.0]
    assert (spec.f_p, spec.f_q, spec.f_c) == (0.1, 0.1, 0.0)
    assert (spec.g_m, spec.g_t, spec.g_minv) == (0.5, 0.0, 2.0)
    assert spec.k == 0.4 and spec.k_analytic == 0.8
    assert spec.injective
    assert spec.residual_tol == 1e-10 and spec.max_iter == 200


@pytest.mark.parametrize("name", BUILTIN_NAMES)
def test_serialize_parse_round_trip_is_byte_identical(name):
    text = serialize_spec(builtin_spec(name))
    assert serialize_spec(parse_spec(text)) == text


@pytest.mark.parametrize("name, fname", [("averaging", "averaging.ini"),
                                         ("three-point", "three_point.ini")])
def test_committed_configs_match_the_exporter(name, fname):
    on_disk = (REPO / "configs" / fname).read_text()
    assert on_disk == serialize_spec(builtin_spec(name))


def test_committed_averaging_config_hash():
    digest = hashlib.sha256(
        (REPO / "configs" / "averaging.ini").read_bytes()).hexdigest()
    assert digest == AVERAGING_INI_SHA256


def test_config_loaded_problem_equals_builtin(tmp_path):
    path = tmp_path / "p.ini"
    save_spec(builtin_spec("averaging"), path)
    loaded = load_problem(path)
    built = builtin_problem("averaging")
    r1 = solve_coupled_coincidence(loaded, 2.0, 3.0)
    r2 = solve_coupled_coincidence(built, 2.0, 3.0)
    assert (r1.a, r1.b, r1.iterations_used) == (r2.a, r2.b, r2.iterations_used)
    assert [s.x for s in r1.trace.steps] == [s.x for s in r2.trace.steps]


def test_parse_requires_core_sections():
    text = serialize_spec(builtin_spec("averaging"))
    without_g = text[:text.index("[g]")]
    with pytest.raises(ValidationError, match=r"missing \[g\] section"):
        parse_spec(without_g)
    with pytest.raises(ValidationError, match="config parse error"):
        parse_spec("not a config\n")


def replace_line(text, old, new):
    assert old in text
    return text.replace(old, new)


def test_parse_reports_field_context():
    text = serialize_spec(builtin_spec("averaging"))
    with pytest.raises(ValidationError, match=r"\[F p\] is not a number"):
        parse_spec(replace_line(text, "p = 0.1", "p = fast"))
    with pytest.raises(ValidationError, match=r"\[space complete_space\]"):
        parse_spec(replace_line(text, "complete_space = true",
                                "complete_space = maybe"))
    with pytest.raises(ValidationError, match=r"\[solver-defaults max_iter\]"):
        parse_spec(replace_line(text, "max_iter = 200", "max_iter = many"))
    with pytest.raises(ValidationError, match="missing required field 'm'"):
        parse_spec(replace_line(text, "m = 0.5", "mm = 0.5"))


def test_parse_validates_ranges_and_kinds():
    text = serialize_spec(builtin_spec("averaging"))
    with pytest.raises(ValidationError, match=r"k outside \(0,1\)"):
        parse_spec(replace_line(text, "k = 0.4", "k = 1.2"))
    with pytest.raises(ValidationError, match="kind must be one of"):
        parse_spec(replace_line(text, "kind = real-line", "kind = complex"))
    with pytest.raises(ValidationError, match="form must be affine or table"):
        parse_spec(replace_line(text, "form = affine", "form = spline"))
    with pytest.raises(ValidationError, match="needs a finite space"):
        parse_spec(replace_line(text, "form = affine\np = 0.1\nq = 0.1\nc = 0.0",
                                "form = table\ntable = 0"))
    with pytest.raises(ValidationError, match="exactly lo, hi"):
        parse_spec(replace_line(text, "a = 0.0, 2.0", "a = 0.0, 1.0, 2.0"))
    with pytest.raises(ValidationError, match="form = table"):
        parse_spec(replace_line(serialize_spec(builtin_spec("three-point")),
                                "form = table\ntable = 0, 0, 1",
                                "form = affine\nm = 1.0\nt = 0.0"))


def test_minv_is_optional_but_checked():
    spec = builtin_spec("averaging")
    spec.g_minv = None
    text = serialize_spec(spec)
    assert "minv" not in text
    inst = instantiate(parse_spec(text))
    assert inst.g.preimage_a(1.0) == 2.0  # computed from m = 0.5
    spec.g_minv = 3.0
    with pytest.raises(ValidationError, match="does not invert"):
        instantiate(spec)
    spec.g_minv = None
    spec.g_m = 0.0
    with pytest.raises(ValidationError, match="singular"):
        instantiate(spec)


def test_derived_contraction_factor_on_the_line():
    spec = builtin_spec("averaging")
    spec.k = None
    spec.k_analytic = None
    inst = instantiate(spec)
    # norm bound 2(|p| + |q|)/m = 0.8 fills both fields when nothing is given
    assert inst.k == 0.8 and inst.k_analytic == 0.8
    spec.f_p = spec.f_q = 0.3
    inst = instantiate(spec)
    assert inst.k is None  # bound 2.4 is useless as a declared factor
    assert inst.k_analytic == 2.4


def test_vector_spec_validation():
    spec = builtin_spec("averaging-2d")
    assert instantiate(spec).space.kind == "real-vector"
    spec.f_p = [[0.05]]
    with pytest.raises(ValidationError, match="must have shape"):
        instantiate(spec)
    spec = builtin_spec("averaging-2d")
    spec.g_minv = None
    inst = instantiate(spec)
    pre = inst.g.preimage_a(np.array([1.0, 1.0]))
    assert np.allclose(pre, [2.0, 2.0])
    spec.g_m = [[0.0, 0.0], [0.0, 0.0]]
    with pytest.raises(ValidationError, match="singular"):
        instantiate(spec)


def test_vector_derived_factor_needs_scalar_matrix():
    spec = builtin_spec("averaging-2d")
    assert spec.k == 0.2
    spec.k = None
    spec.k_analytic = None
    inst = instantiate(spec)
    assert inst.k == pytest.approx(0.4)  # 2(0.05 + 0.05)/0.5
    spec.g_m = [[0.5, 0.1], [0.0, 0.5]]  # not a multiple of the identity
    spec.g_minv = None
    inst = instantiate(spec)
    assert inst.k is None and inst.k_analytic is None


def test_instantiate_finite_three_point():
    spec = builtin_spec("three-point")
    inst = instantiate(spec)
    assert inst.name == "three-point"
    assert inst.space.is_finite and inst.space.size == 3
    assert inst.k is None  # exact min factor is 0, nothing worth declaring
    assert not inst.g.injective_declared
    assert inst.default_tol == 1e-12 and inst.default_max_iter == 100
    fp = finite_problem_of(spec)
    assert fp.size == 3
    with pytest.raises(ValidationError, match="not finite"):
        finite_problem_of(builtin_spec("averaging"))


def test_instantiate_finite_keeps_a_declared_factor():
    spec = builtin_spec("three-point")
    spec.k = 0.25
    assert instantiate(spec).k == 0.25


def test_load_spec_missing_file(tmp_path):
    with pytest.raises(ValidationError, match="cannot read"):
        load_spec(tmp_path / "absent.ini")


def test_save_then_load_round_trip(tmp_path):
    path = tmp_path / "avg.ini"
    save_spec(builtin_spec("averaging"), path)
    spec = load_spec(path)
    assert serialize_spec(spec) == serialize_spec(builtin_spec("averaging"))
    res = solve_coupled_coincidence(instantiate(spec), 2.0, 3.0)
    assert res.converged
