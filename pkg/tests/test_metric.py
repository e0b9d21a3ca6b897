"""Distance functions, axiom checks, and the paired-subset helpers."""

import numpy as np
import pytest
from hypothesis import given, strategies as st

from coupledfp import (
    MetricSpace,
    ValidationError,
    box_pair,
    check_metric_axioms,
    finite_space,
    index_pair,
    interval_pair,
    membership,
    real_line,
    real_vector,
    union_sampler,
)
from coupledfp.metric import DEFAULT_EQ_TOL, draw, finite_matrix_violations

THREE_POINT_MATRIX = [[0.0, 1.0, 2.0], [1.0, 0.0, 1.0], [2.0, 1.0, 0.0]]


def test_real_line_distance():
    sp = real_line()
    assert sp.distance(2.0, 5.0) == 3.0
    assert sp.distance(-1.5, 1.5) == 3.0
    assert sp.eq_tol == DEFAULT_EQ_TOL
    assert sp.equal(1.0, 1.0 + 1e-12)
    assert not sp.equal(1.0, 1.0 + 1e-6)


def test_real_vector_one_norm():
    sp = real_vector(2)
    assert sp.distance(np.array([1.0, 2.0]), np.array([3.0, 0.0])) == 4.0
    with pytest.raises(ValidationError):
        real_vector(0)


def test_point_validation_by_kind():
    line = real_line()
    with pytest.raises(ValidationError):
        line.distance(np.array([1.0]), 0.0)
    with pytest.raises(ValidationError):
        line.distance(True, 0.0)  # bools are not points
    vec = real_vector(2)
    with pytest.raises(ValidationError):
        vec.distance(np.array([1.0]), np.array([1.0, 2.0]))
    with pytest.raises(ValidationError):
        vec.distance(1.0, 2.0)
    fin = finite_space(["a", "b"], [[0.0, 1.0], [1.0, 0.0]])
    with pytest.raises(ValidationError):
        fin.distance(0, 2)
    with pytest.raises(ValidationError):
        fin.distance(0.5, 1)


def test_finite_space_matrix_lookup():
    sp = finite_space(["p0", "p1", "p2"], THREE_POINT_MATRIX)
    assert sp.is_finite
    assert sp.size == 3
    assert sp.eq_tol == 0.0  # finite spaces compare exactly
    assert sp.distance(0, 2) == 2.0
    assert sp.distance(2, 0) == 2.0
    assert sp.distance(1, 1) == 0.0
    rng = np.random.default_rng(0)
    assert all(sp.sampler(rng) in (0, 1, 2) for _ in range(20))


def test_size_requires_finite_space():
    with pytest.raises(ValidationError):
        _ = real_line().size


def test_matrix_violations_empty_for_valid_metric():
    assert finite_matrix_violations(np.array(THREE_POINT_MATRIX)) == []


@pytest.mark.parametrize(
    "matrix, axiom",
    [
        ([[0.5, 1.0], [1.0, 0.0]], "identity"),  # nonzero diagonal
        ([[0.0, -1.0], [-1.0, 0.0]], "non-negativity"),
        ([[0.0, 1.0], [2.0, 0.0]], "symmetry"),
        ([[0.0, 0.0], [0.0, 0.0]], "identity"),  # distinct points at distance 0
        ([[0.0, 1.0, 3.0], [1.0, 0.0, 1.0], [3.0, 1.0, 0.0]], "triangle"),
    ],
)
def test_matrix_violations_catch_each_axiom(matrix, axiom):
    out = finite_matrix_violations(np.array(matrix, dtype=float))
    assert out, f"expected a {axiom} violation"
    assert any(v["axiom"] == axiom for v in out)


def test_matrix_violations_reject_non_square():
    out = finite_matrix_violations(np.zeros((2, 3)))
    assert out[0]["axiom"] == "shape"


def test_finite_space_rejects_bad_matrix():
    with pytest.raises(ValidationError):
        finite_space(["a", "b"], [[0.0, 1.0], [2.0, 0.0]])
    with pytest.raises(ValidationError):
        finite_space(["a"], [[0.0, 1.0], [1.0, 0.0]])  # label count mismatch


def test_check_axioms_finite_is_exhaustive():
    good = finite_space(["a", "b", "c"], THREE_POINT_MATRIX)
    assert check_metric_axioms(good) == []
    bad = finite_space(
        ["a", "b", "c"],
        [[0.0, 1.0, 3.0], [1.0, 0.0, 1.0], [3.0, 1.0, 0.0]],
        check=False,
    )
    out = check_metric_axioms(bad, sample_count=1)  # sample budget ignored
    assert any(v["axiom"] == "triangle" for v in out)


def test_check_axioms_sampled_real_line():
    smp = lambda rng: float(rng.uniform(-5.0, 5.0))
    assert check_metric_axioms(real_line(), 500, seed=3, sampler=smp) == []


def test_check_axioms_flags_broken_symmetry():
    # signed difference is not symmetric; clip at 0 to keep non-negativity
    sp = MetricSpace("real-line", lambda p, q: max(p - q, 0.0))
    out = check_metric_axioms(sp, 200, seed=0,
                              sampler=lambda rng: float(rng.uniform(0, 1)))
    assert any(v["axiom"] == "symmetry" for v in out)


def test_check_axioms_needs_sampler():
    with pytest.raises(ValidationError):
        check_metric_axioms(real_line())


def test_interval_pair_membership():
    pair = interval_pair((0.0, 2.0), (1.0, 3.0))
    assert membership(pair, "A", 0.0)
    assert membership(pair, "A", 2.0 + 1e-13)  # boundary slack
    assert not membership(pair, "A", 2.1)
    assert membership(pair, "B", 3.0)
    assert not membership(pair, "b", 0.5)  # case-insensitive side name
    with pytest.raises(ValidationError):
        membership(pair, "C", 0.0)
    with pytest.raises(ValidationError):
        interval_pair((2.0, 0.0), (0.0, 1.0))


def test_draw_stays_inside_subset():
    pair = interval_pair((0.0, 2.0), (1.0, 3.0))
    rng = np.random.default_rng(7)
    for _ in range(50):
        assert 0.0 <= draw(pair, "A", rng) <= 2.0
        assert 1.0 <= draw(pair, "B", rng) <= 3.0


def test_draw_asserts_sampler_contract():
    from coupledfp import SubsetPair

    broken = SubsetPair(
        contains_a=lambda p: 0.0 <= p <= 1.0,
        contains_b=lambda p: 0.0 <= p <= 1.0,
        sample_a=lambda rng: 5.0,  # lands outside A
        sample_b=lambda rng: 0.5,
    )
    rng = np.random.default_rng(0)
    with pytest.raises(ValidationError):
        draw(broken, "A", rng)


def test_union_sampler_covers_both_sides():
    pair = interval_pair((0.0, 1.0), (2.0, 3.0))  # disjoint on purpose
    smp = union_sampler(pair)
    rng = np.random.default_rng(11)
    pts = [smp(rng) for _ in range(60)]
    assert any(p <= 1.0 for p in pts)
    assert any(p >= 2.0 for p in pts)


def test_box_pair_membership_and_validation():
    pair = box_pair([0.0, 0.0], [1.0, 1.0], [0.5, 0.5], [2.0, 2.0])
    assert membership(pair, "A", np.array([0.5, 1.0]))
    assert not membership(pair, "A", np.array([0.5, 1.5]))
    rng = np.random.default_rng(2)
    p = draw(pair, "B", rng)
    assert p.shape == (2,)
    with pytest.raises(ValidationError):
        box_pair([0.0], [1.0, 1.0], [0.0, 0.0], [1.0, 1.0])
    with pytest.raises(ValidationError):
        box_pair([2.0], [1.0], [0.0], [1.0])


def test_index_pair():
    pair = index_pair([0, 2], [1, 2])
    assert membership(pair, "A", 0)
    assert not membership(pair, "A", 1)
    assert membership(pair, "B", 2)
    rng = np.random.default_rng(4)
    assert all(draw(pair, "A", rng) in (0, 2) for _ in range(20))
    with pytest.raises(ValidationError):
        index_pair([], [0])


@given(st.lists(st.integers(0, 10**6), min_size=2, max_size=8, unique=True))
def test_line_embeddings_are_metrics(coords):
    # any set of points on the integer line induces a genuine metric
    arr = np.array(coords, dtype=float)
    m = np.abs(arr[:, None] - arr[None, :])
    assert finite_matrix_violations(m) == []
