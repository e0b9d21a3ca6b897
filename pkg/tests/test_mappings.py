"""Sampled definition checkers and the contraction-factor estimator."""

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from coupledfp import (
    CoupledMap,
    SelfMap,
    UnsupportedCheckError,
    ValidationError,
    check_banach_coupling,
    check_commutativity,
    check_coupled_banach_contraction,
    check_injectivity,
    estimate_contraction_constant,
    interval_pair,
    is_coupled_coincidence_point,
    is_coupling,
    is_cyclic,
    is_g_coupling,
    is_self_cyclic,
    real_line,
    union_sampler,
)
from coupledfp import test_g_coupling_implies_coupling as implication_check
from coupledfp.mappings import HOLDS, INAPPLICABLE, VIOLATED, in_image

SPACE = real_line()
PAIR = interval_pair((0.0, 2.0), (0.0, 3.0))
F_AVG = CoupledMap(lambda x, y: (x + y) / 10.0)
G_HALF = SelfMap(lambda x: 0.5 * x, preimage_a=lambda z: 2.0 * z,
                 preimage_b=lambda z: 2.0 * z, injective_declared=True)


def test_cyclic_holds_for_halving():
    # g maps [0,2] into [0,1] subset of B and [0,3] into [0,1.5] subset of A
    rep = is_cyclic(G_HALF, PAIR, n=300, seed=1)
    assert rep.verdict == HOLDS and rep.ok
    assert rep.samples_used == 600  # A-side plus B-side
    assert rep.seed == 1


def test_cyclic_violated_with_witness():
    shift = SelfMap(lambda x: x + 2.0)
    rep = is_cyclic(shift, PAIR, n=100, seed=0)
    assert rep.verdict == VIOLATED and not rep.ok
    w = rep.witnesses[0]
    # witness must re-evaluate: the image really leaves the target subset
    assert w["image"] == w["point"] + 2.0


def test_self_cyclic_holds_and_fails():
    assert is_self_cyclic(G_HALF, PAIR, n=200, seed=0).ok
    neg = SelfMap(lambda x: -x - 0.5)
    rep = is_self_cyclic(neg, PAIR, n=100, seed=0)
    assert rep.verdict == VIOLATED


def test_coupling_holds_on_samples():
    rep = is_coupling(F_AVG, PAIR, n=400, seed=5)
    assert rep.verdict == HOLDS
    assert rep.samples_used == 400


def test_coupling_violation_witness_reevaluates():
    F_sum = CoupledMap(lambda x, y: x + y)
    rep = is_coupling(F_sum, PAIR, samples=[(2.0, 3.0)])
    assert rep.verdict == VIOLATED
    assert rep.seed is None  # explicit samples carry no seed
    w = rep.witnesses[0]
    assert w["Fxy"] == 5.0 and "not in B" in w["reason"]


def test_g_coupling_holds_for_averaging():
    rep = is_g_coupling(F_AVG, G_HALF, PAIR, SPACE, n=400, seed=2)
    assert rep.verdict == HOLDS


def test_g_coupling_needs_preimages():
    bare = SelfMap(lambda x: 0.5 * x)
    with pytest.raises(UnsupportedCheckError):
        is_g_coupling(F_AVG, bare, PAIR, SPACE, n=10)


def test_g_coupling_detects_image_escape():
    # constant 2.0 lies in B but outside g(A) = [0,1]
    F_const = CoupledMap(lambda x, y: 2.0)
    rep = is_g_coupling(F_const, G_HALF, PAIR, SPACE, samples=[(1.0, 1.0)])
    assert rep.verdict == VIOLATED
    assert "not certified in g(A)" in rep.witnesses[0]["reason"]


def test_in_image_positive_and_negative():
    assert in_image(G_HALF, PAIR, "A", 1.0, SPACE)  # g(2.0) = 1.0, 2.0 in A
    assert not in_image(G_HALF, PAIR, "A", 1.5, SPACE)  # preimage 3.0 not in A
    g_partial = SelfMap(lambda x: 0.5 * x, preimage_a=lambda z: None,
                        preimage_b=lambda z: None)
    assert not in_image(g_partial, PAIR, "A", 0.5, SPACE)
    with pytest.raises(UnsupportedCheckError):
        in_image(SelfMap(lambda x: x), PAIR, "A", 0.5, SPACE)


def test_estimate_recovers_averaging_factor():
    k_hat, violation = estimate_contraction_constant(
        F_AVG, G_HALF, PAIR, SPACE, n=2000, seed=0)
    assert violation is None
    assert 0.39 <= k_hat <= 0.4 + 1e-9


def test_estimate_flags_no_finite_factor():
    g_const = SelfMap(lambda x: 0.0, preimage_a=lambda z: 0.0,
                      preimage_b=lambda z: 0.0)
    F_id = CoupledMap(lambda x, y: x)
    k_hat, violation = estimate_contraction_constant(
        F_id, g_const, PAIR, SPACE, n=50, seed=0)
    assert violation is not None and violation["kind"] == "no-finite-k"


def test_estimate_flags_non_contractive():
    F_id = CoupledMap(lambda x, y: x)
    k_hat, violation = estimate_contraction_constant(
        F_id, SelfMap.identity(), PAIR, SPACE, n=200, seed=1)
    assert k_hat >= 1.0
    assert violation is not None and violation["kind"] == "not-contractive"
    # the reported quadruple must reproduce the estimate
    x, y, u, v = violation["quadruple"]
    num = SPACE.distance(F_id(x, y), F_id(u, v))
    den = SPACE.distance(x, u) + SPACE.distance(y, v)
    assert 2.0 * num / den == violation["k_hat"]


def test_estimate_rejects_unknown_pattern():
    with pytest.raises(ValidationError):
        estimate_contraction_constant(F_AVG, G_HALF, PAIR, SPACE, n=10,
                                      pattern="diagonal")


def test_estimate_unrestricted_pattern_runs():
    k_hat, violation = estimate_contraction_constant(
        F_AVG, G_HALF, PAIR, SPACE, n=500, seed=0, pattern="unrestricted")
    assert violation is None
    assert k_hat <= 0.4 + 1e-9


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 2**16))
def test_estimate_grows_with_sample_budget(seed):
    # the quadruple stream is drawn one tuple at a time, so a longer run
    # extends a shorter one and the running maximum cannot decrease
    k_small, _ = estimate_contraction_constant(
        F_AVG, G_HALF, PAIR, SPACE, n=50, seed=seed)
    k_large, _ = estimate_contraction_constant(
        F_AVG, G_HALF, PAIR, SPACE, n=200, seed=seed)
    assert k_small <= k_large


def test_banach_coupling_threshold():
    assert check_banach_coupling(F_AVG, PAIR, SPACE, k=0.2, n=300, seed=0).ok
    rep = check_banach_coupling(F_AVG, PAIR, SPACE, k=0.1, n=300, seed=0)
    assert rep.verdict == VIOLATED
    w = rep.witnesses[0]
    assert w["lhs"] > w["rhs"]
    with pytest.raises(ValidationError):
        check_banach_coupling(F_AVG, PAIR, SPACE, k=1.0, n=10)


def test_coupled_banach_contraction_needs_sampler():
    with pytest.raises(ValidationError):
        check_coupled_banach_contraction(F_AVG, SPACE, k=0.3, n=10)
    rep = check_coupled_banach_contraction(
        F_AVG, SPACE, k=0.3, n=300, seed=0, sampler=union_sampler(PAIR))
    assert rep.ok


def test_commutativity_exact_and_broken():
    rep = check_commutativity(F_AVG, G_HALF, SPACE, n=200, seed=0, pair=PAIR)
    assert rep.verdict == HOLDS
    F_off = CoupledMap(lambda x, y: (x + y) / 10.0 + 1.0)
    rep = check_commutativity(F_off, G_HALF, SPACE, n=50, seed=0, pair=PAIR)
    assert rep.verdict == VIOLATED
    assert rep.witnesses[0]["gap"] == pytest.approx(0.5)
    with pytest.raises(ValidationError):
        check_commutativity(F_AVG, G_HALF, SPACE, n=10)  # no sampler anywhere


def test_injectivity_checker():
    assert check_injectivity(G_HALF, SPACE, n=200, seed=0, pair=PAIR).ok
    fold = SelfMap(lambda x: abs(x - 1.0))
    rep = check_injectivity(fold, SPACE, samples=[(0.0, 2.0)])
    assert rep.verdict == VIOLATED
    w = rep.witnesses[0]
    assert w["gp"] == w["gq"] == 1.0


def test_coincidence_point_predicate():
    ok, (rx, ry) = is_coupled_coincidence_point(F_AVG, G_HALF, SPACE, 0.0, 0.0)
    assert ok and rx == 0.0 and ry == 0.0
    ok, (rx, ry) = is_coupled_coincidence_point(F_AVG, G_HALF, SPACE, 2.0, 3.0)
    assert not ok
    assert rx == pytest.approx(0.5) and ry == pytest.approx(1.0)
    # strong form also needs x = y
    F_swap = CoupledMap(lambda x, y: 0.5 * y)
    ok, _ = is_coupled_coincidence_point(F_swap, G_HALF, SPACE, 1.0, 1.0,
                                         strong=True)
    assert ok
    ok, _ = is_coupled_coincidence_point(
        CoupledMap(lambda x, y: 0.5 * x), G_HALF, SPACE, 1.0, 2.0, strong=True)
    assert not ok


def test_implication_holds_pointwise():
    rep = implication_check(F_AVG, G_HALF, PAIR, SPACE, n=400, seed=3)
    assert rep.verdict == HOLDS and not rep.witnesses


def test_implication_vacuous_when_g_side_fails():
    # constant 2.5 never lands in g(A) = [0,1], so there is nothing to imply
    F_const = CoupledMap(lambda x, y: 2.5)
    rep = implication_check(F_const, G_HALF, PAIR, SPACE, n=100, seed=0)
    assert rep.verdict == HOLDS
    with pytest.raises(UnsupportedCheckError):
        implication_check(F_const, SelfMap(lambda x: x), PAIR, SPACE, n=10)


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 2**16))
def test_checkers_are_deterministic_in_the_seed(seed):
    F_sum = CoupledMap(lambda x, y: x + y)
    a = is_coupling(F_sum, PAIR, n=60, seed=seed)
    b = is_coupling(F_sum, PAIR, n=60, seed=seed)
    assert a == b  # dataclass equality covers witnesses and counts


def test_thread_count_does_not_change_witnesses():
    F_sum = CoupledMap(lambda x, y: x + y)
    serial = is_coupling(F_sum, PAIR, n=200, seed=9, threads=1)
    pooled = is_coupling(F_sum, PAIR, n=200, seed=9, threads=4)
    assert serial == pooled
