"""The randomized suites, their generators, and the independent oracles."""

import random
from fractions import Fraction as F

import pytest

from gossez_lab.operators import gossez_apply, t_apply
from gossez_lab.simplex import LEQ, EQ, LPProblem
from gossez_lab.verification import (
    bisect_distance_bound,
    brute_force_lp_minimum,
    random_fraction,
    random_lp,
    random_sparse,
    run_verification,
)

SUITE_NAMES = (
    "skewness",
    "tail-law",
    "operator-bound",
    "adjoint",
    "quadratic-form",
    "w-identities",
    "t-identity",
    "prop3",
    "duality-map",
    "lp-oracle",
    "bound-formula",
)


def test_run_verification_all_pass():
    results = run_verification(seed=7, cases=40)
    assert tuple(r.name for r in results) == SUITE_NAMES
    assert all(r.passed for r in results)
    assert all(r.counterexample is None for r in results)
    by_name = {r.name: r for r in results}
    assert by_name["skewness"].cases == 40
    assert by_name["t-identity"].cases == 64


def test_run_verification_deterministic():
    assert run_verification(seed=3, cases=25) == run_verification(seed=3, cases=25)


def test_run_verification_rejects_bad_cases():
    with pytest.raises(ValueError):
        run_verification(cases=0)


def test_corrupted_operator_is_caught():
    # swap in T for G: not skew, wrong tail, and can exceed the l1 norm
    results = run_verification(seed=3, cases=40, g_apply=t_apply)
    failed = [r for r in results if not r.passed]
    assert failed
    failed_names = {r.name for r in failed}
    assert failed_names & {"skewness", "tail-law", "operator-bound"}
    for r in failed:
        assert isinstance(r.counterexample, dict) and r.counterexample
    # suites that do not touch the injected operator stay green
    by_name = {r.name: r for r in results}
    for name in ("t-identity", "prop3", "lp-oracle", "bound-formula"):
        assert by_name[name].passed


def test_scaled_operator_fails_tail_law():
    results = run_verification(
        seed=3, cases=40, g_apply=lambda x: F(2) * gossez_apply(x)
    )
    assert not all(r.passed for r in results)
    by_name = {r.name: r for r in results}
    assert not by_name["tail-law"].passed
    # skewness is scale invariant, so the mutation must slip past it
    assert by_name["skewness"].passed


# ---------------------------------------------------------------------------
# generators


def test_random_sparse_respects_bounds():
    rng = random.Random(0)
    for _ in range(200):
        x = random_sparse(rng)
        assert len(x.entries) <= 20
        assert all(1 <= i <= 24 for i, _ in x.entries)
        assert all(abs(v) <= 10 for _, v in x.entries)


def test_random_fraction_bounds():
    rng = random.Random(1)
    for _ in range(200):
        v = random_fraction(rng, bound=10, max_den=4)
        assert abs(v) <= 10
        assert v.denominator <= 4


# ---------------------------------------------------------------------------
# oracles


def test_bisect_distance_bound_frozen():
    assert bisect_distance_bound(1.0) == pytest.approx(0.4641016151377544, abs=1e-14)
    d = bisect_distance_bound(2.5)
    assert abs(0.25 * 2.5 * (1.0 + d / 2.5) ** 2 + d - 1.0) <= 1e-12
    with pytest.raises(ValueError):
        bisect_distance_bound(0.0)
    with pytest.raises(ValueError):
        bisect_distance_bound(4.5)


def test_brute_force_minimum_box_example():
    problem = LPProblem(
        objective=(1.0, 1.0),
        constraints=(
            ((-1.0, -1.0), LEQ, -1.0),
            ((1.0, 0.0), LEQ, 2.0),
            ((0.0, 1.0), LEQ, 2.0),
            ((-1.0, 0.0), LEQ, 0.0),
            ((0.0, -1.0), LEQ, 0.0),
        ),
        n_vars=2,
    )
    assert brute_force_lp_minimum(problem) == pytest.approx(1.0, abs=1e-9)


def test_brute_force_minimum_equality_rows():
    problem = LPProblem(
        objective=(1.0,),
        constraints=(((1.0,), EQ, 3.0), ((1.0,), LEQ, 5.0), ((-1.0,), LEQ, 0.0)),
        n_vars=1,
    )
    assert brute_force_lp_minimum(problem) == pytest.approx(3.0, abs=1e-9)


def test_brute_force_minimum_infeasible_returns_none():
    problem = LPProblem(
        objective=(1.0,),
        constraints=(((1.0,), LEQ, -1.0), ((-1.0,), LEQ, 0.0)),
        n_vars=1,
    )
    assert brute_force_lp_minimum(problem) is None


def test_random_lp_shape():
    rng = random.Random(5)
    for _ in range(100):
        problem = random_lp(rng)
        assert 1 <= problem.n_vars <= 4
        assert len(problem.constraints) <= 8
        # every variable is boxed, so the problem is never unbounded
        assert all(len(r) == problem.n_vars for r, _, _ in problem.constraints)
