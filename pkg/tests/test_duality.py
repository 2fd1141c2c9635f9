"""Duality map selections, the clamped residual, and the witness family."""

import random
from fractions import Fraction as F

import pytest

from gossez_lab.duality import (
    Prop3PreconditionError,
    canonical_selection,
    clamp_selection,
    clamped_residual,
    duality_map_contains,
    prop3_witness,
    selection_spec,
)
from gossez_lab.operators import gossez_apply
from gossez_lab.sequences import (
    EvConstSeq,
    SparseSeq,
    e_star,
    l1_norm,
    pair0,
    point_mass,
    sup_norm,
)
from gossez_lab.verification import bounded_fraction, random_fraction, random_sparse

NEG_E_STAR = -e_star()


def test_selection_spec_examples():
    spec = selection_spec(SparseSeq({1: F(1, 2), 3: F(-3, 2)}))
    assert spec.radius == 2
    assert spec.forced == ((1, F(2)), (3, F(-2)))
    assert spec.free_bound == 2
    zero = selection_spec(SparseSeq())
    assert zero.radius == 0 and zero.forced == () and zero.free_bound == 0


def test_duality_map_contains_examples():
    x = point_mass(1, 1) - point_mass(2, 1)
    assert duality_map_contains(x, EvConstSeq((2, -2), 0))
    assert duality_map_contains(x, EvConstSeq((2, -2), 1))  # free coords any size <= 2
    assert not duality_map_contains(x, EvConstSeq((2, -1), 0))
    assert not duality_map_contains(x, EvConstSeq((2, -2, 3), 0))  # sup norm too big
    assert duality_map_contains(SparseSeq(), EvConstSeq((), 0))
    assert not duality_map_contains(SparseSeq(), EvConstSeq((1,), 0))


def test_canonical_selection_membership_and_shape():
    x = SparseSeq({1: F(1, 2), 3: F(-3, 2)})
    s = canonical_selection(x)
    assert s == EvConstSeq((2, 0, -2), 0)
    assert duality_map_contains(x, s)
    assert canonical_selection(SparseSeq()) == EvConstSeq((), 0)


def test_selection_properties_seeded():
    rng = random.Random(11)
    for _ in range(300):
        x = random_sparse(rng, max_support=8)
        s = canonical_selection(x)
        assert duality_map_contains(x, s)
        t = abs(random_fraction(rng, bound=5)) + F(1, 4)
        assert duality_map_contains(t * x, t * s)
        assert duality_map_contains(-x, -s)


def test_clamped_residual_examples():
    assert clamped_residual(point_mass(1, -1), 1, NEG_E_STAR) == 1
    assert clamped_residual(SparseSeq(), 1, NEG_E_STAR) == 1
    x = point_mass(1, 1) - point_mass(2, 1)
    assert clamped_residual(x, 1, EvConstSeq((1, -3), 0)) == 0
    with pytest.raises(ValueError):
        clamped_residual(x, 0, NEG_E_STAR)
    with pytest.raises(ValueError):
        clamped_residual(x, F(-1, 2), NEG_E_STAR)


def test_clamp_selection_attains_and_belongs():
    rng = random.Random(17)
    for _ in range(300):
        x = random_sparse(rng, max_support=6)
        lam = F(rng.randint(1, 6), rng.randint(1, 3))
        prefix = tuple(random_fraction(rng) for _ in range(rng.randint(0, 6)))
        target = EvConstSeq(prefix, random_fraction(rng))
        best = clamped_residual(x, lam, target)
        s = clamp_selection(x, lam, target)
        assert duality_map_contains(x, s)
        assert sup_norm(gossez_apply(x) + lam * s - target) == best


def test_clamped_residual_is_a_minimum_over_random_selections():
    rng = random.Random(23)
    for _ in range(300):
        x = random_sparse(rng, max_support=6)
        r = l1_norm(x)
        lam = F(rng.randint(1, 6), rng.randint(1, 3))
        target = EvConstSeq(
            tuple(random_fraction(rng) for _ in range(rng.randint(0, 5))),
            random_fraction(rng),
        )
        forced = dict(selection_spec(x).forced)
        top = x.max_index() + rng.randint(0, 3)
        s = EvConstSeq(
            tuple(forced.get(m, bounded_fraction(rng, r)) for m in range(1, top + 1)),
            bounded_fraction(rng, r),
        )
        assert duality_map_contains(x, s)
        assert sup_norm(gossez_apply(x) + lam * s - target) >= clamped_residual(
            x, lam, target
        )


def test_prop3_example():
    y, member = prop3_witness(2, F(1, 2), EvConstSeq((), 2))
    assert y == EvConstSeq((0, -4), 2)
    assert member
    # first two coordinates of u are ignored
    y2, member2 = prop3_witness(2, F(1, 2), EvConstSeq((99, -99), 2))
    assert y2 == y and member2


def test_prop3_precondition_distinct_from_membership():
    with pytest.raises(Prop3PreconditionError):
        prop3_witness(1, 1, EvConstSeq((0, 0, 5), 0))
    with pytest.raises(Prop3PreconditionError):
        prop3_witness(1, 1, EvConstSeq((), 3))
    with pytest.raises(ValueError):
        prop3_witness(0, 1, EvConstSeq((), 0))
    with pytest.raises(ValueError):
        prop3_witness(1, -1, EvConstSeq((), 0))


def test_prop3_membership_holds_on_seeded_family():
    rng = random.Random(5)
    for _ in range(200):
        k = F(rng.randint(1, 5), rng.randint(1, 2))
        lam = F(rng.randint(1, 8), rng.randint(1, 2))
        bound = 2 * lam * k
        u = EvConstSeq(
            tuple(bounded_fraction(rng, bound) for _ in range(rng.randint(0, 6))),
            bounded_fraction(rng, bound),
        )
        y, member = prop3_witness(k, lam, u)
        assert member
        assert y.value_at(1) == -k + bound and y.value_at(2) == -k - bound
        x = SparseSeq({1: k, 2: -k})
        scaled = (y - gossez_apply(x)) * (F(1) / lam)
        assert sup_norm(scaled) == l1_norm(x)
        assert pair0(x, scaled) == l1_norm(x) ** 2
