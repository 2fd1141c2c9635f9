"""The normalized duality map J on l1 and exact residual minimization.

J x is the set of bounded sequences s with ||s||_sup = ||x||_1 and
<x, s> = ||x||_1 ** 2.  Holder forces s_m = ||x||_1 * sign(x_m) on the
support of x; off the support s_m is free in [-||x||_1, ||x||_1].  That
finite description (``SelectionSpec``) makes the best-selection residual

    min over s in Jx of  || Gx + lambda * s - target ||_sup

an exact coordinatewise computation: forced coordinates contribute their
fixed residual, free coordinates clamp toward the target and contribute
max(0, |(Gx)_m - target_m| - lambda * ||x||_1).

``prop3_witness`` materializes the explicit family of range points

    (-k + 2*lambda*k, -k - 2*lambda*k, u_3, u_4, ...)  in  (G + lambda J)(k e_1 - k e_2)

for |u_m| <= 2*lambda*k, which pins down an affine slab inside the range.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Tuple

from .operators import gossez_apply
from .sequences import (
    EvConstSeq,
    RationalLike,
    SparseSeq,
    as_rational,
    l1_norm,
    pair0,
    sup_norm,
)


class Prop3PreconditionError(ValueError):
    """A free coordinate of the requested range point exceeds 2*lambda*k.

    Raised before any membership test runs, so a precondition violation is
    never confused with a genuine membership failure.
    """


@dataclass(frozen=True)
class SelectionSpec:
    """Finite description of J x: the common radius ||x||_1, the forced
    values on the support, and the bound for all free coordinates."""

    radius: Fraction
    forced: Tuple[Tuple[int, Fraction], ...]
    free_bound: Fraction


def selection_spec(x: SparseSeq) -> SelectionSpec:
    r = l1_norm(x)
    forced = tuple((m, r if v > 0 else -r) for m, v in x.entries)
    return SelectionSpec(radius=r, forced=forced, free_bound=r)


def duality_map_contains(x: SparseSeq, y: EvConstSeq) -> bool:
    """Exact membership test y in J x: sup norm equal to ||x||_1 and pairing
    equal to ||x||_1 ** 2."""
    r = l1_norm(x)
    return sup_norm(y) == r and pair0(x, y) == r * r


def canonical_selection(x: SparseSeq) -> EvConstSeq:
    """The member of J x that is zero off the support of x."""
    spec = selection_spec(x)
    prefix = [Fraction(0)] * x.max_index()
    for m, v in spec.forced:
        prefix[m - 1] = v
    return EvConstSeq(tuple(prefix), Fraction(0))


def _clamp(value: Fraction, bound: Fraction) -> Fraction:
    if value > bound:
        return bound
    if value < -bound:
        return -bound
    return value


def _require_positive_lambda(lam: Fraction) -> None:
    if lam <= 0:
        raise ValueError(f"lambda must be positive, got {lam}")


def clamped_residual(x: SparseSeq, lam: RationalLike, target: EvConstSeq) -> Fraction:
    """min over s in Jx of ||Gx + lambda*s - target||_sup, exactly.

    Coordinates on the support of x are forced; every other coordinate
    (including the whole tail) independently clamps its selection value
    toward the target, so the minimum is a finite maximum of per-coordinate
    residuals.
    """
    lam = as_rational(lam)
    _require_positive_lambda(lam)
    g = gossez_apply(x)
    r = l1_norm(x)
    support = x.as_dict()
    top = max(x.max_index(), g.prefix_len, target.prefix_len)
    zero = Fraction(0)
    best = max(zero, abs(g.tail - target.tail) - lam * r)
    for m in range(1, top + 1):
        if m in support:
            forced = r if support[m] > 0 else -r
            res = abs(g.value_at(m) + lam * forced - target.value_at(m))
        else:
            res = max(zero, abs(g.value_at(m) - target.value_at(m)) - lam * r)
        if res > best:
            best = res
    return best


def clamp_selection(x: SparseSeq, lam: RationalLike, target: EvConstSeq) -> EvConstSeq:
    """A selection attaining :func:`clamped_residual`: forced on the support,
    clamped toward the target elsewhere.  Always a member of J x."""
    lam = as_rational(lam)
    _require_positive_lambda(lam)
    g = gossez_apply(x)
    r = l1_norm(x)
    support = x.as_dict()
    top = max(x.max_index(), g.prefix_len, target.prefix_len)
    prefix = []
    for m in range(1, top + 1):
        if m in support:
            prefix.append(r if support[m] > 0 else -r)
        else:
            prefix.append(_clamp((target.value_at(m) - g.value_at(m)) / lam, r))
    tail = _clamp((target.tail - g.tail) / lam, r)
    return EvConstSeq(tuple(prefix), tail)


def prop3_witness(
    k: RationalLike, lam: RationalLike, u: EvConstSeq
) -> Tuple[EvConstSeq, bool]:
    """Build the range point (-k+2*lambda*k, -k-2*lambda*k, u_3, u_4, ...)
    and verify it lies in (G + lambda*J)(k e_1 - k e_2).

    Coordinates 1 and 2 of u are ignored; every other coordinate of u,
    including the tail, must satisfy |u_m| <= 2*lambda*k, otherwise
    :class:`Prop3PreconditionError` is raised.  Returns the point together
    with the outcome of the exact membership test
    (y - Gx) / lambda in J x.
    """
    k = as_rational(k)
    lam = as_rational(lam)
    if k <= 0:
        raise ValueError(f"k must be positive, got {k}")
    _require_positive_lambda(lam)
    bound = 2 * lam * k
    for m in range(3, u.prefix_len + 1):
        if abs(u.value_at(m)) > bound:
            raise Prop3PreconditionError(
                f"|u_{m}| = {abs(u.value_at(m))} exceeds 2*lambda*k = {bound}"
            )
    if abs(u.tail) > bound:
        raise Prop3PreconditionError(
            f"|u tail| = {abs(u.tail)} exceeds 2*lambda*k = {bound}"
        )
    x = SparseSeq({1: k, 2: -k})
    head = (-k + bound, -k - bound)
    rest = tuple(u.value_at(m) for m in range(3, u.prefix_len + 1))
    y = EvConstSeq(head + rest, u.tail)
    residual = (y - gossez_apply(x)) * (Fraction(1) / lam)
    return y, duality_map_contains(x, residual)
