"""The skew summation operator G on l1 and its finite bidual model.

G maps a finitely supported x to the bounded sequence

    (Gx)_m = sum_{n > m} x_n - sum_{n < m} x_n,

which is eventually constant with tail -sum_n x_n, hence lands in the space
of convergent sequences.  G is skew: <w, Gx> + <x, Gw> = 0 and <x, Gx> = 0
for the pairing of l1 with bounded sequences.

``BidualElem`` is a coordinate model for the span, inside the bidual of the
convergent-sequence predual, of the canonical image of l1 and one extra
norm-one functional that evaluates a convergent sequence at its limit.  An
element w^ + alpha * (limit functional) is stored as the pair (w, alpha).
On this span the adjoint of G and all pairings are exactly computable:

    G* (w^ + alpha * lim) = -(G w)^* - alpha * e*,

acting on l1 coordinatewise, where e* is the all-ones sequence.  The
quadratic form of G* on such an element collapses to -alpha**2, which is the
exact mechanism this package exists to expose: it is zero precisely on the
image of l1 and strictly negative as soon as the limit functional enters.

``t_apply``/``y_seq`` implement an auxiliary upper-triangular operator
(Tx)_m = x_m + 2 sum_{n>m} x_n together with finite preimages of the
coordinate functionals under it: T(y_seq(n)) equals the n-th coordinate
functional, so the image of T is dense in the sequences converging to 0.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .sequences import (
    EvConstSeq,
    RationalLike,
    SparseSeq,
    as_rational,
    e_star,
    format_rational,
    l1_norm,
    limit,
    pair0,
    parse_rational,
)


def gossez_apply(x: SparseSeq) -> EvConstSeq:
    """Apply G: (Gx)_m = sum_{n>m} x_n - sum_{n<m} x_n, tail -sum_n x_n."""
    top = x.max_index()
    values = x.as_dict()
    total = sum(values.values(), Fraction(0))
    below = Fraction(0)
    prefix = []
    for m in range(1, top + 1):
        xm = values.get(m, Fraction(0))
        # above - below with above = total - below - x_m
        prefix.append(total - 2 * below - xm)
        below += xm
    return EvConstSeq(tuple(prefix), -total)


def t_apply(x: SparseSeq) -> EvConstSeq:
    """Apply T: (Tx)_m = x_m + 2 sum_{n>m} x_n; finitely supported output."""
    top = x.max_index()
    values = x.as_dict()
    suffix = sum(values.values(), Fraction(0))
    prefix = []
    for m in range(1, top + 1):
        xm = values.get(m, Fraction(0))
        suffix -= xm
        prefix.append(xm + 2 * suffix)
    return EvConstSeq(tuple(prefix), Fraction(0))


def y_seq(n: int) -> SparseSeq:
    """The unique vector supported on 1..n with T(y_seq(n)) = e_m(n).

    Back-substitution in the triangular system x_m + 2 sum_{k>m} x_k = 0
    (m < n), x_n = 1 gives alternating entries 2 * (-1)**(n-m) below the
    final 1: (2, -2, ..., 2, -2, 1) for odd n and (-2, 2, ..., 2, -2, 1)
    for even n.
    """
    if n < 1:
        raise ValueError(f"index must be >= 1, got {n}")
    entries: dict[int, Fraction] = {n: Fraction(1)}
    for m in range(1, n):
        entries[m] = Fraction(2 if (n - m) % 2 == 0 else -2)
    return SparseSeq(entries)


@dataclass(frozen=True)
class BidualElem:
    """w^ + alpha * (limit functional), stored as the pair (w, alpha).

    Acts on a convergent sequence y by <y, self> = <w, y> + alpha * lim y;
    see :func:`pair1`.  The norm is additive across the two parts because
    the limit functional vanishes on the image of l1: see
    :func:`bidual_norm`.
    """

    w: SparseSeq = SparseSeq()
    alpha: Fraction = Fraction(0)

    def __post_init__(self) -> None:
        if not isinstance(self.w, SparseSeq):
            raise TypeError("w must be a SparseSeq")
        object.__setattr__(self, "alpha", as_rational(self.alpha))

    @classmethod
    def embed(cls, x: SparseSeq) -> "BidualElem":
        """Canonical image of an l1 vector: alpha = 0."""
        return cls(x, Fraction(0))

    @classmethod
    def limit_functional(cls) -> "BidualElem":
        """The extra norm-one element: evaluates a convergent sequence at
        its limit, and annihilates every coordinate functional."""
        return cls(SparseSeq(), Fraction(1))

    def to_json_dict(self) -> dict:
        return {"w": self.w.to_json_dict(), "alpha": format_rational(self.alpha)}

    @classmethod
    def from_json_dict(cls, data) -> "BidualElem":
        if not isinstance(data, dict) or set(data) != {"w", "alpha"}:
            raise ValueError('BidualElem JSON must be {"w": {...}, "alpha": "p/q"}')
        return cls(SparseSeq.from_json_dict(data["w"]), parse_rational(data["alpha"]))


def pair1(y: EvConstSeq, xss: BidualElem) -> Fraction:
    """Pairing of a convergent sequence with a bidual element:
    <y, w^ + alpha*lim> = <w, y> + alpha * lim y."""
    return pair0(xss.w, y) + xss.alpha * limit(y)


def w_apply(xss: BidualElem) -> SparseSeq:
    """Project a bidual element back to l1 by evaluating it against every
    coordinate functional.  The limit functional annihilates each coordinate
    functional, so only the w part survives: W(w^ + alpha*lim) = w.  W is a
    norm-one retraction onto the image of l1."""
    return xss.w


def wstar_pair(xss: BidualElem) -> Fraction:
    """Pair a bidual element with e*^ - W*(e*), the functional that isolates
    the limit part: the result is <e*, xss> - <W xss, e*> = alpha.  Computed
    through the two pairings rather than read off the coordinate, so the
    two routes can be checked against each other."""
    return pair1(e_star(), xss) - pair0(w_apply(xss), e_star())


def bidual_norm(xss: BidualElem) -> Fraction:
    """Norm of w^ + alpha*lim, equal to ||w||_1 + |alpha|.

    Upper bound: triangle inequality.  Lower bound: pair with the
    eventually constant sequence matching sign(w) on the support of w and
    with tail sign(alpha); it has sup norm at most 1 and pairs to exactly
    ||w||_1 + |alpha|, so the norm is attained inside the convergent
    sequences and no extension argument is needed.
    """
    return l1_norm(xss.w) + abs(xss.alpha)


def g_star_apply(xss: BidualElem) -> EvConstSeq:
    """Adjoint of G on the modeled span: G*(w^ + alpha*lim) = -Gw - alpha*e*.

    Characterized by <x, G* xss> = <Gx, xss> for every finitely supported x.
    In particular G* sends the limit functional to -e*.
    """
    return -gossez_apply(xss.w) - xss.alpha * e_star()


def g_star_quadratic(xss: BidualElem) -> Fraction:
    """Quadratic form <G* xss, xss>, computed through the pairing.

    Collapses exactly to -alpha**2: the skew part contributes nothing and
    the cross terms cancel, leaving only the limit-functional component.
    """
    return pair1(g_star_apply(xss), xss)
