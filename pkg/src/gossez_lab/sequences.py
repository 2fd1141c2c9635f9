"""Exact algebra for two small sequence spaces.

``SparseSeq`` models a finitely supported vector of l1: a finite set of
1-based coordinates carrying nonzero rational values.  ``EvConstSeq`` models
a bounded sequence that is eventually constant: an explicit rational prefix
followed by a constant tail.  Eventually constant sequences are closed under
the operators implemented in :mod:`gossez_lab.operators`, converge, and are
exactly representable, which is what makes every pairing in this package
computable without rounding.

All scalars are ``fractions.Fraction`` and every operation here is exact.
Binary64 enters only at the boundary of :mod:`gossez_lab.probe`.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Tuple, Union

RationalLike = Union[int, str, Fraction]


def as_rational(value: RationalLike) -> Fraction:
    """Coerce an int, "p/q" string, or Fraction to a Fraction.

    Floats are rejected on purpose: conversion from binary64 loses the
    exactness guarantee, so callers must write ``Fraction(x)`` explicitly
    where they really mean the exact binary64 value.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("rational scalar expected, got bool")
    if isinstance(value, (int, str)):
        return Fraction(value)
    raise TypeError(f"rational scalar expected, got {type(value).__name__}")


def format_rational(value: Fraction) -> str:
    """Serialize a Fraction as "p/q", or "p" when the denominator is 1."""
    return str(value)


def parse_rational(text: str) -> Fraction:
    if not isinstance(text, str):
        raise ValueError(f"rational string expected, got {type(text).__name__}")
    return Fraction(text)


@dataclass(frozen=True)
class SparseSeq:
    """Finitely supported rational sequence, indexed from 1.

    ``entries`` is normalized on construction: zero values are dropped,
    indices are validated and sorted, so equal vectors compare equal.
    Accepts a mapping ``{index: value}`` or an iterable of pairs.
    """

    entries: Tuple[Tuple[int, Fraction], ...] = ()

    def __post_init__(self) -> None:
        raw = self.entries
        items: Iterable = raw.items() if isinstance(raw, Mapping) else raw
        cleaned: dict[int, Fraction] = {}
        for index, value in items:
            if isinstance(index, bool) or not isinstance(index, int):
                raise ValueError(f"coordinate index must be an int, got {index!r}")
            if index < 1:
                raise ValueError(f"coordinate index must be >= 1, got {index}")
            if index in cleaned:
                raise ValueError(f"duplicate coordinate index {index}")
            v = as_rational(value)
            if v != 0:
                cleaned[index] = v
        object.__setattr__(self, "entries", tuple(sorted(cleaned.items())))

    @classmethod
    def zero(cls) -> "SparseSeq":
        return cls(())

    @property
    def is_zero(self) -> bool:
        return not self.entries

    def support(self) -> Tuple[int, ...]:
        return tuple(i for i, _ in self.entries)

    def max_index(self) -> int:
        """Largest supported coordinate, 0 for the zero vector."""
        return self.entries[-1][0] if self.entries else 0

    def get(self, index: int) -> Fraction:
        if index < 1:
            raise ValueError(f"coordinate index must be >= 1, got {index}")
        for i, v in self.entries:
            if i == index:
                return v
        return Fraction(0)

    def as_dict(self) -> dict[int, Fraction]:
        return dict(self.entries)

    def __add__(self, other: "SparseSeq") -> "SparseSeq":
        if not isinstance(other, SparseSeq):
            return NotImplemented
        merged = self.as_dict()
        for i, v in other.entries:
            merged[i] = merged.get(i, Fraction(0)) + v
        return SparseSeq(merged)

    def __sub__(self, other: "SparseSeq") -> "SparseSeq":
        if not isinstance(other, SparseSeq):
            return NotImplemented
        return self + (-other)

    def __neg__(self) -> "SparseSeq":
        return SparseSeq(tuple((i, -v) for i, v in self.entries))

    def __mul__(self, scalar: RationalLike) -> "SparseSeq":
        a = as_rational(scalar)
        return SparseSeq(tuple((i, a * v) for i, v in self.entries))

    __rmul__ = __mul__

    def to_json_dict(self) -> dict:
        return {"entries": {str(i): format_rational(v) for i, v in self.entries}}

    @classmethod
    def from_json_dict(cls, data) -> "SparseSeq":
        if not isinstance(data, dict) or set(data) != {"entries"}:
            raise ValueError('SparseSeq JSON must be {"entries": {...}}')
        entries = data["entries"]
        if not isinstance(entries, dict):
            raise ValueError('"entries" must be an object mapping index to "p/q"')
        out = {}
        for key, text in entries.items():
            try:
                index = int(key)
            except (TypeError, ValueError):
                raise ValueError(f"bad coordinate index {key!r}") from None
            out[index] = parse_rational(text)
        return cls(out)


@dataclass(frozen=True)
class EvConstSeq:
    """Eventually constant rational sequence: an explicit prefix, then a tail.

    Canonical form is enforced on construction: trailing prefix entries equal
    to the tail value are trimmed, so two representations of the same
    sequence are structurally equal.
    """

    prefix: Tuple[Fraction, ...] = ()
    tail: Fraction = Fraction(0)

    def __post_init__(self) -> None:
        tail = as_rational(self.tail)
        prefix = [as_rational(v) for v in self.prefix]
        while prefix and prefix[-1] == tail:
            prefix.pop()
        object.__setattr__(self, "prefix", tuple(prefix))
        object.__setattr__(self, "tail", tail)

    @property
    def prefix_len(self) -> int:
        return len(self.prefix)

    def value_at(self, index: int) -> Fraction:
        if index < 1:
            raise ValueError(f"coordinate index must be >= 1, got {index}")
        if index <= len(self.prefix):
            return self.prefix[index - 1]
        return self.tail

    def __add__(self, other: "EvConstSeq") -> "EvConstSeq":
        if not isinstance(other, EvConstSeq):
            return NotImplemented
        n = max(len(self.prefix), len(other.prefix))
        prefix = tuple(self.value_at(m) + other.value_at(m) for m in range(1, n + 1))
        return EvConstSeq(prefix, self.tail + other.tail)

    def __sub__(self, other: "EvConstSeq") -> "EvConstSeq":
        if not isinstance(other, EvConstSeq):
            return NotImplemented
        return self + (-other)

    def __neg__(self) -> "EvConstSeq":
        return EvConstSeq(tuple(-v for v in self.prefix), -self.tail)

    def __mul__(self, scalar: RationalLike) -> "EvConstSeq":
        a = as_rational(scalar)
        return EvConstSeq(tuple(a * v for v in self.prefix), a * self.tail)

    __rmul__ = __mul__

    def to_json_dict(self) -> dict:
        return {
            "prefix": [format_rational(v) for v in self.prefix],
            "tail": format_rational(self.tail),
        }

    @classmethod
    def from_json_dict(cls, data) -> "EvConstSeq":
        if not isinstance(data, dict) or set(data) != {"prefix", "tail"}:
            raise ValueError('EvConstSeq JSON must be {"prefix": [...], "tail": "p/q"}')
        prefix = data["prefix"]
        if not isinstance(prefix, list):
            raise ValueError('"prefix" must be a list of "p/q" strings')
        return cls(tuple(parse_rational(v) for v in prefix), parse_rational(data["tail"]))


def l1_norm(x: SparseSeq) -> Fraction:
    """Sum of absolute values over the support."""
    return sum((abs(v) for _, v in x.entries), Fraction(0))


def sup_norm(y: EvConstSeq) -> Fraction:
    """Largest absolute value; attained on the prefix or the tail."""
    best = abs(y.tail)
    for v in y.prefix:
        if abs(v) > best:
            best = abs(v)
    return best


def pair0(x: SparseSeq, y: EvConstSeq) -> Fraction:
    """Coordinatewise duality pairing <x, y> = sum_m x_m * y_m.

    The sum is finite because x is finitely supported, and exact because
    both sides are rational.
    """
    return sum((v * y.value_at(i) for i, v in x.entries), Fraction(0))


def limit(y: EvConstSeq) -> Fraction:
    """Limit of an eventually constant sequence: its tail value."""
    return y.tail


def e_star() -> EvConstSeq:
    """The all-ones sequence; as a functional on l1 it sums coordinates."""
    return EvConstSeq((), Fraction(1))


def e_m(m: int) -> EvConstSeq:
    """The m-th coordinate functional: 1 at position m, 0 elsewhere."""
    if m < 1:
        raise ValueError(f"coordinate index must be >= 1, got {m}")
    return EvConstSeq((Fraction(0),) * (m - 1) + (Fraction(1),), Fraction(0))


def point_mass(m: int, value: RationalLike) -> SparseSeq:
    """The l1 vector carrying ``value`` at coordinate m and 0 elsewhere."""
    if m < 1:
        raise ValueError(f"coordinate index must be >= 1, got {m}")
    return SparseSeq({m: as_rational(value)})
