"""Exact arithmetic in Z[xi_p], xi_p a primitive p-th root of unity.

Elements are stored as integer coordinates on the basis 1, xi, ..., xi^{p-2};
xi^{p-1} is rewritten as -(1 + xi + ... + xi^{p-2}).  For p = 2 the ring is Z.
"""

from __future__ import annotations

from typing import Sequence

from .errors import PMismatch


class CyclotomicInteger:
    __slots__ = ("p", "coords")

    def __init__(self, p: int, coords: Sequence[int]):
        coords = tuple(int(c) for c in coords)
        if len(coords) != p - 1:
            raise ValueError(f"need {p - 1} coordinates for p = {p}, got {len(coords)}")
        self.p = p
        self.coords = coords

    @classmethod
    def from_counts(cls, p: int, counts: Sequence[int]) -> CyclotomicInteger:
        """sum_j counts[j] xi^j for j < p, reduced to the basis."""
        counts = [int(c) for c in counts]
        if len(counts) < p:
            counts += [0] * (p - len(counts))
        top = counts[p - 1]
        return cls(p, [counts[j] - top for j in range(p - 1)])

    @classmethod
    def integer(cls, p: int, k: int) -> CyclotomicInteger:
        return cls(p, [k] + [0] * (p - 2))

    @classmethod
    def root(cls, p: int, j: int = 1) -> CyclotomicInteger:
        counts = [0] * p
        counts[j % p] = 1
        return cls.from_counts(p, counts)

    def _full(self) -> list[int]:
        return list(self.coords) + [0]

    def _check(self, other: CyclotomicInteger) -> None:
        if not isinstance(other, CyclotomicInteger):
            raise TypeError(f"cannot combine with {type(other).__name__}")
        if other.p != self.p:
            raise PMismatch(f"p = {self.p} vs p = {other.p}")

    def __add__(self, other: CyclotomicInteger) -> CyclotomicInteger:
        self._check(other)
        return CyclotomicInteger(self.p, [a + b for a, b in zip(self.coords, other.coords)])

    def __sub__(self, other: CyclotomicInteger) -> CyclotomicInteger:
        self._check(other)
        return CyclotomicInteger(self.p, [a - b for a, b in zip(self.coords, other.coords)])

    def __neg__(self) -> CyclotomicInteger:
        return CyclotomicInteger(self.p, [-a for a in self.coords])

    def __mul__(self, other: CyclotomicInteger) -> CyclotomicInteger:
        self._check(other)
        p = self.p
        acc = [0] * p
        for i, a in enumerate(self.coords):
            if a:
                for j, b in enumerate(other.coords):
                    acc[(i + j) % p] += a * b
        return CyclotomicInteger.from_counts(p, acc)

    def conj(self) -> CyclotomicInteger:
        """Complex conjugate: xi^j -> xi^{-j}."""
        p = self.p
        full = self._full()
        return CyclotomicInteger.from_counts(p, [full[(-j) % p] for j in range(p)])

    def abs_squared(self) -> CyclotomicInteger:
        return self * self.conj()

    def is_rational_integer(self) -> bool:
        return not any(self.coords[1:])

    def __int__(self) -> int:
        if not self.is_rational_integer():
            raise ValueError(f"{self} is not a rational integer")
        return self.coords[0]

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            return self.is_rational_integer() and self.coords[0] == other
        return isinstance(other, CyclotomicInteger) and self.p == other.p and self.coords == other.coords

    def __hash__(self) -> int:
        return hash((self.p, self.coords))

    def __repr__(self) -> str:
        terms = [f"{c}*xi^{j}" if j else str(c) for j, c in enumerate(self.coords) if c]
        return f"Cyc{self.p}({' + '.join(terms) or '0'})"


def cyc_add(u: CyclotomicInteger, v: CyclotomicInteger) -> CyclotomicInteger:
    return u + v


def cyc_mul(u: CyclotomicInteger, v: CyclotomicInteger) -> CyclotomicInteger:
    return u * v


def cyc_conj(u: CyclotomicInteger) -> CyclotomicInteger:
    return u.conj()
