"""Evaluators (maps of the ambient field) and bijectivity sweeps."""

from __future__ import annotations

from typing import Callable

import numpy as np

from .errors import BudgetExceeded
from .field import FieldContext, FieldElement, exhaustive_budget

_CHUNK = 1 << 15


class FieldMap:
    """A total map of F_{p^D}, vectorised over coefficient arrays.

    ``fn`` takes an integer array of shape ``(k, D)`` and returns one of the
    same shape.  Calling the map on a :class:`FieldElement` returns a
    :class:`FieldElement`.
    """

    def __init__(self, ctx: FieldContext, fn: Callable[[np.ndarray], np.ndarray], name: str = "f"):
        self.ctx = ctx
        self.fn = fn
        self.name = name

    def __repr__(self) -> str:
        return f"FieldMap({self.name!r} on F_{self.ctx.p}^{self.ctx.degree})"

    def __call__(self, x):
        if isinstance(x, FieldElement):
            return FieldElement(self.ctx, self.fn(x.vec[None, :])[0])
        if isinstance(x, (int, np.integer)):
            return self(FieldElement(self.ctx, self.ctx.from_index(int(x))))
        arr = np.asarray(x, dtype=np.int64)
        if arr.ndim == 1:
            return self.fn(arr[None, :])[0]
        return self.fn(arr)

    def values(self, elems: np.ndarray) -> np.ndarray:
        """Images of a batch, evaluated in bounded chunks."""
        elems = np.asarray(elems, dtype=np.int64)
        if len(elems) <= _CHUNK:
            return self.fn(elems)
        parts = [self.fn(elems[i : i + _CHUNK]) for i in range(0, len(elems), _CHUNK)]
        return np.concatenate(parts)

    def table(self, budget: int | None = None) -> np.ndarray:
        """Index of f(x) for every x, in ascending index order of x."""
        ctx = self.ctx
        budget = exhaustive_budget() if budget is None else budget
        if ctx.order > budget:
            raise BudgetExceeded(f"domain of size {ctx.order} exceeds budget {budget}")
        out = np.empty(ctx.order, dtype=np.int64)
        for lo in range(0, ctx.order, _CHUNK):
            idx = np.arange(lo, min(lo + _CHUNK, ctx.order), dtype=np.int64)
            out[lo : lo + len(idx)] = ctx.to_index(self.fn(ctx.from_index(idx)))
        return out

    def __add__(self, other: FieldMap) -> FieldMap:
        ctx = self.ctx
        return FieldMap(ctx, lambda x: ctx.add(self.fn(x), other.fn(x)), f"({self.name} + {other.name})")

    def __sub__(self, other: FieldMap) -> FieldMap:
        ctx = self.ctx
        return FieldMap(ctx, lambda x: ctx.sub(self.fn(x), other.fn(x)), f"({self.name} - {other.name})")

    def plus_x(self) -> FieldMap:
        """x -> f(x) + x."""
        return self + identity(self.ctx)

    def compose(self, inner: FieldMap) -> FieldMap:
        return FieldMap(self.ctx, lambda x: self.fn(inner.fn(x)), f"{self.name}∘{inner.name}")


def identity(ctx: FieldContext) -> FieldMap:
    return FieldMap(ctx, lambda x: np.array(x, dtype=np.int64), "x")


def is_bijective_table(table: np.ndarray) -> bool:
    return bool(np.all(np.bincount(table, minlength=len(table)) == 1))


def permutes_field(f: FieldMap, budget: int | None = None) -> bool:
    return is_bijective_table(f.table(budget))


def permutes_set(f: FieldMap, elems: np.ndarray) -> bool:
    """True iff f restricted to ``elems`` is a bijection onto ``elems``."""
    ctx = f.ctx
    dom = np.sort(ctx.to_index(elems))
    img = np.sort(ctx.to_index(f.values(elems)))
    return bool(np.array_equal(dom, img))


def find_collision(f: FieldMap, budget: int | None = None) -> tuple[int, int] | None:
    """Two distinct indices with equal image, or None if f is injective."""
    table = f.table(budget)
    order = np.argsort(table, kind="stable")
    sorted_vals = table[order]
    dup = np.nonzero(sorted_vals[1:] == sorted_vals[:-1])[0]
    if dup.size == 0:
        return None
    k = int(dup[0])
    return int(order[k]), int(order[k + 1])


def is_complete_mapping(f: FieldMap, budget: int | None = None) -> bool:
    """Both f and f + x are bijections of the field (exhaustive sweep)."""
    return permutes_field(f, budget) and permutes_field(f.plus_x(), budget)
