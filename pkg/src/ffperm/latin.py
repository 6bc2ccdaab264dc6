"""Latin squares from complete mappings (diagonal method) and MOLS families.

Rows and columns are labelled by element index, so square[i][j] is the index
of Q(x_i, y_j) where x_i has index i.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .complete import CMSpec, SubfieldPolynomial, base_is_cpp
from .errors import InvalidParameters, NotACompleteMapping, OrderMismatch
from .field import FieldContext
from .maps import FieldMap, is_complete_mapping


@dataclass(eq=False)
class LatinSquare:
    grid: np.ndarray  # (N, N) integer array

    def __post_init__(self):
        self.grid = np.asarray(self.grid, dtype=np.int64)
        if self.grid.ndim != 2 or self.grid.shape[0] != self.grid.shape[1]:
            raise InvalidParameters("a Latin square grid must be N x N")

    @property
    def order(self) -> int:
        return self.grid.shape[0]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LatinSquare):
            return NotImplemented
        return self.grid.shape == other.grid.shape and bool(np.array_equal(self.grid, other.grid))

    def to_json(self) -> dict:
        return {"order": self.order, "rows": self.grid.tolist()}

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["order", self.order])
        w.writerows(self.grid.tolist())
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> LatinSquare:
        rows = list(csv.reader(io.StringIO(text)))
        order = int(rows[0][1])
        grid = np.array([[int(v) for v in row] for row in rows[1 : order + 1]], dtype=np.int64)
        return cls(grid)

    @classmethod
    def from_json(cls, data: dict | str) -> LatinSquare:
        if isinstance(data, str):
            data = json.loads(data)
        return cls(np.array(data["rows"], dtype=np.int64))


def _permutation_rows(grid: np.ndarray) -> bool:
    N = grid.shape[1]
    if grid.min() < 0 or grid.max() >= N:
        return False
    seen = np.zeros(grid.shape, dtype=bool)
    np.put_along_axis(seen, grid, True, axis=1)
    return bool(seen.all())


def is_latin(sq: LatinSquare) -> bool:
    """Every row and every column is a permutation of range(N)."""
    return _permutation_rows(sq.grid) and _permutation_rows(sq.grid.T)


def are_orthogonal(a: LatinSquare, b: LatinSquare) -> bool:
    """All N^2 superimposed pairs (a[i][j], b[i][j]) are distinct."""
    if a.order != b.order:
        raise OrderMismatch(f"orders {a.order} and {b.order} differ")
    N = a.order
    cells = (a.grid * N + b.grid).reshape(-1)
    seen = np.zeros(N * N, dtype=bool)
    seen[cells] = True
    return bool(seen.all())


def cayley_table(ctx: FieldContext, budget: int | None = None) -> LatinSquare:
    """Addition table x + y of the field."""
    idx = np.arange(ctx.order, dtype=np.int64)
    if budget is not None and ctx.order > budget:
        from .errors import BudgetExceeded

        raise BudgetExceeded(f"order {ctx.order} exceeds budget {budget}")
    return LatinSquare(np.stack([ctx.add_indices(np.full_like(idx, i), idx) for i in idx]))


def square_from_table(ctx: FieldContext, table: np.ndarray) -> LatinSquare:
    """Q(x, y) = P(x + y) + y, given the index table of P."""
    N = ctx.order
    idx = np.arange(N, dtype=np.int64)
    rows = []
    for i in range(N):
        s = ctx.add_indices(np.full_like(idx, i), idx)  # x_i + y_j
        rows.append(ctx.add_indices(table[s], idx))
    return LatinSquare(np.stack(rows))


def square_from_cm(P: FieldMap, check: bool = True, budget: int | None = None) -> LatinSquare:
    """Diagonal-method square of a complete mapping P."""
    if check and not is_complete_mapping(P, budget):
        raise NotACompleteMapping(f"{P.name} is not a complete mapping")
    return square_from_table(P.ctx, P.table(budget))


def mols_member(ctx: FieldContext, m: int, r: int, G: SubfieldPolynomial, a, b) -> FieldMap:
    """x (a x^{p^r-1} - a T(x)^{p^r-1} + G(T(x)) + b)."""
    a, b = ctx.vec(a), ctx.vec(b)
    e = ctx.p**r

    def fn(x):
        t = ctx.trace(x, m)
        inner = ctx.sub(ctx.pow(x, e - 1), ctx.pow(t, e - 1))
        inner = ctx.add(ctx.mul(a, inner), ctx.add(G.evaluate(t), b))
        return ctx.mul(x, inner)

    return FieldMap(ctx, fn, "P")


def build_mols(ctx: FieldContext, m: int, n: int, r: int, G: SubfieldPolynomial,
               b_list: Sequence, a_list: Sequence, budget: int | None = None) -> list[LatinSquare]:
    """Cayley table followed by one diagonal-method square per b_i."""
    b_vecs = [ctx.vec(b) for b in b_list]
    a_vecs = [ctx.vec(a) for a in a_list]
    if len(a_vecs) != len(b_vecs):
        raise InvalidParameters("need one a_i per b_i")
    b_idx = [ctx.to_index(b) for b in b_vecs]
    if len(set(b_idx)) != len(b_idx):
        raise InvalidParameters("b_i must be pairwise distinct")
    # parameter hypotheses are those of the G-family; CMSpec checks them
    probe = CMSpec(ctx, m, n, r, G, ctx.element(a_vecs[0]) if a_vecs else ctx.one)
    probe.require_valid()
    for a, b, bi in zip(a_vecs, b_vecs, b_idx):
        if not ctx.in_subfield(a, m) or not np.any(a):
            raise InvalidParameters("each a_i must be a nonzero element of F_q")
        if not ctx.in_subfield(b, m):
            raise InvalidParameters(f"b = {bi} is not in F_q")
        if not base_is_cpp(ctx, m, lambda y, b=b: ctx.mul(y, ctx.add(G.evaluate(y), b))):
            raise NotACompleteMapping(f"x(G(x) + b) is not a complete mapping of F_q for b = {bi}")
    squares = [cayley_table(ctx, budget)]
    for a, b in zip(a_vecs, b_vecs):
        P = mols_member(ctx, m, r, G, a, b)
        squares.append(square_from_table(ctx, P.table(budget)))
    return squares


def all_pairs_orthogonal(squares: Sequence[LatinSquare]) -> bool:
    return all(are_orthogonal(squares[i], squares[j])
               for i in range(len(squares)) for j in range(i + 1, len(squares)))
