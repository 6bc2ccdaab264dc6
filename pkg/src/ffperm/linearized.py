"""Linearized (p^t-)polynomials, Dickson matrices, and the subspace-inverse solver."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from . import _modp
from .errors import ContextMismatch, InvalidParameters, NotAPermutation
from .field import FieldContext, FieldElement, exhaustive_budget


@dataclass(frozen=True)
class LinearizedPolynomial:
    """sum_i a_i x^{p^{t i}} over the ambient field, with ``t | D``.

    Coefficients are stored reduced mod x^{p^D} - x, so there are exactly
    ``D // step`` slots.
    """

    ctx: FieldContext
    step: int
    coeffs: tuple[FieldElement, ...]

    def __post_init__(self):
        D = self.ctx.degree
        if self.step < 1 or D % self.step:
            raise InvalidParameters(f"step {self.step} must divide the field degree {D}")
        if len(self.coeffs) != D // self.step:
            raise InvalidParameters(f"expected {D // self.step} coefficients, got {len(self.coeffs)}")
        for c in self.coeffs:
            if c.ctx != self.ctx:
                raise ContextMismatch("coefficient from another field")

    # -- constructors ---------------------------------------------------------------

    @classmethod
    def from_terms(cls, ctx: FieldContext, step: int, terms: Mapping[int, object]) -> LinearizedPolynomial:
        """Build from {exponent slot i: coefficient of x^{p^{step*i}}}; slots wrap mod D/step."""
        if step < 1 or ctx.degree % step:
            raise InvalidParameters(f"step {step} must divide the field degree {ctx.degree}")
        n = ctx.degree // step
        acc = np.zeros((n, ctx.degree), dtype=np.int64)
        for i, c in terms.items():
            acc[i % n] = ctx.add(acc[i % n], ctx.vec(c))
        return cls(ctx, step, tuple(FieldElement(ctx, row) for row in acc))

    @classmethod
    def from_array(cls, ctx: FieldContext, step: int, arr: np.ndarray) -> LinearizedPolynomial:
        return cls(ctx, step, tuple(FieldElement(ctx, row) for row in np.asarray(arr)))

    @classmethod
    def identity(cls, ctx: FieldContext, step: int = 1) -> LinearizedPolynomial:
        return cls.from_terms(ctx, step, {0: 1})

    @classmethod
    def trace(cls, ctx: FieldContext, s: int, S: int | None = None, step: int = 1) -> LinearizedPolynomial:
        """T_{p^S | p^s} written as a p^step-polynomial (step must divide s)."""
        S = ctx.degree if S is None else S
        ctx._check_tower(s, S)
        if s % step:
            raise InvalidParameters(f"step {step} must divide s={s}")
        return cls.from_terms(ctx, step, {k * s // step: 1 for k in range(S // s)})

    # -- basic algebra ------------------------------------------------------------------

    @property
    def n(self) -> int:
        return len(self.coeffs)

    @property
    def array(self) -> np.ndarray:
        return np.array([c.coeffs for c in self.coeffs], dtype=np.int64)

    def matrix(self) -> np.ndarray:
        """The Z_p-linear map x -> L(x) as a D x D matrix acting on row vectors."""
        ctx = self.ctx
        acc = np.zeros((ctx.degree, ctx.degree), dtype=np.int64)
        for i, c in enumerate(self.coeffs):
            if c.is_zero():
                continue
            term = _modp.matmod(ctx.frobenius_matrix(self.step * i), ctx.mul_matrix(c), ctx.p)
            acc = acc + term
        return acc % ctx.p

    def __call__(self, x):
        ctx = self.ctx
        if isinstance(x, FieldElement):
            return FieldElement(ctx, self(ctx.vec(x)))
        return _modp.matmod(np.asarray(x, dtype=np.int64), self._matrix, ctx.p)

    @property
    def _matrix(self) -> np.ndarray:
        cached = self.__dict__.get("_mat")
        if cached is None:
            cached = self.matrix()
            object.__setattr__(self, "_mat", cached)
        return cached

    def _check_same(self, other: LinearizedPolynomial) -> None:
        if other.ctx != self.ctx:
            raise ContextMismatch("polynomials over different fields")
        if other.step != self.step:
            raise InvalidParameters("polynomials with different steps")

    def __add__(self, other: LinearizedPolynomial) -> LinearizedPolynomial:
        self._check_same(other)
        return LinearizedPolynomial.from_array(self.ctx, self.step, self.ctx.add(self.array, other.array))

    def __sub__(self, other: LinearizedPolynomial) -> LinearizedPolynomial:
        self._check_same(other)
        return LinearizedPolynomial.from_array(self.ctx, self.step, self.ctx.sub(self.array, other.array))

    def scale(self, c) -> LinearizedPolynomial:
        """c * L(x) for a field element or integer c."""
        ctx = self.ctx
        cv = ctx.scalar(c) if isinstance(c, (int, np.integer)) else ctx.vec(c)
        return LinearizedPolynomial.from_array(ctx, self.step, ctx.mul(self.array, cv[None, :]))

    def compose(self, inner: LinearizedPolynomial) -> LinearizedPolynomial:
        """self(inner(x)) reduced mod x^{p^D} - x."""
        self._check_same(inner)
        ctx, n = self.ctx, self.n
        a, b = self.array, inner.array
        out = np.zeros_like(a)
        for i in range(n):
            if not a[i].any():
                continue
            shifted = ctx.frob(np.roll(b, i, axis=0), self.step * i)
            out = ctx.add(out, ctx.mul(shifted, a[i][None, :]))
        return LinearizedPolynomial.from_array(ctx, self.step, out)

    def to_json(self) -> dict:
        return {"step": self.step, "coeffs": [c.index for c in self.coeffs]}

    @classmethod
    def from_json(cls, ctx: FieldContext, data: dict) -> LinearizedPolynomial:
        return cls(ctx, int(data["step"]), tuple(ctx.element(int(i)) for i in data["coeffs"]))

    def __repr__(self) -> str:
        q = "p" if self.step == 1 else f"p^{self.step}"
        terms = [f"({c!r})x^({q})^{i}" for i, c in enumerate(self.coeffs) if not c.is_zero()]
        return "L[" + (" + ".join(terms) or "0") + "]"


def eval_linearized(L: LinearizedPolynomial, x: FieldElement) -> FieldElement:
    return L(x)


def agree_on(L1, L2, elems: np.ndarray) -> bool:
    """Pointwise equality of two linearized polynomials on a batch of elements."""
    return bool(np.array_equal(L1(elems), L2(elems)))


# -- field-valued linear algebra -------------------------------------------------------------


def _eliminate(ctx: FieldContext, aug: np.ndarray, ncols: int) -> tuple[np.ndarray, list[int], FieldElement]:
    """Gauss-Jordan over F_{p^D} on ``aug`` (rows, cols, D); returns (rref, pivots, det factor)."""
    aug = np.array(aug, dtype=np.int64)
    rows = aug.shape[0]
    pivots: list[int] = []
    det = ctx.ones()
    sign = 1
    r = 0
    for c in range(ncols):
        if r == rows:
            break
        nz = [i for i in range(r, rows) if aug[i, c].any()]
        if not nz:
            det = ctx.zeros()
            continue
        k = nz[0]
        if k != r:
            aug[[r, k]] = aug[[k, r]]
            sign = -sign
        piv = aug[r, c].copy()
        det = ctx.mul(det, piv)
        aug[r] = ctx.mul(aug[r], ctx.inv(piv)[None, :])
        for i in range(rows):
            if i != r and aug[i, c].any():
                aug[i] = ctx.sub(aug[i], ctx.mul(aug[r], aug[i, c][None, :]))
        pivots.append(c)
        r += 1
    if len(pivots) < ncols:
        det = ctx.zeros()
    det = ctx.smul(sign, det)
    return aug, pivots, FieldElement(ctx, det)


def field_determinant(ctx: FieldContext, mat: np.ndarray) -> FieldElement:
    """Determinant of a square matrix with entries in F_{p^D}, shape (n, n, D)."""
    return _eliminate(ctx, mat, mat.shape[1])[2]


def field_solve(ctx: FieldContext, A: np.ndarray, b: np.ndarray) -> np.ndarray | None:
    """One solution y of A y = b over F_{p^D}, free unknowns set to 0; None if inconsistent."""
    n, m = A.shape[0], A.shape[1]
    aug = np.concatenate([A, b[:, None, :]], axis=1)
    red, pivots, _ = _eliminate(ctx, aug, m)
    if any(red[i, m].any() for i in range(len(pivots), n)):
        return None
    y = np.zeros((m, ctx.degree), dtype=np.int64)
    for row, col in enumerate(pivots):
        y[col] = red[row, m]
    return y


# -- Dickson matrices ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DicksonMatrix:
    """Entry (i, j) is a_{(j - i) mod n} raised to p^{t i}."""

    ctx: FieldContext
    step: int
    entries: np.ndarray  # (n, n, D)

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    def entry(self, i: int, j: int) -> FieldElement:
        return FieldElement(self.ctx, self.entries[i, j])

    def determinant(self) -> FieldElement:
        return field_determinant(self.ctx, self.entries)


def dickson_matrix(L: LinearizedPolynomial, n: int | None = None) -> DicksonMatrix:
    ctx = L.ctx
    n = L.n if n is None else n
    if n * L.step != ctx.degree:
        raise InvalidParameters(
            f"block length {n} with step {L.step} does not match field degree {ctx.degree}"
        )
    a = L.array
    ent = np.zeros((n, n, ctx.degree), dtype=np.int64)
    for i in range(n):
        ent[i] = ctx.frob(np.roll(a, i, axis=0), L.step * i)
    return DicksonMatrix(ctx, L.step, ent)


def is_linearized_permutation(L: LinearizedPolynomial) -> bool:
    """Dickson-determinant test for bijectivity of L on the whole field."""
    return not dickson_matrix(L).determinant().is_zero()


# -- subspaces --------------------------------------------------------------------------------


class Subspace:
    """A Z_p-subspace of the ambient field, held as a row basis."""

    def __init__(self, ctx: FieldContext, basis: np.ndarray):
        basis = np.asarray(basis, dtype=np.int64).reshape(-1, ctx.degree) % ctx.p
        red, piv = _modp.row_reduce(basis, ctx.p) if len(basis) else (basis, [])
        self.ctx = ctx
        self.basis = red[: len(piv)]
        self.dim = len(piv)
        self._check = _modp.nullspace(self.basis, ctx.p).T if self.dim else np.eye(ctx.degree, dtype=np.int64)

    @classmethod
    def from_elements(cls, ctx: FieldContext, elems: np.ndarray) -> Subspace:
        """Span of the given elements; raises if they are not already closed."""
        elems = np.asarray(elems, dtype=np.int64)
        V = cls(ctx, elems)
        if V.size != len(np.unique(ctx.to_index(elems))):
            raise InvalidParameters("element list is not a Z_p-subspace")
        return V

    @classmethod
    def full(cls, ctx: FieldContext) -> Subspace:
        return cls(ctx, np.eye(ctx.degree, dtype=np.int64))

    @property
    def size(self) -> int:
        return self.ctx.p**self.dim

    def __len__(self) -> int:
        return self.size

    def contains(self, x) -> np.ndarray | bool:
        if isinstance(x, FieldElement):
            return bool(self.contains(x.vec))
        x = np.asarray(x, dtype=np.int64)
        if self.dim == self.ctx.degree:
            return np.ones(x.shape[:-1], dtype=bool) if x.ndim > 1 else True
        res = np.all(_modp.matmod(x, self._check, self.ctx.p) == 0, axis=-1)
        return res

    def elements(self) -> np.ndarray:
        """All elements, ascending by index."""
        elems = _modp.span(self.basis, self.ctx.p)
        return elems[np.argsort(self.ctx.to_index(elems), kind="stable")]

    def indices(self) -> list[int]:
        return [int(i) for i in np.sort(self.ctx.to_index(_modp.span(self.basis, self.ctx.p)))]

    def sample(self, n: int, rng: np.random.Generator) -> np.ndarray:
        coeffs = rng.integers(0, self.ctx.p, size=(n, self.dim), dtype=np.int64)
        return _modp.matmod(coeffs, self.basis, self.ctx.p)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Subspace):
            return NotImplemented
        return (
            self.ctx == other.ctx
            and self.dim == other.dim
            and bool(np.all(self.contains(other.basis)))
        )

    def to_json(self) -> list[int]:
        return self.indices()


def kernel_of(L: LinearizedPolynomial) -> Subspace:
    return Subspace(L.ctx, _modp.left_nullspace(L.matrix(), L.ctx.p))


def trace_kernel(ctx: FieldContext, s: int, S: int | None = None, budget: int | None = None) -> Subspace:
    """ker T_{p^S|p^s} inside F_{p^S}.

    Within the exhaustive budget the result is cross-checked against both the
    trace-zero filter and the image of beta -> beta^{p^s} - beta.
    """
    S = ctx.degree if S is None else S
    ctx._check_tower(s, S)
    p, D = ctx.p, ctx.degree
    fixed = (ctx.frobenius_matrix(S) - np.eye(D, dtype=np.int64)) % p
    both = np.concatenate([fixed, ctx.trace_matrix(s, S)], axis=1)
    V = Subspace(ctx, _modp.left_nullspace(both, p))
    budget = exhaustive_budget() if budget is None else budget
    if p**S <= budget:
        big = ctx.subfield_elements(S)
        by_filter = np.sort(ctx.to_index(big[ctx.is_zero(ctx.trace(big, s, S))]))
        by_image = np.unique(ctx.to_index(ctx.sub(ctx.frob(big, s), big)))
        if not (
            np.array_equal(by_filter, by_image)
            and np.array_equal(by_filter, np.asarray(V.indices(), dtype=by_filter.dtype))
        ):
            raise RuntimeError("trace kernel constructions disagree")  # pragma: no cover
    return V


def subspace_inverse_solver(
    phi: LinearizedPolynomial, V: Subspace, K: LinearizedPolynomial
) -> LinearizedPolynomial:
    """A linearized L with L(phi(v)) = v on V, from v(L) D_phi = v(x - K(x)).

    K must be an idempotent p^t-polynomial (same step as phi) whose kernel is V.
    The result is unique only up to polynomials vanishing on phi(V).
    """
    ctx = phi.ctx
    phi._check_same(K)
    if V.ctx != ctx:
        raise ContextMismatch("subspace over another field")
    MK = K.matrix()
    if not np.array_equal(_modp.matmod(MK, MK, ctx.p), MK):
        raise InvalidParameters("K is not idempotent")
    if kernel_of(K) != V:
        raise InvalidParameters("ker(K) differs from V")
    D_phi = dickson_matrix(phi).entries
    rhs = ctx.neg(K.array)
    rhs[0] = ctx.add(rhs[0], ctx.ones())
    # d D = rhs  <=>  D^T d^T = rhs^T
    d = field_solve(ctx, np.transpose(D_phi, (1, 0, 2)), rhs)
    if d is None:
        raise NotAPermutation("Dickson system is inconsistent: phi is not injective on V")
    L = LinearizedPolynomial.from_array(ctx, phi.step, d)
    if V.dim and not np.array_equal(L(phi(V.basis)), V.basis):
        raise NotAPermutation("solution does not invert phi on V")  # pragma: no cover
    return L


def random_linearized(ctx: FieldContext, step: int, rng: np.random.Generator) -> LinearizedPolynomial:
    n = ctx.degree // step
    return LinearizedPolynomial.from_array(ctx, step, ctx.random_elements(n, rng))


def brute_force_bijective(L: LinearizedPolynomial, budget: int | None = None) -> bool:
    ctx = L.ctx
    allx = ctx.all_elements(budget)
    return len(np.unique(ctx.to_index(L(allx)))) == ctx.order


def span_check(elems: Sequence[int], ctx: FieldContext) -> bool:
    """True iff the index list is closed under addition and Z_p-scaling."""
    s = set(int(i) for i in elems)
    arr = ctx.from_index(np.array(sorted(s), dtype=np.int64))
    sums = ctx.to_index(ctx.add(arr[:, None, :], arr[None, :, :]).reshape(-1, ctx.degree))
    if not set(int(i) for i in np.unique(sums)) <= s:
        return False
    for k in range(2, ctx.p):
        if not set(int(i) for i in ctx.to_index(ctx.smul(k, arr))) <= s:
            return False
    return True
