"""Finite field F_{p^D} in a power basis, with Frobenius, relative trace and norm.

Elements are handled in two forms.  Bulk work operates on integer numpy arrays
of shape ``(..., D)`` holding power-basis coefficients; :class:`FieldElement`
wraps a single coefficient vector for scalar use.  Every subfield F_{p^s}
(``s | D``) lives inside the one ambient context and is carved out by the
Frobenius fixed-point test.
"""

from __future__ import annotations

import os
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np
from sympy import isprime
from sympy.polys.domains import ZZ
from sympy.polys.galoistools import gf_irreducible_p

from . import _modp
from .errors import ContextMismatch, IndexOutOfRange, InvalidParameters

DEFAULT_BUDGET = 2**20

_INDEX_LIMIT = 2**62


def exhaustive_budget() -> int:
    """Largest domain size that exhaustive sweeps may visit.

    Defaults to 2**20; the ``FFPERM_BUDGET`` environment variable overrides it.
    """
    raw = os.environ.get("FFPERM_BUDGET")
    if raw is None:
        return DEFAULT_BUDGET
    try:
        value = int(raw)
    except ValueError as exc:
        raise InvalidParameters(f"FFPERM_BUDGET must be an integer, got {raw!r}") from exc
    if value < 1:
        raise InvalidParameters("FFPERM_BUDGET must be positive")
    return value


def _is_irreducible(coeffs: Sequence[int], p: int) -> bool:
    # galoistools wants the leading coefficient first
    return bool(gf_irreducible_p([int(c) for c in reversed(coeffs)], p, ZZ))


def least_irreducible(p: int, degree: int) -> tuple[int, ...]:
    """Lexicographically least monic irreducible of ``degree`` over Z/p.

    Candidates are ordered by the integer sum(c_i p^i) of their non-leading
    coefficients.  Returned low-order first, length ``degree + 1``.
    """
    for code in range(p**degree):
        low = [(code // p**i) % p for i in range(degree)]
        cand = tuple(low) + (1,)
        if _is_irreducible(cand, p):
            return cand
    raise AssertionError("no irreducible polynomial found")  # pragma: no cover


class FieldContext:
    """The ambient field F_{p^D} = Z_p[t]/(modulus)."""

    def __init__(self, p: int, degree: int, modulus: Sequence[int]):
        if not isinstance(p, (int, np.integer)) or not isprime(int(p)):
            raise InvalidParameters(f"p must be prime, got {p!r}")
        if degree < 1:
            raise InvalidParameters(f"degree must be >= 1, got {degree}")
        modulus = tuple(int(c) for c in modulus)
        if len(modulus) != degree + 1 or modulus[-1] != 1:
            raise InvalidParameters("modulus must be monic of the stated degree")
        if any(not 0 <= c < p for c in modulus):
            raise InvalidParameters("modulus coefficients must lie in [0, p)")
        if not _is_irreducible(modulus, int(p)):
            raise InvalidParameters(f"modulus {modulus} is reducible over Z/{p}")
        self.p = int(p)
        self.degree = int(degree)
        self.modulus = modulus
        self.order = self.p**self.degree
        self._frob_cache: dict[int, np.ndarray] = {}
        self._trace_cache: dict[tuple[int, int], np.ndarray] = {}
        self._subfield_cache: dict[int, np.ndarray] = {}

    # -- construction helpers -------------------------------------------------

    def __repr__(self) -> str:
        return f"FieldContext(p={self.p}, degree={self.degree}, modulus={list(self.modulus)})"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FieldContext):
            return NotImplemented
        return (self.p, self.degree, self.modulus) == (other.p, other.degree, other.modulus)

    def __hash__(self) -> int:
        return hash((self.p, self.degree, self.modulus))

    def to_json(self) -> dict:
        return {"p": self.p, "degree": self.degree, "modulus": list(self.modulus)}

    @classmethod
    def from_json(cls, data: dict) -> FieldContext:
        return cls(int(data["p"]), int(data["degree"]), data["modulus"])

    # -- precomputed tables ---------------------------------------------------

    @cached_property
    def _reduce_table(self) -> np.ndarray:
        """Row k holds the reduction of t^k for 0 <= k <= 2D - 2."""
        D, p = self.degree, self.p
        rows = np.zeros((2 * D - 1, D), dtype=np.int64)
        cur = np.zeros(D, dtype=np.int64)
        cur[0] = 1
        tail = np.array(self.modulus[:D], dtype=np.int64)
        for k in range(2 * D - 1):
            rows[k] = cur
            top = cur[D - 1]
            cur = np.concatenate(([0], cur[:-1]))
            cur = (cur - top * tail) % p
        return rows

    @cached_property
    def _reduce_float(self) -> np.ndarray:
        return self._reduce_table.astype(np.float64)

    @cached_property
    def _mul_table(self) -> np.ndarray:
        D = self.degree
        idx = np.add.outer(np.arange(D), np.arange(D)).reshape(-1)
        return self._reduce_table[idx]

    @cached_property
    def _powers(self) -> np.ndarray:
        if self.order >= _INDEX_LIMIT:
            return np.array([self.p**i for i in range(self.degree)], dtype=object)
        return self.p ** np.arange(self.degree, dtype=np.int64)

    def frobenius_matrix(self, t: int = 1) -> np.ndarray:
        """Matrix of x -> x^{p^t} acting on row coefficient vectors."""
        t %= self.degree
        if t not in self._frob_cache:
            if t == 0:
                mat = np.eye(self.degree, dtype=np.int64)
            elif t == 1:
                basis = np.eye(self.degree, dtype=np.int64)
                mat = self.pow(basis, self.p)
            else:
                mat = _modp.matmod(self.frobenius_matrix(t - 1), self.frobenius_matrix(1), self.p)
            self._frob_cache[t] = mat
        return self._frob_cache[t]

    def mul_matrix(self, c) -> np.ndarray:
        """Matrix of the Z_p-linear map x -> c*x on row vectors."""
        c = self.vec(c)
        return self.mul(np.eye(self.degree, dtype=np.int64), c[None, :])

    def trace_matrix(self, s: int, S: int) -> np.ndarray:
        self._check_tower(s, S)
        key = (s, S)
        if key not in self._trace_cache:
            acc = np.zeros((self.degree, self.degree), dtype=np.int64)
            for k in range(S // s):
                acc = acc + self.frobenius_matrix(k * s)
            self._trace_cache[key] = acc % self.p
        return self._trace_cache[key]

    def _check_tower(self, s: int, S: int) -> None:
        if s < 1 or S < 1 or S % s or self.degree % S:
            raise InvalidParameters(
                f"need s | S | D, got s={s}, S={S}, D={self.degree}"
            )

    # -- array arithmetic -----------------------------------------------------

    def vec(self, x) -> np.ndarray:
        """Coefficient array for a FieldElement, index, or coefficient array."""
        if isinstance(x, FieldElement):
            if x.ctx != self:
                raise ContextMismatch("element belongs to another field")
            return np.array(x.coeffs, dtype=np.int64)
        if isinstance(x, (int, np.integer)):
            return self.from_index(int(x))
        arr = np.asarray(x, dtype=np.int64)
        if arr.shape[-1:] != (self.degree,):
            raise ContextMismatch(f"expected trailing dimension {self.degree}, got {arr.shape}")
        return arr

    def zeros(self, n: int | None = None) -> np.ndarray:
        shape = (self.degree,) if n is None else (n, self.degree)
        return np.zeros(shape, dtype=np.int64)

    def ones(self, n: int | None = None) -> np.ndarray:
        out = self.zeros(n)
        out[..., 0] = 1
        return out

    def scalar(self, k: int) -> np.ndarray:
        """The prime-field element k mod p."""
        out = self.zeros()
        out[0] = k % self.p
        return out

    def add(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        return (a + b) % self.p

    def sub(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        return (a - b) % self.p

    def neg(self, a: np.ndarray) -> np.ndarray:
        return (-a) % self.p

    def smul(self, k: int, a: np.ndarray) -> np.ndarray:
        """Multiply by the integer k, reduced mod p."""
        return (a * (k % self.p)) % self.p

    def mul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        a, b = np.broadcast_arrays(a, b)
        D, p = self.degree, self.p
        lead = a.shape[:-1]
        if D * (p - 1) ** 2 >= 2**52:
            outer = (a[..., :, None] * b[..., None, :]).reshape(-1, D * D)
            return _modp.matmod(outer, self._mul_table, p).reshape(lead + (D,))
        # schoolbook product in float64 (exact at these sizes), then fold x^k for k >= D
        af = a.reshape(-1, D).astype(np.float64)
        bf = b.reshape(-1, D).astype(np.float64)
        prod = np.zeros((af.shape[0], 2 * D - 1))
        for i in range(D):
            prod[:, i : i + D] += af[:, i : i + 1] * bf
        out = np.fmod(np.fmod(prod, p) @ self._reduce_float, p).astype(np.int64)
        return out.reshape(lead + (D,))

    def pow(self, a: np.ndarray, e: int) -> np.ndarray:
        """a**e by square-and-multiply; a**0 == 1 including for a == 0."""
        if e < 0:
            return self.pow(self.inv(a), -e)
        if e >= self.order:
            # keeps x^e == x^e' for x == 0 as well, since e' >= 1
            e = (e - 1) % (self.order - 1) + 1
        if e == 0:
            return np.broadcast_to(self.ones(), a.shape).copy()
        result = None
        base = np.asarray(a, dtype=np.int64)
        while e:
            if e & 1:
                result = base.copy() if result is None else self.mul(result, base)
            e >>= 1
            if e:
                base = self.mul(base, base)
        return result

    def inv(self, a: np.ndarray) -> np.ndarray:
        """Reciprocal via a**(p^D - 2), with 0 mapped to 0."""
        out = self.pow(a, self.order - 2)
        zero = ~np.any(a, axis=-1)
        if np.any(zero):
            out = np.where(zero[..., None], 0, out)
        return out

    def inv_sub(self, a: np.ndarray, s: int) -> np.ndarray:
        """Reciprocal a**(p^s - 2) for a known to lie in F_{p^s}; 0 maps to 0."""
        out = self.pow(a, self.p**s - 2)
        zero = ~np.any(a, axis=-1)
        if np.any(zero):
            out = np.where(zero[..., None], 0, out)
        return out

    def frob(self, a: np.ndarray, t: int = 1) -> np.ndarray:
        """a**(p**t)."""
        t %= self.degree
        if t == 0:
            return np.array(a, dtype=np.int64)
        return _modp.matmod(a, self.frobenius_matrix(t), self.p)

    def trace(self, a: np.ndarray, s: int, S: int | None = None) -> np.ndarray:
        """Relative trace sum_{k < S/s} a^{p^{ks}} (S defaults to D)."""
        S = self.degree if S is None else S
        return _modp.matmod(a, self.trace_matrix(s, S), self.p)

    def norm(self, a: np.ndarray, s: int, S: int | None = None) -> np.ndarray:
        """Relative norm a^{(p^S - 1)/(p^s - 1)} (S defaults to D)."""
        S = self.degree if S is None else S
        self._check_tower(s, S)
        return self.pow(a, (self.p**S - 1) // (self.p**s - 1))

    def in_subfield(self, a: np.ndarray, s: int) -> np.ndarray:
        if s < 1 or self.degree % s:
            raise InvalidParameters(f"{s} does not divide {self.degree}")
        return np.all(self.frob(a, s) == a, axis=-1)

    def is_zero(self, a: np.ndarray) -> np.ndarray:
        return ~np.any(a, axis=-1)

    def equal(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        return np.all(a == b, axis=-1)

    # -- indexing ---------------------------------------------------------------

    def to_index(self, a: np.ndarray):
        a = np.asarray(a, dtype=np.int64)
        if self.order >= _INDEX_LIMIT:
            if a.ndim == 1:
                return int(sum(int(c) * w for c, w in zip(a, self._powers)))
            return np.array([self.to_index(row) for row in a], dtype=object)
        out = a @ self._powers
        return int(out) if a.ndim == 1 else out

    def from_index(self, idx) -> np.ndarray:
        if isinstance(idx, (int, np.integer)):
            idx = int(idx)
            if not 0 <= idx < self.order:
                raise IndexOutOfRange(f"index {idx} outside [0, {self.order})")
            return np.array([(idx // self.p**i) % self.p for i in range(self.degree)], dtype=np.int64)
        idx = np.asarray(idx)
        if idx.size and (idx.min() < 0 or idx.max() >= self.order):
            raise IndexOutOfRange(f"indices outside [0, {self.order})")
        if self.order >= _INDEX_LIMIT:
            return np.array([self.from_index(int(i)) for i in idx.reshape(-1)]).reshape(idx.shape + (self.degree,))
        return (idx[..., None] // self._powers) % self.p

    def all_elements(self, budget: int | None = None) -> np.ndarray:
        """Every element in ascending index order, shape (p^D, D)."""
        from .errors import BudgetExceeded

        budget = exhaustive_budget() if budget is None else budget
        if self.order > budget:
            raise BudgetExceeded(f"field of size {self.order} exceeds budget {budget}")
        return self.from_index(np.arange(self.order, dtype=np.int64))

    def add_indices(self, i: np.ndarray, j: np.ndarray) -> np.ndarray:
        """Index-level addition for index arrays."""
        if self.p == 2:
            return np.bitwise_xor(i, j)
        return self.to_index(self.add(self.from_index(i), self.from_index(j)))

    def sub_indices(self, i: np.ndarray, j: np.ndarray) -> np.ndarray:
        if self.p == 2:
            return np.bitwise_xor(i, j)
        return self.to_index(self.sub(self.from_index(i), self.from_index(j)))

    # -- subfields ----------------------------------------------------------------

    def subfield_basis(self, s: int) -> np.ndarray:
        """Z_p-basis (rows) of F_{p^s} inside the ambient field."""
        if s < 1 or self.degree % s:
            raise InvalidParameters(f"{s} does not divide {self.degree}")
        if s not in self._subfield_cache:
            fixed = (self.frobenius_matrix(s) - np.eye(self.degree, dtype=np.int64)) % self.p
            self._subfield_cache[s] = _modp.left_nullspace(fixed, self.p)
        return self._subfield_cache[s]

    def subfield_elements(self, s: int) -> np.ndarray:
        """All p^s elements of F_{p^s}, ascending by index."""
        elems = _modp.span(self.subfield_basis(s), self.p)
        order = np.argsort(self.to_index(elems), kind="stable")
        return elems[order]

    def random_elements(self, n: int, rng: np.random.Generator) -> np.ndarray:
        return rng.integers(0, self.p, size=(n, self.degree), dtype=np.int64)

    # -- scalar wrappers ------------------------------------------------------------

    def element(self, x) -> FieldElement:
        if isinstance(x, FieldElement):
            if x.ctx != self:
                raise ContextMismatch("element belongs to another field")
            return x
        return FieldElement(self, self.vec(x))

    def elements(self, arr: np.ndarray) -> list[FieldElement]:
        return [FieldElement(self, row) for row in np.asarray(arr).reshape(-1, self.degree)]

    @property
    def zero(self) -> FieldElement:
        return FieldElement(self, self.zeros())

    @property
    def one(self) -> FieldElement:
        return FieldElement(self, self.ones())

    @property
    def gen(self) -> FieldElement:
        """The modulus root t (equals 0 when D == 1 and the modulus is x)."""
        if self.degree == 1:
            return FieldElement(self, [(-self.modulus[0]) % self.p])
        v = self.zeros()
        v[1] = 1
        return FieldElement(self, v)


class FieldElement:
    """A single element of a :class:`FieldContext`, immutable and hashable."""

    __slots__ = ("ctx", "coeffs")

    def __init__(self, ctx: FieldContext, coeffs: Iterable[int]):
        coeffs = tuple(int(c) for c in coeffs)
        if len(coeffs) != ctx.degree:
            raise ContextMismatch(f"expected {ctx.degree} coefficients, got {len(coeffs)}")
        if any(not 0 <= c < ctx.p for c in coeffs):
            raise InvalidParameters("coefficients must lie in [0, p)")
        object.__setattr__(self, "ctx", ctx)
        object.__setattr__(self, "coeffs", coeffs)

    def __setattr__(self, name, value):
        raise AttributeError("FieldElement is immutable")

    @property
    def vec(self) -> np.ndarray:
        return np.array(self.coeffs, dtype=np.int64)

    @property
    def index(self) -> int:
        return self.ctx.to_index(self.vec)

    def _other(self, other) -> np.ndarray:
        if isinstance(other, FieldElement):
            if other.ctx != self.ctx:
                raise ContextMismatch("operands belong to different fields")
            return other.vec
        if isinstance(other, (int, np.integer)):
            return self.ctx.scalar(int(other))
        return NotImplemented

    def _wrap(self, arr: np.ndarray) -> FieldElement:
        return FieldElement(self.ctx, arr)

    def __add__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return self._wrap(self.ctx.add(self.vec, o))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return self._wrap(self.ctx.sub(self.vec, o))

    def __rsub__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return self._wrap(self.ctx.sub(o, self.vec))

    def __neg__(self):
        return self._wrap(self.ctx.neg(self.vec))

    def __mul__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return self._wrap(self.ctx.mul(self.vec, o))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return self._wrap(self.ctx.mul(self.vec, self.ctx.inv(o)))

    def __pow__(self, e: int):
        return self._wrap(self.ctx.pow(self.vec, int(e)))

    def inverse(self) -> FieldElement:
        return self._wrap(self.ctx.inv(self.vec))

    def frobenius(self, t: int = 1) -> FieldElement:
        return self._wrap(self.ctx.frob(self.vec, t))

    def trace(self, s: int, S: int | None = None) -> FieldElement:
        return self._wrap(self.ctx.trace(self.vec, s, S))

    def norm(self, s: int, S: int | None = None) -> FieldElement:
        return self._wrap(self.ctx.norm(self.vec, s, S))

    def in_subfield(self, s: int) -> bool:
        return bool(self.ctx.in_subfield(self.vec, s))

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __bool__(self) -> bool:
        return not self.is_zero()

    def __eq__(self, other) -> bool:
        if isinstance(other, FieldElement):
            return self.ctx == other.ctx and self.coeffs == other.coeffs
        if isinstance(other, (int, np.integer)):
            return self.coeffs == tuple(self.ctx.scalar(int(other)))
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.ctx.p, self.ctx.modulus, self.coeffs))

    def __repr__(self) -> str:
        terms = []
        for i, c in enumerate(self.coeffs):
            if not c:
                continue
            mono = "" if i == 0 else ("t" if i == 1 else f"t^{i}")
            if not mono:
                terms.append(str(c))
            else:
                terms.append(mono if c == 1 else f"{c}{mono}")
        body = " + ".join(reversed(terms)) or "0"
        return f"<{body} in F_{self.ctx.p}^{self.ctx.degree}>"


# -- module-level operations ----------------------------------------------------------


def make_field(p: int, degree: int) -> FieldContext:
    """F_{p^degree} with the lexicographically least monic irreducible modulus."""
    if not isinstance(p, (int, np.integer)) or not isprime(int(p)):
        raise InvalidParameters(f"p must be prime, got {p!r}")
    if not isinstance(degree, (int, np.integer)) or degree < 1:
        raise InvalidParameters(f"degree must be a positive integer, got {degree!r}")
    return FieldContext(int(p), int(degree), least_irreducible(int(p), int(degree)))


def _same(x: FieldElement, y: FieldElement) -> None:
    if x.ctx != y.ctx:
        raise ContextMismatch("operands belong to different fields")


def add(x: FieldElement, y: FieldElement) -> FieldElement:
    _same(x, y)
    return x + y


def mul(x: FieldElement, y: FieldElement) -> FieldElement:
    _same(x, y)
    return x * y


def power(x: FieldElement, e: int) -> FieldElement:
    return x**e


def frobenius(x: FieldElement, t: int) -> FieldElement:
    return x.frobenius(t)


def rel_trace(x: FieldElement, s: int, S: int) -> FieldElement:
    return x.trace(s, S)


def rel_norm(x: FieldElement, s: int, S: int) -> FieldElement:
    return x.norm(s, S)


def element_index(x: FieldElement) -> int:
    return x.index


def index_element(ctx: FieldContext, i: int) -> FieldElement:
    return FieldElement(ctx, ctx.from_index(int(i)))


def subfield_elements(ctx: FieldContext, s: int) -> list[FieldElement]:
    return ctx.elements(ctx.subfield_elements(s))
