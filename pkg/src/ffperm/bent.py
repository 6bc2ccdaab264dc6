"""Walsh transforms, bentness tests and Maiorana-McFarland vectorial bent functions.

Functions are given by their value tables in Z_p.  A function on the field
F_{p^D} is a length-p^D array indexed by element index; a function on the
pair domain F_{p^D}^2 is a (p^D, p^D) array indexed by (index(x), index(y)).
On the pair domain the character of b = (b1, b2) is T(b1 x) + T(b2 y), with T
the absolute trace, and b-pairs are numbered index(b1) * p^D + index(b2).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence

import numpy as np

from . import _modp
from .complete import SubfieldPolynomial, _hypotheses, xg_trace_perm_check
from .cyclotomic import CyclotomicInteger
from .errors import BudgetExceeded, InvalidParameters
from .field import FieldContext, FieldElement, exhaustive_budget
from .maps import FieldMap, permutes_field, permutes_set

DEFAULT_SAMPLES = 256


@lru_cache(maxsize=None)
def trace_form(ctx: FieldContext) -> np.ndarray:
    """B with B[i][j] = T(t^{i+j}), so T(x z) = x B z^T on coefficient rows."""
    D = ctx.degree
    powers = ctx.trace(ctx._reduce_table, 1)[:, 0]
    idx = np.add.outer(np.arange(D), np.arange(D))
    return powers[idx]


def abs_trace(ctx: FieldContext, x: np.ndarray) -> np.ndarray:
    """Absolute trace of a batch, as integers in [0, p)."""
    return ctx.trace(x, 1)[..., 0]


def trace_products(ctx: FieldContext, X: np.ndarray, Z: np.ndarray) -> np.ndarray:
    """Matrix of T(x z) for x in X (rows) and z in Z (columns)."""
    left = _modp.matmod(X, trace_form(ctx), ctx.p)
    return _modp.matmod(left, np.ascontiguousarray(Z.T), ctx.p)


def _walsh_exponents(values: np.ndarray, ctx: FieldContext, b) -> np.ndarray:
    p, Q = ctx.p, ctx.order
    if values.ndim == 1:
        X = ctx.all_elements(max(Q, 1))
        bv = ctx.vec(int(b) if not isinstance(b, (FieldElement, np.ndarray)) else b)
        return (values + abs_trace(ctx, ctx.mul(X, bv[None, :]))) % p
    b1, b2 = divmod(int(b), Q) if not isinstance(b, tuple) else b
    X = ctx.all_elements(max(Q, 1))
    u = abs_trace(ctx, ctx.mul(X, ctx.vec(int(b1))[None, :]))
    v = abs_trace(ctx, ctx.mul(X, ctx.vec(int(b2))[None, :]))
    return (values + u[:, None] + v[None, :]) % p


def walsh(values: np.ndarray, ctx: FieldContext, b) -> CyclotomicInteger:
    """sum over the domain of xi^{f(z) + <b, z>}, exactly.

    ``values`` is 1-D for the field or 2-D for the pair domain; ``b`` is an
    index (a pair index on the pair domain) or a (b1, b2) tuple of indices.
    """
    values = np.asarray(values, dtype=np.int64)
    E = _walsh_exponents(values, ctx, b)
    counts = np.bincount(E.reshape(-1), minlength=ctx.p)
    return CyclotomicInteger.from_counts(ctx.p, counts.tolist())


def walsh_integer_p2(values: np.ndarray, ctx: FieldContext, b) -> int:
    """Binary Walsh value as a plain signed sum, for p = 2 only."""
    if ctx.p != 2:
        raise InvalidParameters("integer Walsh values need p = 2")
    E = _walsh_exponents(np.asarray(values, dtype=np.int64), ctx, b)
    return int(np.sum(1 - 2 * E))


def domain_size(values: np.ndarray, ctx: FieldContext) -> int:
    return ctx.order ** np.asarray(values).ndim


def is_bent(values: np.ndarray, ctx: FieldContext, samples: int | None = None, seed: int = 0,
            budget: int | None = None) -> dict:
    """Check |W(b)|^2 == p^N exactly; exhaustive when the b-sweep fits the budget.

    With ``samples`` given, or when M^2 cells (M the domain size) exceed the
    budget, a seeded sample of b values is used instead.
    """
    values = np.asarray(values, dtype=np.int64)
    M = domain_size(values, ctx)
    budget = exhaustive_budget() if budget is None else budget
    if samples is None and M * M <= budget:
        mode, bs = "exhaustive", range(M)
    else:
        k = DEFAULT_SAMPLES if samples is None else int(samples)
        if k < 1:
            raise InvalidParameters("sample count must be positive")
        if M > budget * budget:
            raise BudgetExceeded(f"domain of size {M} is too large even for sampling")
        rng = np.random.default_rng(seed)
        bs = sorted(int(b) for b in rng.choice(M, size=min(k, M), replace=False))
        mode = "sampled"
    target = CyclotomicInteger.integer(ctx.p, M)
    failures = []
    for b in bs:
        w = walsh(values, ctx, b)
        if w.abs_squared() != target:
            failures.append(int(b))
    return {"bent": not failures, "checked_b": len(bs), "mode": mode, "seed": int(seed), "failures": failures}


def parseval_sum(values: np.ndarray, ctx: FieldContext) -> CyclotomicInteger:
    """sum_b |W(b)|^2 over every b."""
    values = np.asarray(values, dtype=np.int64)
    acc = CyclotomicInteger.integer(ctx.p, 0)
    for b in range(domain_size(values, ctx)):
        acc = acc + walsh(values, ctx, b).abs_squared()
    return acc


# -- Maiorana-McFarland components ---------------------------------------------------


@dataclass
class MMComponent:
    """(x, y) -> T(x pi(y) + g(y)) on the pair domain, T the absolute trace."""

    pi: FieldMap
    g: FieldMap | None = None

    @property
    def ctx(self) -> FieldContext:
        return self.pi.ctx

    def values(self, budget: int | None = None) -> np.ndarray:
        ctx = self.ctx
        X = ctx.all_elements(budget)
        out = trace_products(ctx, X, self.pi.values(X))
        if self.g is not None:
            out = (out + abs_trace(ctx, self.g.values(X))[None, :]) % ctx.p
        return out

    def __call__(self, x, y) -> int:
        ctx = self.ctx
        x, y = ctx.vec(x), ctx.vec(y)
        s = ctx.mul(x, self.pi(y))
        if self.g is not None:
            s = ctx.add(s, self.g(y))
        return int(abs_trace(ctx, s))


def combine_components(comps: Sequence[MMComponent], c: Sequence[int]) -> MMComponent:
    """sum_i c_i f_i, again a Maiorana-McFarland function."""
    ctx = comps[0].ctx
    fns = [(int(ci) % ctx.p, comp) for ci, comp in zip(c, comps) if int(ci) % ctx.p]

    def pi(y):
        acc = ctx.zeros(len(y))
        for ci, comp in fns:
            acc = ctx.add(acc, ctx.smul(ci, comp.pi.fn(y)))
        return acc

    def g(y):
        acc = ctx.zeros(len(y))
        for ci, comp in fns:
            if comp.g is not None:
                acc = ctx.add(acc, ctx.smul(ci, comp.g.fn(y)))
        return acc

    return MMComponent(FieldMap(ctx, pi, "sum c_i pi_i"), FieldMap(ctx, g, "sum c_i g_i"))


@dataclass
class VectorialBentSpec:
    ctx: FieldContext
    m: int
    n: int
    r: int
    G: SubfieldPolynomial
    k: int
    alpha: FieldElement
    a_list: tuple
    g_list: tuple = ()
    basis: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        ctx, m = self.ctx, self.m
        if self.k < 1:
            raise InvalidParameters("k must be at least 1")
        if self.k > m:
            raise InvalidParameters(f"k = {self.k} exceeds m = {m}")
        if ctx.degree != m * self.n:
            raise InvalidParameters("ambient degree must be m*n")
        for name, ok in _hypotheses(ctx.p, m, self.n, self.r).items():
            if not ok:
                raise InvalidParameters(f"hypothesis {name} fails")
        if self.G.ctx != ctx or self.G.s != m:
            raise InvalidParameters("G must be a polynomial over F_q")
        self.alpha = ctx.element(self.alpha)
        self.a_list = tuple(ctx.element(a) for a in self.a_list)
        if len(self.a_list) != self.k:
            raise InvalidParameters(f"need {self.k} coefficients a_i")
        if not self.alpha.in_subfield(m) or not all(a.in_subfield(m) for a in self.a_list):
            raise InvalidParameters("alpha and every a_i must lie in F_q")
        if self.g_list and len(self.g_list) != self.k:
            raise InvalidParameters(f"need {self.k} functions g_i")
        basis = np.array([ctx.frob(self.alpha.vec, i) for i in range(self.k)])
        if _modp.rank(basis, ctx.p) != self.k:
            raise InvalidParameters("alpha, alpha^p, ... are linearly dependent over F_p")
        self.basis = basis
        span = _modp.span(basis, ctx.p)
        nonzero = span[np.any(span, axis=1)]
        g0 = self.G.coeffs[0]
        if np.any(g0) and np.any(np.all(nonzero == g0, axis=1)):
            raise InvalidParameters("G(0) lies in S minus {0}")
        sub = ctx.subfield_elements(m)
        for b in nonzero:
            fb = FieldMap(ctx, lambda y, b=b: ctx.mul(y, ctx.add(self.G.evaluate(y), b)), "x(G+b)")
            if not permutes_set(fb, sub):
                raise InvalidParameters(f"x(G(x) + b) does not permute F_q for b = {ctx.to_index(b)}")

    @classmethod
    def create(cls, p: int, m: int, n: int, r: int, G: Sequence, k: int, alpha, a_list: Sequence,
               ctx: FieldContext | None = None) -> VectorialBentSpec:
        from .field import make_field

        if min(m, n, r) < 1:
            raise InvalidParameters("m, n, r must be positive")
        ctx = make_field(p, m * n) if ctx is None else ctx
        return cls(ctx, m, n, r, SubfieldPolynomial(ctx, m, G), k, ctx.element(alpha),
                   tuple(ctx.element(a) for a in a_list))

    def pi(self, i: int) -> FieldMap:
        """y (a_i y^{p^r-1} - a_i T(y)^{p^r-1} + G(T(y)) + alpha^{p^i})."""
        ctx, m, e = self.ctx, self.m, self.ctx.p**self.r
        a, shift = self.a_list[i].vec, self.basis[i]

        def fn(y):
            t = ctx.trace(y, m)
            inner = ctx.mul(a, ctx.sub(ctx.pow(y, e - 1), ctx.pow(t, e - 1)))
            inner = ctx.add(inner, ctx.add(self.G.evaluate(t), shift))
            return ctx.mul(y, inner)

        return FieldMap(ctx, fn, f"pi_{i}")

    def to_json(self) -> dict:
        return {"p": self.ctx.p, "m": self.m, "n": self.n, "r": self.r, "G": self.G.indices(), "k": self.k,
                "alpha": self.alpha.index, "a_list": [a.index for a in self.a_list]}


def build_mm_bent(spec: VectorialBentSpec) -> list[MMComponent]:
    gs = spec.g_list or (None,) * spec.k
    return [MMComponent(spec.pi(i), gs[i]) for i in range(spec.k)]


def nonzero_combinations(p: int, k: int):
    for c in itertools.product(range(p), repeat=k):
        if any(c):
            yield c


def combination_permutation_check(spec: VectorialBentSpec, budget: int | None = None) -> dict:
    """Every nonzero F_p-combination of the pi_i permutes F_{q^n} (exhaustive)."""
    ctx, m = spec.ctx, spec.m
    comps = build_mm_bent(spec)
    rows = []
    witness = None
    for c in nonzero_combinations(ctx.p, spec.k):
        combo = combine_components(comps, c).pi
        ca = ctx.zeros()
        for ci, a in zip(c, spec.a_list):
            ca = ctx.add(ca, ctx.smul(ci, a.vec))
        row = {"c": list(c), "bijective": permutes_field(combo, budget)}
        if not np.any(ca):
            # the combination is x g(T(x)) with g = (sum c_i) G + sum c_i alpha^{p^i}
            shift = ctx.zeros()
            for ci, v in zip(c, spec.basis):
                shift = ctx.add(shift, ctx.smul(ci, v))
            coeffs = ctx.smul(sum(c), spec.G.coeffs)
            coeffs[0] = ctx.add(coeffs[0], shift)
            row["route"] = "x*g(T(x))"
            row["criterion"] = xg_trace_perm_check(SubfieldPolynomial(ctx, m, list(coeffs)))
        else:
            row["route"] = "complete-mapping family"
        rows.append(row)
        if not row["bijective"] and witness is None:
            witness = list(c)
    return {"ok": witness is None, "combinations": rows, "witness": witness}
