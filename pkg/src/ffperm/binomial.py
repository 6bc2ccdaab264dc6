"""Compositional inverses of the binomial L_{c,r}(x) = x^{p^r} - c x.

The ambient field is F_{q^n} with q = p^m.  The target domain is either the
whole field or the trace kernel ker T_{q^n|q^s}; ``s = 1`` gives the kernel of
the absolute-to-F_q trace.  All exponents are in units of p, so a binomial
x^{q^r'} - c x in q-units is written here with r = m r'.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from math import gcd

import numpy as np

from .errors import InvalidParameters, NotAPermutation
from .field import FieldContext, FieldElement, make_field
from .linearized import LinearizedPolynomial, Subspace, subspace_inverse_solver, trace_kernel


class Classification(str, enum.Enum):
    FULL = "FullFieldPermutation"
    KERNEL_ONLY = "KernelOnlyPermutation"
    NOT_KERNEL = "NotKernelPermutation"


@dataclass(frozen=True)
class KernelPermClassification:
    kind: Classification
    norm: FieldElement
    """N_{q^n|p^d}(c) for FULL, otherwise N_{q^s|p^d}(c)."""

    def to_json(self) -> dict:
        return {"classification": self.kind.value, "norm": self.norm.index}


def ladder(p: int, r: int, i: int) -> int:
    """(p^{(i+1) r} - 1) / (p^r - 1), exactly."""
    return (p ** ((i + 1) * r) - 1) // (p**r - 1)


@dataclass(frozen=True)
class BinomialSpec:
    """x^{p^r} - c x on F_{p^{mn}}, targeting ker T_{q^n|q^s}."""

    ctx: FieldContext
    m: int
    n: int
    r: int
    c: FieldElement
    s: int = 1

    def __post_init__(self):
        if min(self.m, self.n, self.r, self.s) < 1:
            raise InvalidParameters("m, n, r, s must be positive")
        if self.ctx.degree != self.m * self.n:
            raise InvalidParameters(f"ambient degree {self.ctx.degree} != m*n = {self.m * self.n}")
        if self.n % self.s:
            raise InvalidParameters(f"s={self.s} must divide n={self.n}")
        if self.c.ctx != self.ctx:
            raise InvalidParameters("c is not an element of the ambient field")

    @classmethod
    def create(cls, p: int, m: int, n: int, r: int, c, s: int = 1, ctx: FieldContext | None = None) -> BinomialSpec:
        if min(m, n) < 1:
            raise InvalidParameters("m and n must be positive")
        ctx = make_field(p, m * n) if ctx is None else ctx
        return cls(ctx, m, n, r, ctx.element(c), s)

    @property
    def p(self) -> int:
        return self.ctx.p

    @property
    def d(self) -> int:
        """gcd(mn, r); also the step of every polynomial built here."""
        return gcd(self.m * self.n, self.r)

    @property
    def sub_degree(self) -> int:
        """Degree over F_p of F_{q^s}, the field c must lie in for kernel results."""
        return self.m * self.s

    @property
    def rel_degree(self) -> int:
        return self.n // self.s

    def gcd_hypothesis(self) -> bool:
        return gcd(self.m * self.n, self.r) == gcd(self.m * self.s, self.r)

    def require_gcd(self) -> None:
        if not self.gcd_hypothesis():
            raise InvalidParameters(
                f"need (nm, r) = (sm, r); got ({self.m * self.n}, {self.r}) = {self.d} "
                f"but ({self.m * self.s}, {self.r}) = {gcd(self.m * self.s, self.r)}"
            )

    def require_c_in_subfield(self) -> None:
        if not self.c.in_subfield(self.sub_degree):
            raise InvalidParameters(f"c does not lie in F_{{p^{self.sub_degree}}}")

    def polynomial(self) -> LinearizedPolynomial:
        """L_{c,r} as a p^d-polynomial."""
        d = self.d
        return LinearizedPolynomial.from_terms(self.ctx, d, {0: -self.c, self.r // d: 1})

    def kernel(self) -> Subspace:
        return trace_kernel(self.ctx, self.sub_degree)

    def full_norm(self) -> FieldElement:
        return self.c.norm(self.d)

    def sub_norm(self) -> FieldElement:
        return self.c.norm(self.d, self.sub_degree)

    def to_json(self) -> dict:
        return {"p": self.p, "m": self.m, "n": self.n, "r": self.r, "s": self.s, "c": self.c.index}


def classify(spec: BinomialSpec) -> KernelPermClassification:
    """Which of the three regimes L_{c,r} falls in.

    FULL when N_{q^n|p^d}(c) != 1 (then c may be any element of F_{q^n});
    otherwise c must lie in F_{q^s}, and the kernel is permuted exactly when
    N_{q^s|p^d}(c) = 1 and p does not divide n/s.
    """
    spec.require_gcd()
    full = spec.full_norm()
    if full != 1:
        return KernelPermClassification(Classification.FULL, full)
    spec.require_c_in_subfield()
    sub = spec.sub_norm()
    if sub == 1 and spec.rel_degree % spec.p:
        return KernelPermClassification(Classification.KERNEL_ONLY, sub)
    return KernelPermClassification(Classification.NOT_KERNEL, sub)


def _frobenius_power_inverse(spec: BinomialSpec) -> LinearizedPolynomial:
    D, d = spec.ctx.degree, spec.d
    return LinearizedPolynomial.from_terms(spec.ctx, d, {((D - spec.r) % D) // d: 1})


def inverse_full(spec: BinomialSpec) -> LinearizedPolynomial:
    """Inverse of L_{c,r} on all of F_{q^n}.

    N/(1 - N) * sum_{i < mn/d} c^{-(p^{(i+1)r} - 1)/(p^r - 1)} x^{p^{ir}} with
    N = N_{q^n|p^d}(c); c = 0 is the Frobenius power x^{p^{-r}}.
    """
    ctx, d, p, r = spec.ctx, spec.d, spec.p, spec.r
    N = spec.full_norm()
    if N == 1:
        raise NotAPermutation(f"N_{{q^n|p^{d}}}(c) = 1: L_{{c,r}} does not permute the field")
    if spec.c.is_zero():
        return _frobenius_power_inverse(spec)
    lead = N / (1 - N)
    cinv = spec.c.inverse()
    terms = {}
    for i in range(ctx.degree // d):
        terms[i * r // d] = lead * cinv ** ladder(p, r, i)
    return LinearizedPolynomial.from_terms(ctx, d, terms)


def inverse_on_kernel_fullrank(spec: BinomialSpec) -> LinearizedPolynomial:
    """Kernel inverse when c lies in F_{q^s} and L_{c,r} permutes the whole field."""
    spec.require_gcd()
    spec.require_c_in_subfield()
    return inverse_full(spec)


def inverse_on_kernel_singular(spec: BinomialSpec) -> LinearizedPolynomial:
    """Kernel inverse when N_{q^s|p^d}(c) = 1 and p does not divide n/s.

    sum_{j < ms/d} c^{-(p^{(j+1)r}-1)/(p^r-1)} ((n/s)^{-1} sum_{k=1}^{n/s-1} k x^{p^{k ms r/d}})^{p^{jr}}.
    Only the values on ker T_{q^n|q^s} are meaningful.
    """
    verdict = classify(spec)
    if verdict.kind is not Classification.KERNEL_ONLY:
        raise NotAPermutation(f"expected a kernel-only permutation, classified {verdict.kind.value}")
    ctx, p, r, d = spec.ctx, spec.p, spec.r, spec.d
    M, rel = spec.sub_degree, spec.rel_degree
    rel_inv = pow(rel, -1, p)
    cinv = spec.c.inverse()
    terms: dict[int, FieldElement] = {}
    for j in range(M // d):
        cj = cinv ** ladder(p, r, j)
        for k in range(1, rel):
            slot = r * (k * M // d + j) // d
            weight = (k * rel_inv) % p
            terms[slot] = terms.get(slot, ctx.zero) + cj * weight
    return LinearizedPolynomial.from_terms(ctx, d, terms)


def kernel_inverse(spec: BinomialSpec) -> tuple[KernelPermClassification, LinearizedPolynomial | None]:
    """Classification plus the matching kernel inverse (None when there is none)."""
    verdict = classify(spec)
    if verdict.kind is Classification.FULL:
        return verdict, inverse_full(spec)
    if verdict.kind is Classification.KERNEL_ONLY:
        return verdict, inverse_on_kernel_singular(spec)
    return verdict, None


def all_c_guarantee(p: int, m: int, n: int, r: int) -> bool:
    """True when L_{c,r} permutes ker T_{q^n|q} for every c in F_q."""
    d = gcd(n * m, r)
    return d == gcd(m, r) and n % p != 0 and gcd(n, p**d - 1) == 1


def verify_inverse(spec: BinomialSpec, inverse: LinearizedPolynomial, elems: np.ndarray) -> int:
    """Check L(inv(x)) = inv(L(x)) = x on ``elems``; returns the number checked."""
    L = spec.polynomial()
    if not (np.array_equal(L(inverse(elems)), elems) and np.array_equal(inverse(L(elems)), elems)):
        raise NotAPermutation("inverse check failed")
    return len(elems)


def brute_force_permutes_kernel(spec: BinomialSpec) -> bool:
    """Exhaustive bijectivity of L_{c,r} on ker T_{q^n|q^s}."""
    V = spec.kernel()
    elems = V.elements()
    img = spec.polynomial()(elems)
    ctx = spec.ctx
    return bool(np.all(V.contains(img))) and len(np.unique(ctx.to_index(img))) == len(elems)


def oracle_inverse(spec: BinomialSpec, full_field: bool = False) -> LinearizedPolynomial:
    """Inverse obtained by solving the Dickson system instead of the closed form.

    With ``full_field`` the subspace is the whole field and the idempotent is 0;
    otherwise V = ker T_{q^n|q^s} with idempotent (n/s)^{-1} T_{q^n|q^s}.
    """
    ctx, d = spec.ctx, spec.d
    phi = spec.polynomial()
    if full_field:
        V = Subspace.full(ctx)
        K = LinearizedPolynomial.from_terms(ctx, d, {})
    else:
        spec.require_gcd()
        rel = spec.rel_degree
        if rel % spec.p == 0:
            raise InvalidParameters("p divides n/s: (n/s)^{-1} T is not defined")
        V = spec.kernel()
        K = LinearizedPolynomial.trace(ctx, spec.sub_degree, step=d).scale(pow(rel, -1, spec.p))
    return subspace_inverse_solver(phi, V, K)


def lifted_dickson_solution(ctx: FieldContext, m: int, n: int, s: int, r: int, c) -> tuple[np.ndarray, np.ndarray]:
    """The explicit Dickson-system solution in the lifted field F_{q^{nr}}.

    Assumes (n, r) = (s, r) = 1 in q-units and works with L = x^{q^r} - c x as
    a q^r-polynomial with n slots.  Returns (d @ D_L, right-hand side), both
    shape (n, D), which must agree.
    """
    p = ctx.p
    if ctx.degree != m * n * r or gcd(n, r) != 1 or gcd(s, r) != 1 or n % s:
        raise InvalidParameters("need ambient degree m*n*r with (n, r) = (s, r) = 1 and s | n")
    c = ctx.element(c)
    if not c.in_subfield(m * s):
        raise InvalidParameters("c must lie in F_{q^s}")
    q = p**m
    rel = n // s
    rel_inv = pow(rel, -1, p)
    cinv = c.inverse()
    sol = np.zeros((n, ctx.degree), dtype=np.int64)
    for k in range(rel):
        for j in range(s):
            e = (q ** ((j + 1) * r) - 1) // (q**r - 1)
            sol[k * s + j] = (cinv**e * ((k * rel_inv) % p)).vec
    L = LinearizedPolynomial.from_terms(ctx, m * r, {0: -c, 1: 1})
    from .linearized import dickson_matrix

    D_L = dickson_matrix(L).entries
    lhs = np.zeros((n, ctx.degree), dtype=np.int64)
    for i in range(n):
        lhs = ctx.add(lhs, ctx.mul(D_L[i], sol[i][None, :]))
    T = LinearizedPolynomial.trace(ctx, m * s * r, step=m * r)
    rhs = ctx.neg(T.scale(rel_inv).array)
    rhs[0] = ctx.add(rhs[0], ctx.ones())
    return lhs, rhs
