"""Complete permutation polynomials built from the trace map T = T_{q^n|q}.

Three families are covered, all for q = p^m inside the ambient F_{q^n}:

* the G-family  f(x) = a x^{p^r} + x (G(T(x)) - a T(x)^{p^r - 1}),
* its linear special case with G = b constant,
* a multi-trace family assembled along a divisor chain 1 = d_0 | ... | d_L = n.

The coprimality hypotheses shared by all three are
(m, r) = (mn, r), p not dividing n, and gcd(n, p^{(m, r)} - 1) = 1.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd
from typing import Sequence

import numpy as np

from .errors import InvalidParameters, NotACompleteMapping
from .field import FieldContext, FieldElement, make_field
from .linearized import LinearizedPolynomial, trace_kernel
from .maps import FieldMap, find_collision, permutes_set


class SubfieldPolynomial:
    """A polynomial with coefficients in the subfield F_{p^s}, degree < p^s.

    ``coeffs[i]`` is the coefficient of x^i.
    """

    def __init__(self, ctx: FieldContext, s: int, coeffs: Sequence):
        if s < 1 or ctx.degree % s:
            raise InvalidParameters(f"subfield degree {s} does not divide {ctx.degree}")
        vecs = [ctx.vec(c) for c in coeffs] or [ctx.zeros()]
        arr = np.array(vecs, dtype=np.int64).reshape(-1, ctx.degree)
        if not np.all(ctx.in_subfield(arr, s)):
            raise InvalidParameters(f"coefficients must lie in F_{ctx.p}^{s}")
        # trim trailing zeros, keep at least the constant term
        nz = np.nonzero(np.any(arr, axis=1))[0]
        arr = arr[: (int(nz[-1]) + 1 if nz.size else 1)]
        if len(arr) > ctx.p**s:
            raise InvalidParameters(f"degree {len(arr) - 1} is not below {ctx.p ** s}")
        self.ctx = ctx
        self.s = s
        self.coeffs = arr

    @classmethod
    def constant(cls, ctx: FieldContext, s: int, c) -> SubfieldPolynomial:
        return cls(ctx, s, [c])

    @classmethod
    def monomial(cls, ctx: FieldContext, s: int, k: int, c=None) -> SubfieldPolynomial:
        coeffs = [ctx.zeros()] * k + [ctx.ones() if c is None else ctx.vec(c)]
        return cls(ctx, s, coeffs)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, x):
        if isinstance(x, FieldElement):
            return FieldElement(self.ctx, self.evaluate(x.vec[None, :])[0])
        return self.evaluate(np.asarray(x, dtype=np.int64))

    def evaluate(self, x: np.ndarray) -> np.ndarray:
        """Horner evaluation on a batch of coefficient arrays."""
        ctx = self.ctx
        acc = np.broadcast_to(self.coeffs[-1], x.shape).copy()
        for c in self.coeffs[-2::-1]:
            acc = ctx.add(ctx.mul(acc, x), c)
        return acc

    def times_power(self, k: int) -> SubfieldPolynomial:
        """x^k * self, with exponents folded by x^{p^s} = x."""
        ctx, q = self.ctx, self.ctx.p**self.s
        out = [ctx.zeros() for _ in range(q)]
        for e, c in enumerate(self.coeffs):
            e += k
            if e >= q:
                e = (e - 1) % (q - 1) + 1
            out[e] = ctx.add(out[e], c)
        return SubfieldPolynomial(ctx, self.s, out)

    def indices(self) -> list[int]:
        return [int(i) for i in np.atleast_1d(self.ctx.to_index(self.coeffs))]

    def to_json(self) -> list[int]:
        return self.indices()

    def __repr__(self) -> str:
        return f"SubfieldPolynomial(s={self.s}, coeffs={self.indices()})"


def base_is_cpp(ctx: FieldContext, m: int, fbar) -> bool:
    """Exhaustive test that y -> fbar(y) and y -> fbar(y) + y both permute F_{p^m}.

    ``fbar`` maps a batch of subfield elements to a batch.
    """
    sub = ctx.subfield_elements(m)
    img = fbar(sub)
    if not np.all(ctx.in_subfield(img, m)):
        return False
    idx = np.sort(ctx.to_index(sub))
    return bool(
        np.array_equal(np.sort(ctx.to_index(img)), idx)
        and np.array_equal(np.sort(ctx.to_index(ctx.add(img, sub))), idx)
    )


def _hypotheses(p: int, m: int, n: int, r: int) -> dict[str, bool]:
    d = gcd(m, r)
    return {
        "gcd_equal": d == gcd(m * n, r),
        "p_not_dividing_n": n % p != 0,
        "n_coprime": gcd(n, p**d - 1) == 1,
    }


@dataclass
class CMSpec:
    """Parameters of the G-family on F_{q^n}, q = p^m."""

    ctx: FieldContext
    m: int
    n: int
    r: int
    G: SubfieldPolynomial
    a: FieldElement
    hypotheses: dict = field(init=False)

    def __post_init__(self):
        if min(self.m, self.n, self.r) < 1:
            raise InvalidParameters("m, n, r must be positive")
        if self.ctx.degree != self.m * self.n:
            raise InvalidParameters(f"ambient degree {self.ctx.degree} != m*n")
        if self.G.ctx != self.ctx or self.G.s != self.m:
            raise InvalidParameters("G must be a polynomial over F_q")
        self.a = self.ctx.element(self.a)
        if not self.a.in_subfield(self.m) or self.a.is_zero():
            raise InvalidParameters("a must be a nonzero element of F_q")
        self.hypotheses = _hypotheses(self.p, self.m, self.n, self.r)

    @classmethod
    def create(cls, p: int, m: int, n: int, r: int, G: Sequence, a, ctx: FieldContext | None = None) -> CMSpec:
        if min(m, n, r) < 1:
            raise InvalidParameters("m, n, r must be positive")
        ctx = make_field(p, m * n) if ctx is None else ctx
        return cls(ctx, m, n, r, SubfieldPolynomial(ctx, m, G), ctx.element(a))

    @classmethod
    def from_json(cls, data: dict, ctx: FieldContext | None = None) -> CMSpec:
        return cls.create(int(data["p"]), int(data["m"]), int(data["n"]), int(data["r"]),
                          [int(i) for i in data["G"]], int(data["a"]), ctx)

    @property
    def p(self) -> int:
        return self.ctx.p

    @property
    def q(self) -> int:
        return self.ctx.p**self.m

    @property
    def d(self) -> int:
        return gcd(self.m, self.r)

    @property
    def valid(self) -> bool:
        return all(self.hypotheses.values())

    def require_valid(self) -> None:
        if not self.valid:
            bad = [k for k, v in self.hypotheses.items() if not v]
            raise InvalidParameters(f"parameter hypotheses fail: {', '.join(bad)}")

    def T(self, x: np.ndarray) -> np.ndarray:
        return self.ctx.trace(x, self.m)

    def fbar(self, y: np.ndarray) -> np.ndarray:
        """y G(y) on subfield elements."""
        return self.ctx.mul(y, self.G.evaluate(y))

    def g(self, y: np.ndarray) -> np.ndarray:
        """a y^{p^r - 1} - G(y), so that f(x) = a x^{p^r} - x g(T(x))."""
        ctx = self.ctx
        return ctx.sub(ctx.mul(self.a.vec, ctx.pow(y, self.p**self.r - 1)), self.G.evaluate(y))

    def to_json(self) -> dict:
        return {"p": self.p, "m": self.m, "n": self.n, "r": self.r,
                "a": self.a.index, "G": self.G.indices()}


def _cpp_fn(spec: CMSpec):
    ctx, a, e = spec.ctx, spec.a.vec, spec.p**spec.r

    def fn(x):
        t = spec.T(x)
        inner = ctx.sub(spec.G.evaluate(t), ctx.mul(a, ctx.pow(t, e - 1)))
        return ctx.add(ctx.mul(a, ctx.frob(x, spec.r)), ctx.mul(x, inner))

    return fn


def build_cpp(spec: CMSpec, check: bool = True) -> FieldMap:
    """Evaluator for a x^{p^r} + x (G(T(x)) - a T(x)^{p^r-1}).

    With ``check`` the base map x G(x) must be a complete mapping of F_q;
    otherwise NotACompleteMapping is raised.
    """
    spec.require_valid()
    if check and not base_is_cpp(spec.ctx, spec.m, spec.fbar):
        raise NotACompleteMapping("x*G(x) is not a complete mapping of the base field")
    return FieldMap(spec.ctx, _cpp_fn(spec), "cpp")


def build_cpp_linear(p: int, m: int, n: int, r: int, a, b, ctx: FieldContext | None = None) -> FieldMap:
    """Evaluator for a (x^{p^r} - x T(x)^{p^r-1}) + b x, a in F_q, b in F_q minus {0, -1}."""
    ctx = make_field(p, m * n) if ctx is None else ctx
    a, b = ctx.element(a), ctx.element(b)
    if not (a.in_subfield(m) and b.in_subfield(m)):
        raise InvalidParameters("a and b must lie in F_q")
    if b.is_zero() or (b + 1).is_zero():
        raise InvalidParameters("b must avoid 0 and -1")
    hyp = _hypotheses(p, m, n, r)
    if not all(hyp.values()):
        raise InvalidParameters(f"parameter hypotheses fail: {hyp}")
    e = p**r

    def fn(x):
        t = ctx.trace(x, m)
        lin = ctx.sub(ctx.frob(x, r), ctx.mul(x, ctx.pow(t, e - 1)))
        return ctx.add(ctx.mul(a.vec, lin), ctx.mul(b.vec, x))

    return FieldMap(ctx, fn, "cpp_linear")


def cpp_witness(f: FieldMap, budget: int | None = None) -> dict | None:
    """A colliding pair for f or f + x, or None if f is a complete mapping."""
    for name, g in (("f", f), ("f+x", f.plus_x())):
        pair = find_collision(g, budget)
        if pair is not None:
            return {"map": name, "pair": list(pair)}
    return None


# -- decomposition into a linear part plus x g(T(x)) -------------------------------


def trace_form_map(H: LinearizedPolynomial, g: SubfieldPolynomial, m: int) -> FieldMap:
    """x -> H(x) + x g(T(x))."""
    ctx = H.ctx
    return FieldMap(ctx, lambda x: ctx.add(H(x), ctx.mul(x, g.evaluate(ctx.trace(x, m)))), "H + x g(T)")


def coulter_decompose(H: LinearizedPolynomial, g: SubfieldPolynomial, m: int) -> dict:
    """Split bijectivity of H(x) + x g(T(x)) into two checks over smaller sets.

    kernel_family_ok: H(x) + x g(y) permutes ker T for every y in F_q.
    base_ok: H(x) + x g(x) permutes F_q.
    """
    ctx = H.ctx
    if g.ctx != ctx or g.s != m:
        raise InvalidParameters("g must be a polynomial over F_q")
    sub = ctx.subfield_elements(m)
    if not np.all(ctx.in_subfield(H.array, m)):
        raise InvalidParameters("H must have coefficients in F_q")
    kern = trace_kernel(ctx, m).elements()
    hk = H(kern)
    gy = g.evaluate(sub)
    kernel_ok = True
    for row in gy:
        img = ctx.add(hk, ctx.mul(kern, row[None, :]))
        if not np.array_equal(np.sort(ctx.to_index(img)), np.sort(ctx.to_index(kern))):
            kernel_ok = False
            break
    base = FieldMap(ctx, lambda y: ctx.add(H(y), ctx.mul(y, g.evaluate(y))), "fbar")
    return {"kernel_family_ok": kernel_ok, "base_ok": permutes_set(base, sub)}


def xg_trace_perm_check(g: SubfieldPolynomial) -> bool:
    """x g(T(x)) permutes F_{q^n} exactly when x g(x) permutes F_q and g(0) != 0."""
    ctx, m = g.ctx, g.s
    sub = ctx.subfield_elements(m)
    xg = FieldMap(ctx, lambda y: ctx.mul(y, g.evaluate(y)), "xg")
    return bool(np.any(g.coeffs[0])) and permutes_set(xg, sub)


# -- multi-trace family along a divisor chain --------------------------------------


@dataclass
class RecursiveCMSpec:
    """Divisor chain 1 = d_0 | ... | d_L = n with a_k in F_{q^{d_k}}."""

    ctx: FieldContext
    m: int
    r: int
    chain: tuple[int, ...]
    a_list: tuple[FieldElement, ...]
    f0: SubfieldPolynomial

    def __post_init__(self):
        self.chain = tuple(int(c) for c in self.chain)
        self.a_list = tuple(self.ctx.element(a) for a in self.a_list)
        ch = self.chain
        if len(ch) < 2:
            raise InvalidParameters("the divisor chain needs at least one link")
        if ch[0] != 1:
            raise InvalidParameters("the divisor chain must start at 1")
        if self.ctx.degree != self.m * ch[-1]:
            raise InvalidParameters("ambient degree must equal m times the last chain entry")
        if any(b % a or b == a for a, b in zip(ch, ch[1:])):
            raise InvalidParameters(f"{list(ch)} is not a strictly increasing divisor chain")
        if len(self.a_list) != len(ch) - 1:
            raise InvalidParameters(f"need {len(ch) - 1} coefficients, got {len(self.a_list)}")
        if self.f0.ctx != self.ctx or self.f0.s != self.m:
            raise InvalidParameters("f0 must be a polynomial over F_q")
        p, n = self.ctx.p, self.n
        if n % p == 0:
            raise InvalidParameters("p must not divide n")
        if gcd(n, p ** gcd(self.m, self.r) - 1) != 1:
            raise InvalidParameters("n must be coprime to p^(m,r) - 1")
        if len({gcd(d * self.m, self.r) for d in ch}) != 1:
            raise InvalidParameters("(d_i m, r) must not depend on i")
        total = self.ctx.zero
        for k, a in enumerate(self.a_list):
            if not a.in_subfield(self.m * ch[k]):
                raise InvalidParameters(f"a_{k} must lie in F_q^{ch[k]}")
            total = total + a
            if total.is_zero():
                raise InvalidParameters(f"partial sum a_0 + ... + a_{k} vanishes")

    @classmethod
    def create(cls, p: int, m: int, r: int, chain: Sequence[int], a_list: Sequence, f0: Sequence,
               ctx: FieldContext | None = None) -> RecursiveCMSpec:
        if not chain or min(m, r, *chain) < 1:
            raise InvalidParameters("m, r and chain entries must be positive")
        ctx = make_field(p, m * chain[-1]) if ctx is None else ctx
        return cls(ctx, m, r, tuple(chain), tuple(ctx.element(a) for a in a_list),
                   SubfieldPolynomial(ctx, m, f0))

    @classmethod
    def from_json(cls, data: dict, ctx: FieldContext | None = None) -> RecursiveCMSpec:
        return cls.create(int(data["p"]), int(data["m"]), int(data["r"]), [int(c) for c in data["chain"]],
                          [int(i) for i in data["a_list"]], [int(i) for i in data["f0"]], ctx)

    @property
    def n(self) -> int:
        return self.chain[-1]

    @property
    def p(self) -> int:
        return self.ctx.p

    def partial_sums(self) -> list[FieldElement]:
        out, total = [], self.ctx.zero
        for a in self.a_list:
            total = total + a
            out.append(total)
        return out

    def f0_ok(self) -> bool:
        """f0 is a complete mapping of F_q with f0(0) = 0."""
        return not np.any(self.f0.coeffs[0]) and base_is_cpp(self.ctx, self.m, self.f0.evaluate)

    def to_json(self) -> dict:
        return {"p": self.p, "m": self.m, "n": self.n, "r": self.r, "chain": list(self.chain),
                "a_list": [a.index for a in self.a_list], "f0": self.f0.indices(),
                "chain_links": len(self.chain) - 1}


def _check_f0(spec: RecursiveCMSpec, check: bool) -> None:
    if check and not spec.f0_ok():
        raise NotACompleteMapping("f0 must be a complete mapping of F_q with f0(0) = 0")


def build_recursive_cpp(spec: RecursiveCMSpec, check: bool = True) -> FieldMap:
    """Closed-form evaluator x (sum_k a_k (x^{e-1} - T_k(x)^{e-1}) + f0(T(x)) / T(x)), e = p^r.

    T_k is the trace onto F_{q^{d_k}}; division is by the (q-2)-th power, so the
    last term vanishes where T(x) = 0.
    """
    _check_f0(spec, check)
    ctx, m, e = spec.ctx, spec.m, spec.p**spec.r

    def fn(x):
        xe = ctx.pow(x, e - 1)
        acc = ctx.zeros(len(x))
        for k, a in enumerate(spec.a_list):
            tk = ctx.trace(x, m * spec.chain[k])
            acc = ctx.add(acc, ctx.mul(a.vec, ctx.sub(xe, ctx.pow(tk, e - 1))))
        t = ctx.trace(x, m)
        acc = ctx.add(acc, ctx.mul(spec.f0.evaluate(t), ctx.inv_sub(t, m)))
        return ctx.mul(x, acc)

    return FieldMap(ctx, fn, "recursive_cpp")


def recursive_expand(spec: RecursiveCMSpec, check: bool = True) -> FieldMap:
    """Evaluator built level by level.

    f_{i+1}(x) = x (c_i x^{e-1} - c_i S(x)^{e-1} + f_i(S(x)) / S(x)), where S is
    the trace from F_{q^{d_{i+1}}} onto F_{q^{d_i}} and c_i = a_0 + ... + a_i.
    """
    _check_f0(spec, check)
    ctx, m, e = spec.ctx, spec.m, spec.p**spec.r
    sums = spec.partial_sums()

    def level(i: int, x: np.ndarray) -> np.ndarray:
        if i == 0:
            return spec.f0.evaluate(x)
        lo, hi = m * spec.chain[i - 1], m * spec.chain[i]
        c = sums[i - 1].vec
        s = ctx.trace(x, lo, hi)
        inner = ctx.mul(c, ctx.sub(ctx.pow(x, e - 1), ctx.pow(s, e - 1)))
        inner = ctx.add(inner, ctx.mul(level(i - 1, s), ctx.inv_sub(s, lo)))
        return ctx.mul(x, inner)

    top = len(spec.chain) - 1
    return FieldMap(ctx, lambda x: level(top, x), "recursive_expand")


def g_from_f0(f0: SubfieldPolynomial) -> SubfieldPolynomial:
    """G(y) = y^{q-2} f0(y), the G-family member that the chain 1 | n reduces to."""
    return f0.times_power(f0.ctx.p**f0.s - 2)
