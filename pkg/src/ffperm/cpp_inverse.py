"""Compositional inverse of the G-family complete mapping.

Write y = fbar^{-1}(T(x)) with fbar(y) = y G(y) on F_q, and
C(x) = y^{p^r - 1} - a^{-1} G(y), an element of F_q.  The preimage of x takes
one of three shapes depending on whether C(x) = 0, N(C(x)) != 1 or
N(C(x)) = 1, where N is the norm from F_q down to F_{p^d}, d = (m, r).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .complete import CMSpec
from .errors import ClaimViolated, NotAPermutation
from .field import FieldContext
from .maps import FieldMap

BRANCHES = ("i", "ii", "iii")


@dataclass
class InverseContext:
    spec: CMSpec
    sub_indices: np.ndarray  # sorted indices of F_q
    barf_inverse: np.ndarray  # barf_inverse[k] = fbar^{-1}(element with index sub_indices[k])
    a_inv: np.ndarray
    n_inv: int  # n^{-1} mod p

    @property
    def ctx(self) -> FieldContext:
        return self.spec.ctx


def make_inverse_context(spec: CMSpec) -> InverseContext:
    spec.require_valid()
    ctx, m = spec.ctx, spec.m
    sub = ctx.subfield_elements(m)
    sub_idx = np.asarray(ctx.to_index(sub))
    img_idx = np.asarray(ctx.to_index(spec.fbar(sub)))
    if not np.array_equal(np.sort(img_idx), sub_idx):
        raise NotAPermutation("x*G(x) does not permute F_q")
    # position of fbar(sub[k]) inside sub, then invert that permutation
    pos = np.searchsorted(sub_idx, img_idx)
    table = np.empty_like(sub)
    table[pos] = sub
    return InverseContext(spec, sub_idx, table, ctx.inv(spec.a.vec), pow(spec.n, -1, spec.p))


def barf_inv(ic: InverseContext, y: np.ndarray) -> np.ndarray:
    """fbar^{-1} on a batch of F_q elements, by table lookup."""
    return ic.barf_inverse[np.searchsorted(ic.sub_indices, np.asarray(ic.ctx.to_index(y)))]


def _pieces(ic: InverseContext, x: np.ndarray):
    spec, ctx = ic.spec, ic.ctx
    y = barf_inv(ic, spec.T(x))
    C = ctx.sub(ctx.pow(y, spec.p**spec.r - 1), ctx.mul(ic.a_inv, spec.G.evaluate(y)))
    N = ctx.norm(C, spec.d, spec.m)
    return y, C, N


def eval_C(ic: InverseContext, x: np.ndarray) -> np.ndarray:
    return _pieces(ic, np.asarray(x, dtype=np.int64))[1]


def _ladder_powers(ic: InverseContext, C: np.ndarray, count: int) -> list[np.ndarray]:
    """C^{-(p^{(i+1) r} - 1)/(p^r - 1)} for i < count, with 0 sent to 0."""
    ctx, r = ic.ctx, ic.spec.r
    cinv = ctx.inv_sub(C, ic.spec.m)
    out = [cinv]
    for _ in range(count - 1):
        out.append(ctx.mul(ctx.frob(out[-1], r), cinv))
    return out


def _frobenius_branch(ic: InverseContext, x: np.ndarray) -> np.ndarray:
    spec = ic.spec
    ctx = ic.ctx
    return ctx.frob(ctx.mul(x, ic.a_inv), ctx.degree - spec.r)


def _full_branch(ic: InverseContext, x: np.ndarray, C: np.ndarray, N: np.ndarray) -> np.ndarray:
    spec, ctx = ic.spec, ic.ctx
    Nn = ctx.pow(N, spec.n)
    coef = ctx.mul(Nn, ctx.inv_sub(ctx.sub(ctx.ones(), Nn), spec.d))
    ax = ctx.mul(x, ic.a_inv)
    acc = ctx.zeros(len(x))
    for i, w in enumerate(_ladder_powers(ic, C, ctx.degree // spec.d)):
        acc = ctx.add(acc, ctx.mul(w, ctx.frob(ax, i * spec.r)))
    return ctx.mul(coef, acc)


def _weighted_frobenius_sum(ic: InverseContext, z: np.ndarray) -> np.ndarray:
    """sum_{k=1}^{n-1} k z^{p^{k m r / d}}."""
    spec, ctx = ic.spec, ic.ctx
    step = spec.m * spec.r // spec.d
    acc = ctx.zeros(len(z))
    for k in range(1, spec.n):
        acc = ctx.add(acc, ctx.smul(k, ctx.frob(z, k * step)))
    return acc


def _kernel_sum(ic: InverseContext, z: np.ndarray, C: np.ndarray) -> np.ndarray:
    """sum_{j < m/d} C^{-ladder_j} (sum_k k z^{p^{kmr/d}})^{p^{jr}}."""
    spec, ctx = ic.spec, ic.ctx
    s = _weighted_frobenius_sum(ic, z)
    acc = ctx.zeros(len(z))
    for j, w in enumerate(_ladder_powers(ic, C, spec.m // spec.d)):
        acc = ctx.add(acc, ctx.mul(w, ctx.frob(s, j * spec.r)))
    return acc


def _kernel_branch(ic: InverseContext, x: np.ndarray, y: np.ndarray, C: np.ndarray) -> np.ndarray:
    ctx = ic.ctx
    inner = ctx.add(y, _kernel_sum(ic, ctx.mul(x, ic.a_inv), C))
    return ctx.smul(ic.n_inv, inner)


def branch_of(ic: InverseContext, x: np.ndarray) -> np.ndarray:
    """0, 1 or 2 for the three preimage shapes."""
    ctx = ic.ctx
    _, C, N = _pieces(ic, np.asarray(x, dtype=np.int64))
    out = np.full(len(C), 2, dtype=np.int64)
    out[~ctx.equal(N, ctx.ones())] = 1
    out[ctx.is_zero(C)] = 0
    return out


def preimage(ic: InverseContext, x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Preimages under f of a batch, chosen branch by branch; also returns branch ids."""
    spec, ctx = ic.spec, ic.ctx
    x = np.asarray(x, dtype=np.int64)
    y, C, N = _pieces(ic, x)
    branch = np.full(len(x), 2, dtype=np.int64)
    branch[~ctx.equal(N, ctx.ones())] = 1
    branch[ctx.is_zero(C)] = 0
    out = np.empty_like(x)
    sel = branch == 0
    if sel.any():
        out[sel] = _frobenius_branch(ic, x[sel])
    sel = branch == 1
    if sel.any():
        Nn = ctx.pow(N[sel], spec.n)
        if np.any(ctx.equal(Nn, ctx.ones())):
            raise ClaimViolated("N(C)^n == 1 although N(C) != 1")
        out[sel] = _full_branch(ic, x[sel], C[sel], N[sel])
    sel = branch == 2
    if sel.any():
        out[sel] = _kernel_branch(ic, x[sel], y[sel], C[sel])
    return out, branch


def _selector_form(ic: InverseContext, x: np.ndarray) -> np.ndarray:
    spec, ctx = ic.spec, ic.ctx
    y, C, N = _pieces(ic, x)
    one = ctx.ones()
    cq = ctx.pow(C, spec.q - 1)
    nd = ctx.pow(ctx.sub(N, one), spec.p**spec.d - 1)
    s1 = ctx.sub(one, cq)
    s2 = ctx.mul(cq, nd)
    s3 = ctx.sub(one, nd)
    out = ctx.mul(s1, _frobenius_branch(ic, x))
    out = ctx.add(out, ctx.mul(s2, _full_branch(ic, x, C, N)))
    return ctx.add(out, ctx.mul(s3, _kernel_branch(ic, x, y, C)))


def inverse_map(ic: InverseContext) -> FieldMap:
    """The inverse as a single arithmetic expression with 0/1 selector factors."""
    return FieldMap(ic.ctx, lambda x: _selector_form(ic, x), "f_inverse")


def selectors(ic: InverseContext, x: np.ndarray) -> np.ndarray:
    """The three selector values per element, as indices (each 0 or 1)."""
    spec, ctx = ic.spec, ic.ctx
    _, C, N = _pieces(ic, np.asarray(x, dtype=np.int64))
    one = ctx.ones()
    cq = ctx.pow(C, spec.q - 1)
    nd = ctx.pow(ctx.sub(N, one), spec.p**spec.d - 1)
    parts = [ctx.sub(one, cq), ctx.mul(cq, nd), ctx.sub(one, nd)]
    return np.stack([np.asarray(ctx.to_index(s)) for s in parts], axis=1)


def vanishing_term(ic: InverseContext, x: np.ndarray) -> np.ndarray:
    """The kernel-inverse of a^{-1} n^{-1} T(x), which must be 0 on third-branch points."""
    spec, ctx = ic.spec, ic.ctx
    x = np.asarray(x, dtype=np.int64)
    _, C, _ = _pieces(ic, x)
    z = ctx.smul(ic.n_inv, ctx.mul(spec.T(x), ic.a_inv))
    return ctx.smul(ic.n_inv, _kernel_sum(ic, z, C))


def trace_compatible(ic: InverseContext, x: np.ndarray, inv_values: np.ndarray) -> bool:
    """T(f^{-1}(x)) == fbar^{-1}(T(x)) for every x in the batch."""
    spec, ctx = ic.spec, ic.ctx
    return bool(np.all(ctx.equal(spec.T(inv_values), barf_inv(ic, spec.T(x)))))


def inverse_report(ic: InverseContext, forward: FieldMap, elems: np.ndarray) -> dict:
    """Check preimage and the selector form against f on ``elems``."""
    ctx = ic.ctx
    pre, branch = preimage(ic, elems)
    inv = inverse_map(ic)
    sel = inv.values(elems)
    ok = (
        np.all(ctx.equal(forward.values(pre), elems))
        and np.all(ctx.equal(pre, sel))
        and np.all(ctx.equal(inv.values(forward.values(elems)), elems))
    )
    counts = np.bincount(branch, minlength=3)
    return {"verified": bool(ok), "branch_counts": {k: int(c) for k, c in zip(BRANCHES, counts)}}
