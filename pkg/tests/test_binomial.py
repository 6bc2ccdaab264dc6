from __future__ import annotations

import numpy as np
import pytest

from ffperm.binomial import (
    BinomialSpec,
    Classification,
    all_c_guarantee,
    brute_force_permutes_kernel,
    classify,
    inverse_full,
    inverse_on_kernel_fullrank,
    inverse_on_kernel_singular,
    kernel_inverse,
    ladder,
    lifted_dickson_solution,
    oracle_inverse,
    verify_inverse,
)
from ffperm.errors import InvalidParameters, NotAPermutation
from ffperm.field import make_field
from ffperm.linearized import LinearizedPolynomial, agree_on


def fifth_roots(ctx):
    sub = ctx.subfield_elements(4)
    return [i for i in ctx.to_index(sub) if i and ctx.element(int(i)) ** 5 == 1]


def test_ladder():
    assert ladder(2, 1, 0) == 1
    assert ladder(2, 1, 2) == 7
    assert ladder(3, 2, 1) == 10


def test_classify_examples():
    F16 = make_field(2, 12)
    roots = fifth_roots(F16)
    assert len(roots) == 5
    for c in roots:
        spec = BinomialSpec(F16, 4, 3, 2, F16.element(int(c)))
        assert classify(spec).kind is Classification.KERNEL_ONLY
        assert brute_force_permutes_kernel(spec)
    assert classify(BinomialSpec.create(2, 4, 3, 2, 0)).kind is Classification.FULL
    spec = BinomialSpec.create(3, 1, 3, 1, 1)
    assert classify(spec).kind is Classification.NOT_KERNEL
    assert not brute_force_permutes_kernel(spec)


def test_classification_json():
    v = classify(BinomialSpec.create(2, 1, 3, 1, 1))
    assert v.to_json() == {"classification": "KernelOnlyPermutation", "norm": 1}


def test_gcd_hypothesis_is_enforced():
    # (nm, r) = (6, 2) = 2 but (sm, r) = (1, 2) = 1
    spec = BinomialSpec.create(2, 1, 6, 2, 1)
    with pytest.raises(InvalidParameters):
        classify(spec)
    with pytest.raises(InvalidParameters):
        BinomialSpec.create(2, 1, 6, 1, 1, s=4)


def test_c_outside_subfield_only_on_full_route():
    ctx = make_field(3, 2)
    t = ctx.gen
    spec = BinomialSpec(ctx, 1, 2, 1, t + 1)  # c outside F_3 but full norm != 1
    assert classify(spec).kind is Classification.FULL
    with pytest.raises(InvalidParameters):
        inverse_on_kernel_fullrank(spec)
    ctx = make_field(2, 2)
    spec = BinomialSpec(ctx, 1, 2, 1, ctx.gen)  # N_{4|2}(t) = 1, c outside F_2
    with pytest.raises(InvalidParameters):
        classify(spec)


def test_inverse_full_examples():
    ctx = make_field(3, 2)
    t = ctx.gen
    spec = BinomialSpec(ctx, 1, 2, 1, t + 1)
    inv = inverse_full(spec)
    expected = LinearizedPolynomial.from_terms(ctx, 1, {0: t + 2, 1: 2})
    allx = ctx.all_elements()
    assert agree_on(inv, expected, allx)
    assert verify_inverse(spec, inv, allx) == 9
    F4 = make_field(2, 2)
    inv0 = inverse_full(BinomialSpec.create(2, 1, 2, 1, 0))
    assert agree_on(inv0, LinearizedPolynomial.from_terms(F4, 1, {1: 1}), F4.all_elements())


def test_inverse_full_rejects_norm_one():
    with pytest.raises(NotAPermutation):
        inverse_full(BinomialSpec.create(2, 1, 3, 1, 1))


def test_inverse_full_is_two_sided_everywhere():
    for p, m, n, r in [(2, 1, 5, 2), (3, 1, 3, 2), (3, 2, 2, 1), (5, 1, 3, 1), (2, 2, 3, 4)]:
        ctx = make_field(p, m * n)
        allx = ctx.all_elements()
        for c in range(ctx.order):
            spec = BinomialSpec(ctx, m, n, r, ctx.element(c))
            if spec.full_norm() == 1:
                continue
            verify_inverse(spec, inverse_full(spec), allx)


def test_non_fifth_roots_do_not_permute_the_kernel():
    # for c in F_16^*, N_{2^12|4}(c) = (c^5)^3 = c^15 = 1, so the full-rank route never applies
    # and every c with c^5 != 1 leaves the kernel unpermuted
    ctx = make_field(2, 12)
    roots = set(fifth_roots(ctx))
    for c in ctx.to_index(ctx.subfield_elements(4)):
        c = int(c)
        if c == 0 or c in roots:
            continue
        spec = BinomialSpec(ctx, 4, 3, 2, ctx.element(c))
        assert spec.full_norm() == 1
        assert classify(spec).kind is Classification.NOT_KERNEL
        assert not brute_force_permutes_kernel(spec)


def test_fullrank_kernel_inverse():
    # c in F_q with N_{q^n|p^d}(c) != 1: the full inverse restricts to the kernel
    for p, m, n, r in [(3, 1, 2, 1), (2, 2, 3, 1), (5, 1, 2, 1), (3, 2, 2, 1)]:
        ctx = make_field(p, m * n)
        hit = 0
        for c in ctx.to_index(ctx.subfield_elements(m)):
            spec = BinomialSpec(ctx, m, n, r, ctx.element(int(c)))
            if not spec.gcd_hypothesis() or spec.full_norm() == 1:
                continue
            K = spec.kernel().elements()
            assert verify_inverse(spec, inverse_on_kernel_fullrank(spec), K) == len(K)
            hit += 1
        assert hit


def test_singular_kernel_inverse_examples():
    F8 = make_field(2, 3)
    spec = BinomialSpec(F8, 1, 3, 1, F8.one)
    inv = inverse_on_kernel_singular(spec)
    K = spec.kernel().elements()
    assert len(K) == 4
    assert agree_on(inv, LinearizedPolynomial.from_terms(F8, 1, {1: 1}), K)
    spec = BinomialSpec.create(2, 2, 5, 2, 1)
    K = spec.kernel().elements()
    assert verify_inverse(spec, inverse_on_kernel_singular(spec), K) == 256


def test_singular_inverse_rejects_other_regimes():
    with pytest.raises(NotAPermutation):
        inverse_on_kernel_singular(BinomialSpec.create(3, 1, 3, 1, 1))
    with pytest.raises(NotAPermutation):
        inverse_on_kernel_singular(BinomialSpec.create(3, 1, 2, 1, 4))


def test_general_s_kernel_inverse():
    # target ker T_{q^n|q^s} with s > 1
    for p, m, n, s, r in [(2, 1, 6, 2, 1), (2, 1, 6, 3, 1), (3, 1, 4, 2, 1), (2, 2, 3, 1, 2)]:
        ctx = make_field(p, m * n)
        for c in ctx.to_index(ctx.subfield_elements(m * s)):
            spec = BinomialSpec(ctx, m, n, r, ctx.element(int(c)), s)
            verdict, inv = kernel_inverse(spec)
            assert (verdict.kind is not Classification.NOT_KERNEL) == brute_force_permutes_kernel(spec)
            if inv is not None:
                verify_inverse(spec, inv, spec.kernel().elements())


def test_trichotomy_matches_brute_force():
    cases = [(2, 1, 3, 1), (2, 2, 5, 2), (2, 4, 3, 2), (3, 1, 2, 1), (3, 1, 3, 1), (3, 2, 2, 2), (5, 1, 2, 1), (2, 3, 3, 3), (3, 1, 4, 2)]
    for p, m, n, r in cases:
        ctx = make_field(p, m * n)
        for c in ctx.to_index(ctx.subfield_elements(m)):
            spec = BinomialSpec(ctx, m, n, r, ctx.element(int(c)))
            if not spec.gcd_hypothesis():
                continue
            verdict = classify(spec)
            assert (verdict.kind is not Classification.NOT_KERNEL) == brute_force_permutes_kernel(spec), (p, m, n, r, c)
            if all_c_guarantee(p, m, n, r):
                assert verdict.kind is not Classification.NOT_KERNEL


def test_all_c_guarantee_examples():
    assert all_c_guarantee(2, 2, 5, 2)
    assert not all_c_guarantee(3, 1, 3, 1)
    assert not all_c_guarantee(3, 1, 2, 1)


def test_oracle_agrees_on_kernel_only_instances():
    for p, m, n, r in [(2, 1, 3, 1), (2, 2, 5, 2), (2, 4, 3, 2), (2, 1, 5, 1), (3, 1, 2, 1)]:
        ctx = make_field(p, m * n)
        for c in ctx.to_index(ctx.subfield_elements(m)):
            spec = BinomialSpec(ctx, m, n, r, ctx.element(int(c)))
            verdict, inv = kernel_inverse(spec)
            if inv is None:
                continue
            K = spec.kernel().elements()
            assert agree_on(inv, oracle_inverse(spec), K)
            if verdict.kind is Classification.FULL:
                assert agree_on(inv, oracle_inverse(spec, full_field=True), ctx.all_elements())


def test_oracle_rejects_p_dividing_relative_degree():
    with pytest.raises(InvalidParameters):
        oracle_inverse(BinomialSpec.create(3, 1, 3, 1, 1))


def test_ladder_exponent_identity():
    # c^{(p^{mr/d} - 1)/(p^r - 1)} = 1 whenever N_{q|p^d}(c) = 1
    from math import gcd

    for p, m, r in [(2, 4, 2), (2, 6, 4), (3, 4, 2), (2, 6, 3), (3, 2, 1)]:
        ctx = make_field(p, m)
        d = gcd(m, r)
        e = (p ** (m * r // d) - 1) // (p**r - 1)
        for x in ctx.elements(ctx.all_elements()):
            if x.norm(d) == 1:
                assert x**e == 1


def test_kernel_only_without_all_c_guarantee_sampled():
    # p = 3, n = 8, m = r = 2: the kernel-only hypotheses hold but the all-c predicate fails
    p, m, n, r = 3, 2, 8, 2
    assert not all_c_guarantee(p, m, n, r)
    ctx = make_field(p, m * n)
    rng = np.random.default_rng(8)
    spec = BinomialSpec(ctx, m, n, r, ctx.one)
    verdict, inv = kernel_inverse(spec)
    assert verdict.kind is Classification.KERNEL_ONLY
    V = spec.kernel()
    assert V.size == 3**14
    xs = V.sample(2000, rng)
    assert np.all(V.contains(spec.polynomial()(xs)))
    verify_inverse(spec, inv, xs)
    # (n, p^d - 1) = (8, 8) != 1, so some c in F_9 lands in the non-permuting case
    kinds = {classify(BinomialSpec(ctx, m, n, r, ctx.element(int(c)))).kind for c in ctx.to_index(ctx.subfield_elements(m))}
    assert Classification.NOT_KERNEL in kinds


def test_lifted_dickson_solution():
    for p, m, n, s, r in [(2, 1, 3, 1, 2), (2, 1, 5, 1, 2), (2, 1, 6, 2, 1), (3, 1, 2, 1, 3)]:
        ctx = make_field(p, m * n * r)
        for c in ctx.to_index(ctx.subfield_elements(m * s)):
            c = int(c)
            if c == 0:
                continue
            lhs, rhs = lifted_dickson_solution(ctx, m, n, s, r, c)
            norm_one = ctx.element(c).norm(m, m * s) == 1
            assert np.array_equal(lhs, rhs) == norm_one, (p, m, n, s, r, c)


def test_spec_validation():
    with pytest.raises(InvalidParameters):
        BinomialSpec.create(2, 1, 3, 1, 1, s=2)
    with pytest.raises(InvalidParameters):
        BinomialSpec(make_field(2, 4), 1, 3, 1, make_field(2, 4).one)
    assert BinomialSpec.create(2, 2, 5, 2, 1).to_json() == {"p": 2, "m": 2, "n": 5, "r": 2, "s": 1, "c": 1}
