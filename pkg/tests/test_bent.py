from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ffperm.bent import (
    MMComponent,
    VectorialBentSpec,
    abs_trace,
    build_mm_bent,
    combination_permutation_check,
    combine_components,
    is_bent,
    nonzero_combinations,
    parseval_sum,
    trace_form,
    trace_products,
    walsh,
    walsh_integer_p2,
)
from ffperm.errors import InvalidParameters
from ffperm.field import make_field
from ffperm.maps import FieldMap

F8 = make_field(2, 3)


def txy(ctx):
    X = ctx.all_elements()
    return trace_products(ctx, X, X)


def test_trace_form_matches_trace():
    for p, D in [(2, 3), (3, 2), (5, 2), (2, 6)]:
        ctx = make_field(p, D)
        X = ctx.all_elements()
        direct = np.array([[ctx.element(i).__mul__(ctx.element(j)).trace(1).index for j in range(ctx.order)] for i in range(ctx.order)])
        assert np.array_equal(trace_products(ctx, X, X), direct)
        assert trace_form(ctx).shape == (D, D)


def test_walsh_of_zero():
    zero = np.zeros(8, dtype=np.int64)
    assert walsh(zero, F8, 0) == 8
    assert all(walsh(zero, F8, b) == 0 for b in range(1, 8))
    ctx = make_field(3, 2)
    z = np.zeros(9, dtype=np.int64)
    assert walsh(z, ctx, 0) == 9
    assert all(walsh(z, ctx, b) == 0 for b in range(1, 9))


def walsh_reference_p2(ctx, f, b1, b2):
    """Plain signed sum, built from FieldElement arithmetic only."""
    B1, B2 = ctx.element(b1), ctx.element(b2)
    total = 0
    for i in range(ctx.order):
        x = ctx.element(i)
        for j in range(ctx.order):
            y = ctx.element(j)
            e = f(x, y) + (B1 * x).trace(1).index + (B2 * y).trace(1).index
            total += (-1) ** (e % 2)
    return total


def test_walsh_txy_integer_reference():
    vals = txy(F8)
    seen = set()
    for b in range(64):
        w = walsh(vals, F8, b)
        assert w.is_rational_integer()
        assert int(w) == walsh_integer_p2(vals, F8, b)
        seen.add(int(w))
    assert seen == {8, -8}
    f = lambda x, y: (x * y).trace(1).index
    for b in (0, 5, 17, 42, 63):
        b1, b2 = divmod(b, 8)
        assert walsh_reference_p2(F8, f, b1, b2) == walsh_integer_p2(vals, F8, b)


def test_txy_is_bent():
    rep = is_bent(txy(F8), F8)
    assert rep == {"bent": True, "checked_b": 64, "mode": "exhaustive", "seed": 0, "failures": []}


def test_zero_and_affine_not_bent():
    rep = is_bent(np.zeros((8, 8), dtype=np.int64), F8)
    assert not rep["bent"] and 0 in rep["failures"]
    X = F8.all_elements()
    u = abs_trace(F8, F8.mul(X, F8.element(3).vec))
    affine = (u[:, None] + 1) % 2 * np.ones((1, 8), dtype=np.int64)
    assert not is_bent(affine, F8)["bent"]
    # integer guard on p = 2 helpers
    with pytest.raises(InvalidParameters):
        walsh_integer_p2(np.zeros(9, dtype=np.int64), make_field(3, 2), 0)


def test_sampled_mode_is_reproducible():
    vals = txy(F8)
    a = is_bent(vals, F8, samples=10, seed=4)
    b = is_bent(vals, F8, samples=10, seed=4)
    assert a == b and a["mode"] == "sampled" and a["checked_b"] == 10 and a["seed"] == 4
    with pytest.raises(InvalidParameters):
        is_bent(vals, F8, samples=0)


def test_parseval_exhaustive():
    rng = np.random.default_rng(0)
    for ctx, shape in [(F8, (8, 8)), (make_field(3, 2), (9, 9)), (make_field(3, 5), (243,)), (make_field(2, 6), (64,))]:
        vals = rng.integers(0, ctx.p, size=shape)
        M = int(np.prod(shape))
        assert parseval_sum(vals, ctx) == M * M
        for b in range(0, M, max(1, M // 7)):
            assert walsh(vals, ctx, b).abs_squared().is_rational_integer()


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_parseval_random_functions_p3(seed):
    ctx = make_field(3, 2)
    vals = np.random.default_rng(seed).integers(0, 3, size=(9, 9))
    assert parseval_sum(vals, ctx) == 81 * 81


def test_mm_component_pointwise():
    spec = VectorialBentSpec.create(2, 1, 3, 1, [0], 1, 1, [1])
    (comp,) = build_mm_bent(spec)
    vals = comp.values()
    for i in range(8):
        for j in range(8):
            assert vals[i, j] == comp(F8.element(i), F8.element(j))


def test_small_instance_bent():
    spec = VectorialBentSpec.create(2, 1, 3, 1, [0], 1, 1, [1])
    assert combination_permutation_check(spec)["ok"]
    (comp,) = build_mm_bent(spec)
    vals = comp.values()
    rep = is_bent(vals, spec.ctx)
    assert rep["bent"] and rep["mode"] == "exhaustive" and rep["checked_b"] == 64
    for b in range(64):
        assert walsh(vals, spec.ctx, b).abs_squared() == 64
    assert parseval_sum(vals, spec.ctx) == 4096


def test_component_with_g_shift_stays_bent():
    spec = VectorialBentSpec.create(2, 1, 3, 1, [0], 1, 1, [1])
    ctx = spec.ctx
    g = FieldMap(ctx, lambda y: ctx.pow(y, 3), "y^3")
    comp = MMComponent(spec.pi(0), g)
    assert is_bent(comp.values(), ctx)["bent"]


def test_quaternary_instance_certificate():
    ctx = make_field(2, 10)
    spec = VectorialBentSpec.create(2, 2, 5, 2, [0], 2, 236, [1, 1], ctx=ctx)
    cert = combination_permutation_check(spec)
    assert cert["ok"] and cert["witness"] is None
    assert [r["c"] for r in cert["combinations"]] == [[0, 1], [1, 0], [1, 1]]
    routed = [r for r in cert["combinations"] if r["route"] == "x*g(T(x))"]
    assert [r["c"] for r in routed] == [[1, 1]] and routed[0]["criterion"]
    comps = build_mm_bent(spec)
    for c in nonzero_combinations(2, 2):
        vals = combine_components(comps, c).values()
        rep = is_bent(vals, ctx, samples=8, seed=1)
        assert rep["bent"], c


def test_ternary_instance_sampled():
    spec = VectorialBentSpec.create(3, 1, 5, 1, [0], 1, 1, [1])
    assert combination_permutation_check(spec)["ok"]
    (comp,) = build_mm_bent(spec)
    rep = is_bent(comp.values(), spec.ctx, samples=8, seed=3)
    assert rep["bent"] and rep["mode"] == "sampled"


def test_non_permutation_fails_certificate_and_bentness():
    # pi(y) = y T(y) is not a permutation, so the component cannot be bent
    ctx = make_field(2, 3)
    pi = FieldMap(ctx, lambda y: ctx.mul(y, ctx.trace(y, 1)), "y T(y)")
    comp = MMComponent(pi)
    assert not is_bent(comp.values(), ctx)["bent"]


def test_spec_rejections():
    with pytest.raises(InvalidParameters):
        VectorialBentSpec.create(2, 1, 3, 1, [0], 0, 1, [])
    with pytest.raises(InvalidParameters):
        VectorialBentSpec.create(2, 1, 3, 1, [0], 2, 1, [1, 1])  # k > m
    ctx = make_field(2, 10)
    with pytest.raises(InvalidParameters, match="dependent"):
        VectorialBentSpec.create(2, 2, 5, 2, [0], 2, 1, [1, 1], ctx=ctx)  # 1, 1^2 dependent
    with pytest.raises(InvalidParameters, match="S minus"):
        VectorialBentSpec.create(2, 2, 5, 2, [1], 2, 236, [1, 1], ctx=ctx)
    with pytest.raises(InvalidParameters):
        VectorialBentSpec.create(3, 1, 3, 1, [0], 1, 1, [1])  # p | n
    spec = VectorialBentSpec.create(2, 2, 5, 2, [0], 2, 236, [1, 1], ctx=ctx)
    assert spec.to_json() == {"p": 2, "m": 2, "n": 5, "r": 2, "G": [0], "k": 2, "alpha": 236, "a_list": [1, 1]}
