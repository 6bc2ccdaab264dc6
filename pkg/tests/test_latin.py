from __future__ import annotations

import itertools

import numpy as np
import pytest

from ffperm.complete import SubfieldPolynomial
from ffperm.errors import InvalidParameters, NotACompleteMapping, OrderMismatch
from ffperm.field import make_field
from ffperm.latin import (
    LatinSquare,
    all_pairs_orthogonal,
    are_orthogonal,
    build_mols,
    cayley_table,
    is_latin,
    mols_member,
    square_from_cm,
    square_from_table,
)
from ffperm.maps import FieldMap, identity, is_bijective_table, is_complete_mapping

F4 = make_field(2, 2)
F8 = make_field(2, 3)


def linear(ctx, c):
    cv = ctx.element(c).vec
    return FieldMap(ctx, lambda x: ctx.mul(x, cv), f"{c}x")


def test_square_from_cm_example():
    sq = square_from_cm(linear(F4, 2))
    assert sq.grid.tolist() == [[0, 3, 1, 2], [2, 1, 3, 0], [3, 0, 2, 1], [1, 2, 0, 3]]
    assert sq.grid[1][2] == 3
    assert sq.order == 4
    assert is_latin(sq)


def test_square_from_cm_requires_complete_mapping():
    with pytest.raises(NotACompleteMapping):
        square_from_cm(identity(F4))


def test_square_formula_pointwise():
    ctx = make_field(3, 2)
    P = linear(ctx, 4)
    assert is_complete_mapping(P)
    sq = square_from_cm(P)
    for i in range(9):
        for j in range(9):
            x, y = ctx.element(i), ctx.element(j)
            assert sq.grid[i][j] == (P(x + y) + y).index


def test_cayley_table():
    sq = cayley_table(F4)
    assert is_latin(sq)
    assert sq.grid.tolist() == [[0, 1, 2, 3], [1, 0, 3, 2], [2, 3, 0, 1], [3, 2, 1, 0]]
    ctx = make_field(3, 2)
    sq = cayley_table(ctx)
    for i in range(9):
        for j in range(9):
            assert sq.grid[i][j] == (ctx.element(i) + ctx.element(j)).index


def test_is_latin_rejects_duplicates():
    g = cayley_table(F4).grid.copy()
    g[0, 1] = g[0, 0]
    assert not is_latin(LatinSquare(g))
    g = cayley_table(F4).grid.copy()
    g[[0, 1], 2] = g[[1, 0], 2]  # swapping two cells of one column breaks both rows
    assert not is_latin(LatinSquare(g))


def test_orthogonality_examples():
    s1 = square_from_cm(linear(F4, 2))
    s2 = square_from_cm(linear(F4, 3))
    assert are_orthogonal(s1, s2)
    assert not are_orthogonal(s1, s1)
    assert are_orthogonal(cayley_table(F4), s1)
    with pytest.raises(OrderMismatch):
        are_orthogonal(s1, cayley_table(F8))


def test_orthogonality_against_brute_force_pairs():
    s1 = square_from_cm(linear(F8, 3))
    s2 = square_from_cm(linear(F8, 5))
    pairs = {(int(s1.grid[i, j]), int(s2.grid[i, j])) for i in range(8) for j in range(8)}
    assert are_orthogonal(s1, s2) == (len(pairs) == 64)


def test_difference_criterion_linear_maps():
    # squares from c1 x and c2 x are orthogonal exactly when (c2 - c1) x is a permutation
    for ctx in (F4, F8):
        cms = [c for c in range(ctx.order) if is_complete_mapping(linear(ctx, c))]
        assert len(cms) == ctx.order - 2
        squares = {c: square_from_cm(linear(ctx, c)) for c in cms}
        for c1, c2 in itertools.product(cms, repeat=2):
            diff = FieldMap(ctx, lambda x, c1=c1, c2=c2: ctx.sub(linear(ctx, c2).values(x), linear(ctx, c1).values(x)))
            assert are_orthogonal(squares[c1], squares[c2]) == is_bijective_table(diff.table())


def test_difference_criterion_all_complete_mappings_of_f4():
    tables = []
    for perm in itertools.permutations(range(4)):
        t = np.array(perm, dtype=np.int64)
        if is_bijective_table(F4.add_indices(t, np.arange(4))):
            tables.append(t)
    assert tables
    for t1, t2 in itertools.product(tables, repeat=2):
        s1, s2 = square_from_table(F4, t1), square_from_table(F4, t2)
        assert is_latin(s1) and is_latin(s2)
        assert are_orthogonal(s1, s2) == is_bijective_table(F4.sub_indices(t2, t1))


def test_csv_and_json_round_trip():
    sq = square_from_cm(linear(F4, 2))
    text = sq.to_csv()
    assert text.splitlines()[0] == "order,4"
    assert text.splitlines()[1] == "0,3,1,2"
    assert LatinSquare.from_csv(text) == sq
    assert sq.to_json() == {"order": 4, "rows": sq.grid.tolist()}
    assert LatinSquare.from_json(sq.to_json()) == sq


def test_mols_small():
    ctx = make_field(2, 6)
    w = int(ctx.to_index(ctx.subfield_elements(2))[2])
    G = SubfieldPolynomial(ctx, 2, [w])
    squares = build_mols(ctx, 2, 3, 1, G, [0, 1], [1, w])
    assert len(squares) == 3
    assert all(is_latin(s) for s in squares)
    assert all_pairs_orthogonal(squares)
    # each member is itself a complete mapping
    for a, b in ((1, 0), (w, 1)):
        assert is_complete_mapping(mols_member(ctx, 2, 1, G, ctx.element(a), ctx.element(b)))


def test_mols_large_instance():
    ctx = make_field(2, 10)
    G = SubfieldPolynomial(ctx, 2, [236])
    squares = build_mols(ctx, 2, 5, 2, G, [0, 1], [1, 236])
    assert [s.order for s in squares] == [1024] * 3
    assert all(is_latin(s) for s in squares)
    assert all_pairs_orthogonal(squares)


def test_mols_edge_cases():
    ctx = make_field(2, 6)
    w = int(ctx.to_index(ctx.subfield_elements(2))[2])
    G = SubfieldPolynomial(ctx, 2, [w])
    only = build_mols(ctx, 2, 3, 1, G, [], [])
    assert len(only) == 1 and only[0] == cayley_table(ctx)
    with pytest.raises(InvalidParameters):
        build_mols(ctx, 2, 3, 1, G, [1, 1], [1, 1])
    with pytest.raises(InvalidParameters):
        build_mols(ctx, 2, 3, 1, G, [0], [0])
    # b = w + 1 gives x (w + w + 1) = x, whose companion x + x = 0 fails
    with pytest.raises(NotACompleteMapping, match=str(w)):
        build_mols(ctx, 2, 3, 1, G, [w], [1])
