from __future__ import annotations

import cmath

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ffperm.cyclotomic import CyclotomicInteger, cyc_add, cyc_conj, cyc_mul
from ffperm.errors import PMismatch


def to_complex(u: CyclotomicInteger) -> complex:
    xi = cmath.exp(2j * cmath.pi / u.p)
    return sum(c * xi**j for j, c in enumerate(u.coords))


def test_examples():
    one_xi = CyclotomicInteger.integer(3, 1) + CyclotomicInteger.root(3, 1)
    one_xi2 = CyclotomicInteger.integer(3, 1) + CyclotomicInteger.root(3, 2)
    assert cyc_mul(one_xi, one_xi2) == 1
    assert CyclotomicInteger.root(3, 2) == CyclotomicInteger(3, [-1, -1])
    assert CyclotomicInteger.root(5, 5) == 1


def test_p2_is_the_integers():
    a, b = CyclotomicInteger.integer(2, 7), CyclotomicInteger.integer(2, -3)
    assert cyc_mul(a, b) == -21
    assert cyc_add(a, b) == 4
    assert CyclotomicInteger.root(2, 1) == -1
    assert cyc_conj(a) == a


def test_p_mismatch():
    with pytest.raises(PMismatch):
        CyclotomicInteger.integer(3, 1) + CyclotomicInteger.integer(5, 1)
    with pytest.raises(PMismatch):
        CyclotomicInteger.integer(3, 1) * CyclotomicInteger.integer(5, 1)


def test_rational_integer_test():
    assert CyclotomicInteger.from_counts(5, [2, 2, 2, 2, 2]) == 0
    assert CyclotomicInteger.from_counts(5, [3, 1, 1, 1, 1]) == 2
    u = CyclotomicInteger.root(5, 2)
    assert not u.is_rational_integer()
    with pytest.raises(ValueError):
        int(u)
    assert int(u.abs_squared()) == 1


def test_gauss_sum_norm():
    # quadratic Gauss sum over F_p has |g|^2 = p
    for p in (3, 5, 7, 11, 13):
        counts = [0] * p
        for x in range(p):
            counts[(x * x) % p] += 1
        g = CyclotomicInteger.from_counts(p, counts)
        assert g.abs_squared() == p


primes = st.sampled_from([2, 3, 5, 7])


@st.composite
def triples(draw):
    p = draw(primes)
    coord = st.lists(st.integers(-50, 50), min_size=p - 1, max_size=p - 1)
    return [CyclotomicInteger(p, draw(coord)) for _ in range(3)]


@settings(max_examples=300, deadline=None)
@given(triples())
def test_ring_axioms(t):
    u, v, w = t
    assert (u + v) + w == u + (v + w)
    assert (u * v) * w == u * (v * w)
    assert u * (v + w) == u * v + u * w
    assert u * v == v * u
    assert u - u == 0
    assert u * CyclotomicInteger.integer(u.p, 1) == u


@settings(max_examples=300, deadline=None)
@given(triples())
def test_conjugation(t):
    u, v, _ = t
    assert cyc_conj(cyc_conj(u)) == u
    assert cyc_conj(u * v) == cyc_conj(u) * cyc_conj(v)
    assert cyc_conj(u + v) == cyc_conj(u) + cyc_conj(v)
    n = u.abs_squared()
    assert n == cyc_conj(n)


@settings(max_examples=200, deadline=None)
@given(triples())
def test_matches_complex_embedding(t):
    u, v, _ = t
    assert abs(to_complex(u * v) - to_complex(u) * to_complex(v)) < 1e-6 * (1 + abs(to_complex(u) * to_complex(v)))
    assert abs(to_complex(cyc_conj(u)) - to_complex(u).conjugate()) < 1e-6 * (1 + abs(to_complex(u)))
    n = u.abs_squared()
    if n.is_rational_integer():
        assert abs(int(n) - abs(to_complex(u)) ** 2) < 1e-6 * (1 + int(n))
