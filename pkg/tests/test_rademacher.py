import cmath
import itertools
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import rademacher_product_integral, rademacher_value
from uncpoly import BoundaryError, BudgetExceeded, DomainError, eval_step, product_integral, rademacher
from uncpoly.rademacher import cyclotomic, exponent_weights, product_integral_general, reduce_cyclotomic

W3 = cmath.exp(2j * cmath.pi / 3)


def test_level_one_values():
    assert np.allclose(rademacher(2, 1).values, [1, -1])
    assert np.allclose(rademacher(3, 1).values, [1, W3, W3 ** 2])
    assert rademacher(3, 1).breakpoints == [0, Fraction(1, 3), Fraction(2, 3), 1]


def test_level_two_k2_quarters():
    s = rademacher(2, 2)
    assert np.allclose(s.values, [1, -1, 1, -1])
    assert s.table()[1] == ("1/4", "1/2", 1)


def test_each_level_refines_the_previous():
    for k in (2, 3, 4):
        for n in (1, 2, 3):
            parent, child = rademacher(k, n), rademacher(k, n + 1)
            assert child.intervals == k * parent.intervals
            # child interval j lies in parent interval j // k and takes exponent j mod k
            assert np.array_equal(child.exponents, np.arange(child.intervals) % k)


def test_eval_step_examples():
    assert eval_step(rademacher(2, 1), Fraction(3, 4)) == -1
    assert eval_step(rademacher(3, 1), 0.5) == pytest.approx(W3, abs=1e-15)


def test_eval_step_errors():
    with pytest.raises(BoundaryError):
        eval_step(rademacher(2, 1), Fraction(1, 2))
    with pytest.raises(BoundaryError):
        eval_step(rademacher(3, 2), Fraction(1, 9))
    with pytest.raises(DomainError):
        eval_step(rademacher(2, 1), 1.5)


@given(st.integers(2, 6), st.integers(1, 5), st.fractions(0, 1))
def test_eval_step_unit_modulus_and_matches_oracle(k, n, t):
    if t in (0, 1) or (t * k ** n).denominator == 1:
        return
    v = eval_step(rademacher(k, n), t)
    assert abs(abs(v) - 1) < 1e-15
    assert v == pytest.approx(rademacher_value(k, n, float(t)), abs=1e-12)


def test_construction_errors():
    with pytest.raises(DomainError):
        rademacher(1, 1)
    with pytest.raises(DomainError):
        rademacher(2, 0)
    with pytest.raises(BudgetExceeded):
        rademacher(10, 8)


@pytest.mark.parametrize("k,idx,want", [(2, (1, 1), 1), (2, (1, 2), 0), (3, (1, 1, 2), 0)])
def test_product_integral_examples(k, idx, want):
    assert product_integral(k, idx) == want


def test_product_integral_arity():
    with pytest.raises(DomainError):
        product_integral(2, (1, 1, 1))


@pytest.mark.parametrize("k", [2, 3, 4])
def test_orthogonality_against_sampling_oracle(k):
    for idx in itertools.product(range(1, 5), repeat=k):
        got = product_integral(k, idx)
        want = rademacher_product_integral(k, idx)
        assert abs(got - want) < 1e-9
        if len(set(idx)) == 1:
            assert got == 1
        else:
            assert abs(got) < 1e-12


@pytest.mark.parametrize("k", [2, 3, 4, 5, 6])
@pytest.mark.parametrize("n", [1, 2, 3])
def test_single_level_integrates_to_zero(k, n):
    assert rademacher(k, n).integral() == 0


@given(st.integers(2, 5).flatmap(lambda k: st.tuples(st.just(k), st.lists(st.integers(1, 4), min_size=k, max_size=k))),
       st.randoms(use_true_random=False))
def test_permutation_invariance(case, rnd):
    k, idx = case
    perm = list(idx)
    rnd.shuffle(perm)
    assert product_integral(k, idx) == product_integral(k, perm)


def test_weights_are_exact_measures():
    w = exponent_weights(3, [1, 1, 2])
    assert sum(w) == 1 and all(isinstance(x, Fraction) for x in w)


def test_cyclotomic_polynomials():
    assert cyclotomic(2) == [1, 1]
    assert cyclotomic(3) == [1, 1, 1]
    assert cyclotomic(4) == [1, 0, 1]
    assert cyclotomic(6) == [1, -1, 1]


def test_cyclotomic_reduction_detects_zero_exactly():
    # 1 + w + w^2 = 0 for k = 3; 1 + w^2 = 0 for k = 4
    assert not any(reduce_cyclotomic(3, [1, 1, 1]))
    assert not any(reduce_cyclotomic(4, [1, 0, 1, 0]))
    assert any(reduce_cyclotomic(4, [1, 1, 0, 0]))


def test_general_products_of_other_lengths():
    # fewer than k factors: the integral of s_1 s_1 for k = 3 is the mean of w^(2j)
    assert product_integral_general(3, [1, 1]) == 0
    assert product_integral_general(2, [3]) == 0
