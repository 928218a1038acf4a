import itertools
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import dense_form, multilinear, sign_polarization
from uncpoly import (
    DomainError,
    Field,
    HomPoly,
    NormTag,
    ScalarFunctional,
    Space,
    StructuralError,
    SymTensor,
    UnsupportedError,
    Vec,
    basis_vector,
    binomial_expand,
    complexify,
    compose_linear,
    conjugate_apply,
    eval_multilinear,
    eval_poly,
    polarize,
    tensor_from_blackbox,
)
from uncpoly.polys import multiplicities, multiset_count, multisets, scalar_space, to_tensor_backed

L1, L2, SUP = NormTag.lp(1), NormTag.lp(2), NormTag.sup()


def e(i, n=2, tag=L2):
    return basis_vector(n, i, tag)


def x1x2():
    return HomPoly.from_tensor(SymTensor.from_dict(2, 2, 1, {(0, 1): 0.5}), L2, SUP)


@st.composite
def tensors(draw, max_k=4, max_n=5, max_m=2):
    k = draw(st.integers(1, max_k))
    n = draw(st.integers(1, max_n))
    m = draw(st.integers(1, max_m))
    seed = draw(st.integers(0, 2 ** 32 - 1))
    coef = np.random.default_rng(seed).uniform(-1, 1, (multiset_count(n, k), m))
    return SymTensor(k, n, m, Field.REAL, coef)


def test_multisets_and_weights():
    assert multiset_count(3, 2) == 6
    assert [tuple(r) for r in multisets(2, 2)] == [(0, 0), (0, 1), (1, 1)]
    assert list(multiplicities(2, 2)) == [1, 2, 1]
    for n, k in [(3, 3), (4, 2), (2, 5)]:
        assert multiplicities(n, k).sum() == n ** k


def test_eval_poly_examples():
    p = HomPoly.diagonal([1, 1], 2, L2)
    assert eval_poly(p, Vec([1, 2], L2)).entries.tolist() == [5.0]
    assert eval_poly(p, Vec([0, 0], L2)).entries.tolist() == [0.0]
    s = HomPoly.scaled_identity([1, 0], 2, SUP)
    assert eval_poly(s, Vec([2, 3], SUP)).entries.tolist() == [4.0, 6.0]
    with pytest.raises(StructuralError):
        eval_poly(p, Vec([1, 2, 3], L2))
    with pytest.raises(StructuralError):
        eval_poly(p, Vec([1, 2], L1))


def test_eval_multilinear_examples():
    a = x1x2().body.tensor
    assert eval_multilinear(a, [e(0), e(1)]).entries[0] == 0.5
    assert eval_multilinear(a, [e(0), Vec([0, 0], L2)]).entries[0] == 0
    d = tensor_from_blackbox(HomPoly.diagonal([1, 1], 2, L2))
    assert eval_multilinear(d, [Vec([1, 1], L2)] * 2).entries[0] == pytest.approx(2)
    with pytest.raises(DomainError):
        eval_multilinear(a, [e(0)])


def test_polarize_examples():
    sq = HomPoly.diagonal([1.0], 2, L2)
    for x, y in itertools.product([-1.5, 0.0, 2.0], repeat=2):
        assert polarize(sq, [Vec([x], L2), Vec([y], L2)]).entries[0] == pytest.approx(x * y)
    cube = HomPoly.diagonal([1, 0], 3, L2)
    assert polarize(cube, [e(0)] * 3).entries[0] == pytest.approx(1)
    assert polarize(x1x2(), [e(0), e(1)]).entries[0] == pytest.approx(0.5)
    with pytest.raises(DomainError):
        polarize(sq, [Vec([1], L2)])


def test_tensor_from_blackbox_examples():
    t = tensor_from_blackbox(HomPoly.diagonal([1, 1], 2, L2))
    assert t.coefficient((0, 0))[0] == pytest.approx(1)
    assert t.coefficient((1, 1))[0] == pytest.approx(1)
    assert t.coefficient((0, 1))[0] == pytest.approx(0, abs=1e-15)
    s = tensor_from_blackbox(HomPoly.scaled_identity([1, 0], 2, SUP))
    assert np.allclose(s.coefficient((0, 0)), [1, 0])
    assert np.allclose(s.coefficient((0, 1)), [0, 0.5])
    assert np.allclose(s.coefficient((1, 1)), [0, 0])
    z = tensor_from_blackbox(HomPoly.zero(3, Space(3, L2), Space(2, L2)))
    assert not np.any(z.coefficients)


@given(tensors(), st.integers(0, 2 ** 32 - 1))
def test_tensor_evaluation_matches_dense_oracle(t, seed):
    xs = np.random.default_rng(seed).standard_normal((t.k, t.n))
    got = eval_multilinear(t, [Vec(x, L2) for x in xs]).entries
    for j in range(t.m):
        form = dense_form({ms: c[j] for ms, c in t.items(include_zero=True)}, t.n, t.k)
        assert got[j] == pytest.approx(multilinear(form, xs.tolist()), rel=1e-9, abs=1e-9)


@given(tensors(), st.integers(0, 2 ** 32 - 1))
def test_polarization_matches_sign_sum_oracle(t, seed):
    p = HomPoly.from_tensor(t, L2, L2)
    xs = np.random.default_rng(seed).standard_normal((t.k, t.n))
    got = polarize(p, [Vec(x, L2) for x in xs]).entries
    for j in range(t.m):
        want = sign_polarization(lambda pt: p.eval_batch(np.array([pt]))[0, j], xs.tolist())
        assert got[j] == pytest.approx(want, rel=1e-9, abs=1e-9)


@given(tensors(), st.integers(0, 2 ** 32 - 1))
def test_polarization_round_trip(t, seed):
    p = HomPoly.from_tensor(t, L2, L2)
    xs = [Vec(x, L2) for x in np.random.default_rng(seed).standard_normal((t.k, t.n))]
    a, b = polarize(p, xs).entries, eval_multilinear(t, xs).entries
    scale = max(1.0, float(np.abs(b).max()))
    assert np.allclose(a, b, rtol=1e-9, atol=1e-9 * scale)


@given(tensors(), st.integers(0, 2 ** 32 - 1))
def test_multilinear_is_symmetric(t, seed):
    xs = [Vec(x, L2) for x in np.random.default_rng(seed).standard_normal((t.k, t.n))]
    base = eval_multilinear(t, xs).entries
    for perm in itertools.islice(itertools.permutations(xs), 6):
        assert np.allclose(eval_multilinear(t, list(perm)).entries, base, rtol=1e-9, atol=1e-9)


@given(tensors(), st.floats(-3, 3), st.integers(0, 2 ** 32 - 1))
def test_homogeneity(t, c, seed):
    p = HomPoly.from_tensor(t, L2, L2)
    x = Vec(np.random.default_rng(seed).standard_normal(t.n), L2)
    assert np.allclose(eval_poly(p, c * x).entries, c ** t.k * eval_poly(p, x).entries, rtol=1e-9, atol=1e-9)


@given(tensors(), st.integers(0, 2 ** 32 - 1))
def test_blackbox_round_trip(t, seed):
    p = HomPoly.from_tensor(t, L2, L2)
    bb = HomPoly.from_function(p.eval_batch, t.k, p.domain, p.codomain)
    rec = tensor_from_blackbox(bb)
    assert np.allclose(rec.coefficients, t.coefficients, rtol=1e-9, atol=1e-9)
    probes = np.random.default_rng(seed).standard_normal((10, t.n))
    assert np.allclose(rec.eval_batch(probes), p.eval_batch(probes), rtol=1e-9, atol=1e-9)


def test_closed_forms_match_their_tensors(rng):
    polys = [
        HomPoly.diagonal([1, -2, 0.5], 3, L2),
        HomPoly.diagonal([1, -2, 0.5], 2, L2, L1, coordinatewise=True),
        HomPoly.scaled_identity([0.3, -1, 2], 3, SUP),
        HomPoly.weighted_scale([1, 0.5, 1 / 3], L2),
    ]
    probes = rng.standard_normal((20, 3))
    for p in polys:
        q = to_tensor_backed(p)
        assert q.variant == "tensor"
        assert np.allclose(q.eval_batch(probes), p.eval_batch(probes), rtol=1e-9, atol=1e-9)


def test_body_validation():
    with pytest.raises(StructuralError):
        HomPoly(2, Space(2, L2), Space(3, L2), Field.REAL, HomPoly.diagonal([1, 1], 2, L2).body)
    with pytest.raises(StructuralError):
        HomPoly(3, Space(2, L2), Space(2, L2), Field.REAL, HomPoly.weighted_scale([1, 1], L2).body)
    with pytest.raises(DomainError):
        HomPoly.diagonal([1], 0, L2)


# complexification


def test_complexify_examples():
    q = complexify(HomPoly.diagonal([1.0], 2, L2))
    assert q.field is Field.COMPLEX
    assert eval_poly(q, Vec([1j], L2)).entries[0] == pytest.approx(-1)
    r = complexify(x1x2())
    assert eval_poly(r, Vec([1j, 1], L2)).entries[0] == pytest.approx(1j)
    assert polarize(r, [Vec([1j, 0], L2), Vec([0, 1], L2)]).entries[0] == pytest.approx(0.5j)


@given(tensors(max_k=3, max_n=3), st.integers(0, 2 ** 32 - 1))
def test_complexify_restricts_to_original(t, seed):
    p = HomPoly.from_tensor(t, L2, L2)
    q = complexify(p)
    x = np.random.default_rng(seed).standard_normal((5, t.n))
    assert np.allclose(q.eval_batch(x.astype(complex)), p.eval_batch(x), rtol=1e-12, atol=1e-12)


@given(tensors(max_k=2, max_n=3, max_m=1), st.integers(0, 2 ** 32 - 1))
def test_complexify_degree_two_identity(t, seed):
    # Q(x + iy) = P(x) - P(y) + 2i A(x, y)
    p = HomPoly.from_tensor(t, L2, L2)
    if t.k != 2:
        return
    q = complexify(p)
    x, y = np.random.default_rng(seed).standard_normal((2, t.n))
    want = eval_poly(p, Vec(x, L2)).entries - eval_poly(p, Vec(y, L2)).entries \
        + 2j * eval_multilinear(t, [Vec(x, L2), Vec(y, L2)]).entries
    assert np.allclose(eval_poly(q, Vec(x + 1j * y, L2)).entries, want, rtol=1e-9, atol=1e-9)


def test_complexify_errors():
    q = complexify(x1x2())
    with pytest.raises(DomainError):
        complexify(q)
    big = HomPoly.from_function(lambda x: x ** 2, 2, Space(3000, L2), Space(3000, L2))
    with pytest.raises(UnsupportedError):
        complexify(big)


# calculus


def test_binomial_expand_examples():
    sq = HomPoly.diagonal([1.0], 2, L2)
    terms = binomial_expand(sq, Vec([1], L2), Vec([1], L2))
    assert [t.entries[0] for t in terms] == pytest.approx([1, 2, 1])
    terms = binomial_expand(sq, Vec([3], L2), Vec([0], L2))
    assert [t.entries[0] for t in terms] == pytest.approx([9, 0, 0])
    d = HomPoly.diagonal([1, 1], 2, L2)
    terms = binomial_expand(d, e(0), e(1))
    assert [t.entries[0] for t in terms] == pytest.approx([1, 0, 1])
    with pytest.raises(StructuralError):
        binomial_expand(d, e(0), Vec([1, 0, 0], L2))


@given(tensors(), st.integers(0, 2 ** 32 - 1))
def test_binomial_expansion_sums_to_shifted_value(t, seed):
    p = HomPoly.from_tensor(t, L2, L2)
    x, h = (Vec(v, L2) for v in np.random.default_rng(seed).standard_normal((2, t.n)))
    total = sum(tm.entries for tm in binomial_expand(p, x, h))
    want = eval_poly(p, x + h).entries
    assert np.allclose(total, want, rtol=1e-9, atol=1e-9 * max(1, np.abs(want).max()))
    assert len(binomial_expand(p, x, h)) == t.k + 1


def test_compose_linear_examples(rng):
    d = HomPoly.diagonal([1, 1], 2, L2)
    probes = rng.standard_normal((10, 2))
    assert np.allclose(compose_linear(d, np.eye(2)).eval_batch(probes), d.eval_batch(probes))
    assert np.allclose(compose_linear(d, 2 * np.eye(2)).eval_batch(probes), 4 * d.eval_batch(probes))
    swap = np.array([[0, 1], [1, 0]])
    assert np.allclose(compose_linear(d, swap).eval_batch(probes), d.eval_batch(probes))
    with pytest.raises(StructuralError):
        compose_linear(d, np.eye(3))


@given(tensors(max_n=3), st.integers(1, 4), st.integers(0, 2 ** 32 - 1))
def test_compose_linear_is_composition(t, new_dim, seed):
    r = np.random.default_rng(seed)
    p = HomPoly.from_tensor(t, L2, L2)
    mat = r.standard_normal((t.n, new_dim))
    c = compose_linear(p, mat, L1)
    assert c.domain == Space(new_dim, L1) and c.k == t.k
    x = r.standard_normal((5, new_dim))
    assert np.allclose(c.eval_batch(x), p.eval_batch(x @ mat.T), rtol=1e-9, atol=1e-9)


def test_conjugate_apply_examples(rng):
    q = HomPoly.diagonal([1, 1, 1], 2, L2, L1, coordinatewise=True)
    fq = conjugate_apply(q, ScalarFunctional([1, 1, 1], L1))
    probes = rng.standard_normal((10, 3))
    assert np.allclose(fq.eval_batch(probes)[:, 0], (probes ** 2).sum(axis=1))
    zero = conjugate_apply(q, ScalarFunctional([0, 0, 0], L1))
    assert not np.any(zero.eval_batch(probes))
    ident = HomPoly.from_tensor(SymTensor(1, 3, 3, Field.REAL, np.eye(3)), L2, L2)
    f = ScalarFunctional([0.5, -1, 2], L2)
    assert np.allclose(conjugate_apply(ident, f).eval_batch(probes)[:, 0], probes @ f.coefficients)
    with pytest.raises(StructuralError):
        conjugate_apply(q, ScalarFunctional([1, 1], L1))


@given(tensors(max_n=3), st.floats(-3, 3), st.integers(0, 2 ** 32 - 1))
def test_conjugate_apply_linear_in_functional(t, alpha, seed):
    r = np.random.default_rng(seed)
    p = HomPoly.from_tensor(t, L2, L1)
    f = ScalarFunctional(r.standard_normal(t.m), L1)
    g = ScalarFunctional(r.standard_normal(t.m), L1)
    x = r.standard_normal((6, t.n))
    lhs = conjugate_apply(p, alpha * f + g).eval_batch(x)
    rhs = alpha * conjugate_apply(p, f).eval_batch(x) + conjugate_apply(p, g).eval_batch(x)
    assert np.allclose(lhs, rhs, rtol=1e-9, atol=1e-9)


def test_functional_norm_is_dual():
    f = ScalarFunctional([3, -4], L2)
    assert f.norm() == pytest.approx(5)
    assert ScalarFunctional([3, -4], L1).norm() == pytest.approx(4)
    assert ScalarFunctional([3, -4], SUP).norm() == pytest.approx(7)
    assert f(Vec([1, 1], L2)) == pytest.approx(-1)
    assert scalar_space().dim == 1
