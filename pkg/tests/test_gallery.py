import numpy as np
import pytest

from uncpoly import DomainError, NormTag, StructuralError, Vec, basis_vector, eval_poly, poly_norm, unit_basis
from uncpoly import gallery
from uncpoly.gallery import (
    make_c0_square,
    make_geometric_diag,
    make_intro_Q,
    make_l1_witness,
    make_pa,
    make_scalar_P,
    make_scaled_identity,
    make_weighted_Q,
)

L1, L2, SUP = NormTag.lp(1), NormTag.lp(2), NormTag.sup()


def test_intro_q_values():
    q = make_intro_Q(3)
    assert q.domain.tag == L2 and q.codomain.tag == L1
    y = eval_poly(q, Vec([1 / np.sqrt(2), 1 / np.sqrt(2), 0], L2))
    assert np.allclose(y.entries, [0.5, 0.5, 0]) and y.norm() == pytest.approx(1)
    assert poly_norm(q).value == pytest.approx(1)


def test_scalar_p_on_basis():
    p = make_scalar_P(4)
    assert all(eval_poly(p, e).entries[0] == 1 for e in unit_basis(4, L2))


def test_weighted_q_values():
    q = make_weighted_Q(12)
    assert np.allclose(eval_poly(q, basis_vector(12, 1, L2)).entries, 0.5 * basis_vector(12, 1, L2).entries)
    e1 = basis_vector(12, 0, L2)
    for n in range(1, 13):
        x = e1 + basis_vector(12, n - 1, L2)
        assert np.allclose(eval_poly(q, x).entries, (1 + 1 / n) * x.entries, rtol=0, atol=1e-15)


def test_pa_norms():
    assert poly_norm(make_pa([1, 1], 2)).value == pytest.approx(1)
    assert poly_norm(make_pa([1, 0.5, 0.25], 3)).value == pytest.approx(1)
    with pytest.raises(DomainError):
        make_pa([1, 2], 1)


def test_scaled_identity_values():
    p = make_scaled_identity([1, 0, 0, 0, 0], 2)
    partial = np.zeros(5)
    for n in range(5):
        partial[n] = 1
        assert np.array_equal(eval_poly(p, Vec(partial, SUP)).entries, partial)
    assert np.allclose(eval_poly(make_scaled_identity([1, 0], 3), Vec([2, 1], SUP)).entries, [8, 4])
    with pytest.raises(StructuralError):
        make_scaled_identity([1, 0], 2, dim=3)


def test_l1_witness():
    targets = [Vec(v, L2) for v in np.random.default_rng(0).standard_normal((4, 3))]
    p = make_l1_witness(targets, 3)
    for i, x in enumerate(targets):
        assert np.allclose(eval_poly(p, basis_vector(4, i, L1)).entries, x.entries)
    e1 = basis_vector(1, 0, SUP)
    q = make_l1_witness([e1, e1], 2)
    assert np.allclose(eval_poly(q, Vec([0.5, 0.5], L1)).entries, [0.5])
    with pytest.raises(StructuralError):
        make_l1_witness([Vec([1], L2), Vec([1, 2], L2)], 2)
    with pytest.raises(StructuralError):
        make_l1_witness([], 2)


def test_geometric_diag():
    p = make_geometric_diag(0.5, 2, 12)
    assert np.allclose(p.body.weights, 0.5 ** np.arange(1, 13))
    for r in (0, 1, 1.5, -0.5):
        with pytest.raises(DomainError):
            make_geometric_diag(r, 2, 12)


def test_c0_square_fixes_basis():
    p = make_c0_square(5)
    assert all(eval_poly(p, e) == e for e in unit_basis(5, SUP))


def test_registry():
    assert {"intro_Q", "scalar_P", "weighted_Q", "pa", "scaled_identity", "l1_witness", "geometric_diag",
            "c0_square", "square"} <= set(gallery.ENTRIES)
    assert gallery.get("pa").params["k"] == 3
    with pytest.raises(DomainError):
        gallery.get("nope")


@pytest.mark.parametrize("name", sorted(gallery.ENTRIES))
def test_entry_checks_pass(name):
    results = gallery.get(name).run_checks()
    assert results and all(r.passed for r in results), [r for r in results if not r.passed]
    assert {"inequality_unit_basis", "tail_bound"} <= {r.check for r in results}
