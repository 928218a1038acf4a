"""Suprema of polynomial norms over unit balls and coefficient boxes.

All results are lower bounds carried with a witness that reproduces the
value.  Candidate sets are nested in the budget (fixed candidates, then
per-start random streams), so raising ``multistarts`` or ``iterations``
never lowers a reported value.
"""
from __future__ import annotations

from typing import Sequence

import numpy as np

from ._search import evaluate_chunked, multistart_ascent, pick_first_max, torus_search
from .core import (
    DEFAULT_BUDGET,
    TOL_STRUCT,
    CoeffBox,
    Exactness,
    Field,
    SearchBudget,
    Space,
    SupResult,
    Vec,
    batch_norm,
    common_space,
    make_rng,
    stack,
)
from .errors import DomainError, StructuralError
from .kernels import gray_signs
from .polys import Diagonal, HomPoly, ScaledIdentity, WeightedScale, compose_linear

__all__ = [
    "SearchBudget",
    "SupResult",
    "cube_sup",
    "diagonal_closed_form_norm",
    "poly_norm",
    "restrict_to_tail",
    "restricted_tail_norm",
]

# stream ids for make_rng
_STREAM_CUBE = 2
_STREAM_BALL = 3
_STREAM_TORUS = 4


def _best(cands, vals):
    i = pick_first_max(vals)
    return cands[i], float(vals[i])


def diagonal_closed_form_norm(p: HomPoly):
    """``max |a_i|`` when it is provably the norm of a diagonal polynomial, else None.

    Holds on an l_2 domain with k >= 2 for the scalar form (since
    ``sum |x_i|^k <= ||x||_2^k``) and for the coordinate form into sup or
    into l_q with ``k q >= 2``.
    """
    if not isinstance(p.body, Diagonal) or p.k < 2:
        return None
    if p.domain.tag.kind != "lp" or p.domain.tag.p != 2:
        return None
    if p.codomain.dim > 1 or p.domain.dim == 1:
        tag = p.codomain.tag
        if tag.kind == "lp" and p.k * tag.p < 2:
            return None
    return float(np.max(np.abs(p.body.weights)))


def poly_norm(p: HomPoly, budget: SearchBudget | None = None) -> SupResult:
    """Lower bound on ``sup ||p(x)||`` over the unit ball of the domain."""
    budget = budget or DEFAULT_BUDGET
    n, tag = p.domain.dim, p.domain.tag
    complex_field = p.field is Field.COMPLEX

    cands = [np.eye(n)]
    if tag.kind == "sup" and 2 ** (n - 1) <= budget.ball_vertex_cap:
        cands.append(gray_signs(np.arange(2 ** (n - 1)), n))
    cands = np.concatenate(cands)
    vals = evaluate_chunked(p.image_norms, cands)
    best_x, best_val = _best(cands, vals)
    notes = []

    def to_points(params):
        return params[:, :n] + 1j * params[:, n:] if complex_field else params

    def normalize(params):
        pts = to_points(params)
        r = batch_norm(pts, tag)
        r = np.where(r > 0, r, 1.0)
        return params / r[:, None]

    def objective(params):
        pts = to_points(params)
        r = batch_norm(pts, tag)
        safe = np.where(r > 0, r, 1.0)
        return np.where(r > 0, p.image_norms(pts) / safe ** p.k, 0.0)

    q = 2 * n if complex_field else n
    if q <= budget.fd_dim_cap:
        first = np.concatenate([best_x.real, np.zeros(n)]) if complex_field else best_x.astype(float)
        starts = [first] + [make_rng(budget.seed, _STREAM_BALL, j).standard_normal(q) for j in range(budget.multistarts)]
        xs, fx = multistart_ascent(objective, np.array(starts), normalize, budget.iterations, budget.fd_step)
        i = pick_first_max(fx)
        if fx[i] > best_val:
            best_x = to_points(xs[i:i + 1])[0]
            best_val = float(fx[i])
    else:
        notes.append(f"ascent skipped: {q} parameters exceed fd_dim_cap")

    r = float(batch_norm(best_x[None], tag)[0])
    if r > 1:
        best_x = best_x / r
    witness = Vec(best_x, tag)
    value = float(p.image_norms(witness.entries[None])[0])

    closed = diagonal_closed_form_norm(p)
    exact = False
    if closed is not None:
        if abs(value - closed) <= TOL_STRUCT * max(1.0, closed):
            exact = True
            notes.append("matches closed form max|a_i|")
        else:
            notes.append(f"closed form max|a_i| = {closed!r} not reached")
    exactness = Exactness(exact, None, "; ".join(notes) or None)
    return SupResult(value, witness, exactness, budget)


def cube_sup(p: HomPoly, vs: Sequence[Vec], field: Field = Field.REAL, budget: SearchBudget | None = None) -> SupResult:
    """Lower bound on ``sup ||p(sum_j c_j v_j)||`` over ``|c_j| <= 1``.

    Real coefficients: sign vertices (plus a dense grid when there are few
    vectors) seed a multistart projected ascent.  Complex coefficients: torus grid plus
    refinement (the norm of a holomorphic image peaks on the torus, and the
    first angle can be pinned by homogeneity).
    """
    budget = budget or DEFAULT_BUDGET
    field = Field.parse(field)
    vs = list(vs)
    space = common_space(vs)
    if space != p.domain:
        raise StructuralError(f"vectors in {space} do not match the domain {p.domain}")
    mat = stack(vs)
    n_vec = len(vs)
    notes = []

    if field is Field.COMPLEX:
        def objective_t(theta):
            return p.image_norms(np.exp(1j * theta) @ mat)

        m = budget.torus_points
        starts = [make_rng(budget.seed, _STREAM_TORUS, j).uniform(0, 2 * np.pi, n_vec) for j in range(budget.multistarts)]
        theta, _, resolution = torus_search(objective_t, n_vec, m, budget.refinement_rounds, budget.grid_cap,
                                            starts=starts, polish_iterations=budget.iterations,
                                            fd_step=budget.fd_step)
        coeffs = np.exp(1j * theta)
        coeffs[0] = 1.0
        value = float(p.image_norms((coeffs @ mat)[None])[0])
        return SupResult(value, CoeffBox(Field.COMPLEX, coeffs), Exactness.lower_bound(resolution), budget)

    def objective(nu):
        return p.image_norms(nu @ mat)

    cand_sets = []
    if 2 ** n_vec <= budget.vertex_cap:
        # homogeneity: flipping every sign keeps the norm
        cand_sets.append(gray_signs(np.arange(2 ** (n_vec - 1)), n_vec))
    else:
        notes.append("vertex enumeration skipped")
    if n_vec <= budget.dense_grid_max_n:
        axis = np.linspace(-1.0, 1.0, budget.grid_points)
        cand_sets.append(np.stack(np.meshgrid(*[axis] * n_vec, indexing="ij"), -1).reshape(-1, n_vec))
    if cand_sets:
        cands = np.concatenate(cand_sets)
        best_nu, best_val = _best(cands, evaluate_chunked(objective, cands))
    else:
        best_nu = np.ones(n_vec)
        best_val = float(objective(best_nu[None])[0])

    if n_vec <= budget.fd_dim_cap:
        starts = [best_nu] + [make_rng(budget.seed, _STREAM_CUBE, j).uniform(-1, 1, n_vec) for j in range(budget.multistarts)]
        xs, fx = multistart_ascent(objective, np.array(starts), lambda z: np.clip(z, -1.0, 1.0),
                                   budget.iterations, budget.fd_step)
        i = pick_first_max(fx)
        if fx[i] > best_val:
            best_nu, best_val = xs[i], float(fx[i])
    else:
        notes.append("ascent skipped")

    value = float(objective(best_nu[None])[0])
    return SupResult(value, CoeffBox(Field.REAL, best_nu), Exactness.lower_bound(None, "; ".join(notes) or None), budget)


def restrict_to_tail(p: HomPoly, start: int) -> HomPoly:
    """``p`` restricted to vectors supported on coordinates ``start..dim`` (1-based).

    Closed forms keep their body; the codomain of coordinate maps is cut to
    the same coordinates, which leaves every image norm unchanged.
    """
    dim = p.domain.dim
    if int(start) != start or not 1 <= start <= dim:
        raise DomainError(f"start index {start} outside 1..{dim}")
    cut = start - 1
    sub = Space(dim - cut, p.domain.tag)
    body = p.body
    if isinstance(body, Diagonal):
        m = 1 if p.codomain.dim == 1 and dim > 1 else sub.dim
        return HomPoly(p.k, sub, Space(m, p.codomain.tag), p.field, Diagonal(body.weights[cut:]))
    if isinstance(body, ScaledIdentity):
        return HomPoly(p.k, sub, Space(sub.dim, p.codomain.tag), p.field, ScaledIdentity(body.functional[cut:]))
    if isinstance(body, WeightedScale):
        return HomPoly(p.k, sub, Space(sub.dim, p.codomain.tag), p.field, WeightedScale(body.weights[cut:]))
    embed = np.eye(dim)[:, cut:]
    return compose_linear(p, embed, p.domain.tag)


def restricted_tail_norm(p: HomPoly, start: int, budget: SearchBudget | None = None) -> SupResult:
    """Lower bound on the norm of ``p`` on the span of ``e_start, e_start+1, ...``."""
    sub = poly_norm(restrict_to_tail(p, start), budget)
    full = np.zeros(p.domain.dim, dtype=sub.witness.entries.dtype)
    full[start - 1:] = sub.witness.entries
    return SupResult(sub.value, Vec(full, p.domain.tag), sub.exactness, sub.budget)
