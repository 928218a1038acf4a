"""Finite-prefix diagnostics for weakly unconditionally Cauchy and
unconditionally converging series, and their images under polynomials.

Nothing here decides convergence of an infinite series.  A prefix gives its
unconditional supremum (the w.u.C. constant of the prefix) and the profile of
tail suprema; decay of that profile is reported against a declared ratio.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .certify import c_constant
from .core import (
    DEFAULT_BUDGET,
    TOL_STRUCT,
    CoeffBox,
    Field,
    SearchBudget,
    SupResult,
    Vec,
    common_space,
    norm,
    unconditional_sup,
)
from .errors import DomainError, StructuralError
from .optimize import cube_sup, poly_norm
from .polys import HomPoly, ScalarFunctional, ScaledIdentity, eval_poly


@dataclass(frozen=True, eq=False)
class SeriesPrefix:
    terms: tuple
    label: str = ""

    def __post_init__(self):
        terms = tuple(self.terms)
        if not terms:
            raise StructuralError("a series prefix needs at least one term")
        common_space(terms)
        object.__setattr__(self, "terms", terms)

    @property
    def space(self):
        return self.terms[0].space

    def __len__(self):
        return len(self.terms)

    def __iter__(self):
        return iter(self.terms)

    def tail(self, start):
        """Terms from the 1-based index ``start`` on."""
        if not 1 <= start <= len(self):
            raise DomainError(f"tail start {start} outside 1..{len(self)}")
        return SeriesPrefix(self.terms[start - 1:], f"{self.label}[{start}:]")


@dataclass(frozen=True)
class TailProfile:
    values: tuple
    exact: tuple
    decay_ratio: float

    @property
    def wuc_constant(self):
        return self.values[0]

    @property
    def decaying(self):
        return self.values[-1] <= self.decay_ratio * self.values[0]

    def rows(self):
        return [(n, v, e) for n, (v, e) in enumerate(zip(self.values, self.exact), start=1)]


def wuc_constant(s: SeriesPrefix, field=Field.REAL, budget: SearchBudget | None = None) -> SupResult:
    return unconditional_sup(s.terms, field, budget)


def uc_tail_profile(s: SeriesPrefix, field=Field.REAL, budget: SearchBudget | None = None,
                    decay_ratio=0.1) -> TailProfile:
    results = [unconditional_sup(s.terms[i:], field, budget) for i in range(len(s))]
    return TailProfile(tuple(r.value for r in results), tuple(r.exact for r in results), decay_ratio)


def image_series(p: HomPoly, s: SeriesPrefix) -> SeriesPrefix:
    if s.space != p.domain:
        raise StructuralError(f"series in {s.space} does not match the domain {p.domain}")
    images = p.eval_batch(np.stack([t.entries for t in s]))
    return SeriesPrefix(tuple(Vec(row, p.codomain.tag) for row in images), f"P({s.label})")


@dataclass(frozen=True)
class TailBoundCheck:
    """Both sides of the tail estimate at one start index.

    ``bound`` is ``C_k * norm_estimate * tail_sup**k``; ``rhs`` multiplies it
    by ``slack`` to absorb the norm estimate being only a lower bound.
    """

    start: int
    lhs: float
    rhs: float
    holds: bool
    c_k: float
    norm_estimate: float
    tail_sup: float
    slack: float
    lhs_exact: bool

    @property
    def bound(self):
        return self.rhs / self.slack


def check_theorem2_tail(p: HomPoly, s: SeriesPrefix, start: int, budget: SearchBudget | None = None,
                        field=Field.REAL, slack=1.05, norm_result: SupResult | None = None) -> TailBoundCheck:
    """Tail unconditional sup of the image series against ``C_k ||P|| t_start^k``."""
    budget = budget or DEFAULT_BUDGET
    field = Field.parse(field)
    if slack < 1:
        raise DomainError("slack must be at least 1")
    if norm_result is None:
        norm_result = poly_norm(p, budget)
    tail = s.tail(start)
    lhs = unconditional_sup(image_series(p, tail).terms, field, budget)
    t = unconditional_sup(tail.terms, field, budget).value
    c_k = c_constant(p.k, field)
    rhs = c_k * norm_result.value * slack * t ** p.k
    return TailBoundCheck(start, lhs.value, rhs, lhs.value <= rhs + TOL_STRUCT, c_k, norm_result.value, t, slack,
                         lhs.exact)


def tail_bound_profile(p: HomPoly, s: SeriesPrefix, budget: SearchBudget | None = None, field=Field.REAL, slack=1.05):
    """``check_theorem2_tail`` at every start index, sharing one norm estimate."""
    budget = budget or DEFAULT_BUDGET
    est = poly_norm(p, budget)
    return [check_theorem2_tail(p, s, n, budget, field, slack, est) for n in range(1, len(s) + 1)]


def vstar_pairing(a: Sequence[Vec], fs: Sequence[ScalarFunctional]):
    """``max_{x in A} |f_n(x)|`` for each functional in order."""
    a = list(a)
    space = common_space(a)
    for f in fs:
        if f.space != space:
            raise StructuralError(f"functional on {f.space} does not act on {space}")
    if not fs:
        return np.zeros(0)
    mat = np.stack([x.entries for x in a])
    fmat = np.stack([f.coefficients for f in fs])
    return np.abs(fmat @ mat.T).max(axis=1)


@dataclass(frozen=True)
class PolVBound:
    lhs: float
    rhs: float
    holds: bool


def lemma_polv_bound(p: HomPoly, s: SeriesPrefix) -> PolVBound:
    """``sum ||P x_i|| <= sup_j ||x_j|| (sum |f(x_i)|)^(k-1)`` for ``P x = f(x)^(k-1) x``."""
    if not isinstance(p.body, ScaledIdentity):
        raise StructuralError(f"expected a scaled-identity polynomial, got {p.variant}")
    if s.space != p.domain:
        raise StructuralError(f"series in {s.space} does not match the domain {p.domain}")
    f = p.body.functional
    lhs = float(sum(norm(eval_poly(p, x)) for x in s))
    pairing = float(sum(abs(f @ x.entries) for x in s))
    rhs = max(norm(x) for x in s) * pairing ** (p.k - 1)
    return PolVBound(lhs, rhs, lhs <= rhs * (1 + TOL_STRUCT) + TOL_STRUCT)


@dataclass(frozen=True, eq=False)
class LiftedBlock:
    start: int
    stop: int
    coefficients: CoeffBox
    y: Vec
    image_norm: float
    result: SupResult = field(repr=False)


def lift_blocks(p: HomPoly, s: SeriesPrefix, boundaries: Sequence[int], budget: SearchBudget | None = None,
                field=Field.REAL):
    """Per block, coefficients ``|c_i| <= 1`` making ``||P(sum c_i x_i)||`` large.

    ``boundaries`` are cut points ``0 = b_0 < b_1 < ... < b_m = len(s)``;
    block ``j`` holds terms ``b_j .. b_{j+1} - 1`` (0-based).
    """
    b = [int(v) for v in boundaries]
    if len(b) < 2 or b[0] != 0 or b[-1] != len(s) or any(x >= y for x, y in zip(b, b[1:])):
        raise DomainError(f"boundaries {list(boundaries)!r} do not partition {len(s)} terms into consecutive blocks")
    out = []
    for lo, hi in zip(b, b[1:]):
        block = s.terms[lo:hi]
        res = cube_sup(p, block, field, budget)
        coeffs = res.witness
        y = Vec(coeffs.coefficients @ np.stack([t.entries for t in block]), p.domain.tag)
        out.append(LiftedBlock(lo, hi, coeffs, y, norm(eval_poly(p, y)), res))
    return out
