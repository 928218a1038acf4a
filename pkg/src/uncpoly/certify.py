"""Certificates for the unconditional-norm inequality of homogeneous polynomials.

For a k-homogeneous ``P`` and vectors ``x_1..x_N``::

    sup_{|e_j|<=1} ||sum_j e_j P(x_j)||  <=  C_k sup_{|v_j|<=1} ||P(sum_j v_j x_j)||

with ``C_k = 1`` over the complex field and ``C_k = (2k)^k / k!`` over the
reals.  Over the reals the left side is computed exactly (sign vertices) and
the right side is lower-bounded, so a passing comparison is a proof for the
instance.  A failing comparison is never reported as a refutation.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .core import (
    DEFAULT_BUDGET,
    TOL_NUM,
    TOL_OPT,
    Field,
    NormTag,
    SearchBudget,
    SupResult,
    Vec,
    batch_norm,
    make_rng,
    stack,
    unconditional_sup,
)
from .errors import BudgetExceeded, DomainError
from .optimize import cube_sup
from .polys import HomPoly, SymTensor, complexify, multiset_count

# stream id for make_rng
_STREAM_SUITE = 7

DEFAULT_TAGS = (NormTag.lp(1), NormTag.lp(2), NormTag.sup())


def c_constant(k, field=Field.REAL):
    if int(k) != k or k < 1:
        raise DomainError(f"degree must be a positive integer, got {k!r}")
    if Field.parse(field) is Field.COMPLEX:
        return 1.0
    k = int(k)
    return float(Fraction((2 * k) ** k, math.factorial(k)))


class Verdict(str, enum.Enum):
    PROVED = "Proved"
    UNRESOLVED = "Unresolved"


@dataclass(frozen=True, eq=False)
class Lemma1Certificate:
    k: int
    field: Field
    c_k: float
    lhs: SupResult | None
    rhs: SupResult | None
    verdict: Verdict
    reason: str | None = None
    budget: SearchBudget = field(default=DEFAULT_BUDGET, repr=False)

    @property
    def margin(self):
        if self.lhs is None or self.rhs is None:
            return None
        return self.c_k * self.rhs.value - self.lhs.value

    @property
    def ratio(self):
        """``lhs / rhs`` (how much of ``C_k`` the instance uses)."""
        if self.lhs is None or self.rhs is None or self.rhs.value == 0:
            return None
        return self.lhs.value / self.rhs.value

    @property
    def violated(self):
        """lhs above ``C_k`` times the rhs lower bound; a bug signal, never a finding."""
        return self.lhs is not None and self.rhs is not None and self.lhs.value > self.c_k * self.rhs.value + TOL_NUM


def check_lemma1(p: HomPoly, vs: Sequence[Vec], budget: SearchBudget | None = None) -> Lemma1Certificate:
    budget = budget or DEFAULT_BUDGET
    vs = list(vs)
    images = [Vec(row, p.codomain.tag) for row in p.eval_batch(stack(vs))]
    c_k = c_constant(p.k, p.field)

    def unresolved(reason, lhs=None, rhs=None):
        return Lemma1Certificate(p.k, p.field, c_k, lhs, rhs, Verdict.UNRESOLVED, reason, budget)

    try:
        lhs = unconditional_sup(images, p.field, budget)
    except BudgetExceeded as exc:
        return unresolved(str(exc))
    rhs = cube_sup(p, vs, p.field, budget)

    if p.field is Field.REAL:
        if not lhs.exact:
            return unresolved("left side is not exact", lhs, rhs)
        if lhs.value <= c_k * rhs.value + TOL_NUM:
            return Lemma1Certificate(p.k, p.field, c_k, lhs, rhs, Verdict.PROVED, None, budget)
        return unresolved("right-side lower bound too small", lhs, rhs)

    finer = budget.replace(refinement_rounds=budget.refinement_rounds + 1)
    lhs2 = unconditional_sup(images, p.field, finer)
    rhs2 = cube_sup(p, vs, p.field, finer)

    def moved(a, b):
        return abs(b.value - a.value) > TOL_OPT * max(abs(a.value), abs(b.value), 1e-300)

    if moved(lhs, lhs2) or moved(rhs, rhs2):
        return unresolved("one more refinement round moved a side by more than 1e-6 relative", lhs2, rhs2)
    if lhs2.value <= c_k * rhs2.value + TOL_NUM:
        return Lemma1Certificate(p.k, p.field, c_k, lhs2, rhs2, Verdict.PROVED, None, budget)
    return unresolved("right-side lower bound too small", lhs2, rhs2)


def _quick_norm(p: HomPoly, rng):
    """Rough norm estimate from basis vectors and random unit vectors."""
    n = p.domain.dim
    pts = np.concatenate([np.eye(n), rng.standard_normal((64, n))])
    pts = pts / batch_norm(pts, p.domain.tag)[:, None]
    return float(p.image_norms(pts).max())


@dataclass(frozen=True)
class Instance:
    index: int
    k: int
    dim: int
    codim: int
    n_vectors: int
    domain_tag: NormTag
    codomain_tag: NormTag


def random_instance(index, seed, k_values, dim_range, codim_range, n_range, tags, field):
    """Random tensor polynomial and vector family for instance ``index``.

    Coefficients are uniform in [-1, 1] per multiset, scaled so a quick norm
    estimate is 1.  Complex instances complexify a real polynomial and draw
    vectors with uniform real and imaginary parts.
    """
    rng = make_rng(seed, _STREAM_SUITE, index)
    k = int(rng.choice(list(k_values)))
    n = int(rng.integers(dim_range[0], dim_range[1] + 1))
    m = int(rng.integers(codim_range[0], codim_range[1] + 1))
    count = int(rng.integers(n_range[0], n_range[1] + 1))
    dtag = tags[int(rng.integers(len(tags)))]
    ctag = tags[int(rng.integers(len(tags)))]
    coef = rng.uniform(-1, 1, (multiset_count(n, k), m))
    p = HomPoly.from_tensor(SymTensor(k, n, m, Field.REAL, coef), dtag, ctag)
    scale = _quick_norm(p, rng)
    if scale > 0:
        p = HomPoly.from_tensor(SymTensor(k, n, m, Field.REAL, coef / scale), dtag, ctag)
    vecs = rng.uniform(-1, 1, (count, n))
    if field is Field.COMPLEX:
        p = complexify(p)
        vecs = vecs + 1j * rng.uniform(-1, 1, (count, n))
    return Instance(index, k, n, m, count, dtag, ctag), p, [Vec(v, dtag) for v in vecs]


@dataclass
class SuiteSummary:
    field: Field
    seed: int
    count: int = 0
    proved: int = 0
    unresolved: int = 0
    violations: int = 0
    max_ratio: float | None = None
    tightest: Instance | None = None
    certificates: list = field(default_factory=list, repr=False)

    def add(self, inst: Instance, cert: Lemma1Certificate):
        self.count += 1
        if cert.verdict is Verdict.PROVED:
            self.proved += 1
        else:
            self.unresolved += 1
        if cert.violated:
            self.violations += 1
        r = cert.ratio
        if r is not None and (self.max_ratio is None or r > self.max_ratio):
            self.max_ratio, self.tightest = r, inst
        self.certificates.append((inst, cert))


def random_certification_suite(k_values=(2,), dim_range=(1, 4), count=100, seed=0,
                               budget: SearchBudget | None = None, field=Field.REAL,
                               n_range=(1, 4), codim_range=None, tags=DEFAULT_TAGS) -> SuiteSummary:
    """Run ``check_lemma1`` on ``count`` random instances; deterministic in ``seed``."""
    budget = budget or DEFAULT_BUDGET
    field = Field.parse(field)
    k_values = list(k_values)
    if not k_values or dim_range[0] > dim_range[1] or n_range[0] > n_range[1] or dim_range[0] < 1 or n_range[0] < 1:
        raise DomainError("suite ranges must be nonempty and positive")
    codim_range = codim_range or dim_range
    summary = SuiteSummary(field, seed)
    for i in range(count):
        inst, p, vs = random_instance(i, seed, k_values, dim_range, codim_range, n_range, list(tags), field)
        summary.add(inst, check_lemma1(p, vs, budget))
    return summary
