"""Named polynomials from the theory of unconditionally converging maps.

Each constructor returns a closed-form ``HomPoly``; ``ENTRIES`` holds
default parameterizations (dimension 12) together with the finitely
checkable identities and inequalities every entry must satisfy.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .certify import Verdict, check_lemma1
from .core import DEFAULT_BUDGET, TOL_NUM, TOL_OPT, Field, NormTag, SearchBudget, Space, Vec, basis_vector, unit_basis
from .errors import DomainError, StructuralError
from .optimize import poly_norm, restricted_tail_norm
from .polys import (
    MULTISET_CAP,
    BlackBox,
    HomPoly,
    ScalarFunctional,
    SymTensor,
    TensorBacked,
    conjugate_apply,
    eval_poly,
    multiset_count,
    multisets,
    polarize,
)
from .series import SeriesPrefix, image_series, lemma_polv_bound, tail_bound_profile

L1, L2, SUP = NormTag.lp(1), NormTag.lp(2), NormTag.sup()
DEFAULT_DIM = 12


def _check_dim(dim):
    if int(dim) != dim or dim < 1:
        raise DomainError(f"dimension must be a positive integer, got {dim!r}")
    return int(dim)


def make_intro_Q(dim):
    """``(x_n) in l_2 -> (x_n^2) in l_1``."""
    dim = _check_dim(dim)
    return HomPoly.diagonal(np.ones(dim), 2, L2, L1, coordinatewise=True)


def make_scalar_P(dim):
    """``(x_n) in l_2 -> sum x_n^2``."""
    return HomPoly.diagonal(np.ones(_check_dim(dim)), 2, L2)


def make_weighted_Q(dim):
    """``x in l_2 -> (sum_k x_k / k) x in l_2``."""
    dim = _check_dim(dim)
    return HomPoly.weighted_scale(1.0 / np.arange(1, dim + 1), L2)


def make_pa(a, k):
    """``x in l_2 -> sum_i a_i x_i^k``; its norm is ``max |a_i|``."""
    if int(k) != k or k < 2:
        raise DomainError(f"degree must be at least 2, got {k!r}")
    return HomPoly.diagonal(np.asarray(a, dtype=float), int(k), L2)


def make_scaled_identity(f, k, dim=None, tag=SUP):
    """``x -> f(x)^(k-1) x`` for a functional ``f`` (array or ``ScalarFunctional``)."""
    if int(k) != k or k < 2:
        raise DomainError(f"degree must be at least 2, got {k!r}")
    if isinstance(f, ScalarFunctional):
        tag, coeffs = f.tag, f.coefficients
    else:
        coeffs = np.asarray(f, dtype=float)
    if dim is not None and _check_dim(dim) != len(coeffs):
        raise StructuralError(f"functional has {len(coeffs)} coefficients but dim is {dim}")
    return HomPoly.scaled_identity(coeffs, int(k), tag)


def make_l1_witness(xs, k):
    """``(t_i) in l_1 -> sum_i t_i^k x_i``, so that ``P(e_i) = x_i``."""
    xs = list(xs)
    if not xs:
        raise StructuralError("need at least one target vector")
    spaces = {x.space for x in xs}
    if len(spaces) != 1:
        raise StructuralError("targets must share one space")
    target = spaces.pop()
    n, k = len(xs), int(k)
    mat = np.stack([x.entries for x in xs])
    domain = Space(n, L1)
    field = Field.COMPLEX if np.iscomplexobj(mat) else Field.REAL
    if multiset_count(n, k) <= MULTISET_CAP // 10:
        ms = multisets(n, k)
        coef = np.zeros((len(ms), target.dim), dtype=mat.dtype)
        diag = np.all(ms == ms[:, :1], axis=1)
        coef[diag] = mat[ms[diag, 0]]
        return HomPoly(k, domain, target, field, TensorBacked(SymTensor(k, n, target.dim, field, coef)))

    def evaluator(t):
        return (t ** k) @ mat

    return HomPoly(k, domain, target, field, BlackBox(evaluator, "l1 witness"))


def make_geometric_diag(r, k, dim):
    """``x in c_0 -> sum_i r^i x_i^k`` (``i`` from 1); tail norms are ``sum_{i>=n} r^i``."""
    if not 0 < r < 1:
        raise DomainError(f"ratio must lie in (0, 1), got {r!r}")
    dim = _check_dim(dim)
    return HomPoly.diagonal(float(r) ** np.arange(1, dim + 1), int(k), SUP)


def make_square():
    """``x -> x^2`` on the real line."""
    return HomPoly.diagonal([1.0], 2, L2)


def make_c0_square(dim):
    """``(x_n) in c_0 -> (x_n^2) in c_0``: maps the unit basis onto itself."""
    return HomPoly.diagonal(np.ones(_check_dim(dim)), 2, SUP, SUP, coordinatewise=True)


# property checks


@dataclass(frozen=True)
class CheckResult:
    entry: str
    check: str
    passed: bool
    detail: str = ""


def unit_basis_prefix(space: Space, count=None):
    return SeriesPrefix(tuple(unit_basis(space.dim, space.tag, count)), "unit basis")


def geometric_prefix(space: Space, ratio=0.5, count=None):
    count = space.dim if count is None else count
    terms = tuple(ratio ** (i + 1) * basis_vector(space.dim, i, space.tag) for i in range(count))
    return SeriesPrefix(terms, f"geometric {ratio}")


def _inequality_check(entry, budget):
    n = min(6, entry.poly.domain.dim)
    cert = check_lemma1(entry.poly, unit_basis(entry.poly.domain.dim, entry.poly.domain.tag, n), budget)
    return cert.verdict is Verdict.PROVED, f"lhs={cert.lhs.value:.6g} C_k*rhs={cert.c_k * cert.rhs.value:.6g}"


def _tail_bound_check(entry, budget):
    p = entry.poly
    worst = None
    for prefix in (unit_basis_prefix(p.domain), geometric_prefix(p.domain)):
        for row in tail_bound_profile(p, prefix, budget):
            if not row.holds:
                return False, f"{prefix.label} n={row.start}: lhs={row.lhs!r} > rhs={row.rhs!r}"
            if row.rhs > 0:
                ratio = row.lhs / row.rhs
                worst = ratio if worst is None else max(worst, ratio)
    return True, f"max lhs/rhs = {worst if worst is not None else 0.0:.6g}"


def _close(a, b, tol=TOL_NUM):
    return np.allclose(np.asarray(a), np.asarray(b), rtol=tol, atol=tol)


def _intro_q_values(entry, budget):
    q, d = entry.poly, entry.poly.domain.dim
    ok = _close(eval_poly(q, basis_vector(d, 0, L2)).entries, basis_vector(d, 0, L1).entries)
    if d >= 2:
        x = np.zeros(d)
        x[:2] = 1 / np.sqrt(2)
        y = eval_poly(q, Vec(x, L2))
        ok &= _close(y.entries[:2], [0.5, 0.5]) and abs(y.norm() - 1) < TOL_NUM
    return ok, "Q(e_1)=e_1, Q((e_1+e_2)/sqrt2)=(1/2,1/2)"


def _norm_is(expected):
    def check(entry, budget):
        est = poly_norm(entry.poly, budget).value
        return abs(est - expected(entry)) <= TOL_OPT * max(1.0, expected(entry)), f"norm estimate {est:.10g}"

    return check


def _intro_q_image(entry, budget):
    q = entry.poly
    img = image_series(q, unit_basis_prefix(q.domain))
    target = unit_basis(q.codomain.dim, q.codomain.tag)
    return all(a == b for a, b in zip(img, target)), "unit basis of l_2 -> unit basis of l_1"


def _scalar_p_is_conjugate(entry, budget):
    p = entry.poly
    d = p.domain.dim
    q = make_intro_Q(d)
    fp = conjugate_apply(q, ScalarFunctional(np.ones(d), L1))
    probes = np.random.default_rng(0).standard_normal((20, d))
    ok = _close(fp.eval_batch(probes), p.eval_batch(probes))
    ok &= all(abs(eval_poly(p, e).entries[0] - 1) < TOL_NUM for e in unit_basis(d, L2))
    return ok, "P = (1,...,1) o Q on probes; P(e_n) = 1"


def _weighted_q_identity(entry, budget):
    q = entry.poly
    d = q.domain.dim
    e1 = basis_vector(d, 0, L2)
    for n in range(1, d + 1):
        x = e1 + basis_vector(d, n - 1, L2)
        if not _close(eval_poly(q, x).entries, (1 + 1 / n) * x.entries, 1e-12):
            return False, f"fails at n={n}"
    return True, f"Q(e_1+e_n) = (1+1/n)(e_1+e_n) for n <= {d}"


def _scaled_identity_sums(entry, budget):
    p = entry.poly
    d = p.domain.dim
    tag = p.domain.tag
    f = p.body.functional
    basis = unit_basis(d, tag)
    if not (f[0] == 1 and np.all(f[1:] == 0)):
        return True, "skipped: functional is not e_1*"
    partial = np.zeros(d)
    for n in range(d):
        partial[n] = 1.0
        x = Vec(partial.copy(), tag)
        if not _close(eval_poly(p, x).entries, x.entries, 1e-12):
            return False, f"fails at n={n + 1}"
    bound = lemma_polv_bound(p, SeriesPrefix(tuple(basis)))
    return bound.holds, f"P(x_1+...+x_n) = x_1+...+x_n; series bound {bound.lhs:g} <= {bound.rhs:g}"


def _l1_witness_hits_targets(entry, budget):
    p = entry.poly
    targets = entry.params["targets"]
    for i, x in enumerate(targets):
        if not _close(eval_poly(p, basis_vector(p.domain.dim, i, L1)).entries, x.entries):
            return False, f"P(e_{i + 1}) != x_{i + 1}"
    return True, "P(e_i) = x_i"


def _geometric_tails(entry, budget):
    p = entry.poly
    r, d = entry.params["r"], p.domain.dim
    worst = 0.0
    for n in range(1, d + 1):
        got = restricted_tail_norm(p, n, budget).value
        want = sum(r ** i for i in range(n, d + 1))
        worst = max(worst, abs(got - want))
    return worst <= TOL_OPT, f"max |tail norm - sum r^i| = {worst:.3g}"


def _c0_square_profile(entry, budget):
    p = entry.poly
    vals = [restricted_tail_norm(p, n, budget).value for n in range(1, p.domain.dim + 1)]
    img = image_series(p, unit_basis_prefix(p.domain))
    same = all(a == b for a, b in zip(img, unit_basis(p.domain.dim, SUP)))
    return same and _close(vals, np.ones(len(vals))), "tail norms all 1; unit basis fixed"


def _square_polarization(entry, budget):
    p = entry.poly
    axis = np.linspace(-2.0, 2.0, 9)
    for x, y in itertools.product(axis, axis):
        val = polarize(p, [Vec([x], L2), Vec([y], L2)]).entries[0]
        if abs(val - x * y) > TOL_NUM:
            return False, f"polarization at ({x}, {y}) is {val}"
    return True, "polarization is xy on a 9x9 grid"


@dataclass(frozen=True, eq=False)
class GalleryEntry:
    name: str
    params: dict
    poly: HomPoly
    origin: str
    checks: tuple = field(default=())

    def run_checks(self, budget: SearchBudget | None = None):
        budget = budget or DEFAULT_BUDGET
        common = (("inequality_unit_basis", _inequality_check), ("tail_bound", _tail_bound_check))
        out = []
        for name, fn in common + tuple(self.checks):
            passed, detail = fn(self, budget)
            out.append(CheckResult(self.name, name, bool(passed), detail))
        return out


def _entries(dim=DEFAULT_DIM):
    a = 1.0 / np.arange(1, dim + 1)
    targets = unit_basis(dim, SUP)
    f = np.zeros(dim)
    f[0] = 1.0
    return [
        GalleryEntry("square", {}, make_square(), "x -> x^2 on the real line",
                     (("polarization", _square_polarization),)),
        GalleryEntry("intro_Q", {"dim": dim}, make_intro_Q(dim),
                     "square map l_2 -> l_1 sending a weakly null sequence to one without weakly Cauchy subsequences",
                     (("values", _intro_q_values), ("norm_one", _norm_is(lambda e: 1.0)),
                      ("unit_basis_image", _intro_q_image))),
        GalleryEntry("scalar_P", {"dim": dim}, make_scalar_P(dim),
                     "scalar sum of squares on l_2: compact on Rosenthal sets, not null on weakly null sequences",
                     (("conjugate_of_Q", _scalar_p_is_conjugate),)),
        GalleryEntry("weighted_Q", {"dim": dim}, make_weighted_Q(dim),
                     "(sum x_k/k) x on l_2: weakly null to norm null, yet Q(e_1+e_n) has no convergent subsequence",
                     (("identity", _weighted_q_identity),)),
        GalleryEntry("pa", {"a": a.tolist(), "k": 3}, make_pa(a, 3),
                     "l_inf isometrically inside scalar polynomials on l_2 via a -> sum a_i x_i^k",
                     (("isometry", _norm_is(lambda e: float(np.max(np.abs(e.params["a"]))))),)),
        GalleryEntry("scaled_identity", {"f": f.tolist(), "k": 2, "dim": dim}, make_scaled_identity(f, 2, dim),
                     "f(x)^(k-1) x on c_0: unconditionally converging but not weakly compact",
                     (("partial_sums", _scaled_identity_sums),)),
        GalleryEntry("l1_witness", {"targets": targets, "k": 2}, make_l1_witness(targets, 2),
                     "sum t_i^k x_i from l_1 hitting prescribed vectors",
                     (("hits_targets", _l1_witness_hits_targets),)),
        GalleryEntry("geometric_diag", {"r": 0.5, "k": 2, "dim": dim}, make_geometric_diag(0.5, 2, dim),
                     "sum r^i x_i^k on c_0: restriction norms to coordinate tails go to zero",
                     (("tail_norms", _geometric_tails),)),
        GalleryEntry("c0_square", {"dim": dim}, make_c0_square(dim),
                     "coordinate square c_0 -> c_0: fixes the unit basis, tail norms stay 1",
                     (("tail_profile", _c0_square_profile),)),
    ]


ENTRIES: dict[str, GalleryEntry] = {}


def _register():
    for e in _entries():
        ENTRIES[e.name] = e


_register()


def get(name) -> GalleryEntry:
    try:
        return ENTRIES[name]
    except KeyError:
        raise DomainError(f"unknown gallery entry {name!r}; have {sorted(ENTRIES)}") from None


def check_all(names=None, budget: SearchBudget | None = None):
    names = list(names) if names else list(ENTRIES)
    results = []
    for name in names:
        results.extend(get(name).run_checks(budget))
    return results
