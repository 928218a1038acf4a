"""Homogeneous polynomials between finite-dimensional sequence spaces.

A k-homogeneous polynomial is stored either as a symmetric k-linear form
(``SymTensor``) or as one of a few closed forms that stay cheap in high
dimension.  All evaluation goes through ``HomPoly.eval_batch``, which maps an
``(B, n)`` array of points to an ``(B, m)`` array of values.

Symmetric tensors keep one coefficient per multiset of indices, so symmetry
holds by construction.  Multisets are 0-based sorted tuples.
"""
from __future__ import annotations

import functools
import itertools
import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .core import Field, NormTag, Space, Vec, batch_norm, stack
from .errors import BudgetExceeded, DomainError, StructuralError, UnsupportedError

MULTISET_CAP = 10 ** 6
POLARIZATION_MAX_K = 20
DENSE_CAP = 2 ** 22

SCALAR_TAG = NormTag.sup()


def scalar_space():
    """The one-dimensional codomain of scalar-valued polynomials."""
    return Space(1, SCALAR_TAG)


def multiset_count(n, k):
    return math.comb(n + k - 1, k)


@functools.lru_cache(maxsize=64)
def multisets(n, k):
    """All sorted index tuples of length ``k`` over ``range(n)``, as an ``(M, k)`` array."""
    if multiset_count(n, k) > MULTISET_CAP:
        raise BudgetExceeded(f"C({n}+{k}-1, {k}) multisets exceed the cap {MULTISET_CAP}")
    ms = np.array(list(itertools.combinations_with_replacement(range(n), k)), dtype=np.int64)
    ms = ms.reshape(-1, k)
    ms.setflags(write=False)
    return ms


@functools.lru_cache(maxsize=64)
def _multiset_rank(n, k):
    return {tuple(int(i) for i in row): r for r, row in enumerate(multisets(n, k))}


@functools.lru_cache(maxsize=64)
def multiplicities(n, k):
    """Number of distinct orderings ``k! / prod(m_i!)`` of each multiset."""
    ms = multisets(n, k)
    out = np.empty(len(ms))
    for r, row in enumerate(ms):
        _, counts = np.unique(row, return_counts=True)
        out[r] = math.factorial(k) / math.prod(math.factorial(int(c)) for c in counts)
    out.setflags(write=False)
    return out


def _dtype(field):
    return complex if field is Field.COMPLEX else float


@dataclass(frozen=True, eq=False)
class SymTensor:
    """Symmetric k-linear map from K^n to K^m, one coefficient vector per multiset."""

    k: int
    n: int
    m: int
    field: Field
    coefficients: np.ndarray

    def __post_init__(self):
        if self.k < 1 or self.n < 1 or self.m < 1:
            raise StructuralError("degree and dimensions must be positive")
        coef = np.array(self.coefficients, dtype=_dtype(self.field))
        expected = (multiset_count(self.n, self.k), self.m)
        if coef.shape != expected:
            raise StructuralError(f"coefficient array has shape {coef.shape}, expected {expected}")
        coef.setflags(write=False)
        object.__setattr__(self, "coefficients", coef)

    @classmethod
    def zeros(cls, k, n, m, field=Field.REAL):
        return cls(k, n, m, field, np.zeros((multiset_count(n, k), m)))

    @classmethod
    def from_dict(cls, k, n, m, mapping, field=Field.REAL):
        """Build from ``{multiset: codomain vector}``; missing multisets are zero."""
        coef = np.zeros((multiset_count(n, k), m), dtype=_dtype(field))
        rank = _multiset_rank(n, k)
        for key, value in mapping.items():
            idx = tuple(sorted(int(i) for i in key))
            if idx not in rank:
                raise StructuralError(f"multiset {key!r} is not a degree-{k} index set over {n} coordinates")
            coef[rank[idx]] = np.broadcast_to(np.asarray(value), (m,))
        return cls(k, n, m, field, coef)

    @property
    def multisets(self):
        return multisets(self.n, self.k)

    def coefficient(self, multiset):
        idx = tuple(sorted(int(i) for i in multiset))
        if len(idx) != self.k:
            raise StructuralError(f"need {self.k} indices, got {len(idx)}")
        return self.coefficients[_multiset_rank(self.n, self.k)[idx]]

    def items(self, include_zero=False):
        for row, coef in zip(self.multisets, self.coefficients):
            if include_zero or np.any(coef != 0):
                yield tuple(int(i) for i in row), coef

    def dense(self):
        """Full ``(n,)*k + (m,)`` array of the multilinear form."""
        if self.n ** self.k * self.m > DENSE_CAP:
            raise BudgetExceeded(f"dense form with {self.n}^{self.k} entries exceeds {DENSE_CAP}")
        full = np.indices((self.n,) * self.k).reshape(self.k, -1).T
        powers = self.n ** np.arange(self.k, dtype=np.int64)
        lookup = np.full(self.n ** self.k, -1, dtype=np.int64)
        lookup[self.multisets @ powers] = np.arange(len(self.multisets))
        ranks = lookup[np.sort(full, axis=1) @ powers]
        return self.coefficients[ranks].reshape((self.n,) * self.k + (self.m,))

    def eval_batch(self, x):
        """``A(x, ..., x)`` for each row of ``x``."""
        x = np.asarray(x)
        ms = self.multisets
        weights = multiplicities(self.n, self.k)
        out_dtype = np.result_type(x.dtype, self.coefficients.dtype)
        out = np.empty((len(x), self.m), dtype=out_dtype)
        step = max(1, (1 << 22) // max(1, len(ms) * self.k))
        for s in range(0, len(x), step):
            chunk = x[s:s + step]
            mono = np.prod(chunk[:, ms], axis=2) * weights
            out[s:s + step] = mono @ self.coefficients
        return out

    def with_field(self, field):
        return SymTensor(self.k, self.n, self.m, field, self.coefficients)


def eval_multilinear(a: SymTensor, xs: Sequence[Vec], tag=SCALAR_TAG) -> Vec:
    """The symmetric k-linear form at ``(x_1, ..., x_k)``; ``tag`` names the codomain norm."""
    return Vec(_multilinear_entries(a, xs), tag)


def _multilinear_entries(a: SymTensor, xs):
    xs = list(xs)
    if len(xs) != a.k:
        raise DomainError(f"a {a.k}-linear form takes {a.k} arguments, got {len(xs)}")
    args = [v.entries if isinstance(v, Vec) else np.asarray(v) for v in xs]
    for arg in args:
        if arg.shape != (a.n,):
            raise StructuralError(f"argument of shape {arg.shape} does not fit dimension {a.n}")
    if a.n ** a.k * a.m <= DENSE_CAP:
        acc = a.dense()
        for arg in args:
            acc = np.tensordot(arg, acc, axes=(0, 0))
        return acc
    total = np.zeros(a.m, dtype=np.result_type(a.coefficients.dtype, *[x.dtype for x in args]))
    for row, coef in a.items():
        perm_sum = sum(
            math.prod(args[j][i] for j, i in enumerate(perm)) for perm in set(itertools.permutations(row))
        )
        total = total + perm_sum * coef
    return total


@dataclass(frozen=True, eq=False)
class TensorBacked:
    tensor: SymTensor


@dataclass(frozen=True, eq=False)
class Diagonal:
    """``x -> sum_i a_i x_i^k`` (scalar codomain) or ``(a_i x_i^k)_i`` (same dimension)."""

    weights: np.ndarray


@dataclass(frozen=True, eq=False)
class ScaledIdentity:
    """``x -> f(x)^(k-1) x``."""

    functional: np.ndarray


@dataclass(frozen=True, eq=False)
class WeightedScale:
    """``x -> (sum_i w_i x_i) x``, degree 2."""

    weights: np.ndarray


@dataclass(frozen=True, eq=False)
class BlackBox:
    """Any batched evaluator ``(B, n) -> (B, m)`` trusted to be k-homogeneous."""

    evaluator: Callable
    label: str = "black box"


def _frozen(a, field):
    arr = np.array(a)
    arr = arr.astype(complex if field is Field.COMPLEX or np.iscomplexobj(arr) else float)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class HomPoly:
    k: int
    domain: Space
    codomain: Space
    field: Field
    body: object

    def __post_init__(self):
        if int(self.k) != self.k or self.k < 1:
            raise DomainError(f"degree must be a positive integer, got {self.k!r}")
        n, m = self.domain.dim, self.codomain.dim
        body = self.body
        if isinstance(body, TensorBacked):
            t = body.tensor
            if (t.k, t.n, t.m) != (self.k, n, m):
                raise StructuralError(f"tensor ({t.k}, {t.n}, {t.m}) does not match polynomial ({self.k}, {n}, {m})")
        elif isinstance(body, Diagonal):
            if len(body.weights) != n or m not in (1, n):
                raise StructuralError("diagonal weights must match the domain; codomain is scalar or same-dimensional")
        elif isinstance(body, ScaledIdentity):
            if len(body.functional) != n or m != n:
                raise StructuralError("scaled identity needs a functional on the domain and codomain = domain")
        elif isinstance(body, WeightedScale):
            if self.k != 2 or len(body.weights) != n or m != n:
                raise StructuralError("weighted scale is degree 2 with matching weights and codomain")
        elif not isinstance(body, BlackBox):
            raise StructuralError(f"unknown polynomial body {type(body).__name__}")

    # constructors

    @classmethod
    def from_tensor(cls, tensor: SymTensor, domain_tag, codomain_tag):
        return cls(tensor.k, Space(tensor.n, domain_tag), Space(tensor.m, codomain_tag), tensor.field,
                   TensorBacked(tensor))

    @classmethod
    def diagonal(cls, weights, k, domain_tag, codomain_tag=SCALAR_TAG, coordinatewise=False, field=Field.REAL):
        w = _frozen(weights, field)
        m = len(w) if coordinatewise else 1
        return cls(k, Space(len(w), domain_tag), Space(m, codomain_tag), field, Diagonal(w))

    @classmethod
    def scaled_identity(cls, functional, k, tag, field=Field.REAL):
        f = _frozen(functional, field)
        return cls(k, Space(len(f), tag), Space(len(f), tag), field, ScaledIdentity(f))

    @classmethod
    def weighted_scale(cls, weights, tag, field=Field.REAL):
        w = _frozen(weights, field)
        return cls(2, Space(len(w), tag), Space(len(w), tag), field, WeightedScale(w))

    @classmethod
    def from_function(cls, fn, k, domain: Space, codomain: Space, field=Field.REAL, vectorized=True, label="black box"):
        """Wrap ``fn``; when not ``vectorized`` it is called once per point."""
        if vectorized:
            evaluator = fn
        else:
            def evaluator(x):
                return np.array([np.atleast_1d(fn(row)) for row in x])
        return cls(k, domain, codomain, field, BlackBox(evaluator, label))

    @classmethod
    def zero(cls, k, domain: Space, codomain: Space, field=Field.REAL):
        if codomain.dim in (1, domain.dim):
            return cls(k, domain, codomain, field, Diagonal(_frozen(np.zeros(domain.dim), field)))
        return cls(k, domain, codomain, field, TensorBacked(SymTensor.zeros(k, domain.dim, codomain.dim, field)))

    # evaluation

    @property
    def variant(self):
        return {
            TensorBacked: "tensor",
            Diagonal: "diagonal",
            ScaledIdentity: "scaled_identity",
            WeightedScale: "weighted_scale",
            BlackBox: "black_box",
        }[type(self.body)]

    def eval_batch(self, x):
        x = np.asarray(x)
        if x.ndim != 2 or x.shape[1] != self.domain.dim:
            raise StructuralError(f"points of shape {x.shape} do not fit domain dimension {self.domain.dim}")
        body, k = self.body, self.k
        if isinstance(body, TensorBacked):
            return body.tensor.eval_batch(x)
        if isinstance(body, Diagonal):
            y = body.weights * x ** k
            return y.sum(axis=1, keepdims=True) if self.codomain.dim == 1 else y
        if isinstance(body, ScaledIdentity):
            return ((x @ body.functional) ** (k - 1))[:, None] * x
        if isinstance(body, WeightedScale):
            return (x @ body.weights)[:, None] * x
        out = np.asarray(body.evaluator(x))
        return out.reshape(len(x), self.codomain.dim)

    def image_norms(self, x):
        return batch_norm(self.eval_batch(x), self.codomain.tag)

    def __call__(self, x: Vec) -> Vec:
        return eval_poly(self, x)


def _check_domain(p: HomPoly, v: Vec):
    if not isinstance(v, Vec):
        raise StructuralError("expected a Vec")
    if v.space != p.domain:
        raise StructuralError(f"vector in {v.space} does not match the domain {p.domain}")


def eval_poly(p: HomPoly, x: Vec) -> Vec:
    _check_domain(p, x)
    return Vec(p.eval_batch(x.entries[None])[0], p.codomain.tag)


def polarize(p: HomPoly, xs: Sequence[Vec]) -> Vec:
    """Symmetric k-linear form of ``p`` at ``xs`` via the 2^k-term sign sum."""
    xs = list(xs)
    if len(xs) != p.k:
        raise DomainError(f"degree-{p.k} polarization takes {p.k} arguments, got {len(xs)}")
    if p.k > POLARIZATION_MAX_K:
        raise BudgetExceeded(f"2^{p.k} polarization terms exceed the cap 2^{POLARIZATION_MAX_K}")
    for v in xs:
        _check_domain(p, v)
    signs = np.array(list(itertools.product((1.0, -1.0), repeat=p.k)))
    vals = p.eval_batch(signs @ stack(xs))
    total = np.prod(signs, axis=1) @ vals
    return Vec(total / (math.factorial(p.k) * 2 ** p.k), p.codomain.tag)


def tensor_from_blackbox(p: HomPoly) -> SymTensor:
    """Symmetric tensor of ``p`` by polarizing at every multiset of basis vectors."""
    if isinstance(p.body, TensorBacked):
        return p.body.tensor
    n, k = p.domain.dim, p.k
    if k > POLARIZATION_MAX_K:
        raise BudgetExceeded(f"2^{k} polarization terms exceed the cap 2^{POLARIZATION_MAX_K}")
    ms = multisets(n, k)
    signs = np.array(list(itertools.product((1.0, -1.0), repeat=k)))
    sign_weight = np.prod(signs, axis=1)
    coef = np.empty((len(ms), p.codomain.dim), dtype=_dtype(p.field))
    step = max(1, (1 << 20) // (len(signs) * n))
    for s in range(0, len(ms), step):
        block = ms[s:s + step]
        pts = np.zeros((len(block), len(signs), n))
        rows = np.arange(len(block))
        for j in range(k):
            pts[rows, :, block[:, j]] += signs[:, j]
        vals = p.eval_batch(pts.reshape(-1, n)).reshape(len(block), len(signs), -1)
        coef[s:s + step] = np.einsum("s,bsm->bm", sign_weight, vals)
    coef /= math.factorial(k) * 2 ** k
    return SymTensor(k, n, p.codomain.dim, p.field, coef)


def to_tensor_backed(p: HomPoly) -> HomPoly:
    if isinstance(p.body, TensorBacked):
        return p
    return HomPoly(p.k, p.domain, p.codomain, p.field, TensorBacked(tensor_from_blackbox(p)))


def complexify(p: HomPoly) -> HomPoly:
    """Complex-multilinear extension of a real polynomial.

    The symmetric form keeps its real coefficients and is read as a complex
    multilinear map; closed forms already compute that extension on complex
    input.  Black boxes are first converted to tensors.
    """
    if p.field is not Field.REAL:
        raise DomainError("complexify expects a real polynomial")
    body = p.body
    if isinstance(body, BlackBox):
        try:
            body = TensorBacked(tensor_from_blackbox(p))
        except BudgetExceeded as exc:
            raise UnsupportedError(f"cannot convert black box to a tensor: {exc}") from exc
    if isinstance(body, TensorBacked):
        body = TensorBacked(body.tensor.with_field(Field.COMPLEX))
    return HomPoly(p.k, p.domain, p.codomain, Field.COMPLEX, body)


def binomial_expand(p: HomPoly, x: Vec, h: Vec):
    """Terms ``C(k, l) A(h^l, x^(k-l))`` for ``l = 0..k``; they sum to ``p(x + h)``."""
    _check_domain(p, x)
    _check_domain(p, h)
    tensor = tensor_from_blackbox(p)
    terms = []
    for l in range(p.k + 1):
        val = math.comb(p.k, l) * _multilinear_entries(tensor, [h] * l + [x] * (p.k - l))
        terms.append(Vec(val, p.codomain.tag))
    return terms


def compose_linear(p: HomPoly, t, domain_tag=None) -> HomPoly:
    """``p o T`` where ``T`` is an ``(n, n')`` matrix from a new domain into ``p``'s."""
    t = np.asarray(t)
    if t.ndim != 2 or t.shape[0] != p.domain.dim:
        raise StructuralError(f"matrix of shape {t.shape} cannot map into dimension {p.domain.dim}")
    new_domain = Space(t.shape[1], domain_tag or p.domain.tag)
    field = Field.COMPLEX if np.iscomplexobj(t) else p.field
    if isinstance(p.body, TensorBacked):
        tensor = p.body.tensor
        size = t.shape[1] ** p.k * tensor.m
        if tensor.n ** p.k * tensor.m <= DENSE_CAP and size <= DENSE_CAP:
            acc = tensor.dense()
            for _ in range(p.k):
                acc = np.tensordot(acc, t, axes=([0], [0]))
            acc = np.moveaxis(acc, 0, -1)
            ms = multisets(t.shape[1], p.k)
            coef = acc[tuple(ms.T)]
            new = SymTensor(p.k, t.shape[1], tensor.m, field, coef)
            return HomPoly(p.k, new_domain, p.codomain, field, TensorBacked(new))
    inner = p

    def evaluator(x):
        return inner.eval_batch(x @ t.T)

    return HomPoly(p.k, new_domain, p.codomain, field, BlackBox(evaluator, f"composed {p.variant}"))


@dataclass(frozen=True, eq=False)
class ScalarFunctional:
    """Linear functional ``x -> sum_i f_i x_i`` on a space tagged ``tag``."""

    coefficients: np.ndarray
    tag: NormTag

    def __post_init__(self):
        c = np.array(self.coefficients)
        c = c.astype(complex if np.iscomplexobj(c) else float)
        if c.ndim != 1 or c.size == 0:
            raise StructuralError("functional needs a nonempty coefficient list")
        c.setflags(write=False)
        object.__setattr__(self, "coefficients", c)

    @property
    def dim(self):
        return len(self.coefficients)

    @property
    def space(self):
        return Space(self.dim, self.tag)

    def __call__(self, x: Vec):
        if x.space != self.space:
            raise StructuralError(f"functional on {self.space} applied to a vector in {x.space}")
        val = self.coefficients @ x.entries
        return complex(val) if np.iscomplexobj(val) else float(val)

    def norm(self):
        """Dual norm of the coefficient vector."""
        return float(batch_norm(self.coefficients[None], self.tag.dual())[0])

    def __add__(self, other):
        if other.space != self.space:
            raise StructuralError("functionals on different spaces")
        return ScalarFunctional(self.coefficients + other.coefficients, self.tag)

    def __mul__(self, c):
        return ScalarFunctional(c * self.coefficients, self.tag)

    __rmul__ = __mul__


def conjugate_apply(p: HomPoly, f: ScalarFunctional) -> HomPoly:
    """The scalar polynomial ``f o p``."""
    if f.space != p.codomain:
        raise StructuralError(f"functional on {f.space} does not act on the codomain {p.codomain}")
    fc = f.coefficients
    field = Field.COMPLEX if np.iscomplexobj(fc) else p.field
    body = p.body
    if isinstance(body, TensorBacked):
        new = SymTensor(p.k, p.domain.dim, 1, field, body.tensor.coefficients @ fc[:, None])
        return HomPoly(p.k, p.domain, scalar_space(), field, TensorBacked(new))
    if isinstance(body, Diagonal):
        weights = body.weights * (fc if p.codomain.dim > 1 else fc[0])
        return HomPoly(p.k, p.domain, scalar_space(), field, Diagonal(weights))
    inner = p

    def evaluator(x):
        return inner.eval_batch(x) @ fc[:, None]

    return HomPoly(p.k, p.domain, scalar_space(), field, BlackBox(evaluator, f"functional of {p.variant}"))
