"""Scalars, normed finite sequence vectors and the unconditional supremum.

Vectors model truncations of l_p (1 <= p < inf) and of c_0 / l_inf.  Every
vector carries its norm tag, and every supremum routine reports whether its
value is exact or only a lower bound.
"""
from __future__ import annotations

import dataclasses
import enum
from dataclasses import dataclass, field
from typing import Any, Sequence

import numpy as np

from . import kernels
from ._search import pick_first_max, torus_search
from .errors import BudgetExceeded, DomainError, StructuralError

TOL_STRUCT = 1e-12
TOL_NUM = 1e-9
TOL_OPT = 1e-6


class Field(str, enum.Enum):
    REAL = "real"
    COMPLEX = "complex"

    @classmethod
    def parse(cls, value):
        if isinstance(value, Field):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            raise DomainError(f"unknown field {value!r}; expected 'real' or 'complex'") from None


@dataclass(frozen=True)
class NormTag:
    """Norm of the ambient sequence space: ``lp`` with exponent ``p`` or ``sup``."""

    kind: str
    p: float | None = None

    def __post_init__(self):
        if self.kind == "lp":
            if self.p is None or not self.p >= 1 or not np.isfinite(self.p):
                raise DomainError(f"l_p tag needs finite p >= 1, got {self.p!r}")
            object.__setattr__(self, "p", float(self.p))
        elif self.kind == "sup":
            object.__setattr__(self, "p", None)
        else:
            raise DomainError(f"unknown norm kind {self.kind!r}")

    @classmethod
    def lp(cls, p):
        return cls("lp", p)

    @classmethod
    def sup(cls):
        return cls("sup")

    @property
    def code(self):
        """``(kind, p)`` pair understood by the kernels."""
        return (1, 0.0) if self.kind == "sup" else (0, self.p)

    def dual(self):
        """Tag of the dual norm (l_1 <-> sup, l_p <-> l_q)."""
        if self.kind == "sup":
            return NormTag.lp(1)
        if self.p == 1:
            return NormTag.sup()
        return NormTag.lp(self.p / (self.p - 1))

    def __str__(self):
        if self.kind == "sup":
            return "sup"
        p = self.p
        return f"l{int(p)}" if p == int(p) else f"l{p}"

    def to_json(self):
        return {"kind": "sup"} if self.kind == "sup" else {"kind": "lp", "p": self.p}

    @classmethod
    def from_json(cls, data):
        if isinstance(data, str):
            return cls.parse(data)
        if "kind" not in data:
            raise StructuralError("norm tag is missing field 'kind'")
        if data["kind"] == "lp" and "p" not in data:
            raise StructuralError("l_p norm tag is missing field 'p'")
        return cls(data["kind"], data.get("p"))

    @classmethod
    def parse(cls, text):
        """Accepts ``sup``, ``c0``, ``linf``, ``l2``, ``lp:1.5``."""
        t = text.strip().lower()
        if t in ("sup", "c0", "linf"):
            return cls.sup()
        if t.startswith("lp:"):
            return cls.lp(float(t[3:]))
        if t.startswith("l"):
            return cls.lp(float(t[1:]))
        raise DomainError(f"cannot parse norm tag {text!r}")


def batch_norm(z, tag: NormTag):
    """Norm of each row of ``z`` (last axis)."""
    kind, p = tag.code
    return kernels.norm_rows(np.asarray(z), kind, p)


@dataclass(frozen=True)
class Space:
    dim: int
    tag: NormTag

    def __post_init__(self):
        if int(self.dim) != self.dim or self.dim < 1:
            raise StructuralError(f"dimension must be a positive integer, got {self.dim!r}")

    def to_json(self):
        return {"dim": self.dim, "tag": self.tag.to_json()}

    @classmethod
    def from_json(cls, data):
        for key in ("dim", "tag"):
            if key not in data:
                raise StructuralError(f"space is missing field {key!r}")
        return cls(int(data["dim"]), NormTag.from_json(data["tag"]))


def _as_entries(entries):
    arr = np.array(entries)
    if arr.dtype.kind not in "biufc":
        raise StructuralError("vector entries must be numbers")
    arr = arr.astype(complex if np.iscomplexobj(arr) else float)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class Vec:
    """Finite vector tagged with the norm of its ambient truncated space."""

    entries: np.ndarray
    tag: NormTag
    dim: int | None = None

    def __post_init__(self):
        arr = _as_entries(self.entries)
        if arr.ndim != 1 or arr.size == 0:
            raise StructuralError("a vector needs a nonempty 1-d entry list")
        if self.dim is not None and self.dim != arr.size:
            raise StructuralError(f"declared dim {self.dim} but {arr.size} entries given")
        object.__setattr__(self, "entries", arr)
        object.__setattr__(self, "dim", arr.size)

    @property
    def space(self):
        return Space(self.dim, self.tag)

    @property
    def field(self):
        return Field.COMPLEX if np.iscomplexobj(self.entries) else Field.REAL

    def norm(self):
        return norm(self)

    def _check(self, other):
        if not isinstance(other, Vec) or other.space != self.space:
            raise StructuralError("vectors live in different spaces")

    def __add__(self, other):
        self._check(other)
        return Vec(self.entries + other.entries, self.tag)

    def __sub__(self, other):
        self._check(other)
        return Vec(self.entries - other.entries, self.tag)

    def __neg__(self):
        return Vec(-self.entries, self.tag)

    def __mul__(self, c):
        return Vec(c * self.entries, self.tag)

    __rmul__ = __mul__

    def __eq__(self, other):
        return isinstance(other, Vec) and self.space == other.space and np.array_equal(self.entries, other.entries)

    __hash__ = None

    def allclose(self, other, rtol=TOL_NUM, atol=TOL_NUM):
        return self.space == other.space and np.allclose(self.entries, other.entries, rtol=rtol, atol=atol)

    def __repr__(self):
        return f"Vec({self.entries.tolist()!r}, {self.tag})"


def basis_vector(dim, i, tag):
    """The unit vector e_i (0-based ``i``)."""
    if not 0 <= i < dim:
        raise StructuralError(f"basis index {i} out of range for dim {dim}")
    e = np.zeros(dim)
    e[i] = 1.0
    return Vec(e, tag)


def unit_basis(dim, tag, count=None):
    return [basis_vector(dim, i, tag) for i in range(dim if count is None else count)]


def norm(v: Vec) -> float:
    if v.entries.shape != (v.dim,):
        raise StructuralError("entry count does not match dimension")
    return float(batch_norm(v.entries[None], v.tag)[0])


@dataclass(frozen=True, eq=False)
class CoeffBox:
    """Coefficients with modulus at most one."""

    field: Field
    coefficients: np.ndarray

    def __post_init__(self):
        c = np.array(self.coefficients, dtype=complex if self.field is Field.COMPLEX else float)
        if c.ndim != 1:
            raise StructuralError("coefficients must be a flat list")
        if np.any(np.abs(c) > 1 + TOL_STRUCT):
            raise DomainError("coefficient with modulus above 1")
        c.setflags(write=False)
        object.__setattr__(self, "coefficients", c)

    def __len__(self):
        return len(self.coefficients)


@dataclass(frozen=True)
class Exactness:
    exact: bool
    resolution: float | None = None
    note: str | None = None

    @classmethod
    def exact_value(cls):
        return cls(True)

    @classmethod
    def lower_bound(cls, resolution=None, note=None):
        return cls(False, resolution, note)

    def to_json(self):
        out: dict[str, Any] = {"exact": self.exact}
        if self.resolution is not None:
            out["resolution"] = self.resolution
        if self.note:
            out["note"] = self.note
        return out


@dataclass(frozen=True)
class SearchBudget:
    """Effort limits for every supremum search.

    ``grid_points`` is the per-axis count of the dense real grid (used for
    at most ``dense_grid_max_n`` coefficients), ``torus_points`` the number
    of angles per axis on the complex torus.
    """

    grid_points: int = 41
    multistarts: int = 16
    iterations: int = 200
    refinement_rounds: int = 2
    seed: int = 0
    torus_points: int = 24
    vertex_cap: int = 2 ** 20
    grid_cap: int = 2 ** 20
    ball_vertex_cap: int = 2 ** 14
    dense_grid_max_n: int = 3
    fd_dim_cap: int = 64
    fd_step: float = 1e-5

    def __post_init__(self):
        for f in dataclasses.fields(self):
            val = getattr(self, f.name)
            if f.name == "seed":
                if int(val) != val or val < 0:
                    raise DomainError("seed must be a non-negative integer")
            elif not val > 0:
                raise DomainError(f"budget field {f.name} must be positive, got {val!r}")

    def replace(self, **changes):
        return dataclasses.replace(self, **changes)

    def to_json(self):
        return dataclasses.asdict(self)

    @classmethod
    def from_json(cls, data):
        known = {f.name for f in dataclasses.fields(cls)}
        return cls(**{k: v for k, v in data.items() if k in known})


DEFAULT_BUDGET = SearchBudget()


@dataclass(frozen=True, eq=False)
class SupResult:
    """A certified lower bound (or exact value) together with its witness."""

    value: float
    witness: Any
    exactness: Exactness
    budget: SearchBudget = field(default=DEFAULT_BUDGET, repr=False)

    @property
    def exact(self):
        return self.exactness.exact

    def witness_array(self):
        w = self.witness
        if isinstance(w, CoeffBox):
            return np.asarray(w.coefficients)
        if isinstance(w, Vec):
            return np.asarray(w.entries)
        return np.asarray(w)


def make_rng(seed, *stream):
    """Counter-based (Philox) generator for the substream ``stream`` of ``seed``."""
    ss = np.random.SeedSequence(int(seed), spawn_key=tuple(int(s) for s in stream))
    return np.random.Generator(np.random.Philox(ss))


def kth_roots_of_unity(k):
    """``(1, w, ..., w^(k-1))`` with ``w = exp(2 pi i / k)``."""
    if int(k) != k or k < 2:
        raise DomainError(f"roots of unity need an integer k >= 2, got {k!r}")
    exact = {0: 1 + 0j, 1: 1j, 2: -1 + 0j, 3: -1j}
    # quarter turns are stored exactly so that e.g. s_1 = -1 on (1/2, 1) for k = 2
    return [exact[4 * j // k] if (4 * j) % k == 0 else complex(np.exp(2j * np.pi * j / k)) for j in range(k)]


def common_space(vs: Sequence[Vec]) -> Space:
    if len(vs) == 0:
        raise StructuralError("need at least one vector")
    space = vs[0].space
    for v in vs[1:]:
        if v.space != space:
            raise StructuralError(f"mixed spaces: {space} vs {v.space}")
    return space


def stack(vs: Sequence[Vec]):
    common_space(vs)
    return np.stack([v.entries for v in vs])


def unconditional_sup(vs: Sequence[Vec], field: Field = Field.REAL, budget: SearchBudget | None = None) -> SupResult:
    """sup of ||sum_j e_j v_j|| over coefficients |e_j| <= 1.

    Real coefficients: the objective is convex, so the supremum sits on a
    sign vertex and full enumeration gives the exact value.  Complex
    coefficients: a torus grid with local refinement, reported as a lower
    bound with its final angular resolution.
    """
    budget = budget or DEFAULT_BUDGET
    field = Field.parse(field)
    vs = list(vs)
    space = common_space(vs)
    mat = stack(vs)
    n = len(vs)
    kind, p = space.tag.code
    if field is Field.REAL:
        if 2 ** n > budget.vertex_cap:
            raise BudgetExceeded(f"2^{n} sign vertices exceed the enumeration cap {budget.vertex_cap}")
        values = kernels.vertex_norms(mat, kind, p)
        signs = kernels.gray_signs([pick_first_max(values)], n)[0]
        value = float(batch_norm((signs @ mat)[None], space.tag)[0])
        return SupResult(value, CoeffBox(Field.REAL, signs), Exactness.exact_value(), budget)

    def objective(theta):
        return batch_norm(np.exp(1j * theta) @ mat, space.tag)

    m = budget.torus_points
    grid_values = kernels.torus_norms(mat, kind, p, m) if m ** (n - 1) <= budget.grid_cap else None
    rng = make_rng(budget.seed, 1)
    starts = rng.uniform(0, 2 * np.pi, size=(budget.multistarts, n))
    theta, _, resolution = torus_search(
        objective, n, m, budget.refinement_rounds, budget.grid_cap, starts=starts, grid_values=grid_values,
        polish_iterations=budget.iterations, fd_step=budget.fd_step,
    )
    eps = np.exp(1j * theta)
    eps[0] = 1.0
    value = float(objective(theta[None])[0])
    if n == 1:
        # rotation invariance makes the single-term case exact
        return SupResult(value, CoeffBox(Field.COMPLEX, eps), Exactness.exact_value(), budget)
    return SupResult(value, CoeffBox(Field.COMPLEX, eps), Exactness.lower_bound(resolution), budget)
