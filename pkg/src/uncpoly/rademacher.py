"""Generalized Rademacher step functions of order k.

``s_n`` is constant on the ``k**n`` intervals ``(j/k**n, (j+1)/k**n)`` and
takes the value ``w**(j mod k)`` there, ``w = exp(2 pi i / k)``: each interval
of ``s_{n-1}`` is cut into k equal pieces that cycle through the k-th roots
of unity.  Values are stored as integer exponents and interval widths as
exact rationals, so integrals of products reduce to counting exponents.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .core import kth_roots_of_unity
from .errors import BoundaryError, BudgetExceeded, DomainError

INTERVAL_CAP = 10 ** 7


def _check_order(k):
    if int(k) != k or k < 2:
        raise DomainError(f"order k must be an integer >= 2, got {k!r}")


def _check_cap(k, n, cap):
    if k ** n > cap:
        raise BudgetExceeded(f"{k}^{n} intervals exceed the cap {cap}")


@dataclass(frozen=True)
class StepFunction:
    k: int
    n: int

    @property
    def intervals(self):
        return self.k ** self.n

    @property
    def breakpoints(self):
        return [Fraction(j, self.intervals) for j in range(self.intervals + 1)]

    @property
    def exponents(self):
        return np.arange(self.intervals) % self.k

    @property
    def values(self):
        return np.asarray(kth_roots_of_unity(self.k))[self.exponents]

    def exponent_at(self, t):
        t = Fraction(t)
        if not 0 < t < 1:
            raise DomainError(f"t must lie strictly inside (0, 1), got {t}")
        scaled = t * self.intervals
        if scaled.denominator == 1:
            raise BoundaryError(f"t = {t} is a breakpoint of s_{self.n}; the value there is undefined")
        return (scaled.numerator // scaled.denominator) % self.k

    def integral(self):
        """Exact integral over [0, 1]."""
        return product_integral_general(self.k, [self.n])

    def table(self):
        """Rows ``(left, right, exponent)`` with rational endpoints as strings."""
        bp = self.breakpoints
        return [(str(bp[j]), str(bp[j + 1]), int(e)) for j, e in enumerate(self.exponents)]


def rademacher(k, n, cap=INTERVAL_CAP):
    _check_order(k)
    if int(n) != n or n < 1:
        raise DomainError(f"level n must be a positive integer, got {n!r}")
    _check_cap(k, n, cap)
    return StepFunction(int(k), int(n))


def eval_step(s: StepFunction, t):
    return kth_roots_of_unity(s.k)[s.exponent_at(t)]


def exponent_weights(k, indices, cap=INTERVAL_CAP):
    """Exact measure of the set where ``prod s_i`` equals ``w**r``, per ``r``.

    Works on the common refinement at the deepest level: on fine interval
    ``j`` the function ``s_i`` has exponent ``(j // k**(L - i)) mod k``.
    """
    _check_order(k)
    if not indices:
        raise DomainError("need at least one index")
    if any(int(i) != i or i < 1 for i in indices):
        raise DomainError(f"indices must be positive integers, got {indices!r}")
    depth = max(indices)
    _check_cap(k, depth, cap)
    j = np.arange(k ** depth, dtype=np.int64)
    total = np.zeros_like(j)
    for i in indices:
        total += (j // k ** (depth - i)) % k
    counts = np.bincount(total % k, minlength=k)
    return [Fraction(int(c), k ** depth) for c in counts]


def _poly_divmod(num, den):
    """Long division of Fraction coefficient lists (lowest degree first)."""
    num = list(num)
    quot = [Fraction(0)] * max(len(num) - len(den) + 1, 1)
    while len(num) >= len(den) and any(num):
        shift = len(num) - len(den)
        factor = num[-1] / den[-1]
        quot[shift] = factor
        for i, d in enumerate(den):
            num[shift + i] -= factor * d
        num.pop()
    return quot, num


def cyclotomic(k):
    """Coefficients of the k-th cyclotomic polynomial, lowest degree first."""
    poly = [Fraction(-1)] + [Fraction(0)] * (k - 1) + [Fraction(1)]
    for d in range(1, k):
        if k % d == 0:
            poly, rem = _poly_divmod(poly, cyclotomic(d))
            assert not any(rem)
    return poly


def reduce_cyclotomic(k, weights):
    """Canonical coordinates of ``sum_r weights[r] w**r`` in the basis 1, w, ..., w**(phi(k)-1).

    The combination is zero exactly when every coordinate is zero.
    """
    _, rem = _poly_divmod([Fraction(c) for c in weights], cyclotomic(k))
    size = len(cyclotomic(k)) - 1
    return (rem + [Fraction(0)] * size)[:size]


def product_integral_general(k, indices, cap=INTERVAL_CAP):
    coords = reduce_cyclotomic(k, exponent_weights(k, indices, cap))
    if not any(coords):
        return 0j
    roots = kth_roots_of_unity(k)
    return complex(sum(float(c) * roots[r] for r, c in enumerate(coords)))


def product_integral(k, indices, cap=INTERVAL_CAP):
    """Integral over [0, 1] of ``s_{i_1} ... s_{i_k}`` for exactly k factors."""
    _check_order(k)
    indices = list(indices)
    if len(indices) != k:
        raise DomainError(f"order {k} products take exactly {k} factors, got {len(indices)}")
    return product_integral_general(k, indices, cap)


def kronecker_expected(indices):
    return 1.0 if len(set(indices)) == 1 else 0.0
