"""Symmetric functions evaluated at points.

Two scalar modes are supported and never mixed: exact (ints/Fractions, results
are Fractions) and complex floating point. Schur functions have three routes:

* :func:`schur_tableau` - sum of monomials over semistandard tableaux, the
  exact reference (no divisions, capped at weight 12);
* :func:`schur_jacobi_trudi` - determinant of e's or h's, the fast path;
* :func:`schur_vandermonde` - bialternant ratio, a cross-check only; it raises
  :class:`DegeneratePoints` when two points coincide.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Iterator, Union

import numpy as np

from ._linalg import det_exact, det_float
from .partitions import Partition, enumerate_partitions, hooks_of

Scalar = Union[Fraction, complex]

TABLEAU_MAX_WEIGHT = 12


class DegeneratePoints(ValueError):
    """The Vandermonde determinant vanishes because two points coincide."""


@dataclass(frozen=True)
class PointSet:
    values: tuple
    exact: bool

    @classmethod
    def of(cls, values: Iterable) -> "PointSet":
        if isinstance(values, PointSet):
            return values
        vals = tuple(values)
        if not vals:
            raise ValueError("a point set needs at least one point")
        rational = [isinstance(v, Rational) and not isinstance(v, bool) for v in vals]
        if all(rational):
            return cls(tuple(Fraction(v) for v in vals), True)
        if any(rational) and not all(isinstance(v, int) for v, r in zip(vals, rational) if r):
            raise TypeError("cannot mix Fractions with floating point values in one point set")
        return cls(tuple(complex(v) for v in vals), False)

    @property
    def n(self) -> int:
        return len(self.values)

    def zero(self) -> Scalar:
        return Fraction(0) if self.exact else 0j

    def one(self) -> Scalar:
        return Fraction(1) if self.exact else 1 + 0j


def _coeffs_elementary(pts: PointSet, upto: int) -> list:
    # coefficients of prod_i (1 + z_i x), truncated
    e = [pts.one()] + [pts.zero()] * upto
    for z in pts.values:
        for k in range(min(upto, pts.n), 0, -1):
            e[k] = e[k] + z * e[k - 1]
    return e


def _coeffs_complete(pts: PointSet, upto: int) -> list:
    # coefficients of prod_i 1/(1 - z_i x), truncated
    h = [pts.one()] + [pts.zero()] * upto
    for z in pts.values:
        for k in range(1, upto + 1):
            h[k] = h[k] + z * h[k - 1]
    return h


def elementary(n: int, pts) -> Scalar:
    pts = PointSet.of(pts)
    if n < 0:
        raise ValueError("n must be >= 0")
    if n > pts.n:
        return pts.zero()
    return _coeffs_elementary(pts, n)[n]


def complete(n: int, pts) -> Scalar:
    pts = PointSet.of(pts)
    if n < 0:
        raise ValueError("n must be >= 0")
    return _coeffs_complete(pts, n)[n]


def power_sum(n: int, pts) -> Scalar:
    pts = PointSet.of(pts)
    if n < 1:
        raise ValueError("n must be >= 1")
    return sum((z**n for z in pts.values), pts.zero())


def semistandard_contents(lam: Partition, n: int) -> Iterator[tuple[int, ...]]:
    """Yield the content vector of every semistandard tableau of shape ``lam``
    with entries in 1..n.

    A tableau is built by peeling off the horizontal strip holding the largest
    entry, so each yielded tuple ``c`` has ``c[i]`` = number of entries equal
    to ``i + 1``.
    """
    if len(lam) > n:
        return

    def rec(shape: tuple[int, ...], k: int) -> Iterator[tuple[int, ...]]:
        if k == 0:
            if not shape:
                yield ()
            return
        # inner shapes mu with shape/mu a horizontal strip and len(mu) <= k-1
        if len(shape) > k:
            return
        padded = shape + (0,)
        bounds = [(padded[i + 1], padded[i]) for i in range(len(shape))]

        def inner(i: int) -> Iterator[tuple[int, ...]]:
            if i == len(bounds):
                yield ()
                return
            lo, hi = bounds[i]
            for v in range(hi, lo - 1, -1):
                for rest in inner(i + 1):
                    yield (v,) + rest

        for mu in inner(0):
            mu = tuple(p for p in mu if p > 0)
            if len(mu) > k - 1:
                continue
            strip = sum(shape) - sum(mu)
            for head in rec(mu, k - 1):
                yield head + (strip,)

    yield from rec(lam.parts, n)


def schur_tableau(lam: Partition, pts) -> Scalar:
    pts = PointSet.of(pts)
    if lam.weight() > TABLEAU_MAX_WEIGHT:
        raise ValueError(
            f"tableau enumeration is capped at weight {TABLEAU_MAX_WEIGHT}; "
            "use schur_jacobi_trudi for larger partitions"
        )
    total = pts.zero()
    for content in semistandard_contents(lam, pts.n):
        term = pts.one()
        for z, c in zip(pts.values, content):
            if c:
                term = term * z**c
        total = total + term
    return total


def _det(rows, exact: bool) -> Scalar:
    return det_exact(rows) if exact else det_float(rows)


def schur_jacobi_trudi(lam: Partition, pts, variant: str = "h") -> Scalar:
    """Schur function as det(h_{lam_i - i + j}) (``variant="h"``) or
    det(e_{lam'_i - i + j}) (``variant="e"``)."""
    pts = PointSet.of(pts)
    if len(lam) > pts.n:
        return pts.zero()
    if not lam.parts:
        return pts.one()
    if variant == "h":
        rows = lam.parts
        top = rows[0] + len(rows)
        coeffs = _coeffs_complete(pts, top)
    elif variant == "e":
        rows = lam.conjugate().parts
        top = rows[0] + len(rows)
        coeffs = _coeffs_elementary(pts, top)
    else:
        raise ValueError(f"unknown Jacobi-Trudi variant {variant!r}")
    ell = len(rows)
    zero = pts.zero()

    def entry(i: int, j: int):
        k = rows[i] - i + j
        return coeffs[k] if 0 <= k <= top else zero

    matrix = [[entry(i, j) for j in range(ell)] for i in range(ell)]
    return _det(matrix, pts.exact)


def schur_vandermonde(lam: Partition, pts) -> Scalar:
    pts = PointSet.of(pts)
    n = pts.n
    if len(set(pts.values)) < n:
        raise DegeneratePoints("points must be pairwise distinct for the determinant ratio")
    if len(lam) > n:
        return pts.zero()
    expo = lam.padded(n)
    num = [[z ** (n - 1 - i + expo[i]) for z in pts.values] for i in range(n)]
    den = [[z ** (n - 1 - i) for z in pts.values] for i in range(n)]
    d = _det(den, pts.exact)
    if d == 0:
        raise DegeneratePoints("Vandermonde determinant vanished")
    return _det(num, pts.exact) / d


def schur(lam: Partition, pts) -> Scalar:
    """Default Schur evaluation (Jacobi-Trudi)."""
    return schur_jacobi_trudi(lam, pts)


def hook_expand_power_sum(n: int, pts) -> Scalar:
    """Evaluate sum_k (-1)^(n-k) s_(k,1^(n-k)) term by term; equals t_n."""
    pts = PointSet.of(pts)
    total = pts.zero()
    for lam, sign in hooks_of(n):
        total = total + sign * schur_jacobi_trudi(lam, pts)
    return total


def dual_cauchy_lhs(xs, zs) -> Scalar:
    xs, zs = PointSet.of(xs), PointSet.of(zs)
    _check_same_mode(xs, zs)
    out = xs.one()
    for x in xs.values:
        for z in zs.values:
            out = out * (1 + x * z)
    return out


def dual_cauchy_rhs(xs, zs, weight_cap: int | None = None) -> Scalar:
    """Sum of s_{lam'}(xs) s_lam(zs) over lam inside the len(zs) x len(xs) box.

    The sum is exhaustive when ``weight_cap >= len(xs) * len(zs)`` (the default).
    """
    xs, zs = PointSet.of(xs), PointSet.of(zs)
    _check_same_mode(xs, zs)
    cap = xs.n * zs.n if weight_cap is None else weight_cap
    total = xs.zero()
    for lam in enumerate_partitions(cap, zs.n, xs.n):
        total = total + schur_jacobi_trudi(lam.conjugate(), xs) * schur_jacobi_trudi(lam, zs)
    return total


def _check_same_mode(a: PointSet, b: PointSet) -> None:
    if a.exact != b.exact:
        raise TypeError("point sets must share a scalar mode")


# --- batched complex evaluation, used by the Monte Carlo estimators ---------

def complete_batch(z: np.ndarray, upto: int) -> np.ndarray:
    """h_0..h_upto for each row of ``z`` (shape (B, N)); returns (B, upto+1)."""
    z = np.asarray(z, dtype=complex)
    h = np.zeros((z.shape[0], upto + 1), dtype=complex)
    h[:, 0] = 1.0
    for i in range(z.shape[1]):
        zi = z[:, i]
        for k in range(1, upto + 1):
            h[:, k] += zi * h[:, k - 1]
    return h


def schur_batch(lam: Partition, z: np.ndarray) -> np.ndarray:
    """Jacobi-Trudi Schur values for each row of ``z`` (shape (B, N))."""
    z = np.asarray(z, dtype=complex)
    batch, n = z.shape
    if len(lam) > n:
        return np.zeros(batch, dtype=complex)
    if not lam.parts:
        return np.ones(batch, dtype=complex)
    ell = len(lam)
    top = lam.parts[0] + ell
    h = complete_batch(z, top)
    mat = np.zeros((batch, ell, ell), dtype=complex)
    for i in range(ell):
        for j in range(ell):
            k = lam.parts[i] - i + j
            if 0 <= k <= top:
                mat[:, i, j] = h[:, k]
    return np.linalg.det(mat)


def power_sum_batch(z: np.ndarray, n: int) -> np.ndarray:
    return np.sum(np.asarray(z, dtype=complex) ** n, axis=1)

