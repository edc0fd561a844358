"""Closed-form averages over the real Ginibre ensemble.

Two independent routes give <s_lam(H)>_N:

* :func:`schur_average_closed` - the Gamma-ratio product, evaluated without
  divisions as prod_n prod_{j < lam_n/2} (N - n + 1 + 2j);
* :func:`schur_average_pfaffian` - the a-weighted sub-Pfaffian of eps^-1 on
  the shifted indices N - n + lam_n + 1, normalised by the empty partition.

The a_k = 2^(k/2) Gamma(k/2) factors are carried as :class:`Surd` values so the
irrational sqrt(2) and sqrt(pi) parts cancel exactly in the Pfaffian route.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import numpy as np

from .partitions import Partition, enumerate_partitions, hooks_of
from .pfaffian import (
    OddDimension,
    SkewMatrix,
    epsilon_inverse_entry,
    pfaffian,
    sub_pfaffian,
    build_epsilon_inverse,
)
from .symfunc import PointSet, schur_jacobi_trudi


class InvalidPartition(ValueError):
    pass


class IrrationalResidue(ArithmeticError):
    """The sqrt(2)/sqrt(pi) factors failed to cancel in a ratio."""


@dataclass(frozen=True)
class Surd:
    """``coeff * sqrt(2)**root2 * sqrt(pi)**rootpi`` with root2 in {0, 1}."""

    coeff: Fraction
    root2: int = 0
    rootpi: int = 0

    def __post_init__(self):
        coeff, r2 = Fraction(self.coeff), self.root2
        coeff *= Fraction(2) ** (r2 // 2)
        object.__setattr__(self, "coeff", coeff)
        object.__setattr__(self, "root2", r2 % 2)

    def __mul__(self, other: "Surd | int | Fraction") -> "Surd":
        if not isinstance(other, Surd):
            return Surd(self.coeff * Fraction(other), self.root2, self.rootpi)
        return Surd(self.coeff * other.coeff, self.root2 + other.root2, self.rootpi + other.rootpi)

    __rmul__ = __mul__

    def __truediv__(self, other: "Surd") -> "Surd":
        if not isinstance(other, Surd):
            other = Surd(Fraction(other))
        return Surd(self.coeff / other.coeff, self.root2 - other.root2 + 2, self.rootpi - other.rootpi) * Fraction(1, 2)

    def is_rational(self) -> bool:
        return self.coeff == 0 or (self.root2 == 0 and self.rootpi == 0)

    def rational(self) -> Fraction:
        if not self.is_rational():
            raise IrrationalResidue(f"{self} is not rational")
        return self.coeff

    def __float__(self) -> float:
        return float(self.coeff) * math.sqrt(2) ** self.root2 * math.sqrt(math.pi) ** self.rootpi

    def __str__(self) -> str:
        out = [str(self.coeff)]
        if self.root2:
            out.append("sqrt(2)")
        half, odd = divmod(self.rootpi, 2)
        if half:
            out.append("pi" if half == 1 else f"pi^{half}")
        if odd:
            out.append("sqrt(pi)")
        return "*".join(out)


@dataclass(frozen=True)
class MomentValue:
    value: Fraction
    partition: Partition
    dim: int

    def __int__(self) -> int:
        if self.value.denominator != 1:
            raise ValueError(f"{self.value} is not an integer")
        return int(self.value)


def a_coefficient(k: int) -> float:
    """a_k = 2^(k/2) Gamma(k/2) as a float."""
    if k < 1:
        raise ValueError("k must be >= 1")
    return 2 ** (k / 2) * math.gamma(k / 2)


@lru_cache(maxsize=None)
def a_coefficient_exact(k: int) -> Surd:
    """a_{2j} = 2^j (j-1)! and a_{2j+1} = (2j-1)!! sqrt(2 pi)."""
    if k < 1:
        raise ValueError("k must be >= 1")
    j = k // 2
    if k % 2 == 0:
        return Surd(Fraction(2**j * math.factorial(j - 1)))
    double_fact = math.prod(range(2 * j - 1, 0, -2))
    return Surd(Fraction(double_fact), root2=1, rootpi=1)


def _a_with_extension(k: int, extension: int | None) -> float:
    return 1.0 if k == extension else a_coefficient(k)


def build_A(m: int) -> SkewMatrix:
    """A_{lm} = a_l (eps^-1)_{lm} a_m as a float skew matrix, m even."""
    if m < 2 or m % 2:
        raise OddDimension(f"dimension must be even and >= 2, got {m}")
    return _weighted_epsilon_inverse(list(range(1, m + 1)), extension=None)


def _weighted_epsilon_inverse(rows: Sequence[int], extension: int | None) -> SkewMatrix:
    a = [_a_with_extension(k, extension) for k in rows]
    n = len(rows)
    mat = np.zeros((n, n))
    for i in range(n):
        for j in range(i + 1, n):
            e = epsilon_inverse_entry(rows[i], rows[j])
            if e:
                mat[i, j] = a[i] * e * a[j]
                mat[j, i] = -mat[i, j]
    return SkewMatrix(mat, exact=False)


def build_A_inverse(m: int) -> np.ndarray:
    """(A^-1)_{kl} = eps_{kl} / (a_k a_l), tridiagonal."""
    if m < 2 or m % 2:
        raise OddDimension(f"dimension must be even and >= 2, got {m}")
    inv = np.zeros((m, m))
    for k in range(1, m):
        v = 1.0 / (a_coefficient(k) * a_coefficient(k + 1))
        inv[k - 1, k] = -v
        inv[k, k - 1] = v
    return inv


def kernel_KN(n: int, z1: complex, z2: complex) -> complex:
    """(z1 - z2) / (2 sqrt(2 pi)) * sum_{k=0}^{n-2} (z1 z2)^k / k!."""
    if n < 2:
        raise ValueError("N must be >= 2")
    w = z1 * z2
    total, term = 0j, 1 + 0j
    for k in range(n - 1):
        total += term
        term = term * w / (k + 1)
    return (z1 - z2) * total / (2 * math.sqrt(2 * math.pi))


def kernel_coefficients_closed(n: int) -> np.ndarray:
    """C[k, l] = coefficient of z1^k z2^l in :func:`kernel_KN`."""
    c = np.zeros((n, n))
    norm = 2 * math.sqrt(2 * math.pi)
    for p in range(n - 1):
        v = 1.0 / (norm * math.factorial(p))
        c[p + 1, p] += v
        c[p, p + 1] -= v
    return c


def kernel_coefficients_from_A(n: int) -> np.ndarray:
    """C[k, l] = (A^-1)_{k+1, l+1}: the kernel as a bilinear form in monomials."""
    return build_A_inverse(n)


def embedding_dimension(lam: Partition, n: int) -> int:
    """Smallest even M with M >= N + lam_1 + 1."""
    m = n + lam.first + 1
    return m + (m % 2)


def shifted_indices(lam: Partition, n: int) -> list[int]:
    """Indices N - n + lam_n + 1 for n = 1..N, increasing."""
    parts = lam.padded(n)
    return sorted(n - i + parts[i - 1] + 1 for i in range(1, n + 1))


@dataclass(frozen=True)
class PfaffianRoute:
    rows: tuple[int, ...]
    embed_dim: int
    epsilon_pfaffian: Fraction
    prefactor: Surd

    @property
    def weighted(self) -> Surd:
        return self.prefactor * self.epsilon_pfaffian


def pfaffian_route(lam: Partition, n: int, embed_dim: int | None = None) -> PfaffianRoute:
    """Rows, embedding dimension, eps^-1 sub-Pfaffian and a-prefactor for ``lam``.

    For odd N the row M (the embedding dimension) is appended with a_M = 1.
    """
    if n < 1:
        raise ValueError("N must be >= 1")
    if len(lam) > n:
        raise InvalidPartition(f"{lam} has more than N = {n} nonzero parts")
    m = embedding_dimension(lam, n) if embed_dim is None else embed_dim
    if m % 2 or m < n + lam.first + 1:
        raise ValueError(f"embedding dimension {m} must be even and >= {n + lam.first + 1}")
    rows = shifted_indices(lam, n)
    prefactor = Surd(Fraction(1))
    for k in rows:
        prefactor = prefactor * a_coefficient_exact(k)
    if n % 2:
        rows.append(m)
    pf = sub_pfaffian(build_epsilon_inverse(m), rows)
    return PfaffianRoute(tuple(rows), m, pf, prefactor)


def schur_average_pfaffian(lam: Partition, n: int, embed_dim: int | None = None) -> MomentValue:
    route = pfaffian_route(lam, n, embed_dim)
    empty = pfaffian_route(Partition(), n, route.embed_dim)
    if route.epsilon_pfaffian == 0:
        return MomentValue(Fraction(0), lam, n)
    ratio = route.weighted / empty.weighted
    return MomentValue(ratio.rational(), lam, n)


def schur_average_pfaffian_numeric(lam: Partition, n: int) -> float:
    """Float Pfaffian of the a-weighted eps^-1 submatrix directly, without
    factoring the a's out; normalised by the empty partition."""
    m = embedding_dimension(lam, n)
    extension = m if n % 2 else None

    def pf(rows: list[int]) -> float:
        if extension is not None:
            rows = rows + [extension]
        return float(np.real(pfaffian(_weighted_epsilon_inverse(rows, extension))))

    return pf(shifted_indices(lam, n)) / pf(list(range(1, n + 1)))


@lru_cache(maxsize=4096)
def _closed_value(parts: tuple[int, ...], n: int) -> int:
    if any(p % 2 for p in parts):
        return 0
    value = 1
    for i, p in enumerate(parts, start=1):
        for j in range(p // 2):
            value *= n - i + 1 + 2 * j
    return value


def schur_average_closed(lam: Partition, n: int) -> MomentValue:
    """Exact <s_lam(H)>_N: 0 unless every part is even."""
    if n < 1:
        raise ValueError("N must be >= 1")
    if len(lam) > n or lam.weight() % 2:
        return MomentValue(Fraction(0), lam, n)
    return MomentValue(Fraction(_closed_value(lam.parts, n)), lam, n)


def schur_average_gamma(lam: Partition, n: int) -> float:
    """The Gamma-ratio form evaluated in floating point (lgamma), for cross-checks."""
    if len(lam) > n or not lam.is_even():
        return 0.0
    parts = lam.padded(n)
    log = lam.weight() / 2 * math.log(2)
    for i in range(1, n + 1):
        log += math.lgamma((n - i + parts[i - 1] + 1) / 2) - math.lgamma((n - i + 1) / 2)
    return math.exp(log)


def trace_moment(m: int, n: int) -> int:
    """<Tr H^(2m)>_N = prod_{j=1}^m (N + 2(m - j)); m = 0 gives N (Tr I)."""
    if m < 0:
        raise ValueError("m must be >= 0")
    if m == 0:
        return n
    return math.prod(n + 2 * (m - j) for j in range(1, m + 1))


def trace_power_average(power: int, n: int) -> int:
    """<Tr H^power>_N; odd powers vanish."""
    if power % 2:
        return 0
    return trace_moment(power // 2, n)


def trace_power_average_hooks(power: int, n: int) -> Fraction:
    """<t_power> via the hook expansion of t_n and the closed Schur averages."""
    return sum(
        (sign * schur_average_closed(lam, n).value for lam, sign in hooks_of(power)),
        Fraction(0),
    )


def charpoly_pair_average(n: int) -> list[int]:
    """Coefficients c_k = N!/(N-k)! of (x1 x2)^k in <det(1+x1 H) det(1+x2 H)>."""
    if n < 1:
        raise ValueError("N must be >= 1")
    return [math.perm(n, k) for k in range(n + 1)]


def charpoly_expansion(n_factors: int, n: int) -> list[tuple[Partition, Fraction]]:
    """Terms (shape, c) of <prod_j det(1 + x_j H)> = sum c * s_shape(x_1..x_n).

    The shape is (2 lam)' for lam with lam_1 <= floor(n_factors/2) and at most
    N parts; c = <s_{2 lam}(H)>_N.
    """
    if n_factors < 1:
        raise ValueError("need at least one factor")
    terms = []
    for lam in enumerate_partitions(n * (n_factors // 2), n, n_factors // 2):
        double = lam.scaled(2)
        c = schur_average_closed(double, n).value
        if c:
            terms.append((double.conjugate(), c))
    terms.sort(key=lambda t: (t[0].weight(), t[0].parts))
    return terms


def charpoly_product_average(xs, n: int):
    """<prod_j det(1 + x_j H)>_N evaluated at the points ``xs``."""
    pts = PointSet.of(xs)
    total = pts.zero()
    for shape, c in charpoly_expansion(pts.n, n):
        total = total + c * schur_jacobi_trudi(shape, pts)
    return total


def _normalization_rows(n: int) -> tuple[list[int], int | None]:
    rows = list(range(1, n + 1))
    if n % 2:
        rows.append(n + 1)
        return rows, n + 1
    return rows, None


def normalization_constant(n: int) -> float:
    """1/C_N = Pfaff(A) on labels 1..N (plus N+1 with a = 1 when N is odd)."""
    if n < 1:
        raise ValueError("N must be >= 1")
    rows, extension = _normalization_rows(n)
    return float(np.real(pfaffian(_weighted_epsilon_inverse(rows, extension))))


def normalization_constant_exact(n: int) -> Surd:
    rows, extension = _normalization_rows(n)
    value = Surd(Fraction(1))
    for k in rows:
        if k != extension:
            value = value * a_coefficient_exact(k)
    pf = sub_pfaffian(build_epsilon_inverse(rows[-1] + rows[-1] % 2), rows)
    return value * pf
