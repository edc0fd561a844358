"""Pfaffians, the tridiagonal matrix eps and its staircase inverse.

Matrix labels in this module are 1-based wherever an index sequence is passed
in (``rows``), so that row ``k`` of ``build_epsilon_inverse(M)`` is the row
labelled ``k`` in the ensemble formulas. Storage is 0-based as usual.
"""
from __future__ import annotations

from collections import Counter
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Sequence

import numpy as np

EXPANSION_MAX_DIM = 12
DN_MAX_DIM = 20


class OddDimension(ValueError):
    """eps and A are only defined (invertible) in even dimension."""


class SkewMatrix:
    """Immutable square skew-symmetric matrix, exact (Fraction) or float.

    Skew-symmetry is checked exactly at construction.
    """

    __slots__ = ("_entries", "exact")

    def __init__(self, entries, exact: bool | None = None):
        if exact is None:
            exact = _looks_exact(entries)
        if exact:
            rows = tuple(tuple(Fraction(x) for x in row) for row in entries)
            n = len(rows)
            if any(len(r) != n for r in rows):
                raise ValueError("matrix must be square")
            for k in range(n):
                for l in range(k, n):
                    if rows[k][l] != -rows[l][k]:
                        raise ValueError(f"not skew-symmetric at ({k + 1}, {l + 1})")
            self._entries = rows
        else:
            arr = np.array(entries, dtype=complex if np.iscomplexobj(entries) else float)
            if arr.size == 0:
                arr = arr.reshape(0, 0)
            if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
                raise ValueError("matrix must be square")
            if not np.array_equal(arr, -arr.T):
                raise ValueError("not skew-symmetric")
            arr.setflags(write=False)
            self._entries = arr
        self.exact = exact

    @property
    def dim(self) -> int:
        return len(self._entries)

    def __getitem__(self, kl):
        k, l = kl
        return self._entries[k][l]

    def to_list(self) -> list[list]:
        return [list(row) for row in self._entries]

    def to_numpy(self) -> np.ndarray:
        if self.exact:
            return np.array([[float(x) for x in row] for row in self._entries])
        return np.array(self._entries)

    def submatrix(self, rows: Sequence[int]) -> "SkewMatrix":
        """Principal submatrix on 1-based labels ``rows`` (kept in given order)."""
        idx = [r - 1 for r in rows]
        if self.exact:
            return SkewMatrix([[self._entries[i][j] for j in idx] for i in idx], exact=True)
        return SkewMatrix(self._entries[np.ix_(idx, idx)], exact=False)

    def permuted(self, perm: Sequence[int]) -> "SkewMatrix":
        """Symmetric permutation by 0-based ``perm``."""
        return self.submatrix([p + 1 for p in perm])

    def __eq__(self, other) -> bool:
        if not isinstance(other, SkewMatrix) or self.dim != other.dim:
            return NotImplemented
        return all(self[k, l] == other[k, l] for k in range(self.dim) for l in range(self.dim))

    def __repr__(self) -> str:
        kind = "exact" if self.exact else "float"
        return f"SkewMatrix(dim={self.dim}, {kind})"


def _looks_exact(entries) -> bool:
    if isinstance(entries, np.ndarray):
        return entries.dtype.kind in "iu" or entries.dtype == object
    return all(isinstance(x, (int, Fraction)) for row in entries for x in row)


def pfaffian(m: SkewMatrix, method: str = "auto"):
    """Pfaffian of a skew matrix; odd dimension gives 0.

    Exact matrices use expansion along the first row up to dim 12 and exact
    elimination beyond (``method`` may force ``"expansion"`` or
    ``"elimination"``). Float matrices use Parlett-Reid elimination with the
    largest-magnitude pivot in the current row.
    """
    n = m.dim
    if n % 2:
        return Fraction(0) if m.exact else 0.0
    if not m.exact:
        return _pfaffian_float(np.array(m.to_numpy()))
    if method == "auto":
        method = "expansion" if n <= EXPANSION_MAX_DIM else "elimination"
    rows = [list(r) for r in m.to_list()]
    if method == "expansion":
        return _pfaffian_expand(rows, tuple(range(n)))
    if method == "elimination":
        return _pfaffian_eliminate(rows)
    raise ValueError(f"unknown method {method!r}")


def _pfaffian_expand(a: list[list[Fraction]], idx: tuple[int, ...]) -> Fraction:
    if not idx:
        return Fraction(1)
    first, rest = idx[0], idx[1:]
    total = Fraction(0)
    for pos, j in enumerate(rest):
        entry = a[first][j]
        if entry == 0:
            continue
        sub = rest[:pos] + rest[pos + 1:]
        term = entry * _pfaffian_expand(a, sub)
        total += term if pos % 2 == 0 else -term
    return total


def _pfaffian_eliminate(a: list[list[Fraction]]) -> Fraction:
    n = len(a)
    result = Fraction(1)
    for k in range(0, n - 1, 2):
        piv = next((j for j in range(k + 1, n) if a[k][j] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != k + 1:
            _swap(a, k + 1, piv)
            result = -result
        p = a[k][k + 1]
        result *= p
        # a[i][j] += tau_i * a[j][k+1] - a[i][k+1] * tau_j, with tau = a[k][.] / p
        tau = [a[k][j] / p for j in range(n)]
        col = [a[i][k + 1] for i in range(n)]
        for i in range(k + 2, n):
            row = a[i]
            ti, ci = tau[i], col[i]
            for j in range(k + 2, n):
                row[j] += ti * col[j] - ci * tau[j]
    return result


def _swap(a: list[list], i: int, j: int) -> None:
    a[i], a[j] = a[j], a[i]
    for row in a:
        row[i], row[j] = row[j], row[i]


def _pfaffian_float(a: np.ndarray):
    n = a.shape[0]
    result = 1.0
    for k in range(0, n - 1, 2):
        piv = k + 1 + int(np.argmax(np.abs(a[k, k + 1:])))
        if piv != k + 1:
            a[[k + 1, piv], :] = a[[piv, k + 1], :]
            a[:, [k + 1, piv]] = a[:, [piv, k + 1]]
            result = -result
        p = a[k, k + 1]
        if p == 0:
            return 0.0 * result
        result = result * p
        if k + 2 < n:
            tau = a[k, k + 2:] / p
            col = a[k + 2:, k + 1]
            a[k + 2:, k + 2:] += np.outer(tau, col) - np.outer(col, tau)
    return result


def build_epsilon(m: int) -> SkewMatrix:
    """Tridiagonal skew matrix with -1 above and +1 below the diagonal."""
    _require_even(m)
    rows = [[0] * m for _ in range(m)]
    for k in range(m - 1):
        rows[k][k + 1] = -1
        rows[k + 1][k] = 1
    return SkewMatrix(rows, exact=True)


def epsilon_inverse_entry(k: int, l: int) -> int:
    """Entry (k, l) of eps^-1 (1-based); independent of the even dimension."""
    if k < l:
        return 1 if (k % 2 == 1 and l % 2 == 0) else 0
    if k > l:
        return -epsilon_inverse_entry(l, k)
    return 0


def build_epsilon_inverse(m: int) -> SkewMatrix:
    _require_even(m)
    return SkewMatrix(
        [[epsilon_inverse_entry(k, l) for l in range(1, m + 1)] for k in range(1, m + 1)],
        exact=True,
    )


def _require_even(m: int) -> None:
    if m < 2 or m % 2:
        raise OddDimension(f"dimension must be even and >= 2, got {m}")


def _check_rows(rows: Sequence[int], dim: int | None = None) -> tuple[int, ...]:
    rows = tuple(int(r) for r in rows)
    if any(b <= a for a, b in zip(rows, rows[1:])):
        raise IndexError(f"rows must be strictly increasing: {rows}")
    if rows and rows[0] < 1:
        raise IndexError("rows are 1-based")
    if dim is not None and rows and rows[-1] > dim:
        raise IndexError(f"row {rows[-1]} exceeds dimension {dim}")
    if len(rows) % 2:
        raise IndexError("an even number of rows is required")
    return rows


def sub_pfaffian(m: SkewMatrix, rows: Sequence[int]):
    rows = _check_rows(rows, m.dim)
    if not rows:
        return Fraction(1) if m.exact else 1.0
    return pfaffian(m.submatrix(rows))


def consecutive_pair_pfaffian_sign(rows: Sequence[int], dim: int | None = None) -> int:
    """Predict the principal sub-Pfaffian of eps^-1 on ``rows`` without computing it.

    The complement of ``rows`` in 1..M (M = ``dim``, default the smallest even
    bound of the rows) must split into disjoint pairs (k, k+1); otherwise the
    sub-Pfaffian is 0. When it does, the value is the sign of the shuffle that
    moves the kept rows to the upper-left corner, (-1)^sum(r_i - i).
    """
    rows = _check_rows(rows)
    top = rows[-1] if rows else 0
    m = dim if dim is not None else top + (top % 2)
    if m % 2 or m < top:
        raise IndexError(f"dimension {m} must be even and cover the rows")
    kept = set(rows)
    k = 1
    while k <= m:
        if k in kept:
            k += 1
        elif k + 1 <= m and k + 1 not in kept:
            k += 2
        else:
            return 0
    shuffle = sum(r - i for i, r in enumerate(rows, start=1))
    return -1 if shuffle % 2 else 1


class DnPolynomial:
    """Multilinear polynomial in x_1..x_M stored as {frozenset(indices): coeff}."""

    def __init__(self, m: int, terms: dict[frozenset, int]):
        self.m = m
        self.terms = {k: v for k, v in terms.items() if v != 0}

    def coefficient(self, indices: Iterable[int]) -> int:
        return self.terms.get(frozenset(indices), 0)

    def evaluate(self, xs: Sequence):
        if len(xs) != self.m:
            raise ValueError(f"need {self.m} values")
        total = 0
        for mono, c in self.terms.items():
            term = c
            for k in mono:
                term = term * xs[k - 1]
            total = total + term
        return total

    def monomials(self) -> list[tuple[int, ...]]:
        return sorted((tuple(sorted(k)) for k in self.terms), key=lambda t: (len(t), t))

    def __len__(self) -> int:
        return len(self.terms)

    def __str__(self) -> str:
        parts = []
        for mono in self.monomials():
            c = self.terms[frozenset(mono)]
            body = "".join(f"x{k}" for k in mono) or "1"
            parts.append(body if c == 1 else f"{c}*{body}")
        return " + ".join(parts)


def dn_polynomial(m: int) -> DnPolynomial:
    """det(diag(x) + eps^-1) via D_M = D_{M-1} + x_M x_{M-1} D_{M-2}."""
    if m < 1:
        raise ValueError("m must be >= 1")
    if m > DN_MAX_DIM:
        raise ValueError(f"dn_polynomial is capped at M = {DN_MAX_DIM}")
    prev2: Counter = Counter({frozenset(): 1})  # D_0
    prev1: Counter = Counter({frozenset(): 1})  # D_1
    for k in range(2, m + 1):
        cur = Counter(prev1)
        for mono, c in prev2.items():
            cur[mono | {k - 1, k}] += c
        prev2, prev1 = prev1, cur
    return DnPolynomial(m, dict(prev1))


def even_subsets(m: int) -> Iterable[tuple[int, ...]]:
    """All even-size subsets of 1..m as increasing tuples."""
    for size in range(0, m + 1, 2):
        yield from combinations(range(1, m + 1), size)
