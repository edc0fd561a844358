"""Determinants over exact rationals and complex floats."""
from __future__ import annotations

from fractions import Fraction
from typing import Sequence

import numpy as np


def det_exact(rows: Sequence[Sequence]) -> Fraction:
    """Bareiss fraction-free elimination; entries may be ints or Fractions."""
    a = [[Fraction(x) for x in row] for row in rows]
    n = len(a)
    if n == 0:
        return Fraction(1)
    sign = 1
    prev = Fraction(1)
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if swap is None:
                return Fraction(0)
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        akk = a[k][k]
        for i in range(k + 1, n):
            aik = a[i][k]
            row_i, row_k = a[i], a[k]
            for j in range(k + 1, n):
                row_i[j] = (row_i[j] * akk - aik * row_k[j]) / prev
        prev = akk
    return sign * a[n - 1][n - 1]


def det_float(rows) -> complex:
    m = np.asarray(rows, dtype=complex)
    if m.shape == (0, 0):
        return 1.0 + 0j
    return complex(np.linalg.det(m))
