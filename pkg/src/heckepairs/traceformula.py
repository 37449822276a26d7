"""Eichler-Selberg trace formula for T_n on S_k(SL_2(Z)).

    Tr T_n = -1/2 sum_{t^2 <= 4n} U_{k-2}(t, n) H(4n - t^2) - 1/2 sum_{dd' = n} min(d, d')^{k-1}

with Hurwitz class numbers H (H(0) = -1/12) and U_j(t, n) the coefficients of
1/(1 - t x + n x^2).  This is computed independently of any q-expansion and is
used to cross-check the Hecke matrices and the eigenvalue angles.
"""

from __future__ import annotations

import math
from fractions import Fraction

import numba
import numpy as np

from . import ConsistencyError
from .hecke import is_prime


@numba.njit(cache=True)
def _hurwitz12(n):
    # 12 H(n) for n > 0 by enumerating reduced forms (a, b, c), b^2 - 4ac = -n
    r = n % 4
    if r == 1 or r == 2:
        return 0
    total = 0
    b = n % 2
    while 3 * b * b <= n:
        m = (b * b + n) // 4
        a = b if b > 0 else 1
        while a * a <= m:
            if m % a == 0:
                c = m // a
                if b == 0:
                    total += 6 if a == c else 12
                elif b == a:
                    total += 4 if a == c else 12
                elif a == c:
                    total += 12
                else:
                    # (a, b, c) and (a, -b, c) are both reduced
                    total += 24
            a += 1
        b += 2
    return total


@numba.njit(cache=True)
def _hurwitz12_table(limit):
    out = np.zeros(limit + 1, dtype=np.int64)
    a = 1
    while 3 * a * a <= limit:
        for b in range(0, a + 1):
            c = a
            while True:
                n = 4 * a * c - b * b
                if n > limit:
                    break
                if b == 0:
                    out[n] += 6 if a == c else 12
                elif b == a:
                    out[n] += 4 if a == c else 12
                elif a == c:
                    out[n] += 12
                else:
                    out[n] += 24
                c += 1
        a += 1
    out[0] = -1
    return out


class HurwitzTable:
    """Hurwitz class numbers, tabulated up to `limit` and memoized beyond it.

    Values are stored as 12 H(n), which is always an integer.
    """

    def __init__(self, limit=1 << 16):
        self.limit = int(limit)
        self._table = _hurwitz12_table(self.limit)
        self._extra = {}

    def twelve_h(self, n):
        if n < 0:
            raise ValueError("Hurwitz class number needs n >= 0")
        if n <= self.limit:
            return int(self._table[n])
        v = self._extra.get(n)
        if v is None:
            v = int(_hurwitz12(n))
            self._extra[n] = v
        return v

    def __getitem__(self, n):
        return Fraction(self.twelve_h(n), 12)


_default_table = None


def default_table():
    global _default_table
    if _default_table is None:
        _default_table = HurwitzTable()
    return _default_table


def hurwitz(n):
    """Hurwitz class number H(n) as an exact fraction."""
    if n < 0:
        raise ValueError("Hurwitz class number needs n >= 0")
    if n == 0:
        return Fraction(-1, 12)
    return Fraction(int(_hurwitz12(n)), 12)


def gegenbauer(k, t, n):
    """U_{k-2}(t, n) with U_0 = 1, U_1 = t, U_j = t U_{j-1} - n U_{j-2}."""
    j = k - 2
    if j < 0:
        raise ValueError("weight must be at least 2")
    prev, cur = 0, 1
    for _ in range(j):
        prev, cur = cur, t * cur - n * prev
    return cur


def trace(k, n, table=None):
    """Exact trace of T_n on S_k(1) for even k >= 4."""
    if k % 2 or k < 4:
        raise ValueError(f"weight must be even and at least 4, got {k}")
    if n < 1:
        raise ValueError(f"Hecke index must be positive, got {n}")
    table = default_table() if table is None else table
    tmax = math.isqrt(4 * n)
    # U_{k-2}(-t, n) = U_{k-2}(t, n) for even k
    class_sum = gegenbauer(k, 0, n) * table.twelve_h(4 * n)
    for t in range(1, tmax + 1):
        class_sum += 2 * gegenbauer(k, t, n) * table.twelve_h(4 * n - t * t)
    divisor_sum = 0
    d = 1
    while d * d <= n:
        if n % d == 0:
            divisor_sum += d ** (k - 1) * (1 if d * d == n else 2)
        d += 1
    value = Fraction(-class_sum, 24) - Fraction(divisor_sum, 2)
    if value.denominator != 1:
        raise ConsistencyError(f"trace formula gave non-integer {value} for k={k}, n={n}")
    return int(value)


def _scaled(num, p, exponent):
    # num / p^(exponent/2) as a float, exact until the final rounding
    if exponent % 2 == 0:
        return float(Fraction(num, p ** (exponent // 2)))
    return float(Fraction(num, p ** (exponent // 2))) / math.sqrt(p)


def moment_sum(k, p, m, table=None):
    """Sum over eigenforms of 2 cos(m theta_p(f)) from traces alone.

    Uses 2 cos(m theta) = X_m - X_{m-2} with X_j(2 cos theta) the Chebyshev
    polynomials of the second kind, and X_j(a_p / p^{(k-1)/2}) summed over f
    equal to Tr T_{p^j} / p^{j(k-1)/2}.  The m = 0 term is the dimension.
    """
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if m < 0:
        raise ValueError("moment index must be non-negative")
    if m == 0:
        return float(trace(k, 1, table))
    if m == 1:
        return _scaled(trace(k, p, table), p, k - 1)
    num = trace(k, p**m, table) - p ** (k - 1) * trace(k, p ** (m - 2), table)
    return _scaled(num, p, m * (k - 1))
