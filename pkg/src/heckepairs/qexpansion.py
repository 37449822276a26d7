"""Truncated q-series with exact integer coefficients and the Miller basis of S_k(1)."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import ConsistencyError


@dataclass(frozen=True)
class QExpansion:
    """Power series sum_{n < prec} coeffs[n] q^n, known exactly up to O(q^prec)."""

    coeffs: tuple[int, ...]
    weight: int
    prec: int

    def __post_init__(self):
        if self.prec < 1:
            raise ValueError("precision must be positive")
        if len(self.coeffs) != self.prec:
            raise ValueError(f"expected {self.prec} coefficients, got {len(self.coeffs)}")

    @classmethod
    def from_list(cls, coeffs, weight=0):
        return cls(tuple(int(c) for c in coeffs), weight, len(coeffs))

    @classmethod
    def one(cls, prec):
        return cls((1,) + (0,) * (prec - 1), 0, prec)

    def __getitem__(self, n):
        if not 0 <= n < self.prec:
            raise IndexError(f"coefficient q^{n} is beyond precision {self.prec}")
        return self.coeffs[n]

    def truncate(self, prec):
        if prec > self.prec:
            raise ValueError(f"cannot extend precision {self.prec} to {prec}")
        return QExpansion(self.coeffs[:prec], self.weight, prec)

    def __add__(self, other):
        if not isinstance(other, QExpansion):
            return NotImplemented
        prec = min(self.prec, other.prec)
        coeffs = tuple(x + y for x, y in zip(self.coeffs[:prec], other.coeffs[:prec]))
        return QExpansion(coeffs, self.weight, prec)

    def __neg__(self):
        return QExpansion(tuple(-c for c in self.coeffs), self.weight, self.prec)

    def __sub__(self, other):
        if not isinstance(other, QExpansion):
            return NotImplemented
        return self + (-other)

    def scale(self, c):
        return QExpansion(tuple(c * x for x in self.coeffs), self.weight, self.prec)

    def exact_div(self, d):
        """Divide every coefficient by the integer d, which must divide them all."""
        out = []
        for x in self.coeffs:
            q, r = divmod(x, d)
            if r:
                raise ConsistencyError(f"coefficient {x} is not divisible by {d}")
            out.append(q)
        return QExpansion(tuple(out), self.weight, self.prec)

    def __mul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        if not isinstance(other, QExpansion):
            return NotImplemented
        prec = min(self.prec, other.prec)
        a, b = self.coeffs, other.coeffs
        out = [0] * prec
        for i in range(prec):
            ai = a[i]
            if ai == 0:
                continue
            for j in range(prec - i):
                out[i + j] += ai * b[j]
        return QExpansion(tuple(out), self.weight + other.weight, prec)

    __rmul__ = __mul__

    def __pow__(self, e):
        if not isinstance(e, int) or e < 0:
            raise ValueError("only non-negative integer powers are supported")
        result = QExpansion.one(self.prec)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def valuation(self):
        """Index of the first non-zero coefficient, or prec if all known ones vanish."""
        for n, c in enumerate(self.coeffs):
            if c:
                return n
        return self.prec

    def to_json(self):
        return [str(c) for c in self.coeffs]


def sigma(n, r):
    """Divisor power sum sigma_r(n)."""
    total = 0
    d = 1
    while d * d <= n:
        if n % d == 0:
            total += d**r
            e = n // d
            if e != d:
                total += e**r
        d += 1
    return total


def eisenstein(k, prec):
    """Normalized Eisenstein series E_4 or E_6 truncated at O(q^prec)."""
    if k not in (4, 6):
        raise ValueError(f"only E_4 and E_6 are generators here, got weight {k}")
    if prec < 1:
        raise ValueError("precision must be positive")
    factor = 240 if k == 4 else -504
    coeffs = [1] + [factor * sigma(n, k - 1) for n in range(1, prec)]
    return QExpansion(tuple(coeffs), k, prec)


def delta(prec):
    """The discriminant form (E_4^3 - E_6^2)/1728."""
    if prec < 2:
        raise ValueError("delta needs precision at least 2")
    e4, e6 = eisenstein(4, prec), eisenstein(6, prec)
    return (e4**3 - e6**2).exact_div(1728)


def cusp_dimension(k):
    """dim S_k(1) from the valence formula."""
    if k < 0 or k % 2:
        return 0
    if k % 12 == 2:
        return max(k // 12 - 1, 0)
    return k // 12


@dataclass(frozen=True)
class MillerBasis:
    weight: int
    dim: int
    forms: tuple[QExpansion, ...]

    @property
    def prec(self):
        return self.forms[0].prec if self.forms else 0


def _eisenstein_monomial(weight, prec):
    # E_4^x E_6^y of the given weight, y in {0, 1}
    if weight == 0:
        return QExpansion.one(prec)
    y = 0 if weight % 4 == 0 else 1
    x = (weight - 6 * y) // 4
    if x < 0:
        raise ValueError(f"no Eisenstein monomial of weight {weight}")
    return eisenstein(4, prec) ** x * eisenstein(6, prec) ** y


def miller_basis(k, prec):
    """Echelonized integral basis of S_k(1).

    Form i has q-expansion q^{i+1} + O(q^{d+1}) where d = dim S_k(1).  The
    generators Delta^j E_4^x E_6^y (j = 1..d) are reduced over the rationals and
    the result is checked to be integral.
    """
    if k % 2 or k < 0:
        raise ValueError(f"weight must be a non-negative even integer, got {k}")
    if prec < 1:
        raise ValueError("precision must be positive")
    gens = []
    dlt = delta(max(prec, 2)).truncate(prec) if prec >= 2 else None
    j = 1
    while 12 * j <= k:
        rest = k - 12 * j
        if rest != 2:
            gens.append((j, rest))
        j += 1
    d = len(gens)
    if d != cusp_dimension(k):
        raise ConsistencyError(f"constructed {d} generators for weight {k}, expected {cusp_dimension(k)}")
    if d == 0:
        return MillerBasis(k, 0, ())
    if prec < d + 1:
        raise ValueError(f"precision {prec} too small to echelonize dimension {d} (need {d + 1})")

    rows = []
    for j, rest in gens:
        f = dlt**j * _eisenstein_monomial(rest, prec)
        rows.append([Fraction(c) for c in f.coeffs])

    # reduced row echelon form on columns 1..d
    for i in range(d):
        col = i + 1
        piv = next((r for r in range(i, d) if rows[r][col] != 0), None)
        if piv is None:
            raise ConsistencyError(f"generators for weight {k} are not independent")
        rows[i], rows[piv] = rows[piv], rows[i]
        lead = rows[i][col]
        rows[i] = [x / lead for x in rows[i]]
        for r in range(d):
            if r != i and rows[r][col] != 0:
                m = rows[r][col]
                rows[r] = [x - m * y for x, y in zip(rows[r], rows[i])]

    forms = []
    for row in rows:
        if any(x.denominator != 1 for x in row):
            raise ConsistencyError(f"Miller basis for weight {k} came out non-integral")
        forms.append(QExpansion(tuple(int(x) for x in row), k, prec))
    return MillerBasis(k, d, tuple(forms))
