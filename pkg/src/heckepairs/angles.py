"""Certified Hecke eigenvalues a_p(f) and their angles theta_p(f) in [0, pi]."""

from __future__ import annotations

import math
from dataclasses import dataclass
from decimal import Context
from fractions import Fraction

from . import ConsistencyError
from . import polyarith as pa
from .hecke import CharPoly, charpoly, hecke_matrix

DEFAULT_TOL = Fraction(1, 2**64)
CLAMP_SLACK = 1e-12

_DEC = Context(prec=40)


@dataclass(frozen=True)
class RootInterval:
    """Closed rational interval [lo, hi] containing exactly one real root."""

    lo: Fraction
    hi: Fraction

    @property
    def width(self):
        return self.hi - self.lo

    @property
    def mid(self):
        return (self.lo + self.hi) / 2

    def decimal(self):
        m = self.mid
        return str(_DEC.divide(_DEC.create_decimal(m.numerator), _DEC.create_decimal(m.denominator)))

    def __contains__(self, x):
        return self.lo <= x <= self.hi


@dataclass(frozen=True)
class AngleSet:
    k: int
    p: int
    dim: int
    eigenvalues: tuple[RootInterval, ...]
    midpoints: tuple[float, ...]
    thetas: tuple[float, ...]
    normalized: tuple[float, ...]
    clamped: tuple[bool, ...]

    def to_json(self):
        return {
            "k": self.k,
            "p": self.p,
            "dim": self.dim,
            "eigenvalues": [iv.decimal() for iv in self.eigenvalues],
            "thetas": list(self.thetas),
            "normalized": list(self.normalized),
        }


def isolate_roots(poly, tol=DEFAULT_TOL):
    """Disjoint rational intervals of width <= tol, one around each real root, ascending.

    `poly` is a coefficient list (low to high) or a CharPoly; it must be squarefree.
    """
    f = list(poly.coeffs) if isinstance(poly, CharPoly) else list(poly)
    f = [Fraction(c) for c in pa.strip(f)]
    tol = Fraction(tol)
    if tol <= 0:
        raise ValueError("tolerance must be positive")
    if len(f) <= 1:
        return []
    if pa.degree(pa.gcd_q(f, pa.derivative(f))) > 0:
        raise ValueError("polynomial is not squarefree; divide by gcd(P, P') before isolating roots")
    seq = pa.sturm_sequence(f)
    bound = pa.cauchy_bound(f)

    def count(a, b):
        # roots in (a, b]
        return pa.sign_variations(seq, a) - pa.sign_variations(seq, b)

    out = []
    stack = [(-bound, bound, count(-bound, bound))]
    while stack:
        a, b, n = stack.pop()
        if n == 0:
            continue
        if n == 1:
            out.append(_refine(f, a, b, tol, count))
            continue
        mid = (a + b) / 2
        left = count(a, mid)
        stack.append((mid, b, n - left))
        stack.append((a, mid, left))
    out.sort(key=lambda iv: iv.lo)
    return out


def _refine(f, a, b, tol, count):
    # exactly one root in (a, b]; shrink until the closed interval is isolating and narrow
    if pa.evaluate(f, b) == 0:
        return RootInterval(b, b)
    while pa.evaluate(f, a) == 0:
        mid = (a + b) / 2
        if pa.evaluate(f, mid) == 0:
            return RootInterval(mid, mid)
        if count(a, mid) == 1:
            b = mid
        else:
            a = mid
    sa = pa.sign_at(f, a)
    while b - a > tol:
        mid = (a + b) / 2
        sm = pa.sign_at(f, mid)
        if sm == 0:
            return RootInterval(mid, mid)
        if sm == sa:
            a = mid
        else:
            b = mid
    return RootInterval(a, b)


def deligne_bound_ok(k, p, a):
    """Exact test of |a| <= 2 p^{(k-1)/2}."""
    a = Fraction(a)
    return a * a <= 4 * Fraction(p) ** (k - 1)


def _ratio(k, p, a):
    # a / (2 p^{(k-1)/2}) in floating point from the exact value of a
    a = Fraction(a)
    if (k - 1) % 2 == 0:
        return float(a / (2 * p ** ((k - 1) // 2)))
    return float(a / (2 * p ** ((k - 2) // 2))) / math.sqrt(p)


def angle_of(k, p, a):
    """(theta, clamped) with a = 2 p^{(k-1)/2} cos theta."""
    x = _ratio(k, p, a)
    clamped = False
    if abs(x) > 1:
        if abs(x) > 1 + CLAMP_SLACK:
            raise ConsistencyError(
                f"eigenvalue {float(a):.6g} exceeds the Ramanujan-Petersson bound for k={k}, p={p}"
            )
        x = math.copysign(1.0, x)
        clamped = True
    return math.acos(x), clamped


def to_angles(k, p, eigenvalues):
    """Build an AngleSet from certified eigenvalue intervals (or exact values)."""
    ivs = []
    for e in eigenvalues:
        if isinstance(e, RootInterval):
            ivs.append(e)
        else:
            e = Fraction(e)
            ivs.append(RootInterval(e, e))
    ivs.sort(key=lambda iv: iv.lo)
    thetas, clamped = [], []
    for iv in ivs:
        th, c = angle_of(k, p, iv.mid)
        thetas.append(th)
        clamped.append(c)
    return AngleSet(
        k=k,
        p=p,
        dim=len(ivs),
        eigenvalues=tuple(ivs),
        midpoints=tuple(float(iv.mid) for iv in ivs),
        thetas=tuple(thetas),
        normalized=tuple(th / (2 * math.pi) for th in thetas),
        clamped=tuple(clamped),
    )


def angle_set(k, p, tol=DEFAULT_TOL):
    """Eigenvalue angles of T_p on S_k(1), certified through the characteristic polynomial."""
    cp = charpoly(hecke_matrix(k, p))
    ivs = isolate_roots(cp, tol)
    if len(ivs) != cp.degree:
        raise ConsistencyError(
            f"T_{p} on weight {k} has {cp.degree - len(ivs)} non-real eigenvalues"
        )
    return to_angles(k, p, ivs)


def empirical_moment(angles, m, zero_is_dim=False):
    """Sum of 2 cos(m theta) over the angle set.

    With m = 0 the literal sum is 2 dim; pass zero_is_dim=True for the
    convention in which the constant moment counts each form once.
    """
    if m < 0:
        raise ValueError("moment index must be non-negative")
    if m == 0 and zero_is_dim:
        return float(angles.dim)
    return math.fsum(2 * math.cos(m * th) for th in angles.thetas)
