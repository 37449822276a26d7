"""Selberg majorant of the indicator of an interval [a, b] in [-1/2, 1/2].

S_M(x) = (b - a) + V_M(x - b) - V_M(x - a)
         + (Delta_{M+1}(x - a) + Delta_{M+1}(x - b)) / (2(M + 1))

where Delta_{M+1} is the Fejer kernel and V_M is Vaaler's trigonometric
polynomial for the sawtooth psi(x) = {x} - 1/2, which satisfies
|V_M - psi| <= Delta_{M+1} / (2(M + 1)).  Since
chi_[a,b](x) = b - a + psi(x - b) - psi(x - a) away from the endpoints, S_M
majorizes the indicator, has degree M and mean b - a + 1/(M + 1).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import ConsistencyError

IMAG_WARN = 1e-12
IMAG_FAIL = 1e-10


def vaaler_weight(t):
    """J-hat(t) = pi|t|(1 - |t|)cot(pi|t|) + |t| for 0 < |t| < 1, extended by 1 at 0 and 0 at |t| >= 1."""
    t = abs(t)
    if t == 0:
        return 1.0
    if t >= 1:
        return 0.0
    s = 1 - t
    # cot(pi t) = -cot(pi s); the smaller argument keeps tan accurate near t = 1
    cot = 1 / math.tan(math.pi * t) if t <= 0.5 else -1 / math.tan(math.pi * s)
    return math.pi * t * s * cot + t


def fejer(x, size):
    """Fejer kernel sum_{|n| < size} (1 - |n|/size) e(nx)."""
    x = np.asarray(x, dtype=float)
    n = np.arange(1, size)
    w = 1 - n / size
    return 1 + 2 * np.cos(2 * np.pi * np.multiply.outer(x, n)) @ w


def chi_hat(a, b, n):
    """Fourier coefficient of the indicator of [a, b] at frequency n."""
    if n == 0:
        return complex(b - a)
    a, b = float(a), float(b)
    return (np.exp(-2j * np.pi * n * a) - np.exp(-2j * np.pi * n * b)) / (2j * np.pi * n)


@dataclass(frozen=True)
class SelbergCoeffs:
    M: int
    a: Fraction
    b: Fraction
    values: np.ndarray  # values[n + M] is the coefficient at frequency n
    constant_exact: Fraction

    def coeff(self, n):
        if abs(n) > self.M:
            return 0j
        return complex(self.values[n + self.M])

    @property
    def frequencies(self):
        return np.arange(-self.M, self.M + 1)

    def to_json(self):
        return {
            "M": self.M,
            "a": str(self.a),
            "b": str(self.b),
            "coeffs": [
                {"n": int(n), "re": float(c.real), "im": float(c.imag)}
                for n, c in zip(self.frequencies, self.values)
            ],
        }


def build_majorant(a, b, M):
    """Coefficients of the degree-M Selberg majorant of the indicator of [a, b]."""
    a, b = Fraction(a), Fraction(b)
    if not isinstance(M, int) or M < 1:
        raise ValueError(f"degree must be a positive integer, got {M}")
    if not a < b:
        raise ValueError(f"need a < b, got [{a}, {b}]")
    if a < Fraction(-1, 2) or b > Fraction(1, 2):
        raise ValueError(f"interval [{a}, {b}] escapes [-1/2, 1/2]")
    size = M + 1
    af, bf = float(a), float(b)
    values = np.zeros(2 * M + 1, dtype=complex)
    constant = b - a + Fraction(1, size)
    values[M] = float(constant)
    for n in range(-M, M + 1):
        if n == 0:
            continue
        ea = np.exp(-2j * np.pi * n * af)
        eb = np.exp(-2j * np.pi * n * bf)
        v = -vaaler_weight(n / size) / (2j * np.pi * n)
        fej = (1 - abs(n) / size) / (2 * size)
        values[n + M] = v * (eb - ea) + fej * (ea + eb)
    return SelbergCoeffs(M, a, b, values, constant)


def evaluate(S, x):
    """S_M(x) for scalar or array x (period 1)."""
    xs = np.atleast_1d(np.asarray(x, dtype=float))
    out = np.empty(xs.shape, dtype=float)
    freqs = S.frequencies
    chunk = max(1, 2_000_000 // len(freqs))
    for start in range(0, xs.size, chunk):
        part = xs.ravel()[start : start + chunk]
        vals = np.exp(2j * np.pi * np.multiply.outer(part, freqs)) @ S.values
        worst = float(np.max(np.abs(vals.imag))) if vals.size else 0.0
        if worst > IMAG_FAIL:
            raise ConsistencyError(f"majorant has imaginary part {worst:.3g}")
        out.ravel()[start : start + chunk] = vals.real
    if np.ndim(x) == 0:
        return float(out[0])
    return out


def indicator(a, b, x):
    x = np.asarray(x, dtype=float)
    return ((x >= float(a)) & (x <= float(b))).astype(float)


def check_properties(S, grid=10_001):
    """Verify majorization, the mean and the coefficient bound for one majorant."""
    xs = np.linspace(-0.5, 0.5, grid)
    # the endpoints themselves must be dominated too
    xs = np.concatenate([xs, [float(S.a), float(S.b)]])
    chi = indicator(S.a, S.b, xs)
    vals = evaluate(S, xs)
    majorization_slack = float(np.min(vals - chi))
    length = S.b - S.a
    mean_error = abs(float(S.coeff(0).real) - float(length) - 1.0 / (S.M + 1))
    mean_exact = S.constant_exact == length + Fraction(1, S.M + 1)
    worst_excess = -math.inf
    for n in range(1, S.M + 1):
        cap = 1.0 / (S.M + 1) + min(float(length), 1.0 / (math.pi * n))
        worst_excess = max(worst_excess, abs(S.coeff(n)) - cap, abs(S.coeff(-n)) - cap)
    hermitian = float(
        max((abs(S.coeff(-n) - S.coeff(n).conjugate()) for n in range(S.M + 1)), default=0.0)
    )
    return {
        "M": S.M,
        "a": str(S.a),
        "b": str(S.b),
        "majorization_slack": majorization_slack,
        "majorization_ok": majorization_slack >= -1e-12,
        "mean_error": mean_error,
        "mean_ok": mean_error <= 1e-15 and mean_exact,
        "coefficient_excess": worst_excess,
        "coefficient_ok": worst_excess <= 1e-15,
        "hermitian_error": hermitian,
    }
