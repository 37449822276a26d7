"""Closed-form quantities of the pair-counting argument and the key estimate.

The pipeline: eigenvalue angles -> exponential sums T_n = sum_f e(n u_f) over
normalized angles u = theta / 2 pi -> Selberg majorant of [-delta, delta] ->
sum_{|n| <= M} |S_M(n)| |T_n|^2, an upper bound for the number of ordered
pairs (f, g) with equal angles.  Alongside it sit the explicit error term for
sum_f 2 cos(m theta_p(f)) - c_m dim, its simpler replacement, and the choice
of the majorant degree M.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from fractions import Fraction

import numpy as np

from . import selberg
from .hecke import is_prime
from .qexpansion import cusp_dimension


def factorize(n):
    """Prime factorization {p: e} by trial division."""
    if n < 1:
        raise ValueError("can only factor positive integers")
    out = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def euler_phi(n):
    result = n
    for p in factorize(n):
        result = result // p * (p - 1)
    return result


def psi(n):
    """Dedekind psi: n prod_{p | n} (1 + 1/p)."""
    result = n
    for p in factorize(n):
        result = result // p * (p + 1)
    return result


def divisors(n):
    divs = [1]
    for p, e in factorize(n).items():
        divs = [d * p**i for d in divs for i in range(e + 1)]
    return sorted(divs)


@dataclass(frozen=True)
class LevelStats:
    N: int
    nu: int
    psi: int
    fN: int
    dN: int


def level_stats(N):
    if N < 1:
        raise ValueError(f"level must be positive, got {N}")
    divs = divisors(N)
    fN = sum(euler_phi(math.gcd(c, N // c)) for c in divs)
    return LevelStats(N=N, nu=len(factorize(N)), psi=psi(N), fN=fN, dN=len(divs))


def c_coeff(p, m):
    """Moments of the p-adic Plancherel measure against 2 cos(m theta); c_0 = 1."""
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if m < 0:
        raise ValueError("moment index must be non-negative")
    if m == 0:
        return Fraction(1)
    if m % 2:
        return Fraction(0)
    return Fraction(1, p ** (m // 2)) - Fraction(1, p ** ((m - 2) // 2))


def _psi_sieve(limit):
    vals = np.arange(limit + 1, dtype=np.int64)
    is_p = np.ones(limit + 1, dtype=bool)
    is_p[:2] = False
    for q in range(2, limit + 1):
        if is_p[q]:
            is_p[2 * q :: q] = False
            vals[q::q] = vals[q::q] // q * (q + 1)
    return vals


def sup_psi(p, m):
    """max psi(f) over integers f >= 1 with f^2 < 4 p^m."""
    top = math.isqrt(4 * p**m - 1)
    return int(_psi_sieve(top)[1:].max())


def lemma1_bound(k, N, p, m):
    """4 p^m 2^nu(N) sup_{f^2 < 4p^m} psi(f) + 2 f(N) + delta_m(k)."""
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if m < 1:
        raise ValueError("the bound is stated for m >= 1")
    st = level_stats(N)
    value = 4 * p**m * 2**st.nu * sup_psi(p, m) + 2 * st.fN
    if k == 2:
        return value + 2 * p ** (m / 2)
    return float(value)


def alt_bound(k, N, p, m):
    """p^{3m/2} 2^nu(N) log p^m + sqrt(N) d(N)."""
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if m < 1:
        raise ValueError("the bound is stated for m >= 1")
    st = level_stats(N)
    return p ** (1.5 * m) * 2**st.nu * m * math.log(p) + math.sqrt(N) * st.dN


def lambert_w(x):
    """Principal branch of W, W(x) e^{W(x)} = x, for x >= -1/e."""
    x = float(x)
    branch = -math.exp(-1.0)
    if x < branch:
        if x > branch - 1e-15:
            return -1.0
        raise ValueError(f"W is real only for x >= -1/e, got {x}")
    if x == 0.0:
        return 0.0
    if x < -0.25:
        w = -1.0 + math.sqrt(max(2.0 * (1.0 + math.e * x), 0.0))
    else:
        w = math.log1p(x)
    lo, hi = -1.0, max(0.0, math.log1p(x)) if x > 0 else 0.0
    for _ in range(100):
        ew = math.exp(w)
        f = w * ew - x
        if f > 0:
            hi = min(hi, w)
        elif f < 0:
            lo = max(lo, w)
        else:
            return w
        wp1 = w + 1.0
        denom = ew * wp1 - (w + 2.0) * f / (2.0 * wp1) if wp1 != 0 else 0.0
        step = f / denom if denom else math.inf
        nxt = w - step
        if not lo <= nxt <= hi:
            nxt = 0.5 * (lo + hi)
        if abs(nxt - w) <= 4 * math.ulp(max(abs(w), 1e-300)):
            return nxt
        w = nxt
    return w


def choose_M(k, N, p):
    """Nearest integer to ((2/3) log kN + (1/3) log p) / log p, at least 1."""
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    lp = math.log(p)
    ratio = ((2.0 / 3.0) * math.log(k * N) + lp / 3.0) / lp
    return max(1, math.floor(ratio + 0.5))


def lambert_M(k, N, p):
    """Real M with M log p = W((kN)^{2/3} (log p)^{1/3})."""
    lp = math.log(p)
    return lambert_w((k * N) ** (2.0 / 3.0) * lp ** (1.0 / 3.0)) / lp


def default_dim(k, N):
    """dim S_k(1) exactly; for N > 1 the reporting heuristic (k - 1) psi(N) / 12."""
    if N == 1:
        return cusp_dimension(k)
    return (k - 1) * psi(N) / 12


def theorem1_value(dim, k, N, p):
    """dim^2 log p / log kN, the shape of the pair-count bound without its constant."""
    if k * N <= 2:
        raise ValueError("need kN >= 3 so that log kN > 0")
    if dim < 0:
        raise ValueError("dimension must be non-negative")
    return dim * dim * math.log(p) / math.log(k * N)


@dataclass
class KeyEstimate:
    M: int
    delta: Fraction
    dim: int
    exp_sums: list  # |T_n| for n = 0..M
    rhs: float  # sum |S_M(n)| |T_|n||^2 with the actual coefficients
    key_rhs: float  # the same with the coefficient bounds substituted
    zero_term: float
    nonzero_term: float
    pair_sum: float  # sum over (f, g) of chi_I(u_f - u_g)


def exponential_sums(normalized, M):
    u = np.asarray(normalized, dtype=float)
    n = np.arange(M + 1)
    return np.exp(2j * np.pi * np.multiply.outer(n, u)).sum(axis=1) if u.size else np.zeros(M + 1, complex)


def estimate_key(k, p, M, delta, angles):
    """Upper bound for the ordered pair count through the Selberg majorant of [-delta, delta]."""
    delta = Fraction(delta)
    if not 0 < delta <= Fraction(1, 2):
        raise ValueError(f"delta must lie in (0, 1/2], got {delta}")
    if M < 1:
        raise ValueError("degree M must be positive")
    S = selberg.build_majorant(-delta, delta, M)
    T = exponential_sums(angles.normalized, M)
    sq = np.abs(T) ** 2
    rhs = float(sum(abs(S.coeff(n)) * sq[abs(n)] for n in range(-M, M + 1)))
    d = angles.dim
    zero_term = float((2 * delta + Fraction(1, M + 1)) * d * d)
    nonzero = 0.0
    for n in range(1, M + 1):
        cap = 1.0 / (M + 1) + min(2 * float(delta), 1.0 / (math.pi * n))
        nonzero += 2 * cap * sq[n]
    u = np.asarray(angles.normalized, dtype=float)
    diffs = np.subtract.outer(u, u) if u.size else np.zeros((0, 0))
    pair_sum = float(np.sum(np.abs(diffs) <= float(delta)))
    return KeyEstimate(
        M=M,
        delta=delta,
        dim=d,
        exp_sums=[float(x) for x in np.abs(T)],
        rhs=rhs,
        key_rhs=zero_term + nonzero,
        zero_term=zero_term,
        nonzero_term=nonzero,
        pair_sum=pair_sum,
    )


def default_delta(M):
    """delta = 1/M, capped at 1/2 so that [-delta, delta] stays inside [-1/2, 1/2]."""
    return min(Fraction(1, M), Fraction(1, 2))


@dataclass
class BoundReport:
    k: int
    N: int
    p: int
    dim: float
    dim_exact: bool
    m_star: int
    lambert_m: float
    delta: Fraction
    lemma1_terms: list = field(default_factory=list)
    rhs: float | None = None
    key_rhs: float | None = None
    zero_term: float | None = None
    nonzero_term: float | None = None
    pair_count_exact: int | None = None
    theorem1_value: float | None = None

    def to_dict(self):
        d = asdict(self)
        d["delta"] = str(self.delta)
        return d


def bound_report(k, N, p, dim=None, M=None, delta=None, moments=True):
    """Assemble every term of the bound for (k, N, p); exact pair counts at level 1."""
    from . import angles as angles_mod
    from . import hecke, traceformula

    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if N % p == 0:
        raise ValueError(f"p = {p} divides the level {N}")
    if k < 2 or k % 2:
        raise ValueError(f"weight must be even and at least 2, got {k}")
    dim_exact = N == 1 and dim is None
    if dim is None:
        dim = default_dim(k, N)
    m_star = choose_M(k, N, p) if M is None else int(M)
    if m_star < 1:
        raise ValueError("M must be positive")
    delta = default_delta(m_star) if delta is None else Fraction(delta)
    rep = BoundReport(
        k=k,
        N=N,
        p=p,
        dim=dim,
        dim_exact=dim_exact,
        m_star=m_star,
        lambert_m=lambert_M(k, N, p),
        delta=delta,
    )
    for m in range(1, m_star + 1):
        term = {
            "m": m,
            "c_m": str(c_coeff(p, m)),
            "lemma1": lemma1_bound(k, N, p, m),
            "alt": alt_bound(k, N, p, m),
        }
        if N == 1 and k >= 4 and moments:
            dev = abs(traceformula.moment_sum(k, p, m) - float(c_coeff(p, m)) * cusp_dimension(k))
            term["deviation"] = dev
        rep.lemma1_terms.append(term)
    if N == 1 and k >= 4:
        A = angles_mod.angle_set(k, p)
        est = estimate_key(k, p, m_star, delta, A)
        rep.rhs, rep.key_rhs = est.rhs, est.key_rhs
        rep.zero_term, rep.nonzero_term = est.zero_term, est.nonzero_term
        rep.pair_count_exact = hecke.squarefree_pair_count(
            hecke.charpoly(hecke.hecke_matrix(k, p))
        ).pair_count
    if k * N >= 3:
        rep.theorem1_value = theorem1_value(dim, k, N, p)
    return rep
