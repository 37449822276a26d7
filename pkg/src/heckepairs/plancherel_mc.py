"""Sampling from the p-adic Plancherel measure and square-root cancellation probes.

The measure on [0, pi] has density

    w_p(theta) = (2/pi) sin^2(theta) (p + 1) / ((p^{1/2} + p^{-1/2})^2 - 4 cos^2(theta))

and moments  int 2 cos(m theta) w_p = c_m  (c_0 = 1).  As p grows it tends to
the Sato-Tate density (2/pi) sin^2(theta).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.interpolate import PchipInterpolator

TABLE_NODES = 2**14
_GL_X, _GL_W = np.polynomial.legendre.leggauss(16)


def density(p, theta):
    theta = np.asarray(theta, dtype=float)
    s = math.sqrt(p)
    shift = (s + 1.0 / s) ** 2
    return (2.0 / math.pi) * np.sin(theta) ** 2 * (p + 1) / (shift - 4.0 * np.cos(theta) ** 2)


def integrate(fn, a, b, pieces=512):
    """Composite 16-point Gauss-Legendre quadrature of a vectorized function."""
    edges = np.linspace(a, b, pieces + 1)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[1:] + edges[:-1])
    x = mid[:, None] + half[:, None] * _GL_X[None, :]
    return float(np.sum(fn(x) * _GL_W[None, :] * half[:, None]))


def _cdf_table(p, nodes):
    # nodes cluster near 0 and pi, where the density vanishes quadratically
    s = np.linspace(0.0, 1.0, nodes + 1)
    theta = 0.5 * math.pi * (1.0 - np.cos(math.pi * s))
    lo, hi = theta[:-1], theta[1:]
    half = 0.5 * (hi - lo)
    mid = 0.5 * (hi + lo)
    x = mid[:, None] + half[:, None] * _GL_X[None, :]
    cells = np.sum(density(p, x) * _GL_W[None, :], axis=1) * half
    cdf = np.concatenate([[0.0], np.cumsum(cells)])
    return theta, cdf


@dataclass
class PlancherelSampler:
    p: int
    seed: int = 0
    nodes: int = TABLE_NODES
    mass: float = field(init=False)
    _inverse: PchipInterpolator = field(init=False, repr=False)

    def __post_init__(self):
        if self.p < 2:
            raise ValueError("p must be a prime >= 2")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be an unsigned 64-bit integer")
        theta, cdf = _cdf_table(self.p, self.nodes)
        self.mass = float(cdf[-1])
        cdf = cdf / cdf[-1]
        cdf[-1] = 1.0
        # of each run of equal values keep the last, so that (1, pi) survives
        keep = np.concatenate([np.diff(cdf) > 0, [True]])
        self._inverse = PchipInterpolator(cdf[keep], theta[keep])

    def density(self, theta):
        return density(self.p, theta) / self.mass

    def inverse_cdf(self, u):
        return np.clip(self._inverse(u), 0.0, math.pi)

    def generator(self, *spawn_key):
        seq = np.random.SeedSequence(entropy=self.seed, spawn_key=spawn_key)
        return np.random.Generator(np.random.Philox(seq))


def sample(sampler, count, *spawn_key):
    """`count` i.i.d. angles in [0, pi]; the stream depends only on (seed, spawn_key)."""
    if count < 1:
        raise ValueError("count must be positive")
    rng = sampler.generator(*spawn_key)
    return sampler.inverse_cdf(rng.random(count))


def moment(sampler, m):
    """Numerical integral of 2 cos(m theta) against the normalized density.

    m = 0 returns the total mass instead, matching the convention c_0 = 1.
    """
    if m < 0:
        raise ValueError("moment index must be non-negative")
    if m == 0:
        return integrate(sampler.density, 0.0, math.pi)
    return integrate(lambda t: 2 * np.cos(m * t) * sampler.density(t), 0.0, math.pi)


@dataclass
class ScalingResult:
    p: int
    m: int
    trials: int
    seed: int
    slope: float
    stderr: float
    per_dim: list
    deviations: dict = field(repr=False, default_factory=dict)

    def to_json(self):
        return {
            "p": self.p,
            "m": self.m,
            "trials": self.trials,
            "seed": self.seed,
            "slope": self.slope,
            "stderr": self.stderr,
            "per_dim": self.per_dim,
        }


def deviation_scaling(p, dims, trials, m, seed=0, sampler=None):
    """Fit the growth exponent of |sum 2 cos(m theta_i) - c_m D| over ensemble sizes D."""
    from .bounds import c_coeff

    dims = [int(d) for d in dims]
    if len(dims) < 2 or any(b <= a for a, b in zip(dims, dims[1:])):
        raise ValueError("dims must be strictly increasing with at least two entries")
    if dims[0] < 10:
        raise ValueError("ensemble sizes must be at least 10")
    if trials < 100:
        raise ValueError("need at least 100 trials per size")
    if m < 1:
        raise ValueError("moment index must be positive")
    sampler = PlancherelSampler(p, seed) if sampler is None else sampler
    cm = float(c_coeff(p, m))
    per_dim, devs, rms = [], {}, []
    for i, D in enumerate(dims):
        x = np.empty(trials)
        for t in range(trials):
            th = sample(sampler, D, i, t)
            x[t] = abs(math.fsum(2 * np.cos(m * th)) - cm * D)
        r = float(np.sqrt(np.mean(x**2)))
        rms.append(r)
        devs[D] = x
        per_dim.append({"dim": D, "rms": r})
    lx, ly = np.log(dims), np.log(rms)
    A = np.vstack([lx, np.ones_like(lx)]).T
    coef, res, *_ = np.linalg.lstsq(A, ly, rcond=None)
    n = len(dims)
    if n > 2:
        resid = ly - A @ coef
        s2 = float(resid @ resid) / (n - 2)
        stderr = math.sqrt(s2 / float(np.sum((lx - lx.mean()) ** 2)))
    else:
        stderr = 0.0
    return ScalingResult(p, m, trials, seed, float(coef[0]), stderr, per_dim, devs)
