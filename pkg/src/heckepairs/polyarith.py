"""Dense univariate polynomial arithmetic over Q and over F_q.

Polynomials are lists of coefficients from low to high degree.  Over Q the
coefficients are ints or Fractions; over F_q they are ints in [0, q).
"""

from __future__ import annotations

from fractions import Fraction


def strip(f):
    f = list(f)
    while f and f[-1] == 0:
        f.pop()
    return f


def degree(f):
    return len(strip(f)) - 1


def derivative(f):
    return [i * f[i] for i in range(1, len(f))]


def evaluate(f, x):
    acc = 0
    for c in reversed(f):
        acc = acc * x + c
    return acc


def sign_at(f, x):
    v = evaluate(f, x)
    return (v > 0) - (v < 0)


def monic(f):
    f = strip(f)
    lead = Fraction(f[-1])
    return [Fraction(c) / lead for c in f]


def divmod_q(f, g):
    """Quotient and remainder over Q."""
    f = [Fraction(c) for c in strip(f)]
    g = strip(g)
    if not g:
        raise ZeroDivisionError("polynomial division by zero")
    dg = len(g) - 1
    lead = Fraction(g[-1])
    if len(f) - 1 < dg:
        return [], f
    quot = [Fraction(0)] * (len(f) - dg)
    for i in range(len(f) - 1 - dg, -1, -1):
        c = f[i + dg] / lead
        quot[i] = c
        if c:
            for j in range(dg + 1):
                f[i + j] -= c * g[j]
    return strip(quot), strip(f[:dg])


def gcd_q(f, g):
    """Monic gcd over Q (empty list for gcd(0, 0))."""
    f, g = strip(f), strip(g)
    while g:
        f, g = g, divmod_q(f, g)[1]
    return monic(f) if f else []


def mul(f, g):
    if not f or not g:
        return []
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a:
            for j, b in enumerate(g):
                out[i + j] += a * b
    return out


def squarefree_decomposition(f):
    """Yun's algorithm: returns [(a_i, i)] with f = lc * prod a_i^i, a_i monic squarefree."""
    f = strip(f)
    if len(f) <= 1:
        return []
    out = []
    df = derivative(f)
    a = gcd_q(f, df)
    b = divmod_q(f, a)[0]
    c = divmod_q(df, a)[0]
    d = [x - y for x, y in _pad(c, derivative(b))]
    i = 1
    while degree(b) > 0:
        a = gcd_q(b, d)
        if degree(a) > 0:
            out.append((a, i))
        b = divmod_q(b, a)[0]
        c = divmod_q(d, a)[0]
        d = [x - y for x, y in _pad(c, derivative(b))]
        i += 1
    return out


def _pad(f, g):
    n = max(len(f), len(g))
    return zip(list(f) + [0] * (n - len(f)), list(g) + [0] * (n - len(g)))


def resultant(f, g):
    """Resultant over Q via the Euclidean remainder sequence."""
    f, g = strip(f), strip(g)
    if not f or not g:
        return Fraction(0)
    df, dg = len(f) - 1, len(g) - 1
    if dg == 0:
        return Fraction(g[0]) ** df
    if df == 0:
        return Fraction(f[0]) ** dg
    r = divmod_q(f, g)[1]
    if not r:
        return Fraction(0)
    dr = len(r) - 1
    sign = -1 if (df * dg) % 2 else 1
    return sign * Fraction(g[-1]) ** (df - dr) * resultant(g, r)


def discriminant(f):
    f = strip(f)
    n = len(f) - 1
    if n < 1:
        return Fraction(1)
    sign = -1 if (n * (n - 1) // 2) % 2 else 1
    return sign * resultant(f, derivative(f)) / Fraction(f[-1])


# ---------------------------------------------------------------- Sturm sequences


def sturm_sequence(f):
    seq = [[Fraction(c) for c in strip(f)], [Fraction(c) for c in derivative(strip(f))]]
    while degree(seq[-1]) > 0:
        r = divmod_q(seq[-2], seq[-1])[1]
        if not r:
            break
        seq.append([-c for c in r])
    return seq


def sign_variations(seq, x):
    prev = 0
    count = 0
    for p in seq:
        s = sign_at(p, x)
        if s == 0:
            continue
        if prev and s != prev:
            count += 1
        prev = s
    return count


def cauchy_bound(f):
    """1 + max |c_i / c_d|; every complex root has modulus below it."""
    f = strip(f)
    lead = abs(Fraction(f[-1]))
    return 1 + max((abs(Fraction(c)) / lead for c in f[:-1]), default=Fraction(0))


# ---------------------------------------------------------------- arithmetic mod q


def reduce_mod(f, q):
    return strip([c % q for c in f])


def _divmod_mod(f, g, q):
    f = list(f)
    dg = len(g) - 1
    inv = pow(g[-1], -1, q)
    if len(f) - 1 < dg:
        return [], f
    quot = [0] * (len(f) - dg)
    for i in range(len(f) - 1 - dg, -1, -1):
        c = f[i + dg] * inv % q
        quot[i] = c
        if c:
            for j in range(dg + 1):
                f[i + j] = (f[i + j] - c * g[j]) % q
    return strip(quot), strip(f[:dg])


def rem_mod(f, g, q):
    return _divmod_mod(f, g, q)[1]


def gcd_mod(f, g, q):
    f, g = strip(f), strip(g)
    while g:
        f, g = g, rem_mod(f, g, q)
    if not f:
        return []
    inv = pow(f[-1], -1, q)
    return [c * inv % q for c in f]


def mulmod(f, g, h, q):
    return rem_mod([c % q for c in mul(f, g)], h, q)


def powmod(f, e, h, q):
    result = [1]
    base = rem_mod(f, h, q)
    while e:
        if e & 1:
            result = mulmod(result, base, h, q)
        e >>= 1
        if e:
            base = mulmod(base, base, h, q)
    return result


def is_squarefree_mod(f, q):
    f = reduce_mod(f, q)
    return degree(gcd_mod(f, reduce_mod(derivative(f), q), q)) == 0


def factor_degrees_mod(f, q):
    """Degrees of the irreducible factors of f mod q (sorted, descending).

    f must be squarefree mod q with leading coefficient prime to q.  Uses
    distinct-degree factorization, which already determines the pattern.
    """
    f = reduce_mod(f, q)
    inv = pow(f[-1], -1, q)
    f = [c * inv % q for c in f]
    degrees = []
    x = [0, 1]
    h = x
    e = 1
    while degree(f) >= 2 * e:
        h = powmod(h, q, f, q)
        diff = strip(_sub_mod(h, x, q))
        g = gcd_mod(f, diff, q)
        dg = degree(g)
        if dg > 0:
            degrees.extend([e] * (dg // e))
            f = _divmod_mod(f, g, q)[0]
            h = rem_mod(h, f, q)
        e += 1
    if degree(f) > 0:
        degrees.append(degree(f))
    return sorted(degrees, reverse=True)


def _sub_mod(f, g, q):
    return [(a - b) % q for a, b in _pad(f, g)]
