import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from heckepairs import ConsistencyError, polyarith
from heckepairs.angles import (
    RootInterval,
    angle_of,
    angle_set,
    empirical_moment,
    isolate_roots,
    to_angles,
)
from heckepairs.hecke import CharPoly, charpoly, hecke_matrix
from heckepairs.traceformula import moment_sum, trace


def sqrt2_bracket(lo, hi):
    """True when lo <= sqrt(2) <= hi, decided by exact squares."""
    return (lo <= 0 or lo * lo <= 2) and hi > 0 and hi * hi >= 2


def test_isolate_linear():
    (iv,) = isolate_roots(CharPoly((24, 1)), Fraction(1, 1000))
    assert -24 in iv
    assert iv.width <= Fraction(1, 1000)


def test_isolate_sqrt2():
    tol = Fraction(1, 10**6)
    lo_iv, hi_iv = isolate_roots([-2, 0, 1], tol)
    assert sqrt2_bracket(hi_iv.lo, hi_iv.hi)
    assert sqrt2_bracket(-lo_iv.hi, -lo_iv.lo)
    assert hi_iv.width <= tol and lo_iv.width <= tol
    assert float(hi_iv.mid) == pytest.approx(1.414213, abs=1e-6)


def test_isolate_unit_roots():
    ivs = isolate_roots([-1, 0, 1], Fraction(1, 2**20))
    assert [-1 in ivs[0], 1 in ivs[1]] == [True, True]


def test_isolate_rejects_repeated_roots():
    with pytest.raises(ValueError, match="gcd"):
        isolate_roots([1, -2, 1])


int_roots = st.lists(st.integers(-40, 40), min_size=1, max_size=6, unique=True)


@settings(max_examples=80, deadline=None)
@given(int_roots, st.integers(1, 5))
def test_isolation_brackets_known_roots(rs, scale):
    # roots r/scale; polynomial prod (scale x - r)
    coeffs = [1]
    for r in rs:
        coeffs = polyarith.mul(coeffs, [-r, scale])
    tol = Fraction(1, 2**30)
    ivs = isolate_roots(coeffs, tol)
    assert len(ivs) == len(rs)
    for iv, r in zip(ivs, sorted(rs)):
        assert Fraction(r, scale) in iv
        assert iv.width <= tol
    for a, b in zip(ivs, ivs[1:]):
        assert a.hi < b.lo


def test_each_interval_isolates_one_root():
    cp = charpoly(hecke_matrix(60, 5))
    seq = polyarith.sturm_sequence(list(cp.coeffs))
    for iv in isolate_roots(cp):
        assert iv.width <= Fraction(1, 2**64)
        if iv.width:
            assert polyarith.sign_at(list(cp.coeffs), iv.lo) * polyarith.sign_at(list(cp.coeffs), iv.hi) < 0
            assert polyarith.sign_variations(seq, iv.lo) - polyarith.sign_variations(seq, iv.hi) == 1


def test_angle_examples():
    th, clamped = angle_of(12, 2, 0)
    assert th == pytest.approx(math.pi / 2) and not clamped
    A = to_angles(12, 2, [-24])
    assert A.thetas[0] == pytest.approx(math.acos(-0.2651650429), abs=1e-9)
    assert A.thetas[0] == pytest.approx(1.8392, abs=1e-4)
    assert A.normalized[0] == pytest.approx(0.29272, abs=1e-5)
    assert 2 * math.cos(A.thetas[0]) == pytest.approx(moment_sum(12, 2, 1), rel=1e-12)


def test_angle_boundary():
    # odd k makes the bound an integer: 2 * 2^6 = 128
    th, clamped = angle_of(13, 2, 128)
    assert th == 0.0
    th, clamped = angle_of(13, 2, -128)
    assert th == pytest.approx(math.pi)


def test_angle_clamp_and_error():
    bound = 2 * 2**5.5
    th, clamped = angle_of(12, 2, Fraction(bound * (1 + 1e-13)))
    assert clamped and th == 0.0
    with pytest.raises(ConsistencyError):
        angle_of(12, 2, Fraction(bound * (1 + 1e-9)))


@pytest.mark.parametrize("k", [12, 24, 36, 48, 60])
@pytest.mark.parametrize("p", [2, 3, 5, 7])
def test_angle_set_invariants(k, p):
    A = angle_set(k, p)
    assert A.dim == len(A.thetas)
    for th, u in zip(A.thetas, A.normalized):
        assert 0 <= th <= math.pi
        assert 0 <= u <= 0.5
    # larger eigenvalue, smaller angle
    assert list(A.thetas) == sorted(A.thetas, reverse=True)
    assert len(set(A.thetas)) == A.dim
    width = max((iv.width for iv in A.eigenvalues), default=0)
    assert abs(sum(iv.mid for iv in A.eigenvalues) - trace(k, p)) <= A.dim * width
    for iv in A.eigenvalues:
        assert iv.lo * iv.lo <= 4 * Fraction(p) ** (k - 1) or iv.hi * iv.hi <= 4 * Fraction(p) ** (k - 1)


def test_empirical_moment_conventions():
    empty = angle_set(14, 2)
    assert empty.dim == 0
    assert empirical_moment(empty, 3) == 0
    A = angle_set(12, 2)
    assert empirical_moment(A, 1) == pytest.approx(-0.5303300859, abs=1e-10)
    B = angle_set(36, 3)
    assert empirical_moment(B, 0) == 2 * B.dim
    assert empirical_moment(B, 0, zero_is_dim=True) == B.dim


def test_root_interval_decimal():
    iv = RootInterval(Fraction(-1, 3), Fraction(-1, 3))
    assert iv.decimal().startswith("-0.33333333333")
