import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from heckepairs import hecke, polyarith
from heckepairs.hecke import (
    CharPoly,
    HeckeMatrix,
    berkowitz,
    cayley_hamilton_residual,
    charpoly,
    full_symmetric_heuristic,
    hecke_matrix,
    hecke_power_matrix,
    irreducibility,
    squarefree_pair_count,
)
from heckepairs.qexpansion import miller_basis
from heckepairs.traceformula import trace

from oracles import charpoly_by_interpolation, eta_delta

TAU = eta_delta(40)


def test_weight_12_matrices_are_tau():
    assert hecke_matrix(12, 2).entries == ((-24,),)
    assert hecke_matrix(12, 1).entries == ((1,),)
    for n in range(1, 13):
        assert hecke_matrix(12, n).entries == ((TAU[n],),)


def test_weight_24_t2():
    m = hecke_matrix(24, 2)
    assert m.trace() == 1080
    # direct action on q-expansions at precision 5
    B = miller_basis(24, 5)
    for i, f in enumerate(B.forms):
        a = f.coeffs
        # a_1(T_2 f) = a_2, a_2(T_2 f) = a_4 + 2^23 a_1
        assert m.entries[i] == (a[2], a[4] + 2**23 * a[1])
    assert m.trace() == trace(24, 2)


def test_matrix_reconstructs_image():
    k, n = 36, 3
    B = miller_basis(k, 3 * n + 1)
    m = hecke_matrix(k, n, basis=B)
    for i, f in enumerate(B.forms):
        image = hecke.hecke_action(f.coeffs, k, n, m.dim + 1)
        rebuilt = [sum(m.entries[i][j] * B.forms[j].coeffs[c] for j in range(m.dim)) for c in range(m.dim + 1)]
        assert rebuilt == image


def test_hecke_matrix_rejects_zero():
    with pytest.raises(ValueError):
        hecke_matrix(12, 0)


def test_power_matrix():
    assert hecke_power_matrix(12, 2, 0).entries == ((1,),)
    assert hecke_power_matrix(12, 2, 1).entries == ((-24,),)
    assert hecke_power_matrix(12, 2, 2).entries == ((-1472,),)
    assert TAU[4] == -1472
    for m in range(6):
        assert hecke_power_matrix(12, 2, m).entries[0][0] == TAU[2**m]
    with pytest.raises(ValueError):
        hecke_power_matrix(12, 4, 2)


def test_power_matrix_matches_direct_action():
    for k in (24, 36, 48):
        for p, m in ((2, 3), (3, 2), (2, 4)):
            assert hecke_power_matrix(k, p, m) == hecke_matrix(k, p**m)


@pytest.mark.parametrize("k", range(12, 41, 2))
@pytest.mark.parametrize("p", [2, 3, 5, 7])
def test_trace_matches_trace_formula(k, p):
    assert hecke_matrix(k, p).trace() == trace(k, p)


def test_power_trace_matches_trace_formula():
    for k in (12, 24, 32, 40):
        for p in (2, 3):
            for m in range(0, 6):
                assert hecke_power_matrix(k, p, m).trace() == trace(k, p**m)


def test_charpoly_examples():
    assert charpoly(HeckeMatrix(12, 2, 1, ((-24,),))).coeffs == (24, 1)
    assert berkowitz([[1, 0], [0, 1]]) == [1, -2, 1]
    assert charpoly(hecke_matrix(24, 2)).coeffs == (-20468736, -1080, 1)


matrices = st.integers(1, 5).flatmap(
    lambda n: st.lists(st.lists(st.integers(-50, 50), min_size=n, max_size=n), min_size=n, max_size=n)
)


@settings(max_examples=80)
@given(matrices)
def test_berkowitz_against_interpolated_determinant(m):
    assert berkowitz(m) == charpoly_by_interpolation(m)


def test_charpoly_against_sympy_for_hecke():
    for k in (36, 48, 60):
        m = hecke_matrix(k, 2)
        x = sympy.symbols("x")
        ref = sympy.Matrix(m.entries).charpoly(x).all_coeffs()[::-1]
        assert list(charpoly(m).coeffs) == [int(c) for c in ref]


@pytest.mark.parametrize("k", range(12, 61, 2))
@pytest.mark.parametrize("p", [2, 3, 5])
def test_cayley_hamilton(k, p):
    m = hecke_matrix(k, p)
    cp = charpoly(m)
    assert cp.degree == m.dim
    assert all(x == 0 for row in cayley_hamilton_residual(m, cp) for x in row)


def test_pair_counts():
    r = squarefree_pair_count(CharPoly((24, 1)))
    assert (r.pair_count, r.squarefree) == (1, True)
    r = squarefree_pair_count(CharPoly((1, -2, 1)))
    assert (r.pair_count, r.squarefree) == (4, False)
    r = squarefree_pair_count(CharPoly((-20468736, -1080, 1)))
    assert (r.pair_count, r.squarefree) == (2, True)


roots = st.lists(st.integers(-6, 6), min_size=1, max_size=7)


@settings(max_examples=100)
@given(roots)
def test_pair_count_is_sum_of_squared_multiplicities(rs):
    coeffs = [1]
    for r in rs:
        coeffs = polyarith.mul(coeffs, [-r, 1])
    rep = squarefree_pair_count(CharPoly(tuple(coeffs)))
    mult = {r: rs.count(r) for r in rs}
    assert rep.pair_count == sum(v * v for v in mult.values())
    assert rep.pair_count >= len(rs)
    assert rep.squarefree == (rep.pair_count == len(rs))
    disc = polyarith.discriminant(coeffs)
    assert (disc != 0) == rep.squarefree


def test_discriminant_quadratic():
    assert hecke.discriminant(CharPoly((-20468736, -1080, 1))) == 1080**2 + 4 * 20468736


def test_irreducibility_examples():
    assert irreducibility(CharPoly((24, 1))) == "yes"
    assert irreducibility(CharPoly((-1, 0, 1))) == "no"
    assert irreducibility(CharPoly((-20468736, -1080, 1))) == "yes"
    assert irreducibility(CharPoly((1, -2, 1))) == "no"


def test_irreducible_quadratic_has_inert_prime():
    f = [-20468736, -1080, 1]
    q = next(q for q in hecke.primes_from(3) if hecke.discriminant(CharPoly(tuple(f))) % q
             and polyarith.factor_degrees_mod(f, q) == [2])
    # independent check: no root mod q at all
    assert all((x * x - 1080 * x - 20468736) % q for x in range(q))


small = st.lists(st.integers(-30, 30), min_size=2, max_size=4).map(lambda c: tuple(c) + (1,))


@settings(max_examples=150, deadline=None)
@given(small)
def test_irreducibility_small_degree_brute_force(coeffs):
    cp = CharPoly(coeffs)
    verdict = irreducibility(cp)
    assert verdict != "inconclusive"
    x = sympy.symbols("x")
    poly = sympy.Poly(list(reversed(coeffs)), x)
    assert (verdict == "yes") == poly.is_irreducible


def test_factor_degrees_mod_against_sympy():
    f = [3, 0, 7, -2, 1, 5, 1]  # degree 6
    x = sympy.symbols("x")
    for q in (5, 7, 11, 13, 17, 19, 23):
        if not polyarith.is_squarefree_mod(f, q):
            continue
        fac = sympy.factor_list(sympy.Poly(list(reversed(f)), x, modulus=q))[1]
        expected = sorted((g.degree() for g, e in fac for _ in range(e)), reverse=True)
        assert polyarith.factor_degrees_mod(f, q) == expected


def test_reducible_quartic_without_rational_roots():
    # (x^2 + 1)(x^2 + 2): no integer roots, degree patterns never exclude the 2+2 split
    cp = CharPoly((2, 0, 3, 0, 1))
    assert irreducibility(cp) == "inconclusive"


def test_full_symmetric():
    assert full_symmetric_heuristic(CharPoly((24, 1)))[0] == "certified_full_symmetric"
    verdict, wit = full_symmetric_heuristic(CharPoly((-20468736, -1080, 1)))
    assert verdict == "certified_full_symmetric"
    assert full_symmetric_heuristic(CharPoly((-1, 0, 1)))[0] == "inconclusive"


def test_full_symmetric_cubic_and_quintic():
    # x^3 - x - 1 has Galois group S_3, x^5 - x - 1 has S_5
    assert full_symmetric_heuristic(CharPoly((-1, -1, 0, 1)))[0] == "certified_full_symmetric"
    assert full_symmetric_heuristic(CharPoly((-1, -1, 0, 0, 0, 1)))[0] == "certified_full_symmetric"
    # x^3 - 3x - 1 is cyclic (A_3): never certified
    assert full_symmetric_heuristic(CharPoly((-1, -3, 0, 1)))[0] == "inconclusive"
    # x^4 + 1 has group V_4
    assert full_symmetric_heuristic(CharPoly((1, 0, 0, 0, 1)))[0] == "inconclusive"


def test_degree_seven_jordan_route():
    # x^7 - x - 1 has Galois group S_7
    verdict, wit = full_symmetric_heuristic(CharPoly((-1, -1, 0, 0, 0, 0, 0, 1)), prime_budget=60)
    assert verdict == "certified_full_symmetric"


@pytest.mark.parametrize("k", [24, 36, 48, 60])
def test_maeda_reports(k):
    rep = hecke.pair_count_report(k, 2)
    assert rep.squarefree and rep.irreducible == "yes"
    assert rep.pair_count == rep.dim
    assert rep.sn_galois == "certified_full_symmetric"


def test_charpoly_json():
    js = charpoly(hecke_matrix(24, 2)).to_json()
    assert js == {"degree": 2, "coeffs": ["-20468736", "-1080", "1"], "k": 24, "p": 2}


def test_integer_roots():
    assert hecke.integer_roots([6, -5, 1]) == [2, 3]
    assert hecke.integer_roots([0, 0, 1]) == [0]
    assert hecke.integer_roots([-2, 0, 1]) == []
