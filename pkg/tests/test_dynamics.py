import math
import random

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from toricdyn.dynamics import (
    MonomialMap,
    Pipeline,
    cremona_degrees,
    degree_growth_pn,
    dynamical_degrees,
    fit_growth,
    pn_degrees,
    pullback_matrices_pipeline,
    pullback_matrix_closed,
    pullback_matrix_pipeline,
    random_monomial_map,
)
from toricdyn.errors import DimensionMismatchError, SingularMatrixError
from toricdyn.fans import fan_p1n
from toricdyn.linalg import det, identity, mat_pow

PHI = (1 + 5 ** 0.5) / 2


def divisor_pullback_oracle(psi):
    """k = 1 on (P^1)^n: f^*H_j = sum_i deg_{x_i}(x_j o f) H_i with x_j o f = prod_i x_i^psi[j][i]."""
    n = len(psi)
    xs = sympy.symbols(f"x0:{n}")
    out = [[0] * n for _ in range(n)]
    for j in range(n):
        expr = sympy.together(sympy.Mul(*[xs[i] ** psi[j][i] for i in range(n)]))
        num, den = sympy.fraction(expr)
        for i in range(n):
            out[i][j] = max(sympy.degree(num, xs[i]), sympy.degree(den, xs[i]))
    # basis of A^1 is c_alpha with alpha = all but one index; c_alpha = H_i with {i} = alpha'
    order = sorted(range(n), reverse=True)
    return tuple(tuple(out[i][j] for j in order) for i in order)


def test_monomial_map_validation():
    with pytest.raises(SingularMatrixError):
        MonomialMap([[1, 2], [2, 4]])
    with pytest.raises(DimensionMismatchError):
        MonomialMap([[1, 2, 3], [4, 5, 6]])
    assert MonomialMap([[1, 1], [1, 0]]).iterate(3).psi == mat_pow([[1, 1], [1, 0]], 3)


# -- pullback matrices ------------------------------------------------------------------------

def test_closed_form_examples():
    for k in range(4):
        m = pullback_matrix_closed(MonomialMap(identity(3)), k)
        assert m.entries == identity(math.comb(3, k))
    assert pullback_matrix_closed(MonomialMap([[2, 0], [0, 3]]), 1).entries == ((3, 0), (0, 2))
    assert pullback_matrix_closed(MonomialMap([[2, 1], [1, 1]]), 1).entries == ((1, 1), (1, 2))
    f = MonomialMap([[1, 2, 0], [0, 1, 5], [3, 0, 1]])
    assert pullback_matrix_closed(f, 3).entries == ((abs(det(f.psi)),),)
    assert pullback_matrix_closed(f, 0).entries == ((1,),)
    assert pullback_matrix_closed(f, 1).basis == ((0, 1), (0, 2), (1, 2))


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 4).flatmap(lambda n: st.lists(
    st.lists(st.integers(-4, 4), min_size=n, max_size=n), min_size=n, max_size=n)).filter(lambda m: det(m) != 0))
def test_closed_form_matches_divisor_oracle(psi):
    assert pullback_matrix_closed(MonomialMap(psi), 1).entries == divisor_pullback_oracle(psi)


def test_pipeline_examples():
    for k in range(3):
        assert pullback_matrix_pipeline(MonomialMap(identity(2)), k).entries == identity(math.comb(2, k))
    assert pullback_matrix_pipeline(MonomialMap([[2, 0], [0, 3]]), 1).entries == ((3, 0), (0, 2))
    f = MonomialMap([[2, 1], [1, 1]])
    assert pullback_matrix_pipeline(f, 1) == pullback_matrix_closed(f, 1)


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 10**6), st.sampled_from([2, 3]))
def test_pipeline_equals_closed_form(seed, n):
    f = random_monomial_map(random.Random(seed), n, 3)
    for m in pullback_matrices_pipeline(f, seed=seed % 7):
        assert m == pullback_matrix_closed(f, m.k)


def test_pipeline_reseeds_on_degenerate_vector():
    f = MonomialMap([[2, 1], [1, 1]])
    pipe = Pipeline.build(f.psi, fan_p1n(2), 0)
    pipe.v = type(pipe.v)((0, 0), 0, 1)
    assert pullback_matrix_pipeline(f, 1, pipeline=pipe) == pullback_matrix_closed(f, 1)
    assert pipe.v.v != (0, 0)


def test_pipeline_four_dimensional():
    f = MonomialMap([[1, 1, 0, 0], [0, 1, 1, 0], [0, 0, 1, 1], [1, 0, 0, -1]])
    for m in pullback_matrices_pipeline(f):
        assert m == pullback_matrix_closed(f, m.k)


# -- degrees and entropy ----------------------------------------------------------------------

def test_dynamical_degree_examples():
    r = dynamical_degrees(MonomialMap([[2, 0], [0, 3]]))
    assert r.lambdas == pytest.approx([1, 3, 6], rel=1e-12)
    assert r.entropy == pytest.approx(math.log(6), rel=1e-12)
    r = dynamical_degrees(MonomialMap([[1, 1], [1, 0]]))
    assert r.lambdas[1] == pytest.approx(PHI, rel=1e-12)
    assert r.lambdas[2] == pytest.approx(1, rel=1e-12)
    assert r.entropy == pytest.approx(math.log(PHI), rel=1e-12)
    r = dynamical_degrees(MonomialMap(identity(3)))
    assert r.lambdas == pytest.approx([1, 1, 1, 1]) and r.entropy == 0
    assert sorted(r.norm_growth) == [0, 1, 2, 3] and len(r.norm_growth[1]) == 30
    with pytest.raises(SingularMatrixError):
        dynamical_degrees(MonomialMap([[1, 2], [2, 4]]))


maps = st.tuples(st.integers(0, 10**6), st.sampled_from([2, 3])).map(
    lambda t: random_monomial_map(random.Random(t[0]), t[1], 3))


@settings(max_examples=40, deadline=None)
@given(maps)
def test_degree_invariants(f):
    r = dynamical_degrees(f, lmax=0)
    n = f.n
    assert r.lambdas[0] == 1
    assert r.lambdas[n] == pytest.approx(abs(det(f.psi)), rel=1e-9)
    for k in range(1, n):
        assert r.lambdas[k] ** 2 >= r.lambdas[k - 1] * r.lambdas[k + 1] * (1 - 1e-9)
    assert r.entropy == pytest.approx(max(math.log(x) for x in r.lambdas), rel=1e-9, abs=1e-12)


@settings(max_examples=25, deadline=None)
@given(maps, st.integers(1, 5))
def test_degrees_of_iterates(f, ell):
    base = dynamical_degrees(f, lmax=0).lambdas
    it = dynamical_degrees(f.iterate(ell), lmax=0).lambdas
    assert it == pytest.approx([x ** ell for x in base], rel=1e-9)


# -- Cremona involution ---------------------------------------------------------------------------

@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_cremona_degrees(n):
    degs = cremona_degrees(n)
    assert degs == [math.comb(n, k) for k in range(n + 1)]
    assert degs == degs[::-1]


def test_cremona_independent_of_seed():
    assert cremona_degrees(3, seed=5) == cremona_degrees(3, seed=0)


def test_pn_degrees_of_diagonal_map():
    # deg_k of (x^2, y^3) on P^2: pulling back a general line gives degree 3, a point 6
    assert pn_degrees([[2, 0], [0, 3]]) == [1, 3, 6]


# -- degree growth ------------------------------------------------------------------------------

def test_growth_examples():
    fit = degree_growth_pn(MonomialMap([[-1, 0], [0, -1]]), 1)
    assert fit.values == [2, 1] * 4 and fit.degenerate
    fit = degree_growth_pn(MonomialMap([[2, 0], [0, 3]]), 1, lmax=10)
    assert fit.ratios()[-1] == pytest.approx(3, rel=0.05)
    assert not fit.degenerate and 0 <= fit.order <= 2
    fit = degree_growth_pn(MonomialMap(identity(2)), 1, lmax=4)
    assert fit.values == [1, 1, 1, 1]
    with pytest.raises(ValueError):
        degree_growth_pn(MonomialMap(identity(2)), 1, lmax=2)


def test_growth_default_horizon():
    assert len(degree_growth_pn(MonomialMap(identity(3)), 2).values) == 5


def test_fit_recovers_polynomial_factor():
    values = [round(ell ** 2 * 2 ** ell * 7) for ell in range(1, 13)]
    fit = fit_growth(1, 3, values, 2.0)
    assert fit.exponent == pytest.approx(2, abs=1e-6) and fit.order == 2
    assert fit.constant == pytest.approx(math.log(7), abs=1e-6)


@settings(max_examples=10, deadline=None)
@given(st.integers(0, 10**6))
def test_growth_sandwich(seed):
    f = random_monomial_map(random.Random(seed), 2, 3)
    fit = degree_growth_pn(f, 1, lmax=8)
    assert all(v > 0 for v in fit.values)
    assert fit.band(start=5) <= 10
    assert 0 <= fit.order <= 2
