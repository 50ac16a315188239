import pytest
import sympy as sp
from gmpy2 import mpq

from brunonf.derivation import (LogBasis, LogDerivation, from_vector_components, graded_split,
                                lie_bracket, log_basis_expand, random_log_derivation,
                                rnorm_derivation, wedge_coeff_ideal)
from brunonf.errors import NotLogarithmic, SingularBasis
from brunonf.ideal import TruncatedIdeal
from brunonf.scalars import QQ, QQI
from brunonf.series import Series, random_series

import oracles
from conftest import example_two


def test_from_vector_components_diagonal():
    x, y = [Series.var(i, 2, 5, QQI) for i in range(2)]
    d = from_vector_components([x.scale(QQI.I), y.scale(-QQI.I)])
    assert d == LogDerivation.diagonal((QQI.I, -QQI.I), 4, QQI)
    assert d.nonlinear_part().is_zero()


def test_not_logarithmic():
    x, y = [Series.var(i, 2, 5, QQ) for i in range(2)]
    with pytest.raises(NotLogarithmic) as exc:
        from_vector_components([y, Series.zero(2, 5, QQ)])
    assert exc.value.index == 0


def test_example_two_monomial_expansion():
    d = example_two(8)
    one = (QQI.one,) * 3
    want = (LogDerivation.diagonal((QQI.I, -QQI.I, QQI.zero), 8, QQI)
            + LogDerivation.monomial((1, 1, 0), one, 8, QQI)
            - LogDerivation.monomial((0, 0, 2), one, 8, QQI))
    assert d == want


def test_apply_examples():
    x, y = [Series.var(i, 2, 6, QQ) for i in range(2)]
    d = LogDerivation.monomial((1, 1), (2, 3), 6, QQ)
    assert d.apply(x * x) == (x ** 3 * y).scale(4)
    assert d.apply(Series.one(2, 6, QQ)).is_zero()
    X, Y, Z = [Series.var(i, 3, 6, QQI) for i in range(3)]
    S = LogDerivation.diagonal((QQI.I, -QQI.I, 0), 6, QQI)
    assert S.apply(X * Y - Z * Z).is_zero()


def test_bracket_examples():
    lam = LogDerivation.diagonal((1, 2), 5, QQ)
    mu = LogDerivation.diagonal((3, -1), 5, QQ)
    assert lie_bracket(lam, mu).is_zero()
    a = LogDerivation.monomial((1, 0), (0, 1), 5, QQ)
    b = LogDerivation.monomial((0, 1), (1, 0), 5, QQ)
    assert lie_bracket(a, b) == LogDerivation.monomial((1, 1), (1, -1), 5, QQ)


def test_apply_and_bracket_match_sympy(rng):
    xs = oracles.symbols(3)
    for _ in range(8):
        d1 = random_log_derivation(rng, 3, 6, QQ, 3, min_degree=0)
        d2 = random_log_derivation(rng, 3, 6, QQ, 3, min_degree=0)
        f = random_series(rng, 3, 6, QQ, 4)
        v1 = oracles.field_vector(d1, xs)
        v2 = oracles.field_vector(d2, xs)
        got = d1.apply(f, 6)
        want = oracles.apply_vector(v1, oracles.series_expr(f, xs), xs)
        assert oracles.same_series(got, want, xs)
        br = d1.bracket(d2)
        want_v = oracles.bracket_vector(v1, v2, xs)
        got_v = br.vector_components()
        for g, w in zip(got_v, want_v):
            assert oracles.same_series(g, w, xs, N=br.N + 1)


def test_example_two_log_basis():
    d = example_two(8)
    basis = LogBasis([(QQI.I, -QQI.I, 0), (1, 1, 0), (0, 0, 1)], QQI)
    g = log_basis_expand(d, basis)
    X, Y, Z = [Series.var(i, 3, 8, QQI) for i in range(3)]
    h = X * Y - Z * Z
    assert g[0] == Series.one(3, 8, QQI)
    assert g[1] == Series.zero(3, 8, QQI) + h
    assert g[2] == h


def test_basis_first_vector_and_roundtrip(rng):
    b = LogBasis.canonical((2, -3), QQ)
    S = LogDerivation.diagonal((2, -3), 5, QQ)
    g = b.expand(S)
    assert g[0] == Series.one(2, 5, QQ) and g[1].is_zero()
    for _ in range(10):
        d = random_log_derivation(rng, 2, 6, QQ, 4, min_degree=0)
        assert b.assemble(b.expand(d)) == d


def test_singular_basis():
    with pytest.raises(SingularBasis):
        LogBasis([(1, 1), (2, 2)], QQ)


def test_basis_norm_constants(rng):
    b = LogBasis([(1, -1), (1, 2)], QQ)
    assert b.c <= b.d
    for _ in range(30):
        d = random_log_derivation(rng, 2, 6, QQ, 4, min_degree=0)
        if d.is_zero():
            continue
        for r in (0.3, 1.0, 1.7):
            mid = sum(g.rnorm(r) * sum(abs(float(x)) for x in mu)
                      for g, mu in zip(b.expand(d), b.vectors))
            assert b.c * d.rnorm(r) <= mid * (1 + 1e-12)
            assert mid <= b.d * d.rnorm(r) * (1 + 1e-12)


def test_graded_split_examples():
    d = LogDerivation.monomial((1, 1), (1, 0), 5, QQ) + LogDerivation.monomial((2, 0), (0, 1), 5, QQ)
    res, non = graded_split(d, (1, -1))
    assert res == LogDerivation.monomial((1, 1), (1, 0), 5, QQ)
    assert non == LogDerivation.monomial((2, 0), (0, 1), 5, QQ)
    res, non = graded_split(LogDerivation.monomial((1, 1), (1, 0), 5, QQ), (1, -1))
    assert non.is_zero()


def test_graded_split_nonresonant_lambda(rng):
    lam = (QQI.one, QQI.I)
    d = random_log_derivation(rng, 2, 6, QQI, 4, imag=True)
    res, non = graded_split(d, lam)
    assert res.is_zero() and non == d


def test_wedge_examples():
    S = LogDerivation.diagonal((QQI.I, -QQI.I, 0), 8, QQI)
    X, Y, Z = [Series.var(i, 3, 8, QQI) for i in range(3)]
    h = X * Y - Z * Z
    R = LogDerivation.diagonal((1, 1, 1), 8, QQI).smul(h)
    I = wedge_coeff_ideal(S, R, 8)
    assert I.equals(TruncatedIdeal([h], 8))
    assert wedge_coeff_ideal(S, S.smul(1 + h), 8).is_zero()
    a = LogDerivation.diagonal((1, -1), 6, QQ)
    x, y = [Series.var(i, 2, 6, QQ) for i in range(2)]
    b = LogDerivation.monomial((1, 1), (1, 0), 6, QQ)
    assert wedge_coeff_ideal(a, b, 6).generators == [x * y]


def test_rnorm_examples():
    d = LogDerivation.monomial((1, 1), (2, -3), 5, QQ)
    assert rnorm_derivation(d, 1) == 5
    assert rnorm_derivation(LogDerivation.zero(2, 5, QQ), 2) == 0
    a = LogDerivation.monomial((1, 0), (0, 1), 5, QQ)
    b = LogDerivation.monomial((0, 1), (1, 0), 5, QQ)
    for r in (0.5, 1.0, 2.0):
        lhs = lie_bracket(a, b).rnorm(r)
        assert lhs <= (1 + 1) * a.rnorm(r) * b.rnorm(r)


def test_json_roundtrip(rng):
    d = random_log_derivation(rng, 3, 5, QQI, 3, imag=True, min_degree=0)
    assert LogDerivation.from_json(d.to_json(), QQI) == d
