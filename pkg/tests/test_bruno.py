import random
import time

import pytest

from brunonf.bruno import (a_condition, analyticity_certificate, bruno_decomposition, bruno_ideal,
                           bruno_ideal_normal_form, bruno_oracle_compare, chevalley_jet)
from brunonf.derivation import LogBasis, LogDerivation
from brunonf.errors import NonSplitSpectrum, NotInNormalForm
from brunonf.ideal import TruncatedIdeal, ideal_equal, pullback_ideal
from brunonf.scalars import CC, QQ, QQI
from brunonf.series import Automorphism, Series

from conftest import example_two, random_log_automorphism, random_resonant_field


def _vars(n, N, field):
    return [Series.var(i, n, N, field) for i in range(n)]


def test_example_two_ideal():
    t0 = time.perf_counter()
    rep = bruno_ideal(example_two(16), 16)
    elapsed = time.perf_counter() - t0
    x, y, z = _vars(3, 16, QQI)
    assert rep.phi.is_identity()
    assert rep.trace.is_trivial()
    assert rep.ideal_original.equals(TruncatedIdeal([x * y - z * z], 16), 16)
    assert rep.memberships["f_minus_f0"] and all(rep.memberships["g"])
    assert not rep.a_condition
    assert elapsed < 10


def test_example_two_decomposition_in_given_basis():
    d = example_two(8)
    basis = LogBasis([(QQI.I, -QQI.I, 0), (1, 1, 0), (0, 0, 1)], QQI)
    f, gs = bruno_decomposition(d, basis, 8)
    x, y, z = _vars(3, 8, QQI)
    h = x * y - z * z
    assert f.is_zero()
    assert gs[0].equals_mod(h, 8) and gs[1].equals_mod(h, 8)


def test_real_conjugate_pullback():
    N = 16
    B = bruno_ideal(example_two(N), N).ideal_original
    x, y, z = _vars(3, N + 1, QQI)
    phi = Automorphism([x + y.scale(QQI.I), x - y.scale(QQI.I), z], N + 1)
    t0 = time.perf_counter()
    P = pullback_ideal(B, phi, N)
    X, Y, Z = _vars(3, N, QQI)
    want = TruncatedIdeal([X * X + Y * Y - Z * Z], N)
    assert ideal_equal(P, want, N)
    assert time.perf_counter() - t0 < 5


def test_collinear_field_gives_zero_ideal():
    N = 8
    x, y = _vars(2, N, QQ)
    S = LogDerivation.diagonal((1, -1), N, QQ)
    d = S + S.smul(x * y + (x * y) * (x * y), N)
    assert bruno_ideal_normal_form(d, None, N).is_zero()
    assert a_condition(d, N)


def test_single_resonant_term():
    N = 8
    x, y = _vars(2, N, QQ)
    d = LogDerivation.diagonal((1, -1), N, QQ) + LogDerivation.monomial((1, 1), (1, 0), N, QQ)
    basis = LogBasis([(1, -1), (1, 0)], QQ)
    I = bruno_ideal_normal_form(d, basis, N)
    assert I.equals(TruncatedIdeal([x * y], N), N)
    # the canonical basis gives the same ideal
    assert I.equals(bruno_ideal_normal_form(d, None, N), N)


def test_not_in_normal_form_rejected():
    d = LogDerivation.diagonal((1, -1), 8, QQ) + LogDerivation.monomial((1, 0), (1, 0), 8, QQ)
    with pytest.raises(NotInNormalForm):
        bruno_ideal_normal_form(d, None, 8)


def test_linear_field_zero_ideal_identity_map():
    d = LogDerivation.diagonal((1, -1, 2), 8, QQ)
    rep = bruno_ideal(d, 8)
    assert rep.ideal_original.is_zero() and rep.phi.is_identity() and rep.a_condition


@pytest.mark.parametrize("basis_vectors", [
    [(1, -1, 0), (0, 1, 0), (0, 0, 1)],
    [(1, -1, 0), (1, 1, 0), (2, 0, -1)],
    [(1, -1, 0), (3, 0, 1), (0, 2, 5)],
])
def test_basis_independence(basis_vectors):
    N = 8
    rng = random.Random(7)
    lam = (1, -1, 0)
    rep = bruno_ideal(random_resonant_field(rng, lam, N), N, "graded")
    delta = rep.delta
    ref = bruno_ideal_normal_form(delta, None, N)
    assert ref.equals(bruno_ideal_normal_form(delta, LogBasis(basis_vectors, QQ), N), N)


def test_invariance_and_memberships(rng):
    N = 8
    for lam in [(1, -1), (2, -3), (1, -1, 0)]:
        d = random_resonant_field(rng, lam, N)
        rep = bruno_ideal(d, N)
        B = rep.ideal_original
        assert rep.memberships["f_minus_f0"] and all(rep.memberships["g"])
        for g in B.generators:
            assert B.contains(d.apply(g, N), N)
        assert rep.ideal_original.equals(rep.ideal_normalized.pullback(rep.phi, N), N)


def test_chevalley_single_resonant_term():
    N = 4
    S = LogDerivation.diagonal((1, -1), N, QQ)
    R = LogDerivation.monomial((1, 1), (1, 0), N, QQ)
    ss, nilp = chevalley_jet(S + R, N)
    assert ss.equals_mod(S, N) and nilp.equals_mod(R, N)


def test_chevalley_diagonal():
    d = LogDerivation.diagonal((2, -3, 1), 4, QQ)
    ss, nilp = chevalley_jet(d, 4)
    assert ss.equals_mod(d, 4) and nilp.is_zero()


def test_chevalley_example_two():
    N = 8
    d = example_two(N)
    ss, nilp = chevalley_jet(d, N)
    assert ss.equals_mod(LogDerivation.diagonal((QQI.I, -QQI.I, 0), N, QQI), N)
    x, y, z = _vars(3, N, QQI)
    R = LogDerivation.diagonal((1, 1, 1), N, QQI).smul(x * y - z * z, N)
    assert nilp.equals_mod(R, N)


def test_chevalley_nonnormal_input_matches_conjugated_linear_part(rng):
    # the semisimple part of a conjugated field is the conjugated linear part
    N = 6
    lam = (1, -1)
    S = LogDerivation.diagonal(lam, N, QQ)
    R = S.smul(Series.var(0, 2, N, QQ) * Series.var(1, 2, N, QQ), N)
    phi = random_log_automorphism(rng, 2, N + 1, QQ, degree=2)
    from brunonf.normalize import conjugate_by

    d = conjugate_by(S + R, phi, N)
    ss, nilp = chevalley_jet(d, N)
    assert ss.bracket(nilp, N).is_zero()
    assert ss.equals_mod(conjugate_by(S, phi, N), N)


def test_chevalley_needs_exact_scalars():
    d = LogDerivation.diagonal((1.0, -1.0), 4, CC)
    with pytest.raises(NonSplitSpectrum):
        chevalley_jet(d, 4)


def test_oracle_compare_example_two():
    rec = bruno_oracle_compare(example_two(8), 8)
    assert rec["equal"]
    assert rec["chevalley_dimension"] == rec["pullback_dimension"] > 0


def test_oracle_compare_linear():
    rec = bruno_oracle_compare(LogDerivation.diagonal((1, -1), 8, QQ), 8)
    assert rec["equal"] and rec["chevalley_dimension"] == 0


def test_oracle_compare_random_planar(rng):
    for _ in range(3):
        d = random_resonant_field(rng, (1, -1), 8)
        assert bruno_oracle_compare(d, 8)["equal"]


def test_certificate_example_two():
    I, verdict = analyticity_certificate(example_two(8), 8)
    x, y, z = _vars(3, 8, QQI)
    assert I.equals(TruncatedIdeal([x * y - z * z], 8), 8)
    assert verdict["normal_form"] and verdict["commutator_ideal_zero"]
    assert verdict["equals_bruno_ideal"] is True


def test_certificate_collinear_is_zero():
    N = 8
    x, y = _vars(2, N, QQ)
    S = LogDerivation.diagonal((1, -1), N, QQ)
    I, verdict = analyticity_certificate(S + S.smul(x * y, N), N)
    assert I.is_zero() and verdict["equals_bruno_ideal"] is True


def test_certificate_non_normal_form():
    N = 8
    d = LogDerivation.diagonal((1, -1), N, QQ) + LogDerivation.monomial((1, 0), (1, 0), N, QQ)
    I, verdict = analyticity_certificate(d, N)
    assert not verdict["normal_form"]
    assert not verdict["commutator_ideal_zero"]
    assert verdict["equals_bruno_ideal"] is None
    assert not I.is_zero()


def test_report_json_has_orientation():
    rep = bruno_ideal(example_two(8), 8)
    out = rep.to_json(["x", "y", "z"])
    assert out["automorphism_is_identity"]
    assert "pullback" in out["orientation"]
    assert out["bruno_generators_original"]
