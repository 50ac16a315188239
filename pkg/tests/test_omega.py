import math
from fractions import Fraction

import pytest

from brunonf.derivation import LogDerivation
from brunonf.errors import BudgetExceeded, ZeroLambda
from brunonf.normalize import SPerturbation, newton_normalize
from brunonf.omega import bruno_sum, estimate_diagnostics, omega_sequence, radius_schedule
from brunonf.scalars import GaussQ, QQ

from conftest import example_two
from oracles import brute_force_omega

PHI = (1 + math.sqrt(5)) / 2
GOLDEN = (1.0, -PHI)

# frozen from brute-force box enumeration
GOLDEN_TABLE = [
    (1.0, (1, 0)),
    (0.6180339887498949, (1, 1)),
    (0.3819660112501051, (2, 1)),
    (0.1458980337503153, (5, 3)),
    (0.09016994374947451, (8, 5)),
    (0.05572809000084078, (13, 8)),
    (0.021286236252208823, (34, 21)),
]


@pytest.mark.parametrize("mode", ["paper", "nonneg"])
@pytest.mark.parametrize("lam", [(1, -1), (GaussQ(1), GaussQ(0, 1))])
def test_unit_tables_certified(lam, mode):
    rep = omega_sequence(lam, 8, mode)
    assert all(e.value == 1.0 for e in rep.entries)
    assert rep.entries[0].argmin == (1, 0)
    verdict, sums = bruno_sum(rep)
    assert verdict == "SatisfiedCertified"
    assert all(s == 0.0 for s in sums)


@pytest.mark.parametrize("lam,allow_neg", [
    ((1, -1), True), ((1, -1), False), ((2, -3), True), ((1, 1j), True),
    ((1, Fraction(-1, 3), 2), True), ((0.7, -1.3), False), ((1, -PHI), True),
])
def test_against_box_enumeration(lam, allow_neg):
    K = 4 if len(lam) == 2 else 3
    mode = "paper" if allow_neg else "nonneg"
    got = omega_sequence(lam, K, mode).omegas
    want = brute_force_omega([complex(x) for x in lam], K, allow_neg)
    assert got == pytest.approx(want, rel=1e-12)


def test_golden_frozen_table():
    rep = omega_sequence(GOLDEN, 6)
    for e, (v, arg) in zip(rep.entries, GOLDEN_TABLE):
        assert e.value == pytest.approx(v, rel=1e-12)
        assert e.argmin == arg
    assert not rep.exact


def test_golden_sums_heuristic():
    rep = omega_sequence(GOLDEN, 6)
    verdict, sums = bruno_sum(rep)
    assert verdict == "SatisfiedHeuristic"
    assert all(b >= a for a, b in zip(sums, sums[1:]))
    incs = [b - a for a, b in zip(sums, sums[1:])]
    assert incs[-1] < incs[0]


def test_exact_values_are_exact():
    rep = omega_sequence((Fraction(1, 2), Fraction(-1, 3)), 3)
    # smallest nonzero |m1/2 - m2/3| is 1/6
    assert rep.entries[-1].squared == Fraction(1, 36)
    assert rep.entries[-1].to_json()["omega_exact"] == "1/6"


def test_gaussian_squared_modulus():
    rep = omega_sequence((GaussQ(1, 1), GaussQ(2, -1)), 2, "nonneg")
    js = rep.to_json()["table"][0]
    # candidates (1,0) -> |1+i|^2 = 2 and (0,1) -> |2-i|^2 = 5
    assert js["omega_squared"] == "2"
    assert "omega_exact" not in js


def test_monotone_and_modes():
    lam = (1, -0.37, 0.11)
    p = omega_sequence(lam, 4, "paper").omegas
    q = omega_sequence(lam, 4, "nonneg").omegas
    assert all(b <= a for a, b in zip(p, p[1:]))
    assert all(a <= b for a, b in zip(p, q))


def test_errors():
    with pytest.raises(BudgetExceeded):
        omega_sequence((1, -1), 13)
    with pytest.raises(ZeroLambda):
        omega_sequence((0, 0), 2)
    with pytest.raises(ZeroLambda):
        omega_sequence((0.0, 0.0), 2)
    with pytest.raises(ValueError):
        omega_sequence((1, -1), 2, "other")


def test_cap_is_configurable():
    rep = omega_sequence((1, -1), 5, cap=32)
    assert len(rep.entries) == 6


def test_radius_schedule_unit_omega():
    sched = radius_schedule([1.0] * 30, 3, 1, 1.0, steps=21)
    assert sched.factors[0] == pytest.approx((1 / 12) ** 1.5, rel=1e-12)
    assert all(r > 0 for r in sched.radii)
    assert all(b < a for a, b in zip(sched.radii, sched.radii[1:]))
    assert sched.limit_estimate > 0 and sched.positive_limit
    assert sched.limit_estimate < sched.radii[-1]


def test_radius_schedule_zero_rho():
    sched = radius_schedule([1.0] * 5, 3, 1, 0.0)
    assert all(r == 0.0 for r in sched.radii)
    assert not sched.positive_limit


def test_radius_schedule_rejects_small_C():
    with pytest.raises(ValueError):
        radius_schedule([1.0], 2.0)


def test_radius_schedule_golden_positive():
    rep = omega_sequence(GOLDEN, 6)
    v, _ = bruno_sum(rep)
    sched = radius_schedule(rep.omegas, omega_summable=v != "Undetermined")
    assert sched.positive_limit and sched.limit_estimate > 0


def test_diagnostics_example_two_trivial():
    d = example_two(8)
    _, _, trace = newton_normalize(d, 8)
    rep = estimate_diagnostics(d, trace)
    assert all(s["U_bound_holds"] and s["order_window_holds"] for s in rep["steps"])
    assert all(float(s["norm_U"]) == 0.0 for s in rep["steps"])


def test_diagnostics_single_nonresonant_term():
    N = 8
    d = LogDerivation.diagonal((1, -1), N, QQ) + LogDerivation.monomial((1, 0), (0, 1), N, QQ)
    _, _, trace = newton_normalize(d, N)
    rep = estimate_diagnostics(d, trace)
    step0 = rep["steps"][0]
    assert math.isfinite(float(step0["norm_U"])) and float(step0["norm_U"]) > 0
    assert float(step0["bound_U"]) == 1.0
    assert rep["scaling_honored"]


def test_diagnostics_rescaling():
    N = 8
    R = LogDerivation.monomial((1, 1), (5, 0), N, QQ) + LogDerivation.monomial((2, 0), (0, 7), N, QQ)
    d = LogDerivation.diagonal((1, -1), N, QQ) + R
    _, _, trace = newton_normalize(d, N)
    rep = estimate_diagnostics(SPerturbation(d), trace)
    t = float(rep["scale_factor"])
    assert 0 < t < 1
    assert float(rep["scaled_norm_R"]) <= float(rep["Delta"]) * (1 + 1e-9)
    assert rep["scaling_honored"]
