import json
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from meanlab.characterize import (FEInstance, Tolerances, Verdict, check_first_integral,
                                  check_second_order_identity, classify_symmetric,
                                  classify_weighted, construct_from_kernel,
                                  construct_from_polynomial, fe_residual,
                                  weighted_equality_oracle)
from meanlab.errors import (ConfigError, DomainSplitError, EvaluationError,
                            FunctionVanishesError, PositivityError, PreconditionError)
from meanlab.exprlang import GeneratorFunction, as_generator
from meanlab.means import GeneratorPair, Interval, WeightedSample, bajraktarevic_mean
from meanlab.wronskians import QuadraticPolynomial, phi_psi

from conftest import central_difference


# -- functional equation residual ---------------------------------------------------

def test_affine_phi_constant_f_is_exact():
    r = fe_residual(FEInstance("x", "1", 0.37, Interval(0, 1)))
    # zero up to the rounding of t x + (1 - t) y
    assert r.max_residual <= 4 * np.finfo(float).eps


@pytest.mark.parametrize("t", [0.2, 0.5, 0.81])
def test_reciprocal_pair(t):
    r = fe_residual(FEInstance("-1/x", "-x", t, Interval(-5, -0.1)))
    assert r.max_residual <= 1e-12
    assert r.gamma_estimate == pytest.approx(1.0, abs=1e-12)
    assert r.gamma_variance <= 1e-12


def test_exp_midpoint_convexity_gap():
    # oracle: the unnormalized residual at (x, y) = corner points is the convexity gap of exp
    r = fe_residual(FEInstance("exp(x)", "1", 0.5, Interval(0, 1)))
    assert r.max_residual > 1e-3
    xs = r.grid
    gap = abs(math.exp(0.5 * (xs[0] + xs[-1])) - 0.5 * (math.exp(xs[0]) + math.exp(xs[-1])))
    assert float(np.max(np.abs(r.residual_grid))) == pytest.approx(gap, rel=1e-12)


def test_trivial_zero_f():
    r = fe_residual(FEInstance("exp(x)", "0", 0.3, Interval(0, 1)))
    assert r.max_residual == 0.0 and r.trivial
    assert r.to_dict()["gamma_estimate"] is None


def test_grid_minimum():
    with pytest.raises(PreconditionError):
        fe_residual(FEInstance("x", "1", 0.5, Interval(0, 1)), grid_n=8)


@pytest.mark.parametrize("t", [0.0, 1.0, -0.2, 1.5])
def test_t_must_be_open_unit(t):
    with pytest.raises(PreconditionError):
        FEInstance("x", "1", t, Interval(0, 1))


def test_evaluation_error_carries_coordinates():
    with pytest.raises(EvaluationError) as info:
        fe_residual(FEInstance("x", "log(x - 0.5)", 0.5, Interval(0, 1)))
    assert info.value.coordinates


def test_report_dict_keys_and_json():
    d = fe_residual(FEInstance("tan(x)", "cos(x)", 0.5, Interval(-1.2, 1.2))).to_dict()
    assert set(d) == {"schema_version", "max_residual", "gamma_estimate", "gamma_variance"}
    json.dumps(d, allow_nan=False)


# -- first integral --------------------------------------------------------------

def test_first_integral_examples():
    g, ok = check_first_integral(FEInstance("tan(x)", "cos(x)", 0.5, Interval(-1.2, 1.2)))
    assert ok and g == pytest.approx(1.0, rel=1e-12)
    g, ok = check_first_integral(FEInstance("x", "2", 0.5, Interval(0, 1)))
    assert ok and g == 4.0
    with pytest.raises(FunctionVanishesError):
        check_first_integral(FEInstance("x", "x", 0.5, Interval(-1, 1)))


def test_first_integral_rejects_drifting_product():
    _, ok = check_first_integral(FEInstance("exp(x)", "1", 0.5, Interval(0, 1)))
    assert not ok


def test_second_order_identity_examples():
    grid = np.linspace(-1.2, 1.2, 33)
    assert check_second_order_identity("cos(x)", "tan(x)", grid)
    assert check_second_order_identity("1", "x", np.linspace(0, 1, 9))
    assert not check_second_order_identity("1", "x^2", np.linspace(1, 2, 9))


# -- constructors ------------------------------------------------------------------

def test_kernel_constructor_sine_cotangent():
    inst = construct_from_kernel(-1, 1, 0, 0, 1, Interval(0.1, math.pi - 0.1))
    for x in (0.3, 1.0, 2.5):
        assert inst.f(x) == pytest.approx(math.sin(x), rel=1e-14)
        assert inst.phi(x) == pytest.approx(1 / math.tan(x), rel=1e-13)
    assert fe_residual(inst).max_residual <= 1e-10


def test_kernel_constructor_quasi_arithmetic_case():
    inst = construct_from_kernel(0, 0, 1, 1, 0, Interval(0, 1))
    assert inst.f(0.4) == 1.0 and inst.phi(0.4) == pytest.approx(0.4)
    for t in (0.2, 0.5, 0.9):
        assert fe_residual(inst.with_t(t)).max_residual <= 1e-10


def test_kernel_constructor_hyperbolic():
    inst = construct_from_kernel(1, 1, 0, 0, 1, Interval(0.5, 2))
    assert inst.phi(1.2) == pytest.approx(1 / math.tanh(1.2), rel=1e-13)
    assert fe_residual(inst).max_residual <= 1e-10


def test_kernel_constructor_stores_half():
    assert construct_from_kernel(-1, 1, 0, 0, 1, Interval(0.1, 1), t=0.5 + 1e-12).t == 0.5


def test_kernel_constructor_errors():
    with pytest.raises(PreconditionError):
        construct_from_kernel(1, 1, 1, 2, 2, Interval(0.5, 2))
    with pytest.raises(PreconditionError):
        construct_from_kernel(-1, 1, 0, 0, 1, Interval(0.1, 1), t=0.3)
    with pytest.raises(DomainSplitError) as info:
        construct_from_kernel(-1, 1, 0, 0, 1, Interval(-1, 1))
    assert info.value.zeros[0] == pytest.approx(0.0, abs=1e-12)


def test_asymmetric_weight_breaks_trigonometric_solution():
    inst = construct_from_kernel(-1, 1, 0, 0, 1, Interval(0.1, math.pi - 0.1))
    assert fe_residual(inst.with_t(0.3)).max_residual > 1e-4


@pytest.mark.parametrize("p", [-2, -1, 0, 1, 2])
@pytest.mark.parametrize("coef", [(1, 0, 0, 1), (1, 1, 0, 1), (2, -1, 1, 1)])
def test_constructed_f_solves_kernel_equation(p, coef):
    inst = construct_from_kernel(p, *coef, Interval(1.0, 1.5))
    grid = inst.domain.grid(17)
    assert check_second_order_identity(inst.f, inst.phi, grid)
    f = lambda v: inst.f(v)
    ratios = [central_difference(f, x, 2) / f(x) for x in grid]
    assert np.ptp(ratios) <= 1e-5
    assert np.median(ratios) == pytest.approx(p, abs=1e-5)


def test_polynomial_constructor_matches_closed_forms():
    inst = construct_from_polynomial(QuadraticPolynomial(1, 0, 1), Interval(-3, 3))
    lo, hi = inst.source.inset()
    assert (inst.domain.lo, inst.domain.hi) == pytest.approx((math.atan(lo), math.atan(hi)), abs=1e-12)
    for u in np.linspace(-2.9, 2.9, 13):
        assert inst.psi(u) == pytest.approx(math.atan(u), abs=1e-10)
    for v in inst.domain.grid(33):
        assert inst.phi(v) == pytest.approx(math.tan(v), abs=1e-9)
        assert inst.f(v) == pytest.approx(math.cos(v), abs=1e-10)
    assert inst.kernel_parameter() == pytest.approx(-1.0, abs=1e-6)
    assert fe_residual(inst, 24).max_residual <= 1e-8
    g, ok = check_first_integral(inst, 33)
    assert ok and g == pytest.approx(1.0, abs=1e-8)


def test_polynomial_constructor_agrees_with_kernel_constructor():
    a = construct_from_polynomial(QuadraticPolynomial(1, 0, 1), Interval(-3, 3))
    # tan = sin/cos: f = cos = C, f·φ = sin = S
    b = construct_from_kernel(-1, 0, 1, 1, 0, Interval(-math.atan(3), math.atan(3)))
    for v in a.domain.grid(9):
        assert a.phi(v) == pytest.approx(b.phi(v), abs=1e-8)
        assert a.f(v) == pytest.approx(b.f(v), abs=1e-8)


def test_constant_polynomial_gives_affine_phi():
    inst = construct_from_polynomial(QuadraticPolynomial(1, 0, 0), Interval(0, 1), t=0.3)
    for v in inst.domain.grid(9):
        assert inst.phi(v) == pytest.approx(v + 0.5, abs=1e-12)
        assert inst.f(v) == pytest.approx(1.0, abs=1e-12)


def test_square_polynomial_at_asymmetric_weight():
    inst = construct_from_polynomial(QuadraticPolynomial(0, 0, 1), Interval(0.5, 4), t=0.3)
    # ψ(u) = -1/u shifted so ψ(2.25) = 0
    shift = 1 / 2.25
    for v in inst.domain.grid(9):
        assert inst.phi(v) == pytest.approx(-1 / (v - shift), rel=1e-9)
        assert inst.f(v) == pytest.approx(-(v - shift), rel=1e-9)
    assert fe_residual(inst, 20).max_residual <= 1e-8


def test_polynomial_constructor_errors():
    with pytest.raises(PositivityError) as info:
        construct_from_polynomial(QuadraticPolynomial(-1, 0, 1), Interval(0, 3))
    assert 0 < info.value.point < 3
    with pytest.raises(PreconditionError):
        construct_from_polynomial(QuadraticPolynomial(1, 0, 1), Interval(-1, 1), t=0.3)


# -- weighted equality oracle ---------------------------------------------------

I7 = Interval(-0.7, 0.7)


def test_oracle_trigonometric():
    r = weighted_equality_oracle(GeneratorPair("cos(x)", "sin(x)", I7), "-x", 0.5)
    assert r.passed and r.p == pytest.approx(-1.0, abs=1e-8)


@pytest.mark.parametrize("t", [0.3, 0.5])
def test_oracle_arithmetic(t):
    r = weighted_equality_oracle(GeneratorPair("1", "x", Interval(0, 1)), "x", t)
    assert r.passed and r.p == pytest.approx(0.0, abs=1e-8)


def test_oracle_rejects_exp():
    r = weighted_equality_oracle(GeneratorPair("1", "exp(x)", Interval(0, 1)), "x", 0.5)
    assert not r.passed
    # oracle: the two means at (0, 1) differ by direct evaluation
    b = bajraktarevic_mean(GeneratorPair("1", "exp(x)", Interval(0, 1)), WeightedSample([0, 1]))
    assert abs(b - 0.5) > 1e-2


def test_oracle_search_fallback_for_values_only():
    f = GeneratorFunction(np.cos, differentiable=False)
    g = GeneratorFunction(np.sin, differentiable=False)
    r = weighted_equality_oracle(GeneratorPair(f, g, I7), "-x", 0.5)
    assert r.passed and r.p_method == "search"
    assert r.p == pytest.approx(-1.0, abs=1e-4)


# -- classification ----------------------------------------------------------------

SYMMETRIC_KEYS = ("quadratic_form", "primitive_mean", "wronskian_cubic", "psi_equation")


def test_classify_cos_sin():
    pair = GeneratorPair("cos(x)", "sin(x)", I7)
    r = classify_symmetric(pair)
    assert r.verdict is Verdict.SYMMETRIC_QA
    assert r.quadratic_witness == pytest.approx((1, 0, 1), abs=1e-8)
    assert r.delta == pytest.approx(1.0, abs=1e-8)
    assert r.p == pytest.approx(-1.0, abs=1e-8)
    for x in pair.domain.grid(9):
        phi, psi = phi_psi(pair.f, pair.g, x)
        assert abs(phi) <= 1e-8 and abs(psi + 1) <= 1e-8
    # h' = W10 = -1
    xs, hs = np.array(r.h).T
    assert np.allclose(hs, -xs, atol=1e-10)


def test_classify_log():
    r = classify_symmetric(GeneratorPair("1", "log(x)", Interval(1, 3)))
    assert r.verdict is Verdict.SYMMETRIC_QA
    assert r.quadratic_witness == pytest.approx((1, 0, 0), abs=1e-8)
    assert r.delta == 0.0


def test_constant_f_with_cubic_g_is_quasi_arithmetic():
    # with f ≡ 1 the quadratic form has the exact witness (1, 0, 0) and B = A_g
    pair = GeneratorPair("1", "x + x^3", Interval(0, 1))
    r = classify_symmetric(pair)
    assert r.residuals["quadratic_form"].residual <= 1e-12
    assert r.verdict is Verdict.SYMMETRIC_QA
    assert classify_weighted(pair).verdict is Verdict.WEIGHTED_QA


CATALOG = [
    (("cos(x)", "sin(x)", I7), Verdict.SYMMETRIC_QA),
    (("1", "log(x)", Interval(1, 3)), Verdict.WEIGHTED_QA),
    (("1", "exp(x)", Interval(0, 1)), Verdict.WEIGHTED_QA),
    (("1", "x", Interval(0, 1)), Verdict.WEIGHTED_QA),
    (("sinh(x)", "cosh(x)", Interval(0.5, 2)), Verdict.SYMMETRIC_QA),
    (("1", "x + x^3", Interval(0, 1)), Verdict.WEIGHTED_QA),
    (("x", "x^2", Interval(0.5, 2)), Verdict.NOT_QA),
    (("exp(x)", "x*exp(x)", Interval(-1, 1)), Verdict.NOT_QA),
    (("1/(1 + x)", "x/(1 + x)", Interval(0, 1)), Verdict.WEIGHTED_QA),
]


@pytest.mark.parametrize("args, expected", CATALOG, ids=[f"{c[0][0]},{c[0][1]}" for c in CATALOG])
def test_catalog_verdicts_and_concordance(args, expected):
    r = classify_weighted(GeneratorPair(*args))
    assert r.verdict is expected
    verdicts = {r.accepted(k) for k in SYMMETRIC_KEYS}
    assert len(verdicts) == 1
    # weighted implies symmetric
    if r.verdict is Verdict.WEIGHTED_QA:
        assert r.symmetric_verdict is Verdict.SYMMETRIC_QA


def test_sinh_cosh_parameter():
    r = classify_symmetric(GeneratorPair("sinh(x)", "cosh(x)", Interval(0.5, 2)))
    assert r.p == pytest.approx(1.0, abs=1e-8)
    assert r.residuals["wronskian_cubic"].details["discriminant_gap"] <= 1e-8


def test_weighted_separation_for_cos_sin():
    r = classify_weighted(GeneratorPair("cos(x)", "sin(x)", I7))
    assert r.verdict is Verdict.SYMMETRIC_QA
    assert r.residuals["linear_form"].residual > 1e-3
    assert not r.residuals["psi_vanishes"].accepted
    assert r.linear_witness is None


def test_weighted_witnesses():
    r = classify_weighted(GeneratorPair("1", "log(x)", Interval(1, 3)))
    assert r.linear_witness == pytest.approx((1, 0), abs=1e-8)
    r = classify_weighted(GeneratorPair("1/(1 + x)", "x/(1 + x)", Interval(0, 1)))
    assert r.linear_witness == pytest.approx((1, 1), abs=1e-8)
    assert r.residuals["weighted_means"].accepted


def test_values_only_pair_is_inconclusive():
    f = GeneratorFunction(lambda v: 1.0 + 0.0 * v, differentiable=False)
    g = GeneratorFunction(lambda v: v ** 3 + v, differentiable=False)
    r = classify_weighted(GeneratorPair(f, g, Interval(0, 1)))
    assert r.verdict is Verdict.INCONCLUSIVE
    assert r.residuals["quadratic_form"].ran and r.residuals["quadratic_form"].accepted
    for k in ("primitive_mean", "wronskian_cubic", "psi_equation", "psi_vanishes"):
        assert not r.residuals[k].ran
        assert "insufficient regularity" in r.residuals[k].note


def test_report_json_uses_null_for_missing():
    d = classify_symmetric(GeneratorPair("x", "x^2", Interval(0.5, 2))).to_dict()
    text = json.dumps(d, allow_nan=False)
    assert d["verdict"] == "not_QA"
    assert d["quadratic_witness"] is None
    assert json.loads(text)["schema_version"] == "1.0"


def test_class_violation_propagates():
    from meanlab.errors import ClassViolationError
    with pytest.raises(ClassViolationError):
        classify_symmetric(GeneratorPair("x", "1", Interval(-1, 1)))


@given(st.floats(-2, 2).filter(lambda v: abs(v) > 0.05), st.floats(-2, 2), st.floats(0.3, 3))
def test_linear_reparametrization_keeps_verdict(a, b, s):
    # (s f, s(a f + b g)) spans the same mean as (f, g) up to an affine change of g/f
    pair = GeneratorPair("1", f"{s!r}*({a!r} + {b!r}*log(x))", Interval(1, 3))
    if abs(b) < 0.05:
        return
    assert classify_weighted(pair).verdict is Verdict.WEIGHTED_QA


# -- tolerances --------------------------------------------------------------------

def test_tolerance_scale_env():
    t = Tolerances.from_env({"MEANLAB_TOLERANCE_SCALE": "10"})
    assert t.fe == pytest.approx(1e-7) and t.derivative == pytest.approx(1e-5)
    assert Tolerances.from_env({}) == Tolerances()


def test_tolerance_overrides_then_scale():
    t = Tolerances.from_env({"MEANLAB_TOLERANCE_SCALE": "2"}, {"fe": 1e-6})
    assert t.fe == pytest.approx(2e-6)


@pytest.mark.parametrize("env", ["abc", "-1", "0", "inf"])
def test_tolerance_bad_env(env):
    with pytest.raises(ConfigError):
        Tolerances.from_env({"MEANLAB_TOLERANCE_SCALE": env})


def test_tolerance_unknown_name():
    with pytest.raises(ConfigError):
        Tolerances().replace(bogus=1.0)
    with pytest.raises(ConfigError):
        Tolerances(fe=-1.0)


def test_tolerance_scale_affects_verdict(monkeypatch):
    # x + 1e-7 x^2 is rejected as affine at the default tolerance but passes once loosened
    pair = GeneratorPair("1", "x", Interval(0, 1))
    assert classify_weighted(pair, Tolerances.from_env({})).verdict is Verdict.WEIGHTED_QA
    near = GeneratorPair("1 + 1e-6*x^2", "x", Interval(0, 1))
    assert classify_weighted(near, Tolerances.from_env({})).linear_witness is None
    loose = Tolerances.from_env({"MEANLAB_TOLERANCE_SCALE": "1e4"})
    assert classify_weighted(near, loose).linear_witness is not None
