import csv
import io
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from meanlab.characterize import construct_from_kernel
from meanlab.errors import PreconditionError, SingularWronskianError
from meanlab.exprlang import as_generator
from meanlab.means import Interval
from meanlab.wronskians import (PROFILE_COLUMNS, DerivativeTable, QuadraticPolynomial,
                                discriminant_identity_check, phi_psi, verify_fundamental_ode,
                                wronskian, wronskian_profile)


@given(st.floats(-3, 3))
def test_cos_sin_first_wronskian(x):
    assert wronskian("cos(x)", "sin(x)", 1, 0, x) == pytest.approx(-1.0, abs=1e-15)


@pytest.mark.parametrize("i", range(4))
def test_equal_orders_vanish(i):
    assert wronskian("exp(x)", "sin(x)", i, i, 0.4) == 0.0


def test_constant_and_log():
    assert wronskian("1", "log(x)", 2, 1, 1.7) == 0.0


def test_order_overflow():
    with pytest.raises(PreconditionError):
        wronskian("x", "x^2", 4, 0, 1.0)


def test_phi_psi_examples():
    assert phi_psi("cos(x)", "sin(x)", 0.3) == pytest.approx((0.0, -1.0), abs=1e-15)
    for x in (0.5, 2.0, 4.0):
        phi, psi = phi_psi("1", "log(x)", x)
        assert phi == pytest.approx(-1 / x, rel=1e-14) and psi == 0.0
    assert phi_psi("1", "x", 0.2) == (0.0, 0.0)
    assert phi_psi("exp(x)", "x*exp(x)", 0.6) == pytest.approx((2.0, -1.0), rel=1e-13)


def test_phi_for_log_matches_finite_differences():
    # Φ = (f''g - fg'')/(f'g - fg') with f = 1 reduces to g''/g'
    for x in (0.5, 1.3, 3.0):
        gp = (math.log(x + 1e-5) - math.log(x - 1e-5)) / 2e-5
        gpp = (math.log(x + 1e-4) - 2 * math.log(x) + math.log(x - 1e-4)) / 1e-8
        assert phi_psi("1", "log(x)", x)[0] == pytest.approx(gpp / gp, rel=1e-5)


def test_singular_wronskian():
    with pytest.raises(SingularWronskianError):
        phi_psi("x", "x^2", 0.0)
    with pytest.raises(SingularWronskianError):
        verify_fundamental_ode("x", "x^2", [-0.5, 0.0, 0.5])


def test_fundamental_ode_examples():
    assert verify_fundamental_ode("cos(x)", "sin(x)", np.linspace(-3, 3, 100))
    assert verify_fundamental_ode("exp(x)", "x*exp(x)", np.linspace(-1, 1, 100))
    assert verify_fundamental_ode("x", "x^3 + 1", np.linspace(0.3, 2, 100))


PAIRS = [("cos(x)", "sin(x)", (-1.0, 1.0)), ("exp(x)", "x*exp(x)", (-1.0, 1.0)),
         ("1", "log(x)", (0.5, 3.0)), ("x", "x^2 + 1", (0.2, 2.0)), ("sinh(x)", "cosh(x)", (0.3, 2.0))]


@given(st.sampled_from(PAIRS), st.floats(0, 1), st.integers(0, 3), st.integers(0, 3))
def test_antisymmetry_exact(pr, u, i, j):
    f, g, (lo, hi) = pr
    x = lo + u * (hi - lo)
    w = wronskian(f, g, i, j, x)
    assert wronskian(f, g, j, i, x) == -w
    assert wronskian(g, f, i, j, x) == -w


def _transforms(n, seed):
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < n:
        a, b, c, d = (float(v) for v in rng.uniform(-2, 2, 4))
        if abs(a * d - b * c) > 0.2:
            out.append((a, b, c, d))
    return out


@pytest.mark.parametrize("f, g, dom", [("cos(x)", "sin(x)", (-0.7, 0.7)), ("1", "x", (0.0, 1.0))])
def test_covariance_under_equivalence(f, g, dom):
    xs = np.linspace(dom[0], dom[1], 33)
    base = DerivativeTable(as_generator(f), as_generator(g), xs, 3)
    for a, b, c, d in _transforms(20, 7):
        h = as_generator(f"{a!r}*({f}) + {b!r}*({g})")
        k = as_generator(f"{c!r}*({f}) + {d!r}*({g})")
        t = DerivativeTable(h, k, xs, 3)
        det = a * d - b * c
        for i in range(4):
            for j in range(4):
                # relative to the products on both sides, since some W^{i,j} vanish identically
                scale = t.magnitude(i, j) + abs(det) * base.magnitude(i, j)
                err = np.abs(t.W(i, j) - det * base.W(i, j))
                assert np.all(err <= 1e-10 * scale), (i, j)


@pytest.mark.parametrize("p", [-2, -1, 0, 1, 2])
@pytest.mark.parametrize("coef", [(1, 0, 0, 1), (1, 1, 0, 1), (2, -1, 1, 1)])
def test_cubic_ratio_constant_for_constructed_pairs(p, coef):
    inst = construct_from_kernel(p, *coef, Interval(1.0, 1.5))
    # (f, f·φ) is the pair (aS + bC, cS + dC)
    t = DerivativeTable(inst.f, inst.f * inst.phi, np.linspace(1.01, 1.49, 65), 2)
    ratio = t.W(2, 1) / t.W(1, 0) ** 3
    assert np.var(ratio) <= 1e-8
    # oracle: for (S_p, C_p) itself W10 = sqrt|p| and W21 = -p·sqrt|p| (W10 = 1, W21 = 0 at p = 0);
    # both scale by ad - bc under the pencil change
    a, b, c, d = coef
    assert np.median(ratio) == pytest.approx(-np.sign(p) / (a * d - b * c) ** 2, abs=1e-9)


def test_discriminant_identity_examples():
    pts = np.linspace(-3, 3, 25)
    P = QuadraticPolynomial(1, 0, 1)
    assert P.discriminant() == -4
    assert discriminant_identity_check(P, pts)
    assert QuadraticPolynomial(0, 1, 0).discriminant() == 1
    assert discriminant_identity_check(QuadraticPolynomial(0, 1, 0), pts)
    assert QuadraticPolynomial(1, -2, 1).discriminant() == 0
    assert discriminant_identity_check(QuadraticPolynomial(1, -2, 1), pts)


@given(st.floats(-5, 5), st.floats(-5, 5), st.floats(-5, 5), st.floats(-10, 10))
def test_discriminant_identity_random(alpha, beta, gamma, u):
    assert discriminant_identity_check(QuadraticPolynomial(alpha, beta, gamma), [u])


def test_discriminant_exact():
    assert QuadraticPolynomial(0.1, 0.3, 0.7).discriminant() == 0.3 * 0.3 - 4 * 0.1 * 0.7


def test_positivity_by_vertex():
    P = QuadraticPolynomial(1, -2, 1)  # (u - 1)^2
    assert P.is_positive_on(1.0, 2.0)
    assert not P.is_positive_on(0.0, 2.0)
    assert P.nonpositive_witness(0.0, 2.0) == (1.0, 0.0)
    assert QuadraticPolynomial(1, 0, 1).is_positive_on(-100, 100)
    assert not QuadraticPolynomial(0, 1, 0).is_positive_on(-1, 1)
    assert QuadraticPolynomial(0, 1, 0).is_positive_on(0, 1)
    # narrow dip between sample points is still found
    Q = QuadraticPolynomial(1e-8 + 0.25 ** 2 * 1e6, -0.5 * 1e6, 1e6)
    assert not QuadraticPolynomial(-1e-8 + 0.25 ** 2 * 1e6, -0.5 * 1e6, 1e6).is_positive_on(0, 1)
    assert Q.is_positive_on(0, 1)


@given(st.floats(-3, 3), st.floats(-3, 3), st.floats(-3, 3))
def test_positivity_agrees_with_dense_sampling(alpha, beta, gamma):
    P = QuadraticPolynomial(alpha, beta, gamma)
    u = np.linspace(-1, 1, 2001)[1:-1]
    dense_min = float(np.min(P(u)))
    if abs(dense_min) < 1e-3:
        return
    assert P.is_positive_on(-1, 1) == (dense_min > 0)


def test_profile_csv_layout(tmp_path):
    prof = wronskian_profile("cos(x)", "sin(x)", Interval(-0.7, 0.7), 9)
    text = prof.to_csv()
    rows = list(csv.reader(io.StringIO(text)))
    assert tuple(rows[0]) == PROFILE_COLUMNS
    assert len(rows) == 10
    assert all(float(r[1]) == pytest.approx(-1.0) and float(r[5]) == pytest.approx(-1.0) for r in rows[1:])
    path = tmp_path / "p.csv"
    prof.write_csv(path)
    assert path.read_text() == text
    assert text == wronskian_profile("cos(x)", "sin(x)", Interval(-0.7, 0.7), 9).to_csv()


def test_profile_default_grid():
    prof = wronskian_profile("1", "log(x)", Interval(1, 2))
    assert len(prof.grid) == 257
    assert np.all(prof.W10 != 0)
