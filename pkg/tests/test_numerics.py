import math

import numpy as np
import pytest
from scipy.special import gamma
from numpy.testing import assert_allclose

from gbdilog import numerics as nm
from gbdilog.errors import BadContour, OutOfStrip
from gbdilog.identities import check_tau_beta
from gbdilog.qdilog import eval_G_ruijsenaars, eval_Gb
from gbdilog.representation import WFunction


def test_gaussian_on_real_line():
    c = nm.IndentedContour(0.0, (), (-6.0, 6.0))
    res = nm.integrate_contour(lambda t: np.exp(-math.pi * t * t), c)
    assert abs(res.value - 1) < 1e-12


def test_half_residue_indentation():
    # 1/t with the pole passed below: principal value 0 plus −iπ
    c = nm.IndentedContour(0.0, ((0.0, 0.1, "above"),), (-4.0, 4.0))
    assert abs(nm.integrate_contour(lambda t: 1 / t, c).value + 1j * math.pi) < 1e-10
    c = nm.IndentedContour(0.0, ((0.0, 0.1, "below"),), (-4.0, 4.0))
    assert abs(nm.integrate_contour(lambda t: 1 / t, c).value - 1j * math.pi) < 1e-10


def test_indentation_radius_independence():
    f = lambda t: np.exp(-t * t) / t
    vals = [nm.integrate_contour(f, nm.IndentedContour(0.0, ((0.0, r, "above"),), (-8, 8))).value
            for r in (0.2, 0.1, 0.05)]
    assert_allclose(vals, vals[0], atol=1e-10)


def test_contour_height_independence():
    f = lambda t: np.exp(-t * t + 0.3 * t)
    a = nm.integrate_contour(f, nm.IndentedContour(0.0, (), (-9, 9)))
    b = nm.integrate_contour(f, nm.IndentedContour(0.4, (), (-9, 9)))
    assert abs(a.value - b.value) < 1e-10 + a.err_estimate + b.err_estimate


def test_window_additivity():
    f = lambda t: np.exp(-t * t) * np.cos(3 * t)
    whole = nm.integrate_segment(f, -7, 7).value
    parts = nm.integrate_segment(f, -7, 0.37).value + nm.integrate_segment(f, 0.37, 7).value
    assert abs(whole - parts) < 1e-12


@pytest.mark.parametrize("kw", [dict(window=(1.0, -1.0)),
                                dict(indentations=((0.3j, 0.1),)),
                                dict(indentations=((0.0, 0.1), (0.15, 0.1)))])
def test_bad_contours(kw):
    with pytest.raises(BadContour):
        nm.IndentedContour(**kw)


def test_semiinfinite():
    assert abs(nm.semiinfinite_integrate(lambda y: np.exp(-y), 40.0).value - 1) < 1e-12
    # tail term is added exactly
    res = nm.semiinfinite_integrate(lambda y: np.exp(-y), 5.0, tail=lambda Y: math.exp(-Y))
    assert abs(res.value - 1) < 1e-12


def test_ruijsenaars_core(p):
    assert eval_G_ruijsenaars(0.0, p.b, 1 / p.b) == 1
    # G(z) relates to G_b at Q/2 − iz
    z = 0.2j
    ref = eval_Gb(p.Q / 2 - 1j * z, p) * np.exp(-0.5j * math.pi * (p.Q / 2 - 1j * z) * (-1j * z - p.Q / 2))
    assert abs(eval_G_ruijsenaars(z, p.b, 1 / p.b) - ref) < 1e-12
    z = 0.3 + 0.2j
    assert abs(eval_G_ruijsenaars(z, p.b, 1 / p.b) * eval_G_ruijsenaars(-z, p.b, 1 / p.b) - 1) < 1e-12
    assert abs(eval_G_ruijsenaars(0.1j, p.b, 1 / p.b) - eval_G_ruijsenaars(0.1j, 1 / p.b, p.b)) < 1e-14


def test_ruijsenaars_adaptive_matches_fixed(p):
    z = np.array([0.3 + 0.2j, -1.1 + 0.4j])
    fixed = eval_G_ruijsenaars(z, p.b, 1 / p.b)
    adapt = eval_G_ruijsenaars(z, p.b, 1 / p.b, method="adaptive")
    assert_allclose(adapt, fixed, rtol=1e-9)


def test_tau_beta_integrand_example(p):
    assert check_tau_beta(0.4 * p.Q, 0.3 * p.Q, p=p).rel_err < 1e-6


def test_mellin():
    assert abs(nm.mellin_transform(lambda x: np.exp(-x), 2.0) - 1) < 1e-10
    assert abs(nm.mellin_transform(lambda x: np.exp(-x), 0.5 + 1j) - gamma(0.5 + 1j)) < 1e-10
    with pytest.raises(OutOfStrip):
        nm.mellin_transform(lambda x: np.exp(-x), -0.5)


def test_parseval():
    assert nm.parseval_residual(lambda x: np.exp(-x)) < 1e-6
    g = WFunction.gaussian(1.0, 0.3)
    assert nm.parseval_residual(g) < 1e-6


def test_truncation_window():
    lo, hi = nm.truncation_window(1.0, 2.0, 1e-10)
    assert math.exp(lo) / 1.0 < 1e-10 and math.exp(-2 * hi) / 2 < 1e-10
    with pytest.raises(BadContour):
        nm.truncation_window(0.0, 1.0, 1e-10)


def test_config_validation():
    with pytest.raises(ValueError):
        nm.QuadratureConfig(abs_tol=0)
    with pytest.raises(ValueError):
        nm.QuadratureConfig(tail_policy="guess")
