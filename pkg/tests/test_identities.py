import cmath
import math

import numpy as np
import pytest
from scipy.special import gamma

from gbdilog import identities as ident
from gbdilog.errors import ConvergenceViolation, PinchedContour
from gbdilog.numerics import QuadratureConfig
from gbdilog.qdilog import eval_Gb, make_params
from gbdilog.representation import WFunction


@pytest.mark.parametrize("variant", [1, 2, 3, 4])
@pytest.mark.parametrize("r", [-1.0, 0.0, 0.5])
def test_fourier(p, variant, r):
    rep = ident.check_fourier_gb(r, variant, p)
    assert rep.passed and rep.rel_err < 1e-6


def test_fourier_rhs_at_zero(p):
    assert abs(ident.fourier_rhs(0.0, 1, p) - p.zeta_bar * cmath.exp(1j * math.pi * p.Q ** 2 / 8)) < 1e-13
    assert abs(ident.fourier_rhs(0.0, 2, p) - p.zeta_b * cmath.exp(-1j * math.pi * p.Q ** 2 / 8)) < 1e-13


def test_qbinom_symmetry(p):
    t = 0.4 + 0.3j
    for tau in (0.1 + 0.1j, 0.25 - 0.05j):
        a = ident.qbinom_coeff(t, tau, p)
        assert abs(a - ident.qbinom_coeff(t, t - tau, p)) < 1e-12 * abs(a)


def test_qbinom_residue_at_zero(p):
    # simple pole at τ = 0 with residue −1/(2π): −2πτ·(t choose τ) → 1
    t = 0.4 + 0.3j
    v = [-2 * math.pi * tau * ident.qbinom_coeff(t, tau, p) for tau in (1e-3j, 1e-4j)]
    assert abs(ident.richardson(v, 10.0) - 1) < 1e-6


def test_qbinom_one_step(p):
    # raising t by one b-step changes the coefficient by a ratio of shift factors
    t, tau = 0.3 + 0.1j, 0.1 + 0.05j
    lhs = ident.qbinom_coeff(t + p.b, tau, p) / ident.qbinom_coeff(t, tau, p)
    # G_b(τ−t−b)/G_b(τ−t) · G_b(−t)/G_b(−t−b), each ratio from the shift equation
    rhs = (1 - np.exp(2j * math.pi * p.b * (-t - p.b))) / (1 - np.exp(2j * math.pi * p.b * (tau - t - p.b)))
    assert abs(lhs - rhs) < 1e-10 * abs(rhs)


def test_tau_beta_example_and_swap(p):
    a = ident.check_tau_beta(0.4 * p.Q, 0.3 * p.Q, p=p)
    b = ident.check_tau_beta(0.3 * p.Q, 0.4 * p.Q, p=p)
    assert a.rel_err < 1e-6 and b.rel_err < 1e-6
    assert abs(a.lhs - b.lhs) < 2e-6 * abs(a.lhs)
    with pytest.raises(ConvergenceViolation):
        ident.check_tau_beta(0.4 * p.Q, -0.1, p=p)


def test_tau_beta_tolerance_stability(p):
    al, be = 0.35 * p.Q, 0.25 * p.Q
    r1 = ident.check_tau_beta(al, be, p=p)
    tight = ident.check_tau_beta(al, be, p=p, cfg=QuadratureConfig(5e-13, 5e-11, 8000))
    assert r1.passed and tight.passed
    assert abs(r1.lhs - tight.lhs) < 2e-6 * abs(r1.lhs)


def test_45_example_and_swap(p):
    r = ident.check_45(0.3 * p.Q, 0.25 * p.Q, 0.2 * p.Q, p=p)
    s = ident.check_45(0.25 * p.Q, 0.3 * p.Q, 0.2 * p.Q, p=p)
    assert r.rel_err < 1e-6 and s.rel_err < 1e-6
    assert abs(r.lhs - s.lhs) < 2e-6 * abs(r.lhs) and abs(r.rhs - s.rhs) < 1e-12 * abs(r.rhs)
    with pytest.raises(ConvergenceViolation):
        ident.check_45(0.3 * p.Q, 0.25 * p.Q, -0.05, p=p)


def test_69_example(p):
    r = ident.check_69(0.3 * p.Q, 0.2 * p.Q, 0.25 * p.Q, 0.15 * p.Q, p=p)
    assert r.rel_err < 1e-6


def test_69_small_delta_continuity(p):
    vals = []
    for d in (0.08, 0.04, 0.02):
        r = ident.check_69(0.3 * p.Q, 0.2 * p.Q, 0.25 * p.Q, d * p.Q, p=p)
        assert r.passed
        vals.append(r.lhs)
    # successive differences shrink with δ
    assert abs(vals[2] - vals[1]) < abs(vals[1] - vals[0])


def test_32_example_and_swap(p):
    r = ident.check_32(0.3 * p.Q, 0.3 * p.Q, 0.25 * p.Q, p=p)
    s = ident.check_32(0.3 * p.Q, 0.25 * p.Q, 0.3 * p.Q, p=p)
    assert r.rel_err < 1e-6 and s.rel_err < 1e-6
    assert abs(r.lhs - s.lhs) < 2e-6 * abs(r.lhs)
    with pytest.raises(ConvergenceViolation):
        ident.check_32(0.8 * p.Q, 0.1 * p.Q, 0.1 * p.Q, p=p)


@pytest.mark.parametrize("name", ["tau-beta", "4-5", "6-9", "3-2"])
@pytest.mark.parametrize("b", [0.775, 0.5])
def test_documented_grids(name, b):
    p = make_params(b)
    reps = ident.run_grid(name, p)
    assert len(reps) == 5
    assert all(r.passed and r.rel_err < 1e-6 for r in reps), [r.rel_err for r in reps]
    assert ident.violation_raises(name, p)


def test_grid_stability_under_tighter_tolerance(p):
    cfg = QuadratureConfig(ident.IDENTITY_CFG.abs_tol / 2, ident.IDENTITY_CFG.rel_tol / 2, 8000)
    for name in ("tau-beta", "3-2"):
        assert all(r.passed for r in ident.run_grid(name, p, cfg))


def test_69_pinch_raises(p):
    with pytest.raises(PinchedContour):
        ident.check_69(*(c * p.Q for c in (0.1, 0.3, 0.3, -0.2)), p=p)


def test_barnes_gamma_side():
    assert ident.barnes_first_gamma(1, 1, 1) == pytest.approx(0.5, abs=1e-15)
    a, b_, c, d = 1.2, 0.8, 0.5, 0.3
    assert abs(ident.mellin_barnes_first(a, b_, c) - ident.barnes_first_gamma(a, b_, c)) < 1e-6
    assert abs(ident.mellin_barnes_second(a, b_, c, d) - ident.barnes_second_gamma(a, b_, c, d)) < 1e-6
    # spot value of the first lemma from its closed form
    ref = gamma(a + c) * gamma(b_ + c) * gamma(a) * gamma(b_) / gamma(a + b_ + c)
    assert abs(ident.barnes_first_gamma(a, b_, c) - ref) < 1e-12 * abs(ref)


def test_barnes_limits_decrease():
    r1 = ident.check_barnes_first(1.2, 0.8, 0.5)
    r2 = ident.check_barnes_second(1.2, 0.8, 0.5, 0.3)
    for r in (r1, r2):
        d = r.params["deviations"]
        assert d[0] > d[1] and r.params["identity_residual"] < 1e-6
        # first-order in b: halving the ratio along the ladder
        assert d[1] / d[0] == pytest.approx(0.25 / 0.35, rel=0.35)


@pytest.mark.xfail(strict=True, reason="deviation at b=0.25 is 10.8% and 5.7%, the decay is O(b)")
def test_barnes_limits_within_five_percent():
    assert ident.check_barnes_first(1.2, 0.8, 0.5).passed
    assert ident.check_barnes_second(1.2, 0.8, 0.5, 0.3).passed


F_GAUSS = WFunction.gaussian(1.0)
F_SHIFT = WFunction.gaussian(1.0, 1.0)
F_ODD = WFunction.gaussian(1.0, poly=[0.0, 1.0])


@pytest.mark.parametrize("f", [F_GAUSS, F_SHIFT, F_ODD])
@pytest.mark.parametrize("variant", [1, 2, 3])
def test_delta_limits(p, f, variant):
    extra = ident.delta_limit_probe(f, variant=variant, p=p)[-1][1]
    assert abs(extra - ident.delta_limit_target(f, variant, p)) < 1e-6


def test_delta_variant3_target(p):
    t = ident.delta_limit_target(F_SHIFT, 3, p)
    ref = -p.q ** 2 + cmath.exp(-(-1j * p.b) ** 2 + (-1j * p.b))
    assert abs(t - ref) < 1e-14


@pytest.mark.xfail(strict=True, reason="ladder (0.1, 0.05, 0.025) leaves a 3.5e-2 error after extrapolation")
def test_delta_coarse_ladder(p):
    extra = ident.delta_limit_probe(F_GAUSS, (0.1, 0.05, 0.025), 1, p)[-1][1]
    assert abs(extra - 1) < 1e-3


def test_richardson_exact_on_polynomial_error():
    vals = [3.0 + 0.5 * e + 0.25 * e * e for e in (0.4, 0.2, 0.1)]
    assert ident.richardson(vals, 2.0) == pytest.approx(3.0, abs=1e-13)


def test_report_json_schema(p):
    r = ident.check_tau_beta(0.4 * p.Q, 0.3 * p.Q, p=p)
    d = r.to_json()
    assert set(d) == {"name", "params", "lhs", "rhs", "abs_err", "rel_err", "pass"}
    assert isinstance(d["lhs"], list) and len(d["lhs"]) == 2


def test_report_zero_rhs_uses_absolute_error():
    r = ident.make_report("x", {}, 1e-9, 0.0, 1e-6)
    assert r.passed and math.isinf(r.rel_err)
