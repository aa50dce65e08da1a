import cmath
import math
import warnings

import numpy as np
import pytest
from numpy.testing import assert_allclose
from scipy.special import gamma

from gbdilog import qdilog as qd
from gbdilog.errors import BranchCut, DomainError, NearDegenerateWarning, PoleHit
from gbdilog.identities import richardson


def test_params(p):
    assert abs(p.Q - 2.0653225806451614) < 1e-15
    assert abs(abs(p.zeta_b) - 1) < 1e-15
    assert abs(p.q - cmath.exp(1j * math.pi * 0.775 ** 2)) < 1e-15
    with pytest.raises(DomainError):
        qd.make_params(1.2)
    with pytest.raises(DomainError):
        qd.make_params(0.0)


def test_near_degenerate_warning():
    qd.make_params.cache_clear()
    with pytest.warns(NearDegenerateWarning):
        qd.make_params(0.775)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        qd.make_params(0.61)


def test_special_values(p):
    assert abs(qd.eval_Gb(p.Q / 2, p) - cmath.exp(-1j * math.pi * p.Q ** 2 / 8)) < 1e-13
    assert abs(qd.eval_Sb(p.Q / 2, p) - 1) < 1e-13
    assert abs(abs(qd.eval_Gb(p.Q / 2 + 0.7j, p)) - 1) < 1e-8
    assert abs(abs(qd.eval_Sb(p.Q / 2 + 1.1j, p)) - 1) < 1e-12
    assert abs(qd.eval_Gb(p.b, p) + 1j * p.b) < 1e-12          # G_b(b) = −ib
    assert abs(qd.eval_gb(1.0, p) - p.zeta_bar * cmath.exp(1j * math.pi * p.Q ** 2 / 8)) < 1e-13
    assert abs(abs(qd.eval_gb(2.5, p)) - 1) < 1e-10


def test_frozen_values(p):
    # frozen from the fixed-rule core; re-derived here through the adaptive core
    frozen = 0.41279005793049034 - 0.9046700280697304j
    z = 0.3 + 0.2j
    assert abs(qd.eval_Gb(z, p) - frozen) < 1e-13
    core = qd.eval_G_ruijsenaars(1j * z - 0.5j * p.Q, p.b, 1 / p.b, method="adaptive")
    assert abs(core * cmath.exp(0.5j * math.pi * z * (z - p.Q)) - frozen) < 1e-9


def test_sb_reflection(p):
    z = 0.4 + 0.3j
    assert abs(qd.eval_Sb(z, p) * qd.eval_Sb(p.Q - z, p) - 1) < 1e-8


def test_gb_branch_cut(p):
    with pytest.raises(BranchCut):
        qd.eval_gb(-1.0, p)
    with pytest.raises(BranchCut):
        qd.eval_gb(0.0, p)


def test_pole_hit(p):
    with pytest.raises(PoleHit):
        qd.eval_Gb(0.0, p)
    with pytest.raises(PoleHit):
        qd.eval_Gb(-2 * p.b - 1 / p.b, p)
    # zeros of G_b are fine
    assert abs(qd.eval_Gb(p.Q + p.b, p)) < 1e-12


def test_residue_limit(p):
    v = [x * qd.eval_Gb(x, p) for x in (1e-3, 1e-4)]
    assert abs(richardson(v, 10.0) - 1 / (2 * math.pi)) < 1e-5


def test_residue_info(p):
    assert qd.residue_info(0, 0, p).residue_data == -1 / (2 * math.pi)
    r = qd.residue_info(1, 0, p)
    assert abs(r.residue_data - (-1 / (2 * math.pi)) / (1 - p.q ** 2)) < 1e-15
    assert r.location == -p.b
    for n, m in ((1, 0), (0, 1), (1, 1), (2, 0)):
        info = qd.residue_info(n, m, p)
        assert abs(qd.numeric_residue(n, m, p) - info.residue_data) < 1e-4 * abs(info.residue_data)
    with pytest.raises(DomainError):
        qd.residue_info(-1, 0, p)


def test_residue_by_secant(p):
    # (z − b)/G_b(Q + z) near z0 = b, extrapolated from two offsets
    v = [d / qd.eval_Gb(p.Q + p.b + d, p) for d in (1e-3, 1e-4)]
    assert abs(richardson(v, 10.0) - qd.residue_info(1, 0, p).residue_data) < 1e-5


def test_continuation_consistency(p):
    z = np.array([0.3 + 0.2j, 4.1 - 0.3j, -3.2 + 0.6j, 1.0 + 1.5j])
    assert_allclose(qd.eval_Gb(z, p, core_shift=1), qd.eval_Gb(z, p), rtol=1e-9)


def test_asymptotics(p):
    z = p.Q / 2 + 8j
    assert abs(qd.eval_Gb(z, p) - p.zeta_bar) < 1e-4
    z = p.Q / 2 - 8j
    ph = cmath.exp(1j * math.pi * z * (z - p.Q))
    assert abs(qd.eval_Gb(z, p) - p.zeta_b * ph) / abs(ph) < 1e-4


def test_vectorised_matches_scalar(p):
    z = np.array([[0.3 + 0.2j, 2.2], [-0.7 + 1.1j, 3.3 - 0.5j]])
    vec = qd.eval_Gb(z, p)
    assert vec.shape == z.shape
    for idx in np.ndindex(z.shape):
        assert vec[idx] == pytest.approx(qd.eval_Gb(complex(z[idx]), p), rel=1e-14)


def test_classical_limit_real_point():
    rows = qd.classical_limit_probe(1.3, (0.35, 0.25, 0.18))
    errs = [e for _, _, e in rows]
    assert errs[0] > errs[1] > errs[2] and errs[2] < 1e-2
    rows = qd.classical_limit_probe(1.0, (0.5, 0.3))
    assert all(e < 1e-12 for _, _, e in rows)


def test_classical_limit_phase_constant():
    # the ratio at x = 1 is −i/phase for every b; the default phase makes it 1
    alt = qd.classical_limit_probe(1.0, (0.4,), phase=cmath.exp(-1j * math.pi / 4))[0][1]
    assert abs(alt - (-1j) / cmath.exp(-1j * math.pi / 4)) < 1e-12


@pytest.mark.xfail(strict=True, reason="O(b²) correction at |x|≈2.6 keeps the deviation above 0.1 at b=0.25")
def test_classical_limit_complex_point_example():
    (_, ratio, err), = qd.classical_limit_probe(2.6 + 0.4j, (0.25,))
    assert np.isfinite(ratio) and err < 0.1


def test_classical_limit_complex_point_converges():
    rows = qd.classical_limit_probe(2.6 + 0.4j, (0.35, 0.25, 0.18, 0.1, 0.05))
    errs = [e for _, _, e in rows]
    assert all(a > c for a, c in zip(errs, errs[1:]))
    # deviation scales like b²
    assert errs[-1] < 0.01 and errs[-2] / errs[-1] == pytest.approx(4.0, rel=0.1)
    assert abs(rows[-1][1] - gamma(2.6 + 0.4j)) == errs[-1]


def test_tail_bound(p):
    assert qd.gb_ratio_tail_bound(0.3, 0.3, -2.0, p) == 4.0
    for x in (-3.0, -4.0, -5.0, 5.0):
        meas = abs(qd.eval_Gb(0.2 + 1j * x, p) / qd.eval_Gb(0.5 + 1j * x, p))
        assert meas <= qd.gb_ratio_tail_bound(0.2, 0.5, x, p)
    assert abs(qd.eval_Gb(0.2 + 5j, p) / qd.eval_Gb(0.5 + 5j, p)) == pytest.approx(1.0, abs=3.0)


def test_dual_parameters_give_same_sb(p):
    dual = qd.BParams(1 / p.b, p.q_tilde, p.q, p.Q, p.zeta_b)
    z = np.array([0.3 + 0.2j, 1.4 - 0.7j])
    assert_allclose(qd.eval_Sb(z, dual), qd.eval_Sb(z, p), rtol=1e-10)
