"""The b-hypergeometric function F_b and the scalar kernel of the
fundamental matrix coefficient of GL_q^+(2,R)."""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import numerics
from .errors import BranchCut, ConvergenceViolation, PinchedContour
from .identities import IDENTITY_CFG, _lg, _lg1, qbinom_coeff
from .numerics import IndentedContour, QuadratureConfig, integrate_contour
from .qdilog import BParams, _pole_check, make_params


@dataclass(frozen=True)
class FbArgs:
    alpha: complex
    beta: complex
    gamma: complex
    z: complex


@dataclass(frozen=True)
class TKernelArgs:
    lam: float
    t: float
    s: float
    alpha_out: float

    def l(self, p: BParams) -> complex:
        return -p.Q / 2 + 1j * self.lam


def fb_integrand(args: FbArgs, p: BParams):
    """log of (−z)^{iτ/b} e^{iπτ²} G(α+iτ)G(β+iτ)G(−iτ)/G(γ+iτ)."""
    a, b_, c = complex(args.alpha), complex(args.beta), complex(args.gamma)
    lz = cmath.log(-complex(args.z))
    ib = 1j / p.b
    return lambda t: (ib * t * lz + 1j * math.pi * t * t + _lg(a + 1j * t, p) + _lg(b_ + 1j * t, p)
                      + _lg(-1j * t, p) - _lg(c + 1j * t, p))


def fb_heights(args: FbArgs, p: BParams):
    """Open interval of admissible line heights."""
    lo = max(0.0, complex(args.gamma).real - p.Q)
    hi = min(complex(args.alpha).real, complex(args.beta).real)
    return lo, hi


def eval_Fb(args: FbArgs, p: Optional[BParams] = None, cfg: QuadratureConfig = IDENTITY_CFG,
            height: Optional[float] = None) -> complex:
    """F_b(α,β,γ;z) = G(γ)/(G(α)G(β)) ∫ (−z)^{iτ/b} e^{iπτ²} G(α+iτ)G(β+iτ)G(−iτ)/G(γ+iτ) dτ.

    The Gaussian phase cancels against the chirps of the G_b asymptotics,
    so on a horizontal line both tails decay exponentially:
    right like e^{−(πQ + arg(−z)/b)τ}, left like e^{−(πQ − 2πRe(α+β−γ) − arg(−z)/b)|τ|}.
    Normalised so that F_b(α,β,γ;0⁻) = 1.
    """
    p = p or make_params(0.775)
    z = complex(args.z)
    if z.imag == 0 and z.real >= 0:
        raise BranchCut("(−z)^{iτ/b} needs z off [0, ∞)")
    a, b_, c = complex(args.alpha), complex(args.beta), complex(args.gamma)
    _pole_check(np.array([c]), p.b)
    lo, hi = fb_heights(args, p)
    if not lo < hi:
        raise PinchedContour("ascending and descending pole strings overlap")
    h = 0.5 * (lo + hi) if height is None else height
    if not lo < h < hi:
        raise PinchedContour(f"height {h} outside the admissible band ({lo}, {hi})")
    arg = cmath.phase(-z)
    rate_r = math.pi * p.Q + arg / p.b
    rate_l = math.pi * p.Q - 2 * math.pi * (a + b_ - c).real - arg / p.b
    if rate_l <= 0:
        raise ConvergenceViolation("left tail of the F_b integrand does not decay")
    logf = fb_integrand(args, p)
    t = np.linspace(-1.0, 1.0, 9) + 1j * h
    scale = float(np.max(np.abs(np.exp(logf(t)))))
    window = numerics.truncation_window(rate_l, rate_r, cfg.abs_tol, scale=4 * scale, pad=0.5)
    res = integrate_contour(lambda t: np.exp(logf(t)), IndentedContour(h, (), window), cfg)
    return res.value * cmath.exp(_lg1(c, p) - _lg1(a, p) - _lg1(b_, p))


# ---------------------------------------------------------------------------
# T-kernel


def t_kernel_labels(args: TKernelArgs, tau: complex, p: BParams) -> dict:
    """Exponents of A, B, B̂, Â in the operator monomial multiplying the kernel."""
    ib = 1j / p.b
    s, a, t = args.s, args.alpha_out, args.t
    return {"A": ib * (t - s), "B": ib * (s + tau), "Bhat": ib * (a + tau), "Ahat": ib * (t - tau)}


def _t_phase(args: TKernelArgs, tau: complex, p: BParams) -> complex:
    s, a, t, lam = args.s, args.alpha_out, args.t, args.lam
    return (1j * math.pi * (t - lam) * (s + a + 2 * tau) + math.pi * p.Q * (s + tau))


def eval_T_kernel(args: TKernelArgs, tau: complex, p: Optional[BParams] = None, cfg=None) -> complex:
    """Scalar factor of the matrix coefficient T^{λ,t}_{s,α} at the integration
    variable τ (expanded G_b form)."""
    p = p or make_params(0.775)
    tau = complex(tau)
    s, a, lam = args.s, args.alpha_out, args.lam
    h = p.Q / 2
    num = np.array([-1j * tau - 1j * a, h + 1j * tau - 1j * lam, -1j * tau - 1j * s, h + 1j * s - 1j * lam])
    den = np.array([h - 1j * a - 1j * lam, h - 1j * tau - 1j * lam])
    _pole_check(num, p.b)
    lg = np.sum(_lg(num, p)) - np.sum(_lg(den, p))
    return cmath.exp(lg + _t_phase(args, tau, p))


def eval_T_kernel_binomial(args: TKernelArgs, tau: complex, p: Optional[BParams] = None) -> complex:
    """Same kernel written as (l+iα choose iτ+iα)_b (l+iτ choose is+iτ)_b × phases."""
    p = p or make_params(0.775)
    tau = complex(tau)
    l = args.l(p)
    s, a = args.s, args.alpha_out
    c1 = qbinom_coeff(l + 1j * a, 1j * tau + 1j * a, p)
    c2 = qbinom_coeff(l + 1j * tau, 1j * s + 1j * tau, p)
    return c1 * c2 * cmath.exp(_t_phase(args, tau, p))
