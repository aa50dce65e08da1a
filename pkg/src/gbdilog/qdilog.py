"""The non-compact quantum dilogarithm G_b and its relatives S_b, g_b.

G_b is computed from Ruijsenaars' integral for the hyperbolic gamma function,

    G(a+, a-; z) = exp(i ∫₀^∞ dy/y [sin(2yz) / (2 sinh(a+ y) sinh(a- y)) − z/(a+ a- y)]),

valid for |Im z| < (a+ + a-)/2, through G_b(z) = G(b, 1/b; iz − iQ/2) e^{(πi/2) z(z−Q)}.
Outside the strip 0 < Re z < Q the functional equations

    G_b(x + b^{±1}) = (1 − e^{2πi b^{±1} x}) G_b(x)

move the argument back to the central band before the integral is used.
The core integral is done with a fixed composite Gauss-Legendre rule that is
vectorised over many arguments at once; the adaptive path through
``semiinfinite_integrate`` is kept as an independent cross-check.
"""
from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import numpy as np
from scipy.special import gamma as cgamma

from . import numerics
from .errors import BranchCut, DomainError, NearDegenerateWarning, PoleHit, StripViolation

POLE_EPS = 1e-8


@dataclass(frozen=True)
class BParams:
    b: float
    q: complex
    q_tilde: complex
    Q: float
    zeta_b: complex

    @property
    def zeta_bar(self) -> complex:
        return self.zeta_b.conjugate()


@lru_cache(maxsize=None)
def make_params(b: float) -> BParams:
    """Deformation datum for 0 < b < 1."""
    b = float(b)
    if not (0.0 < b < 1.0) or not math.isfinite(b):
        raise DomainError(f"b must lie in (0, 1), got {b}")
    b2 = b * b
    near = Fraction(b2).limit_denominator(8)
    if abs(b2 - float(near)) < 1e-3:
        warnings.warn(f"b^2 = {b2:.6g} is within 1e-3 of {near}; the pole lattice is "
                      "close to degenerate", NearDegenerateWarning, stacklevel=2)
    q = cmath.exp(1j * math.pi * b2)
    qt = cmath.exp(1j * math.pi / b2)
    Q = b + 1.0 / b
    zeta = cmath.exp(1j * math.pi / 4 + 1j * math.pi * (b2 + 1.0 / b2) / 12)
    return BParams(b, q, qt, Q, zeta)


# ---------------------------------------------------------------------------
# Ruijsenaars core


def _x_over_sinh_minus_one(x):
    """x/sinh(x) − 1 without cancellation (x > 0 real array)."""
    out = np.empty_like(x)
    small = x < 0.2
    xs = x[small] ** 2
    # Taylor coefficients of x/sinh x
    c = (-1 / 6, 7 / 360, -31 / 15120, 127 / 604800, -73 / 3421440)
    acc = np.zeros_like(xs)
    for k in reversed(c):
        acc = (acc + k) * xs
    out[small] = acc
    xl = x[~small]
    out[~small] = xl / np.sinh(xl) - 1.0
    return out


def _sin_minus_id(X):
    """sin(X) − X for complex X, accurate near 0."""
    out = np.empty_like(X)
    small = np.abs(X) < 0.5
    xs = X[small]
    x2 = xs * xs
    acc = np.zeros_like(xs)
    for k in (1 / 6227020800, -1 / 39916800, 1 / 362880, -1 / 5040, 1 / 120, -1 / 6):
        acc = acc * x2 + k
    out[small] = acc * x2 * xs
    xl = X[~small]
    out[~small] = np.sin(xl) - xl
    return out


@lru_cache(maxsize=256)
def _core_nodes(a_plus: float, a_minus: float, level: int, eta: float):
    """Nodes, weights and the z-independent parts of the integrand.

    ``level`` bounds the oscillation |Re z| <= 2**level, ``eta`` bounds |Im z|.
    """
    P = a_plus * a_minus
    rate = a_plus + a_minus - 2 * eta
    Y = 41.0 / rate
    omega = 2.0 ** level
    h = min(1.0, math.pi / max(a_plus, a_minus), 6.0 / omega)
    y, w = numerics.composite_gauss_legendre(0.0, Y, h, 20)
    sp = np.sinh(a_plus * y)
    sm = np.sinh(a_minus * y)
    D = 1.0 / (2 * sp * sm)
    vp = _x_over_sinh_minus_one(a_plus * y)
    vm = _x_over_sinh_minus_one(a_minus * y)
    E = (vp + vm + vp * vm) / (P * y)           # 2yD − 1/(P y)
    return y, w / y, D, E, Y, P


def _ruijsenaars_log(w: np.ndarray, a_plus: float, a_minus: float) -> np.ndarray:
    """i ∫₀^∞ (...) dy for an array of arguments w (the log of G(a+,a-;w))."""
    w = np.asarray(w, dtype=complex).ravel()
    out = np.empty(w.shape, complex)
    if w.size == 0:
        return out
    half = 0.5 * (a_plus + a_minus)
    eta_all = np.abs(w.imag)
    if np.any(eta_all >= half * (1 - 1e-12)):
        raise StripViolation(f"|Im z| must be < {half}")
    lv = np.maximum(0, np.ceil(np.log2(np.maximum(np.abs(w.real), 1.0)))).astype(int)
    # quantise the Im bound so node sets are cached and reused
    eta_q = np.ceil(eta_all / half * 16) / 16 * half
    eta_q = np.minimum(eta_q, np.maximum(eta_all, half * (1 - 1e-3)))
    for key in set(zip(lv.tolist(), eta_q.tolist())):
        sel = (lv == key[0]) & (eta_q == key[1])
        y, wy, D, E, Y, P = _core_nodes(a_plus, a_minus, key[0], key[1])
        ws = w[sel]
        res = np.empty(ws.shape, complex)
        step = max(1, int(2_000_000 // len(y)))
        for i in range(0, len(ws), step):
            wc = ws[i:i + step]
            X = 2.0 * y[None, :] * wc[:, None]
            B = _sin_minus_id(X) * D[None, :] + wc[:, None] * E[None, :]
            res[i:i + step] = B @ wy - wc / (P * Y)
        out[sel] = 1j * res
    return out


def eval_G_ruijsenaars(z, a_plus: float, a_minus: float, cfg=None, method: str = "fixed"):
    """Ruijsenaars' hyperbolic gamma G(a+, a-; z) for |Im z| < (a+ + a-)/2.

    ``method='adaptive'`` routes the y-integral through
    numerics.semiinfinite_integrate; the default fixed rule is vectorised.
    """
    scalar = np.ndim(z) == 0
    zz = np.atleast_1d(np.asarray(z, dtype=complex))
    if np.any(np.abs(zz.imag) >= 0.5 * (a_plus + a_minus)):
        raise StripViolation(f"|Im z| must be < {(a_plus + a_minus) / 2}")
    if method == "fixed":
        val = np.exp(_ruijsenaars_log(zz, a_plus, a_minus)).reshape(zz.shape)
    elif method == "adaptive":
        cfg = cfg or numerics.QuadratureConfig(1e-13, 1e-13, 20000)
        val = np.array([np.exp(1j * _ruijsenaars_adaptive(complex(zi), a_plus, a_minus, cfg))
                        for zi in zz])
    else:
        raise ValueError(method)
    return complex(val[0]) if scalar else val


def _ruijsenaars_adaptive(z: complex, a_plus, a_minus, cfg):
    P = a_plus * a_minus
    rate = a_plus + a_minus - 2 * abs(z.imag)
    Y = 41.0 / rate

    def f(y):
        y = y.real
        D = 1.0 / (2 * np.sinh(a_plus * y) * np.sinh(a_minus * y))
        vp = _x_over_sinh_minus_one(a_plus * y)
        vm = _x_over_sinh_minus_one(a_minus * y)
        E = (vp + vm + vp * vm) / (P * y)
        X = 2.0 * y * z
        return (_sin_minus_id(X.astype(complex)) * D + z * E) / y

    res = numerics.semiinfinite_integrate(f, Y, lambda Y: -z / (P * Y), cfg)
    return res.value


# ---------------------------------------------------------------------------
# G_b on the whole plane


def _pole_check(z: np.ndarray, b: float):
    """Raise PoleHit if any z is within POLE_EPS of -n b - m/b."""
    cand = np.nonzero((np.abs(z.imag) < POLE_EPS) & (z.real < POLE_EPS))[0]
    for k in cand:
        x = -z[k].real
        for m in range(0, int(x * b) + 2):
            n = int(round((x - m / b) / b))
            if n >= 0 and abs(z[k] + n * b + m / b) < POLE_EPS:
                raise PoleHit(complex(z[k]), n, m)


def _log1m_exp(u):
    """log(1 − e^u), any branch (only ever exponentiated or differenced)."""
    return np.log(-np.expm1(u))


def log_Gb_pair(z, bb: float, core_shift: int = 0) -> np.ndarray:
    """log G_b(z) for the pair of periods (bb, 1/bb); bb may exceed 1.

    The imaginary part of the log is not reduced to a principal branch.
    """
    z = np.atleast_1d(np.asarray(z, dtype=complex)).ravel()
    s_small, s_big = min(bb, 1 / bb), max(bb, 1 / bb)
    Q = bb + 1 / bb
    _pole_check(z, s_small)
    acc = np.zeros(z.shape, complex)
    cur = z.copy()
    for step in (s_big, s_small):
        k = np.rint((cur.real - Q / 2) / step).astype(int)
        kmax = int(np.abs(k).max()) if k.size else 0
        for j in range(kmax):
            down = k > j        # G(x) = (1 − e^{2πi s (x−s)}) G(x − s)
            up = k < -j         # G(x) = G(x + s) / (1 − e^{2πi s x})
            if down.any():
                x = cur[down] - step
                acc[down] += _log1m_exp(2j * math.pi * step * x)
                cur[down] = x
            if up.any():
                x = cur[up]
                acc[up] -= _log1m_exp(2j * math.pi * step * x)
                cur[up] = x + step
    for _ in range(abs(int(core_shift))):
        # step across the centre of the strip, so the point stays inside it
        down = cur.real >= Q / 2
        x = np.where(down, cur - s_small, cur)
        acc += np.where(down, 1, -1) * _log1m_exp(2j * math.pi * s_small * x)
        cur = np.where(down, x, cur + s_small)
    if np.any((cur.real <= 0) | (cur.real >= Q)):
        raise StripViolation("core shift leaves the Ruijsenaars strip")
    w = 1j * cur - 0.5j * Q
    core = _ruijsenaars_log(w, bb, 1 / bb)
    return core + 0.5j * math.pi * cur * (cur - Q) + acc


def log_Gb(z, p: BParams) -> np.ndarray:
    return log_Gb_pair(z, p.b)


def eval_Gb(z, p: BParams, cfg=None, core_shift: int = 0):
    """G_b(z); accepts a scalar or an array.

    ``core_shift`` moves the point where the integral is evaluated by that
    many extra steps of min(b, 1/b) across the strip centre (continuation
    consistency checks). Steps alternate, so only odd values move the point.
    """
    scalar = np.ndim(z) == 0
    zz = np.asarray(z, dtype=complex)
    val = np.exp(log_Gb_pair(zz, p.b, core_shift)).reshape(zz.shape)
    return complex(val) if scalar else val


def eval_Sb(z, p: BParams, cfg=None):
    """S_b(z) = e^{−(πi/2) z(z−Q)} G_b(z)."""
    scalar = np.ndim(z) == 0
    zz = np.asarray(z, dtype=complex)
    lg = log_Gb(zz, p).reshape(zz.shape) - 0.5j * math.pi * zz * (zz - p.Q)
    val = np.exp(lg)
    return complex(val) if scalar else val


def log_Sb(z, p: BParams):
    zz = np.asarray(z, dtype=complex)
    return log_Gb(zz, p).reshape(zz.shape) - 0.5j * math.pi * zz * (zz - p.Q)


def eval_gb(x, p: BParams, cfg=None):
    """g_b(x) = ζ̄_b / G_b(Q/2 + log(x)/(2πib)), principal log, cut on (−∞, 0]."""
    scalar = np.ndim(x) == 0
    xx = np.atleast_1d(np.asarray(x, dtype=complex))
    if np.any((np.abs(xx.imag) == 0) & (xx.real <= 0)):
        raise BranchCut("g_b is evaluated with the principal log; x on (-inf, 0]")
    arg = p.Q / 2 + np.log(xx) / (2j * math.pi * p.b)
    val = p.zeta_bar * np.exp(-log_Gb(arg, p))
    return complex(val[0]) if scalar else val


def zeta_b(p: BParams) -> complex:
    return p.zeta_b


# ---------------------------------------------------------------------------
# metadata, limits, bounds


@dataclass(frozen=True)
class PoleInfo:
    location: complex
    order: int
    n: int
    m: int
    residue_data: complex


def residue_info(n: int, m: int, p: BParams) -> PoleInfo:
    """Pole of G_b at −nb − m/b; residue_data is Res_{z=nb+m/b} 1/G_b(Q+z)."""
    if n < 0 or m < 0:
        raise DomainError("n, m must be nonnegative")
    r = -1.0 / (2 * math.pi)
    for k in range(1, n + 1):
        r /= 1 - p.q ** (2 * k)
    for l in range(1, m + 1):
        r /= 1 - p.q_tilde ** (2 * l)
    return PoleInfo(complex(-n * p.b - m / p.b), 1, n, m, complex(r))


def numeric_residue(n: int, m: int, p: BParams, radius: float = 0.02, npts: int = 64) -> complex:
    """Res of 1/G_b(Q+z) at z = nb+m/b by the trapezoid rule on a small circle."""
    z0 = n * p.b + m / p.b
    th = 2 * math.pi * np.arange(npts) / npts
    z = z0 + radius * np.exp(1j * th)
    vals = np.exp(-log_Gb(p.Q + z, p)) * radius * np.exp(1j * th)
    return complex(vals.mean())


CLASSICAL_PHASE = -1j


def classical_limit_probe(x, b_list: Sequence[float], cfg=None, phase: complex = CLASSICAL_PHASE):
    """[(b, ratio, |ratio − Γ(x)|)] for ratio = G_b(bx)/(phase · b (1−q²)^{x−1}).

    For real b the constant is pinned by x=1: the functional equation and
    x G_b(x) → 1/(2π) give G_b(b) = −ib exactly, so the ratio is −i/phase
    for every b.  The value e^{−iπ/4} belongs to the limit b² → i0⁺ and can
    be passed explicitly.
    """
    x = complex(x)
    if x.imag == 0 and x.real <= 0 and x.real == int(x.real):
        raise DomainError("x must avoid the poles of Gamma")
    g = complex(cgamma(x))
    lphase = cmath.log(phase)
    out = []
    for b in b_list:
        p = make_params(b)
        one_m = 1 - p.q ** 2
        # principal power; arg(1−q²) lies in (−π/2, π/2) for 0 < b < 1
        lg = complex(log_Gb(b * x, p)[0])
        ratio = cmath.exp(lg - (lphase + math.log(b) + (x - 1) * cmath.log(one_m)))
        out.append((b, ratio, abs(ratio - g)))
    return out


def gb_ratio_tail_bound(s: complex, t: complex, x: float, p: BParams) -> float:
    """Envelope for |G_b(s+ix)/G_b(t+ix)| (safety factor 4)."""
    if x >= 0:
        return 4.0
    return 4.0 * math.exp(2 * math.pi * x * (complex(t) - complex(s)).real)
