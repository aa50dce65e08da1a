"""Principal series of U_q(gl(2,R)) on the Gaussian class 𝒲, Casimir
eigenfunctions and the eigenfunction transform, and the regular
representation generators.

Operators are built from three exact primitives on 𝒲: multiplication by
e^{c x_k}, the complex shift x_k → x_k + δ, and scalar multiples.  An
exponential of an affine combination e^{a x + c p_x} (with p = (2πi)⁻¹∂_x)
is split by Baker–Campbell–Hausdorff: e^{ax+cp} = e^{−iac/4π} e^{ax} e^{cp},
and e^{cp} f(x) = f(x − ic/2π), so e^{2πbp} f(x) = f(x − ib).
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from itertools import product
from typing import Callable, Dict, Iterable, Optional, Sequence, Tuple

import numpy as np
from scipy.special import comb

from .errors import DomainError, NonConvergence
from .identities import IdentityReport, make_report
from .qdilog import BParams, log_Sb, make_params

Poly = Dict[Tuple[int, ...], complex]


def _key(z: complex) -> Tuple[float, float]:
    return (round(z.real, 11), round(z.imag, 11))


@dataclass(frozen=True)
class Term:
    alpha: Tuple[complex, ...]
    beta: Tuple[complex, ...]
    poly: Tuple[Tuple[Tuple[int, ...], complex], ...]


class WFunction:
    """Finite sum of c·exp(−Σ α_k x_k² + Σ β_k x_k)·x^e over n variables.

    Every α_k has positive real part, so each term is a Gaussian-decaying
    entire function.  All operations return new instances.
    """

    def __init__(self, terms: Iterable[Term], nvars: int = 1, names: Optional[Sequence[str]] = None):
        self.nvars = nvars
        self.names = tuple(names) if names else tuple(f"x{k}" for k in range(nvars))
        merged: Dict[tuple, Tuple[Term, Poly]] = {}
        for t in terms:
            if len(t.alpha) != nvars or len(t.beta) != nvars:
                raise DomainError("term arity does not match nvars")
            if any(a.real <= 0 for a in t.alpha):
                raise DomainError("every term needs Re α > 0")
            k = tuple(_key(a) for a in t.alpha) + tuple(_key(b) for b in t.beta)
            if k not in merged:
                merged[k] = (t, {})
            acc = merged[k][1]
            for e, c in t.poly:
                acc[e] = acc.get(e, 0) + c
        self.terms = tuple(Term(t.alpha, t.beta, tuple(sorted((e, c) for e, c in acc.items() if c != 0)))
                           for t, acc in merged.values())
        self.terms = tuple(t for t in self.terms if t.poly)

    # constructors
    @classmethod
    def gaussian(cls, alpha=1.0, beta=0.0, coeff=1.0, poly: Optional[Sequence[complex]] = None):
        """coeff·e^{−αx²+βx}·P(x) with P given by ascending coefficients."""
        poly = [1.0] if poly is None else list(poly)
        pt = tuple(((k,), complex(c) * coeff) for k, c in enumerate(poly) if c != 0)
        return cls([Term((complex(alpha),), (complex(beta),), pt)], 1)

    @classmethod
    def tensor(cls, *factors: "WFunction", names=None) -> "WFunction":
        out = [Term((), (), (((), 1 + 0j),))]
        for f in factors:
            new = []
            for t in out:
                for u in f.terms:
                    poly = tuple((e1 + e2, c1 * c2) for (e1, c1), (e2, c2) in product(t.poly, u.poly))
                    new.append(Term(t.alpha + u.alpha, t.beta + u.beta, poly))
            out = new
        n = sum(f.nvars for f in factors)
        return cls(out, n, names)

    # evaluation
    def __call__(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=complex)
        pts = x.reshape(-1, 1) if self.nvars == 1 else x.reshape(-1, self.nvars)
        out = np.zeros(pts.shape[0], dtype=complex)
        for t in self.terms:
            a, b = np.array(t.alpha), np.array(t.beta)
            g = np.exp(-(pts ** 2) @ a + pts @ b)
            P = np.zeros(pts.shape[0], dtype=complex)
            for e, c in t.poly:
                P += c * np.prod(pts ** np.array(e), axis=1)
            out += g * P
        return out.reshape(x.shape[:-1] if self.nvars > 1 else x.shape)

    # algebra
    def _new(self, terms):
        return WFunction(terms, self.nvars, self.names)

    def __add__(self, other: "WFunction") -> "WFunction":
        return self._new(self.terms + other.terms)

    def __sub__(self, other: "WFunction") -> "WFunction":
        return self + other * -1

    def __mul__(self, c) -> "WFunction":
        c = complex(c)
        return self._new([Term(t.alpha, t.beta, tuple((e, v * c) for e, v in t.poly)) for t in self.terms])

    __rmul__ = __mul__

    def mul_exp(self, k: int, c: complex) -> "WFunction":
        """Multiply by e^{c x_k}."""
        out = []
        for t in self.terms:
            beta = list(t.beta)
            beta[k] = beta[k] + c
            out.append(Term(t.alpha, tuple(beta), t.poly))
        return self._new(out)

    def mul_gauss(self, k: int, a: complex) -> "WFunction":
        """Multiply by e^{−a x_k²} (result must keep Re α > 0)."""
        out = []
        for t in self.terms:
            alpha = list(t.alpha)
            alpha[k] = alpha[k] + a
            out.append(Term(tuple(alpha), t.beta, t.poly))
        return self._new(out)

    def mul_monomial(self, k: int, power: int = 1, c: complex = 1.0) -> "WFunction":
        out = []
        for t in self.terms:
            poly = []
            for e, v in t.poly:
                e2 = list(e)
                e2[k] += power
                poly.append((tuple(e2), v * c))
            out.append(Term(t.alpha, t.beta, tuple(poly)))
        return self._new(out)

    def shift(self, k: int, d: complex) -> "WFunction":
        """f(x) ↦ f(x + d e_k)."""
        d = complex(d)
        out = []
        for t in self.terms:
            a, b = t.alpha[k], t.beta[k]
            const = cmath.exp(-a * d * d + b * d)
            beta = list(t.beta)
            beta[k] = b - 2 * a * d
            poly: Poly = {}
            for e, v in t.poly:
                n = e[k]
                for j in range(n + 1):
                    e2 = list(e)
                    e2[k] = j
                    e2 = tuple(e2)
                    poly[e2] = poly.get(e2, 0) + v * comb(n, j, exact=True) * d ** (n - j)
            out.append(Term(t.alpha, tuple(beta), tuple((e, v * const) for e, v in poly.items())))
        return self._new(out)

    def exp_affine(self, k: int, a: complex, c: complex) -> "WFunction":
        """Apply e^{a x_k + c p_k}."""
        return self.shift(k, -1j * c / (2 * math.pi)).mul_exp(k, a) * cmath.exp(-1j * a * c / (4 * math.pi))

    def decay_width(self, tol: float = 1e-16) -> float:
        """Half-width beyond which every term is below tol on the real axes."""
        w = 1.0
        for t in self.terms:
            mag = sum(abs(v) for _, v in t.poly)
            deg = max(sum(e) for e, _ in t.poly)
            for a, b in zip(t.alpha, t.beta):
                ra = a.real
                center = abs(b.real) / (2 * ra)
                peak = b.real ** 2 / (4 * ra)
                r = math.sqrt(max(0.0, math.log(max(mag, 1e-300) / tol) + peak + deg * 3) / ra)
                w = max(w, center + r)
        return w

    def __repr__(self):
        return f"WFunction({len(self.terms)} terms, nvars={self.nvars})"


# ---------------------------------------------------------------------------
# principal series P_{λ,t}


@dataclass(frozen=True)
class GeneratorLabel:
    name: str                  # E, F, K, K0
    side: str = "principal"    # principal | left-regular | right-regular
    dual: bool = False         # b → 1/b

    def __post_init__(self):
        if self.name not in ("E", "F", "K", "K0"):
            raise DomainError(f"unknown generator {self.name}")
        if self.side not in ("principal", "left-regular", "right-regular"):
            raise DomainError(f"unknown side {self.side}")


def c0(p: BParams, dual: bool = False) -> complex:
    """i/(q − q⁻¹) (= 1/(2 sin πb²) > 0)."""
    q = p.q_tilde if dual else p.q
    return 1j / (q - 1 / q)


def _principal(name: str, lam: float, t: float, f: WFunction, p: BParams, dual: bool = False) -> WFunction:
    b = 1 / p.b if dual else p.b
    q = p.q_tilde if dual else p.q
    c = c0(p, dual)
    pb = math.pi * b
    if name == "K0":
        return f * math.exp(pb * t)
    if name == "K":
        return f.mul_exp(0, -pb)
    if name == "E":
        g = f.shift(0, 1j * b)
        return (g.mul_exp(0, pb) * (q ** 0.5 * cmath.exp(-pb * lam))
                + g.mul_exp(0, -pb) * (q ** -0.5 * cmath.exp(pb * lam))) * c
    if name == "F":
        g = f.shift(0, -1j * b)
        return (g.mul_exp(0, pb) * (q ** -0.5 * cmath.exp(pb * lam))
                + g.mul_exp(0, -pb) * (q ** 0.5 * cmath.exp(-pb * lam))) * c
    raise DomainError(name)


def apply_generator(g, lam: float, t: float, f: WFunction, p: Optional[BParams] = None) -> WFunction:
    """Action of E, F, K, K0 in P_{λ,t}:

        K0 = e^{πbt},  K = e^{−πbs},
        E f(s) = i/(q−q⁻¹) (q^{1/2}e^{πb(s−λ)} + q^{−1/2}e^{−πb(s−λ)}) f(s+ib),
        F f(s) = i/(q−q⁻¹) (q^{−1/2}e^{πb(s+λ)} + q^{1/2}e^{−πb(s+λ)}) f(s−ib).
    """
    p = p or make_params(0.775)
    lab = g if isinstance(g, GeneratorLabel) else GeneratorLabel(g)
    if lab.side != "principal":
        raise DomainError("use apply_regular_generator for the regular sides")
    if f.nvars != 1:
        raise DomainError("principal series acts on one variable")
    return _principal(lab.name, lam, t, f, p, lab.dual)


def dual_generator_probe(g, lam: float, t: float, f: WFunction, p: Optional[BParams] = None) -> WFunction:
    """The b → 1/b generators Ẽ, F̃, K̃, K̃0 applied exactly on 𝒲."""
    name = g.name if isinstance(g, GeneratorLabel) else g
    return apply_generator(GeneratorLabel(name, "principal", True), lam, t, f, p)


def _pts(sample_points) -> np.ndarray:
    return np.asarray(sample_points, dtype=complex)


def commutator_residual(lhs: WFunction, rhs: WFunction, f: WFunction, pts) -> float:
    pts = _pts(pts)
    return float(np.max(np.abs(lhs(pts) - rhs(pts)) / np.abs(f(pts))))


def check_serre_relations(lam: float, t: float, f: WFunction, sample_points,
                          p: Optional[BParams] = None, tol: float = 1e-10) -> IdentityReport:
    """(EF − FE)f against (K² − K⁻²)/(q − q⁻¹) f, together with KE = qEK,
    KF = q⁻¹FK and the centrality of K0; the report carries the worst
    residual relative to |f| at the sample points."""
    p = p or make_params(0.775)
    q = p.q
    A = lambda name, h: apply_generator(name, lam, t, h, p)
    res = {}
    ef = A("E", A("F", f)) - A("F", A("E", f))
    kk = (A("K", A("K", f)) - f.mul_exp(0, 2 * math.pi * p.b)) * (1 / (q - 1 / q))
    res["EF-FE"] = commutator_residual(ef, kk, f, sample_points)
    res["KE-qEK"] = commutator_residual(A("K", A("E", f)), A("E", A("K", f)) * q, f, sample_points)
    res["KF-FK/q"] = commutator_residual(A("K", A("F", f)), A("F", A("K", f)) * (1 / q), f, sample_points)
    res["K0"] = max(commutator_residual(A("K0", A(g, f)), A(g, A("K0", f)), f, sample_points)
                    for g in ("E", "F", "K"))
    worst = max(res.values())
    rep = make_report("principal-series", {"lambda": lam, "t": t, "b": p.b}, worst, 0.0, tol)
    rep.abs_err = rep.rel_err = worst
    rep.passed = worst < tol
    rep.params.update({k: float(v) for k, v in res.items()})
    return rep


def casimir_operator(lam: float, t: float, f: WFunction, p: BParams) -> WFunction:
    """C = FE + (qK² + q⁻¹K⁻² − 2)/(q − q⁻¹)²."""
    q = p.q
    A = lambda name, h: apply_generator(name, lam, t, h, p)
    pb2 = 2 * math.pi * p.b
    rest = (f.mul_exp(0, -pb2) * q + f.mul_exp(0, pb2) * (1 / q) - f * 2) * (1 / (q - 1 / q) ** 2)
    return A("F", A("E", f)) + rest


def casimir_apply(lam: float, t: float, f: WFunction, sample_points, p: Optional[BParams] = None):
    """(mean, variance) of (Cf)(s)/f(s) over the sample points."""
    p = p or make_params(0.775)
    pts = _pts(sample_points)
    r = casimir_operator(lam, t, f, p)(pts) / f(pts)
    mean = complex(np.mean(r))
    return mean, float(np.mean(np.abs(r - mean) ** 2))


def casimir_scalar(lam: float, p: BParams) -> complex:
    """Closed form (i/(q−q⁻¹))²(2cosh(2πbλ) + 2) of the Casimir scalar;
    the suite compares the measured value against it."""
    return c0(p) ** 2 * (2 * math.cosh(2 * math.pi * p.b * lam) + 2)


def intertwiner(lam: float, p: BParams, convention: str = "exact") -> Callable:
    """Multiplier M with P_{−λ}(g) M = M P_λ(g) for every generator g.

    convention="printed": x ↦ G_b(Q/2+iλ−ix)/G_b(Q/2−iλ−ix) alone.  By the
    shift equation M(x+ib)/M(x) picks up an extra e^{−2πbλ}, so this only
    intertwines up to E → e^{−2πbλ}E, F → e^{2πbλ}F.
    convention="exact": the same ratio times the unimodular e^{−2πiλx},
    which removes that scalar.
    """
    from .qdilog import log_Gb
    if convention not in ("exact", "printed"):
        raise DomainError(f"unknown convention {convention!r}")
    h = p.Q / 2
    extra = 1.0 if convention == "exact" else 0.0

    def M(x):
        x = np.asarray(x, complex)
        return np.exp(log_Gb(h + 1j * lam - 1j * x, p) - log_Gb(h - 1j * lam - 1j * x, p)
                      - extra * 2j * math.pi * lam * x).reshape(x.shape)
    return M


def check_intertwiner(lam: float, t: float, f: WFunction, sample_points, p: Optional[BParams] = None,
                      convention: str = "exact", tol: float = 1e-10) -> IdentityReport:
    """Pointwise P_{−λ}(g)(Mf) against M·P_λ(g)f for g = E, F, K, K0.

    Mf leaves 𝒲, so the shifted values are taken from M and f directly.
    """
    p = p or make_params(0.775)
    M = intertwiner(lam, p, convention)
    x = _pts(sample_points)
    c, q, pb = c0(p), p.q, math.pi * p.b
    Mf = lambda y: M(y) * f(y)
    lhs = {"E": c * (q ** 0.5 * np.exp(pb * (x + lam)) + q ** -0.5 * np.exp(-pb * (x + lam))) * Mf(x + 1j * p.b),
           "F": c * (q ** -0.5 * np.exp(pb * (x - lam)) + q ** 0.5 * np.exp(-pb * (x - lam))) * Mf(x - 1j * p.b),
           "K": np.exp(-pb * x) * Mf(x),
           "K0": math.exp(pb * t) * Mf(x)}
    res = {g: float(np.max(np.abs(v - M(x) * apply_generator(g, lam, t, f, p)(x)) / np.abs(Mf(x))))
           for g, v in lhs.items()}
    worst = max(res.values())
    rep = make_report("intertwiner", {"lambda": lam, "t": t, "b": p.b, "convention": convention},
                      worst, 0.0, tol)
    rep.abs_err = rep.rel_err = worst
    rep.passed = worst < tol
    rep.params.update(res)
    return rep


# ---------------------------------------------------------------------------
# Casimir eigenfunctions and the transform


def eval_Phi(lam: float, x, p: Optional[BParams] = None, cfg=None):
    """Φ_λ(x) = S_b(−ix+iλ) S_b(−ix−iλ)."""
    p = p or make_params(0.775)
    x = np.asarray(x, dtype=complex)
    out = np.exp(log_Sb(-1j * x + 1j * lam, p) + log_Sb(-1j * x - 1j * lam, p))
    return complex(out) if out.ndim == 0 else out


def casimir_C(f: Callable, x, p: BParams):
    """𝐂f(x) = (e^{2πbx} + e^{−2πbx}) f(x) + f(x + ib) for a callable f."""
    x = np.asarray(x, dtype=complex)
    return 2 * np.cosh(2 * math.pi * p.b * x) * f(x) + f(x + 1j * p.b)


def casimir_C_w(f: WFunction, p: BParams) -> WFunction:
    pb2 = 2 * math.pi * p.b
    return f.mul_exp(0, pb2) + f.mul_exp(0, -pb2) + f.shift(0, 1j * p.b)


def plancherel_density(lam, p: Optional[BParams] = None, cfg=None, convention: str = "measure"):
    """Density of the Plancherel measure in λ.

    convention="printed": 4 sinh(πbλ) sinh(πλ/b), the closed form as printed.
    convention="measure": 4 sinh(2πbλ) sinh(2πλ/b), which is what
    |S_b(Q+2iλ)|² equals and what the transform uses.
    """
    p = p or make_params(0.775)
    lam = np.asarray(lam, dtype=float)
    if np.any(lam < 0):
        raise DomainError("λ must be non-negative")
    k = {"printed": 1.0, "measure": 2.0}[convention]
    out = 4 * np.sinh(k * math.pi * p.b * lam) * np.sinh(k * math.pi * lam / p.b)
    return float(out) if out.ndim == 0 else out


def plancherel_measure_direct(lam, p: BParams):
    """|S_b(Q+2iλ)|² by direct evaluation."""
    lam = np.asarray(lam, dtype=float)
    out = np.abs(np.exp(log_Sb(p.Q + 2j * lam, p))) ** 2
    return float(out) if out.ndim == 0 else out


def _mu(lam, p):
    lam = np.asarray(lam, dtype=complex)
    return 4 * np.sinh(2 * math.pi * p.b * lam) * np.sinh(2 * math.pi * lam / p.b)


@dataclass(frozen=True)
class TransformGrid:
    """Uniform lattice shared by the x- and λ-trapezoid rules.

    Both integrands are analytic in strips around their contours and decay
    at least exponentially, so the trapezoid rule converges geometrically;
    a common step makes every kernel argument a lattice point of x ± λ.
    """
    step: float = 0.02
    x_half_width: float = 8.0
    lam_max: float = 5.0


def _log_sb_unique(u: np.ndarray, p: BParams) -> np.ndarray:
    """log S_b on an array with many repeated entries."""
    flat = u.ravel()
    key = np.round(flat.real, 11) + 1j * np.round(flat.imag, 11)
    uniq, inv = np.unique(key, return_inverse=True)
    return log_Sb(uniq, p)[inv].reshape(u.shape)


def _forward_height(p: BParams) -> float:
    return -min(p.b, 1 / p.b) / 8


def forward_transform(f: Callable, lam, p: Optional[BParams] = None,
                      grid: TransformGrid = TransformGrid()) -> np.ndarray:
    """Φf(λ) = ∫ f(x) / (S_b(Q−ix−iλ) S_b(Q−ix+iλ)) dx along Im x = −min(b,1/b)/8.

    The kernel's poles sit at x = ∓λ + i(nb+m/b), so the line passes below
    them.  Trapezoid rule in x; λ may be complex.
    """
    p = p or make_params(0.775)
    lam = np.atleast_1d(np.asarray(lam, dtype=complex))
    h0 = _forward_height(p)
    n = int(round(grid.x_half_width / grid.step))
    xs = grid.step * np.arange(-n, n + 1)
    fz = f(xs + 1j * h0)
    keep = np.abs(fz) > 1e-300
    xs, fz = xs[keep], fz[keep]
    base = p.Q + h0 * 1j * -1j          # Q − i(i h0) = Q + h0
    U = xs[None, :] + lam[:, None]
    V = xs[None, :] - lam[:, None]
    lk = _log_sb_unique(base - 1j * U, p) + _log_sb_unique(base - 1j * V, p)
    return grid.step * (np.exp(-lk) * fz[None, :]).sum(axis=1)


def inverse_transform(F: Callable, x, p: Optional[BParams] = None,
                      grid: TransformGrid = TransformGrid()) -> np.ndarray:
    """Φ⁻¹F(x) = lim_{ε→0} ∫_0^∞ Φ_λ(x+iε) e^{−2πxε} F(λ) dμ(λ).

    In λ, Φ_λ(x) has a simple pole at λ0 = |x| with residue
    R = sign(x) S_b(−2ix) F(λ0) μ(λ0)/(2πi); the ε-prescription passes
    below it for x > 0 and above it for x < 0, which in both cases gives
    the principal value plus ½ S_b(−2ix) F(λ0) μ(λ0).  The integrand is
    even in λ, so the pole pair ±λ0 is subtracted as 2Rλ0/(λ²−λ0²) and the
    remainder is summed by the trapezoid rule on [0, Λ].  F must accept an
    array of λ and be even.
    """
    p = p or make_params(0.775)
    x = np.atleast_1d(np.asarray(x, dtype=float))
    h = grid.step
    l0 = np.abs(x)
    K = int(math.ceil((max(grid.lam_max, float(l0.max()) + 2.0)) / h))
    U = K * h
    # keep λ0 away from the nodes: plain lattice kh or midpoint lattice (k+½)h
    frac = (l0 / h) % 1.0
    use_mid = np.abs(frac - 0.5) > 0.25
    out = np.empty(x.shape, complex)
    for mid in (False, True):
        sel = use_mid == mid
        if not np.any(sel):
            continue
        if mid:
            lam = h * (np.arange(K) + 0.5)
            wts = np.full(lam.shape, h)
        else:
            lam = h * np.arange(K + 1)
            wts = np.full(lam.shape, h)
            wts[0] = wts[-1] = h / 2
        out[sel] = _inverse_on(F, x[sel], lam, wts, U, mid, p)
    return out


def _inverse_on(F, x, lam, wts, U, mid, p):
    h = wts.max()
    l0 = np.abs(x)
    Fl = F(lam + 0j)
    mul = _mu(lam, p)
    phi = np.exp(_log_sb_unique(-1j * x[:, None] + 1j * lam[None, :], p)
                 + _log_sb_unique(-1j * x[:, None] - 1j * lam[None, :], p))
    g = phi * (Fl * mul)[None, :]
    out = np.empty(x.shape, complex)
    nz = l0 > 0
    out[~nz] = (g[~nz] * wts).sum(axis=1)
    if np.any(nz):
        xz, lz = x[nz], l0[nz]
        F0 = F(lz + 0j)
        half = np.exp(log_Sb(-2j * xz + 0j, p)) * F0 * _mu(lz, p)
        R = np.sign(xz) * half / (2j * math.pi)
        pole = 2 * (R * lz)[:, None] / (lam[None, :] ** 2 - lz[:, None] ** 2)
        smooth = ((g[nz] - pole) * wts).sum(axis=1)
        # Euler–Maclaurin end correction at U for the subtracted pole pair
        dpole = -4 * R * lz * U / (U ** 2 - lz ** 2) ** 2
        smooth += (-h ** 2 / 24 if mid else h ** 2 / 12) * dpole
        out[nz] = smooth + R * np.log((U - lz) / (U + lz)) + 0.5 * half
    return out


def eigenfunction_transform(direction: str, f: Callable, points, p: Optional[BParams] = None,
                            grid: TransformGrid = TransformGrid()) -> np.ndarray:
    """direction='forward': samples of Φf at the λ points;
    direction='inverse': samples of Φ⁻¹F at the x points (F callable in λ)."""
    if direction == "forward":
        return forward_transform(f, points, p, grid)
    if direction == "inverse":
        return inverse_transform(f, points, p, grid)
    raise DomainError("direction must be forward or inverse")


# ---------------------------------------------------------------------------
# regular representation (variables s1, t1, s2, t2)

S1, T1, S2, T2 = 0, 1, 2, 3


def _C_t1(f: WFunction, p: BParams, post: bool = False) -> WFunction:
    """𝐂 in the variable t1: e^{2πbt1} + e^{−2πbt1} + e^{−2πb(p_{t1}−t1)}, or
    with post=True the form e^{2πbt1} + e^{−2πbt1} + e^{−2πbp_{t1}} obtained
    after multiplying by e^{−πit1²}."""
    pb2 = 2 * math.pi * p.b
    third = f.exp_affine(T1, 0, -pb2) if post else f.exp_affine(T1, pb2, -pb2)
    return f.mul_exp(T1, pb2) + f.mul_exp(T1, -pb2) + third


def _left(name: str, f: WFunction, p: BParams, variant: str = "compact") -> WFunction:
    pb = math.pi * p.b
    c = c0(p)
    if name == "K0":
        return f.mul_exp(S2, -pb / 2)
    if name == "K":
        return f.mul_exp(S1, pb)
    if name == "E":
        return f.exp_affine(S1, pb, 2 * pb).mul_exp(S2, pb / 2) * c
    if name == "F":
        q = p.q
        if variant in ("compact", "post"):
            g = (f.exp_affine(S1, pb, -2 * pb) + f.exp_affine(S1, -3 * pb, -2 * pb)
                 + _C_t1(f.exp_affine(S1, -pb, -2 * pb), p, variant == "post"))
            return g.mul_exp(S2, -pb / 2) * c
        # expanded product form, with the power of e^{πb s1} as printed
        power = {"expanded-printed": 2 * pb, "expanded": pb}[variant]
        t1 = f.exp_affine(T1, 0, -2 * pb).exp_affine(S1, 0, -2 * pb).mul_exp(S1, -pb).mul_exp(T1, 2 * pb)
        g = f.exp_affine(S1, 0, -2 * pb).mul_exp(S1, power)
        g = g + (g.mul_exp(S1, -2 * pb).mul_exp(T1, 2 * pb)
                 + g.mul_exp(S1, -2 * pb).mul_exp(T1, -2 * pb)) * (1 / q) \
            + g.mul_exp(S1, -4 * pb) * (1 / q ** 2)
        return (t1 + g).mul_exp(S2, -pb / 2) * (c * q ** 0.5)
    raise DomainError(name)


def _right(name: str, f: WFunction, p: BParams, variant: str = "pre") -> WFunction:
    pb = math.pi * p.b
    c = c0(p)
    if name == "K0":
        return f.mul_exp(S2, -pb / 2)
    if name == "K":
        return f.mul_exp(T2, pb)
    if name == "F":
        return f.exp_affine(T2, -pb, -2 * pb).mul_exp(S2, -pb / 2) * c
    if name == "E":
        # "post-printed" keeps the sign of t2 in the 𝐂-term as printed after
        # the e^{−πit1²} multiplication
        sgn = {"pre": +1, "post": +1, "post-printed": -1}[variant]
        g = (f.exp_affine(T2, -pb, 2 * pb) + f.exp_affine(T2, 3 * pb, 2 * pb)
             + _C_t1(f.exp_affine(T2, sgn * pb, 2 * pb), p, variant != "pre"))
        return g.mul_exp(S2, pb / 2) * c
    raise DomainError(name)


def apply_regular_generator(g, f: WFunction, p: Optional[BParams] = None,
                            sample_points=None, variant: Optional[str] = None) -> WFunction:
    """Generators of the left/right regular representation on functions of
    (s1, t1, s2, t2), in the form before the diagonalising transforms.

    left:  K0 = e^{−πbs2/2}, K = e^{πbs1}, E = c e^{πbs2/2} e^{πbs1+2πbp_{s1}},
           F = c e^{−πbs2/2}(e^{−πb(2p_{s1}−s1)} + e^{−πb(2p_{s1}+3s1)} + 𝐂_{t1} e^{−πb(2p_{s1}+s1)})
           with 𝐂_{t1} = e^{2πbt1} + e^{−2πbt1} + e^{−2πb(p_{t1}−t1)};
    right: K0 = e^{−πbs2/2}, K = e^{πbt2}, F = c e^{−πbs2/2} e^{−πb(t2+2p_{t2})},
           E = c e^{πbs2/2}(e^{πb(2p_{t2}−t2)} + e^{πb(2p_{t2}+3t2)} + 𝐂_{t1} e^{πb(2p_{t2}+t2)}),
    where c = i/(q−q⁻¹).  If sample_points is given the values there are
    returned instead of the WFunction.
    """
    p = p or make_params(0.775)
    lab = g if isinstance(g, GeneratorLabel) else GeneratorLabel(*g)
    if f.nvars != 4:
        raise DomainError("regular generators act on functions of (s1, t1, s2, t2)")
    if lab.side == "left-regular":
        out = _left(lab.name, f, p, variant or "compact")
    elif lab.side == "right-regular":
        out = _right(lab.name, f, p, variant or "pre")
    else:
        raise DomainError("side must be left-regular or right-regular")
    return out if sample_points is None else out(_pts(sample_points))


def regular_relation_residuals(side: str, f: WFunction, pts, p: BParams, variant=None) -> dict:
    q = p.q
    A = lambda name, h: apply_regular_generator(GeneratorLabel(name, side), h, p, variant=variant)
    res = {}
    K2 = A("K", A("K", f))
    Km2 = f.mul_exp(S1 if side == "left-regular" else T2, -2 * math.pi * p.b)
    res["EF-FE"] = commutator_residual(A("E", A("F", f)) - A("F", A("E", f)),
                                       (K2 - Km2) * (1 / (q - 1 / q)), f, pts)
    res["KE-qEK"] = commutator_residual(A("K", A("E", f)), A("E", A("K", f)) * q, f, pts)
    res["KF-FK/q"] = commutator_residual(A("K", A("F", f)), A("F", A("K", f)) * (1 / q), f, pts)
    res["K0"] = max(commutator_residual(A("K0", A(g, f)), A(g, A("K0", f)), f, pts)
                    for g in ("E", "F", "K"))
    return res


def left_right_commutation(f: WFunction, pts, p: BParams) -> float:
    L = lambda name, h: apply_regular_generator(GeneratorLabel(name, "left-regular"), h, p)
    R = lambda name, h: apply_regular_generator(GeneratorLabel(name, "right-regular"), h, p)
    worst = 0.0
    for a in ("E", "F", "K", "K0"):
        for b_ in ("E", "F", "K", "K0"):
            if a == "K0" and b_ == "K0":
                continue
            worst = max(worst, commutator_residual(L(a, R(b_, f)), R(b_, L(a, f)), f, pts))
    return worst
