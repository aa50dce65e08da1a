"""Exact noncommutative polynomials for the quantum plane, its double
GL_q^+(2,R) and U_q(gl(2,R)).

Coefficients live in Z[t^±1, c^±1] localised at (q − q⁻¹), where t = q^{1/2}
and c is the formal pairing constant.  Words are exponent vectors over an
ordered generator list; products are normal ordered by rewriting adjacent
out-of-order pairs.
"""
from __future__ import annotations

import cmath
import itertools
import math
import random
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .errors import DegreeLimit, DomainError
from .identities import IdentityReport, make_report
from .qdilog import BParams, eval_Gb, make_params

Mono = Tuple[int, int]          # (t exponent, c exponent)


# ---------------------------------------------------------------------------
# coefficient ring


def _div_qdiff(poly: Dict[Mono, int]) -> Optional[Dict[Mono, int]]:
    """poly / (t² − t⁻²) if the division is exact, else None."""
    by_c: Dict[int, Dict[int, int]] = {}
    for (te, ce), v in poly.items():
        by_c.setdefault(ce, {})[te] = v
    out: Dict[Mono, int] = {}
    for ce, row in by_c.items():
        e0 = min(row)
        deg = max(row) - e0
        r = [0] * (deg + 1)
        for te, v in row.items():
            r[te - e0] = v
        s = [0] * max(deg - 3, 0)
        for d in range(deg, 3, -1):
            a = r[d]
            if a:
                s[d - 4] += a
                r[d] = 0
                r[d - 4] += a
        if any(r[:4]):
            return None
        for k, v in enumerate(s):
            if v:
                out[(k + e0 + 2, ce)] = v
    return out


class Laurent:
    """Exact element num / (q − q⁻¹)^den with num ∈ Z[t^±1, c^±1]."""

    __slots__ = ("num", "den")

    def __init__(self, num: Optional[Dict[Mono, int]] = None, den: int = 0):
        num = {k: v for k, v in (num or {}).items() if v}
        while den > 0 and num:
            red = _div_qdiff(num)
            if red is None:
                break
            num, den = red, den - 1
        if not num:
            den = 0
        self.num, self.den = num, den

    @classmethod
    def const(cls, n: int = 1) -> "Laurent":
        return cls({(0, 0): n})

    @classmethod
    def mono(cls, t: int = 0, c: int = 0, n: int = 1) -> "Laurent":
        return cls({(t, c): n})

    @classmethod
    def qpow(cls, k: int) -> "Laurent":
        return cls({(2 * k, 0): 1})

    @classmethod
    def qint(cls, n: int) -> "Laurent":
        """[n]_q = q^{n−1} + q^{n−3} + … + q^{1−n}."""
        if n < 0:
            return -cls.qint(-n)
        return cls({(2 * (n - 1 - 2 * k), 0): 1 for k in range(n)})

    @classmethod
    def qfactorial(cls, n: int) -> "Laurent":
        out = cls.const(1)
        for k in range(1, n + 1):
            out = out * cls.qint(k)
        return out

    def is_zero(self) -> bool:
        return not self.num

    def _lift(self, den: int) -> Dict[Mono, int]:
        num = dict(self.num)
        for _ in range(den - self.den):
            nxt: Dict[Mono, int] = {}
            for (te, ce), v in num.items():
                nxt[(te + 2, ce)] = nxt.get((te + 2, ce), 0) + v
                nxt[(te - 2, ce)] = nxt.get((te - 2, ce), 0) - v
            num = nxt
        return num

    def __add__(self, other) -> "Laurent":
        other = _as_laurent(other)
        d = max(self.den, other.den)
        a, b = self._lift(d), other._lift(d)
        for k, v in b.items():
            a[k] = a.get(k, 0) + v
        return Laurent(a, d)

    __radd__ = __add__

    def __neg__(self) -> "Laurent":
        return Laurent({k: -v for k, v in self.num.items()}, self.den)

    def __sub__(self, other) -> "Laurent":
        return self + (-_as_laurent(other))

    def __rsub__(self, other) -> "Laurent":
        return _as_laurent(other) - self

    def __mul__(self, other) -> "Laurent":
        other = _as_laurent(other)
        out: Dict[Mono, int] = {}
        for (t1, c1), v1 in self.num.items():
            for (t2, c2), v2 in other.num.items():
                k = (t1 + t2, c1 + c2)
                out[k] = out.get(k, 0) + v1 * v2
        return Laurent(out, self.den + other.den)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "Laurent":
        if n < 0:
            return self.inverse() ** (-n)
        out = Laurent.const(1)
        for _ in range(n):
            out = out * self
        return out

    def inverse(self) -> "Laurent":
        """Inverse of a unit (±monomial, possibly over a power of q − q⁻¹)."""
        if len(self.num) != 1:
            raise DomainError("only monomials are invertible here")
        (te, ce), v = next(iter(self.num.items()))
        if v not in (1, -1):
            raise DomainError("non-unit integer coefficient")
        inv = Laurent({(-te, -ce): v})
        if self.den:
            inv = inv * Laurent({(2, 0): 1, (-2, 0): -1}) ** self.den
        return inv

    def __eq__(self, other) -> bool:
        try:
            return (self - _as_laurent(other)).is_zero()
        except TypeError:
            return NotImplemented

    def __hash__(self):
        return hash((frozenset(self.num.items()), self.den))

    def evaluate(self, q_half: complex, c: complex = 1.0) -> complex:
        """Specialise t = q^{1/2}, c numerically."""
        s = sum(v * q_half ** te * c ** ce for (te, ce), v in self.num.items())
        q = q_half * q_half
        return complex(s / (q - 1 / q) ** self.den) if self.den else complex(s)

    def __str__(self) -> str:
        if not self.num:
            return "0"
        parts = []
        for (te, ce), v in sorted(self.num.items(), key=lambda kv: (-kv[0][1], -kv[0][0])):
            parts.append(_mono_str(v, te, ce))
        s = " + ".join(parts).replace("+ -", "- ")
        return f"({s})/(q-q^-1)^{self.den}" if self.den else s

    __repr__ = __str__


def _mono_str(v: int, te: int, ce: int) -> str:
    bits = []
    if te:
        bits.append(f"q^{{{te}/2}}")
    if ce:
        bits.append(f"c^{{{ce}}}")
    if not bits:
        return str(v)
    head = "" if v == 1 else "-" if v == -1 else f"{v} "
    return head + " ".join(bits)


def _as_laurent(x) -> Laurent:
    if isinstance(x, Laurent):
        return x
    if isinstance(x, int):
        return Laurent.const(x)
    raise TypeError(f"cannot coerce {type(x).__name__} to an exact coefficient")


# ---------------------------------------------------------------------------
# algebras and normal ordering

Word = Tuple[int, ...]


@dataclass
class RelationSet:
    """Rewrite rules g_j g_i → t^{k} g_i g_j (i < j) plus optional
    non-monomial rules g_j g_i → (normal ordered polynomial)."""

    names: Tuple[str, ...]
    qcomm: Dict[Tuple[int, int], int]                       # (i, j) → k in t-units
    special: Dict[Tuple[int, int], Callable] = field(default_factory=dict)
    invertible: Tuple[bool, ...] = ()

    def index(self, name: str) -> int:
        return self.names.index(name)


class NCPoly:
    __slots__ = ("rels", "terms")

    def __init__(self, rels: RelationSet, terms: Optional[Dict[Word, Laurent]] = None):
        self.rels = rels
        self.terms = {w: c for w, c in (terms or {}).items() if not c.is_zero()}

    # constructors
    @classmethod
    def one(cls, rels: RelationSet) -> "NCPoly":
        return cls(rels, {(0,) * len(rels.names): Laurent.const(1)})

    @classmethod
    def gen(cls, rels: RelationSet, name: str, exp: int = 1) -> "NCPoly":
        w = [0] * len(rels.names)
        w[rels.index(name)] = exp
        return cls(rels, {tuple(w): Laurent.const(1)})

    @classmethod
    def monomial(cls, rels: RelationSet, exps: Sequence[int], coeff: Laurent = None) -> "NCPoly":
        return cls(rels, {tuple(exps): coeff if coeff is not None else Laurent.const(1)})

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other) -> "NCPoly":
        out = dict(self.terms)
        for w, c in _as_poly(other, self.rels).terms.items():
            out[w] = out[w] + c if w in out else c
        return NCPoly(self.rels, out)

    __radd__ = __add__

    def __neg__(self) -> "NCPoly":
        return NCPoly(self.rels, {w: -c for w, c in self.terms.items()})

    def __sub__(self, other) -> "NCPoly":
        return self + (-_as_poly(other, self.rels))

    def __rsub__(self, other) -> "NCPoly":
        return _as_poly(other, self.rels) - self

    def scale(self, c) -> "NCPoly":
        c = _as_laurent(c)
        return NCPoly(self.rels, {w: v * c for w, v in self.terms.items()})

    def __mul__(self, other) -> "NCPoly":
        if isinstance(other, (int, Laurent)):
            return self.scale(other)
        out: Dict[Word, Laurent] = {}
        for w1, c1 in self.terms.items():
            for w2, c2 in other.terms.items():
                for w, c in _mul_words(self.rels, w1, w2).terms.items():
                    c = c * c1 * c2
                    out[w] = out[w] + c if w in out else c
        return NCPoly(self.rels, out)

    def __rmul__(self, other) -> "NCPoly":
        return self.scale(other)

    def __pow__(self, n: int) -> "NCPoly":
        out = NCPoly.one(self.rels)
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other) -> bool:
        if not isinstance(other, NCPoly):
            return NotImplemented
        return (self - other).is_zero()

    def canonical(self) -> str:
        """Golden-file form, one term per line sorted:
        "<int> q^{a/2} c^{e} A^{i} B^{j} B̂^{k} Â^{l}"."""
        lines = []
        for w, c in self.terms.items():
            word = " ".join(f"{n}^{{{e}}}" for n, e in zip(self.rels.names, w))
            for (te, ce), v in c.num.items():
                den = f" /(q-q^-1)^{{{c.den}}}" if c.den else ""
                lines.append(f"{v} q^{{{te}/2}} c^{{{ce}}} {word}{den}")
        return "\n".join(sorted(lines)) if lines else "0"

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        out = []
        for w in sorted(self.terms):
            word = "".join(n if e == 1 else f"{n}^{e}" for n, e in zip(self.rels.names, w) if e)
            out.append(f"({self.terms[w]}){word or '1'}")
        return " + ".join(out)

    __repr__ = __str__


def _as_poly(x, rels) -> NCPoly:
    if isinstance(x, NCPoly):
        return x
    return NCPoly.one(rels).scale(_as_laurent(x))


def _last(w: Word) -> int:
    for i in range(len(w) - 1, -1, -1):
        if w[i]:
            return i
    return -1


def _first(w: Word) -> int:
    for i, e in enumerate(w):
        if e:
            return i
    return len(w)


def _single(n: int, i: int, e: int) -> Word:
    w = [0] * n
    w[i] = e
    return tuple(w)


def _mul_words(rels: RelationSet, u: Word, v: Word) -> NCPoly:
    return _mul_words_cached(id(rels), u, v)


_RELS_BY_ID: Dict[int, RelationSet] = {}


@lru_cache(maxsize=200_000)
def _mul_words_cached(rid: int, u: Word, v: Word) -> NCPoly:
    rels = _RELS_BY_ID[rid]
    j, k = _last(u), _first(v)
    if j <= k:
        w = tuple(a + b for a, b in zip(u, v))
        return NCPoly(rels, {w: Laurent.const(1)})
    n = len(u)
    swapped = _commute(rels, j, u[j], k, v[k])
    u1 = NCPoly.monomial(rels, tuple(0 if i == j else e for i, e in enumerate(u)))
    v1 = NCPoly.monomial(rels, tuple(0 if i == k else e for i, e in enumerate(v)))
    return (u1 * swapped) * v1


def _commute(rels: RelationSet, j: int, a: int, k: int, e: int) -> NCPoly:
    """Normal form of g_j^a g_k^e for k < j."""
    n = len(rels.names)
    if (k, j) in rels.special:
        if a < 0 or e < 0:
            raise DomainError(f"{rels.names[j]}, {rels.names[k]} need nonnegative exponents")
        basic = rels.special[(k, j)](rels)          # g_j g_k in normal form
        left = NCPoly.monomial(rels, _single(n, j, a - 1))
        right = NCPoly.monomial(rels, _single(n, k, e - 1))
        return (left * basic) * right
    kq = rels.qcomm.get((k, j), 0)
    w = [0] * n
    w[k], w[j] = e, a
    return NCPoly(rels, {tuple(w): Laurent.mono(t=kq * a * e)})


def register(rels: RelationSet) -> RelationSet:
    _RELS_BY_ID[id(rels)] = rels
    return rels


# Gauss generators of the double: AB = q²BA, ÂB̂ = q⁻²B̂Â, {A,B} commute with {Â,B̂}
GAUSS = register(RelationSet(
    names=("A", "B", "B̂", "Â"),
    qcomm={(0, 1): -4, (2, 3): -4},                 # BA → q⁻²AB, ÂB̂ → q⁻²B̂Â
    invertible=(True, False, False, True),
))


def _fe_rule(rels: RelationSet) -> NCPoly:
    """FE = EF − (K² − K⁻²)/(q − q⁻¹)."""
    e = NCPoly.gen(rels, "E") * NCPoly.gen(rels, "F")
    h = (NCPoly.gen(rels, "K", 2) - NCPoly.gen(rels, "K", -2)).scale(Laurent({(0, 0): 1}, 1))
    return e - h


# U_q(gl(2,R)): KE = qEK, KF = q⁻¹FK, K₀ central
UQ = register(RelationSet(
    names=("K₀", "K", "E", "F"),
    qcomm={(1, 2): -2, (1, 3): 2},                  # EK = q⁻¹KE, FK = qKF
    special={(2, 3): _fe_rule},
    invertible=(True, True, False, False),
))


def _z22z11(rels: RelationSet) -> NCPoly:
    """z₂₂z₁₁ = z₁₁z₂₂ + (q⁻² − 1) z₁₂z₂₁, from [z₁₁,z₂₂] = [z₁₂,z₂₁]."""
    g = lambda s: NCPoly.gen(rels, s)
    return g("z11") * g("z22") + (g("z12") * g("z21")).scale(Laurent.qpow(-2) - 1)


# Minkowski generators in the order z₁₁, z₁₂, z₂₁, z₂₂, N
ZALG = register(RelationSet(
    names=("z11", "z12", "z21", "z22", "N"),
    qcomm={(0, 1): 0, (0, 2): -4, (1, 2): -4, (1, 3): -4, (2, 3): 0,
           (0, 4): 0, (1, 4): -4, (2, 4): 4, (3, 4): 0},     # Nz₁₂ = q⁻²z₁₂N, Nz₂₁ = q²z₂₁N
    special={(0, 3): _z22z11},
    invertible=(False, False, False, False, True),
))


def _parse_word(rels: RelationSet, w) -> List[Tuple[int, int]]:
    if isinstance(w, str):
        w = w.split()
    letters = []
    for item in w:
        if isinstance(item, str):
            name, exp = item, 1
            if "^" in item:
                name, e = item.split("^")
                exp = int(e.strip("{}"))
        else:
            name, exp = item
        if name not in rels.names:
            raise DomainError(f"unknown generator {name!r}")
        i = rels.index(name)
        if exp < 0 and not (rels.invertible and rels.invertible[i]):
            raise DomainError(f"{name} is not invertible")
        letters.append((i, exp))
    return letters


def normal_order(w, rels: RelationSet = GAUSS) -> NCPoly:
    """Normal form of a word given as "B A", ["B", "A"] or [("B", 1), ...]."""
    out = NCPoly.one(rels)
    n = len(rels.names)
    for i, e in _parse_word(rels, w):
        out = out * NCPoly.monomial(rels, _single(n, i, e))
    return out


def word_poly(rels: RelationSet, w) -> NCPoly:
    return normal_order(w, rels)


# ---------------------------------------------------------------------------
# Gauss decomposition and Minkowski relations


def gauss_image(letter: str) -> NCPoly:
    """z₁₁=A, z₁₂=AB̂, z₂₁=B, z₂₂=BB̂+Â, N=AÂ."""
    g = lambda s, e=1: NCPoly.gen(GAUSS, s, e)
    table = {
        "z11": g("A"), "z12": g("A") * g("B̂"), "z21": g("B"),
        "z22": g("B") * g("B̂") + g("Â"), "N": g("A") * g("Â"),
        "N^-1": g("Â", -1) * g("A", -1),
    }
    return table[letter]


def _zletters(w) -> List[str]:
    if isinstance(w, str):
        w = w.split()
    out = []
    for item in w:
        if isinstance(item, tuple):
            name, e = item
        elif "^" in item and not item.endswith("^-1"):
            name, e = item.split("^")[0], int(item.split("^")[1].strip("{}"))
        else:
            name, e = item, 1
        if name == "N" and e < 0:
            out.extend(["N^-1"] * (-e))
        elif e < 0:
            raise DomainError(f"{name} is not invertible")
        else:
            out.extend([name] * e)
    return out


def realize(zexpr: Iterable[Tuple[Laurent, str]]) -> NCPoly:
    """Image in the Gauss algebra of Σ coef · (z-word)."""
    out = NCPoly(GAUSS)
    for coef, w in zexpr:
        term = NCPoly.one(GAUSS)
        for s in _zletters(w):
            term = term * gauss_image(s)
        out = out + term.scale(_as_laurent(coef))
    return out


ONE = Laurent.const(1)

MINKOWSKI_RELATIONS = {
    "[z11,z12]=0": [(ONE, "z11 z12"), (-ONE, "z12 z11")],
    "[z21,z22]=0": [(ONE, "z21 z22"), (-ONE, "z22 z21")],
    "[z11,z22]=[z12,z21]": [(ONE, "z11 z22"), (-ONE, "z22 z11"), (-ONE, "z12 z21"), (ONE, "z21 z12")],
    "z11z21=q2z21z11": [(ONE, "z11 z21"), (-Laurent.qpow(2), "z21 z11")],
    "z12z22=q2z22z12": [(ONE, "z12 z22"), (-Laurent.qpow(2), "z22 z12")],
    "z12z21=q2z21z12": [(ONE, "z12 z21"), (-Laurent.qpow(2), "z21 z12")],
}

DETERMINANT_RELATIONS = {
    "N=z11z22-z12z21": [(ONE, "N"), (-ONE, "z11 z22"), (ONE, "z12 z21")],
    "N=z22z11-z21z12": [(ONE, "N"), (-ONE, "z22 z11"), (ONE, "z21 z12")],
    "Nz11=z11N": [(ONE, "N z11"), (-ONE, "z11 N")],
    "Nz12=q-2z12N": [(ONE, "N z12"), (-Laurent.qpow(-2), "z12 N")],
    "Nz21=q2z21N": [(ONE, "N z21"), (-Laurent.qpow(2), "z21 N")],
    "Nz22=z22N": [(ONE, "N z22"), (-ONE, "z22 N")],
}


def verify_minkowski_relations(p: Optional[BParams] = None) -> IdentityReport:
    """Every relation of the split Minkowski algebra, the determinant and
    the N-commutation rules, checked exactly through the Gauss substitution.
    params maps each relation to its residual ("0" when it holds)."""
    params = {}
    bad = 0
    for name, rel in {**MINKOWSKI_RELATIONS, **DETERMINANT_RELATIONS}.items():
        res = realize(rel)
        params[name] = res.canonical()
        bad += not res.is_zero()
    params["N-AÂ"] = (realize([(ONE, "N")]) - gauss_image("z11") * NCPoly.gen(GAUSS, "Â")).canonical()
    bad += params["N-AÂ"] != "0"
    if p is not None:
        params["b"] = p.b
    out = make_report("minkowski-relations", params, bad, 0, tol=0.5)
    out.rel_err = out.abs_err
    return out


# ---------------------------------------------------------------------------
# tensor products and the coproduct


class TensorPoly:
    """Σ coef · w₁ ⊗ … ⊗ w_k over k copies of one algebra."""

    __slots__ = ("rels", "k", "terms")

    def __init__(self, rels: RelationSet, k: int, terms=None):
        self.rels, self.k = rels, k
        self.terms = {w: c for w, c in (terms or {}).items() if not c.is_zero()}

    @classmethod
    def one(cls, rels, k) -> "TensorPoly":
        return cls(rels, k, {((0,) * len(rels.names),) * k: Laurent.const(1)})

    @classmethod
    def pure(cls, *factors: NCPoly) -> "TensorPoly":
        rels = factors[0].rels
        out: Dict[tuple, Laurent] = {}
        for combo in itertools.product(*[list(f.terms.items()) for f in factors]):
            key = tuple(w for w, _ in combo)
            c = Laurent.const(1)
            for _, v in combo:
                c = c * v
            out[key] = out[key] + c if key in out else c
        return cls(rels, len(factors), out)

    def __add__(self, other: "TensorPoly") -> "TensorPoly":
        out = dict(self.terms)
        for w, c in other.terms.items():
            out[w] = out[w] + c if w in out else c
        return TensorPoly(self.rels, self.k, out)

    def __neg__(self):
        return TensorPoly(self.rels, self.k, {w: -c for w, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "TensorPoly":
        c = _as_laurent(c)
        return TensorPoly(self.rels, self.k, {w: v * c for w, v in self.terms.items()})

    def __mul__(self, other: "TensorPoly") -> "TensorPoly":
        out: Dict[tuple, Laurent] = {}
        for w1, c1 in self.terms.items():
            for w2, c2 in other.terms.items():
                prods = [_mul_words(self.rels, a, b) for a, b in zip(w1, w2)]
                for combo in itertools.product(*[list(pp.terms.items()) for pp in prods]):
                    key = tuple(w for w, _ in combo)
                    c = c1 * c2
                    for _, v in combo:
                        c = c * v
                    out[key] = out[key] + c if key in out else c
        return TensorPoly(self.rels, self.k, out)

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other) -> bool:
        return isinstance(other, TensorPoly) and (self - other).is_zero()

    def canonical(self) -> str:
        lines = []
        for ws, c in self.terms.items():
            word = " ⊗ ".join(" ".join(f"{n}^{{{e}}}" for n, e in zip(self.rels.names, w)) for w in ws)
            for (te, ce), v in c.num.items():
                lines.append(f"{v} q^{{{te}/2}} c^{{{ce}}} {word}")
        return "\n".join(sorted(lines)) if lines else "0"


# Δ(z_ij) = Σ_k z_ik ⊗ z_kj, Δ(N^±) = N^± ⊗ N^±
_ZCOPROD = {
    "z11": [("z11", "z11"), ("z12", "z21")],
    "z12": [("z11", "z12"), ("z12", "z22")],
    "z21": [("z21", "z11"), ("z22", "z21")],
    "z22": [("z21", "z12"), ("z22", "z22")],
    "N": [("N", "N")],
    "N^-1": [("N^-1", "N^-1")],
}


def _tensor_letter(pieces: Sequence[str]) -> TensorPoly:
    return TensorPoly.pure(*[gauss_image(s) for s in pieces])


def coproduct_word(w) -> TensorPoly:
    """Δ of a z-word as the ordered product of the generator coproducts."""
    out = TensorPoly.one(GAUSS, 2)
    for s in _zletters(w):
        term = TensorPoly(GAUSS, 2)
        for a, b in _ZCOPROD[s]:
            term = term + _tensor_letter((a, b))
        out = out * term
    return out


def coproduct(x) -> TensorPoly:
    """Δ(x) for x an NCPoly over ZALG or a list of (coef, z-word); each tensor
    factor is returned normal ordered in the Gauss generators."""
    if isinstance(x, NCPoly):
        items = []
        for w, c in x.terms.items():
            items.append((c, [(n, e) for n, e in zip(x.rels.names, w) if e]))
        x = items
    out = TensorPoly(GAUSS, 2)
    for c, w in x:
        out = out + coproduct_word(w).scale(_as_laurent(c))
    return out


def coproduct_residuals() -> Dict[str, str]:
    """Δ on every relation (must vanish), Δ(N) − N⊗N, Δ(1) − 1⊗1."""
    out = {}
    for name, rel in {**MINKOWSKI_RELATIONS, **DETERMINANT_RELATIONS}.items():
        out["Δ " + name] = coproduct(rel).canonical()
    nn = TensorPoly.pure(gauss_image("N"), gauss_image("N"))
    out["Δ(N)-N⊗N"] = (coproduct([(ONE, "N")]) - nn).canonical()
    out["Δ(N)-Δ(z11z22-z12z21)"] = (coproduct([(ONE, "N")]) -
                                    coproduct([(ONE, "z11 z22"), (-ONE, "z12 z21")])).canonical()
    out["Δ(1)-1⊗1"] = (coproduct([(ONE, [])]) - TensorPoly.one(GAUSS, 2)).canonical()
    return out


def coassociativity_residuals() -> Dict[str, str]:
    """(Δ⊗id)Δ(z) − (id⊗Δ)Δ(z) for each generator, realised in Gauss^{⊗3}."""
    out = {}
    for s in ("z11", "z12", "z21", "z22", "N"):
        left = TensorPoly(GAUSS, 3)
        right = TensorPoly(GAUSS, 3)
        for a, b in _ZCOPROD[s]:
            for a1, a2 in _ZCOPROD[a]:
                left = left + _tensor_letter((a1, a2, b))
            for b1, b2 in _ZCOPROD[b]:
                right = right + _tensor_letter((a, b1, b2))
        out[s] = (left - right).canonical()
    return out


def confluence_check(n_words: int = 200, max_len: int = 8, seed: int = 0,
                     rels: RelationSet = GAUSS) -> int:
    """Number of random triples whose two associations disagree."""
    rng = random.Random(seed)
    names = rels.names
    bad = 0

    def rand_word():
        w = []
        for _ in range(rng.randint(0, max_len)):
            i = rng.randrange(len(names))
            inv = rels.invertible and rels.invertible[i]
            e = rng.choice([-1, 1, 2]) if inv else rng.choice([1, 2])
            w.append((names[i], e))
        return w

    for _ in range(n_words):
        w1, w2, w3 = (normal_order(rand_word(), rels) for _ in range(3))
        if not ((w1 * w2) * w3 == w1 * (w2 * w3)):
            bad += 1
    return bad


# ---------------------------------------------------------------------------
# Hopf pairing with U_q(gl(2,R))


def pairing_closed_form(l: int, m: int, n: int, l0: int, L: int, m2: int, n2: int, L2: int,
                        convention: str = "derived") -> Laurent:
    """⟨K₀^{l0} K^l E^m F^n, A^L B^{m2} B̂^{n2} Â^{L2}⟩ in closed form.

    "derived": c^{m−n} q^{l(m+L2−L)/2 + mL + nL2} [n]_q! [m]_q!, which is what the
    pairing axioms produce from the generator table (each E meets one B through
    ⟨E,B⟩ = c, each F one B̂ through ⟨F,B̂⟩ = c⁻¹, and no E–F cross term survives).
    "printed": the published c^{m²−n²} q^{… − nm}; it differs from the derived value
    by c^{m²−m−n²+n} q^{−mn}, so the two agree only when m·n = 0 and m, n ≤ 1.
    K₀ is group-like with ⟨K₀,A⟩ = ⟨K₀,Â⟩ = q^{−1/2}, contributing q^{−l0(L+m+L2)/2}.
    """
    if min(m, n, m2, n2) < 0:
        raise DomainError("E, F, B, B̂ exponents must be nonnegative")
    if convention not in ("derived", "printed"):
        raise DomainError(f"unknown convention {convention!r}")
    if m != m2 or n != n2:
        return Laurent()
    printed = convention == "printed"
    ce = m * m - n * n if printed else m - n
    # exponent of q doubled to stay integral in t = q^{1/2}
    te = l * (m + L2 - L) + 2 * (m * L + n * L2) - l0 * (L + m + L2)
    if printed:
        te -= 2 * n * m
    return Laurent.mono(t=te, c=ce) * Laurent.qfactorial(n) * Laurent.qfactorial(m)


def pairing_monomial(l: int, m: int, n: int, l0: int, L: int, m2: int, n2: int, L2: int,
                     convention: str = "derived") -> Laurent:
    return pairing_closed_form(l, m, n, l0, L, m2, n2, L2, convention)


# generator table: 2×2 fundamental matrices ⟨u, z_ij⟩ and the character ⟨u, N⟩
def _rho(letter: str) -> Tuple[Tuple[Laurent, Laurent], Tuple[Laurent, Laurent]]:
    z = Laurent()
    t = lambda k: Laurent.mono(t=k)
    table = {
        "K": ((t(-1), z), (z, t(1))),
        "K⁻": ((t(1), z), (z, t(-1))),
        "K₀": ((t(-1), z), (z, t(-1))),
        "K₀⁻": ((t(1), z), (z, t(1))),
        "E": ((z, z), (Laurent.mono(c=1), z)),
        "F": ((z, Laurent.mono(c=-1)), (z, z)),
    }
    return table[letter]


_CHI = {"K": Laurent.const(1), "K⁻": Laurent.const(1), "K₀": Laurent.qpow(-1),
        "K₀⁻": Laurent.qpow(1), "E": Laurent(), "F": Laurent()}

_UCOPROD = {
    "K": [(("K",), ("K",))],
    "K⁻": [(("K⁻",), ("K⁻",))],
    "K₀": [(("K₀",), ("K₀",))],
    "K₀⁻": [(("K₀⁻",), ("K₀⁻",))],
    "E": [(("K₀⁻", "K⁻"), ("E",)), (("E",), ("K₀", "K"))],
    "F": [(("K₀", "K⁻"), ("F",)), (("F",), ("K₀⁻", "K"))],
}

_ZIDX = {"z11": (0, 0), "z12": (0, 1), "z21": (1, 0), "z22": (1, 1)}


def _matmul(a, b):
    return tuple(tuple(a[i][0] * b[0][j] + a[i][1] * b[1][j] for j in range(2)) for i in range(2))


def _pair_single(u: Tuple[str, ...], z: str) -> Laurent:
    """⟨u, generator⟩ from ⟨ab, x⟩ = ⟨a⊗b, Δx⟩ and the generator table."""
    if z in ("N", "N^-1"):
        out = Laurent.const(1)
        for s in u:
            out = out * _CHI[s]
        return out.inverse() if z == "N^-1" and not out.is_zero() else out
    one, zero = Laurent.const(1), Laurent()
    mat = ((one, zero), (zero, one))
    for s in u:
        mat = _matmul(mat, _rho(s))
    i, j = _ZIDX[z]
    return mat[i][j]


def _split(u: Tuple[str, ...]):
    """Δ of a raw word: all (left, right) pieces, each with coefficient 1."""
    for choice in itertools.product(*[_UCOPROD[s] for s in u]):
        left = tuple(x for a, _ in choice for x in a)
        right = tuple(x for _, b in choice for x in b)
        yield left, right


@lru_cache(maxsize=None)
def _pair_words(u: Tuple[str, ...], zw: Tuple[str, ...]) -> Laurent:
    if not zw:
        return Laurent.const(0 if any(s in ("E", "F") for s in u) else 1)
    if len(zw) == 1:
        return _pair_single(u, zw[0])
    out = Laurent()
    for left, right in _split(u):
        a = _pair_single(left, zw[0])
        if a.is_zero():
            continue
        out = out + a * _pair_words(right, zw[1:])
    return out


def _uletters(lhs_word: Sequence[int]) -> Tuple[str, ...]:
    l0, l, m, n = lhs_word
    return (("K₀" if l0 > 0 else "K₀⁻",) * abs(l0) + ("K" if l > 0 else "K⁻",) * abs(l)
            + ("E",) * m + ("F",) * n)


MAX_DEGREE = 8


def pairing_inductive_oracle(lhs: NCPoly, rhs: NCPoly, max_degree: int = MAX_DEGREE) -> Laurent:
    """⟨lhs, rhs⟩ computed only from the pairing axioms
    ⟨a, xy⟩ = ⟨Δa, x⊗y⟩, ⟨ab, x⟩ = ⟨a⊗b, Δx⟩, the coproducts of E, F, K, K₀ and
    of z_ij, N, and the generator values.

    rhs monomials A^L B^m B̂^n Â^{L'} are rewritten as z₁₁^{L−n−L'} z₂₁^m z₁₂^n N^{L'}
    times the exact q-power produced by the Gauss normal ordering, so L ≥ n + L'
    and L' ≥ 0 are required.  Raises DegreeLimit if E/F count on the left or
    the z-word length on the right exceeds max_degree.
    """
    if lhs.rels is not UQ or rhs.rels is not GAUSS:
        raise DomainError("lhs must be over (K₀,K,E,F) and rhs over (A,B,B̂,Â)")
    total = Laurent()
    for wr, cr in rhs.terms.items():
        L, m2, n2, L2 = wr
        a = L - n2 - L2
        if a < 0 or L2 < 0:
            raise DomainError("rhs monomial is not a nonnegative z-word")
        zword = ("z11",) * a + ("z21",) * m2 + ("z12",) * n2 + ("N",) * L2
        if len(zword) - L2 > max_degree:
            raise DegreeLimit(f"rhs degree {len(zword)} exceeds {max_degree}")
        img = realize([(ONE, list(zword))])
        conv = img.terms.get(wr)
        if conv is None or len(img.terms) != 1:
            raise DomainError("z-word does not realise a single Gauss monomial")
        for wl, cl in lhs.terms.items():
            if wl[2] + wl[3] > max_degree:
                raise DegreeLimit(f"lhs E/F degree {wl[2] + wl[3]} exceeds {max_degree}")
            val = _pair_words(_uletters(wl), zword)
            total = total + cl * cr * val * conv.inverse()
    return total


def uq_monomial(l: int = 0, m: int = 0, n: int = 0, l0: int = 0) -> NCPoly:
    return NCPoly.monomial(UQ, (l0, l, m, n))


def gauss_monomial(L: int = 0, m: int = 0, n: int = 0, L2: int = 0) -> NCPoly:
    return NCPoly.monomial(GAUSS, (L, m, n, L2))


def pairing_table_check(max_lmn: int = 3, L_extra=(0, 1), L2_values=(0, 1), l0_values=(0, 1),
                        convention: str = "derived"):
    """Closed form against the oracle on all (l, m, n) ≤ max_lmn with matching
    right monomials; returns the list of mismatches (empty when exact)."""
    bad = []
    for l, m, n, l0 in itertools.product(range(max_lmn + 1), range(max_lmn + 1),
                                         range(max_lmn + 1), l0_values):
        for a, L2 in itertools.product(L_extra, L2_values):
            L = a + n + L2
            lhs, rhs = uq_monomial(l, m, n, l0), gauss_monomial(L, m, n, L2)
            oracle = pairing_inductive_oracle(lhs, rhs)
            closed = pairing_monomial(l, m, n, l0, L, m, n, L2, convention)
            if not oracle == closed:
                bad.append(((l, m, n, l0, L, m, n, L2), str(oracle), str(closed)))
    return bad


# ---------------------------------------------------------------------------
# continuous substitution [n]_q! → G_b(Q+iτ)/(1−q²)^{ib⁻¹τ}


def _gb_derivative(z0: complex, p: BParams, radius: Optional[float] = None, npts: int = 64) -> complex:
    r = radius or 0.05 * min(p.b, 1 / p.b)
    th = 2 * np.pi * np.arange(npts) / npts
    vals = eval_Gb(z0 + r * np.exp(1j * th), p)
    return complex(np.mean(vals * np.exp(-1j * th)) / r)


def qfactorial_substitution_check(n: int, p: Optional[BParams] = None):
    """At τ = −inb the substituted expression has a simple zero (G_b vanishes
    at Q + nb), so the comparison is made on derivatives:
    [G_b'(Q+nb)/(1−q²)^n] / G_b'(Q) = q^{n(n−1)/2} [n]_q!.
    Returns (lhs, rhs, rel_err)."""
    p = p or make_params(0.775)
    lhs = _gb_derivative(p.Q + n * p.b, p) / (1 - p.q ** 2) ** n / _gb_derivative(p.Q, p)
    q_half = cmath.exp(0.5j * math.pi * p.b ** 2)
    rhs = (Laurent.mono(t=n * (n - 1)) * Laurent.qfactorial(n)).evaluate(q_half)
    return lhs, rhs, abs(lhs - rhs) / abs(rhs)
