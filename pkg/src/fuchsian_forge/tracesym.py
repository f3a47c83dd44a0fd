"""Symbolic trace computations for the generators rho, sigma, rho', sigma'.

Matrices are written in the basis {1, I, J + K, J - K} with coordinates in the
tower Q(r, s, t, N)(C), C^2 = c^2 - 1, where

    c = 4rst - 2r^2 - 2s^2 - 2t^2 + 1

and N stands for the fixed-point parameter M~.  Coordinates only ever divide
by c - 1, c + 1 and D = c - 1 + 2s^2, so a rational function is stored as a
polynomial numerator over a product of powers of these three atoms.  Zero
testing is then exact: a function is zero iff its numerator is.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping, Sequence

from .errors import IdentityViolation, TheoremViolation

VARS = ("r", "s", "t", "N")
Exp = tuple  # (i, j, k, l): r^i s^j t^k N^l, l may be negative


class Poly:
    """Sparse polynomial in r, s, t and Laurent in N, rational coefficients."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[Exp, Fraction] | None = None):
        self.terms = {e: Fraction(c) for e, c in (terms or {}).items() if c}

    @classmethod
    def const(cls, c) -> "Poly":
        return cls({(0, 0, 0, 0): Fraction(c)})

    @classmethod
    def var(cls, name: str, power: int = 1) -> "Poly":
        e = [0, 0, 0, 0]
        e[VARS.index(name)] = power
        return cls({tuple(e): Fraction(1)})

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: "Poly") -> "Poly":
        out = dict(self.terms)
        for e, c in other.terms.items():
            v = out.get(e, 0) + c
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        p = Poly()
        p.terms = out
        return p

    def __neg__(self) -> "Poly":
        p = Poly()
        p.terms = {e: -c for e, c in self.terms.items()}
        return p

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __mul__(self, other) -> "Poly":
        if not isinstance(other, Poly):
            other = Fraction(other)
            p = Poly()
            p.terms = {e: c * other for e, c in self.terms.items()} if other else {}
            return p
        out: dict = {}
        get = out.get
        for (a0, a1, a2, a3), ca in self.terms.items():
            for (b0, b1, b2, b3), cb in other.terms.items():
                e = (a0 + b0, a1 + b1, a2 + b2, a3 + b3)
                out[e] = get(e, 0) + ca * cb
        p = Poly()
        p.terms = {e: c for e, c in out.items() if c}
        return p

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "Poly":
        out = Poly.const(1)
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other) -> bool:
        return isinstance(other, Poly) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def n_degrees(self) -> set[int]:
        return {e[3] for e in self.terms}

    def total_degree(self) -> int:
        return max((sum(e[:3]) for e in self.terms), default=-1)

    def evaluate(self, values: Sequence):
        """Evaluate at (r, s, t, N); N may be omitted when the polynomial is N-free."""
        total = Fraction(0)
        for (i, j, k, l), c in self.terms.items():
            term = c
            for v, p in zip(values, (i, j, k)):
                if p:
                    term = term * v ** p
            if l:
                n = values[3]
                term = term * (n ** l if l > 0 else (1 / n) ** (-l))
            total = term + total
        return total

    def to_json(self) -> list:
        return [[list(e), str(c)] for e, c in sorted(self.terms.items())]

    def __repr__(self) -> str:
        return f"Poly({len(self.terms)} terms)"


R, S, T, NV = (Poly.var(v) for v in VARS)
NINV = Poly.var("N", -1)
ONE = Poly.const(1)
C_POLY = 4 * R * S * T - 2 * R * R - 2 * S * S - 2 * T * T + ONE

# denominator atoms: c - 1, c + 1, D = c - 1 + 2 s^2
ATOMS = (C_POLY - ONE, C_POLY + ONE, C_POLY - ONE + 2 * S * S)
ATOM_NAMES = ("c-1", "c+1", "c-1+2s^2")


@lru_cache(maxsize=None)
def _atom_power(i: int, k: int) -> Poly:
    return ATOMS[i] ** k


def _atom_product(exps: Sequence[int]) -> Poly:
    out = ONE
    for i, k in enumerate(exps):
        if k:
            out = out * _atom_power(i, k)
    return out


@dataclass(frozen=True, eq=False)
class MultiRat:
    """num / ((c-1)^e0 (c+1)^e1 D^e2)."""

    num: Poly
    den: tuple[int, int, int] = (0, 0, 0)

    @classmethod
    def of(cls, p) -> "MultiRat":
        return cls(p if isinstance(p, Poly) else Poly.const(p))

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def _lift(self, target: Sequence[int]) -> Poly:
        extra = [t - e for t, e in zip(target, self.den)]
        return self.num * _atom_product(extra) if any(extra) else self.num

    def __add__(self, other: "MultiRat") -> "MultiRat":
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        den = tuple(max(a, b) for a, b in zip(self.den, other.den))
        return MultiRat(self._lift(den) + other._lift(den), den)

    def __neg__(self) -> "MultiRat":
        return MultiRat(-self.num, self.den)

    def __sub__(self, other: "MultiRat") -> "MultiRat":
        return self + (-other)

    def __mul__(self, other) -> "MultiRat":
        if isinstance(other, MultiRat):
            if self.is_zero() or other.is_zero():
                return ZERO_RAT
            return MultiRat(self.num * other.num, tuple(a + b for a, b in zip(self.den, other.den)))
        if isinstance(other, Poly):
            return MultiRat(self.num * other, self.den)
        return MultiRat(self.num * other, self.den)

    __rmul__ = __mul__

    def div_atoms(self, e0: int = 0, e1: int = 0, e2: int = 0) -> "MultiRat":
        return MultiRat(self.num, (self.den[0] + e0, self.den[1] + e1, self.den[2] + e2))

    def mul_atoms(self, e0: int = 0, e1: int = 0, e2: int = 0) -> "MultiRat":
        """Multiply by atom powers, cancelling against the denominator first."""
        den = list(self.den)
        rest = []
        for i, k in enumerate((e0, e1, e2)):
            cancel = min(k, den[i])
            den[i] -= cancel
            rest.append(k - cancel)
        return MultiRat(self.num * _atom_product(rest) if any(rest) else self.num, tuple(den))

    def __eq__(self, other) -> bool:
        if not isinstance(other, MultiRat):
            other = MultiRat.of(other)
        return (self - other).is_zero()

    __hash__ = None

    def n_free(self) -> bool:
        return self.num.n_degrees() <= {0}

    def denominator_poly(self) -> Poly:
        return _atom_product(self.den)

    def evaluate(self, r, s, t, N=None):
        vals = (r, s, t, N)
        c = half_trace_c(r, s, t)
        den = (c - 1) ** self.den[0] * (c + 1) ** self.den[1] * (c - 1 + 2 * s * s) ** self.den[2]
        return self.num.evaluate(vals) / den

    def to_json(self) -> dict:
        return {
            "variables": list(VARS[:3]) if self.n_free() else list(VARS),
            "numerator": [[e[:3] if self.n_free() else e, c] for e, c in self.num.to_json()],
            "denominator": [[e[:3], c] for e, c in self.denominator_poly().to_json()],
            "denominator_factored": {name: k for name, k in zip(ATOM_NAMES, self.den) if k},
        }


ZERO_RAT = MultiRat(Poly())


def half_trace_c(r, s, t):
    return 4 * r * s * t - 2 * r * r - 2 * s * s - 2 * t * t + 1


def rat(p=0, e0: int = 0, e1: int = 0, e2: int = 0) -> MultiRat:
    """p / ((c-1)^e0 (c+1)^e1 D^e2)."""
    return MultiRat(p if isinstance(p, Poly) else Poly.const(p), (e0, e1, e2))


@dataclass(frozen=True, eq=False)
class TowerElement:
    """base + ext * C with C^2 = c^2 - 1 = (c - 1)(c + 1)."""

    base: MultiRat = ZERO_RAT
    ext: MultiRat = ZERO_RAT

    def __add__(self, other: "TowerElement") -> "TowerElement":
        return TowerElement(self.base + other.base, self.ext + other.ext)

    def __neg__(self) -> "TowerElement":
        return TowerElement(-self.base, -self.ext)

    def __sub__(self, other: "TowerElement") -> "TowerElement":
        return self + (-other)

    def __mul__(self, other) -> "TowerElement":
        if not isinstance(other, TowerElement):
            return TowerElement(self.base * other, self.ext * other)
        base = self.base * other.base + (self.ext * other.ext).mul_atoms(1, 1, 0)
        ext = self.base * other.ext + self.ext * other.base
        return TowerElement(base, ext)

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return self.base.is_zero() and self.ext.is_zero()

    def in_base(self) -> bool:
        return self.ext.is_zero()

    def __eq__(self, other) -> bool:
        if not isinstance(other, TowerElement):
            other = TowerElement(MultiRat.of(other))
        return (self - other).is_zero()

    __hash__ = None

    def evaluate(self, r, s, t, N=None, sqrt_c2m1=None):
        """Numeric value; ``sqrt_c2m1`` is needed only when ext != 0."""
        val = self.base.evaluate(r, s, t, N)
        if not self.ext.is_zero():
            if sqrt_c2m1 is None:
                raise ValueError("element has a C-component; pass sqrt(c^2 - 1)")
            val = val + self.ext.evaluate(r, s, t, N) * sqrt_c2m1
        return val


def tower(base=None, ext=None) -> TowerElement:
    return TowerElement(base if base is not None else ZERO_RAT, ext if ext is not None else ZERO_RAT)


TZERO = tower()
TONE = tower(rat(1))


@dataclass(frozen=True, eq=False)
class QMatrix:
    """q0 1 + q1 I + q2 (J + K) + q3 (J - K) = [[q0 + q1, 2 q2], [2 q3, q0 - q1]]."""

    q0: TowerElement
    q1: TowerElement
    q2: TowerElement
    q3: TowerElement

    @property
    def coords(self) -> tuple[TowerElement, ...]:
        return (self.q0, self.q1, self.q2, self.q3)

    def __mul__(self, other: "QMatrix") -> "QMatrix":
        return qmul(self, other)

    def __eq__(self, other) -> bool:
        return isinstance(other, QMatrix) and all(a == b for a, b in zip(self.coords, other.coords))

    __hash__ = None

    def reflect(self) -> "QMatrix":
        """Conjugation by I: negates the J and K parts."""
        return QMatrix(self.q0, self.q1, -self.q2, -self.q3)

    def adjugate(self) -> "QMatrix":
        """Inverse when the determinant form is 1."""
        return QMatrix(self.q0, -self.q1, -self.q2, -self.q3)

    def det_form(self) -> TowerElement:
        return self.q0 * self.q0 - self.q1 * self.q1 - 4 * (self.q2 * self.q3)

    def is_diagonal(self) -> bool:
        return self.q2.is_zero() and self.q3.is_zero()

    def as_2x2(self, evaluate) -> list[list]:
        q0, q1, q2, q3 = (evaluate(q) for q in self.coords)
        return [[q0 + q1, 2 * q2], [2 * q3, q0 - q1]]


def qmul(A: QMatrix, B: QMatrix) -> QMatrix:
    a0, a1, a2, a3 = A.coords
    b0, b1, b2, b3 = B.coords
    a2b3, a3b2 = a2 * b3, a3 * b2
    return QMatrix(
        a0 * b0 + a1 * b1 + 2 * a2b3 + 2 * a3b2,
        b0 * a1 + a0 * b1 + 2 * a2b3 - 2 * a3b2,
        b0 * a2 + a0 * b2 + a1 * b2 - a2 * b1,
        b0 * a3 + a0 * b3 + a3 * b1 - a1 * b3,
    )


def trace_of(A: QMatrix) -> TowerElement:
    return 2 * A.q0


def trace_of_product(A: QMatrix, B: QMatrix) -> TowerElement:
    a0, a1, a2, a3 = A.coords
    b0, b1, b2, b3 = B.coords
    return 2 * (a0 * b0 + a1 * b1 + 2 * (a2 * b3) + 2 * (a3 * b2))


def commutator(A: QMatrix, B: QMatrix) -> QMatrix:
    return A * B * A.adjugate() * B.adjugate()


# ---------------------------------------------------------------------------
# generators
# ---------------------------------------------------------------------------

# 2rs - t + ct
_P = 2 * R * S - T + C_POLY * T


@lru_cache(maxsize=1)
def generic_generators() -> tuple[QMatrix, QMatrix, QMatrix, QMatrix]:
    """(rho, sigma, rho', sigma') with M~ replaced by the symbol N.

    rho   = r 1 + r(c+1)/C I - N(P + tC)/(2D) (J+K) + (P - tC)/(2N(c-1)) (J-K)
    sigma = s 1 - s(c+1)/C I + N/2 (J+K) - D/(2N(c-1)) (J-K)

    with P = 2rs - t + ct and (c+1)/C = C/(c-1).
    """
    rho = QMatrix(
        tower(rat(R)),
        tower(ext=rat(R, e0=1)),
        tower(rat(-NV * _P * Fraction(1, 2), e2=1), rat(-NV * T * Fraction(1, 2), e2=1)),
        tower(rat(NINV * _P * Fraction(1, 2), e0=1), rat(-NINV * T * Fraction(1, 2), e0=1)),
    )
    sigma = QMatrix(
        tower(rat(S)),
        tower(ext=rat(-S, e0=1)),
        tower(rat(NV * Fraction(1, 2))),
        tower(rat(-NINV * ATOMS[2] * Fraction(1, 2), e0=1)),
    )
    return rho, sigma, rho.reflect(), sigma.reflect()


def rho_sigma_closed_form() -> QMatrix:
    """t 1 + tC/(c-1) I
    + (c+1+C) N (r(c-1) + st - st(c+C)) / (2C D) (J+K)
    + (c+1-C) (r(c-1) + st - st(c-C)) / (2N(c-1) C) (J-K).

    Division by C is carried out as multiplication by C/((c-1)(c+1)).
    """
    cm1 = C_POLY - ONE
    q = R * cm1 + S * T - S * T * C_POLY  # r(c-1) + st - stc
    st = S * T
    cpl = tower(rat(C_POLY + ONE))
    Cel = tower(ext=rat(1))
    inv_C = tower(ext=rat(1, 1, 1))
    plus = (cpl + Cel) * tower(rat(q), rat(-st)) * inv_C * tower(rat(NV * Fraction(1, 2), e2=1))
    minus = (cpl - Cel) * tower(rat(q), rat(st)) * inv_C * tower(rat(NINV * Fraction(1, 2), e0=1))
    return QMatrix(tower(rat(T)), tower(ext=rat(T, e0=1)), plus, minus)


# ---------------------------------------------------------------------------
# words
# ---------------------------------------------------------------------------

GENERATOR_NAMES = ("rho", "sigma", "rho'", "sigma'")
_ALIASES = {
    "rho": "rho", "ρ": "rho", "sigma": "sigma", "σ": "sigma",
    "rho'": "rho'", "ρ′": "rho'", "ρ'": "rho'", "sigma'": "sigma'", "σ′": "sigma'", "σ'": "sigma'",
}

THEOREM_WORDS: tuple[tuple[str, ...], ...] = (
    ("rho",), ("sigma",), ("rho'",), ("sigma'",),
    ("rho", "sigma"), ("rho'", "sigma'"),
    ("rho", "rho'"), ("rho", "sigma'"), ("sigma", "rho'"), ("sigma", "sigma'"),
    ("rho", "sigma", "rho'"), ("rho", "sigma", "sigma'"),
    ("rho", "rho'", "sigma'"), ("sigma", "rho'", "sigma'"),
)

# words whose trace equals a closed form, directly or through rho <-> rho', sigma <-> sigma'
MIRRORS = {
    ("sigma", "rho'"): ("rho", "sigma'"),
    ("rho", "rho'", "sigma'"): ("rho", "sigma", "rho'"),
    ("sigma", "rho'", "sigma'"): ("rho", "sigma", "sigma'"),
}


def parse_word(word) -> tuple[str, ...]:
    if isinstance(word, str):
        word = word.replace("*", " ").replace(",", " ").split()
    try:
        out = tuple(_ALIASES[w] for w in word)
    except KeyError as exc:
        raise ValueError(f"unknown generator {exc.args[0]!r}") from None
    if not out:
        raise ValueError("empty word")
    return out


def word_name(word: Sequence[str]) -> str:
    return " ".join(word)


def word_matrix(word) -> QMatrix:
    gens = dict(zip(GENERATOR_NAMES, generic_generators()))
    w = parse_word(word)
    out = gens[w[0]]
    for g in w[1:]:
        out = out * gens[g]
    return out


def word_trace(word) -> TowerElement:
    w = parse_word(word)
    gens = dict(zip(GENERATOR_NAMES, generic_generators()))
    if len(w) == 1:
        return trace_of(gens[w[0]])
    head = word_matrix(w[:-1])
    return trace_of_product(head, gens[w[-1]])


def closed_forms() -> dict[tuple[str, ...], MultiRat]:
    """Closed-form traces of rho rho', rho sigma', sigma sigma', rho sigma rho', rho sigma sigma'."""
    c = C_POLY
    P = _P
    D = ATOMS[2]
    r, s, t = R, S, T
    return {
        ("rho", "rho'"): rat(2 * r * r)
        + rat(2 * r * r * (c + ONE) ** 2, 1, 1)
        + rat(2 * (P * P - (c * c - ONE) * t * t), 1, 0, 1),
        ("rho", "sigma'"): rat(2 * r * s) - rat(2 * r * s * (c + ONE), 1) - rat(2 * P, 1),
        ("sigma", "sigma'"): rat(2 * s * s) + rat(2 * s * s * (c + ONE), 1) + rat(2 * D, 1),
        ("rho", "sigma", "rho'"): rat(2 * t * r)
        + rat(2 * t * r * (c + ONE), 1)
        + rat(2 * (c + ONE) * (r - 2 * s * t) * t, 0, 0, 1)
        + rat(2 * (2 * s * t * c - r * (c - ONE)) * P, 1, 0, 1),
        ("rho", "sigma", "sigma'"): rat(2 * t * s)
        - rat(2 * t * s * (c + ONE), 1)
        + rat(2 * (r * (c - ONE) + s * t - s * t * c), 1)
        - rat(2 * (c + ONE) * s * t, 1),
    }


@dataclass
class TheoremTable:
    rows: list[tuple[tuple[str, ...], MultiRat]]
    closed_form_words: list[tuple[str, ...]]

    def as_dict(self) -> dict[str, MultiRat]:
        return {word_name(w): v for w, v in self.rows}

    def to_json(self) -> dict:
        return {
            "variables": ["r", "s", "t"],
            "c": "4rst - 2r^2 - 2s^2 - 2t^2 + 1",
            "traces": [{"word": word_name(w), "trace": v.to_json()} for w, v in self.rows],
            "closed_form_matches": [word_name(w) for w in self.closed_form_words],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, sort_keys=True) + "\n"


def check_theorem_2_3(words: Iterable = THEOREM_WORDS) -> TheoremTable:
    """Every word trace has no C-part and no N-dependence; closed forms match."""
    forms = closed_forms()
    rows, matched = [], []
    for w in (parse_word(x) for x in words):
        tr = word_trace(w)
        if not tr.ext.is_zero():
            raise TheoremViolation(word_name(w), "trace has a nonzero sqrt(c^2 - 1) component")
        if not tr.base.n_free():
            raise TheoremViolation(word_name(w), "trace depends on M~")
        key = MIRRORS.get(w, w)
        if key in forms:
            if not tr.base == forms[key]:
                raise TheoremViolation(word_name(w), "trace differs from its closed form")
            matched.append(w)
        rows.append((w, tr.base))
    return TheoremTable(rows, matched)


def check_commutator_identities() -> dict[str, bool]:
    """tr[rho, sigma] = -2c, [rho sigma, sigma] = [rho, sigma], det = 1 for all
    generators, [rho', sigma'] = [rho, sigma], and tr[rho, sigma] != 2."""
    rho, sigma, rho_p, sigma_p = generic_generators()
    comm = commutator(rho, sigma)
    c = tower(rat(C_POLY))
    tr_comm = trace_of(comm)
    report = {
        "tr[rho,sigma] = -2c": tr_comm == -2 * c,
        "[rho sigma, sigma] = [rho, sigma]": commutator(rho * sigma, sigma) == comm,
        "[rho', sigma'] = [rho, sigma]": commutator(rho_p, sigma_p) == comm,
        "[rho, sigma] is diagonal": comm.is_diagonal(),
        # -2c - 2 is a nonzero polynomial, so the pair is irreducible
        "tr[rho,sigma] != 2": not (tr_comm - 2 * TONE).is_zero(),
    }
    for name, g in zip(GENERATOR_NAMES, (rho, sigma, rho_p, sigma_p)):
        report[f"det {name} = 1"] = g.det_form() == TONE
    bad = [k for k, ok in report.items() if not ok]
    if bad:
        raise IdentityViolation(", ".join(bad))
    return report


def check_basic_traces() -> dict[str, bool]:
    rho, sigma, rho_p, sigma_p = generic_generators()
    rs = rho * sigma
    expected = rho_sigma_closed_form()
    report = {
        "tr rho = 2r": trace_of(rho) == tower(rat(2 * R)),
        "tr sigma = 2s": trace_of(sigma) == tower(rat(2 * S)),
        "tr rho' = 2r": trace_of(rho_p) == tower(rat(2 * R)),
        "tr sigma' = 2s": trace_of(sigma_p) == tower(rat(2 * S)),
        "tr rho sigma = 2t": trace_of(rs) == tower(rat(2 * T)),
    }
    for i, (a, b) in enumerate(zip(rs.coords, expected.coords)):
        report[f"rho sigma coordinate {i}"] = a == b
    bad = [k for k, ok in report.items() if not ok]
    if bad:
        raise IdentityViolation(", ".join(bad))
    return report
