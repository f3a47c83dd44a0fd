"""Exact rational substrate: univariate polynomials, Sturm root isolation and
rational interval arithmetic.

Rationals are plain :class:`fractions.Fraction`.  Nothing in this module
touches floating point.
"""

from __future__ import annotations

import ast
from fractions import Fraction
from math import isqrt
from typing import Iterable, Sequence, Union

from .errors import NonSquarefree

RationalLike = Union[int, Fraction]


# ---------------------------------------------------------------------------
# rationals
# ---------------------------------------------------------------------------

def frac_str(q: RationalLike) -> str:
    """Serialize a rational as ``"p/q"``, or ``"p"`` when the denominator is 1."""
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def parse_frac(text: Union[str, int, Fraction]) -> Fraction:
    if isinstance(text, float):
        raise TypeError("floats are not accepted as exact rationals")
    return Fraction(text)


# ---------------------------------------------------------------------------
# univariate polynomials
# ---------------------------------------------------------------------------

class UniPoly:
    """Immutable polynomial over Q with ascending coefficients.

    The zero polynomial has an empty coefficient tuple and degree -1.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[RationalLike] = ()):
        cs = [Fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    def __setattr__(self, name, value):
        raise AttributeError("UniPoly is immutable")

    # construction helpers
    @classmethod
    def constant(cls, c: RationalLike) -> "UniPoly":
        return cls([c])

    @classmethod
    def x(cls) -> "UniPoly":
        return cls([0, 1])

    @classmethod
    def from_roots(cls, roots: Iterable[RationalLike]) -> "UniPoly":
        p = cls([1])
        for r in roots:
            p = p * cls([-Fraction(r), 1])
        return p

    # basic queries
    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def lc(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def is_zero(self) -> bool:
        return not self.coeffs

    def __getitem__(self, i: int) -> Fraction:
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return Fraction(0)

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = UniPoly([other])
        if not isinstance(other, UniPoly):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(("UniPoly", self.coeffs))

    def __repr__(self) -> str:
        return f"UniPoly([{', '.join(frac_str(c) for c in self.coeffs)}])"

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for i in range(self.degree, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            mag = abs(c)
            sign = "-" if c < 0 else "+"
            if i == 0:
                body = frac_str(mag)
            else:
                mono = "x" if i == 1 else f"x^{i}"
                body = mono if mag == 1 else f"{frac_str(mag)}*{mono}"
            parts.append((sign, body))
        first_sign, first_body = parts[0]
        out = ("-" if first_sign == "-" else "") + first_body
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    # arithmetic
    def _coerce(self, other) -> "UniPoly":
        if isinstance(other, UniPoly):
            return other
        if isinstance(other, (int, Fraction)):
            return UniPoly([other])
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        n = max(len(self.coeffs), len(other.coeffs))
        return UniPoly([self[i] + other[i] for i in range(n)])

    __radd__ = __add__

    def __neg__(self) -> "UniPoly":
        return UniPoly([-c for c in self.coeffs])

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return UniPoly([c * other for c in self.coeffs])
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if not self.coeffs or not other.coeffs:
            return UniPoly()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return UniPoly(out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "UniPoly":
        if k < 0:
            raise ValueError("negative power of a polynomial")
        result = UniPoly([1])
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __divmod__(self, other: "UniPoly"):
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = other.degree
        lc = other.lc
        if len(rem) - 1 < dq:
            return UniPoly(), self
        quot = [Fraction(0)] * (len(rem) - dq)
        for i in range(len(rem) - 1, dq - 1, -1):
            coef = rem[i] / lc
            quot[i - dq] = coef
            if coef:
                for j, b in enumerate(other.coeffs):
                    rem[i - dq + j] -= coef * b
        return UniPoly(quot), UniPoly(rem[:dq])

    def __floordiv__(self, other: "UniPoly") -> "UniPoly":
        return divmod(self, other)[0]

    def __mod__(self, other: "UniPoly") -> "UniPoly":
        return divmod(self, other)[1]

    def monic(self) -> "UniPoly":
        if self.is_zero():
            return self
        return self * (1 / self.lc)

    def derivative(self) -> "UniPoly":
        return UniPoly([i * c for i, c in enumerate(self.coeffs)][1:])

    def __call__(self, x):
        """Horner evaluation; ``x`` may be a rational, an interval or any ring element."""
        if not self.coeffs:
            return x * 0
        acc = x * 0 + self.coeffs[-1]
        for c in reversed(self.coeffs[:-1]):
            acc = acc * x + c
        return acc

    def compose(self, inner: "UniPoly") -> "UniPoly":
        acc = UniPoly()
        for c in reversed(self.coeffs):
            acc = acc * inner + c
        return acc

    def to_json(self) -> list[str]:
        return [frac_str(c) for c in self.coeffs]

    @classmethod
    def from_json(cls, data: Sequence[str]) -> "UniPoly":
        return cls(parse_frac(c) for c in data)


def poly_gcd(p: UniPoly, q: UniPoly) -> UniPoly:
    """Monic greatest common divisor."""
    if p.is_zero() and q.is_zero():
        raise ValueError("gcd of two zero polynomials")
    a, b = p.monic(), q.monic()
    while not b.is_zero():
        a, b = b, (a % b).monic()
    return a.monic()


def poly_xgcd(p: UniPoly, q: UniPoly) -> tuple[UniPoly, UniPoly, UniPoly]:
    """Return (g, s, t) with s*p + t*q = g and g monic."""
    r0, r1 = p, q
    s0, s1 = UniPoly([1]), UniPoly()
    t0, t1 = UniPoly(), UniPoly([1])
    while not r1.is_zero():
        quo, rem = divmod(r0, r1)
        r0, r1 = r1, rem
        s0, s1 = s1, s0 - quo * s1
        t0, t1 = t1, t0 - quo * t1
    lc = r0.lc
    return r0 * (1 / lc), s0 * (1 / lc), t0 * (1 / lc)


def is_squarefree(p: UniPoly) -> bool:
    return poly_gcd(p, p.derivative()).degree == 0


# ---------------------------------------------------------------------------
# intervals
# ---------------------------------------------------------------------------

class RealInterval:
    """Closed interval [lo, hi] with rational endpoints."""

    __slots__ = ("lo", "hi")

    def __init__(self, lo: RationalLike, hi: RationalLike | None = None):
        lo = Fraction(lo)
        hi = lo if hi is None else Fraction(hi)
        if lo > hi:
            raise ValueError(f"empty interval [{lo}, {hi}]")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    def __setattr__(self, name, value):
        raise AttributeError("RealInterval is immutable")

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def mid(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def contains(self, x) -> bool:
        if isinstance(x, RealInterval):
            return self.lo <= x.lo and x.hi <= self.hi
        return self.lo <= x <= self.hi

    __contains__ = contains

    def overlaps(self, other: "RealInterval") -> bool:
        return self.lo <= other.hi and other.lo <= self.hi

    def sign(self) -> int | None:
        """+1 / -1 when the interval is sign-definite, 0 for [0,0], else None."""
        if self.lo > 0:
            return 1
        if self.hi < 0:
            return -1
        if self.lo == 0 and self.hi == 0:
            return 0
        return None

    def is_degenerate(self) -> bool:
        return self.lo == self.hi

    def __eq__(self, other) -> bool:
        if not isinstance(other, RealInterval):
            return NotImplemented
        return self.lo == other.lo and self.hi == other.hi

    def __hash__(self) -> int:
        return hash(("RealInterval", self.lo, self.hi))

    def __repr__(self) -> str:
        return f"RealInterval({frac_str(self.lo)}, {frac_str(self.hi)})"

    @staticmethod
    def _coerce(other) -> "RealInterval":
        if isinstance(other, RealInterval):
            return other
        if isinstance(other, (int, Fraction)):
            return RealInterval(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return RealInterval(self.lo + other.lo, self.hi + other.hi)

    __radd__ = __add__

    def __neg__(self) -> "RealInterval":
        return RealInterval(-self.hi, -self.lo)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return RealInterval(self.lo - other.hi, self.hi - other.lo)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            a, b = self.lo * other, self.hi * other
            return RealInterval(min(a, b), max(a, b))
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        ps = (self.lo * other.lo, self.lo * other.hi, self.hi * other.lo, self.hi * other.hi)
        return RealInterval(min(ps), max(ps))

    __rmul__ = __mul__

    def inverse(self) -> "RealInterval":
        if self.lo <= 0 <= self.hi:
            raise ZeroDivisionError(f"inverse of interval containing 0: {self!r}")
        return RealInterval(1 / self.hi, 1 / self.lo)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * (1 / Fraction(other))
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, k: int) -> "RealInterval":
        if k < 0:
            return (self ** -k).inverse()
        if k == 0:
            return RealInterval(1)
        if k % 2 == 1 or self.lo >= 0:
            lo, hi = self.lo ** k, self.hi ** k
            return RealInterval(min(lo, hi), max(lo, hi))
        if self.hi <= 0:
            return RealInterval(self.hi ** k, self.lo ** k)
        return RealInterval(0, max(self.lo ** k, self.hi ** k))

    def abs_max(self) -> Fraction:
        return max(abs(self.lo), abs(self.hi))

    def round_out(self, bits: int) -> "RealInterval":
        """Widen outward to endpoints that are multiples of 2**-bits."""
        scale = 1 << bits
        lo = Fraction((self.lo * scale).__floor__(), scale)
        hi = Fraction((self.hi * scale).__ceil__(), scale)
        return RealInterval(lo, hi)

    def sqrt(self, bits: int) -> "RealInterval":
        """Outward-rounded square root with endpoints on the 2**-bits grid."""
        if self.lo < 0:
            raise ValueError(f"sqrt of interval with negative part: {self!r}")
        return RealInterval(_sqrt_floor(self.lo, bits), _sqrt_ceil(self.hi, bits))

    def to_json(self) -> list[str]:
        return [frac_str(self.lo), frac_str(self.hi)]

    @classmethod
    def from_json(cls, data: Sequence[str]) -> "RealInterval":
        return cls(parse_frac(data[0]), parse_frac(data[1]))


def _sqrt_floor(q: Fraction, bits: int) -> Fraction:
    scale = 1 << bits
    # floor(sqrt(q) * 2^bits) == isqrt(floor(q * 4^bits))
    return Fraction(isqrt((q * scale * scale).__floor__()), scale)


def _sqrt_ceil(q: Fraction, bits: int) -> Fraction:
    scale = 1 << bits
    n = (q * scale * scale).__ceil__()
    r = isqrt(n)
    if r * r < n:
        r += 1
    return Fraction(r, scale)


def rational_sqrt(q: Fraction) -> Fraction | None:
    """Exact square root of a nonnegative rational, or None if irrational."""
    if q < 0:
        return None
    n, d = q.numerator, q.denominator
    rn, rd = isqrt(n), isqrt(d)
    if rn * rn == n and rd * rd == d:
        return Fraction(rn, rd)
    return None


# ---------------------------------------------------------------------------
# Sturm sequences and real roots
# ---------------------------------------------------------------------------

def sturm_sequence(p: UniPoly) -> list[UniPoly]:
    seq = [p, p.derivative()]
    while not seq[-1].is_zero():
        rem = seq[-2] % seq[-1]
        if rem.is_zero():
            break
        # positive rescaling keeps sign pattern; monic-by-|lc| limits growth
        seq.append(-rem * (1 / abs(rem.lc)))
    return [q for q in seq if not q.is_zero()]


def sign_variations(seq: Sequence[UniPoly], x: Fraction) -> int:
    signs = []
    for q in seq:
        v = q(x)
        if v:
            signs.append(v > 0)
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def root_bound(p: UniPoly) -> Fraction:
    """A power of two strictly exceeding every |root| of p (Cauchy bound)."""
    lc = abs(p.lc)
    bound = 1 + max((abs(c) / lc for c in p.coeffs[:-1]), default=Fraction(0))
    b = 1
    while b <= bound:
        b *= 2
    return Fraction(b)


def count_real_roots(p: UniPoly, seq: Sequence[UniPoly] | None = None) -> int:
    seq = seq if seq is not None else sturm_sequence(p)
    b = root_bound(p)
    return sign_variations(seq, -b) - sign_variations(seq, b)


def isolate_real_roots(p: UniPoly) -> list[RealInterval]:
    """Disjoint isolating intervals for the real roots of a squarefree p, ascending.

    Rational roots met along the way are returned as degenerate intervals.
    """
    if p.is_zero():
        raise ValueError("cannot isolate roots of the zero polynomial")
    if p.degree == 0:
        return []
    if not is_squarefree(p):
        raise NonSquarefree(f"{p} is not squarefree")
    seq = sturm_sequence(p)
    b = root_bound(p)
    found: list[RealInterval] = []
    # each entry (lo, hi, n): n roots in the half-open (lo, hi]
    stack = [(-b, b, sign_variations(seq, -b) - sign_variations(seq, b))]
    while stack:
        lo, hi, n = stack.pop()
        if n == 0:
            continue
        if n == 1:
            if p(hi) == 0:
                found.append(RealInterval(hi))
                continue
            if p(lo) != 0:
                found.append(RealInterval(lo, hi))
                continue
        mid = (lo + hi) / 2
        v_lo, v_mid, v_hi = (sign_variations(seq, x) for x in (lo, mid, hi))
        stack.append((lo, mid, v_lo - v_mid))
        stack.append((mid, hi, v_mid - v_hi))
    found.sort(key=lambda iv: iv.lo)
    # unit-width intervals read better in certificates
    found = [_shrink_to_unit(iv, p) for iv in found]
    return _separate(found, p)


def _shrink_to_unit(iv: RealInterval, p: UniPoly) -> RealInterval:
    while iv.width > 1:
        iv = _bisect_once(iv, p)
    return iv


def _separate(ivs: list[RealInterval], p: UniPoly) -> list[RealInterval]:
    """Shrink neighbours that touch at a shared (non-root) endpoint."""
    ivs = list(ivs)
    i = 0
    while i + 1 < len(ivs):
        if ivs[i].hi >= ivs[i + 1].lo:
            ivs[i] = _bisect_once(ivs[i], p)
            ivs[i + 1] = _bisect_once(ivs[i + 1], p)
            continue
        i += 1
    return ivs


def _bisect_once(iv: RealInterval, p: UniPoly) -> RealInterval:
    if iv.is_degenerate():
        return iv
    lo, hi = iv.lo, iv.hi
    plo = p(lo)
    if plo == 0:
        return RealInterval(lo)
    if p(hi) == 0:
        return RealInterval(hi)
    mid = (lo + hi) / 2
    pm = p(mid)
    if pm == 0:
        return RealInterval(mid)
    if (pm > 0) != (plo > 0):
        return RealInterval(lo, mid)
    return RealInterval(mid, hi)


def refine_root(iv: RealInterval, p: UniPoly, width: RationalLike) -> RealInterval:
    """Bisect an isolating interval of a simple root until its width drops below ``width``."""
    width = Fraction(width)
    if width <= 0:
        raise ValueError("width must be positive")
    while iv.width >= width:
        nxt = _bisect_once(iv, p)
        if nxt.is_degenerate() or nxt == iv:
            return nxt
        iv = nxt
    return iv


# ---------------------------------------------------------------------------
# parsing
# ---------------------------------------------------------------------------

def parse_poly(text: str, var: str = "x") -> UniPoly:
    """Parse an expression such as ``"x^3 - x - 1"`` or ``"1/2*x + 3"``.

    Supports + - * / ^ (or **), parentheses, integer literals and the single
    variable; division is only allowed by constants.
    """
    try:
        tree = ast.parse(text.replace("^", "**"), mode="eval")
    except SyntaxError as exc:
        raise ValueError(f"cannot parse polynomial {text!r}") from exc
    return _eval_node(tree.body, var, text)


def _eval_node(node, var: str, text: str) -> UniPoly:
    if isinstance(node, ast.Constant) and isinstance(node.value, int) and not isinstance(node.value, bool):
        return UniPoly([node.value])
    if isinstance(node, ast.Name):
        if node.id != var:
            raise ValueError(f"unknown symbol {node.id!r} in {text!r}")
        return UniPoly.x()
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
        inner = _eval_node(node.operand, var, text)
        return -inner if isinstance(node.op, ast.USub) else inner
    if isinstance(node, ast.BinOp):
        left = _eval_node(node.left, var, text)
        right = _eval_node(node.right, var, text)
        if isinstance(node.op, ast.Add):
            return left + right
        if isinstance(node.op, ast.Sub):
            return left - right
        if isinstance(node.op, ast.Mult):
            return left * right
        if isinstance(node.op, ast.Div):
            if right.degree != 0:
                raise ValueError(f"division by a non-constant in {text!r}")
            return left * (1 / right.lc)
        if isinstance(node.op, ast.Pow):
            if right.degree > 0 or (right.coeffs and right.lc.denominator != 1) or right[0] < 0:
                raise ValueError(f"exponent must be a nonnegative integer in {text!r}")
            return left ** int(right[0])
    raise ValueError(f"unsupported syntax in {text!r}")
