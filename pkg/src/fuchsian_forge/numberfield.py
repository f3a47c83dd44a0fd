"""Real number fields K = Q[x]/(f) with a chosen real embedding."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence, Union

from .errors import NoSuchRealEmbedding, NonSquarefree, ReducibleModulus, ZeroElement
from .exact import (
    RealInterval,
    UniPoly,
    frac_str,
    is_squarefree,
    isolate_real_roots,
    parse_frac,
    parse_poly,
    poly_gcd,
    poly_xgcd,
    refine_root,
)

Scalar = Union[int, Fraction]

# certified_sign gives up refining and checks for a zero divisor past this
_GCD_CHECK_BITS = 256


@dataclass(frozen=True)
class NumberField:
    modulus: UniPoly
    embedding_index: int
    root_interval: RealInterval

    @property
    def degree(self) -> int:
        return self.modulus.degree

    def __repr__(self) -> str:
        return f"NumberField({self.modulus}, embedding={self.embedding_index})"

    # element constructors
    def element(self, coords: Iterable[Scalar]) -> "FieldElement":
        cs = [Fraction(c) for c in coords]
        if len(cs) > self.degree:
            return self.from_poly(UniPoly(cs))
        cs += [Fraction(0)] * (self.degree - len(cs))
        return FieldElement(self, tuple(cs))

    def from_poly(self, p: UniPoly) -> "FieldElement":
        r = p % self.modulus
        return self.element(r.coeffs)

    def __call__(self, value) -> "FieldElement":
        if isinstance(value, FieldElement):
            if value.field != self:
                raise ValueError("element belongs to another field")
            return value
        if isinstance(value, UniPoly):
            return self.from_poly(value)
        if isinstance(value, str):
            return self.from_poly(parse_poly(value))
        return self.element([value])

    @property
    def gen(self) -> "FieldElement":
        return self.from_poly(UniPoly.x())

    @property
    def zero(self) -> "FieldElement":
        return self.element([])

    @property
    def one(self) -> "FieldElement":
        return self.element([1])

    def theta_enclosure(self, bits: int) -> RealInterval:
        """Isolating interval of the embedded root, narrower than 2**-bits."""
        return _refined_root(self.modulus, self.root_interval, bits)

    def to_json(self) -> dict:
        return {
            "modulus": self.modulus.to_json(),
            "embedding_index": self.embedding_index,
            "root_interval": self.root_interval.to_json(),
        }

    @classmethod
    def from_json(cls, data: dict) -> "NumberField":
        return cls(
            UniPoly.from_json(data["modulus"]),
            int(data["embedding_index"]),
            RealInterval.from_json(data["root_interval"]),
        )


@lru_cache(maxsize=4096)
def _refined_root(modulus: UniPoly, iv: RealInterval, bits: int) -> RealInterval:
    return refine_root(iv, modulus, Fraction(1, 1 << bits))


def make_field(f: UniPoly | str, embedding_index: int = 0) -> NumberField:
    """Build K = Q[x]/(f) embedded at the ``embedding_index``-th real root (ascending).

    Irreducibility of f is not checked; zero divisors surface later as
    :class:`ReducibleModulus`.
    """
    if isinstance(f, str):
        f = parse_poly(f)
    if f.degree < 1:
        raise ValueError("modulus must be nonconstant")
    f = f.monic()
    if not is_squarefree(f):
        raise NonSquarefree(f"{f} is not squarefree")
    roots = isolate_real_roots(f)
    if embedding_index < 0 or embedding_index >= len(roots):
        raise NoSuchRealEmbedding(
            f"{f} has {len(roots)} real roots; no embedding with index {embedding_index}"
        )
    return NumberField(f, embedding_index, roots[embedding_index])


def rational_field() -> NumberField:
    return make_field(UniPoly.x(), 0)


class FieldElement:
    """Element of a NumberField in power-basis coordinates."""

    __slots__ = ("field", "coords")

    def __init__(self, field: NumberField, coords: Sequence[Fraction]):
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "coords", tuple(coords))

    def __setattr__(self, name, value):
        raise AttributeError("FieldElement is immutable")

    def lift(self) -> UniPoly:
        return UniPoly(self.coords)

    def is_zero(self) -> bool:
        return not any(self.coords)

    def is_rational(self) -> bool:
        return not any(self.coords[1:])

    def as_rational(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return self.coords[0]

    def __bool__(self) -> bool:
        return not self.is_zero()

    def __repr__(self) -> str:
        return f"FieldElement({self.lift()})"

    def __str__(self) -> str:
        return str(self.lift())

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            return self.is_rational() and self.coords[0] == other
        if not isinstance(other, FieldElement):
            return NotImplemented
        return self.field == other.field and self.coords == other.coords

    def __hash__(self) -> int:
        return hash(("FieldElement", self.coords))

    def _coerce(self, other) -> "FieldElement":
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise ValueError("mixing elements of different fields")
            return other
        if isinstance(other, (int, Fraction)):
            return self.field.element([other])
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return FieldElement(self.field, tuple(a + b for a, b in zip(self.coords, other.coords)))

    __radd__ = __add__

    def __neg__(self) -> "FieldElement":
        return FieldElement(self.field, tuple(-a for a in self.coords))

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return FieldElement(self.field, tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return FieldElement(self.field, tuple(a * other for a in self.coords))
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if self.field.degree == 1:
            return FieldElement(self.field, (self.coords[0] * other.coords[0],))
        return self.field.from_poly(self.lift() * other.lift())

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroElement("division by zero")
            return self * (1 / Fraction(other))
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * elem_invert(self.field, other)

    def __rtruediv__(self, other):
        return elem_invert(self.field, self) * other

    def __pow__(self, k: int) -> "FieldElement":
        if k < 0:
            return elem_invert(self.field, self) ** -k
        result = self.field.one
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def to_json(self) -> list[str]:
        return [frac_str(c) for c in self.coords]


def element_from_json(K: NumberField, data: Sequence[str]) -> FieldElement:
    return K.element(parse_frac(c) for c in data)


def elem_invert(K: NumberField, e: FieldElement) -> FieldElement:
    if e.is_zero():
        raise ZeroElement("cannot invert 0")
    if K.degree == 1:
        return K.element([1 / e.coords[0]])
    g, s, _ = poly_xgcd(e.lift(), K.modulus)
    if g.degree > 0:
        raise ReducibleModulus(g)
    return K.from_poly(s)


class _Echelon:
    """Row-echelon basis that remembers how each row combines the inputs."""

    def __init__(self, dim: int):
        self.dim = dim
        self.rows: list[tuple[int, list[Fraction], list[Fraction]]] = []  # (pivot, vec, combo)
        self.count = 0

    def reduce(self, vec: Sequence[Fraction]) -> tuple[list[Fraction], list[Fraction]]:
        v = list(vec)
        combo = [Fraction(0)] * (self.count + 1)
        combo[self.count] = Fraction(1)
        for pivot, row, rcombo in self.rows:
            f = v[pivot]
            if f:
                for i in range(pivot, self.dim):
                    v[i] -= f * row[i]
                for i, c in enumerate(rcombo):
                    combo[i] -= f * c
        return v, combo

    def add(self, vec: Sequence[Fraction]) -> list[Fraction] | None:
        """Insert ``vec``; return the dependency combo if it is dependent."""
        v, combo = self.reduce(vec)
        pivot = next((i for i, x in enumerate(v) if x), None)
        if pivot is None:
            self.count += 1
            return combo
        inv = 1 / v[pivot]
        row = [x * inv for x in v]
        rcombo = [c * inv for c in combo]
        # keep rows sorted by pivot and fully reduced at the new pivot
        for k, (p, r, rc) in enumerate(self.rows):
            f = r[pivot]
            if f:
                self.rows[k] = (
                    p,
                    [a - f * b for a, b in zip(r, row)],
                    [a - f * b for a, b in zip(rc + [Fraction(0)] * (len(rcombo) - len(rc)), rcombo)],
                )
        self.rows.append((pivot, row, rcombo))
        self.rows.sort(key=lambda t: t[0])
        self.count += 1
        return None

    @property
    def rank(self) -> int:
        return len(self.rows)


def minimal_polynomial(K: NumberField, e: FieldElement) -> UniPoly:
    """Monic minimal polynomial from the first linear dependence among 1, e, e^2, ..."""
    ech = _Echelon(K.degree)
    power = K.one
    for _ in range(K.degree + 1):
        dep = ech.add(power.coords)
        if dep is not None:
            return UniPoly(dep).monic()
        power = power * e
    raise AssertionError("no dependence among n+1 powers")  # pragma: no cover


def subfield_degree(K: NumberField, gens: Sequence[FieldElement]) -> int:
    """Degree over Q of the subfield generated by ``gens`` (rank of monomials)."""
    ech = _Echelon(K.degree)
    frontier = [K.one]
    ech.add(K.one.coords)
    while frontier:
        new = []
        for m in frontier:
            for g in gens:
                p = m * g
                if ech.add(p.coords) is None:
                    new.append(p)
        frontier = new
    return ech.rank


def is_generator(K: NumberField, e: FieldElement) -> bool:
    return minimal_polynomial(K, e).degree == K.degree


def embed(K: NumberField, e: FieldElement, bits: int = 64) -> RealInterval:
    """Interval enclosure of the real embedding of ``e`` using a 2**-bits root enclosure."""
    if e.is_rational():
        return RealInterval(e.coords[0])
    theta = K.theta_enclosure(bits)
    return e.lift()(theta)


def certified_sign(K: NumberField, e: FieldElement) -> int:
    if e.is_zero():
        return 0
    if e.is_rational():
        return 1 if e.coords[0] > 0 else -1
    bits = 32
    checked = False
    while True:
        iv = embed(K, e, bits)
        s = iv.sign()
        if s is not None and s != 0:
            return s
        if bits >= _GCD_CHECK_BITS and not checked:
            g = poly_gcd(e.lift(), K.modulus)
            if g.degree > 0:
                raise ReducibleModulus(g)
            checked = True
        bits *= 2


def certified_interval(K: NumberField, e: FieldElement, min_bits: int = 32) -> RealInterval:
    """Sign-definite enclosure of a nonzero element (or [0,0] for zero)."""
    if e.is_zero():
        return RealInterval(0)
    certified_sign(K, e)
    bits = min_bits
    while True:
        iv = embed(K, e, bits)
        if iv.sign() not in (None, 0):
            return iv
        bits *= 2


def approx(K: NumberField, e: FieldElement, bits: int = 64) -> Fraction:
    """A rational within roughly 2**-bits of the embedding (midpoint of an enclosure)."""
    return embed(K, e, bits).mid
