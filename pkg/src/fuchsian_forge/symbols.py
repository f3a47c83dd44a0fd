"""Quaternion algebra symbols (a, b / K) and the moves that preserve their
isomorphism class:

    (a, b) -> (b, a)
    (a, b) -> (a u^2, b)
    (a, b) -> (a, b v^2 - a b w^2)      provided b v^2 - a b w^2 != 0

Every move is recorded as an :class:`EquivalenceStep` so that a chain can be
replayed (and inverted) exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import isqrt
from typing import Iterable, Sequence

from .errors import DegenerateSymbol, IllegalStep, NotRealSplit, SearchExhausted
from .numberfield import FieldElement, NumberField, approx, certified_sign, element_from_json

SWAP = "swap"
SCALE_A = "scale_a"
MIX_B = "mix_b"

_PARAM_NAMES = {SWAP: (), SCALE_A: ("u",), MIX_B: ("v", "w")}


@dataclass(frozen=True)
class QuaternionSymbol:
    a: FieldElement
    b: FieldElement

    def __post_init__(self):
        if self.a.is_zero() or self.b.is_zero():
            raise DegenerateSymbol("quaternion symbol slots must be nonzero")

    def to_json(self) -> dict:
        return {"a": self.a.to_json(), "b": self.b.to_json()}

    @classmethod
    def from_json(cls, K: NumberField, data: dict) -> "QuaternionSymbol":
        return cls(element_from_json(K, data["a"]), element_from_json(K, data["b"]))


@dataclass(frozen=True)
class EquivalenceStep:
    kind: str
    params: tuple[FieldElement, ...] = ()

    def __post_init__(self):
        if self.kind not in _PARAM_NAMES:
            raise IllegalStep(f"unknown step kind {self.kind!r}")
        if len(self.params) != len(_PARAM_NAMES[self.kind]):
            raise IllegalStep(f"{self.kind} takes {len(_PARAM_NAMES[self.kind])} parameters")

    @classmethod
    def swap(cls) -> "EquivalenceStep":
        return cls(SWAP)

    @classmethod
    def scale_a(cls, u: FieldElement) -> "EquivalenceStep":
        return cls(SCALE_A, (u,))

    @classmethod
    def mix_b(cls, v: FieldElement, w: FieldElement) -> "EquivalenceStep":
        return cls(MIX_B, (v, w))

    def inverse(self, before: QuaternionSymbol) -> "EquivalenceStep":
        """The step undoing this one when applied to ``apply_step(before, self)``."""
        if self.kind == SWAP:
            return self
        if self.kind == SCALE_A:
            (u,) = self.params
            return EquivalenceStep.scale_a(1 / u)
        v, w = self.params
        # (v + w sqrt a)^-1 = (v - w sqrt a) / n has norm 1/n
        n = v * v - before.a * w * w
        return EquivalenceStep.mix_b(v / n, -w / n)

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "params": {name: p.to_json() for name, p in zip(_PARAM_NAMES[self.kind], self.params)},
        }

    @classmethod
    def from_json(cls, K: NumberField, data: dict) -> "EquivalenceStep":
        kind = data["kind"]
        if kind not in _PARAM_NAMES:
            raise IllegalStep(f"unknown step kind {kind!r}")
        params = tuple(element_from_json(K, data["params"][name]) for name in _PARAM_NAMES[kind])
        return cls(kind, params)


def real_split(K: NumberField, A: QuaternionSymbol) -> bool:
    """(a, b) tensored with R is M_2(R) iff a > 0 or b > 0 at the embedding."""
    return certified_sign(K, A.a) > 0 or certified_sign(K, A.b) > 0


def apply_step(A: QuaternionSymbol, step: EquivalenceStep) -> QuaternionSymbol:
    if step.kind == SWAP:
        return QuaternionSymbol(A.b, A.a)
    if step.kind == SCALE_A:
        (u,) = step.params
        if u.is_zero():
            raise IllegalStep("scale_a needs u != 0")
        return QuaternionSymbol(A.a * u * u, A.b)
    v, w = step.params
    new_b = A.b * v * v - A.a * A.b * w * w
    if new_b.is_zero():
        raise IllegalStep("mix_b needs b v^2 - a b w^2 != 0")
    return QuaternionSymbol(A.a, new_b)


def replay(A: QuaternionSymbol, steps: Iterable[EquivalenceStep]) -> QuaternionSymbol:
    for step in steps:
        A = apply_step(A, step)
    return A


def in_band(K: NumberField, x: FieldElement, eps: Fraction) -> bool:
    """Certified 1 < x < 1 + eps."""
    return certified_sign(K, x - 1) > 0 and certified_sign(K, 1 + eps - x) > 0


def _rational_band_scale(K: NumberField, alpha: FieldElement, eps: Fraction, budget: int) -> Fraction:
    """Smallest-denominator rational q > 0 with 1 < alpha q^2 < 1 + eps (alpha > 0).

    For each denominator the numerators nearest to the band midpoint are tried.
    """
    target = 1 + eps / 2
    alpha_mid = approx(K, alpha, 96)
    for den in range(1, budget + 1):
        x = den * den * target / alpha_mid
        p0 = isqrt(x.__floor__())
        cands = sorted({p0, p0 + 1} - {0}, key=lambda p: abs(Fraction(p * p, den * den) * alpha_mid - target))
        for p in cands:
            q = Fraction(p, den)
            if q.denominator != den:
                continue
            if in_band(K, alpha * q * q, eps):
                return q
    raise SearchExhausted(f"no rational scale found within {budget} denominators")


def normalize_band(
    K: NumberField, A: QuaternionSymbol, eps: Fraction, budget: int = 100_000
) -> tuple[QuaternionSymbol, list[EquivalenceStep]]:
    """Move (a, b) to an equivalent symbol with both slots in (1, 1 + eps)."""
    eps = Fraction(eps)
    if not 0 < eps < 1:
        raise ValueError("eps must lie in (0, 1)")
    if not real_split(K, A):
        raise NotRealSplit("the algebra is ramified at the chosen real place")
    steps: list[EquivalenceStep] = []
    cur = A

    def push(step: EquivalenceStep) -> None:
        nonlocal cur
        cur = apply_step(cur, step)
        steps.append(step)

    if certified_sign(K, cur.a) < 0:
        push(EquivalenceStep.swap())
    if not in_band(K, cur.a, eps):
        u = _rational_band_scale(K, cur.a, eps, budget)
        push(EquivalenceStep.scale_a(K(u)))
    if not in_band(K, cur.b, eps):
        if certified_sign(K, cur.b) > 0:
            v = _rational_band_scale(K, cur.b, eps, budget)
            push(EquivalenceStep.mix_b(K(v), K.zero))
        else:
            # b (0 - a w^2) = -a b w^2 > 0
            w = _rational_band_scale(K, -cur.a * cur.b, eps, budget)
            push(EquivalenceStep.mix_b(K.zero, K(w)))
    return cur, steps


def surface_symbol(K: NumberField, t_half: FieldElement, c: FieldElement) -> QuaternionSymbol:
    """Symbol ((2t)^2 - 4, -2c - 2) of the surface group with half-traces t, c."""
    a = (2 * t_half) * (2 * t_half) - 4
    b = -2 * c - 2
    if a.is_zero() or b.is_zero():
        raise DegenerateSymbol("surface symbol has a zero slot")
    return QuaternionSymbol(a, b)


def inverse_chain(A: QuaternionSymbol, steps: Sequence[EquivalenceStep]) -> list[EquivalenceStep]:
    """Steps taking ``replay(A, steps)`` back to ``A``."""
    befores = []
    cur = A
    for step in steps:
        befores.append(cur)
        cur = apply_step(cur, step)
    return [step.inverse(before) for step, before in zip(reversed(steps), reversed(befores))]
