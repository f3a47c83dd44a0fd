"""Primitive-element searches.

The construction needs s = y/u to generate K, and (for the invariant trace
field) s^2 as well.  The condition y/u = g is equivalent to

    a' x0^2 + b' y0^2 - a' b' z0^2 = g',    g' = 1 + 2/(g - 1),

with a' = 1/a, b' = b and (x0, z0, y0) = (m1, m4, m5) / (m2 - m3), so the
search runs over (x0, y0, z0) and then reads off m1..m5.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterator, Sequence

from .errors import SearchExhausted, UnitPole
from .exact import RealInterval, UniPoly
from .numberfield import (
    FieldElement,
    NumberField,
    element_from_json,
    embed,
    is_generator,
    minimal_polynomial,
    subfield_degree,
)

DEFAULT_TRIAL_BUDGET = 10_000


@dataclass(frozen=True)
class GeneratorWitness:
    g_prime: FieldElement
    x0: FieldElement
    y0: FieldElement
    z0: FieldElement
    g: FieldElement
    minpoly_g: UniPoly
    minpoly_g_squared: UniPoly

    def to_json(self) -> dict:
        return {
            "g_prime": self.g_prime.to_json(),
            "x0": self.x0.to_json(),
            "y0": self.y0.to_json(),
            "z0": self.z0.to_json(),
            "g": self.g.to_json(),
            "minpoly_g": self.minpoly_g.to_json(),
            "minpoly_g_squared": self.minpoly_g_squared.to_json(),
        }

    @classmethod
    def from_json(cls, K: NumberField, data: dict) -> "GeneratorWitness":
        return cls(
            g_prime=element_from_json(K, data["g_prime"]),
            x0=element_from_json(K, data["x0"]),
            y0=element_from_json(K, data["y0"]),
            z0=element_from_json(K, data["z0"]),
            g=element_from_json(K, data["g"]),
            minpoly_g=UniPoly.from_json(data["minpoly_g"]),
            minpoly_g_squared=UniPoly.from_json(data["minpoly_g_squared"]),
        )


def gprime_form(a_prime, b_prime, x0, y0, z0):
    return a_prime * x0 * x0 + b_prime * y0 * y0 - a_prime * b_prime * z0 * z0


def odd_term_present(f: UniPoly) -> bool:
    return any(c != 0 for c in f.coeffs[1::2])


def rational_trials() -> Iterator[Fraction]:
    """1, -1, 2, -2, 1/2, -1/2, 3, -3, 1/3, -1/3, ..."""
    seen = set()
    for k in itertools.count(1):
        for q in (Fraction(k), Fraction(-k), Fraction(1, k), Fraction(-1, k)):
            if q not in seen:
                seen.add(q)
                yield q


def primitive_shift(K: NumberField, alpha: FieldElement, beta: FieldElement) -> Fraction:
    """First r in the trial sequence with Q(alpha + r beta) = Q(alpha, beta)."""
    target = subfield_degree(K, [alpha, beta])
    for r in rational_trials():
        if minimal_polynomial(K, alpha + r * beta).degree == target:
            return r
    raise AssertionError("unreachable")  # pragma: no cover


def g_from_gprime(K: NumberField, g_prime: FieldElement) -> FieldElement:
    """x -> 1 + 2/(x - 1); the map is its own inverse."""
    if g_prime == 1:
        raise UnitPole("g' = 1 is the pole of 1 + 2/(x - 1)")
    return 1 + 2 / (g_prime - 1)


def mobius_transform_minpoly(f: UniPoly) -> UniPoly:
    """(x - 1)^n f(1 + 2/(x - 1)) = sum_i a_i (x + 1)^i (x - 1)^(n - i)."""
    if f.is_zero():
        raise ValueError("zero polynomial")
    n = f.degree
    xp, xm = UniPoly([1, 1]), UniPoly([-1, 1])
    out = UniPoly()
    for i, a in enumerate(f.coeffs):
        if a:
            out = out + (xp ** i) * (xm ** (n - i)) * a
    return out


def odd_coeff_signature(f: UniPoly) -> Fraction:
    """Coefficient of x^(n-1) in the Mobius transform: sum_i (2i - n) a_i."""
    n = f.degree
    return sum(((2 * i - n) * a for i, a in enumerate(f.coeffs)), Fraction(0))


def _box_sample(rng: random.Random, iv: RealInterval, grid: int) -> Fraction:
    """A rational strictly inside ``iv`` on a grid of ``grid`` steps."""
    k = rng.randrange(1, grid)
    return iv.lo + iv.width * Fraction(k, grid)


def find_g_prime(
    K: NumberField,
    a_prime: FieldElement,
    b_prime: FieldElement,
    box: Sequence[RealInterval],
    seed: int = 0,
    budget: int = DEFAULT_TRIAL_BUDGET,
) -> GeneratorWitness:
    """Search (x0, y0, z0) with embeddings of (x0, z0, y0) inside ``box`` such
    that g' = a' x0^2 + b' y0^2 - a' b' z0^2 generates K.

    x0 and y0 are rational; z0 = z_rat + h (theta - theta_mid) is a small
    irrational perturbation of a rational point, so z0 itself generates K
    whenever h != 0.
    """
    box_x, box_z, box_y = box
    rng = random.Random(seed)
    n = K.degree
    theta = K.gen
    theta_iv = K.theta_enclosure(16)
    theta_mid = theta_iv.mid
    # |theta - theta_mid| < 2^-16, so h <= width/4 * 2^16 keeps the shift within width/4
    h_max = box_z.width * (1 << 14)
    grid = 1 << 20
    for trial in range(budget):
        x0 = _box_sample(rng, box_x, grid)
        y0 = _box_sample(rng, box_y, grid)
        z_rat = box_z.lo + box_z.width * Fraction(rng.randrange(grid // 4, 3 * grid // 4), grid)
        if n == 1:
            z0 = K(z_rat)
        else:
            h = h_max * Fraction(rng.randrange(1, grid), grid)
            z0 = z_rat + h * (theta - theta_mid)
            if not box_z.contains(embed(K, z0, 24)):
                continue
        x0e, y0e = K(x0), K(y0)
        gp = gprime_form(a_prime, b_prime, x0e, y0e, z0)
        if gp == 1 or not is_generator(K, gp):
            continue
        g = g_from_gprime(K, gp)
        return GeneratorWitness(
            g_prime=gp,
            x0=x0e,
            y0=y0e,
            z0=z0,
            g=g,
            minpoly_g=minimal_polynomial(K, g),
            minpoly_g_squared=minimal_polynomial(K, g * g),
        )
    raise SearchExhausted(f"no generator g' found in {budget} trials")


def rescale_trials() -> Iterator[Fraction]:
    """1, then 1 + 1/k, 1 - 1/k for k = 2, 3, ..."""
    yield Fraction(1)
    for k in itertools.count(2):
        yield 1 + Fraction(1, k)
        yield 1 - Fraction(1, k)


def ensure_square_generator(
    K: NumberField,
    family: Callable[[Fraction], FieldElement],
    g: FieldElement | None = None,
    budget: int = 1000,
    accept: Callable[[Fraction], bool] | None = None,
) -> Fraction:
    """Smallest trial r with deg minpoly(g_r^2) = [K:Q], where g_r = family(r).

    ``family(1)`` must be the unscaled generator (``g`` if given).  ``accept``
    can veto an r for reasons outside this search (e.g. inequalities).
    """
    n = K.degree
    for i, r in enumerate(rescale_trials()):
        if i >= budget:
            break
        g_r = g if (r == 1 and g is not None) else family(r)
        if minimal_polynomial(K, g_r * g_r).degree != n:
            continue
        if accept is not None and not accept(r):
            continue
        return r
    raise SearchExhausted(f"no rescaling with generating square in {budget} trials")
