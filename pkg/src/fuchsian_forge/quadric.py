"""Solutions of the quadric

    x^2 - a y^2 + a u^2 - b v^2 + a b w^2 = 0

obtained by intersecting it with the line through the base point
(x, y, u, v, w) = (0, 1, 1, 0, 0) in direction (m1, ..., m5), then scaling the
whole solution by d so that z^2 - 4 = a u^2 also holds.

The line parameter is called ``tau`` here; ``t`` is reserved for the
half-trace of rho*sigma.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import SingularDirection, UnitA, ZeroU
from .numberfield import FieldElement, NumberField, element_from_json


@dataclass(frozen=True)
class ParamPoint:
    m1: FieldElement
    m2: FieldElement
    m3: FieldElement
    m4: FieldElement
    m5: FieldElement

    def as_tuple(self) -> tuple[FieldElement, ...]:
        return (self.m1, self.m2, self.m3, self.m4, self.m5)

    def rescaled(self, r) -> "ParamPoint":
        """Scale m1, m4, m5 by r and keep m2, m3; this multiplies the
        generator target g' by r^2."""
        return ParamPoint(r * self.m1, self.m2, self.m3, r * self.m4, r * self.m5)

    def to_json(self) -> dict:
        return {f"m{i}": m.to_json() for i, m in enumerate(self.as_tuple(), start=1)}

    @classmethod
    def from_json(cls, K: NumberField, data: dict) -> "ParamPoint":
        return cls(*(element_from_json(K, data[f"m{i}"]) for i in range(1, 6)))


@dataclass(frozen=True)
class QuadricSolution:
    x: FieldElement
    y: FieldElement
    z: FieldElement
    u: FieldElement
    v: FieldElement
    w: FieldElement
    d: FieldElement
    tau: FieldElement
    params: ParamPoint

    _FIELDS = ("x", "y", "z", "u", "v", "w", "d", "tau")

    def to_json(self) -> dict:
        out = {name: getattr(self, name).to_json() for name in self._FIELDS}
        out["params"] = self.params.to_json()
        return out

    @classmethod
    def from_json(cls, K: NumberField, data: dict) -> "QuadricSolution":
        vals = {name: element_from_json(K, data[name]) for name in cls._FIELDS}
        return cls(params=ParamPoint.from_json(K, data["params"]), **vals)


def quadric_residual(a, b, x, y, u, v, w) -> FieldElement:
    return x * x - a * y * y + a * u * u - b * v * v + a * b * w * w


def quadric_denominator(a, b, m: ParamPoint) -> FieldElement:
    return m.m1 * m.m1 - a * m.m2 * m.m2 + a * m.m3 * m.m3 - b * m.m4 * m.m4 + a * b * m.m5 * m.m5


def param_tau(a: FieldElement, b: FieldElement, m: ParamPoint) -> FieldElement:
    """Second intersection of the line with the quadric."""
    den = quadric_denominator(a, b, m)
    if den.is_zero():
        raise SingularDirection("direction lies on the asymptotic cone of the quadric")
    return 2 * a * (m.m2 - m.m3) / den


def base_solution(a: FieldElement, b: FieldElement, m: ParamPoint):
    """(x, y, u, v, w) on the quadric, before scaling."""
    tau = param_tau(a, b, m)
    return (m.m1 * tau, m.m2 * tau + 1, m.m3 * tau + 1, m.m4 * tau, m.m5 * tau)


def choose_d(a: FieldElement, m3: FieldElement, tau: FieldElement) -> FieldElement:
    # z - 2 = (m3 tau + 1) d and z + 2 = a (m3 tau + 1) d
    if a == 1:
        raise UnitA("a = 1; renormalize the symbol first")
    u0 = m3 * tau + 1
    if u0.is_zero():
        raise ZeroU("m3 * tau + 1 = 0")
    return 4 / (u0 * (a - 1))


def scaled_solution(a: FieldElement, b: FieldElement, m: ParamPoint) -> QuadricSolution:
    tau = param_tau(a, b, m)
    d = choose_d(a, m.m3, tau)
    x, y, u, v, w = (c * d for c in (m.m1 * tau, m.m2 * tau + 1, m.m3 * tau + 1, m.m4 * tau, m.m5 * tau))
    z = (a + 1) * u / 2
    return QuadricSolution(x=x, y=y, z=z, u=u, v=v, w=w, d=d, tau=tau, params=m)
