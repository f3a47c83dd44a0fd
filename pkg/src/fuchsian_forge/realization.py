"""Realize (K, (a, b)) as trace field and quaternion algebra of a genus-2
surface group, and verify the resulting certificate.

Pipeline: normalize the symbol into the band (1, 1 + eps), choose m1..m5 in
the box

    L < m1, m2, m4 < L + eps,  2L < m5 < 2L + eps,  0 < m3 < eps

with the generator condition routed through :func:`find_g_prime`, solve the
quadric, assemble half-traces (r, s, t, c), rescale so s^2 also generates K,
and check everything exactly.  A failed candidate is retried; after a few
failures eps is halved and L doubled.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .errors import (
    BudgetExhausted,
    ConsistencyError,
    ForgeError,
    NotRealSplit,
    SearchExhausted,
    ZeroU,
)
from .exact import RealInterval, UniPoly, frac_str, parse_frac, sign_variations, sturm_sequence
from .generators import (
    GeneratorWitness,
    ensure_square_generator,
    find_g_prime,
    g_from_gprime,
    gprime_form,
)
from .numberfield import (
    FieldElement,
    NumberField,
    certified_interval,
    certified_sign,
    element_from_json,
    embed,
    make_field,
    minimal_polynomial,
)
from .quadric import ParamPoint, QuadricSolution, scaled_solution
from .symbols import (
    EquivalenceStep,
    QuaternionSymbol,
    apply_step,
    normalize_band,
    real_split,
    replay,
    surface_symbol,
)

log = logging.getLogger(__name__)

CERT_FORMAT = "fuchsian-forge-cert/1"


@dataclass(frozen=True)
class RealizationConfig:
    epsilon: Fraction = Fraction(1, 8)
    L: Fraction = Fraction(1024)
    seed: int = 0
    generator_budget: int = 10_000
    rescale_budget: int = 200
    attempts_per_round: int = 4
    rounds: int = 6

    def __post_init__(self):
        object.__setattr__(self, "epsilon", Fraction(self.epsilon))
        object.__setattr__(self, "L", Fraction(self.L))
        if not 0 < self.epsilon < 1:
            raise ValueError("epsilon must lie in (0, 1)")
        if not self.L > 1:
            raise ValueError("L must exceed 1")


@dataclass(frozen=True)
class RealizationCertificate:
    field: NumberField
    input_symbol: QuaternionSymbol
    equivalence_chain: tuple[EquivalenceStep, ...]
    normalized_symbol: QuaternionSymbol
    solution: QuadricSolution
    witness: GeneratorWitness
    rescale_r: Fraction
    r: FieldElement
    s: FieldElement
    t: FieldElement
    c: FieldElement
    minpoly_s: UniPoly
    minpoly_s_squared: UniPoly
    inequality_certificates: tuple[tuple[str, RealInterval], ...]
    search: dict = field(default_factory=dict, compare=False)

    def to_json(self) -> dict:
        return {
            "format": CERT_FORMAT,
            "field": self.field.to_json(),
            "input_symbol": self.input_symbol.to_json(),
            "equivalence_chain": [s.to_json() for s in self.equivalence_chain],
            "normalized_symbol": self.normalized_symbol.to_json(),
            "solution": self.solution.to_json(),
            "witness": self.witness.to_json(),
            "rescale_r": frac_str(self.rescale_r),
            "r": self.r.to_json(),
            "s": self.s.to_json(),
            "t": self.t.to_json(),
            "c": self.c.to_json(),
            "minpoly_s": self.minpoly_s.to_json(),
            "minpoly_s_squared": self.minpoly_s_squared.to_json(),
            "inequality_certificates": [
                {"expression": expr, "interval": iv.to_json()} for expr, iv in self.inequality_certificates
            ],
            "search": dict(self.search),
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, sort_keys=True) + "\n"

    @classmethod
    def from_json(cls, data: dict, K: Optional[NumberField] = None) -> "RealizationCertificate":
        """Parse a certificate; elements are placed in ``K`` if given, else in
        the serialized field."""
        if data.get("format") != CERT_FORMAT:
            raise ValueError(f"unsupported certificate format {data.get('format')!r}")
        stored = NumberField.from_json(data["field"])
        K = K or stored

        def el(key):
            return element_from_json(K, data[key])

        return cls(
            field=stored,
            input_symbol=QuaternionSymbol.from_json(K, data["input_symbol"]),
            equivalence_chain=tuple(EquivalenceStep.from_json(K, s) for s in data["equivalence_chain"]),
            normalized_symbol=QuaternionSymbol.from_json(K, data["normalized_symbol"]),
            solution=QuadricSolution.from_json(K, data["solution"]),
            witness=GeneratorWitness.from_json(K, data["witness"]),
            rescale_r=parse_frac(data["rescale_r"]),
            r=el("r"),
            s=el("s"),
            t=el("t"),
            c=el("c"),
            minpoly_s=UniPoly.from_json(data["minpoly_s"]),
            minpoly_s_squared=UniPoly.from_json(data["minpoly_s_squared"]),
            inequality_certificates=tuple(
                (item["expression"], RealInterval.from_json(item["interval"]))
                for item in data["inequality_certificates"]
            ),
            search=dict(data.get("search", {})),
        )

    @classmethod
    def loads(cls, text: str, K: Optional[NumberField] = None) -> "RealizationCertificate":
        return cls.from_json(json.loads(text), K)


def half_trace_c(r, s, t):
    return 4 * r * s * t - 2 * r * r - 2 * s * s - 2 * t * t + 1


def assemble_rst(K: NumberField, sol: QuadricSolution, a: FieldElement, b: FieldElement):
    """Half-traces (r, s, t, c) from a quadric solution.

    y' = 2y/u, x' = x + y'z/2, and r, s, t = x'/2, y'/2, z/2.  c comes from
    the trace relation and is cross-checked against c' = 2 + b v^2 - a b w^2
    (c' = -2c).
    """
    if sol.u.is_zero():
        raise ZeroU("u = 0")
    y_p = 2 * sol.y / sol.u
    x_p = sol.x + y_p * sol.z / 2
    r, s, t = x_p / 2, y_p / 2, sol.z / 2
    c = half_trace_c(r, s, t)
    c_prime = 2 + b * sol.v * sol.v - a * b * sol.w * sol.w
    if not (2 * c + c_prime).is_zero():
        raise ConsistencyError("trace relation disagrees with 2 + b v^2 - a b w^2")
    return r, s, t, c


# ---------------------------------------------------------------------------
# search
# ---------------------------------------------------------------------------

def _box(eps: Fraction, L: Fraction):
    """(m2, m3) and the interior box for (x0, z0, y0) = (m1, m4, m5)/(m2 - m3)."""
    m2, m3 = L + eps / 2, eps / 2
    D = m2 - m3
    lo, hi = eps / (4 * D), 3 * eps / (4 * D)
    box_x = RealInterval(L / D + lo, L / D + hi)
    box_z = RealInterval(L / D + lo, L / D + hi)
    box_y = RealInterval(2 * L / D + lo, 2 * L / D + hi)
    return m2, m3, (box_x, box_z, box_y)


def _build(K, A, chain, normalized, wit: GeneratorWitness, m: ParamPoint, rescale: Fraction, search: dict):
    a, b = normalized.a, normalized.b
    sol = scaled_solution(a, b, m.rescaled(rescale))
    r, s, t, c = assemble_rst(K, sol, a, b)
    if rescale != 1:
        x0, y0, z0 = rescale * wit.x0, rescale * wit.y0, rescale * wit.z0
        gp = gprime_form(1 / a, b, x0, y0, z0)
        g = g_from_gprime(K, gp)
        wit = GeneratorWitness(gp, x0, y0, z0, g, minimal_polynomial(K, g), minimal_polynomial(K, g * g))
    ineq = tuple((f"{name} - 1", certified_interval(K, val - 1)) for name, val in zip("rstc", (r, s, t, c)))
    return RealizationCertificate(
        field=K,
        input_symbol=A,
        equivalence_chain=tuple(chain),
        normalized_symbol=normalized,
        solution=sol,
        witness=wit,
        rescale_r=rescale,
        r=r,
        s=s,
        t=t,
        c=c,
        minpoly_s=minimal_polynomial(K, s),
        minpoly_s_squared=minimal_polynomial(K, s * s),
        inequality_certificates=ineq,
        search=search,
    )


def realize(K: NumberField, A: QuaternionSymbol, cfg: RealizationConfig = RealizationConfig()) -> RealizationCertificate:
    if not real_split(K, A):
        raise NotRealSplit("A is not split at the chosen real embedding")
    eps, L = cfg.epsilon, cfg.L
    last_stage, last_msg = "none", ""
    for rnd in range(cfg.rounds):
        normalized, chain = normalize_band(K, A, eps)
        a, b = normalized.a, normalized.b
        m2, m3, box = _box(eps, L)
        D = m2 - m3
        for attempt in range(cfg.attempts_per_round):
            seed = cfg.seed * 1_000_003 + rnd * 1009 + attempt
            search = {"epsilon": frac_str(eps), "L": frac_str(L), "round": rnd, "attempt": attempt, "seed": cfg.seed}
            try:
                wit = find_g_prime(K, 1 / a, b, box, seed=seed, budget=cfg.generator_budget)
            except SearchExhausted as exc:
                last_stage, last_msg = "find_g_prime", str(exc)
                log.info("round %d attempt %d: %s", rnd, attempt, exc)
                continue
            m = ParamPoint(wit.x0 * D, K(m2), K(m3), wit.z0 * D, wit.y0 * D)

            def family(rs: Fraction) -> FieldElement:
                sol = scaled_solution(a, b, m.rescaled(rs))
                return sol.y / sol.u

            def accept(rs: Fraction) -> bool:
                try:
                    cert = _build(K, A, chain, normalized, wit, m, rs, search)
                except ForgeError:
                    return False
                return verify_certificate(K, cert).passed

            try:
                rescale = ensure_square_generator(K, family, wit.g, budget=cfg.rescale_budget, accept=accept)
            except (SearchExhausted, ForgeError) as exc:
                last_stage, last_msg = "ensure_square_generator", str(exc)
                log.info("round %d attempt %d: %s", rnd, attempt, exc)
                continue
            return _build(K, A, chain, normalized, wit, m, rescale, search)
        eps, L = eps / 2, L * 2
        log.info("escalating to eps=%s L=%s", eps, L)
    raise BudgetExhausted(last_stage, last_msg)


# ---------------------------------------------------------------------------
# verification
# ---------------------------------------------------------------------------

@dataclass
class Check:
    name: str
    passed: bool
    detail: str = ""


@dataclass
class VerificationReport:
    checks: list[Check] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return bool(self.checks) and all(c.passed for c in self.checks)

    def __getitem__(self, name: str) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def add(self, name: str, passed: bool, detail: str = "") -> None:
        self.checks.append(Check(name, bool(passed), detail))

    def lines(self) -> list[str]:
        return [f"{'PASS' if c.passed else 'FAIL'} {c.name}" + (f": {c.detail}" if c.detail else "") for c in self.checks]

    def to_json(self) -> dict:
        return {"passed": self.passed, "checks": [{"name": c.name, "passed": c.passed, "detail": c.detail} for c in self.checks]}


def _isolates_same_root(f: UniPoly, stored: RealInterval, K: NumberField) -> bool:
    seq = sturm_sequence(f)
    lo = stored.lo
    # roots in the closed interval: (lo - tiny, hi]
    if f(lo) == 0:
        n = 1 + sign_variations(seq, lo) - sign_variations(seq, stored.hi)
    else:
        n = sign_variations(seq, lo) - sign_variations(seq, stored.hi)
    if n != 1:
        return False
    bits = 8
    while True:
        iv = K.theta_enclosure(bits)
        if stored.contains(iv):
            return True
        if not stored.overlaps(iv):
            return False
        bits *= 2


def _encloses(K: NumberField, iv: RealInterval, e: FieldElement, max_bits: int = 4096) -> bool:
    bits = 32
    while bits <= max_bits:
        enc = embed(K, e, bits)
        if iv.contains(enc):
            return True
        if not iv.overlaps(enc):
            return False
        bits *= 2
    return False


def verify_certificate(K: Optional[NumberField], cert: RealizationCertificate) -> VerificationReport:
    """Check a certificate from its data alone.

    With ``K=None`` the field is rebuilt from the certificate's modulus and
    embedding index, so a tampered index changes the embedding used for the
    sign checks.
    """
    report = VerificationReport()
    stored = cert.field
    try:
        K = K or make_field(stored.modulus, stored.embedding_index)
        ok = K.modulus == stored.modulus and _isolates_same_root(K.modulus, stored.root_interval, K)
        report.add("field", ok, "" if ok else "root interval does not isolate the embedded root")
    except ForgeError as exc:
        report.add("field", False, str(exc))
        return report
    try:
        cert = RealizationCertificate.from_json(cert.to_json(), K)
        _verify_body(K, cert, report)
    except (ForgeError, ZeroDivisionError, ValueError, KeyError) as exc:
        report.add("well-formed", False, f"{type(exc).__name__}: {exc}")
    return report


def _verify_body(K: NumberField, cert: RealizationCertificate, report: VerificationReport) -> None:
    a, b = cert.normalized_symbol.a, cert.normalized_symbol.b
    sol = cert.solution
    r, s, t, c = cert.r, cert.s, cert.t, cert.c
    n = K.degree

    # V0: the stored solution and witness are what the parameters produce
    detail = []
    recomputed = scaled_solution(a, b, sol.params)
    if recomputed != sol:
        detail.append("solution does not match its parameters")
    else:
        try:
            if assemble_rst(K, sol, a, b) != (r, s, t, c):
                detail.append("r, s, t, c do not match the solution")
        except ForgeError as exc:
            detail.append(str(exc))
    w = cert.witness
    m = sol.params
    D = m.m2 - m.m3
    if (w.x0, w.z0, w.y0) != (m.m1 / D, m.m4 / D, m.m5 / D):
        detail.append("witness (x0, z0, y0) differs from (m1, m4, m5)/(m2 - m3)")
    if w.g_prime != gprime_form(1 / a, b, w.x0, w.y0, w.z0):
        detail.append("g' != a'x0^2 + b'y0^2 - a'b'z0^2")
    if w.g_prime == 1 or w.g != g_from_gprime(K, w.g_prime):
        detail.append("g != 1 + 2/(g' - 1)")
    if w.g != s:
        detail.append("g != s")
    report.add("V0 parameters", not detail, "; ".join(detail))

    # V1: residuals of the three defining equations in x' = 2r, y' = 2s, z = 2t, c' = -2c
    xp, yp, z, cp = 2 * r, 2 * s, 2 * t, -2 * c
    res = {
        "trace relation": xp * xp + yp * yp + z * z - xp * yp * z - (cp + 2),
        "commutator slot": cp - 2 - (b * sol.v * sol.v - a * b * sol.w * sol.w),
        "a slot": z * z - 4 - a * sol.u * sol.u,
    }
    bad = [k for k, v in res.items() if not v.is_zero()]
    report.add("V1 residuals", not bad, ", ".join(f"{k} residual nonzero" for k in bad))

    # V2: chain replay
    try:
        ok = replay(cert.input_symbol, cert.equivalence_chain) == cert.normalized_symbol
        report.add("V2 equivalence chain", ok, "" if ok else "replay does not reach the normalized symbol")
    except ForgeError as exc:
        report.add("V2 equivalence chain", False, str(exc))

    # V3: s and s^2 generate K
    ms, ms2 = cert.minpoly_s, cert.minpoly_s_squared
    detail = []
    if ms.degree != n or ms2.degree != n:
        detail.append(f"degrees {ms.degree}, {ms2.degree} != {n}")
    if ms.lc != 1 or ms2.lc != 1:
        detail.append("minimal polynomials not monic")
    if not ms(s).is_zero():
        detail.append("minpoly_s(s) != 0")
    if not ms2(s * s).is_zero():
        detail.append("minpoly_s_squared(s^2) != 0")
    report.add("V3 generators", not detail, "; ".join(detail))

    # V4: r, s, t, c > 1 at the embedding
    detail = [f"{nm} <= 1" for nm, val in zip("rstc", (r, s, t, c)) if certified_sign(K, val - 1) != 1]
    values = {f"{nm} - 1": val - 1 for nm, val in zip("rstc", (r, s, t, c))}
    stored = dict(cert.inequality_certificates)
    if set(stored) != set(values):
        detail.append("inequality certificates do not cover r, s, t, c")
    for expr, iv in stored.items():
        if iv.lo <= 0:
            detail.append(f"stored interval for {expr} is not positive")
        elif expr in values and not _encloses(K, iv, values[expr]):
            detail.append(f"stored interval for {expr} does not enclose its value at this embedding")
    report.add("V4 inequalities", not detail, "; ".join(detail))

    # V5: surface symbol = (a u^2, b v^2 - a b w^2) reached from the normalized symbol
    try:
        target = surface_symbol(K, t, c)
        reached = apply_step(
            apply_step(cert.normalized_symbol, EquivalenceStep.mix_b(sol.v, sol.w)),
            EquivalenceStep.scale_a(sol.u),
        )
        ok = reached == target
        report.add("V5 surface algebra", ok, "" if ok else "surface symbol differs from the witnessed chain")
    except ForgeError as exc:
        report.add("V5 surface algebra", False, str(exc))
