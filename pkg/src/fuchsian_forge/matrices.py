"""Interval matrices for rho, sigma, rho', sigma' at a realized (r, s, t).

With C = sqrt(c^2 - 1), P = 2rs - t + ct, D = c - 1 + 2s^2 and

    M~ = M (s C + (c - 1) sqrt(s^2 - 1)) / (c - 1),

the generators are q0 1 + q1 I + q2 (J + K) + q3 (J - K) with

    rho:   r,  r(c+1)/C,  -M~(P + tC)/(2D),  (P - tC)/(2 M~ (c-1))
    sigma: s, -s(c+1)/C,   M~/2,             -D/(2 M~ (c-1))

and rho', sigma' obtained by negating the J and K parts.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Optional

from .errors import InvalidCertificate, NonpositiveM, UnknownFormat
from .exact import RealInterval, frac_str, parse_frac
from .numberfield import NumberField, embed
from .tracesym import THEOREM_WORDS, parse_word, word_name

MATRIX_FORMAT = "fuchsian-forge-matrices/1"
FORMATS = ("certificate-attachment", "table")
GENERATOR_KEYS = ("rho", "sigma", "rho'", "sigma'")


@dataclass(frozen=True)
class IntervalMatrix:
    a: RealInterval
    b: RealInterval
    c: RealInterval
    d: RealInterval

    @property
    def entries(self) -> tuple[RealInterval, ...]:
        return (self.a, self.b, self.c, self.d)

    @classmethod
    def identity(cls) -> "IntervalMatrix":
        one, zero = RealInterval(1), RealInterval(0)
        return cls(one, zero, zero, one)

    def __mul__(self, other: "IntervalMatrix") -> "IntervalMatrix":
        return IntervalMatrix(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def round_out(self, bits: int) -> "IntervalMatrix":
        return IntervalMatrix(*(e.round_out(bits) for e in self.entries))

    def adjugate(self) -> "IntervalMatrix":
        """Encloses the inverse of any unimodular matrix inside self."""
        return IntervalMatrix(self.d, -self.b, -self.c, self.a)

    def trace(self) -> RealInterval:
        return self.a + self.d

    def det(self) -> RealInterval:
        return self.a * self.d - self.b * self.c

    def max_width(self) -> Fraction:
        return max(e.width for e in self.entries)

    def distance_to_scalar(self, lam: int) -> Fraction:
        """Largest |entry - (lam I)| over all entries and endpoints."""
        targets = (lam, 0, 0, lam)
        return max(max(abs(e.lo - x), abs(e.hi - x)) for e, x in zip(self.entries, targets))

    def to_json(self) -> dict:
        return {
            "entries": [[self.a.to_json(), self.b.to_json()], [self.c.to_json(), self.d.to_json()]],
            "widths": [[frac_str(self.a.width), frac_str(self.b.width)], [frac_str(self.c.width), frac_str(self.d.width)]],
        }

    @classmethod
    def from_json(cls, data: dict) -> "IntervalMatrix":
        (a, b), (c, d) = data["entries"]
        return cls(*(RealInterval.from_json(x) for x in (a, b, c, d)))


@dataclass(frozen=True)
class MatrixSet:
    rho: IntervalMatrix
    sigma: IntervalMatrix
    rho_p: IntervalMatrix
    sigma_p: IntervalMatrix
    M: Fraction
    M_tilde: RealInterval
    precision_bits: int
    working_bits: int

    def generators(self) -> dict[str, IntervalMatrix]:
        return dict(zip(GENERATOR_KEYS, (self.rho, self.sigma, self.rho_p, self.sigma_p)))

    def __iter__(self):
        return iter((self.rho, self.sigma, self.rho_p, self.sigma_p))

    def word(self, word) -> IntervalMatrix:
        gens = self.generators()
        w = parse_word(word)
        out = gens[w[0]]
        for g in w[1:]:
            out = (out * gens[g]).round_out(self.working_bits)
        return out

    def max_width(self) -> Fraction:
        return max(m.max_width() for m in self)


def _generator_matrices(r, s, t, c, M: Fraction, bits: int):
    """(rho, sigma, M~) from interval half-traces at working precision ``bits``."""

    def ro(x: RealInterval) -> RealInterval:
        return x.round_out(bits)

    C = ro((c * c - 1).sqrt(bits))
    sq = ro((s * s - 1).sqrt(bits))
    cm1 = c - 1
    Mt = ro(M * (s * C + cm1 * sq) / cm1)
    P = ro(2 * r * s - t + c * t)
    D = ro(cm1 + 2 * s * s)

    def mat(q0, q1, q2, q3):
        return IntervalMatrix(ro(q0 + q1), ro(2 * q2), ro(2 * q3), ro(q0 - q1))

    rho = mat(r, r * (c + 1) / C, -Mt * (P + t * C) / (2 * D), (P - t * C) / (2 * Mt * cm1))
    sigma = mat(s, -s * (c + 1) / C, Mt / 2, -D / (2 * Mt * cm1))
    return rho, sigma, Mt


def _reflect(m: IntervalMatrix) -> IntervalMatrix:
    # negating the J and K parts flips the off-diagonal entries
    return IntervalMatrix(m.a, -m.b, -m.c, m.d)


def emit_from_enclosures(
    enclose: Callable[[int], tuple[RealInterval, RealInterval, RealInterval, RealInterval]],
    M,
    precision_bits: int,
) -> MatrixSet:
    """Raise the working precision until every entry has width <= 2^-precision_bits.

    ``enclose(bits)`` returns intervals for (r, s, t, c) of width about 2^-bits.
    """
    M = Fraction(M)
    if M <= 0:
        raise NonpositiveM("M must be positive")
    target = Fraction(1, 1 << precision_bits)
    bits = precision_bits + 32
    while True:
        r, s, t, c = enclose(bits)
        try:
            rho, sigma, Mt = _generator_matrices(r, s, t, c, M, bits)
        except (ValueError, ZeroDivisionError):
            rho = None
        if rho is not None:
            ms = MatrixSet(rho, sigma, _reflect(rho), _reflect(sigma), M, Mt, precision_bits, bits)
            if ms.max_width() <= target:
                return ms
        bits *= 2


def emit_rational(r, s, t, M=1, precision_bits: int = 128) -> MatrixSet:
    """Matrices for rational half-traces (c derived); requires r, s, t, c > 1."""
    r, s, t = (Fraction(x) for x in (r, s, t))
    c = 4 * r * s * t - 2 * r * r - 2 * s * s - 2 * t * t + 1
    if min(r, s, t, c) <= 1:
        raise ValueError("need r, s, t, c > 1")
    ivs = tuple(RealInterval(x) for x in (r, s, t, c))
    return emit_from_enclosures(lambda bits: ivs, M, precision_bits)


def emit_matrices(K: Optional[NumberField], cert, M=1, precision_bits: int = 128) -> MatrixSet:
    from .realization import verify_certificate

    if Fraction(M) <= 0:
        raise NonpositiveM("M must be positive")
    report = verify_certificate(K, cert)
    if not report.passed:
        failed = [c.name for c in report.checks if not c.passed]
        raise InvalidCertificate("certificate fails: " + ", ".join(failed))
    K = K or cert.field
    vals = (cert.r, cert.s, cert.t, cert.c)
    return emit_from_enclosures(lambda bits: tuple(embed(K, v, bits) for v in vals), M, precision_bits)


def word_trace_intervals(mats: MatrixSet, words: Iterable = THEOREM_WORDS) -> dict[str, RealInterval]:
    return {word_name(parse_word(w)): mats.word(w).trace() for w in words}


def commutator(A: IntervalMatrix, B: IntervalMatrix, bits: int) -> IntervalMatrix:
    out = A
    for m in (B, A.adjugate(), B.adjugate()):
        out = (out * m).round_out(bits)
    return out


@dataclass(frozen=True)
class RelationReport:
    residuals: dict  # candidate name -> (sign, residual)
    selected: str
    sign: int
    residual: Fraction
    trace: RealInterval
    tol: Fraction

    @property
    def passed(self) -> bool:
        return self.residual <= self.tol

    def lines(self) -> list[str]:
        out = [f"{name}: closest to {'+' if sg > 0 else '-'}I, residual {float(res):.3e}" for name, (sg, res) in self.residuals.items()]
        out.append(
            f"{'PASS' if self.passed else 'FAIL'} relation {self.selected} = {'+' if self.sign > 0 else '-'}I "
            f"(residual {float(self.residual):.3e}, tol {float(self.tol):.3e})"
        )
        return out

    def to_json(self) -> dict:
        return {
            "candidates": {k: {"sign": sg, "residual": frac_str(res)} for k, (sg, res) in self.residuals.items()},
            "selected": self.selected,
            "sign": self.sign,
            "residual": frac_str(self.residual),
            "trace": self.trace.to_json(),
            "tol": frac_str(self.tol),
            "passed": self.passed,
        }


def check_group_relation(mats: MatrixSet, tol=Fraction(1, 1 << 64)) -> RelationReport:
    """Compare W+ = [rho, sigma][rho', sigma'] and W- = [rho, sigma][rho', sigma']^-1
    with +-I and report the closest candidate."""
    bits = mats.working_bits
    k1 = commutator(mats.rho, mats.sigma, bits)
    k2 = commutator(mats.rho_p, mats.sigma_p, bits)
    cands = {
        "[rho,sigma][rho',sigma']": (k1 * k2).round_out(bits),
        "[rho,sigma][rho',sigma']^-1": (k1 * k2.adjugate()).round_out(bits),
    }
    residuals = {}
    best = None
    for name, W in cands.items():
        sg, res = min(((lam, W.distance_to_scalar(lam)) for lam in (1, -1)), key=lambda p: p[1])
        residuals[name] = (sg, res)
        if best is None or res < best[2]:
            best = (name, sg, res, W.trace())
    name, sg, res, tr = best
    return RelationReport(residuals, name, sg, res, tr, Fraction(tol))


# ---------------------------------------------------------------------------
# export
# ---------------------------------------------------------------------------

def export(mats: MatrixSet, format: str = "certificate-attachment") -> str:
    if format == "certificate-attachment":
        doc = {
            "format": MATRIX_FORMAT,
            "M": frac_str(mats.M),
            "M_tilde": mats.M_tilde.to_json(),
            "precision_bits": mats.precision_bits,
            "working_bits": mats.working_bits,
            "matrices": {k: m.to_json() for k, m in mats.generators().items()},
        }
        return json.dumps(doc, indent=2, sort_keys=True) + "\n"
    if format == "table":
        lines = [
            f"# M {frac_str(mats.M)}",
            f"# M_tilde {frac_str(mats.M_tilde.lo)} {frac_str(mats.M_tilde.hi)}",
            f"# precision_bits {mats.precision_bits}",
            f"# working_bits {mats.working_bits}",
            "matrix\trow\tcol\tlo\thi\twidth",
        ]
        for key, m in mats.generators().items():
            for idx, e in enumerate(m.entries):
                lines.append(f"{key}\t{idx // 2}\t{idx % 2}\t{frac_str(e.lo)}\t{frac_str(e.hi)}\t{frac_str(e.width)}")
        return "\n".join(lines) + "\n"
    raise UnknownFormat(f"unknown matrix format {format!r}; expected one of {', '.join(FORMATS)}")


def parse_export(text: str, format: str = "certificate-attachment") -> MatrixSet:
    if format == "certificate-attachment":
        doc = json.loads(text)
        if doc.get("format") != MATRIX_FORMAT:
            raise ValueError(f"unsupported matrix document {doc.get('format')!r}")
        mats = [IntervalMatrix.from_json(doc["matrices"][k]) for k in GENERATOR_KEYS]
        return MatrixSet(
            *mats,
            M=parse_frac(doc["M"]),
            M_tilde=RealInterval.from_json(doc["M_tilde"]),
            precision_bits=int(doc["precision_bits"]),
            working_bits=int(doc["working_bits"]),
        )
    if format == "table":
        meta: dict[str, list[str]] = {}
        cells: dict[str, list[Optional[RealInterval]]] = {k: [None] * 4 for k in GENERATOR_KEYS}
        for line in text.splitlines():
            if line.startswith("# "):
                key, *vals = line[2:].split()
                meta[key] = vals
            elif line and not line.startswith("matrix\t"):
                key, row, col, lo, hi, _ = line.split("\t")
                cells[key][2 * int(row) + int(col)] = RealInterval(parse_frac(lo), parse_frac(hi))
        if any(e is None for v in cells.values() for e in v):
            raise ValueError("table is missing matrix entries")
        return MatrixSet(
            *(IntervalMatrix(*cells[k]) for k in GENERATOR_KEYS),
            M=parse_frac(meta["M"][0]),
            M_tilde=RealInterval(parse_frac(meta["M_tilde"][0]), parse_frac(meta["M_tilde"][1])),
            precision_bits=int(meta["precision_bits"][0]),
            working_bits=int(meta["working_bits"][0]),
        )
    raise UnknownFormat(f"unknown matrix format {format!r}; expected one of {', '.join(FORMATS)}")
