"""Command line interface: ``fuchsian-forge {realize,verify,matrices,theorem23}``.

Field elements and polynomials are written in the generator symbol ``x``
with rational coefficients, e.g. ``--field "x^3 - x - 1" --a 2 --b x``.
The exit status is 0 iff every requested check passes.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
import time
from fractions import Fraction
from pathlib import Path

from .errors import ForgeError
from .exact import parse_poly
from .numberfield import make_field
from .symbols import QuaternionSymbol

log = logging.getLogger("fuchsian_forge")


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from None


def _write(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def _load_certificate(path: str):
    from .realization import RealizationCertificate

    return RealizationCertificate.loads(Path(path).read_text())


def cmd_realize(args) -> int:
    from .realization import RealizationConfig, realize, verify_certificate

    K = make_field(parse_poly(args.field), args.embedding)
    A = QuaternionSymbol(K.from_poly(parse_poly(args.a)), K.from_poly(parse_poly(args.b)))
    cfg = RealizationConfig(epsilon=args.epsilon, L=args.L, seed=args.seed)
    start = time.perf_counter()
    cert = realize(K, A, cfg)
    log.info("realized in %.2fs", time.perf_counter() - start)
    _write(args.out, cert.dumps())
    report = verify_certificate(None, cert)
    for line in report.lines():
        print(line, file=sys.stderr)
    return 0 if report.passed else 1


def cmd_verify(args) -> int:
    from .realization import verify_certificate

    try:
        cert = _load_certificate(args.cert)
    except (ValueError, KeyError, TypeError, ForgeError) as exc:
        print(f"FAIL well-formed: {type(exc).__name__}: {exc}")
        return 1
    report = verify_certificate(None, cert)
    print("\n".join(report.lines()))
    print("PASS" if report.passed else "FAIL")
    return 0 if report.passed else 1


def cmd_matrices(args) -> int:
    from .matrices import check_group_relation, emit_matrices, export, word_trace_intervals
    from .numberfield import embed
    from .tracesym import check_theorem_2_3

    cert = _load_certificate(args.cert)
    mats = emit_matrices(None, cert, args.M, args.prec_bits)
    _write(args.out, export(mats, args.format))

    K = cert.field
    ok = True
    for name, m in mats.generators().items():
        good = m.det().contains(1)
        ok &= good
        print(f"{'PASS' if good else 'FAIL'} det {name} contains 1 (width {float(m.det().width):.3e})", file=sys.stderr)
    traces = word_trace_intervals(mats)
    table = check_theorem_2_3()
    for w, f in table.as_dict().items():
        exact = f.evaluate(cert.r, cert.s, cert.t)
        good = traces[w].contains(embed(K, exact, mats.working_bits + 64))
        ok &= good
        print(f"{'PASS' if good else 'FAIL'} tr {w} encloses the symbolic value", file=sys.stderr)
    rel = check_group_relation(mats, Fraction(1, 1 << args.relation_bits))
    ok &= rel.passed
    for line in rel.lines():
        print(line, file=sys.stderr)
    return 0 if ok else 1


def cmd_theorem23(args) -> int:
    from .tracesym import check_basic_traces, check_commutator_identities, check_theorem_2_3

    start = time.perf_counter()
    for name, ok in {**check_basic_traces(), **check_commutator_identities()}.items():
        print(f"{'PASS' if ok else 'FAIL'} {name}")
    table = check_theorem_2_3()
    for w, _ in table.rows:
        print(f"PASS tr {' '.join(w)} is free of sqrt(c^2-1) and M~")
    for w in table.closed_form_words:
        print(f"PASS tr {' '.join(w)} matches its closed form")
    print(f"symbolic suite finished in {time.perf_counter() - start:.2f}s")
    if args.out:
        _write(args.out, table.dumps())
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fuchsian-forge", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("realize", help="realize (K, A) by a genus-2 surface and write a certificate")
    p.add_argument("--field", default="x", help="defining polynomial of K in x (default: x, i.e. Q)")
    p.add_argument("--embedding", type=int, default=0, help="index of the real root, ascending (default 0)")
    p.add_argument("--a", required=True, help="first slot of the symbol, a polynomial in x")
    p.add_argument("--b", required=True, help="second slot of the symbol, a polynomial in x")
    p.add_argument("--epsilon", type=_fraction, default=Fraction(1, 8))
    p.add_argument("--L", type=_fraction, default=Fraction(1024))
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True, help="certificate path ('-' for stdout)")
    p.set_defaults(func=cmd_realize)

    p = sub.add_parser("verify", help="check a certificate")
    p.add_argument("cert")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("matrices", help="emit interval matrices for a certificate")
    p.add_argument("cert")
    p.add_argument("--M", type=_fraction, default=Fraction(1))
    p.add_argument("--prec-bits", type=int, default=128)
    p.add_argument("--format", default="certificate-attachment", help="certificate-attachment or table")
    p.add_argument("--relation-bits", type=int, default=64, help="relation tolerance is 2^-n (default 64)")
    p.add_argument("--out", default=None, help="output path (default stdout)")
    p.set_defaults(func=cmd_matrices)

    p = sub.add_parser("theorem23", help="run the symbolic trace suite")
    p.add_argument("--out", default=None, help="write the trace table as JSON")
    p.set_defaults(func=cmd_theorem23)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except ForgeError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
