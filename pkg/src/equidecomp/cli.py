"""Command-line interface: ``equidecomp <subcommand> ...``.

Exit status is 0 on success, 1 on domain errors and 2 on malformed input.
Errors go to stderr as one JSON object with a machine-readable ``code``.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence

from .acceptance import CRITERIA
from .ehrhart import FitMismatch, count, fit_quasipolynomial
from .equidecomposition import NotEhrhartEquivalent, equidecompose, verify_certificate
from .exact import NotCoprime, NotSaturated
from .geometry import CLOSED, RELINT, DegenerateInput
from .halfunimodular import NoMapFound, NotHalfUnimodular, classify, decompose_polytope
from .serialization import (
    MalformedInput,
    certificate_from_json,
    certificate_to_json,
    decomposition_to_json,
    dump_json,
    load_json,
    map_to_json,
    polytope_from_json,
    quasipolynomial_to_json,
    simplex_from_json,
    write_off_dir,
)
from .triangulation import NotEmpty, NotLatticePolytope
from .white import NoWidthOne, white_normal_form

EXIT_OK, EXIT_DOMAIN, EXIT_MALFORMED = 0, 1, 2

DOMAIN_ERRORS = {
    NotEhrhartEquivalent: "NOT_EHRHART_EQUIVALENT",
    NotLatticePolytope: "NOT_LATTICE_POLYTOPE",
    NotHalfUnimodular: "NOT_HALF_UNIMODULAR",
    NotEmpty: "NOT_EMPTY",
    NoWidthOne: "NO_WIDTH_ONE",
    NoMapFound: "NO_MAP_FOUND",
    NotSaturated: "NOT_SATURATED",
    NotCoprime: "NOT_COPRIME",
    FitMismatch: "FIT_MISMATCH",
}


class CommandFailed(Exception):
    def __init__(self, code: str, message: str, status: int = EXIT_DOMAIN):
        super().__init__(message)
        self.code = code
        self.status = status


def _emit(data) -> None:
    print(dump_json(data))


def cmd_ehrhart(args) -> int:
    body = polytope_from_json(load_json(args.polytope))
    mode = RELINT if args.relint else CLOSED
    qp = fit_quasipolynomial(body, mode)
    _emit({
        "mode": mode,
        "quasipolynomial": quasipolynomial_to_json(qp),
        "text": str(qp),
        "counts": {str(k): count(body, k, mode) for k in range(1, args.kmax + 1)},
    })
    return EXIT_OK


def cmd_decompose(args) -> int:
    d = decompose_polytope(polytope_from_json(load_json(args.polytope)))
    data = decomposition_to_json(d)
    if args.out:
        dump_json(data, args.out)
    if args.off:
        write_off_dir([pc.simplex for pc in d.pieces], args.off)
    _emit({"pieces": len(d.pieces), "type_vector": data["type_vector"],
           "ehrhart": str(d.ehrhart())})
    return EXIT_OK


def cmd_classify(args) -> int:
    s = simplex_from_json(load_json(args.simplex))
    _emit({"type": classify(s).value})
    return EXIT_OK


def cmd_white(args) -> int:
    s = simplex_from_json(load_json(args.tetrahedron))
    wf = white_normal_form(s)
    _emit({"p": wf.p, "q": wf.q, "p_canonical": wf.p_canonical, "map": map_to_json(wf.map)})
    return EXIT_OK


def cmd_equidecompose(args) -> int:
    p = polytope_from_json(load_json(args.first))
    q = polytope_from_json(load_json(args.second))
    cert = equidecompose(p, q)
    data = certificate_to_json(cert)
    if args.out:
        dump_json(data, args.out)
        _emit({"pairs": len(cert.pairs), "type_vector": data["type_vector"], "out": args.out})
    else:
        _emit(data)
    return EXIT_OK


def cmd_verify(args) -> int:
    p = polytope_from_json(load_json(args.first))
    q = polytope_from_json(load_json(args.second))
    cert = certificate_from_json(load_json(args.certificate))
    scales = tuple(2**i for i in range(args.grid_depth + 1))
    report = verify_certificate(p, q, cert, scales)
    _emit(report.to_json())
    if not report.passed:
        failed = ", ".join(name for name, ok in report.checks.items() if not ok)
        raise CommandFailed("CERTIFICATE_REJECTED", f"failed checks: {failed}")
    return EXIT_OK


def cmd_selftest(args) -> int:
    wanted = args.only or sorted(CRITERIA)
    results = [CRITERIA[n]() for n in wanted]
    width = max(len(r.title) for r in results)
    for r in results:
        print(f"{r.number:>2}  {'PASS' if r.passed else 'FAIL'}  {r.title:<{width}}  {r.detail}")
    if not all(r.passed for r in results):
        raise CommandFailed("SELFTEST_FAILED", "some acceptance criteria failed")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="equidecomp",
        description="Ehrhart quasipolynomials and unimodular equidecompositions of lattice 3-polytopes.")
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("ehrhart", help="fit the Ehrhart quasipolynomial of a polytope")
    sp.add_argument("polytope")
    sp.add_argument("--relint", action="store_true", help="count relative interior points")
    sp.add_argument("--kmax", type=int, default=10, help="also print raw counts for k = 1..KMAX")
    sp.set_defaults(func=cmd_ehrhart)

    sp = sub.add_parser("decompose", help="decompose a lattice polytope into half-unimodular pieces")
    sp.add_argument("polytope")
    sp.add_argument("--out", help="write the pieces as JSON")
    sp.add_argument("--off", help="directory receiving one OFF mesh per 3-dimensional piece")
    sp.set_defaults(func=cmd_decompose)

    sp = sub.add_parser("classify", help="type label of a half-unimodular simplex")
    sp.add_argument("simplex")
    sp.set_defaults(func=cmd_classify)

    sp = sub.add_parser("white", help="White normal form T(p,q) of an empty lattice tetrahedron")
    sp.add_argument("tetrahedron")
    sp.set_defaults(func=cmd_white)

    sp = sub.add_parser("equidecompose", help="certificate of equidecomposability")
    sp.add_argument("first")
    sp.add_argument("second")
    sp.add_argument("--out", help="write the certificate here instead of stdout")
    sp.set_defaults(func=cmd_equidecompose)

    sp = sub.add_parser("verify", help="check a certificate independently")
    sp.add_argument("first")
    sp.add_argument("second")
    sp.add_argument("certificate")
    sp.add_argument("--grid-depth", type=int, default=2,
                    help="audit (1/s)Z^3 for s = 1, 2, ..., 2^DEPTH (default 2)")
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("selftest", help="run the acceptance fixture suite")
    sp.add_argument("--only", type=int, action="append", choices=sorted(CRITERIA),
                    help="run just this criterion (repeatable)")
    sp.set_defaults(func=cmd_selftest)
    return parser


def _fail(code: str, message: str, status: int) -> int:
    print(json.dumps({"error": code, "message": message}), file=sys.stderr)
    return status


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_MALFORMED if exc.code else EXIT_OK
    if getattr(args, "grid_depth", 0) < 0 or getattr(args, "kmax", 1) < 1:
        return _fail("BAD_ARGUMENT", "numeric option out of range", EXIT_MALFORMED)
    try:
        return args.func(args)
    except CommandFailed as exc:
        return _fail(exc.code, str(exc), exc.status)
    except tuple(DOMAIN_ERRORS) as exc:
        code = next(c for cls, c in DOMAIN_ERRORS.items() if isinstance(exc, cls))
        return _fail(code, str(exc), EXIT_DOMAIN)
    except (MalformedInput, DegenerateInput, ValueError) as exc:
        return _fail("MALFORMED_INPUT", str(exc), EXIT_MALFORMED)
    except OSError as exc:
        return _fail("IO_ERROR", str(exc), EXIT_MALFORMED)


if __name__ == "__main__":
    sys.exit(main())
