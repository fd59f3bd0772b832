"""JSON file formats (rationals as "a/b" strings) and OFF mesh export."""

from __future__ import annotations

import json
import re
from fractions import Fraction
from pathlib import Path
from typing import Any, Sequence

from .ehrhart import QuasiPolynomial, SimplexType
from .equidecomposition import CertificatePair, EquidecompCertificate, VerificationReport
from .exact import UnimodularMap
from .geometry import DegenerateInput, PolytopeV, Simplex
from .halfunimodular import Decomposition

SCHEMA_VERSION = 1

_RATIONAL = re.compile(r"-?\d+(/[1-9]\d*)?")


class MalformedInput(ValueError):
    """Input that does not follow one of the documented file formats."""


def rational_to_json(x: Fraction) -> int | str:
    x = Fraction(x)
    return x.numerator if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def rational_from_json(v: Any) -> Fraction:
    if isinstance(v, bool):
        raise MalformedInput(f"expected a rational, got {v!r}")
    if isinstance(v, int):
        return Fraction(v)
    if isinstance(v, str) and _RATIONAL.fullmatch(v.strip()):
        x = Fraction(v.strip())
        if "/" in v and f"{x.numerator}/{x.denominator}" != v.strip():
            raise MalformedInput(f"rational {v!r} is not in lowest terms")
        return x
    raise MalformedInput(f"expected an integer or an 'a/b' string, got {v!r}")


def integer_from_json(v: Any) -> int:
    if isinstance(v, bool) or not isinstance(v, int):
        raise MalformedInput(f"expected an integer, got {v!r}")
    return v


def _points_to_json(pts) -> list[list]:
    return [[rational_to_json(c) for c in v] for v in pts]


def _points_from_json(data: Any) -> tuple[tuple[Fraction, ...], ...]:
    if not isinstance(data, list) or not data:
        raise MalformedInput("vertices must be a non-empty list")
    pts = []
    for v in data:
        if not isinstance(v, list) or not v:
            raise MalformedInput(f"vertex {v!r} must be a non-empty list")
        pts.append(tuple(rational_from_json(c) for c in v))
    if len({len(v) for v in pts}) != 1:
        raise MalformedInput("vertices have different lengths")
    return tuple(pts)


def polytope_to_json(p: PolytopeV) -> dict:
    return {"dim": p.ambient_dim, "vertices": _points_to_json(p.vertices)}


def polytope_from_json(data: Any) -> PolytopeV:
    if not isinstance(data, dict) or "vertices" not in data:
        raise MalformedInput("polytope file needs a 'vertices' field")
    pts = _points_from_json(data["vertices"])
    if "dim" in data and integer_from_json(data["dim"]) != len(pts[0]):
        raise MalformedInput("'dim' does not match the vertex length")
    return PolytopeV(pts)


def simplex_from_json(data: Any) -> Simplex:
    if not isinstance(data, dict) or "vertices" not in data:
        raise MalformedInput("simplex file needs a 'vertices' field")
    try:
        return Simplex(_points_from_json(data["vertices"]))
    except DegenerateInput as exc:
        raise MalformedInput(str(exc)) from exc


def map_to_json(m: UnimodularMap) -> dict:
    return {
        "matrix": [[rational_to_json(x) for x in row] for row in m.linear],
        "translation": [rational_to_json(x) for x in m.translation],
    }


def map_from_json(data: Any) -> UnimodularMap:
    # entries are parsed as rationals so that a bad certificate reaches the verifier
    if not isinstance(data, dict) or "matrix" not in data or "translation" not in data:
        raise MalformedInput("map needs 'matrix' and 'translation'")
    rows, t = data["matrix"], data["translation"]
    if not isinstance(rows, list) or not isinstance(t, list):
        raise MalformedInput("matrix and translation must be lists")
    n = len(t)
    if len(rows) != n or any(not isinstance(r, list) or len(r) != n for r in rows):
        raise MalformedInput("matrix must be square and match the translation length")
    return UnimodularMap(tuple(tuple(rational_from_json(x) for x in r) for r in rows),
                         tuple(rational_from_json(x) for x in t))


def _type_from_json(label: Any) -> SimplexType:
    try:
        return SimplexType.from_label(label)
    except ValueError as exc:
        raise MalformedInput(f"unknown simplex type {label!r}") from exc


def type_vector_to_json(tv: dict) -> dict[str, int]:
    return {(t.value if isinstance(t, SimplexType) else t): n for t, n in tv.items()}


def certificate_to_json(cert: EquidecompCertificate) -> dict:
    return {
        "schema": SCHEMA_VERSION,
        "type_vector": type_vector_to_json(cert.type_vector),
        "pairs": [
            {
                "piece": _points_to_json(pr.piece.vertices),
                "image": _points_to_json(pr.image.vertices),
                "type": pr.type.value,
                **map_to_json(pr.map),
            }
            for pr in cert.pairs
        ],
    }


def certificate_from_json(data: Any) -> EquidecompCertificate:
    if not isinstance(data, dict) or data.get("schema") != SCHEMA_VERSION:
        raise MalformedInput(f"certificate must declare schema {SCHEMA_VERSION}")
    if not isinstance(data.get("pairs"), list):
        raise MalformedInput("certificate needs a 'pairs' list")
    pairs = []
    for entry in data["pairs"]:
        if not isinstance(entry, dict):
            raise MalformedInput("each pair must be an object")
        try:
            piece = Simplex(_points_from_json(entry.get("piece")))
            image = Simplex(_points_from_json(entry.get("image")))
        except DegenerateInput as exc:
            raise MalformedInput(str(exc)) from exc
        pairs.append(CertificatePair(piece, map_from_json(entry), image,
                                     _type_from_json(entry.get("type"))))
    tv = data.get("type_vector", {})
    if not isinstance(tv, dict):
        raise MalformedInput("type_vector must be an object")
    tv = {_type_from_json(k).value: integer_from_json(v) for k, v in tv.items()}
    return EquidecompCertificate(tuple(pairs), tv)


def quasipolynomial_to_json(qp: QuasiPolynomial) -> dict:
    return qp.to_json()


def quasipolynomial_from_json(data: Any) -> QuasiPolynomial:
    try:
        rows = data["coefficients"]
        return QuasiPolynomial.make([[rational_from_json(c) for c in row] for row in rows])
    except (KeyError, TypeError) as exc:
        raise MalformedInput("quasipolynomial needs a 'coefficients' list of rows") from exc


def decomposition_to_json(d: Decomposition) -> dict:
    return {
        "source": polytope_to_json(d.source),
        "type_vector": type_vector_to_json(d.type_vector()),
        "pieces": [
            {"vertices": _points_to_json(pc.simplex.vertices), "type": pc.type.value,
             "to_canonical": map_to_json(pc.to_canonical)}
            for pc in d.pieces
        ],
    }


def report_to_json(r: VerificationReport) -> dict:
    return r.to_json()


def load_json(path: str | Path) -> Any:
    try:
        with open(path) as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise MalformedInput(f"{path}: invalid JSON ({exc})") from exc


def dump_json(data: Any, path: str | Path | None = None) -> str:
    text = json.dumps(data, indent=2)
    if path is not None:
        Path(path).write_text(text + "\n")
    return text


def off_text(s: Simplex) -> str:
    """OFF mesh of a tetrahedron; coordinates written as decimals."""
    if s.dim != 3:
        raise ValueError("OFF export is for 3-dimensional pieces")
    lines = ["OFF", "4 4 0"]
    lines += [" ".join(repr(float(c)) for c in v) for v in s.vertices]
    lines += ["3 0 2 1", "3 0 1 3", "3 0 3 2", "3 1 2 3"]
    return "\n".join(lines) + "\n"


def write_off_dir(pieces: Sequence[Simplex], directory: str | Path) -> list[Path]:
    out = Path(directory)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    for i, s in enumerate(p for p in pieces if p.dim == 3):
        path = out / f"piece_{i:05d}.off"
        path.write_text(off_text(s))
        written.append(path)
    return written
