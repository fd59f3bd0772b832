import copy
import json
from fractions import Fraction as F
from pathlib import Path

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from equidecomp.cli import EXIT_DOMAIN, EXIT_MALFORMED, EXIT_OK, main
from equidecomp.ehrhart import QuasiPolynomial
from equidecomp.equidecomposition import equidecompose, verify_certificate
from equidecomp.geometry import PolytopeV
from equidecomp.serialization import (
    MalformedInput,
    certificate_from_json,
    certificate_to_json,
    polytope_from_json,
    polytope_to_json,
    quasipolynomial_from_json,
    quasipolynomial_to_json,
    rational_from_json,
    rational_to_json,
)

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"
SMALL = PolytopeV([(0, 0, 0), (2, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, 1)])
SMALL_IMAGE = PolytopeV([(0, 0, 0), (2, 0, 0), (1, 1, 0), (0, 0, 1), (2, 1, 1)])


@pytest.fixture(scope="module")
def small_cert():
    return equidecompose(SMALL, SMALL_IMAGE)


def test_rational_strings():
    assert rational_to_json(F(3, 4)) == "3/4"
    assert rational_to_json(F(-2)) == -2
    assert rational_from_json("-3/4") == F(-3, 4)
    assert rational_from_json(5) == 5
    for bad in ("2/4", "1.5", True, None, "1/0", [1]):
        with pytest.raises(MalformedInput):
            rational_from_json(bad)


rationals = st.fractions(min_value=-50, max_value=50, max_denominator=12)


@settings(max_examples=50, deadline=None)
@given(st.lists(st.tuples(rationals, rationals), min_size=1, max_size=6))
def test_polytope_round_trip(pts):
    p = PolytopeV(pts)
    assert polytope_from_json(json.loads(json.dumps(polytope_to_json(p)))) == p


@given(st.lists(st.lists(rationals, min_size=1, max_size=4), min_size=1, max_size=5))
def test_quasipolynomial_round_trip(rows):
    qp = QuasiPolynomial.make(rows)
    assert quasipolynomial_from_json(json.loads(json.dumps(quasipolynomial_to_json(qp)))) == qp


def test_certificate_round_trip(small_cert):
    data = json.loads(json.dumps(certificate_to_json(small_cert)))
    back = certificate_from_json(data)
    assert back == small_cert
    assert verify_certificate(SMALL, SMALL_IMAGE, back).passed


def _mutations(data):
    """Single-field mutations of a certificate JSON document."""
    pairs = data["pairs"]
    i = next(i for i, pr in enumerate(pairs) if len(pr["piece"]) == 4)
    j = next(j for j, pr in enumerate(pairs) if len(pr["piece"]) == 4 and pr["image"] != pairs[i]["image"])

    def edit(fn):
        d = copy.deepcopy(data)
        fn(d["pairs"])
        return d

    yield "drop pair", edit(lambda ps: ps.pop(i))
    yield "translation", edit(lambda ps: ps[i]["translation"].__setitem__(0, "1/2"))
    yield "translation shift", edit(lambda ps: ps[i]["translation"].__setitem__(1, ps[i]["translation"][1] + 1))
    yield "matrix entry", edit(lambda ps: ps[i]["matrix"][0].__setitem__(0, ps[i]["matrix"][0][0] + 2))
    yield "image", edit(lambda ps: ps[i].__setitem__("image", ps[j]["image"]))
    yield "piece", edit(lambda ps: ps[i].__setitem__("piece", ps[j]["piece"]))
    yield "type label", edit(lambda ps: ps[i].__setitem__(
        "type", "Delta_2^1" if ps[i]["type"] != "Delta_2^1" else "Delta_3^1"))
    yield "duplicate pair", edit(lambda ps: ps.append(copy.deepcopy(ps[i])))


def test_every_single_field_mutation_is_rejected(small_cert):
    data = certificate_to_json(small_cert)
    names = []
    for name, mutated in _mutations(data):
        report = verify_certificate(SMALL, SMALL_IMAGE, certificate_from_json(mutated))
        assert not report.passed, name
        names.append(name)
    assert len(names) == 8


@settings(max_examples=12, deadline=None)
@given(st.data())
def test_random_coordinate_mutations_are_rejected(small_cert, data):
    doc = certificate_to_json(small_cert)
    i = data.draw(st.integers(0, len(doc["pairs"]) - 1))
    field = data.draw(st.sampled_from(["piece", "image"]))
    v = data.draw(st.integers(0, len(doc["pairs"][i][field]) - 1))
    c = data.draw(st.integers(0, 2))
    delta = data.draw(st.sampled_from([F(1, 2), F(-1, 2), F(1), F(1, 4)]))
    mutated = copy.deepcopy(doc)
    old = rational_from_json(mutated["pairs"][i][field][v][c])
    mutated["pairs"][i][field][v][c] = rational_to_json(old + delta)
    try:
        cert = certificate_from_json(mutated)
    except MalformedInput:
        return  # a degenerate simplex is rejected at parse time
    assert not verify_certificate(SMALL, SMALL_IMAGE, cert).passed


def test_malformed_certificates():
    with pytest.raises(MalformedInput):
        certificate_from_json({"schema": 99, "pairs": []})
    with pytest.raises(MalformedInput):
        certificate_from_json({"schema": 1, "pairs": [{"piece": [[0, 0, 0]]}]})
    with pytest.raises(MalformedInput):
        polytope_from_json({"dim": 2, "vertices": [[0, 0, 0]]})


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def test_cli_ehrhart_interval(capsys):
    code, out, _ = run(capsys, "ehrhart", FIXTURES / "interval_0_1.json", "--kmax", 3)
    data = json.loads(out)
    assert code == EXIT_OK
    assert data["text"] == "k + 1" and data["quasipolynomial"]["period"] == 1
    assert data["counts"] == {"1": 2, "2": 3, "3": 4}


def test_cli_ehrhart_relint(capsys):
    code, out, _ = run(capsys, "ehrhart", FIXTURES / "interval_1_5.json", "--relint")
    assert code == EXIT_OK and json.loads(out)["quasipolynomial"]["period"] == 5


def test_cli_classify_and_white(capsys):
    code, out, _ = run(capsys, "classify", FIXTURES / "delta3_prime.json")
    assert code == EXIT_OK and json.loads(out)["type"] == "Delta'_3"
    code, out, _ = run(capsys, "white", FIXTURES / "white_7_12.json")
    data = json.loads(out)
    assert (data["p"], data["q"], data["p_canonical"]) == (7, 12, 5)


def test_cli_not_equivalent(capsys):
    code, _, err = run(capsys, "equidecompose", FIXTURES / "unit_tetrahedron.json", FIXTURES / "unit_cube.json")
    assert code == EXIT_DOMAIN
    assert json.loads(err)["error"] == "NOT_EHRHART_EQUIVALENT"


def test_cli_equidecompose_and_verify(capsys, tmp_path):
    cert = tmp_path / "cert.json"
    p, q = FIXTURES / "intro_P.json", FIXTURES / "intro_P_prime.json"
    code, out, _ = run(capsys, "equidecompose", p, q, "--out", cert)
    assert code == EXIT_OK and json.loads(out)["pairs"] == 371
    code, out, _ = run(capsys, "verify", p, q, cert, "--grid-depth", 1)
    assert code == EXIT_OK and json.loads(out)["passed"]
    doc = json.loads(cert.read_text())
    doc["pairs"][0]["translation"][0] = "1/2"
    cert.write_text(json.dumps(doc))
    code, out, err = run(capsys, "verify", p, q, cert, "--grid-depth", 0)
    assert code == EXIT_DOMAIN
    assert json.loads(err)["error"] == "CERTIFICATE_REJECTED"
    assert not json.loads(out)["checks"]["unimodular"]["passed"]


def test_cli_decompose_writes_off_meshes(capsys, tmp_path):
    out_json = tmp_path / "pieces.json"
    code, out, _ = run(capsys, "decompose", FIXTURES / "unit_tetrahedron.json",
                       "--out", out_json, "--off", tmp_path / "off")
    assert code == EXIT_OK
    assert json.loads(out)["type_vector"]["Delta_3^1"] == 8
    meshes = sorted((tmp_path / "off").glob("*.off"))
    assert len(meshes) == 8
    assert meshes[0].read_text().splitlines()[:2] == ["OFF", "4 4 0"]
    assert len(json.loads(out_json.read_text())["pieces"]) == 67


def test_cli_malformed_inputs(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run(capsys, "ehrhart", bad)[0] == EXIT_MALFORMED
    bad.write_text(json.dumps({"vertices": [[0, 0], [1]]}))
    code, _, err = run(capsys, "ehrhart", bad)
    assert code == EXIT_MALFORMED and json.loads(err)["error"] == "MALFORMED_INPUT"
    assert run(capsys, "ehrhart", tmp_path / "missing.json")[0] == EXIT_MALFORMED
    assert run(capsys, "no-such-command")[0] == EXIT_MALFORMED
    code, _, err = run(capsys, "classify", FIXTURES / "unit_tetrahedron.json")
    assert code == EXIT_DOMAIN and json.loads(err)["error"] == "NOT_HALF_UNIMODULAR"


def test_cli_selftest_subset(capsys):
    code, out, _ = run(capsys, "selftest", "--only", 2, "--only", 7)
    assert code == EXIT_OK
    assert out.count("PASS") == 2
