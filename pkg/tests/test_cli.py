import json

import pytest

from hopfsmith import cli


def _run(*argv):
    return cli.run(list(argv))


def test_basis_counts():
    status, doc = _run("basis", "--p", "3", "--n", "2")
    assert status == 0 and doc["tables"]["dimension"] == 8
    status, doc = _run("basis", "--p", "3", "--n", "2", "--prime-variant")
    assert status == 0 and len(doc["tables"]["basis"]) == 10


def test_p2_is_config_error(capsys):
    assert cli.main(["basis", "--p", "2", "--n", "2"]) == 2
    assert "p=2 unsupported" in capsys.readouterr().err


def test_horizontal_needs_n3():
    status, doc = _run("verify", "--p", "3", "--n", "2", "--twist", "horizontal:1,2,3", "oracle")
    assert status == 2 and "n >= 3" in doc["error"]


def test_unknown_generator():
    status, doc = _run("coproduct", "--gen", "D99(x^(0,0))")
    assert status == 2


def test_coproduct_h_and_counit():
    status, doc = _run("coproduct", "--p", "3", "--n", "2", "--gen", "h", "--format", "json")
    assert status == 0
    rec = doc["elements"][0]
    assert rec["counit"] == []
    assert all(set(r) == {"coeff", "legs"} for r in rec["delta"])
    status, doc = _run("coproduct", "--p", "3", "--n", "2", "--format", "json")
    assert len(doc["elements"]) == 8
    assert all(r["counit"] == [] for r in doc["elements"])


def test_json_round_trip_and_determinism():
    _, a = _run("coproduct", "--p", "3", "--n", "2", "--format", "json", "--seed", "3")
    _, b = _run("coproduct", "--p", "3", "--n", "2", "--format", "json", "--seed", "3")
    assert a == b
    assert json.loads(json.dumps(a)) == a
    mono = a["elements"][0]["delta"][0]["legs"][0]
    assert all(isinstance(e, int) and isinstance(g, dict) for g, e in mono)


def test_verify_all_vertical():
    status, doc = _run("verify", "--p", "3", "--n", "2", "--twist", "vertical:1,2", "all")
    assert status == 0, doc
    assert set(doc["report"]) == {"twist-axiom", "hopf-axioms", "hopf-ideal", "oracle",
                                  "identities", "pass"}


def test_verify_char0_twist():
    status, _ = _run("verify", "--char0", "--n", "2", "--trunc", "4", "twist-axiom")
    assert status == 0


def test_verify_distinct_chains():
    status, doc = _run("verify", "--p", "3", "--n", "3", "--distinct-chains")
    assert status == 0
    assert any(r["witness"] for r in doc["report"]["distinct-chains"]["pairs"])


def test_displayed_variant_fails_verification():
    status, doc = _run("verify", "--p", "3", "--n", "3", "--variant", "displayed", "oracle")
    assert status == 1
    assert doc["report"]["oracle"]["delta"]["witness"]


def test_sl_table():
    status, doc = _run("coproduct", "--sl", "--p", "5", "--n", "3")
    assert status == 0
    assert len(doc["tables"]["sl3"]["rows"]) == 8


def test_out_file(tmp_path, capsys):
    out = tmp_path / "basis.json"
    assert cli.main(["basis", "--p", "5", "--n", "2", "--out", str(out)]) == 0
    doc = json.loads(out.read_text())
    assert doc["tables"]["dimension"] == 24
    assert "dim S(2;1) p=5 = 24" in capsys.readouterr().out
