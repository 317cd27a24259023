import json

import pytest

from chowposet import families as fam
from chowposet.cli import jsonable, main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def report(capsys, *argv):
    code, out, _ = run(capsys, *argv)
    return code, json.loads(out)


def write_json(tmp_path, name, doc):
    p = tmp_path / name
    p.write_text(json.dumps(doc))
    return str(p)


# ---------------------------------------------------------------- family

def test_family_documents(capsys):
    code, doc = report(capsys, "family", "dowling", "--n", "3", "--m", "2")
    assert code == 0 and len(doc["elements"]) == 24
    code, doc = report(capsys, "family", "boolean", "--n", "1")
    assert len(doc["elements"]) == 2 and doc["covers"] == [[0, 1]]
    code, doc = report(capsys, "family", "uniform", "--k", "2", "--n", "3")
    assert len(doc["elements"]) == 5
    P, _ = fam.from_json(doc)
    assert P.rank_profile() == (1, 3, 1)


def test_family_to_file(capsys, tmp_path):
    out = tmp_path / "b.json"
    assert main(["family", "boolean", "--n", "2", "--output", str(out)]) == 0
    assert len(json.loads(out.read_text())["elements"]) == 4


# ---------------------------------------------------------------- compute

def test_compute_examples(capsys, tmp_path):
    code, rep = report(capsys, "compute", "chow", "--family", "dowling", "--n", "4", "--m", "2")
    assert code == 0 and rep["outputs"]["polynomial"]["coeffs"] == [1, 99, 99, 1]
    assert rep["outputs"]["methods_agree"] is True and rep["pass"] is True
    path = write_json(tmp_path, "rank1.json", {"elements": ["a", "b"], "covers": [[0, 1]]})
    code, rep = report(capsys, "compute", "chow", "--input", path)
    assert rep["outputs"]["polynomial"]["coeffs"] == [1]
    code, rep = report(capsys, "compute", "aug-chow", "--family", "boolean", "--n", "3")
    assert rep["outputs"]["polynomial"]["coeffs"] == [1, 7, 7, 1]


@pytest.mark.parametrize("what", ["gamma", "h", "chain", "char"])
def test_compute_other_outputs(capsys, what):
    code, rep = report(capsys, "compute", what, "--family", "boolean", "--n", "3")
    assert code == 0 and rep["pass"]
    assert rep["outputs"]


def test_chain_listing_respects_limit(capsys):
    code, rep = report(capsys, "compute", "chain", "--family", "boolean", "--n", "3", "--list-chains")
    assert code == 0
    code, _, err = run(capsys, "compute", "chain", "--family", "boolean", "--n", "3",
                       "--list-chains", "--max-chains", "3")
    assert code == 3 and "limit" in err


# ---------------------------------------------------------------- check

def test_check_examples(capsys):
    code, rep = report(capsys, "check", "umel", "--family", "uniform", "--k", "3", "--n", "5")
    assert code == 0 and rep["pass"]
    code, rep = report(capsys, "check", "supersolvable", "--family", "uniform", "--k", "3", "--n", "5")
    assert code == 1 and not rep["pass"]
    assert rep["checks"][0]["witness"]["reason"] == "NotSupersolvable"
    code, rep = report(capsys, "check", "interlace", "--f", "1,1", "--g", "1,4,1")
    assert code == 0 and rep["pass"]


@pytest.mark.parametrize("what,expect", [
    ("el", 0), ("rank-uniform", 0), ("tn", 1), ("realroot", 0), ("battery", 0),
])
def test_check_partition(capsys, what, expect):
    code, rep = report(capsys, "check", what, "--family", "partition", "--n", "4")
    assert code == expect and rep["pass"] == (expect == 0)


def test_failed_checks_carry_witness(capsys):
    code, rep = report(capsys, "check", "rank-uniform", "--family", "near-pencil")
    assert code == 1
    failed = [c for c in rep["checks"] if not c["pass"]]
    assert failed and all("witness" in c for c in failed)


def test_checks_sorted_by_name(capsys):
    _, rep = report(capsys, "check", "battery", "--family", "dowling", "--n", "3", "--m", "2")
    names = [c["name"] for c in rep["checks"]]
    assert names == sorted(names)


# ---------------------------------------------------------------- errors and limits

def test_input_errors(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run(capsys, "compute", "chow", "--input", str(bad))[0] == 2
    assert run(capsys, "compute", "chow", "--family", "nope")[0] == 2
    loop = write_json(tmp_path, "loop.json", {"elements": ["a", "b"], "covers": [[0, 1], [1, 1]]})
    assert run(capsys, "compute", "chow", "--input", loop)[0] == 2
    assert run(capsys, "check", "interlace", "--f", "1,x", "--g", "1")[0] == 2


def test_size_limit(capsys):
    code, _, err = run(capsys, "compute", "chow", "--family", "dowling", "--n", "9", "--m", "3")
    assert code == 3


# ---------------------------------------------------------------- determinism and verify

def test_reports_are_deterministic(capsys):
    args = ("compute", "gamma", "--family", "projective", "--n", "3", "--q", "2")
    a = run(capsys, *args)[1]
    b = run(capsys, *args)[1]
    assert a == b
    assert "timing_ms" not in json.loads(a)
    assert "timing_ms" in json.loads(run(capsys, *args, "--timing")[1])


def test_verify_quick(capsys):
    code, out, _ = run(capsys, "verify", "--level", "quick")
    assert code == 0
    again = run(capsys, "verify", "--level", "quick")[1]
    assert out == again
    rep = json.loads(out)
    assert rep["pass"] and any("golden" in c["name"] for c in rep["checks"])


def test_verify_corrupted_golden(capsys, tmp_path):
    golden = {"family": "dowling", "m": 2, "chow": {"3": [1, 14, 1], "4": [1, 99, 99, 1],
                                                    "5": [1, 622, 3161, 622, 1],
                                                    "6": [1, 4051, 65812, 65812, 4051, 1]}}
    path = write_json(tmp_path, "golden.json", golden)
    code, rep = report(capsys, "verify", "--level", "quick", "--golden", path)
    assert code == 1 and not rep["pass"]
    bad = [c for c in rep["checks"] if not c["pass"]]
    assert [c["name"] for c in bad] == ["golden: dowling(5,2) chow"]
    assert bad[0]["witness"]["diff"] == [{"index": 2, "expected": 3161, "got": 3162}]


def test_big_integers_become_strings():
    assert jsonable(2 ** 53) == 2 ** 53
    assert jsonable(2 ** 53 + 1) == str(2 ** 53 + 1)
    assert jsonable({"a": [-(2 ** 60)]}) == {"a": [str(-(2 ** 60))]}
