import json
import math

import numpy as np
import pytest

from matquad.cli import dumps, main

SQ2 = math.sqrt(2.0)


def write(tmp_path, name, doc):
    path = tmp_path / name
    path.write_text(json.dumps(doc), encoding="utf-8")
    return str(path)


@pytest.fixture
def example_fg(tmp_path):
    F = {"p": 2, "coeffs": [[1, 0, 1, -1], [0, 6, 7, 0], [1, 0, 0, 5]]}
    G = {"p": 2, "coeffs": [[5, 0, 7, -3], [2, 6, 0, 4]]}
    return write(tmp_path, "f.json", F), write(tmp_path, "g.json", G)


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, (json.loads(out) if out else None), err


def test_rule(capsys):
    code, doc, _ = run(capsys, "rule", "--weight", "paper-chebyshev-mixed", "--n", "2")
    assert code == 0 and doc["command"] == "rule"
    assert np.allclose(doc["nodes"], [-1 / SQ2, -0.5, 0.5, 1 / SQ2])
    expected = [np.diag([0.5, 0]), np.diag([0, 0.5]), np.diag([0, 0.5]), np.diag([0.5, 0])]
    for L, E in zip(doc["weights"], expected):
        assert np.allclose(L, E, atol=1e-12)
    assert doc["mults"] == [1, 1, 1, 1]


def test_integrate(capsys, example_fg):
    f, g = example_fg
    code, doc, _ = run(capsys, "integrate", "--weight", "paper-chebyshev-mixed", "--n", "2",
                       "--F", f, "--G", g, "--check")
    assert code == 0
    assert np.allclose(doc["value"], [[16.5, 16.5], [12, 6.25]], atol=1e-12)
    assert np.allclose(doc["oracle"], doc["value"], atol=1e-8)
    assert doc["error"] < 1e-8


def test_precision(capsys):
    code, doc, _ = run(capsys, "precision", "--weight", "paper-chebyshev-mixed", "--n", "2", "--lmax", "6")
    assert code == 0 and doc["m"] == 3
    assert len(doc["residuals"]) == 7 and doc["residuals"][4] > 1e-3


def test_recurrence(capsys):
    code, doc, _ = run(capsys, "recurrence", "--weight", "chebyshev1", "--n", "4")
    assert code == 0
    assert doc["command"] == "recurrence"


def test_interpolate_agreement(capsys, example_fg):
    f, _ = example_fg
    code, doc, _ = run(capsys, "interpolate", "--weight", "paper-chebyshev-mixed", "--n", "2", "--F", f)
    assert code == 0
    assert max(doc["agreement"].values()) < 1e-9


def test_converge_with_expressions(capsys, tmp_path):
    f = write(tmp_path, "exp.json", {"p": 2, "entries": [["exp(x)", "0"], ["0", "exp(x)"]]})
    code, doc, _ = run(capsys, "converge", "--weight", "paper-chebyshev-mixed", "--n", "2", "4", "8", "--F", f)
    assert code == 0
    errs = [row["error"] for row in doc["table"]]
    assert errs[0] > errs[1] > errs[2]


def test_weight_document(capsys, tmp_path):
    w = write(tmp_path, "w.json", {"interval": [0, 2], "terms": [{"C": [[2, 1], [1, 2]], "base": "legendre"}]})
    code, doc, _ = run(capsys, "rule", "--weight", w, "--n", "3")
    assert code == 0 and doc["denormalizer"] is not None


def test_out_file_and_determinism(capsys, tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for path in (a, b):
        assert main(["rule", "--weight", "paper-chebyshev-mixed", "--n", "3", "--out", str(path)]) == 0
    assert capsys.readouterr().out == ""
    assert a.read_bytes() == b.read_bytes()


def test_round_trip_17_digits(tmp_path):
    rng = np.random.default_rng(0)
    values = list(rng.standard_normal(50) * 10.0 ** rng.integers(-20, 20, 50)) + [1.0, 0.1, -0.0, 1e300]
    text = dumps({"x": values})
    again = json.loads(text)["x"]
    assert all(u == v for u, v in zip(values, again))
    assert dumps(json.loads(text)) == text
    assert dumps(1.0) == "1.0" and dumps(2) == "2"


def test_usage_errors(capsys, tmp_path):
    assert run(capsys, "rule", "--weight", "no-such-weight", "--n", "2")[0] == 2
    bad = write(tmp_path, "bad.json", {"p": 2, "entries": [["x"]]})
    assert run(capsys, "integrate", "--weight", "paper-chebyshev-mixed", "--n", "2", "--F", bad)[0] == 2
    wrong = write(tmp_path, "wrong.json", {"p": 1, "entries": [["x"]]})
    assert run(capsys, "integrate", "--weight", "paper-chebyshev-mixed", "--n", "2", "--F", wrong)[0] == 2
    assert run(capsys, "precision", "--weight", "chebyshev1", "--n", "3", "--lmax", "4")[0] == 2
    assert run(capsys, "integrate", "--weight", "chebyshev1", "--n", "2")[0] == 2
    (tmp_path / "junk.json").write_text("{", encoding="utf-8")
    assert run(capsys, "rule", "--weight", str(tmp_path / "junk.json"), "--n", "2")[0] == 2
    for argv in (["rule", "--weight", "chebyshev1", "--n", "0"], ["rule", "--n", "2"], []):
        with pytest.raises(SystemExit) as info:
            main(argv)
        assert info.value.code == 2


def test_numerical_failures(capsys, tmp_path):
    w = write(tmp_path, "deg.json", {"interval": [-1, 1], "terms": [{"C": [[1, 0], [0, 0]], "base": "legendre"}]})
    code, doc, err = run(capsys, "rule", "--weight", w, "--n", "2")
    assert code == 1 and doc is None and "numerical failure" in err
    f = write(tmp_path, "nan.json", {"p": 1, "entries": [["sqrt(x)"]]})
    assert run(capsys, "integrate", "--weight", "chebyshev1", "--n", "3", "--F", f)[0] == 1
