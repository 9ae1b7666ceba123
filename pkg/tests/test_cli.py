import io
import json

import pytest

from multielim.cli import main, parse_degrees, parse_ints, UsageError
from multielim.exactfield import PrimeField
from multielim.exactla import read_mtx
from multielim.mpoly import GradedStructure, PolySystem, dump_system, random_system

DIXON = ["--dims", "1,1", "--degrees", "1,1;1,1;1,1"]


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out)
    return code, out.getvalue()


def test_parsers():
    assert parse_ints("1, 2,3") == (1, 2, 3)
    assert parse_degrees("1,1;2,1") == ((1, 1), (2, 1))
    with pytest.raises(UsageError):
        parse_ints("1,a")


def test_regions():
    code, text = run("regions", *DIXON, "--nu", "1,1")
    assert code == 0
    assert "delta = (1, 1)" in text
    assert "hybrid" in text and "mu=(0, 0)" in text


def test_matrix_mtx_round_trip(tmp_path):
    code, text = run("matrix", *DIXON, "--nu", "1,1", "--hybrid", "--seed", "3")
    assert code == 0
    M = read_mtx(io.StringIO(text))
    assert M.shape == (4, 4)
    path = tmp_path / "m.mtx"
    code, msg = run("matrix", *DIXON, "--nu", "1,1", "--hybrid", "--seed", "3", "-o", str(path))
    assert code == 0 and "4x4" in msg
    assert path.read_text() == text


def test_matrix_json_and_shape_only():
    code, text = run("matrix", *DIXON, "--nu", "1,2", "--format", "json")
    payload = json.loads(text)
    assert code == 0 and payload["shape"] == [6, 6] and payload["sylvester"] == []
    code, text = run("matrix", "--dims", "2,2", "--degrees", ";".join(["3,3"] * 5),
                     "--nu", "10,10", "--shape-only")
    assert text.strip() == "rows=4356 koszul=6480 sylvester=36"


def test_output_is_deterministic():
    a = run("sylvester", *DIXON, "--seed", "9", "--index", "0,0;0,0")
    b = run("sylvester", *DIXON, "--seed", "9")
    assert a == b and a[0] == 0
    assert "degree = (1, 1)" in a[1]
    assert run("sylvester", *DIXON, "--seed", "10")[1] != a[1]


def test_jacobian_variants():
    code, text = run("jacobian", *DIXON, "--variant", "derivative")
    assert code == 0 and "degree = (1, 1)" in text
    code, text = run("jacobian", *DIXON, "--perm-polys", "1,0,2")
    assert code == 0
    code, _ = run("jacobian", *DIXON, "--variant", "derivative", "--field", "Fp:101")
    assert code == 2


def test_corank_and_roots(tmp_path):
    code, text = run("corank", *DIXON, "--nu", "1,1")
    assert code == 0 and "corank=0" in text and text.startswith("H_")
    code, text = run("roots", *DIXON)
    assert code == 0 and "roots = 0" in text
    code, _ = run("corank", *DIXON, "--nu", "0,5")
    assert code == 2


def test_roots_from_file_not_zero_dimensional(tmp_path):
    # three copies of one form: the zero set is a curve
    s = GradedStructure((1, 1), ((1, 1),) * 3)
    g = random_system(s, PrimeField(), 1)
    path = tmp_path / "sys.json"
    dump_system(PolySystem(s, (g[0], g[0], g[0])), path)
    code, text = run("roots", "--system", str(path))
    assert code == 1 and "not verified zero-dimensional" in text


def test_verify():
    code, text = run("verify", "multiplication", *DIXON)
    assert code == 0 and text.startswith("PASS multiplication")
    code, text = run("verify", "droprank", *DIXON, "--kappa", "2", "-v")
    assert code == 0 and "Fp:2147483629" in text
    code, text = run("verify", "jacobian", "--dims", "1,1", "--degrees", "2,1;2,1;2,1")
    assert code == 0


def test_usage_errors(capsys):
    assert run("matrix", "--nu", "1,1")[0] == 2
    assert run("matrix", *DIXON, "--nu", "1,1,1")[0] == 2
    assert run("matrix", *DIXON, "--nu", "2,1", "--hybrid")[0] == 2
    assert run("sylvester", *DIXON, "--index", "2,0;0,0")[0] == 2
    assert run("regions", "--dims", "1,1", "--degrees", "1,1")[0] == 2
    assert run("roots", "--system", "/nonexistent.json")[0] == 2
    assert run("bogus")[0] == 2
    assert "error" in capsys.readouterr().err
