import io
import json

import numpy as np
import pytest

from tracemetric import cli, isometry, verify
from tracemetric.verify import CheckResult


def write(tmp_path, name, A):
    path = tmp_path / name
    A = np.asarray(A, dtype=float)
    path.write_text(json.dumps({"n": A.shape[0], "rows": A.tolist()}), encoding="utf-8")
    return str(path)


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = cli.run(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def read_matrix(line):
    return cli.parse_matrix(line)


def test_distance_example(tmp_path):
    a = write(tmp_path, "a.json", np.eye(2))
    b = write(tmp_path, "b.json", np.diag([np.e, 1 / np.e]))
    code, out, _ = run("distance", a, b)
    assert code == 0
    assert out.strip() == "1.4142135623730951"


def test_geodesic_midpoint(tmp_path):
    a = write(tmp_path, "i2.json", np.eye(2))
    b = write(tmp_path, "diag49.json", np.diag([4.0, 9.0]))
    code, out, _ = run("geodesic", "--from", a, "--to", b, "--t", "0.5")
    assert code == 0
    np.testing.assert_allclose(read_matrix(out), np.diag([2.0, 3.0]), rtol=1e-14)


def test_geodesic_table(tmp_path):
    a = write(tmp_path, "a.json", np.eye(2))
    b = write(tmp_path, "b.json", np.diag([4.0, 9.0]))
    code, out, _ = run("geodesic", "--from", a, "--to", b, "--steps", "4")
    rows = [json.loads(line) for line in out.splitlines()]
    assert code == 0 and len(rows) == 5
    assert [r["t"] for r in rows] == [0, 0.25, 0.5, 0.75, 1]
    np.testing.assert_allclose(rows[-1]["matrix"]["rows"], np.diag([4.0, 9.0]), rtol=1e-14)


def test_mean_and_transporter(tmp_path):
    a = write(tmp_path, "a.json", np.diag([1.0, 4.0]))
    b = write(tmp_path, "b.json", np.diag([9.0, 4.0]))
    code, out, _ = run("mean", a, b)
    assert code == 0
    np.testing.assert_allclose(read_matrix(out), np.diag([3.0, 4.0]), rtol=1e-14)
    code, out, _ = run("transporter", a, b)
    assert code == 0
    np.testing.assert_allclose(read_matrix(out), np.diag([3.0, 1.0]), atol=1e-14)


def test_curvature_report(tmp_path):
    q = write(tmp_path, "q.json", np.eye(3))
    code, out, _ = run("curvature", "--point", q, "--report", "--samples", "20")
    lines = out.splitlines()
    assert code == 0
    assert lines[0] == "manifold SLP_3"
    assert lines[3] == "scalar closed form -3.75"
    assert float(lines[2].split()[1]) == pytest.approx(-3.75, abs=1e-12)
    assert lines[-1] == "ok"


def test_curvature_report_needs_slice(tmp_path):
    q = write(tmp_path, "q.json", 2 * np.eye(3))
    code, _, err = run("curvature", "--point", q, "--report")
    assert code == 1 and err.startswith("error:")


def test_canonicalize(tmp_path):
    c = write(tmp_path, "c.json", [[2.0, 0.0], [1.0, 1.0]])
    code, out, _ = run("canonicalize", "--word", f"inv;congr:{c}")
    lines = out.splitlines()
    assert code == 0
    assert lines[:3] == ["family inv", "a 1", "b 0"]
    M = read_matrix(lines[3][2:])
    ref = np.linalg.inv([[2.0, 0.0], [1.0, 1.0]]).T
    np.testing.assert_allclose(M, ref, atol=1e-15)


def test_canonicalize_without_congruence(tmp_path):
    code, out, _ = run("canonicalize", "--word", "psi;inv", "--n", "3")
    assert code == 0 and out.splitlines()[0] == "family inv-psi"
    code, _, err = run("canonicalize", "--word", "psi;inv")
    assert code == 1 and "order" in err


def test_canonicalize_bad_letter():
    code, _, err = run("canonicalize", "--word", "flip", "--n", "2")
    assert code == 1 and "bad word letter" in err


def test_identify_roundtrip(tmp_path):
    m = write(tmp_path, "m.json", [[1.0, 0.5, 0.0], [0.2, 2.0, 0.1], [0.0, -0.3, 1.5]])
    code, out, _ = run("identify", "--family", "inv-psi", "--M", m, "--seed", "3")
    assert code == 0
    assert out.splitlines()[0] == "family inv-psi"
    assert out.splitlines()[-1] == "round trip ok"


def test_identify_n2_psi_absorbed(tmp_path):
    m = write(tmp_path, "m.json", np.eye(2))
    code, out, _ = run("identify", "--family", "psi", "--M", m)
    assert code == 0
    assert out.splitlines()[:3] == ["family inv", "a 1", "b 0"]


def test_identify_mismatch_exit_code(tmp_path, monkeypatch):
    m = write(tmp_path, "m.json", np.eye(3))
    monkeypatch.setattr(isometry, "identify", lambda oracle, n, seed=0: isometry.CanonicalIsometry(2 * np.eye(n)))
    code, out, _ = run("identify", "--family", "congr", "--M", m)
    assert code == 2
    assert "FAILED" in out.splitlines()[-1]


def test_verify_ok_with_env_seed(monkeypatch):
    monkeypatch.setenv(cli.SEED_ENV, "7")
    code, out, _ = run("verify", "--suite", "curvature", "--n", "3")
    assert code == 0
    assert "n=3 scalar" in out and "-3.75" in out
    assert out.splitlines()[-1].startswith("verify ok")


def test_verify_failure_exit_code(monkeypatch):
    def broken(seed=0, **kwargs):
        return CheckResult(12, "trace inequality", False, 1.0, 1e-9, "forced")

    monkeypatch.setitem(verify.CHECKS, 12, broken)
    code, out, _ = run("verify", "--suite", "curvature", "--n", "2")
    assert code == 2
    assert out.splitlines()[-1] == "verify FAILED: trace inequality"


def test_verify_bad_arguments():
    assert run("verify", "--suite", "nope")[0] == 1
    assert run("verify", "--suite", "metric", "--n", "1")[0] == 1
    assert run("verify", "--suite", "metric", "--jobs", "0")[0] == 1


def test_seed_resolution(monkeypatch):
    monkeypatch.delenv(cli.SEED_ENV, raising=False)
    assert cli._seed(None) == 0
    assert cli._seed(4) == 4
    monkeypatch.setenv(cli.SEED_ENV, "11")
    assert cli._seed(None) == 11
    assert cli._seed(2) == 2
    monkeypatch.setenv(cli.SEED_ENV, "abc")
    with pytest.raises(cli.ParseError):
        cli._seed(None)


def test_output_is_deterministic(tmp_path, monkeypatch):
    monkeypatch.setenv(cli.SEED_ENV, "5")
    q = write(tmp_path, "q.json", np.diag([2.0, 0.5, -1.0]))
    first = run("curvature", "--point", q, "--report", "--samples", "30")
    second = run("curvature", "--point", q, "--report", "--samples", "30")
    assert first == second and first[0] == 0


def test_symmetrization_note(tmp_path):
    path = tmp_path / "a.json"
    path.write_text('{"n": 2, "rows": [[1, 1e-14], [0, 1]]}', encoding="utf-8")
    b = write(tmp_path, "b.json", np.eye(2))
    code, out, err = run("distance", str(path), b)
    assert code == 0
    assert "symmetrized" in err
    assert float(out) < 1e-13


@pytest.mark.parametrize(
    "text",
    [
        "not json",
        '{"rows": [[1]]}',
        '{"n": 2, "rows": [[1, 0]]}',
        '{"n": 2, "rows": [[1, 0], [0, "x"]]}',
        '{"n": 2, "rows": [[1, 0.5], [0, 1]]}',
        '{"n": true, "rows": [[1]]}',
    ],
)
def test_parse_errors(tmp_path, text):
    path = tmp_path / "bad.json"
    path.write_text(text, encoding="utf-8")
    code, out, err = run("distance", str(path), str(path))
    assert code == 1 and out == ""
    assert err.startswith("error:")


def test_missing_file(tmp_path):
    code, _, err = run("distance", str(tmp_path / "none.json"), str(tmp_path / "none.json"))
    assert code == 1 and "error:" in err


def test_domain_error_exit(tmp_path):
    a = write(tmp_path, "a.json", np.eye(2))
    b = write(tmp_path, "b.json", np.diag([1.0, -1.0]))
    assert run("distance", a, b)[0] == 1


def test_usage_error():
    assert run("distance")[0] == 1
    assert run()[0] == 1


def test_fmt():
    assert cli.fmt(-0.0) == "0"
    assert cli.fmt(0.1) == "0.10000000000000001"
    assert cli.dump_matrix(np.eye(2)) == '{"n": 2, "rows": [[1, 0], [0, 1]]}'


def test_main_exits(monkeypatch, capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main(["canonicalize", "--word", "inv", "--n", "2"])
    assert exc.value.code == 0
    assert capsys.readouterr().out.startswith("family inv")
