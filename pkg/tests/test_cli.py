import json

import numpy as np
import pytest

from aqc.cli import main, verify_report
from aqc.errors import ValidationError
from aqc.formats import alist_text, read_alist, write_alist


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def construct15(tmp_path, capsys, name="c15"):
    out = tmp_path / f"{name}.json"
    rc, text, _ = run(capsys, "construct", "bch-ldpc", "--m", "2", "--mu", "1", "--s", "2", "--p", "2",
                      "--delta", "3", "--out", str(out))
    assert rc == 0
    return out, text


def test_channel_json(capsys):
    rc, out, _ = run(capsys, "channel", "--t1", "1", "--t2", "1", "--t", "0.693147")
    d = json.loads(out)
    assert rc == 0
    for k in ("p_x", "p_y", "p_z"):
        assert d[k] == pytest.approx(0.125, abs=1e-6)
    rc, out, _ = run(capsys, "channel", "--t1", "1", "--t2", "0.1", "--t", "0.001")
    d = json.loads(out)
    assert d["A_approx"] == pytest.approx(19) and abs(d["A_exact"] - 19) < 0.19
    rc, out, _ = run(capsys, "channel", "--p", "0.03", "--asymmetry", "10")
    d = json.loads(out)
    assert d["eps_x"] == pytest.approx(0.005) and d["eps_z"] == pytest.approx(0.0275)


def test_channel_validation_exit_code(capsys):
    rc, _, err = run(capsys, "channel", "--t1", "1", "--t2", "3", "--t", "0.1")
    assert rc == 2 and "error" in err
    rc, _, _ = run(capsys, "channel", "--t1", "1", "--p", "0.1")
    assert rc == 2


def test_construct_prints_summary(tmp_path, capsys):
    out, text = construct15(tmp_path, capsys)
    assert text.strip() == "[[15,3,3/5]]_2"
    desc = json.loads(out.read_text())
    assert desc["construction"] == "bch-ldpc"
    assert desc["d_x"] == {"value": 3, "kind": "exact"} and desc["pure"] is True
    assert desc["primitive_poly"] == [1, 1, 0, 0, 1]
    assert (tmp_path / desc["alist_files"]["hx"]).exists()
    rc, text, _ = run(capsys, "construct", "bch-ldpc", "--m", "2", "--mu", "1", "--s", "4", "--delta", "9")
    assert rc == 0 and text.strip() == "[[255,143,9/17]]_2"


def test_construct_delta_beyond_limit(capsys):
    rc, _, err = run(capsys, "construct", "bch-ldpc", "--m", "2", "--mu", "1", "--s", "4", "--delta", "16")
    assert rc == 2 and "delta0=15" in err


def test_construct_eg_ldpc(tmp_path, capsys):
    rc, text, _ = run(capsys, "construct", "eg-ldpc", "--m", "4", "--mu-x", "3", "--mu-z", "3",
                      "--out", str(tmp_path / "eg.json"), "--alist-dir", str(tmp_path / "mats"))
    assert rc == 0 and text.strip() == "[[16,6,4/4]]_2"
    assert (tmp_path / "mats" / "eg.hz.alist").exists()
    checks = verify_report(tmp_path / "eg.json")
    assert all(ok for _, ok, _ in checks)
    rc, _, err = run(capsys, "construct", "eg-ldpc", "--m", "4", "--mu-x", "1", "--mu-z", "3")
    assert rc == 2 and "mu_x" in err


def test_round_trip_all_pass(tmp_path, capsys):
    out, _ = construct15(tmp_path, capsys)
    rc, text, _ = run(capsys, "verify", str(out))
    assert rc == 0
    lines = text.strip().splitlines()
    assert lines and all(line.startswith("PASS") for line in lines)
    assert {l.split()[1].rstrip(":") for l in lines} >= {"length", "nesting", "dimension", "reconstruction"}


def test_flipped_bit_in_h_z_fails_nesting(tmp_path, capsys):
    out, _ = construct15(tmp_path, capsys)
    desc = json.loads(out.read_text())
    hz_path = tmp_path / desc["alist_files"]["hz"]
    H = read_alist(hz_path).toarray()
    H[0, 0] ^= 1
    write_alist(H, hz_path)
    rc, text, _ = run(capsys, "verify", str(out))
    assert rc == 2
    assert any(l.startswith("FAIL  nesting") for l in text.splitlines())


def test_edited_k_fails_dimension(tmp_path, capsys):
    out, _ = construct15(tmp_path, capsys)
    desc = json.loads(out.read_text())
    desc["k"] = 4
    out.write_text(json.dumps(desc))
    rc, text, _ = run(capsys, "verify", str(out))
    assert rc == 2
    assert any(l.startswith("FAIL  dimension") for l in text.splitlines())
    assert any(l.startswith("PASS  nesting") for l in text.splitlines())


def test_construct_twice_byte_identical(tmp_path, capsys):
    (tmp_path / "a").mkdir()
    (tmp_path / "b").mkdir()
    a, _ = construct15(tmp_path / "a", capsys)
    b, _ = construct15(tmp_path / "b", capsys)
    for suffix in ("hx", "hz"):
        assert (a.parent / f"c15.{suffix}.alist").read_bytes() == (b.parent / f"c15.{suffix}.alist").read_bytes()
    assert a.read_bytes() == b.read_bytes()


def test_alist_format_and_round_trip(tmp_path):
    H = np.array([[1, 1, 0, 1], [0, 1, 1, 0]])
    text = alist_text(H)
    assert text.splitlines()[:4] == ["4 2", "2 3", "1 2 1 1", "3 2"]
    assert text.splitlines()[4:8] == ["1 0", "1 2", "2 0", "1 0"]
    assert text.splitlines()[8:] == ["1 2 4", "2 3 0"]
    write_alist(H, tmp_path / "h.alist")
    assert np.array_equal(read_alist(tmp_path / "h.alist").toarray(), H)
    (tmp_path / "bad.alist").write_text("4 2\n1 3\n1 2 1\n")
    with pytest.raises(ValidationError):
        read_alist(tmp_path / "bad.alist")


def test_missing_descriptor_is_validation_error(tmp_path, capsys):
    rc, _, err = run(capsys, "verify", str(tmp_path / "nope.json"))
    assert rc == 2 and "cannot read" in err


def test_table1_output(capsys):
    rc, text, _ = run(capsys, "table1")
    assert rc == 0
    body = text.strip().splitlines()[1:]
    assert len(body) == 7
    assert "[[255,167,3/17]]_2" in body[-1] and body[-1].split()[-1] == "0.655"
    assert "[[255,127,13/17]]_2" in body[1] and body[1].split()[-1] == "0.498"


def test_simulate_csv_is_reproducible(tmp_path, capsys):
    out, _ = construct15(tmp_path, capsys)
    csv1, csv2 = tmp_path / "a.csv", tmp_path / "b.csv"
    args = ["simulate", str(out), "--p-grid", "0.001", "--asymmetry", "1", "--trials", "1", "--seed", "7"]
    assert main(args + ["--out", str(csv1)]) == 0
    assert main(args + ["--out", str(csv2)]) == 0
    assert csv1.read_bytes() == csv2.read_bytes()
    lines = csv1.read_text().splitlines()
    assert lines[0] == "p,A,eps_x,eps_z,pe_x,pe_z,pe_z_ci_low,pe_z_ci_high,pe,trials,block_errors,nonconverged"
    assert len(lines) == 2


def test_simulate_zero_p_row_and_env_seed(tmp_path, capsys, monkeypatch):
    out, _ = construct15(tmp_path, capsys)
    rc, text, _ = run(capsys, "simulate", str(out), "--p-grid", "0,0.05", "--asymmetry", "1,10", "--trials", "200")
    rows = [l.split(",") for l in text.strip().splitlines()[1:]]
    assert rc == 0 and len(rows) == 4
    assert all(float(r[8]) == 0 for r in rows if float(r[0]) == 0)
    monkeypatch.setenv("AQC_SEED", "7")
    _, env_text, _ = run(capsys, "simulate", str(out), "--p-grid", "0.05", "--asymmetry", "1", "--trials", "200")
    _, flag_text, _ = run(capsys, "simulate", str(out), "--p-grid", "0.05", "--asymmetry", "1", "--trials", "200",
                          "--seed", "7")
    assert env_text == flag_text
    monkeypatch.setenv("AQC_SEED", "seven")
    rc, _, _ = run(capsys, "simulate", str(out), "--p-grid", "0.05", "--asymmetry", "1", "--trials", "10")
    assert rc == 2


def test_help_documents_flags(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["simulate", "--help"])
    assert exc.value.code == 0
    text = capsys.readouterr().out
    for flag in ("--p-grid", "--asymmetry", "--trials", "--seed", "--min-block-errors", "--channel-model", "--out"):
        assert flag in text
