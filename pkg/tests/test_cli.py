import json


from cyclohw import closedform as cf
from cyclohw.cli import dump_json, main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_hw_both(capsys):
    code, out, _ = run(capsys, "hw", "--p2", "7", "--p3", "23", "--method", "both")
    assert code == 0
    assert "formula: 121" in out and "oracle:  121" in out and "agree" in out


def test_hw_big_example_formula_only(capsys):
    code, out, _ = run(capsys, "hw", "--p2", "283", "--p3", "84916133", "--format", "json")
    assert code == 0
    data = json.loads(out)
    assert data["formula"] == 18690750945
    assert data["oracle"] is None


def test_hw_big_example_oracle_infeasible(capsys):
    code, _, err = run(capsys, "hw", "--p2", "283", "--p3", "84916133", "--method", "oracle")
    assert code == 3
    assert "infeasible" in err


def test_hw_not_applicable(capsys):
    code, _, err = run(capsys, "hw", "--p2", "7", "--p3", "29", "--method", "formula")
    assert code == 3
    assert "formula not applicable; use --method oracle" in err
    code, out, _ = run(capsys, "hw", "--p2", "7", "--p3", "29", "--method", "oracle",
                       "--format", "csv")
    assert code == 0
    assert out.splitlines()[1].startswith("7,29,oracle,,")


def test_hw_disagree_exit(capsys, monkeypatch):
    monkeypatch.setattr(cf, "constant_term", lambda p2: cf.Fraction(4 * (p2 + 1), 3))
    code, out, _ = run(capsys, "hw", "--p2", "5", "--p3", "17", "--method", "both")
    assert code == 2
    assert "disagree" in out


def test_hw_invalid(capsys):
    assert run(capsys, "hw", "--p2", "9", "--p3", "101")[0] == 3
    assert run(capsys, "hw", "--p2", "7")[0] == 4
    assert run(capsys, "hw", "--p2", "x", "--p3", "23")[0] == 4
    assert run(capsys, "hw", "--p2", "7", "--p3", "23", "--format", "xml")[0] == 4
    assert run(capsys)[0] == 4


def test_blocks_csv(capsys):
    code, out, _ = run(capsys, "blocks", "--m", "21", "--p", "23", "--format", "csv")
    assert code == 0
    lines = out.split("\n")
    assert lines[0] == "i,hw_full,hw_trunc"
    rows = [line.split(",") for line in lines[1:] if line]
    assert len(rows) == 12
    assert [int(r[1]) for r in rows] == [6, 8, 8, 10, 12, 12, 12, 12, 10, 8, 8, 6]
    assert [int(r[2]) for r in rows] == [2, 1, 1, 1, 2, 1, 1, 0, 0, 0, 0, 0]
    assert "\r" not in out


def test_blocks_coeffs(capsys):
    code, out, _ = run(capsys, "blocks", "--m", "21", "--p", "23", "--format", "csv", "--coeffs")
    assert code == 0
    header, first = out.splitlines()[:2]
    assert header == "i,hw_full,hw_trunc,coeffs_full,coeffs_trunc"
    full = first.split(",")[3].split()
    assert len(full) == 21
    assert full[:3] == ["1", "1", "1"] and full[7:10] == ["-1", "-1", "-1"]
    assert first.split(",")[4] == "1 1"


def test_blocks_33_101(capsys):
    code, out, _ = run(capsys, "blocks", "--m", "33", "--p", "101", "--format", "csv")
    rows = out.splitlines()[1:]
    assert len(rows) == 20
    assert [int(r.split(",")[1]) for r in rows[:5]] == [6, 8, 8, 14, 16]


def test_blocks_json(capsys):
    code, out, _ = run(capsys, "blocks", "--m", "15", "--p", "17", "--format", "json")
    data = json.loads(out)
    assert (data["m"], data["p"], data["r"], data["q"]) == (15, 17, 2, 1)
    assert len(data["rows"]) == 8


def test_blocks_invalid(capsys):
    assert run(capsys, "blocks", "--m", "4", "--p", "7")[0] == 3
    assert run(capsys, "blocks", "--m", "21", "--p", "19")[0] == 3


def test_table(capsys):
    code, out, _ = run(capsys, "table", "--p2", "7", "--r3", "2", "--count", "2", "--format", "csv")
    assert code == 0
    assert out == "p3,hw,N_num,N_den,C\n23,121,16,3,9\n107,569,16,3,9\n"
    code, out, _ = run(capsys, "table", "--p2", "5", "--r3", "minus2", "--count", "1",
                       "--format", "csv")
    assert out.splitlines()[1].startswith("43,191,")
    code, out, _ = run(capsys, "table", "--p2", "5", "--count", "0", "--format", "csv")
    assert out == "p3,hw,N_num,N_den,C\n"
    assert run(capsys, "table", "--p2", "5", "--count", "-1")[0] == 4
    assert run(capsys, "table", "--p2", "9")[0] == 3


def test_bench(capsys):
    code, out, _ = run(capsys, "bench", "--p2", "5", "--p3", "17", "--reps", "2",
                       "--format", "json")
    assert code == 0
    data = json.loads(out)
    assert data["hw"] == 73 and data["reps"] == 2
    code, out, _ = run(capsys, "bench", "--p2", "7", "--p3", "1933", "--reps", "1")
    assert code == 0
    assert run(capsys, "bench", "--p2", "5", "--p3", "17", "--reps", "0")[0] == 4
    assert run(capsys, "bench", "--p2", "283", "--p3", "84916133", "--reps", "1")[0] == 3


def test_verify_inline(capsys, tmp_path):
    out_path = tmp_path / "ledger.json"
    code, out, _ = run(capsys, "verify", "--p2", "5", "7", "--p3-bound", "200",
                       "--output", str(out_path))
    assert code == 0
    assert "gating disagreements: 0" in out
    data = json.loads(out_path.read_text())
    assert set(data) == {"config", "entries"}
    assert data["config"]["p2_set"] == [5, 7]
    keys = [(e["formula"], json.dumps(e["params"])) for e in data["entries"]]
    assert keys == sorted(keys, key=lambda k: (k[0], tuple(json.loads(k[1]).items())))


def test_verify_csv_ledger(capsys, tmp_path):
    out_path = tmp_path / "ledger.csv"
    code, _, _ = run(capsys, "verify", "--p2", "5", "--p3-bound", "100", "--output",
                     str(out_path), "--ledger-format", "csv")
    assert code == 0
    text = out_path.read_text()
    assert text.startswith("formula,params,formula_value,oracle_value,verdict,note\n")
    assert "\r" not in text


def test_verify_deterministic(capsys, tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    run(capsys, "verify", "--p2", "5", "7", "--p3-bound", "300", "--output", str(a))
    run(capsys, "verify", "--p2", "5", "7", "--p3-bound", "300", "--workers", "2",
        "--output", str(b))
    da, db = json.loads(a.read_text()), json.loads(b.read_text())
    # only the recorded worker count differs
    assert da["config"].pop("worker_count") == 1
    assert db["config"].pop("worker_count") == 2
    assert json.dumps(da) == json.dumps(db)


def test_verify_config_file(capsys, tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"p2_set": [5], "p3_bound": 200, "oracle_degree_cap": 1000,
                               "extra_pairs": [[283, 84916133]]}))
    out_path = tmp_path / "ledger.json"
    code, out, _ = run(capsys, "verify", "--config", str(cfg), "--output", str(out_path))
    assert code == 0
    entries = json.loads(out_path.read_text())["entries"]
    big = [e for e in entries if e["params"] == {"p2": 283, "p3": 84916133}]
    assert big[0]["verdict"] == "unchecked"
    assert big[0]["formula_value"] == 18690750945


def test_verify_bad_config(capsys, tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text("{not json")
    assert run(capsys, "verify", "--config", str(cfg))[0] == 4
    cfg.write_text(json.dumps({"p2_set": [5], "p3_bound": 100, "bogus": 1}))
    assert run(capsys, "verify", "--config", str(cfg))[0] == 4
    assert run(capsys, "verify", "--config", str(tmp_path / "missing.json"))[0] == 4


def test_verify_corrupted_constant(capsys, tmp_path, monkeypatch):
    monkeypatch.setattr(cf, "constant_term", lambda p2: cf.Fraction(4 * (p2 + 1), 3))
    code, out, _ = run(capsys, "verify", "--p2", "5", "--p3-bound", "100",
                       "--output", str(tmp_path / "l.json"))
    assert code == 2
    assert "DISAGREE hw_ternary {'p2': 5, 'p3': 17}" in out


def test_json_big_ints():
    data = json.loads(dump_json({"a": 2**60, "b": [2**53, -(2**54)], "c": True}))
    assert data == {"a": str(2**60), "b": [2**53, str(-(2**54))], "c": True}
