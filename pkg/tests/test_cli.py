import json
from importlib import resources

from foxprim.cli import dispatch, main

ALPHA = "x1->aC; x2->cbC; x3->c; x4->d"


def run(capsys, *argv):
    status, rep = dispatch(list(argv))
    out = capsys.readouterr()
    return status, out.out, out.err


def data_file(name):
    return str(resources.files("foxprim") / "data" / name)


def test_prim_check(capsys):
    status, out, _ = run(capsys, "prim", "check", "abAB")
    assert status == 0 and "not primitive" in out
    status, out, _ = run(capsys, "prim", "check", "aab")
    assert status == 0 and "not primitive" not in out and "primitive" in out


def test_aut_check_example(capsys):
    status, out, _ = run(capsys, "aut", "check", ALPHA)
    assert status == 0 and "automorphism" in out and "not" not in out
    status, out, _ = run(capsys, "aut", "check", "x1->aa")
    assert status == 0 and "not an automorphism" in out


def test_usage_errors_exit_2(capsys):
    assert run(capsys, "prim", "check")[0] == 2
    assert run(capsys, "word", "ab!")[0] == 2
    assert run(capsys, "word", "abc", "--rank", "2")[0] == 2
    assert run(capsys, "delta", "odd", "abc", "--rank", "3")[0] == 2
    assert run(capsys, "orbit", "min", "ab", "--budget", "0")[0] == 2
    assert run(capsys, "nonsense")[0] == 2
    status, _, err = run(capsys, "delta", "certify", "abAB")
    assert status == 2 and "--inverse" in err


def test_json_output(capsys):
    status, out, _ = run(capsys, "fox", "left", "abAB", "1", "--json")
    d = json.loads(out)
    assert status == 0 and d["version"] and d["seed"] == 0 and "bounds" in d
    status, out, _ = run(capsys, "delta", "m2", "abABabAB", "--json")
    d = json.loads(out)
    assert d["result"]["verdict"] == "NotDeltaPrimitive"


def test_certify(capsys, tmp_path):
    status, out, _ = run(capsys, "delta", "certify", "abAB", "--inverse", data_file("inverse_comm_f2.json"))
    assert status == 0 and "verified" in out
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps([["1", "0"], ["0", "1"]]))
    status, out, _ = run(capsys, "delta", "certify", "abAB", "--inverse", str(bad))
    assert status == 1 and "rejected" in out
    status, out, _ = run(capsys, "delta", "certify", "abABcdCD", "--inverse", data_file("inverse_u4.json"))
    assert status == 0


def test_transport(capsys):
    status, out, _ = run(capsys, "delta", "transport", "abABcdCD", "--map", ALPHA,
                         "--inverse", data_file("inverse_u4.json"), "--json")
    d = json.loads(out)
    assert status == 0 and d["certified"] is True and d["image"] == "abAcBdCD"
    status, _, _ = run(capsys, "delta", "transport", "abABcdCD", "--map", "x1->aa",
                       "--inverse", data_file("inverse_u4.json"))
    assert status == 2


def test_workers_env(capsys, monkeypatch):
    monkeypatch.setenv("FOXPRIM_WORKERS", "2")
    status, out, _ = run(capsys, "prim", "block-search", "--rank", "3", "--max-len", "6", "--json")
    assert status == 0
    monkeypatch.setenv("FOXPRIM_WORKERS", "many")
    status, _, err = run(capsys, "prim", "block-search", "--rank", "3", "--max-len", "6")
    assert status == 2 and "FOXPRIM_WORKERS" in err


def test_workers_env_is_used(monkeypatch):
    import argparse

    from foxprim.cli import RunConfig, build_parser

    monkeypatch.setenv("FOXPRIM_WORKERS", "3")
    ns = build_parser().parse_args(["word", "ab"])
    assert RunConfig.from_args(ns).workers == 3
    ns = build_parser().parse_args(["word", "ab", "--workers", "1"])
    assert RunConfig.from_args(ns).workers == 1
    assert isinstance(ns, argparse.Namespace)


def test_block_search_report_reproducible(capsys, tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for p in (a, b):
        status, _, _ = run(capsys, "prim", "block-search", "--rank", "3", "--cand-len", "2",
                           "--max-len", "8", "--out", str(p))
        assert status == 0
    assert a.read_bytes() == b.read_bytes()
    rep = json.loads(a.read_text())
    assert rep["survivors"] == [] and rep["max_len"] == 8
    assert all(r["verdict"] == "Extendable" for r in rep["results"])


def test_block_search_resume(capsys, tmp_path):
    ck = tmp_path / "s.ckpt"
    out1, out2 = tmp_path / "1.json", tmp_path / "2.json"
    args = ["prim", "block-search", "--rank", "3", "--cand-len", "3", "--max-len", "7"]
    assert run(capsys, *args, "--checkpoint", str(ck), "--out", str(out1))[0] == 0
    assert run(capsys, *args, "--resume", str(ck), "--out", str(out2))[0] == 0
    r1, r2 = json.loads(out1.read_text()), json.loads(out2.read_text())
    assert r2["resumed"] == r1["candidates"]
    assert r1["results"] == r2["results"]
    # resuming with different bounds is refused
    assert run(capsys, "prim", "block-search", "--rank", "3", "--cand-len", "3", "--max-len", "8",
               "--resume", str(ck))[0] == 2


def test_verify_paper(capsys):
    status, out, _ = run(capsys, "verify-paper")
    assert status == 0 and "FAIL" not in out and out.count("PASS") >= 8


def test_main_returns_status(capsys):
    assert main(["word", "aAb"]) == 0
    assert "b" in capsys.readouterr().out
    status, rep = dispatch(["--version"])
    assert status == 0 and rep is None
    assert "foxprim 0.1.0" in capsys.readouterr().out
