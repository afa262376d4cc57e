import csv
import io
import json

import pytest

from nilcover import acceptance
from nilcover.cli import EXIT_FAIL, EXIT_OK, EXIT_RESOURCE, EXIT_USAGE, RunConfig, build_parser, run
from nilcover.lie_families import load


def call(capsys, *argv):
    code = run(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def js(capsys, *argv):
    code, out, err = call(capsys, *argv)
    assert code == EXIT_OK, err
    return json.loads(out)


def test_examples(capsys):
    assert js(capsys, "omega", "formula", "PGL2", "4", "inf")["value"] == 21
    d = js(capsys, "omega", "exact", "Sz", "2", "1")
    assert d["value"] == 6 and d["method"] == "brute"
    assert d["certificate_sizes"] == {"independent_set": 6, "cover": 6}
    d = js(capsys, "ppd", "2", "6")
    assert d["value"] is None and d["reason"] == "zsigmondy-exception"
    assert js(capsys, "ppd", "2", "4")["value"] == 5


def test_certified_method_and_witness(capsys):
    d = js(capsys, "omega", "exact", "PGL2", "5", "1", "--strategy", "certify", "--witness")
    assert d["method"] == "certified" and d["value"] == 31 and len(d["independent_set"]) == 31
    d = js(capsys, "omega", "formula", "SU3", "2", "1")
    assert d["value"] == 10 and d["direct_value"] == 31


def test_usage_errors(capsys):
    assert call(capsys, "bogus")[0] == EXIT_USAGE
    assert call(capsys, "omega", "formula", "XX", "4", "1")[0] == EXIT_USAGE
    assert call(capsys, "omega", "exact", "Sz", "4", "1")[0] == EXIT_USAGE
    assert call(capsys, "omega", "formula", "PGL2", "4", "0")[0] == EXIT_USAGE
    assert call(capsys, "field", "info", "4", "1")[0] == EXIT_USAGE
    assert call(capsys, "ppd", "1", "3")[0] == EXIT_USAGE
    assert call(capsys, "--threads", "0", "ppd", "2", "3")[0] == EXIT_USAGE
    assert call(capsys, "cover", "build", "PGL2", "5", "1", "--mode", "count")[0] == EXIT_USAGE


def test_resource_caps(capsys):
    code, _, err = call(capsys, "group", "build", "PGL2", "16")
    assert code == EXIT_RESOURCE and "cap" in err
    code, _, err = call(capsys, "graph", "metrics", "Sz", "8", "inf")
    assert code == EXIT_RESOURCE


def test_partial_bounds_on_timeout(capsys, monkeypatch):
    from nilcover import nilgraph
    real = nilgraph.mis_omega

    def starved(G, c, timeout=None, family="", q=0):
        res = real(G, c, timeout, family, q)
        res.value, res.upper = None, res.upper + 5
        return res

    monkeypatch.setattr(nilgraph, "mis_omega", starved)
    monkeypatch.setattr(nilgraph, "neighbourhood_cover", None, raising=False)
    from nilcover import covers
    monkeypatch.setattr(covers, "verify_2minimal", lambda cv, search=True: type("C", (), {"ok": False})())
    code, out, err = call(capsys, "omega", "exact", "Sz", "2", "1", "--strategy", "mis")
    assert code == EXIT_RESOURCE
    d = json.loads(out)
    assert "value" not in d and d["bounds"] == [6, 11]


def test_formats(capsys):
    code, out, _ = call(capsys, "omega", "formula", "Ree", "27", "2", "--format", "csv")
    assert code == EXIT_OK
    rows = list(csv.DictReader(io.StringIO(out)))
    assert rows[0]["value"] == "402026017" and rows[0]["family"] == "Ree"
    code, out, _ = call(capsys, "--format", "text", "field", "info", "2", "3")
    assert "order: 8" in out.splitlines()
    code, out, _ = call(capsys, "classes", "analyze", "PGL2", "3", "--format", "csv")
    assert len(list(csv.DictReader(io.StringIO(out)))) == 4


def test_cover_graph_group_outputs(tmp_path, capsys):
    path = tmp_path / "cover.json"
    d = js(capsys, "cover", "build", "PGL2", "7", "inf", "--json", str(path))
    assert d["size"] == 57 and d["certificate"]["ok"]
    assert json.loads(path.read_text())["size"] == 57
    d = js(capsys, "cover", "build", "SU3", "5", "1", "--mode", "count")
    assert d["size"] == 19027 and d["counts_match_formulas"]
    d = js(capsys, "cover", "build", "ReeSylowP", "27", "2")
    assert d["size"] == 402026017
    dim = tmp_path / "g.dimacs"
    d = js(capsys, "graph", "export", "Sz", "2", "1", "--out", str(dim))
    assert dim.read_text().splitlines()[1] == f"p edge 20 {d['edges']}"
    code, out, _ = call(capsys, "graph", "export", "PGL2", "2", "inf")
    assert out.startswith("c Gamma_inf graph")
    d = js(capsys, "graph", "metrics", "PGL2", "3", "1")
    assert d["independence_number"] == 10
    dump = tmp_path / "g.ncg"
    d = js(capsys, "group", "build", "SU3", "2", "--dump", str(dump))
    assert d["order"] == 216 and d["center"] == 3
    assert load(dump).spec.family == "SU3"


def test_sylow_and_classes(capsys):
    d = js(capsys, "sylow", "SL2", "7", "7", "--bound", "3")
    assert d["count"] == 8 and d["lower_bound_set"]["size"] == 36 and d["lower_bound_set"]["verified"]
    d = js(capsys, "classes", "analyze", "PSL2", "7", "--ratio")
    assert d["max_ratio"] == "1/2" and d["conjecture_holds"]
    assert call(capsys, "classes", "analyze", "SL2", "5", "--ratio")[0] == EXIT_USAGE
    d = js(capsys, "classes", "analyze", "SL2", "5", "--ratio", "--override")
    assert d["max_ratio"] is not None


def test_run_config_precedence(tmp_path, monkeypatch):
    cfgfile = tmp_path / "cfg.json"
    cfgfile.write_text(json.dumps({"threads": 3, "mis_timeout_ms": 500, "output_format": "csv"}))
    ap = build_parser()
    monkeypatch.delenv("NILCOVER_THREADS", raising=False)
    cfg = RunConfig.from_args(ap.parse_args(["--config", str(cfgfile), "ppd", "2", "3"]))
    assert (cfg.threads, cfg.timeout, cfg.output_format) == (3, 0.5, "csv")
    cfg = RunConfig.from_args(ap.parse_args(["--config", str(cfgfile), "--threads", "5", "ppd", "2", "3"]))
    assert cfg.threads == 5
    monkeypatch.setenv("NILCOVER_THREADS", "7")
    cfg = RunConfig.from_args(ap.parse_args(["--threads", "5", "ppd", "2", "3", "--format", "text"]))
    assert cfg.threads == 7 and cfg.output_format == "text"
    with pytest.raises(ValueError):
        RunConfig(threads=1, closure_cap=0)


def test_deterministic_output(capsys):
    runs = []
    for _ in range(2):
        d = js(capsys, "omega", "exact", "PGU3", "2", "1", "--witness")
        d.pop("elapsed_ms")
        runs.append(d)
    assert runs[0] == runs[1]


def test_verify_all_exit_codes(capsys, monkeypatch):
    good = [acceptance.Claim(0, "one", None, lambda: (1, 1))]
    bad = good + [acceptance.Claim(0, "two", None, lambda: (1, 2))]
    monkeypatch.setattr(acceptance, "all_claims", lambda extended=True: good)
    code, out, err = call(capsys, "verify-all")
    assert code == EXIT_OK and "[PASS] criterion 0" in err
    assert json.loads(out)[0]["passed"] is True
    monkeypatch.setattr(acceptance, "all_claims", lambda extended=True: bad)
    code, out, err = call(capsys, "verify-all", "--skip-extended")
    assert code == EXIT_FAIL and "[FAIL] criterion 0" in err
