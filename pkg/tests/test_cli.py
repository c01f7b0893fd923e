from __future__ import annotations

import csv
import hashlib
import json

import pytest

from invograph.cli import main

from conftest import T3_EDGES, T3_SCORES


@pytest.fixture
def t3_files(tmp_path):
    (tmp_path / "pairs.csv").write_text(
        "month,src_domain,dst_domain,count\n"
        + "".join(f"2016-01,{a},{b},{w}\n" for (a, b), w in sorted(T3_EDGES.items()))
    )
    (tmp_path / "cooccur.csv").write_text(
        "month,domain,n_clinton,n_trump\n" + "".join(f"2016-01,{d},100,100\n" for d in sorted(T3_SCORES))
    )
    (tmp_path / "spectrum.csv").write_text(
        "domain,p_c,p_t,score\n"
        + "".join(f"{d},{1 - s!r},{s!r},{s!r}\n" for d, s in sorted(T3_SCORES.items()))
    )
    return tmp_path


def t3_args(root, *extra):
    return [*extra, "--reply-pairs", str(root / "pairs.csv"), "--cooccur", str(root / "cooccur.csv"),
            "--spectrum", str(root / "spectrum.csv"), "--seed-domain", "a.com", "--edge-threshold", "1",
            "--engagement-threshold", "100", "--out-dir", str(root / "out")]


def rows(path):
    with open(path, newline="") as fh:
        return list(csv.reader(fh))


def test_build_graph_writes_edges_and_manifest(t3_files):
    assert main(t3_args(t3_files, "build-graph", "--months", "2016-01")) == 0
    out = t3_files / "out"
    assert rows(out / "graph_2016-01.csv")[0] == ["src", "dst", "weight"]
    assert len(rows(out / "graph_2016-01.csv")) == 6
    man = json.loads((out / "build-graph.manifest.json").read_text())
    assert set(man) == {"command", "config", "inputs", "outputs"}
    assert man["config"]["build"]["seed_domain"] == "a.com"
    digest = hashlib.sha256((t3_files / "pairs.csv").read_bytes()).hexdigest()
    assert {"path": str(t3_files / "pairs.csv"), "digest": "sha256:" + digest} in man["inputs"]
    assert sorted(man["outputs"]) == sorted(str(p) for p in out.iterdir() if not p.name.endswith("manifest.json"))


def test_crossing_analytic_t3(t3_files):
    assert main(t3_args(t3_files, "crossing", "--null", "analytic", "--weighted")) == 0
    table = rows(t3_files / "out" / "crossing_2016-01.csv")
    assert table[0] == ["y_lo", "y_hi", "f_right", "f_left", "f_right_null", "f_left_null"]
    (row,) = [r for r in table[1:] if float(r[0]) == float(r[1]) == 0.5]
    assert float(row[4]) == pytest.approx(1.5)


def test_crossing_analytic_needs_weight_mode(t3_files, capsys):
    assert main(t3_args(t3_files, "crossing", "--null", "analytic")) == 4
    err = capsys.readouterr().err.strip()
    assert "\n" not in err and "weighted" in err


def test_crossing_mc_writes_standard_errors(t3_files):
    assert main(t3_args(t3_files, "crossing", "--null", "mc", "--trials", "50")) == 0
    se = rows(t3_files / "out" / "crossing_2016-01_null_se.csv")
    assert se[0] == ["y_lo", "y_hi", "f_right_null_se", "f_left_null_se"]


def test_outlink_and_asymmetry_t3(t3_files):
    assert main(t3_args(t3_files, "outlink", "--svg")) == 0
    out = t3_files / "out"
    table = rows(out / "outlink_2016-01.csv")
    assert table[0] == ["domain", "score", "delta_out"]
    assert float(rows(out / "slopes.csv")[1][1]) == pytest.approx(-1 / 3)
    assert (out / "outlink_2016-01.svg").read_text().startswith("<svg")
    assert main(t3_args(t3_files, "asymmetry")) == 0
    r = {row[0]: float(row[2]) for row in rows(out / "asymmetry_2016-01.csv")[1:]}
    assert r["c.com"] == pytest.approx(0.6)


def test_edge_lengths_t3(t3_files):
    assert main(t3_args(t3_files, "edge-lengths", "--bins", "10")) == 0
    table = rows(t3_files / "out" / "edge_lengths_2016-01.csv")
    assert table[0] == ["bin_lo", "bin_hi", "mass"]
    assert sum(float(r[2]) for r in table[1:]) == 6


def test_rank_compare_default_table(tmp_path, capsys):
    assert main(["rank-compare", "--trials", "2000", "--out-dir", str(tmp_path)]) == 0
    assert "rho = 0.871" in capsys.readouterr().out
    summary = json.loads((tmp_path / "rank_compare.json").read_text())
    assert summary["sum_d2"] == 198 and summary["fraction_at_least"] == 0.0


def test_parse_error_exit_code(t3_files, capsys):
    (t3_files / "pairs.csv").write_text("month,src_domain,dst_domain,count\n2016-01,a.com,b.com,-1\n")
    assert main(t3_args(t3_files, "build-graph")) == 3
    err = capsys.readouterr().err
    assert err.count("\n") == 1 and "parse error" in err


def test_missing_seed_exit_code(t3_files, capsys):
    args = t3_args(t3_files, "build-graph")
    args[args.index("a.com")] = "nytimes.com"
    assert main(args) == 4
    assert "nytimes.com" in capsys.readouterr().err


def test_missing_file_exit_code(tmp_path):
    assert main(["user-trends", "--comments", str(tmp_path / "nope.jsonl"), "--out-dir", str(tmp_path)]) == 6


def test_synth_then_pipeline_is_byte_identical(tmp_path):
    def run(out):
        assert main(["synth", "--out-dir", str(out), "--n-domains", "15", "--months", "2016-01..2016-02",
                     "--homophily", "-4", "--comments"]) == 0
        common = ["--reply-pairs", str(out / "reply_pairs.csv"), "--cooccur", str(out / "cooccur.csv"),
                  "--retweets", str(out / "retweets.csv"), "--out-dir", str(out / "res")]
        for cmd in (["outlink"], ["crossing", "--null", "mc", "--trials", "20"],
                    ["align", "--month-pair", "2016-01,2016-02", "--trials", "20"]):
            assert main(cmd + common) == 0
        assert main(["user-trends", "--comments", str(out / "comments.jsonl"), "--trials", "5",
                     "--out-dir", str(out / "res")]) == 0
        return {p.name: p.read_bytes() for p in sorted((out / "res").iterdir()) if p.suffix == ".csv"}

    a, b = run(tmp_path / "a"), run(tmp_path / "b")
    assert a.keys() == b.keys() and len(a) >= 6
    assert a == b
