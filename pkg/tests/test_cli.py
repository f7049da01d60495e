"""Command-line interface: subcommands, JSON/CSV output, determinism, exits."""

import json
import os
import subprocess
import sys
from pathlib import Path

import pytest

from sslab.graphs import complete_bipartite, split_graph, star, write_edge_list

DATA = Path(__file__).parent / "data"


def run_cli(*args, threads=None):
    env = dict(os.environ)
    env.pop("SSLAB_THREADS", None)
    if threads is not None:
        env["SSLAB_THREADS"] = str(threads)
    return subprocess.run(
        [sys.executable, "-m", "sslab.cli", *args],
        capture_output=True,
        text=True,
        env=env,
    )


@pytest.fixture()
def split_file(tmp_path):
    p = tmp_path / "split.txt"
    p.write_text(write_edge_list(split_graph(2, 60)))
    return str(p)


class TestGen:
    def test_split_gen_pins_size(self, tmp_path):
        r = run_cli("gen", "--family", "split", "--k", "2", "--m", "101")
        assert r.returncode == 0
        assert r.stdout.startswith("# n=52\n")
        assert r.stdout.count("\n") == 102  # header + 101 edges

    def test_gen_to_file_roundtrip(self, tmp_path):
        out = tmp_path / "g.txt"
        r = run_cli("gen", "--family", "gnm", "--n", "10", "--m", "15",
                    "--seed", "3", "--out", str(out))
        assert r.returncode == 0
        from sslab import read_edge_list, sample_gnm

        assert read_edge_list(out.read_text()) == sample_gnm(10, 15, 3)

    def test_gnm_requires_seed(self):
        r = run_cli("gen", "--family", "gnm", "--n", "10", "--m", "15")
        assert r.returncode == 2
        assert "seed" in r.stderr

    def test_unknown_family(self):
        r = run_cli("gen", "--family", "mystery", "--n", "4")
        assert r.returncode == 2


class TestSpectral:
    def test_fields_and_determinism(self, split_file):
        r1 = run_cli("spectral", "--in", split_file)
        r2 = run_cli("spectral", "--in", split_file)
        assert r1.returncode == 0
        assert r1.stdout == r2.stdout
        obj = json.loads(r1.stdout)
        assert obj["schema"] == "sslab.report.v1"
        assert obj["kind"] == "spectral"
        assert obj["m"] == 60
        assert obj["residual_below_tol"] is True
        assert list(obj) == sorted(obj)
        assert not any("time" in k for k in obj)

    def test_missing_input(self):
        r = run_cli("spectral")
        assert r.returncode == 2
        r = run_cli("spectral", "--in", "/nonexistent/file.txt")
        assert r.returncode == 2


class TestHomAndCheck:
    def test_hom_consistency(self, split_file):
        r = run_cli("hom", "--in", split_file, "--pattern", "c2t", "--t", "2")
        obj = json.loads(r.stdout)
        assert obj["hom"] >= obj["inj"] >= 0
        assert obj["aut"] == 8
        assert obj["copies"] == obj["inj"] // 8

    def test_check_passes_on_split_host(self, split_file):
        r = run_cli("check", "--in", split_file, "--pattern", "ktt", "--t", "2")
        assert r.returncode == 0
        obj = json.loads(r.stdout)
        assert obj["holds_i"] and obj["holds_ii"] and obj["holds_cert"]

    def test_check_tree_pattern(self, split_file):
        r = run_cli("check", "--in", split_file, "--pattern", "path", "--pn", "3")
        obj = json.loads(r.stdout)
        assert obj["spectral_forms_applicable"] is False
        assert r.returncode == 0

    def test_check_custom_pattern_file(self, split_file, tmp_path):
        pf = tmp_path / "pat.txt"
        pf.write_text(write_edge_list(complete_bipartite(2, 2)))
        r = run_cli("check", "--in", split_file, "--pattern", "custom",
                    "--pattern-file", str(pf))
        assert r.returncode == 0

    def test_non_bipartite_pattern_is_domain_error(self, split_file, tmp_path):
        from sslab.graphs import complete

        pf = tmp_path / "tri.txt"
        pf.write_text(write_edge_list(complete(3)))
        r = run_cli("check", "--in", split_file, "--pattern", "custom",
                    "--pattern-file", str(pf))
        assert r.returncode == 2


class TestPipelineCommands:
    def test_prune_reports_trace(self, split_file):
        r = run_cli("prune", "--in", split_file, "--t", "2")
        obj = json.loads(r.stdout)
        assert obj["kind"] == "prune"
        assert obj["initial_m"] == 60
        assert obj["final_m"] + len(obj["steps"]) == 60

    def test_prune_requires_t(self, split_file):
        assert run_cli("prune", "--in", split_file).returncode == 2

    def test_partition_too_delocalized_is_clean(self, tmp_path):
        from sslab.graphs import cycle

        p = tmp_path / "cyc.txt"
        p.write_text(write_edge_list(cycle(40)))
        r = run_cli("partition", "--in", str(p), "--t", "2", "--eta", "0.1")
        assert r.returncode == 0
        obj = json.loads(r.stdout)
        assert obj["error"] == "too-delocalized"

    def test_rowcover_explicit_sides(self, tmp_path):
        p = tmp_path / "k25.txt"
        p.write_text(write_edge_list(complete_bipartite(2, 5)))
        r = run_cli("rowcover", "--in", str(p), "--t", "2",
                    "--a-side", "0,1", "--d-side", "2,3,4,5,6")
        obj = json.loads(r.stdout)
        assert obj["variant"] == "many-copies"
        assert obj["copy_bound"] == 10

    def test_regularize(self, tmp_path):
        p = tmp_path / "p3.txt"
        p.write_text(write_edge_list(star(2)))
        r = run_cli("regularize", "--in", str(p), "--k", "4", "--materialize")
        obj = json.loads(r.stdout)
        assert obj["d_k"] == 2 and obj["t_k_size"] == 12
        assert obj["fk_vertices"] == 12
        assert abs(obj["entropy_gap"] - obj["log_lambda"]) < 1e-9

    def test_pipeline(self, split_file):
        r1 = run_cli("pipeline", "--in", split_file, "--t", "2", "--pattern", "ktt")
        r2 = run_cli("pipeline", "--in", split_file, "--t", "2", "--pattern", "ktt")
        assert r1.returncode == 0 and r1.stdout == r2.stdout
        obj = json.loads(r1.stdout)
        assert obj["above_threshold"] is True
        assert obj["count"] > 0
        assert "elapsed" not in r1.stdout


class TestSweep:
    ARGS = (
        "sweep", "--pattern", "c2t", "--t", "2", "--m-range", "50:150:50",
        "--samples", "2", "--seed", "7", "--families", "gnm-balanced,split-t",
    )

    def test_matches_golden_across_threads(self):
        golden = (DATA / "golden_sweep.csv").read_text()
        for threads in (1, 4):
            r = run_cli(*self.ARGS, threads=threads)
            assert r.returncode == 0
            assert r.stdout == golden

    def test_header_pinned(self):
        golden = (DATA / "golden_sweep.csv").read_text()
        assert golden.splitlines()[0] == (
            "schema,family,pattern,t,m,sample,seed,n,lambda,split_lambda,"
            "above_threshold,count,count_over_mt,sharp_constant,expected"
        )

    def test_budget_guard(self):
        r = run_cli("sweep", "--pattern", "ktt", "--t", "8",
                    "--m-range", "5000:5000:1", "--seed", "1")
        assert r.returncode == 2
        assert "--force" in r.stderr

    def test_bad_range(self):
        r = run_cli("sweep", "--pattern", "c2t", "--t", "2",
                    "--m-range", "50-150", "--seed", "1")
        assert r.returncode == 2
        r = run_cli("sweep", "--pattern", "c2t", "--t", "2",
                    "--m-range", "50:150:0", "--seed", "1")
        assert r.returncode == 2

    def test_requires_seed(self):
        r = run_cli("sweep", "--pattern", "c2t", "--t", "2", "--m-range", "50:50:1")
        assert r.returncode == 2


class TestParsing:
    def test_unknown_subcommand(self):
        assert run_cli("frobnicate").returncode == 2

    def test_console_script_installed(self):
        r = subprocess.run(["sslab", "gen", "--family", "star", "--n", "3"],
                           capture_output=True, text=True)
        assert r.returncode == 0
        assert r.stdout.startswith("# n=4")
