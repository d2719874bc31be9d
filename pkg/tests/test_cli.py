import json
import subprocess
import sys

import numpy as np
import pytest

from sentpick import read_ranking
from sentpick.cli import main
from sentpick.selector import read_index_list, write_index_list, write_uncertainties
from sentpick.selector import UncertaintyRecord
from conftest import write_instance


@pytest.fixture
def instance_dir(tmp_path):
    rng = np.random.default_rng(50)
    write_instance(tmp_path, rng, n=30, d=3)
    return tmp_path


def _rank_args(instance_dir, strategy, *extra):
    return [
        "rank",
        "--strategy", strategy,
        "--corpus", str(instance_dir / "corpus.conll"),
        "--embeddings", str(instance_dir / "emb.txt"),
        "--output", str(instance_dir / f"ranking_{strategy}.tsv"),
        *extra,
    ]


class TestRankCommand:
    @pytest.mark.parametrize(
        "strategy,extra",
        [
            ("ratio-penalty", ()),
            ("coverage", ()),
            ("linear-penalty", ("--alpha", "0.5")),
            ("random", ("--seed", "7")),
            ("length", ()),
        ],
    )
    def test_all_strategies(self, instance_dir, strategy, extra, capsys):
        assert main(_rank_args(instance_dir, strategy, *extra)) == 0
        ranking = read_ranking(instance_dir / f"ranking_{strategy}.tsv")
        assert ranking.strategy == strategy
        assert ranking.n == 30
        assert "wrote" in capsys.readouterr().out

    def test_embeddings_required_for_geometry(self, instance_dir, capsys):
        argv = [
            "rank", "--strategy", "ratio-penalty",
            "--corpus", str(instance_dir / "corpus.conll"),
            "--output", str(instance_dir / "r.tsv"),
        ]
        assert main(argv) == 2
        assert "requires --embeddings" in capsys.readouterr().err

    def test_seed_rejected_for_deterministic(self, instance_dir, capsys):
        assert main(_rank_args(instance_dir, "coverage", "--seed", "3")) == 2
        assert "deterministic" in capsys.readouterr().err

    def test_alpha_required_for_linear(self, instance_dir, capsys):
        assert main(_rank_args(instance_dir, "linear-penalty")) == 2
        assert "--alpha" in capsys.readouterr().err

    def test_random_requires_seed(self, instance_dir, capsys):
        assert main(_rank_args(instance_dir, "random")) == 2
        assert "--seed" in capsys.readouterr().err

    def test_lean_mode_identical_output(self, instance_dir):
        main(_rank_args(instance_dir, "ratio-penalty"))
        full = (instance_dir / "ranking_ratio-penalty.tsv").read_bytes()
        main(_rank_args(instance_dir, "ratio-penalty", "--lean"))
        assert (instance_dir / "ranking_ratio-penalty.tsv").read_bytes() == full

    def test_tagless_plain_lines_pool_is_rankable(self, tmp_path):
        (tmp_path / "pool.txt").write_text("find thai food\ncheap sushi downtown\nbest late night pizza\n")
        (tmp_path / "pool.emb").write_text("3 2\n0 0\n1 0\n5 5\n")
        out = tmp_path / "r.tsv"
        argv = [
            "rank", "--strategy", "ratio-penalty",
            "--corpus", str(tmp_path / "pool.txt"), "--format", "plain-lines",
            "--embeddings", str(tmp_path / "pool.emb"),
            "--output", str(out),
        ]
        assert main(argv) == 0
        assert read_ranking(out).n == 3

    def test_mismatched_pair_fails(self, instance_dir, capsys):
        (instance_dir / "emb_bad.txt").write_text("2 2\n0 0\n1 1\n")
        argv = [
            "rank", "--strategy", "coverage",
            "--corpus", str(instance_dir / "corpus.conll"),
            "--embeddings", str(instance_dir / "emb_bad.txt"),
            "--output", str(instance_dir / "r.tsv"),
        ]
        assert main(argv) == 2
        assert "30 sentences" in capsys.readouterr().err


class TestSelectBatchCommand:
    def _write_inputs(self, tmp_path, us, exclude=()):
        upath = tmp_path / "u.jsonl"
        write_uncertainties(
            [UncertaintyRecord(index=i, token_probs=(1.0 - u,)) for i, u in enumerate(us)],
            upath,
        )
        epath = tmp_path / "exclude.txt"
        write_index_list(exclude, epath)
        return upath, epath

    def test_alc(self, tmp_path):
        upath, epath = self._write_inputs(tmp_path, [0.1, 0.9, 0.5])
        out = tmp_path / "picked.txt"
        argv = [
            "select-batch", "--strategy", "alc",
            "--uncertainty", str(upath), "--exclude", str(epath),
            "--batch", "2", "--output", str(out),
        ]
        assert main(argv) == 0
        assert read_index_list(out) == [1, 2]

    def test_alr_deterministic(self, tmp_path):
        upath, epath = self._write_inputs(tmp_path, [0.2, 0.3, 0.5])
        out1, out2 = tmp_path / "p1.txt", tmp_path / "p2.txt"
        base = [
            "select-batch", "--strategy", "alr",
            "--uncertainty", str(upath), "--exclude", str(epath),
            "--batch", "2", "--seed", "11",
        ]
        assert main(base + ["--output", str(out1)]) == 0
        assert main(base + ["--output", str(out2)]) == 0
        assert out1.read_bytes() == out2.read_bytes()

    def test_alr_requires_seed(self, tmp_path, capsys):
        upath, epath = self._write_inputs(tmp_path, [0.5, 0.5])
        argv = [
            "select-batch", "--strategy", "alr",
            "--uncertainty", str(upath), "--exclude", str(epath),
            "--batch", "1", "--output", str(tmp_path / "p.txt"),
        ]
        assert main(argv) == 2
        assert "--seed" in capsys.readouterr().err

    def test_exclusion_respected(self, tmp_path):
        upath, epath = self._write_inputs(tmp_path, [0.1, 0.9, 0.5], exclude=[1])
        out = tmp_path / "picked.txt"
        argv = [
            "select-batch", "--strategy", "alc",
            "--uncertainty", str(upath), "--exclude", str(epath),
            "--batch", "1", "--output", str(out),
        ]
        assert main(argv) == 0
        assert read_index_list(out) == [2]


class TestStatsCommand:
    def test_reports_geometry(self, instance_dir, capsys):
        argv = [
            "stats",
            "--embeddings", str(instance_dir / "emb.txt"),
            "--corpus", str(instance_dir / "corpus.conll"),
            "--neighbors-of", "0", "--top", "3",
        ]
        assert main(argv) == 0
        out = capsys.readouterr().out
        assert "n=30" in out
        assert "d=3" in out
        assert "beta=" in out
        assert "offdiag_sim mean=" in out
        assert "neighbors of 0:" in out
        neighbor_rows = [l for l in out.splitlines() if l.startswith(("1\t", "2\t", "3\t"))]
        assert len(neighbor_rows) == 3


class TestRunCommand:
    def test_run_and_override_output(self, instance_dir, capsys):
        config = {
            "corpus": "corpus.conll",
            "embeddings": "emb.txt",
            "strategies": [{"name": "coverage"}, {"name": "random", "seed": 3}],
            "k_grid": [5, 10],
            "output_dir": "out",
        }
        cfg = instance_dir / "config.json"
        cfg.write_text(json.dumps(config))
        override = instance_dir / "elsewhere"
        assert main(["run", "--config", str(cfg), "--output-dir", str(override)]) == 0
        assert (override / "manifest.json").exists()
        assert len(list(override.glob("subset_*.conll"))) == 4

    def test_error_names_stage(self, instance_dir, capsys):
        config = {
            "corpus": "missing.conll",
            "embeddings": "emb.txt",
            "strategies": ["coverage"],
            "k_grid": [5],
            "output_dir": "out",
        }
        cfg = instance_dir / "config.json"
        cfg.write_text(json.dumps(config))
        assert main(["run", "--config", str(cfg)]) == 2
        assert "stage load-corpus" in capsys.readouterr().err


class TestProjectionCommand:
    def test_export(self, instance_dir):
        main(_rank_args(instance_dir, "ratio-penalty"))
        main(_rank_args(instance_dir, "coverage"))
        out = instance_dir / "proj.tsv"
        argv = [
            "export-projection",
            "--embeddings", str(instance_dir / "emb.txt"),
            "--rankings",
            str(instance_dir / "ranking_ratio-penalty.tsv"),
            str(instance_dir / "ranking_coverage.tsv"),
            "--top", "5", "--output", str(out),
        ]
        assert main(argv) == 0
        rows = out.read_text().splitlines()
        assert len(rows) == 1 + 30


def test_console_entrypoint_runs():
    result = subprocess.run(
        [sys.executable, "-m", "sentpick.cli", "--version"],
        capture_output=True, text=True,
    )
    assert result.returncode == 0
    assert "sentpick" in result.stdout
