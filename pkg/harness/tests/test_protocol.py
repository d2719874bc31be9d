"""Protocol driver integration on a toy domain (real training, tiny model)."""

import shutil

import pytest

from evalharness import CurvePoint, directional_report, ranking_curve, summarize
from evalharness.cli import main, parse_k_grid
from evalharness.curves import write_points
from evalharness.protocol import MIT_RESTAURANT_REFERENCE, domain_paths

needs_selector = pytest.mark.skipif(
    shutil.which("sentpick") is None, reason="selection engine CLI not on PATH"
)


class TestKGridParsing:
    def test_range_with_default_step(self):
        assert parse_k_grid("10..100") == [10, 20, 30, 40, 50, 60, 70, 80, 90, 100]

    def test_range_with_step(self):
        assert parse_k_grid("5..20:5") == [5, 10, 15, 20]

    def test_comma_list(self):
        assert parse_k_grid("3,7,11") == [3, 7, 11]

    def test_bad_grid_rejected(self):
        with pytest.raises(ValueError):
            parse_k_grid("0..10")


class TestDomainLayout:
    def test_missing_files_reported(self, tmp_path):
        with pytest.raises(ValueError, match="missing"):
            domain_paths(tmp_path)

    def test_complete_domain(self, toy_domain):
        train, test, emb = domain_paths(toy_domain)
        assert train.exists() and test.exists() and emb.exists()


@needs_selector
class TestRankingCurve:
    def test_deterministic_strategy_one_point_per_k(self, toy_domain, tiny_config):
        tiny_config.max_epochs = 8
        tiny_config.patience = 8
        points = ranking_curve(
            "ratio-penalty", toy_domain, [5, 10], reps=1,
            cfg=tiny_config, workdir=toy_domain / "work",
        )
        assert [(p.strategy, p.k) for p in points] == [
            ("ratio-penalty", 5), ("ratio-penalty", 10),
        ]
        assert all(0.0 <= p.f1 <= 100.0 for p in points)

    def test_random_strategy_reps(self, toy_domain, tiny_config):
        tiny_config.max_epochs = 6
        tiny_config.patience = 6
        points = ranking_curve(
            "random", toy_domain, [5], reps=2,
            cfg=tiny_config, workdir=toy_domain / "work_rand",
        )
        assert [(p.strategy, p.k) for p in points] == [("random", 5), ("random", 5)]
        assert {p.seed for p in points} == {0, 1}
        rows = summarize(points)
        assert rows[0].reps == 2


class TestReport:
    def test_directional_report_contents(self):
        points = [
            CurvePoint("ratio-penalty", 10, None, 30.0),
            CurvePoint("ratio-penalty", 20, None, 45.0),
            CurvePoint("alr", 10, 0, 20.0),
            CurvePoint("alr", 20, 0, 40.0),
            CurvePoint("random", 10, 0, 22.0),
            CurvePoint("random", 20, 0, 41.0),
            CurvePoint("alc", 10, 0, 15.0),
            CurvePoint("alc", 20, 0, 35.0),
        ]
        text = directional_report(points, MIT_RESTAURANT_REFERENCE)
        assert "ratio-penalty vs alr: mean gap +7.50" in text
        assert "relative improvement at k=10: +50.0%" in text
        assert "alc vs random: mean gap -6.50" in text
        assert "rps_minus_alr_mean_gap = 6.0" in text

    def test_report_cli(self, tmp_path, capsys):
        points = [
            CurvePoint("ratio-penalty", 10, None, 30.0),
            CurvePoint("random", 10, 0, 25.0),
        ]
        path = tmp_path / "points.tsv"
        write_points(points, path)
        assert main(["report", "--points", str(path)]) == 0
        assert "ratio-penalty vs random" in capsys.readouterr().out


class TestRenderCli:
    def test_curve_render(self, tmp_path):
        points = [
            CurvePoint("random", 10, 0, 50.0),
            CurvePoint("random", 10, 1, 54.0),
            CurvePoint("random", 20, 0, 60.0),
            CurvePoint("random", 20, 1, 62.0),
        ]
        src = tmp_path / "points.tsv"
        write_points(points, src)
        out = tmp_path / "rendered"
        assert main(["curve-render", "--points", str(src), "--output-dir", str(out)]) == 0
        assert (out / "curves.tsv").exists()
        assert (out / "curves.png").stat().st_size > 1000


class TestTrainCli:
    def test_train_and_emit(self, toy_domain, tmp_path, capsys):
        out = tmp_path / "u.jsonl"
        argv = [
            "train",
            "--train", str(toy_domain / "train.conll"),
            "--test", str(toy_domain / "test.conll"),
            "--word-dim", "8", "--char-dim", "4",
            "--word-hidden", "8", "--char-hidden", "4",
            "--epochs", "2", "--patience", "2", "--no-glove",
            "--emit-uncertainty", str(out),
        ]
        assert main(argv) == 0
        captured = capsys.readouterr().out
        assert "best_f1=" in captured
        assert out.exists()
        assert len(out.read_text().splitlines()) == 30
