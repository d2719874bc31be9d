"""Active-learning loop contracts, driven against the real selection CLI.

The trainer is stubbed for speed; batch acquisition still goes through
an actual ``sentpick select-batch`` subprocess, exercising the file
formats end to end.
"""

import shutil

import pytest

from evalharness import al_loop, read_conll
from conftest import write_toy_corpus
import numpy as np

pytestmark = pytest.mark.skipif(
    shutil.which("sentpick") is None, reason="selection engine CLI not on PATH"
)


def _fake_trainer(pool_size):
    # Uncertainty grows with the sentence index, so alc acquisition is
    # predictable: highest remaining indices first.
    def trainer(subset_path, test_path):
        k = len(read_conll(subset_path))
        confidences = [
            [1.0 - (i + 1) / (2 * pool_size)] for i in range(pool_size)
        ]
        return float(min(100.0, 40.0 + k)), confidences

    return trainer


@pytest.fixture
def pool(tmp_path):
    rng = np.random.default_rng(13)
    write_toy_corpus(tmp_path / "pool.conll", rng, 15)
    write_toy_corpus(tmp_path / "test.conll", rng, 5)
    return tmp_path


class TestLoopContracts:
    def test_pool_growth_and_nesting(self, pool):
        points = al_loop(
            "alc",
            pool / "pool.conll",
            pool / "test.conll",
            iterations=3,
            batch=3,
            seed=1,
            workdir=pool / "work",
            trainer=_fake_trainer(15),
        )
        assert [p.k for p in points] == [3, 6, 9]
        labeled_files = sorted((pool / "work").glob("labeled_k*.txt"))
        pools = [
            [int(x) for x in f.read_text().splitlines()] for f in labeled_files
        ]
        assert [len(p) for p in pools] == [3, 6]
        assert set(pools[0]) < set(pools[1])
        assert all(len(set(p)) == len(p) for p in pools)

    def test_exclude_file_equals_current_pool(self, pool):
        al_loop(
            "alc",
            pool / "pool.conll",
            pool / "test.conll",
            iterations=2,
            batch=4,
            seed=2,
            workdir=pool / "work",
            trainer=_fake_trainer(15),
        )
        subset = read_conll(pool / "work" / "pool_k4.conll")
        exclude = (pool / "work" / "labeled_k4.txt").read_text().splitlines()
        assert len(subset) == 4
        assert len(exclude) == 4

    def test_alc_acquires_most_uncertain(self, pool):
        al_loop(
            "alc",
            pool / "pool.conll",
            pool / "test.conll",
            iterations=2,
            batch=3,
            seed=3,
            workdir=pool / "work",
            trainer=_fake_trainer(15),
        )
        batch_file = next((pool / "work").glob("batch_k3.txt"))
        picked = [int(x) for x in batch_file.read_text().splitlines()]
        initial = [
            int(x) for x in (pool / "work" / "labeled_k3.txt").read_text().splitlines()
        ]
        expected = [i for i in range(14, -1, -1) if i not in initial][:3]
        assert sorted(picked) == sorted(expected)

    def test_alr_is_seeded_and_reproducible(self, pool):
        kwargs = dict(
            iterations=2, batch=3, seed=5, trainer=_fake_trainer(15)
        )
        a = al_loop("alr", pool / "pool.conll", pool / "test.conll",
                    workdir=pool / "work_a", **kwargs)
        b = al_loop("alr", pool / "pool.conll", pool / "test.conll",
                    workdir=pool / "work_b", **kwargs)
        batches_a = sorted((pool / "work_a").glob("batch_k*.txt"))
        batches_b = sorted((pool / "work_b").glob("batch_k*.txt"))
        for fa, fb in zip(batches_a, batches_b):
            assert fa.read_bytes() == fb.read_bytes()
        assert [p.f1 for p in a] == [p.f1 for p in b]

    def test_selector_failure_names_iteration(self, pool):
        with pytest.raises(RuntimeError, match="iteration 0"):
            al_loop(
                "alc",
                pool / "pool.conll",
                pool / "test.conll",
                iterations=2,
                batch=3,
                seed=1,
                workdir=pool / "work",
                selector_cmd=("false",),
                trainer=_fake_trainer(15),
            )

    def test_pool_too_small_rejected(self, pool):
        with pytest.raises(ValueError, match="exceeds pool size"):
            al_loop(
                "alc",
                pool / "pool.conll",
                pool / "test.conll",
                iterations=10,
                batch=10,
                seed=1,
                workdir=pool / "work",
                trainer=_fake_trainer(15),
            )

    def test_unknown_strategy_rejected(self, pool):
        with pytest.raises(ValueError, match="unknown acquisition strategy"):
            al_loop(
                "mystery",
                pool / "pool.conll",
                pool / "test.conll",
                iterations=1,
                batch=3,
                seed=1,
                workdir=pool / "work",
                trainer=_fake_trainer(15),
            )
