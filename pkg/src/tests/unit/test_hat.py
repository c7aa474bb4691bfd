import pytest
import numpy as np
from src.cpustream.hoeffding import HatTree, HoeffdingTree, TreeParams
from src.cpustream.data.Synthetic import step_function_dataset, concept_flip_dataset


def final_mae(tree, dataset, tail: int) -> float:
    errors = []
    for x, y in dataset.rows():
        errors.append(abs(tree.predict_one(x) - y))
        tree.learn_one(x, y)
    return float(np.mean(errors[-tail:]))


class TestHatTree:
    """Tests for HatTree"""

    def test_stationary_matches_ht(self):
        """Test HAT predicts exactly like HT while nothing is replaced"""
        dataset = step_function_dataset(5000, seed=0)
        ht, hat = HoeffdingTree(2), HatTree(2)
        for x, y in dataset.rows():
            assert hat.predict_one(x) == ht.predict_one(x)
            ht.learn_one(x, y)
            hat.learn_one(x, y)
        assert hat.n_replacements == 0

    def test_replacement_never_grows_tree(self):
        """Test node count does not increase at a replacement"""
        dataset = concept_flip_dataset(12_000, seed=1, flip_at=6000)
        hat = HatTree(2)
        for x, y in dataset.rows():
            before_nodes, before_replacements = hat.node_count, hat.n_replacements
            hat.learn_one(x, y)
            if hat.n_replacements > before_replacements:
                assert hat.node_count <= before_nodes
        assert hat.n_replacements >= 1

    @pytest.mark.parametrize("seed", [0, 1, 2])
    def test_adapts_after_flip(self, seed):
        """Test HAT beats HT after the concept inverts"""
        dataset = concept_flip_dataset(16_000, seed=seed, flip_at=8000)
        assert final_mae(HatTree(2), dataset, 4000) < final_mae(HoeffdingTree(2), dataset, 4000)

    def test_bootstrap_is_seeded(self):
        """Test bootstrap sampling is reproducible for a seed"""
        dataset = step_function_dataset(2000, seed=3)

        def build(seed):
            tree = HatTree(2, TreeParams(grace_period=50), bootstrap_sampling=True, seed=seed)
            for x, y in dataset.rows():
                tree.learn_one(x, y)
            return tree

        assert build(5).to_snapshot() == build(5).to_snapshot()
        assert build(5).to_snapshot() != build(6).to_snapshot()

    def test_snapshot_records_detectors(self):
        """Test split nodes carry their detector state"""
        tree = HatTree(2)
        for x, y in step_function_dataset(1000, seed=4).rows():
            tree.learn_one(x, y)
        root = tree.to_snapshot()["root"]
        assert root["kind"] == "split"
        assert root["detector"]["kind"] == "adwin"
        assert 0 < root["detector"]["n"] <= 800


@pytest.mark.slow
class TestHatDrift:
    """Full-size concept-flip comparison"""

    def test_flip_over_twenty_seeds(self):
        """Test HAT's final-5000 MAE is below HT's after a flip at 20,000"""
        hat_mae, ht_mae = [], []
        for seed in range(20):
            dataset = concept_flip_dataset(40_000, seed=seed, flip_at=20_000)
            hat_mae.append(final_mae(HatTree(2), dataset, 5000))
            ht_mae.append(final_mae(HoeffdingTree(2), dataset, 5000))
        assert np.mean(hat_mae) < np.mean(ht_mae)
        assert sum(h < t for h, t in zip(hat_mae, ht_mae)) >= 18
