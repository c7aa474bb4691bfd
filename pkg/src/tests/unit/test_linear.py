import pytest
import numpy as np
from src.cpustream.linear import (
    RunningScaler,
    scaler_transform,
    SGDRegressor,
    PassiveAggressiveRegressor,
)
from src.cpustream.data.Synthetic import linear_dataset
from src.cpustream.errors import NumericError, ValidationError


def prequential_predictions(model, dataset) -> np.ndarray:
    predictions = []
    for x, y in dataset.rows():
        predictions.append(model.predict_one(x))
        model.learn_one(x, y)
    return np.array(predictions)


class TestRunningScaler:
    """Tests for the running standardizer"""

    def test_first_call_is_zero(self):
        """Test the first observation standardizes to zeros"""
        scaler = RunningScaler(3)
        assert scaler_transform(scaler, [5.0, -2.0, 100.0]).tolist() == [0.0, 0.0, 0.0]

    def test_constant_stream(self):
        """Test a constant stream always standardizes to zeros"""
        scaler = RunningScaler(1)
        for _ in range(50):
            assert scaler_transform(scaler, [7.0]).tolist() == [0.0]

    def test_alternating_stream(self):
        """Test an alternating 0/10 stream converges to -1/+1"""
        scaler = RunningScaler(1)
        for i in range(2000):
            z = scaler_transform(scaler, [10.0 * (i % 2)])
        assert z[0] == pytest.approx(1.0, abs=1e-3)
        assert scaler.transform_one([0.0])[0] == pytest.approx(-1.0, abs=1e-3)

    def test_moments_match_numpy(self):
        """Test the running moments equal the batch moments"""
        X = np.random.default_rng(0).normal(3.0, 2.0, (500, 4))
        scaler = RunningScaler(4)
        for row in X:
            scaler.learn_one(row)
        assert np.allclose(scaler.mean, X.mean(axis=0))
        assert np.allclose(scaler.variance, X.var(axis=0))
        assert np.all(scaler.variance >= 0)

    def test_dimension_mismatch(self):
        """Test a wrong feature count is rejected"""
        with pytest.raises(ValidationError):
            scaler_transform(RunningScaler(2), [1.0])


class TestSGD:
    """Tests for SGDRegressor"""

    def test_hand_computed_update(self):
        """Test one step from zero on x=[1], y=2 with rate 0.1"""
        model = SGDRegressor(1, learning_rate=0.1, standardize=False)
        assert model.predict_one([1.0]) == 0.0
        model.learn_one([1.0], 2.0)
        assert model.weights.tolist() == pytest.approx([0.2], abs=1e-12)
        assert model.bias == pytest.approx(0.2, abs=1e-12)

    def test_zero_rate(self):
        """Test a zero learning rate never changes the weights"""
        model = SGDRegressor(2, learning_rate=0.0)
        for x, y in linear_dataset(100, seed=0, slope=2.0, n_features=2).rows():
            model.learn_one(x, y)
        assert model.weights.tolist() == [0.0, 0.0] and model.bias == 0.0

    def test_inverse_time_schedule(self):
        """Test the inverse-time rate decays with the update count"""
        model = SGDRegressor(1, learning_rate=0.1, schedule="inverse-time", decay=1.0, standardize=False)
        assert model.current_rate() == 0.1
        model.learn_one([1.0], 1.0)
        assert model.current_rate() == pytest.approx(0.05)

    def test_overflow_rolls_back(self):
        """Test an overflowing update raises and leaves the model unchanged"""
        model = SGDRegressor(1, learning_rate=1e300, standardize=False)
        with pytest.raises(NumericError):
            model.learn_one([1e200], 1e200)
        assert model.weights.tolist() == [0.0] and model.bias == 0.0 and model.n_updates == 0

    def test_converges_on_linear_data(self):
        """Test prequential MAE on y = 3x stays under 5% of the range"""
        dataset = linear_dataset(10_000, seed=1, slope=3.0)
        model = SGDRegressor(1, learning_rate=0.05)
        errors = np.abs(prequential_predictions(model, dataset) - dataset.targets)
        assert errors.mean() < 0.05 * np.ptp(dataset.targets)

    @pytest.mark.parametrize("seed", [0, 1, 2])
    def test_prequential_r2(self, seed):
        """Test standardized SGD recovers a random line with R^2 above 0.99"""
        rng = np.random.default_rng(seed)
        dataset = linear_dataset(10_000, seed=seed, slope=rng.uniform(1, 5), intercept=rng.uniform(-10, 10))
        predictions = prequential_predictions(SGDRegressor(1, learning_rate=0.05), dataset)
        y = dataset.targets
        r2 = 1 - np.sum((y - predictions) ** 2) / np.sum((y - y.mean()) ** 2)
        assert r2 > 0.99

    def test_invalid_schedule(self):
        """Test an unknown schedule is rejected"""
        with pytest.raises(ValidationError):
            SGDRegressor(1, schedule="cosine")


class TestPassiveAggressive:
    """Tests for PassiveAggressiveRegressor"""

    def test_hand_computed_update(self):
        """Test PA on x=[1, 0], y=1, eps=0.1 steps tau=0.45"""
        model = PassiveAggressiveRegressor(2, epsilon=0.1, variant="PA", standardize=False)
        model.learn_one([1.0, 0.0], 1.0)
        assert model.weights.tolist() == pytest.approx([0.45, 0.0], abs=1e-12)
        assert model.bias == pytest.approx(0.45, abs=1e-12)

    def test_insensitive_zone(self):
        """Test a residual within epsilon leaves the model unchanged"""
        model = PassiveAggressiveRegressor(1, epsilon=0.5, standardize=False)
        model.learn_one([3.0], 0.4)
        assert model.weights.tolist() == [0.0] and model.bias == 0.0

    def test_exact_step_reaches_tube(self):
        """Test an uncapped PA step leaves the residual at most epsilon"""
        rng = np.random.default_rng(7)
        model = PassiveAggressiveRegressor(3, epsilon=0.1, variant="PA", standardize=False)
        for _ in range(200):
            x, y = rng.normal(size=3).tolist(), float(rng.normal(0, 10))
            model.learn_one(x, y)
            assert abs(y - model.predict_one(x)) <= 0.1 + 1e-9

    def test_zero_aggressiveness(self):
        """Test PA-I with C=0 never moves"""
        model = PassiveAggressiveRegressor(2, C=0.0, variant="PA-I")
        for x, y in linear_dataset(200, seed=3, slope=4.0, n_features=2).rows():
            model.learn_one(x, y)
        assert model.weights.tolist() == [0.0, 0.0] and model.bias == 0.0

    def test_capped_step(self):
        """Test PA-I caps the step at C"""
        model = PassiveAggressiveRegressor(1, C=0.01, epsilon=0.0, variant="PA-I", standardize=False)
        model.learn_one([1.0], 100.0)
        assert model.bias == pytest.approx(0.01)

    def test_pa2_step(self):
        """Test PA-II divides by |x|^2 + 1 + 1/(2C)"""
        model = PassiveAggressiveRegressor(1, C=0.5, epsilon=0.0, variant="PA-II", standardize=False)
        model.learn_one([1.0], 3.0)
        assert model.bias == pytest.approx(3.0 / 3.0)

    def test_linear_prediction(self):
        """Test predictions scale linearly with zero bias"""
        model = PassiveAggressiveRegressor(3, standardize=False)
        model.weights = np.array([0.5, -1.5, 2.0])
        x = [1.0, 2.0, -3.0]
        assert model.predict_one([2.5 * v for v in x]) == pytest.approx(2.5 * model.predict_one(x), rel=1e-12)

    def test_snapshot(self):
        """Test the snapshot carries weights and hyperparameters"""
        model = PassiveAggressiveRegressor(2)
        snapshot = model.to_snapshot()
        assert snapshot["kind"] == "pa" and snapshot["params"]["variant"] == "PA-I"
        assert snapshot["standardize"] is True
