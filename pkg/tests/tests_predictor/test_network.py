import numpy as np
import pytest

from readrank.errors import TrainingDivergedError
from readrank.predictor import Adam, FeedForwardNet, TrainConfig, gradient_check, train_network
from readrank.predictor.network import numeric_gradients, relative_error


@pytest.fixture
def separable():
    """Pairwise-style data whose label is a linear function of the inputs."""
    rng = np.random.default_rng(3)
    X = rng.uniform(-1, 1, size=(256, 4))
    y = X @ np.array([0.8, -0.5, 0.3, 0.0])
    return X, y


class TestFeedForwardNet:
    def test_shapes(self):
        net = FeedForwardNet.init(5, seed=1)
        assert [W.shape for W in net.weights] == [(5, 8), (8, 8), (8, 8), (8, 1)]
        assert all(np.all(b == 0) for b in net.biases)
        assert net.predict(np.zeros((3, 5))).shape == (3,)

    def test_input_dimension_mismatch(self):
        net = FeedForwardNet.init(5)
        with pytest.raises(ValueError, match="Expected 5 input features"):
            net.predict(np.zeros((1, 4)))

    def test_eval_mode_ignores_dropout(self):
        net = FeedForwardNet.init(3, seed=0, dropout=0.5)
        X = np.ones((4, 3))
        np.testing.assert_array_equal(net.predict(X), net.predict(X))

    def test_training_forward_needs_randomness(self):
        net = FeedForwardNet.init(3, dropout=0.5)
        with pytest.raises(ValueError):
            net.forward(np.ones((1, 3)), train=True)

    def test_zero_loss_at_minimum(self):
        net = FeedForwardNet.init(2, seed=4)
        X = np.array([[0.1, 0.2], [0.3, -0.4]])
        loss, grads = net.loss_and_grad(X, net.predict(X))
        assert loss == 0.0
        assert all(np.all(g == 0) for g in grads)

    def test_single_linear_unit_gradient(self):
        """For y_hat = w.x + b the gradient is 2 (y_hat - y) x."""
        net = FeedForwardNet([np.array([[0.5], [-1.0]])], [np.array([0.25])])
        x = np.array([[2.0, 1.0]])
        loss, (grad_w, grad_b) = net.loss_and_grad(x, np.array([1.0]))
        residual = 0.5 * 2.0 - 1.0 + 0.25 - 1.0
        assert loss == pytest.approx(residual**2)
        np.testing.assert_allclose(grad_w[:, 0], 2 * residual * x[0])
        np.testing.assert_allclose(grad_b, [2 * residual])

    def test_empty_batch(self):
        with pytest.raises(ValueError):
            FeedForwardNet.init(2).loss_and_grad(np.zeros((0, 2)), np.zeros(0))


class TestGradientCheck:
    def test_backprop_matches_finite_differences(self):
        result = gradient_check(seed=0, draws=100)
        assert result.draws == 100
        assert result.passed
        assert result.max_relative_error < 1e-4

    def test_with_dropout_masks(self):
        rng = np.random.default_rng(11)
        net = FeedForwardNet.init(3, rng, dropout=0.4)
        X = rng.normal(size=(5, 3))
        y = rng.normal(size=5)
        masks = net.draw_masks(5, rng)
        _, analytic = net.loss_and_grad(X, y, train=True, masks=masks)
        numeric = numeric_gradients(net, X, y, masks)
        for a, n in zip(analytic, numeric):
            assert relative_error(a, n).max() < 1e-4


class TestAdam:
    def test_first_step_has_learning_rate_size(self):
        p = np.array([1.0])
        optimizer = Adam([p], learning_rate=0.1)
        optimizer.step([p], [np.array([2.0])])
        assert p[0] == pytest.approx(0.9, abs=1e-6)

    def test_minimizes_quadratic(self):
        p = np.array([3.0, -2.0])
        optimizer = Adam([p], learning_rate=0.05)
        for _ in range(2000):
            optimizer.step([p], [2 * p])
        np.testing.assert_allclose(p, 0.0, atol=1e-2)


class TestTraining:
    def test_loss_decreases(self, separable):
        X, y = separable
        config = TrainConfig(learning_rate=0.001, epochs=10, dropout=0.0, seed=2)
        result = train_network(X, y, config)
        assert len(result.losses) == 10
        assert all(later < earlier for earlier, later in zip(result.losses, result.losses[1:]))

    def test_deterministic(self, separable):
        X, y = separable
        config = TrainConfig(epochs=3, seed=9)
        first = train_network(X, y, config)
        second = train_network(X, y, config)
        assert first.losses == second.losses
        for a, b in zip(first.net.parameters, second.net.parameters):
            np.testing.assert_array_equal(a, b)

    def test_seed_changes_weights(self, separable):
        X, y = separable
        first = train_network(X, y, TrainConfig(epochs=1, seed=0))
        second = train_network(X, y, TrainConfig(epochs=1, seed=1))
        assert not np.array_equal(first.net.weights[0], second.net.weights[0])

    def test_epoch_callback(self, separable):
        X, y = separable
        seen = []
        train_network(X, y, TrainConfig(epochs=2), on_epoch=lambda epoch, loss: seen.append(epoch))
        assert seen == [1, 2]

    def test_diverged(self, separable):
        X, y = separable
        y = y.copy()
        y[0] = np.inf
        with np.errstate(all="ignore"), pytest.raises(TrainingDivergedError) as excinfo:
            train_network(X, y, TrainConfig(epochs=2))
        assert excinfo.value.epoch == 1

    def test_misaligned_inputs(self):
        with pytest.raises(ValueError):
            train_network(np.zeros((3, 2)), np.zeros(2), TrainConfig())

    @pytest.mark.parametrize(
        "overrides",
        [{"epochs": 0}, {"learning_rate": 0.0}, {"dropout": 1.0}, {"batch_size": 0}],
    )
    def test_invalid_config(self, overrides):
        with pytest.raises(ValueError):
            TrainConfig(**overrides)

    def test_task_learning_rates(self):
        assert TrainConfig.for_task("rank").learning_rate == 0.0005
        assert TrainConfig.for_task("ppdb").learning_rate == 0.001
        assert TrainConfig.for_task("ppdb", learning_rate=0.01).learning_rate == 0.01
        with pytest.raises(ValueError):
            TrainConfig.for_task("cwi")
