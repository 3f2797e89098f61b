"""
Feedforward regression network trained with Adam on mean squared error.

Three tanh hidden layers of eight units feed a single linear output unit.
Forward and backward passes are written out by hand; dropout is applied to
hidden activations at training time only (inverted scaling).
"""

import logging
from collections.abc import Callable, Sequence
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from ..errors import TrainingDivergedError

__all__ = [
    "HIDDEN_SIZES",
    "TrainConfig",
    "FeedForwardNet",
    "Adam",
    "TrainResult",
    "train_network",
    "GradientCheckResult",
    "gradient_check",
]

logger = logging.getLogger(__name__)

HIDDEN_SIZES = (8, 8, 8)
TASK_LEARNING_RATES = {"rank": 0.0005, "ppdb": 0.001}
GRADCHECK_STEP = 1e-5
GRADCHECK_TOLERANCE = 1e-4
GRADCHECK_FLOOR = 1e-4


@dataclass(frozen=True)
class TrainConfig:
    """
    Attributes:
        learning_rate: Adam step size (0.0005 for ranking, 0.001 for paraphrase rules).
        epochs: Full passes over the training pairs.
        dropout: Probability of dropping a hidden unit during training.
        batch_size: Mini-batch size.
        seed: Seed of every random draw (initialization, shuffling, dropout).
        k: Number of Gaussian bins per scalar feature.
        gamma: Gaussian sigma as a fraction of the bin width.
        binning: Feed binned features (True) or raw scalars (False).
    """

    learning_rate: float = 0.0005
    epochs: int = 100
    dropout: float = 0.2
    batch_size: int = 32
    seed: int = 0
    k: int = 10
    gamma: float = 0.2
    binning: bool = True
    beta1: float = 0.9
    beta2: float = 0.999
    epsilon: float = 1e-8

    def __post_init__(self):
        if self.learning_rate <= 0:
            raise ValueError(f"learning_rate must be > 0, got {self.learning_rate}")
        if self.epochs < 1:
            raise ValueError(f"epochs must be >= 1, got {self.epochs}")
        if not 0.0 <= self.dropout < 1.0:
            raise ValueError(f"dropout must be in [0, 1), got {self.dropout}")
        if self.batch_size < 1:
            raise ValueError(f"batch_size must be >= 1, got {self.batch_size}")

    @classmethod
    def for_task(cls, task: str, **overrides) -> "TrainConfig":
        """Defaults of a task, with the task's learning rate unless overridden."""
        if task not in TASK_LEARNING_RATES:
            raise ValueError(f"Unknown task '{task}'. Known: {list(TASK_LEARNING_RATES)}")
        overrides.setdefault("learning_rate", TASK_LEARNING_RATES[task])
        return cls(**overrides)


class ForwardCache(NamedTuple):
    inputs: list[np.ndarray]
    activations: list[np.ndarray]
    masks: list[np.ndarray | None]


class FeedForwardNet:
    """
    Dense network with tanh hidden layers and a linear scalar output.

    Weights are stored with shape (fan_in, fan_out) and applied to row
    batches: ``z = a @ W + b``.

    Args:
        weights: One matrix per layer.
        biases: One vector per layer.
        dropout: Drop probability of hidden units in training mode.
    """

    def __init__(
        self,
        weights: Sequence[np.ndarray],
        biases: Sequence[np.ndarray],
        dropout: float = 0.0,
    ):
        if len(weights) != len(biases) or not weights:
            raise ValueError("Need one bias vector per weight matrix")
        for W, b in zip(weights, biases):
            if W.shape[1] != b.shape[0]:
                raise ValueError(f"Bias of size {b.shape[0]} does not match {W.shape}")
        if weights[-1].shape[1] != 1:
            raise ValueError("Output layer must have a single unit")
        self.weights = [np.array(W, dtype=float) for W in weights]
        self.biases = [np.array(b, dtype=float) for b in biases]
        self.dropout = dropout

    @classmethod
    def init(
        cls,
        input_dim: int,
        seed: int | np.random.Generator = 0,
        dropout: float = 0.0,
        hidden_sizes: Sequence[int] = HIDDEN_SIZES,
    ) -> "FeedForwardNet":
        """
        Glorot-uniform weights and zero biases.

        Raises:
            ValueError: If input_dim < 1.
        """
        if input_dim < 1:
            raise ValueError(f"input_dim must be >= 1, got {input_dim}")
        rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
        sizes = [input_dim, *hidden_sizes, 1]
        weights, biases = [], []
        for fan_in, fan_out in zip(sizes[:-1], sizes[1:]):
            limit = np.sqrt(6.0 / (fan_in + fan_out))
            weights.append(rng.uniform(-limit, limit, size=(fan_in, fan_out)))
            biases.append(np.zeros(fan_out))
        return cls(weights, biases, dropout)

    @property
    def input_dim(self) -> int:
        return self.weights[0].shape[0]

    @property
    def parameters(self) -> list[np.ndarray]:
        """Weights and biases interleaved (W1, b1, W2, b2, ...), as live references."""
        return [p for pair in zip(self.weights, self.biases) for p in pair]

    def copy(self) -> "FeedForwardNet":
        return FeedForwardNet(self.weights, self.biases, self.dropout)

    def draw_masks(self, n_rows: int, rng: np.random.Generator) -> list[np.ndarray]:
        """Inverted-dropout masks for every hidden layer."""
        keep = 1.0 - self.dropout
        return [
            (rng.random((n_rows, W.shape[1])) < keep) / keep for W in self.weights[:-1]
        ]

    def forward(
        self,
        X: np.ndarray,
        train: bool = False,
        rng: np.random.Generator | None = None,
        masks: Sequence[np.ndarray] | None = None,
    ) -> tuple[np.ndarray, ForwardCache]:
        """
        Args:
            X: Inputs of shape (m, input_dim) or a single vector.
            train: Apply dropout. Masks are drawn from ``rng`` unless given.

        Returns:
            Outputs of shape (m,) and the cached activations for backward().

        Raises:
            ValueError: On an input dimension mismatch.
        """
        X = np.atleast_2d(np.asarray(X, dtype=float))
        if X.shape[1] != self.input_dim:
            raise ValueError(f"Expected {self.input_dim} input features, got {X.shape[1]}")
        if train and masks is None and self.dropout > 0:
            if rng is None:
                raise ValueError("Training-mode forward needs an rng or explicit masks")
            masks = self.draw_masks(X.shape[0], rng)

        inputs, activations, used_masks = [], [], []
        a = X
        last = len(self.weights) - 1
        for layer, (W, b) in enumerate(zip(self.weights, self.biases)):
            inputs.append(a)
            z = a @ W + b
            if layer == last:
                a = z
                break
            a = np.tanh(z)
            activations.append(a)
            mask = masks[layer] if train and masks is not None else None
            used_masks.append(mask)
            if mask is not None:
                a = a * mask
        return a[:, 0], ForwardCache(inputs, activations, used_masks)

    def predict(self, X: np.ndarray) -> np.ndarray:
        """Eval-mode outputs (no dropout)."""
        return self.forward(X)[0]

    def backward(
        self, d_output: np.ndarray, cache: ForwardCache
    ) -> list[np.ndarray]:
        """Gradients in the order of ``parameters`` given dL/d(output) per row."""
        grads: list[np.ndarray] = []
        delta = np.asarray(d_output, dtype=float).reshape(-1, 1)
        for layer in range(len(self.weights) - 1, -1, -1):
            grads.append(delta.sum(axis=0))
            grads.append(cache.inputs[layer].T @ delta)
            if layer == 0:
                break
            delta = delta @ self.weights[layer].T
            mask = cache.masks[layer - 1]
            if mask is not None:
                delta = delta * mask
            activation = cache.activations[layer - 1]
            delta = delta * (1.0 - activation**2)
        grads.reverse()
        return grads

    def loss_and_grad(
        self,
        X: np.ndarray,
        y: np.ndarray,
        train: bool = False,
        rng: np.random.Generator | None = None,
        masks: Sequence[np.ndarray] | None = None,
    ) -> tuple[float, list[np.ndarray]]:
        """
        Mean squared error and its gradient w.r.t. every parameter.

        Raises:
            ValueError: On an empty batch.
        """
        y = np.asarray(y, dtype=float).ravel()
        if y.size == 0:
            raise ValueError("Cannot compute the loss of an empty batch")
        output, cache = self.forward(X, train=train, rng=rng, masks=masks)
        residual = output - y
        loss = float(np.mean(residual**2))
        grads = self.backward(2.0 * residual / y.size, cache)
        return loss, grads


class Adam:
    """Adam optimizer updating a list of arrays in place."""

    def __init__(
        self,
        parameters: Sequence[np.ndarray],
        learning_rate: float,
        beta1: float = 0.9,
        beta2: float = 0.999,
        epsilon: float = 1e-8,
    ):
        self.learning_rate = learning_rate
        self.beta1 = beta1
        self.beta2 = beta2
        self.epsilon = epsilon
        self.m = [np.zeros_like(p) for p in parameters]
        self.v = [np.zeros_like(p) for p in parameters]
        self.t = 0

    def step(self, parameters: Sequence[np.ndarray], grads: Sequence[np.ndarray]) -> None:
        self.t += 1
        correction1 = 1.0 - self.beta1**self.t
        correction2 = 1.0 - self.beta2**self.t
        for p, g, m, v in zip(parameters, grads, self.m, self.v):
            m *= self.beta1
            m += (1.0 - self.beta1) * g
            v *= self.beta2
            v += (1.0 - self.beta2) * g * g
            p -= self.learning_rate * (m / correction1) / (np.sqrt(v / correction2) + self.epsilon)


class TrainResult(NamedTuple):
    net: FeedForwardNet
    losses: list[float]


def train_network(
    X: np.ndarray,
    y: np.ndarray,
    config: TrainConfig,
    on_epoch: Callable[[int, float], None] | None = None,
) -> TrainResult:
    """
    Mini-batch Adam on MSE.

    The loss trace holds the eval-mode loss over the whole training set after
    each epoch. Initialization, shuffling and dropout each draw from their own
    stream spawned from ``config.seed``.

    Raises:
        ValueError: If X is empty or X and y differ in length.
        TrainingDivergedError: If the loss becomes NaN or infinite.
    """
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float).ravel()
    if X.ndim != 2 or X.shape[0] == 0:
        raise ValueError("Training needs a non-empty 2-D feature matrix")
    if X.shape[0] != y.size:
        raise ValueError(f"{X.shape[0]} rows but {y.size} labels")

    init_seq, shuffle_seq, dropout_seq = np.random.SeedSequence(config.seed).spawn(3)
    net = FeedForwardNet.init(
        X.shape[1], np.random.default_rng(init_seq), dropout=config.dropout
    )
    shuffle_rng = np.random.default_rng(shuffle_seq)
    dropout_rng = np.random.default_rng(dropout_seq)
    optimizer = Adam(
        net.parameters, config.learning_rate, config.beta1, config.beta2, config.epsilon
    )

    losses = []
    n = X.shape[0]
    for epoch in range(1, config.epochs + 1):
        order = shuffle_rng.permutation(n)
        for start in range(0, n, config.batch_size):
            batch = order[start : start + config.batch_size]
            batch_loss, grads = net.loss_and_grad(
                X[batch], y[batch], train=True, rng=dropout_rng
            )
            if not np.isfinite(batch_loss):
                raise TrainingDivergedError(epoch, batch_loss)
            optimizer.step(net.parameters, grads)

        loss = float(np.mean((net.predict(X) - y) ** 2))
        if not np.isfinite(loss):
            raise TrainingDivergedError(epoch, loss)
        losses.append(loss)
        logger.debug(f"Epoch {epoch}/{config.epochs}: loss {loss:.6f}")
        if on_epoch is not None:
            on_epoch(epoch, loss)

    logger.info(f"Trained for {config.epochs} epochs, final loss {losses[-1]:.6f}")
    return TrainResult(net, losses)


class GradientCheckResult(NamedTuple):
    max_relative_error: float
    draws: int
    passed: bool


def relative_error(analytic: np.ndarray, numeric: np.ndarray) -> np.ndarray:
    """|a - n| / max(|a| + |n|, floor)."""
    return np.abs(analytic - numeric) / np.maximum(
        np.abs(analytic) + np.abs(numeric), GRADCHECK_FLOOR
    )


def numeric_gradients(
    net: FeedForwardNet,
    X: np.ndarray,
    y: np.ndarray,
    masks: Sequence[np.ndarray] | None = None,
    step: float = GRADCHECK_STEP,
) -> list[np.ndarray]:
    """Central finite differences of the loss w.r.t. every parameter."""
    train = masks is not None
    grads = []
    for param in net.parameters:
        grad = np.zeros_like(param)
        for index in np.ndindex(param.shape):
            original = param[index]
            param[index] = original + step
            plus, _ = net.loss_and_grad(X, y, train=train, masks=masks)
            param[index] = original - step
            minus, _ = net.loss_and_grad(X, y, train=train, masks=masks)
            param[index] = original
            grad[index] = (plus - minus) / (2 * step)
        grads.append(grad)
    return grads


def gradient_check(seed: int = 0, draws: int = 100) -> GradientCheckResult:
    """
    Compare backpropagation with central finite differences on random networks.

    Every draw picks a random input size, batch, targets, biases and dropout
    masks (held fixed across perturbations).
    """
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(draws):
        input_dim = int(rng.integers(1, 7))
        batch = int(rng.integers(1, 6))
        net = FeedForwardNet.init(input_dim, rng, dropout=float(rng.uniform(0.0, 0.5)))
        for b in net.biases:
            b[:] = rng.normal(scale=0.1, size=b.shape)
        X = rng.normal(size=(batch, input_dim))
        y = rng.uniform(-1.0, 1.0, size=batch)
        masks = net.draw_masks(batch, rng)

        _, analytic = net.loss_and_grad(X, y, train=True, masks=masks)
        numeric = numeric_gradients(net, X, y, masks)
        for a, n in zip(analytic, numeric):
            worst = max(worst, float(relative_error(a, n).max(initial=0.0)))

    passed = worst < GRADCHECK_TOLERANCE
    logger.info(f"Gradient check over {draws} draws: max relative error {worst:.3e}")
    return GradientCheckResult(worst, draws, passed)
