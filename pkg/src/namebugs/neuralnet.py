"""From-scratch binary classifier: one ReLU hidden layer, sigmoid output,
binary cross-entropy, RMSprop, inverted dropout on input and hidden
activations. Includes a central-difference gradient checker.
"""

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, InputContractError, NonFiniteLoss

LOG_EPS = 1e-12  # clamp inside log() so saturated outputs stay finite


@dataclass(eq=False)
class Mlp:
    W1: np.ndarray  # hidden x input
    b1: np.ndarray  # hidden
    W2: np.ndarray  # 1 x hidden
    b2: np.ndarray  # 1

    @property
    def inputDim(self):
        return self.W1.shape[1]

    @property
    def hiddenDim(self):
        return self.W1.shape[0]

    def parameters(self):
        return (("W1", self.W1), ("b1", self.b1),
                ("W2", self.W2), ("b2", self.b2))


@dataclass
class FitConfig:
    epochs: int = 10
    batchSize: int = 100
    dropoutRate: float = 0.2
    learningRate: float = 0.001
    rmspropDecay: float = 0.9
    rmspropEpsilon: float = 1e-8
    seed: int = 0
    hiddenDim: int = 200

    def __post_init__(self):
        if not 0 <= self.dropoutRate < 1:
            raise InputContractError("dropoutRate must be in [0, 1)")
        if self.batchSize < 1:
            raise InputContractError("batchSize must be >= 1")
        if self.epochs < 0:
            raise InputContractError("epochs must be non-negative")
        if self.learningRate <= 0:
            raise InputContractError("learningRate must be positive")


def init(inputDim, hiddenDim, seed):
    """Uniform Glorot weights, zero biases; deterministic per seed."""
    if inputDim < 1 or hiddenDim < 1:
        raise InputContractError("dimensions must be >= 1")
    rng = np.random.default_rng(seed)
    limit1 = np.sqrt(6.0 / (inputDim + hiddenDim))
    limit2 = np.sqrt(6.0 / (hiddenDim + 1))
    return Mlp(
        W1=rng.uniform(-limit1, limit1, size=(hiddenDim, inputDim)),
        b1=np.zeros(hiddenDim),
        W2=rng.uniform(-limit2, limit2, size=(1, hiddenDim)),
        b2=np.zeros(1),
    )


def _sigmoid(z):
    return 1.0 / (1.0 + np.exp(-z))


def forward(mlp, x, dropMask=None, dropoutRate=0.0):
    """Probability for one input vector.

    Train mode passes dropMask=(inputMask, hiddenMask) of 0/1 values plus
    the dropout rate; kept activations are scaled by 1/keep (inverted
    dropout) so inference applies no masks and no scaling.
    """
    x = np.asarray(x, dtype=np.float64)
    if x.shape != (mlp.inputDim,):
        raise DimensionMismatch(
            f"input of shape {x.shape} fed to a {mlp.inputDim}-wide model"
        )
    if dropMask is not None:
        keep = 1.0 - dropoutRate
        mask_in, mask_hidden = dropMask
        x = x * mask_in / keep
        h = np.maximum(mlp.W1 @ x + mlp.b1, 0.0)
        h = h * mask_hidden / keep
    else:
        h = np.maximum(mlp.W1 @ x + mlp.b1, 0.0)
    p = _sigmoid(float((mlp.W2 @ h + mlp.b2)[0]))
    return float(np.clip(p, LOG_EPS, 1.0 - LOG_EPS))


def predict(mlp, x):
    return forward(mlp, x)


def predict_batch(mlp, X):
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2 or X.shape[1] != mlp.inputDim:
        raise DimensionMismatch(
            f"batch of shape {X.shape} fed to a {mlp.inputDim}-wide model"
        )
    H = np.maximum(X @ mlp.W1.T + mlp.b1, 0.0)
    p = _sigmoid(H @ mlp.W2.T + mlp.b2)[:, 0]
    return np.clip(p, LOG_EPS, 1.0 - LOG_EPS)


def bce_loss(p, y):
    p = np.clip(p, LOG_EPS, 1.0 - LOG_EPS)
    return -(y * np.log(p) + (1.0 - y) * np.log(1.0 - p))


def bce_gradients(mlp, x, label):
    """Analytic gradients of the single-example BCE loss (no dropout)."""
    x = np.asarray(x, dtype=np.float64)
    z1 = mlp.W1 @ x + mlp.b1
    h = np.maximum(z1, 0.0)
    p = _sigmoid(float((mlp.W2 @ h + mlp.b2)[0]))
    dz2 = p - label
    dW2 = dz2 * h[None, :]
    db2 = np.array([dz2])
    dh = dz2 * mlp.W2[0]
    dz1 = dh * (z1 > 0)
    dW1 = np.outer(dz1, x)
    db1 = dz1
    return {"W1": dW1, "b1": db1, "W2": dW2, "b2": db2}


def fit(mlp, data, config):
    """Minibatch RMSprop on (vector, label) pairs; labels in {0, 1}.

    Data is shuffled per epoch from the seed and each example gets a fresh
    dropout mask on every pass. Returns (mlp, per-epoch mean loss).
    """
    if not data:
        raise InputContractError("fit requires a non-empty dataset")
    X = np.asarray([row[0] for row in data], dtype=np.float64)
    y = np.asarray([row[1] for row in data], dtype=np.float64)
    if not np.all((y == 0) | (y == 1)):
        raise InputContractError("labels must be 0 or 1")
    n = X.shape[0]
    rng = np.random.default_rng(config.seed)
    keep = 1.0 - config.dropoutRate
    lr = config.learningRate
    rho = config.rmspropDecay
    eps = config.rmspropEpsilon
    caches = {name: np.zeros_like(p) for name, p in mlp.parameters()}

    losses = []
    for _ in range(config.epochs):
        perm = rng.permutation(n)
        loss_sum = 0.0
        for start in range(0, n, config.batchSize):
            batch = perm[start:start + config.batchSize]
            Xb = X[batch]
            yb = y[batch]
            B = batch.shape[0]
            if config.dropoutRate > 0:
                mask_in = (rng.random((B, mlp.inputDim)) < keep) / keep
                mask_hidden = (rng.random((B, mlp.hiddenDim)) < keep) / keep
                Xt = Xb * mask_in
            else:
                mask_hidden = None
                Xt = Xb
            Z1 = Xt @ mlp.W1.T + mlp.b1
            H = np.maximum(Z1, 0.0)
            Ht = H * mask_hidden if mask_hidden is not None else H
            p = _sigmoid((Ht @ mlp.W2.T + mlp.b2)[:, 0])
            batch_loss = bce_loss(p, yb).sum()
            if not np.isfinite(batch_loss):
                raise NonFiniteLoss(
                    f"non-finite loss in batch starting at {start}"
                )
            loss_sum += batch_loss

            dz2 = (p - yb) / B
            dW2 = dz2[None, :] @ Ht
            db2 = np.array([dz2.sum()])
            dHt = np.outer(dz2, mlp.W2[0])
            dH = dHt * mask_hidden if mask_hidden is not None else dHt
            dZ1 = dH * (Z1 > 0)
            dW1 = dZ1.T @ Xt
            db1 = dZ1.sum(axis=0)

            for (name, param), grad in zip(
                mlp.parameters(), (dW1, db1, dW2, db2)
            ):
                cache = caches[name]
                cache[:] = rho * cache + (1.0 - rho) * grad * grad
                param -= lr * grad / np.sqrt(cache + eps)
        losses.append(loss_sum / n)
    return mlp, losses


def gradient_check(mlp, x, label, step=1e-5):
    """Max relative error between analytic and central-difference gradients.

    Dropout is off. Elements where both gradients are below 1e-10 in
    magnitude count as exact (saturated-output case).
    """
    analytic = bce_gradients(mlp, x, label)

    def loss_now():
        return float(bce_loss(forward(mlp, x), label))

    worst = 0.0
    for name, param in mlp.parameters():
        flat = param.reshape(-1)
        grads = analytic[name].reshape(-1)
        for i in range(flat.size):
            saved = flat[i]
            flat[i] = saved + step
            plus = loss_now()
            flat[i] = saved - step
            minus = loss_now()
            flat[i] = saved
            numeric = (plus - minus) / (2.0 * step)
            denominator = max(abs(grads[i]), abs(numeric))
            if denominator < 1e-10:
                continue
            worst = max(worst, abs(grads[i] - numeric) / denominator)
    return worst


def sample_kink_free_input(mlp, rng, margin=1e-4, attempts=1000):
    """Standard-normal input whose hidden pre-activations all clear the
    ReLU kink by `margin`, so finite differences stay on one linear piece."""
    for _ in range(attempts):
        x = rng.standard_normal(mlp.inputDim)
        z1 = mlp.W1 @ x + mlp.b1
        if np.all(np.abs(z1) > margin):
            return x
    raise InputContractError("could not sample a kink-free input")
