"""Feed-forward inverse-dynamics network, trained from scratch in numpy.

The network maps (desired twist, previously observed twist) to the wheel
speeds that produce the desired twist on the plant it was trained against.
Inputs and outputs are standardized with statistics frozen at training time;
the parameter file is a versioned little-endian binary (magic ``VSMLP1``).
"""

from __future__ import annotations

import struct
from dataclasses import dataclass, field
from typing import List, Sequence, Tuple

import numpy as np

from ..action import HighLevelAction, wheel_speeds_to_command
from ..physics import WheelCommand
from .data import TrajectorySample, dataset_arrays

MODEL_MAGIC = b"VSMLP1"
_ACTIVATION_CODES = {"tanh": 1}
_ACTIVATION_NAMES = {v: k for k, v in _ACTIVATION_CODES.items()}


class ModelFormatError(ValueError):
    """Raised when a model file fails magic, version, or shape validation."""


@dataclass
class MLPParams:
    sizes: Tuple[int, ...]
    weights: List[np.ndarray]
    biases: List[np.ndarray]
    activation: str = "tanh"
    in_mean: np.ndarray = field(default_factory=lambda: np.zeros(4))
    in_scale: np.ndarray = field(default_factory=lambda: np.ones(4))
    out_mean: np.ndarray = field(default_factory=lambda: np.zeros(2))
    out_scale: np.ndarray = field(default_factory=lambda: np.ones(2))

    def __post_init__(self):
        if self.activation not in _ACTIVATION_CODES:
            raise ValueError(f"unknown activation {self.activation!r}")
        if len(self.weights) != len(self.sizes) - 1 or len(self.biases) != len(self.weights):
            raise ValueError("layer count does not match sizes")
        for i, (w, b) in enumerate(zip(self.weights, self.biases)):
            if w.shape != (self.sizes[i], self.sizes[i + 1]) or b.shape != (self.sizes[i + 1],):
                raise ValueError(f"layer {i} shape mismatch")
        for arr in (self.in_mean, self.in_scale):
            if arr.shape != (self.sizes[0],) or not np.all(np.isfinite(arr)):
                raise ValueError("bad input normalization statistics")
        for arr in (self.out_mean, self.out_scale):
            if arr.shape != (self.sizes[-1],) or not np.all(np.isfinite(arr)):
                raise ValueError("bad output normalization statistics")
        if np.any(self.in_scale <= 0.0) or np.any(self.out_scale <= 0.0):
            raise ValueError("normalization scales must be positive")

    def n_parameters(self) -> int:
        return sum(w.size + b.size for w, b in zip(self.weights, self.biases))


def mlp_init(sizes: Sequence[int] = (4, 64, 64, 2), seed: int = 0,
             activation: str = "tanh") -> MLPParams:
    """Glorot-uniform weights, zero biases, identity normalization."""
    rng = np.random.default_rng(seed)
    sizes = tuple(int(s) for s in sizes)
    weights, biases = [], []
    for n_in, n_out in zip(sizes, sizes[1:]):
        bound = np.sqrt(6.0 / (n_in + n_out))
        weights.append(rng.uniform(-bound, bound, (n_in, n_out)))
        biases.append(np.zeros(n_out))
    return MLPParams(sizes=sizes, weights=weights, biases=biases,
                     activation=activation,
                     in_mean=np.zeros(sizes[0]), in_scale=np.ones(sizes[0]),
                     out_mean=np.zeros(sizes[-1]), out_scale=np.ones(sizes[-1]))


def _forward_normalized(params: MLPParams, Xn: np.ndarray) -> List[np.ndarray]:
    """All layer activations for standardized input; last entry is the
    standardized output (linear final layer)."""
    acts = [Xn]
    h = Xn
    last = len(params.weights) - 1
    for i, (w, b) in enumerate(zip(params.weights, params.biases)):
        z = h @ w + b
        h = z if i == last else np.tanh(z)
        acts.append(h)
    return acts


def mlp_forward(params: MLPParams, x: Sequence[float]) -> np.ndarray:
    """De-normalized network output for one input vector."""
    x = np.asarray(x, dtype=np.float64)
    if x.shape != (params.sizes[0],):
        raise ValueError(f"expected input of shape ({params.sizes[0]},), got {x.shape}")
    if not np.all(np.isfinite(x)):
        raise ValueError("non-finite input")
    xn = (x - params.in_mean) / params.in_scale
    yn = _forward_normalized(params, xn[None, :])[-1][0]
    return yn * params.out_scale + params.out_mean


def mlp_gradients(params: MLPParams, X: np.ndarray, Y: np.ndarray,
                  ) -> Tuple[float, List[np.ndarray], List[np.ndarray]]:
    """Mean-squared-error loss over standardized outputs and its analytic
    gradient for every weight matrix and bias vector."""
    Xn = (X - params.in_mean) / params.in_scale
    Yn = (Y - params.out_mean) / params.out_scale
    acts = _forward_normalized(params, Xn)
    diff = acts[-1] - Yn
    n = X.shape[0]
    loss = float(np.mean(diff ** 2))
    # d loss / d out, with the mean over n*k output entries folded in
    delta = diff * (2.0 / diff.size)
    grads_w: List[np.ndarray] = [np.empty(0)] * len(params.weights)
    grads_b: List[np.ndarray] = [np.empty(0)] * len(params.biases)
    for i in range(len(params.weights) - 1, -1, -1):
        grads_w[i] = acts[i].T @ delta
        grads_b[i] = delta.sum(axis=0)
        if i > 0:
            delta = (delta @ params.weights[i].T) * (1.0 - acts[i] ** 2)
    return loss, grads_w, grads_b


@dataclass(frozen=True)
class TrainConfig:
    epochs: int = 40
    batch_size: int = 256
    learning_rate: float = 3e-3
    seed: int = 0
    val_split: float = 0.1
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8

    def __post_init__(self):
        if not 0.0 < self.val_split < 1.0:
            raise ValueError("val_split must lie in (0, 1)")
        if self.learning_rate <= 0.0:
            raise ValueError("learning_rate must be positive")
        if self.epochs < 1 or self.batch_size < 1:
            raise ValueError("epochs and batch_size must be at least 1")


@dataclass
class TrainResult:
    params: MLPParams
    train_loss: List[float]
    val_loss: List[float]

    def val_rmse(self, X: np.ndarray, Y: np.ndarray) -> float:
        """Raw-unit root-mean-square error on the given arrays."""
        Xn = (X - self.params.in_mean) / self.params.in_scale
        yn = _forward_normalized(self.params, Xn)[-1]
        pred = yn * self.params.out_scale + self.params.out_mean
        return float(np.sqrt(np.mean((pred - Y) ** 2)))


def mlp_train(dataset: Sequence[TrajectorySample], config: TrainConfig = TrainConfig(),
              sizes: Sequence[int] = (4, 64, 64, 2)) -> TrainResult:
    """Minimize MSE with mini-batch Adam. Deterministic given the seed:
    initialization, the train/validation split, and batch order all come
    from one generator."""
    X, Y = dataset_arrays(dataset)
    rng = np.random.default_rng(config.seed)
    params = mlp_init(sizes, seed=config.seed)

    n = X.shape[0]
    perm = rng.permutation(n)
    n_val = max(1, int(round(n * config.val_split))) if n > 1 else 0
    val_idx, train_idx = perm[:n_val], perm[n_val:]
    if train_idx.size == 0:
        train_idx = perm
    Xt, Yt = X[train_idx], Y[train_idx]
    Xv, Yv = X[val_idx], Y[val_idx]

    params.in_mean = Xt.mean(axis=0)
    params.in_scale = np.maximum(Xt.std(axis=0), 1e-8)
    params.out_mean = Yt.mean(axis=0)
    params.out_scale = np.maximum(Yt.std(axis=0), 1e-8)

    m_w = [np.zeros_like(w) for w in params.weights]
    v_w = [np.zeros_like(w) for w in params.weights]
    m_b = [np.zeros_like(b) for b in params.biases]
    v_b = [np.zeros_like(b) for b in params.biases]
    t = 0

    def full_loss(Xa, Ya):
        if Xa.size == 0:
            return float("nan")
        Xn = (Xa - params.in_mean) / params.in_scale
        Yn = (Ya - params.out_mean) / params.out_scale
        return float(np.mean((_forward_normalized(params, Xn)[-1] - Yn) ** 2))

    # element 0 of each history is the loss before any update
    train_hist: List[float] = [full_loss(Xt, Yt)]
    val_hist: List[float] = [full_loss(Xv, Yv)]

    for _ in range(config.epochs):
        order = rng.permutation(Xt.shape[0])
        for start in range(0, Xt.shape[0], config.batch_size):
            batch = order[start:start + config.batch_size]
            _, gw, gb = mlp_gradients(params, Xt[batch], Yt[batch])
            t += 1
            corr1 = 1.0 - config.beta1 ** t
            corr2 = 1.0 - config.beta2 ** t
            for i in range(len(params.weights)):
                m_w[i] = config.beta1 * m_w[i] + (1.0 - config.beta1) * gw[i]
                v_w[i] = config.beta2 * v_w[i] + (1.0 - config.beta2) * gw[i] ** 2
                params.weights[i] -= config.learning_rate * (m_w[i] / corr1) / (
                    np.sqrt(v_w[i] / corr2) + config.eps)
                m_b[i] = config.beta1 * m_b[i] + (1.0 - config.beta1) * gb[i]
                v_b[i] = config.beta2 * v_b[i] + (1.0 - config.beta2) * gb[i] ** 2
                params.biases[i] -= config.learning_rate * (m_b[i] / corr1) / (
                    np.sqrt(v_b[i] / corr2) + config.eps)
        train_hist.append(full_loss(Xt, Yt))
        val_hist.append(full_loss(Xv, Yv))
    return TrainResult(params=params, train_loss=train_hist, val_loss=val_hist)


def adapt(params: MLPParams, desired: HighLevelAction,
          observed_prev: Tuple[float, float], v_max: float = 150.0) -> WheelCommand:
    """Wheel command for a desired twist given the previously observed one.
    Channel overflow is scaled proportionally, so the sign of V_r - V_l
    (the turn direction) survives clamping."""
    v_l, v_r = mlp_forward(params, [desired.v, desired.omega,
                                    observed_prev[0], observed_prev[1]])
    return wheel_speeds_to_command(float(v_l), float(v_r), v_max)


def save_model(params: MLPParams, path) -> None:
    """Layout: magic, activation code byte, u32 layer-size count, u32 sizes,
    then float64 LE arrays: per layer row-major weights then biases, then
    in_mean, in_scale, out_mean, out_scale."""
    chunks = [MODEL_MAGIC,
              struct.pack("<B", _ACTIVATION_CODES[params.activation]),
              struct.pack("<I", len(params.sizes)),
              struct.pack(f"<{len(params.sizes)}I", *params.sizes)]
    for w, b in zip(params.weights, params.biases):
        chunks.append(np.ascontiguousarray(w, dtype="<f8").tobytes())
        chunks.append(np.ascontiguousarray(b, dtype="<f8").tobytes())
    for arr in (params.in_mean, params.in_scale, params.out_mean, params.out_scale):
        chunks.append(np.ascontiguousarray(arr, dtype="<f8").tobytes())
    with open(path, "wb") as fh:
        fh.write(b"".join(chunks))


def load_model(path) -> MLPParams:
    with open(path, "rb") as fh:
        blob = fh.read()
    if len(blob) < len(MODEL_MAGIC) + 5 or not blob.startswith(MODEL_MAGIC):
        raise ModelFormatError(f"{path}: not a {MODEL_MAGIC.decode()} model file")
    off = len(MODEL_MAGIC)
    act_code = blob[off]
    off += 1
    if act_code not in _ACTIVATION_NAMES:
        raise ModelFormatError(f"{path}: unknown activation code {act_code}")
    (n_sizes,) = struct.unpack_from("<I", blob, off)
    off += 4
    if n_sizes < 2 or len(blob) < off + 4 * n_sizes:
        raise ModelFormatError(f"{path}: truncated header")
    sizes = struct.unpack_from(f"<{n_sizes}I", blob, off)
    off += 4 * n_sizes

    def take(count: int) -> np.ndarray:
        nonlocal off
        nbytes = 8 * count
        if len(blob) < off + nbytes:
            raise ModelFormatError(f"{path}: truncated payload")
        arr = np.frombuffer(blob, dtype="<f8", count=count, offset=off).astype(np.float64)
        off += nbytes
        return arr

    weights, biases = [], []
    for n_in, n_out in zip(sizes, sizes[1:]):
        weights.append(take(n_in * n_out).reshape(n_in, n_out))
        biases.append(take(n_out))
    in_mean = take(sizes[0])
    in_scale = take(sizes[0])
    out_mean = take(sizes[-1])
    out_scale = take(sizes[-1])
    if off != len(blob):
        raise ModelFormatError(f"{path}: {len(blob) - off} trailing bytes")
    return MLPParams(sizes=tuple(sizes), weights=weights, biases=biases,
                     activation=_ACTIVATION_NAMES[act_code],
                     in_mean=in_mean, in_scale=in_scale,
                     out_mean=out_mean, out_scale=out_scale)
