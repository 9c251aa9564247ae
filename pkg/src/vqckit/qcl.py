"""Quantum circuit learning: gradient training of a layered ansatz.

Circuit angles (and optionally a bias term) are trained by plain
stochastic gradient descent on the empirical loss

    J(theta, theta_b) = (1/N') sum_batch l(y_i, f_pred(x_i; theta, theta_b)),

with the exact product-rule gradient of each expectation value (this is a
classical simulation; no measurement sampling is involved).  After every
update the full-training-set accuracy is recorded, and the returned model
is the snapshot with the best training accuracy over the run (including
the random initialization).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .ansatz import AnsatzSpec, build_unitary, expectation_gradient_batch, random_params
from .encode import EncodedSet
from .predict import Observable, accuracy, default_observable, f_pred, f_pred_batch, loss_grad


@dataclass
class SgdCfg:
    """Stochastic gradient descent settings.

    ``batch=None`` selects min(32, N).  Sampling and the angle
    initialization are driven by ``seed``; a fixed (seed, cfg) pair makes
    training bitwise reproducible.
    """

    iters: int = 300
    eta: float = 0.1
    batch: int | None = None
    seed: int = 0

    def __post_init__(self) -> None:
        if self.iters < 0:
            raise ValueError(f"iters must be >= 0, got {self.iters}")
        if self.eta <= 0.0:
            raise ValueError(f"learning rate must be positive, got {self.eta}")
        if self.batch is not None and self.batch < 1:
            raise ValueError(f"batch must be >= 1, got {self.batch}")


@dataclass
class QclModel:
    """A trained circuit classifier snapshot."""

    spec: AnsatzSpec
    theta: np.ndarray
    theta_b: float
    use_bias: bool
    obs: Observable


@dataclass
class QclTrace:
    """Per-iteration training record (index 0 is the initialization)."""

    train_accuracy: list[float] = field(default_factory=list)
    best_iter: int = 0


def qcl_fit(
    data: EncodedSet,
    spec: AnsatzSpec,
    loss: str = "se",
    cfg: SgdCfg | None = None,
    use_bias: bool = False,
    obs: Observable | None = None,
) -> tuple[QclModel, QclTrace]:
    """Train circuit angles by SGD and return the best-training snapshot."""
    cfg = cfg or SgdCfg()
    n_samples = len(data)
    if n_samples == 0:
        raise ValueError("cannot fit on an empty dataset")
    if not np.all(np.isin(data.labels, (-1, 1))):
        raise ValueError("labels must be -1 or +1")
    if data.dim != spec.dim:
        raise ValueError(f"state dimension {data.dim} != circuit dimension {spec.dim}")
    obs = obs or default_observable(spec.n)
    batch = cfg.batch if cfg.batch is not None else min(32, n_samples)
    batch = min(batch, n_samples)

    rng = np.random.default_rng(cfg.seed)
    theta = random_params(spec, rng)
    theta_b = 0.0

    def train_accuracy(t: np.ndarray, tb: float) -> float:
        u = build_unitary(spec, t)
        return accuracy(f_pred_batch(u, data.states, obs, tb), data.labels)

    trace = QclTrace()
    best_acc = train_accuracy(theta, theta_b)
    trace.train_accuracy.append(best_acc)
    best = (theta.copy(), theta_b, 0)

    for it in range(1, cfg.iters + 1):
        idx = rng.choice(n_samples, size=batch, replace=False)
        states = data.states[idx]
        labels = data.labels[idx]
        u = build_unitary(spec, theta)
        preds = f_pred_batch(u, states, obs, theta_b)
        lp = loss_grad(loss, labels, preds)
        grads = expectation_gradient_batch(spec, theta, states, obs)
        theta = theta - cfg.eta * (lp @ grads) / batch
        if use_bias:
            theta_b = theta_b - cfg.eta * float(np.mean(lp))
        acc = train_accuracy(theta, theta_b)
        trace.train_accuracy.append(acc)
        if acc > best_acc:
            best_acc = acc
            best = (theta.copy(), theta_b, it)

    trace.best_iter = best[2]
    model = QclModel(spec=spec, theta=best[0], theta_b=best[1], use_bias=use_bias, obs=obs)
    return model, trace


def qcl_predict(model: QclModel, psi_in: np.ndarray) -> float:
    """Prediction of a trained model on one encoded state."""
    u = build_unitary(model.spec, model.theta)
    return f_pred(u, psi_in, model.obs, model.theta_b)


def qcl_predict_batch(model: QclModel, states: np.ndarray) -> np.ndarray:
    """Vectorized predictions over rows of ``states``."""
    u = build_unitary(model.spec, model.theta)
    return f_pred_batch(u, states, model.obs, model.theta_b)
