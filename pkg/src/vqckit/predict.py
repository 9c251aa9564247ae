"""Shared prediction head, loss functions and classification metrics.

A classifier state |psi_in> is evolved by an operator U (unitary for the
quantum models, unconstrained for their classical relaxations) and scored
against a weighted set of Hermitian observables:

    f_pred(psi; U, theta_b) = sum_j xi_j * Re <U psi | O_j | U psi> + theta_b

Labels live in {-1, +1}; the decision rule is sign(f_pred) with sign(0)
counted as +1.  The default measurement is Pauli-Z on qubit 1 with unit
weight.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import tolerances as tol
from .encode import amplitude_encode
from .gates import embed1, pauli
from .qmat import frobenius_norm


@dataclass(frozen=True)
class Observable:
    """A Hermitian measurement operator with a fixed real weight."""

    matrix: np.ndarray
    weight: float = 1.0

    def __post_init__(self) -> None:
        defect = frobenius_norm(self.matrix - np.asarray(self.matrix).conj().T)
        if defect > tol.HERMITICITY:
            raise ValueError(f"observable is not Hermitian (defect {defect:.3e})")


def default_observable(n: int) -> Observable:
    """Pauli-Z on qubit 1 of an n-qubit register, weight 1."""
    return Observable(matrix=embed1(pauli("z"), 1, n), weight=1.0)


def _combined_matrix(obs: Observable | Sequence[Observable]) -> np.ndarray:
    """Fold a weighted observable list into one Hermitian matrix."""
    if isinstance(obs, Observable):
        return obs.weight * obs.matrix
    total = None
    for o in obs:
        term = o.weight * o.matrix
        total = term if total is None else total + term
    if total is None:
        raise ValueError("need at least one observable")
    return total


def f_pred(
    u: np.ndarray,
    psi_in: np.ndarray,
    obs: Observable | Sequence[Observable],
    theta_b: float = 0.0,
) -> float:
    """Prediction sum_j xi_j <O_j> + theta_b for the evolved state U psi_in."""
    u = np.asarray(u)
    psi_in = np.asarray(psi_in)
    if u.shape[1] != psi_in.shape[0]:
        raise ValueError(f"dimension mismatch: operator {u.shape}, state {psi_in.shape}")
    out = u @ psi_in
    o = _combined_matrix(obs)
    if o.shape[0] != out.shape[0]:
        raise ValueError(f"dimension mismatch: observable {o.shape}, state {out.shape}")
    return float(np.real(np.vdot(out, o @ out))) + theta_b


def f_pred_batch(
    u: np.ndarray,
    states: np.ndarray,
    obs: Observable | Sequence[Observable],
    theta_b: float = 0.0,
) -> np.ndarray:
    """Vectorized f_pred over rows of ``states``."""
    u = np.asarray(u)
    states = np.asarray(states)
    o = _combined_matrix(obs)
    out = states @ u.T  # row i is (U psi_i)^T
    vals = np.einsum("ij,ij->i", out.conj(), out @ o.T)
    return np.real(vals) + theta_b


_SE_LABELS = (-1.0, 1.0)


def _check_pm1(y: np.ndarray) -> None:
    if not np.all(np.isin(y, _SE_LABELS)):
        raise ValueError("labels must be -1 or +1")


def loss(kind: str, y, z):
    """Pointwise loss l(y, z); accepts scalars or numpy arrays.

    Kinds: 'se' (squared error, labels +-1), 'hinge' (labels +-1),
    'xe' (cross entropy, labels {0, 1}, predictions strictly inside (0, 1)).
    """
    y = np.asarray(y, dtype=float)
    z = np.asarray(z, dtype=float)
    if kind == "se":
        _check_pm1(y)
        return 0.5 * np.abs(y - z) ** 2
    if kind == "hinge":
        _check_pm1(y)
        return np.maximum(0.0, 1.0 - y * z)
    if kind == "xe":
        if not np.all(np.isin(y, (0.0, 1.0))):
            raise ValueError("cross-entropy labels must be 0 or 1")
        if np.any(z <= 0.0) or np.any(z >= 1.0):
            raise ValueError("cross-entropy predictions must lie strictly in (0, 1)")
        return -y * np.log(z) - (1.0 - y) * np.log(1.0 - z)
    raise ValueError(f"unknown loss kind {kind!r}")


def loss_grad(kind: str, y, z):
    """Derivative of loss(kind, y, z) with respect to the prediction z.

    The hinge subgradient at the kink (y z == 1) is taken to be 0.
    """
    y = np.asarray(y, dtype=float)
    z = np.asarray(z, dtype=float)
    if kind == "se":
        _check_pm1(y)
        return z - y
    if kind == "hinge":
        _check_pm1(y)
        return np.where(1.0 - y * z > 0.0, -y, 0.0)
    if kind == "xe":
        if not np.all(np.isin(y, (0.0, 1.0))):
            raise ValueError("cross-entropy labels must be 0 or 1")
        if np.any(z <= 0.0) or np.any(z >= 1.0):
            raise ValueError("cross-entropy predictions must lie strictly in (0, 1)")
        return -y / z + (1.0 - y) / (1.0 - z)
    raise ValueError(f"unknown loss kind {kind!r}")


def correspondence_check(
    u: np.ndarray, obs: Observable | Sequence[Observable], x: np.ndarray
) -> float:
    """Residual between the measurement-based prediction and its kernel form.

    The prediction on an amplitude-encoded x can be rewritten as the double
    sum sum_{k,l} w_kl psi_k^*(x) psi_l(x) with weight matrix
    w = sum_j xi_j U^H O_j U.  Returns |f_pred - double sum|, which is zero
    up to rounding for any U, observables and x.
    """
    psi = amplitude_encode(np.asarray(x, dtype=float))
    u = np.asarray(u)
    o = _combined_matrix(obs)
    w = u.conj().T @ o @ u
    double_sum = np.einsum("k,kl,l->", psi.conj(), w, psi)
    return float(abs(f_pred(u, psi, obs, 0.0) - np.real(double_sum)))


def decide(predictions: np.ndarray) -> np.ndarray:
    """Decision rule sign(z) with sign(0) = +1."""
    z = np.asarray(predictions, dtype=float)
    return np.where(z >= 0.0, 1.0, -1.0)


def accuracy(predictions: np.ndarray, labels: np.ndarray) -> float:
    """Fraction of predictions whose sign matches the +-1 label."""
    z = np.asarray(predictions, dtype=float)
    y = np.asarray(labels, dtype=float)
    if z.shape != y.shape:
        raise ValueError(f"shape mismatch: predictions {z.shape}, labels {y.shape}")
    if z.size == 0:
        raise ValueError("accuracy of an empty prediction set is undefined")
    _check_pm1(y)
    return float(np.mean(decide(z) == y))
