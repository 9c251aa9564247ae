"""Amplitude encoding of feature vectors into unit state vectors.

A feature vector x in R^M is written into the first M amplitudes of an
n-qubit state with n = ceil(log2 M) (at least one qubit), normalized to
unit length.  The remaining 2^n - M amplitudes are padded with zeros.
Real inputs produce real state vectors; no feature standardization is
applied here.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import tolerances as tol


def qubits_for(m: int) -> int:
    """Number of qubits needed to amplitude-encode an M-dimensional vector."""
    if m < 1:
        raise ValueError(f"feature dimension must be >= 1, got {m}")
    return max(1, int(m - 1).bit_length())


def amplitude_encode(x: np.ndarray) -> np.ndarray:
    """Unit state vector of dimension 2^ceil(log2 M) proportional to x.

    Rejects the all-zero vector (its direction is undefined).  For c > 0,
    encode(c x) == encode(x); negating x negates the whole state.
    """
    x = np.asarray(x, dtype=float)
    if x.ndim != 1:
        raise ValueError(f"expected a 1-d feature vector, got shape {x.shape}")
    norm = np.linalg.norm(x)
    if norm == 0.0:
        raise ValueError("cannot amplitude-encode the all-zero vector")
    dim = 2 ** qubits_for(x.shape[0])
    psi = np.zeros(dim)
    psi[: x.shape[0]] = x / norm
    # Renormalize once to absorb rounding in the division above.
    psi /= np.linalg.norm(psi)
    assert abs(np.linalg.norm(psi) - 1.0) <= tol.ENCODE_NORM
    return psi


@dataclass
class EncodedSet:
    """Amplitude-encoded samples: one unit state per row, labels in {-1, +1}."""

    states: np.ndarray  # (N, 2^n)
    labels: np.ndarray  # (N,) values in {-1, +1}

    def __len__(self) -> int:
        return self.states.shape[0]

    @property
    def dim(self) -> int:
        return self.states.shape[1]


def encode_dataset(features: np.ndarray, labels: np.ndarray) -> EncodedSet:
    """Amplitude-encode every row of a feature matrix."""
    features = np.asarray(features, dtype=float)
    labels = np.asarray(labels)
    if features.ndim != 2:
        raise ValueError(f"expected a 2-d feature matrix, got shape {features.shape}")
    if features.shape[0] != labels.shape[0]:
        raise ValueError("feature and label counts differ")
    states = np.stack([amplitude_encode(row) for row in features])
    return EncodedSet(states=states, labels=labels)
