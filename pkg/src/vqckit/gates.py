"""Quantum gate constructors on dense 2^n x 2^n matrices.

Qubits are indexed 1-based.  Qubit 1 is the most significant bit of the
computational-basis index, i.e. an operator ``g`` on qubit i of an
n-qubit register is embedded as::

    I_{2^(i-1)} (x) g (x) I_{2^(n-i)}

so basis state |b_1 b_2 ... b_n> has index b_1 * 2^(n-1) + ... + b_n.
With this ordering a controlled-X with control 1 and target 2 on two
qubits is the familiar block matrix [[I, 0], [0, X]].

Rotation angles follow the half-angle convention R^w(phi) = exp(-i phi/2 w)
for w in {X, Y, Z}, and the three-angle rotation is the ZYZ composition
R3d(phi, theta, omega) = R^z(omega) R^y(theta) R^z(phi).
"""

from __future__ import annotations

import numpy as np

from .qmat import kron

_I2 = np.eye(2, dtype=complex)

_PAULI = {
    "x": np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex),
    "y": np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex),
    "z": np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex),
}

_P0 = np.array([[1.0, 0.0], [0.0, 0.0]], dtype=complex)  # |0><0|
_P1 = np.array([[0.0, 0.0], [0.0, 1.0]], dtype=complex)  # |1><1|


def pauli(axis: str) -> np.ndarray:
    """The 2x2 Pauli matrix for axis 'x', 'y' or 'z' (case-insensitive)."""
    try:
        return _PAULI[axis.lower()].copy()
    except KeyError:
        raise ValueError(f"unknown Pauli axis {axis!r}") from None


def rot(axis: str, phi: float) -> np.ndarray:
    """Single-qubit rotation exp(-i phi/2 sigma_axis) in closed 2x2 form."""
    if not np.isfinite(phi):
        raise ValueError(f"rotation angle must be finite, got {phi!r}")
    c = np.cos(phi / 2.0)
    s = np.sin(phi / 2.0)
    axis = axis.lower()
    if axis == "x":
        return np.array([[c, -1j * s], [-1j * s, c]])
    if axis == "y":
        return np.array([[c, -s], [s, c]], dtype=complex)
    if axis == "z":
        return np.array([[np.exp(-0.5j * phi), 0.0], [0.0, np.exp(0.5j * phi)]])
    raise ValueError(f"unknown rotation axis {axis!r}")


def rot3d(phi: float, theta: float, omega: float) -> np.ndarray:
    """ZYZ rotation R^z(omega) R^y(theta) R^z(phi) in closed 2x2 form."""
    for a in (phi, theta, omega):
        if not np.isfinite(a):
            raise ValueError("rot3d angles must be finite")
    c = np.cos(theta / 2.0)
    s = np.sin(theta / 2.0)
    return np.array(
        [
            [np.exp(-0.5j * (phi + omega)) * c, -np.exp(0.5j * (phi - omega)) * s],
            [np.exp(-0.5j * (phi - omega)) * s, np.exp(0.5j * (phi + omega)) * c],
        ]
    )


def global_phase(lam: float, n: int) -> np.ndarray:
    """Global phase operator exp(-i lambda) * I on n qubits."""
    if n < 1:
        raise ValueError(f"need at least one qubit, got n={n}")
    return np.exp(-1j * lam) * np.eye(2**n, dtype=complex)


def _check_index(i: int, n: int) -> None:
    if not 1 <= i <= n:
        raise ValueError(f"qubit index {i} out of range for n={n}")


def embed1(g: np.ndarray, i: int, n: int) -> np.ndarray:
    """Embed a single-qubit operator on qubit i of an n-qubit register."""
    g = np.asarray(g)
    if g.shape != (2, 2):
        raise ValueError(f"embed1 expects a 2x2 operator, got shape {g.shape}")
    _check_index(i, n)
    out = g
    if i > 1:
        out = kron(np.eye(2 ** (i - 1), dtype=complex), out)
    if i < n:
        out = kron(out, np.eye(2 ** (n - i), dtype=complex))
    return out


def projector(i: int, n: int, outcome: int) -> np.ndarray:
    """Embedded projector |outcome><outcome| (outcome 0 or 1) on qubit i."""
    if outcome not in (0, 1):
        raise ValueError(f"projector outcome must be 0 or 1, got {outcome}")
    return embed1(_P0 if outcome == 0 else _P1, i, n)


def controlled(control: int, target: int, g: np.ndarray, n: int) -> np.ndarray:
    """Controlled single-qubit gate on n qubits: P0_c + P1_c * g_target.

    Acts as the identity whenever the control qubit is 0, and applies g to
    the target qubit when the control is 1.
    """
    _check_index(control, n)
    _check_index(target, n)
    if control == target:
        raise ValueError(f"control and target coincide (qubit {control})")
    return projector(control, n, 0) + projector(control, n, 1) @ embed1(g, target, n)
