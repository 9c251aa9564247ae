"""Dense complex linear algebra for small quantum systems.

Matrices and state vectors are plain numpy arrays, row-major, with dtype
``complex128`` (or ``float64`` where a computation stays real).  All
functions are pure and thread-safe.  Sizes are expected to stay at or
below 256 x 256; nothing here is tuned for larger problems.

Conventions: ``A.conj().T`` is the Hermitian conjugate, written ``A^H``
in docstrings.  Singular values are returned in descending order.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import tolerances as tol
from .errors import NumericalError


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product: block matrix with block (i, j) equal to a[i, j] * b."""
    return np.kron(np.asarray(a), np.asarray(b))


def frobenius_norm(a: np.ndarray) -> float:
    """sqrt(sum |a_ij|^2), equal to sqrt(tr(A^H A)) and to sqrt(sum sigma_i^2)."""
    a = np.asarray(a)
    return float(np.sqrt(np.sum(np.abs(a) ** 2)))


@dataclass(frozen=True)
class SvdResult:
    """Factors of ``a = k1 @ diag(sigma) @ k2dag`` with unitary k1 and k2dag.

    ``sigma`` is real, non-negative and descending.  For a real input the
    factors are real (orthogonal) as well.
    """

    k1: np.ndarray
    sigma: np.ndarray
    k2dag: np.ndarray


def svd(a: np.ndarray) -> SvdResult:
    """Singular value decomposition of a square matrix.

    Raises NumericalError if the underlying solver does not converge or if
    the reconstruction ``k1 @ diag(sigma) @ k2dag`` misses the input by more
    than the central tolerance; the error message carries the residual.
    """
    a = np.asarray(a)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"svd expects a square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a.view(float) if np.iscomplexobj(a) else a)):
        raise ValueError("svd input contains NaN or Inf")
    try:
        k1, sigma, k2dag = np.linalg.svd(a)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"SVD did not converge: {exc}") from exc
    residual = frobenius_norm((k1 * sigma) @ k2dag - a)
    if residual > tol.SVD_RECONSTRUCTION * max(1.0, frobenius_norm(a)):
        raise NumericalError(f"SVD reconstruction residual {residual:.3e} too large")
    return SvdResult(k1=k1, sigma=sigma, k2dag=k2dag)


def herm_expm(h: np.ndarray, t: float) -> np.ndarray:
    """Unitary exp(-i t H) for Hermitian H, via full eigendecomposition.

    The eigendecomposition route keeps the result unitary to near machine
    precision, which downstream code relies on more than speed.
    """
    h = np.asarray(h)
    if h.ndim != 2 or h.shape[0] != h.shape[1]:
        raise ValueError(f"herm_expm expects a square matrix, got shape {h.shape}")
    defect = frobenius_norm(h - h.conj().T)
    if defect > tol.HERMITICITY:
        raise ValueError(f"herm_expm input is not Hermitian (defect {defect:.3e})")
    w, v = np.linalg.eigh(h)
    u = (v * np.exp(-1j * t * w)) @ v.conj().T
    unit_defect = frobenius_norm(u.conj().T @ u - np.eye(h.shape[0]))
    if unit_defect > tol.EXPM_UNITARITY:
        raise NumericalError(f"herm_expm result not unitary (defect {unit_defect:.3e})")
    return u


def expectation(o: np.ndarray, psi: np.ndarray) -> float:
    """Real expectation value <psi|O|psi> of a Hermitian operator.

    Requires a unit-norm state; the imaginary residue of the sandwich is
    checked against the central tolerance before being discarded.
    """
    o = np.asarray(o)
    psi = np.asarray(psi)
    if o.shape[0] != o.shape[1] or o.shape[1] != psi.shape[0]:
        raise ValueError(f"dimension mismatch: operator {o.shape}, state {psi.shape}")
    norm = np.linalg.norm(psi)
    if abs(norm - 1.0) > tol.STATE_NORM:
        raise ValueError(f"expectation requires a unit state, got norm {norm!r}")
    value = np.vdot(psi, o @ psi)
    if abs(value.imag) > tol.EXPECTATION_IMAG:
        raise NumericalError(
            f"expectation has imaginary residue {value.imag:.3e}; operator not Hermitian?"
        )
    return float(value.real)
