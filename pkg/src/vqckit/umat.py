"""UMAT: a plain-text interchange format for unitary matrices.

Layout (LF line endings, UTF-8, whitespace separated):

    line 1:        UMAT 1 <n>            (format version 1, n qubits)
    lines 2..2^n+1: one matrix row each, 2^(n+1) decimal numbers,
                    interleaved real/imaginary parts, row-major.

Numbers are written with 17 significant digits so float64 values
round-trip bit-exactly.  The loader verifies the matrix is unitary.
"""

from __future__ import annotations

import numpy as np

from . import tolerances as tol
from .errors import DataError
from .qmat import frobenius_norm


def save_umat(path: str, u: np.ndarray) -> None:
    """Write a 2^n x 2^n unitary to ``path`` in UMAT format."""
    u = np.asarray(u, dtype=complex)
    dim = u.shape[0]
    if u.ndim != 2 or u.shape[1] != dim:
        raise ValueError(f"expected a square matrix, got shape {u.shape}")
    n = int(np.log2(dim))
    if 2**n != dim:
        raise ValueError(f"dimension {dim} is not a power of two")
    defect = frobenius_norm(u.conj().T @ u - np.eye(dim))
    if defect > tol.TARGET_UNITARITY:
        raise ValueError(f"refusing to save a non-unitary matrix (defect {defect:.3e})")
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(f"UMAT 1 {n}\n")
        for row in u:
            parts = []
            for z in row:
                parts.append(f"{z.real:.17g}")
                parts.append(f"{z.imag:.17g}")
            fh.write(" ".join(parts) + "\n")


def load_umat(path: str) -> np.ndarray:
    """Read a UMAT file; raises DataError on malformed or non-unitary input."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc}") from exc
    if not lines:
        raise DataError(f"{path}: empty file")
    header = lines[0].split()
    if len(header) != 3 or header[0] != "UMAT" or header[1] != "1":
        raise DataError(f"{path}: bad header {lines[0]!r}")
    try:
        n = int(header[2])
    except ValueError:
        raise DataError(f"{path}: bad qubit count {header[2]!r}") from None
    if n < 1:
        raise DataError(f"{path}: qubit count must be >= 1, got {n}")
    dim = 2**n
    body = [line for line in lines[1:] if line.strip()]
    if len(body) != dim:
        raise DataError(f"{path}: expected {dim} matrix rows, found {len(body)}")
    u = np.empty((dim, dim), dtype=complex)
    for i, line in enumerate(body):
        fields = line.split()
        if len(fields) != 2 * dim:
            raise DataError(f"{path}: row {i} has {len(fields)} numbers, expected {2 * dim}")
        try:
            vals = np.array([float(f) for f in fields])
        except ValueError as exc:
            raise DataError(f"{path}: row {i}: {exc}") from None
        u[i] = vals[0::2] + 1j * vals[1::2]
    defect = frobenius_norm(u.conj().T @ u - np.eye(dim))
    if defect > tol.TARGET_UNITARITY:
        raise DataError(f"{path}: matrix is not unitary (defect {defect:.3e})")
    return u
