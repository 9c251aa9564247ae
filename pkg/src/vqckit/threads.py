"""Worker-count control shared by the parallel drivers.

The VQC_THREADS environment variable caps task-level parallelism (circuit
synthesis restarts, cross-validation cells).  Results never depend on the
thread count: every task is deterministic and outputs are collected in a
fixed order.
"""

from __future__ import annotations

import os

from .errors import ConfigError


def thread_count() -> int:
    """Number of worker threads: VQC_THREADS if set, else all cores."""
    raw = os.environ.get("VQC_THREADS")
    if raw is None:
        return os.cpu_count() or 1
    try:
        value = int(raw)
    except ValueError:
        raise ConfigError(f"VQC_THREADS must be an integer, got {raw!r}") from None
    if value < 1:
        raise ConfigError(f"VQC_THREADS must be >= 1, got {value}")
    return value
