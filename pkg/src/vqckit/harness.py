"""Dataset ingestion, cross-validation and experiment aggregation.

CSV contract: UTF-8, LF, no header, comma separated, M floating-point
feature columns followed by one integer label column in {0, 1} or
{-1, 1}.  Labels 0/1 are mapped to -1/+1 on load.

Cross-validation uses a seeded Fisher-Yates shuffle (the permutation is
defined algorithmically, so splits are identical on every platform)
followed by contiguous chunking into k folds of near-equal size.  Folds
are not stratified; heavily imbalanced datasets may produce skewed folds.
"""

from __future__ import annotations

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Protocol

import numpy as np

from .errors import DataError
from .threads import thread_count


@dataclass
class Dataset:
    """Feature rows with labels in {-1, +1}."""

    name: str
    x: np.ndarray  # (N, M)
    y: np.ndarray  # (N,)

    def __post_init__(self) -> None:
        if self.x.ndim != 2 or self.x.shape[0] != self.y.shape[0]:
            raise ValueError(f"inconsistent shapes: X {self.x.shape}, y {self.y.shape}")
        if not np.all(np.isfinite(self.x)):
            raise DataError(f"{self.name}: features contain NaN or Inf")
        if not np.all(np.isin(self.y, (-1, 1))):
            raise DataError(f"{self.name}: labels must be -1 or +1 after mapping")

    def subset(self, idx: np.ndarray, suffix: str = "") -> "Dataset":
        return Dataset(name=self.name + suffix, x=self.x[idx], y=self.y[idx])


def load_csv(path: str, name: str | None = None) -> Dataset:
    """Parse a dataset CSV per the contract above."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            lines = [line for line in fh.read().splitlines() if line.strip()]
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc}") from exc
    if not lines:
        raise DataError(f"{path}: empty file")
    rows = []
    labels = []
    width = None
    for i, line in enumerate(lines):
        fields = line.split(",")
        if width is None:
            width = len(fields)
            if width < 2:
                raise DataError(f"{path}: need at least one feature and a label column")
        elif len(fields) != width:
            raise DataError(f"{path}: row {i} has {len(fields)} columns, expected {width}")
        try:
            values = [float(f) for f in fields[:-1]]
            label = float(fields[-1])
        except ValueError as exc:
            raise DataError(f"{path}: row {i}: {exc}") from None
        if label not in (0.0, 1.0, -1.0):
            raise DataError(f"{path}: row {i}: label {fields[-1]!r} not in {{0,1}} or {{-1,1}}")
        rows.append(values)
        labels.append(label)
    y = np.array(labels)
    if np.any(y == 0.0):
        if np.any(y == -1.0):
            raise DataError(f"{path}: labels mix 0/1 and -1/+1 conventions")
        y = np.where(y == 0.0, -1.0, 1.0)
    return Dataset(name=name or path, x=np.array(rows), y=y)


def coarse_grain_mnist(img: np.ndarray) -> np.ndarray:
    """Deterministic 28x28 -> 16x16 area-weighted average pooling.

    Output pixel (r, c) averages the 1.75 x 1.75 source window it covers,
    with fractional boundary pixels weighted by overlap; constants are
    preserved exactly up to rounding.
    """
    img = np.asarray(img, dtype=float)
    if img.shape != (28, 28):
        raise ValueError(f"expected a 28x28 image, got shape {img.shape}")
    src, dst = 28, 16
    scale = src / dst
    weights = np.zeros((dst, src))
    for r in range(dst):
        lo, hi = r * scale, (r + 1) * scale
        for s in range(src):
            overlap = min(hi, s + 1) - max(lo, s)
            if overlap > 0:
                weights[r, s] = overlap / scale
    return weights @ img @ weights.T


@dataclass
class CvPlan:
    """k-fold cross-validation repeated for several shuffle seeds."""

    folds: int = 5
    seeds: tuple[int, ...] = (0, 1, 2, 3, 4)

    def __post_init__(self) -> None:
        if self.folds < 2:
            raise ValueError(f"need at least 2 folds, got {self.folds}")
        if not self.seeds:
            raise ValueError("need at least one seed")


def _fisher_yates(n: int, seed: int) -> np.ndarray:
    idx = np.arange(n)
    rng = np.random.default_rng(seed)
    for i in range(n - 1, 0, -1):
        j = int(rng.integers(0, i + 1))
        idx[i], idx[j] = idx[j], idx[i]
    return idx


def kfold_split(n: int, folds: int, seed: int) -> list[tuple[np.ndarray, np.ndarray]]:
    """Seeded shuffle + contiguous chunking; returns (train, test) index pairs."""
    if n < folds:
        raise ValueError(f"cannot split {n} samples into {folds} folds")
    perm = _fisher_yates(n, seed)
    base, rem = divmod(n, folds)
    splits = []
    start = 0
    for f in range(folds):
        size = base + (1 if f < rem else 0)
        test = perm[start : start + size]
        train = np.concatenate([perm[:start], perm[start + size :]])
        splits.append((train, test))
        start += size
    return splits


@dataclass
class RunRecord:
    """One (algorithm, variant, dataset, fold, seed) result row."""

    algo: str
    variant: str
    dataset: str
    fold: int
    seed: int
    train_acc: float
    test_acc: float
    best_iter: int
    wall_time: float

    def __post_init__(self) -> None:
        if not (0.0 <= self.train_acc <= 1.0 and 0.0 <= self.test_acc <= 1.0):
            raise ValueError("accuracies must lie in [0, 1]")


class Algo(Protocol):
    """One benchmark algorithm: a name plus a fit-and-score callable."""

    name: str

    def run(self, train: Dataset, test: Dataset, seed: int) -> list[tuple[str, float, float, int]]:
        """Returns (variant, train_acc, test_acc, best_iter) tuples."""
        ...


@dataclass
class FunctionAlgo:
    """Adapter wrapping a plain callable as an Algo."""

    name: str
    fn: Callable[[Dataset, Dataset, int], list[tuple[str, float, float, int]]]

    def run(self, train: Dataset, test: Dataset, seed: int):
        return self.fn(train, test, seed)


@dataclass
class ExperimentResult:
    records: list[RunRecord]
    aggregates: dict[tuple[str, str], tuple[float, float]] = field(default_factory=dict)


def run_experiment(algo: Algo, dataset: Dataset, plan: CvPlan) -> ExperimentResult:
    """All (seed, fold) cells for one algorithm; records plus mean accuracies.

    Records are sorted by (dataset, algo, variant, seed, fold); aggregates
    are plain arithmetic means over cells at full float precision.
    """
    cells = []
    for seed in plan.seeds:
        splits = kfold_split(len(dataset.y), plan.folds, seed)
        for fold, (train_idx, test_idx) in enumerate(splits):
            cells.append((seed, fold, train_idx, test_idx))

    def run_cell(cell) -> list[RunRecord]:
        seed, fold, train_idx, test_idx = cell
        train = dataset.subset(train_idx)
        test = dataset.subset(test_idx)
        started = time.perf_counter()
        rows = algo.run(train, test, seed)
        elapsed = time.perf_counter() - started
        return [
            RunRecord(
                algo=algo.name,
                variant=variant,
                dataset=dataset.name,
                fold=fold,
                seed=seed,
                train_acc=train_acc,
                test_acc=test_acc,
                best_iter=best_iter,
                wall_time=elapsed,
            )
            for variant, train_acc, test_acc, best_iter in rows
        ]

    workers = min(thread_count(), len(cells))
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            batches = list(pool.map(run_cell, cells))
    else:
        batches = [run_cell(c) for c in cells]
    records = [rec for batch in batches for rec in batch]
    records.sort(key=lambda r: (r.dataset, r.algo, r.variant, r.seed, r.fold))
    aggregates: dict[tuple[str, str], tuple[float, float]] = {}
    keys = sorted({(r.algo, r.variant) for r in records})
    for key in keys:
        cells = [r for r in records if (r.algo, r.variant) == key]
        aggregates[key] = (
            float(np.mean([r.train_acc for r in cells])),
            float(np.mean([r.test_acc for r in cells])),
        )
    return ExperimentResult(records=records, aggregates=aggregates)
