#!/usr/bin/env python3
"""Regenerate the CSV snapshots bundled under src/vqckit/data/.

Sources are the copies of the UCI iris, breast-cancer (WDBC) and wine
datasets distributed with scikit-learn, so this script runs offline.
Label column convention: 1 for the named target class, 0 otherwise
(the loader maps 0 -> -1, 1 -> +1).

Files written:
  iris_0_1.csv      iris, classes {setosa, versicolor}; versicolor -> 1
  iris_0_non0.csv   iris, setosa vs rest; setosa -> 1
  iris_1_non1.csv   iris, versicolor vs rest; versicolor -> 1
  cancer_0_1.csv    WDBC; malignant -> 1, benign -> 0
  wine_0_non0.csv   wine, class-1 vs rest; class-1 -> 1.  The 13 standard
                    attributes are padded with one constant-zero column to
                    match the commonly quoted 14-dimensional form; the pad
                    is inert for every model in this package.
"""

from pathlib import Path

import numpy as np
from sklearn.datasets import load_breast_cancer, load_iris, load_wine

OUT = Path(__file__).resolve().parents[1] / "src" / "vqckit" / "data"


def write(name: str, x: np.ndarray, y: np.ndarray) -> None:
    lines = []
    for row, label in zip(x, y):
        cells = [repr(float(v)) for v in row] + [str(int(label))]
        lines.append(",".join(cells))
    (OUT / name).write_text("\n".join(lines) + "\n", encoding="utf-8", newline="\n")
    print(f"{name}: N={x.shape[0]} M={x.shape[1]}")


def main() -> None:
    OUT.mkdir(parents=True, exist_ok=True)

    iris = load_iris()
    x, t = iris.data, iris.target
    keep = t <= 1
    write("iris_0_1.csv", x[keep], (t[keep] == 1).astype(int))
    write("iris_0_non0.csv", x, (t == 0).astype(int))
    write("iris_1_non1.csv", x, (t == 1).astype(int))

    cancer = load_breast_cancer()
    # scikit-learn encodes malignant=0, benign=1; the bundled convention is
    # benign=0 ("B"), malignant=1 ("M").
    write("cancer_0_1.csv", cancer.data, (cancer.target == 0).astype(int))

    wine = load_wine()
    padded = np.hstack([wine.data, np.zeros((wine.data.shape[0], 1))])
    write("wine_0_non0.csv", padded, (wine.target == 0).astype(int))


if __name__ == "__main__":
    main()
