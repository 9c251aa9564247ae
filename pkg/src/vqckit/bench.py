"""Benchmark adapters binding the classifiers to the CV harness."""

from __future__ import annotations

import numpy as np

from .ansatz import AnsatzKind, AnsatzSpec
from .encode import encode_dataset, qubits_for
from .harness import Dataset, FunctionAlgo
from .kernel import FeatureMap, kernel_fit, kernel_predict_batch
from .predict import accuracy
from .qcl import SgdCfg, qcl_fit, qcl_predict_batch
from .ukm import UkmCfg, ukm_fit, ukm_predict_batch

VARIANT_NONE = "-"


def qcl_algo(
    kind: AnsatzKind | str,
    layers: int = 5,
    loss: str = "se",
    iters: int = 300,
    eta: float = 0.1,
    batch: int | None = None,
    use_bias: bool = False,
) -> FunctionAlgo:
    kind = AnsatzKind(kind)

    def run(train: Dataset, test: Dataset, seed: int):
        spec = AnsatzSpec(kind=kind, n=qubits_for(train.x.shape[1]), layers=layers)
        cfg = SgdCfg(iters=iters, eta=eta, batch=batch, seed=seed)
        enc_train = encode_dataset(train.x, train.y)
        enc_test = encode_dataset(test.x, test.y)
        model, trace = qcl_fit(enc_train, spec, loss=loss, cfg=cfg, use_bias=use_bias)
        train_acc = max(trace.train_accuracy)
        test_acc = accuracy(qcl_predict_batch(model, enc_test.states), enc_test.labels)
        return [(VARIANT_NONE, train_acc, test_acc, trace.best_iter)]

    return FunctionAlgo(name="qcl", fn=run)


def ukm_algo(
    mode: str = "complex",
    use_bias: bool = False,
    r: float = 0.010,
    outer_iters: int = 30,
    cg_iters: int = 10,
    loss: str = "se",
) -> FunctionAlgo:
    def run(train: Dataset, test: Dataset, seed: int):
        cfg = UkmCfg(
            mode=mode,
            use_bias=use_bias,
            r=r,
            outer_iters=outer_iters,
            cg_iters=cg_iters,
            seed=seed,
        )
        enc_train = encode_dataset(train.x, train.y)
        enc_test = encode_dataset(test.x, test.y)
        fit = ukm_fit(enc_train, cfg, loss=loss)
        rows = []
        for variant in ("X", "P", "OUX"):
            model = fit.models[variant]
            test_acc = accuracy(ukm_predict_batch(model, enc_test.states), enc_test.labels)
            rows.append((variant, model.train_accuracy, test_acc, model.best_iter))
        return rows

    return FunctionAlgo(name="ukm", fn=run)


def kernel_algo(fm: FeatureMap, lam: float) -> FunctionAlgo:
    def run(train: Dataset, test: Dataset, seed: int):
        model = kernel_fit(train.x, train.y, fm, lam)
        train_acc = accuracy(kernel_predict_batch(model, train.x), train.y)
        test_acc = accuracy(kernel_predict_batch(model, test.x), test.y)
        return [(fm.kind, train_acc, test_acc, 0)]

    return FunctionAlgo(name="kernel", fn=run)
