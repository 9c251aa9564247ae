"""vqckit: variational quantum classifiers on a dense classical simulator.

Three classifier families share one prediction head (amplitude-encoded
states, Hermitian measurements, sign decisions): gradient-trained layered
circuits, direct optimization of the full evolution operator under a
unitarity constraint, and a classical kernel ridge baseline.  A circuit
realization module compiles a learned unitary back into a layered
circuit, and a cross-validation harness benchmarks everything.
"""

from .ansatz import AnsatzKind, AnsatzSpec
from .encode import EncodedSet, amplitude_encode, encode_dataset, qubits_for
from .errors import ConfigError, DataError, NumericalError, VqckitError
from .harness import CvPlan, Dataset, RunRecord, kfold_split, load_csv, run_experiment
from .kernel import FeatureMap, KernelModel, kernel_fit, kernel_predict
from .predict import Observable, accuracy, default_observable, f_pred, loss, loss_grad
from .qcl import QclModel, SgdCfg, qcl_fit, qcl_predict
from .ukm import SocState, UkmCfg, ou, ukm_fit, ukm_predict
from .umat import load_umat, save_umat
from .vcr import VcrProblem, VcrResult, l_delta_search, vcr_cost, vcr_synthesize

__version__ = "0.1.0"

__all__ = [
    "AnsatzKind",
    "AnsatzSpec",
    "ConfigError",
    "CvPlan",
    "DataError",
    "Dataset",
    "EncodedSet",
    "FeatureMap",
    "KernelModel",
    "NumericalError",
    "Observable",
    "QclModel",
    "RunRecord",
    "SgdCfg",
    "SocState",
    "UkmCfg",
    "VcrProblem",
    "VcrResult",
    "VqckitError",
    "accuracy",
    "amplitude_encode",
    "default_observable",
    "encode_dataset",
    "f_pred",
    "kernel_fit",
    "kernel_predict",
    "kfold_split",
    "l_delta_search",
    "load_csv",
    "load_umat",
    "loss",
    "loss_grad",
    "ou",
    "qcl_fit",
    "qcl_predict",
    "qubits_for",
    "run_experiment",
    "save_umat",
    "ukm_fit",
    "ukm_predict",
    "vcr_cost",
    "vcr_synthesize",
    "__version__",
]
