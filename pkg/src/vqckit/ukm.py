"""Direct optimization of the evolution operator under a unitarity constraint.

Instead of tuning circuit angles, the full 2^n x 2^n operator is learned
by an alternating-splitting scheme.  Three coupled iterates are kept: a
relaxed operator X (unconstrained), its unitary projection P, and a
running constraint residual D.  One outer round performs

    X, theta_b <- argmin  J_cost(X, theta_b) + (r/2) ||X - P + D||_F^2
    P          <- nearest unitary to X + D          (SVD projection)
    D          <- D + X - P

with the X update carried out by a fixed number of Fletcher-Reeves CG
steps on the flattened real coordinates of X (interleaved Re/Im pairs in
complex mode, the raw entries in real mode, with the bias appended when
it is being estimated).

Gradients of the data term use the rank-one structure of each sample:
writing w_i = O X psi_i, the derivative of the cost with respect to the
complex entries of X is (2/N) sum_i l'_i w_i psi_i^H, assembled without
ever forming the projector psi_i psi_i^H.

Three classifiers fall out of a run and all are tracked: X itself (a
classical relaxation, not implementable as a circuit), P, and the nearest
unitary to X alone ("OU of X").  For each variant the snapshot with the
best training accuracy over the outer iterations is returned.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import tolerances as tol
from .encode import EncodedSet
from .errors import NumericalError
from .optim import CG_LINE_SEARCH, LineSearchCfg, cg_minimize
from .predict import Observable, accuracy, default_observable, f_pred, f_pred_batch, loss_grad
from .predict import loss as loss_fn
from .qmat import frobenius_norm, svd

VARIANTS = ("X", "P", "OUX")


@dataclass
class UkmCfg:
    """Splitting-loop settings.

    ``mode`` selects real or complex matrices.  ``outer_iters`` is the
    number of splitting rounds and ``cg_iters`` the exact number of CG
    steps per X update.  The seed only matters when ``random_init`` is
    set; the default identity initialization makes a run deterministic.
    """

    mode: str = "complex"
    use_bias: bool = False
    r: float = 0.010
    outer_iters: int = 30
    cg_iters: int = 10
    seed: int = 0
    random_init: bool = False
    line_search: LineSearchCfg = field(default_factory=lambda: CG_LINE_SEARCH)

    def __post_init__(self) -> None:
        if self.mode not in ("real", "complex"):
            raise ValueError(f"mode must be 'real' or 'complex', got {self.mode!r}")
        if self.r <= 0.0:
            raise ValueError(f"penalty coefficient r must be positive, got {self.r}")
        if self.outer_iters < 1 or self.cg_iters < 1:
            raise ValueError("outer_iters and cg_iters must be >= 1")


@dataclass
class SocState:
    """Iterates of the splitting loop at outer round k."""

    x: np.ndarray
    p: np.ndarray
    d: np.ndarray
    theta_b: float
    r: float
    k: int = 0


def ou(y: np.ndarray) -> np.ndarray:
    """Nearest unitary (operator unitarization) K1 @ K2^H from the SVD.

    Minimizes ||P - Y||_F over unitary P; for real input the result is a
    real orthogonal matrix.  Fixes unitary inputs and is idempotent.
    """
    res = svd(y)
    p = res.k1 @ res.k2dag
    defect = frobenius_norm(p.conj().T @ p - np.eye(p.shape[0]))
    if defect > tol.PROJECTION_UNITARITY:
        raise NumericalError(f"unitarization failed (defect {defect:.3e})")
    return p


def _pack(x_mat: np.ndarray, theta_b: float, mode: str, use_bias: bool) -> np.ndarray:
    if mode == "real":
        v = np.asarray(x_mat, dtype=float).ravel()
    else:
        flat = np.asarray(x_mat, dtype=complex).ravel()
        v = np.empty(2 * flat.shape[0])
        v[0::2] = flat.real
        v[1::2] = flat.imag
    if use_bias:
        v = np.concatenate([v, [theta_b]])
    return v


def _unpack(v: np.ndarray, dim: int, mode: str, use_bias: bool) -> tuple[np.ndarray, float]:
    theta_b = float(v[-1]) if use_bias else 0.0
    body = v[:-1] if use_bias else v
    if mode == "real":
        x_mat = body.reshape(dim, dim).copy()
    else:
        x_mat = (body[0::2] + 1j * body[1::2]).reshape(dim, dim)
    return x_mat, theta_b


def _soc_objective(data, obs_mat, loss, r, p, d, mode, use_bias):
    """(value, gradient) closure of the penalized cost in flat coordinates."""
    dim = data.dim
    n_samples = len(data)
    psi = np.ascontiguousarray(data.states.T)  # columns are states
    if mode == "complex":
        psi = psi.astype(complex)
    y = data.labels.astype(float)
    target = p - d  # X is pulled toward P - D

    def fn(v: np.ndarray) -> tuple[float, np.ndarray]:
        x_mat, theta_b = _unpack(v, dim, mode, use_bias)
        out = x_mat @ psi
        o_out = obs_mat @ out
        preds = np.real(np.einsum("ij,ij->j", out.conj(), o_out)) + theta_b
        gap = x_mat - target
        value = float(np.mean(loss_fn(loss, y, preds))) + 0.5 * r * frobenius_norm(gap) ** 2
        lp = loss_grad(loss, y, preds)
        g_mat = (2.0 / n_samples) * ((o_out * lp) @ psi.conj().T) + r * gap
        if mode == "real":
            g_mat = np.real(g_mat)
        grad = _pack(g_mat, float(np.mean(lp)), mode, use_bias)
        return value, grad

    return fn


def soc_x_step(
    state: SocState,
    data: EncodedSet,
    loss: str,
    cfg: UkmCfg,
    obs: Observable | None = None,
) -> tuple[np.ndarray, float, list[float]]:
    """Run the CG inner loop on the penalized cost; returns (X, theta_b, trace)."""
    obs = obs or default_observable(int(np.log2(data.dim)))
    obs_mat = obs.weight * obs.matrix
    if cfg.mode == "real":
        obs_mat = np.real(obs_mat)
    fn = _soc_objective(data, obs_mat, loss, state.r, state.p, state.d, cfg.mode, cfg.use_bias)
    v0 = _pack(state.x, state.theta_b, cfg.mode, cfg.use_bias)
    report = cg_minimize(fn, v0, cfg.cg_iters, cfg.line_search)
    if not report.converged:
        raise NumericalError("CG inner loop aborted on a non-finite objective")
    x_new, theta_b_new = _unpack(report.x, data.dim, cfg.mode, cfg.use_bias)
    return x_new, theta_b_new, report.trace


@dataclass
class UkmModel:
    """One reported classifier variant (operator plus bias snapshot)."""

    variant: str
    operator: np.ndarray
    theta_b: float
    obs: Observable
    best_iter: int
    train_accuracy: float


@dataclass
class UkmFit:
    """Result of a full splitting run."""

    models: dict[str, UkmModel]
    accuracy_trace: dict[str, list[float]]
    jsoc_traces: list[list[float]]
    state: SocState


def ukm_fit(
    data: EncodedSet,
    cfg: UkmCfg | None = None,
    loss: str = "se",
    obs: Observable | None = None,
) -> UkmFit:
    """Alternate X / P / D updates and track all three classifier variants."""
    cfg = cfg or UkmCfg()
    if len(data) == 0:
        raise ValueError("cannot fit on an empty dataset")
    if not np.all(np.isin(data.labels, (-1, 1))):
        raise ValueError("labels must be -1 or +1")
    dim = data.dim
    n_qubits = int(np.log2(dim))
    if 2**n_qubits != dim:
        raise ValueError(f"state dimension {dim} is not a power of two")
    obs = obs or default_observable(n_qubits)

    dtype = float if cfg.mode == "real" else complex
    if cfg.random_init:
        rng = np.random.default_rng(cfg.seed)
        if cfg.mode == "real":
            q, _ = np.linalg.qr(rng.standard_normal((dim, dim)))
            p0 = q
        else:
            q, _ = np.linalg.qr(
                rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
            )
            p0 = q
    else:
        p0 = np.eye(dim, dtype=dtype)
    state = SocState(x=p0.copy(), p=p0, d=np.zeros((dim, dim), dtype=dtype), theta_b=0.0, r=cfg.r)

    def train_accuracy(op: np.ndarray, tb: float) -> float:
        return accuracy(f_pred_batch(op, data.states, obs, tb), data.labels)

    def variant_ops(st: SocState) -> dict[str, np.ndarray]:
        return {"X": st.x, "P": st.p, "OUX": ou(st.x)}

    acc_trace: dict[str, list[float]] = {v: [] for v in VARIANTS}
    best: dict[str, tuple[float, np.ndarray, float, int]] = {}
    for name, op in variant_ops(state).items():
        acc = train_accuracy(op, state.theta_b)
        acc_trace[name].append(acc)
        best[name] = (acc, op.copy(), state.theta_b, 0)

    jsoc_traces: list[list[float]] = []
    for k in range(1, cfg.outer_iters + 1):
        x_new, theta_b_new, trace = soc_x_step(state, data, loss, cfg, obs)
        state.x = x_new
        state.theta_b = theta_b_new
        state.p = ou(state.x + state.d)
        state.d = state.d + state.x - state.p
        state.k = k
        jsoc_traces.append(trace)
        for name, op in variant_ops(state).items():
            acc = train_accuracy(op, state.theta_b)
            acc_trace[name].append(acc)
            if acc > best[name][0]:
                best[name] = (acc, op.copy(), state.theta_b, k)

    models = {
        name: UkmModel(
            variant=name,
            operator=snapshot[1],
            theta_b=snapshot[2],
            obs=obs,
            best_iter=snapshot[3],
            train_accuracy=snapshot[0],
        )
        for name, snapshot in best.items()
    }
    return UkmFit(models=models, accuracy_trace=acc_trace, jsoc_traces=jsoc_traces, state=state)


def ukm_predict(model: UkmModel, psi_in: np.ndarray) -> float:
    """Prediction of one learned variant on one encoded state."""
    return f_pred(model.operator, psi_in, model.obs, model.theta_b)


def ukm_predict_batch(model: UkmModel, states: np.ndarray) -> np.ndarray:
    """Vectorized predictions over rows of ``states``."""
    return f_pred_batch(model.operator, states, model.obs, model.theta_b)
