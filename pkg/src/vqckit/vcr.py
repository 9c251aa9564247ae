"""Variational circuit realization: fit a layered circuit to a target unitary.

Given a target unitary U, find circuit angles theta and a global phase
lambda minimizing

    J(theta, lambda) = || U^H e^{-i lambda} U_c(theta; L) - I ||_F^p

(the global phase carries no physics but matters for matching a concrete
matrix).  Minimization uses BFGS from several random starts; the best run
wins, ties resolved by start order.  The realization error at L layers is

    eps_L = min_{theta, lambda} J(theta, lambda)

and L_delta is the smallest grid entry with eps_L <= delta.

The gradient is analytic.  With M = U^H e^{-i lambda} U_c - I and
T = M^H U^H e^{-i lambda}, each circuit angle contributes
2 Re tr[T dU_c/dtheta] which is accumulated with a similarity-transform
sweep over the gate sequence; the phase derivative is -2 Im tr[M].
For p != 2 the chain rule on (||.||_F^2)^(p/2) is applied.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import tolerances as tol
from .ansatz import AnsatzKind, AnsatzSpec, circuit_factors, param_count
from .optim import BFGS_LINE_SEARCH, bfgs_minimize
from .qmat import frobenius_norm
from .threads import thread_count


@dataclass
class VcrProblem:
    """A realization task: target unitary, circuit family and search budget."""

    target: np.ndarray
    kind: AnsatzKind = AnsatzKind.CNOT_BASED
    p: float = 2.0
    restarts: int = 20
    seed: int = 0
    dt: float = 0.1
    bfgs_iters: int = 500
    grad_tol: float = 1e-10

    def __post_init__(self) -> None:
        self.target = np.asarray(self.target, dtype=complex)
        self.kind = AnsatzKind(self.kind)
        dim = self.target.shape[0]
        if self.target.ndim != 2 or self.target.shape[1] != dim:
            raise ValueError(f"target must be square, got shape {self.target.shape}")
        n = int(np.log2(dim))
        if 2**n != dim:
            raise ValueError(f"target dimension {dim} is not a power of two")
        defect = frobenius_norm(self.target.conj().T @ self.target - np.eye(dim))
        if defect > tol.TARGET_UNITARITY:
            raise ValueError(f"target is not unitary (defect {defect:.3e})")
        if self.p <= 0.0:
            raise ValueError(f"norm exponent p must be positive, got {self.p}")
        if self.restarts < 1:
            raise ValueError(f"need at least one restart, got {self.restarts}")

    @property
    def n(self) -> int:
        return int(np.log2(self.target.shape[0]))

    def spec(self, layers: int) -> AnsatzSpec:
        return AnsatzSpec(kind=self.kind, n=self.n, layers=layers, dt=self.dt)


@dataclass
class VcrResult:
    """Best synthesis found for one layer count."""

    theta: np.ndarray
    lam: float
    cost: float
    layers: int
    converged: bool
    start_index: int = 0
    trace: list[float] = field(default_factory=list)


def vcr_cost(
    problem: VcrProblem, layers: int, theta: np.ndarray, lam: float
) -> tuple[float, np.ndarray]:
    """Cost and its gradient over the stacked vector (theta..., lambda)."""
    spec = problem.spec(layers)
    theta = np.asarray(theta, dtype=float)
    factors = circuit_factors(spec, theta)
    dim = spec.dim
    u_c = np.eye(dim, dtype=complex)
    for f in factors:
        u_c = f.matrix @ u_c
    phase = np.exp(-1j * lam)
    m = phase * (problem.target.conj().T @ u_c) - np.eye(dim)
    j2 = float(np.sum(np.abs(m) ** 2))
    if not np.isfinite(j2):
        return np.nan, np.full(theta.shape[0] + 1, np.nan)

    # Angle gradients: sweep R_k = F_k T H_k with R_0 = T U_c, R_k = G R G^H.
    t_mat = phase * (m.conj().T @ problem.target.conj().T)
    r_mat = t_mat @ u_c
    grad2 = np.zeros(theta.shape[0] + 1)
    for f in factors:
        r_mat = f.matrix @ r_mat @ f.matrix.conj().T
        if f.param is not None:
            grad2[f.param] += np.imag(np.einsum("ij,ji->", r_mat, f.generator))
    grad2[-1] = -2.0 * np.imag(np.trace(m))

    if problem.p == 2.0:
        return j2, grad2
    cost = j2 ** (problem.p / 2.0)
    if j2 == 0.0:
        return 0.0, np.zeros_like(grad2)
    return cost, (problem.p / 2.0) * j2 ** (problem.p / 2.0 - 1.0) * grad2


def vcr_synthesize(
    problem: VcrProblem,
    layers: int,
    warm_starts: list[tuple[np.ndarray, float]] | None = None,
) -> VcrResult:
    """Best BFGS run over seeded random starts (plus optional warm starts).

    Warm starts are tried first and participate in the deterministic
    tie-break.  Runs execute on a thread pool sized by VQC_THREADS; the
    selection only depends on costs and start order.
    """
    spec = problem.spec(layers)
    n_params = param_count(spec)
    starts: list[tuple[np.ndarray, float]] = []
    for warm_theta, warm_lam in warm_starts or []:
        if warm_theta.shape != (n_params,):
            raise ValueError(f"warm start has {warm_theta.shape[0]} angles, need {n_params}")
        starts.append((np.asarray(warm_theta, dtype=float), float(warm_lam)))
    for i in range(problem.restarts):
        rng = np.random.default_rng([problem.seed, layers, i])
        starts.append((rng.uniform(0.0, 2.0 * np.pi, n_params), rng.uniform(0.0, 2.0 * np.pi)))

    def objective(v: np.ndarray) -> tuple[float, np.ndarray]:
        return vcr_cost(problem, layers, v[:-1], float(v[-1]))

    def run(start: tuple[np.ndarray, float]):
        v0 = np.concatenate([start[0], [start[1]]])
        return bfgs_minimize(
            objective, v0, problem.bfgs_iters, problem.grad_tol, BFGS_LINE_SEARCH
        )

    workers = min(thread_count(), len(starts))
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            reports = list(pool.map(run, starts))
    else:
        reports = [run(s) for s in starts]

    best_idx = min(
        range(len(reports)),
        key=lambda i: (not np.isfinite(reports[i].f), reports[i].f, i),
    )
    best = reports[best_idx]
    return VcrResult(
        theta=best.x[:-1].copy(),
        lam=float(best.x[-1]),
        cost=float(best.f),
        layers=layers,
        converged=bool(np.isfinite(best.f)),
        start_index=best_idx,
        trace=best.trace,
    )


@dataclass
class LDeltaResult:
    """Outcome of a minimal-layer search over an ascending grid."""

    l_delta: int | None
    best: VcrResult
    evaluated: list[tuple[int, float]]


def l_delta_search(problem: VcrProblem, delta: float, l_grid: list[int]) -> LDeltaResult:
    """Smallest grid layer count whose realization error is at most delta.

    Scans the grid in order and stops at the first success.  For the
    controlled-rotation family the best result of each layer count is
    carried forward, padded with zero-angle (identity) layers, as an extra
    warm start, which makes the best cost non-increasing along the grid.
    """
    if not l_grid:
        raise ValueError("layer grid must be non-empty")
    if any(b <= a for a, b in zip(l_grid, l_grid[1:])):
        raise ValueError("layer grid must be strictly ascending")
    warm: list[tuple[np.ndarray, float]] = []
    evaluated: list[tuple[int, float]] = []
    best: VcrResult | None = None
    prev: VcrResult | None = None
    for layers in l_grid:
        if prev is not None and problem.kind is AnsatzKind.CROT_BASED:
            pad = np.zeros(param_count(problem.spec(layers)) - prev.theta.shape[0])
            warm = [(np.concatenate([prev.theta, pad]), prev.lam)]
        result = vcr_synthesize(problem, layers, warm_starts=warm)
        evaluated.append((layers, result.cost))
        if best is None or result.cost < best.cost:
            best = result
        if result.cost <= delta:
            return LDeltaResult(l_delta=layers, best=result, evaluated=evaluated)
        prev = result
    assert best is not None
    return LDeltaResult(l_delta=None, best=best, evaluated=evaluated)


def gate_lines(spec: AnsatzSpec, theta: np.ndarray, lam: float) -> list[str]:
    """Readable gate list for a synthesized circuit, in application order.

    Grammar (whitespace separated, one gate per line):

        0 0 phase LAMBDA
        LAYER QUBIT cnot TARGET
        LAYER QUBIT crot3d TARGET PHI THETA OMEGA
        LAYER 0 heis DT
        LAYER QUBIT rot3d PHI THETA OMEGA

    LAYER counts from 1; the phase pseudo-gate uses layer 0.  QUBIT is the
    control for the two-qubit gates.  Angles are radians with full double
    precision.
    """
    theta = np.asarray(theta, dtype=float)
    if theta.shape != (param_count(spec),):
        raise ValueError(f"expected {param_count(spec)} angles, got shape {theta.shape}")
    fmt = "{:.17g}"
    lines = [f"0 0 phase {fmt.format(lam)}"]
    per_layer = param_count(spec) // spec.layers
    for layer in range(1, spec.layers + 1):
        base = (layer - 1) * per_layer
        if spec.kind is AnsatzKind.CROT_BASED:
            if spec.n >= 2:
                for j in range(1, spec.n + 1):
                    a = theta[base + 3 * (j - 1) : base + 3 * j]
                    target = j % spec.n + 1
                    angles = " ".join(fmt.format(v) for v in a)
                    lines.append(f"{layer} {j} crot3d {target} {angles}")
            rot_base = base + 3 * spec.n
        elif spec.kind is AnsatzKind.CNOT_BASED:
            if spec.n >= 2:
                for j in range(1, spec.n + 1):
                    lines.append(f"{layer} {j} cnot {j % spec.n + 1}")
            rot_base = base
        else:
            lines.append(f"{layer} 0 heis {fmt.format(spec.dt)}")
            rot_base = base
        for j in range(1, spec.n + 1):
            a = theta[rot_base + 3 * (j - 1) : rot_base + 3 * j]
            angles = " ".join(fmt.format(v) for v in a)
            lines.append(f"{layer} {j} rot3d {angles}")
    return lines
