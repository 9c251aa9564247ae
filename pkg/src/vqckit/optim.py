"""Smooth unconstrained minimizers over flat real vectors.

An objective is a callable ``fn(x) -> (value, gradient)``.  Provided here:

* Armijo backtracking and a strong-Wolfe line search (bracket + zoom),
* nonlinear conjugate gradient with the Fletcher-Reeves beta,
* BFGS in inverse-Hessian form with a curvature guard.

The CG driver runs a fixed number of iterations (callers that embed it in
an outer loop rely on the exact count); BFGS stops on a gradient norm
threshold or an iteration cap.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from . import tolerances as tol

ObjectiveFn = Callable[[np.ndarray], tuple[float, np.ndarray]]


@dataclass
class LineSearchCfg:
    """Step-size search parameters.

    c1 is the Armijo slope fraction, c2 the curvature fraction used when
    ``strong_wolfe`` is enabled, rho the backtracking shrink factor and
    alpha0 the first trial step.
    """

    c1: float = 1e-4
    c2: float = 0.9
    rho: float = 0.5
    alpha0: float = 1.0
    max_backtracks: int = 50
    strong_wolfe: bool = False

    def __post_init__(self) -> None:
        if not 0.0 < self.c1 < self.c2 < 1.0:
            raise ValueError(f"need 0 < c1 < c2 < 1, got c1={self.c1}, c2={self.c2}")
        if not 0.0 < self.rho < 1.0:
            raise ValueError(f"need 0 < rho < 1, got rho={self.rho}")
        if self.alpha0 <= 0.0 or self.max_backtracks < 1:
            raise ValueError("alpha0 must be positive and max_backtracks >= 1")


CG_LINE_SEARCH = LineSearchCfg(c2=0.4)
BFGS_LINE_SEARCH = LineSearchCfg(c2=0.9, strong_wolfe=True)


@dataclass
class OptimReport:
    """Outcome of one optimizer run.

    ``trace`` holds the objective value at the start and after every
    iteration; accepted Armijo steps keep it non-increasing.  ``warnings``
    counts exhausted line searches.
    """

    x: np.ndarray
    f: float
    grad_norm: float
    iterations: int
    converged: bool
    trace: list[float] = field(default_factory=list)
    warnings: int = 0


class _Eval:
    """Caches the (value, gradient) pair of the most recent trial point."""

    def __init__(self, fn: ObjectiveFn):
        self.fn = fn
        self.n_evals = 0

    def __call__(self, x: np.ndarray) -> tuple[float, np.ndarray]:
        self.n_evals += 1
        f, g = self.fn(x)
        return float(f), np.asarray(g, dtype=float)


def _armijo_ok(f_trial: float, f0: float, slope: float, alpha: float, c1: float) -> bool:
    return np.isfinite(f_trial) and f_trial <= f0 + c1 * alpha * slope


def _backtrack(ev, x, f0, g0, d, cfg):
    """Armijo backtracking.  Returns (alpha, f, g, ok)."""
    slope = float(g0 @ d)
    alpha = cfg.alpha0
    f_trial, g_trial = ev(x + alpha * d)
    for _ in range(cfg.max_backtracks - 1):
        if _armijo_ok(f_trial, f0, slope, alpha, cfg.c1):
            return alpha, f_trial, g_trial, True
        alpha *= cfg.rho
        f_trial, g_trial = ev(x + alpha * d)
    ok = _armijo_ok(f_trial, f0, slope, alpha, cfg.c1)
    return alpha, f_trial, g_trial, ok


def _wolfe(ev, x, f0, g0, d, cfg):
    """Strong-Wolfe line search (bracket + bisection zoom).

    Falls back to plain backtracking when bracketing fails; the returned
    flag is True only when both Wolfe conditions hold.
    """
    slope0 = float(g0 @ d)
    c1, c2 = cfg.c1, cfg.c2

    def zoom(lo, f_lo, hi, f_hi, g_lo_slope):
        for _ in range(40):
            alpha = 0.5 * (lo + hi)
            f_a, g_a = ev(x + alpha * d)
            slope_a = float(g_a @ d)
            if not _armijo_ok(f_a, f0, slope0, alpha, c1) or f_a >= f_lo:
                hi, f_hi = alpha, f_a
            else:
                if abs(slope_a) <= -c2 * slope0:
                    return alpha, f_a, g_a, True
                if slope_a * (hi - lo) >= 0.0:
                    hi, f_hi = lo, f_lo
                lo, f_lo, g_lo_slope = alpha, f_a, slope_a
            if abs(hi - lo) < 1e-16:
                break
        f_a, g_a = ev(x + lo * d)
        return lo, f_a, g_a, _armijo_ok(f_a, f0, slope0, lo, c1)

    alpha_prev, f_prev = 0.0, f0
    alpha = cfg.alpha0
    for i in range(cfg.max_backtracks):
        f_a, g_a = ev(x + alpha * d)
        slope_a = float(g_a @ d)
        if not np.isfinite(f_a):
            alpha *= cfg.rho
            continue
        if not _armijo_ok(f_a, f0, slope0, alpha, c1) or (i > 0 and f_a >= f_prev):
            return zoom(alpha_prev, f_prev, alpha, f_a, slope0)
        if abs(slope_a) <= -c2 * slope0:
            return alpha, f_a, g_a, True
        if slope_a >= 0.0:
            return zoom(alpha, f_a, alpha_prev, f_prev, slope_a)
        alpha_prev, f_prev = alpha, f_a
        alpha *= 2.0
    return _backtrack(ev, x, f0, g0, d, cfg)


def backtracking_search(
    fn: ObjectiveFn,
    x: np.ndarray,
    d: np.ndarray,
    cfg: LineSearchCfg | None = None,
) -> tuple[float, bool]:
    """Step size along a descent direction d from x.

    Satisfies the Armijo condition when the flag is True; with
    ``cfg.strong_wolfe`` the curvature condition is enforced as well.  On
    exhaustion the smallest trial step is returned with the flag False.
    Raises ValueError for a non-descent direction.
    """
    cfg = cfg or LineSearchCfg()
    ev = _Eval(fn)
    x = np.asarray(x, dtype=float)
    d = np.asarray(d, dtype=float)
    f0, g0 = ev(x)
    if float(g0 @ d) >= 0.0:
        raise ValueError("line search requires a descent direction (grad . d < 0)")
    search = _wolfe if cfg.strong_wolfe else _backtrack
    alpha, _, _, ok = search(ev, x, f0, g0, d, cfg)
    return alpha, ok


def cg_minimize(
    fn: ObjectiveFn,
    x0: Sequence[float],
    iters: int,
    cfg: LineSearchCfg | None = None,
    step_fn: Callable[[np.ndarray, np.ndarray, float, np.ndarray], float] | None = None,
) -> OptimReport:
    """Fletcher-Reeves nonlinear conjugate gradient, fixed iteration count.

    Each iteration takes an Armijo step along d and updates
    d <- -grad + beta d with beta = ||g_new||^2 / ||g_old||^2.  The
    direction is reset to steepest descent whenever it fails to be a
    descent direction, and a failed line search leaves the iterate in
    place (the trace never increases on accepted steps).  ``step_fn`` may
    supply the exact step size instead of the line search.
    """
    cfg = cfg or CG_LINE_SEARCH
    ev = _Eval(fn)
    x = np.array(x0, dtype=float)
    f, g = ev(x)
    if not np.isfinite(f):
        return OptimReport(x, f, float(np.linalg.norm(g)), 0, False, [f])
    trace = [f]
    warnings = 0
    d = -g
    gg = float(g @ g)
    for k in range(iters):
        if gg == 0.0:
            return OptimReport(x, f, 0.0, k, True, trace, warnings)
        if float(g @ d) >= 0.0:
            d = -g
        if step_fn is not None:
            alpha = float(step_fn(x, d, f, g))
            f_new, g_new = ev(x + alpha * d)
            ok = True
        else:
            alpha, f_new, g_new, ok = _backtrack(ev, x, f, g, d, cfg)
        if not np.isfinite(f_new):
            return OptimReport(x, f, float(np.sqrt(gg)), k, False, trace, warnings)
        if not ok and f_new > f:
            # No usable step; restart from steepest descent next iteration.
            warnings += 1
            d = -g
            trace.append(f)
            continue
        x = x + alpha * d
        gg_new = float(g_new @ g_new)
        beta = gg_new / gg
        d = -g_new + beta * d
        f, g, gg = f_new, g_new, gg_new
        trace.append(f)
    return OptimReport(x, f, float(np.sqrt(gg)), iters, True, trace, warnings)


def bfgs_minimize(
    fn: ObjectiveFn,
    x0: Sequence[float],
    max_iters: int,
    grad_tol: float = 1e-8,
    cfg: LineSearchCfg | None = None,
) -> OptimReport:
    """BFGS with the inverse-Hessian update H and a strong-Wolfe search.

    The update is skipped whenever s.y <= the curvature guard, which keeps
    H symmetric positive definite.  Stops at ||grad|| <= grad_tol or after
    max_iters iterations; aborts (converged False) on a NaN objective.
    """
    cfg = cfg or BFGS_LINE_SEARCH
    ev = _Eval(fn)
    x = np.array(x0, dtype=float)
    dim = x.shape[0]
    f, g = ev(x)
    if not np.isfinite(f):
        return OptimReport(x, f, float(np.linalg.norm(g)), 0, False, [f])
    trace = [f]
    warnings = 0
    h = np.eye(dim)
    eye = np.eye(dim)
    search = _wolfe if cfg.strong_wolfe else _backtrack
    for k in range(max_iters):
        gnorm = float(np.linalg.norm(g))
        if gnorm <= grad_tol:
            return OptimReport(x, f, gnorm, k, True, trace, warnings)
        d = -(h @ g)
        if float(g @ d) >= 0.0:
            h = np.eye(dim)
            d = -g
        alpha, f_new, g_new, ok = search(ev, x, f, g, d, cfg)
        if not np.isfinite(f_new):
            return OptimReport(x, f, gnorm, k, False, trace, warnings)
        if not ok and f_new >= f:
            warnings += 1
            return OptimReport(x, f, gnorm, k, False, trace, warnings)
        s = alpha * d
        y = g_new - g
        x = x + s
        sty = float(s @ y)
        if sty > tol.CURVATURE_GUARD:
            rho = 1.0 / sty
            a = eye - rho * np.outer(s, y)
            h = a @ h @ a.T + rho * np.outer(s, s)
        f, g = f_new, g_new
        trace.append(f)
    return OptimReport(
        x, f, float(np.linalg.norm(g)), max_iters, float(np.linalg.norm(g)) <= grad_tol, trace, warnings
    )
