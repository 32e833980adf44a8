"""BFGS minimization with two line searches.

``standard``   strong Wolfe conditions with cubic interpolation, the
               classic choice for smooth problems.
``weak_wolfe`` bracketing bisection enforcing Armijo plus the one-sided
               curvature condition g(x + t d)'d >= c2 g(x)'d, which keeps
               BFGS effective on nonsmooth objectives.

Every callback invocation is recorded, so traces plot best value against
function evaluations.  The budget is a hard cap on callback calls.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

VARIANTS = ("standard", "weak_wolfe")


@dataclass(frozen=True)
class OptimizerConfig:
    variant: str = "weak_wolfe"
    max_feval: int = 400
    grad_tol: float = 1e-6
    c1: float = 1e-4
    c2: float | None = None  # defaults: 0.9 standard, 0.5 weak_wolfe
    init_step: float = 1.0
    debug: bool = False      # positive-definiteness checks on every update

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise ValueError(f"variant must be one of {VARIANTS}")
        if self.max_feval < 1:
            raise ValueError("max_feval must be at least 1")
        c2 = self.curvature
        if not 0.0 < self.c1 < c2 < 1.0:
            raise ValueError("require 0 < c1 < c2 < 1")

    @property
    def curvature(self) -> float:
        if self.c2 is not None:
            return self.c2
        return 0.9 if self.variant == "standard" else 0.5


@dataclass(eq=False)
class OptRunTrace:
    feval: np.ndarray
    J: np.ndarray
    bestJ: np.ndarray
    gradnorm: np.ndarray
    step: np.ndarray
    reason: str
    a_final: np.ndarray
    wall_time: float

    def __len__(self):
        return len(self.feval)


class _BudgetExhausted(Exception):
    pass


class _Recorder:
    def __init__(self, fg, max_feval):
        self.fg = fg
        self.max_feval = max_feval
        self.count = 0
        self.rows = []
        self.best_J = np.inf
        self.best_a = None

    def __call__(self, a, step):
        if self.count >= self.max_feval:
            raise _BudgetExhausted
        self.count += 1
        J, g = self.fg(a)
        if J < self.best_J:
            self.best_J = J
            self.best_a = np.array(a, copy=True)
        self.rows.append((self.count, J, self.best_J, float(np.linalg.norm(g)), step))
        return float(J), np.asarray(g, dtype=float)


def _strong_wolfe(ev, x, d, J0, g0, c1, c2, t0, max_trials=25):
    """Strong-Wolfe search (bracket then zoom with cubic interpolation)."""
    dphi0 = float(g0 @ d)
    if dphi0 >= 0:
        return None

    def phi(t):
        J, g = ev(x + t * d, t)
        return J, g, float(g @ d)

    def cubic_min(a, fa, da, b, fb, db):
        # minimizer of the cubic matching f, f' at a and b
        with np.errstate(all="ignore"):
            d1 = da + db - 3.0 * (fa - fb) / (a - b)
            rad = d1 * d1 - da * db
            if rad < 0:
                return None
            s = np.sqrt(rad)
            t = b - (b - a) * ((db + s - d1) / (db - da + 2.0 * s))
        return None if not np.isfinite(t) else float(t)

    def zoom(lo, flo, dlo, hi, fhi, dhi, trials):
        for _ in range(trials):
            t = cubic_min(lo, flo, dlo, hi, fhi, dhi)
            lo_, hi_ = (lo, hi) if lo < hi else (hi, lo)
            width = hi_ - lo_
            if t is None or not lo_ + 0.1 * width <= t <= hi_ - 0.1 * width:
                t = 0.5 * (lo + hi)
            ft, gt, dft = phi(t)
            if ft > J0 + c1 * t * dphi0 or ft >= flo:
                hi, fhi, dhi = t, ft, dft
            else:
                if abs(dft) <= -c2 * dphi0:
                    return t, ft, gt
                if dft * (hi - lo) >= 0:
                    hi, fhi, dhi = lo, flo, dlo
                lo, flo, dlo = t, ft, dft
            if abs(hi - lo) < 1e-16:
                break
        return None

    t_prev, f_prev, df_prev = 0.0, J0, dphi0
    t = t0
    for i in range(max_trials):
        ft, gt, dft = phi(t)
        if ft > J0 + c1 * t * dphi0 or (i > 0 and ft >= f_prev):
            return zoom(t_prev, f_prev, df_prev, t, ft, dft, max_trials - i)
        if abs(dft) <= -c2 * dphi0:
            return t, ft, gt
        if dft >= 0:
            return zoom(t, ft, dft, t_prev, f_prev, df_prev, max_trials - i)
        t_prev, f_prev, df_prev = t, ft, dft
        t = min(2.0 * t, 1e10)
    return None


def _weak_wolfe(ev, x, d, J0, g0, c1, c2, t0, max_trials=50):
    """Bracketing bisection for Armijo + weak curvature."""
    dphi0 = float(g0 @ d)
    if dphi0 >= 0:
        return None
    lo, hi = 0.0, np.inf
    t = t0
    for _ in range(max_trials):
        ft, gt = ev(x + t * d, t)
        dft = float(gt @ d)
        if ft > J0 + c1 * t * dphi0:
            hi = t
        elif dft < c2 * dphi0:
            lo = t
        else:
            return t, ft, gt
        if np.isfinite(hi):
            t = 0.5 * (lo + hi)
            if hi - lo < 1e-18:
                return None
        else:
            t = 2.0 * t
            if t > 1e12:
                return None
    return None


def minimize(fg, a0, cfg: OptimizerConfig):
    """Minimize J(a) given a callback returning (J, grad).

    Returns (best control seen, OptRunTrace).  The trace holds one row
    per callback invocation; the best-so-far column is non-increasing by
    construction.
    """
    t_start = time.perf_counter()
    rec = _Recorder(fg, cfg.max_feval)
    x = np.array(a0, dtype=float, copy=True)
    n = len(x)
    c1, c2 = cfg.c1, cfg.curvature
    search = _strong_wolfe if cfg.variant == "standard" else _weak_wolfe
    rng = np.random.default_rng(0) if cfg.debug else None

    reason = "max_feval"
    try:
        J, g = rec(x, 0.0)
        H = np.eye(n)
        first_update = True
        restarted = False
        while True:
            if np.linalg.norm(g) <= cfg.grad_tol:
                reason = "grad_tol"
                break
            d = -H @ g
            if g @ d >= 0:
                H = np.eye(n)
                d = -g
            res = search(rec, x, d, J, g, c1, c2, cfg.init_step)
            if res is None:
                if cfg.variant == "weak_wolfe" and not restarted:
                    restarted = True
                    H = np.eye(n)
                    first_update = True
                    continue
                reason = "line_search_failure"
                break
            t, J_new, g_new = res
            if J_new >= J:
                reason = "no_decrease"
                break
            s = t * d
            y = g_new - g
            sy = float(s @ y)
            if first_update and sy > 0:
                H = (sy / float(y @ y)) * np.eye(n)
                first_update = False
            if sy > 1e-12 * np.linalg.norm(s) * np.linalg.norm(y):
                rho = 1.0 / sy
                Hy = H @ y
                H = H - rho * (np.outer(s, Hy) + np.outer(Hy, s)) \
                    + rho * (rho * float(y @ Hy) + 1.0) * np.outer(s, s)
                if cfg.debug:
                    for _ in range(10):
                        z = rng.standard_normal(n)
                        assert z @ (H @ z) > 0, "inverse Hessian lost positive definiteness"
            x, J, g = x + s, J_new, g_new
            restarted = False
    except _BudgetExhausted:
        reason = "max_feval"

    rows = np.array(rec.rows, dtype=float)
    best_a = rec.best_a if rec.best_a is not None else x
    trace = OptRunTrace(
        feval=rows[:, 0].astype(int) if len(rows) else np.zeros(0, dtype=int),
        J=rows[:, 1] if len(rows) else np.zeros(0),
        bestJ=rows[:, 2] if len(rows) else np.zeros(0),
        gradnorm=rows[:, 3] if len(rows) else np.zeros(0),
        step=rows[:, 4] if len(rows) else np.zeros(0),
        reason=reason, a_final=best_a,
        wall_time=time.perf_counter() - t_start)
    return best_a, trace


def compare_runs(traces, labels=None):
    """Align best-J series on a common feval grid.

    Returns (header, rows): first column the evaluation index, then one
    forward-filled best-J column per trace.
    """
    if not traces:
        raise ValueError("need at least one trace")
    if labels is None:
        labels = [f"run{i + 1}" for i in range(len(traces))]
    length = max(len(t) for t in traces)
    header = ["feval"] + [f"bestJ_{lab}" for lab in labels]
    rows = []
    for i in range(1, length + 1):
        row = [float(i)]
        for t in traces:
            j = min(i, len(t)) - 1
            row.append(float(t.bestJ[j]))
        rows.append(row)
    return header, rows
