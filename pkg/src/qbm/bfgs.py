"""BFGS minimizer for the relative-entropy objective.

Quasi-Newton iteration with an inverse-Hessian approximation updated from
(s, y) pairs, a strong-Wolfe line search for the step length, and a box
guard on the parameter magnitude.  Targets that are representable only in
the zero-temperature limit drive the parameters to infinity; the box guard
stops that march and such runs are reported as converged on the boundary
when the gradient along the free directions is below tolerance.

For the multimodal hidden-layer landscape `multi_start` restarts the
minimizer from seeded random initial vectors and keeps the best run.
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .grad import value_and_grad
from .opalg import LN2

CURVATURE_FLOOR = 1e-12   # s.y below this skips the inverse-Hessian update


@dataclass(frozen=True)
class BfgsOptions:
    max_iter: int = 500
    grad_tol: float = 1e-7        # nats
    step_tol: float = 1e-12
    wolfe_c1: float = 1e-4
    wolfe_c2: float = 0.9
    max_line_search: int = 40
    param_cap: float = 30.0       # infinity-norm guard

    def __post_init__(self):
        if not 0.0 < self.wolfe_c1 < self.wolfe_c2 < 1.0:
            raise ValueError("need 0 < c1 < c2 < 1")
        if self.max_iter < 1 or self.max_line_search < 1:
            raise ValueError("iteration limits must be positive")
        if self.param_cap <= 0 or self.grad_tol <= 0 or self.step_tol <= 0:
            raise ValueError("tolerances and the cap must be positive")


@dataclass
class BfgsState:
    """Current iterate: parameters, gradient, inverse Hessian, step data."""

    a: np.ndarray
    g: np.ndarray
    h_inv: np.ndarray
    step: float = 0.0
    d: Optional[np.ndarray] = None


@dataclass
class OptimResult:
    a_opt: np.ndarray
    s_min: float                  # bits
    iterations: int
    converged: bool
    grad_norm: float              # nats
    history: Optional[list] = None
    boundary: bool = False
    skipped_updates: int = 0
    hinv_resets: int = 0
    message: str = ""


@dataclass(frozen=True)
class MultiStartOptions:
    n_starts: int = 1
    init_kind: str = "uniform"      # "uniform" or "constant"
    init_lo: float = -2.0
    init_hi: float = 2.0
    init_const: float = 0.0
    seed: int = 0

    def __post_init__(self):
        if self.n_starts < 1:
            raise ValueError("n_starts must be >= 1")
        if self.init_kind not in ("uniform", "constant"):
            raise ValueError(f"unknown init kind {self.init_kind!r}")
        if self.init_kind == "uniform" and not self.init_lo < self.init_hi:
            raise ValueError("uniform init needs lo < hi")

    @classmethod
    def uniform(cls, n_starts, lo=-2.0, hi=2.0, seed=0):
        return cls(n_starts=n_starts, init_kind="uniform", init_lo=lo,
                   init_hi=hi, seed=seed)

    @classmethod
    def constant(cls, value, n_starts=1, seed=0):
        return cls(n_starts=n_starts, init_kind="constant", init_const=value,
                   seed=seed)

    def initial_vector(self, n_params, run_index):
        if self.init_kind == "constant":
            return np.full(n_params, self.init_const, dtype=float)
        rng = np.random.default_rng([int(self.seed) & 0xFFFFFFFFFFFFFFFF,
                                     run_index])
        return rng.uniform(self.init_lo, self.init_hi, n_params)


def line_search(phi, phi0, dphi0, c1=1e-4, c2=0.9, max_iter=40,
                alpha0=1.0, alpha_max=None):
    """Strong-Wolfe step length along a descent direction.

    ``phi`` maps a step length to (value, directional derivative).  Returns
    the accepted step length, or None when the evaluation budget is
    exhausted without a point of sufficient decrease.  A bracketing phase
    doubles the trial step, then a zoom phase interpolates inside the
    bracket; on a budget-limited zoom the best point satisfying the
    sufficient-decrease condition is returned even if the curvature
    condition is still open, so accepted steps never increase the objective.
    """
    if dphi0 >= 0:
        raise ValueError("line search requires a descent direction (g.d < 0)")
    amax = np.inf if alpha_max is None else float(alpha_max)
    if amax <= 0:
        return None
    budget = [max_iter]

    def evaluate(alpha):
        budget[0] -= 1
        return phi(alpha)

    def armijo(alpha, value):
        return value <= phi0 + c1 * alpha * dphi0

    def zoom(lo, f_lo, g_lo, hi, f_hi):
        best = (lo, f_lo) if lo > 0 and armijo(lo, f_lo) else None
        while budget[0] > 0:
            width = hi - lo
            denom = 2.0 * (f_hi - f_lo - g_lo * width)
            alpha = lo - g_lo * width * width / denom if denom != 0 else None
            if alpha is None or not (0.05 <= (alpha - lo) / width <= 0.95):
                alpha = lo + 0.5 * width
            f_a, g_a = evaluate(alpha)
            if not armijo(alpha, f_a) or f_a >= f_lo:
                hi, f_hi = alpha, f_a
            else:
                best = (alpha, f_a)
                if abs(g_a) <= -c2 * dphi0:
                    return alpha, f_a
                if g_a * (hi - lo) >= 0:
                    hi, f_hi = lo, f_lo
                lo, f_lo, g_lo = alpha, f_a, g_a
            if abs(hi - lo) < 1e-16 * max(1.0, abs(lo)):
                break
        return best

    a_prev, f_prev, g_prev = 0.0, phi0, dphi0
    alpha = min(float(alpha0), amax)
    first = True
    while budget[0] > 0:
        f_a, g_a = evaluate(alpha)
        if not armijo(alpha, f_a) or (not first and f_a >= f_prev):
            return zoom(a_prev, f_prev, g_prev, alpha, f_a)
        if abs(g_a) <= -c2 * dphi0:
            return alpha, f_a
        if g_a >= 0:
            return zoom(alpha, f_a, g_a, a_prev, f_prev)
        if alpha >= amax:
            # feasible boundary reached while still descending with
            # sufficient decrease: accept the capped step
            return alpha, f_a
        a_prev, f_prev, g_prev = alpha, f_a, g_a
        alpha = min(2.0 * alpha, amax)
        first = False
    return None


def _projected_gradient(a, g, cap):
    """Gradient with components pinned at the box and pushing outward zeroed."""
    ge = g.copy()
    ge[(a >= cap) & (g < 0)] = 0.0
    ge[(a <= -cap) & (g > 0)] = 0.0
    return ge


def minimize(model, target, a0, opts=None, record_history=False):
    """Minimize S(target | visible marginal) from the initial vector a0.

    The returned objective value is in bits; gradient norms are in nats.
    Runs are deterministic functions of (model, target, a0, opts).  Line
    search failure resets the inverse Hessian once; a repeat ends the run
    with converged=False rather than raising.
    """
    opts = opts or BfgsOptions()
    cap = opts.param_cap
    a = np.clip(np.asarray(a0, dtype=float).ravel(), -cap, cap)
    if a.size != model.n_params:
        raise ValueError("initial vector does not match the basis size")
    target = np.asarray(target, dtype=complex)

    f, g = value_and_grad(model, target, a)
    n = a.size
    state = BfgsState(a=a, g=g, h_inv=np.eye(n))
    history = [(0, f / LN2)] if record_history else None
    first_update = True
    skipped = resets = 0
    ls_failed_once = False
    converged = False
    iterations = 0
    active_prev = np.zeros(n, dtype=bool)
    message = "max_iter reached"

    for iterations in range(1, opts.max_iter + 1):
        g_proj = _projected_gradient(state.a, state.g, cap)
        if np.linalg.norm(g_proj) < opts.grad_tol:
            converged = True
            message = "gradient below tolerance"
            break

        # directions pinned at the box and pushing outward are frozen; the
        # curvature estimate is stale when that set changes
        hi = (state.a >= cap) & (state.g < 0)
        lo = (state.a <= -cap) & (state.g > 0)
        active = hi | lo
        if (active != active_prev).any():
            state.h_inv = np.eye(n)
            first_update = True
            resets += 1
            active_prev = active.copy()

        d = -(state.h_inv @ np.where(active, 0.0, state.g))
        d[active] = 0.0
        # any outward component at the box edge would zero the feasible step
        d[(state.a >= cap) & (d > 0)] = 0.0
        d[(state.a <= -cap) & (d < 0)] = 0.0
        if not d.any() or d @ state.g >= 0:
            state.h_inv = np.eye(n)
            first_update = True
            resets += 1
            d = -g_proj
            if not d.any():
                converged = True
                message = "stationary on the box boundary"
                break

        with np.errstate(divide="ignore", invalid="ignore"):
            room = np.where(d > 0, (cap - state.a) / np.where(d > 0, d, 1.0),
                            np.where(d < 0, (-cap - state.a) /
                                     np.where(d < 0, d, 1.0), np.inf))
        alpha_max = float(np.min(room))

        cache = {}

        def phi(alpha, _d=d, _cache=cache):
            try:
                fv, gv = value_and_grad(model, target, state.a + alpha * _d)
            except FloatingPointError:
                # unevaluable probe point: present it as arbitrarily bad so
                # the line search backs off
                return np.inf, 0.0
            _cache[alpha] = (fv, gv)
            return fv, float(gv @ _d)

        result = line_search(phi, f, float(state.g @ d),
                             c1=opts.wolfe_c1, c2=opts.wolfe_c2,
                             max_iter=opts.max_line_search,
                             alpha_max=alpha_max)
        if result is None:
            if not ls_failed_once:
                ls_failed_once = True
                state.h_inv = np.eye(n)
                first_update = True
                resets += 1
                continue
            message = "line search failed twice"
            break
        alpha, f_new = result
        state.step = alpha
        state.d = d
        a_new = np.clip(state.a + alpha * d, -cap, cap)
        if alpha in cache:
            f_new, g_new = cache[alpha]
        else:
            f_new, g_new = value_and_grad(model, target, a_new)

        s = a_new - state.a
        y = g_new - state.g
        sy = float(s @ y)
        if sy > CURVATURE_FLOOR:
            if first_update:
                state.h_inv *= sy / float(y @ y)
                first_update = False
            rho_k = 1.0 / sy
            u = np.eye(n) - rho_k * np.outer(s, y)
            h = u @ state.h_inv @ u.T + rho_k * np.outer(s, s)
            state.h_inv = 0.5 * (h + h.T)
            if np.linalg.eigvalsh(state.h_inv)[0] <= 0:
                state.h_inv = np.eye(n)
                first_update = True
                resets += 1
        else:
            skipped += 1

        state.a, state.g, f = a_new, g_new, f_new
        if record_history:
            history.append((iterations, f / LN2))
        if np.linalg.norm(s) < opts.step_tol:
            converged = True
            message = "step below tolerance"
            break

    g_proj = _projected_gradient(state.a, state.g, cap)
    on_boundary = bool((np.abs(state.a) >= cap).any())
    return OptimResult(
        a_opt=state.a.copy(),
        s_min=f / LN2,
        iterations=iterations,
        converged=converged,
        grad_norm=float(np.linalg.norm(g_proj)),
        history=history,
        boundary=on_boundary and converged,
        skipped_updates=skipped,
        hinv_resets=resets,
        message=message,
    )


def multi_start(model, target, bfgs_opts=None, ms_opts=None):
    """Repeated minimization from seeded initial vectors.

    Returns (best, results) where results are ordered by run index and the
    best run has the smallest objective value.  The initial vector of run k
    depends only on (seed, k), so the output is deterministic.
    """
    bfgs_opts = bfgs_opts or BfgsOptions()
    ms_opts = ms_opts or MultiStartOptions()
    results = []
    for k in range(ms_opts.n_starts):
        a0 = ms_opts.initial_vector(model.n_params, k)
        results.append(minimize(model, target, a0, bfgs_opts))
    best = min(results, key=lambda res: res.s_min)
    return best, results
