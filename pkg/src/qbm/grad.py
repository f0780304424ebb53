"""Training objective and its exact analytic gradient.

The objective is the quantum relative entropy S(sigma_* | sigma(a)) between a
fixed target on the visible subsystem and the visible marginal of the Gibbs
state.  Without hidden units the gradient is the moment mismatch

    dS/da_i = Tr(rho(a) O_i) - Tr(sigma_* O_i).

With hidden units the marginal breaks the exponential-family structure and
the gradient needs divided differences of the matrix exponential and
logarithm.  Writing E = e^{a.O} with spectral data (e_l, |l>) and
D = Tr_h(E) with (d_x, |x>):

    B_i   = Tr_h( sum_{l,m} (e_l - e_m)/(ln e_l - ln e_m) |l><l| O_i |m><m| )
    dS/da_i = Tr(rho(a) O_i)
              - sum_{x,y} (ln d_y - ln d_x)/(d_y - d_x) <y|sigma_*|x><x|B_i|y>

where the divided-difference coefficients extend continuously to e_l on the
diagonal of the first kernel and 1/d_x on the diagonal of the second.

Everything here works on the shifted spectrum exp(lambda - max lambda); the
two kernels pick up inverse scale factors exp(-c) and exp(+c) that cancel in
the gradient, and the marginal's eigenvalues are recovered in log space, so
the formulas stay finite for large parameter vectors.  Internal values are
in nats; `objective` converts to bits at the boundary.
"""

from dataclasses import dataclass, field

import numpy as np

from . import opalg
from .opalg import LN2

# below this relative spacing the divided difference switches to its limit
DEGENERACY_RTOL = 1e-10


def _loewner(vals, fvals, dfvals):
    """Divided-difference kernel (f(x_i)-f(x_j))/(x_i-x_j), diag f'(x_i).

    Near-degenerate pairs (|x_i - x_j| < rtol * max(1, |x_i|, |x_j|)) use the
    continuous limit; the result is symmetric for symmetric data.
    """
    dv = vals[:, None] - vals[None, :]
    scale = np.maximum(1.0, np.maximum(np.abs(vals)[:, None],
                                       np.abs(vals)[None, :]))
    near = np.abs(dv) < DEGENERACY_RTOL * scale
    df = fvals[:, None] - fvals[None, :]
    limit = 0.5 * (dfvals[:, None] + dfvals[None, :])
    return np.where(near, limit, df / np.where(near, 1.0, dv))


@dataclass
class GradientWorkspace:
    """Spectral data of a.O reused by the objective and gradient at one a.

    All exponentials are shifted by ``shift`` = max eigenvalue of a.O; the
    stored quantities are exp-shifted (exp_vals = e^{lambda - shift},
    d_vals = eigenvalues of Tr_h of the shifted exponential) and the two
    divided-difference kernels are built from the shifted data.  The
    gradient and the marginal eigenvalue logs are invariant under the shift.
    """

    model: object
    a: np.ndarray
    eigvals: np.ndarray = field(init=False)    # lambda, ascending
    eigvecs: np.ndarray = field(init=False)    # columns |l>
    shift: float = field(init=False)
    exp_vals: np.ndarray = field(init=False)   # e^{lambda - shift}
    tr_exp: float = field(init=False)          # Tr of shifted exponential
    d_vals: np.ndarray = field(init=False)     # shifted D spectrum
    d_vecs: np.ndarray = field(init=False)     # columns |x>
    loewner_exp: np.ndarray = field(init=False)
    loewner_log: np.ndarray = field(init=False)

    def __post_init__(self):
        model = self.model
        a = np.asarray(self.a, dtype=float).ravel()
        if a.size != model.n_params:
            raise ValueError("parameter vector does not match the basis")
        self.a = a
        k = np.tensordot(a, model.basis.ops, axes=1)
        lam, vecs = np.linalg.eigh(k)
        self.eigvals, self.eigvecs = lam, vecs
        self.shift = float(lam[-1])
        e = np.exp(lam - self.shift)
        self.exp_vals = e
        self.tr_exp = float(e.sum())
        if model.dim_h == 1:
            self.d_vals, self.d_vecs = e, vecs
        else:
            e_mat = (vecs * e) @ vecs.conj().T
            d_mat = opalg.partial_trace_last(e_mat, model.dim_v, model.dim_h)
            d_vals, self.d_vecs = np.linalg.eigh(d_mat)
            # the marginal spectrum is bounded below by dim_h * min shifted
            # exponential; eigensolver noise can dip below that (or negative)
            # when the dynamic range exceeds double precision
            floor = max(model.dim_h * e[0], 1e-300)
            self.d_vals = np.maximum(d_vals, floor)
        self.loewner_exp = _loewner(lam, e, e)
        self.loewner_log = _loewner(self.d_vals, np.log(self.d_vals),
                                    1.0 / self.d_vals)

    @property
    def log_visible_eigs(self):
        """Natural logs of the visible-marginal eigenvalues."""
        return np.log(self.d_vals) - np.log(self.tr_exp)

    @property
    def rho(self):
        """Normalized Gibbs state on the full space."""
        v = self.eigvecs
        return (v * (self.exp_vals / self.tr_exp)) @ v.conj().T


def _entropy_term_nats(target):
    """Tr(sigma log sigma) in nats with the 0 log 0 = 0 convention."""
    w = np.linalg.eigvalsh(np.asarray(target, dtype=complex))
    w = w[w > opalg.ENTROPY_FLOOR]
    return float(np.sum(w * np.log(w)))


def objective_nats(model, target, a, ws=None):
    """S(target | visible_state(model, a)) in nats.

    Evaluated from the log-eigenvalues of the marginal, so it stays finite
    for parameter vectors far into the zero-temperature regime.
    """
    if ws is None:
        ws = GradientWorkspace(model, a)
    w_vecs = ws.d_vecs
    tmp = np.asarray(target, dtype=complex) @ w_vecs
    overlap = np.real(np.sum(w_vecs.conj() * tmp, axis=0))
    val = _entropy_term_nats(target) - float(overlap @ ws.log_visible_eigs)
    if not np.isfinite(val):
        raise FloatingPointError("objective evaluated to a non-finite value")
    return val


def objective(model, target, a, ws=None):
    """Training objective S(target | visible marginal) in bits."""
    return objective_nats(model, target, a, ws) / LN2


def grad_visible(model, target, a, ws=None):
    """Gradient without hidden units: Tr(rho(a) O_i) - Tr(target O_i), nats."""
    if model.dim_h != 1:
        raise ValueError("grad_visible requires a model without hidden units")
    if ws is None:
        ws = GradientWorkspace(model, a)
    target = np.asarray(target, dtype=complex)
    rho_m = _state_moments(ws.rho, model.basis.ops)
    tgt_m = _state_moments(target, model.basis.ops)
    return rho_m - tgt_m


def grad_hidden(model, target, a, ws):
    """Gradient with hidden units via the divided-difference kernels, nats.

    Degenerate spectra are handled by the continuous-limit branch of the
    kernels and never raise.
    """
    if model.dim_h <= 1:
        raise ValueError("grad_hidden requires a model with a hidden unit")
    ops = model.basis.ops
    target = np.asarray(target, dtype=complex)
    v, vd = ws.eigvecs, ws.eigvecs.conj().T
    w, wd = ws.d_vecs, ws.d_vecs.conj().T

    rho_m = _state_moments(ws.rho, ops)
    ops_eig = vd @ ops @ v                                  # <l|O_i|m>
    weighted = ws.loewner_exp[None, :, :] * ops_eig
    b_full = v @ weighted @ vd
    dv, dh = model.dim_v, model.dim_h
    b_i = np.einsum("nabcb->nac", b_full.reshape(-1, dv, dh, dv, dh))
    c_i = wd @ b_i @ w                                      # <x|B_i|y>
    sigma_eig = wd @ target @ w                             # <x|sigma|y>
    kernel = ws.loewner_log[None, :, :] * c_i
    term = np.real(np.sum(kernel * sigma_eig.T[None, :, :], axis=(1, 2)))
    g = rho_m - term
    if not np.all(np.isfinite(g)):
        raise FloatingPointError("gradient evaluated to non-finite values")
    return g


def gradient(model, target, a, ws=None):
    """Dispatch to the visible-only or hidden-layer gradient."""
    if ws is None:
        ws = GradientWorkspace(model, a)
    if model.dim_h == 1:
        return grad_visible(model, target, a, ws)
    return grad_hidden(model, target, a, ws)


def value_and_grad(model, target, a):
    """Objective (nats) and gradient (nats) sharing one workspace."""
    ws = GradientWorkspace(model, a)
    return objective_nats(model, target, a, ws), gradient(model, target, a, ws)


def finite_diff_grad(model, target, a, step=1e-5):
    """Central finite differences of the objective (nats); gradient oracle."""
    if step <= 0:
        raise ValueError("step must be positive")
    a = np.asarray(a, dtype=float).ravel()
    g = np.empty(a.size)
    for i in range(a.size):
        up, dn = a.copy(), a.copy()
        up[i] += step
        dn[i] -= step
        g[i] = (objective_nats(model, target, up)
                - objective_nats(model, target, dn)) / (2.0 * step)
    return g


def _state_moments(rho, ops):
    return np.real(np.einsum("nij,ji->n", ops, rho))
