"""Landscape sweeps, closed-form baselines, geometry and symmetry checks.

The two-parameter target family traces a closed surface inside the joint
numerical range of {Z1+Z2, X1+X2, Z1 Z2}.  In the first and third quadrants
of (r cos phi, r sin phi) the surface lies on the boundary of that convex
body and the targets are exactly representable; in the other two quadrants
they fall inside and the minimal relative entropy is positive.  This module
provides the trained landscape over a grid, the analytic values on the r=1
rim and the phi=3pi/4 ray, the tangent-plane construction certifying the
boundary cases, and the parameter maps of the 16 local symmetry operations.
"""

import concurrent.futures
from dataclasses import dataclass

import numpy as np

from . import bfgs as _bfgs
from . import grad as _grad
from . import model as _model
from . import opalg

SINGULAR_ATOL = 1e-9

VISIBLE_PARTS = ("I", "XX", "YY", "ZZ")
HIDDEN_PARTS = ("I", "X", "Y", "Z")

# angle image of the target family under each visible part (exact, the
# Z1 Z2 image holds up to a global phase)
PHI_MAPS = {
    "I": lambda phi: phi,
    "XX": lambda phi: np.pi / 2 - phi,
    "YY": lambda phi: 3 * np.pi / 2 - phi,
    "ZZ": lambda phi: np.pi + phi,
}


class SingularityError(ValueError):
    """Closed-form expression evaluated on its singular locus."""


@dataclass(frozen=True)
class SweepGrid:
    r_values: np.ndarray
    phi_values: np.ndarray

    def __post_init__(self):
        r = np.asarray(self.r_values, dtype=float)
        phi = np.asarray(self.phi_values, dtype=float)
        if r.size == 0 or phi.size == 0:
            raise ValueError("grid axes must be non-empty")
        if np.any(np.diff(r) <= 0) or np.any(np.diff(phi) <= 0):
            raise ValueError("grid axes must be strictly ascending")
        if r[0] < 0 or r[-1] > 1:
            raise ValueError("r values must lie in [0, 1]")
        if phi[0] < 0 or phi[-1] > 2 * np.pi:
            raise ValueError("phi values must lie in [0, 2*pi]")
        object.__setattr__(self, "r_values", r)
        object.__setattr__(self, "phi_values", phi)

    @classmethod
    def default(cls):
        """21 radii (step 0.05) by 121 angles (step pi/60)."""
        return cls(r_values=np.linspace(0.0, 1.0, 21),
                   phi_values=np.linspace(0.0, 2.0, 121) * np.pi)

    @property
    def shape(self):
        return self.r_values.size, self.phi_values.size


@dataclass
class SweepTable:
    grid: SweepGrid
    s_min: np.ndarray         # bits, shape = grid.shape
    converged: np.ndarray     # bool
    a_opt: np.ndarray         # (n_r, n_phi, n_params)
    grad_norm: np.ndarray     # nats

    def __post_init__(self):
        if self.s_min.shape != self.grid.shape:
            raise ValueError("table shape does not match the grid")


@dataclass(frozen=True)
class ExtremePoint:
    a_star: float
    b_star: float


@dataclass(frozen=True)
class GroundStateCertificate:
    boundary: bool
    fidelity: float
    gap: float


@dataclass(frozen=True)
class SymmetryOp:
    """Local symmetry operation: a two-qubit visible part times a hidden part."""

    visible_part: str = "I"
    hidden_part: str = "I"

    def __post_init__(self):
        if self.visible_part not in VISIBLE_PARTS:
            raise ValueError(f"unknown visible part {self.visible_part!r}")
        if self.hidden_part not in HIDDEN_PARTS:
            raise ValueError(f"unknown hidden part {self.hidden_part!r}")

    def unitary(self, dim_h):
        if self.visible_part == "I":
            u_v = np.eye(4, dtype=complex)
        else:
            p = self.visible_part[0]
            u_v = opalg.pauli_string([p, p])
        if dim_h == 1:
            if self.hidden_part != "I":
                raise ValueError(
                    "hidden part requires a model with a hidden unit")
            return u_v
        if dim_h != 2:
            raise ValueError("symmetry operations are defined for dim_h in {1, 2}")
        return np.kron(u_v, opalg.PAULI[self.hidden_part])

    def phi_image(self, phi):
        return PHI_MAPS[self.visible_part](phi)


def all_symmetry_ops():
    """The 16 operations (visible part) x (hidden part)."""
    return tuple(SymmetryOp(v, h) for v in VISIBLE_PARTS for h in HIDDEN_PARTS)


def _minimize_cell(args):
    model, r, phi, bfgs_opts, ms_opts = args
    target = _model.target_state(r, phi).density
    best, _ = _bfgs.multi_start(model, target, bfgs_opts, ms_opts)
    return best


def sweep(model, grid, bfgs_opts=None, ms_opts=None, threads=1):
    """Trained landscape over the grid: cell (i, j) holds the best run for
    the target at (r_i, phi_j).  Deterministic under a fixed seed; cells are
    independent and may be evaluated by a worker pool, assembly order is by
    grid index either way."""
    bfgs_opts = bfgs_opts or _bfgs.BfgsOptions()
    ms_opts = ms_opts or _bfgs.MultiStartOptions()
    n_r, n_phi = grid.shape
    jobs = [(model, grid.r_values[i], grid.phi_values[j], bfgs_opts, ms_opts)
            for i in range(n_r) for j in range(n_phi)]
    if threads and threads > 1:
        with concurrent.futures.ProcessPoolExecutor(max_workers=threads) as ex:
            cells = list(ex.map(_minimize_cell, jobs, chunksize=8))
    else:
        cells = [_minimize_cell(job) for job in jobs]
    s_min = np.array([c.s_min for c in cells]).reshape(n_r, n_phi)
    conv = np.array([c.converged for c in cells]).reshape(n_r, n_phi)
    gnorm = np.array([c.grad_norm for c in cells]).reshape(n_r, n_phi)
    a_opt = np.array([c.a_opt for c in cells]).reshape(n_r, n_phi, -1)
    return SweepTable(grid=grid, s_min=s_min, converged=conv,
                      a_opt=a_opt, grad_norm=gnorm)


def baseline_r1(phi):
    """Minimal relative entropy on the r=1 rim, in bits.

    Binary entropy of (cos^2 phi, sin^2 phi): the optimal marginal is the
    diagonal state carrying the rim target's moments.
    """
    out = 0.0
    for w in (np.cos(phi) ** 2, np.sin(phi) ** 2):
        if w > 1e-15:
            out -= w * np.log2(w)
    return float(out)


def baseline_phi_3pi4(r):
    """Minimal relative entropy along phi = 3pi/4, in bits."""
    if not 0.0 <= r <= 1.0:
        raise ValueError("r must lie in [0, 1]")
    out = 1.0
    for w in (r ** 2, 1.0 - r ** 2):
        if w > 1e-15:
            out -= w * np.log2(w)
    return float(out)


def mean_energy(a, b, r, phi):
    """<psi(r,phi)| a(Z1+Z2) + b(X1+X2) + Z1 Z2 |psi(r,phi)> in closed form."""
    if not 0.0 <= r <= 1.0:
        raise ValueError("r must lie in [0, 1]")
    return (2.0 * a * r ** 2 * np.cos(2 * phi)
            + 4.0 * b * r * np.sqrt(1.0 - r ** 2) * np.sin(phi + np.pi / 4)
            + 2.0 * r ** 2 - 1.0)


def extreme_params(r, phi) -> ExtremePoint:
    """Coefficients (a*, b*) making (r, phi) a stationary point of the
    mean energy over the target family."""
    den = 1.0 - 2.0 * r ** 2 * np.sin(phi + np.pi / 4) ** 2
    if abs(den) < SINGULAR_ATOL:
        raise SingularityError(
            f"(r, phi) = ({r}, {phi}) lies on the singular locus")
    s = np.sin(phi + np.pi / 4)
    a_star = -(1.0 - r ** 2) * (np.cos(phi + np.pi / 4) / s) / den
    b_star = -r * np.sqrt(1.0 - r ** 2) * np.sin(2 * phi) / s / den
    return ExtremePoint(a_star=float(a_star), b_star=float(b_star))


def hessian_det(r, phi):
    """Determinant of the mean-energy Hessian at the stationary coefficients.

    Positive exactly in the first and third quadrants; the sign decides
    whether the stationary point is an extremum or a saddle.
    """
    s2 = np.sin(2 * phi)
    if abs(1.0 + s2) < SINGULAR_ATOL:
        raise SingularityError("1 + sin(2 phi) vanishes (phi = 3pi/4 or 7pi/4)")
    den = 1.0 - r ** 2 * (1.0 + s2)
    if abs(den) < SINGULAR_ATOL:
        raise SingularityError("Hessian denominator vanishes at this (r, phi)")
    return float(32.0 * r ** 2 * s2 / ((1.0 + s2) * den ** 2))


def certificate_hamiltonian(r, phi):
    """a*(Z1+Z2) + b*(X1+X2) + Z1 Z2 at the stationary coefficients."""
    pt = extreme_params(r, phi)
    z1 = opalg.pauli_string("ZI")
    z2 = opalg.pauli_string("IZ")
    x1 = opalg.pauli_string("XI")
    x2 = opalg.pauli_string("IX")
    zz = opalg.pauli_string("ZZ")
    return pt.a_star * (z1 + z2) + pt.b_star * (x1 + x2) + zz


def ground_state_certificate(r, phi) -> GroundStateCertificate:
    """Check whether the target is the unique extremal eigenstate of the
    tangent-plane Hamiltonian.

    boundary is true iff the target has fidelity > 1 - 1e-8 with a
    nondegenerate lowest or highest eigenvector (either sign of the
    Hamiltonian is admissible); gap is the spectral distance from the
    matched extremal level to its neighbor.
    """
    h = certificate_hamiltonian(r, phi)
    values, vectors = np.linalg.eigh(h)
    psi = _model.target_state(r, phi).state
    fid_low = abs(np.vdot(vectors[:, 0], psi)) ** 2
    fid_high = abs(np.vdot(vectors[:, -1], psi)) ** 2
    scale = max(1.0, abs(values[-1]), abs(values[0]))
    if fid_low >= fid_high:
        fidelity, gap = fid_low, float(values[1] - values[0])
    else:
        fidelity, gap = fid_high, float(values[-1] - values[-2])
    nondegenerate = gap > 1e-9 * scale
    boundary = bool(fidelity > 1.0 - 1e-8 and nondegenerate)
    return GroundStateCertificate(boundary=boundary, fidelity=float(fidelity),
                                  gap=gap)


def surface_point(r, phi):
    """Joint expectations (<Z1+Z2>, <X1+X2>, <Z1 Z2>) of the target."""
    if not 0.0 <= r <= 1.0:
        raise ValueError("r must lie in [0, 1]")
    return (float(2.0 * r ** 2 * np.cos(2 * phi)),
            float(4.0 * r * np.sqrt(1.0 - r ** 2) * np.sin(phi + np.pi / 4)),
            float(2.0 * r ** 2 - 1.0))


def numerical_range_cloud(n, seed=0):
    """Joint expectations of n Haar-random two-qubit pure states.

    Returns an (n, 3) array of (<Z1+Z2>, <X1+X2>, <Z1 Z2>) triples; every
    triple lies in the operator-norm box [-2,2] x [-2,2] x [-1,1].
    """
    if n < 1:
        raise ValueError("need at least one sample")
    rng = np.random.default_rng(seed)
    states = rng.standard_normal((n, 4)) + 1j * rng.standard_normal((n, 4))
    states /= np.linalg.norm(states, axis=1, keepdims=True)
    zsum = opalg.pauli_string("ZI") + opalg.pauli_string("IZ")
    xsum = opalg.pauli_string("XI") + opalg.pauli_string("IX")
    zz = opalg.pauli_string("ZZ")
    out = np.empty((n, 3))
    for k, op in enumerate((zsum, xsum, zz)):
        out[:, k] = np.real(np.einsum("ni,ij,nj->n", states.conj(), op, states))
    return out


def range_support(direction):
    """Exact support function of the joint numerical range: the largest
    eigenvalue of the direction-weighted operator sum."""
    u = np.asarray(direction, dtype=float)
    if u.shape != (3,):
        raise ValueError("direction must be a 3-vector")
    zsum = opalg.pauli_string("ZI") + opalg.pauli_string("IZ")
    xsum = opalg.pauli_string("XI") + opalg.pauli_string("IX")
    zz = opalg.pauli_string("ZZ")
    op = u[0] * zsum + u[1] * xsum + u[2] * zz
    return float(np.linalg.eigvalsh(op)[-1])


def symmetry_map(op: SymmetryOp, a, model):
    """The parameter image a' with U H(a) U^dag = H(a').

    Each basis operator is mapped to +-itself by the conjugation; the signs
    are read off numerically so the map stays valid for any compatible
    basis ordering.
    """
    a = np.asarray(a, dtype=float).ravel()
    if a.size != model.n_params:
        raise ValueError("parameter vector does not match the basis")
    signs = _conjugation_signs(op, model)
    return signs * a


def _conjugation_signs(op, model):
    u = op.unitary(model.dim_h)
    if u.shape[0] != model.dim:
        raise ValueError("symmetry operation does not match the model")
    ops = model.basis.ops
    conj = np.einsum("ij,njk,lk->nil", u, ops, u.conj())
    norms = np.real(np.einsum("nij,nji->n", ops, ops))
    signs = np.real(np.einsum("nij,nji->n", conj, ops)) / norms
    if not np.all(np.abs(np.abs(signs) - 1.0) < 1e-10):
        raise ValueError("operation does not map the basis to itself")
    return np.sign(signs)


def symmetry_invariance_check(r, phi, a, op: SymmetryOp, model=None):
    """Relative entropies of a symmetry-related pair, both in bits.

    lhs uses the transformed target (r, phi-image) with the mapped
    parameters, rhs the original pair; the two agree for every symmetry
    operation.
    """
    if model is None:
        model = _model.hidden_model_3q()
    a = np.asarray(a, dtype=float).ravel()
    a_mapped = symmetry_map(op, a, model)
    phi2 = op.phi_image(phi)
    lhs = _grad.objective(model, _model.target_state(r, phi2).density, a_mapped)
    rhs = _grad.objective(model, _model.target_state(r, phi).density, a)
    return lhs, rhs
