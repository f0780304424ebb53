"""Dense complex operator algebra for few-qubit systems.

Construction of Pauli-string operators, spectral decompositions, stabilized
matrix exponentials, partial traces and the entropy functionals used
throughout the package.  All matrices are plain complex numpy arrays; the
functions below validate the invariants they rely on instead of wrapping
arrays in dedicated classes.

All entropies are reported in bits (log base 2).
"""

from typing import NamedTuple

import numpy as np

# tolerances (double precision noise floor on 8x8 problems)
HERM_ATOL = 1e-12        # entrywise Hermiticity
TRACE_ATOL = 1e-10       # unit-trace check for density matrices
PSD_ATOL = 1e-10         # admissible negative eigenvalue noise
ENTROPY_FLOOR = 1e-14    # eigenvalues below this contribute 0 to entropies
SUPPORT_FLOOR = 1e-13    # relative-entropy support condition on rho
EXP_RANGE = 700.0        # unnormalized exponential range guard

LN2 = np.log(2.0)

PAULI = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


class SupportError(ValueError):
    """Second argument of the relative entropy is (numerically) singular."""


class EigenDecomposition(NamedTuple):
    """Spectral decomposition ``V diag(values) V^dag`` with ascending values."""

    values: np.ndarray   # real, ascending
    vectors: np.ndarray  # unitary, columns are eigenvectors


def is_hermitian(m, atol=HERM_ATOL):
    m = np.asarray(m)
    return m.ndim == 2 and m.shape[0] == m.shape[1] and np.all(
        np.abs(m - m.conj().T) <= atol)


def require_hermitian(m, atol=HERM_ATOL, name="matrix"):
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"{name} must be square, got shape {m.shape}")
    if not np.all(np.isfinite(m.view(float))):
        raise ValueError(f"{name} has non-finite entries")
    if np.max(np.abs(m - m.conj().T)) > atol:
        raise ValueError(f"{name} is not Hermitian within {atol}")
    return m


def require_density(rho, name="rho"):
    """Validate a density matrix: Hermitian, unit trace, PSD within noise."""
    rho = require_hermitian(rho, name=name)
    tr = np.trace(rho).real
    if abs(tr - 1.0) > TRACE_ATOL:
        raise ValueError(f"{name} has trace {tr}, expected 1")
    if np.linalg.eigvalsh(rho)[0] < -PSD_ATOL:
        raise ValueError(f"{name} has a negative eigenvalue beyond tolerance")
    return rho


def kron(a, b):
    """Kronecker product of two square matrices."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError("first factor must be square")
    if b.ndim != 2 or b.shape[0] != b.shape[1]:
        raise ValueError("second factor must be square")
    return np.kron(a, b)


def pauli_string(labels, n_sites=None):
    """Tensor product of single-site Pauli operators.

    ``labels`` is one label from {I, X, Y, Z} per site, site 1 being the
    leftmost (most significant) tensor factor.
    """
    labels = list(labels)
    if n_sites is not None and len(labels) != n_sites:
        raise ValueError(f"expected {n_sites} labels, got {len(labels)}")
    if not labels:
        raise ValueError("empty label list")
    out = None
    for lab in labels:
        if lab not in PAULI:
            raise ValueError(f"unknown Pauli label {lab!r}")
        out = PAULI[lab] if out is None else np.kron(out, PAULI[lab])
    return out


def herm_eig(h) -> EigenDecomposition:
    """Spectral decomposition of a Hermitian matrix, eigenvalues ascending.

    Raises ``numpy.linalg.LinAlgError`` if the eigensolver fails to
    converge; never returns unverified output.
    """
    h = require_hermitian(h)
    values, vectors = np.linalg.eigh(h)
    return EigenDecomposition(values=values, vectors=vectors)


def expm_hermitian(h, normalized=False):
    """Matrix exponential e^h of a Hermitian matrix via spectral shift.

    The largest eigenvalue is subtracted before exponentiating, so the
    intermediate exponentials never overflow.  With ``normalized=True`` the
    result is e^h / Tr(e^h), in which the shift cancels exactly; this form is
    stable for arbitrarily large spectra.  The unnormalized form reinstates
    the shift and is rejected when the spectrum makes that overflow.
    """
    values, vectors = herm_eig(h)
    shift = values[-1]
    e_shifted = np.exp(values - shift)
    if normalized:
        w = e_shifted / e_shifted.sum()
        return (vectors * w) @ vectors.conj().T
    if shift > EXP_RANGE or (values[-1] - values[0]) > EXP_RANGE:
        raise OverflowError(
            "eigenvalue range too large for the unnormalized exponential; "
            "request the normalized form")
    return (vectors * (e_shifted * np.exp(shift))) @ vectors.conj().T


def partial_trace_last(rho, dim_v, dim_h):
    """Trace out the last tensor factor of a (dim_v*dim_h) square matrix."""
    rho = np.asarray(rho, dtype=complex)
    d = dim_v * dim_h
    if rho.shape != (d, d):
        raise ValueError(
            f"matrix of shape {rho.shape} does not factor as {dim_v}x{dim_h}")
    return np.einsum("abcb->ac", rho.reshape(dim_v, dim_h, dim_v, dim_h))


def von_neumann_entropy(rho):
    """Von Neumann entropy -Tr(rho log2 rho) in bits, 0*log0 = 0."""
    rho = require_density(rho)
    w = np.linalg.eigvalsh(rho)
    w = w[w > ENTROPY_FLOOR]
    return float(-np.sum(w * np.log2(w)))


def relative_entropy(sigma, rho):
    """Quantum relative entropy S(sigma|rho) = Tr sigma (log2 sigma - log2 rho).

    ``rho`` must be strictly positive definite; ``sigma`` may be pure or
    rank deficient.  Both terms are evaluated in the respective eigenbases.
    """
    sigma = require_density(sigma, name="sigma")
    rho = require_density(rho, name="rho")
    if sigma.shape != rho.shape:
        raise ValueError("sigma and rho must have equal dimensions")
    r_vals, r_vecs = np.linalg.eigh(rho)
    if r_vals[0] < SUPPORT_FLOOR:
        raise SupportError(
            f"rho has eigenvalue {r_vals[0]:.3e} below the support floor")
    s_vals = np.linalg.eigvalsh(sigma)
    s_vals = s_vals[s_vals > ENTROPY_FLOOR]
    sigma_term = float(np.sum(s_vals * np.log2(s_vals)))
    weights = np.real(np.einsum("ij,jk,ki->i", r_vecs.conj().T, sigma, r_vecs))
    cross_term = float(weights @ np.log2(r_vals))
    return sigma_term - cross_term


def fidelity_pure(psi, rho):
    """Overlap <psi|rho|psi> of a pure state with a density matrix."""
    psi = np.asarray(psi, dtype=complex).ravel()
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (psi.size, psi.size):
        raise ValueError("state and matrix dimensions do not match")
    return float(np.real(np.vdot(psi, rho @ psi)))


def random_pure_state(dim, rng):
    """Haar-random pure state: normalized complex Gaussian amplitudes."""
    v = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return v / np.linalg.norm(v)
