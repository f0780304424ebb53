"""Quantum Boltzmann machine model families and target states.

A model is an ordered basis of traceless Hermitian operators O together with
a visible/hidden dimension split.  The parameterized Hamiltonian is
H(a) = -a.O, the machine state is the Gibbs state e^{a.O}/Tr(e^{a.O}) and the
trained object is its visible marginal.  Two concrete families are exposed:
a 2-qubit transverse-field Ising model without hidden units and a 3-qubit
variant whose third qubit is hidden.

Conventions: qubit 1 is the leftmost (most significant) tensor factor and
the hidden subsystem is always the last one.
"""

from dataclasses import dataclass, field

import numpy as np

from . import opalg

GRAM_COND_LIMIT = 1e8   # basis declared dependent beyond this condition number


@dataclass(frozen=True)
class OperatorBasis:
    """Ordered list of linearly independent traceless Hermitian operators."""

    ops: np.ndarray            # stacked (n, d, d) complex array
    labels: tuple = ()

    def __post_init__(self):
        ops = np.asarray(self.ops, dtype=complex)
        if ops.ndim != 3 or ops.shape[1] != ops.shape[2]:
            raise ValueError("ops must be a stacked (n, d, d) array")
        object.__setattr__(self, "ops", ops)
        labels = tuple(self.labels) if self.labels else tuple(
            f"O{i+1}" for i in range(len(ops)))
        if len(labels) != len(ops):
            raise ValueError("one label per operator required")
        object.__setattr__(self, "labels", labels)
        for i, op in enumerate(ops):
            opalg.require_hermitian(op, name=f"operator {labels[i]}")
            if abs(np.trace(op)) > 1e-12:
                raise ValueError(f"operator {labels[i]} is not traceless")
        gram = np.real(np.einsum("nij,mji->nm", ops.conj(), ops))
        if np.linalg.cond(gram) > GRAM_COND_LIMIT:
            raise ValueError("operator basis is linearly dependent")

    def __len__(self):
        return len(self.ops)

    @property
    def dim(self):
        return self.ops.shape[1]


@dataclass(frozen=True)
class QbmModel:
    """Operator basis plus the visible/hidden split of the Hilbert space."""

    basis: OperatorBasis
    dim_v: int
    dim_h: int = 1

    def __post_init__(self):
        if self.dim_v < 1 or self.dim_h < 1:
            raise ValueError("dimensions must be positive")
        if self.basis.dim != self.dim_v * self.dim_h:
            raise ValueError(
                f"operator dimension {self.basis.dim} != dim_v*dim_h "
                f"= {self.dim_v * self.dim_h}")

    @property
    def dim(self):
        return self.dim_v * self.dim_h

    @property
    def n_params(self):
        return len(self.basis)


@dataclass(frozen=True)
class TargetState:
    """Two-qubit target |psi(r, phi)>, symmetric under qubit swap.

    Amplitudes: sqrt(1-r^2)/sqrt2 on |01> and |10>, r cos(phi) on |00> and
    r sin(phi) on |11>.
    """

    r: float
    phi: float
    state: np.ndarray = field(repr=False, default=None)

    def __post_init__(self):
        if not 0.0 <= self.r <= 1.0:
            raise ValueError(f"r must lie in [0, 1], got {self.r}")
        q = np.sqrt(1.0 - self.r**2) / np.sqrt(2.0)
        amp = np.array([self.r * np.cos(self.phi), q, q,
                        self.r * np.sin(self.phi)], dtype=complex)
        object.__setattr__(self, "state", amp)

    @property
    def density(self):
        return np.outer(self.state, self.state.conj())


def target_state(r, phi) -> TargetState:
    """Materialize the two-parameter target family member at (r, phi)."""
    return TargetState(r=float(r), phi=float(phi))


def visible_model_2q() -> QbmModel:
    """2-qubit model, no hidden unit: basis (X1, X2, Z1, Z2, Z1Z2)."""
    strings = ["XI", "IX", "ZI", "IZ", "ZZ"]
    labels = ("X1", "X2", "Z1", "Z2", "Z1Z2")
    ops = np.array([opalg.pauli_string(s) for s in strings])
    return QbmModel(basis=OperatorBasis(ops=ops, labels=labels), dim_v=4, dim_h=1)


def hidden_model_3q() -> QbmModel:
    """3-qubit model with the third qubit hidden.

    Basis order (X1, X2, X3, Z1, Z2, Z3, Z2Z3, Z1Z3, Z1Z2), so parameter
    indices match the 9 coupling coefficients of the Hamiltonian family.
    """
    strings = ["XII", "IXI", "IIX", "ZII", "IZI", "IIZ", "IZZ", "ZIZ", "ZZI"]
    labels = ("X1", "X2", "X3", "Z1", "Z2", "Z3", "Z2Z3", "Z1Z3", "Z1Z2")
    ops = np.array([opalg.pauli_string(s) for s in strings])
    return QbmModel(basis=OperatorBasis(ops=ops, labels=labels), dim_v=4, dim_h=2)


def _check_params(model, a):
    a = np.asarray(a, dtype=float).ravel()
    if a.size != model.n_params:
        raise ValueError(
            f"parameter vector has length {a.size}, basis has {model.n_params}")
    if not np.all(np.isfinite(a)):
        raise ValueError("parameter vector has non-finite entries")
    return a


def hamiltonian(model, a):
    """H(a) = -sum_i a_i O_i."""
    a = _check_params(model, a)
    return -np.tensordot(a, model.basis.ops, axes=1)


def boltzmann_state(model, a):
    """Gibbs state e^{a.O} / Tr(e^{a.O}), computed with spectral shift."""
    a = _check_params(model, a)
    k = np.tensordot(a, model.basis.ops, axes=1)
    return opalg.expm_hermitian(k, normalized=True)


def visible_state(model, a):
    """Reduced state of the visible subsystem; equals the Gibbs state
    when there is no hidden unit."""
    rho = boltzmann_state(model, a)
    if model.dim_h == 1:
        return rho
    return opalg.partial_trace_last(rho, model.dim_v, model.dim_h)


def moments(rho, basis):
    """Expectation values Tr(rho O_i) for every basis operator."""
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (basis.dim, basis.dim):
        raise ValueError("state dimension does not match the basis")
    vals = np.einsum("nij,ji->n", basis.ops, rho)
    if np.max(np.abs(vals.imag)) > 1e-12:
        raise ValueError("moments have a non-negligible imaginary part")
    return vals.real.copy()
