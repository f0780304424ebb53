"""Training quantum Boltzmann machines by relative-entropy minimization.

The package trains the visible marginal of a parameterized Gibbs state
toward a two-qubit target with a BFGS optimizer driven by exact analytic
gradients, and provides the geometric and symmetry analysis of the
resulting minimal-entropy landscape.
"""

from .analysis import (
    ExtremePoint,
    GroundStateCertificate,
    SingularityError,
    SweepGrid,
    SweepTable,
    SymmetryOp,
    all_symmetry_ops,
    baseline_phi_3pi4,
    baseline_r1,
    extreme_params,
    ground_state_certificate,
    hessian_det,
    mean_energy,
    numerical_range_cloud,
    range_support,
    surface_point,
    sweep,
    symmetry_invariance_check,
    symmetry_map,
)
from .bfgs import (
    BfgsOptions,
    BfgsState,
    MultiStartOptions,
    OptimResult,
    line_search,
    minimize,
    multi_start,
)
from .grad import (
    GradientWorkspace,
    finite_diff_grad,
    grad_hidden,
    grad_visible,
    gradient,
    objective,
    objective_nats,
    value_and_grad,
)
from .model import (
    OperatorBasis,
    QbmModel,
    TargetState,
    boltzmann_state,
    hamiltonian,
    hidden_model_3q,
    moments,
    target_state,
    visible_model_2q,
    visible_state,
)
from .opalg import (
    EigenDecomposition,
    SupportError,
    expm_hermitian,
    fidelity_pure,
    herm_eig,
    kron,
    partial_trace_last,
    pauli_string,
    random_pure_state,
    relative_entropy,
    von_neumann_entropy,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
