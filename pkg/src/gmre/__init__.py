"""Genuine multipartite entanglement measures via first-order convex solvers.

The package computes a relative-entropy based measure of genuine
multipartite entanglement (and a sandwiched-Renyi variant, a log-negativity
variant, and an alternate tighter-set variant) by minimizing divergences
over a lifted semidefinite-representable feasible set, evaluates the
associated fidelity and one-shot distillation bounds, and reproduces a
transverse-field Ising chain study at exact-diagonalization scale.
"""

from .bounds import (
    ghz_fidelity_lower_bound,
    one_shot_bound,
    renyi_lower_bound_check,
    renyi_one_shot_bound,
)
from .entropy import (
    binary_entropy,
    binary_rel_entropy_profile,
    classical_rel_entropy,
    quantum_entropy,
    quantum_rel_entropy,
    sandwiched_renyi,
)
from .feasible import (
    MembershipReport,
    TSetPoint,
    assemble,
    dykstra_project,
    feasible_init,
    jordan_hahn,
    random_feasible_point,
    t_membership,
    tprime_membership,
)
from .linalg import eig_hermitian, log_gradient, matrix_function, psd_project, trace_norm
from .monotone import (
    BranchMap,
    SelectiveOperation,
    apply_selective,
    is_selective_ppt,
    local_instrument,
)
from .solver import (
    SolveConfig,
    SolveReport,
    alt_rains,
    gmn_from_log,
    gmre,
    log_gmn,
    renyi_rains,
)
from .states import (
    Bipartition,
    DensityMatrix,
    KrausChannel,
    PartyShape,
    apply_channel,
    dephased_ghz,
    enumerate_bipartitions,
    fidelity,
    ghz_state,
    partial_trace,
    partial_transpose,
    random_density_matrix,
    read_state_file,
    swap_operator,
    write_state_file,
)
from .tfim import ChainConfig, SweepSpec, ground_state, sweep, three_site_rdm

__version__ = "0.1.0"
