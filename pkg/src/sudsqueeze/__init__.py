"""Entanglement criteria for N-qudit states built from collective su(d) correlations."""

from .basis import (
    GeneratorBasis,
    SpinOperators,
    anticomm_basis_d3,
    extend_ud,
    flip_operator,
    gellmann_basis,
    lambda_max,
    spin_matrices,
    swap_operator,
)
from .correlations import CollectiveBundle, TwoBodyBundle, collective_bundle, spin_bundle, two_body_bundle
from .criteria import (
    CriterionReport,
    ccnr,
    ppt_all_bipartitions,
    spin_squeezing_set,
    werner_criterion,
    xi_spin,
    xi_sud_collective,
    xi_sud_two_body,
)
from .exceptions import InvariantViolation, SqueezingError
from .models import (
    GibbsFamily,
    hamiltonian_random_collective,
    hamiltonian_spin,
    hamiltonian_sud_singlet,
    noisy_singlet,
    rho_ps3,
    sud_singlet,
    thermal_state,
    werner_two_qudit,
)
from .states import NQuditState, avg_two_body, partial_trace, partial_transpose

__version__ = "0.1.0"
