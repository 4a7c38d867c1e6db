"""Qubit imaginarity, MUB complementarity bounds, and the NAQI steering witness."""

from .advantage import (
    ConditionalEnsemble,
    NaqiResult,
    VERDICT_MARGIN,
    conditional_ensemble,
    naqi_value,
    objective,
    reduced_state_lower_bound,
    witness,
)
from .complementarity import (
    BoundConstant,
    bound_constant,
    maximize_sum_over_states,
    mub_imaginarity_sum,
)
from .frames import (
    MeasurementSet,
    MubTriple,
    check_mutually_unbiased,
    conjugate_frame,
    measurement_set,
    mub_triple,
    projector_pair,
)
from .imaginarity import (
    Measure,
    binary_entropy,
    imag_l1,
    imag_measure,
    imag_rel_entropy,
    real_part_map,
    von_neumann_entropy,
)
from .optimize import OptimizerConfig, bisect_threshold, maximize
from .qmat import (
    StateDiagnostics,
    TwoQubitPauliForm,
    bloch_to_density,
    density_matrix,
    density_to_bloch,
    hermitian_eigenvalues,
    partial_trace,
    pauli_decompose,
    pauli_reconstruct,
    tensor,
    validate_state,
)
from .scenarios import (
    ExclusionRecord,
    ScanRecord,
    bell_mixture,
    build_state,
    exclusion_point,
    exclusion_scan_one_angle,
    exclusion_scan_two_angle,
    find_naqi_threshold,
    scan_family,
    three_qubit_one_angle,
    three_qubit_pure,
    three_qubit_two_angle,
    werner,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
