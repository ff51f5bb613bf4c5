"""Spectra of PT-symmetric central-field Hamiltonians p^2/2 + V(r) + i g z."""

from .angular import (
    SphericalLabel,
    cos_theta_element,
    degeneracy,
    parity_eigenvalue,
    selection_allowed,
)
from .eigen import (
    ConditionReport,
    ConvergenceError,
    Spectrum,
    condition_diagnostics,
    eigvals,
    pt_real_form,
    reduce,
    solve_pencil,
)
from .estimators import ParabolicStarkSpectrum, SlaterPTSpectrum, parabolic_labels
from .oscillator import OscillatorLevel, ho_energy, ho_levels, similarity_check
from .parabolic import (
    ChannelOperator,
    SeparationState,
    channel_eigenvalue,
    quantization_residual,
    scan_state,
    solve_state,
)
from .perturbation import (
    ParabolicLabel,
    PerturbationReport,
    analyze_pencil,
    degenerate_subspaces,
    first_order_corrections,
    hydrogen_first_order,
    hydrogen_shell_report,
)
from .scan import (
    ExceptionalPointEstimate,
    GScan,
    detect_exceptional_points,
    estimate_gc,
    refine_exceptional_point,
    scan,
)
from .slater import (
    BasisSpec,
    MatrixPencil,
    PencilError,
    build_pencil,
    kinetic_matrix,
    overlap_matrix,
    potential_matrix,
    radial_integral,
    z_matrix,
)

__version__ = "0.1.0"
