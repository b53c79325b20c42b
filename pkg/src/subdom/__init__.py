"""Subcarrier-domain channel model for multicarrier CVQKD."""

from .channel import (
    GaussianEnsemble,
    PathComponent,
    SubcarrierDomainMatrix,
    Transmittance,
    TransmissionRecord,
    domain_transmit,
    flat_transmittance,
    fourier_transmittance,
    path_matrix,
    path_transmittance,
    sample_input,
    statistical_model,
    subcarrier_decode,
    subcarrier_domain,
    subcarrier_encode,
    transmit,
)
from .fourier import (
    AnglePair,
    BasisSet,
    BasisVector,
    FourierOperator,
    basis_kernel_plot,
    basis_set,
    basis_vector,
    bin_contains,
    build_cvqft,
    cos_omega,
    f_tau,
    f_tau_sinc_limit,
    in_domain_bin,
    kernel_plot,
)
from .multiuser import (
    MultiuserConfig,
    build_multiuser_operators,
    f_kout,
    f_kout_maxima,
    multiuser_basis_sets,
    multiuser_path_matrix,
    multiuser_subcarrier_domain,
    multiuser_transmit,
    predicted_maxima,
)
from .stats import (
    MagnitudeProfile,
    RankReport,
    SweepResult,
    SweepSpec,
    check_sweep_contrast,
    diversity_vs_l,
    magnitude_profile,
    near_zero_monotonicity,
    omega_sweep,
    random_offgrid_paths,
    rank_approximation,
    rank_report,
)

__version__ = "0.1.0"
