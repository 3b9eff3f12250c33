"""Simulation toolkit for MIMO links relayed by a large reflecting surface.

The package models the two-hop channel between antenna arrays and a planar
surface of programmable reflecting elements with spherical wavefronts kept
intact, provides closed forms and achievability bounds for when the cascade
supports full spatial multiplexing, and optimizes both the reflection
phases and the array orientations.
"""

from .channel import (
    ChannelSet,
    CouplingConstants,
    FocusingState,
    assemble,
    build_channels,
    closed_form_channel,
    coupling_constants,
    dirichlet_ratio,
    irs_rx_channel,
    orientation_phase_jacobian,
    propagation_phases,
    reflective_focusing,
    scenario_focusing,
    tx_irs_channel,
)
from .geometry import (
    ArrayPose,
    IrsLayout,
    antenna_position,
    centered_indices,
    link_distance_approx,
    link_distance_exact,
    local_frame,
    re_position,
)
from .multiplexing import (
    FmrBound,
    GramReport,
    OrientationSetting,
    RayleighResult,
    boundary_cap,
    check_orthogonality,
    fmr_inner_bound,
    fmr_orientations,
    fmr_probe_orientation,
    rayleigh_distances,
    region_contains,
    single_hop_orientation,
)
from .optimize import (
    MmAuxiliaries,
    OptTrace,
    OrientationVector,
    PowerConfig,
    SingularAllocation,
    allocation_rate,
    alternating_optimize,
    finite_difference_gradient,
    focusing_init,
    largest_eigenvalue,
    mi_gradient,
    mi_upper_bound,
    mm_auxiliaries,
    mm_step,
    mutual_information,
    optimize_orientation,
    optimize_theta,
    oriented_scenario,
    qcqp_objective,
    random_init,
    relaxed_optimum,
)
from .response import (
    ReflectionConfig,
    WaveConfig,
    amplitude_variation,
    eta0,
    far_field_boundary_irs,
    far_field_boundary_re,
    path_loss,
    re_response_amplitude,
    sinc_ratio,
    tilde_g,
)
from .scenario import (
    Scenario,
    ScenarioError,
    parse_scenario,
    parse_scenario_text,
    scenario_hash,
    serialize_scenario,
    with_rx,
    with_tx,
)

__version__ = "0.1.0"

__all__ = [
    "ArrayPose",
    "ChannelSet",
    "CouplingConstants",
    "FmrBound",
    "FocusingState",
    "GramReport",
    "IrsLayout",
    "MmAuxiliaries",
    "OptTrace",
    "OrientationSetting",
    "OrientationVector",
    "PowerConfig",
    "RayleighResult",
    "ReflectionConfig",
    "Scenario",
    "ScenarioError",
    "SingularAllocation",
    "WaveConfig",
    "allocation_rate",
    "alternating_optimize",
    "amplitude_variation",
    "antenna_position",
    "assemble",
    "boundary_cap",
    "build_channels",
    "centered_indices",
    "check_orthogonality",
    "closed_form_channel",
    "coupling_constants",
    "dirichlet_ratio",
    "eta0",
    "far_field_boundary_irs",
    "far_field_boundary_re",
    "finite_difference_gradient",
    "fmr_inner_bound",
    "focusing_init",
    "fmr_orientations",
    "fmr_probe_orientation",
    "irs_rx_channel",
    "largest_eigenvalue",
    "link_distance_approx",
    "link_distance_exact",
    "local_frame",
    "mi_gradient",
    "mi_upper_bound",
    "mm_auxiliaries",
    "mm_step",
    "mutual_information",
    "optimize_orientation",
    "optimize_theta",
    "orientation_phase_jacobian",
    "oriented_scenario",
    "parse_scenario",
    "parse_scenario_text",
    "path_loss",
    "propagation_phases",
    "qcqp_objective",
    "random_init",
    "rayleigh_distances",
    "re_position",
    "re_response_amplitude",
    "reflective_focusing",
    "region_contains",
    "relaxed_optimum",
    "scenario_focusing",
    "scenario_hash",
    "serialize_scenario",
    "sinc_ratio",
    "single_hop_orientation",
    "tilde_g",
    "tx_irs_channel",
    "with_rx",
    "with_tx",
]
