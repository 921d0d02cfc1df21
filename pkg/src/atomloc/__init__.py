"""2D atom localization from the probe susceptibility of a driven V-type atom.

The package computes exact steady states of a three-level V system whose
two spontaneous-emission channels interfere (spontaneously generated
coherence), maps the imaginary probe susceptibility chi'' over the plane of
two orthogonal standing-wave coupling fields, and analyses the resulting
localization patterns per quadrant.
"""

from .localization import (
    GridSpec,
    LocalizationMap,
    PeakEntry,
    PeakReport,
    SweepResult,
    UnknownParameterError,
    chi_imag,
    find_peaks,
    scan,
    sweep,
)
from .fileio import (
    ConfigError,
    ConfigParseError,
    ConfigValidationError,
    RunConfig,
    config_from_dict,
    load_config,
    write_csv,
    write_map_json,
    write_peaks_json,
    write_pgm,
)
from .model import (
    DegenerateDenominatorError,
    DegenerateDipoleAngleWarning,
    LiouvilleSystem,
    PhysParams,
    ZerothOrderCoherences,
    assemble_liouvillian,
    evolve_to_steady,
    generator_matrix,
    linear_response_state,
    probe_response,
    rabi_at,
    sgc_p,
    steady_state,
    susceptibility_imag,
    zeroth_order,
)
from .numerics import (
    NonFiniteStateError,
    NotHermitianError,
    SingularMatrixError,
    hermitian_eigenvalues_3x3,
    lu_solve,
    rk4_step,
)
from .validate import CheckResult, run_validation_suite

__version__ = "0.1.0"

__all__ = [
    "CheckResult",
    "ConfigError",
    "ConfigParseError",
    "ConfigValidationError",
    "DegenerateDenominatorError",
    "DegenerateDipoleAngleWarning",
    "GridSpec",
    "LiouvilleSystem",
    "LocalizationMap",
    "NonFiniteStateError",
    "NotHermitianError",
    "PeakEntry",
    "PeakReport",
    "PhysParams",
    "RunConfig",
    "SingularMatrixError",
    "SweepResult",
    "UnknownParameterError",
    "ZerothOrderCoherences",
    "assemble_liouvillian",
    "chi_imag",
    "config_from_dict",
    "evolve_to_steady",
    "find_peaks",
    "generator_matrix",
    "hermitian_eigenvalues_3x3",
    "linear_response_state",
    "load_config",
    "lu_solve",
    "probe_response",
    "rabi_at",
    "rk4_step",
    "run_validation_suite",
    "scan",
    "sgc_p",
    "steady_state",
    "susceptibility_imag",
    "sweep",
    "write_csv",
    "write_map_json",
    "write_peaks_json",
    "write_pgm",
    "zeroth_order",
]
