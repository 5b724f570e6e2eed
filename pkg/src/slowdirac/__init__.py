"""Dirac equation with a kink-shaped mass in spinor slow light: scattering
spectra, split-step wave-packet dynamics and zero-mode numerics."""

__version__ = "0.1.0"

from .config import CATALOG, ScenarioConfig, emit_config, parse_config, resolve
from .dynamics import (
    EvolutionConfig,
    SpinorField,
    Trajectory,
    evolve,
    gaussian_spinor,
    hamiltonian_residual,
    step,
    zero_mode_state,
)
from .errors import (
    CatalogError,
    ConfigParseError,
    ConfigurationError,
    DomainError,
    NonNormalizableWarning,
    ResolutionWarning,
    SingularBoundaryError,
    TransferOverflowError,
    UnitarityError,
    WraparoundWarning,
)
from .experiments import RobustnessReport, ScenarioResult, mixing_angle_sweep, noise_ensemble, run_config, run_scenario
from .model import (
    Constant,
    Grid,
    Kink,
    MixingAngle,
    NoiseSpec,
    Noisy,
    PhysicalScale,
    Sampled,
    Sine,
    coefficients,
    evaluate_profile,
    generate_noise,
    sample_on_grid,
)
from .output import RunMetadata, read_spectrum_csv, write_observables_csv, write_snapshots_csv, write_spectrum_csv
from .rng import rng_stream, splitmix64
from .scattering import (
    Spectrum,
    cell_propagator,
    gap_edges,
    generator_matrix,
    midgap_peak,
    reflect_transmit,
    spectrum,
    total_transfer,
    transfer_matrices,
    zero_frequency_transmission,
)
