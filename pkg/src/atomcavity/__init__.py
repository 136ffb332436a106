"""Classical model of atoms interacting with a Gaussian mode in free space and in a resonator."""
from .atom_optics import (
    AtomTransition,
    ComplexCoupling,
    DetuningPair,
    GaussianMode,
    absorption_fraction,
    absorption_fraction_interference,
    beta_exact,
    beta_rwa,
    bidirectional_mode_ratio,
    cross_section,
    farfield_projection_oracle,
    lorentz_absorptive,
    lorentz_dispersive,
    phase_shift,
    polarizability_exact,
    scattered_power_fs,
)
from .cavity import (
    AbstractScenario,
    CavitySpec,
    cavity_emission,
    cavity_emission_rwa,
    cavity_shift_rwa,
    driven_atom_fields,
    fs_emission_driven_atom,
    fs_emission_driven_atom_rwa,
    fs_emission_driven_cavity,
    fs_emission_driven_cavity_rwa,
    intracavity_field_driven_cavity,
    sidebeam_transmission,
    transmission,
    transmission_rwa,
)
from .cavity_ensemble import (
    CavityEnsembleLayout,
    CollectiveFactors,
    collective_factors,
    collective_G,
    collective_H,
    ensemble_cavity_scattering_rwa,
    ensemble_cavity_shift_rwa,
    ensemble_fs_emission_rwa,
    ensemble_transmission_rwa,
)
from .ensemble import (
    CollectiveFactorEstimate,
    EnsembleLayout,
    beer_transmission,
    collective_F,
    ensemble_mode_power_ratio,
    ensemble_phase,
)
from .errors import (
    EstimatorError,
    GainError,
    InvalidArgumentError,
    PhysicsWarning,
    ResolutionError,
    UnsupportedOperationError,
)
from .kernels import BACKEND
from .sampling import LayoutSpec, generate, layout_positions, monte_carlo, read_layout_csv, write_layout_csv
from .spectra import (
    PRESETS,
    PeakReport,
    SpectrumTable,
    find_peaks,
    g_quantum,
    rwa_error_report,
    scan,
    scan_preset,
    vacuum_rabi_classical,
)

__version__ = "0.1.0"
