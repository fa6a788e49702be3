"""Unitary spin-measurement simulations with a finite boson heat bath.

A two-level system is coupled to a discretized sub-Ohmic bath and the
joint state is propagated exactly (truncated Fock basis, small baths)
or variationally (multimode coherent-state ansatz, many modes).  The
package covers bath discretization and thermal sampling, variational
propagation with an adaptive basis, entropy and Bloch-vector
observables, and seeded experiment campaigns writing reproducible run
directories.
"""

from .bath import BathSpec, SpectralDensityParams, ThermalParams, discretize, sample_initial_bath, spectral_density
from .coherent import gram_matrix, matrix_elements, multimode_overlap, overlap
from .config import ConfigError, PRESETS, apply_overrides, load_config, preset, resolve
from .experiments import (
    CampaignError,
    CampaignSpec,
    EnsembleSummary,
    RunRecord,
    run_campaign,
)
from .fock import FIG1_CASES, Fig1Params, fig1_experiment
from .observables import (
    AsymptoteRecord,
    entropy_record,
    environment_entropy,
    extract_asymptote,
    histogram_asymptotes,
    linear_entropy,
    phi_sweep_fit,
    spin_entropy,
)
from .propagator import IntegratorConfig, NumericalFailure, adapt_basis, energy_expectation, run_trajectory, step
from .protocol import Modulation, Protocol
from .runio import canonical_json, read_manifest, replay_manifest, run_and_write, write_run_dir
from .state import (
    D2State,
    apply_total_parity,
    bloch_vector,
    make_product_initial,
    reduced_spin_density,
    renormalize_spin_to_pure,
    state_overlap,
    superpose,
)
from .trace import BlochTrace

__all__ = [
    "AsymptoteRecord",
    "BathSpec",
    "BlochTrace",
    "CampaignError",
    "CampaignSpec",
    "ConfigError",
    "D2State",
    "EnsembleSummary",
    "FIG1_CASES",
    "Fig1Params",
    "IntegratorConfig",
    "Modulation",
    "NumericalFailure",
    "PRESETS",
    "Protocol",
    "RunRecord",
    "SpectralDensityParams",
    "ThermalParams",
    "adapt_basis",
    "apply_overrides",
    "apply_total_parity",
    "bloch_vector",
    "canonical_json",
    "discretize",
    "energy_expectation",
    "entropy_record",
    "environment_entropy",
    "extract_asymptote",
    "fig1_experiment",
    "gram_matrix",
    "histogram_asymptotes",
    "linear_entropy",
    "load_config",
    "make_product_initial",
    "matrix_elements",
    "multimode_overlap",
    "overlap",
    "phi_sweep_fit",
    "preset",
    "read_manifest",
    "reduced_spin_density",
    "renormalize_spin_to_pure",
    "replay_manifest",
    "resolve",
    "run_and_write",
    "run_campaign",
    "run_trajectory",
    "sample_initial_bath",
    "spectral_density",
    "spin_entropy",
    "state_overlap",
    "step",
    "superpose",
    "write_run_dir",
]
