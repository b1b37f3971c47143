"""Quantum and classical Fisher-information rates for in-cavity axion dark-matter searches.

The cavity is probed with vacuum, single-mode squeezed (SMSS) or two-mode
squeezed (TMSS) states; the axion acts as additive thermal noise of mean
occupation ``N_A`` per mode.  Times are in units of the axion coherence time
``tau_A`` and Fisher informations in units of ``(gamma_A tau_A)^2``.
"""
from .cavity import (
    AxionParams,
    CavityParams,
    SourceKind,
    SourceSpec,
    axion_gain_g,
    input_state,
    n_a_eff,
    n_a_eff_lowloss,
    output_state,
    signal_slope,
    transmissivity,
)
from .closed_forms import FisherPoint, j_sv, k_smss, k_tmss_general, k_tmss_onres, k_vac, k_vac_hom
from .errors import (
    AccuracyError,
    AxionQFIError,
    ConfigurationError,
    CutoffError,
    DivergenceError,
    DomainError,
    MeasurementModelError,
    NumericalInstabilityError,
    RangeError,
    StateError,
)
from .gaussian import (
    GaussianState,
    SymplecticOp,
    ThermalLossChannel,
    apply_loss,
    apply_symplectic,
    cfi_gaussian_readout,
    qfi_gaussian,
    williamson,
)
from .optimize import (
    AsymptoticPrediction,
    RateOptimum,
    advantage,
    asymptotics_smss,
    asymptotics_tmss,
    lambert_w_m1,
    optimize_g,
    optimize_t,
    rate_star,
    result1_region,
)
from .photon import PhotonDistribution, joint_pn_two_mode, marian_pn, state_pn
from .pipeline import qfi_pipeline
from .protocols import Receiver, fisher, rate
from .receivers import (
    NullingConfig,
    PhaseModelParams,
    cfi_bell,
    cfi_heterodyne,
    cfi_homodyne,
    cfi_nulling,
    choose_antisqueeze_gain,
    nulling_distribution,
    phase_averaged_fisher,
    phase_averaged_pn,
    phase_conditional_pn,
)
from .scanrate import ScanRateResult, min_scan_time, scan_rate_incavity, scan_rate_inputoutput

__version__ = "0.1.0"
