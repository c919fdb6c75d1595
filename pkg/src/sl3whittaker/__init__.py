"""Numerics for rank-two spherical Whittaker functions, their Fourier-side
expansion machinery, and the Hecke action on polar q-expansions."""

from ._backend import BACKEND as backend_name
from .algebra import (
    SatakeParameter,
    TorusPoint,
    WEYL_GROUP,
    WeylElement,
    contragredient_torus,
    in_general_position,
    parse_lambda,
    torus_character,
    weyl_apply,
)
from .bessel import (
    BesselOrder,
    bessel_asymptotic_leading,
    bessel_i,
    bessel_k,
    order_monotonicity_check,
    product_identity_residual,
)
from .context import (
    CancellationAlarm,
    GeneralPositionError,
    InsufficientSupportError,
    KernelError,
    NonConvergenceError,
    PoleError,
    PrecisionContext,
    QuadratureError,
)
from .cosets import (
    CosetRep,
    cos_nonvanishing_check,
    coset_enumerate,
    delta,
    iwasawa_translate,
    mobius_real,
    theta_gamma,
)
from .gammafn import log_gamma
from .whittaker import (
    apply_transformation_law,
    eval_whittaker,
    m_degen_a1,
    m_degen_a2,
    m_leading_asym,
    m_whittaker,
    w_degen_a1,
    w_degen_a2,
    w_real_bound_check,
    w_vt,
    w_weylsum,
)
from .asymptotics import (
    EnvelopeReport,
    NilpotentTriple,
    envelope_check,
    label_difference,
    nilpotent_triples,
    phi_asym_specialized,
    phi_log_asym,
    sigma,
    sigma_derivative,
)
from .fourier import (
    CoefficientModel,
    MajorantReport,
    SynthesizedField,
    Truncation,
    gamma_select,
    majorant_sums,
    pk0l_value,
    project_k0l,
    project_mn,
    synthesize,
)
from .hecke import QExpansion, hecke_apply, hecke_brute_oracle, hecke_combo
from .verify import CheckResult, run_suite

__version__ = "0.1.0"
