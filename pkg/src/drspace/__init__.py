"""Radial Fourier analysis on Damek-Ricci spaces and numerical audits of
Titchmarsh-type theorems."""

from .checks import (
    HolderParams,
    besov_check,
    converse_hypotheses,
    converse_titchmarsh,
    dyadic_shell_equiv,
    forward_titchmarsh,
    holder_integrability,
    lipcor_two_sided,
    tail_energy,
)
from .moduli import (
    Modulus,
    dyadic_sum_bound,
    make_modulus,
    mo_lower_index,
    monotonicity_audit,
    standard_modulus,
    zygmund_z0,
    zygmund_zk,
)
from .params import DRParams, NPoint, derive_params, poisson_kernel, resolve_jacobi_indices
from .profiles import band_limited_profile, besov_profile, compact_profile, gaussian_profile, power_profile, read_profile, write_profile
from .report import CheckReport, Hypothesis
from .spherical import density_sample, lower_bound_constant, phi_bounds_audit, plancherel_density, spherical_eval, spherical_phi
from .transform import (
    RadialFunction,
    SpectralFunction,
    TailModel,
    inverse_transform,
    lip_deviation,
    lp_norm,
    radial_function,
    spherical_mean,
    spherical_transform,
)

__version__ = "0.1.0"
