"""Quench dynamics of the non-local Luttinger model with a box potential."""
from __future__ import annotations

__version__ = "0.1.0"

from .errors import (DomainError, GridMismatch, InsufficientSamples, LightConeSingularity,
                     LuttQuenchError, NonPositiveValue, StabilityError, ToleranceNotMet,
                     WindowTooCoarse)
from .model import Convention, DispersionData, ModelParams, check_stability, dispersion, potential
from .finite_volume import ModeGrid, density_finite, exponent_main1, free_propagator_finite, z_sum
from .infinite_volume import (density_free, density_interacting, density_profile, q_closed_form,
                              track_peaks, z_of_t)
from .numerics import FitReport, QuadratureSpec, cin, fit_power_law, integrate
from .boson_algebra import (BosonExponent, VacuumRules, appendix_factors, conjugate_bogoliubov,
                            conjugate_evolution, derive_main1_exponent, vacuum_expectation,
                            vertex_factor)
