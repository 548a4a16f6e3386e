"""Numerical lab for 1D gravity-capillary water waves in the Zakharov formulation."""

from ._core import (
    DirichletNeumann,
    Grid,
    InvalidArgument,
    Params,
    SolverFailure,
    coercivity,
    dn_check,
    evolve_solitary,
    grillakis_sign,
    interaction_integral,
    seed_residual,
    solitary_wave,
    spectrum,
    transverse_scan,
    two_soliton_residual,
)

__all__ = [
    "DirichletNeumann",
    "Grid",
    "InvalidArgument",
    "Params",
    "SolverFailure",
    "coercivity",
    "dn_check",
    "evolve_solitary",
    "grillakis_sign",
    "interaction_integral",
    "seed_residual",
    "solitary_wave",
    "spectrum",
    "transverse_scan",
    "two_soliton_residual",
]
