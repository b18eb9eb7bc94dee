"""Nonlinear initial-slope eigenvalue problems for Riccati-type ODEs."""

__version__ = "0.1.0"

from .asymptotics import InsufficientData, MixedSigns, PowerLawFit, fit_power_law
from .classify import Classification, Regime, StabilityProbe, Terminal, classify, stability_probe
from .eigensolve import (
    BracketNotFound,
    DomainTooSmall,
    EigenvalueRecord,
    LinearLevel,
    Unresolved,
    initial_function_scan,
    linear_spectrum,
    node_count,
    nonlinear_spectrum,
    numerov_neumann,
    verify_equivalence,
)
from .integrate import (
    EventKind,
    IntegratorConfig,
    SingularEvent,
    Termination,
    Trajectory,
    integrate_extended,
    integrate_riccati,
    singular_exponent_fit,
    write_trajectory,
)
from .problems import (
    Extended,
    Ince,
    Master,
    PotentialSpec,
    ProblemError,
    Riccati,
    equation_from_dict,
    equation_to_dict,
    ince_to_master,
    master_potential,
    master_to_riccati,
    mirror,
    riccati_to_schrodinger,
)
from .specialfn import exact_eigenfunction, exact_solution, gamma, gamma_ratio, hermite_ratio, riccati_initial_data
