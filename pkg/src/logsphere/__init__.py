"""Logarithmic point energies on the sphere and in the plane.

Minimal-energy configurations on the unit sphere, the planar Coulomb gas
with the potential ``log(1 + |x|^2)`` that they correspond to under
stereographic projection, the closed-form renormalized energy of Bravais
lattices and the order-n constant of the minimal sphere energy.

Example::

    >>> from logsphere import paper_constants
    >>> round(paper_constants().c_bhs, 7)
    -0.0556053
"""

__version__ = "0.1.0"

from .asymptotics import ExpansionResidual, FitResult, expansion_report, fit_constant, residuals
from .energy import (
    SplittingReport,
    grad_log_energy_sphere,
    hamiltonian_w,
    hamiltonian_wbar,
    log_energy,
    log_energy_sphere,
    mobius_energy_identity_check,
    splitting_report,
)
from .errors import (
    CoincidentPoints,
    DegenerateBasis,
    DomainError,
    InsufficientData,
    LogsphereError,
    NoProgress,
    NorthPoleNotRepresentable,
    PoleOfMap,
    PoleOfPotential,
    UnsupportedPotential,
)
from .geometry import MobiusMap, chordal_distance, inverse_stereographic, mobius_apply, stereographic
from .lattice import (
    BravaisLattice,
    LatticeShape,
    PaperConstants,
    chowla_selberg_check,
    dedekind_eta,
    gamma_fn,
    minimality_scan,
    paper_constants,
    reduce_lattice,
    triangular_lattice,
    w_lattice,
)
from .optimizer import (
    MinimizeOptions,
    MinimizeResult,
    energy_table,
    minimize_log_energy,
    separation_check,
)
from .potential import (
    EquilibriumData,
    PotentialHandle,
    alpha_v,
    canonical_equilibrium,
    canonical_potential,
    transform_potential,
    u_mu,
    zeta,
)
