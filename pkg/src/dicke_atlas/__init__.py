"""Ground-state atlas of the imbalanced Dicke model.

Closed-form mean-field solutions, Hessian stability analysis, a brute-force
variational oracle, phase sweeps, symmetry checks and finite-N exact
diagonalization.
"""

from .errors import (AtlasError, AxisError, ConvergenceError, DimensionError, DomainError,
                     EmptyBranch, PhaseMismatch, SweepVerificationError, UndefinedAtT,
                     UnsupportedU)
from .model import (MU_MAX, MeanFieldState, ModelParams, OrderParameters, PhaseLabel,
                    order_parameters, quadratures, zeta_pm)
from .landscape import (StabilityClass, StabilityReport, classify_stability,
                        equilibrium_residuals, hessian, hessian_eigenvalues, scaled_energy)
from .analytic import (SpBranch, coexistence_width, critical_couplings, np_stable,
                       sp_ground_energy, sp_solutions, sp_stable)
from .oracle import MinimizerSet, SearchSpec, global_minima, grid_search, refine
from .phases import AxisSpec, PhaseReport, SweepGrid, classify, sweep
from .exact import EdConfig, EdResult, build_hamiltonian, finite_size_scan, ground_state

__version__ = "0.1.0"
