"""Stochastic thermodynamics of a collisionally charged quantum battery.

Exact two-point-measurement statistics (energy, heat, work, fluctuating
efficiency) for repeated-interaction maps that admit an equilibrium state,
together with the averaged thermodynamics, the ergotropy cycle and a
brute-force composite-space oracle.
"""

__version__ = "0.1.0"

from .config import TOL, Tolerances
from .errors import (
    DegenerateSpectrumError,
    DimensionError,
    EquilibriumError,
    InfiniteRelativeEntropyError,
    ModelFileError,
    OracleSizeError,
    QBatteryError,
)
from .operators import (
    DensityMatrix,
    EigenSystem,
    HermitianOperator,
    UnitaryOperator,
    gibbs_state,
    herm_eig,
    partial_trace,
    relative_entropy,
    tensor,
    unitary_from_hamiltonian,
    von_neumann_entropy,
)
from .collision import (
    CollisionSpec,
    EquilibriumStructure,
    ThermoReport,
    apply_map,
    collision_step,
    equilibrium_thermo,
    iterate_map,
    validate_equilibrium,
)
from .cycle import (
    CycleReport,
    cycle_report,
    ergotropy_brute_force,
    ergotropy_closed_form,
    extraction_unitary,
    passive_state,
)
from .distribution import DiscreteDistribution
from .stats import (
    StochasticMatrix,
    TrajectoryTable,
    check_detailed_balance,
    efficiency_distribution,
    energy_work_heat_distributions,
    equilibrium_populations,
    extraction_statistics,
    heat_work_coefficients_2q,
    is_regular,
    passive_populations,
    stationary_table,
    trajectory_table,
    transition_matrix,
)
from .models import (
    Model,
    ModelParams1Q,
    ModelParams2Q,
    build_1q,
    build_2q,
    build_thermal_1q,
    efficiency_probs_closed_form,
    t1q_closed_form,
    t2q_closed_form,
    t_thermal_closed_form,
)
from .oracle import (
    CompositeTrajectory,
    enumerate_trajectories,
    oracle_distributions,
    verify_reduction,
)
