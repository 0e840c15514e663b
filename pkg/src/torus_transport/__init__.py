"""Exact 1-D transport on the circle, Fourier-side bounds and equidistribution experiments."""

from .bounds import (
    BoundReport,
    bound_report,
    erdos_turan_functional,
    h_minus_one_circle,
    h_minus_one_interval,
    h_minus_one_of_measure,
    leveque_functional,
    littlewood_lhs,
    peyre_w2_bound,
    thm1_functional,
    thm2_lower_functional,
)
from .discrepancy import PointSet, extreme_discrepancy, lp_discrepancy, star_discrepancy, w1_vs_discrepancy_gap
from .errors import (
    AliasingError,
    BoundViolationError,
    MassMismatchError,
    NonConvergenceError,
    SignedMeasureError,
    SizeCapError,
    TorusTransportError,
    ValidationError,
)
from .experiments import ExperimentConfig, SlopeFit, fit_loglog, run_experiment
from .heat import (
    HeatParams,
    SplitPair,
    count_sign_changes,
    critical_point_sides,
    eigen_split_cost,
    heat_evolve,
    heat_plan_cost,
    high_freq_two_step_cost,
    sign_split,
    smoothing_decomposition,
    uncertainty_sides,
)
from .measures import (
    AtomicMeasure,
    Cdf,
    FourierSeries,
    TorusDensity,
    cdf,
    circle_distance,
    fourier_of_atoms,
    fourier_of_density,
    quantile_atoms,
    synthesize_grid,
)
from .sequences import (
    KroneckerSpec,
    PrimeResidueSpec,
    badly_approximable_floor,
    gauss_magnitude_check,
    kronecker_measure,
    nearest_int_distance,
    quadratic_residue_measure,
)
from .transport import (
    DiscretePlan,
    TransportCost,
    discrete_ot_oracle,
    mass_scaled_wp,
    w1_circle,
    w1_interval,
    wp_circle,
    wp_interval,
)

__version__ = "0.1.0"
