//! Numerical laboratory for the totally asymmetric zero-range process
//! on a discrete torus: exact enumeration of the configuration space,
//! the non-reversible generator and its capacities, trace-process mean
//! rates between the metastable wells, limiting constants of the
//! condensate walk, and event-driven simulation on the condensate time
//! scale.

pub mod configspace;
pub mod error;
pub mod generator;
pub mod metastability;
pub mod potential;
pub mod simulate;
pub mod solver;

#[cfg(test)]
mod oracle;

pub use configspace::{
    cardinality, enumerate, enumerate_with_cap, occupation_weight, partition_wells, summary,
    torus_add, well_mass_report, z_limit, Configuration, SpaceSummary, StateSpace,
    WellMassReport, WellPartition, DEFAULT_ENUMERATION_CAP,
};
pub use error::{Error, Result};
pub use generator::{
    build, cycle_entries, cycle_form, dirichlet_form, jump_rate, max_balance_defect,
    max_row_sum_defect, Kind, RateOperator,
};
pub use metastability::{
    discrete_i_alpha, gamma_alpha, i_alpha, limit_capacity_prediction, limit_constants,
    limit_walk, separation_report, symmetric_benchmark, test_function_bound, trace_mean_rates,
    walk_capacity, LimitConstants, LimitWalk, SeparationReport, TestFunctionReport,
    TraceRateTable,
};
pub use potential::{
    capacity, equilibrium_potentials, hitting_potential, mean_rate_functional,
    monotonicity_check, sup_functional, CapacityReport, CapacityResiduals, ConstraintSet,
    Operators, PotentialSolution, SetValue,
};
pub use simulate::{
    goodness_of_fit, m1_check, run, stationarity_check, trace_statistics, ChiSquareReport,
    Initial, M1Report, SimConfig, Simulator, SplitMix64, TraceStatistics, Trajectory,
    WellVisit,
};
pub use solver::{solve, solve_bicgstab, solve_dense, SparseMatrix};
