//! Averages, discrepancy densities, complexity counts, recurrence checks and
//! their CSV schemas.

pub mod average;
pub mod checks;
pub mod complexity;
pub mod discrepancy;
pub mod poly;
pub mod recurrence;
pub mod report;
pub mod weight;

pub use average::{
    average_report, baseline_squarefree, max_square_average_n, mobius_average,
    weighted_square_average, AverageReport, ExactAverage, WeightedAverage,
};
pub use checks::{
    component_periodicity_check, decomposition_check, difference_floor_check, oracle_equivalence,
    stabilization_check, CheckReport,
};
pub use complexity::{
    entropy_bound_check, sampled_complexity, sequential_ratio_report, ComplexityReport, EntropyRow,
    SequentialRatioRow,
};
pub use discrepancy::{
    average_gap, discrepancy_ratio, periodic_weight_average, stage_distance, AverageGap,
    DiscrepancyReport, DistanceReport,
};
pub use poly::{poly_beta, PolySpec};
pub use recurrence::{toeplitz_recurrence_check, RecurrenceReport};
pub use weight::{ComplexWeight, GaussianWeight, WeightFunction};
