//! Monte Carlo risk estimation, margin and smoothness diagnostics, and
//! convergence-rate experiments.

mod curve;
mod knn_floor;
mod margin;
mod mc;
mod smoothness;

pub use curve::{
    experiment_dim, experiment_pair, fit_log_log, knn_compare, rate_fit, risk_curve, CompareMethod, CompareRow,
    CurveRow, ExperimentResult, RateFit,
};
pub use knn_floor::{knn_floor_check, FloorReport, FloorRow, KChoice};
pub use margin::{
    crown_delta, crown_lower_bound, crown_prob, margin_lower_bound, margin_prob, margin_upper_bound,
};
pub use mc::{bayes_risk_exact, mc_excess_risk, mc_risk, RiskEstimate, RiskKind};
pub use smoothness::{smoothness_constant, smoothness_probe, SmoothnessProbe};

pub(crate) use curve::{clamped, split_knn, static_d};
