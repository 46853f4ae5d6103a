//! Betti numbers of the loop space pair of `S^n`, Morse-type numbers of a
//! finite set of geodesic models, the Morse inequalities between them, and the
//! mean index identity.

mod betti;
mod identity;
mod series;
mod table;

use thiserror::Error;

use crate::exact::ExactReal;

pub use betti::{betti, first_double_degree, BettiTable};
pub use identity::{
    check_identity, mean_index_identity_lhs, solve_for_mean_index, visible_weight, IdentityReport,
};
pub use series::{averaged_alternating_sum, poincare_series_truncated, SeriesPolynomial};
pub use table::{
    check_morse_inequalities, euler_deviation_bound, euler_limit, iterate_cutoff, morse_numbers,
    morse_numbers_scaled, q_series, InequalityKind, MorseTable, Violation,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MorseError {
    #[error("mean index {0} is not positive, so the sum over iterates does not terminate")]
    NonTerminatingSum(ExactReal),
    #[error("mean index {0} is not positive")]
    NonPositiveMeanIndex(ExactReal),
    #[error("models live on different spheres: n = {0} and n = {1}")]
    MixedDimensions(u32, u32),
    #[error("mean indices lie in different quadratic fields: {0}")]
    MixedFields(String),
    #[error("no models given")]
    NoModels,
    #[error("degree {requested} is beyond the truncation degree {available}")]
    BeyondTruncation { requested: u64, available: u64 },
    #[error("averaging over zero terms")]
    ZeroAverage,
    #[error("series division needs constant term +-1, got {0}")]
    NonUnitDenominator(i64),
    #[error("tables cover degrees up to {covered}, horizon {horizon} requested")]
    TableTooShort { horizon: u64, covered: u64 },
}
