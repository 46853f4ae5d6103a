//! The mean index identity
//!
//! ```text
//! sum_j  sum_{m=1}^{N_j} (-1)^{i(c_j^m)} k0(c_j^m) / (N_j î(c_j))  =  euler(n)
//! ```
//!
//! for a finite set of prime closed geodesics. `k0(c^1) = 1` always, so every
//! model is homologically visible and none is dropped from the sum.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

use super::table::euler_limit;
use super::MorseError;
use crate::exact::ExactReal;
use crate::iteration::GeodesicModel;

/// `W = sum_{m=1}^{N} (-1)^{i(c^m)} k0(c^m)` over one analytic period.
pub fn visible_weight(model: &GeodesicModel) -> i64 {
    (1..=u64::from(model.analytic_period()))
        .map(|m| {
            let i = model.index_of_iterate(m).0;
            let k0 = i64::from(model.critical_type(m).k0);
            if i.rem_euclid(2) == 0 {
                k0
            } else {
                -k0
            }
        })
        .sum()
}

/// Left side of the identity, exact in the common quadratic field.
pub fn mean_index_identity_lhs(models: &[GeodesicModel]) -> Result<ExactReal, MorseError> {
    let terms = models
        .par_iter()
        .map(|g| {
            let mean = g.mean_index();
            if !mean.is_positive() {
                return Err(MorseError::NonPositiveMeanIndex(mean));
            }
            let den = mean.scale_int(g.analytic_period());
            Ok(ExactReal::from_integer(visible_weight(g))
                .checked_div(&den)
                .expect("positive denominator"))
        })
        .collect::<Result<Vec<_>, _>>()?;
    terms.iter().try_fold(ExactReal::zero(), |acc, t| {
        acc.checked_add(t)
            .map_err(|_| MorseError::MixedFields(format!("{acc} and {t}")))
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IdentityReport {
    pub n: u32,
    pub lhs: ExactReal,
    pub rhs: ExactReal,
    pub holds: bool,
}

/// Evaluates both sides for models on one sphere.
pub fn check_identity(models: &[GeodesicModel]) -> Result<IdentityReport, MorseError> {
    let n = models.first().ok_or(MorseError::NoModels)?.n();
    if let Some(other) = models.iter().find(|g| g.n() != n) {
        return Err(MorseError::MixedDimensions(n, other.n()));
    }
    let lhs = mean_index_identity_lhs(models)?;
    let rhs = ExactReal::from_rational(&euler_limit(n));
    let holds = lhs == rhs;
    Ok(IdentityReport { n, lhs, rhs, holds })
}

/// Mean index forced by the identity for a single geodesic with weight `W`
/// and period `N`: `î = W / (N euler(n))`.
pub fn solve_for_mean_index(n: u32, weight: i64, period: u32) -> BigRational {
    assert!(period > 0, "analytic period is positive");
    let e = euler_limit(n);
    debug_assert!(!e.is_zero());
    BigRational::from_integer(BigInt::from(weight)) / (e * BigInt::from(period))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symplectic::{Block, NormalFormDecomposition};

    fn hyp_blocks(count: u32) -> Vec<Block> {
        (0..count)
            .map(|j| Block::hyp(BigRational::from_integer(BigInt::from(2 + j))).unwrap())
            .collect()
    }

    fn r(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    #[test]
    fn ncg1_counterexample_shape_satisfies_identity() {
        // S^4 with three rotations summing to 3/4, so î = 3/2 = 2(n-1)/n
        let a = ExactReal::new(5, 1, 20, 2).unwrap();
        let b = ExactReal::new(5, -2, 20, 2).unwrap();
        let blocks = vec![
            Block::rot(a.clone()).unwrap(),
            Block::rot(a).unwrap(),
            Block::rot(b).unwrap(),
        ];
        let g = GeodesicModel::new(4, 0, NormalFormDecomposition::new(blocks).unwrap()).unwrap();
        assert_eq!(g.mean_index(), ExactReal::from_rational(&r(3, 2)));
        let report = check_identity(&[g]).unwrap();
        assert_eq!(report.lhs, ExactReal::from_rational(&r(-2, 3)));
        assert!(report.holds);
    }

    #[test]
    fn ncg5_examples() {
        let even = GeodesicModel::new(4, 2, NormalFormDecomposition::new(hyp_blocks(3)).unwrap()).unwrap();
        let lhs = mean_index_identity_lhs(&[even]).unwrap();
        assert_eq!(lhs, ExactReal::from_rational(&r(1, 2)));
        assert!(lhs.is_positive());

        let odd = GeodesicModel::new(4, 3, NormalFormDecomposition::new(hyp_blocks(3)).unwrap()).unwrap();
        assert_eq!(odd.analytic_period(), 2);
        assert_eq!(visible_weight(&odd), -1);
        let lhs = mean_index_identity_lhs(std::slice::from_ref(&odd)).unwrap();
        assert_eq!(lhs, ExactReal::from_rational(&r(-1, 6)));
        // -1/î with the period factor: W/(N î) = -1/(2 * 3)
        assert_eq!(lhs, odd.mean_index().recip().unwrap().neg().scale(&r(1, 2)));
    }

    #[test]
    fn zero_mean_index_is_an_error() {
        let g = GeodesicModel::new(3, 0, NormalFormDecomposition::new(hyp_blocks(2)).unwrap()).unwrap();
        assert!(matches!(
            mean_index_identity_lhs(&[g]),
            Err(MorseError::NonPositiveMeanIndex(_))
        ));
        assert!(matches!(check_identity(&[]), Err(MorseError::NoModels)));
    }

    #[test]
    fn solving_for_single_ncg1() {
        assert_eq!(solve_for_mean_index(4, -1, 1), r(3, 2));
        assert_eq!(solve_for_mean_index(5, 1, 1), r(4, 3));
        assert_eq!(solve_for_mean_index(2, -1, 1), r(1, 1));
    }
}
