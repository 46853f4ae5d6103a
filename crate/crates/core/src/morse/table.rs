use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::betti::BettiTable;
use super::series::SeriesPolynomial;
use super::MorseError;
use crate::exact::ExactReal;
use crate::iteration::GeodesicModel;

/// `M_q` for `0 <= q <= horizon`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MorseTable {
    values: Vec<u64>,
}

impl MorseTable {
    pub fn zero(horizon: u64) -> Self {
        MorseTable {
            values: vec![0; horizon as usize + 1],
        }
    }

    pub fn from_values(values: Vec<u64>) -> Self {
        assert!(!values.is_empty(), "a table covers at least degree 0");
        MorseTable { values }
    }

    pub fn horizon(&self) -> u64 {
        self.values.len() as u64 - 1
    }

    pub fn values(&self) -> &[u64] {
        &self.values
    }

    pub fn get(&self, q: u64) -> u64 {
        self.values[q as usize]
    }

    pub fn to_series(&self) -> SeriesPolynomial {
        SeriesPolynomial::new(self.values.iter().map(|&v| v as i64).collect())
    }

    fn merge(mut self, other: Self) -> Self {
        for (a, b) in self.values.iter_mut().zip(other.values) {
            *a += b;
        }
        self
    }
}

/// Last iterate that can reach degree `horizon`.
///
/// Since `i(c^m) >= m î - (n - 1)`, every `m > ceil((horizon + n - 1)/î)` has
/// `i(c^m) > horizon`; one extra iterate is kept as a margin.
pub fn iterate_cutoff(model: &GeodesicModel, horizon: u64) -> Result<u64, MorseError> {
    let mean = model.mean_index();
    if !mean.is_positive() {
        return Err(MorseError::NonTerminatingSum(mean));
    }
    let reach = ExactReal::from_integer(horizon + u64::from(model.n()) - 1);
    let bound = reach.checked_div(&mean).expect("mean index is nonzero").ceil();
    Ok(bound.to_u64().expect("cutoff fits in u64") + 1)
}

fn single_model_table(model: &GeodesicModel, horizon: u64, cutoff: u64) -> MorseTable {
    let mut table = MorseTable::zero(horizon);
    let i1 = model.first_index();
    for m in 1..=cutoff {
        let i = model.index_of_iterate(m).0;
        if (0..=horizon as i64).contains(&i) && (i - i1) % 2 == 0 {
            table.values[i as usize] += 1;
        }
    }
    table
}

fn common_dimension(models: &[GeodesicModel]) -> Result<(), MorseError> {
    if let Some(first) = models.first() {
        if let Some(other) = models.iter().find(|g| g.n() != first.n()) {
            return Err(MorseError::MixedDimensions(first.n(), other.n()));
        }
    }
    Ok(())
}

/// `M_q = sum over models and iterates of dim C_q(E, c^m)`, for `q <= horizon`.
pub fn morse_numbers(models: &[GeodesicModel], horizon: u64) -> Result<MorseTable, MorseError> {
    morse_numbers_scaled(models, horizon, 1)
}

/// Same as [`morse_numbers`] with every per-model iterate cutoff multiplied by
/// `scale`. Any `scale >= 1` gives the same table.
pub fn morse_numbers_scaled(
    models: &[GeodesicModel],
    horizon: u64,
    scale: u64,
) -> Result<MorseTable, MorseError> {
    common_dimension(models)?;
    let cutoffs = models
        .iter()
        .map(|g| iterate_cutoff(g, horizon).map(|c| c * scale.max(1)))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(models
        .par_iter()
        .zip(cutoffs)
        .map(|(g, cutoff)| single_model_table(g, horizon, cutoff))
        .reduce(|| MorseTable::zero(horizon), MorseTable::merge))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InequalityKind {
    /// `M_q - M_{q-1} + ... +- M_0 >= b_q - b_{q-1} + ... +- b_0`
    Alternating,
    /// `M_q >= b_q`
    Pointwise,
}

/// A failed inequality `lhs >= rhs` at degree `q`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub q: u64,
    pub kind: InequalityKind,
    pub lhs: i64,
    pub rhs: i64,
}

/// Every failure of the Morse inequalities for `q <= horizon`, ordered by `q`
/// and then kind.
pub fn check_morse_inequalities(
    morse: &MorseTable,
    betti: &BettiTable,
    horizon: u64,
) -> Result<Vec<Violation>, MorseError> {
    let covered = morse.horizon().min(betti.horizon());
    if horizon > covered {
        return Err(MorseError::TableTooShort { horizon, covered });
    }
    let mut out = Vec::new();
    let (mut alt_m, mut alt_b) = (0i64, 0i64);
    for q in 0..=horizon {
        let m = morse.get(q) as i64;
        let b = i64::from(betti.get(q));
        alt_m = m - alt_m;
        alt_b = b - alt_b;
        if alt_m < alt_b {
            out.push(Violation {
                q,
                kind: InequalityKind::Alternating,
                lhs: alt_m,
                rhs: alt_b,
            });
        }
        if m < b {
            out.push(Violation {
                q,
                kind: InequalityKind::Pointwise,
                lhs: m,
                rhs: b,
            });
        }
    }
    Ok(out)
}

/// Coefficients of `Q(t)` in `M(t) - P(t) = (1 + t) Q(t)`, through `horizon`.
///
/// `q_m = (-1)^m (M^m(-1) - P^m(-1))`, so all coefficients are nonnegative
/// exactly when the alternating inequalities hold.
pub fn q_series(morse: &MorseTable, betti: &BettiTable) -> SeriesPolynomial {
    let horizon = morse.horizon().min(betti.horizon()) as usize;
    let diff = SeriesPolynomial::new(
        (0..=horizon)
            .map(|q| morse.get(q as u64) as i64 - i64::from(betti.get(q as u64)))
            .collect(),
    );
    let one_plus_t = SeriesPolynomial::from_terms(horizon, &[(0, 1), (1, 1)]);
    diff.div(&one_plus_t).expect("constant term 1")
}

/// `lim P^m(-1)/m`: `-n/(2(n-1))` for even `n`, `(n+1)/(2(n-1))` for odd `n`.
pub fn euler_limit(n: u32) -> BigRational {
    assert!(n >= 2, "sphere dimension must be at least 2");
    let n = BigInt::from(n);
    let den = BigInt::from(2) * (&n - 1);
    if n.is_even() {
        BigRational::new(-n, den)
    } else {
        BigRational::new(n + 1, den)
    }
}

/// `C` with `|P^m(-1) - m euler(n)| <= C` for all `m >= 1`.
///
/// Past degree `n - 1` the Betti numbers repeat with period `2(n - 1)` (odd
/// `n`) or `4(n - 1)` (even `n`) and average to `euler(n)` over each period,
/// so the deviation is periodic and its maximum over the first two periods is
/// the global one.
pub fn euler_deviation_bound(n: u32) -> BigRational {
    let base = u64::from(n) - 1;
    let period = if n % 2 == 0 { 4 * base } else { 2 * base };
    let last = base + 2 * period;
    let e = euler_limit(n);
    let betti = BettiTable::new(n, last);
    let mut partial = 0i64;
    let mut worst = BigRational::from_integer(0.into());
    for m in 0..=last {
        let b = i64::from(betti.get(m));
        partial += if m % 2 == 0 { b } else { -b };
        if m == 0 {
            continue;
        }
        let dev = (BigRational::from_integer(partial.into()) - &e * BigInt::from(m)).abs();
        if dev > worst {
            worst = dev;
        }
    }
    worst
}
