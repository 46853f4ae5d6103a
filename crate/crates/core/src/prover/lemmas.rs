use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::{Claim, FactKind, ProverError, SymbolicFact};
use crate::exact::format_rational;
use crate::morse::{
    check_morse_inequalities, BettiTable, InequalityKind, MorseTable, Violation,
};

/// Degrees `n - 1 + 2t` that come before the first Betti number equal to 2.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ThetaSet {
    pub n: u32,
    pub members: Vec<i64>,
}

impl ThetaSet {
    pub fn contains(&self, q: i64) -> bool {
        self.members.binary_search(&q).is_ok()
    }

    pub fn max(&self) -> i64 {
        *self.members.last().expect("never empty for n >= 2")
    }
}

/// Odd `j` in `[n-1, 3n-5]` for even `n`; even `j` in `[n-1, 2n-4]` for odd `n`.
pub fn theta_set(n: u32) -> ThetaSet {
    assert!(n >= 2, "sphere dimension must be at least 2");
    let n_ = i64::from(n);
    let top = if n % 2 == 0 { 3 * n_ - 5 } else { 2 * n_ - 4 };
    // for n = 2 the formula reads [1, 1]
    let top = top.max(n_ - 1);
    ThetaSet {
        n,
        members: (n_ - 1..=top).step_by(2).collect(),
    }
}

/// Possible values of `sum_i floor(m rho_i)` for `terms` irrational `rho_i` in
/// `(0,1)` with `sum_i m rho_i = total`.
///
/// Every fractional part lies strictly in `(0,1)`, so the floor sum lies
/// strictly between `total - terms` and `total`. That interval is sharper than
/// the `{0, ..., ceil(total) - 1}` a cruder bound gives.
pub fn floor_sum_range(m: u64, terms: u64, total: &BigRational) -> Result<Vec<i64>, ProverError> {
    let cap = BigRational::from_integer(BigInt::from(m) * BigInt::from(terms));
    if !total.is_positive() || *total >= cap {
        return Err(ProverError::InconsistentConstraint {
            m,
            terms,
            total: format_rational(total),
        });
    }
    let lower = total - BigRational::from_integer(BigInt::from(terms));
    let start: BigInt = (lower.floor().to_integer() + BigInt::from(1)).max(BigInt::zero());
    let end: BigInt = total.ceil().to_integer() - BigInt::from(1);
    let (start, end) = (
        start.to_i64().expect("small"),
        end.to_i64().expect("small"),
    );
    Ok((start..=end).collect())
}

/// `{0, ..., ceil(total) - 1}`: the range that only uses `sum floor < total`.
pub fn stated_floor_sum_set(total: &BigRational) -> Vec<i64> {
    let top = total.ceil().to_integer().to_i64().expect("small");
    (0..top).collect()
}

/// Which iterate parities are ruled out in odd resp. even degrees.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ParityConfig {
    /// `n` even, `i(c)` odd, `M_q = 0` for every even `q`.
    OddIndexEvenDimension,
    /// `n` odd, `i(c)` even, `M_q = 0` for every odd `q`.
    EvenIndexOddDimension,
}

impl ParityConfig {
    pub fn for_dimension(n: u32) -> Self {
        if n % 2 == 0 {
            ParityConfig::OddIndexEvenDimension
        } else {
            ParityConfig::EvenIndexOddDimension
        }
    }
}

fn violations_of(morse: &MorseTable, n: u32) -> Result<Vec<Violation>, ProverError> {
    let h = morse.horizon();
    Ok(check_morse_inequalities(morse, &BettiTable::new(n, h), h)?)
}

fn pick(
    violations: Vec<Violation>,
    q: u64,
    kind: InequalityKind,
) -> Result<Violation, ProverError> {
    violations
        .into_iter()
        .find(|v| v.q == q && v.kind == kind)
        .ok_or_else(|| {
            ProverError::PreconditionFailed(format!(
                "expected a {kind:?} Morse inequality failure at q = {q}"
            ))
        })
}

/// The table with nothing at or below `n - 1` fails `M_{n-1} >= b_{n-1}`.
fn empty_below_n_minus_one(n: u32) -> Result<(MorseTable, Violation), ProverError> {
    let q = u64::from(n) - 1;
    let morse = MorseTable::zero(q);
    let v = pick(violations_of(&morse, n)?, q, InequalityKind::Pointwise)?;
    Ok((morse, v))
}

/// `î(c) > 0` for the only prime closed geodesic: with `î(c) = 0` every
/// iterate has the index of `c` and nothing reaches degree `n - 1`.
pub fn positive_mean_index(n: u32) -> Result<SymbolicFact, ProverError> {
    let (morse, v) = empty_below_n_minus_one(n)?;
    Ok(SymbolicFact::new(
        "positive-mean-index",
        FactKind::IndexRange,
        format!(
            "î(c) > 0, since î(c) = 0 leaves M_{q} = {} < {} = b_{q}",
            v.lhs,
            v.rhs,
            q = v.q
        ),
    )
    .value("q", v.q)
    .check(Claim::MorseViolation {
        n,
        morse: morse.values().to_vec(),
        violation: v,
    }))
}

/// `i(c) <= n - 1`: otherwise `i(c^m) >= i(c) > n - 1` for all `m` and degree
/// `n - 1` is empty.
pub fn index_upper_bound(n: u32) -> Result<SymbolicFact, ProverError> {
    let (morse, v) = empty_below_n_minus_one(n)?;
    Ok(SymbolicFact::new(
        "index-upper-bound",
        FactKind::IndexRange,
        format!(
            "i(c) ≤ n−1 = {q}, since i(c^m) ≥ i(c) > n−1 leaves M_{q} = {} < {} = b_{q}",
            v.lhs,
            v.rhs,
            q = v.q
        ),
    )
    .value("q", v.q)
    .check(Claim::MorseViolation {
        n,
        morse: morse.values().to_vec(),
        violation: v,
    }))
}

/// `i(c) >= n - 1` when every visible iterate has index of the parity of
/// `n - 1`: an index `h <= n - 3` of that parity puts one class in degree `h`,
/// nothing in degree `h + 1`, and breaks the alternating inequality there.
///
/// `i(c) = 0` is among the candidates for odd `n`.
pub fn index_lower_bound(n: u32, config: ParityConfig) -> Result<SymbolicFact, ProverError> {
    if config != ParityConfig::for_dimension(n) {
        return Err(ProverError::ConfigMismatch { n, config });
    }
    let first = if n % 2 == 0 { 1 } else { 0 };
    let candidates: Vec<i64> = (first..=i64::from(n) - 3).step_by(2).collect();
    let mut claims = Vec::new();
    for &h in &candidates {
        let mut values = vec![0u64; h as usize + 2];
        values[h as usize] = 1;
        let morse = MorseTable::from_values(values);
        let v = pick(
            violations_of(&morse, n)?,
            h as u64 + 1,
            InequalityKind::Alternating,
        )?;
        claims.push(Claim::MorseViolation {
            n,
            morse: morse.values().to_vec(),
            violation: v,
        });
    }
    let statement = if candidates.is_empty() {
        "i(c) ≥ n−1: no index of the parity of n−1 lies at or below n−3".to_string()
    } else {
        "i(c) ≥ n−1: each candidate i(c) ≤ n−3 breaks the alternating inequality one degree higher (−1 ≥ 0)".to_string()
    };
    Ok(
        SymbolicFact::new("index-lower-bound", FactKind::IndexRange, statement)
            .value("candidates", &candidates)
            .checks(claims),
    )
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum UniquenessOutcome {
    /// Each degree `n - 1 + 2t`, `t <= k`, in the window is hit by one iterate.
    Unique(SymbolicFact),
    /// Degree `q` is hit by all of `iterates`; `violation` is the resulting
    /// Morse inequality failure at `q + 1`.
    Duplicate {
        q: i64,
        iterates: Vec<u64>,
        violation: Violation,
        fact: SymbolicFact,
    },
}

/// Checks that iterates fill the degrees `n - 1, n + 1, ..., n - 1 + 2k` of
/// the window one at a time, given `i(c) = n - 1` and
/// `(i(c^m) - i(c))/2 in {0, ..., m - 1}`.
///
/// The first repeated degree `kappa = n - 1 + 2t` gives the table with one
/// class at each lower window degree and two at `kappa`; the alternating
/// inequality at `kappa + 1` then reads `-(2 + t) >= -(1 + t)`.
pub fn check_iterate_uniqueness(
    n: u32,
    index_values: &BTreeMap<u64, i64>,
    k: u64,
) -> Result<UniquenessOutcome, ProverError> {
    let base = i64::from(n) - 1;
    match index_values.get(&1) {
        Some(&i1) if i1 == base => {}
        Some(&i1) => {
            return Err(ProverError::PreconditionFailed(format!(
                "i(c) = n−1 = {base}, got i(c) = {i1}"
            )))
        }
        None => return Err(ProverError::MissingIndex(base)),
    }
    for (&m, &i) in index_values {
        let d = i - base;
        if m == 0 || d < 0 || d % 2 != 0 || d / 2 > m as i64 - 1 {
            return Err(ProverError::PreconditionFailed(format!(
                "(i(c^m) − i(c))/2 ∈ {{0, …, m−1}} fails at m = {m} with i(c^m) = {i}"
            )));
        }
    }
    let theta = theta_set(n);
    let mut lower = Vec::new();
    for t in 0..=k as i64 {
        let q = base + 2 * t;
        if !theta.contains(q) {
            break;
        }
        let iterates: Vec<u64> = index_values
            .iter()
            .filter(|&(_, &i)| i == q)
            .map(|(&m, _)| m)
            .collect();
        match iterates.len() {
            0 => return Err(ProverError::MissingIndex(q)),
            1 => lower.push(q),
            count => {
                let mut values = vec![0u64; q as usize + 2];
                for &l in &lower {
                    values[l as usize] = 1;
                }
                values[q as usize] = count as u64;
                let morse = MorseTable::from_values(values);
                let violation = pick(
                    violations_of(&morse, n)?,
                    q as u64 + 1,
                    InequalityKind::Alternating,
                )?;
                let fact = SymbolicFact::new(
                    "uniqueness-of-iterates",
                    FactKind::Contradiction,
                    format!(
                        "iterates {iterates:?} share index {q}: {} ≥ {} fails at q = {}",
                        violation.lhs,
                        violation.rhs,
                        q + 1
                    ),
                )
                .value("kappa", q)
                .check(Claim::MorseViolation {
                    n,
                    morse: morse.values().to_vec(),
                    violation: violation.clone(),
                });
                return Ok(UniquenessOutcome::Duplicate {
                    q,
                    iterates,
                    violation,
                    fact,
                });
            }
        }
    }
    Ok(UniquenessOutcome::Unique(
        SymbolicFact::new(
            "uniqueness-of-iterates",
            FactKind::IndexEquals,
            format!("each of the degrees {lower:?} is the index of exactly one iterate"),
        )
        .value("degrees", &lower),
    ))
}
