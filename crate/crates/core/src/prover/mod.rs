//! Case-by-case replay of the argument that a bumpy Finsler `S^n` cannot carry
//! exactly one prime closed geodesic.
//!
//! Every NCG case and parity of `p` produces a [`ProofTrace`]: a list of
//! [`SymbolicFact`]s ending in a contradiction (or a note that the case shape
//! cannot occur on `S^n`). Each fact carries the numeric [`Claim`]s it relies
//! on, and [`verify_certificate`] re-checks all of them without going through
//! the code that produced them.
//!
//! Rotation numbers are never instantiated: "each `rho_i` is irrational and
//! `sum rho_i` is rational" is a fact about the case, not a number.

mod lemmas;
mod replay;
mod verify;

use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exact::{rational_serde, ExactReal};
use crate::iteration::NcgCase;
use crate::morse::{MorseError, Violation};

pub use lemmas::{
    check_iterate_uniqueness, floor_sum_range, index_lower_bound, index_upper_bound,
    positive_mean_index, stated_floor_sum_set, theta_set, ParityConfig, ThetaSet,
    UniquenessOutcome,
};
pub use replay::{certificate, replay, replay_case};
pub use verify::{verify_certificate, verify_trace, VerificationError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProverError {
    #[error("no integer sum of {terms} floors at m = {m} can have total {total}")]
    InconsistentConstraint { m: u64, terms: u64, total: String },
    #[error("parity configuration {config:?} does not fit n = {n}")]
    ConfigMismatch { n: u32, config: ParityConfig },
    #[error("hypothesis failed: {0}")]
    PreconditionFailed(String),
    #[error("no supplied iterate has index {0}")]
    MissingIndex(i64),
    #[error(transparent)]
    Morse(#[from] MorseError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FactKind {
    IndexEquals,
    IndexRange,
    MeanIndexEquals,
    MorseZeroParity,
    FloorSumRange,
    CriticalType,
    ShapeConstraint,
    Contradiction,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CmpOp {
    #[serde(rename = "<")]
    Lt,
    #[serde(rename = "<=")]
    Le,
    #[serde(rename = "=")]
    Eq,
    #[serde(rename = ">=")]
    Ge,
    #[serde(rename = ">")]
    Gt,
}

/// A numeric statement that an independent checker can re-evaluate.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "claim", rename_all = "snake_case")]
pub enum Claim {
    Compare {
        lhs: ExactReal,
        op: CmpOp,
        rhs: ExactReal,
    },
    Rational {
        value: ExactReal,
    },
    NotInteger {
        value: ExactReal,
    },
    Parity {
        value: i64,
        even: bool,
    },
    Subset {
        sub: Vec<i64>,
        sup: Vec<i64>,
    },
    /// `values` is the full set of possible `sum floor(m rho_i)` over `terms`
    /// irrational `rho_i` in `(0,1)` with `sum m rho_i = total`.
    FloorSumRange {
        m: u64,
        terms: u64,
        #[serde(with = "rational_serde")]
        total: BigRational,
        values: Vec<i64>,
    },
    /// The Morse table `morse` fails the inequality recorded in `violation`.
    MorseViolation {
        n: u32,
        morse: Vec<u64>,
        violation: Violation,
    },
    /// `weight / (period * mean) = euler(n)`.
    MeanIndexSolve {
        n: u32,
        weight: i64,
        period: u32,
        #[serde(with = "rational_serde")]
        mean: BigRational,
    },
    /// Parities of `i(c^m)` and the critical type numbers over one period.
    CriticalTypes {
        case: NcgCase,
        n: u32,
        p_odd: bool,
        parities: Vec<u8>,
        k0: Vec<u8>,
    },
}

/// One derived statement with its justification.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymbolicFact {
    pub rule: String,
    pub kind: FactKind,
    pub statement: String,
    #[serde(default)]
    pub values: BTreeMap<String, serde_json::Value>,
    #[serde(default)]
    pub checks: Vec<Claim>,
}

impl SymbolicFact {
    pub fn new(rule: &str, kind: FactKind, statement: impl Into<String>) -> Self {
        SymbolicFact {
            rule: rule.to_string(),
            kind,
            statement: statement.into(),
            values: BTreeMap::new(),
            checks: Vec::new(),
        }
    }

    pub fn value(mut self, key: &str, v: impl Serialize) -> Self {
        self.values.insert(
            key.to_string(),
            serde_json::to_value(v).expect("plain data serializes"),
        );
        self
    }

    pub fn check(mut self, claim: Claim) -> Self {
        self.checks.push(claim);
        self
    }

    pub fn checks(mut self, claims: impl IntoIterator<Item = Claim>) -> Self {
        self.checks.extend(claims);
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Subcase {
    #[serde(rename = "p even")]
    PEven,
    #[serde(rename = "p odd")]
    POdd,
}

impl Subcase {
    pub fn p_odd(self) -> bool {
        self == Subcase::POdd
    }
}

impl fmt::Display for Subcase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Subcase::PEven => "p even",
            Subcase::POdd => "p odd",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ContradictionKind {
    /// The mean index identity forces `î(c) <= 0`.
    NonPositiveMeanIndex,
    /// A rational value is forced on an irrational mean index.
    Irrationality,
    /// A non-integer or out-of-range value is forced on the integer `p`.
    Integrality,
    /// The number of rotation blocks leaves the range allowed by the case.
    ShapeConstraint,
    /// Two iterates share an index in the window before `b_q` first reaches 2.
    Uniqueness,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", content = "detail", rename_all = "snake_case")]
pub enum Verdict {
    Contradiction(ContradictionKind),
    Vacuous(String),
    /// The engine found no contradiction; never produced for `n >= 2`.
    Open(String),
}

impl Verdict {
    pub fn is_resolved(&self) -> bool {
        !matches!(self, Verdict::Open(_))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProofTrace {
    pub n: u32,
    pub case: NcgCase,
    pub subcase: Option<Subcase>,
    pub steps: Vec<SymbolicFact>,
    pub verdict: Verdict,
}

impl ProofTrace {
    pub fn label(&self) -> String {
        match self.subcase {
            Some(s) => format!("n = {}, {}, {}", self.n, self.case, s),
            None => format!("n = {}, {}", self.n, self.case),
        }
    }

    /// Statement of the final step.
    pub fn conclusion(&self) -> Option<&str> {
        self.steps.last().map(|s| s.statement.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub n: u32,
    pub traces: Vec<ProofTrace>,
}

impl Certificate {
    pub fn all_resolved(&self) -> bool {
        self.traces.iter().all(|t| t.verdict.is_resolved())
    }
}
