//! Index iteration for completely non-degenerate closed geodesics on `S^n`.
//!
//! A [`GeodesicModel`] is the block data of the end point of the normal-form
//! path together with the integer parameter `p` of its homotopy class. The five
//! NCG shapes each come with a closed formula for `i(c^m)`; the nullity of
//! every iterate is zero.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exact::ExactReal;
use crate::symplectic::{NormalFormDecomposition, SymplecticError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum NcgCase {
    #[serde(rename = "NCG1")]
    Ncg1,
    #[serde(rename = "NCG2")]
    Ncg2,
    #[serde(rename = "NCG3")]
    Ncg3,
    #[serde(rename = "NCG4")]
    Ncg4,
    #[serde(rename = "NCG5")]
    Ncg5,
}

impl NcgCase {
    pub const ALL: [NcgCase; 5] = [
        NcgCase::Ncg1,
        NcgCase::Ncg2,
        NcgCase::Ncg3,
        NcgCase::Ncg4,
        NcgCase::Ncg5,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            NcgCase::Ncg1 => "NCG1",
            NcgCase::Ncg2 => "NCG2",
            NcgCase::Ncg3 => "NCG3",
            NcgCase::Ncg4 => "NCG4",
            NcgCase::Ncg5 => "NCG5",
        }
    }
}

impl fmt::Display for NcgCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for NcgCase {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let norm: String = s
            .chars()
            .filter(|c| c.is_ascii_alphanumeric())
            .collect::<String>()
            .to_ascii_uppercase();
        NcgCase::ALL
            .into_iter()
            .find(|c| c.as_str() == norm)
            .ok_or_else(|| ModelError::UnknownCase(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("sphere dimension must be at least 2, got {0}")]
    SphereDimension(u32),
    #[error("decomposition has dimension {actual}, expected 2(n-1) = {expected} for n = {n}")]
    DimensionMismatch { n: u32, expected: usize, actual: usize },
    #[error("declared case {declared} but the blocks classify as {classified}")]
    CaseMismatch {
        declared: NcgCase,
        classified: NcgCase,
    },
    #[error("unknown case {0:?}")]
    UnknownCase(String),
    #[error("NCG1 needs i(c) = 2p + (n-2r-1) >= 0, got {0}")]
    NegativeIndex(i64),
    #[error("{0} needs p >= 0, got {1}")]
    NegativeParameter(NcgCase, i64),
    #[error("a decomposition made only of N-blocks has even index i(c) = p, got p = {0}")]
    OddPureN(i64),
    #[error("mean index {0} is negative")]
    NegativeMeanIndex(ExactReal),
    #[error("rotation numbers must share one quadratic field: {0}")]
    MixedFields(String),
    #[error(transparent)]
    Symplectic(#[from] SymplecticError),
}

/// Determines the NCG shape from the non-N blocks.
///
/// With no hyperbolic blocks the model is NCG1, including the `k = 1` shape on
/// `S^2` where the NCG1 and NCG4 formulas coincide. A decomposition made only
/// of N-blocks is NCG5.
pub fn classify(n: u32, dec: &NormalFormDecomposition) -> Result<NcgCase, ModelError> {
    if n < 2 {
        return Err(ModelError::SphereDimension(n));
    }
    let expected = 2 * (n as usize - 1);
    if dec.total_dim() != expected {
        return Err(ModelError::DimensionMismatch {
            n,
            expected,
            actual: dec.total_dim(),
        });
    }
    let k = dec.rotation_count();
    let h = dec.hyperbolic_count();
    Ok(match (k, h) {
        (0, 0) => NcgCase::Ncg5,
        (_, 0) => NcgCase::Ncg1,
        (0, _) => NcgCase::Ncg5,
        (1, _) => NcgCase::Ncg4,
        (k, _) if k % 2 == 0 => NcgCase::Ncg2,
        _ => NcgCase::Ncg3,
    })
}

/// `(epsilon, k0)` of an iterate: `epsilon = (-1)^{i(c^m) - i(c)}` and the
/// critical type number `k0^epsilon`, which is 1 exactly when `epsilon = +1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct CriticalType {
    pub epsilon: i8,
    pub k0: u8,
}

/// One hypothetical prime closed geodesic.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "ModelSpec", into = "ModelSpec")]
pub struct GeodesicModel {
    n: u32,
    p: i64,
    case: NcgCase,
    dec: NormalFormDecomposition,
    r: usize,
    k: usize,
    rotations: Vec<ExactReal>,
}

/// Wire form `{"n":…, "p":…, "case":"NCG1", "dec":{…}}`; `case` is optional on input.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelSpec {
    pub n: u32,
    pub p: i64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub case: Option<NcgCase>,
    pub dec: NormalFormDecomposition,
}

impl TryFrom<ModelSpec> for GeodesicModel {
    type Error = ModelError;

    fn try_from(raw: ModelSpec) -> Result<Self, Self::Error> {
        match raw.case {
            Some(case) => GeodesicModel::with_case(raw.n, raw.p, case, raw.dec),
            None => GeodesicModel::new(raw.n, raw.p, raw.dec),
        }
    }
}

impl From<GeodesicModel> for ModelSpec {
    fn from(g: GeodesicModel) -> Self {
        ModelSpec {
            n: g.n,
            p: g.p,
            case: Some(g.case),
            dec: g.dec,
        }
    }
}

impl GeodesicModel {
    /// Classifies `dec` and checks the case invariants.
    pub fn new(n: u32, p: i64, dec: NormalFormDecomposition) -> Result<Self, ModelError> {
        let case = classify(n, &dec)?;
        let rotations: Vec<ExactReal> = dec.rotations().cloned().collect();
        if let Some(first) = dec.blocks().iter().find_map(|b| b.rotation_number()) {
            if let Some(other) = dec
                .blocks()
                .iter()
                .filter_map(|b| b.rotation_number())
                .find(|rho| !rho.same_field(first))
            {
                return Err(ModelError::MixedFields(format!("{first} and {other}")));
            }
        }
        let model = GeodesicModel {
            n,
            p,
            case,
            r: dec.n_block_count(),
            k: rotations.len(),
            dec,
            rotations,
        };
        model.check_invariants()?;
        Ok(model)
    }

    /// Like [`GeodesicModel::new`] but insists the blocks classify as `case`.
    pub fn with_case(
        n: u32,
        p: i64,
        case: NcgCase,
        dec: NormalFormDecomposition,
    ) -> Result<Self, ModelError> {
        let model = Self::new(n, p, dec)?;
        if model.case != case {
            return Err(ModelError::CaseMismatch {
                declared: case,
                classified: model.case,
            });
        }
        Ok(model)
    }

    fn check_invariants(&self) -> Result<(), ModelError> {
        match self.case {
            NcgCase::Ncg1 => {
                let i1 = self.first_index();
                if i1 < 0 {
                    return Err(ModelError::NegativeIndex(i1));
                }
            }
            case => {
                if self.p < 0 {
                    return Err(ModelError::NegativeParameter(case, self.p));
                }
                if self.k == 0 && self.dec.hyperbolic_count() == 0 && self.p % 2 != 0 {
                    return Err(ModelError::OddPureN(self.p));
                }
            }
        }
        let mean = self.mean_index();
        if mean.signum() == std::cmp::Ordering::Less {
            return Err(ModelError::NegativeMeanIndex(mean));
        }
        Ok(())
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn p(&self) -> i64 {
        self.p
    }

    pub fn case(&self) -> NcgCase {
        self.case
    }

    pub fn decomposition(&self) -> &NormalFormDecomposition {
        &self.dec
    }

    /// Number of N-blocks.
    pub fn r(&self) -> usize {
        self.r
    }

    /// Number of rotation blocks.
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn rotations(&self) -> &[ExactReal] {
        &self.rotations
    }

    fn floor_sum(&self, m: u64) -> i64 {
        self.rotations
            .iter()
            .map(|rho| rho.floor_scaled(m))
            .sum::<BigInt>()
            .to_i64()
            .expect("floor sum fits in i64")
    }

    /// `i(c)`.
    pub fn first_index(&self) -> i64 {
        self.index_of_iterate(1).0
    }

    /// `(i(c^m), nu(c^m))`. The nullity is always zero.
    pub fn index_of_iterate(&self, m: u64) -> (i64, i64) {
        assert!(m >= 1, "iterates are numbered from 1");
        let mi = m as i64;
        let k = self.k as i64;
        let i = match self.case {
            NcgCase::Ncg1 => {
                let rot_dim = self.n as i64 - 2 * self.r as i64 - 1;
                2 * mi * self.p + 2 * self.floor_sum(m) + rot_dim
            }
            NcgCase::Ncg2 | NcgCase::Ncg3 | NcgCase::Ncg4 => {
                mi * (self.p - k) + 2 * self.floor_sum(m) + k
            }
            NcgCase::Ncg5 => mi * self.p,
        };
        (i, 0)
    }

    /// `î(c) = lim i(c^m)/m`, exact.
    pub fn mean_index(&self) -> ExactReal {
        let rho_sum = self
            .rotations
            .iter()
            .try_fold(ExactReal::zero(), |acc, rho| acc.checked_add(rho))
            .expect("rotation numbers share a field");
        let twice = rho_sum.scale_int(2);
        let base = match self.case {
            NcgCase::Ncg1 => 2 * self.p,
            NcgCase::Ncg2 | NcgCase::Ncg3 | NcgCase::Ncg4 => self.p - self.k as i64,
            NcgCase::Ncg5 => self.p,
        };
        ExactReal::from_integer(base)
            .checked_add(&twice)
            .expect("integers live in every field")
    }

    /// Minimal period of the critical type sequence.
    pub fn analytic_period(&self) -> u32 {
        analytic_period_of(self.case, self.p.rem_euclid(2) == 1)
    }

    pub fn critical_type(&self, m: u64) -> CriticalType {
        critical_type_from(self.index_of_iterate(m).0, self.first_index())
    }

    /// `dim C_q(E, c^m)`: 1 iff `q = i(c^m)` and `i(c^m) - i(c)` is even.
    pub fn critical_module_dim(&self, m: u64, q: i64) -> u8 {
        critical_module_dim_from(self.index_of_iterate(m).0, self.first_index(), q)
    }

    pub fn profile(&self, horizon: u64) -> IndexProfile {
        IndexProfile::new(self.clone(), horizon)
    }
}

fn critical_type_from(im: i64, i1: i64) -> CriticalType {
    if (im - i1).rem_euclid(2) == 0 {
        CriticalType { epsilon: 1, k0: 1 }
    } else {
        CriticalType { epsilon: -1, k0: 0 }
    }
}

fn critical_module_dim_from(im: i64, i1: i64, q: i64) -> u8 {
    u8::from(q == im && (im - i1).rem_euclid(2) == 0)
}

/// Minimal period of the critical type sequence, which only depends on the
/// case and the parity of `p`.
pub fn analytic_period_of(case: NcgCase, p_odd: bool) -> u32 {
    match (case, p_odd) {
        (NcgCase::Ncg1, _) => 1,
        (NcgCase::Ncg2 | NcgCase::Ncg5, false) | (NcgCase::Ncg3 | NcgCase::Ncg4, true) => 1,
        _ => 2,
    }
}

/// Parity (0 or 1) of `i(c^m)` from the case shape alone.
///
/// The floor sums enter with a factor 2, so only `m(p - k) + k` (or `mp`, or
/// `n - 2r - 1`) matters, and the parity of `k` is fixed by the case.
pub fn iterate_index_parity(case: NcgCase, n: u32, p_odd: bool, m: u64) -> u8 {
    let p = u64::from(p_odd);
    let par = match case {
        NcgCase::Ncg1 => u64::from(n) - 1,
        NcgCase::Ncg2 | NcgCase::Ncg5 => m * p,
        NcgCase::Ncg3 | NcgCase::Ncg4 => m * (p + 1) + 1,
    };
    (par % 2) as u8
}

/// Iterated indices of one model, cached for `m <= horizon`.
#[derive(Debug, Clone)]
pub struct IndexProfile {
    model: GeodesicModel,
    indices: Vec<i64>,
    mean: ExactReal,
    period: u32,
    i1: i64,
}

impl IndexProfile {
    pub fn new(model: GeodesicModel, horizon: u64) -> Self {
        let indices = (1..=horizon.max(1))
            .map(|m| model.index_of_iterate(m).0)
            .collect::<Vec<_>>();
        IndexProfile {
            mean: model.mean_index(),
            period: model.analytic_period(),
            i1: indices[0],
            indices,
            model,
        }
    }

    pub fn model(&self) -> &GeodesicModel {
        &self.model
    }

    pub fn horizon(&self) -> u64 {
        self.indices.len() as u64
    }

    /// `i(c^m)`, from the cache when `m` is within the horizon.
    pub fn index(&self, m: u64) -> i64 {
        match self.indices.get((m as usize).wrapping_sub(1)) {
            Some(&i) => i,
            None => self.model.index_of_iterate(m).0,
        }
    }

    pub fn nullity(&self, _m: u64) -> i64 {
        0
    }

    pub fn mean(&self) -> &ExactReal {
        &self.mean
    }

    pub fn period(&self) -> u32 {
        self.period
    }

    pub fn i1(&self) -> i64 {
        self.i1
    }

    pub fn critical_type(&self, m: u64) -> CriticalType {
        critical_type_from(self.index(m), self.i1)
    }

    pub fn critical_module_dim(&self, m: u64, q: i64) -> u8 {
        critical_module_dim_from(self.index(m), self.i1, q)
    }
}

/// `|i(c^m) - m î(c)|`, exact.
pub fn index_deviation(model: &GeodesicModel, m: u64) -> ExactReal {
    let i = ExactReal::from_integer(model.index_of_iterate(m).0);
    let dev = i
        .checked_sub(&model.mean_index().scale_int(m))
        .expect("same field");
    if dev.signum() == std::cmp::Ordering::Less {
        dev.neg()
    } else {
        dev
    }
}
