//! Basic normal forms of completely non-degenerate symplectic matrices.
//!
//! Matrices are never materialized: a [`NormalFormDecomposition`] is the ordered
//! list of its diamond-sum factors, and every quantity downstream is read off
//! the blocks. Rotation numbers are stored as `rho = theta / 2pi` in `(0, 1)`.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exact::{rational_serde, ExactReal};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SymplecticError {
    #[error("rotation number {0} is rational; completely non-degenerate blocks need an irrational one")]
    RationalRotation(ExactReal),
    #[error("rotation number {0} is outside (0, 1)")]
    RotationOutOfRange(ExactReal),
    #[error("hyperbolic parameter {0} must avoid 0, 1 and -1")]
    DegenerateHyperbolic(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
struct RationalCell(#[serde(with = "rational_serde")] BigRational);

/// A rational 2x2 matrix, row major.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(from = "[[RationalCell; 2]; 2]", into = "[[RationalCell; 2]; 2]")]
pub struct Matrix2(pub [[BigRational; 2]; 2]);

impl Matrix2 {
    pub fn identity() -> Self {
        let one = BigRational::one;
        let zero = BigRational::zero;
        Matrix2([[one(), zero()], [zero(), one()]])
    }

    pub fn from_integers(m: [[i64; 2]; 2]) -> Self {
        let r = |x: i64| BigRational::from_integer(BigInt::from(x));
        Matrix2([[r(m[0][0]), r(m[0][1])], [r(m[1][0]), r(m[1][1])]])
    }
}

impl From<[[RationalCell; 2]; 2]> for Matrix2 {
    fn from(m: [[RationalCell; 2]; 2]) -> Self {
        let [[a, b], [c, d]] = m;
        Matrix2([[a.0, b.0], [c.0, d.0]])
    }
}

impl From<Matrix2> for [[RationalCell; 2]; 2] {
    fn from(m: Matrix2) -> Self {
        let [[a, b], [c, d]] = m.0;
        [
            [RationalCell(a), RationalCell(b)],
            [RationalCell(c), RationalCell(d)],
        ]
    }
}

/// One diamond-sum factor.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "type")]
pub enum Block {
    /// `R(theta)` with `rho = theta / 2pi`.
    #[serde(rename = "rot")]
    Rot { rho: ExactReal },
    /// `N(alpha, B)`, four dimensional.
    #[serde(rename = "n")]
    NBlock {
        rho: ExactReal,
        #[serde(rename = "B")]
        b: Matrix2,
    },
    /// `H(d) = diag(d, 1/d)`.
    #[serde(rename = "hyp")]
    Hyp {
        #[serde(with = "rational_serde")]
        d: BigRational,
    },
}

fn check_rotation(rho: &ExactReal) -> Result<(), SymplecticError> {
    if rho.is_rational() {
        return Err(SymplecticError::RationalRotation(rho.clone()));
    }
    let inside = rho.signum() == Ordering::Greater
        && rho.compare(&ExactReal::one()).ok() == Some(Ordering::Less);
    if !inside {
        return Err(SymplecticError::RotationOutOfRange(rho.clone()));
    }
    Ok(())
}

impl Block {
    pub fn rot(rho: ExactReal) -> Result<Self, SymplecticError> {
        check_rotation(&rho)?;
        Ok(Block::Rot { rho })
    }

    pub fn n_block(rho: ExactReal, b: Matrix2) -> Result<Self, SymplecticError> {
        check_rotation(&rho)?;
        Ok(Block::NBlock { rho, b })
    }

    pub fn hyp(d: BigRational) -> Result<Self, SymplecticError> {
        if d.is_zero() || d.abs().is_one() {
            return Err(SymplecticError::DegenerateHyperbolic(
                crate::exact::format_rational(&d),
            ));
        }
        Ok(Block::Hyp { d })
    }

    pub fn validate(&self) -> Result<(), SymplecticError> {
        match self {
            Block::Rot { rho } | Block::NBlock { rho, .. } => check_rotation(rho),
            Block::Hyp { d } => Block::hyp(d.clone()).map(|_| ()),
        }
    }

    /// Symplectic dimension: 2 for rotations and hyperbolic blocks, 4 for N-blocks.
    pub fn dimension(&self) -> usize {
        match self {
            Block::Rot { .. } | Block::Hyp { .. } => 2,
            Block::NBlock { .. } => 4,
        }
    }

    pub fn rotation_number(&self) -> Option<&ExactReal> {
        match self {
            Block::Rot { rho } | Block::NBlock { rho, .. } => Some(rho),
            Block::Hyp { .. } => None,
        }
    }
}

/// An ordered diamond sum of validated blocks.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(try_from = "RawDecomposition")]
pub struct NormalFormDecomposition {
    blocks: Vec<Block>,
}

#[derive(Deserialize)]
struct RawDecomposition {
    blocks: Vec<Block>,
}

impl TryFrom<RawDecomposition> for NormalFormDecomposition {
    type Error = SymplecticError;

    fn try_from(raw: RawDecomposition) -> Result<Self, Self::Error> {
        Self::new(raw.blocks)
    }
}

impl NormalFormDecomposition {
    pub fn new(blocks: Vec<Block>) -> Result<Self, SymplecticError> {
        for b in &blocks {
            b.validate()?;
        }
        Ok(NormalFormDecomposition { blocks })
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn total_dim(&self) -> usize {
        self.blocks.iter().map(Block::dimension).sum()
    }

    pub fn rotations(&self) -> impl Iterator<Item = &ExactReal> {
        self.blocks.iter().filter_map(|b| match b {
            Block::Rot { rho } => Some(rho),
            _ => None,
        })
    }

    pub fn rotation_count(&self) -> usize {
        self.rotations().count()
    }

    pub fn hyperbolic_count(&self) -> usize {
        self.blocks
            .iter()
            .filter(|b| matches!(b, Block::Hyp { .. }))
            .count()
    }

    pub fn n_block_count(&self) -> usize {
        self.blocks
            .iter()
            .filter(|b| matches!(b, Block::NBlock { .. }))
            .count()
    }

    /// `self ⋄ other`: blocks concatenated, dimensions added.
    pub fn diamond_sum(&self, other: &Self) -> Self {
        let mut blocks = self.blocks.clone();
        blocks.extend(other.blocks.iter().cloned());
        NormalFormDecomposition { blocks }
    }

    pub fn omega_signature(&self) -> OmegaSignature {
        let mut sig = OmegaSignature::default();
        for block in &self.blocks {
            // R(θ) and N(α, B) both meet the unit circle at e^{±iθ}, each with
            // geometric multiplicity one; H(d) stays off the circle.
            if let Some(rho) = block.rotation_number() {
                let conjugate = ExactReal::one()
                    .checked_sub(rho)
                    .expect("integers live in every field");
                sig.add(rho.clone(), 1);
                sig.add(conjugate, 1);
            }
        }
        sig
    }

    /// Equal unit-circle spectra with equal geometric multiplicities.
    pub fn same_omega_component_data(&self, other: &Self) -> bool {
        self.omega_signature() == other.omega_signature()
    }
}

/// Unit-circle spectrum `{e^{2 pi i rho}}` with geometric multiplicities.
///
/// Entries are sorted by radicand and then numerically, so two signatures are
/// equal exactly when their spectra and multiplicities agree.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize)]
pub struct OmegaSignature {
    entries: Vec<(ExactReal, u32)>,
}

fn spectral_order(x: &ExactReal, y: &ExactReal) -> Ordering {
    x.radicand()
        .cmp(y.radicand())
        .then_with(|| x.compare(y).expect("same radicand"))
}

impl OmegaSignature {
    fn add(&mut self, rho: ExactReal, mult: u32) {
        match self
            .entries
            .binary_search_by(|(probe, _)| spectral_order(probe, &rho))
        {
            Ok(pos) => self.entries[pos].1 += mult,
            Err(pos) => self.entries.insert(pos, (rho, mult)),
        }
    }

    /// Multiplicity-wise union.
    pub fn merge(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (rho, mult) in &other.entries {
            out.add(rho.clone(), *mult);
        }
        out
    }

    pub fn gamma(&self) -> impl Iterator<Item = &ExactReal> {
        self.entries.iter().map(|(rho, _)| rho)
    }

    pub fn multiplicity(&self, rho: &ExactReal) -> u32 {
        self.entries
            .iter()
            .find(|(probe, _)| probe == rho)
            .map_or(0, |(_, m)| *m)
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }
}
