//! Random geodesic models with quadratic-irrational rotation numbers.
#![allow(dead_code)]

use indexlab_core::iteration::NcgCase;
use indexlab_core::symplectic::{Block, Matrix2, NormalFormDecomposition};
use indexlab_core::{ExactReal, GeodesicModel};
use num_bigint::BigInt;
use num_rational::BigRational;
use rand::seq::SliceRandom;
use rand::Rng;

const RADICANDS: [i64; 8] = [2, 3, 5, 6, 7, 10, 11, 13];

/// `fract((a + b sqrt(D))/c)` for random small `a`, `b != 0`, `c`.
pub fn random_rho<R: Rng>(rng: &mut R, d: i64) -> ExactReal {
    let a = rng.gen_range(-20..=20);
    let b = *[-3, -2, -1, 1, 2, 3].choose(rng).unwrap();
    let c = rng.gen_range(1..=12);
    ExactReal::new(a, b, c, d).unwrap().fract()
}

fn random_hyp<R: Rng>(rng: &mut R) -> Block {
    let num = *[-7, -5, -3, -2, 2, 3, 5, 7].choose(rng).unwrap();
    let den = rng.gen_range(1..=3);
    let d = BigRational::new(BigInt::from(num), BigInt::from(den));
    Block::hyp(d).unwrap_or_else(|_| Block::hyp(BigRational::from_integer(3.into())).unwrap())
}

fn random_b<R: Rng>(rng: &mut R) -> Matrix2 {
    let choices = [
        [[1, 0], [0, 1]],
        [[0, 1], [-1, 0]],
        [[1, 1], [0, 1]],
        [[2, 0], [0, 1]],
    ];
    Matrix2::from_integers(*choices.choose(rng).unwrap())
}

/// Cases whose block shape fits on `S^n`.
pub fn feasible_cases(n: u32) -> Vec<NcgCase> {
    NcgCase::ALL
        .into_iter()
        .filter(|c| match c {
            NcgCase::Ncg1 | NcgCase::Ncg5 => n >= 2,
            NcgCase::Ncg4 => n >= 3,
            NcgCase::Ncg2 => n >= 4,
            NcgCase::Ncg3 => n >= 5,
        })
        .collect()
}

/// A random valid model of the given case on `S^n`, resampling until the
/// model passes validation.
pub fn random_model<R: Rng>(rng: &mut R, n: u32, case: NcgCase) -> GeodesicModel {
    for _ in 0..10_000 {
        if let Some(g) = try_model(rng, n, case) {
            return g;
        }
    }
    panic!("could not sample a {case} model on S^{n}");
}

/// Like [`random_model`] with `î(c) > 0`.
pub fn random_positive_model<R: Rng>(rng: &mut R, n: u32, case: NcgCase) -> GeodesicModel {
    loop {
        let g = random_model(rng, n, case);
        if g.mean_index().is_positive() {
            return g;
        }
    }
}

/// A model with a random feasible case on a random sphere `S^n`, `2 <= n <= max_n`.
pub fn random_any<R: Rng>(rng: &mut R, max_n: u32) -> GeodesicModel {
    let n = rng.gen_range(2..=max_n);
    let case = *feasible_cases(n).choose(rng).unwrap();
    random_model(rng, n, case)
}

fn try_model<R: Rng>(rng: &mut R, n: u32, case: NcgCase) -> Option<GeodesicModel> {
    let d = *RADICANDS.choose(rng).unwrap();
    let slots = n as i64 - 1; // number of two-dimensional slots
    let r = rng.gen_range(0..=slots / 2);
    let free = slots - 2 * r; // n - 2r - 1
    let (k, h) = match case {
        NcgCase::Ncg1 => (free, 0),
        NcgCase::Ncg2 => {
            let evens: Vec<i64> = (2..=free - 1).filter(|k| k % 2 == 0).collect();
            let k = *evens.choose(rng)?;
            (k, free - k)
        }
        NcgCase::Ncg3 => {
            let odds: Vec<i64> = (3..=free - 1).filter(|k| k % 2 == 1).collect();
            let k = *odds.choose(rng)?;
            (k, free - k)
        }
        NcgCase::Ncg4 => {
            if free < 2 {
                return None;
            }
            (1, free - 1)
        }
        NcgCase::Ncg5 => (0, free),
    };
    if case == NcgCase::Ncg1 && k == 0 {
        return None;
    }
    let mut blocks = Vec::new();
    for _ in 0..r {
        blocks.push(Block::n_block(random_rho(rng, d), random_b(rng)).ok()?);
    }
    for _ in 0..k {
        blocks.push(Block::rot(random_rho(rng, d)).ok()?);
    }
    for _ in 0..h {
        blocks.push(random_hyp(rng));
    }
    blocks.shuffle(rng);
    let dec = NormalFormDecomposition::new(blocks).ok()?;
    let p = match case {
        NcgCase::Ncg1 => rng.gen_range(-(free / 2)..=4),
        _ => rng.gen_range(0..=9),
    };
    GeodesicModel::with_case(n, p, case, dec).ok()
}
