//! Cross-checks the unit-circle multiplicities recorded per block against
//! kernels of explicit matrices over the Gaussian rationals.

mod common;

use indexlab_core::symplectic::{Block, Matrix2, NormalFormDecomposition};
use indexlab_core::ExactReal;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[derive(Clone, Debug, PartialEq)]
struct Gq {
    re: BigRational,
    im: BigRational,
}

impl Gq {
    fn real(x: BigRational) -> Self {
        Gq { re: x, im: BigRational::zero() }
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
    fn sub(&self, o: &Gq) -> Gq {
        Gq { re: &self.re - &o.re, im: &self.im - &o.im }
    }
    fn mul(&self, o: &Gq) -> Gq {
        Gq {
            re: &self.re * &o.re - &self.im * &o.im,
            im: &self.re * &o.im + &self.im * &o.re,
        }
    }
    fn inv(&self) -> Gq {
        let n = &self.re * &self.re + &self.im * &self.im;
        Gq { re: &self.re / &n, im: -&self.im / &n }
    }
}

fn q(a: i64, b: i64) -> BigRational {
    BigRational::new(BigInt::from(a), BigInt::from(b))
}

fn rank(mut rows: Vec<Vec<Gq>>) -> usize {
    let cols = rows[0].len();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].inv();
        for j in 0..cols {
            rows[r][j] = rows[r][j].mul(&inv);
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let f = rows[i][c].clone();
                for j in 0..cols {
                    let t = rows[r][j].mul(&f);
                    rows[i][j] = rows[i][j].sub(&t);
                }
            }
        }
        r += 1;
    }
    r
}

/// `dim ker(M - omega I)`.
fn kernel_dim(m: &[Vec<BigRational>], omega: &Gq) -> usize {
    let rows: Vec<Vec<Gq>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            row.iter()
                .enumerate()
                .map(|(j, x)| {
                    let e = Gq::real(x.clone());
                    if i == j {
                        e.sub(omega)
                    } else {
                        e
                    }
                })
                .collect()
        })
        .collect();
    m.len() - rank(rows)
}

// cos = 3/5, sin = 4/5: theta/pi is irrational
fn rotation() -> [[BigRational; 2]; 2] {
    [[q(3, 5), q(-4, 5)], [q(4, 5), q(3, 5)]]
}

fn block_diag(blocks: &[Vec<Vec<BigRational>>]) -> Vec<Vec<BigRational>> {
    let size: usize = blocks.iter().map(Vec::len).sum();
    let mut out = vec![vec![BigRational::zero(); size]; size];
    let mut at = 0;
    for b in blocks {
        for (i, row) in b.iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                out[at + i][at + j] = x.clone();
            }
        }
        at += b.len();
    }
    out
}

fn rot_matrix() -> Vec<Vec<BigRational>> {
    rotation().iter().map(|r| r.to_vec()).collect()
}

/// `[[R, B], [0, R]]`
fn n_matrix(b: [[i64; 2]; 2]) -> Vec<Vec<BigRational>> {
    let r = rotation();
    let mut m = vec![vec![BigRational::zero(); 4]; 4];
    for i in 0..2 {
        for j in 0..2 {
            m[i][j] = r[i][j].clone();
            m[i + 2][j + 2] = r[i][j].clone();
            m[i][j + 2] = BigRational::from_integer(b[i][j].into());
        }
    }
    m
}

fn omega() -> Gq {
    Gq { re: q(3, 5), im: q(4, 5) }
}

fn rho() -> ExactReal {
    ExactReal::new(-1, 1, 1, 2).unwrap()
}

#[test]
fn two_rotations_double_the_eigenvalue() {
    let m = block_diag(&[rot_matrix(), rot_matrix()]);
    assert_eq!(kernel_dim(&m, &omega()), 2);
    let dec = NormalFormDecomposition::new(vec![
        Block::rot(rho()).unwrap(),
        Block::rot(rho()).unwrap(),
    ])
    .unwrap();
    assert_eq!(dec.omega_signature().multiplicity(&rho()), 2);
}

#[test]
fn twisted_block_has_a_single_eigenvector() {
    assert_eq!(kernel_dim(&n_matrix([[1, 0], [0, 1]]), &omega()), 1);
    let dec = NormalFormDecomposition::new(vec![Block::n_block(rho(), Matrix2::identity()).unwrap()])
        .unwrap();
    assert_eq!(dec.omega_signature().multiplicity(&rho()), 1);
    // with B = 0 the block would split into two rotations
    assert_eq!(kernel_dim(&n_matrix([[0, 0], [0, 0]]), &omega()), 2);
}

#[test]
fn hyperbolic_blocks_stay_off_the_circle() {
    let h = vec![
        vec![q(2, 1), BigRational::zero()],
        vec![BigRational::zero(), q(1, 2)],
    ];
    let m = block_diag(&[rot_matrix(), h]);
    assert_eq!(kernel_dim(&m, &omega()), 1);
    assert_eq!(kernel_dim(&m, &Gq::real(BigRational::one())), 0);
}

proptest! {
    #[test]
    fn signature_is_additive_under_the_diamond_sum(s1 in any::<u64>(), s2 in any::<u64>()) {
        let mut r = ChaCha8Rng::seed_from_u64(s1 ^ s2.rotate_left(17));
        let a = common::random_model(&mut r, 5, indexlab_core::NcgCase::Ncg1);
        let b = common::random_model(&mut r, 4, indexlab_core::NcgCase::Ncg5);
        let (da, db) = (a.decomposition(), b.decomposition());
        let sum = da.diamond_sum(db);
        let merged = da.omega_signature().merge(&db.omega_signature());
        prop_assert_eq!(sum.omega_signature(), merged);
        prop_assert_eq!(sum.total_dim(), da.total_dim() + db.total_dim());
        prop_assert!(sum.same_omega_component_data(&db.diamond_sum(da)));
    }
}
