use serde::Serialize;

/// Rank of the relative rational homology of the quotient free loop space pair
/// of `S^n` in degree `q`.
///
/// Nonzero only in degrees `n - 1 + 2j`. The value is 2 on the exceptional
/// set `K`: odd multiples `k(n-1)` with `k >= 3` when `n` is even, and all
/// multiples `k(n-1)` with `k >= 2` when `n` is odd.
pub fn betti(n: u32, q: i64) -> u32 {
    assert!(n >= 2, "sphere dimension must be at least 2");
    let base = i64::from(n) - 1;
    if q < base || (q - base) % 2 != 0 {
        return 0;
    }
    let in_k = q % base == 0 && {
        let k = q / base;
        if n % 2 == 0 {
            k >= 3 && k % 2 == 1
        } else {
            k >= 2
        }
    };
    if in_k {
        2
    } else {
        1
    }
}

/// `b_q` for `0 <= q <= horizon`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BettiTable {
    n: u32,
    values: Vec<u32>,
}

impl BettiTable {
    pub fn new(n: u32, horizon: u64) -> Self {
        BettiTable {
            n,
            values: (0..=horizon as i64).map(|q| betti(n, q)).collect(),
        }
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn horizon(&self) -> u64 {
        self.values.len() as u64 - 1
    }

    pub fn values(&self) -> &[u32] {
        &self.values
    }

    pub fn get(&self, q: u64) -> u32 {
        self.values[q as usize]
    }
}

/// Smallest degree where `b_q = 2`.
pub fn first_double_degree(n: u32) -> u64 {
    let base = u64::from(n) - 1;
    if n % 2 == 0 {
        3 * base
    } else {
        2 * base
    }
}
