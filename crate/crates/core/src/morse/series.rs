use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;

use super::MorseError;

/// A formal power series known up to a fixed degree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SeriesPolynomial {
    coefficients: Vec<i64>,
}

impl SeriesPolynomial {
    /// Coefficients of `t^0 .. t^degree`.
    pub fn new(coefficients: Vec<i64>) -> Self {
        assert!(!coefficients.is_empty(), "a series has at least one coefficient");
        SeriesPolynomial { coefficients }
    }

    pub fn zero(degree: usize) -> Self {
        Self::new(vec![0; degree + 1])
    }

    /// `sum c_j t^{e_j}` truncated at `degree`.
    pub fn from_terms(degree: usize, terms: &[(usize, i64)]) -> Self {
        let mut s = Self::zero(degree);
        for &(e, c) in terms {
            if e <= degree {
                s.coefficients[e] += c;
            }
        }
        s
    }

    pub fn degree(&self) -> usize {
        self.coefficients.len() - 1
    }

    pub fn coefficients(&self) -> &[i64] {
        &self.coefficients
    }

    pub fn coefficient(&self, q: usize) -> i64 {
        self.coefficients.get(q).copied().unwrap_or(0)
    }

    /// The degree-`m` truncation.
    pub fn truncate(&self, m: usize) -> Result<Self, MorseError> {
        if m > self.degree() {
            return Err(MorseError::BeyondTruncation {
                requested: m as u64,
                available: self.degree() as u64,
            });
        }
        Ok(Self::new(self.coefficients[..=m].to_vec()))
    }

    pub fn add(&self, other: &Self) -> Self {
        let degree = self.degree().min(other.degree());
        Self::new(
            (0..=degree)
                .map(|q| self.coefficients[q] + other.coefficients[q])
                .collect(),
        )
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(-1))
    }

    pub fn scale(&self, k: i64) -> Self {
        Self::new(self.coefficients.iter().map(|c| c * k).collect())
    }

    /// Product, truncated at the smaller of the two degrees.
    pub fn mul(&self, other: &Self) -> Self {
        let degree = self.degree().min(other.degree());
        let mut out = vec![0i64; degree + 1];
        for (i, &a) in self.coefficients.iter().enumerate().take(degree + 1) {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coefficients.iter().enumerate().take(degree + 1 - i) {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    /// Quotient by a series with unit constant term.
    pub fn div(&self, den: &Self) -> Result<Self, MorseError> {
        let lead = den.coefficients[0];
        if lead != 1 && lead != -1 {
            return Err(MorseError::NonUnitDenominator(lead));
        }
        let degree = self.degree().min(den.degree());
        // denominators here are sparse, so only their nonzero terms are visited
        let terms: Vec<(usize, i64)> = den.coefficients[1..=degree]
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(j, &c)| (j + 1, c))
            .collect();
        let mut out = vec![0i64; degree + 1];
        for q in 0..=degree {
            let mut acc = self.coefficients[q];
            for &(j, c) in terms.iter().take_while(|(j, _)| *j <= q) {
                acc -= c * out[q - j];
            }
            out[q] = acc * lead;
        }
        Ok(Self::new(out))
    }

    /// Value at `t = -1` of the truncated polynomial.
    pub fn eval_at_minus_one(&self) -> i64 {
        self.coefficients
            .iter()
            .enumerate()
            .map(|(q, &c)| if q % 2 == 0 { c } else { -c })
            .sum()
    }
}

/// Poincaré series of the loop space pair, expanded from its rational
/// generating function
///
/// ```text
/// n even: t^{n-1} (1 - t^{2n})    / ((1 - t^2)(1 - t^{2n-2}))
/// n odd:  t^{n-1} (1 - t^{n+1})   / ((1 - t^2)(1 - t^{n-1}))
/// ```
///
/// by power-series division, independently of the closed form in [`super::betti`].
pub fn poincare_series_truncated(n: u32, degree: usize) -> SeriesPolynomial {
    assert!(n >= 2, "sphere dimension must be at least 2");
    let n = n as usize;
    let (num_gap, den_gap) = if n % 2 == 0 {
        (2 * n, 2 * n - 2)
    } else {
        (n + 1, n - 1)
    };
    let num = SeriesPolynomial::from_terms(degree, &[(n - 1, 1), (n - 1 + num_gap, -1)]);
    let den = SeriesPolynomial::from_terms(degree, &[(0, 1), (2, -1)])
        .mul(&SeriesPolynomial::from_terms(degree, &[(0, 1), (den_gap, -1)]));
    num.div(&den).expect("denominator has constant term 1")
}

/// `s^m(-1) / m` for the degree-`m` truncation `s^m`.
pub fn averaged_alternating_sum(s: &SeriesPolynomial, m: usize) -> Result<BigRational, MorseError> {
    if m == 0 {
        return Err(MorseError::ZeroAverage);
    }
    let value = s.truncate(m)?.eval_at_minus_one();
    Ok(BigRational::new(BigInt::from(value), BigInt::from(m)))
}
