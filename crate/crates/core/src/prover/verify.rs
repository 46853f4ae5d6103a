//! Re-checks certificates without calling the code that produced them.
//!
//! Betti numbers come from the generating-function expansion rather than the
//! closed form, `euler(n)` is recomputed as the average of `(-1)^q b_q` over a
//! full period, floor-sum ranges are enumerated directly, and index parities
//! are evaluated on a representative parameter choice.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use thiserror::Error;

use super::{Certificate, Claim, CmpOp, FactKind, ProofTrace, Verdict};
use crate::exact::ExactReal;
use crate::iteration::NcgCase;
use crate::morse::{poincare_series_truncated, InequalityKind};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{trace}, step {step}: {reason}")]
pub struct VerificationError {
    pub trace: String,
    pub step: usize,
    pub reason: String,
}

fn betti_row(n: u32, horizon: usize) -> Vec<i64> {
    poincare_series_truncated(n, horizon).coefficients().to_vec()
}

fn euler_by_period(n: u32) -> BigRational {
    let base = n as usize - 1;
    let period = 2 * base;
    let start = 3 * base;
    let row = betti_row(n, start + period);
    let sum: i64 = (start..start + period)
        .map(|q| if q % 2 == 0 { row[q] } else { -row[q] })
        .sum();
    BigRational::new(BigInt::from(sum), BigInt::from(period))
}

fn check_compare(lhs: &ExactReal, op: CmpOp, rhs: &ExactReal) -> Result<(), String> {
    let ord = lhs.compare(rhs).map_err(|e| e.to_string())?;
    let ok = match op {
        CmpOp::Lt => ord == Ordering::Less,
        CmpOp::Le => ord != Ordering::Greater,
        CmpOp::Eq => ord == Ordering::Equal,
        CmpOp::Ge => ord != Ordering::Less,
        CmpOp::Gt => ord == Ordering::Greater,
    };
    if ok {
        Ok(())
    } else {
        Err(format!("{lhs} {op:?} {rhs} is false"))
    }
}

fn floor_sums(m: u64, terms: u64, total: &BigRational) -> Vec<i64> {
    // s is possible iff total - terms < s < total and s >= 0
    let t = BigRational::from_integer(BigInt::from(terms));
    let cap = (BigInt::from(m) * BigInt::from(terms)).to_i64().unwrap_or(i64::MAX);
    if *total <= BigRational::zero() || *total >= BigRational::from_integer(cap.into()) {
        return Vec::new();
    }
    (0..=cap)
        .filter(|&s| {
            let s = BigRational::from_integer(s.into());
            total - &t < s && s < *total
        })
        .collect()
}

/// Parity of `i(c^m)` for a concrete parameter choice in the case: `r = 0`,
/// the smallest admissible `k`, `p` of the given parity, floor sums zero
/// (they enter with a factor 2).
fn sample_parity(case: NcgCase, n: u32, p_odd: bool, m: i64) -> u8 {
    let p = if p_odd { 3 } else { 2 };
    let n = i64::from(n);
    let i = match case {
        NcgCase::Ncg1 => 2 * m * p + (n - 1),
        NcgCase::Ncg2 => m * (p - 2) + 2,
        NcgCase::Ncg3 => m * (p - 3) + 3,
        NcgCase::Ncg4 => m * (p - 1) + 1,
        NcgCase::Ncg5 => m * p,
    };
    i.rem_euclid(2) as u8
}

fn check_claim(claim: &Claim) -> Result<(), String> {
    match claim {
        Claim::Compare { lhs, op, rhs } => check_compare(lhs, *op, rhs),
        Claim::Rational { value } => value
            .is_rational()
            .then_some(())
            .ok_or_else(|| format!("{value} is irrational")),
        Claim::NotInteger { value } => (!value.is_integer())
            .then_some(())
            .ok_or_else(|| format!("{value} is an integer")),
        Claim::Parity { value, even } => ((value.rem_euclid(2) == 0) == *even)
            .then_some(())
            .ok_or_else(|| format!("{value} has the wrong parity")),
        Claim::Subset { sub, sup } => match sub.iter().find(|x| !sup.contains(x)) {
            None => Ok(()),
            Some(x) => Err(format!("{x} is not in {sup:?}")),
        },
        Claim::FloorSumRange {
            m,
            terms,
            total,
            values,
        } => {
            let direct = floor_sums(*m, *terms, total);
            if &direct == values {
                Ok(())
            } else {
                Err(format!("floor sums are {direct:?}, certificate says {values:?}"))
            }
        }
        Claim::MorseViolation {
            n,
            morse,
            violation,
        } => {
            let q = violation.q as usize;
            if q >= morse.len() {
                return Err(format!("degree {q} is outside the table"));
            }
            let b = betti_row(*n, q);
            let (lhs, rhs) = match violation.kind {
                InequalityKind::Pointwise => (morse[q] as i64, b[q]),
                InequalityKind::Alternating => (0..=q).fold((0i64, 0i64), |(l, r), j| {
                    let sign = if (q - j) % 2 == 0 { 1 } else { -1 };
                    (l + sign * morse[j] as i64, r + sign * b[j])
                }),
            };
            if (lhs, rhs) != (violation.lhs, violation.rhs) {
                Err(format!(
                    "recomputed sides ({lhs}, {rhs}) differ from ({}, {})",
                    violation.lhs, violation.rhs
                ))
            } else if lhs >= rhs {
                Err(format!("{lhs} ≥ {rhs} holds, nothing is violated"))
            } else {
                Ok(())
            }
        }
        Claim::MeanIndexSolve {
            n,
            weight,
            period,
            mean,
        } => {
            let lhs = mean * BigInt::from(*period) * euler_by_period(*n);
            if lhs == BigRational::from_integer(BigInt::from(*weight)) {
                Ok(())
            } else {
                Err(format!("{weight}/({period}·{mean}) is not the Euler value"))
            }
        }
        Claim::CriticalTypes {
            case,
            n,
            p_odd,
            parities,
            k0,
        } => {
            let period = parities.len() as i64;
            let direct: Vec<u8> = (1..=2 * period.max(1))
                .map(|m| sample_parity(*case, *n, *p_odd, m))
                .collect();
            if &direct[..parities.len()] != parities.as_slice() {
                return Err(format!("parities are {direct:?}"));
            }
            // the claimed period must be the minimal period of the k0 sequence
            let types: Vec<u8> = direct.iter().map(|&p| u8::from(p == direct[0])).collect();
            if &types[..k0.len()] != k0.as_slice() {
                return Err(format!("k0 sequence is {types:?}"));
            }
            let minimal = if types.iter().all(|&t| t == types[0]) { 1 } else { 2 };
            let periodic = (0..types.len()).all(|j| types[j] == types[j % period as usize]);
            if period == minimal && periodic {
                Ok(())
            } else {
                Err(format!("period {period} is not the minimal period of {types:?}"))
            }
        }
    }
}

/// Checks every claim of one trace and the shape of its verdict.
pub fn verify_trace(trace: &ProofTrace) -> Result<(), VerificationError> {
    let err = |step: usize, reason: String| VerificationError {
        trace: trace.label(),
        step,
        reason,
    };
    match &trace.verdict {
        Verdict::Open(why) => return Err(err(trace.steps.len(), format!("open: {why}"))),
        Verdict::Contradiction(_) => {
            let last = trace.steps.last().ok_or_else(|| err(0, "no steps".into()))?;
            if last.kind != FactKind::Contradiction {
                return Err(err(trace.steps.len() - 1, "last step is not a contradiction".into()));
            }
        }
        Verdict::Vacuous(_) => {
            let has_failed_shape = trace.steps.iter().any(|s| {
                s.kind == FactKind::ShapeConstraint && !s.checks.is_empty()
            });
            if !has_failed_shape {
                return Err(err(0, "vacuous verdict without a shape constraint".into()));
            }
        }
    }
    for (i, step) in trace.steps.iter().enumerate() {
        if step.rule.is_empty() {
            return Err(err(i, "missing rule".into()));
        }
        for claim in &step.checks {
            check_claim(claim).map_err(|reason| err(i, reason))?;
        }
    }
    Ok(())
}

pub fn verify_certificate(cert: &Certificate) -> Result<(), VerificationError> {
    for t in &cert.traces {
        if t.n != cert.n {
            return Err(VerificationError {
                trace: t.label(),
                step: 0,
                reason: format!("trace is for n = {}, certificate for n = {}", t.n, cert.n),
            });
        }
        verify_trace(t)?;
    }
    Ok(())
}
