use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;
use rayon::prelude::*;

use super::lemmas::{
    check_iterate_uniqueness, floor_sum_range, index_lower_bound, index_upper_bound,
    positive_mean_index, stated_floor_sum_set, theta_set, ParityConfig, UniquenessOutcome,
};
use super::{
    Certificate, Claim, CmpOp, ContradictionKind, FactKind, ProofTrace, ProverError, Subcase,
    SymbolicFact, Verdict,
};
use crate::exact::{format_rational, ExactReal};
use crate::iteration::{analytic_period_of, iterate_index_parity, NcgCase};
use crate::morse::{euler_limit, solve_for_mean_index};

fn rat(a: i64, b: i64) -> BigRational {
    BigRational::new(BigInt::from(a), BigInt::from(b))
}

fn int(a: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(a))
}

fn ex(r: &BigRational) -> ExactReal {
    ExactReal::from_rational(r)
}

fn cmp(lhs: &BigRational, op: CmpOp, rhs: &BigRational) -> Claim {
    Claim::Compare {
        lhs: ex(lhs),
        op,
        rhs: ex(rhs),
    }
}

/// Smallest sphere dimension on which the case shape fits.
fn minimal_dimension(case: NcgCase) -> u32 {
    match case {
        NcgCase::Ncg1 | NcgCase::Ncg5 => 2,
        NcgCase::Ncg4 => 3,
        NcgCase::Ncg2 => 4,
        NcgCase::Ncg3 => 5,
    }
}

fn shape_text(case: NcgCase) -> &'static str {
    match case {
        NcgCase::Ncg1 => "N(α,B)^{⋄r} ⋄ R(θ_1) ⋄ ⋯ ⋄ R(θ_{n−2r−1}), i(c) = 2p+n−2r−1",
        NcgCase::Ncg2 => {
            "N(α,B)^{⋄r} ⋄ R(θ_1) ⋄ ⋯ ⋄ R(θ_k) ⋄ H(d_{k+1}) ⋄ ⋯ ⋄ H(d_{n−2r−1}) with k even, 2 ≤ k ≤ n−2r−2, i(c) = p"
        }
        NcgCase::Ncg3 => {
            "N(α,B)^{⋄r} ⋄ R(θ_1) ⋄ ⋯ ⋄ R(θ_k) ⋄ H(d_{k+1}) ⋄ ⋯ ⋄ H(d_{n−2r−1}) with k odd, 3 ≤ k ≤ n−2r−2, i(c) = p"
        }
        NcgCase::Ncg4 => "N(α,B)^{⋄r} ⋄ R(θ_1) ⋄ H(d_2) ⋄ ⋯ ⋄ H(d_{n−2r−1}), i(c) = p",
        NcgCase::Ncg5 => "N(α,B)^{⋄r} ⋄ H(d_1) ⋄ ⋯ ⋄ H(d_{n−2r−1}), i(c) = p",
    }
}

fn shape_fact(n: u32, case: NcgCase) -> SymbolicFact {
    let min = minimal_dimension(case);
    SymbolicFact::new(
        "case-shape",
        FactKind::ShapeConstraint,
        format!("{case}: P_c = {}", shape_text(case)),
    )
    .value("min_n", min)
    .check(cmp(&int(n.into()), CmpOp::Ge, &int(min.into())))
}

fn vacuous_trace(n: u32, case: NcgCase) -> ProofTrace {
    let min = minimal_dimension(case);
    let reason = match case {
        NcgCase::Ncg2 => format!("k ≤ n−2r−2 with k even, k ≥ 2 needs n ≥ {min}"),
        NcgCase::Ncg3 => format!("k ≤ n−2r−2 with k odd, k ≥ 3 needs n ≥ {min}"),
        NcgCase::Ncg4 => format!("one rotation and at least one H-block need n ≥ {min}"),
        _ => format!("{case} needs n ≥ {min}"),
    };
    let fact = SymbolicFact::new(
        "case-shape",
        FactKind::ShapeConstraint,
        format!("{case} cannot occur on S^{n}: {reason}"),
    )
    .value("min_n", min)
    .check(cmp(&int(n.into()), CmpOp::Lt, &int(min.into())));
    ProofTrace {
        n,
        case,
        subcase: None,
        steps: vec![fact],
        verdict: Verdict::Vacuous(reason),
    }
}

/// Parities of `i(c^m)` and `k0(c^m)` for `m = 1..=N`, with the identity weight.
struct PeriodData {
    period: u32,
    parities: Vec<u8>,
    k0: Vec<u8>,
    weight: i64,
}

fn period_data(n: u32, case: NcgCase, p_odd: bool) -> PeriodData {
    let period = analytic_period_of(case, p_odd);
    let parities: Vec<u8> = (1..=u64::from(period))
        .map(|m| iterate_index_parity(case, n, p_odd, m))
        .collect();
    let k0: Vec<u8> = parities
        .iter()
        .map(|&par| u8::from(par == parities[0]))
        .collect();
    let weight = parities
        .iter()
        .zip(&k0)
        .map(|(&par, &k)| if par == 0 { i64::from(k) } else { -i64::from(k) })
        .sum();
    PeriodData {
        period,
        parities,
        k0,
        weight,
    }
}

fn critical_type_fact(n: u32, case: NcgCase, p_odd: bool, d: &PeriodData) -> SymbolicFact {
    let statement = if d.period == 1 {
        format!(
            "N = 1: every i(c^m) is {}, so ε = +1 and k0 = 1 for all m",
            if d.parities[0] == 0 { "even" } else { "odd" }
        )
    } else {
        format!(
            "N = 2: i(c) is {}, i(c^2) is {}, so k0(c^2) = {}",
            if d.parities[0] == 0 { "even" } else { "odd" },
            if d.parities[1] == 0 { "even" } else { "odd" },
            d.k0[1]
        )
    };
    SymbolicFact::new("analytic-period", FactKind::CriticalType, statement)
        .value("N", d.period)
        .value("k0", &d.k0)
        .check(Claim::CriticalTypes {
            case,
            n,
            p_odd,
            parities: d.parities.clone(),
            k0: d.k0.clone(),
        })
}

fn identity_fact(n: u32, d: &PeriodData, mean: &BigRational) -> SymbolicFact {
    let e = euler_limit(n);
    SymbolicFact::new(
        "mean-index-identity",
        FactKind::MeanIndexEquals,
        format!(
            "{}/({}·î(c)) = {}, so î(c) = {}",
            d.weight,
            d.period,
            format_rational(&e),
            format_rational(mean)
        ),
    )
    .value("W", d.weight)
    .value("N", d.period)
    .value("euler", format_rational(&e))
    .value("mean_index", format_rational(mean))
    .check(Claim::MeanIndexSolve {
        n,
        weight: d.weight,
        period: d.period,
        mean: mean.clone(),
    })
}

fn zero_parity_fact(n: u32, d: &PeriodData) -> SymbolicFact {
    let target = ((n - 1) % 2) as u8;
    let visible: Vec<u8> = d
        .parities
        .iter()
        .zip(&d.k0)
        .filter(|(_, &k)| k == 1)
        .map(|(&p, _)| p)
        .collect();
    let parity = if target == 0 { "odd" } else { "even" };
    SymbolicFact::new(
        "morse-zero-parity",
        FactKind::MorseZeroParity,
        format!("M_q = 0 for every {parity} q: all iterates with k0 = 1 have index ≡ n−1 (mod 2)"),
    )
    .checks(visible.into_iter().map(|p| Claim::Parity {
        value: i64::from(p) + i64::from(target),
        even: true,
    }))
}

struct Builder {
    n: u32,
    case: NcgCase,
    subcase: Option<Subcase>,
    steps: Vec<SymbolicFact>,
}

impl Builder {
    fn push(&mut self, f: SymbolicFact) {
        self.steps.push(f);
    }

    fn finish(self, verdict: Verdict) -> ProofTrace {
        ProofTrace {
            n: self.n,
            case: self.case,
            subcase: self.subcase,
            steps: self.steps,
            verdict,
        }
    }

    fn contradiction(mut self, kind: ContradictionKind, rule: &str, statement: String, claims: Vec<Claim>) -> ProofTrace {
        self.push(SymbolicFact::new(rule, FactKind::Contradiction, statement).checks(claims));
        self.finish(Verdict::Contradiction(kind))
    }
}

fn subcase_trace(n: u32, case: NcgCase, sub: Subcase) -> Result<ProofTrace, ProverError> {
    let p_odd = sub.p_odd();
    let mut b = Builder {
        n,
        case,
        subcase: Some(sub),
        steps: vec![shape_fact(n, case)],
    };
    let d = period_data(n, case, p_odd);
    let mean = solve_for_mean_index(n, d.weight, d.period);
    b.push(critical_type_fact(n, case, p_odd, &d));
    b.push(identity_fact(n, &d, &mean));

    if !mean.is_positive() {
        b.push(positive_mean_index(n)?);
        return Ok(b.contradiction(
            ContradictionKind::NonPositiveMeanIndex,
            "positive-mean-index",
            format!("î(c) = {} ≤ 0 contradicts î(c) > 0", format_rational(&mean)),
            vec![cmp(&mean, CmpOp::Le, &int(0))],
        ));
    }

    match case {
        NcgCase::Ncg4 => Ok(b.contradiction(
            ContradictionKind::Irrationality,
            "irrationality",
            format!(
                "î(c) = (p−1) + 2ρ_1 is irrational, yet equals the rational {}",
                format_rational(&mean)
            ),
            vec![Claim::Rational { value: ex(&mean) }],
        )),
        NcgCase::Ncg5 if !p_odd => {
            // î(c) = p here
            let half = &mean / int(2);
            let ratio = rat(i64::from(n) - 1, i64::from(n) + 1);
            b.push(
                SymbolicFact::new(
                    "integrality",
                    FactKind::IndexRange,
                    format!(
                        "p is even and p = î(c) = {} > 0, so p ≥ 2 and p/2 ≥ 1",
                        format_rational(&mean)
                    ),
                )
                .check(cmp(&mean, CmpOp::Gt, &int(0))),
            );
            if half != ratio || half >= int(1) {
                return Ok(b.finish(Verdict::Open(format!(
                    "p/2 = {} does not match (n−1)/(n+1)",
                    format_rational(&half)
                ))));
            }
            Ok(b.contradiction(
                ContradictionKind::Integrality,
                "integrality",
                "1 > (n−1)/(n+1) = p/2 ≥ 1".to_string(),
                vec![
                    cmp(&half, CmpOp::Eq, &ratio),
                    cmp(&int(1), CmpOp::Gt, &ratio),
                ],
            ))
        }
        NcgCase::Ncg5 => {
            if mean.is_integer() {
                return Ok(b.finish(Verdict::Open("p = î(c) is an integer".into())));
            }
            Ok(b.contradiction(
                ContradictionKind::Integrality,
                "integrality",
                format!(
                    "p = î(c) = {} is not an integer",
                    format_rational(&mean)
                ),
                vec![Claim::NotInteger { value: ex(&mean) }],
            ))
        }
        NcgCase::Ncg2 | NcgCase::Ncg3 => rotation_bound(b, n, case, p_odd, &d, &mean),
        NcgCase::Ncg1 => unreachable!("NCG1 has its own trace"),
    }
}

/// NCG2/NCG3 with positive mean index: pin `i(c) = p = n - 1`, then compare
/// `î(c) = p - k + 2 sum rho_i` with the value the identity forces.
fn rotation_bound(
    mut b: Builder,
    n: u32,
    case: NcgCase,
    p_odd: bool,
    d: &PeriodData,
    mean: &BigRational,
) -> Result<ProofTrace, ProverError> {
    let target = ((n - 1) % 2) as u8;
    if d.parities[0] != target {
        return Ok(b.finish(Verdict::Open("i(c) has the wrong parity for n".into())));
    }
    b.push(zero_parity_fact(n, d));
    b.push(index_upper_bound(n)?);
    b.push(index_lower_bound(n, ParityConfig::for_dimension(n))?);
    b.push(SymbolicFact::new(
        "index-pinned",
        FactKind::IndexEquals,
        "i(c) = p = n−1",
    ));
    let k_odd = case == NcgCase::Ncg3;
    let p_minus_k_odd = p_odd != k_odd;
    if *mean < int(1) {
        b.push(
            SymbolicFact::new(
                "mean-index-bound",
                FactKind::IndexRange,
                format!(
                    "î(c) = p−k+2Σρ_i = {} < 1 with Σρ_i > 0, so n−1−k = p−k < 1",
                    format_rational(mean)
                ),
            )
            .check(cmp(mean, CmpOp::Lt, &int(1))),
        );
        Ok(b.contradiction(
            ContradictionKind::ShapeConstraint,
            "shape-bound",
            "n−2 < k contradicts k ≤ n−2r−2".to_string(),
            vec![],
        ))
    } else if *mean < int(2) && !p_minus_k_odd {
        b.push(
            SymbolicFact::new(
                "mean-index-bound",
                FactKind::IndexRange,
                format!(
                    "p−k is even and p−k < î(c) = {} < 2, so p ≤ k",
                    format_rational(mean)
                ),
            )
            .check(cmp(mean, CmpOp::Lt, &int(2)))
            .check(Claim::Parity {
                value: i64::from(p_odd) + i64::from(k_odd),
                even: true,
            }),
        );
        Ok(b.contradiction(
            ContradictionKind::ShapeConstraint,
            "shape-bound",
            "n−1 = p ≤ k contradicts k ≤ n−2r−2".to_string(),
            vec![],
        ))
    } else {
        Ok(b.finish(Verdict::Open(format!(
            "î(c) = {} leaves room for k",
            format_rational(mean)
        ))))
    }
}

fn expect_duplicate(outcome: UniquenessOutcome) -> Result<Vec<Claim>, ProverError> {
    match outcome {
        UniquenessOutcome::Duplicate { fact, .. } => Ok(fact.checks),
        UniquenessOutcome::Unique(_) => Err(ProverError::PreconditionFailed(
            "expected two iterates with the same index".into(),
        )),
    }
}

/// NCG1: the identity pins `î(c)`, the index bounds pin `i(c) = n - 1` and
/// `p = r = 0`, the first iterates fill the window one degree at a time, and
/// the next iterate has nowhere left to go.
fn ncg1_trace(n: u32) -> Result<ProofTrace, ProverError> {
    let case = NcgCase::Ncg1;
    let mut b = Builder {
        n,
        case,
        subcase: None,
        steps: vec![shape_fact(n, case)],
    };
    let base = i64::from(n) - 1;
    let terms = u64::from(n) - 1;
    let even = n % 2 == 0;
    let d = period_data(n, case, false);
    let mean = solve_for_mean_index(n, d.weight, d.period);
    b.push(critical_type_fact(n, case, false, &d));
    b.push(identity_fact(n, &d, &mean));
    b.push(zero_parity_fact(n, &d));
    b.push(index_upper_bound(n)?);
    b.push(index_lower_bound(n, ParityConfig::for_dimension(n))?);
    b.push(SymbolicFact::new(
        "index-pinned",
        FactKind::IndexEquals,
        "i(c) = 2p+n−2r−1 = n−1, so p = r",
    ));

    let expected = if even {
        rat(2 * base, i64::from(n))
    } else {
        rat(2 * base, i64::from(n) + 1)
    };
    b.push(
        SymbolicFact::new(
            "mean-index-pin-down",
            FactKind::MeanIndexEquals,
            format!(
                "î(c) = 2p+2Σρ_i = {} < 2 rules out p = r ≥ 1, so p = r = 0 and î(c) = 2Σ_{{i=1}}^{{n−1}} ρ_i = {}",
                format_rational(&mean),
                if even { "2(n−1)/n" } else { "2(n−1)/(n+1)" }
            ),
        )
        .value("mean_index", format_rational(&mean))
        .check(cmp(&mean, CmpOp::Eq, &expected))
        .check(cmp(&mean, CmpOp::Lt, &int(2))),
    );
    let half = &mean / int(2);
    if n == 2 {
        b.push(
            SymbolicFact::new(
                "irrationality",
                FactKind::MeanIndexEquals,
                format!(
                    "n = 2: the single rotation number would be ρ_1 = î(c)/2 = {}, which is rational",
                    format_rational(&half)
                ),
            )
            .check(Claim::Rational { value: ex(&half) }),
        );
    }

    // m1: last iterate fixed by the induction; m_star: the pigeonhole iterate
    let (m1, m_star) = if even {
        (u64::from(n) - 1, u64::from(n))
    } else {
        ((u64::from(n) - 1) / 2, (u64::from(n) + 1) / 2)
    };

    let mut range_claims = Vec::new();
    for m in 1..=m_star {
        let total = &half * int(m as i64);
        let values = floor_sum_range(m, terms, &total)?;
        range_claims.push(Claim::Subset {
            sub: values.clone(),
            sup: (0..m as i64).collect(),
        });
        range_claims.push(Claim::FloorSumRange {
            m,
            terms,
            total,
            values,
        });
    }
    b.push(
        SymbolicFact::new(
            "floor-sum-range",
            FactKind::FloorSumRange,
            format!(
                "Σ_i ⌊mρ_i⌋ lies strictly between m·{} − (n−1) and m·{} < m, so it is in {{0, …, m−1}} (m ≤ {m_star})",
                format_rational(&half),
                format_rational(&half)
            ),
        )
        .checks(range_claims),
    );

    b.push(
        SymbolicFact::new(
            "iterate-induction",
            FactKind::IndexEquals,
            format!("i(c^1) = n−1 = {base}"),
        )
        .value("m", 1),
    );
    let mut known: BTreeMap<u64, i64> = BTreeMap::new();
    known.insert(1, base);
    for k in 1..m1 {
        let next = k + 1;
        let total = &half * int(next as i64);
        let candidates = floor_sum_range(next, terms, &total)?;
        let mut claims = vec![Claim::FloorSumRange {
            m: next,
            terms,
            total,
            values: candidates.clone(),
        }];
        for &s in &candidates {
            if s == k as i64 {
                continue;
            }
            if s > k as i64 {
                return Ok(b.finish(Verdict::Open(format!(
                    "i(c^{next}) could exceed n−1+2k"
                ))));
            }
            let mut hypo = known.clone();
            hypo.insert(next, base + 2 * s);
            claims.extend(expect_duplicate(check_iterate_uniqueness(n, &hypo, k)?)?);
        }
        if !candidates.contains(&(k as i64)) {
            return Ok(b.finish(Verdict::Open(format!("no value left for i(c^{next})"))));
        }
        known.insert(next, base + 2 * k as i64);
        b.push(
            SymbolicFact::new(
                "iterate-induction",
                FactKind::IndexEquals,
                format!(
                    "i(c^{next}) = 2({next}−1)+n−1 = {}: smaller values repeat an earlier iterate",
                    base + 2 * k as i64
                ),
            )
            .value("m", next)
            .checks(claims),
        );
    }

    let total = &half * int(m_star as i64);
    let sharp = floor_sum_range(m_star, terms, &total)?;
    let stated = stated_floor_sum_set(&total);
    let covered: Vec<i64> = (0..m1 as i64).collect();
    let mut claims = vec![
        Claim::FloorSumRange {
            m: m_star,
            terms,
            total: total.clone(),
            values: sharp.clone(),
        },
        Claim::Subset {
            sub: sharp.clone(),
            sup: stated.clone(),
        },
        Claim::Subset {
            sub: stated.clone(),
            sup: covered,
        },
    ];
    for &s in &stated {
        let mut hypo = known.clone();
        hypo.insert(m_star, base + 2 * s);
        claims.extend(expect_duplicate(check_iterate_uniqueness(n, &hypo, m1 - 1)?)?);
    }
    let (at, earlier) = if even {
        ("pigeonhole at m = n", "i(c^1), …, i(c^{n−1})")
    } else {
        ("pigeonhole at m₂ = (n+1)/2", "i(c^1), …, i(c^{m₁}) with m₁ = (n−1)/2")
    };
    let mut statement = format!(
        "{at}: Σ_i ⌊{m_star}ρ_i⌋ = {} − (fractional parts) lies in {:?} ⊆ {:?}, so i(c^{m_star}) is one of {earlier}",
        format_rational(&total),
        sharp,
        stated
    );
    if sharp.is_empty() {
        statement.push_str("; the strict bounds already leave no value at all");
    }
    b.push(
        SymbolicFact::new("pigeonhole", FactKind::IndexRange, statement)
            .value("m", m_star)
            .value("sharp_set", &sharp)
            .value("stated_set", &stated)
            .checks(claims),
    );
    let theta = theta_set(n);
    Ok(b.contradiction(
        ContradictionKind::Uniqueness,
        "uniqueness-of-iterates",
        format!(
            "i(c^{m_star}) repeats the index of an earlier iterate inside Θ(n) = {:?}, contradicting uniqueness",
            theta.members
        ),
        vec![Claim::Subset {
            sub: stated.iter().map(|s| base + 2 * s).collect(),
            sup: theta.members.clone(),
        }],
    ))
}

fn open_trace(n: u32, case: NcgCase, subcase: Option<Subcase>, err: ProverError) -> ProofTrace {
    ProofTrace {
        n,
        case,
        subcase,
        steps: Vec::new(),
        verdict: Verdict::Open(err.to_string()),
    }
}

fn jobs(n: u32, case: NcgCase) -> Vec<(NcgCase, Option<Subcase>)> {
    // vacuous cases and NCG1 are argued without splitting on p
    if n < minimal_dimension(case) || case == NcgCase::Ncg1 {
        vec![(case, None)]
    } else {
        vec![(case, Some(Subcase::PEven)), (case, Some(Subcase::POdd))]
    }
}

fn build(n: u32, case: NcgCase, subcase: Option<Subcase>) -> ProofTrace {
    let result = match subcase {
        _ if n < minimal_dimension(case) => Ok(vacuous_trace(n, case)),
        None => ncg1_trace(n),
        Some(sub) => subcase_trace(n, case, sub),
    };
    result.unwrap_or_else(|e| open_trace(n, case, subcase, e))
}

/// All traces for one case, ordered by subcase.
pub fn replay_case(n: u32, case: NcgCase) -> Vec<ProofTrace> {
    assert!(n >= 2, "sphere dimension must be at least 2");
    jobs(n, case)
        .into_par_iter()
        .map(|(c, s)| build(n, c, s))
        .collect()
}

/// Traces for every case and parity of `p`, ordered by `(case, subcase)`.
pub fn replay(n: u32) -> Vec<ProofTrace> {
    assert!(n >= 2, "sphere dimension must be at least 2");
    let mut all: Vec<(NcgCase, Option<Subcase>)> =
        NcgCase::ALL.iter().flat_map(|&c| jobs(n, c)).collect();
    all.sort();
    all.into_par_iter().map(|(c, s)| build(n, c, s)).collect()
}

pub fn certificate(n: u32, case: Option<NcgCase>) -> Certificate {
    let traces = match case {
        Some(c) => replay_case(n, c),
        None => replay(n),
    };
    Certificate { n, traces }
}
