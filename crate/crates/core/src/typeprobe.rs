//! Certified probes of the type-1 inequality.
//!
//! The Rademacher integral `∫₀¹ ‖Σ r_k(t) x_k‖ dt` equals the uniform average
//! of `‖Σ η_k x_k‖` over all sign vectors `η`, so Rademacher functions are never
//! evaluated pointwise. Every verdict comes from a certified comparison of
//! enclosures: a probe passes, fails, or says it cannot tell.

use std::fmt;
use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::construction::{gstar_value, unit_norm_value, ConstructionParams, Family, SignVector};
use crate::error::{Error, Result};
use crate::numeric::{fmt_pq, int, ln_int, pow_int, rat, RatInterval, Rational};
use crate::pwfunc::{PiecewiseFn, Refinement, DEFAULT_EVAL_BUDGET};

/// Largest number of sign vectors enumerated by default.
pub const DEFAULT_EXHAUSTIVE_CEILING: u64 = 512;

/// Digits in decimal renderings.
pub const REPORT_DIGITS: usize = 12;

/// Base from which the lower bound of the sandwich is asserted.
pub const LOWER_BOUND_FROM: u64 = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SignMode {
    Exhaustive,
    Sample { count: usize, seed: u64 },
}

impl fmt::Display for SignMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SignMode::Exhaustive => write!(f, "all"),
            SignMode::Sample { count, seed } => write!(f, "sample:{count} (seed {seed})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProbeBudget {
    /// Relative enclosure width of every norm.
    pub tol: Rational,
    pub sign_mode: SignMode,
    /// Cell evaluations per norm.
    pub eval_budget: u64,
    /// Largest `2^K` enumerated in exhaustive mode.
    pub exhaustive_ceiling: u64,
}

impl Default for ProbeBudget {
    fn default() -> Self {
        ProbeBudget {
            tol: rat(1, 1_000_000),
            sign_mode: SignMode::Exhaustive,
            eval_budget: DEFAULT_EVAL_BUDGET,
            exhaustive_ceiling: DEFAULT_EXHAUSTIVE_CEILING,
        }
    }
}

impl ProbeBudget {
    pub fn with_tol(tol: Rational) -> Self {
        ProbeBudget { tol, ..ProbeBudget::default() }
    }

    pub fn validate(&self) -> Result<()> {
        if self.tol <= Rational::ZERO {
            return Err(Error::Parameter(format!("tolerance must be positive, got {}", fmt_pq(&self.tol))));
        }
        if let SignMode::Sample { count: 0, .. } = self.sign_mode {
            return Err(Error::Parameter("sample count must be at least 1".into()));
        }
        Ok(())
    }

    fn refinement(&self) -> Result<Refinement> {
        Ok(Refinement::new(self.tol.clone())?.with_budget(self.eval_budget))
    }

    /// Sign vectors of length `len`, as bit codes.
    fn sign_codes(&self, len: usize) -> Result<Vec<u64>> {
        self.validate()?;
        if len >= 63 {
            return Err(Error::Size(format!("{len} signs do not fit a 64-bit code")));
        }
        let total = 1u64 << len;
        match self.sign_mode {
            SignMode::Exhaustive => {
                if total > self.exhaustive_ceiling {
                    return Err(Error::Parameter(format!(
                        "exhaustive mode needs {total} sign vectors, over the ceiling of {}; use sampling",
                        self.exhaustive_ceiling
                    )));
                }
                Ok((0..total).collect())
            }
            SignMode::Sample { count, seed } => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                Ok((0..count).map(|_| rng.gen_range(0..total)).collect())
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
}

impl Verdict {
    /// Fail dominates Inconclusive, which dominates Pass.
    pub fn and(self, other: Verdict) -> Verdict {
        match (self, other) {
            (Verdict::Fail, _) | (_, Verdict::Fail) => Verdict::Fail,
            (Verdict::Inconclusive, _) | (_, Verdict::Inconclusive) => Verdict::Inconclusive,
            _ => Verdict::Pass,
        }
    }

    pub fn all<I: IntoIterator<Item = Verdict>>(items: I) -> Verdict {
        items.into_iter().fold(Verdict::Pass, Verdict::and)
    }

    pub fn exit_code(self) -> i32 {
        match self {
            Verdict::Pass => 0,
            Verdict::Fail => 1,
            Verdict::Inconclusive => 2,
        }
    }

    /// `x >= target`, certified.
    pub fn at_least(x: &RatInterval, target: &RatInterval) -> Verdict {
        if x.lo() >= target.hi() {
            Verdict::Pass
        } else if x.hi() < target.lo() {
            Verdict::Fail
        } else {
            Verdict::Inconclusive
        }
    }

    /// `x <= target`, certified.
    pub fn at_most(x: &RatInterval, target: &RatInterval) -> Verdict {
        if x.hi() <= target.lo() {
            Verdict::Pass
        } else if x.lo() > target.hi() {
            Verdict::Fail
        } else {
            Verdict::Inconclusive
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Inconclusive => "inconclusive",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProbeKind {
    Lemma,
    UnitNorms,
    Gstar,
    Discrete,
}

/// One line of a report: a sign vector, an index or a point.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProbeRow {
    pub label: String,
    pub enclosure: RatInterval,
    pub decimal: String,
    /// Exact value the enclosure must contain, as `p/q`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expected: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lower: Option<Verdict>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub upper: Option<Verdict>,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl ProbeRow {
    pub(crate) fn new(label: String, enclosure: RatInterval) -> Self {
        ProbeRow {
            label,
            decimal: enclosure.decimal(REPORT_DIGITS),
            enclosure,
            expected: None,
            lower: None,
            upper: None,
            verdict: Verdict::Pass,
            detail: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbeReport {
    pub kind: ProbeKind,
    pub n: u64,
    /// Number of vectors `N = n - 1`.
    pub count: usize,
    /// Number of scales `M = 2^N`.
    pub scales: usize,
    #[serde(with = "crate::numeric::serde_pq")]
    pub tol: Rational,
    pub sign_mode: String,
    /// Set for sampled runs: the average is a sample mean, not a certified bound.
    pub statistical: bool,
    /// Row verdicts are descriptive and do not drive the exit code.
    pub informational: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lower_target: Option<RatInterval>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub upper_target: Option<RatInterval>,
    /// Whether the lower bound enters the row verdicts.
    pub lower_asserted: bool,
    pub rows: Vec<ProbeRow>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub average: Option<RatInterval>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub unit_sum: Option<RatInterval>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ratio: Option<RatInterval>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ratio_bound: Option<RatInterval>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ratio_verdict: Option<Verdict>,
    pub verdict: Verdict,
    pub notes: Vec<String>,
    /// Echo of the invoking configuration, filled in by the front end.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub config: Option<serde_json::Value>,
}

impl ProbeReport {
    pub(crate) fn empty(kind: ProbeKind, p: &ConstructionParams, tol: Rational, sign_mode: String) -> Self {
        ProbeReport {
            kind,
            n: p.n(),
            count: p.count(),
            scales: p.scales(),
            tol,
            sign_mode,
            statistical: false,
            informational: false,
            lower_target: None,
            upper_target: None,
            lower_asserted: false,
            rows: Vec::new(),
            average: None,
            unit_sum: None,
            ratio: None,
            ratio_bound: None,
            ratio_verdict: None,
            verdict: Verdict::Pass,
            notes: Vec::new(),
            config: None,
        }
    }

    /// Verdict that decides the exit code.
    pub fn asserted_verdict(&self) -> Verdict {
        if self.informational {
            Verdict::Pass
        } else {
            self.verdict
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// One CSV record per row.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["label", "lo", "hi", "decimal", "expected", "lower", "upper", "verdict"])?;
        let opt = |v: Option<Verdict>| v.map(|v| v.to_string()).unwrap_or_default();
        for row in &self.rows {
            w.write_record([
                row.label.as_str(),
                &fmt_pq(row.enclosure.lo()),
                &fmt_pq(row.enclosure.hi()),
                &row.decimal,
                row.expected.as_deref().unwrap_or(""),
                &opt(row.lower),
                &opt(row.upper),
                &row.verdict.to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Precision of the logarithms behind the target intervals.
fn ln_eps() -> Rational {
    Rational::ONE / pow_int(2, 96)
}

/// `(½·n·ln n, n·ln n)` as certified intervals.
pub fn sandwich_targets(n: u64) -> Result<(RatInterval, RatInterval)> {
    let upper = ln_int(n, &ln_eps())?.scale(&int(n as i64));
    Ok((upper.scale(&rat(1, 2)), upper))
}

/// `(N + 1)·ln(N + 1) / (2N)`, the lower bound for the type-1 ratio of `N` vectors.
pub fn ratio_bound(count: usize) -> Result<RatInterval> {
    let base = count as u64 + 1;
    Ok(ln_int(base, &ln_eps())?.scale(&rat(base as i64, 2 * count as u64)))
}

/// Runs a norm, keeping the best enclosure when the budget runs out.
fn norm_or_best(refine: &Refinement, f: &PiecewiseFn) -> Result<(RatInterval, Option<String>)> {
    match refine.weak_norm(f) {
        Ok(v) => Ok((v, None)),
        Err(Error::Inconclusive { what, best, evaluations }) => {
            Ok((*best, Some(format!("{what}: budget exhausted after {evaluations} evaluations"))))
        }
        Err(e) => Err(e),
    }
}

fn mean(items: &[RatInterval]) -> RatInterval {
    let count = int(items.len() as i64);
    let sum = items.iter().fold(RatInterval::zero(), |acc, x| acc.add(x));
    sum.scale(&(Rational::ONE / count))
}

/// `2^-K Σ_η ‖Σ_k η_k f_k‖` in exhaustive mode; in sample mode the mean over
/// sampled sign vectors, which is only an estimate.
pub fn rademacher_average(fs: &[PiecewiseFn], budget: &ProbeBudget) -> Result<RatInterval> {
    if fs.is_empty() {
        return Err(Error::Parameter("rademacher average of an empty list".into()));
    }
    let codes = budget.sign_codes(fs.len())?;
    let refine = budget.refinement()?;
    let norms: Vec<RatInterval> = codes
        .par_iter()
        .map(|&code| {
            let eta = SignVector::from_bits(code, fs.len());
            let coeffs: Vec<Rational> = eta.entries().iter().map(|e| int(*e as i64)).collect();
            let f = PiecewiseFn::linear_combination(fs, &coeffs);
            refine.weak_norm(&f)
        })
        .collect::<Result<_>>()?;
    Ok(mean(&norms))
}

/// Checks `½·n·ln n <= ‖Σ η_j g_j‖ <= n·ln n` for every sign vector. Below
/// [`LOWER_BOUND_FROM`] the lower bound is reported but not asserted.
pub fn verify_lemma(p: &ConstructionParams, budget: &ProbeBudget) -> Result<ProbeReport> {
    let family = Family::new(p.clone())?;
    let codes = budget.sign_codes(p.count())?;
    let refine = budget.refinement()?;
    let (lower_target, upper_target) = sandwich_targets(p.n())?;
    let lower_asserted = p.n() >= LOWER_BOUND_FROM;

    let norms: Vec<(RatInterval, Option<String>)> = codes
        .par_iter()
        .map(|&code| norm_or_best(&refine, &family.combine(&SignVector::from_bits(code, p.count()))?))
        .collect::<Result<_>>()?;

    let mut report = ProbeReport::empty(ProbeKind::Lemma, p, budget.tol.clone(), budget.sign_mode.to_string());
    for (&code, (norm, detail)) in codes.iter().zip(norms) {
        let eta = SignVector::from_bits(code, p.count());
        let mut row = ProbeRow::new(eta.compact(), norm);
        let lower = Verdict::at_least(&row.enclosure, &lower_target);
        let upper = Verdict::at_most(&row.enclosure, &upper_target);
        let mut verdict = if lower_asserted { lower.and(upper) } else { upper };
        if detail.is_some() && verdict == Verdict::Pass {
            verdict = Verdict::Inconclusive;
        }
        row.lower = Some(lower);
        row.upper = Some(upper);
        row.verdict = verdict;
        row.detail = detail;
        report.rows.push(row);
    }

    let average = mean(&report.rows.iter().map(|r| r.enclosure.clone()).collect::<Vec<_>>());
    let unit_sum = unit_norm_sum(&family, &refine)?;
    let ratio = average.div(&unit_sum)?;
    let bound = ratio_bound(p.count())?;
    report.ratio_verdict = Some(Verdict::at_least(&ratio, &bound));
    report.ratio = Some(ratio);
    report.ratio_bound = Some(bound);
    report.average = Some(average);
    report.unit_sum = Some(unit_sum);
    report.lower_target = Some(lower_target);
    report.upper_target = Some(upper_target);
    report.lower_asserted = lower_asserted;
    report.verdict = Verdict::all(report.rows.iter().map(|r| r.verdict));
    if !lower_asserted {
        report.notes.push(format!(
            "the lower bound is claimed only for large n (n >= {LOWER_BOUND_FROM}); below that it is reported, not asserted"
        ));
    }
    if let SignMode::Sample { count, seed } = budget.sign_mode {
        report.statistical = true;
        report.notes.push(format!(
            "statistical: the average is a sample mean over {count} sign vectors (seed {seed}), not a certified bound"
        ));
    }
    Ok(report)
}

fn unit_norm_sum(family: &Family, refine: &Refinement) -> Result<RatInterval> {
    let norms: Vec<RatInterval> = family.vectors().par_iter().map(|g| refine.weak_norm(g)).collect::<Result<_>>()?;
    Ok(norms.iter().fold(RatInterval::zero(), |acc, x| acc.add(x)))
}

/// Checks `‖g_j‖ <= 1` and that the enclosure holds the exact `1 - n^-M`.
pub fn verify_unit_norms(p: &ConstructionParams, budget: &ProbeBudget) -> Result<ProbeReport> {
    let family = Family::new(p.clone())?;
    let refine = budget.refinement()?;
    let expected = unit_norm_value(p);
    let one = RatInterval::point(Rational::ONE);
    let mut report = ProbeReport::empty(ProbeKind::UnitNorms, p, budget.tol.clone(), "n/a".into());
    let norms: Vec<(RatInterval, Option<String>)> =
        family.vectors().par_iter().map(|g| norm_or_best(&refine, g)).collect::<Result<_>>()?;
    for (j, (norm, detail)) in norms.into_iter().enumerate() {
        let mut row = ProbeRow::new(format!("g{}", j + 1), norm);
        let bound = Verdict::at_most(&row.enclosure, &one);
        let holds = if row.enclosure.contains(&expected) {
            Verdict::Pass
        } else if detail.is_some() {
            Verdict::Inconclusive
        } else {
            Verdict::Fail
        };
        row.upper = Some(bound);
        row.verdict = bound.and(holds);
        row.expected = Some(fmt_pq(&expected));
        row.detail = detail;
        report.rows.push(row);
    }
    report.upper_target = Some(one);
    report.verdict = Verdict::all(report.rows.iter().map(|r| r.verdict));
    Ok(report)
}

/// Checks that `g_j*(t)` is enclosed around `1/(t + n^-M)`, or around 0 past
/// the support.
pub fn verify_gstar(
    p: &ConstructionParams,
    j: usize,
    points: &[Rational],
    budget: &ProbeBudget,
) -> Result<ProbeReport> {
    let family = Family::new(p.clone())?;
    let g = family
        .vectors()
        .get(j.wrapping_sub(1))
        .ok_or_else(|| Error::Parameter(format!("vector index j = {j} outside 1..={}", p.count())))?;
    let refine = budget.refinement()?;
    let mut report = ProbeReport::empty(ProbeKind::Gstar, p, budget.tol.clone(), "n/a".into());
    let rows: Vec<ProbeRow> = points
        .par_iter()
        .map(|t| {
            let expected = gstar_value(p, t);
            let (enclosure, detail) = match refine.rearrangement_at(g, t) {
                Ok(v) => (v, None),
                Err(Error::Inconclusive { best, what, .. }) => (*best, Some(what)),
                Err(e) => return Err(e),
            };
            let mut row = ProbeRow::new(fmt_pq(t), enclosure);
            row.verdict = match (row.enclosure.contains(&expected), &detail) {
                (true, _) => Verdict::Pass,
                (false, Some(_)) => Verdict::Inconclusive,
                (false, None) => Verdict::Fail,
            };
            row.expected = Some(fmt_pq(&expected));
            row.detail = detail;
            Ok(row)
        })
        .collect::<Result<_>>()?;
    report.rows = rows;
    report.verdict = Verdict::all(report.rows.iter().map(|r| r.verdict));
    report.notes.push(format!("vector g{j}"));
    Ok(report)
}

/// One line of the type-1 ratio table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RatioRow {
    pub n: u64,
    pub count: usize,
    pub ratio: RatInterval,
    pub bound: RatInterval,
    pub verdict: Verdict,
    pub decimal: String,
    pub statistical: bool,
}

impl RatioRow {
    /// The ratio part of a lemma report.
    pub fn from_report(report: &ProbeReport) -> Result<RatioRow> {
        let missing = || Error::Parameter("report carries no ratio".into());
        let ratio = report.ratio.clone().ok_or_else(missing)?;
        Ok(RatioRow {
            n: report.n,
            count: report.count,
            decimal: ratio.decimal(REPORT_DIGITS),
            ratio,
            bound: report.ratio_bound.clone().ok_or_else(missing)?,
            verdict: report.ratio_verdict.ok_or_else(missing)?,
            statistical: report.statistical,
        })
    }
}

/// `[2^-N Σ_η ‖Σ η_j g_j‖] / [Σ_j ‖g_j‖]` with its lower bound.
pub fn type1_ratio(p: &ConstructionParams, budget: &ProbeBudget) -> Result<RatioRow> {
    RatioRow::from_report(&verify_lemma(p, budget)?)
}

/// Writes a ratio table as CSV.
pub fn write_ratio_csv<W: Write>(rows: &[RatioRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "n",
        "count",
        "ratio_lo",
        "ratio_hi",
        "decimal",
        "bound_lo",
        "bound_hi",
        "verdict",
        "statistical",
    ])?;
    for r in rows {
        w.write_record([
            r.n.to_string(),
            r.count.to_string(),
            fmt_pq(r.ratio.lo()),
            fmt_pq(r.ratio.hi()),
            r.decimal.clone(),
            fmt_pq(r.bound.lo()),
            fmt_pq(r.bound.hi()),
            r.verdict.to_string(),
            r.statistical.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn budget() -> ProbeBudget {
        ProbeBudget::with_tol(rat(1, 10_000))
    }

    #[test]
    fn verdict_algebra() {
        assert_eq!(Verdict::Pass.and(Verdict::Inconclusive), Verdict::Inconclusive);
        assert_eq!(Verdict::Inconclusive.and(Verdict::Fail), Verdict::Fail);
        assert_eq!(Verdict::all([]), Verdict::Pass);
        let iv = |a: i64, b: i64| RatInterval::new(int(a), int(b)).unwrap();
        assert_eq!(Verdict::at_least(&iv(3, 4), &iv(1, 3)), Verdict::Pass);
        assert_eq!(Verdict::at_least(&iv(0, 1), &iv(2, 3)), Verdict::Fail);
        assert_eq!(Verdict::at_most(&iv(2, 4), &iv(3, 5)), Verdict::Inconclusive);
        assert_eq!([Verdict::Pass, Verdict::Fail, Verdict::Inconclusive].map(Verdict::exit_code), [0, 1, 2]);
    }

    #[test]
    fn average_of_disjoint_indicators() {
        let fs =
            [PiecewiseFn::indicator(int(0), rat(1, 2)).unwrap(), PiecewiseFn::indicator(rat(1, 2), int(1)).unwrap()];
        assert_eq!(rademacher_average(&fs, &budget()).unwrap(), RatInterval::point(int(1)));
        assert!(rademacher_average(&[], &budget()).is_err());
    }

    #[test]
    fn sampling_is_seeded() {
        let b = ProbeBudget { sign_mode: SignMode::Sample { count: 5, seed: 7 }, ..budget() };
        assert_eq!(b.sign_codes(4).unwrap(), b.sign_codes(4).unwrap());
        let zero = ProbeBudget { sign_mode: SignMode::Sample { count: 0, seed: 7 }, ..budget() };
        assert!(zero.sign_codes(4).is_err());
        let small = ProbeBudget { exhaustive_ceiling: 4, ..budget() };
        assert!(small.sign_codes(3).is_err());
    }

    #[test]
    fn lemma_small_base() {
        let p = ConstructionParams::new(3).unwrap();
        let r = verify_lemma(&p, &budget()).unwrap();
        assert_eq!(r.rows.len(), 4);
        assert!(!r.lower_asserted);
        assert_eq!(r.rows[0].label, "++");
        assert_eq!(r.rows[0].enclosure, r.rows[3].enclosure);
        assert_eq!(r.verdict, Verdict::Pass);
        let csv = {
            let mut buf = Vec::new();
            r.write_csv(&mut buf).unwrap();
            String::from_utf8(buf).unwrap()
        };
        assert_eq!(csv.lines().count(), 5);
    }

    #[test]
    fn unit_norms_small_base() {
        let p = ConstructionParams::new(3).unwrap();
        let r = verify_unit_norms(&p, &budget()).unwrap();
        assert_eq!(r.rows.len(), 2);
        assert!(r.rows.iter().all(|row| row.enclosure == RatInterval::point(rat(80, 81))));
        assert_eq!(r.verdict, Verdict::Pass);
    }

    #[test]
    fn gstar_examples() {
        let p = ConstructionParams::new(3).unwrap();
        let beyond = Rational::ONE - rat(1, 81) + rat(1, 162);
        let r = verify_gstar(&p, 1, &[rat(1, 4), beyond], &budget()).unwrap();
        assert_eq!(r.rows[0].expected.as_deref(), Some("324/85"));
        assert_eq!(r.rows[1].expected.as_deref(), Some("0/1"));
        assert_eq!(r.verdict, Verdict::Pass);
        assert!(verify_gstar(&p, 3, &[rat(1, 2)], &budget()).is_err());
    }
}
