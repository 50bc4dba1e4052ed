//! Weak-ℓ¹ of finite sequences and a sampled copy of the construction.
//!
//! A sequence `x` corresponds to the step function `Σ x(i) χ_[i-1, i)`, whose
//! rearrangement at `i - 1` is the `i`-th largest `|x|`. Sorting is therefore
//! the whole rearrangement.

use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::construction::{ConstructionParams, Family, SignVector};
use crate::error::{Error, Result};
use crate::numeric::{abs, fmt_pq, int, pow_int, serde_pq_vec, RatInterval, Rational};
use crate::typeprobe::{sandwich_targets, ProbeKind, ProbeReport, ProbeRow, Verdict};

/// Longest sequence [`discrete_family`] materializes by default.
pub const DEFAULT_MAX_LEN: u64 = 1 << 20;

/// `x(1), x(2), ...`, zero past the end.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FiniteSeq {
    #[serde(with = "serde_pq_vec")]
    pub values: Vec<Rational>,
}

impl FiniteSeq {
    pub fn new(values: Vec<Rational>) -> Self {
        FiniteSeq { values }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn scale(&self, c: &Rational) -> FiniteSeq {
        FiniteSeq::new(self.values.iter().map(|v| v * c).collect())
    }

    /// `Σ|x(i)|`.
    pub fn l1_norm(&self) -> Rational {
        self.values.iter().fold(Rational::ZERO, |acc, v| acc + abs(v))
    }

    /// `Σ_k coeffs[k] · xs[k]`, padded with zeros to the longest input.
    pub fn linear_combination(xs: &[FiniteSeq], coeffs: &[Rational]) -> FiniteSeq {
        let len = xs.iter().map(FiniteSeq::len).max().unwrap_or(0);
        let mut out = vec![Rational::ZERO; len];
        for (x, c) in xs.iter().zip(coeffs) {
            for (o, v) in out.iter_mut().zip(&x.values) {
                *o += v * c;
            }
        }
        FiniteSeq::new(out)
    }

    /// CSV with columns `index, value, rearranged`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let sorted = seq_rearrange(self);
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["index", "value", "rearranged"])?;
        for (i, (v, r)) in self.values.iter().zip(&sorted.values).enumerate() {
            w.write_record([(i + 1).to_string(), fmt_pq(v), fmt_pq(r)])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// `|x|` in non-increasing order.
pub fn seq_rearrange(x: &FiniteSeq) -> FiniteSeq {
    let mut values: Vec<Rational> = x.values.iter().map(abs).collect();
    values.sort_by(|a, b| b.cmp(a));
    FiniteSeq::new(values)
}

/// `max_k k · x*(k)`, zero for the empty sequence.
pub fn seq_weak_norm(x: &FiniteSeq) -> Rational {
    seq_rearrange(x).values.iter().zip(1i64..).map(|(v, k)| v * int(k)).max().unwrap_or(Rational::ZERO)
}

/// `L = n^M` for the base.
pub fn discrete_length(p: &ConstructionParams) -> Rational {
    pow_int(p.n(), p.scales())
}

/// `x_j(i) = g_j(i / L)` for `i = 1..L`, `L = n^M`: every breakpoint of the
/// construction is a multiple of `1/L`, so each sample sits inside one piece.
pub fn discrete_family(p: &ConstructionParams, max_len: u64) -> Result<Vec<FiniteSeq>> {
    let len = discrete_len_checked(p, max_len)?;
    let family = Family::new(p.clone())?;
    let step = Rational::ONE / int(len as i64);
    family
        .vectors()
        .par_iter()
        .map(|g| {
            (1..=len as i64).map(|i| g.eval_exact(&(&step * int(i)))).collect::<Result<Vec<_>>>().map(FiniteSeq::new)
        })
        .collect()
}

fn discrete_len_checked(p: &ConstructionParams, max_len: u64) -> Result<u64> {
    let len = (p.n() as f64).powf(p.scales() as f64);
    if len > max_len as f64 {
        return Err(Error::Size(format!(
            "sampled sequences for n = {} would have n^M = {}^{} entries, over the limit of {max_len}; use the continuum verifier",
            p.n(),
            p.n(),
            p.scales()
        )));
    }
    Ok(p.n().pow(p.scales() as u32))
}

/// Exact `‖Σ η_j x_j‖_{1,∞} / L` for every sign vector, placed against the
/// sandwich `[½·n·ln n, n·ln n]`. Row verdicts are descriptive only.
pub fn verify_discrete_lemma(p: &ConstructionParams, max_len: u64) -> Result<ProbeReport> {
    let xs = discrete_family(p, max_len)?;
    let len = discrete_length(p);
    let (lower_target, upper_target) = sandwich_targets(p.n())?;
    let codes: Vec<u64> = (0..1u64 << p.count()).collect();
    let norms: Vec<Rational> = codes
        .par_iter()
        .map(|&code| {
            let eta = SignVector::from_bits(code, p.count());
            let coeffs: Vec<Rational> = eta.entries().iter().map(|e| int(*e as i64)).collect();
            seq_weak_norm(&FiniteSeq::linear_combination(&xs, &coeffs)) / &len
        })
        .collect();

    let mut report = ProbeReport::empty(ProbeKind::Discrete, p, Rational::ZERO, "all".into());
    for (&code, norm) in codes.iter().zip(norms) {
        let mut row = ProbeRow::new(SignVector::from_bits(code, p.count()).compact(), RatInterval::point(norm));
        let lower = Verdict::at_least(&row.enclosure, &lower_target);
        let upper = Verdict::at_most(&row.enclosure, &upper_target);
        row.lower = Some(lower);
        row.upper = Some(upper);
        row.verdict = lower.and(upper);
        report.rows.push(row);
    }
    report.verdict = Verdict::all(report.rows.iter().map(|r| r.verdict));
    report.informational = true;
    report.lower_target = Some(lower_target);
    report.upper_target = Some(upper_target);
    report
        .notes
        .push(format!("norms are divided by L = n^M = {}, mapping counting measure to the mesh 1/L", fmt_pq(&len)));
    report.notes.push("samples x_j(i) = g_j(i/L), i = 1..L; verdicts are descriptive".into());
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::rat;

    fn seq(v: &[Rational]) -> FiniteSeq {
        FiniteSeq::new(v.to_vec())
    }

    #[test]
    fn rearrange_examples() {
        let harmonic3 = seq(&[int(1), rat(1, 2), rat(1, 3)]);
        assert_eq!(seq_rearrange(&harmonic3), harmonic3);
        assert_eq!(seq_rearrange(&seq(&[int(0), int(3), int(1)])), seq(&[int(3), int(1), int(0)]));
        assert_eq!(seq_rearrange(&seq(&[int(-2), int(1)])), seq(&[int(2), int(1)]));
    }

    #[test]
    fn weak_norm_examples() {
        let harmonic = FiniteSeq::new((1..=1000).map(|k| rat(1, k)).collect());
        assert_eq!(seq_weak_norm(&harmonic), int(1));
        assert_eq!(seq_weak_norm(&seq(&[int(0), int(3), int(1)])), int(3));
        assert_eq!(seq_weak_norm(&seq(&[int(5)])), int(5));
        assert_eq!(seq_weak_norm(&FiniteSeq::default()), int(0));
    }

    #[test]
    fn smallest_family() {
        let p = ConstructionParams::new(2).unwrap();
        let xs = discrete_family(&p, DEFAULT_MAX_LEN).unwrap();
        // g_1 = 1/t on (1/2, 1] and -1/t on (1/4, 1/2], sampled at i/4
        assert_eq!(xs, vec![seq(&[int(0), int(-2), rat(4, 3), int(1)])]);
        assert!(matches!(discrete_family(&ConstructionParams::new(5).unwrap(), DEFAULT_MAX_LEN), Err(Error::Size(_))));
    }

    #[test]
    fn json_and_csv() {
        let x = seq(&[rat(1, 2), int(-3)]);
        assert_eq!(serde_json::to_string(&x).unwrap(), r#"["1/2","-3/1"]"#);
        let mut buf = Vec::new();
        x.write_csv(&mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "index,value,rearranged\n1,1/2,3/1\n2,-3/1,1/2\n");
    }
}
