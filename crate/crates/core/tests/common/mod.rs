//! Strategies and oracles shared by the integration suites.
#![allow(dead_code)]

use proptest::prelude::*;
use weaktype::numeric::{int, rat, to_f64_directed};
use weaktype::pwfunc::{HyperTerm, PiecewiseFn, Segment, StepFn};
use weaktype::Rational;

/// Small rational `p/q`, `|p| <= 12`, `q <= 6`.
pub fn small_rat() -> impl Strategy<Value = Rational> {
    (-12i64..=12, 1u64..=6).prop_map(|(p, q)| rat(p, q))
}

pub fn nonzero_rat() -> impl Strategy<Value = Rational> {
    small_rat().prop_filter("nonzero", |r| *r != Rational::ZERO)
}

/// Breakpoints `k/den` in `[0, 1]`, at least two, strictly increasing.
fn breakpoints(den: u64, max: usize) -> impl Strategy<Value = Vec<Rational>> {
    proptest::collection::btree_set(0..=den, 2..=max)
        .prop_map(move |s| s.into_iter().map(|k| rat(k as i64, den)).collect())
}

fn term() -> impl Strategy<Value = HyperTerm> {
    (nonzero_rat(), prop_oneof![Just(rat(1, 8)), Just(rat(1, 4)), Just(rat(1, 2)), Just(int(1))])
        .prop_map(|(c, s)| HyperTerm::new(c, s))
}

/// Up to four segments on the `1/8` grid, each `c + Σ a/(t + s)` with at most
/// two terms and `s > 0`, so the function is bounded.
pub fn small_fn() -> impl Strategy<Value = PiecewiseFn> {
    breakpoints(8, 5)
        .prop_flat_map(|bps| {
            let pieces = bps.len() - 1;
            let segs = proptest::collection::vec((small_rat(), proptest::collection::vec(term(), 0..=2)), pieces);
            (Just(bps), segs)
        })
        .prop_map(|(bps, segs)| {
            let segments = bps
                .windows(2)
                .zip(segs)
                .map(|(w, (c, terms))| Segment::new(w[0].clone(), w[1].clone(), c, terms).unwrap())
                .collect();
            PiecewiseFn::new(segments).unwrap()
        })
}

/// Up to seven constant pieces on the `1/16` grid.
pub fn small_step() -> impl Strategy<Value = StepFn> {
    breakpoints(16, 8)
        .prop_flat_map(|bps| {
            let pieces = bps.len() - 1;
            (Just(bps), proptest::collection::vec(small_rat(), pieces))
        })
        .prop_map(|(bps, vals)| {
            StepFn::new(bps.windows(2).zip(vals).map(|(w, v)| (w[0].clone(), w[1].clone(), v))).unwrap()
        })
}

/// `ln` oracle written separately from the library: `2·atanh(y)` partial sums
/// for `y ∈ (0, 1)`, bracketed by the geometric tail `2y^(2K+1)/((2K+1)(1-y²))`.
pub fn atanh_oracle(y: &Rational, terms: usize) -> (Rational, Rational) {
    let mut sum = Rational::ZERO;
    let mut power = y.clone();
    let y2 = y * y;
    for k in 0..terms {
        sum += int(2) * &power / int(2 * k as i64 + 1);
        power = &power * &y2;
    }
    let tail = int(2) * &power / (int(2 * terms as i64 + 1) * (Rational::ONE - &y2));
    let hi = &sum + tail;
    (sum, hi)
}

/// Uncertified float estimate of `sup_λ λ·|{|f| > λ}|`: every segment is sampled
/// at `per_segment` midpoints, each carrying an equal share of its width.
/// Shifted arguments are formed exactly before rounding so deep scales keep
/// full relative precision.
pub fn float_weak_norm(f: &PiecewiseFn, per_segment: usize) -> f64 {
    let mut samples: Vec<(f64, f64)> = Vec::new();
    for seg in f.segments() {
        let width = to_f64_directed(&seg.width(), false);
        let c = to_f64_directed(seg.constant(), false);
        let terms: Vec<(f64, f64)> = seg
            .terms()
            .iter()
            .map(|t| (to_f64_directed(&t.coeff, false), to_f64_directed(&(seg.a() + &t.shift), false)))
            .collect();
        let cell = width / per_segment as f64;
        for s in 0..per_segment {
            let u = (s as f64 + 0.5) * cell;
            let v = c + terms.iter().map(|(a, base)| a / (base + u)).sum::<f64>();
            samples.push((v.abs(), cell));
        }
    }
    samples.sort_by(|a, b| b.0.total_cmp(&a.0));
    let mut measure = 0.0;
    let mut best: f64 = 0.0;
    for (v, w) in samples {
        measure += w;
        best = best.max(v * measure);
    }
    best
}
