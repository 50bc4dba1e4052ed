//! Piecewise sums of shifted reciprocals on `(0, 1]`.
//!
//! A [`PiecewiseFn`] is a sorted list of disjoint half-open segments `(a, b]`.
//! On each segment the function is `constant + Σ coeff / (t + shift)`; outside
//! every segment it is zero. This class is closed under addition, scaling and
//! restriction, and it contains every witness function of the construction.

mod levels;

use std::cmp::Ordering;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::numeric::{abs, fmt_pq, is_negative, is_positive, serde_pq, RatInterval, Rational};

pub use levels::{distribution, rearrangement_at, step_norm_exact, weak_norm, Refinement, DEFAULT_EVAL_BUDGET};

/// `t ↦ coeff / (t + shift)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct HyperTerm {
    #[serde(with = "serde_pq")]
    pub coeff: Rational,
    #[serde(with = "serde_pq")]
    pub shift: Rational,
}

impl HyperTerm {
    pub fn new(coeff: Rational, shift: Rational) -> Self {
        HyperTerm { coeff, shift }
    }

    /// Unit reciprocal `1 / (t + shift)`.
    pub fn unit(shift: Rational) -> Self {
        HyperTerm { coeff: Rational::ONE, shift }
    }
}

/// Sorts by shift, merges equal shifts and drops zero coefficients.
fn normalize_terms(mut terms: Vec<HyperTerm>) -> Vec<HyperTerm> {
    terms.sort_by(|x, y| x.shift.cmp(&y.shift));
    let mut out: Vec<HyperTerm> = Vec::with_capacity(terms.len());
    for term in terms {
        match out.last_mut() {
            Some(last) if last.shift == term.shift => last.coeff += term.coeff,
            _ => out.push(term),
        }
    }
    out.retain(|t| !t.coeff.is_zero());
    out
}

/// One block `(a, b]` of a piecewise function.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Segment {
    a: Rational,
    b: Rational,
    constant: Rational,
    terms: Vec<HyperTerm>,
}

impl Segment {
    /// Validates `0 <= a < b <= 1` and `a + shift >= 0` for every term, so the
    /// value is finite on `(a, b]`. A pole at the open end `t = a` is allowed.
    pub fn new(a: Rational, b: Rational, constant: Rational, terms: Vec<HyperTerm>) -> Result<Self> {
        if is_negative(&a) || a >= b || b > Rational::ONE {
            return Err(Error::Parameter(format!(
                "segment ({}, {}] must satisfy 0 <= a < b <= 1",
                fmt_pq(&a),
                fmt_pq(&b)
            )));
        }
        let terms = normalize_terms(terms);
        if let Some(bad) = terms.iter().find(|t| is_negative(&(&a + &t.shift))) {
            return Err(Error::Parameter(format!(
                "term with shift {} has a pole inside ({}, {}]",
                fmt_pq(&bad.shift),
                fmt_pq(&a),
                fmt_pq(&b)
            )));
        }
        Ok(Segment { a, b, constant, terms })
    }

    pub fn constant_on(a: Rational, b: Rational, value: Rational) -> Result<Self> {
        Segment::new(a, b, value, Vec::new())
    }

    pub fn a(&self) -> &Rational {
        &self.a
    }

    pub fn b(&self) -> &Rational {
        &self.b
    }

    pub fn constant(&self) -> &Rational {
        &self.constant
    }

    pub fn terms(&self) -> &[HyperTerm] {
        &self.terms
    }

    pub fn width(&self) -> Rational {
        &self.b - &self.a
    }

    pub fn is_zero(&self) -> bool {
        self.constant.is_zero() && self.terms.is_empty()
    }

    /// True when some term is unbounded as `t → a⁺`.
    pub fn has_pole(&self) -> bool {
        self.terms.iter().any(|t| (&self.a + &t.shift).is_zero())
    }

    /// Value at `t`; the caller guarantees `a < t <= b`.
    pub fn value_at(&self, t: &Rational) -> Rational {
        let mut v = self.constant.clone();
        for term in &self.terms {
            v += &term.coeff / (t + &term.shift);
        }
        v
    }

    /// Enclosure of the segment's formula over `[lo, hi] ⊆ [a, b]`, summing
    /// the exact range of each monotone term.
    pub fn range_on(&self, lo: &Rational, hi: &Rational) -> Result<RatInterval> {
        let mut min = self.constant.clone();
        let mut max = self.constant.clone();
        for term in &self.terms {
            let near = lo + &term.shift;
            if !is_positive(&near) {
                return Err(Error::Domain(format!(
                    "range over [{}, {}] reaches the pole of 1/(t + {})",
                    fmt_pq(lo),
                    fmt_pq(hi),
                    fmt_pq(&term.shift)
                )));
            }
            let at_lo = &term.coeff / near;
            let at_hi = &term.coeff / (hi + &term.shift);
            if is_positive(&term.coeff) {
                min += at_hi;
                max += at_lo;
            } else {
                min += at_lo;
                max += at_hi;
            }
        }
        RatInterval::new(min, max)
    }

    fn with_bounds(&self, a: Rational, b: Rational) -> Segment {
        Segment { a, b, constant: self.constant.clone(), terms: self.terms.clone() }
    }

    fn same_formula(&self, other: &Segment) -> bool {
        self.constant == other.constant && self.terms == other.terms
    }

    fn scaled(&self, c: &Rational) -> Segment {
        Segment {
            a: self.a.clone(),
            b: self.b.clone(),
            constant: &self.constant * c,
            terms: self.terms.iter().map(|t| HyperTerm { coeff: &t.coeff * c, shift: t.shift.clone() }).collect(),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct SegmentRepr {
    #[serde(with = "serde_pq")]
    a: Rational,
    #[serde(with = "serde_pq")]
    b: Rational,
    #[serde(with = "serde_pq", default = "Rational::default")]
    constant: Rational,
    #[serde(default)]
    terms: Vec<HyperTerm>,
}

impl Serialize for Segment {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        SegmentRepr { a: self.a.clone(), b: self.b.clone(), constant: self.constant.clone(), terms: self.terms.clone() }
            .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Segment {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = SegmentRepr::deserialize(d)?;
        Segment::new(r.a, r.b, r.constant, r.terms).map_err(serde::de::Error::custom)
    }
}

/// Finite sum of segments with pairwise disjoint supports, zero elsewhere.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct PiecewiseFn {
    segments: Vec<Segment>,
}

impl PiecewiseFn {
    pub fn zero() -> Self {
        PiecewiseFn::default()
    }

    /// Sorts the segments and checks that their supports do not overlap.
    /// Segments that are identically zero are dropped.
    pub fn new(mut segments: Vec<Segment>) -> Result<Self> {
        segments.retain(|s| !s.is_zero());
        segments.sort_by(|x, y| x.a.cmp(&y.a));
        for pair in segments.windows(2) {
            if pair[0].b > pair[1].a {
                return Err(Error::Parameter(format!(
                    "segments ({}, {}] and ({}, {}] overlap",
                    fmt_pq(&pair[0].a),
                    fmt_pq(&pair[0].b),
                    fmt_pq(&pair[1].a),
                    fmt_pq(&pair[1].b)
                )));
            }
        }
        Ok(PiecewiseFn { segments })
    }

    /// Concatenates functions whose supports are pairwise disjoint.
    pub fn from_disjoint<I: IntoIterator<Item = PiecewiseFn>>(parts: I) -> Result<Self> {
        PiecewiseFn::new(parts.into_iter().flat_map(|f| f.segments).collect())
    }

    pub fn single(segment: Segment) -> Self {
        PiecewiseFn::new(vec![segment]).expect("a single segment is always valid")
    }

    /// Indicator of `(a, b]`.
    pub fn indicator(a: Rational, b: Rational) -> Result<Self> {
        Ok(PiecewiseFn::single(Segment::constant_on(a, b, Rational::ONE)?))
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn is_zero(&self) -> bool {
        self.segments.is_empty()
    }

    /// Smallest `(a, b]` containing every segment, if any.
    pub fn support_hull(&self) -> Option<(Rational, Rational)> {
        Some((self.segments.first()?.a.clone(), self.segments.last()?.b.clone()))
    }

    /// Lebesgue measure of the union of the segments.
    pub fn support_measure(&self) -> Rational {
        self.segments.iter().fold(Rational::ZERO, |acc, s| acc + s.width())
    }

    /// Every segment endpoint, ascending, without duplicates.
    pub fn breakpoints(&self) -> Vec<Rational> {
        let mut pts: Vec<Rational> = Vec::with_capacity(2 * self.segments.len());
        for s in &self.segments {
            if pts.last() != Some(&s.a) {
                pts.push(s.a.clone());
            }
            pts.push(s.b.clone());
        }
        pts
    }

    fn segment_index_containing(&self, t: &Rational) -> Option<usize> {
        let idx = self.segments.partition_point(|s| &s.b < t);
        (idx < self.segments.len() && &self.segments[idx].a < t).then_some(idx)
    }

    /// The segment whose support `(a, b]` contains `t`.
    pub fn segment_containing(&self, t: &Rational) -> Option<&Segment> {
        self.segment_index_containing(t).map(|i| &self.segments[i])
    }

    /// Exact value at `t ∈ (0, 1]`.
    pub fn eval_exact(&self, t: &Rational) -> Result<Rational> {
        if !is_positive(t) || t > &Rational::ONE {
            return Err(Error::Domain(format!("evaluation point {} outside (0, 1]", fmt_pq(t))));
        }
        Ok(self.segment_containing(t).map_or(Rational::ZERO, |s| s.value_at(t)))
    }

    /// Enclosure of `{f(t) : t ∈ span}` for a span inside the closure of one
    /// segment (or inside a gap, where the function is zero).
    pub fn eval_interval(&self, span: &RatInterval) -> Result<RatInterval> {
        let (lo, hi) = (span.lo(), span.hi());
        if is_negative(lo) || hi > &Rational::ONE {
            return Err(Error::Domain(format!("span {span} outside [0, 1]")));
        }
        let idx = self.segments.partition_point(|s| &s.b < hi);
        if let Some(seg) = self.segments.get(idx) {
            if &seg.a <= lo {
                return seg.range_on(lo, hi);
            }
            if &seg.a < hi {
                return Err(Error::Parameter(format!("span {span} straddles the breakpoint {}", fmt_pq(&seg.a))));
            }
        }
        if idx > 0 && &self.segments[idx - 1].b > lo {
            return Err(Error::Parameter(format!(
                "span {span} straddles the breakpoint {}",
                fmt_pq(&self.segments[idx - 1].b)
            )));
        }
        Ok(RatInterval::zero())
    }

    /// Exact pointwise sum on the common refinement of both partitions.
    pub fn add(&self, other: &PiecewiseFn) -> PiecewiseFn {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let mut cuts: Vec<Rational> = self.breakpoints();
        cuts.extend(other.breakpoints());
        cuts.sort();
        cuts.dedup();

        let mut out: Vec<Segment> = Vec::new();
        let (mut i, mut j) = (0usize, 0usize);
        for w in cuts.windows(2) {
            let (x, y) = (&w[0], &w[1]);
            while i < self.segments.len() && &self.segments[i].b <= x {
                i += 1;
            }
            while j < other.segments.len() && &other.segments[j].b <= x {
                j += 1;
            }
            let left = self.segments.get(i).filter(|s| &s.a <= x);
            let right = other.segments.get(j).filter(|s| &s.a <= x);
            let piece = match (left, right) {
                (None, None) => continue,
                (Some(s), None) | (None, Some(s)) => s.with_bounds(x.clone(), y.clone()),
                (Some(s), Some(r)) => {
                    let mut terms = s.terms.clone();
                    terms.extend(r.terms.iter().cloned());
                    Segment {
                        a: x.clone(),
                        b: y.clone(),
                        constant: &s.constant + &r.constant,
                        terms: normalize_terms(terms),
                    }
                }
            };
            if !piece.is_zero() {
                out.push(piece);
            }
        }
        PiecewiseFn { segments: merge_adjacent(out) }
    }

    pub fn scale(&self, c: &Rational) -> PiecewiseFn {
        if c.is_zero() {
            return PiecewiseFn::zero();
        }
        PiecewiseFn { segments: self.segments.iter().map(|s| s.scaled(c)).collect() }
    }

    pub fn neg(&self) -> PiecewiseFn {
        self.scale(&-Rational::ONE)
    }

    /// `f · χ_(a, b]`.
    pub fn restrict(&self, a: &Rational, b: &Rational) -> PiecewiseFn {
        let segments = self
            .segments
            .iter()
            .filter_map(|s| {
                let lo = if &s.a > a { &s.a } else { a };
                let hi = if &s.b < b { &s.b } else { b };
                (lo < hi).then(|| s.with_bounds(lo.clone(), hi.clone()))
            })
            .collect();
        PiecewiseFn { segments }
    }

    /// `Σ coeffs[i] · fs[i]`.
    pub fn linear_combination(fs: &[PiecewiseFn], coeffs: &[Rational]) -> PiecewiseFn {
        fs.iter().zip(coeffs).fold(PiecewiseFn::zero(), |acc, (f, c)| acc.add(&f.scale(c)))
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// Accepts either a bare list of segments or `{"segments": [...]}`.
    pub fn from_json(text: &str) -> Result<Self> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Doc {
            List(Vec<Segment>),
            Object { segments: Vec<Segment> },
        }
        let segments = match serde_json::from_str::<Doc>(text)? {
            Doc::List(s) | Doc::Object { segments: s } => s,
        };
        PiecewiseFn::new(segments)
    }
}

fn merge_adjacent(segments: Vec<Segment>) -> Vec<Segment> {
    let mut out: Vec<Segment> = Vec::with_capacity(segments.len());
    for seg in segments {
        match out.last_mut() {
            Some(last) if last.b == seg.a && last.same_formula(&seg) => last.b = seg.b,
            _ => out.push(seg),
        }
    }
    out
}

impl Serialize for PiecewiseFn {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.segments.serialize(s)
    }
}

impl<'de> Deserialize<'de> for PiecewiseFn {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let segments = Vec::<Segment>::deserialize(d)?;
        PiecewiseFn::new(segments).map_err(serde::de::Error::custom)
    }
}

/// Piecewise-constant function: a [`PiecewiseFn`] without reciprocal terms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StepFn(PiecewiseFn);

impl StepFn {
    /// From `(a, b, value)` pieces with disjoint supports.
    pub fn new<I: IntoIterator<Item = (Rational, Rational, Rational)>>(pieces: I) -> Result<Self> {
        let segments = pieces.into_iter().map(|(a, b, v)| Segment::constant_on(a, b, v)).collect::<Result<Vec<_>>>()?;
        Ok(StepFn(PiecewiseFn::new(segments)?))
    }

    pub fn as_fn(&self) -> &PiecewiseFn {
        &self.0
    }

    pub fn into_fn(self) -> PiecewiseFn {
        self.0
    }

    /// `(a, b, |value|)` for every piece.
    pub fn abs_pieces(&self) -> impl Iterator<Item = (&Rational, &Rational, Rational)> {
        self.0.segments.iter().map(|s| (&s.a, &s.b, abs(&s.constant)))
    }
}

impl TryFrom<PiecewiseFn> for StepFn {
    type Error = Error;

    fn try_from(f: PiecewiseFn) -> Result<Self> {
        if f.segments.iter().any(|s| !s.terms.is_empty()) {
            return Err(Error::Parameter("function has reciprocal terms; not a step function".into()));
        }
        Ok(StepFn(f))
    }
}

/// Orders segments by left endpoint; used by callers that build segment lists.
pub fn cmp_segments(x: &Segment, y: &Segment) -> Ordering {
    x.a.cmp(&y.a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::{int, rat};

    fn recip_on(a: Rational, b: Rational, shift: Rational) -> PiecewiseFn {
        PiecewiseFn::single(Segment::new(a, b, Rational::ZERO, vec![HyperTerm::unit(shift)]).unwrap())
    }

    #[test]
    fn eval_indicator_and_reciprocal() {
        let one = PiecewiseFn::indicator(int(0), int(1)).unwrap();
        assert_eq!(one.eval_exact(&rat(1, 2)).unwrap(), int(1));
        let inv = recip_on(rat(1, 3), int(1), int(0));
        assert_eq!(inv.eval_exact(&rat(1, 2)).unwrap(), int(2));
        assert_eq!(inv.eval_exact(&rat(1, 3)).unwrap(), int(0));
        assert_eq!(inv.eval_exact(&int(1)).unwrap(), int(1));
    }

    #[test]
    fn eval_domain_errors() {
        let one = PiecewiseFn::indicator(int(0), int(1)).unwrap();
        assert!(matches!(one.eval_exact(&int(0)), Err(Error::Domain(_))));
        assert!(matches!(one.eval_exact(&rat(3, 2)), Err(Error::Domain(_))));
    }

    #[test]
    fn eval_interval_examples() {
        let inv = recip_on(rat(1, 3), int(1), int(0));
        let r = inv.eval_interval(&RatInterval::new(rat(1, 2), int(1)).unwrap()).unwrap();
        assert_eq!(r, RatInterval::new(int(1), int(2)).unwrap());

        let five = PiecewiseFn::single(Segment::constant_on(int(0), int(1), int(5)).unwrap());
        let r = five.eval_interval(&RatInterval::new(rat(1, 4), rat(3, 4)).unwrap()).unwrap();
        assert_eq!(r, RatInterval::point(int(5)));

        let mixed = PiecewiseFn::single(
            Segment::new(rat(1, 2), int(1), int(0), vec![HyperTerm::unit(int(0)), HyperTerm::new(int(-1), int(1))])
                .unwrap(),
        );
        let r = mixed.eval_interval(&RatInterval::new(rat(1, 2), int(1)).unwrap()).unwrap();
        assert_eq!(r, RatInterval::new(rat(1, 3), rat(3, 2)).unwrap());
    }

    #[test]
    fn eval_interval_rejects_straddling_spans() {
        let f = PiecewiseFn::indicator(int(0), rat(1, 2))
            .unwrap()
            .add(&PiecewiseFn::single(Segment::constant_on(rat(1, 2), int(1), int(3)).unwrap()));
        let span = RatInterval::new(rat(1, 4), rat(3, 4)).unwrap();
        assert!(matches!(f.eval_interval(&span), Err(Error::Parameter(_))));
        let gap = PiecewiseFn::indicator(int(0), rat(1, 4)).unwrap();
        let span = RatInterval::new(rat(1, 2), rat(3, 4)).unwrap();
        assert_eq!(gap.eval_interval(&span).unwrap(), RatInterval::zero());
    }

    #[test]
    fn add_zero_and_scale() {
        let f = recip_on(rat(1, 3), int(1), int(0)).add(&PiecewiseFn::indicator(rat(1, 2), rat(3, 4)).unwrap());
        assert_eq!(f.add(&PiecewiseFn::zero()), f);
        assert_eq!(PiecewiseFn::zero().add(&f), f);
        let g = f.scale(&int(-1));
        for t in [rat(1, 5), rat(2, 5), rat(3, 5), rat(7, 10), int(1)] {
            assert_eq!(g.eval_exact(&t).unwrap(), -f.eval_exact(&t).unwrap());
        }
        assert!(f.add(&g).is_zero());
    }

    #[test]
    fn add_merges_partitions() {
        let f = PiecewiseFn::indicator(int(0), rat(1, 2)).unwrap();
        let g = PiecewiseFn::indicator(rat(1, 2), int(1)).unwrap();
        let h = f.add(&g);
        assert_eq!(h, PiecewiseFn::indicator(int(0), int(1)).unwrap());
    }

    #[test]
    fn restrict_clips() {
        let f = recip_on(int(0), int(1), int(0));
        let r = f.restrict(&rat(1, 4), &rat(1, 2));
        assert_eq!(r.segments().len(), 1);
        assert_eq!(r.eval_exact(&rat(1, 5)).unwrap(), int(0));
        assert_eq!(r.eval_exact(&rat(1, 3)).unwrap(), int(3));
        assert!(!r.segments()[0].has_pole());
    }

    #[test]
    fn invalid_segments_rejected() {
        assert!(Segment::constant_on(rat(1, 2), rat(1, 2), int(1)).is_err());
        assert!(Segment::constant_on(int(0), rat(3, 2), int(1)).is_err());
        assert!(Segment::new(rat(1, 4), int(1), int(0), vec![HyperTerm::unit(rat(-1, 2))]).is_err());
        let a = PiecewiseFn::indicator(int(0), rat(1, 2)).unwrap();
        let b = PiecewiseFn::indicator(rat(1, 4), int(1)).unwrap();
        assert!(PiecewiseFn::from_disjoint([a, b]).is_err());
    }

    #[test]
    fn json_shape_and_roundtrip() {
        let f = recip_on(rat(1, 3), int(1), rat(-1, 3));
        let text = serde_json::to_string(&f).unwrap();
        assert_eq!(text, r#"[{"a":"1/3","b":"1/1","constant":"0/1","terms":[{"coeff":"1/1","shift":"-1/3"}]}]"#);
        assert_eq!(PiecewiseFn::from_json(&text).unwrap(), f);
        let wrapped = format!(r#"{{"segments": {text}}}"#);
        assert_eq!(PiecewiseFn::from_json(&wrapped).unwrap(), f);
        assert!(PiecewiseFn::from_json(r#"[{"a":"1/2","b":"1/4"}]"#).is_err());
    }

    #[test]
    fn step_fn_conversion() {
        let s = StepFn::new([(int(0), rat(1, 4), int(3)), (rat(1, 4), int(1), int(-1))]).unwrap();
        assert_eq!(s.abs_pieces().map(|p| p.2).collect::<Vec<_>>(), vec![int(3), int(1)]);
        assert!(StepFn::try_from(recip_on(int(0), int(1), int(1))).is_err());
    }
}
