//! Level-set engine: certified distribution function, decreasing rearrangement
//! and weak-L¹ quasi-norm of a [`PiecewiseFn`].
//!
//! `|f|` is modelled by three kinds of pieces:
//! * constant segments, exact steps;
//! * segments `k / (t + s)` with no constant, exact hyperbolas whose level sets
//!   are solved in closed form;
//! * everything else, cut into dyadic cells carrying bounds `lo <= |f| <= hi`.
//!
//! Replacing every cell by its `lo` (resp. `hi`) gives functions `L <= |f| <= U`,
//! and the quasi-norm, the distribution function and the rearrangement are all
//! monotone in `|f|`. For a mix of steps and hyperbolas `λ·d(λ) = λS + K` is
//! affine between consecutive levels, so each bound is an exact sweep.
//! Cells are bisected where the two bounds disagree.

use dashu_int::ops::{DivRemEuclid, EstimatedLog2, Gcd, UnsignedAbs};
use dashu_int::{IBig, UBig};

use crate::error::{Error, Result};
use crate::numeric::{abs, fmt_pq, is_negative, is_positive, RatInterval, Rational};
use crate::pwfunc::{PiecewiseFn, StepFn};

/// Default cap on cell evaluations per call.
pub const DEFAULT_EVAL_BUDGET: u64 = 1_000_000;

/// Each refinement cuts a cell into `2^SPLIT_BITS` equal children.
const SPLIT_BITS: usize = 2;

/// Fractional bits of the fixed-point cell arithmetic, beyond the local scale.
const CELL_BITS: usize = 96;

/// Precision and effort settings shared by the three level-set queries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Refinement {
    /// Relative width for norms and rearrangements, absolute for distributions.
    pub tol: Rational,
    /// Cell evaluations allowed before giving up with [`Error::Inconclusive`].
    pub max_evals: u64,
}

impl Refinement {
    pub fn new(tol: Rational) -> Result<Self> {
        Refinement { tol, max_evals: DEFAULT_EVAL_BUDGET }.checked()
    }

    pub fn with_budget(mut self, max_evals: u64) -> Self {
        self.max_evals = max_evals;
        self
    }

    fn checked(self) -> Result<Self> {
        if !is_positive(&self.tol) {
            return Err(Error::Parameter(format!("tolerance must be positive, got {}", fmt_pq(&self.tol))));
        }
        Ok(self)
    }

    /// Enclosure of `|{t : |f(t)| > λ}|` of width at most `tol`.
    pub fn distribution(&self, f: &PiecewiseFn, lambda: &Rational) -> Result<RatInterval> {
        if is_negative(lambda) {
            return Err(Error::Parameter(format!("level must be >= 0, got {}", fmt_pq(lambda))));
        }
        let mut model = Model::build(f, self.max_evals)?;
        loop {
            let (lo, hi) = (model.measure_above(lambda, View::Lower), model.measure_above(lambda, View::Upper));
            if &hi - &lo <= self.tol {
                return RatInterval::new(lo, hi);
            }
            let straddling: Vec<(usize, f64)> = model
                .cells
                .iter()
                .enumerate()
                .filter(|(_, c)| &c.lo <= lambda && lambda < &c.hi)
                .map(|(i, c)| (i, model.log2_measure(c)))
                .collect();
            model.refine_heaviest(straddling, "distribution", || RatInterval::new(lo.clone(), hi.clone()))?;
        }
    }

    /// Enclosure of `f*(t)` for `0 < t < 1`, relative width at most `tol`.
    pub fn rearrangement_at(&self, f: &PiecewiseFn, t: &Rational) -> Result<RatInterval> {
        if !is_positive(t) || t >= &Rational::ONE {
            return Err(Error::Domain(format!("rearrangement point {} outside (0, 1)", fmt_pq(t))));
        }
        let mut model = Model::build(f, self.max_evals)?;
        loop {
            let lo = model.rearrange(t, View::Lower);
            let hi = model.rearrange(t, View::Upper);
            if &hi - &lo <= &self.tol * &hi {
                return RatInterval::new(lo, hi);
            }
            let band: Vec<(usize, f64)> = model
                .cells
                .iter()
                .enumerate()
                .filter(|(_, c)| c.lo < hi && c.hi > lo)
                .map(|(i, c)| (i, model.log2_measure(c)))
                .collect();
            model.refine_heaviest(band, "rearrangement", || RatInterval::new(lo.clone(), hi.clone()))?;
        }
    }

    /// Enclosure of `‖f‖_{1,∞} = sup_λ λ·d_f(λ)`, relative width at most `tol`.
    pub fn weak_norm(&self, f: &PiecewiseFn) -> Result<RatInterval> {
        let mut model = Model::build(f, self.max_evals)?;
        let keep = Rational::ONE - &self.tol;
        loop {
            let (lower, _) = model.sweep(View::Lower, None);
            if !is_positive(&keep) {
                // any enclosure [0, hi] already meets the tolerance
                let (upper, _) = model.sweep(View::Upper, None);
                return RatInterval::new(lower, upper);
            }
            let theta = &lower / &keep;
            let (upper, danger) = model.sweep(View::Upper, Some(&theta));
            if model.cells.is_empty() || &upper - &lower <= &self.tol * &upper {
                return RatInterval::new(lower, upper);
            }
            let weight = |c: &Cell| model.log2_measure(c) + c.hi.log2_est() as f64;
            let mut weighted: Vec<(usize, f64)> = model
                .cells
                .iter()
                .enumerate()
                .filter(|(_, c)| danger.meets(&c.lo, &c.hi))
                .map(|(i, c)| (i, weight(c)))
                .collect();
            if weighted.is_empty() {
                weighted = model.cells.iter().enumerate().map(|(i, c)| (i, weight(c))).collect();
            }
            model.refine_heaviest(weighted, "weak norm", || RatInterval::new(lower.clone(), upper.clone()))?;
        }
    }
}

/// [`Refinement::distribution`] with the default budget.
pub fn distribution(f: &PiecewiseFn, lambda: &Rational, tol: &Rational) -> Result<RatInterval> {
    Refinement::new(tol.clone())?.distribution(f, lambda)
}

/// [`Refinement::rearrangement_at`] with the default budget.
pub fn rearrangement_at(f: &PiecewiseFn, t: &Rational, tol: &Rational) -> Result<RatInterval> {
    Refinement::new(tol.clone())?.rearrangement_at(f, t)
}

/// [`Refinement::weak_norm`] with the default budget.
pub fn weak_norm(f: &PiecewiseFn, tol: &Rational) -> Result<RatInterval> {
    Refinement::new(tol.clone())?.weak_norm(f)
}

/// Exact `‖s‖_{1,∞}` of a step function.
pub fn step_norm_exact(s: &StepFn) -> Rational {
    let model = Model::build(s.as_fn(), 0).expect("step functions have no cells or poles");
    model.sweep(View::Lower, None).0
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum View {
    Lower,
    Upper,
}

struct Step {
    level: Rational,
    measure: Rational,
}

/// `k / (t + s)` on `(a, b]`, with `lead = a + s`, `len = b - a`.
/// Its super-level measure at `vmin <= λ < vmax` is `k/λ - lead`.
struct Hyper {
    k: Rational,
    lead: Rational,
    len: Rational,
    vmin: Rational,
    /// `None` for a pole at the left endpoint.
    vmax: Option<Rational>,
}

/// `coeff / (u + sigma)`, stored so that at `u = p / 2^d` it equals
/// `x·2^d / (y1·p + y2·2^d)` with `y1 > 0`, `y2 >= 0`.
struct FixedTerm {
    x: IBig,
    y1: IBig,
    y2: IBig,
    positive: bool,
}

/// A segment in local coordinates `t = a + w·u`, `u ∈ [0, 1]`, where
/// `w·f(t) = cw + Σ coeff / (u + sigma)`.
struct CellSeg {
    width: Rational,
    /// `width` in units of `1 / Model::denom`.
    width_units: IBig,
    log2_width: f64,
    /// `1 / w = inv_num / inv_den`.
    inv_num: IBig,
    inv_den: UBig,
    frac_bits: usize,
    cw_lo: IBig,
    cw_hi: IBig,
    terms: Vec<FixedTerm>,
}

/// `u ∈ [pos / 2^depth, (pos + 1) / 2^depth]` of segment `seg`.
struct Cell {
    seg: usize,
    pos: IBig,
    depth: usize,
    lo: Rational,
    hi: Rational,
}

enum Event {
    Step(usize),
    Cell(usize),
    /// Level `vmax` of a hyperbola: it starts contributing below this level.
    Enter(usize),
    /// Level `vmin`: below it the whole segment counts.
    Full(usize),
}

/// Union of open level intervals where the upper sweep exceeds the threshold,
/// stored ascending as `(l, r)`, `r = None` meaning `+∞`.
#[derive(Default)]
struct Danger(Vec<(Rational, Option<Rational>)>);

impl Danger {
    /// Whether `[lo, hi)` meets the set.
    fn meets(&self, lo: &Rational, hi: &Rational) -> bool {
        let idx = self.0.partition_point(|(_, r)| r.as_ref().is_some_and(|r| r <= lo));
        self.0.get(idx).is_some_and(|(l, _)| l < hi)
    }
}

/// `num / den` with `den > 0`, for gcd-free comparisons.
struct Frac {
    num: IBig,
    den: IBig,
}

impl Frac {
    fn gt(&self, other: &Frac) -> bool {
        &self.num * &other.den > &other.num * &self.den
    }
}

fn floor_div(a: &IBig, b: &IBig) -> IBig {
    a.div_rem_euclid(b).0
}

fn ceil_div(a: &IBig, b: &IBig) -> IBig {
    let (q, r) = a.div_rem_euclid(b);
    if r == UBig::ZERO {
        q
    } else {
        q + IBig::ONE
    }
}

fn num_of(r: &Rational) -> IBig {
    r.numerator().clone()
}

fn den_of(r: &Rational) -> IBig {
    IBig::from(r.denominator().clone())
}

/// Grows `acc` to a common multiple of itself and `den`.
fn lcm_into(acc: &mut UBig, den: &UBig) {
    if (&*acc % den) != UBig::ZERO {
        let g = (&*acc).gcd(den);
        *acc = &*acc / g * den;
    }
}

/// `r · denom`, which the caller guarantees to be an integer.
fn to_units(r: &Rational, denom: &UBig) -> IBig {
    num_of(r) * IBig::from(denom / r.denominator())
}

struct Model {
    steps: Vec<Step>,
    hypers: Vec<Hyper>,
    segs: Vec<CellSeg>,
    cells: Vec<Cell>,
    /// Common denominator of every step, hyperbola and segment width.
    denom: UBig,
    step_units: Vec<IBig>,
    /// `(k, lead, len)` in units of `1 / denom`.
    hyper_units: Vec<(IBig, IBig, IBig)>,
    evals: u64,
    budget: u64,
}

impl Model {
    fn build(f: &PiecewiseFn, budget: u64) -> Result<Model> {
        let mut steps = Vec::new();
        let mut hypers = Vec::new();
        let mut cell_segs = Vec::new();
        for seg in f.segments() {
            let terms = seg.terms();
            if terms.is_empty() {
                steps.push(Step { level: abs(seg.constant()), measure: seg.width() });
            } else if seg.constant().is_zero() && terms.len() == 1 {
                let k = abs(&terms[0].coeff);
                let lead = seg.a() + &terms[0].shift;
                let vmin = &k / (seg.b() + &terms[0].shift);
                let vmax = (!lead.is_zero()).then(|| &k / &lead);
                hypers.push(Hyper { k, lead, len: seg.width(), vmin, vmax });
            } else {
                if seg.has_pole() {
                    return Err(Error::Domain(format!(
                        "segment ({}, {}] is unbounded at its left end and is not a single reciprocal",
                        fmt_pq(seg.a()),
                        fmt_pq(seg.b())
                    )));
                }
                cell_segs.push(seg);
            }
        }

        let mut denom = UBig::ONE;
        for s in &steps {
            lcm_into(&mut denom, s.measure.denominator());
        }
        for h in &hypers {
            for r in [&h.k, &h.lead, &h.len] {
                lcm_into(&mut denom, r.denominator());
            }
        }
        let widths: Vec<Rational> = cell_segs.iter().map(|s| s.width()).collect();
        for w in &widths {
            lcm_into(&mut denom, w.denominator());
        }

        let mut segs = Vec::with_capacity(cell_segs.len());
        for (seg, width) in cell_segs.into_iter().zip(widths) {
            let inv_width = Rational::ONE / &width;
            let cw = seg.constant() * &width;
            let mut log2_mag = if cw.is_zero() { f64::NEG_INFINITY } else { cw.log2_est() as f64 };
            let mut terms = Vec::with_capacity(seg.terms().len());
            for t in seg.terms() {
                let sigma = (seg.a() + &t.shift) * &inv_width;
                let mag = &t.coeff / (&sigma + Rational::ONE);
                log2_mag = log2_mag.max(mag.log2_est() as f64);
                let (cn, cd) = (num_of(&t.coeff), den_of(&t.coeff));
                let (sn, sd) = (num_of(&sigma), den_of(&sigma));
                terms.push(FixedTerm { x: cn * &sd, y1: &cd * sd, y2: cd * sn, positive: is_positive(&t.coeff) });
            }
            let frac_bits = CELL_BITS + (-log2_mag.floor()).max(0.0) as usize;
            let scaled_cw = num_of(&cw) << frac_bits;
            let cw_den = den_of(&cw);
            segs.push(CellSeg {
                width_units: to_units(&width, &denom),
                log2_width: width.log2_est() as f64,
                inv_num: num_of(&inv_width),
                inv_den: inv_width.denominator().clone(),
                frac_bits,
                cw_lo: floor_div(&scaled_cw, &cw_den),
                cw_hi: ceil_div(&scaled_cw, &cw_den),
                terms,
                width,
            });
        }

        let step_units = steps.iter().map(|s| to_units(&s.measure, &denom)).collect();
        let hyper_units = hypers
            .iter()
            .map(|h| (to_units(&h.k, &denom), to_units(&h.lead, &denom), to_units(&h.len, &denom)))
            .collect();
        let mut model =
            Model { steps, hypers, segs, cells: Vec::new(), denom, step_units, hyper_units, evals: 0, budget };
        for idx in 0..model.segs.len() {
            let cell = model.make_cell(idx, IBig::ZERO, 0);
            model.cells.push(cell);
        }
        Ok(model)
    }

    fn make_cell(&mut self, seg: usize, pos: IBig, depth: usize) -> Cell {
        self.evals += 1;
        let s = &self.segs[seg];
        let f = s.frac_bits;
        let one = IBig::ONE << depth;
        let near_pos = pos.clone();
        let far_pos = &pos + IBig::ONE;
        let mut lo = s.cw_lo.clone();
        let mut hi = s.cw_hi.clone();
        for t in &s.terms {
            let num = &t.x << (depth + f);
            let near_den = &t.y1 * &near_pos + &t.y2 * &one;
            let far_den = &t.y1 * &far_pos + &t.y2 * &one;
            if t.positive {
                lo += floor_div(&num, &far_den);
                hi += ceil_div(&num, &near_den);
            } else {
                lo += floor_div(&num, &near_den);
                hi += ceil_div(&num, &far_den);
            }
        }
        let (lo, hi) = if lo >= IBig::ZERO {
            (lo, hi)
        } else if hi <= IBig::ZERO {
            (-hi, -lo)
        } else {
            let top = if -lo.clone() > hi { -lo } else { hi };
            (IBig::ZERO, top)
        };
        let scale = |v: IBig| Rational::from_parts(v * &s.inv_num, &s.inv_den << f);
        Cell { seg, pos, depth, lo: scale(lo), hi: scale(hi) }
    }

    fn cell_measure(&self, c: &Cell) -> Rational {
        &self.segs[c.seg].width / Rational::from(UBig::ONE << c.depth)
    }

    fn log2_measure(&self, c: &Cell) -> f64 {
        self.segs[c.seg].log2_width - c.depth as f64
    }

    fn cell_level<'a>(&self, cell: &'a Cell, view: View) -> &'a Rational {
        match view {
            View::Lower => &cell.lo,
            View::Upper => &cell.hi,
        }
    }

    /// Levels in descending order; zero levels never matter for `λ > 0`.
    fn events(&self, view: View) -> Vec<(&Rational, Event)> {
        let mut evs: Vec<(&Rational, Event)> =
            Vec::with_capacity(self.steps.len() + 2 * self.hypers.len() + self.cells.len());
        evs.extend(self.steps.iter().enumerate().map(|(i, s)| (&s.level, Event::Step(i))));
        for (i, h) in self.hypers.iter().enumerate() {
            if let Some(v) = &h.vmax {
                evs.push((v, Event::Enter(i)));
            }
            evs.push((&h.vmin, Event::Full(i)));
        }
        evs.extend(self.cells.iter().enumerate().map(|(i, c)| (self.cell_level(c, view), Event::Cell(i))));
        evs.retain(|(lvl, _)| is_positive(lvl));
        evs.sort_by(|x, y| y.0.cmp(x.0));
        evs
    }

    /// `(S, K)` above every level: only poles contribute, each as `k/λ`.
    fn initial_state(&self) -> (Rational, Rational) {
        let k = self.hypers.iter().filter(|h| h.vmax.is_none()).fold(Rational::ZERO, |acc, h| acc + &h.k);
        (Rational::ZERO, k)
    }

    fn apply(&self, ev: &Event, s: &mut Rational, k: &mut Rational) {
        match *ev {
            Event::Step(i) => *s += &self.steps[i].measure,
            Event::Cell(i) => *s += self.cell_measure(&self.cells[i]),
            Event::Enter(i) => {
                *s -= &self.hypers[i].lead;
                *k += &self.hypers[i].k;
            }
            Event::Full(i) => {
                let h = &self.hypers[i];
                *s += &h.lead + &h.len;
                *k -= &h.k;
            }
        }
    }

    /// `sup_λ λ·d(λ)` for the chosen bound and, given a threshold, the levels
    /// where the sweep may exceed it. Measures are integers over
    /// `denom · 2^depth`, so the sweep needs no gcds.
    fn sweep(&self, view: View, theta: Option<&Rational>) -> (Rational, Danger) {
        let evs = self.events(view);
        let depth = self.cells.iter().map(|c| c.depth).max().unwrap_or(0);
        let unit_den = IBig::from(self.denom.clone()) << depth;
        let steps: Vec<IBig> = self.step_units.iter().map(|m| m << depth).collect();
        let hypers: Vec<(IBig, IBig, IBig)> =
            self.hyper_units.iter().map(|(k, l, n)| (k << depth, l << depth, n << depth)).collect();
        let cells: Vec<IBig> = self.cells.iter().map(|c| &self.segs[c.seg].width_units << (depth - c.depth)).collect();
        // λ·d(λ)·unit_den > θ·unit_den  ⇔  num·θ_den > θ_num·unit_den·den
        let threshold = theta.map(|th| Frac { num: num_of(th) * &unit_den, den: den_of(th) });

        let mut s = IBig::ZERO;
        let mut k = self
            .hypers
            .iter()
            .zip(&hypers)
            .filter(|(h, _)| h.vmax.is_none())
            .fold(IBig::ZERO, |acc, (_, u)| acc + &u.0);
        let mut best = Frac { num: k.clone(), den: IBig::ONE };
        let mut danger: Vec<(Rational, Option<Rational>)> = Vec::new();
        let mut prev: Option<&Rational> = None;
        let mut below_prev = Frac { num: k.clone(), den: IBig::ONE };
        let mut mark = |lo: &Rational, hi: Option<&Rational>, a: Frac, b: &Frac, best: &mut Frac| {
            let top = if a.gt(b) { a } else { Frac { num: b.num.clone(), den: b.den.clone() } };
            if threshold.as_ref().is_some_and(|th| top.gt(th)) {
                danger.push((lo.clone(), hi.cloned()));
            }
            if top.gt(best) {
                *best = top;
            }
        };
        let mut i = 0;
        while i < evs.len() {
            let beta = evs[i].0;
            let (p, q) = (num_of(beta), den_of(beta));
            let above = Frac { num: &p * &s + &q * &k, den: q.clone() };
            mark(beta, prev, above, &below_prev, &mut best);
            while i < evs.len() && evs[i].0 == beta {
                match evs[i].1 {
                    Event::Step(j) => s += &steps[j],
                    Event::Cell(j) => s += &cells[j],
                    Event::Enter(j) => {
                        s -= &hypers[j].1;
                        k += &hypers[j].0;
                    }
                    Event::Full(j) => {
                        s += &hypers[j].1 + &hypers[j].2;
                        k -= &hypers[j].0;
                    }
                }
                i += 1;
            }
            below_prev = Frac { num: &p * &s + &q * &k, den: q };
            prev = Some(beta);
        }
        // on (0, β_min) the measure is the constant S, so λ·d is at most β_min·S
        mark(&Rational::ZERO, prev, Frac { num: k, den: IBig::ONE }, &below_prev, &mut best);
        danger.reverse();
        let den = best.den * unit_den;
        let value = Rational::from_parts(best.num, den.unsigned_abs());
        (value, Danger(merge_intervals(danger)))
    }

    /// `|{L > λ}|` or `|{U > λ}|`.
    fn measure_above(&self, lambda: &Rational, view: View) -> Rational {
        let mut total = Rational::ZERO;
        for s in &self.steps {
            if &s.level > lambda {
                total += &s.measure;
            }
        }
        for h in &self.hypers {
            if h.vmax.as_ref().is_some_and(|v| lambda >= v) {
                continue;
            }
            if lambda < &h.vmin {
                total += &h.len;
            } else {
                total += &h.k / lambda - &h.lead;
            }
        }
        for c in &self.cells {
            if self.cell_level(c, view) > lambda {
                total += self.cell_measure(c);
            }
        }
        total
    }

    /// Rearrangement at `t` of the chosen bound: `inf{λ : d(λ) <= t}`.
    fn rearrange(&self, t: &Rational, view: View) -> Rational {
        let evs = self.events(view);
        let (mut s, mut k) = self.initial_state();
        let mut prev: Option<&Rational> = None;
        let mut i = 0;
        while i < evs.len() {
            let beta = evs[i].0;
            // on [β, prev) the measure is S + K/λ, decreasing in λ
            let d_beta = &s + &k / beta;
            if &d_beta > t {
                if is_positive(&k) && t > &s {
                    let root = &k / (t - &s);
                    return match prev {
                        Some(p) if &root > p => p.clone(),
                        _ => root,
                    };
                }
                return prev.cloned().unwrap_or_else(|| beta.clone());
            }
            while i < evs.len() && evs[i].0 == beta {
                self.apply(&evs[i].1, &mut s, &mut k);
                i += 1;
            }
            prev = Some(beta);
        }
        match prev {
            Some(p) if &s > t => p.clone(),
            _ => Rational::ZERO,
        }
    }

    /// Splits every candidate whose log-weight is within 3 of the largest.
    fn refine_heaviest<F>(&mut self, mut candidates: Vec<(usize, f64)>, what: &str, best: F) -> Result<()>
    where
        F: Fn() -> Result<RatInterval>,
    {
        if candidates.is_empty() {
            return Err(Error::Inconclusive {
                what: format!("{what}: no refinable cell"),
                best: Box::new(best()?),
                evaluations: self.evals,
            });
        }
        let max = candidates.iter().map(|(_, w)| *w).fold(f64::NEG_INFINITY, f64::max);
        candidates.retain(|(_, w)| *w >= max - 3.0);
        let children = 1usize << SPLIT_BITS;
        if self.evals + (children * candidates.len()) as u64 > self.budget {
            return Err(Error::Inconclusive {
                what: what.to_string(),
                best: Box::new(best()?),
                evaluations: self.evals,
            });
        }
        for (idx, _) in candidates {
            let (seg, pos, depth) = {
                let c = &self.cells[idx];
                (c.seg, c.pos.clone(), c.depth + SPLIT_BITS)
            };
            let first = pos << SPLIT_BITS;
            for child in 0..children {
                let cell = self.make_cell(seg, &first + IBig::from(child), depth);
                if child == 0 {
                    self.cells[idx] = cell;
                } else {
                    self.cells.push(cell);
                }
            }
        }
        Ok(())
    }
}

/// Merges ascending, possibly touching intervals.
fn merge_intervals(items: Vec<(Rational, Option<Rational>)>) -> Vec<(Rational, Option<Rational>)> {
    let mut out: Vec<(Rational, Option<Rational>)> = Vec::with_capacity(items.len());
    for (l, r) in items {
        if let Some(last) = out.last_mut() {
            let joins = last.1.as_ref().is_none_or(|lr| lr >= &l);
            if joins {
                last.1 = match (last.1.take(), r) {
                    (Some(a), Some(b)) => Some(if a > b { a } else { b }),
                    _ => None,
                };
                continue;
            }
        }
        out.push((l, r));
    }
    out
}
