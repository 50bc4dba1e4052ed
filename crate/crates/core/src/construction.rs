//! The witness functions.
//!
//! For a base `n >= 2` let `N = n - 1` and `M = 2^N`. Scale `k` lives on the
//! block `(n^-k, n^-(k-1)]`, cut into `N` sub-blocks `(i/n^k, (i+1)/n^k]`.
//! `f_k1 = 1/t` on the block and `f_ki` is its cyclic rotation whose peak sits
//! just right of `i/n^k`; `F_k = Σ_i f_ki`. The vectors `g_j` put the
//! rotation `j` of every scale `m = 1..M` side by side, signed by column `j`
//! of the sign matrix, so that every signed sum `Σ η_j g_j` contains one block
//! equal to some `F_m`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::{fmt_pq, int, ln_int, pow_int, rat, Rational};
use crate::pwfunc::{HyperTerm, PiecewiseFn, Segment, StepFn};

/// Default cap on the bit length of `n^M`.
pub const DEFAULT_BIT_BUDGET: u64 = 65_536;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstructionParams {
    n: u64,
    bit_budget: u64,
}

impl ConstructionParams {
    pub fn new(n: u64) -> Result<Self> {
        Self::with_bit_budget(n, DEFAULT_BIT_BUDGET)
    }

    /// Rejects `n < 2` and bases whose innermost grid `n^-M` exceeds the budget.
    pub fn with_bit_budget(n: u64, bit_budget: u64) -> Result<Self> {
        if n < 2 {
            return Err(Error::Parameter(format!("base n must be >= 2, got {n}")));
        }
        if n > 63 {
            return Err(Error::Size(format!("2^(n-1) scales overflow for n = {n}")));
        }
        let m = 1u64 << (n - 1);
        let bits = m.saturating_mul(64 - n.leading_zeros() as u64);
        if bits > bit_budget {
            return Err(Error::Size(format!("n^M = {n}^{m} needs about {bits} bits, over the budget of {bit_budget}")));
        }
        Ok(ConstructionParams { n, bit_budget })
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    /// Number of vectors, `N = n - 1`.
    pub fn count(&self) -> usize {
        (self.n - 1) as usize
    }

    /// Number of scales and sign rows, `M = 2^N`.
    pub fn scales(&self) -> usize {
        1usize << (self.n - 1)
    }

    pub fn bit_budget(&self) -> u64 {
        self.bit_budget
    }

    /// `n^-k`.
    pub fn grid(&self, k: usize) -> Rational {
        Rational::ONE / pow_int(self.n, k)
    }

    /// Innermost endpoint `n^-M` of the support of every `g_j`.
    pub fn inner_endpoint(&self) -> Rational {
        self.grid(self.scales())
    }

    fn check_scale(&self, k: usize) -> Result<()> {
        if k == 0 {
            return Err(Error::Parameter("scale index k must be >= 1".into()));
        }
        let bits = (k as u64).saturating_mul(64 - self.n.leading_zeros() as u64);
        if bits > self.bit_budget {
            return Err(Error::Size(format!("scale {k} needs about {bits} bits")));
        }
        Ok(())
    }

    fn check_index(&self, i: usize, what: &str) -> Result<()> {
        if i == 0 || i > self.count() {
            return Err(Error::Parameter(format!("{what} = {i} outside 1..={}", self.count())));
        }
        Ok(())
    }

    fn check_row(&self, m: usize) -> Result<()> {
        if m == 0 || m > self.scales() {
            return Err(Error::Parameter(format!("scale m = {m} outside 1..={}", self.scales())));
        }
        Ok(())
    }
}

/// `±1` entries.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<i8>", into = "Vec<i8>")]
pub struct SignVector(Vec<i8>);

impl SignVector {
    pub fn new(entries: Vec<i8>) -> Result<Self> {
        if let Some(bad) = entries.iter().find(|e| **e != 1 && **e != -1) {
            return Err(Error::Parameter(format!("sign entries must be +1 or -1, got {bad}")));
        }
        Ok(SignVector(entries))
    }

    pub fn all_plus(len: usize) -> Self {
        SignVector(vec![1; len])
    }

    /// Entry `j` is `-1` exactly when bit `j` of `code` is set.
    pub fn from_bits(code: u64, len: usize) -> Self {
        SignVector((0..len).map(|j| if code >> j & 1 == 1 { -1 } else { 1 }).collect())
    }

    /// Inverse of [`SignVector::from_bits`].
    pub fn to_bits(&self) -> u64 {
        self.0.iter().enumerate().filter(|(_, e)| **e < 0).fold(0, |acc, (j, _)| acc | 1 << j)
    }

    pub fn entries(&self) -> &[i8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn negated(&self) -> SignVector {
        SignVector(self.0.iter().map(|e| -e).collect())
    }

    /// Entrywise product.
    pub fn times(&self, other: &SignVector) -> SignVector {
        SignVector(self.0.iter().zip(&other.0).map(|(a, b)| a * b).collect())
    }

    /// `"+-+"` style rendering.
    pub fn compact(&self) -> String {
        self.0.iter().map(|e| if *e > 0 { '+' } else { '-' }).collect()
    }
}

impl TryFrom<Vec<i8>> for SignVector {
    type Error = Error;

    fn try_from(v: Vec<i8>) -> Result<Self> {
        SignVector::new(v)
    }
}

impl From<SignVector> for Vec<i8> {
    fn from(v: SignVector) -> Vec<i8> {
        v.0
    }
}

/// All `2^N` sign rows in binary counting order; row 1 is all-plus.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignMatrix {
    rows: Vec<SignVector>,
}

impl SignMatrix {
    /// Row `m` (1-based).
    pub fn row(&self, m: usize) -> &SignVector {
        &self.rows[m - 1]
    }

    pub fn rows(&self) -> &[SignVector] {
        &self.rows
    }

    /// Index of the all-plus row.
    pub fn m0(&self) -> usize {
        1
    }

    /// `ε_j^m` as a rational.
    pub fn sign(&self, m: usize, j: usize) -> Rational {
        int(self.rows[m - 1].0[j - 1] as i64)
    }
}

pub fn make_sign_matrix(p: &ConstructionParams) -> SignMatrix {
    let rows = (0..p.scales() as u64).map(|code| SignVector::from_bits(code, p.count())).collect();
    SignMatrix { rows }
}

/// Segments of `c · f_ki`.
fn f_segments(p: &ConstructionParams, k: usize, i: usize, c: &Rational) -> Result<Vec<Segment>> {
    let h = p.grid(k);
    let lo = h.clone();
    let split = &h * int(i as i64);
    let hi = p.grid(k - 1);
    let mut segs = Vec::with_capacity(2);
    if i > 1 {
        let shift = &hi - &split;
        segs.push(Segment::new(lo, split.clone(), Rational::ZERO, vec![HyperTerm::new(c.clone(), shift)])?);
    }
    let shift = -(&h * int(i as i64 - 1));
    segs.push(Segment::new(split, hi, Rational::ZERO, vec![HyperTerm::new(c.clone(), shift)])?);
    Ok(segs)
}

pub fn make_f_ki(p: &ConstructionParams, k: usize, i: usize) -> Result<PiecewiseFn> {
    p.check_scale(k)?;
    p.check_index(i, "rotation i")?;
    PiecewiseFn::new(f_segments(p, k, i, &Rational::ONE)?)
}

/// `Σ_i f_ki` through exact addition.
#[allow(non_snake_case)]
pub fn make_F_k(p: &ConstructionParams, k: usize) -> Result<PiecewiseFn> {
    let mut acc = PiecewiseFn::zero();
    for i in 1..=p.count() {
        acc = acc.add(&make_f_ki(p, k, i)?);
    }
    Ok(acc)
}

/// Segments of `Σ_j coeffs[j-1] · f_kj`, written sub-block by sub-block.
/// On `(i/n^k, (i+1)/n^k]` the term of `f_kj` is `1/(t + (σ - i)/n^k)` with
/// `σ = i - j + 1` for `j <= i` and `σ = n + i - j` for `j > i`.
fn block_segments(p: &ConstructionParams, k: usize, coeffs: &[Rational]) -> Result<Vec<Segment>> {
    let h = p.grid(k);
    let n = p.n as i64;
    let mut segs = Vec::with_capacity(p.count());
    for i in 1..=p.count() as i64 {
        let terms = coeffs
            .iter()
            .zip(1i64..)
            .map(|(c, j)| {
                let sigma = if j <= i { i - j + 1 } else { n + i - j };
                HyperTerm::new(c.clone(), &h * int(sigma - i))
            })
            .collect();
        segs.push(Segment::new(&h * int(i), &h * int(i + 1), Rational::ZERO, terms)?);
    }
    Ok(segs)
}

/// `F_k` from its closed form: on `(i/n^k, (i+1)/n^k]` it is
/// `Σ_{j=1..N} 1/(t + (j - i)/n^k)`.
#[allow(non_snake_case)]
pub fn make_F_k_closed(p: &ConstructionParams, k: usize) -> Result<PiecewiseFn> {
    p.check_scale(k)?;
    let h = p.grid(k);
    let mut segs = Vec::with_capacity(p.count());
    for i in 1..=p.count() as i64 {
        let terms = (1..=p.count() as i64).map(|j| HyperTerm::unit(&h * int(j - i))).collect();
        segs.push(Segment::new(&h * int(i), &h * int(i + 1), Rational::ZERO, terms)?);
    }
    PiecewiseFn::new(segs)
}

/// `G_m = Σ_j ε_j^m f_mj`.
#[allow(non_snake_case)]
pub fn make_G_m(p: &ConstructionParams, m: usize, e: &SignMatrix) -> Result<PiecewiseFn> {
    p.check_row(m)?;
    let coeffs: Vec<Rational> = (1..=p.count()).map(|j| e.sign(m, j)).collect();
    PiecewiseFn::new(block_segments(p, m, &coeffs)?)
}

/// `g_j = Σ_m ε_j^m f_mj`, supported on `(n^-M, 1]`.
pub fn make_g(p: &ConstructionParams, j: usize, e: &SignMatrix) -> Result<PiecewiseFn> {
    p.check_index(j, "vector index j")?;
    let mut segs = Vec::with_capacity(2 * p.scales());
    for m in 1..=p.scales() {
        segs.extend(f_segments(p, m, j, &e.sign(m, j))?);
    }
    PiecewiseFn::new(segs)
}

fn check_eta(p: &ConstructionParams, eta: &SignVector) -> Result<()> {
    if eta.len() != p.count() {
        return Err(Error::Parameter(format!("sign vector has {} entries, expected {}", eta.len(), p.count())));
    }
    Ok(())
}

/// `Σ_j η_j g_j` through exact addition of the `g_j`.
pub fn combine_signs(p: &ConstructionParams, eta: &SignVector, e: &SignMatrix) -> Result<PiecewiseFn> {
    check_eta(p, eta)?;
    let mut acc = PiecewiseFn::zero();
    for j in 1..=p.count() {
        acc = acc.add(&make_g(p, j, e)?.scale(&int(eta.0[j - 1] as i64)));
    }
    Ok(acc)
}

/// `Σ_m Σ_j α_j^m f_mj` with `α_j^m = η_j ε_j^m`, built block by block.
pub fn combine_blockwise(p: &ConstructionParams, eta: &SignVector, e: &SignMatrix) -> Result<PiecewiseFn> {
    check_eta(p, eta)?;
    let mut segs = Vec::with_capacity(p.scales() * p.count());
    for m in 1..=p.scales() {
        let alpha = eta.times(e.row(m));
        let coeffs: Vec<Rational> = alpha.0.iter().map(|a| int(*a as i64)).collect();
        segs.extend(block_segments(p, m, &coeffs)?);
    }
    PiecewiseFn::new(segs)
}

/// `Σ_m level_m · χ_(n^-m, n^-(m-1)]` with `level_m = n^m · lnn_hi`, a step
/// majorant for the `ln n` sandwich of each `F_m`.
pub fn make_step_majorant(p: &ConstructionParams, lnn_hi: &Rational) -> Result<StepFn> {
    certify_ln_upper(p.n, lnn_hi)?;
    let pieces = (1..=p.scales()).map(|m| (p.grid(m), p.grid(m - 1), pow_int(p.n, m) * lnn_hi));
    StepFn::new(pieces)
}

/// Refines `ln n` until it is certainly `<= bound`, or certainly not.
fn certify_ln_upper(n: u64, bound: &Rational) -> Result<()> {
    for bits in [64usize, 128, 256, 512, 1024] {
        let eps = Rational::ONE / pow_int(2, bits);
        let ln = ln_int(n, &eps)?;
        if ln.hi() <= bound {
            return Ok(());
        }
        if ln.lo() > bound {
            break;
        }
    }
    Err(Error::Parameter(format!("{} is not a certified upper bound for ln {n}", fmt_pq(bound))))
}

/// The vectors `g_1..g_N` of one base, with their sign matrix.
#[derive(Debug, Clone)]
pub struct Family {
    params: ConstructionParams,
    signs: SignMatrix,
    vectors: Vec<PiecewiseFn>,
}

impl Family {
    pub fn new(params: ConstructionParams) -> Result<Self> {
        let signs = make_sign_matrix(&params);
        let vectors = (1..=params.count()).map(|j| make_g(&params, j, &signs)).collect::<Result<_>>()?;
        Ok(Family { params, signs, vectors })
    }

    /// Family of `N` vectors, built with base `n = N + 1`.
    pub fn of_size(count: u64) -> Result<Self> {
        Family::new(ConstructionParams::new(count + 1)?)
    }

    pub fn params(&self) -> &ConstructionParams {
        &self.params
    }

    pub fn signs(&self) -> &SignMatrix {
        &self.signs
    }

    pub fn vectors(&self) -> &[PiecewiseFn] {
        &self.vectors
    }

    /// `Σ_j η_j g_j`, built block by block.
    pub fn combine(&self, eta: &SignVector) -> Result<PiecewiseFn> {
        combine_blockwise(&self.params, eta, &self.signs)
    }
}

/// Exact `‖g_j‖_{1,∞} = 1 - n^-M`.
pub fn unit_norm_value(p: &ConstructionParams) -> Rational {
    Rational::ONE - p.inner_endpoint()
}

/// Exact `g_j*(t) = 1/(t + n^-M)` on `(0, 1 - n^-M]`, zero beyond.
pub fn gstar_value(p: &ConstructionParams, t: &Rational) -> Rational {
    let inner = p.inner_endpoint();
    if t <= &(Rational::ONE - &inner) {
        Rational::ONE / (t + inner)
    } else {
        Rational::ZERO
    }
}

/// Exact `‖F_k‖_{1,∞} = (n - 1)(H_n - 1)`, independent of `k`.
pub fn block_norm_value(p: &ConstructionParams) -> Rational {
    let harmonic_tail = (2..=p.n as i64).fold(Rational::ZERO, |acc, d| acc + rat(1, d as u64));
    int(p.count() as i64) * harmonic_tail
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(n: u64) -> ConstructionParams {
        ConstructionParams::new(n).unwrap()
    }

    #[test]
    fn params_validation() {
        assert!(ConstructionParams::new(1).is_err());
        let p = params(10);
        assert_eq!((p.count(), p.scales()), (9, 512));
        assert!(matches!(ConstructionParams::new(20), Err(Error::Size(_))));
        assert!(ConstructionParams::with_bit_budget(10, 1000).is_err());
    }

    #[test]
    fn f_ki_examples() {
        let p = params(3);
        let f = make_f_ki(&p, 1, 1).unwrap();
        assert_eq!(f.segments().len(), 1);
        assert_eq!(f.eval_exact(&rat(1, 2)).unwrap(), int(2));
        let f = make_f_ki(&p, 1, 2).unwrap();
        assert_eq!(f.segments().len(), 2);
        assert_eq!(f.eval_exact(&rat(1, 2)).unwrap(), rat(6, 5));
        assert_eq!(f.support_hull(), Some((rat(1, 3), int(1))));
        assert!(make_f_ki(&p, 1, 3).is_err());
        assert!(make_f_ki(&p, 0, 1).is_err());
    }

    #[test]
    fn f_k_forms_agree() {
        let p = params(3);
        let a = make_F_k(&p, 1).unwrap();
        let b = make_F_k_closed(&p, 1).unwrap();
        assert_eq!(a.eval_exact(&rat(1, 2)).unwrap(), rat(16, 5));
        assert_eq!(b.eval_exact(&rat(1, 2)).unwrap(), rat(16, 5));
        assert_eq!(a, b);
    }

    #[test]
    fn sign_matrix_order() {
        let e = make_sign_matrix(&params(3));
        let rows: Vec<String> = e.rows().iter().map(SignVector::compact).collect();
        assert_eq!(rows, ["++", "-+", "+-", "--"]);
        let e = make_sign_matrix(&params(2));
        assert_eq!(e.rows().iter().map(SignVector::compact).collect::<Vec<_>>(), ["+", "-"]);
    }

    #[test]
    fn g_support_and_unit_value() {
        let p = params(3);
        let e = make_sign_matrix(&p);
        let g = make_g(&p, 1, &e).unwrap();
        assert_eq!(g.support_hull(), Some((rat(1, 81), int(1))));
        assert_eq!(unit_norm_value(&p), rat(80, 81));
        assert_eq!(gstar_value(&p, &rat(1, 4)), rat(324, 85));
        assert_eq!(gstar_value(&params(4), &rat(1, 2)), rat(65536, 32769));
    }

    #[test]
    fn g_m_example() {
        let p = params(3);
        let e = make_sign_matrix(&p);
        let g = make_G_m(&p, 2, &e).unwrap();
        let t = rat(5, 27);
        let want = -make_f_ki(&p, 2, 1).unwrap().eval_exact(&t).unwrap()
            + make_f_ki(&p, 2, 2).unwrap().eval_exact(&t).unwrap();
        assert_eq!(g.eval_exact(&t).unwrap(), want);
    }

    #[test]
    fn both_combinations_match() {
        let p = params(4);
        let e = make_sign_matrix(&p);
        for code in 0..8 {
            let eta = SignVector::from_bits(code, 3);
            assert_eq!(combine_signs(&p, &eta, &e).unwrap(), combine_blockwise(&p, &eta, &e).unwrap());
        }
        assert!(combine_signs(&p, &SignVector::all_plus(2), &e).is_err());
    }

    #[test]
    fn majorant_rejects_uncertified_bound() {
        let p = params(3);
        assert!(make_step_majorant(&p, &rat(11, 10)).is_ok());
        assert!(matches!(make_step_majorant(&p, &int(1)), Err(Error::Parameter(_))));
    }

    #[test]
    fn block_norm_closed_form() {
        // (n-1)(H_n - 1) at n = 10 is 9 · 4861/2520
        assert_eq!(block_norm_value(&params(10)), rat(43749, 2520));
    }
}
