//! Exact rationals, rational intervals and certified logarithms.
//!
//! Every quantity in the crate is an exact [`Rational`]. Irrational values
//! (logarithms, norms that are only known up to refinement) are carried as a
//! [`RatInterval`] that is guaranteed to contain the true value. Comparisons
//! between enclosures go through [`cmp_certified`], which refuses to decide
//! when the intervals overlap.

use std::cmp::Ordering;
use std::fmt;

use dashu_int::ops::BitTest;
use dashu_int::{IBig, Sign, UBig};
use dashu_ratio::RBig;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Arbitrary-precision rational, always stored in lowest terms with a
/// positive denominator.
pub type Rational = RBig;

pub fn int(v: i64) -> Rational {
    Rational::from(v)
}

/// `num / den` in canonical form. Panics on a zero denominator.
pub fn rat(num: i64, den: u64) -> Rational {
    assert!(den != 0, "zero denominator");
    Rational::from_parts(IBig::from(num), UBig::from(den))
}

/// `base^exp` as an exact integer rational.
pub fn pow_int(base: u64, exp: usize) -> Rational {
    Rational::from(IBig::from(UBig::from(base).pow(exp)))
}

/// `base^(-exp)`.
pub fn inv_pow_int(base: u64, exp: usize) -> Rational {
    Rational::from_parts(IBig::ONE, UBig::from(base).pow(exp))
}

pub fn abs(x: &Rational) -> Rational {
    if x.sign() == Sign::Negative {
        -x.clone()
    } else {
        x.clone()
    }
}

pub fn is_negative(x: &Rational) -> bool {
    x.sign() == Sign::Negative && !x.is_zero()
}

pub fn is_positive(x: &Rational) -> bool {
    x.sign() == Sign::Positive && !x.is_zero()
}

pub fn min_rat<'a>(a: &'a Rational, b: &'a Rational) -> &'a Rational {
    if a <= b {
        a
    } else {
        b
    }
}

pub fn max_rat<'a>(a: &'a Rational, b: &'a Rational) -> &'a Rational {
    if a >= b {
        a
    } else {
        b
    }
}

/// Parses `"p/q"`, `"p"` or a plain decimal such as `"0.25"` / `"1e-6"`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    if s.is_empty() {
        return Err(Error::Parse("empty rational".into()));
    }
    if let Some((p, q)) = s.split_once('/') {
        let p: IBig = p.trim().parse().map_err(|_| Error::Parse(format!("bad numerator in {s:?}")))?;
        let q: IBig = q.trim().parse().map_err(|_| Error::Parse(format!("bad denominator in {s:?}")))?;
        if q == IBig::ZERO {
            return Err(Error::Parse(format!("zero denominator in {s:?}")));
        }
        let (sign, mag) = q.into_parts();
        return Ok(Rational::from_parts(p * IBig::from(sign * 1i8), mag));
    }
    parse_decimal(s)
}

fn parse_decimal(s: &str) -> Result<Rational> {
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i64>().map_err(|_| bad())?),
        None => (s, 0),
    };
    let (neg, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (whole, frac) = digits.split_once('.').unwrap_or((digits, ""));
    if whole.is_empty() && frac.is_empty() {
        return Err(bad());
    }
    if !whole.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let joined = format!("{whole}{frac}");
    let mag: UBig = if joined.is_empty() { UBig::ZERO } else { joined.parse().map_err(|_| bad())? };
    let scale = exp - frac.len() as i64;
    let mut value = Rational::from(IBig::from(mag));
    if scale >= 0 {
        value *= pow_int(10, scale as usize);
    } else {
        value *= inv_pow_int(10, (-scale) as usize);
    }
    Ok(if neg { -value } else { value })
}

/// Canonical `"p/q"` rendering; integers keep the `/1`.
pub fn fmt_pq(r: &Rational) -> String {
    format!("{}/{}", r.numerator(), r.denominator())
}

fn ubig_bits(x: &UBig) -> usize {
    x.bit_len()
}

fn ibig_mag(x: &IBig) -> UBig {
    x.clone().into_parts().1
}

/// Decimal rendering with `digits` significant digits (truncated toward
/// zero). Scientific notation outside `[1e-4, 1e15)`. Presentation only.
pub fn to_decimal(r: &Rational, digits: usize) -> String {
    let digits = digits.max(1);
    if r.is_zero() {
        return "0".to_string();
    }
    let neg = is_negative(r);
    let x = abs(r);
    let p = ibig_mag(x.numerator());
    let q = x.denominator().clone();
    // 10^e <= x < 10^(e+1)
    let bits = ubig_bits(&p) as i64 - ubig_bits(&q) as i64;
    let mut e = ((bits as f64) * std::f64::consts::LOG10_2).floor() as i64 - 1;
    let ten_pow = |k: i64| -> Rational {
        if k >= 0 {
            pow_int(10, k as usize)
        } else {
            inv_pow_int(10, (-k) as usize)
        }
    };
    while ten_pow(e + 1) <= x {
        e += 1;
    }
    while ten_pow(e) > x {
        e -= 1;
    }
    let scaled = &x * ten_pow(digits as i64 - 1 - e);
    let mantissa = scaled.floor().to_string();
    let sign = if neg { "-" } else { "" };
    if (-4..15).contains(&e) {
        let point = e + 1;
        let body = if point <= 0 {
            format!("0.{}{}", "0".repeat((-point) as usize), mantissa)
        } else if point as usize >= mantissa.len() {
            format!("{}{}", mantissa, "0".repeat(point as usize - mantissa.len()))
        } else {
            format!("{}.{}", &mantissa[..point as usize], &mantissa[point as usize..])
        };
        let body = if body.contains('.') { body.trim_end_matches('0').trim_end_matches('.').to_string() } else { body };
        format!("{sign}{body}")
    } else {
        let (head, tail) = mantissa.split_at(1);
        let tail = tail.trim_end_matches('0');
        if tail.is_empty() {
            format!("{sign}{head}e{e}")
        } else {
            format!("{sign}{head}.{tail}e{e}")
        }
    }
}

/// Largest dyadic `m / 2^k` with about `bits` significant bits that is `<= x`.
pub fn round_down(x: &Rational, bits: usize) -> Rational {
    match x.sign() {
        _ if x.is_zero() => Rational::ZERO,
        Sign::Negative => -round_up(&-x.clone(), bits),
        Sign::Positive => round_positive(x, bits, false),
    }
}

/// Smallest dyadic `m / 2^k` with about `bits` significant bits that is `>= x`.
/// Nearest double on the requested side of `x`.
pub fn to_f64_directed(x: &Rational, up: bool) -> f64 {
    let approx = x.to_f64();
    let v = approx.value();
    match x.to_f64().error() {
        Some(Sign::Positive) if !up => v.next_down(),
        Some(Sign::Negative) if up => v.next_up(),
        _ => v,
    }
}

pub fn round_up(x: &Rational, bits: usize) -> Rational {
    match x.sign() {
        _ if x.is_zero() => Rational::ZERO,
        Sign::Negative => -round_down(&-x.clone(), bits),
        Sign::Positive => round_positive(x, bits, true),
    }
}

fn round_positive(x: &Rational, bits: usize, up: bool) -> Rational {
    let p = ibig_mag(x.numerator());
    let q = x.denominator().clone();
    let shift = bits as i64 - (ubig_bits(&p) as i64 - ubig_bits(&q) as i64);
    if shift <= 0 {
        // x already has at most `bits` integer bits; keep integers exact
        if q == UBig::ONE {
            return x.clone();
        }
    }
    let (num, den) = if shift >= 0 { (p << shift as usize, q) } else { (p, q << (-shift) as usize) };
    let (quot, rem) = (&num / &den, &num % &den);
    let m = if up && rem != UBig::ZERO { quot + UBig::ONE } else { quot };
    let m = Rational::from(IBig::from(m));
    if shift >= 0 {
        m / pow_int(2, shift as usize)
    } else {
        m * pow_int(2, (-shift) as usize)
    }
}

pub mod serde_pq {
    //! `#[serde(with = "serde_pq")]` for a [`Rational`](super::Rational) as `"p/q"`.
    use super::*;

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&fmt_pq(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(serde::de::Error::custom)
    }
}

pub mod serde_pq_vec {
    //! Vectors of rationals as JSON lists of `"p/q"` strings.
    use super::*;

    pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(fmt_pq))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<Rational>, D::Error> {
        let raw = Vec::<String>::deserialize(d)?;
        raw.iter().map(|s| parse_rational(s).map_err(serde::de::Error::custom)).collect()
    }
}

/// Closed interval `[lo, hi]` of rationals, `lo <= hi`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatInterval {
    lo: Rational,
    hi: Rational,
}

impl RatInterval {
    pub fn new(lo: Rational, hi: Rational) -> Result<Self> {
        if lo > hi {
            return Err(Error::Parameter(format!("interval [{}, {}] is reversed", fmt_pq(&lo), fmt_pq(&hi))));
        }
        Ok(RatInterval { lo, hi })
    }

    /// Builds the interval from two endpoints in either order.
    pub fn spanning(a: Rational, b: Rational) -> Self {
        if a <= b {
            RatInterval { lo: a, hi: b }
        } else {
            RatInterval { lo: b, hi: a }
        }
    }

    pub fn point(x: Rational) -> Self {
        RatInterval { lo: x.clone(), hi: x }
    }

    pub fn zero() -> Self {
        Self::point(Rational::ZERO)
    }

    pub fn lo(&self) -> &Rational {
        &self.lo
    }

    pub fn hi(&self) -> &Rational {
        &self.hi
    }

    pub fn into_bounds(self) -> (Rational, Rational) {
        (self.lo, self.hi)
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn mid(&self) -> Rational {
        (&self.lo + &self.hi) / int(2)
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, x: &Rational) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    /// `other ⊆ self`.
    pub fn contains_interval(&self, other: &RatInterval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn intersects(&self, other: &RatInterval) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    pub fn hull(&self, other: &RatInterval) -> RatInterval {
        RatInterval { lo: min_rat(&self.lo, &other.lo).clone(), hi: max_rat(&self.hi, &other.hi).clone() }
    }

    /// Widens both endpoints by `slack >= 0`.
    pub fn widen(&self, slack: &Rational) -> RatInterval {
        RatInterval { lo: &self.lo - slack, hi: &self.hi + slack }
    }

    pub fn add(&self, other: &RatInterval) -> RatInterval {
        RatInterval { lo: &self.lo + &other.lo, hi: &self.hi + &other.hi }
    }

    pub fn sub(&self, other: &RatInterval) -> RatInterval {
        RatInterval { lo: &self.lo - &other.hi, hi: &self.hi - &other.lo }
    }

    pub fn neg(&self) -> RatInterval {
        RatInterval { lo: -self.hi.clone(), hi: -self.lo.clone() }
    }

    pub fn scale(&self, c: &Rational) -> RatInterval {
        Self::spanning(&self.lo * c, &self.hi * c)
    }

    pub fn mul(&self, other: &RatInterval) -> RatInterval {
        let products = [&self.lo * &other.lo, &self.lo * &other.hi, &self.hi * &other.lo, &self.hi * &other.hi];
        let lo = products.iter().min().cloned().unwrap_or_default();
        let hi = products.iter().max().cloned().unwrap_or_default();
        RatInterval { lo, hi }
    }

    /// Enclosure of `{1/x : x ∈ self}`; fails when the interval touches zero.
    pub fn recip(&self) -> Result<RatInterval> {
        if is_positive(&self.lo) || is_negative(&self.hi) {
            Ok(RatInterval { lo: Rational::ONE / &self.hi, hi: Rational::ONE / &self.lo })
        } else {
            Err(Error::Domain(format!("reciprocal of an interval containing zero: {self}")))
        }
    }

    pub fn div(&self, other: &RatInterval) -> Result<RatInterval> {
        Ok(self.mul(&other.recip()?))
    }

    /// `[lo, hi]` as doubles rounded outward, so the pair still encloses.
    pub fn to_f64_outward(&self) -> (f64, f64) {
        (to_f64_directed(&self.lo, false), to_f64_directed(&self.hi, true))
    }

    /// Decimal rendering of both endpoints.
    pub fn decimal(&self, digits: usize) -> String {
        format!("[{}, {}]", to_decimal(&self.lo, digits), to_decimal(&self.hi, digits))
    }
}

impl fmt::Display for RatInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", fmt_pq(&self.lo), fmt_pq(&self.hi))
    }
}

impl fmt::Debug for RatInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RatInterval{self} ≈ {}", self.decimal(10))
    }
}

#[derive(Serialize, Deserialize)]
struct IntervalRepr {
    #[serde(with = "serde_pq")]
    lo: Rational,
    #[serde(with = "serde_pq")]
    hi: Rational,
}

impl Serialize for RatInterval {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        IntervalRepr { lo: self.lo.clone(), hi: self.hi.clone() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for RatInterval {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = IntervalRepr::deserialize(d)?;
        RatInterval::new(r.lo, r.hi).map_err(serde::de::Error::custom)
    }
}

/// Outcome of comparing two enclosures.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CertifiedOrdering {
    Less,
    Greater,
    /// Inconclusive at the current precision.
    Overlapping,
}

pub fn cmp_certified(a: &RatInterval, b: &RatInterval) -> CertifiedOrdering {
    if a.hi < b.lo {
        CertifiedOrdering::Less
    } else if a.lo > b.hi {
        CertifiedOrdering::Greater
    } else {
        CertifiedOrdering::Overlapping
    }
}

impl From<Ordering> for CertifiedOrdering {
    fn from(o: Ordering) -> Self {
        match o {
            Ordering::Less => CertifiedOrdering::Less,
            Ordering::Greater => CertifiedOrdering::Greater,
            Ordering::Equal => CertifiedOrdering::Overlapping,
        }
    }
}

/// `2·atanh(y)` for `|y| < 1`, truncated once the geometric tail bound
/// `2|y|^(2k+3) / ((2k+3)(1-y²))` drops to `eps`.
fn two_atanh(y: &Rational, eps: &Rational) -> RatInterval {
    if y.is_zero() {
        return RatInterval::zero();
    }
    let y2 = y * y;
    let one_minus = Rational::ONE - &y2;
    let mut power = y.clone();
    let mut sum = Rational::ZERO;
    let mut k: i64 = 0;
    loop {
        sum += int(2) * &power / int(2 * k + 1);
        power *= &y2;
        let tail = int(2) * abs(&power) / (int(2 * k + 3) * &one_minus);
        if &tail <= eps {
            return if is_positive(y) {
                RatInterval { hi: &sum + &tail, lo: sum }
            } else {
                RatInterval { lo: &sum - &tail, hi: sum }
            };
        }
        k += 1;
    }
}

/// Certified enclosure of `ln x` with width at most `eps`.
///
/// `x = m·2^e` with `m ∈ (1/2, 2)`; `ln m` and `ln 2` come from the atanh
/// series, so every step is exact rational arithmetic.
pub fn ln_enclosure(x: &Rational, eps: &Rational) -> Result<RatInterval> {
    if !is_positive(x) {
        return Err(Error::Domain(format!("ln of non-positive {}", fmt_pq(x))));
    }
    if !is_positive(eps) {
        return Err(Error::Parameter(format!("ln tolerance must be positive, got {}", fmt_pq(eps))));
    }
    if x.is_one() {
        return Ok(RatInterval::zero());
    }
    let e = ubig_bits(&ibig_mag(x.numerator())) as i64 - ubig_bits(x.denominator()) as i64;
    let m = if e >= 0 { x / pow_int(2, e as usize) } else { x * pow_int(2, (-e) as usize) };
    let y = (&m - Rational::ONE) / (&m + Rational::ONE);
    if e == 0 {
        return Ok(two_atanh(&y, eps));
    }
    let half = eps / int(2);
    let ln_m = two_atanh(&y, &half);
    let ln2 = two_atanh(&rat(1, 3), &(&half / int(e.abs())));
    Ok(ln_m.add(&ln2.scale(&int(e))))
}

/// `ln n` for an integer `n >= 1`.
pub fn ln_int(n: u64, eps: &Rational) -> Result<RatInterval> {
    ln_enclosure(&int(n as i64), eps)
}
