mod common;

use proptest::prelude::*;
use weaktype::construction::{
    combine_blockwise, combine_signs, make_F_k, make_F_k_closed, make_G_m, make_sign_matrix, make_step_majorant,
    ConstructionParams, SignVector,
};
use weaktype::numeric::{abs, int, ln_int, pow_int, rat};
use weaktype::pwfunc::{step_norm_exact, PiecewiseFn};
use weaktype::Rational;

fn params(n: u64) -> ConstructionParams {
    ConstructionParams::new(n).unwrap()
}

fn ln_eps() -> Rational {
    Rational::ONE / pow_int(2, 64)
}

/// 20 points `(i + s/20)/n^k`, `s = 1..=20`, in every sub-block `i = 1..n-1`.
fn sandwich_grid(p: &ConstructionParams, k: usize) -> Vec<(usize, Rational)> {
    let h = p.grid(k);
    (1..=p.count())
        .flat_map(|i| (1..=20).map(move |s| (i, rat(20 * i as i64 + s, 20))))
        .map(|(i, u)| (i, u * &h))
        .collect()
}

/// Sum of the `F_m`, the pointwise majorant of every signed combination.
fn block_sum(p: &ConstructionParams) -> PiecewiseFn {
    (1..=p.scales()).fold(PiecewiseFn::zero(), |acc, m| acc.add(&make_F_k(p, m).unwrap()))
}

fn signs(n: u64) -> impl Strategy<Value = (u64, SignVector)> {
    let count = n as usize - 1;
    (Just(n), 0u64..(1 << count)).prop_map(move |(n, code)| (n, SignVector::from_bits(code, count)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn both_block_forms_agree(n in 3u64..=7, k in 1usize..=3, num in 1i64..=100_000) {
        let p = params(n);
        let t = rat(num, 100_000);
        let added = make_F_k(&p, k).unwrap();
        let closed = make_F_k_closed(&p, k).unwrap();
        prop_assert_eq!(added.eval_exact(&t).unwrap(), closed.eval_exact(&t).unwrap());
    }

    #[test]
    fn sign_swap_identity((n, eta) in (3u64..=5).prop_flat_map(signs), num in 1i64..=1_000_000) {
        let p = params(n);
        let e = make_sign_matrix(&p);
        let plus = combine_signs(&p, &eta, &e).unwrap();
        let minus = combine_signs(&p, &eta.negated(), &e).unwrap();
        prop_assert_eq!(&minus, &plus.neg());
        // η_j ε_j^m folded into the blocks gives the same function
        let blockwise = combine_blockwise(&p, &eta, &e).unwrap();
        let t = rat(num, 1_000_000);
        prop_assert_eq!(plus.eval_exact(&t).unwrap(), blockwise.eval_exact(&t).unwrap());
    }

    #[test]
    fn blocks_sum_to_all_plus(n in 3u64..=4, num in 1i64..=1_000_000) {
        let p = params(n);
        let e = make_sign_matrix(&p);
        let t = rat(num, 1_000_000);
        let via_blocks = (1..=p.scales())
            .map(|m| make_G_m(&p, m, &e).unwrap())
            .fold(PiecewiseFn::zero(), |acc, g| acc.add(&g));
        let all_plus = combine_signs(&p, &SignVector::all_plus(p.count()), &e).unwrap();
        prop_assert_eq!(via_blocks.eval_exact(&t).unwrap(), all_plus.eval_exact(&t).unwrap());
    }
}

#[test]
fn signed_sums_below_block_sum() {
    for n in [3u64, 4] {
        let p = params(n);
        let e = make_sign_matrix(&p);
        let majorant = block_sum(&p);
        let points: Vec<Rational> =
            (1..=2000).map(|s| rat(s, 2000)).chain((1..=p.scales()).map(|m| p.grid(m))).collect();
        for code in 0..1u64 << p.count() {
            let f = combine_signs(&p, &SignVector::from_bits(code, p.count()), &e).unwrap();
            for t in &points {
                assert!(abs(&f.eval_exact(t).unwrap()) <= majorant.eval_exact(t).unwrap(), "n = {n}, t = {t}");
            }
        }
    }
}

#[test]
fn harmonic_sandwich_lower_side() {
    for n in [3u64, 4, 5, 6, 10] {
        let p = params(n);
        let ln_lo = ln_int(n, &ln_eps()).unwrap().lo().clone();
        for k in [1usize, 2] {
            let f = make_F_k(&p, k).unwrap();
            let floor = pow_int(n, k) * (&ln_lo - Rational::ONE);
            for (i, t) in sandwich_grid(&p, k) {
                let v = f.eval_exact(&t).unwrap();
                assert!(v >= floor, "n = {n}, k = {k}, block {i}, t = {t}: {v} < {floor}");
            }
        }
    }
}

/// The upper half of the pointwise sandwich, exactly as stated. Near the left
/// end of each sub-block `F_k` approaches `n^k·H_{n-1}`, and `H_{n-1} > ln n`
/// for every `n >= 2`, so this check fails.
#[test]
fn harmonic_sandwich_upper_side() {
    let mut violations = Vec::new();
    for n in [3u64, 4, 5, 6, 10] {
        let p = params(n);
        let ln_hi = ln_int(n, &ln_eps()).unwrap().hi().clone();
        for k in [1usize, 2] {
            let f = make_F_k(&p, k).unwrap();
            let ceiling = pow_int(n, k) * &ln_hi;
            for (i, t) in sandwich_grid(&p, k) {
                let v = f.eval_exact(&t).unwrap();
                if v > ceiling {
                    violations.push(format!("n = {n}, k = {k}, block {i}, t = {t}"));
                }
            }
        }
    }
    assert!(violations.is_empty(), "{} grid points exceed n^k·ln n, first: {}", violations.len(), violations[0]);
}

#[test]
fn majorant_norm_within_n_ln_n() {
    for n in [3u64, 4, 5, 6, 10] {
        let p = params(n);
        let ln = ln_int(n, &ln_eps()).unwrap();
        let s = make_step_majorant(&p, ln.hi()).unwrap();
        assert_eq!(s.as_fn().segments().len(), p.scales());
        assert_eq!(s.as_fn().support_hull().unwrap().0, p.inner_endpoint());
        let norm = step_norm_exact(&s);
        assert!(norm <= int(n as i64) * ln.hi(), "n = {n}");
    }
}

/// `|F_m| <= n^m·ln n` on each scale, as the step majorant claims. Fails for
/// the same reason as [`harmonic_sandwich_upper_side`].
#[test]
fn majorant_dominates_blocks_pointwise() {
    let p = params(4);
    let ln = ln_int(4, &ln_eps()).unwrap();
    let s = make_step_majorant(&p, ln.hi()).unwrap();
    let mut violations = Vec::new();
    for m in 1..=p.scales() {
        let f = make_F_k(&p, m).unwrap();
        for (_, t) in sandwich_grid(&p, m) {
            if abs(&f.eval_exact(&t).unwrap()) > s.as_fn().eval_exact(&t).unwrap() {
                violations.push(format!("m = {m}, t = {t}"));
            }
        }
    }
    assert!(violations.is_empty(), "{} grid points above the majorant, first: {}", violations.len(), violations[0]);
}
