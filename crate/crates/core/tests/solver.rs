//! Solver outputs against the forms, continued-fraction and BSGS oracles.

mod common;

use common::{bsgs, cf_regulator, class_group_oracle, is_fundamental, Form};
use num_bigint::BigInt;
use num_traits::ToPrimitive;
use proptest::prelude::*;
use qfdlog::ideals::{ideal_pow, principal_near, Ideal};
use qfdlog::ntkernel::{gen_prime_discriminant, Discriminant, FieldSign, FixedReal};
use qfdlog::solver::{
    class_group, dlp_imaginary, dlp_infrastructure, euler_window, random_nonprincipal_prime, real_gcd, regulator,
    verify_dlp, verify_infra, SolverConfig,
};
use qfdlog::Error;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn cfg() -> SolverConfig {
    SolverConfig::default()
}

#[test]
fn class_groups_match_forms() {
    let mut ds = vec![-23i64, -47, -84, -3, -4, -1155, -3299, -10_007, -199_999];
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    while ds.len() < 20 {
        let d = -rng.gen_range(3i64..1_000_000);
        if is_fundamental(d) {
            ds.push(d);
        }
    }
    for dv in ds {
        let d = Discriminant::from_i64(dv).unwrap();
        let cg = class_group(&d, &cfg()).unwrap();
        let (h, inv) = class_group_oracle(dv as i128);
        assert_eq!(cg.h, BigInt::from(h), "Δ = {dv}");
        let got: Vec<u64> = cg.invariants.iter().map(|x| x.to_u64().unwrap()).collect();
        assert_eq!(got, inv, "Δ = {dv}");
    }
}

#[test]
fn regulators_match_continued_fractions() {
    let mut ds = vec![5i64, 13, 40, 8, 12, 229, 1_000_001 * 4 + 1];
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    while ds.len() < 20 {
        let d = rng.gen_range(5i64..100_000_000);
        if is_fundamental(d) {
            ds.push(d);
        }
    }
    for dv in ds {
        let Ok(d) = Discriminant::from_i64(dv) else { continue };
        if !d.is_fundamental() {
            continue;
        }
        let est = regulator(&d, &cfg()).unwrap();
        let want = cf_regulator(dv as u64);
        assert!((est.r.to_f64() - want).abs() < 1e-6, "Δ = {dv}: {} vs {want}", est.r.to_f64());
        assert!(est.certified_window);
        let w = euler_window(&d, 1 << 16);
        assert!(w.contains(est.h.to_f64().unwrap() * want), "Δ = {dv}");
    }
}

#[test]
fn non_fundamental_input_is_rejected() {
    let d = Discriminant::from_i64(-92).unwrap();
    assert!(matches!(class_group(&d, &cfg()), Err(Error::InvalidDiscriminant(_))));
    let d = Discriminant::from_i64(20).unwrap();
    assert!(matches!(regulator(&d, &cfg()), Err(Error::InvalidDiscriminant(_))));
}

#[test]
fn imaginary_logs_agree_with_bsgs() {
    for seed in 0..3u64 {
        let d = gen_prime_discriminant(40, FieldSign::Imaginary, seed);
        let dv = d.value().to_i128().unwrap();
        let g = random_nonprincipal_prime(&d, 1000, seed).unwrap();
        let k = 1000 + seed * 7919;
        let (a, _) = ideal_pow(&d, &g, &k.into());
        let res = dlp_imaginary(&d, &g, &a, &cfg()).unwrap();
        assert!(res.verified && verify_dlp(&d, &g, &a, &res.x));
        let form = |i: &Ideal| Form::from_ab(dv, i.a().to_i128().unwrap(), i.b().to_i128().unwrap()).reduce();
        let (gf, af) = (form(&g), form(&a));
        let x = res.x.to_i128().unwrap();
        let gx = if x < 0 { gf.inverse().reduce().pow((-x) as u128) } else { gf.pow(x as u128) };
        assert_eq!(gx, af);
        let small = bsgs(&gf, &af, 1 << 21).unwrap();
        if let Some(ord) = &res.order {
            assert_eq!(BigInt::from(small) % ord, res.x.clone() % ord);
        }
    }
}

#[test]
fn infrastructure_logs_round_trip() {
    let d = gen_prime_discriminant(32, FieldSign::Real, 5);
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..3 {
        let t0 = FixedReal::from_f64(rng.gen_range(1.0..1e6));
        let a = principal_near(&d, &t0).ideal;
        let res = dlp_infrastructure(&d, &a, &cfg()).unwrap();
        assert!(res.verified && verify_infra(&d, &a, &res.t));
        assert!(res.residual < 1e-6);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn real_gcd_of_exact_multiples(r in 0.49f64..200.0, ms in prop::collection::vec(1i64..200, 2..6)) {
        let base = FixedReal::from_f64(r);
        let mults: Vec<FixedReal> = ms.iter().map(|&m| base.mul_i64(m)).collect();
        let g = ms.iter().fold(0i64, |a, &b| num_integer::gcd(a, b));
        let got = real_gcd(&mults).unwrap();
        prop_assert!((got.to_f64() - g as f64 * r).abs() < 1e-9 * g as f64 * r, "{} vs {}", got.to_f64(), g as f64 * r);
    }
}

#[test]
fn real_gcd_rejects_sub_regulator_results() {
    let base = FixedReal::from_f64(0.3);
    let mults = [base.mul_i64(7), base.mul_i64(11)];
    assert!(matches!(real_gcd(&mults), Err(qfdlog::Error::PrecisionLoss(_))));
}
