//! Gauge groupoid laws and the diagonal classification.

use num_bigint::BigInt;
use proptest::prelude::*;
use pvkit_core::diffmod::{
    char_lattice, diag_group, direct_sum, dual, gauge, is_gauge_witness, rank1_group, tensor, DiagGroup, GaugeWitness,
    LinSys,
};
use pvkit_core::gen;
use pvkit_core::matrix::Matrix;
use pvkit_core::parse::parse;
use pvkit_core::partial::{is_log_derivative, log_derivative};
use pvkit_core::ratfunc::RatFunc;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rf(s: &str) -> RatFunc {
    parse(s, 1).unwrap()
}

fn random_sys(r: &mut ChaCha8Rng, n: usize, deg: usize) -> LinSys {
    LinSys::new(Matrix::from_fn(n, n, |_, _| {
        if r.gen_bool(0.3) { RatFunc::zero() } else { gen::rational_ratfunc(r, deg, 4) }
    }))
    .unwrap()
}

/// Unimodular polynomial matrix scaled by a random diagonal of rational functions.
fn random_witness(r: &mut ChaCha8Rng, n: usize) -> GaugeWitness {
    let u = gen::unimodular(r, n, 3);
    let d: Vec<RatFunc> = (0..n).map(|_| gen::rational_ratfunc(r, 1, 3)).collect();
    GaugeWitness::new(u.mul(&Matrix::diagonal(&d))).unwrap()
}

/// Small rank-1 coefficients `α + Σ c/(x − r)` with rational `c`.
fn random_rate(r: &mut ChaCha8Rng) -> RatFunc {
    let mut a = RatFunc::from_int(r.gen_range(0..=1) * r.gen_range(-1..=1));
    for root in 0..2 {
        let c = RatFunc::from_frac(r.gen_range(-3..=3), r.gen_range(1..=3));
        a = &a + &c.div(&rf(&format!("x - {root}"))).unwrap();
    }
    a
}

fn log_shift(r: &mut ChaCha8Rng) -> RatFunc {
    log_derivative(&RatFunc::from_poly(gen::split_poly(r, 3))).unwrap_or_else(RatFunc::zero)
}

fn ints(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn gauge_groupoid(seed in any::<u64>(), n in 1usize..=3) {
        let mut r = ChaCha8Rng::seed_from_u64(seed);
        let a = random_sys(&mut r, n, 2);
        let p = random_witness(&mut r, n);
        let q = random_witness(&mut r, n);
        let ap = gauge(&a, &p).unwrap();
        prop_assert_eq!(gauge(&ap, &q).unwrap(), gauge(&a, &q.compose(&p)).unwrap());
        prop_assert_eq!(gauge(&ap, &p.inverse()).unwrap(), a.clone());
        prop_assert!(is_gauge_witness(&a, &ap, &p).unwrap());
    }

    #[test]
    fn rank1_group_is_gauge_invariant(seed in any::<u64>()) {
        let mut r = ChaCha8Rng::seed_from_u64(seed);
        let a = random_rate(&mut r);
        let shifted = &a + &log_shift(&mut r);
        prop_assert_eq!(rank1_group(&a, 1).unwrap(), rank1_group(&shifted, 1).unwrap());
    }

    #[test]
    fn char_lattice_sound_and_complete(seed in any::<u64>(), n in 1usize..=3) {
        let mut r = ChaCha8Rng::seed_from_u64(seed);
        let a: Vec<RatFunc> = (0..n).map(|_| random_rate(&mut r)).collect();
        let l = char_lattice(&a, 1).unwrap();
        for b in &l.basis {
            let s = a.iter().zip(b).fold(RatFunc::zero(), |acc, (ai, m)| {
                &acc + &ai.scale_int(i64::try_from(m).unwrap())
            });
            prop_assert!(is_log_derivative(&s, 1).unwrap().is_some());
        }
        let bound = if n == 3 { 2 } else { 5 };
        let mut m = vec![-bound; n];
        loop {
            let s = a.iter().zip(&m).fold(RatFunc::zero(), |acc, (ai, &k)| &acc + &ai.scale_int(k));
            prop_assert_eq!(is_log_derivative(&s, 1).unwrap().is_some(), l.contains(&ints(&m)), "{:?}", m);
            let Some(i) = m.iter().position(|&k| k < bound) else { break };
            m[i] += 1;
            m[..i].iter_mut().for_each(|k| *k = -bound);
        }
    }

    #[test]
    fn diag_group_dimension_invariant(seed in any::<u64>(), n in 1usize..=3) {
        let mut r = ChaCha8Rng::seed_from_u64(seed);
        let a: Vec<RatFunc> = (0..n).map(|_| random_rate(&mut r)).collect();
        let g = diag_group(&a, 1).unwrap();
        let mut perm = a.clone();
        perm.rotate_left(1);
        perm.swap(0, n - 1);
        prop_assert_eq!(diag_group(&perm, 1).unwrap().dimension(), g.dimension());
        let shifted: Vec<RatFunc> = a.iter().map(|ai| ai + &log_shift(&mut r)).collect();
        prop_assert_eq!(diag_group(&shifted, 1).unwrap().dimension(), g.dimension());
    }

    #[test]
    fn dual_and_unit_tensor(seed in any::<u64>(), n in 1usize..=3) {
        let mut r = ChaCha8Rng::seed_from_u64(seed);
        let a = random_sys(&mut r, n, 3);
        prop_assert_eq!(dual(&dual(&a)), a.clone());
        prop_assert_eq!(tensor(&a, &LinSys::zero(1)), a.clone());
        prop_assert_eq!(tensor(&LinSys::zero(1), &a), a.clone());
    }
}

#[test]
fn rank1_examples() {
    let table = [
        ("0", DiagGroup::trivial()),
        ("1/x", DiagGroup::trivial()),
        ("2/x", DiagGroup::trivial()),
        ("1/(2*x)", DiagGroup { torus_rank: 0, finite_factors: vec![2] }),
        ("2/(3*x)", DiagGroup { torus_rank: 0, finite_factors: vec![3] }),
        ("1", DiagGroup { torus_rank: 1, finite_factors: vec![] }),
        ("1/x^2", DiagGroup { torus_rank: 1, finite_factors: vec![] }),
    ];
    for (s, g) in table {
        assert_eq!(rank1_group(&rf(s), 1).unwrap(), g, "{s}");
    }
}

#[test]
fn lattice_examples() {
    assert_eq!(char_lattice(&[rf("1/x")], 1).unwrap().basis, vec![ints(&[1])]);
    assert_eq!(char_lattice(&[rf("1/(2*x)")], 1).unwrap().basis, vec![ints(&[2])]);
    assert_eq!(char_lattice(&[rf("1"), rf("1/(2*x)")], 1).unwrap().basis, vec![ints(&[0, 2])]);
    let g = diag_group(&[rf("1"), rf("1/(2*x)")], 1).unwrap();
    assert_eq!((g.torus_rank, g.finite_factors.clone(), g.dimension()), (1, vec![2], 1));
    assert!(diag_group(&vec![RatFunc::zero(); 3], 1).unwrap().is_trivial());
}

#[test]
fn module_constructions() {
    let a = LinSys::scalar(rf("1/x"));
    let b = LinSys::scalar(rf("1"));
    assert_eq!(tensor(&a, &b), LinSys::scalar(rf("1/x + 1")));
    assert_eq!(dual(&a), LinSys::scalar(rf("-1/x")));
    assert_eq!(direct_sum(&a, &b), LinSys::diagonal(&[rf("1/x"), rf("1")]));
}

#[test]
fn singular_witness_is_rejected() {
    let p = Matrix::from_rows(vec![vec![rf("x"), rf("1")], vec![rf("x^2"), rf("x")]]);
    assert!(GaugeWitness::new(p).is_err());
}
