//! Derivations `δ_P` on `M_n(F)` and their witnesses.

use proptest::prelude::*;
use pvkit_core::dcsa::{
    adjoint_system, apply_delta, is_split, iso_witness_check, iso_witness_check_closed, make_traceless,
    splitting_degree, to_pgl_torsor, transport_witness, transported, DeltaCSA,
};
use pvkit_core::diffmod::{GaugeWitness, RMat};
use pvkit_core::gen;
use pvkit_core::matrix::Matrix;
use pvkit_core::parse::parse;
use pvkit_core::ratfunc::RatFunc;
use pvkit_core::torsor::{torsor_iso_check, Triviality};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rf(s: &str) -> RatFunc {
    parse(s, 1).unwrap()
}

fn random_mat(r: &mut ChaCha8Rng, n: usize, deg: usize) -> RMat {
    Matrix::from_fn(n, n, |_, _| if r.gen_bool(0.25) { RatFunc::zero() } else { gen::rational_ratfunc(r, deg, 4) })
}

fn random_p(r: &mut ChaCha8Rng, n: usize) -> DeltaCSA {
    make_traceless(&random_mat(r, n, 2)).unwrap()
}

fn random_u(r: &mut ChaCha8Rng, n: usize) -> GaugeWitness {
    let d: Vec<RatFunc> = (0..n).map(|_| gen::rational_ratfunc(r, 1, 3)).collect();
    GaugeWitness::new(gen::unimodular(r, n, 2).mul(&Matrix::diagonal(&d))).unwrap()
}

fn diag(entries: &[&str]) -> DeltaCSA {
    DeltaCSA::new(Matrix::diagonal(&entries.iter().map(|s| rf(s)).collect::<Vec<_>>())).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn delta_is_a_derivation(seed in any::<u64>(), n in 1usize..=3) {
        let mut r = ChaCha8Rng::seed_from_u64(seed);
        let a = random_p(&mut r, n);
        let x = random_mat(&mut r, n, 3);
        let y = random_mat(&mut r, n, 3);
        let lhs = apply_delta(&a, &x.mul(&y)).unwrap();
        let rhs = apply_delta(&a, &x).unwrap().mul(&y).add(&x.mul(&apply_delta(&a, &y).unwrap()));
        prop_assert_eq!(lhs, rhs);
        prop_assert!(apply_delta(&a, &Matrix::identity(n)).unwrap().is_zero());
        prop_assert_eq!(apply_delta(&a, &x).unwrap().trace(), x.trace().derivative());
    }

    #[test]
    fn closed_form_agrees_with_oracle(seed in any::<u64>(), n in 2usize..=3) {
        let mut r = ChaCha8Rng::seed_from_u64(seed);
        let a = random_p(&mut r, n);
        let u = random_u(&mut r, n);
        let q = transported(&a, &u).unwrap();
        prop_assert!(iso_witness_check(&a, &q, &u).unwrap());
        prop_assert!(iso_witness_check_closed(&a, &q, &u).unwrap());
        let wrong = DeltaCSA::new(q.p().add(&make_traceless(&random_mat(&mut r, n, 1)).unwrap().p().clone())).unwrap();
        prop_assert_eq!(
            iso_witness_check(&a, &wrong, &u).unwrap(),
            iso_witness_check_closed(&a, &wrong, &u).unwrap()
        );
    }

    #[test]
    fn witnesses_compose(seed in any::<u64>(), n in 2usize..=3) {
        let mut r = ChaCha8Rng::seed_from_u64(seed);
        let a = random_p(&mut r, n);
        let u = random_u(&mut r, n);
        let v = random_u(&mut r, n);
        let q = transported(&a, &u).unwrap();
        let s = transported(&q, &v).unwrap();
        prop_assert!(iso_witness_check(&a, &s, &u.compose(&v)).unwrap());
    }

    #[test]
    fn transport_gives_pgl_torsor_isomorphism(seed in any::<u64>(), n in 2usize..=3) {
        let mut r = ChaCha8Rng::seed_from_u64(seed);
        let a = random_p(&mut r, n);
        let u = random_u(&mut r, n);
        let q = transported(&a, &u).unwrap();
        prop_assert!(torsor_iso_check(&to_pgl_torsor(&a), &to_pgl_torsor(&q), &transport_witness(&u)).unwrap());
    }

    #[test]
    fn diagonal_degree_bound(seed in any::<u64>(), n in 2usize..=3) {
        let mut r = ChaCha8Rng::seed_from_u64(seed);
        let e: Vec<RatFunc> = (0..n)
            .map(|_| {
                let c = RatFunc::from_frac(r.gen_range(-3..=3), r.gen_range(1..=4));
                &RatFunc::from_int(r.gen_range(-1..=1)) + &c.div(&RatFunc::x()).unwrap()
            })
            .collect();
        let a = make_traceless(&Matrix::diagonal(&e)).unwrap();
        let rep = splitting_degree(&a).unwrap();
        prop_assert!(!rep.is_bound);
        prop_assert!(rep.degree <= n * n - 1);
        prop_assert!(rep.degree <= n - 1);
    }
}

#[test]
fn adjoint_ordering() {
    let a = diag(&["1/x", "-1/x"]);
    let m = adjoint_system(&a);
    assert_eq!(m.matrix().diag(), vec![rf("0"), rf("-2/x"), rf("2/x"), rf("0")]);
}

#[test]
fn diagonal_corpus() {
    let n2 = [
        (diag(&["0", "0"]), 0),
        (diag(&["1/(2*x)", "-1/(2*x)"]), 0),
        (diag(&["1/(4*x)", "-1/(4*x)"]), 0),
        (diag(&["1", "-1"]), 1),
        (diag(&["x", "-x"]), 1),
    ];
    for (a, d) in n2 {
        let rep = splitting_degree(&a).unwrap();
        assert_eq!(rep.degree, d);
        assert!(rep.degree <= 3);
    }
    let n3 = [
        (diag(&["0", "0", "0"]), 0),
        (diag(&["1/(3*x)", "1/(3*x)", "-2/(3*x)"]), 0),
        (diag(&["1", "0", "-1"]), 1),
        (diag(&["1", "x", "-1-x"]), 2),
    ];
    for (a, d) in n3 {
        let rep = splitting_degree(&a).unwrap();
        assert_eq!(rep.degree, d);
        assert!(rep.degree <= 8);
    }
    assert_eq!(is_split(&diag(&["1/(2*x)", "-1/(2*x)"]), None).unwrap(), Triviality::Trivial);
    assert_eq!(is_split(&diag(&["1/(4*x)", "-1/(4*x)"]), None).unwrap(), Triviality::NotTrivial);
    assert_eq!(is_split(&diag(&["1", "-1"]), None).unwrap(), Triviality::NotTrivial);
}

#[test]
fn generic_p_reports_bound() {
    let p = Matrix::from_rows(vec![vec![rf("0"), rf("1")], vec![rf("x"), rf("0")]]);
    let rep = splitting_degree(&DeltaCSA::new(p).unwrap()).unwrap();
    assert!(rep.is_bound);
    assert_eq!(rep.degree, 3);
}
