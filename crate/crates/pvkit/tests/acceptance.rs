//! Acceptance suite: eleven criteria, each run against its time limit.
//! Prints one PASS/FAIL line per criterion and exits nonzero on any failure.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use pvkit::BUILTINS;
use pvkit_core::cocycle::{
    are_equivalent, construction_g, enumerate_h1, ga_cocycle_dims, twist_untwist, untwist_twist, Action,
    GammaAction, Target, TwistedFormDesc,
};
use pvkit_core::cyclo::CycloNum;
use pvkit_core::dcsa::{
    apply_delta, iso_witness_check, iso_witness_check_closed, make_traceless, splitting_degree, transported,
    DeltaCSA,
};
use pvkit_core::diffmod::{char_lattice, gauge, rank1_group, GaugeWitness, LinSys, RMat};
use pvkit_core::gen;
use pvkit_core::io::HopfGaloisFile;
use pvkit_core::matrix::Matrix;
use pvkit_core::parse::parse;
use pvkit_core::partial::is_log_derivative;
use pvkit_core::phihopf::{can_map, descent_check, extend_scalars, FinGroup, FinHopfGalois, PhiObject};
use pvkit_core::poly::{gcd, Poly};
use pvkit_core::ratfunc::RatFunc;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn rf(s: &str) -> RatFunc {
    parse(s, 1).unwrap()
}

fn random_mat(r: &mut ChaCha8Rng, n: usize, deg: usize) -> RMat {
    Matrix::from_fn(n, n, |_, _| {
        if r.gen_bool(0.2) {
            RatFunc::zero()
        } else {
            let d = r.gen_range(0..=deg);
            gen::rational_ratfunc(r, d, 5)
        }
    })
}

fn random_witness(r: &mut ChaCha8Rng, n: usize) -> GaugeWitness {
    let d: Vec<RatFunc> = (0..n).map(|_| gen::rational_ratfunc(r, 1, 3)).collect();
    GaugeWitness::new(gen::unimodular(r, n, 3).mul(&Matrix::diagonal(&d))).unwrap()
}

fn derivation_axioms() -> Outcome {
    let mut r = ChaCha8Rng::seed_from_u64(1);
    for i in 0..1000 {
        let f = gen::ratfunc(&mut r, 4, 8, 5);
        let g = gen::ratfunc(&mut r, 4, 8, 5);
        ensure((&f + &g).derivative() == &f.derivative() + &g.derivative(), || format!("additivity, pair {i}"))?;
        ensure(
            (&f * &g).derivative() == &(&f * &g.derivative()) + &(&f.derivative() * &g),
            || format!("Leibniz, pair {i}"),
        )?;
    }
    Ok("1000 pairs in Q(zeta_4)(x), degrees <= 8".into())
}

fn gauge_groupoid() -> Outcome {
    let mut r = ChaCha8Rng::seed_from_u64(2);
    for i in 0..200 {
        let n = 1 + i % 3;
        let a = LinSys::new(random_mat(&mut r, n, 4)).unwrap();
        let p = random_witness(&mut r, n);
        let q = random_witness(&mut r, n);
        let ap = gauge(&a, &p).unwrap();
        ensure(gauge(&ap, &q).unwrap() == gauge(&a, &q.compose(&p)).unwrap(), || format!("composition, instance {i}"))?;
        ensure(gauge(&ap, &p.inverse()).unwrap() == a, || format!("inverse, instance {i}"))?;
    }
    Ok("200 instances, n <= 3".into())
}

/// Order `k` of the smallest `k·a` with a rational solution, from an
/// explicit solution `y = x^{k·r}`, or `None` when no multiple has one.
/// Handles `a` whose only finite pole is `0`.
fn explicit_rank1_order(a: &RatFunc) -> Option<u64> {
    if a.is_zero() {
        return Some(1);
    }
    let (num, den) = (a.num(), a.den());
    // log derivatives vanish at infinity and have simple poles
    if num.deg() >= den.deg() || !gcd(den, &den.derivative()).is_constant() {
        return None;
    }
    assert_eq!(den, &Poly::x(), "oracle handles poles at 0 only");
    let res = (a * &RatFunc::x()).eval(&CycloNum::from_int(0)).unwrap().to_rational().unwrap();
    let e = i64::try_from(res.numer()).unwrap();
    let k = u64::try_from(res.denom()).unwrap();
    let y = RatFunc::x().pow(e).unwrap();
    assert_eq!(y.derivative(), &a.scale_int(k as i64) * &y);
    Some(k)
}

fn rank1_table() -> Outcome {
    let table = [
        ("0", "trivial"),
        ("1/x", "trivial"),
        ("2/x", "trivial"),
        ("1/(2*x)", "mu(2)"),
        ("2/(3*x)", "mu(3)"),
        ("1", "G_m"),
        ("1/x^2", "G_m"),
    ];
    for (s, want) in table {
        let a = rf(s);
        let got = rank1_group(&a, 1).map_err(|e| e.to_string())?;
        ensure(got.to_string() == want, || format!("{s}: got {got}, expected {want}"))?;
        let oracle = match explicit_rank1_order(&a) {
            Some(1) => "trivial".to_string(),
            Some(k) => format!("mu({k})"),
            None => "G_m".to_string(),
        };
        ensure(oracle == want, || format!("{s}: explicit solution gives {oracle}"))?;
    }
    Ok("7 entries match the explicit solutions".into())
}

fn lattice_completeness() -> Outcome {
    let cases: Vec<(Vec<&str>, Option<Vec<Vec<i64>>>)> = vec![
        (vec!["1/x"], Some(vec![vec![1]])),
        (vec!["1/(2*x)"], Some(vec![vec![2]])),
        (vec!["1", "1/(2*x)"], Some(vec![vec![0, 2]])),
        (vec!["0", "0", "0"], Some(vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]])),
        (vec!["1/(2*x)", "1/(2*(x-1))"], None),
        (vec!["1/(2*x)", "1/(3*x)", "1"], None),
        (vec!["1/(2*x)", "1/(2*x) + 1/(x-1)", "1/(4*x)"], None),
    ];
    let mut points = 0;
    for (tuple, basis) in cases {
        let a: Vec<RatFunc> = tuple.iter().map(|s| rf(s)).collect();
        let l = char_lattice(&a, 1).map_err(|e| e.to_string())?;
        if let Some(b) = basis {
            let b: Vec<Vec<BigInt>> = b.iter().map(|v| v.iter().map(|&x| BigInt::from(x)).collect()).collect();
            ensure(l.basis == b, || format!("{tuple:?}: basis {:?}", l.basis))?;
        }
        let n = a.len();
        let mut m = vec![-5i64; n];
        loop {
            let s = a.iter().zip(&m).fold(RatFunc::zero(), |acc, (ai, &k)| &acc + &ai.scale_int(k));
            let found = is_log_derivative(&s, 1).map_err(|e| e.to_string())?.is_some();
            let mb: Vec<BigInt> = m.iter().map(|&x| BigInt::from(x)).collect();
            ensure(found == l.contains(&mb), || format!("{tuple:?}: point {m:?}"))?;
            points += 1;
            let Some(i) = m.iter().position(|&k| k < 5) else { break };
            m[i] += 1;
            m[..i].iter_mut().for_each(|k| *k = -5);
        }
    }
    Ok(format!("7 tuples, {points} box points"))
}

fn descent_roundtrip() -> Outcome {
    let mut r = ChaCha8Rng::seed_from_u64(5);
    for i in 0..50 {
        let k = 2 + i % 3;
        let m = gen::phi_object(&mut r, 4, 2);
        let c = descent_check(&m, &FinHopfGalois::kummer(k)).map_err(|e| e.to_string())?;
        ensure(c.ok() && c.coinvariant_dim == m.rank, || format!("instance {i} (k = {k}): {c:?}"))?;
    }
    Ok("50 instances, rank <= 4, k in {2, 3, 4}".into())
}

fn hopf_galois_validation() -> Outcome {
    for (name, text) in BUILTINS {
        let s = HopfGaloisFile::from_json(text).and_then(|f| f.extension()).map_err(|e| e.to_string())?;
        let can = can_map(&s);
        let k = s.dim();
        let invertible = can.is_square() && can.rank() == k * k && can.inverse().is_some();
        let expected = name != "corrupted";
        ensure(invertible == expected, || format!("{name}: invertible = {invertible}"))?;
    }
    Ok("kummer2/3/4 and split3 invertible, corrupted singular".into())
}

fn kummer_rate(k: usize, j: usize) -> RatFunc {
    RatFunc::from_frac(j as i64, k as i64).div(&RatFunc::x()).unwrap()
}

fn cohomology_counting() -> Outcome {
    for k in 1..=6usize {
        let act = GammaAction::trivial(FinGroup::cyclic(k), Target::Torus(1));
        let reps = enumerate_h1(&act).map_err(|e| e.to_string())?;
        ensure(reps.len() == k, || format!("k = {k}: {} classes", reps.len()))?;
        // rank-1 systems are gauge equivalent iff their difference is trivial
        let mut classes: Vec<usize> = Vec::new();
        for j in 0..k {
            let new = classes
                .iter()
                .all(|&c| !rank1_group(&(&kummer_rate(k, j) - &kummer_rate(k, c)), 1).unwrap().is_trivial());
            if new {
                classes.push(j);
            }
        }
        ensure(classes.len() == k, || format!("k = {k}: {} gauge classes", classes.len()))?;
        let ambient = extend_scalars(&PhiObject::trivial(1), &FinHopfGalois::kummer(k)).unwrap();
        let mut hit = vec![false; k];
        for a in &reps {
            let d = construction_g(a, &act, &ambient).map_err(|e| e.to_string())?.object.derivation.get(0, 0).clone();
            let j = (0..k).find(|&j| rank1_group(&(&d - &kummer_rate(k, j)), k as u32).unwrap().is_trivial());
            let j = j.ok_or_else(|| format!("k = {k}: twist {d} is not a Kummer class"))?;
            ensure(!hit[j], || format!("k = {k}: class {j} hit twice"))?;
            hit[j] = true;
        }
    }
    Ok("|H1(mu_k, G_m)| = k = #gauge classes for k <= 6".into())
}

fn f_g_inverse() -> Outcome {
    let mut count = 0;
    for k in 1..=6usize {
        let act = GammaAction::trivial(FinGroup::cyclic(k), Target::Torus(1));
        let s = FinHopfGalois::kummer(k);
        for a in enumerate_h1(&act).map_err(|e| e.to_string())? {
            let back = untwist_twist(&a, &act, &PhiObject::trivial(1), &s).map_err(|e| e.to_string())?;
            ensure(are_equivalent(&back, &a, &act, None).is_equivalent(), || format!("F(G(a)) for k = {k}: {a}"))?;
            count += 1;
        }
        for j in 0..k {
            let ok = twist_untwist(&TwistedFormDesc::kummer_rank1(k, j), &act).map_err(|e| e.to_string())?;
            ensure(ok, || format!("G(F(N)) for j/(kx) with k = {k}, j = {j}"))?;
        }
    }
    Ok(format!("{count} classes, both composites"))
}

fn unipotent_vanishing() -> Outcome {
    for k in 1..=5usize {
        let mut actions = vec![GammaAction::trivial(FinGroup::cyclic(k), Target::Ga)];
        if k > 1 {
            let l = CycloNum::zeta(k as u32);
            let scales = (0..k as u64).map(|n| l.pow(n)).collect();
            actions.push(GammaAction::new(FinGroup::cyclic(k), Target::Ga, Action::Scale(scales)).unwrap());
        }
        for act in actions {
            let (z, b) = ga_cocycle_dims(&act).map_err(|e| e.to_string())?;
            ensure(z == b, || format!("k = {k}: dim Z1 = {z}, dim B1 = {b}"))?;
            let n = enumerate_h1(&act).map_err(|e| e.to_string())?.len();
            ensure(n == 1, || format!("k = {k}: {n} classes"))?;
        }
    }
    Ok("|H1(mu_k, G_a)| = 1 for k <= 5".into())
}

fn dcsa_suite() -> Outcome {
    let mut r = ChaCha8Rng::seed_from_u64(10);
    for i in 0..200 {
        let n = 1 + i % 3;
        let a = make_traceless(&random_mat(&mut r, n, 2)).unwrap();
        let x = random_mat(&mut r, n, 3);
        let y = random_mat(&mut r, n, 3);
        let lhs = apply_delta(&a, &x.mul(&y)).unwrap();
        let rhs = apply_delta(&a, &x).unwrap().mul(&y).add(&x.mul(&apply_delta(&a, &y).unwrap()));
        ensure(lhs == rhs, || format!("Leibniz, instance {i}"))?;
    }
    for i in 0..200 {
        let n = 2 + i % 2;
        let a = make_traceless(&random_mat(&mut r, n, 2)).unwrap();
        let u = random_witness(&mut r, n);
        let q = transported(&a, &u).unwrap();
        // half the targets are perturbed so both answers are exercised
        let b = if i % 2 == 0 {
            q
        } else {
            DeltaCSA::new(q.p().add(make_traceless(&random_mat(&mut r, n, 1)).unwrap().p())).unwrap()
        };
        let oracle = iso_witness_check(&a, &b, &u).unwrap();
        let closed = iso_witness_check_closed(&a, &b, &u).unwrap();
        ensure(oracle == closed, || format!("closed form disagrees, instance {i}"))?;
        ensure(oracle == (i % 2 == 0 || b.p() == transported(&a, &u).unwrap().p()), || format!("instance {i}"))?;
    }
    let d = |e: &[&str]| DeltaCSA::new(Matrix::diagonal(&e.iter().map(|s| rf(s)).collect::<Vec<_>>())).unwrap();
    let corpus = [
        (d(&["0", "0"]), 0),
        (d(&["1/(2*x)", "-1/(2*x)"]), 0),
        (d(&["1/(4*x)", "-1/(4*x)"]), 0),
        (d(&["1", "-1"]), 1),
        (d(&["x", "-x"]), 1),
        (d(&["0", "0", "0"]), 0),
        (d(&["1/(3*x)", "1/(3*x)", "-2/(3*x)"]), 0),
        (d(&["1", "0", "-1"]), 1),
        (d(&["1", "x", "-1-x"]), 2),
    ];
    for (a, want) in corpus {
        let n = a.n();
        let rep = splitting_degree(&a).map_err(|e| e.to_string())?;
        ensure(rep.degree == want && rep.degree <= n * n - 1, || format!("{:?}: degree {}", a.p(), rep.degree))?;
    }
    Ok("200 Leibniz, 200 closed-form vs oracle, 9 diagonal algebras".into())
}

fn cli_golden() -> Outcome {
    let failures = common::golden_mismatches(false);
    ensure(failures.is_empty(), || failures.join("\n"))?;
    let missing = common::uncovered_commands();
    ensure(missing.is_empty(), || format!("uncovered: {:?}", missing.iter().map(|c| c.name()).collect::<Vec<_>>()))?;
    for (name, args) in common::cases() {
        ensure(pvkit::run_args(args.clone()) == pvkit::run_args(args), || format!("{name} is not deterministic"))?;
    }
    Ok(format!("{} golden files byte-exact", common::cases().len()))
}

struct Criterion {
    title: &'static str,
    limit: Duration,
    run: fn() -> Outcome,
}

fn criteria() -> Vec<Criterion> {
    let c = |title, secs, run| Criterion { title, limit: Duration::from_secs(secs), run };
    vec![
        c("derivation axioms", 5, derivation_axioms as fn() -> Outcome),
        c("gauge groupoid", 10, gauge_groupoid),
        c("rank-1 classifier table", 1, rank1_table),
        c("character lattice completeness", 10, lattice_completeness),
        c("descent roundtrip", 30, descent_roundtrip),
        c("Hopf-Galois validation", 1, hopf_galois_validation),
        c("cohomology counting", 10, cohomology_counting),
        c("F/G inverse property", 20, f_g_inverse),
        c("unipotent vanishing", 1, unipotent_vanishing),
        c("delta-CSA suite", 30, dcsa_suite),
        c("CLI golden files", 5, cli_golden),
    ]
}

fn main() -> ExitCode {
    if std::env::args().any(|a| a == "--list") {
        return ExitCode::SUCCESS;
    }
    std::panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    let all = criteria();
    for (i, c) in all.iter().enumerate() {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(c.run)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let elapsed = start.elapsed();
        let timing = format!("{:.2}s, limit {}s", elapsed.as_secs_f64(), c.limit.as_secs());
        let verdict = match result {
            Ok(detail) if elapsed <= c.limit => format!("PASS  {:>2}. {}: {detail} ({timing})", i + 1, c.title),
            Ok(detail) => format!("FAIL  {:>2}. {}: too slow; {detail} ({timing})", i + 1, c.title),
            Err(why) => format!("FAIL  {:>2}. {}: {why} ({timing})", i + 1, c.title),
        };
        if verdict.starts_with("FAIL") {
            failed += 1;
        }
        println!("{verdict}");
    }
    println!("acceptance: {} of {} criteria passed", all.len() - failed, all.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
