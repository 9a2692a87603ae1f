//! Seeded random instances for property and acceptance tests.

use rand::Rng;

use crate::cyclo::{totient, CycloNum};
use crate::matrix::Matrix;
use crate::phihopf::{PhiObject, PhiType, Signature};
use crate::poly::Poly;
use crate::ratfunc::RatFunc;

/// Random element of `Q(ζ_level)` with small integer coordinates.
pub fn cyclo<R: Rng>(rng: &mut R, level: u32, bound: i64) -> CycloNum {
    let phi = totient(level);
    let mut acc = CycloNum::zero_at(level);
    for i in 0..phi {
        let c = rng.gen_range(-bound..=bound);
        if c != 0 {
            acc = &acc + &CycloNum::zeta_pow(level, i as i64).scale(&CycloNum::from_int(c).coords()[0]);
        }
    }
    acc
}

/// Random polynomial of degree at most `deg`.
pub fn poly<R: Rng>(rng: &mut R, level: u32, deg: usize, bound: i64) -> Poly {
    let d = rng.gen_range(0..=deg);
    Poly::from_coeffs((0..=d).map(|_| cyclo(rng, level, bound)).collect())
}

/// Random nonzero rational function with numerator and denominator degrees at most `deg`.
pub fn ratfunc<R: Rng>(rng: &mut R, level: u32, deg: usize, bound: i64) -> RatFunc {
    loop {
        let num = poly(rng, level, deg, bound);
        let den = poly(rng, level, deg, bound);
        if num.is_zero() || den.is_zero() {
            continue;
        }
        return RatFunc::new(num, den).unwrap();
    }
}

/// Random rational function with rational coefficients.
pub fn rational_ratfunc<R: Rng>(rng: &mut R, deg: usize, bound: i64) -> RatFunc {
    ratfunc(rng, 1, deg, bound)
}

/// Random nonzero polynomial whose roots are small integers, for
/// logarithmic-derivative shifts `p'/p`.
pub fn split_poly<R: Rng>(rng: &mut R, max_factors: usize) -> Poly {
    let k = rng.gen_range(1..=max_factors);
    let mut p = Poly::constant(CycloNum::from_int(rng.gen_range(1..=3)));
    for _ in 0..k {
        let root = rng.gen_range(-4..=4);
        let e = rng.gen_range(1..=2);
        p = &p * &Poly::from_ints(&[-root, 1]).pow(e);
    }
    p
}

/// Random invertible matrix `L·U` with unit-triangular polynomial factors
/// of degree at most 1, so its determinant is 1.
pub fn unimodular<R: Rng>(rng: &mut R, n: usize, bound: i64) -> Matrix<RatFunc> {
    let entry = |rng: &mut R| {
        RatFunc::from_poly(Poly::from_ints(&[rng.gen_range(-bound..=bound), rng.gen_range(-1..=1)]))
    };
    let mut l = Matrix::identity(n);
    let mut u = Matrix::identity(n);
    for i in 0..n {
        for j in 0..i {
            l.set(i, j, entry(rng));
            u.set(j, i, entry(rng));
        }
    }
    l.mul(&u)
}

const SIGNATURES: [Signature; 5] = [[1, 0, 1, 0], [2, 0, 1, 0], [1, 1, 1, 0], [1, 0, 1, 1], [0, 0, 1, 0]];

/// Random plain Φ-object of rank at most `max_rank`: a diagonal derivation
/// with entries `α + β/x`, constant structure maps linking only basis
/// vectors of equal rate, all transported by a random [`unimodular`] matrix.
pub fn phi_object<R: Rng>(rng: &mut R, max_rank: usize, max_maps: usize) -> PhiObject {
    let d = rng.gen_range(1..=max_rank);
    let alphas = [0i64, 1];
    let betas = [(0i64, 1i64), (1, 2), (-1, 2), (1, 3), (1, 1)];
    let x_inv = RatFunc::x().inv().unwrap();
    let rates: Vec<RatFunc> = (0..d)
        .map(|_| {
            let a = RatFunc::from_int(alphas[rng.gen_range(0..alphas.len())]);
            let (bn, bd) = betas[rng.gen_range(0..betas.len())];
            &a + &x_inv.scale_int(bn).div(&RatFunc::from_int(bd)).unwrap()
        })
        .collect();
    let hopf_dim = rng.gen_range(1..=2);
    let n_maps = rng.gen_range(0..=max_maps);
    let signatures: Vec<Signature> = (0..n_maps).map(|_| SIGNATURES[rng.gen_range(0..SIGNATURES.len())]).collect();
    let ty = PhiType { hopf_dim, signatures: signatures.clone() };
    let diag = PhiObject {
        rank: d,
        base: crate::phihopf::Algebra::base(),
        derivation: Matrix::diagonal(&rates),
        ty: ty.clone(),
        maps: vec![],
        coaction: None,
    };
    let maps: Vec<Matrix<RatFunc>> = signatures
        .iter()
        .map(|s| {
            let src = diag.power_derivation(s[0], s[1]).diag();
            let tgt = diag.power_derivation(s[2], s[3]).diag();
            Matrix::from_fn(tgt.len(), src.len(), |i, j| {
                if tgt[i] == src[j] && rng.gen_bool(0.6) {
                    RatFunc::from_int(rng.gen_range(-3..=3))
                } else {
                    RatFunc::zero()
                }
            })
        })
        .collect();
    let p = unimodular(rng, d, 2);
    let pinv = p.inverse().expect("unimodular");
    let id_h = Matrix::identity(hopf_dim);
    let power = |m: &Matrix<RatFunc>, n_m: usize, n_h: usize| {
        let mut out = Matrix::identity(1);
        for _ in 0..n_m {
            out = out.kron(m);
        }
        for _ in 0..n_h {
            out = out.kron(&id_h);
        }
        out
    };
    let derivation = p.derivative().mul(&pinv).add(&p.mul(&diag.derivation).mul(&pinv));
    let maps = signatures
        .iter()
        .zip(maps)
        .map(|(s, m)| power(&p, s[2], s[3]).mul(&m).mul(&power(&pinv, s[0], s[1])))
        .collect();
    PhiObject::new(derivation, ty, maps).expect("transported object is valid")
}
