//! Factorization into irreducibles over `Q` and over `Q(ζ_N)`.
//!
//! Over `Q` the squarefree parts go through [`zassenhaus`]. Over a cyclotomic
//! field a squarefree `f` is shifted to `f(x - sζ)` until its norm down to `Q`
//! is squarefree; the rational factors of the norm then cut out the
//! irreducible factors of `f` by gcd.

pub mod zassenhaus;

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::cyclo::{totient, CycloNum};
use crate::error::{Error, Result};
use crate::poly::{gcd, squarefree_decomposition, Poly};

/// Largest degree accepted by [`factor`].
pub const DEGREE_LIMIT: usize = 12;

/// Irreducible monic factors of `f` over `Q(ζ_level)` with multiplicities.
///
/// Coefficient fields of `f` are adjoined: factoring happens over
/// `Q(ζ_L)` with `L = lcm(level, levels of the coefficients)`. The result is
/// sorted by degree, then by coefficients, so it is deterministic.
pub fn factor(f: &Poly, level: u32) -> Result<Vec<(Poly, u32)>> {
    let Some(d) = f.deg() else {
        return Ok(Vec::new());
    };
    if d > DEGREE_LIMIT {
        return Err(Error::DegreeLimit {
            degree: d,
            limit: DEGREE_LIMIT,
        });
    }
    let level = level.lcm(&f.level());
    let mut out = Vec::new();
    for (part, mult) in squarefree_decomposition(f) {
        for g in factor_squarefree(&part, level) {
            out.push((g, mult));
        }
    }
    out.sort_by(|a, b| poly_cmp(&a.0, &b.0).then(a.1.cmp(&b.1)));
    Ok(out)
}

/// Canonical total order on polynomials: by degree, then coefficients from the top.
pub fn poly_cmp(a: &Poly, b: &Poly) -> Ordering {
    a.deg().cmp(&b.deg()).then_with(|| {
        for (x, y) in a.coeffs().iter().rev().zip(b.coeffs().iter().rev()) {
            match x.canonical_cmp(y) {
                Ordering::Equal => continue,
                o => return o,
            }
        }
        Ordering::Equal
    })
}

/// Irreducible factors of a monic squarefree polynomial over `Q(ζ_level)`.
pub fn factor_squarefree(f: &Poly, level: u32) -> Vec<Poly> {
    if f.deg().unwrap_or(0) <= 1 {
        return vec![f.monic()];
    }
    if let Some(q) = f.to_rationals() {
        let over_q = factor_squarefree_q(&q);
        if totient(level) == 1 {
            return over_q;
        }
        return over_q
            .iter()
            .flat_map(|g| factor_over_cyclotomic(g, level))
            .collect();
    }
    factor_over_cyclotomic(f, level)
}

/// Irreducible monic factors over `Q` of a squarefree rational polynomial.
fn factor_squarefree_q(f: &[BigRational]) -> Vec<Poly> {
    let denom_lcm = f
        .iter()
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = f
        .iter()
        .map(|c| (c * BigRational::from_integer(denom_lcm.clone())).to_integer())
        .collect();
    let prim = zassenhaus::primitive_part(&ints);
    zassenhaus::factor_squarefree(&prim)
        .into_iter()
        .map(|g| {
            Poly::from_rationals(
                &g.iter()
                    .map(|c| BigRational::from_integer(c.clone()))
                    .collect::<Vec<_>>(),
            )
            .monic()
        })
        .collect()
}

/// Norm of `g ∈ Q(ζ_level)[x]` down to `Q[x]`, by evaluation and interpolation.
pub fn norm_poly(g: &Poly, level: u32) -> Vec<BigRational> {
    let deg = g.deg().unwrap_or(0) * totient(level);
    let xs: Vec<BigRational> = (0..=deg as i64)
        .map(|i| BigRational::from_integer(BigInt::from(i)))
        .collect();
    let ys: Vec<BigRational> = xs
        .iter()
        .map(|x| {
            let v = g.eval(&CycloNum::from_rational_at(x.clone(), level));
            v.at_level(level).norm()
        })
        .collect();
    newton_interpolate(&xs, &ys)
}

fn newton_interpolate(xs: &[BigRational], ys: &[BigRational]) -> Vec<BigRational> {
    let n = xs.len();
    let mut coef = ys.to_vec();
    for j in 1..n {
        for i in (j..n).rev() {
            coef[i] = (&coef[i] - &coef[i - 1]) / (&xs[i] - &xs[i - j]);
        }
    }
    // expand the Newton form
    let mut poly = vec![BigRational::zero(); n];
    for i in (0..n).rev() {
        // poly = poly * (x - xs[i]) + coef[i]
        let mut next = vec![BigRational::zero(); n];
        for k in 0..n - 1 {
            if !poly[k].is_zero() {
                next[k + 1] += &poly[k];
                next[k] -= &poly[k] * &xs[i];
            }
        }
        next[0] += &coef[i];
        poly = next;
    }
    while poly.len() > 1 && poly.last().map_or(false, |c| c.is_zero()) {
        poly.pop();
    }
    poly
}

fn is_squarefree_q(f: &[BigRational]) -> bool {
    let p = Poly::from_rationals(f);
    gcd(&p, &p.derivative()).is_constant()
}

fn factor_over_cyclotomic(f: &Poly, level: u32) -> Vec<Poly> {
    let f = f.monic();
    if f.deg().unwrap_or(0) <= 1 || totient(level) == 1 {
        return vec![f];
    }
    let zeta = CycloNum::zeta(level);
    for s in shifts() {
        let sz = zeta.scale(&BigRational::from_integer(BigInt::from(s)));
        let g = f.shift(&-&sz);
        let norm = norm_poly(&g, level);
        if !is_squarefree_q(&norm) {
            continue;
        }
        let mut out = Vec::new();
        for nq in factor_squarefree_q(&norm) {
            let h = gcd(&g, &nq.at_level(level));
            if !h.is_constant() {
                out.push(h.shift(&sz));
            }
        }
        return out;
    }
    unreachable!("some shift has a squarefree norm")
}

fn shifts() -> impl Iterator<Item = i64> {
    (0i64..).map(|i| if i % 2 == 1 { (i + 1) / 2 } else { -(i / 2) })
}
