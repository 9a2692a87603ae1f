//! Multi-modular gcd over `Q(ζ_N)[x]`.
//!
//! For primes `p ≡ 1 (mod N)` the cyclotomic polynomial splits into
//! linear factors, so each prime yields `φ(N)` images over `F_p`. Their gcds
//! are interpolated back to power-basis coordinates, combined by CRT and
//! rationally reconstructed. A candidate is accepted only after it divides
//! both inputs exactly; its degree then matches the modular lower bound, so
//! it is the gcd.

use std::collections::HashMap;
use std::sync::RwLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use once_cell::sync::Lazy;

use crate::cyclo::{totient, CycloNum};
use crate::modp;
use crate::poly::Poly;

const MAX_PRIMES: usize = 16;

struct PrimeData {
    p: u64,
    /// Images of `ζ`, one per embedding.
    roots: Vec<u64>,
    /// Inverse of the Vandermonde matrix `[root_j^i]`, row-major.
    vinv: Vec<Vec<u64>>,
}

static PRIMES: Lazy<RwLock<HashMap<u32, std::sync::Arc<Vec<PrimeData>>>>> =
    Lazy::new(|| RwLock::new(HashMap::new()));

fn prime_table(level: u32) -> std::sync::Arc<Vec<PrimeData>> {
    if let Some(t) = PRIMES.read().unwrap().get(&level) {
        return t.clone();
    }
    let phi = totient(level);
    let table: Vec<PrimeData> = modp::large_primes_1_mod(level as u64)
        .take(MAX_PRIMES)
        .map(|p| {
            let r = modp::primitive_root_of_unity(level as u64, p);
            let roots: Vec<u64> = (1..=level as u64)
                .filter(|j| j.gcd(&(level as u64)) == 1)
                .map(|j| modp::powmod(r, j, p))
                .collect();
            debug_assert_eq!(roots.len(), phi);
            let v: Vec<Vec<u64>> = roots
                .iter()
                .map(|&rt| (0..phi as u64).map(|i| modp::powmod(rt, i, p)).collect())
                .collect();
            PrimeData {
                p,
                vinv: invert_mod(&v, p),
                roots,
            }
        })
        .collect();
    let table = std::sync::Arc::new(table);
    PRIMES.write().unwrap().insert(level, table.clone());
    table
}

fn invert_mod(m: &[Vec<u64>], p: u64) -> Vec<Vec<u64>> {
    let n = m.len();
    let mut a: Vec<Vec<u64>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| u64::from(i == j)));
            r
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| a[r][col] != 0).expect("invertible");
        a.swap(piv, col);
        let inv = modp::invmod(a[col][col], p);
        for v in a[col].iter_mut() {
            *v = modp::mulmod(*v, inv, p);
        }
        for r in 0..n {
            if r != col && a[r][col] != 0 {
                let f = a[r][col];
                for c in 0..2 * n {
                    let sub = modp::mulmod(f, a[col][c], p);
                    a[r][c] = modp::submod(a[r][c], sub, p);
                }
            }
        }
    }
    a.into_iter().map(|row| row[n..].to_vec()).collect()
}

fn rational_reconstruct(u: &BigInt, m: &BigInt) -> Option<BigRational> {
    let bound = (m / 2u32).sqrt();
    let (mut r0, mut r1) = (m.clone(), u.mod_floor(m));
    let (mut t0, mut t1) = (BigInt::zero(), BigInt::one());
    while r1 > bound {
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        let t2 = &t0 - &q * &t1;
        r0 = std::mem::replace(&mut r1, r2);
        t0 = std::mem::replace(&mut t1, t2);
    }
    if t1.is_zero() || t1.abs() > bound || !r1.gcd(&t1).is_one() {
        return None;
    }
    Some(BigRational::new(r1, t1))
}

/// Monic gcd of two nonconstant polynomials, or `None` if the modular
/// method did not certify a result within its prime budget.
pub fn modular_gcd(a: &Poly, b: &Poly) -> Option<Poly> {
    let level = a.level().lcm(&b.level());
    let phi = totient(level);
    let table = prime_table(level);
    let mut best: Option<usize> = None;
    let mut residues: Vec<BigInt> = Vec::new();
    let mut modulus = BigInt::one();
    'primes: for pd in table.iter() {
        let p = pd.p;
        let mut images = Vec::with_capacity(phi);
        for &root in &pd.roots {
            let (Some(am), Some(bm)) = (a.reduce_mod(p, level, root), b.reduce_mod(p, level, root))
            else {
                continue 'primes;
            };
            if am.last() == Some(&0) || bm.last() == Some(&0) {
                continue 'primes;
            }
            images.push(modp::gcd(&am, &bm, p));
        }
        let d = images[0].len() - 1;
        if images.iter().any(|g| g.len() - 1 != d) {
            continue;
        }
        if d == 0 {
            return Some(Poly::one());
        }
        match best {
            Some(bd) if d > bd => continue,
            Some(bd) if d == bd => {}
            _ => {
                best = Some(d);
                residues = vec![BigInt::zero(); (d + 1) * phi];
                modulus = BigInt::one();
            }
        }
        // coordinates mod p, then CRT into the running residues
        let bp = BigInt::from(p);
        let minv = if modulus.is_one() {
            0
        } else {
            modp::invmod((&modulus % &bp).to_u64().unwrap(), p)
        };
        for k in 0..=d {
            for i in 0..phi {
                let mut c = 0u64;
                for (j, img) in images.iter().enumerate() {
                    c = modp::addmod(c, modp::mulmod(pd.vinv[i][j], img[k], p), p);
                }
                let slot = &mut residues[k * phi + i];
                if modulus.is_one() {
                    *slot = BigInt::from(c);
                } else {
                    let cur = (&*slot % &bp).to_u64().unwrap();
                    let t = modp::mulmod(modp::submod(c, cur, p), minv, p);
                    *slot += &modulus * BigInt::from(t);
                }
            }
        }
        modulus *= &bp;
        let mut coeffs = Vec::with_capacity(d + 1);
        for k in 0..=d {
            let mut coords = Vec::with_capacity(phi);
            for i in 0..phi {
                match rational_reconstruct(&residues[k * phi + i], &modulus) {
                    Some(q) => coords.push(q),
                    None => continue 'primes,
                }
            }
            coeffs.push(CycloNum::from_coords(level, coords));
        }
        let candidate = Poly::from_coeffs(coeffs);
        if a.div_exact(&candidate).is_some() && b.div_exact(&candidate).is_some() {
            return Some(candidate);
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reconstructs_rationals() {
        let m = BigInt::from(1_000_003u64);
        let q = BigRational::new(BigInt::from(-7), BigInt::from(12));
        // u ≡ -7 · 12^{-1} mod m
        let inv = BigInt::from(12).modpow(&(&m - 2u32), &m);
        let u = (BigInt::from(-7) * inv).mod_floor(&m);
        assert_eq!(rational_reconstruct(&u, &m), Some(q));
    }

    #[test]
    fn gcd_with_gaussian_coefficients() {
        let i = CycloNum::zeta(4);
        let lin = |c: CycloNum| Poly::from_coeffs(vec![-&c, CycloNum::from_int(1)]);
        let common = &lin(i.clone()) * &lin(CycloNum::from_frac(2, 3));
        let a = &common * &lin(CycloNum::from_int(5));
        let b = &common * &lin(-&i);
        assert_eq!(modular_gcd(&a, &b), Some(common.monic()));
    }
}
