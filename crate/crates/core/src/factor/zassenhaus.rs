//! Factorization of squarefree primitive integer polynomials by modular
//! factorization, quadratic Hensel lifting and recombination of lifted factors.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::modp::{self, PolyP};

/// Integer polynomial, lowest degree first, no trailing zeros.
pub type ZPoly = Vec<BigInt>;

const CANDIDATE_PRIMES: usize = 5;

fn ztrim(mut v: ZPoly) -> ZPoly {
    while v.last().map_or(false, |c| c.is_zero()) {
        v.pop();
    }
    v
}

fn zmul(a: &[BigInt], b: &[BigInt]) -> ZPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    ztrim(out)
}

fn zadd(a: &[BigInt], b: &[BigInt]) -> ZPoly {
    let n = a.len().max(b.len());
    let out = (0..n)
        .map(|i| {
            let mut c = a.get(i).cloned().unwrap_or_default();
            if let Some(y) = b.get(i) {
                c += y;
            }
            c
        })
        .collect();
    ztrim(out)
}

fn zsub(a: &[BigInt], b: &[BigInt]) -> ZPoly {
    let neg: ZPoly = b.iter().map(|c| -c).collect();
    zadd(a, &neg)
}

fn zmod(a: &[BigInt], m: &BigInt) -> ZPoly {
    ztrim(a.iter().map(|c| c.mod_floor(m)).collect())
}

/// Symmetric representatives in `(-m/2, m/2]`.
fn zsym(a: &[BigInt], m: &BigInt) -> ZPoly {
    let half = m / 2;
    ztrim(
        a.iter()
            .map(|c| {
                let r = c.mod_floor(m);
                if r > half {
                    r - m
                } else {
                    r
                }
            })
            .collect(),
    )
}

/// Division by a monic polynomial modulo `m`.
fn zdivrem_monic(a: &[BigInt], b: &[BigInt], m: &BigInt) -> (ZPoly, ZPoly) {
    let db = b.len() - 1;
    let mut rem = zmod(a, m);
    if rem.len() <= db {
        return (Vec::new(), rem);
    }
    let mut q = vec![BigInt::zero(); rem.len() - db];
    for i in (0..q.len()).rev() {
        let c = rem[i + db].mod_floor(m);
        if c.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            rem[i + j] = (&rem[i + j] - &c * bj).mod_floor(m);
        }
        q[i] = c;
    }
    rem.truncate(db);
    (ztrim(q), zmod(&rem, m))
}

/// Exact division over `Z`, `None` if `b` does not divide `a`.
pub fn zdiv_exact(a: &[BigInt], b: &[BigInt]) -> Option<ZPoly> {
    let db = b.len() - 1;
    if a.len() <= db {
        return if a.is_empty() { Some(Vec::new()) } else { None };
    }
    let lc = &b[db];
    let mut rem = a.to_vec();
    let mut q = vec![BigInt::zero(); a.len() - db];
    for i in (0..q.len()).rev() {
        let (c, r) = rem[i + db].div_rem(lc);
        if !r.is_zero() {
            return None;
        }
        if c.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            rem[i + j] -= &c * bj;
        }
        q[i] = c;
    }
    rem.iter().all(|c| c.is_zero()).then(|| ztrim(q))
}

pub fn content(a: &[BigInt]) -> BigInt {
    a.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
}

/// Primitive part with positive leading coefficient.
pub fn primitive_part(a: &[BigInt]) -> ZPoly {
    let c = content(a);
    if c.is_zero() {
        return Vec::new();
    }
    let c = if a.last().map_or(false, |l| l.is_negative()) {
        -c
    } else {
        c
    };
    a.iter().map(|x| x / &c).collect()
}

fn to_modp(a: &[BigInt], p: u64) -> PolyP {
    let bp = BigInt::from(p);
    let mut v: PolyP = a
        .iter()
        .map(|c| c.mod_floor(&bp).to_u64().unwrap())
        .collect();
    modp::trim(&mut v);
    v
}

fn from_modp(a: &[u64]) -> ZPoly {
    a.iter().map(|&c| BigInt::from(c)).collect()
}

fn modinv(a: &BigInt, m: &BigInt) -> BigInt {
    let e = a.mod_floor(m).extended_gcd(m);
    debug_assert!(e.gcd.is_one());
    e.x.mod_floor(m)
}

/// One quadratic Hensel step: lifts `f ≡ g·h`, `s·g + t·h ≡ 1` from `m` to `m²`.
fn hensel_step(
    f: &[BigInt],
    g: &[BigInt],
    h: &[BigInt],
    s: &[BigInt],
    t: &[BigInt],
    m: &BigInt,
) -> (ZPoly, ZPoly, ZPoly, ZPoly) {
    let mm = m * m;
    let e = zmod(&zsub(f, &zmul(g, h)), &mm);
    let (q, r) = zdivrem_monic(&zmul(s, &e), h, &mm);
    let g2 = zmod(&zadd(&zadd(g, &zmul(t, &e)), &zmul(&q, g)), &mm);
    let h2 = zmod(&zadd(h, &r), &mm);
    let b = zmod(
        &zsub(&zadd(&zmul(s, &g2), &zmul(t, &h2)), &[BigInt::one()]),
        &mm,
    );
    let (c, d) = zdivrem_monic(&zmul(s, &b), &h2, &mm);
    let s2 = zmod(&zsub(s, &d), &mm);
    let t2 = zmod(&zsub(&zsub(t, &zmul(t, &b)), &zmul(&c, &g2)), &mm);
    (g2, h2, s2, t2)
}

/// Lifts monic factors `u` of `f / lc(f)` mod `p` to monic factors mod `p^(2^steps)`.
fn multifactor_lift(f: &[BigInt], u: &[PolyP], p: u64, steps: u32) -> Vec<ZPoly> {
    let bp = BigInt::from(p);
    let modulus = (0..steps).fold(bp.clone(), |m, _| &m * &m);
    let lc = f.last().unwrap().clone();
    if u.len() == 1 {
        let inv = modinv(&lc, &modulus);
        return vec![zmod(&f.iter().map(|c| c * &inv).collect::<ZPoly>(), &modulus)];
    }
    let (left, right) = u.split_at(u.len() / 2);
    let lc_p = lc.mod_floor(&bp).to_u64().unwrap();
    let g0 = modp::scale(
        &left.iter().fold(vec![1u64], |acc, x| modp::mul(&acc, x, p)),
        lc_p,
        p,
    );
    let h0 = right.iter().fold(vec![1u64], |acc, x| modp::mul(&acc, x, p));
    let (one, s0, t0) = modp::ext_gcd(&g0, &h0, p);
    debug_assert_eq!(one, vec![1]);
    let (mut g, mut h, mut s, mut t) = (from_modp(&g0), from_modp(&h0), from_modp(&s0), from_modp(&t0));
    let mut m = bp;
    for _ in 0..steps {
        let fm = zmod(f, &(&m * &m));
        (g, h, s, t) = hensel_step(&fm, &g, &h, &s, &t, &m);
        m = &m * &m;
    }
    let mut out = multifactor_lift(&g, left, p, steps);
    out.extend(multifactor_lift(&h, right, p, steps));
    out
}

fn small_odd_primes() -> impl Iterator<Item = u64> {
    (3u64..).step_by(2).filter(|&n| modp::is_prime(n))
}

fn norm2_ceil(f: &[BigInt]) -> BigInt {
    let sq: BigInt = f.iter().map(|c| c * c).sum();
    sq.sqrt() + 1
}

fn for_each_subset(n: usize, k: usize, mut visit: impl FnMut(&[usize]) -> bool) {
    fn rec(
        start: usize,
        n: usize,
        k: usize,
        cur: &mut Vec<usize>,
        visit: &mut dyn FnMut(&[usize]) -> bool,
    ) -> bool {
        if cur.len() == k {
            return visit(cur);
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            if rec(i + 1, n, k, cur, visit) {
                return true;
            }
            cur.pop();
        }
        false
    }
    rec(0, n, k, &mut Vec::new(), &mut visit);
}

/// Irreducible factors over `Z` of a squarefree primitive polynomial with
/// positive leading coefficient.
pub fn factor_squarefree(f: &[BigInt]) -> Vec<ZPoly> {
    let n = f.len() - 1;
    if n <= 1 {
        return vec![f.to_vec()];
    }
    let lc = f[n].clone();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);

    // choose the prime giving the fewest modular factors
    let mut best: Option<(u64, usize)> = None;
    let mut tried = 0;
    for p in small_odd_primes() {
        if tried >= CANDIDATE_PRIMES {
            break;
        }
        if (&lc % BigInt::from(p)).is_zero() {
            continue;
        }
        let fp = modp::monic(&to_modp(f, p), p);
        if modp::gcd(&fp, &modp::derivative(&fp, p), p).len() != 1 {
            continue;
        }
        tried += 1;
        let count: usize = modp::distinct_degree(&fp, p)
            .iter()
            .map(|(d, g)| (g.len() - 1) / d)
            .sum();
        if best.map_or(true, |(_, c)| count < c) {
            best = Some((p, count));
        }
        if count == 1 {
            break;
        }
    }
    let (p, count) = best.expect("a suitable prime exists");
    if count == 1 {
        return vec![f.to_vec()];
    }
    let fp = modp::monic(&to_modp(f, p), p);
    let u = modp::factor_squarefree(&fp, p, &mut rng);

    // coefficient bound for lc times any factor
    let bound = norm2_ceil(f) * (BigInt::one() << n) * lc.abs();
    let bp = BigInt::from(p);
    let mut steps = 0u32;
    let mut modulus = bp.clone();
    while modulus <= &bound * 2 {
        modulus = &modulus * &modulus;
        steps += 1;
    }
    let lifted = multifactor_lift(f, &u, p, steps);

    let mut remaining: Vec<ZPoly> = lifted;
    let mut current = f.to_vec();
    let mut factors = Vec::new();
    let mut k = 1;
    while 2 * k <= remaining.len() {
        let cur_lc = current.last().unwrap().clone();
        let mut found: Option<(Vec<usize>, ZPoly, ZPoly)> = None;
        for_each_subset(remaining.len(), k, |idx| {
            let mut g = vec![cur_lc.clone()];
            for &i in idx {
                g = zmod(&zmul(&g, &remaining[i]), &modulus);
            }
            let g = zsym(&g, &modulus);
            // constant-term divisibility filter
            if !current[0].is_zero() && !g[0].is_zero() && !(&cur_lc * &current[0]).is_multiple_of(&g[0]) {
                return false;
            }
            let gp = primitive_part(&g);
            if let Some(q) = zdiv_exact(&current, &gp) {
                found = Some((idx.to_vec(), gp, q));
                return true;
            }
            false
        });
        match found {
            Some((idx, gp, q)) => {
                factors.push(gp);
                current = q;
                remaining = remaining
                    .into_iter()
                    .enumerate()
                    .filter(|(i, _)| !idx.contains(i))
                    .map(|(_, x)| x)
                    .collect();
            }
            None => k += 1,
        }
    }
    if current.len() > 1 {
        factors.push(primitive_part(&current));
    }
    factors
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(cs: &[i64]) -> ZPoly {
        cs.iter().map(|&c| BigInt::from(c)).collect()
    }

    fn product(fs: &[ZPoly]) -> ZPoly {
        fs.iter().fold(z(&[1]), |acc, f| zmul(&acc, f))
    }

    #[test]
    fn splits_into_known_factors() {
        // (x^2+1)(x-3)(2x+5)(x^3-x-1)
        let parts = vec![z(&[1, 0, 1]), z(&[-3, 1]), z(&[5, 2]), z(&[-1, -1, 0, 1])];
        let f = product(&parts);
        let mut got = factor_squarefree(&f);
        got.sort();
        let mut want = parts;
        want.sort();
        assert_eq!(got, want);
    }

    #[test]
    fn irreducible_with_many_modular_factors() {
        // x^4 + 1 splits modulo every prime but is irreducible over Z
        assert_eq!(factor_squarefree(&z(&[1, 0, 0, 0, 1])), vec![z(&[1, 0, 0, 0, 1])]);
        // x^4 - 10x^2 + 1 likewise
        let f = z(&[1, 0, -10, 0, 1]);
        assert_eq!(factor_squarefree(&f), vec![f.clone()]);
    }

    #[test]
    fn cyclotomic_split() {
        // x^12 - 1
        let f = z(&[-1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1]);
        let got = factor_squarefree(&f);
        assert_eq!(got.len(), 6);
        assert_eq!(product(&got), f);
    }

    #[test]
    fn exact_division() {
        assert_eq!(zdiv_exact(&z(&[-1, 0, 1]), &z(&[1, 1])), Some(z(&[-1, 1])));
        assert_eq!(zdiv_exact(&z(&[1, 0, 1]), &z(&[1, 1])), None);
        assert_eq!(zdiv_exact(&z(&[1, 0, 1]), &z(&[0, 2])), None);
    }
}
