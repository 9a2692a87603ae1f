//! Word-size prime field arithmetic and dense polynomials over `F_p`.
//!
//! Used for coprimality certificates and as the first stage of integer
//! polynomial factorization.

use rand::Rng;

#[inline]
pub fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

#[inline]
pub fn addmod(a: u64, b: u64, p: u64) -> u64 {
    let s = a as u128 + b as u128;
    (s % p as u128) as u64
}

#[inline]
pub fn submod(a: u64, b: u64, p: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        p - (b - a)
    }
}

pub fn powmod(mut base: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1 % p;
    base %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, base, p);
        }
        base = mulmod(base, base, p);
        e >>= 1;
    }
    r
}

/// Inverse modulo a prime; `a` must be nonzero mod `p`.
pub fn invmod(a: u64, p: u64) -> u64 {
    debug_assert!(a % p != 0);
    powmod(a, p - 2, p)
}

/// Deterministic Miller-Rabin for all 64-bit inputs.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for q in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % q == 0 {
            return n == q;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Distinct prime divisors of a small integer.
pub fn prime_divisors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut q = 2;
    while q * q <= n {
        if n % q == 0 {
            out.push(q);
            while n % q == 0 {
                n /= q;
            }
        }
        q += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Primes `p ≡ 1 (mod n)` just below `2^62`, in decreasing order.
pub fn large_primes_1_mod(n: u64) -> impl Iterator<Item = u64> {
    let top = (1u64 << 62) - 1;
    let start = top - (top - 1) % n;
    (0..)
        .map(move |i| start - i * n)
        .filter(|&p| is_prime(p))
}

/// A primitive `n`-th root of unity modulo `p`, where `n | p - 1`.
pub fn primitive_root_of_unity(n: u64, p: u64) -> u64 {
    assert_eq!((p - 1) % n, 0);
    if n == 1 {
        return 1;
    }
    let qs = prime_divisors(n);
    for a in 2..p {
        let r = powmod(a, (p - 1) / n, p);
        if qs.iter().all(|&q| powmod(r, n / q, p) != 1) {
            return r;
        }
    }
    unreachable!("no root of unity of order {n} mod {p}")
}

/// Dense polynomial over `F_p`, lowest degree first, no trailing zeros.
pub type PolyP = Vec<u64>;

pub fn trim(v: &mut PolyP) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

pub fn deg(a: &[u64]) -> Option<usize> {
    if a.is_empty() {
        None
    } else {
        Some(a.len() - 1)
    }
}

pub fn add(a: &[u64], b: &[u64], p: u64) -> PolyP {
    let n = a.len().max(b.len());
    let mut out: PolyP = (0..n)
        .map(|i| {
            addmod(
                a.get(i).copied().unwrap_or(0),
                b.get(i).copied().unwrap_or(0),
                p,
            )
        })
        .collect();
    trim(&mut out);
    out
}

pub fn sub(a: &[u64], b: &[u64], p: u64) -> PolyP {
    let n = a.len().max(b.len());
    let mut out: PolyP = (0..n)
        .map(|i| {
            submod(
                a.get(i).copied().unwrap_or(0),
                b.get(i).copied().unwrap_or(0),
                p,
            )
        })
        .collect();
    trim(&mut out);
    out
}

pub fn mul(a: &[u64], b: &[u64], p: u64) -> PolyP {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = addmod(out[i + j], mulmod(x, y, p), p);
        }
    }
    trim(&mut out);
    out
}

pub fn scale(a: &[u64], c: u64, p: u64) -> PolyP {
    let mut out: PolyP = a.iter().map(|&x| mulmod(x, c, p)).collect();
    trim(&mut out);
    out
}

/// Quotient and remainder; `b` must be nonzero.
pub fn divrem(a: &[u64], b: &[u64], p: u64) -> (PolyP, PolyP) {
    let db = deg(b).expect("division by zero polynomial");
    let mut rem = a.to_vec();
    if rem.len() <= db {
        return (Vec::new(), rem);
    }
    let inv = invmod(b[db], p);
    let mut q = vec![0u64; rem.len() - db];
    for i in (0..q.len()).rev() {
        let c = mulmod(rem[i + db], inv, p);
        if c == 0 {
            continue;
        }
        q[i] = c;
        for (j, &bj) in b.iter().enumerate() {
            rem[i + j] = submod(rem[i + j], mulmod(c, bj, p), p);
        }
    }
    rem.truncate(db);
    trim(&mut rem);
    trim(&mut q);
    (q, rem)
}

pub fn rem(a: &[u64], b: &[u64], p: u64) -> PolyP {
    divrem(a, b, p).1
}

pub fn monic(a: &[u64], p: u64) -> PolyP {
    match a.last() {
        None => Vec::new(),
        Some(&lc) => scale(a, invmod(lc, p), p),
    }
}

/// Monic gcd (zero if both inputs are zero).
pub fn gcd(a: &[u64], b: &[u64], p: u64) -> PolyP {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    while !y.is_empty() {
        let r = rem(&x, &y, p);
        x = y;
        y = r;
    }
    monic(&x, p)
}

/// Returns `(g, s, t)` with `s·a + t·b = g` monic.
pub fn ext_gcd(a: &[u64], b: &[u64], p: u64) -> (PolyP, PolyP, PolyP) {
    let (mut r0, mut r1) = (a.to_vec(), b.to_vec());
    let (mut s0, mut s1) = (vec![1u64], Vec::new());
    let (mut t0, mut t1) = (Vec::new(), vec![1u64]);
    while !r1.is_empty() {
        let (q, r) = divrem(&r0, &r1, p);
        let s2 = sub(&s0, &mul(&q, &s1, p), p);
        let t2 = sub(&t0, &mul(&q, &t1, p), p);
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s2);
        t0 = std::mem::replace(&mut t1, t2);
    }
    match r0.last() {
        None => (r0, s0, t0),
        Some(&lc) => {
            let inv = invmod(lc, p);
            (scale(&r0, inv, p), scale(&s0, inv, p), scale(&t0, inv, p))
        }
    }
}

pub fn derivative(a: &[u64], p: u64) -> PolyP {
    let mut out: PolyP = a
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, &c)| mulmod(c, i as u64 % p, p))
        .collect();
    trim(&mut out);
    out
}

/// `base^e mod m`.
pub fn powmod_poly(base: &[u64], mut e: u128, m: &[u64], p: u64) -> PolyP {
    let mut result = vec![1u64];
    let mut b = rem(base, m, p);
    while e > 0 {
        if e & 1 == 1 {
            result = rem(&mul(&result, &b, p), m, p);
        }
        b = rem(&mul(&b, &b, p), m, p);
        e >>= 1;
    }
    result
}

/// Distinct-degree factorization of a monic squarefree polynomial:
/// pairs `(d, product of all irreducible factors of degree d)`.
pub fn distinct_degree(f: &[u64], p: u64) -> Vec<(usize, PolyP)> {
    let mut out = Vec::new();
    let mut rest = f.to_vec();
    let x = vec![0u64, 1];
    let mut h = x.clone();
    let mut d = 0;
    while deg(&rest).unwrap_or(0) >= 2 * (d + 1) {
        d += 1;
        h = powmod_poly(&h, p as u128, &rest, p);
        let g = gcd(&sub(&h, &x, p), &rest, p);
        if g.len() > 1 {
            out.push((d, g.clone()));
            rest = divrem(&rest, &g, p).0;
            h = rem(&h, &rest, p);
        }
    }
    if rest.len() > 1 {
        out.push((rest.len() - 1, rest));
    }
    out
}

/// Splits a product of distinct monic irreducibles of degree `d` (odd `p`).
pub fn equal_degree<R: Rng>(f: &[u64], d: usize, p: u64, rng: &mut R) -> Vec<PolyP> {
    let n = f.len() - 1;
    if n == d {
        return vec![f.to_vec()];
    }
    loop {
        let a: PolyP = {
            let mut v: PolyP = (0..n).map(|_| rng.gen_range(0..p)).collect();
            trim(&mut v);
            v
        };
        if a.len() < 2 {
            continue;
        }
        // a^((p^d - 1)/2) = (a · a^p · … · a^(p^(d-1)))^((p-1)/2)
        let mut t = a.clone();
        let mut prod = a;
        for _ in 1..d {
            t = powmod_poly(&t, p as u128, f, p);
            prod = rem(&mul(&prod, &t, p), f, p);
        }
        let b = sub(&powmod_poly(&prod, (p as u128 - 1) / 2, f, p), &[1], p);
        let g = gcd(&b, f, p);
        if g.len() > 1 && g.len() < f.len() {
            let h = divrem(f, &g, p).0;
            let mut out = equal_degree(&g, d, p, rng);
            out.extend(equal_degree(&h, d, p, rng));
            return out;
        }
    }
}

/// Irreducible monic factors of a monic squarefree polynomial over `F_p`.
pub fn factor_squarefree<R: Rng>(f: &[u64], p: u64, rng: &mut R) -> Vec<PolyP> {
    let mut out = Vec::new();
    for (d, g) in distinct_degree(f, p) {
        out.extend(equal_degree(&g, d, p, rng));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn primality() {
        let small: Vec<u64> = (0..60).filter(|&n| is_prime(n)).collect();
        assert_eq!(
            small,
            vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59]
        );
        assert!(is_prime((1 << 61) - 1));
        assert!(!is_prime(3215031751));
    }

    #[test]
    fn roots_of_unity() {
        for n in [1u64, 2, 4, 12, 60] {
            let p = large_primes_1_mod(n).next().unwrap();
            assert_eq!(p % n, 1 % n);
            let r = primitive_root_of_unity(n, p);
            assert_eq!(powmod(r, n, p), 1);
        }
    }

    #[test]
    fn factor_mod_p_multiplies_back() {
        let p = 101;
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        // (x^2+1)(x-3)(x^3+x+1)
        let f = mul(&mul(&[1, 0, 1], &[p - 3, 1], p), &[1, 1, 0, 1], p);
        let parts = factor_squarefree(&f, p, &mut rng);
        let prod = parts.iter().fold(vec![1u64], |acc, g| mul(&acc, g, p));
        assert_eq!(prod, f);
        for g in &parts {
            assert_eq!(distinct_degree(g, p).len(), 1);
        }
    }

    #[test]
    fn ext_gcd_bezout() {
        let p = 97;
        let a = vec![5, 3, 0, 1];
        let b = vec![2, 0, 7];
        let (g, s, t) = ext_gcd(&a, &b, p);
        assert_eq!(g, vec![1]);
        assert_eq!(add(&mul(&s, &a, p), &mul(&t, &b, p), p), vec![1]);
    }
}
