//! Exact arithmetic in cyclotomic fields `Q(ζ_N)`.
//!
//! Elements are stored as coordinate vectors in the power basis
//! `1, ζ, …, ζ^{φ(N)-1}`. Elements of different levels are combined by
//! embedding both into `Q(ζ_lcm)`.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, RwLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use once_cell::sync::Lazy;



/// Largest supported cyclotomic level.
pub const MAX_LEVEL: u32 = 720;

/// Precomputed data for one cyclotomic level.
#[derive(Debug)]
pub struct CycloCtx {
    level: u32,
    phi: usize,
    /// Coefficients of `Φ_N`, lowest degree first (monic).
    modulus: Vec<BigInt>,
    /// `x^e mod Φ_N` for `e < max(N, 2φ-1)`.
    powers: Vec<Vec<BigInt>>,
}

impl CycloCtx {
    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn phi(&self) -> usize {
        self.phi
    }

    pub fn modulus(&self) -> &[BigInt] {
        &self.modulus
    }

    /// `x^e mod Φ_N` as integer coordinates, for `e < max(N, 2φ-1)`.
    pub fn power_table(&self) -> &[Vec<BigInt>] {
        &self.powers
    }

    fn build(level: u32) -> CycloCtx {
        let modulus = cyclotomic_poly(level);
        let phi = modulus.len() - 1;
        let count = (level as usize).max(2 * phi).max(2);
        let mut powers = Vec::with_capacity(count);
        let mut cur = vec![BigInt::zero(); phi];
        cur[0] = BigInt::one();
        for _ in 0..count {
            powers.push(cur.clone());
            // multiply by x and reduce
            let top = cur[phi - 1].clone();
            let mut next = vec![BigInt::zero(); phi];
            for i in (1..phi).rev() {
                next[i] = cur[i - 1].clone();
            }
            if !top.is_zero() {
                for (i, m) in modulus.iter().take(phi).enumerate() {
                    next[i] -= &top * m;
                }
            }
            cur = next;
        }
        CycloCtx {
            level,
            phi,
            modulus,
            powers,
        }
    }
}

static CONTEXTS: Lazy<RwLock<HashMap<u32, Arc<CycloCtx>>>> =
    Lazy::new(|| RwLock::new(HashMap::new()));

/// Shared context for level `n` (cached).
pub fn context(level: u32) -> Arc<CycloCtx> {
    assert!(
        (1..=MAX_LEVEL).contains(&level),
        "cyclotomic level {level} out of range"
    );
    if let Some(c) = CONTEXTS.read().unwrap().get(&level) {
        return c.clone();
    }
    let built = Arc::new(CycloCtx::build(level));
    CONTEXTS
        .write()
        .unwrap()
        .entry(level)
        .or_insert(built)
        .clone()
}

/// Euler's totient.
pub fn totient(n: u32) -> usize {
    let mut n = n;
    let mut result = n;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            while n % p == 0 {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result as usize
}

/// Integer coefficients of the `n`-th cyclotomic polynomial, lowest first.
pub fn cyclotomic_poly(n: u32) -> Vec<BigInt> {
    // x^n - 1 divided by Φ_d for all proper divisors d
    let mut num: Vec<BigInt> = vec![BigInt::zero(); n as usize + 1];
    num[0] = -BigInt::one();
    num[n as usize] = BigInt::one();
    for d in 1..n {
        if n % d == 0 {
            let div = cyclotomic_poly(d);
            num = exact_div_monic(&num, &div);
        }
    }
    num
}

fn exact_div_monic(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut rem = a.to_vec();
    let db = b.len() - 1;
    let da = a.len() - 1;
    let mut q = vec![BigInt::zero(); da - db + 1];
    for i in (0..=da - db).rev() {
        let c = rem[i + db].clone();
        if c.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            rem[i + j] -= &c * bj;
        }
        q[i] = c;
    }
    debug_assert!(rem.iter().all(|c| c.is_zero()));
    q
}

/// An element of `Q(ζ_N)`.
#[derive(Clone)]
pub struct CycloNum {
    ctx: Arc<CycloCtx>,
    coeffs: Vec<BigRational>,
}

impl CycloNum {
    pub fn zero_at(level: u32) -> Self {
        let ctx = context(level);
        let coeffs = vec![BigRational::zero(); ctx.phi];
        CycloNum { ctx, coeffs }
    }

    pub fn from_rational_at(q: BigRational, level: u32) -> Self {
        let mut z = Self::zero_at(level);
        z.coeffs[0] = q;
        z
    }

    pub fn from_rational(q: BigRational) -> Self {
        Self::from_rational_at(q, 1)
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_int_at(n: i64, level: u32) -> Self {
        Self::from_rational_at(BigRational::from_integer(BigInt::from(n)), level)
    }

    pub fn from_frac(n: i64, d: i64) -> Self {
        Self::from_rational(BigRational::new(BigInt::from(n), BigInt::from(d)))
    }

    /// `ζ_N^e` at level `N`.
    pub fn zeta_pow(level: u32, e: i64) -> Self {
        let ctx = context(level);
        let e = e.rem_euclid(level as i64) as usize;
        let coeffs = ctx.powers[e]
            .iter()
            .map(|c| BigRational::from_integer(c.clone()))
            .collect();
        CycloNum { ctx, coeffs }
    }

    /// The generator `ζ_N`.
    pub fn zeta(level: u32) -> Self {
        Self::zeta_pow(level, 1)
    }

    /// Builds an element from power-basis coordinates (must have length φ(N)).
    pub fn from_coords(level: u32, coeffs: Vec<BigRational>) -> Self {
        let ctx = context(level);
        assert_eq!(coeffs.len(), ctx.phi, "coordinate vector has wrong length");
        CycloNum { ctx, coeffs }
    }

    pub fn level(&self) -> u32 {
        self.ctx.level
    }

    pub fn coords(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn ctx(&self) -> &Arc<CycloCtx> {
        &self.ctx
    }

    pub fn is_rational(&self) -> bool {
        self.coeffs[1..].iter().all(|c| c.is_zero())
    }

    /// The rational value, if the element lies in `Q`.
    pub fn to_rational(&self) -> Option<BigRational> {
        self.is_rational().then(|| self.coeffs[0].clone())
    }

    pub fn is_integer(&self) -> bool {
        self.is_rational() && self.coeffs[0].is_integer()
    }

    /// Embeds into `Q(ζ_target)`; `target` must be a multiple of the level.
    pub fn at_level(&self, target: u32) -> CycloNum {
        let level = self.level();
        if level == target {
            return self.clone();
        }
        if let Some(q) = self.to_rational() {
            return CycloNum::from_rational_at(q, target);
        }
        assert!(
            target % level == 0,
            "cannot embed level {level} into level {target}"
        );
        let step = (target / level) as usize;
        let ctx = context(target);
        let mut coeffs = vec![BigRational::zero(); ctx.phi];
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (l, p) in ctx.powers[i * step].iter().enumerate() {
                if !p.is_zero() {
                    coeffs[l] += c * p;
                }
            }
        }
        CycloNum { ctx, coeffs }
    }

    fn unify(&self, other: &CycloNum) -> (CycloNum, CycloNum) {
        let l = self.level().lcm(&other.level());
        (self.at_level(l), other.at_level(l))
    }

    fn same_level<R>(
        &self,
        other: &CycloNum,
        f: impl FnOnce(&CycloNum, &CycloNum) -> R,
    ) -> R {
        if self.level() == other.level() {
            f(self, other)
        } else if other.is_rational() {
            f(self, &other.rational_at(self.level()))
        } else if self.is_rational() {
            f(&self.rational_at(other.level()), other)
        } else {
            let (a, b) = self.unify(other);
            f(&a, &b)
        }
    }

    fn rational_at(&self, level: u32) -> CycloNum {
        CycloNum::from_rational_at(self.coeffs[0].clone(), level)
    }

    fn add_same(&self, other: &CycloNum) -> CycloNum {
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a + b)
            .collect();
        CycloNum {
            ctx: self.ctx.clone(),
            coeffs,
        }
    }

    fn sub_same(&self, other: &CycloNum) -> CycloNum {
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a - b)
            .collect();
        CycloNum {
            ctx: self.ctx.clone(),
            coeffs,
        }
    }

    fn mul_same(&self, other: &CycloNum) -> CycloNum {
        let phi = self.ctx.phi;
        if phi == 1 {
            return CycloNum {
                ctx: self.ctx.clone(),
                coeffs: vec![&self.coeffs[0] * &other.coeffs[0]],
            };
        }
        if other.is_rational() {
            return self.scale(&other.coeffs[0]);
        }
        if self.is_rational() {
            return other.scale(&self.coeffs[0]);
        }
        let mut prod = vec![BigRational::zero(); 2 * phi - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    prod[i + j] += a * b;
                }
            }
        }
        let mut coeffs: Vec<BigRational> = prod[..phi].to_vec();
        for (e, c) in prod.iter().enumerate().skip(phi) {
            if c.is_zero() {
                continue;
            }
            for (l, p) in self.ctx.powers[e].iter().enumerate() {
                if !p.is_zero() {
                    coeffs[l] += c * p;
                }
            }
        }
        CycloNum {
            ctx: self.ctx.clone(),
            coeffs,
        }
    }

    /// Multiplies by a rational scalar.
    pub fn scale(&self, q: &BigRational) -> CycloNum {
        CycloNum {
            ctx: self.ctx.clone(),
            coeffs: self.coeffs.iter().map(|c| c * q).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(|c| c.is_zero())
    }

    /// Multiplicative inverse, `None` for zero.
    pub fn inv(&self) -> Option<CycloNum> {
        if self.is_zero() {
            return None;
        }
        if self.is_rational() {
            return Some(CycloNum::from_rational_at(
                self.coeffs[0].recip(),
                self.level(),
            ));
        }
        // extended Euclid of the coordinate polynomial against Φ_N
        let modulus: Vec<BigRational> = self
            .ctx
            .modulus
            .iter()
            .map(|c| BigRational::from_integer(c.clone()))
            .collect();
        let a = trim_q(self.coeffs.clone());
        let (g, s) = qpoly_ext_gcd(&a, &modulus);
        debug_assert_eq!(g.len(), 1);
        let ginv = g[0].recip();
        let mut coeffs: Vec<BigRational> = s.iter().map(|c| c * &ginv).collect();
        coeffs.resize(self.ctx.phi, BigRational::zero());
        Some(CycloNum {
            ctx: self.ctx.clone(),
            coeffs,
        })
    }

    pub fn pow(&self, e: u64) -> CycloNum {
        let mut result = CycloNum::from_int_at(1, self.level());
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        result
    }

    /// Field norm `N_{Q(ζ_N)/Q}`, computed as the determinant of multiplication.
    pub fn norm(&self) -> BigRational {
        let phi = self.ctx.phi;
        if phi == 1 {
            return self.coeffs[0].clone();
        }
        let mut cols: Vec<Vec<BigRational>> = Vec::with_capacity(phi);
        for i in 0..phi {
            let basis = CycloNum::zeta_pow(self.level(), i as i64);
            cols.push((self * &basis).coeffs);
        }
        // row-major matrix [row][col]
        let mut m: Vec<Vec<BigRational>> = (0..phi)
            .map(|r| (0..phi).map(|c| cols[c][r].clone()).collect())
            .collect();
        rational_det(&mut m)
    }

    /// Total order used for canonical sorting (not a field order).
    pub fn canonical_cmp(&self, other: &CycloNum) -> Ordering {
        let (a, b) = self.unify(other);
        for (x, y) in a.coeffs.iter().zip(&b.coeffs) {
            match x.cmp(y) {
                Ordering::Equal => continue,
                o => return o,
            }
        }
        Ordering::Equal
    }

    /// Size estimate in bits.
    pub fn bit_size(&self) -> usize {
        self.coeffs
            .iter()
            .map(|c| (c.numer().abs().bits() + c.denom().bits()) as usize)
            .sum()
    }
}

fn trim_q(mut v: Vec<BigRational>) -> Vec<BigRational> {
    while v.len() > 1 && v.last().map_or(false, |c| c.is_zero()) {
        v.pop();
    }
    v
}

/// Returns `(g, s)` with `s·a ≡ g (mod b)`, `g = gcd(a, b)`.
fn qpoly_ext_gcd(a: &[BigRational], b: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
    let mut r0 = trim_q(b.to_vec());
    let mut r1 = trim_q(a.to_vec());
    let mut s0 = vec![BigRational::zero()];
    let mut s1 = vec![BigRational::one()];
    while !(r1.len() == 1 && r1[0].is_zero()) {
        let (q, r) = qpoly_divrem(&r0, &r1);
        let qs = qpoly_mul(&q, &s1);
        let s2 = qpoly_sub(&s0, &qs);
        r0 = r1;
        r1 = r;
        s0 = s1;
        s1 = s2;
    }
    (r0, s0)
}

fn qpoly_mul(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim_q(out)
}

fn qpoly_sub(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let n = a.len().max(b.len());
    let mut out = vec![BigRational::zero(); n];
    for (i, x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, y) in b.iter().enumerate() {
        out[i] -= y;
    }
    trim_q(out)
}

fn qpoly_divrem(a: &[BigRational], b: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
    let db = b.len() - 1;
    if a.len() - 1 < db || (a.len() == 1 && a[0].is_zero()) {
        return (vec![BigRational::zero()], a.to_vec());
    }
    let mut rem = a.to_vec();
    let lc_inv = b[db].recip();
    let mut q = vec![BigRational::zero(); a.len() - db];
    for i in (0..a.len() - db).rev() {
        let c = &rem[i + db] * &lc_inv;
        if c.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            rem[i + j] -= &c * bj;
        }
        q[i] = c;
    }
    rem.truncate(db.max(1));
    (trim_q(q), trim_q(rem))
}

/// Determinant of a square rational matrix (destroys its argument).
pub(crate) fn rational_det(m: &mut [Vec<BigRational>]) -> BigRational {
    let n = m.len();
    let mut det = BigRational::one();
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| !m[r][col].is_zero()) else {
            return BigRational::zero();
        };
        if piv != col {
            m.swap(piv, col);
            det = -det;
        }
        let p = m[col][col].clone();
        det *= &p;
        let pinv = p.recip();
        for r in col + 1..n {
            if m[r][col].is_zero() {
                continue;
            }
            let f = &m[r][col] * &pinv;
            for c in col..n {
                let v = &f * &m[col][c];
                m[r][c] -= v;
            }
        }
    }
    det
}

impl PartialEq for CycloNum {
    fn eq(&self, other: &Self) -> bool {
        if self.level() == other.level() {
            self.coeffs == other.coeffs
        } else {
            let (a, b) = self.unify(other);
            a.coeffs == b.coeffs
        }
    }
}

impl Eq for CycloNum {}

impl<'a> Add<&'a CycloNum> for &'a CycloNum {
    type Output = CycloNum;
    fn add(self, rhs: &CycloNum) -> CycloNum {
        self.same_level(rhs, |a, b| a.add_same(b))
    }
}

impl<'a> Sub<&'a CycloNum> for &'a CycloNum {
    type Output = CycloNum;
    fn sub(self, rhs: &CycloNum) -> CycloNum {
        self.same_level(rhs, |a, b| a.sub_same(b))
    }
}

impl<'a> Mul<&'a CycloNum> for &'a CycloNum {
    type Output = CycloNum;
    fn mul(self, rhs: &CycloNum) -> CycloNum {
        self.same_level(rhs, |a, b| a.mul_same(b))
    }
}

impl Neg for &CycloNum {
    type Output = CycloNum;
    fn neg(self) -> CycloNum {
        CycloNum {
            ctx: self.ctx.clone(),
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl crate::field::Field for CycloNum {
    fn zero() -> Self {
        CycloNum::zero_at(1)
    }
    fn one() -> Self {
        CycloNum::from_int(1)
    }
    fn is_zero(&self) -> bool {
        CycloNum::is_zero(self)
    }
    fn is_one(&self) -> bool {
        CycloNum::is_one(self)
    }
    fn plus(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn minus(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn times(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn negated(&self) -> Self {
        -self
    }
    fn inverse(&self) -> Option<Self> {
        self.inv()
    }
    fn weight(&self) -> usize {
        self.bit_size()
    }
}

fn fmt_rational(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

impl fmt::Display for CycloNum {
    /// Rationals print bare (`3`, `-1/2`); others as a parenthesized sum in `zeta`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_rational() {
            return write!(f, "{}", fmt_rational(&self.coeffs[0]));
        }
        let mut out = String::from("(");
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { "-" } else { "+" });
            }
            first = false;
            let monomial = match i {
                0 => String::new(),
                1 => "zeta".to_string(),
                _ => format!("zeta^{i}"),
            };
            if i == 0 {
                out.push_str(&fmt_rational(&mag));
            } else if mag.is_one() {
                out.push_str(&monomial);
            } else {
                out.push_str(&format!("{}*{}", fmt_rational(&mag), monomial));
            }
        }
        out.push(')');
        f.write_str(&out)
    }
}

impl fmt::Debug for CycloNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}@{}", self, self.level())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclotomic_polynomials() {
        let as_i64 = |n| {
            cyclotomic_poly(n)
                .iter()
                .map(|c| c.to_string().parse::<i64>().unwrap())
                .collect::<Vec<_>>()
        };
        assert_eq!(as_i64(1), vec![-1, 1]);
        assert_eq!(as_i64(2), vec![1, 1]);
        assert_eq!(as_i64(4), vec![1, 0, 1]);
        assert_eq!(as_i64(6), vec![1, -1, 1]);
        assert_eq!(as_i64(12), vec![1, 0, -1, 0, 1]);
        assert_eq!(totient(12), 4);
        assert_eq!(totient(7), 6);
    }

    #[test]
    fn zeta_powers_cycle() {
        for n in [3u32, 4, 5, 8, 12] {
            let z = CycloNum::zeta(n);
            assert!(z.pow(n as u64).is_one());
            assert!(!z.pow(n as u64 / 2).is_one() || n == 1);
        }
        assert_eq!(CycloNum::zeta(2), CycloNum::from_int(-1));
    }

    #[test]
    fn inverse_and_norm() {
        let z = CycloNum::zeta(5);
        let a = &z + &CycloNum::from_int(2);
        let inv = a.inv().unwrap();
        assert!((&a * &inv).is_one());
        // N(i) = 1, N(1+i) = 2
        let i = CycloNum::zeta(4);
        assert_eq!(i.norm(), BigRational::one());
        let one_plus_i = &i + &CycloNum::from_int(1);
        assert_eq!(one_plus_i.norm(), BigRational::from_integer(2.into()));
    }

    #[test]
    fn mixed_levels_embed() {
        let i = CycloNum::zeta(4);
        let w = CycloNum::zeta(3);
        let prod = &i * &w;
        assert_eq!(prod.level(), 12);
        assert_eq!(CycloNum::zeta(12).pow(3), i);
        assert_eq!(CycloNum::zeta(6).pow(2), w);
        assert_eq!(CycloNum::from_int(3), CycloNum::from_int_at(3, 8));
    }
}
