//! Dense univariate polynomials over cyclotomic fields.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::cyclo::{self, CycloNum};
use crate::modp::{self, PolyP};

/// Degree of a polynomial; the zero polynomial has degree `-∞`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Degree {
    NegInfinity,
    Finite(usize),
}

/// A polynomial in `x` with coefficients in `Q(ζ_N)`, lowest degree first.
#[derive(Clone, PartialEq, Eq)]
pub struct Poly {
    coeffs: Vec<CycloNum>,
}

impl Poly {
    pub fn zero() -> Poly {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Poly {
        Poly::constant(CycloNum::from_int(1))
    }

    pub fn x() -> Poly {
        Poly::from_coeffs(vec![CycloNum::from_int(0), CycloNum::from_int(1)])
    }

    pub fn constant(c: CycloNum) -> Poly {
        Poly::from_coeffs(vec![c])
    }

    /// `c·x^k`.
    pub fn monomial(c: CycloNum, k: usize) -> Poly {
        let mut coeffs = vec![CycloNum::zero_at(c.level()); k + 1];
        coeffs[k] = c;
        Poly::from_coeffs(coeffs)
    }

    /// Builds a polynomial, trimming trailing zeros.
    pub fn from_coeffs(mut coeffs: Vec<CycloNum>) -> Poly {
        while coeffs.last().map_or(false, |c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn from_ints(cs: &[i64]) -> Poly {
        Poly::from_coeffs(cs.iter().map(|&c| CycloNum::from_int(c)).collect())
    }

    pub fn from_rationals(cs: &[BigRational]) -> Poly {
        Poly::from_coeffs(cs.iter().cloned().map(CycloNum::from_rational).collect())
    }

    pub fn coeffs(&self) -> &[CycloNum] {
        &self.coeffs
    }

    /// Coefficient of `x^i` (zero beyond the degree).
    pub fn coeff(&self, i: usize) -> CycloNum {
        self.coeffs
            .get(i)
            .cloned()
            .unwrap_or_else(|| CycloNum::zero_at(self.level()))
    }

    pub fn degree(&self) -> Degree {
        match self.coeffs.len() {
            0 => Degree::NegInfinity,
            n => Degree::Finite(n - 1),
        }
    }

    /// Degree as an option (`None` for zero).
    pub fn deg(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn lc(&self) -> Option<&CycloNum> {
        self.coeffs.last()
    }

    /// Least common level of the coefficients (1 for rational polynomials).
    pub fn level(&self) -> u32 {
        self.coeffs
            .iter()
            .filter(|c| !c.is_rational())
            .fold(1u32, |acc, c| acc.lcm(&c.level()))
    }

    /// True if every coefficient is rational.
    pub fn is_rational(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_rational())
    }

    /// Rational coefficients, if all coefficients are rational.
    pub fn to_rationals(&self) -> Option<Vec<BigRational>> {
        self.coeffs.iter().map(|c| c.to_rational()).collect()
    }

    /// Re-embeds every coefficient at level `n` (a multiple of each level).
    pub fn at_level(&self, n: u32) -> Poly {
        Poly {
            coeffs: self.coeffs.iter().map(|c| c.at_level(n)).collect(),
        }
    }

    pub fn scale(&self, c: &CycloNum) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    /// Makes the polynomial monic (zero stays zero).
    pub fn monic(&self) -> Poly {
        match self.lc() {
            None => Poly::zero(),
            Some(lc) if lc.is_one() => self.clone(),
            Some(lc) => self.scale(&lc.inv().expect("nonzero leading coefficient")),
        }
    }

    pub fn derivative(&self) -> Poly {
        Poly::from_coeffs(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c.scale(&BigRational::from_integer(BigInt::from(i))))
                .collect(),
        )
    }

    pub fn eval(&self, at: &CycloNum) -> CycloNum {
        let mut acc = CycloNum::zero_at(at.level());
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * at) + c;
        }
        acc
    }

    /// `f(x + c)`.
    pub fn shift(&self, c: &CycloNum) -> Poly {
        let lin = Poly::from_coeffs(vec![c.clone(), CycloNum::from_int(1)]);
        let mut acc = Poly::zero();
        for a in self.coeffs.iter().rev() {
            acc = &(&acc * &lin) + &Poly::constant(a.clone());
        }
        acc
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut result = Poly::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Quotient and remainder; panics on division by zero.
    pub fn divrem(&self, b: &Poly) -> (Poly, Poly) {
        let db = b.deg().expect("polynomial division by zero");
        if self.coeffs.len() <= db {
            return (Poly::zero(), self.clone());
        }
        let lc = &b.coeffs[db];
        let lc_inv = if lc.is_one() { None } else { lc.inv() };
        let mut rem = self.coeffs.clone();
        let mut q = vec![CycloNum::zero_at(1); rem.len() - db];
        for i in (0..q.len()).rev() {
            if rem[i + db].is_zero() {
                continue;
            }
            let c = match &lc_inv {
                None => rem[i + db].clone(),
                Some(inv) => &rem[i + db] * inv,
            };
            for (j, bj) in b.coeffs.iter().enumerate().take(db) {
                if !bj.is_zero() {
                    rem[i + j] = &rem[i + j] - &(&c * bj);
                }
            }
            q[i] = c;
        }
        rem.truncate(db);
        (Poly::from_coeffs(q), Poly::from_coeffs(rem))
    }

    pub fn rem(&self, b: &Poly) -> Poly {
        self.divrem(b).1
    }

    /// Exact quotient, or `None` if `b` does not divide `self`.
    pub fn div_exact(&self, b: &Poly) -> Option<Poly> {
        let (q, r) = self.divrem(b);
        r.is_zero().then_some(q)
    }

    /// Image modulo the prime `p` with `ζ ↦ root`; `None` if a denominator vanishes.
    pub fn reduce_mod(&self, p: u64, level: u32, root: u64) -> Option<PolyP> {
        let big_p = BigInt::from(p);
        let mut out = Vec::with_capacity(self.coeffs.len());
        for c in &self.coeffs {
            if c.is_rational() {
                out.push(rational_mod(&c.coords()[0], &big_p, p)?);
                continue;
            }
            let c = c.at_level(level);
            let mut acc = 0u64;
            let mut rp = 1u64;
            for q in c.coords() {
                if !q.is_zero() {
                    let v = rational_mod(q, &big_p, p)?;
                    acc = modp::addmod(acc, modp::mulmod(v, rp, p), p);
                }
                rp = modp::mulmod(rp, root, p);
            }
            out.push(acc);
        }
        Some(out)
    }
}

fn rational_mod(q: &BigRational, big_p: &BigInt, p: u64) -> Option<u64> {
    let n = q.numer().mod_floor(big_p).to_u64()?;
    let d = q.denom().mod_floor(big_p).to_u64()?;
    if d == 0 {
        return None;
    }
    Some(modp::mulmod(n, modp::invmod(d, p), p))
}

/// Monic greatest common divisor.
pub fn gcd(a: &Poly, b: &Poly) -> Poly {
    if a.is_zero() {
        return b.monic();
    }
    if b.is_zero() {
        return a.monic();
    }
    if a.is_constant() || b.is_constant() {
        return Poly::one();
    }
    if let Some(g) = crate::modgcd::modular_gcd(a, b) {
        return g;
    }
    let (mut x, mut y) = if a.deg() >= b.deg() {
        (a.monic(), b.monic())
    } else {
        (b.monic(), a.monic())
    };
    while !y.is_zero() {
        let r = x.rem(&y).monic();
        x = y;
        y = r;
    }
    x
}

/// Returns `(g, s, t)` with `s·a + t·b = g = gcd(a, b)` monic.
pub fn ext_gcd(a: &Poly, b: &Poly) -> (Poly, Poly, Poly) {
    let (mut r0, mut r1) = (a.clone(), b.clone());
    let (mut s0, mut s1) = (Poly::one(), Poly::zero());
    let (mut t0, mut t1) = (Poly::zero(), Poly::one());
    while !r1.is_zero() {
        let (q, r) = r0.divrem(&r1);
        let s2 = &s0 - &(&q * &s1);
        let t2 = &t0 - &(&q * &t1);
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s2);
        t0 = std::mem::replace(&mut t1, t2);
    }
    match r0.lc().cloned() {
        None => (r0, s0, t0),
        Some(lc) => {
            let inv = lc.inv().unwrap();
            (r0.scale(&inv), s0.scale(&inv), t0.scale(&inv))
        }
    }
}

/// Inverse of `a` modulo `m`, if they are coprime.
pub fn inverse_mod(a: &Poly, m: &Poly) -> Option<Poly> {
    let (g, s, _) = ext_gcd(&a.rem(m), m);
    g.is_one().then(|| s.rem(m))
}

/// Product of the distinct monic irreducible factors of `a`.
pub fn squarefree_part(a: &Poly) -> Poly {
    if a.is_constant() {
        return Poly::one();
    }
    let g = gcd(a, &a.derivative());
    a.monic().div_exact(&g).expect("gcd divides")
}

/// Yun's algorithm: monic squarefree, pairwise coprime `a_i` with
/// `a = lc · Π a_i^i`; returned as `(a_i, i)` for nonconstant `a_i`.
pub fn squarefree_decomposition(a: &Poly) -> Vec<(Poly, u32)> {
    let mut out = Vec::new();
    if a.is_constant() {
        return out;
    }
    let f = a.monic();
    let fd = f.derivative();
    let a0 = gcd(&f, &fd);
    let mut b = f.div_exact(&a0).unwrap();
    let mut c = fd.div_exact(&a0).unwrap();
    let mut d = &c - &b.derivative();
    let mut i = 1;
    loop {
        let g = gcd(&b, &d);
        if !g.is_constant() {
            out.push((g.clone(), i));
        }
        b = b.div_exact(&g).unwrap();
        if b.is_constant() {
            break;
        }
        c = d.div_exact(&g).unwrap();
        d = &c - &b.derivative();
        i += 1;
    }
    out
}

impl<'a> Add<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let (long, short) = if self.coeffs.len() >= rhs.coeffs.len() {
            (self, rhs)
        } else {
            (rhs, self)
        };
        let mut coeffs = long.coeffs.clone();
        for (i, c) in short.coeffs.iter().enumerate() {
            coeffs[i] = &coeffs[i] + c;
        }
        Poly::from_coeffs(coeffs)
    }
}

impl<'a> Sub<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self + &(-rhs)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl<'a> Mul<&'a Poly> for &'a Poly {
    type Output = Poly;
    /// Multiplies over a common denominator so that rationals are reduced
    /// once per output coordinate.
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let level = self.level().lcm(&rhs.level());
        let ctx = cyclo::context(level);
        let phi = ctx.phi();
        let (a, da) = self.integer_form(level, phi);
        let (b, db) = rhs.integer_form(level, phi);
        let width = 2 * phi - 1;
        let mut raw = vec![vec![BigInt::zero(); width]; a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            for (s, xs) in x.iter().enumerate() {
                if xs.is_zero() {
                    continue;
                }
                for (j, y) in b.iter().enumerate() {
                    let slot = &mut raw[i + j];
                    for (t, yt) in y.iter().enumerate() {
                        if !yt.is_zero() {
                            slot[s + t] += xs * yt;
                        }
                    }
                }
            }
        }
        let den = da * db;
        let powers = ctx.power_table();
        let coeffs = raw
            .into_iter()
            .map(|mut r| {
                for e in phi..width {
                    if r[e].is_zero() {
                        continue;
                    }
                    let c = std::mem::take(&mut r[e]);
                    for (l, pw) in powers[e].iter().enumerate() {
                        if !pw.is_zero() {
                            r[l] += &c * pw;
                        }
                    }
                }
                r.truncate(phi);
                let coords = r
                    .into_iter()
                    .map(|c| BigRational::new(c, den.clone()))
                    .collect();
                CycloNum::from_coords(level, coords)
            })
            .collect();
        Poly::from_coeffs(coeffs)
    }
}

impl Poly {
    /// Integer coordinate vectors at `level` and their common denominator.
    fn integer_form(&self, level: u32, phi: usize) -> (Vec<Vec<BigInt>>, BigInt) {
        let coords: Vec<Vec<BigRational>> = self
            .coeffs
            .iter()
            .map(|c| {
                if c.is_rational() {
                    let mut v = vec![BigRational::zero(); phi];
                    v[0] = c.coords()[0].clone();
                    v
                } else {
                    c.at_level(level).coords().to_vec()
                }
            })
            .collect();
        let den = coords
            .iter()
            .flatten()
            .fold(BigInt::from(1), |acc, q| acc.lcm(q.denom()));
        let ints = coords
            .into_iter()
            .map(|v| {
                v.into_iter()
                    .map(|q| {
                        if q.is_zero() {
                            BigInt::zero()
                        } else {
                            q.numer() * (&den / q.denom())
                        }
                    })
                    .collect()
            })
            .collect();
        (ints, den)
    }
}

fn fmt_coeff(c: &CycloNum) -> (bool, String) {
    match c.to_rational() {
        Some(q) => {
            let neg = q < BigRational::zero();
            let mag = if neg { -q } else { q };
            (neg, CycloNum::from_rational(mag).to_string())
        }
        None => (false, c.to_string()),
    }
}

impl fmt::Display for Poly {
    /// Highest degree first, e.g. `x^2-2*x-1` or `(zeta)*x+1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut out = String::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let (neg, mag) = fmt_coeff(c);
            if neg {
                out.push('-');
            } else if !out.is_empty() {
                out.push('+');
            }
            let mono = match i {
                0 => String::new(),
                1 => "x".to_string(),
                _ => format!("x^{i}"),
            };
            if i == 0 {
                out.push_str(&mag);
            } else if mag == "1" {
                out.push_str(&mono);
            } else {
                out.push_str(&mag);
                out.push('*');
                out.push_str(&mono);
            }
        }
        f.write_str(&out)
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly[{self}]")
    }
}
