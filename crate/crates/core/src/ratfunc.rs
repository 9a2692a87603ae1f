//! The differential field `Q(ζ_N)(x)` with derivation `d/dx`.
//!
//! Values are kept in lowest terms with a monic denominator, so derived
//! equality is field equality. Sums and products use Henrici's gcd-splitting
//! formulas.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_rational::BigRational;

use crate::cyclo::CycloNum;
use crate::field::Field;
use crate::poly::{gcd, Poly};

/// A rational function `num / den` in canonical form.
#[derive(Clone, PartialEq, Eq)]
pub struct RatFunc {
    num: Poly,
    den: Poly,
}

impl RatFunc {
    pub fn zero() -> RatFunc {
        RatFunc {
            num: Poly::zero(),
            den: Poly::one(),
        }
    }

    pub fn one() -> RatFunc {
        RatFunc::from_poly(Poly::one())
    }

    pub fn x() -> RatFunc {
        RatFunc::from_poly(Poly::x())
    }

    pub fn from_poly(p: Poly) -> RatFunc {
        RatFunc {
            num: p,
            den: Poly::one(),
        }
    }

    pub fn constant(c: CycloNum) -> RatFunc {
        RatFunc::from_poly(Poly::constant(c))
    }

    pub fn from_int(n: i64) -> RatFunc {
        RatFunc::constant(CycloNum::from_int(n))
    }

    pub fn from_frac(n: i64, d: i64) -> RatFunc {
        RatFunc::constant(CycloNum::from_frac(n, d))
    }

    /// `num / den` brought to canonical form; `None` if `den` is zero.
    pub fn new(num: Poly, den: Poly) -> Option<RatFunc> {
        if den.is_zero() {
            return None;
        }
        if num.is_zero() {
            return Some(RatFunc::zero());
        }
        let g = gcd(&num, &den);
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (num.div_exact(&g).unwrap(), den.div_exact(&g).unwrap())
        };
        let lc = den.lc().unwrap().clone();
        if lc.is_one() {
            return Some(RatFunc { num, den });
        }
        let inv = lc.inv().unwrap();
        Some(RatFunc {
            num: num.scale(&inv),
            den: den.scale(&inv),
        })
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn is_poly(&self) -> bool {
        self.den.is_one()
    }

    /// The value as a constant of `Q(ζ_N)`, if it is one.
    pub fn to_constant(&self) -> Option<CycloNum> {
        if !self.den.is_one() || !self.num.is_constant() {
            return None;
        }
        Some(if self.num.is_zero() {
            CycloNum::from_int(0)
        } else {
            self.num.coeffs()[0].clone()
        })
    }

    /// Least common level of all coefficients.
    pub fn level(&self) -> u32 {
        num_integer::lcm(self.num.level(), self.den.level())
    }

    /// Re-embeds every coefficient at level `n` (a multiple of the level).
    pub fn at_level(&self, n: u32) -> RatFunc {
        RatFunc {
            num: self.num.at_level(n),
            den: self.den.at_level(n),
        }
    }

    pub fn scale(&self, c: &CycloNum) -> RatFunc {
        if c.is_zero() {
            return RatFunc::zero();
        }
        RatFunc {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    pub fn scale_int(&self, n: i64) -> RatFunc {
        self.scale(&CycloNum::from_int(n))
    }

    /// Multiplicative inverse, `None` for zero.
    pub fn inv(&self) -> Option<RatFunc> {
        if self.is_zero() {
            return None;
        }
        let lc = self.num.lc().unwrap().inv().unwrap();
        Some(RatFunc {
            num: self.den.scale(&lc),
            den: self.num.scale(&lc),
        })
    }

    pub fn div(&self, other: &RatFunc) -> Option<RatFunc> {
        other.inv().map(|o| self * &o)
    }

    /// Integer power; `None` for a negative power of zero.
    pub fn pow(&self, e: i64) -> Option<RatFunc> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let e = e.unsigned_abs() as u32;
        Some(RatFunc {
            num: base.num.pow(e),
            den: base.den.pow(e),
        })
    }

    /// `d/dx`, produced directly in canonical form.
    pub fn derivative(&self) -> RatFunc {
        if self.den.is_one() {
            return RatFunc::from_poly(self.num.derivative());
        }
        // with g = gcd(b, b') and b = g·c: (a/b)' = (a'·c - a·(b'/g)) / (b·c)
        let b = &self.den;
        let bd = b.derivative();
        let g = gcd(b, &bd);
        let c = b.div_exact(&g).unwrap();
        let bdg = bd.div_exact(&g).unwrap();
        let num = &(&self.num.derivative() * &c) - &(&self.num * &bdg);
        if num.is_zero() {
            return RatFunc::zero();
        }
        RatFunc {
            num,
            den: b * &c,
        }
    }

    /// Evaluates at a point that is not a pole.
    pub fn eval(&self, at: &CycloNum) -> Option<CycloNum> {
        let d = self.den.eval(at);
        if d.is_zero() {
            return None;
        }
        Some(&self.num.eval(at) * &d.inv().unwrap())
    }

    pub fn weight(&self) -> usize {
        let w = |p: &Poly| p.coeffs().iter().map(|c| c.bit_size() + 1).sum::<usize>();
        w(&self.num) + w(&self.den)
    }
}

impl<'a> Add<&'a RatFunc> for &'a RatFunc {
    type Output = RatFunc;
    fn add(self, rhs: &RatFunc) -> RatFunc {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.den.is_one() && rhs.den.is_one() {
            return RatFunc::from_poly(&self.num + &rhs.num);
        }
        let g = gcd(&self.den, &rhs.den);
        if g.is_one() {
            let num = &(&self.num * &rhs.den) + &(&rhs.num * &self.den);
            if num.is_zero() {
                return RatFunc::zero();
            }
            return RatFunc {
                num,
                den: &self.den * &rhs.den,
            };
        }
        let b1 = self.den.div_exact(&g).unwrap();
        let d1 = rhs.den.div_exact(&g).unwrap();
        let t = &(&self.num * &d1) + &(&rhs.num * &b1);
        if t.is_zero() {
            return RatFunc::zero();
        }
        let h = gcd(&t, &g);
        if h.is_one() {
            return RatFunc {
                num: t,
                den: &(&b1 * &d1) * &g,
            };
        }
        RatFunc {
            num: t.div_exact(&h).unwrap(),
            den: &(&b1 * &d1) * &g.div_exact(&h).unwrap(),
        }
    }
}

impl<'a> Sub<&'a RatFunc> for &'a RatFunc {
    type Output = RatFunc;
    fn sub(self, rhs: &RatFunc) -> RatFunc {
        self + &(-rhs)
    }
}

impl Neg for &RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        RatFunc {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl<'a> Mul<&'a RatFunc> for &'a RatFunc {
    type Output = RatFunc;
    fn mul(self, rhs: &RatFunc) -> RatFunc {
        if self.is_zero() || rhs.is_zero() {
            return RatFunc::zero();
        }
        let g1 = gcd(&self.num, &rhs.den);
        let g2 = gcd(&rhs.num, &self.den);
        let cut = |p: &Poly, g: &Poly| {
            if g.is_one() {
                p.clone()
            } else {
                p.div_exact(g).unwrap()
            }
        };
        let num = &cut(&self.num, &g1) * &cut(&rhs.num, &g2);
        let den = &cut(&self.den, &g2) * &cut(&rhs.den, &g1);
        let lc = den.lc().unwrap().clone();
        if lc.is_one() {
            RatFunc { num, den }
        } else {
            // gcds are monic, so this only happens for non-monic inputs
            let inv = lc.inv().unwrap();
            RatFunc {
                num: num.scale(&inv),
                den: den.scale(&inv),
            }
        }
    }
}

impl Field for RatFunc {
    fn zero() -> Self {
        RatFunc::zero()
    }
    fn one() -> Self {
        RatFunc::one()
    }
    fn is_zero(&self) -> bool {
        RatFunc::is_zero(self)
    }
    fn is_one(&self) -> bool {
        RatFunc::is_one(self)
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
        RatFunc::weight(self)
    }
}

impl From<Poly> for RatFunc {
    fn from(p: Poly) -> RatFunc {
        RatFunc::from_poly(p)
    }
}

impl From<CycloNum> for RatFunc {
    fn from(c: CycloNum) -> RatFunc {
        RatFunc::constant(c)
    }
}

impl From<BigRational> for RatFunc {
    fn from(q: BigRational) -> RatFunc {
        RatFunc::constant(CycloNum::from_rational(q))
    }
}

impl fmt::Display for RatFunc {
    /// `(num)` for polynomials, `(num)/(den)` otherwise.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "({})", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lin(c: i64) -> Poly {
        Poly::from_ints(&[c, 1])
    }

    #[test]
    fn canonical_form() {
        let f = RatFunc::new(Poly::from_ints(&[1]), Poly::from_ints(&[0, 2])).unwrap();
        assert_eq!(f.den(), &Poly::x());
        assert_eq!(f.num(), &Poly::constant(CycloNum::from_frac(1, 2)));
        let g = RatFunc::new(&lin(1) * &lin(2), &lin(1) * &lin(3)).unwrap();
        assert_eq!(g, RatFunc::new(lin(2), lin(3)).unwrap());
        assert!(RatFunc::new(Poly::one(), Poly::zero()).is_none());
    }

    #[test]
    fn derivative_examples() {
        assert_eq!(RatFunc::x().derivative(), RatFunc::one());
        let inv_x = RatFunc::x().inv().unwrap();
        assert_eq!(
            inv_x.derivative(),
            RatFunc::new(Poly::from_ints(&[-1]), Poly::from_ints(&[0, 0, 1])).unwrap()
        );
        // (x^2+1)/(x-1) -> (x^2-2x-1)/(x-1)^2
        let f = RatFunc::new(Poly::from_ints(&[1, 0, 1]), lin(-1)).unwrap();
        let want = RatFunc::new(Poly::from_ints(&[-1, -2, 1]), lin(-1).pow(2)).unwrap();
        assert_eq!(f.derivative(), want);
    }

    #[test]
    fn derivative_with_repeated_factor() {
        // 1/x^3 -> -3/x^4
        let f = RatFunc::new(Poly::one(), Poly::x().pow(3)).unwrap();
        let want = RatFunc::new(Poly::from_ints(&[-3]), Poly::x().pow(4)).unwrap();
        assert_eq!(f.derivative(), want);
    }

    #[test]
    fn henrici_sum_cancels() {
        let a = RatFunc::new(Poly::one(), lin(-1)).unwrap();
        let b = RatFunc::new(Poly::from_ints(&[-1]), lin(-1)).unwrap();
        assert!((&a + &b).is_zero());
        let c = RatFunc::new(Poly::one(), &lin(-1) * &lin(1)).unwrap();
        let d = RatFunc::new(Poly::one(), &lin(-1) * &lin(2)).unwrap();
        // 1/((x-1)(x+1)) - 1/((x-1)(x+2)) = 1/((x-1)(x+1)(x+2))
        let want = RatFunc::new(Poly::one(), &(&lin(-1) * &lin(1)) * &lin(2)).unwrap();
        assert_eq!(&c - &d, want);
    }

    #[test]
    fn display() {
        let f = RatFunc::new(Poly::from_ints(&[1]), Poly::from_ints(&[0, 2])).unwrap();
        assert_eq!(f.to_string(), "(1/2)/(x)");
        assert_eq!(RatFunc::zero().to_string(), "(0)");
    }
}
