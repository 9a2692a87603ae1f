//! Partial fractions and the logarithmic-derivative tests built on them.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};

use crate::error::Result;
use crate::factor::{factor, poly_cmp};
use crate::poly::{inverse_mod, Poly};
use crate::ratfunc::RatFunc;

/// One summand `a / p^e` with `p` monic irreducible and `deg a < deg p`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PfTerm {
    pub p: Poly,
    pub e: u32,
    pub a: Poly,
}

/// `polypart + Σ a / p^e` over the constants `Q(ζ_N)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartialFractions {
    pub polypart: Poly,
    pub terms: Vec<PfTerm>,
}

impl PartialFractions {
    /// Sums the decomposition back into a single rational function.
    pub fn reassemble(&self) -> RatFunc {
        self.terms.iter().fold(RatFunc::from_poly(self.polypart.clone()), |acc, t| {
            let term = RatFunc::new(t.a.clone(), t.p.pow(t.e)).expect("nonzero denominator");
            &acc + &term
        })
    }

    /// The distinct irreducible denominators, in canonical order.
    pub fn poles(&self) -> Vec<Poly> {
        let mut ps: Vec<Poly> = Vec::new();
        for t in &self.terms {
            if !ps.contains(&t.p) {
                ps.push(t.p.clone());
            }
        }
        ps
    }
}

/// Full partial-fraction decomposition with denominators irreducible over
/// `Q(ζ_level)` (coefficient fields of `f` are adjoined).
pub fn partial_fractions(f: &RatFunc, level: u32) -> Result<PartialFractions> {
    let (polypart, rem) = f.num().divrem(f.den());
    let mut terms = Vec::new();
    if rem.is_zero() {
        return Ok(PartialFractions { polypart, terms });
    }
    let level = level.lcm(&f.level());
    for (p, m) in factor(f.den(), level)? {
        let block = p.pow(m);
        let cofactor = f.den().div_exact(&block).expect("factor divides");
        let inv = inverse_mod(&cofactor, &block).expect("coprime cofactor");
        // numerator over p^m, expanded p-adically
        let mut r = (&rem * &inv).rem(&block);
        let mut j = 0;
        while !r.is_zero() {
            let (q, c) = r.divrem(&p);
            if !c.is_zero() {
                terms.push(PfTerm {
                    p: p.clone(),
                    e: m - j,
                    a: c,
                });
            }
            r = q;
            j += 1;
        }
    }
    terms.sort_by(|s, t| poly_cmp(&s.p, &t.p).then(t.e.cmp(&s.e)));
    Ok(PartialFractions { polypart, terms })
}

/// `a / p' mod p` for a simple-pole term: the polynomial whose values at
/// the roots of `p` are the residues.
pub fn residue_poly(p: &Poly, a: &Poly) -> Poly {
    let inv = inverse_mod(&p.derivative(), p).expect("irreducible p is separable");
    (a * &inv).rem(p)
}

/// A witness `[(p_i, n_i)]` with `f = Σ n_i p_i'/p_i`, i.e. `f = g'/g` for
/// `g = Π p_i^{n_i}`, or `None` if `f` is not a logarithmic derivative.
pub fn is_log_derivative(f: &RatFunc, level: u32) -> Result<Option<Vec<(Poly, i64)>>> {
    let pf = partial_fractions(f, level)?;
    if !pf.polypart.is_zero() || pf.terms.iter().any(|t| t.e != 1) {
        return Ok(None);
    }
    let mut witness = Vec::new();
    for t in &pf.terms {
        let r = residue_poly(&t.p, &t.a);
        let Some(n) = constant_integer(&r) else {
            return Ok(None);
        };
        witness.push((t.p.clone(), n));
    }
    Ok(Some(witness))
}

fn constant_integer(r: &Poly) -> Option<i64> {
    if !r.is_constant() {
        return None;
    }
    let q = r.coeff(0).to_rational()?;
    if !q.is_integer() {
        return None;
    }
    q.to_integer().to_i64()
}

/// Smallest `k ≥ 1` with `k·f` a logarithmic derivative, with the witness
/// for `k·f`; `None` if no multiple is one.
pub fn log_scalable(f: &RatFunc, level: u32) -> Result<Option<(u64, Vec<(Poly, i64)>)>> {
    let pf = partial_fractions(f, level)?;
    if !pf.polypart.is_zero() || pf.terms.iter().any(|t| t.e != 1) {
        return Ok(None);
    }
    let mut residues = Vec::new();
    for t in &pf.terms {
        let r = residue_poly(&t.p, &t.a);
        if !r.is_constant() {
            return Ok(None);
        }
        // a non-rational constant has no integer multiple
        let Some(q) = r.coeff(0).to_rational() else {
            return Ok(None);
        };
        residues.push((t.p.clone(), q));
    }
    let k = residues
        .iter()
        .fold(BigInt::one(), |acc, (_, q)| acc.lcm(q.denom()));
    let Some(k64) = k.to_u64() else {
        return Ok(None);
    };
    let kq = BigRational::from_integer(k);
    let witness = residues
        .into_iter()
        .map(|(p, q)| {
            let n = (q * &kq).to_integer().to_i64().expect("small multiplicity");
            (p, n)
        })
        .collect();
    Ok(Some((k64, witness)))
}

/// `Π p_i^{n_i}` as a rational function.
pub fn witness_product(witness: &[(Poly, i64)]) -> RatFunc {
    witness.iter().fold(RatFunc::one(), |acc, (p, n)| {
        let pe = RatFunc::from_poly(p.clone()).pow(*n).expect("nonzero factor");
        &acc * &pe
    })
}

/// Nonzero `y ∈ F` with `y' = a·y`, when `a` is a logarithmic derivative.
pub fn rational_solution_rank1(a: &RatFunc, level: u32) -> Result<Option<RatFunc>> {
    Ok(is_log_derivative(a, level)?.map(|w| witness_product(&w)))
}

/// Logarithmic derivative `g'/g`.
pub fn log_derivative(g: &RatFunc) -> Option<RatFunc> {
    g.derivative().div(g)
}
