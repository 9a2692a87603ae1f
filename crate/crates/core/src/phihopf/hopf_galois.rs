//! Finite free δ-algebras over `F` and finite-group Hopf-Galois extensions.
//!
//! An element of an algebra of dimension `k` is a coordinate vector in
//! `F^k`. Its derivative is `δ(v) = v' − D·v`, so `v` is horizontal exactly
//! when `v' = D·v`.

use crate::cyclo::CycloNum;
use crate::diffmod::RMat;
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::ratfunc::RatFunc;

use super::group::{FinGroup, FinGroupHopf};

/// Commutative algebra `F^k` with structure constants over `F`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Algebra {
    k: usize,
    /// `k×k²`; column `i·k+j` holds `e_i·e_j`.
    mult: RMat,
    unit: Vec<RatFunc>,
    derivation: RMat,
}

impl Algebra {
    pub fn new(mult: RMat, unit: Vec<RatFunc>, derivation: RMat) -> Result<Self> {
        let k = unit.len();
        if mult.rows() != k || mult.cols() != k * k || derivation.rows() != k || !derivation.is_square() {
            return Err(Error::DimensionMismatch(format!(
                "algebra of dimension {k} needs a {k}x{} product table and a {k}x{k} derivation",
                k * k
            )));
        }
        Ok(Algebra { k, mult, unit, derivation })
    }

    /// `F` itself.
    pub fn base() -> Self {
        Algebra {
            k: 1,
            mult: Matrix::identity(1),
            unit: vec![RatFunc::one()],
            derivation: Matrix::zeros(1, 1),
        }
    }

    pub fn dim(&self) -> usize {
        self.k
    }

    pub fn mult(&self) -> &RMat {
        &self.mult
    }

    pub fn unit(&self) -> &[RatFunc] {
        &self.unit
    }

    pub fn derivation(&self) -> &RMat {
        &self.derivation
    }

    pub fn basis(&self, i: usize) -> Vec<RatFunc> {
        (0..self.k).map(|j| if i == j { RatFunc::one() } else { RatFunc::zero() }).collect()
    }

    /// Product of two elements.
    pub fn smul(&self, x: &[RatFunc], y: &[RatFunc]) -> Vec<RatFunc> {
        let k = self.k;
        let mut out = vec![RatFunc::zero(); k];
        for i in 0..k {
            if x[i].is_zero() {
                continue;
            }
            for j in 0..k {
                if y[j].is_zero() {
                    continue;
                }
                let c = &x[i] * &y[j];
                for (l, o) in out.iter_mut().enumerate() {
                    let m = self.mult.get(l, i * k + j);
                    if !m.is_zero() {
                        *o = &*o + &(&c * m);
                    }
                }
            }
        }
        out
    }

    /// `δ(v) = v' − D·v`.
    pub fn delta(&self, v: &[RatFunc]) -> Vec<RatFunc> {
        let dv = self.derivation.mul_vec(v);
        v.iter().zip(dv).map(|(a, b)| &a.derivative() - &b).collect()
    }

    /// Violated algebra axioms, as messages.
    pub fn failures(&self) -> Vec<String> {
        let k = self.k;
        let mut out = Vec::new();
        let e: Vec<Vec<RatFunc>> = (0..k).map(|i| self.basis(i)).collect();
        let prod = |i: usize, j: usize| self.mult.col(i * k + j);
        if (0..k).any(|i| self.smul(&self.unit, &e[i]) != e[i]) {
            out.push("algebra: unit fails".to_string());
        }
        if (0..k).any(|i| (0..k).any(|j| prod(i, j) != prod(j, i))) {
            out.push("algebra: not commutative".to_string());
        }
        let assoc = (0..k).all(|i| {
            (0..k).all(|j| {
                (0..k).all(|l| self.smul(&prod(i, j), &e[l]) == self.smul(&e[i], &prod(j, l)))
            })
        });
        if !assoc {
            out.push("algebra: not associative".to_string());
        }
        let leibniz = (0..k).all(|i| {
            (0..k).all(|j| {
                let lhs = self.delta(&prod(i, j));
                let a = self.smul(&self.delta(&e[i]), &e[j]);
                let b = self.smul(&e[i], &self.delta(&e[j]));
                lhs == a.iter().zip(&b).map(|(x, y)| x + y).collect::<Vec<_>>()
            })
        });
        if !leibniz {
            out.push("algebra: derivation violates the Leibniz rule".to_string());
        }
        out
    }
}

/// `S/F` with a coaction `Δ_S: S → S⊗H` of the function algebra of a
/// finite group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinHopfGalois {
    pub alg: Algebra,
    pub hopf: FinGroupHopf,
    /// `(k·g)×k`; row `s·g+h` is the `e_s⊗e_h` coordinate.
    pub coaction: RMat,
}

impl FinHopfGalois {
    pub fn new(alg: Algebra, group: FinGroup, coaction: RMat) -> Result<Self> {
        let (k, g) = (alg.dim(), group.order());
        if coaction.rows() != k * g || coaction.cols() != k {
            return Err(Error::DimensionMismatch(format!(
                "coaction must be {}x{k}, got {}x{}",
                k * g,
                coaction.rows(),
                coaction.cols()
            )));
        }
        Ok(FinHopfGalois { alg, hopf: FinGroupHopf::new(group), coaction })
    }

    /// `F` with the trivial group.
    pub fn trivial() -> Self {
        FinHopfGalois {
            alg: Algebra::base(),
            hopf: FinGroupHopf::new(FinGroup::trivial()),
            coaction: Matrix::identity(1),
        }
    }

    /// `F[t]/(t^k − x)` with `t' = t/(k·x)` and `Δ(t^i) = t^i ⊗ Σ_j ζ^{ij} e_j`.
    pub fn kummer(k: usize) -> Self {
        assert!(k >= 1);
        let x = RatFunc::x();
        let mult = Matrix::from_fn(k, k * k, |l, c| {
            let (i, j) = (c / k, c % k);
            match i + j {
                s if s < k && s == l => RatFunc::one(),
                s if s >= k && s - k == l => x.clone(),
                _ => RatFunc::zero(),
            }
        });
        let derivation = Matrix::diagonal(
            &(0..k).map(|i| RatFunc::from_frac(-(i as i64), k as i64).div(&x).unwrap()).collect::<Vec<_>>(),
        );
        let mut unit = vec![RatFunc::zero(); k];
        unit[0] = RatFunc::one();
        let level = k as u32;
        let coaction = Matrix::from_fn(k * k, k, |r, i| {
            let (s, h) = (r / k, r % k);
            if s == i {
                RatFunc::constant(CycloNum::zeta_pow(level, (i * h) as i64))
            } else {
                RatFunc::zero()
            }
        });
        FinHopfGalois {
            alg: Algebra { k, mult, unit, derivation },
            hopf: FinGroupHopf::new(FinGroup::cyclic(k)),
            coaction,
        }
    }

    /// The split extension `F^Γ` with its regular coaction.
    pub fn split(group: FinGroup) -> Self {
        let hopf = FinGroupHopf::new(group);
        let g = hopf.dim();
        let alg = Algebra {
            k: g,
            mult: hopf.multiplication(),
            unit: hopf.unit(),
            derivation: Matrix::zeros(g, g),
        };
        let coaction = hopf.comultiplication();
        FinHopfGalois { alg, hopf, coaction }
    }

    /// Same algebra with the coaction `s ↦ s⊗1`.
    pub fn with_constant_coaction(&self) -> Self {
        let ones = Matrix::column(self.hopf.unit());
        FinHopfGalois {
            coaction: Matrix::identity(self.dim()).kron(&ones),
            ..self.clone()
        }
    }

    /// Same algebra with the zero coaction.
    pub fn with_zero_coaction(&self) -> Self {
        FinHopfGalois {
            coaction: Matrix::zeros(self.coaction.rows(), self.coaction.cols()),
            ..self.clone()
        }
    }

    pub fn dim(&self) -> usize {
        self.alg.dim()
    }

    pub fn group(&self) -> &FinGroup {
        &self.hopf.group
    }

    /// The automorphism `σ = (1⊗ev_σ)∘Δ_S`, as a `k×k` matrix.
    pub fn sigma(&self, s: usize) -> RMat {
        let id = Matrix::identity(self.dim());
        id.kron(&self.hopf.evaluation(s)).mul(&self.coaction)
    }
}

/// The matrix of `can_S: x⊗y ↦ (x⊗1)·Δ_S(y)`, of size `(k·g)×k²`.
pub fn can_map(s: &FinHopfGalois) -> RMat {
    let (k, g) = (s.dim(), s.hopf.dim());
    let mult = s.alg.mult();
    let mut m = Matrix::zeros(k * g, k * k);
    for i in 0..k {
        for j in 0..k {
            for h in 0..g {
                for l in 0..k {
                    let mut acc = RatFunc::zero();
                    for t in 0..k {
                        let d = s.coaction.get(t * g + h, j);
                        let c = mult.get(l, i * k + t);
                        if !d.is_zero() && !c.is_zero() {
                            acc = &acc + &(d * c);
                        }
                    }
                    m.set(l * g + h, i * k + j, acc);
                }
            }
        }
    }
    m
}

/// Product in `S⊗H`, with `H` on the idempotent basis.
fn coaction_product(s: &FinHopfGalois, a: &[RatFunc], b: &[RatFunc]) -> Vec<RatFunc> {
    let (k, g) = (s.dim(), s.hopf.dim());
    let mut out = vec![RatFunc::zero(); k * g];
    for h in 0..g {
        let x: Vec<RatFunc> = (0..k).map(|t| a[t * g + h].clone()).collect();
        let y: Vec<RatFunc> = (0..k).map(|t| b[t * g + h].clone()).collect();
        for (l, v) in s.alg.smul(&x, &y).into_iter().enumerate() {
            out[l * g + h] = v;
        }
    }
    out
}

/// Every violated axiom; empty exactly when `S` is a δ-Hopf-Galois
/// extension.
pub fn hopf_galois_failures(s: &FinHopfGalois) -> Vec<String> {
    let (k, g) = (s.dim(), s.hopf.dim());
    let mut out = s.alg.failures();
    if let Err(e) = s.hopf.check() {
        out.push(format!("hopf algebra: {e}"));
    }
    let d = &s.coaction;
    let ik = Matrix::<RatFunc>::identity(k);
    let ig = Matrix::<RatFunc>::identity(g);
    if d.kron(&ig).mul(d) != ik.kron(&s.hopf.comultiplication()).mul(d) {
        out.push("coaction: not coassociative".to_string());
    }
    if !ik.kron(&s.hopf.counit()).mul(d).is_identity() {
        out.push("coaction: not counital".to_string());
    }
    let unit_image = d.mul_vec(s.alg.unit());
    let one_one: Vec<RatFunc> = s
        .alg
        .unit()
        .iter()
        .flat_map(|u| std::iter::repeat(u.clone()).take(g))
        .collect();
    let multiplicative = unit_image == one_one
        && (0..k).all(|i| {
            (0..k).all(|j| {
                let lhs = d.mul_vec(&s.alg.mult().col(i * k + j));
                lhs == coaction_product(s, &d.col(i), &d.col(j))
            })
        });
    if !multiplicative {
        out.push("coaction: not an algebra map".to_string());
    }
    let ds = s.alg.derivation();
    if d.derivative().add(&d.mul(ds)) != ds.kron(&ig).mul(d) {
        out.push("coaction: does not commute with the derivation".to_string());
    }
    let can = can_map(s);
    if !can.is_square() || can.rank() < can.rows() {
        out.push("canonical map is not invertible".to_string());
    }
    out
}

pub fn is_hopf_galois(s: &FinHopfGalois) -> bool {
    hopf_galois_failures(s).is_empty()
}

/// `Ok(())`, or [`Error::Axiom`] listing the failures.
pub fn check_hopf_galois(s: &FinHopfGalois) -> Result<()> {
    let f = hopf_galois_failures(s);
    if f.is_empty() {
        Ok(())
    } else {
        Err(Error::Axiom(f.join("; ")))
    }
}
