//! Φ-objects: a δ-module with δ-linear structure maps of prescribed
//! tensor signatures, over `F` or over a finite extension `S`.
//!
//! An object over `S` is `F^r ⊗ S`, with the `S` index last. A map of
//! `S`-modules `F^p ⊗ S → F^q ⊗ S` is stored by its values on `F^p ⊗ 1`,
//! a `(q·k)×p` matrix over `F` called its generator form.

use crate::diffmod::RMat;
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::ratfunc::RatFunc;

use super::hopf_galois::{Algebra, FinHopfGalois};

/// `(n1, n2, n3, n4)`: a map `M^{⊗n1}⊗H^{⊗n2} → M^{⊗n3}⊗H^{⊗n4}`.
pub type Signature = [usize; 4];

/// The auxiliary Hopf algebra `H` in signatures; only its dimension enters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PhiType {
    pub hopf_dim: usize,
    pub signatures: Vec<Signature>,
}

impl PhiType {
    pub fn plain() -> Self {
        PhiType { hopf_dim: 1, signatures: vec![] }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PhiObject {
    /// Rank over the base algebra.
    pub rank: usize,
    pub base: Algebra,
    /// `(r·k)×(r·k)` over `F`.
    pub derivation: RMat,
    pub ty: PhiType,
    /// Generator forms, one per signature.
    pub maps: Vec<RMat>,
    /// `Δ_N: N → N⊗H'`, `(r·k·g)×(r·k)`, when the object is equivariant.
    pub coaction: Option<RMat>,
}

/// Which factor of a tensor power.
#[derive(Clone, Copy)]
enum Slot {
    M,
    H,
}

fn slots(n_m: usize, n_h: usize) -> Vec<Slot> {
    let mut v = vec![Slot::M; n_m];
    v.extend(std::iter::repeat(Slot::H).take(n_h));
    v
}

impl PhiObject {
    /// A plain object over `F`; checks shapes and δ-linearity of the maps.
    pub fn new(derivation: RMat, ty: PhiType, maps: Vec<RMat>) -> Result<Self> {
        let obj = PhiObject {
            rank: derivation.rows(),
            base: Algebra::base(),
            derivation,
            ty,
            maps,
            coaction: None,
        };
        obj.validate()?;
        Ok(obj)
    }

    /// The trivial object `F^d` with no structure maps.
    pub fn trivial(d: usize) -> Self {
        PhiObject {
            rank: d,
            base: Algebra::base(),
            derivation: Matrix::zeros(d, d),
            ty: PhiType::plain(),
            maps: vec![],
            coaction: None,
        }
    }

    pub fn k(&self) -> usize {
        self.base.dim()
    }

    /// `F`-dimension `r·k`.
    pub fn f_dim(&self) -> usize {
        self.rank * self.k()
    }

    pub fn is_over_f(&self) -> bool {
        self.k() == 1
    }

    /// Rank of `M^{⊗n_m}⊗H^{⊗n_h}` over the base.
    pub fn power_rank(&self, n_m: usize, n_h: usize) -> usize {
        self.rank.pow(n_m as u32) * self.ty.hopf_dim.pow(n_h as u32)
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.f_dim();
        if self.derivation.rows() != n || !self.derivation.is_square() {
            return Err(Error::DimensionMismatch(format!(
                "derivation must be {n}x{n}, got {}x{}",
                self.derivation.rows(),
                self.derivation.cols()
            )));
        }
        if self.maps.len() != self.ty.signatures.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} signatures but {} structure maps",
                self.ty.signatures.len(),
                self.maps.len()
            )));
        }
        for (i, (sig, m)) in self.ty.signatures.iter().zip(&self.maps).enumerate() {
            let p = self.power_rank(sig[0], sig[1]);
            let q = self.power_rank(sig[2], sig[3]);
            if m.rows() != q * self.k() || m.cols() != p {
                return Err(Error::DimensionMismatch(format!(
                    "structure map {i} must be {}x{p}, got {}x{}",
                    q * self.k(),
                    m.rows(),
                    m.cols()
                )));
            }
            if !self.map_is_delta_linear(sig, m) {
                return Err(Error::Axiom(format!("structure map {i} is not δ-linear")));
            }
        }
        Ok(())
    }

    /// Generator form of the identity of `F^p ⊗ S`.
    pub fn iota(&self, p: usize) -> RMat {
        Matrix::identity(p).kron(&Matrix::column(self.base.unit().to_vec()))
    }

    /// Generator form of `δ` on the generators `f_a⊗1`.
    fn generator_derivation(&self) -> RMat {
        let iota = self.iota(self.rank);
        iota.derivative().sub(&self.derivation.mul(&iota))
    }

    /// The `F`-matrix of the derivation on `M^{⊗n_m}⊗H^{⊗n_h}⊗S`, in the
    /// convention `δ(v) = v' − D·v`.
    pub fn power_derivation(&self, n_m: usize, n_h: usize) -> RMat {
        let sl = slots(n_m, n_h);
        let p = self.power_rank(n_m, n_h);
        let k = self.k();
        let mut gen = Matrix::zeros(p * k, p);
        for (pos, _) in sl.iter().enumerate().filter(|(_, s)| matches!(s, Slot::M)) {
            let factors: Vec<RMat> = sl
                .iter()
                .enumerate()
                .map(|(i, s)| match (i == pos, s) {
                    (true, _) => self.generator_derivation(),
                    (false, Slot::M) => self.iota(self.rank),
                    (false, Slot::H) => self.iota(self.ty.hopf_dim),
                })
                .collect();
            gen = gen.add(&box_all(&self.base, &factors));
        }
        // δ(g·s) = δ(g)·s + g·δ(s)
        expand(&self.base, &gen.neg()).add(&Matrix::identity(p).kron(self.base.derivation()))
    }

    fn map_is_delta_linear(&self, sig: &Signature, m: &RMat) -> bool {
        let full = expand(&self.base, m);
        let src = self.power_derivation(sig[0], sig[1]);
        let tgt = self.power_derivation(sig[2], sig[3]);
        full.derivative().add(&full.mul(&src)) == tgt.mul(&full)
    }

    /// `φ^{⊗n_m}⊗1_H^{⊗n_h}` in generator form, for `φ` in generator form.
    pub fn power_of(&self, phi: &RMat, n_m: usize, n_h: usize) -> RMat {
        let factors: Vec<RMat> = slots(n_m, n_h)
            .iter()
            .map(|s| match s {
                Slot::M => phi.clone(),
                Slot::H => self.iota(self.ty.hopf_dim),
            })
            .collect();
        box_all(&self.base, &factors)
    }
}

/// Full `F`-matrix of an `S`-linear map from its generator form.
pub fn expand(alg: &Algebra, g: &RMat) -> RMat {
    let k = alg.dim();
    if k == 1 {
        return g.clone();
    }
    let q = g.rows() / k;
    let p = g.cols();
    let mut out = Matrix::zeros(q * k, p * k);
    for c in 0..p {
        for i in 0..k {
            let ei = alg.basis(i);
            for a in 0..q {
                let block: Vec<RatFunc> = (0..k).map(|s| g.get(a * k + s, c).clone()).collect();
                if block.iter().all(|x| x.is_zero()) {
                    continue;
                }
                for (l, v) in alg.smul(&block, &ei).into_iter().enumerate() {
                    out.set(a * k + l, c * k + i, v);
                }
            }
        }
    }
    out
}

/// Tensor product over `S` of two maps in generator form.
pub fn boxed(alg: &Algebra, x: &RMat, y: &RMat) -> RMat {
    let k = alg.dim();
    if k == 1 {
        return x.kron(y);
    }
    let (q1, p1) = (x.rows() / k, x.cols());
    let (q2, p2) = (y.rows() / k, y.cols());
    let mut out = Matrix::zeros(q1 * q2 * k, p1 * p2);
    for c in 0..p1 {
        for e in 0..p2 {
            for a in 0..q1 {
                let xa: Vec<RatFunc> = (0..k).map(|s| x.get(a * k + s, c).clone()).collect();
                if xa.iter().all(|v| v.is_zero()) {
                    continue;
                }
                for b in 0..q2 {
                    let yb: Vec<RatFunc> = (0..k).map(|s| y.get(b * k + s, e).clone()).collect();
                    if yb.iter().all(|v| v.is_zero()) {
                        continue;
                    }
                    for (l, v) in alg.smul(&xa, &yb).into_iter().enumerate() {
                        out.set((a * q2 + b) * k + l, c * p2 + e, v);
                    }
                }
            }
        }
    }
    out
}

/// Iterated [`boxed`]; the empty product is the unit `F → S`.
pub fn box_all(alg: &Algebra, factors: &[RMat]) -> RMat {
    factors
        .iter()
        .fold(Matrix::column(alg.unit().to_vec()), |acc, f| boxed(alg, &acc, f))
}

/// Composition of `S`-linear maps in generator form.
pub fn compose(alg: &Algebra, a: &RMat, b: &RMat) -> RMat {
    expand(alg, a).mul(b)
}

/// True iff `φ` (generator form, `M → N`) is δ-linear and commutes with
/// every structure map.
pub fn is_phi_morphism(phi: &RMat, m: &PhiObject, n: &PhiObject) -> bool {
    let k = m.k();
    if n.k() != k
        || m.base != n.base
        || m.ty != n.ty
        || phi.rows() != n.rank * k
        || phi.cols() != m.rank
    {
        return false;
    }
    let full = expand(&m.base, phi);
    if full.derivative().add(&full.mul(&m.derivation)) != n.derivation.mul(&full) {
        return false;
    }
    m.ty.signatures.iter().zip(m.maps.iter().zip(&n.maps)).all(|(sig, (fm, fnn))| {
        let lhs = compose(&m.base, fnn, &m.power_of(phi, sig[0], sig[1]));
        let rhs = compose(&m.base, &m.power_of(phi, sig[2], sig[3]), fm);
        lhs == rhs
    })
}

/// True iff `φ` is a Φ-automorphism of the trivial object `M` with all
/// entries constant.
pub fn aut_is_constant_check(phi: &RMat, m: &PhiObject) -> bool {
    m.derivation.is_zero()
        && is_phi_morphism(phi, m, m)
        && phi.is_square()
        && phi.inverse().is_some()
        && phi.is_constant()
}

/// `M⊗S` as an equivariant object over `S`, with coaction `1_M⊗Δ_S`.
pub fn extend_scalars(m: &PhiObject, s: &FinHopfGalois) -> Result<PhiObject> {
    if !m.is_over_f() {
        return Err(Error::Invalid("extension of scalars needs an object over F".into()));
    }
    let k = s.dim();
    let u = Matrix::column(s.alg.unit().to_vec());
    let ir = Matrix::identity(m.rank);
    let derivation = m
        .derivation
        .kron(&Matrix::identity(k))
        .add(&ir.kron(s.alg.derivation()));
    Ok(PhiObject {
        rank: m.rank,
        base: s.alg.clone(),
        derivation,
        ty: m.ty.clone(),
        maps: m.maps.iter().map(|f| f.kron(&u)).collect(),
        coaction: Some(ir.kron(&s.coaction)),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclo::CycloNum;
    use crate::parse::parse;

    fn rf(s: &str) -> RatFunc {
        parse(s, 1).unwrap()
    }

    #[test]
    fn morphism_examples() {
        let m = PhiObject::trivial(1);
        assert!(is_phi_morphism(&Matrix::identity(1), &m, &m));
        let zeta = RatFunc::constant(CycloNum::zeta(3));
        assert!(is_phi_morphism(&Matrix::scalar(1, zeta.clone()), &m, &m));
        assert!(!is_phi_morphism(&Matrix::scalar(1, rf("x")), &m, &m));
        assert!(aut_is_constant_check(&Matrix::identity(2), &PhiObject::trivial(2)));
        assert!(aut_is_constant_check(&Matrix::scalar(2, zeta), &PhiObject::trivial(2)));
        let with_x = Matrix::from_rows(vec![vec![rf("1"), rf("x")], vec![rf("0"), rf("1")]]);
        assert!(!aut_is_constant_check(&with_x, &PhiObject::trivial(2)));
    }

    #[test]
    fn structure_maps_constrain_morphisms() {
        // a horizontal vector of the trivial rank-2 object
        let ty = PhiType { hopf_dim: 1, signatures: vec![[0, 0, 1, 0]] };
        let v = Matrix::column(vec![rf("1"), rf("0")]);
        let m = PhiObject::new(Matrix::zeros(2, 2), ty, vec![v]).unwrap();
        let swap = Matrix::from_rows(vec![vec![rf("0"), rf("1")], vec![rf("1"), rf("0")]]);
        assert!(!is_phi_morphism(&swap, &m, &m));
        let fix = Matrix::from_rows(vec![vec![rf("1"), rf("2")], vec![rf("0"), rf("3")]]);
        assert!(is_phi_morphism(&fix, &m, &m));
    }

    #[test]
    fn rejects_non_delta_linear_map() {
        let ty = PhiType { hopf_dim: 1, signatures: vec![[0, 0, 1, 0]] };
        let v = Matrix::column(vec![rf("x")]);
        assert!(matches!(PhiObject::new(Matrix::zeros(1, 1), ty, vec![v]), Err(Error::Axiom(_))));
    }

    #[test]
    fn extension_derivation_is_kronecker_sum() {
        let m = PhiObject::new(
            Matrix::from_rows(vec![vec![rf("1/(2*x)")]]),
            PhiType::plain(),
            vec![],
        )
        .unwrap();
        let s = FinHopfGalois::kummer(2);
        let n = extend_scalars(&m, &s).unwrap();
        assert_eq!(n.derivation, Matrix::diagonal(&[rf("1/(2*x)"), rf("0")]));
        assert_eq!(n.coaction.as_ref().unwrap(), &s.coaction);
        // S⊗S derivation agrees with the Leibniz rule
        let two = PhiType { hopf_dim: 1, signatures: vec![] };
        let t = PhiObject { ty: two, ..n.clone() };
        assert_eq!(t.power_derivation(1, 0), n.derivation);
    }
}
