//! Coinvariants of equivariant objects and the descent roundtrip.

use crate::diffmod::RMat;
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::ratfunc::RatFunc;

use super::hopf_galois::{Algebra, FinHopfGalois};
use super::object::{box_all, compose, expand, extend_scalars, is_phi_morphism, PhiObject};

/// `N^{co H'}` as an object over `F`, with its inclusion into `N`.
#[derive(Clone, Debug)]
pub struct Coinvariants {
    pub object: PhiObject,
    /// `(r·k)×d'`; its columns span `N^{co H'}` over `F`.
    pub basis: RMat,
}

/// Restricts `n`'s derivation and structure maps to the `F`-subspace
/// spanned by the columns of `basis`.
pub(crate) fn restrict(n: &PhiObject, basis: &RMat) -> Result<PhiObject> {
    let d = basis.cols();
    // B·X = D_N·B − B'
    let rhs = n.derivation.mul(basis).sub(&basis.derivative());
    let derivation = basis
        .solve(&rhs)
        .ok_or_else(|| Error::NotRestrictable("derivation leaves the subspace".into()))?;
    let unit = Matrix::column(n.base.unit().to_vec());
    let iota_h = Matrix::identity(n.ty.hopf_dim).kron(&unit);
    let embed = |n_m: usize, n_h: usize| -> RMat {
        let mut factors = vec![basis.clone(); n_m];
        factors.extend(std::iter::repeat(iota_h.clone()).take(n_h));
        box_all(&n.base, &factors)
    };
    let mut maps = Vec::with_capacity(n.maps.len());
    for (i, (sig, f)) in n.ty.signatures.iter().zip(&n.maps).enumerate() {
        let src = embed(sig[0], sig[1]);
        let tgt = embed(sig[2], sig[3]);
        let image = compose(&n.base, f, &src);
        let y = tgt
            .solve(&image)
            .ok_or_else(|| Error::NotRestrictable(format!("structure map {i} leaves the subspace")))?;
        maps.push(y);
    }
    Ok(PhiObject {
        rank: d,
        base: Algebra::base(),
        derivation,
        ty: n.ty.clone(),
        maps,
        coaction: None,
    })
}

/// Solves `Δ_N(v) = v⊗1` and restricts the structure to the solutions.
pub fn coinvariants(n: &PhiObject) -> Result<Coinvariants> {
    let delta = n
        .coaction
        .as_ref()
        .ok_or_else(|| Error::Invalid("object carries no coaction".into()))?;
    let dim = n.f_dim();
    if delta.cols() != dim || delta.rows() % dim != 0 {
        return Err(Error::DimensionMismatch("coaction has the wrong shape".into()));
    }
    let g = delta.rows() / dim;
    let ones = Matrix::column(vec![RatFunc::one(); g]);
    let system = delta.sub(&Matrix::identity(dim).kron(&ones));
    let kernel = system.kernel();
    let basis = Matrix::from_fn(dim, kernel.len(), |i, j| kernel[j][i].clone());
    let object = restrict(n, &basis)?;
    Ok(Coinvariants { object, basis })
}

/// `μ_N: N^{co H'}⊗S → N`, as an `F`-matrix.
pub fn multiplication_map(co: &Coinvariants, n: &PhiObject) -> RMat {
    expand(&n.base, &co.basis)
}

/// Outcome of `coinvariants(extend_scalars(M, S))`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DescentCheck {
    pub coinvariant_dim: usize,
    /// `ι_M: m ↦ m⊗1` is a Φ-isomorphism onto the coinvariants.
    pub iso: bool,
    /// `μ_N` is bijective.
    pub mu_bijective: bool,
}

impl DescentCheck {
    pub fn ok(&self) -> bool {
        self.iso && self.mu_bijective
    }
}

pub fn descent_check(m: &PhiObject, s: &FinHopfGalois) -> Result<DescentCheck> {
    let n = extend_scalars(m, s)?;
    let co = coinvariants(&n)?;
    let unit = Matrix::column(s.alg.unit().to_vec());
    let target = Matrix::identity(m.rank).kron(&unit);
    let iso = match co.basis.solve(&target) {
        Some(phi) => {
            phi.is_square() && phi.inverse().is_some() && is_phi_morphism(&phi, m, &co.object)
        }
        None => false,
    };
    let mu = multiplication_map(&co, &n);
    let mu_bijective = mu.is_square() && mu.inverse().is_some();
    Ok(DescentCheck { coinvariant_dim: co.basis.cols(), iso, mu_bijective })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse;
    use crate::phihopf::object::PhiType;

    fn rf(s: &str) -> RatFunc {
        parse(s, 1).unwrap()
    }

    #[test]
    fn roundtrip_rank1_kummer() {
        let m = PhiObject::new(Matrix::from_rows(vec![vec![rf("1/(2*x)")]]), PhiType::plain(), vec![])
            .unwrap();
        let s = FinHopfGalois::kummer(2);
        let c = descent_check(&m, &s).unwrap();
        assert_eq!(c, DescentCheck { coinvariant_dim: 1, iso: true, mu_bijective: true });
    }

    #[test]
    fn coinvariants_of_s_and_trivial_coaction() {
        for k in 2..=4 {
            let s = FinHopfGalois::kummer(k);
            let n = extend_scalars(&PhiObject::trivial(1), &s).unwrap();
            let co = coinvariants(&n).unwrap();
            assert_eq!(co.object.rank, 1);
            assert!(co.object.derivation.is_zero());
            let flat = PhiObject { coaction: Some(s.with_constant_coaction().coaction), ..n };
            assert_eq!(coinvariants(&flat).unwrap().object.rank, k);
        }
    }

    #[test]
    fn roundtrip_with_structure_maps() {
        // rank 2 with an endomorphism and a map involving H
        let d = Matrix::diagonal(&[rf("1"), rf("1/(3*x)")]);
        let ty = PhiType { hopf_dim: 2, signatures: vec![[1, 0, 1, 0], [1, 1, 1, 1]] };
        let endo = Matrix::diagonal(&[rf("2"), rf("-1")]);
        let with_h = Matrix::diagonal(&[rf("1"), rf("5"), rf("0"), rf("7")]);
        let m = PhiObject::new(d, ty, vec![endo, with_h]).unwrap();
        for k in 1..=3 {
            let c = descent_check(&m, &FinHopfGalois::kummer(k)).unwrap();
            assert!(c.ok(), "k = {k}");
        }
    }

    #[test]
    fn non_equivariant_map_does_not_restrict() {
        let s = FinHopfGalois::kummer(2);
        let ty = PhiType { hopf_dim: 1, signatures: vec![[1, 0, 1, 0]] };
        let m = PhiObject::new(Matrix::zeros(1, 1), ty, vec![Matrix::identity(1)]).unwrap();
        let mut n = extend_scalars(&m, &s).unwrap();
        // multiplication by t does not preserve the coinvariants F·1
        n.maps[0] = Matrix::column(vec![rf("0"), rf("1")]);
        assert!(matches!(coinvariants(&n), Err(Error::NotRestrictable(_))));
    }
}
