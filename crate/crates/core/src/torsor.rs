//! δ-GL_n-torsors, represented by the derivation `δ(X) = A·X` on the
//! coordinates of `GL_n`.

use std::fmt;

use crate::diffmod::{
    diag_group, gauge, is_gauge_witness, DiagGroup, GaugeWitness, LinSys, RMat,
};
use crate::error::Result;
use crate::matrix::Matrix;
use crate::partial::rational_solution_rank1;
use crate::ratfunc::RatFunc;

/// Which group the torsor datum presents.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Presentation {
    Gl,
    /// `PGL_n` through its adjoint action on `M_n`, so of size `n²`.
    PglAdjoint,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiffTorsorGLn {
    a: RMat,
    presentation: Presentation,
}

impl DiffTorsorGLn {
    pub fn new(a: RMat, presentation: Presentation) -> Self {
        DiffTorsorGLn { a, presentation }
    }

    pub fn n(&self) -> usize {
        self.a.rows()
    }

    pub fn matrix(&self) -> &RMat {
        &self.a
    }

    pub fn presentation(&self) -> Presentation {
        self.presentation
    }

    /// The module with the same matrix.
    pub fn to_module(&self) -> LinSys {
        LinSys::new(self.a.clone()).expect("square by construction")
    }
}

pub fn from_module(m: &LinSys) -> DiffTorsorGLn {
    DiffTorsorGLn::new(m.matrix().clone(), Presentation::Gl)
}

/// True iff `x ↦ P·x` is an isomorphism `Y → Z`.
pub fn torsor_iso_check(y: &DiffTorsorGLn, z: &DiffTorsorGLn, p: &GaugeWitness) -> Result<bool> {
    is_gauge_witness(&y.to_module(), &z.to_module(), p)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Triviality {
    Trivial,
    NotTrivial,
    Undecided,
}

impl fmt::Display for Triviality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Triviality::Trivial => "trivial",
            Triviality::NotTrivial => "not trivial",
            Triviality::Undecided => "undecided",
        })
    }
}

/// Decides triviality. A witness with `gauge(A, P) = 0` proves it; a
/// rejected witness falls back to the rank-1 and diagonal decisions, and
/// anything else is undecided.
pub fn is_trivial_torsor(
    y: &DiffTorsorGLn,
    witness: Option<&GaugeWitness>,
    level: u32,
) -> Result<Triviality> {
    if y.a.is_zero() {
        return Ok(Triviality::Trivial);
    }
    if let Some(p) = witness {
        if gauge(&y.to_module(), p)?.matrix().is_zero() {
            return Ok(Triviality::Trivial);
        }
    }
    if y.n() == 1 {
        let found = rational_solution_rank1(y.a.get(0, 0), level)?.is_some();
        return Ok(if found { Triviality::Trivial } else { Triviality::NotTrivial });
    }
    if y.a.is_diagonal() {
        let g = diag_group(&y.a.diag(), level)?;
        return Ok(if g.is_trivial() { Triviality::Trivial } else { Triviality::NotTrivial });
    }
    Ok(Triviality::Undecided)
}

/// `P = diag(1/y_i)` with `y_i' = a_i·y_i`, so that `gauge(A, P) = 0`, for
/// diagonal `A` whose entries are all logarithmic derivatives.
pub fn trivializing_witness(y: &DiffTorsorGLn, level: u32) -> Result<Option<GaugeWitness>> {
    if !y.a.is_diagonal() {
        return Ok(None);
    }
    let mut inv = Vec::new();
    for a in y.a.diag() {
        match rational_solution_rank1(&a, level)? {
            Some(s) => inv.push(s.inv().expect("nonzero solution")),
            None => return Ok(None),
        }
    }
    let p = Matrix::diagonal(&inv);
    Ok(Some(GaugeWitness::new(p)?))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitReport {
    /// The group when known exactly.
    pub group: Option<DiagGroup>,
    /// The splitting degree, or an upper bound when `is_bound`.
    pub degree: usize,
    pub is_bound: bool,
    pub minimal_field_note: String,
}

impl SplitReport {
    pub(crate) fn exact(group: DiagGroup, field: &str) -> Self {
        let note = if group.is_trivial() {
            format!("already split over {field}")
        } else {
            let r = group.torus_rank;
            let m = group.finite_order();
            format!(
                "{field} adjoined exponential solutions: transcendence degree {r}, algebraic part of degree {m}"
            )
        };
        SplitReport {
            degree: group.dimension(),
            group: Some(group),
            is_bound: false,
            minimal_field_note: note,
        }
    }

    pub(crate) fn bound(degree: usize, group_name: &str) -> Self {
        SplitReport {
            group: None,
            degree,
            is_bound: true,
            minimal_field_note: format!(
                "group not computed; degree at most dim {group_name} = {degree}"
            ),
        }
    }
}

impl fmt::Display for SplitReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.group {
            Some(g) => write!(f, "{g}, splitting degree {}", self.degree),
            None => write!(f, "bound, splitting degree <= {}", self.degree),
        }
    }
}

/// Exact report for diagonal `A`, otherwise the bound `dim GL_n = n²`.
pub fn splitting_report(y: &DiffTorsorGLn, level: u32) -> Result<SplitReport> {
    let n = y.n();
    if y.a.is_diagonal() {
        let g = diag_group(&y.a.diag(), level)?;
        return Ok(SplitReport::exact(g, "F"));
    }
    Ok(SplitReport::bound(n * n, &format!("GL_{n}")))
}

/// Diagonal gauge witness.
pub fn diagonal_witness(entries: &[RatFunc]) -> Result<GaugeWitness> {
    GaugeWitness::new(Matrix::diagonal(entries))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse;

    fn rf(s: &str) -> RatFunc {
        parse(s, 1).unwrap()
    }

    fn diag(entries: &[&str]) -> DiffTorsorGLn {
        let e: Vec<RatFunc> = entries.iter().map(|s| rf(s)).collect();
        from_module(&LinSys::diagonal(&e))
    }

    #[test]
    fn iso_examples() {
        let zero = diag(&["0", "0"]);
        let p = diagonal_witness(&[rf("x"), rf("1")]).unwrap();
        assert!(torsor_iso_check(&zero, &zero, &GaugeWitness::identity(2)).unwrap());
        assert!(torsor_iso_check(&zero, &diag(&["1/x", "0"]), &p).unwrap());
        assert!(!torsor_iso_check(&zero, &zero, &p).unwrap());
    }

    #[test]
    fn triviality_examples() {
        assert_eq!(is_trivial_torsor(&diag(&["0"]), None, 1).unwrap(), Triviality::Trivial);
        assert_eq!(is_trivial_torsor(&diag(&["1/x"]), None, 1).unwrap(), Triviality::Trivial);
        assert_eq!(
            is_trivial_torsor(&diag(&["1/(2*x)"]), None, 1).unwrap(),
            Triviality::NotTrivial
        );
        let y = diag(&["1/x", "2/(x-1)"]);
        let w = trivializing_witness(&y, 1).unwrap().unwrap();
        assert!(gauge(&y.to_module(), &w).unwrap().matrix().is_zero());
        assert_eq!(is_trivial_torsor(&y, Some(&w), 1).unwrap(), Triviality::Trivial);
        let generic = from_module(
            &LinSys::new(Matrix::from_rows(vec![
                vec![rf("x"), rf("1")],
                vec![rf("1"), rf("0")],
            ]))
            .unwrap(),
        );
        assert_eq!(is_trivial_torsor(&generic, None, 1).unwrap(), Triviality::Undecided);
    }

    #[test]
    fn split_reports() {
        let r = splitting_report(&diag(&["1/(2*x)"]), 1).unwrap();
        assert_eq!((r.degree, r.is_bound), (0, false));
        assert_eq!(r.to_string(), "mu(2), splitting degree 0");
        let r = splitting_report(&diag(&["1", "1/(2*x)"]), 1).unwrap();
        assert_eq!(r.to_string(), "G_m x mu(2), splitting degree 1");
        let generic = from_module(
            &LinSys::new(Matrix::from_rows(vec![
                vec![rf("x"), rf("1")],
                vec![rf("1"), rf("0")],
            ]))
            .unwrap(),
        );
        let r = splitting_report(&generic, 1).unwrap();
        assert_eq!((r.degree, r.is_bound), (4, true));
    }
}
