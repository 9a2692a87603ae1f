//! Differential central simple algebras `(M_n(F), δ_P)` with
//! `δ_P(x) = x' + P·x − x·P` and `P` traceless.
//!
//! Matrices in `M_n` are vectorized row by row: `e_{ij}` has index `i·n + j`.
//! A witness `u` relates `P` to `Q` when `δ_P(u·x·u⁻¹) = u·δ_Q(x)·u⁻¹`; if `u`
//! relates `P → Q` and `v` relates `Q → R`, then `u·v` relates `P → R`.

use crate::diffmod::{diag_group, GaugeWitness, LinSys, RMat};
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::partial::rational_solution_rank1;
use crate::ratfunc::RatFunc;
use crate::torsor::{DiffTorsorGLn, Presentation, SplitReport, Triviality};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeltaCSA {
    p: RMat,
}

impl DeltaCSA {
    /// Requires a square traceless `P`.
    pub fn new(p: RMat) -> Result<Self> {
        if !p.is_square() || p.rows() == 0 {
            return Err(Error::DimensionMismatch("P must be a nonempty square matrix".into()));
        }
        if !p.trace().is_zero() {
            return Err(Error::Invalid("P is not traceless".into()));
        }
        Ok(DeltaCSA { p })
    }

    /// The split algebra with `δ_0(x) = x'`.
    pub fn trivial(n: usize) -> Self {
        DeltaCSA { p: Matrix::zeros(n, n) }
    }

    pub fn n(&self) -> usize {
        self.p.rows()
    }

    pub fn p(&self) -> &RMat {
        &self.p
    }

    pub fn level(&self) -> u32 {
        self.p.level()
    }
}

/// `P_raw − (tr(P_raw)/n)·I`.
pub fn make_traceless(p_raw: &RMat) -> Result<DeltaCSA> {
    if !p_raw.is_square() || p_raw.rows() == 0 {
        return Err(Error::DimensionMismatch("P must be a nonempty square matrix".into()));
    }
    let n = p_raw.rows();
    let shift = p_raw.trace().div(&RatFunc::from_int(n as i64)).expect("n > 0");
    DeltaCSA::new(p_raw.sub(&Matrix::scalar(n, shift)))
}

/// `x' + P·x − x·P`.
pub fn apply_delta(a: &DeltaCSA, x: &RMat) -> Result<RMat> {
    let n = a.n();
    if x.rows() != n || x.cols() != n {
        return Err(Error::DimensionMismatch(format!(
            "expected {n}×{n}, found {}×{}",
            x.rows(),
            x.cols()
        )));
    }
    Ok(x.derivative().add(&a.p.mul(x)).sub(&x.mul(&a.p)))
}

fn unit_matrix(n: usize, i: usize, j: usize) -> RMat {
    Matrix::from_fn(n, n, |r, c| if r == i && c == j { RatFunc::one() } else { RatFunc::zero() })
}

/// True iff `δ_P(u·x·u⁻¹) = u·δ_Q(x)·u⁻¹` on every `e_{ij}`.
pub fn iso_witness_check(a: &DeltaCSA, b: &DeltaCSA, u: &GaugeWitness) -> Result<bool> {
    let n = a.n();
    if b.n() != n || u.n() != n {
        return Err(Error::DimensionMismatch(format!(
            "sizes {n}, {} and {} differ",
            b.n(),
            u.n()
        )));
    }
    for i in 0..n {
        for j in 0..n {
            let x = unit_matrix(n, i, j);
            let lhs = apply_delta(a, &u.p().mul(&x).mul(u.pinv()))?;
            let rhs = u.p().mul(&apply_delta(b, &x)?).mul(u.pinv());
            if lhs != rhs {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// The unique `Q` that `u` relates `P` to:
/// `Q = u⁻¹u' + u⁻¹Pu − (1/n)·tr(u⁻¹u')·I`.
pub fn transported(a: &DeltaCSA, u: &GaugeWitness) -> Result<DeltaCSA> {
    let n = a.n();
    if u.n() != n {
        return Err(Error::DimensionMismatch(format!("sizes {n} and {} differ", u.n())));
    }
    let log = u.pinv().mul(&u.p().derivative());
    let q = log.add(&u.pinv().mul(&a.p).mul(u.p()));
    make_traceless(&q)
}

/// Closed-form variant of [`iso_witness_check`].
pub fn iso_witness_check_closed(a: &DeltaCSA, b: &DeltaCSA, u: &GaugeWitness) -> Result<bool> {
    if b.n() != a.n() {
        return Err(Error::DimensionMismatch(format!("sizes {} and {} differ", a.n(), b.n())));
    }
    Ok(transported(a, u)?.p == b.p)
}

/// The linearization of `δ_P(x) = 0`, of size `n²`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdjointSys {
    pub sys: LinSys,
}

impl AdjointSys {
    pub fn n(&self) -> usize {
        self.sys.n()
    }

    pub fn matrix(&self) -> &RMat {
        self.sys.matrix()
    }
}

/// `vec(x)' = M·vec(x)` with `M = (−P)⊗I + I⊗Pᵀ`.
pub fn adjoint_system(a: &DeltaCSA) -> AdjointSys {
    let n = a.n();
    let id = Matrix::identity(n);
    let m = a.p.neg().kron(&id).add(&id.kron(&a.p.transpose()));
    AdjointSys { sys: LinSys::new(m).expect("square") }
}

/// Exact report for diagonal `P` from the adjoint rates `p_j − p_i`,
/// otherwise the bound `n² − 1`.
pub fn splitting_degree(a: &DeltaCSA) -> Result<SplitReport> {
    let n = a.n();
    if a.p.is_diagonal() {
        let rates = adjoint_system(a).matrix().diag();
        let g = diag_group(&rates, a.level())?;
        return Ok(SplitReport::exact(g, "F"));
    }
    Ok(SplitReport::bound(n * n - 1, &format!("PGL_{n}")))
}

/// The adjoint presentation as a `PGL_n`-torsor datum.
pub fn to_pgl_torsor(a: &DeltaCSA) -> DiffTorsorGLn {
    DiffTorsorGLn::new(adjoint_system(a).matrix().clone(), Presentation::PglAdjoint)
}

/// `Ad(u): vec(x) ↦ vec(u·x·u⁻¹)`, i.e. `u⊗(u⁻¹)ᵀ`.
pub fn ad(u: &GaugeWitness) -> GaugeWitness {
    let p = u.p().kron(&u.pinv().transpose());
    let pinv = u.pinv().kron(&u.p().transpose());
    GaugeWitness::with_inverse(p, pinv).expect("inverse of a Kronecker product")
}

/// If `u` relates `P → Q`, then `Ad(u)` carries horizontal sections of the
/// adjoint system of `Q` to those of `P`, so `Ad(u⁻¹)` is a torsor
/// isomorphism from `to_pgl_torsor(P)` to `to_pgl_torsor(Q)`.
pub fn transport_witness(u: &GaugeWitness) -> GaugeWitness {
    ad(&u.inverse())
}

/// `u = diag(1/y_i)` with `y_i'/y_i = p_i − p_1`, which relates diagonal
/// `P` to `0` when every difference is a logarithmic derivative.
pub fn split_witness(a: &DeltaCSA) -> Result<Option<GaugeWitness>> {
    if !a.p.is_diagonal() {
        return Ok(None);
    }
    let d = a.p.diag();
    let mut inv = Vec::with_capacity(d.len());
    for pi in &d {
        match rational_solution_rank1(&(pi - &d[0]), a.level())? {
            Some(y) => inv.push(y.inv().expect("nonzero solution")),
            None => return Ok(None),
        }
    }
    Ok(Some(GaugeWitness::new(Matrix::diagonal(&inv))?))
}

/// Constant conjugations tried before giving up on non-diagonal `P`:
/// permutations combined with elementary matrices `I + c·e_{ij}`, `|c| ≤ 2`.
fn constant_candidates(n: usize) -> Vec<RMat> {
    let mut out = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            for c in [-2i64, -1, 1, 2] {
                let mut m = Matrix::identity(n);
                m.set(i, j, RatFunc::from_int(c));
                out.push(m);
            }
        }
    }
    let mut perms = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            perms.push(Matrix::from_fn(n, n, |r, c| {
                let r2 = if r == i { j } else if r == j { i } else { r };
                if r2 == c { RatFunc::one() } else { RatFunc::zero() }
            }));
        }
    }
    let base = out.clone();
    for p in &perms {
        out.push(p.clone());
        for b in &base {
            out.push(p.mul(b));
        }
    }
    out
}

/// Decides whether `A` is isomorphic to `(M_n(F), ')`. A witness relating
/// `P → 0` proves it; diagonal `P` is decided exactly, and other `P` only
/// after a bounded search over constant conjugations that diagonalize it.
pub fn is_split(a: &DeltaCSA, witness: Option<&GaugeWitness>) -> Result<Triviality> {
    let n = a.n();
    if a.p.is_zero() {
        return Ok(Triviality::Trivial);
    }
    if let Some(u) = witness {
        if iso_witness_check(a, &DeltaCSA::trivial(n), u)? {
            return Ok(Triviality::Trivial);
        }
    }
    let diagonal = if a.p.is_diagonal() {
        Some(a.clone())
    } else {
        constant_candidates(n).into_iter().find_map(|c| {
            let u = GaugeWitness::new(c).ok()?;
            let q = transported(a, &u).ok()?;
            q.p.is_diagonal().then_some(q)
        })
    };
    match diagonal {
        Some(d) => Ok(if split_witness(&d)?.is_some() { Triviality::Trivial } else { Triviality::NotTrivial }),
        None => Ok(Triviality::Undecided),
    }
}
