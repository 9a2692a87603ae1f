//! Differential modules as systems `y' = A·y`, gauge equivalence, and the
//! groups of diagonal systems.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::cyclo::{totient, CycloNum};
use crate::error::{Error, Result};
use crate::lattice::{hermite_rows, int_mul, integer_kernel, smith_normal_form, IntMatrix};
use crate::matrix::Matrix;
use crate::partial::{partial_fractions, residue_poly};
use crate::poly::Poly;
use crate::ratfunc::RatFunc;

/// Matrices over `F = Q(ζ_N)(x)`.
pub type RMat = Matrix<RatFunc>;

/// The system `y' = A·y`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LinSys {
    a: RMat,
}

impl LinSys {
    pub fn new(a: RMat) -> Result<Self> {
        if !a.is_square() || a.rows() == 0 {
            return Err(Error::DimensionMismatch(format!(
                "system matrix must be square and nonempty, got {}x{}",
                a.rows(),
                a.cols()
            )));
        }
        Ok(LinSys { a })
    }

    pub fn scalar(a: RatFunc) -> Self {
        LinSys { a: Matrix::from_rows(vec![vec![a]]) }
    }

    pub fn diagonal(entries: &[RatFunc]) -> Self {
        LinSys { a: Matrix::diagonal(entries) }
    }

    pub fn zero(n: usize) -> Self {
        LinSys { a: Matrix::zeros(n, n) }
    }

    pub fn n(&self) -> usize {
        self.a.rows()
    }

    pub fn matrix(&self) -> &RMat {
        &self.a
    }

    pub fn level(&self) -> u32 {
        self.a.level()
    }
}

/// An invertible `P` together with its inverse.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GaugeWitness {
    p: RMat,
    pinv: RMat,
}

impl GaugeWitness {
    /// Inverts `p`; fails with [`Error::NotInvertible`] when singular.
    pub fn new(p: RMat) -> Result<Self> {
        let pinv = p.inverse().ok_or(Error::NotInvertible)?;
        Ok(GaugeWitness { p, pinv })
    }

    /// Accepts a claimed inverse after checking `P·Pinv = I`.
    pub fn with_inverse(p: RMat, pinv: RMat) -> Result<Self> {
        if !p.is_square() || p.cols() != pinv.rows() || !p.mul(&pinv).is_identity() {
            return Err(Error::NotInvertible);
        }
        Ok(GaugeWitness { p, pinv })
    }

    pub fn identity(n: usize) -> Self {
        GaugeWitness { p: Matrix::identity(n), pinv: Matrix::identity(n) }
    }

    pub fn p(&self) -> &RMat {
        &self.p
    }

    pub fn pinv(&self) -> &RMat {
        &self.pinv
    }

    pub fn n(&self) -> usize {
        self.p.rows()
    }

    pub fn inverse(&self) -> Self {
        GaugeWitness { p: self.pinv.clone(), pinv: self.p.clone() }
    }

    /// `self·other`.
    pub fn compose(&self, other: &Self) -> Self {
        GaugeWitness {
            p: self.p.mul(&other.p),
            pinv: other.pinv.mul(&self.pinv),
        }
    }
}

fn check_dims(n: usize, m: usize) -> Result<()> {
    if n != m {
        return Err(Error::DimensionMismatch(format!("sizes {n} and {m} differ")));
    }
    Ok(())
}

/// `B = P'·P⁻¹ + P·A·P⁻¹`.
pub fn gauge(a: &LinSys, p: &GaugeWitness) -> Result<LinSys> {
    check_dims(a.n(), p.n())?;
    let b = p
        .p
        .derivative()
        .mul(&p.pinv)
        .add(&p.p.mul(&a.a).mul(&p.pinv));
    Ok(LinSys { a: b })
}

/// True iff `gauge(a, p) = b` exactly.
pub fn is_gauge_witness(a: &LinSys, b: &LinSys, p: &GaugeWitness) -> Result<bool> {
    check_dims(a.n(), b.n())?;
    check_dims(a.n(), p.n())?;
    // P'·P⁻¹ + P·A·P⁻¹ = B  ⇔  P' + P·A = B·P
    let lhs = p.p.derivative().add(&p.p.mul(&a.a));
    Ok(lhs == b.a.mul(&p.p))
}

/// `A⊗I + I⊗B` on the Kronecker basis.
pub fn tensor(a: &LinSys, b: &LinSys) -> LinSys {
    let ia = Matrix::identity(a.n());
    let ib = Matrix::identity(b.n());
    LinSys { a: a.a.kron(&ib).add(&ia.kron(&b.a)) }
}

/// `−Aᵀ`.
pub fn dual(a: &LinSys) -> LinSys {
    LinSys { a: a.a.transpose().neg() }
}

/// Block-diagonal sum.
pub fn direct_sum(a: &LinSys, b: &LinSys) -> LinSys {
    LinSys { a: a.a.direct_sum(&b.a) }
}

/// `G_m^r × Π μ_{d_i}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiagGroup {
    pub torus_rank: usize,
    pub finite_factors: Vec<u64>,
}

impl DiagGroup {
    pub fn trivial() -> Self {
        DiagGroup { torus_rank: 0, finite_factors: vec![] }
    }

    pub fn dimension(&self) -> usize {
        self.torus_rank
    }

    pub fn is_trivial(&self) -> bool {
        self.torus_rank == 0 && self.finite_factors.is_empty()
    }

    /// Order of the finite part.
    pub fn finite_order(&self) -> u64 {
        self.finite_factors.iter().product()
    }
}

impl fmt::Display for DiagGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "trivial");
        }
        let mut parts = Vec::new();
        match self.torus_rank {
            0 => {}
            1 => parts.push("G_m".to_string()),
            r => parts.push(format!("G_m^{r}")),
        }
        parts.extend(self.finite_factors.iter().map(|d| format!("mu({d})")));
        write!(f, "{}", parts.join(" x "))
    }
}

/// `L = {m ∈ Z^n : Σ m_i a_i is a logarithmic derivative}`, in Hermite form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharLattice {
    pub n: usize,
    pub basis: Vec<Vec<BigInt>>,
}

impl CharLattice {
    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn contains(&self, m: &[BigInt]) -> bool {
        assert_eq!(m.len(), self.n);
        let mut rows = self.basis.clone();
        rows.push(m.to_vec());
        hermite_rows(&rows) == self.basis
    }

    /// Invariant factors of the inclusion `L ⊆ Z^n`.
    pub fn group(&self) -> DiagGroup {
        if self.basis.is_empty() {
            return DiagGroup { torus_rank: self.n, finite_factors: vec![] };
        }
        let s = smith_normal_form(&self.basis);
        let diag = s.diagonal();
        let rank = s.rank();
        DiagGroup {
            torus_rank: self.n - rank,
            finite_factors: diag
                .iter()
                .filter(|d| !d.is_zero() && !d.is_one())
                .map(|d| d.to_u64().expect("small invariant factor"))
                .collect(),
        }
    }
}

/// Appends the rational coordinates of `c` at `level`.
fn push_coords(out: &mut Vec<BigRational>, c: &CycloNum, level: u32) {
    out.extend(c.at_level(level).coords().iter().cloned());
}

/// Vanishing and integrality conditions that `Σ m_i a_i` must meet to be
/// a logarithmic derivative, linear in `m`.
struct Constraints {
    vanish: Vec<Vec<BigRational>>,
    integral: Vec<Vec<BigRational>>,
}

fn constraints(a: &[RatFunc], level: u32) -> Result<Constraints> {
    let n = a.len();
    let level = a.iter().fold(level, |acc, f| acc.lcm(&f.level()));
    let phi = totient(level);
    let pfs = a
        .iter()
        .map(|f| partial_fractions(f, level))
        .collect::<Result<Vec<_>>>()?;
    // one column of coordinates per a_i, assembled row by row afterwards
    let mut vanish_cols: Vec<Vec<BigRational>> = vec![Vec::new(); n];
    let mut integral_cols: Vec<Vec<BigRational>> = vec![Vec::new(); n];
    let max_poly = pfs.iter().filter_map(|pf| pf.polypart.deg()).max();
    if let Some(d) = max_poly {
        for (i, pf) in pfs.iter().enumerate() {
            for j in 0..=d {
                push_coords(&mut vanish_cols[i], &pf.polypart.coeff(j), level);
            }
        }
    }
    let mut poles: Vec<(Poly, u32)> = Vec::new();
    for pf in &pfs {
        for t in &pf.terms {
            if !poles.iter().any(|(p, e)| p == &t.p && *e == t.e) {
                poles.push((t.p.clone(), t.e));
            }
        }
    }
    for (p, e) in &poles {
        let dp = p.deg().expect("nonconstant pole");
        for (i, pf) in pfs.iter().enumerate() {
            let num = pf
                .terms
                .iter()
                .find(|t| &t.p == p && t.e == *e)
                .map_or_else(Poly::zero, |t| t.a.clone());
            if *e >= 2 {
                for j in 0..dp {
                    push_coords(&mut vanish_cols[i], &num.coeff(j), level);
                }
                continue;
            }
            let r = residue_poly(p, &num);
            for j in 1..dp {
                push_coords(&mut vanish_cols[i], &r.coeff(j), level);
            }
            let c = r.coeff(0).at_level(level);
            vanish_cols[i].extend(c.coords()[1..phi].iter().cloned());
            integral_cols[i].push(c.coords()[0].clone());
        }
    }
    let transpose = |cols: Vec<Vec<BigRational>>| -> Vec<Vec<BigRational>> {
        let rows = cols.first().map_or(0, |c| c.len());
        (0..rows).map(|r| cols.iter().map(|c| c[r].clone()).collect()).collect()
    };
    Ok(Constraints {
        vanish: transpose(vanish_cols),
        integral: transpose(integral_cols),
    })
}

fn clear_denominators(row: &[BigRational]) -> Vec<BigInt> {
    let l = row.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    row.iter().map(|q| (q * BigRational::from_integer(l.clone())).to_integer()).collect()
}

/// Z-basis of the lattice of integer relations making `Σ m_i a_i` a
/// logarithmic derivative over `Q(ζ_level)(x)`.
pub fn char_lattice(a: &[RatFunc], level: u32) -> Result<CharLattice> {
    let n = a.len();
    let cons = constraints(a, level)?;
    let k: IntMatrix = cons.vanish.iter().map(|r| clear_denominators(r)).collect();
    // Z^n ∩ ker K, as columns of b
    let kernel = integer_kernel(&k, n);
    if kernel.is_empty() {
        return Ok(CharLattice { n, basis: vec![] });
    }
    let kk = kernel.len();
    let b: IntMatrix = (0..n).map(|i| kernel.iter().map(|v| v[i].clone()).collect()).collect();
    // t ∈ Z^kk with C·B·t ∈ Z^s
    let ts: Vec<Vec<BigInt>> = if cons.integral.is_empty() {
        kernel_identity(kk)
    } else {
        let cb: Vec<Vec<BigRational>> = cons
            .integral
            .iter()
            .map(|row| {
                (0..kk)
                    .map(|j| {
                        (0..n).fold(BigRational::zero(), |acc, i| {
                            acc + &row[i] * BigRational::from_integer(b[i][j].clone())
                        })
                    })
                    .collect()
            })
            .collect();
        let delta = cb
            .iter()
            .flatten()
            .fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
        let s = cb.len();
        // [δ·CB | −δ·I] (t, w) = 0
        let aug: IntMatrix = cb
            .iter()
            .enumerate()
            .map(|(r, row)| {
                let mut out: Vec<BigInt> = row
                    .iter()
                    .map(|q| (q * BigRational::from_integer(delta.clone())).to_integer())
                    .collect();
                out.extend((0..s).map(|c| if c == r { -delta.clone() } else { BigInt::zero() }));
                out
            })
            .collect();
        integer_kernel(&aug, kk + s)
            .into_iter()
            .map(|v| v[..kk].to_vec())
            .collect()
    };
    let gens: IntMatrix = ts
        .iter()
        .map(|t| {
            let col: IntMatrix = t.iter().map(|x| vec![x.clone()]).collect();
            int_mul(&b, &col).into_iter().map(|r| r[0].clone()).collect()
        })
        .collect();
    let mut basis = hermite_rows(&gens);
    basis.retain(|r| r.iter().any(|x| !x.is_zero()));
    Ok(CharLattice { n, basis })
}

fn kernel_identity(k: usize) -> Vec<Vec<BigInt>> {
    (0..k)
        .map(|i| (0..k).map(|j| BigInt::from(u8::from(i == j))).collect())
        .collect()
}

/// Group of the diagonal system `diag(a_1, …, a_n)`.
pub fn diag_group(a: &[RatFunc], level: u32) -> Result<DiagGroup> {
    Ok(char_lattice(a, level)?.group())
}

/// Group of `y' = a·y`: trivial, `μ_k`, or `G_m`.
pub fn rank1_group(a: &RatFunc, level: u32) -> Result<DiagGroup> {
    diag_group(std::slice::from_ref(a), level)
}

/// Smallest positive generator of the rank-1 lattice, if any.
pub fn rank1_order(g: &DiagGroup) -> Option<u64> {
    match (g.torus_rank, g.finite_factors.as_slice()) {
        (0, []) => Some(1),
        (0, [k]) => Some(*k),
        _ => None,
    }
}
