//! Finite constant groups and their Hopf algebras of functions.

use crate::diffmod::RMat;
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::ratfunc::RatFunc;

/// A finite group given by its multiplication table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinGroup {
    labels: Vec<String>,
    table: Vec<Vec<usize>>,
    identity: usize,
}

impl FinGroup {
    /// Validates the table: closure, associativity, identity and inverses.
    pub fn new(labels: Vec<String>, table: Vec<Vec<usize>>) -> Result<Self> {
        let k = labels.len();
        if k == 0 || table.len() != k || table.iter().any(|r| r.len() != k || r.iter().any(|&x| x >= k)) {
            return Err(Error::Invalid("group table must be a k×k table of indices below k".into()));
        }
        let identity = (0..k)
            .find(|&e| (0..k).all(|a| table[e][a] == a && table[a][e] == a))
            .ok_or_else(|| Error::Invalid("group table has no identity".into()))?;
        for a in 0..k {
            if !(0..k).any(|b| table[a][b] == identity) {
                return Err(Error::Invalid(format!("element {} has no inverse", labels[a])));
            }
            for b in 0..k {
                for c in 0..k {
                    if table[table[a][b]][c] != table[a][table[b][c]] {
                        return Err(Error::Invalid("group table is not associative".into()));
                    }
                }
            }
        }
        Ok(FinGroup { labels, table, identity })
    }

    pub fn trivial() -> Self {
        FinGroup { labels: vec!["1".into()], table: vec![vec![0]], identity: 0 }
    }

    /// `μ_k`, with element `j` standing for `ζ_k^j`.
    pub fn cyclic(k: usize) -> Self {
        assert!(k >= 1);
        let labels = (0..k)
            .map(|j| match j {
                0 => "1".to_string(),
                1 => "zeta".to_string(),
                _ => format!("zeta^{j}"),
            })
            .collect();
        let table = (0..k).map(|a| (0..k).map(|b| (a + b) % k).collect()).collect();
        FinGroup { labels, table, identity: 0 }
    }

    pub fn order(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn inv(&self, a: usize) -> usize {
        (0..self.order()).find(|&b| self.table[a][b] == self.identity).expect("validated")
    }

    pub fn is_abelian(&self) -> bool {
        let k = self.order();
        (0..k).all(|a| (0..k).all(|b| self.table[a][b] == self.table[b][a]))
    }

    /// A small generating set, chosen greedily in index order.
    pub fn generators(&self) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut span = vec![self.identity];
        for g in 0..self.order() {
            if span.contains(&g) {
                continue;
            }
            gens.push(g);
            span = self.closure(&gens);
        }
        gens
    }

    fn closure(&self, gens: &[usize]) -> Vec<usize> {
        let mut span = vec![self.identity];
        let mut i = 0;
        while i < span.len() {
            for &g in gens {
                let x = self.table[span[i]][g];
                if !span.contains(&x) {
                    span.push(x);
                }
            }
            i += 1;
        }
        span
    }
}

/// `H = C[Γ]^*`, the functions on `Γ`, on the basis of indicators `e_g`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinGroupHopf {
    pub group: FinGroup,
}

impl FinGroupHopf {
    pub fn new(group: FinGroup) -> Self {
        FinGroupHopf { group }
    }

    pub fn dim(&self) -> usize {
        self.group.order()
    }

    /// `Δ(e_x) = Σ_{ab=x} e_a⊗e_b`, as a `g²×g` matrix.
    pub fn comultiplication(&self) -> RMat {
        let g = self.dim();
        let mut m = Matrix::zeros(g * g, g);
        for a in 0..g {
            for b in 0..g {
                m.set(a * g + b, self.group.mul(a, b), RatFunc::one());
            }
        }
        m
    }

    /// `ε(e_x) = [x = 1]`, as a `1×g` matrix.
    pub fn counit(&self) -> RMat {
        let g = self.dim();
        Matrix::from_fn(1, g, |_, x| bool_rf(x == self.group.identity()))
    }

    /// `S(e_x) = e_{x⁻¹}`.
    pub fn antipode(&self) -> RMat {
        let g = self.dim();
        Matrix::from_fn(g, g, |r, c| bool_rf(r == self.group.inv(c)))
    }

    /// Pointwise product `e_a·e_b = [a = b]·e_a`, as a `g×g²` matrix.
    pub fn multiplication(&self) -> RMat {
        let g = self.dim();
        Matrix::from_fn(g, g * g, |r, c| bool_rf(c / g == r && c % g == r))
    }

    /// The unit `Σ e_x`.
    pub fn unit(&self) -> Vec<RatFunc> {
        vec![RatFunc::one(); self.dim()]
    }

    /// Evaluation at `σ`, as a `1×g` matrix.
    pub fn evaluation(&self, sigma: usize) -> RMat {
        Matrix::from_fn(1, self.dim(), |_, x| bool_rf(x == sigma))
    }

    /// Checks the bialgebra and antipode axioms on the tables.
    pub fn check(&self) -> Result<()> {
        let g = self.dim();
        let id = Matrix::<RatFunc>::identity(g);
        let d = self.comultiplication();
        if d.kron(&id).mul(&d) != id.kron(&d).mul(&d) {
            return Err(Error::Axiom("comultiplication is not coassociative".into()));
        }
        if self.counit().kron(&id).mul(&d) != id {
            return Err(Error::Axiom("counit fails".into()));
        }
        // m∘(S⊗1)∘Δ = η∘ε
        let lhs = self.multiplication().mul(&self.antipode().kron(&id)).mul(&d);
        let rhs = Matrix::column(self.unit()).mul(&self.counit());
        if lhs != rhs {
            return Err(Error::Axiom("antipode fails".into()));
        }
        Ok(())
    }
}

fn bool_rf(b: bool) -> RatFunc {
    if b {
        RatFunc::one()
    } else {
        RatFunc::zero()
    }
}
