//! Integer lattices: Smith and Hermite normal forms, integer kernels.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

/// Integer matrix as a list of rows.
pub type IntMatrix = Vec<Vec<BigInt>>;

/// `U·M·V = D` with `U`, `V` unimodular and `D` diagonal, `d_i | d_{i+1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Smith {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
}

impl Smith {
    /// The diagonal of `D`, including trailing zeros up to `min(rows, cols)`.
    pub fn diagonal(&self) -> Vec<BigInt> {
        let k = self.d.len().min(self.d.first().map_or(0, |r| r.len()));
        (0..k).map(|i| self.d[i][i].clone()).collect()
    }

    pub fn rank(&self) -> usize {
        self.diagonal().iter().filter(|x| !x.is_zero()).count()
    }
}

pub fn int_identity(n: usize) -> IntMatrix {
    (0..n)
        .map(|i| (0..n).map(|j| BigInt::from(u8::from(i == j))).collect())
        .collect()
}

pub fn int_mul(a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
    let inner = b.len();
    let cols = b.first().map_or(0, |r| r.len());
    a.iter()
        .map(|row| {
            assert_eq!(row.len(), inner, "inner dimensions differ");
            (0..cols)
                .map(|j| {
                    (0..inner).fold(BigInt::zero(), |acc, k| acc + &row[k] * &b[k][j])
                })
                .collect()
        })
        .collect()
}

fn swap_cols(m: &mut IntMatrix, a: usize, b: usize) {
    for row in m.iter_mut() {
        row.swap(a, b);
    }
}

/// `row_dst -= q·row_src`.
fn row_axpy(m: &mut IntMatrix, dst: usize, src: usize, q: &BigInt) {
    let src_row = m[src].clone();
    for (x, s) in m[dst].iter_mut().zip(&src_row) {
        *x -= q * s;
    }
}

/// `col_dst -= q·col_src`.
fn col_axpy(m: &mut IntMatrix, dst: usize, src: usize, q: &BigInt) {
    for row in m.iter_mut() {
        let s = row[src].clone();
        row[dst] -= q * s;
    }
}

/// Smith normal form with transforms.
pub fn smith_normal_form(m: &IntMatrix) -> Smith {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut d = m.clone();
    let mut u = int_identity(rows);
    let mut v = int_identity(cols);
    for t in 0..rows.min(cols) {
        loop {
            // smallest nonzero entry of the trailing block becomes the pivot
            let Some((pi, pj)) = (t..rows)
                .flat_map(|i| (t..cols).map(move |j| (i, j)))
                .filter(|&(i, j)| !d[i][j].is_zero())
                .min_by(|&(a, b), &(c, e)| d[a][b].abs().cmp(&d[c][e].abs()))
            else {
                return finish(u, d, v);
            };
            d.swap(t, pi);
            u.swap(t, pi);
            swap_cols(&mut d, t, pj);
            swap_cols(&mut v, t, pj);
            let mut clean = true;
            for i in t + 1..rows {
                if d[i][t].is_zero() {
                    continue;
                }
                let q = d[i][t].div_floor(&d[t][t]);
                row_axpy(&mut d, i, t, &q);
                row_axpy(&mut u, i, t, &q);
                if !d[i][t].is_zero() {
                    clean = false;
                }
            }
            for j in t + 1..cols {
                if d[t][j].is_zero() {
                    continue;
                }
                let q = d[t][j].div_floor(&d[t][t]);
                col_axpy(&mut d, j, t, &q);
                col_axpy(&mut v, j, t, &q);
                if !d[t][j].is_zero() {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            // divisibility of the remaining block
            let bad = (t + 1..rows)
                .find(|&i| (t + 1..cols).any(|j| !d[i][j].is_multiple_of(&d[t][t])));
            match bad {
                Some(i) => {
                    let minus_one = BigInt::from(-1);
                    row_axpy(&mut d, t, i, &minus_one);
                    row_axpy(&mut u, t, i, &minus_one);
                }
                None => break,
            }
        }
        if d[t][t].is_negative() {
            for x in d[t].iter_mut() {
                *x = -&*x;
            }
            for x in u[t].iter_mut() {
                *x = -&*x;
            }
        }
    }
    finish(u, d, v)
}

fn finish(u: IntMatrix, d: IntMatrix, v: IntMatrix) -> Smith {
    Smith { u, d, v }
}

/// Row Hermite normal form: nonzero rows only, positive pivots, entries
/// above each pivot reduced into `[0, pivot)`.
pub fn hermite_rows(m: &IntMatrix) -> IntMatrix {
    let mut a = m.clone();
    let rows = a.len();
    let cols = a.first().map_or(0, |r| r.len());
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        loop {
            let Some(p) = (r..rows)
                .filter(|&i| !a[i][c].is_zero())
                .min_by(|&i, &j| a[i][c].abs().cmp(&a[j][c].abs()))
            else {
                break;
            };
            a.swap(r, p);
            let mut done = true;
            for i in r + 1..rows {
                if !a[i][c].is_zero() {
                    let q = a[i][c].div_floor(&a[r][c]);
                    row_axpy(&mut a, i, r, &q);
                    if !a[i][c].is_zero() {
                        done = false;
                    }
                }
            }
            if done {
                break;
            }
        }
        if a.get(r).map_or(true, |row| row[c].is_zero()) {
            continue;
        }
        if a[r][c].is_negative() {
            for x in a[r].iter_mut() {
                *x = -&*x;
            }
        }
        for i in 0..r {
            let q = a[i][c].div_floor(&a[r][c]);
            if !q.is_zero() {
                row_axpy(&mut a, i, r, &q);
            }
        }
        r += 1;
    }
    a.truncate(r);
    a
}

/// Basis (as vectors) of `{v ∈ Z^n : M·v = 0}` for an `r×n` matrix.
pub fn integer_kernel(m: &IntMatrix, n: usize) -> Vec<Vec<BigInt>> {
    if m.is_empty() {
        return int_identity(n);
    }
    let s = smith_normal_form(m);
    let rank = s.rank();
    (rank..n)
        .map(|j| (0..n).map(|i| s.v[i][j].clone()).collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn im(rows: &[&[i64]]) -> IntMatrix {
        rows.iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect()
    }

    fn check(m: &IntMatrix) -> Smith {
        let s = smith_normal_form(m);
        assert_eq!(int_mul(&int_mul(&s.u, m), &s.v), s.d);
        let diag = s.diagonal();
        for w in diag.windows(2) {
            if !w[1].is_zero() {
                assert!(w[1].is_multiple_of(&w[0]));
            } else {
                // zeros only trail
                assert!(diag.iter().skip_while(|x| !x.is_zero()).all(|x| x.is_zero()));
            }
        }
        s
    }

    #[test]
    fn small_examples() {
        assert_eq!(check(&im(&[&[1, 0], &[0, 1]])).diagonal(), vec![1.into(), 1.into()]);
        assert_eq!(check(&im(&[&[2, 0], &[0, 3]])).diagonal(), vec![1.into(), 6.into()]);
        assert_eq!(check(&im(&[&[2, 0], &[0, 0]])).diagonal(), vec![2.into(), 0.into()]);
        assert_eq!(
            check(&im(&[&[2, 4, 4], &[-6, 6, 12], &[10, -4, -16]])).diagonal(),
            vec![2.into(), 6.into(), 12.into()]
        );
    }

    #[test]
    fn hermite_example() {
        let h = hermite_rows(&im(&[&[0, 2], &[2, 2], &[0, 4]]));
        assert_eq!(h, im(&[&[2, 0], &[0, 2]]));
    }

    #[test]
    fn kernel_example() {
        let k = integer_kernel(&im(&[&[1, 2, 3]]), 3);
        assert_eq!(k.len(), 2);
        for v in &k {
            let s: BigInt = &v[0] + &v[1] * 2 + &v[2] * 3;
            assert!(s.is_zero());
        }
    }

    fn det(m: &IntMatrix) -> BigInt {
        // Laplace expansion; small sizes only
        let n = m.len();
        if n == 0 {
            return BigInt::from(1);
        }
        (0..n).fold(BigInt::zero(), |acc, j| {
            let minor: IntMatrix = m[1..]
                .iter()
                .map(|r| r.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, x)| x.clone()).collect())
                .collect();
            let term = &m[0][j] * det(&minor);
            if j % 2 == 0 { acc + term } else { acc - term }
        })
    }

    proptest! {
        #[test]
        fn smith_is_valid(rows in 1usize..4, cols in 1usize..4,
                          vals in proptest::collection::vec(-9i64..10, 9)) {
            let m: IntMatrix = (0..rows)
                .map(|i| (0..cols).map(|j| BigInt::from(vals[i * 3 + j])).collect())
                .collect();
            let s = check(&m);
            prop_assert_eq!(det(&s.u).abs(), BigInt::from(1));
            prop_assert_eq!(det(&s.v).abs(), BigInt::from(1));
            for v in integer_kernel(&m, cols) {
                let mv = int_mul(&m, &v.iter().map(|x| vec![x.clone()]).collect());
                prop_assert!(mv.iter().all(|r| r[0].is_zero()));
            }
        }
    }
}
