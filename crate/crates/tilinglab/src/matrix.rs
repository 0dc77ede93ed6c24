//! Square matrices over the rationals with exact determinant, inverse and
//! the integer-lattice predicates (integral row, Minkowski search, Hajós).

use num::{One, Signed, Zero};

use crate::error::{Result, TilingError};
use crate::ratio::{dot, is_integer, Rat, RatVec};

/// A square rational matrix, stored row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix {
    dim: usize,
    rows: Vec<RatVec>,
}

impl Matrix {
    pub fn new(rows: Vec<RatVec>) -> Result<Self> {
        let dim = rows.len();
        if dim == 0 || rows.iter().any(|r| r.len() != dim) {
            return Err(TilingError::Domain(
                "matrix must be square and non-empty".into(),
            ));
        }
        Ok(Matrix { dim, rows })
    }

    pub fn identity(dim: usize) -> Self {
        let rows = (0..dim)
            .map(|i| {
                (0..dim)
                    .map(|j| if i == j { Rat::one() } else { Rat::zero() })
                    .collect()
            })
            .collect();
        Matrix { dim, rows }
    }

    pub fn diagonal(entries: &[Rat]) -> Self {
        let dim = entries.len();
        let rows = (0..dim)
            .map(|i| {
                (0..dim)
                    .map(|j| {
                        if i == j {
                            entries[i].clone()
                        } else {
                            Rat::zero()
                        }
                    })
                    .collect()
            })
            .collect();
        Matrix { dim, rows }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entry(&self, i: usize, j: usize) -> &Rat {
        &self.rows[i][j]
    }

    pub fn rows(&self) -> &[RatVec] {
        &self.rows
    }

    pub fn row(&self, i: usize) -> &[Rat] {
        &self.rows[i]
    }

    pub fn col(&self, j: usize) -> RatVec {
        self.rows.iter().map(|r| r[j].clone()).collect()
    }

    pub fn transpose(&self) -> Matrix {
        let rows = (0..self.dim).map(|j| self.col(j)).collect();
        Matrix {
            dim: self.dim,
            rows,
        }
    }

    pub fn mul_vec(&self, v: &[Rat]) -> RatVec {
        self.rows.iter().map(|r| dot(r, v)).collect()
    }

    pub fn mul_mat(&self, other: &Matrix) -> Matrix {
        let rows = (0..self.dim)
            .map(|i| {
                (0..self.dim)
                    .map(|j| {
                        (0..self.dim)
                            .map(|k| &self.rows[i][k] * other.entry(k, j))
                            .sum()
                    })
                    .collect()
            })
            .collect();
        Matrix {
            dim: self.dim,
            rows,
        }
    }

    /// Exact determinant by Gaussian elimination with rational pivots.
    pub fn determinant(&self) -> Rat {
        let mut m: Vec<RatVec> = self.rows.clone();
        let n = self.dim;
        let mut det = Rat::one();
        for col in 0..n {
            let pivot = match (col..n).find(|&r| !m[r][col].is_zero()) {
                Some(p) => p,
                None => return Rat::zero(),
            };
            if pivot != col {
                m.swap(pivot, col);
                det = -det;
            }
            det *= m[col][col].clone();
            let inv = m[col][col].recip();
            for r in col + 1..n {
                if m[r][col].is_zero() {
                    continue;
                }
                let factor = &m[r][col] * &inv;
                for c in col..n {
                    let sub = &factor * &m[col][c];
                    m[r][c] -= sub;
                }
            }
        }
        det
    }

    /// Exact inverse by Gauss-Jordan elimination.
    pub fn inverse(&self) -> Result<Matrix> {
        let n = self.dim;
        let mut m: Vec<RatVec> = self
            .rows
            .iter()
            .enumerate()
            .map(|(i, r)| {
                let mut row = r.clone();
                row.extend((0..n).map(|j| if i == j { Rat::one() } else { Rat::zero() }));
                row
            })
            .collect();
        for col in 0..n {
            let pivot = (col..n)
                .find(|&r| !m[r][col].is_zero())
                .ok_or(TilingError::SingularLattice)?;
            m.swap(pivot, col);
            let inv = m[col][col].recip();
            for c in 0..2 * n {
                m[col][c] *= inv.clone();
            }
            for r in 0..n {
                if r == col || m[r][col].is_zero() {
                    continue;
                }
                let factor = m[r][col].clone();
                for c in 0..2 * n {
                    let sub = &factor * &m[col][c];
                    m[r][c] -= sub;
                }
            }
        }
        let rows = m.into_iter().map(|r| r[n..].to_vec()).collect();
        Ok(Matrix { dim: n, rows })
    }

    /// Solves `self * x = b` exactly.
    pub fn solve(&self, b: &[Rat]) -> Result<RatVec> {
        Ok(self.inverse()?.mul_vec(b))
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.dim).all(|i| (0..i).all(|j| self.rows[i][j] == self.rows[j][i]))
    }
}

/// Smallest 1-based index of an all-integer row, if any.
pub fn integral_row_index(a: &Matrix) -> Option<usize> {
    (0..a.dim())
        .find(|&i| a.row(i).iter().all(is_integer))
        .map(|i| i + 1)
}

/// Enumerates `x ∈ Z^d \ {0}` with `‖x‖∞ ≤ bound`, in increasing ∞-norm,
/// then increasing L1-norm, then lexicographically descending. This order
/// puts `(1,0,…,0)` first and prefers positive sign patterns on ties.
pub fn integer_shells(dim: usize, bound: i64) -> impl Iterator<Item = Vec<i64>> {
    (1..=bound).flat_map(move |norm| {
        let mut shell: Vec<Vec<i64>> = Vec::new();
        let mut x = vec![-norm; dim];
        loop {
            if x.iter().any(|&c| c.abs() == norm) {
                shell.push(x.clone());
            }
            // odometer increment over [-norm, norm]^d
            let mut k = dim;
            let mut done = false;
            loop {
                if k == 0 {
                    done = true;
                    break;
                }
                k -= 1;
                if x[k] < norm {
                    x[k] += 1;
                    for c in x.iter_mut().skip(k + 1) {
                        *c = -norm;
                    }
                    break;
                }
            }
            if done {
                break;
            }
        }
        shell.sort_by(|a, b| {
            let l1a: i64 = a.iter().map(|c| c.abs()).sum();
            let l1b: i64 = b.iter().map(|c| c.abs()).sum();
            l1a.cmp(&l1b).then_with(|| b.cmp(a))
        });
        shell.into_iter()
    })
}

/// Bounded exhaustive search for a nonzero integer vector with `‖Ax‖∞ ≤ 1`.
///
/// Requires `det A = 1` exactly. Returns the first hit in smallest-∞-norm,
/// then lexicographic, order; `None` when no hit exists within the bound.
pub fn minkowski_vector(a: &Matrix, search_bound: i64) -> Result<Option<Vec<i64>>> {
    if a.determinant() != Rat::one() {
        return Err(TilingError::Precondition(
            "minkowski_vector requires det A = 1".into(),
        ));
    }
    if search_bound < 1 {
        return Err(TilingError::Precondition(
            "search_bound must be >= 1".into(),
        ));
    }
    let one = Rat::one();
    for x in integer_shells(a.dim(), search_bound) {
        let xr: RatVec = x.iter().map(|&c| Rat::from_integer(c.into())).collect();
        let ax = a.mul_vec(&xr);
        if ax.iter().all(|c| c.abs() <= one) {
            return Ok(Some(x));
        }
    }
    Ok(None)
}

/// Outcome of the bounded Hajós predicate check.
#[derive(Debug, Clone)]
pub struct HajosReport {
    pub holds_up_to_bound: bool,
    /// A violating `x` (no coordinate of `Bx` is a nonzero integer), if found.
    pub witness: Option<Vec<i64>>,
    pub integral_row: Option<usize>,
}

/// Checks that every `x ∈ Z^d \ {0}` with `‖x‖∞ ≤ range_bound` has some
/// coordinate of `Bx` equal to a nonzero integer (exact rational test).
pub fn hajos_predicate(b: &Matrix, range_bound: i64) -> Result<HajosReport> {
    if b.determinant() != Rat::one() {
        return Err(TilingError::Precondition(
            "hajos_predicate requires det B = 1".into(),
        ));
    }
    let mut witness = None;
    for x in integer_shells(b.dim(), range_bound) {
        let xr: RatVec = x.iter().map(|&c| Rat::from_integer(c.into())).collect();
        let bx = b.mul_vec(&xr);
        let ok = bx.iter().any(|c| is_integer(c) && !c.is_zero());
        if !ok {
            witness = Some(x);
            break;
        }
    }
    Ok(HajosReport {
        holds_up_to_bound: witness.is_none(),
        witness,
        integral_row: integral_row_index(b),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratio::{rat, rat_int};

    fn m(rows: &[&[(i64, i64)]]) -> Matrix {
        Matrix::new(
            rows.iter()
                .map(|r| r.iter().map(|&(p, q)| rat(p, q)).collect())
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn determinant_2x2() {
        let a = m(&[&[(1, 1), (-1, 2)], &[(-1, 3), (1, 1)]]);
        assert_eq!(a.determinant(), rat(5, 6));
    }

    #[test]
    fn inverse_round_trip() {
        let a = m(&[&[(2, 1), (1, 1)], &[(1, 1), (1, 1)]]);
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul_mat(&inv), Matrix::identity(2));
    }

    #[test]
    fn integral_row_examples() {
        assert_eq!(integral_row_index(&Matrix::identity(2)), Some(1));
        let a = m(&[&[(1, 1), (0, 1)], &[(1, 2), (1, 1)]]);
        assert_eq!(integral_row_index(&a), Some(1));
        let b = m(&[&[(1, 2), (1, 2)], &[(1, 3), (2, 3)]]);
        assert_eq!(integral_row_index(&b), None);
    }

    #[test]
    fn minkowski_identity() {
        let x = minkowski_vector(&Matrix::identity(3), 2).unwrap().unwrap();
        assert_eq!(x, vec![1, 0, 0]);
    }

    #[test]
    fn minkowski_diagonal() {
        let a = m(&[&[(2, 1), (0, 1)], &[(0, 1), (1, 2)]]);
        assert!(a.determinant() == rat_int(1));
        let x = minkowski_vector(&a, 2).unwrap().unwrap();
        assert_eq!(x, vec![0, 1]);
    }

    #[test]
    fn minkowski_rejects_non_unimodular() {
        let a = m(&[&[(2, 1), (0, 1)], &[(0, 1), (1, 1)]]);
        assert!(minkowski_vector(&a, 2).is_err());
    }

    #[test]
    fn minkowski_shear() {
        // A = [[1,0],[1/2,1]]: x = (-1,-1) has Ax = (-1,-3/2), too big in row 2;
        // the search still finds a shell-1 vector with ‖Ax‖∞ ≤ 1.
        let a = m(&[&[(1, 1), (0, 1)], &[(1, 2), (1, 1)]]);
        let x = minkowski_vector(&a, 2).unwrap().unwrap();
        let xr: Vec<Rat> = x.iter().map(|&c| rat_int(c)).collect();
        assert!(a.mul_vec(&xr).iter().all(|c| c.abs() <= rat_int(1)));
        assert_eq!(x.iter().map(|c| c.abs()).max(), Some(1));
    }

    #[test]
    fn hajos_identity_holds() {
        let rep = hajos_predicate(&Matrix::identity(2), 5).unwrap();
        assert!(rep.holds_up_to_bound);
        assert_eq!(rep.integral_row, Some(1));
    }

    #[test]
    fn hajos_lower_triangular_holds() {
        let b = m(&[&[(1, 1), (0, 1)], &[(1, 2), (1, 1)]]);
        let rep = hajos_predicate(&b, 10).unwrap();
        assert!(rep.holds_up_to_bound);
        assert_eq!(rep.integral_row, Some(1));
    }

    #[test]
    fn shell_enumeration_counts() {
        let d2: Vec<_> = integer_shells(2, 2).collect();
        assert_eq!(d2.len(), 24); // 5^2 - 1
        assert!(d2[..8]
            .iter()
            .all(|x| x.iter().map(|c| c.abs()).max() == Some(1)));
    }
}
