//! Small exact linear algebra over a [`Scalar`] field: just enough Gaussian
//! elimination for matrix inverses, determinants, solving, and kernels.
//!
//! Matrices are dense row-major `Vec<Vec<Scalar>>`; everything here is
//! desk-scale (dimensions in the tens), so no pivoting strategy beyond
//! "first nonzero" is needed for exact arithmetic.

use crate::coeffs::{FieldSpec, Scalar};
use crate::{Error, Result};

pub type Mat = Vec<Vec<Scalar>>;

pub fn identity(field: FieldSpec, n: usize) -> Mat {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| Scalar::from_int(field, (i == j) as i64))
                .collect()
        })
        .collect()
}

pub fn diag(scales: &[Scalar]) -> Mat {
    let n = scales.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        scales[i].clone()
                    } else {
                        Scalar::zero(scales[i].field())
                    }
                })
                .collect()
        })
        .collect()
}

pub fn mat_mul(a: &Mat, b: &Mat) -> Mat {
    let n = a.len();
    let m = b[0].len();
    let k = b.len();
    let field = a[0][0].field();
    let mut out = vec![vec![Scalar::zero(field); m]; n];
    for i in 0..n {
        for j in 0..m {
            let mut acc = Scalar::zero(field);
            for l in 0..k {
                acc = acc.add(&a[i][l].mul(&b[l][j]));
            }
            out[i][j] = acc;
        }
    }
    out
}

pub fn mat_vec(a: &Mat, v: &[Scalar]) -> Vec<Scalar> {
    a.iter()
        .map(|row| {
            let mut acc = Scalar::zero(v[0].field());
            for (c, x) in row.iter().zip(v) {
                acc = acc.add(&c.mul(x));
            }
            acc
        })
        .collect()
}

/// Gauss-Jordan inverse; errors on singular input.
pub fn mat_inv(a: &Mat) -> Result<Mat> {
    let n = a.len();
    let field = a[0][0].field();
    let mut work = a.clone();
    let mut inv = identity(field, n);
    for col in 0..n {
        let pivot = (col..n)
            .find(|&r| !work[r][col].is_zero())
            .ok_or(Error::SingularLinearPart)?;
        work.swap(col, pivot);
        inv.swap(col, pivot);
        let d = work[col][col].inv()?;
        for j in 0..n {
            work[col][j] = work[col][j].mul(&d);
            inv[col][j] = inv[col][j].mul(&d);
        }
        for r in 0..n {
            if r != col && !work[r][col].is_zero() {
                let f = work[r][col].clone();
                for j in 0..n {
                    work[r][j] = work[r][j].sub(&f.mul(&work[col][j]));
                    inv[r][j] = inv[r][j].sub(&f.mul(&inv[col][j]));
                }
            }
        }
    }
    Ok(inv)
}

pub fn mat_det(a: &Mat) -> Scalar {
    let n = a.len();
    let field = a[0][0].field();
    let mut work = a.clone();
    let mut det = Scalar::one(field);
    for col in 0..n {
        let pivot = match (col..n).find(|&r| !work[r][col].is_zero()) {
            Some(p) => p,
            None => return Scalar::zero(field),
        };
        if pivot != col {
            work.swap(col, pivot);
            det = det.neg();
        }
        det = det.mul(&work[col][col]);
        let d = work[col][col].inv().expect("nonzero pivot");
        for r in col + 1..n {
            if !work[r][col].is_zero() {
                let f = work[r][col].mul(&d);
                for j in col..n {
                    work[r][j] = work[r][j].sub(&f.mul(&work[col][j]));
                }
            }
        }
    }
    det
}

/// Solve `sum_j c_j * cols[j] = target` exactly.  Returns `None` when the
/// target is outside the column span.  The solution sets free variables to
/// zero, so it tends to use few columns.
pub fn solve_columns(cols: &[Vec<Scalar>], target: &[Scalar]) -> Option<Vec<Scalar>> {
    if cols.is_empty() {
        return if target.iter().all(|c| c.is_zero()) {
            Some(vec![])
        } else {
            None
        };
    }
    let rows = target.len();
    let ncols = cols.len();
    let field = target
        .first()
        .map(|c| c.field())
        .unwrap_or_else(|| cols[0][0].field());
    // augmented matrix [cols | target]
    let mut aug: Vec<Vec<Scalar>> = (0..rows)
        .map(|r| {
            let mut row: Vec<Scalar> = cols.iter().map(|c| c[r].clone()).collect();
            row.push(target[r].clone());
            row
        })
        .collect();
    let mut pivot_of_col: Vec<Option<usize>> = vec![None; ncols];
    let mut rank = 0usize;
    for col in 0..ncols {
        let pivot = match (rank..rows).find(|&r| !aug[r][col].is_zero()) {
            Some(p) => p,
            None => continue,
        };
        aug.swap(rank, pivot);
        let d = aug[rank][col].inv().expect("nonzero pivot");
        for j in col..=ncols {
            aug[rank][j] = aug[rank][j].mul(&d);
        }
        for r in 0..rows {
            if r != rank && !aug[r][col].is_zero() {
                let f = aug[r][col].clone();
                for j in col..=ncols {
                    aug[r][j] = aug[r][j].sub(&f.mul(&aug[rank][j]));
                }
            }
        }
        pivot_of_col[col] = Some(rank);
        rank += 1;
    }
    // inconsistency: a zero row with nonzero rhs
    for r in rank..rows {
        if !aug[r][ncols].is_zero() {
            return None;
        }
    }
    let mut sol = vec![Scalar::zero(field); ncols];
    for (col, piv) in pivot_of_col.iter().enumerate() {
        if let Some(r) = piv {
            sol[col] = aug[*r][ncols].clone();
        }
    }
    Some(sol)
}

/// Kernel basis of the row system `rows * x = 0` in `nvars` unknowns.
pub fn kernel(rows: &[Vec<Scalar>], nvars: usize, field: FieldSpec) -> Vec<Vec<Scalar>> {
    let mut work: Vec<Vec<Scalar>> = rows.to_vec();
    let nrows = work.len();
    let mut pivot_cols = Vec::new();
    let mut rank = 0usize;
    for col in 0..nvars {
        let pivot = match (rank..nrows).find(|&r| !work[r][col].is_zero()) {
            Some(p) => p,
            None => continue,
        };
        work.swap(rank, pivot);
        let d = work[rank][col].inv().expect("nonzero pivot");
        for j in col..nvars {
            work[rank][j] = work[rank][j].mul(&d);
        }
        for r in 0..nrows {
            if r != rank && !work[r][col].is_zero() {
                let f = work[r][col].clone();
                for j in col..nvars {
                    work[r][j] = work[r][j].sub(&f.mul(&work[rank][j]));
                }
            }
        }
        pivot_cols.push(col);
        rank += 1;
    }
    let mut basis = Vec::new();
    for free in 0..nvars {
        if pivot_cols.contains(&free) {
            continue;
        }
        let mut v = vec![Scalar::zero(field); nvars];
        v[free] = Scalar::one(field);
        for (r, &pc) in pivot_cols.iter().enumerate() {
            v[pc] = work[r][free].neg();
        }
        basis.push(v);
    }
    basis
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(v: i64) -> Scalar {
        Scalar::from_int(FieldSpec::Q, v)
    }

    #[test]
    fn inverse_round_trip() {
        let a = vec![vec![s(1), s(2)], vec![s(3), s(4)]];
        let inv = mat_inv(&a).unwrap();
        assert_eq!(mat_mul(&a, &inv), identity(FieldSpec::Q, 2));
        assert_eq!(mat_mul(&inv, &a), identity(FieldSpec::Q, 2));
    }

    #[test]
    fn singular_matrix_rejected() {
        let a = vec![vec![s(1), s(2)], vec![s(2), s(4)]];
        assert_eq!(mat_inv(&a), Err(Error::SingularLinearPart));
        assert!(mat_det(&a).is_zero());
    }

    #[test]
    fn solve_and_kernel_agree() {
        // col0 + col1 = target
        let cols = vec![vec![s(1), s(0)], vec![s(0), s(1)], vec![s(1), s(1)]];
        let sol = solve_columns(&cols, &[s(1), s(1)]).unwrap();
        // check the combination reproduces the target
        for r in 0..2 {
            let mut acc = s(0);
            for (j, c) in sol.iter().enumerate() {
                acc = acc.add(&c.mul(&cols[j][r]));
            }
            assert_eq!(acc, s(1));
        }
        let rows = vec![vec![s(1), s(0), s(1)], vec![s(0), s(1), s(1)]];
        let k = kernel(&rows, 3, FieldSpec::Q);
        assert_eq!(k.len(), 1);
        for row in &rows {
            let mut acc = s(0);
            for (j, c) in k[0].iter().enumerate() {
                acc = acc.add(&c.mul(&row[j]));
            }
            assert!(acc.is_zero());
        }
    }
}
