//! Small dense linear algebra: exact rational (complex) Gaussian elimination
//! for rank / solve / inverse, and float rank via singular values.
//!
//! Everything here operates on matrices of at most a few dozen rows, so
//! plain row reduction is the right tool; exactness matters more than speed.

use nalgebra::{Complex, DMatrix};
use num::{BigRational, Zero};

use crate::coeff::Coefficient;

/// Rank of a complex matrix with exact rational entries.
///
/// Panics if any entry is in float mode; callers dispatch on mode first.
pub fn rank_exact_complex(rows: &[Vec<Coefficient>]) -> usize {
    let mut m: Vec<Vec<Coefficient>> = rows.to_vec();
    let nrows = m.len();
    if nrows == 0 {
        return 0;
    }
    let ncols = m[0].len();
    let mut rank = 0;
    let mut col = 0;
    while rank < nrows && col < ncols {
        let pivot = (rank..nrows).find(|&r| !m[r][col].is_zero());
        let Some(p) = pivot else {
            col += 1;
            continue;
        };
        m.swap(rank, p);
        let inv = m[rank][col].clone();
        for r in (rank + 1)..nrows {
            if m[r][col].is_zero() {
                continue;
            }
            let factor = m[r][col].div(&inv);
            for c in col..ncols {
                let sub = factor.mul(&m[rank][c]);
                m[r][c] = m[r][c].sub(&sub);
            }
        }
        rank += 1;
        col += 1;
    }
    rank
}

/// Rank of a complex float matrix: singular values above
/// `rel_tol * sigma_max` count.
pub fn rank_float_complex(rows: &[Vec<Complex<f64>>], rel_tol: f64) -> usize {
    let nrows = rows.len();
    if nrows == 0 {
        return 0;
    }
    let ncols = rows[0].len();
    let m = DMatrix::from_fn(nrows, ncols, |r, c| rows[r][c]);
    let svd = m.svd(false, false);
    let smax = svd.singular_values.iter().cloned().fold(0.0, f64::max);
    if smax == 0.0 {
        return 0;
    }
    svd.singular_values.iter().filter(|&&s| s > rel_tol * smax).count()
}

/// Solve a square rational system `A x = b`; `None` when singular.
pub fn solve_exact(a: &[Vec<BigRational>], b: &[BigRational]) -> Option<Vec<BigRational>> {
    let n = a.len();
    assert!(a.iter().all(|row| row.len() == n) && b.len() == n);
    let mut m: Vec<Vec<BigRational>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, pivot);
        let inv = m[col][col].clone();
        for c in col..=n {
            m[col][c] = &m[col][c] / &inv;
        }
        for r in 0..n {
            if r != col && !m[r][col].is_zero() {
                let factor = m[r][col].clone();
                for c in col..=n {
                    let sub = &factor * &m[col][c];
                    m[r][c] = &m[r][c] - &sub;
                }
            }
        }
    }
    Some(m.into_iter().map(|row| row[n].clone()).collect())
}

/// Exact inverse of a square rational matrix; `None` when singular.
pub fn invert_exact(a: &[Vec<BigRational>]) -> Option<Vec<Vec<BigRational>>> {
    let n = a.len();
    let mut m: Vec<Vec<BigRational>> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            assert_eq!(row.len(), n);
            let mut r = row.clone();
            for j in 0..n {
                r.push(if i == j { num::one() } else { BigRational::zero() });
            }
            r
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, pivot);
        let inv = m[col][col].clone();
        for c in col..2 * n {
            m[col][c] = &m[col][c] / &inv;
        }
        for r in 0..n {
            if r != col && !m[r][col].is_zero() {
                let factor = m[r][col].clone();
                for c in col..2 * n {
                    let sub = &factor * &m[col][c];
                    m[r][c] = &m[r][c] - &sub;
                }
            }
        }
    }
    Some(m.into_iter().map(|row| row[n..].to_vec()).collect())
}

/// Rank of a real rational matrix.
pub fn rank_exact_real(rows: &[Vec<BigRational>]) -> usize {
    let complex_rows: Vec<Vec<Coefficient>> = rows
        .iter()
        .map(|r| {
            r.iter()
                .map(|x| {
                    Coefficient::Exact(crate::coeff::ExactComplex::new(x.clone(), BigRational::zero()))
                })
                .collect()
        })
        .collect();
    rank_exact_complex(&complex_rows)
}
