//! Exact determinants of polynomial matrices.

use super::div::exact_div;
use super::{QPoly, RingError};

/// Fraction-free determinant: Bareiss one-step elimination, whose interior
/// divisions are exact in any integral domain; small matrices go through
/// cofactor expansion directly.
pub fn det_fraction_free(matrix: &[Vec<QPoly>]) -> Result<QPoly, RingError> {
    let n = matrix.len();
    for row in matrix {
        if row.len() != n {
            return Err(RingError::NonSquareMatrix);
        }
    }
    if n == 0 {
        return Err(RingError::NonSquareMatrix);
    }
    let ctx = matrix[0][0].ctx().clone();
    if n < 5 {
        return cofactor_det(matrix);
    }
    let mut m: Vec<Vec<QPoly>> = matrix.to_vec();
    let mut sign = 1i32;
    let mut prev = QPoly::one(&ctx);
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            let pivot_row = (k + 1..n).find(|&r| !m[r][k].is_zero());
            match pivot_row {
                Some(r) => {
                    m.swap(k, r);
                    sign = -sign;
                }
                None => return Ok(QPoly::zero(&ctx)),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let a = m[k][k].mul(&m[i][j])?;
                let b = m[i][k].mul(&m[k][j])?;
                m[i][j] = exact_div(&a.sub(&b)?, &prev)?;
            }
            m[i][k] = QPoly::zero(&ctx);
        }
        prev = m[k][k].clone();
    }
    let det = m[n - 1][n - 1].clone();
    Ok(if sign < 0 { det.neg() } else { det })
}

/// Plain cofactor expansion along the first row.
pub fn cofactor_det(matrix: &[Vec<QPoly>]) -> Result<QPoly, RingError> {
    let n = matrix.len();
    let ctx = matrix[0][0].ctx().clone();
    if n == 1 {
        return Ok(matrix[0][0].clone());
    }
    let mut det = QPoly::zero(&ctx);
    for j in 0..n {
        if matrix[0][j].is_zero() {
            continue;
        }
        let minor: Vec<Vec<QPoly>> = (1..n)
            .map(|i| {
                (0..n)
                    .filter(|&c| c != j)
                    .map(|c| matrix[i][c].clone())
                    .collect()
            })
            .collect();
        let sub = cofactor_det(&minor)?;
        let contrib = matrix[0][j].mul(&sub)?;
        det = if j % 2 == 0 {
            det.add(&contrib)?
        } else {
            det.sub(&contrib)?
        };
    }
    Ok(det)
}
