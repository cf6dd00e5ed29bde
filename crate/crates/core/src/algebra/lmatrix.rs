//! Determinants and linear solves over `k((u))` with precision tracking.
//!
//! Gaussian elimination picks the pivot of least valuation in each column;
//! every entry keeps the absolute precision it actually has, so the
//! returned determinant reports how much precision survived.

use super::laurent::Laurent;
use super::AlgebraError;

/// Determinant of a square matrix of series, with intermediate entries cut at `cap`.
pub fn det(rows: &[Vec<Laurent>], cap: i64) -> Result<Laurent, AlgebraError> {
    let n = rows.len();
    if rows.iter().any(|r| r.len() != n) {
        return Err(AlgebraError::Dimension("determinant of a non-square matrix".into()));
    }
    let Some(fq) = rows.first().and_then(|r| r.first()).map(|x| x.fq()) else {
        return Err(AlgebraError::Dimension("determinant of an empty matrix".into()));
    };
    let mut a: Vec<Vec<Laurent>> = rows.iter().map(|r| r.iter().map(|x| x.truncate(cap)).collect()).collect();
    let mut acc = Laurent::one(fq);
    for k in 0..n {
        let pivot = (k..n)
            .filter_map(|r| a[r][k].valuation().map(|v| (v, r)))
            .min()
            .map(|(_, r)| r);
        let Some(pr) = pivot else {
            // the whole column is zero to its precision
            let bound = (k..n).map(|r| a[r][k].prec()).min().unwrap();
            return Err(AlgebraError::InvertPrecisionZero(bound));
        };
        if pr != k {
            a.swap(pr, k);
            acc = acc.neg();
        }
        let pivot_row = a[k].clone();
        let pv = pivot_row[k].clone();
        acc = acc.mul_capped(&pv, cap);
        let inv = pv.inv(cap.saturating_add(pv.val_bound().abs()))?;
        for row in a.iter_mut().skip(k + 1) {
            if row[k].is_zero() && row[k].is_exact() {
                continue;
            }
            let factor = row[k].mul_capped(&inv, cap);
            for j in k + 1..n {
                let sub = factor.mul_capped(&pivot_row[j], cap);
                row[j] = row[j].sub(&sub).truncate(cap);
            }
        }
    }
    Ok(acc)
}
