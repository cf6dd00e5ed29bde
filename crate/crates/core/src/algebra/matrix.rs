//! Dense matrices over F_q with Gaussian elimination.

use std::fmt;

use super::fq::Fq;
use super::AlgebraError;

#[derive(Clone, PartialEq, Eq)]
pub struct FqMatrix {
    fq: Fq,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

/// `dst += c * src` over F_q.
pub fn axpy(fq: Fq, dst: &mut [u32], src: &[u32], c: u32) {
    if c == 0 {
        return;
    }
    if fq.q() == 2 {
        for (d, &s) in dst.iter_mut().zip(src) {
            *d ^= s;
        }
    } else {
        for (d, &s) in dst.iter_mut().zip(src) {
            if s != 0 {
                *d = fq.add(*d, fq.mul(c, s));
            }
        }
    }
}

impl FqMatrix {
    pub fn zeros(fq: Fq, rows: usize, cols: usize) -> Self {
        FqMatrix { fq, rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(fq: Fq, n: usize) -> Self {
        let mut m = Self::zeros(fq, n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_rows(fq: Fq, cols: usize, rows: &[Vec<u32>]) -> Result<Self, AlgebraError> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            if r.len() != cols {
                return Err(AlgebraError::Dimension(format!("row of length {} in {}-column matrix", r.len(), cols)));
            }
            data.extend_from_slice(r);
        }
        Ok(FqMatrix { fq, rows: rows.len(), cols, data })
    }

    pub fn fq(&self) -> Fq {
        self.fq
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: u32) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[u32] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<u32>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn push_row(&mut self, r: &[u32]) {
        assert_eq!(r.len(), self.cols);
        self.data.extend_from_slice(r);
        self.rows += 1;
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.fq, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    pub fn mul(&self, rhs: &FqMatrix) -> Result<FqMatrix, AlgebraError> {
        if self.cols != rhs.rows {
            return Err(AlgebraError::Dimension(format!("{}x{} times {}x{}", self.rows, self.cols, rhs.rows, rhs.cols)));
        }
        let mut out = Self::zeros(self.fq, self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a != 0 {
                    let (start, end) = (i * rhs.cols, (i + 1) * rhs.cols);
                    axpy(self.fq, &mut out.data[start..end], rhs.row(k), a);
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[u32]) -> Vec<u32> {
        let fq = self.fq;
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).fold(0, |acc, (&a, &b)| fq.add(acc, fq.mul(a, b))))
            .collect()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// `row[dst] += c * row[src]`.
    fn add_row(&mut self, dst: usize, src: usize, c: u32) {
        let cols = self.cols;
        let (d, s) = if dst < src {
            let (lo, hi) = self.data.split_at_mut(src * cols);
            (&mut lo[dst * cols..(dst + 1) * cols], &hi[..cols])
        } else {
            let (lo, hi) = self.data.split_at_mut(dst * cols);
            (&mut hi[..cols], &lo[src * cols..(src + 1) * cols])
        };
        axpy(self.fq, d, s, c);
    }

    fn scale_row(&mut self, i: usize, c: u32) {
        let fq = self.fq;
        for x in &mut self.data[i * self.cols..(i + 1) * self.cols] {
            *x = fq.mul(*x, c);
        }
    }

    /// In-place reduced row echelon form; returns the pivot columns.
    pub fn rref(&mut self) -> Vec<usize> {
        let fq = self.fq;
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| self.get(i, c) != 0) else { continue };
            self.swap_rows(r, p);
            let inv = fq.inv(self.get(r, c)).unwrap();
            self.scale_row(r, inv);
            for i in 0..self.rows {
                if i != r {
                    let f = self.get(i, c);
                    if f != 0 {
                        self.add_row(i, r, fq.neg(f));
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.clone().rref().len()
    }

    /// Basis of the right kernel `{x : A x = 0}` in canonical form (one
    /// vector per free column, with a 1 in that column).
    pub fn kernel(&self) -> Vec<Vec<u32>> {
        let fq = self.fq;
        let mut m = self.clone();
        let pivots = m.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let mut out = Vec::new();
        for free in (0..self.cols).filter(|&j| !is_pivot[j]) {
            let mut v = vec![0u32; self.cols];
            v[free] = 1;
            for (i, &p) in pivots.iter().enumerate() {
                v[p] = fq.neg(m.get(i, free));
            }
            out.push(v);
        }
        out
    }

    /// A solution of `A x = b` with all free variables zero, if one exists.
    pub fn solve(&self, b: &[u32]) -> Option<Vec<u32>> {
        assert_eq!(b.len(), self.rows);
        let mut aug = Self::zeros(self.fq, self.rows, self.cols + 1);
        for i in 0..self.rows {
            aug.data[i * (self.cols + 1)..i * (self.cols + 1) + self.cols].copy_from_slice(self.row(i));
            aug.set(i, self.cols, b[i]);
        }
        let pivots = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![0u32; self.cols];
        for (i, &p) in pivots.iter().enumerate() {
            x[p] = aug.get(i, self.cols);
        }
        Some(x)
    }

    pub fn det(&self) -> Result<u32, AlgebraError> {
        if self.rows != self.cols {
            return Err(AlgebraError::Dimension("determinant of a non-square matrix".into()));
        }
        let fq = self.fq;
        let mut m = self.clone();
        let mut det = 1u32;
        for c in 0..m.cols {
            let Some(p) = (c..m.rows).find(|&i| m.get(i, c) != 0) else { return Ok(0) };
            if p != c {
                m.swap_rows(c, p);
                det = fq.neg(det);
            }
            let pv = m.get(c, c);
            det = fq.mul(det, pv);
            let inv = fq.inv(pv).unwrap();
            for i in c + 1..m.rows {
                let f = m.get(i, c);
                if f != 0 {
                    m.add_row(i, c, fq.neg(fq.mul(f, inv)));
                }
            }
        }
        Ok(det)
    }

    pub fn inverse(&self) -> Option<FqMatrix> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let mut aug = Self::zeros(self.fq, n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j));
            }
            aug.set(i, n + i, 1);
        }
        let pivots = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        let mut out = Self::zeros(self.fq, n, n);
        for i in 0..n {
            for j in 0..n {
                out.set(i, j, aug.get(i, n + j));
            }
        }
        Some(out)
    }
}

impl fmt::Debug for FqMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            writeln!(f, "{:?}", self.row(i))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn mat(q: u32, n: usize, m: usize, v: &[u32]) -> FqMatrix {
        let fq = Fq::new(q).unwrap();
        let rows: Vec<Vec<u32>> = (0..n).map(|i| (0..m).map(|j| v[(i * m + j) % v.len()] % q).collect()).collect();
        FqMatrix::from_rows(fq, m, &rows).unwrap()
    }

    /// Determinant by Leibniz expansion.
    fn leibniz(a: &FqMatrix) -> u32 {
        let n = a.rows();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut total = 0;
        fn rec(k: usize, perm: &mut Vec<usize>, sign: bool, a: &FqMatrix, total: &mut u32) {
            let fq = a.fq();
            let n = perm.len();
            if k == n {
                let mut p = 1;
                for (i, &j) in perm.iter().enumerate() {
                    p = fq.mul(p, a.get(i, j));
                }
                *total = fq.add(*total, if sign { fq.neg(p) } else { p });
                return;
            }
            for i in k..n {
                perm.swap(k, i);
                rec(k + 1, perm, sign ^ (i != k), a, total);
                perm.swap(k, i);
            }
        }
        rec(0, &mut perm, false, a, &mut total);
        total
    }

    #[test]
    fn inverse_and_solve() {
        let a = mat(5, 3, 3, &[1, 2, 0, 3, 1, 4, 0, 2, 2]);
        let ai = a.inverse().unwrap();
        assert_eq!(a.mul(&ai).unwrap(), FqMatrix::identity(a.fq(), 3));
        let x = a.solve(&[1, 0, 3]).unwrap();
        assert_eq!(a.mul_vec(&x), vec![1, 0, 3]);
    }

    proptest! {
        #[test]
        fn det_matches_leibniz(q in prop::sample::select(vec![2u32, 3, 4, 7]), n in 1usize..5, v in prop::collection::vec(0u32..7, 25)) {
            let a = mat(q, n, n, &v);
            prop_assert_eq!(a.det().unwrap(), leibniz(&a));
        }

        #[test]
        fn rank_nullity(q in prop::sample::select(vec![2u32, 3, 9]), n in 1usize..6, m in 1usize..7, v in prop::collection::vec(0u32..9, 42)) {
            let a = mat(q, n, m, &v);
            let ker = a.kernel();
            prop_assert_eq!(a.rank() + ker.len(), m);
            for k in &ker {
                prop_assert!(a.mul_vec(k).iter().all(|&x| x == 0));
            }
        }
    }
}
