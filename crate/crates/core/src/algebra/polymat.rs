//! Matrices over k[t]: fraction-free determinants, Hermite and Smith forms.

use super::fq::Fq;
use super::matrix::FqMatrix;
use super::poly::FqPoly;
use super::AlgebraError;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PolyMatrix {
    fq: Fq,
    rows: usize,
    cols: usize,
    data: Vec<FqPoly>,
}

/// Result of a Smith normal form computation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithForm {
    /// Monic nonzero invariant factors `d_1 | d_2 | ...`.
    pub invariants: Vec<FqPoly>,
    pub rank: usize,
}

impl SmithForm {
    /// Product of the invariant factors (monic generator of the Fitting
    /// ideal of the cokernel for a square nonsingular matrix).
    pub fn product(&self, fq: Fq) -> FqPoly {
        self.invariants.iter().fold(FqPoly::one(fq), |acc, d| &acc * d)
    }
}

impl PolyMatrix {
    pub fn zeros(fq: Fq, rows: usize, cols: usize) -> Self {
        PolyMatrix { fq, rows, cols, data: vec![FqPoly::zero(fq); rows * cols] }
    }

    pub fn identity(fq: Fq, n: usize) -> Self {
        let mut m = Self::zeros(fq, n, n);
        for i in 0..n {
            m.set(i, i, FqPoly::one(fq));
        }
        m
    }

    pub fn from_rows(fq: Fq, rows: Vec<Vec<FqPoly>>) -> Result<Self, AlgebraError> {
        let cols = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != cols) {
            return Err(AlgebraError::Dimension("ragged polynomial matrix".into()));
        }
        let n = rows.len();
        Ok(PolyMatrix { fq, rows: n, cols, data: rows.into_iter().flatten().collect() })
    }

    /// `t I - T` for a square matrix `T` over F_q.
    pub fn char_matrix(t_mat: &FqMatrix) -> Self {
        let fq = t_mat.fq();
        let n = t_mat.rows();
        let mut m = Self::zeros(fq, n, n);
        for i in 0..n {
            for j in 0..n {
                let mut p = FqPoly::constant(fq, fq.neg(t_mat.get(i, j)));
                if i == j {
                    p = &p + &FqPoly::var(fq);
                }
                m.set(i, j, p);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &FqPoly {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: FqPoly) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[FqPoly] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn mul(&self, rhs: &PolyMatrix) -> Result<PolyMatrix, AlgebraError> {
        if self.cols != rhs.rows {
            return Err(AlgebraError::Dimension("polynomial matrix product".into()));
        }
        let mut out = Self::zeros(self.fq, self.rows, rhs.cols);
        for i in 0..self.rows {
            for j in 0..rhs.cols {
                let mut acc = FqPoly::zero(self.fq);
                for k in 0..self.cols {
                    acc = &acc + &(self.get(i, k) * rhs.get(k, j));
                }
                out.set(i, j, acc);
            }
        }
        Ok(out)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// `row[dst] -= f * row[src]`.
    fn row_sub(&mut self, dst: usize, src: usize, f: &FqPoly) {
        for j in 0..self.cols {
            let s = self.get(src, j);
            if !s.is_zero() {
                let v = self.get(dst, j) - &(f * s);
                self.set(dst, j, v);
            }
        }
    }

    /// `col[dst] -= f * col[src]`.
    fn col_sub(&mut self, dst: usize, src: usize, f: &FqPoly) {
        for i in 0..self.rows {
            let s = self.get(i, src);
            if !s.is_zero() {
                let v = self.get(i, dst) - &(f * s);
                self.set(i, dst, v);
            }
        }
    }

    /// Determinant by Bareiss fraction-free elimination.
    pub fn det(&self) -> Result<FqPoly, AlgebraError> {
        if self.rows != self.cols {
            return Err(AlgebraError::Dimension("determinant of a non-square matrix".into()));
        }
        let n = self.rows;
        if n == 0 {
            return Ok(FqPoly::one(self.fq));
        }
        let mut m = self.clone();
        let mut prev = FqPoly::one(self.fq);
        let mut negate = false;
        for k in 0..n - 1 {
            if m.get(k, k).is_zero() {
                let Some(p) = (k + 1..n).find(|&i| !m.get(i, k).is_zero()) else {
                    return Ok(FqPoly::zero(self.fq));
                };
                m.swap_rows(k, p);
                negate = !negate;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = &(m.get(i, j) * m.get(k, k)) - &(m.get(i, k) * m.get(k, j));
                    m.set(i, j, num.div_exact(&prev).expect("Bareiss division is exact"));
                }
                m.set(i, k, FqPoly::zero(self.fq));
            }
            prev = m.get(k, k).clone();
        }
        let d = m.get(n - 1, n - 1).clone();
        Ok(if negate { -&d } else { d })
    }

    fn reduce_row(&mut self, i: usize, d: &FqPoly) {
        for j in 0..self.cols {
            let v = self.get(i, j).rem(d).unwrap();
            self.set(i, j, v);
        }
    }

    fn reduce_col(&mut self, j: usize, d: &FqPoly) {
        for i in 0..self.rows {
            let v = self.get(i, j).rem(d).unwrap();
            self.set(i, j, v);
        }
    }

    fn scale_row(&mut self, i: usize, c: u32) {
        for j in 0..self.cols {
            let v = self.get(i, j).scale(&c);
            self.set(i, j, v);
        }
    }

    /// Row Hermite normal form `H = U A` with `U` unimodular: the nonzero
    /// rows of `H` form an echelon basis of the row module, pivots monic,
    /// entries above each pivot reduced modulo it. Also returns the pivot
    /// columns.
    pub fn hermite_form(&self) -> (PolyMatrix, PolyMatrix, Vec<usize>) {
        let mut m = self.clone();
        let mut u = PolyMatrix::identity(self.fq, self.rows);
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            loop {
                // smallest-degree nonzero entry in column c at or below row r
                let best = (r..m.rows).filter(|&i| !m.get(i, c).is_zero()).min_by_key(|&i| m.get(i, c).degree());
                let Some(b) = best else { break };
                m.swap_rows(r, b);
                u.swap_rows(r, b);
                let mut done = true;
                for i in r + 1..m.rows {
                    if !m.get(i, c).is_zero() {
                        let (qt, _) = m.get(i, c).divrem(m.get(r, c)).unwrap();
                        m.row_sub(i, r, &qt);
                        u.row_sub(i, r, &qt);
                        if !m.get(i, c).is_zero() {
                            done = false;
                        }
                    }
                }
                if done {
                    break;
                }
            }
            if m.get(r, c).is_zero() {
                continue;
            }
            let lc = self.fq.inv(m.get(r, c).lc()).unwrap();
            m.scale_row(r, lc);
            u.scale_row(r, lc);
            for i in 0..r {
                let (qt, _) = m.get(i, c).divrem(m.get(r, c)).unwrap();
                if !qt.is_zero() {
                    m.row_sub(i, r, &qt);
                    u.row_sub(i, r, &qt);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, u, pivots)
    }

    /// Smith normal form invariants.
    pub fn smith_form(&self) -> SmithForm {
        self.smith_impl(false).0
    }

    /// Smith form with unimodular `U`, `V` such that `U A V` is diagonal
    /// with the returned invariants (then zeros) on the diagonal.
    pub fn smith_with_transforms(&self) -> (SmithForm, PolyMatrix, PolyMatrix) {
        self.smith_impl(true)
    }

    /// Without `track`, the returned transforms are empty placeholders.
    fn smith_impl(&self, track: bool) -> (SmithForm, PolyMatrix, PolyMatrix) {
        let fq = self.fq;
        let mut m = self.clone();
        let (ur, vc) = if track { (self.rows, self.cols) } else { (0, 0) };
        let mut u = PolyMatrix::identity(fq, ur);
        let mut v = PolyMatrix::identity(fq, vc);
        let n = m.rows.min(m.cols);
        // Without transforms, a nonsingular square matrix is reduced modulo
        // its determinant D: every invariant divides D, so working over
        // k[t]/(D) keeps degrees bounded and loses nothing.
        let modulus = if !track && m.rows == m.cols && n > 0 {
            self.det().ok().filter(|d| !d.is_zero() && !d.is_constant())
        } else {
            None
        };
        if let Some(d) = &modulus {
            for i in 0..m.rows {
                m.reduce_row(i, d);
            }
        }
        let mut invariants = Vec::new();
        for k in 0..n {
            let nonzero = (k..m.rows).flat_map(|i| (k..m.cols).map(move |j| (i, j))).filter(|&(i, j)| !m.get(i, j).is_zero());
            let Some((pi, pj)) = nonzero.min_by_key(|&(i, j)| m.get(i, j).degree()) else {
                if let Some(d) = &modulus {
                    invariants.extend((k..n).map(|_| d.monic()));
                }
                break;
            };
            m.swap_rows(k, pi);
            if track {
                u.swap_rows(k, pi);
            }
            m.swap_cols(k, pj);
            if track {
                v.swap_cols(k, pj);
            }
            loop {
                let mut changed = false;
                for i in k + 1..m.rows {
                    if !m.get(i, k).is_zero() {
                        let (qt, rem) = m.get(i, k).divrem(m.get(k, k)).unwrap();
                        m.row_sub(i, k, &qt);
                        if let Some(d) = &modulus {
                            m.reduce_row(i, d);
                        }
                        if track {
                            u.row_sub(i, k, &qt);
                        }
                        if !rem.is_zero() {
                            m.swap_rows(k, i);
                            if track {
                                u.swap_rows(k, i);
                            }
                            changed = true;
                        }
                    }
                }
                for j in k + 1..m.cols {
                    if !m.get(k, j).is_zero() {
                        let (qt, rem) = m.get(k, j).divrem(m.get(k, k)).unwrap();
                        m.col_sub(j, k, &qt);
                        if let Some(d) = &modulus {
                            m.reduce_col(j, d);
                        }
                        if track {
                            v.col_sub(j, k, &qt);
                        }
                        if !rem.is_zero() {
                            m.swap_cols(k, j);
                            if track {
                                v.swap_cols(k, j);
                            }
                            changed = true;
                        }
                    }
                }
                if changed {
                    continue;
                }
                // divisibility of the remaining block by the pivot
                let bad = (k + 1..m.rows).find(|&i| (k + 1..m.cols).any(|j| !m.get(i, j).rem(m.get(k, k)).unwrap().is_zero()));
                match bad {
                    Some(i) => {
                        let minus_one = FqPoly::constant(fq, fq.neg(1));
                        m.row_sub(k, i, &minus_one);
                        if let Some(d) = &modulus {
                            m.reduce_row(k, d);
                        }
                        if track {
                            u.row_sub(k, i, &minus_one);
                        }
                    }
                    None => break,
                }
            }
            let c = fq.inv(m.get(k, k).lc()).unwrap();
            m.scale_row(k, c);
            if track {
                u.scale_row(k, c);
            }
            invariants.push(match &modulus {
                Some(d) => m.get(k, k).gcd(d).unwrap().monic(),
                None => m.get(k, k).clone(),
            });
        }
        (SmithForm { rank: invariants.len(), invariants }, u, v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(fq: Fq, c: &[i64]) -> FqPoly {
        FqPoly::from_ints(fq, c)
    }

    #[test]
    fn smith_of_diagonal() {
        let f2 = Fq::new(2).unwrap();
        // diag(t, t+1) has invariants 1, t^2+t
        let m = PolyMatrix::from_rows(f2, vec![vec![p(f2, &[0, 1]), p(f2, &[])], vec![p(f2, &[]), p(f2, &[1, 1])]]).unwrap();
        let s = m.smith_form();
        assert_eq!(s.invariants, vec![FqPoly::one(f2), p(f2, &[0, 1, 1])]);
        assert_eq!(m.det().unwrap(), p(f2, &[0, 1, 1]));
    }

    #[test]
    fn hermite_reduces() {
        let f3 = Fq::new(3).unwrap();
        let m = PolyMatrix::from_rows(f3, vec![vec![p(f3, &[0, 1]), p(f3, &[1])], vec![p(f3, &[1, 1]), p(f3, &[0, 0, 1])]]).unwrap();
        let (h, u, piv) = m.hermite_form();
        assert_eq!(u.mul(&m).unwrap(), h);
        assert!(u.det().unwrap().is_constant());
        assert_eq!(piv, vec![0, 1]);
        assert!(h.get(0, 0).is_one());
        assert!(h.get(1, 0).is_zero());
        assert!(h.get(1, 1).is_monic());
        assert!(h.get(0, 1).degree() < h.get(1, 1).degree());
        // the determinant is preserved up to a unit
        assert_eq!(h.det().unwrap().monic(), m.det().unwrap().monic());
    }

    #[test]
    fn smith_reorders_for_divisibility() {
        let f2 = Fq::new(2).unwrap();
        let m = PolyMatrix::from_rows(f2, vec![vec![p(f2, &[0, 0, 1]), p(f2, &[])], vec![p(f2, &[]), p(f2, &[0, 1])]]).unwrap();
        assert_eq!(m.smith_form().invariants, vec![p(f2, &[0, 1]), p(f2, &[0, 0, 1])]);
        let id = PolyMatrix::identity(f2, 3);
        assert_eq!(id.hermite_form().0, id);
    }

    fn arb_matrix(q: u32, n: usize, v: &[u32]) -> PolyMatrix {
        let fq = Fq::new(q).unwrap();
        let rows = (0..n)
            .map(|i| (0..n).map(|j| FqPoly::new(fq, v[(i * n + j) * 3..(i * n + j) * 3 + 3].iter().map(|&c| c % q).collect())).collect())
            .collect();
        PolyMatrix::from_rows(fq, rows).unwrap()
    }

    proptest! {
        #[test]
        fn smith_recomposes(q in prop::sample::select(vec![2u32, 3]), v in prop::collection::vec(0u32..3, 27)) {
            let a = arb_matrix(q, 3, &v);
            let (s, u, w) = a.smith_with_transforms();
            prop_assert!(u.det().unwrap().is_constant() && !u.det().unwrap().is_zero());
            prop_assert!(w.det().unwrap().is_constant() && !w.det().unwrap().is_zero());
            let d = u.mul(&a).unwrap().mul(&w).unwrap();
            for i in 0..3 {
                for j in 0..3 {
                    let expect = if i == j && i < s.rank { s.invariants[i].clone() } else { FqPoly::zero(*a.get(0, 0).field()) };
                    prop_assert_eq!(d.get(i, j), &expect);
                }
            }
        }

        #[test]
        fn hermite_is_canonical(q in prop::sample::select(vec![2u32, 3]), v in prop::collection::vec(0u32..3, 27)) {
            let a = arb_matrix(q, 3, &v);
            let mut b = a.clone();
            b.swap_rows(0, 2);
            let tmp = b.clone();
            b.row_sub(1, 0, tmp.get(0, 0));
            prop_assert_eq!(a.hermite_form().0, b.hermite_form().0);
        }

        #[test]
        fn smith_product_is_char_poly(q in prop::sample::select(vec![2u32, 3]), n in 1usize..5, v in prop::collection::vec(0u32..3, 16)) {
            let fq = Fq::new(q).unwrap();
            let rows: Vec<Vec<u32>> = (0..n).map(|i| (0..n).map(|j| v[i * 4 + j] % q).collect()).collect();
            let t = FqMatrix::from_rows(fq, n, &rows).unwrap();
            let cm = PolyMatrix::char_matrix(&t);
            let s = cm.smith_form();
            let det = cm.det().unwrap();
            prop_assert_eq!(det.degree(), n as i64);
            prop_assert!(det.is_monic());
            prop_assert_eq!(s.product(fq), det);
            for w in s.invariants.windows(2) {
                prop_assert!(w[1].rem(&w[0]).unwrap().is_zero());
            }
        }
    }
}
