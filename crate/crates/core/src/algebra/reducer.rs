//! Incremental row echelon basis of a subspace of F_q^n.
//!
//! Vectors are inserted one at a time. An inserted vector either enlarges the
//! span or produces a linear relation among the tagged vectors inserted so
//! far, which is how kernels of long column sequences are read off in the
//! order the columns arrive. Over F_2 rows are packed into machine words.

use super::fq::Fq;
use super::matrix::axpy;

#[derive(Clone, Debug)]
enum Rows {
    Bits(Vec<Vec<u64>>),
    Elems(Vec<Vec<u32>>),
}

/// Result of inserting a vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Insertion {
    /// The vector was independent of the current span.
    Independent,
    /// The vector was dependent: `sum_k rel[k] * v_k = 0` over the tagged
    /// vectors `v_k`, with coefficient 1 on the new vector's own tag.
    Dependent(Vec<u32>),
}

#[derive(Clone, Debug)]
pub struct Reducer {
    fq: Fq,
    width: usize,
    tags: usize,
    rows: Rows,
    pivots: Vec<usize>,
    is_pivot: Vec<bool>,
}

fn words(n: usize) -> usize {
    n.div_ceil(64)
}

fn get_bit(v: &[u64], i: usize) -> bool {
    (v[i / 64] >> (i % 64)) & 1 == 1
}

impl Reducer {
    /// A reducer for vectors of length `width`, with room for `tags` tracked insertions.
    pub fn new(fq: Fq, width: usize, tags: usize) -> Self {
        let rows = if fq.q() == 2 { Rows::Bits(Vec::new()) } else { Rows::Elems(Vec::new()) };
        Reducer { fq, width, tags, rows, pivots: Vec::new(), is_pivot: vec![false; width] }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn tags(&self) -> usize {
        self.tags
    }

    /// Coordinates that carry a pivot; the remaining ones span a complement.
    pub fn is_pivot(&self, i: usize) -> bool {
        self.is_pivot[i]
    }

    /// Make room for more tracked insertions.
    pub fn grow_tags(&mut self, tags: usize) {
        if tags <= self.tags {
            return;
        }
        let total = self.width + tags;
        match &mut self.rows {
            Rows::Bits(rs) => rs.iter_mut().for_each(|r| r.resize(words(total), 0)),
            Rows::Elems(rs) => rs.iter_mut().for_each(|r| r.resize(total, 0)),
        }
        self.tags = tags;
    }

    /// Insert `v`, tracked under `tag` when given.
    pub fn insert(&mut self, v: &[u32], tag: Option<usize>) -> Insertion {
        assert_eq!(v.len(), self.width, "vector length");
        let fq = self.fq;
        let total = self.width + self.tags;
        match &mut self.rows {
            Rows::Bits(rs) => {
                let mut w = vec![0u64; words(total)];
                for (i, &x) in v.iter().enumerate() {
                    if x & 1 == 1 {
                        w[i / 64] |= 1 << (i % 64);
                    }
                }
                if let Some(t) = tag {
                    let i = self.width + t;
                    w[i / 64] |= 1 << (i % 64);
                }
                for (r, &p) in rs.iter().zip(&self.pivots) {
                    if get_bit(&w, p) {
                        w.iter_mut().zip(r).for_each(|(a, b)| *a ^= b);
                    }
                }
                match (0..self.width).find(|&i| get_bit(&w, i)) {
                    Some(p) => {
                        rs.push(w);
                        self.pivots.push(p);
                        self.is_pivot[p] = true;
                        Insertion::Independent
                    }
                    None => Insertion::Dependent((0..self.tags).map(|t| get_bit(&w, self.width + t) as u32).collect()),
                }
            }
            Rows::Elems(rs) => {
                let mut w = vec![0u32; total];
                w[..self.width].copy_from_slice(v);
                if let Some(t) = tag {
                    w[self.width + t] = 1;
                }
                for (r, &p) in rs.iter().zip(&self.pivots) {
                    let c = w[p];
                    if c != 0 {
                        axpy(fq, &mut w, r, fq.neg(c));
                    }
                }
                match (0..self.width).find(|&i| w[i] != 0) {
                    Some(p) => {
                        let inv = fq.inv(w[p]).expect("nonzero pivot");
                        w.iter_mut().for_each(|x| *x = fq.mul(*x, inv));
                        rs.push(w);
                        self.pivots.push(p);
                        self.is_pivot[p] = true;
                        Insertion::Independent
                    }
                    None => Insertion::Dependent(w[self.width..].to_vec()),
                }
            }
        }
    }

    /// Remainder of `v` modulo the span; it vanishes on every pivot coordinate.
    pub fn reduce(&self, v: &[u32]) -> Vec<u32> {
        assert_eq!(v.len(), self.width, "vector length");
        let fq = self.fq;
        match &self.rows {
            Rows::Bits(rs) => {
                let mut w = vec![0u64; words(self.width + self.tags)];
                for (i, &x) in v.iter().enumerate() {
                    if x & 1 == 1 {
                        w[i / 64] |= 1 << (i % 64);
                    }
                }
                for (r, &p) in rs.iter().zip(&self.pivots) {
                    if get_bit(&w, p) {
                        w.iter_mut().zip(r).for_each(|(a, b)| *a ^= b);
                    }
                }
                (0..self.width).map(|i| get_bit(&w, i) as u32).collect()
            }
            Rows::Elems(rs) => {
                let mut w = v.to_vec();
                for (r, &p) in rs.iter().zip(&self.pivots) {
                    let c = w[p];
                    if c != 0 {
                        axpy(fq, &mut w, &r[..self.width], fq.neg(c));
                    }
                }
                w
            }
        }
    }

    pub fn contains(&self, v: &[u32]) -> bool {
        self.reduce(v).iter().all(|&x| x == 0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::matrix::FqMatrix;
    use proptest::prelude::*;

    #[test]
    fn relation_is_reported() {
        let f3 = Fq::new(3).unwrap();
        let mut r = Reducer::new(f3, 3, 3);
        assert_eq!(r.insert(&[1, 2, 0], Some(0)), Insertion::Independent);
        assert_eq!(r.insert(&[0, 1, 1], Some(1)), Insertion::Independent);
        // v2 = v0 + 2 v1  =>  v0 + 2 v1 - v2 = 0, normalized to coefficient 1 on v2
        match r.insert(&[1, 1, 2], Some(2)) {
            Insertion::Dependent(rel) => assert_eq!(rel, vec![2, 1, 1]),
            other => panic!("{other:?}"),
        }
        assert_eq!(r.rank(), 2);
    }

    proptest! {
        // [DERIVED] rank agrees with dense elimination and every relation holds.
        #[test]
        fn agrees_with_dense_rank(q in prop::sample::select(vec![2u32, 3, 4]), seed in any::<u64>()) {
            use rand::{Rng, SeedableRng};
            let fq = Fq::new(q).unwrap();
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let (n, m) = (rng.gen_range(1..80), rng.gen_range(1..12));
            let vecs: Vec<Vec<u32>> = (0..m)
                .map(|_| (0..n).map(|_| if rng.gen_bool(0.3) { rng.gen_range(0..q) } else { 0 }).collect())
                .collect();
            let mut red = Reducer::new(fq, n, m);
            for (k, v) in vecs.iter().enumerate() {
                if let Insertion::Dependent(rel) = red.insert(v, Some(k)) {
                    prop_assert_eq!(rel[k], 1);
                    for i in 0..n {
                        let s = (0..m).fold(0, |acc, j| fq.add(acc, fq.mul(rel[j], vecs[j][i])));
                        prop_assert_eq!(s, 0);
                    }
                }
            }
            let dense = FqMatrix::from_rows(fq, n, &vecs).unwrap();
            prop_assert_eq!(red.rank(), dense.rank());
            for v in &vecs {
                prop_assert!(red.contains(v));
            }
        }
    }
}
