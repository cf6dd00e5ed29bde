//! Field structures with explicit context objects.
//!
//! Elements are plain values; all arithmetic goes through the field object,
//! so fields whose parameters are only known at runtime (F_q for a user
//! supplied q, residue fields k[t]/(p)) share one generic polynomial layer.

use std::fmt::Debug;
use std::hash::Hash;

pub trait Field: Clone + PartialEq + Debug {
    type Elem: Clone + PartialEq + Eq + Hash + Debug;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    /// Multiplicative inverse; `None` for zero.
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn characteristic(&self) -> u64;
    /// Number of elements.
    fn order(&self) -> u64;
    /// The `idx`-th element in a fixed enumeration, `idx < order()`.
    fn element(&self, idx: u64) -> Self::Elem;

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }

    fn pow(&self, a: &Self::Elem, mut n: u64) -> Self::Elem {
        let mut base = a.clone();
        let mut acc = self.one();
        while n > 0 {
            if n & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            n >>= 1;
        }
        acc
    }

    fn from_int(&self, n: i64) -> Self::Elem {
        let p = self.characteristic() as i64;
        let r = n.rem_euclid(p);
        let mut acc = self.zero();
        let one = self.one();
        for _ in 0..r {
            acc = self.add(&acc, &one);
        }
        acc
    }
}
