//! The finite field F_q, q = p^e, with table-driven arithmetic.
//!
//! Elements are encoded as integers `0..q`: the base-p digits are the
//! coefficients of `1, g, ..., g^(e-1)` where `g` is a root of the stored
//! modulus. The modulus is the lexicographically smallest monic primitive
//! polynomial of degree `e` over F_p (comparing the constant coefficient
//! first), so `g` generates F_q^× and every nonzero element prints as `g^j`.

use std::collections::HashMap;
use std::fmt;
use std::sync::Mutex;

use super::field::Field;
use super::AlgebraError;

/// Largest supported field size; all tables are `q * q` bytes.
pub const MAX_Q: u32 = 256;

#[derive(Debug)]
struct Tables {
    p: u32,
    e: u32,
    q: u32,
    /// Modulus coefficients, constant term first, monic of degree `e`.
    modulus: Vec<u32>,
    add: Vec<u8>,
    mul: Vec<u8>,
    neg: Vec<u8>,
    inv: Vec<u8>,
    /// `log[a]` with `g^log[a] = a` for nonzero `a`.
    log: Vec<u32>,
    /// `exp[j] = g^j` for `j < q - 1`.
    exp: Vec<u8>,
}

/// Handle to an interned finite field. Cheap to copy and compare.
#[derive(Clone, Copy)]
pub struct Fq(&'static Tables);

pub type FqElem = u32;

static FIELDS: Mutex<Option<HashMap<u32, &'static Tables>>> = Mutex::new(None);

fn factor_prime_power(q: u32) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = 2;
    while p * p <= q && !q.is_multiple_of(p) {
        p += 1;
    }
    if !q.is_multiple_of(p) {
        p = q;
    }
    let (mut r, mut e) = (q, 0);
    while r % p == 0 {
        r /= p;
        e += 1;
    }
    (r == 1).then_some((p, e))
}

/// Multiply two digit vectors modulo `modulus` over F_p.
fn mul_digits(a: &[u32], b: &[u32], modulus: &[u32], p: u32) -> Vec<u32> {
    let e = modulus.len() - 1;
    let mut prod = vec![0u32; 2 * e];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % p;
        }
    }
    for k in (e..2 * e).rev() {
        let c = prod[k];
        if c != 0 {
            for (j, &m) in modulus.iter().enumerate().take(e) {
                let idx = k - e + j;
                prod[idx] = (prod[idx] + p * p - c * m % p) % p;
            }
            prod[k] = 0;
        }
    }
    prod.truncate(e);
    prod
}

fn encode(d: &[u32], p: u32) -> u32 {
    d.iter().rev().fold(0, |acc, &x| acc * p + x)
}

fn decode(mut v: u32, p: u32, e: usize) -> Vec<u32> {
    (0..e)
        .map(|_| {
            let r = v % p;
            v /= p;
            r
        })
        .collect()
}

/// Order of `g = [0,1,0..]` in the quotient ring, or 0 if it hits zero.
fn generator_order(modulus: &[u32], p: u32) -> u32 {
    let e = modulus.len() - 1;
    let q = p.pow(e as u32);
    let mut g = vec![0u32; e];
    if e == 1 {
        // For prime fields the "generator" is -modulus[0].
        g[0] = (p - modulus[0]) % p;
    } else {
        g[1] = 1;
    }
    let mut x = g.clone();
    for k in 1..q {
        if x.iter().all(|&c| c == 0) {
            return 0;
        }
        if x[0] == 1 && x[1..].iter().all(|&c| c == 0) {
            return k;
        }
        x = mul_digits(&x, &g, modulus, p);
    }
    0
}

fn build(p: u32, e: u32) -> Tables {
    let q = p.pow(e);
    let eu = e as usize;
    // Search monic polynomials of degree e in lexicographic order of the
    // lower coefficients; keep the first whose root has order q - 1.
    let mut modulus = None;
    for low in 0..q {
        let mut m = decode(low, p, eu);
        m.push(1);
        if e == 1 && m[0] == 0 && q > 2 {
            continue;
        }
        if generator_order(&m, p) == q - 1 || (q == 2 && e == 1) {
            modulus = Some(m);
            break;
        }
    }
    let modulus = modulus.expect("primitive polynomial exists");
    let n = q as usize;
    let mut add = vec![0u8; n * n];
    let mut mul = vec![0u8; n * n];
    let mut neg = vec![0u8; n];
    let mut inv = vec![0u8; n];
    for a in 0..q {
        let da = decode(a, p, eu);
        neg[a as usize] = encode(&da.iter().map(|&x| (p - x) % p).collect::<Vec<_>>(), p) as u8;
        for b in 0..q {
            let db = decode(b, p, eu);
            let s: Vec<u32> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
            add[a as usize * n + b as usize] = encode(&s, p) as u8;
            mul[a as usize * n + b as usize] = encode(&mul_digits(&da, &db, &modulus, p), p) as u8;
        }
    }
    for a in 1..q {
        for b in 1..q {
            if mul[a as usize * n + b as usize] == 1 {
                inv[a as usize] = b as u8;
                break;
            }
        }
    }
    let g: u32 = if e == 1 { (p - modulus[0]) % p } else { p };
    let g = if q == 2 { 1 } else { g };
    let mut exp = vec![0u8; n.max(2) - 1];
    let mut log = vec![0u32; n];
    let mut x = 1u32;
    for (j, slot) in exp.iter_mut().enumerate() {
        *slot = x as u8;
        log[x as usize] = j as u32;
        x = mul[x as usize * n + g as usize] as u32;
    }
    Tables { p, e, q, modulus, add, mul, neg, inv, log, exp }
}

impl Fq {
    /// Intern the field with `q` elements.
    pub fn new(q: u32) -> Result<Fq, AlgebraError> {
        let (p, e) = factor_prime_power(q).ok_or(AlgebraError::NotPrimePower(q))?;
        if q > MAX_Q {
            return Err(AlgebraError::FieldTooLarge(q));
        }
        let mut guard = FIELDS.lock().unwrap_or_else(|e| e.into_inner());
        let map = guard.get_or_insert_with(HashMap::new);
        let tables = *map.entry(q).or_insert_with(|| Box::leak(Box::new(build(p, e))));
        Ok(Fq(tables))
    }

    #[inline]
    pub fn q(self) -> u32 {
        self.0.q
    }

    #[inline]
    pub fn p(self) -> u32 {
        self.0.p
    }

    /// Extension degree `e` of F_q over F_p.
    #[inline]
    pub fn degree(self) -> u32 {
        self.0.e
    }

    /// Stored modulus of F_q over F_p, constant term first.
    pub fn modulus(self) -> &'static [u32] {
        &self.0.modulus
    }

    #[inline]
    pub fn add(self, a: u32, b: u32) -> u32 {
        self.0.add[(a * self.0.q + b) as usize] as u32
    }

    #[inline]
    pub fn sub(self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn neg(self, a: u32) -> u32 {
        self.0.neg[a as usize] as u32
    }

    #[inline]
    pub fn mul(self, a: u32, b: u32) -> u32 {
        self.0.mul[(a * self.0.q + b) as usize] as u32
    }

    #[inline]
    pub fn inv(self, a: u32) -> Option<u32> {
        (a != 0).then(|| self.0.inv[a as usize] as u32)
    }

    /// Primitive element `g`.
    pub fn generator(self) -> u32 {
        self.0.exp.get(1).copied().unwrap_or(1) as u32
    }

    /// Discrete logarithm to base `g`.
    pub fn log(self, a: u32) -> Option<u32> {
        (a != 0).then(|| self.0.log[a as usize])
    }

    /// `g^j`.
    pub fn gpow(self, j: i64) -> u32 {
        let n = (self.0.q - 1) as i64;
        self.0.exp[j.rem_euclid(n) as usize] as u32
    }

    pub fn pow(self, a: u32, n: u64) -> u32 {
        if a == 0 {
            return if n == 0 { 1 } else { 0 };
        }
        let l = self.0.log[a as usize] as u64;
        self.gpow(((l * (n % (self.0.q as u64 - 1))) % (self.0.q as u64 - 1)) as i64)
    }

    /// The image of an integer under Z -> F_p -> F_q.
    pub fn from_int(self, n: i64) -> u32 {
        // prime-field elements are the digit vectors (r, 0, ..., 0)
        n.rem_euclid(self.0.p as i64) as u32
    }

    /// The `(q-1)`-th roots of unity subgroup of order `n` (requires `n | q-1`).
    pub fn roots_of_unity(self, n: u32) -> Vec<u32> {
        let step = (self.0.q - 1) / n;
        (0..n).map(|j| self.gpow((j * step) as i64)).collect()
    }

    /// Render an element in the polynomial text grammar.
    pub fn format_elem(self, a: u32) -> String {
        if self.0.e == 1 {
            a.to_string()
        } else if a == 0 {
            "0".into()
        } else if a == 1 {
            "1".into()
        } else {
            let j = self.0.log[a as usize];
            if j == 1 {
                "g".into()
            } else {
                format!("g^{j}")
            }
        }
    }
}

impl PartialEq for Fq {
    fn eq(&self, other: &Self) -> bool {
        self.0.q == other.0.q
    }
}

impl Eq for Fq {}

impl fmt::Debug for Fq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}", self.0.q)
    }
}

impl Field for Fq {
    type Elem = u32;

    fn zero(&self) -> u32 {
        0
    }
    fn one(&self) -> u32 {
        1
    }
    fn add(&self, a: &u32, b: &u32) -> u32 {
        Fq::add(*self, *a, *b)
    }
    fn sub(&self, a: &u32, b: &u32) -> u32 {
        Fq::sub(*self, *a, *b)
    }
    fn neg(&self, a: &u32) -> u32 {
        Fq::neg(*self, *a)
    }
    fn mul(&self, a: &u32, b: &u32) -> u32 {
        Fq::mul(*self, *a, *b)
    }
    fn inv(&self, a: &u32) -> Option<u32> {
        Fq::inv(*self, *a)
    }
    fn is_zero(&self, a: &u32) -> bool {
        *a == 0
    }
    fn characteristic(&self) -> u64 {
        self.0.p as u64
    }
    fn order(&self) -> u64 {
        self.0.q as u64
    }
    fn element(&self, idx: u64) -> u32 {
        idx as u32
    }
    fn pow(&self, a: &u32, n: u64) -> u32 {
        Fq::pow(*self, *a, n)
    }
    fn from_int(&self, n: i64) -> u32 {
        Fq::from_int(*self, n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_fields() {
        let f = Fq::new(5).unwrap();
        assert_eq!(f.add(3, 4), 2);
        assert_eq!(f.mul(3, 4), 2);
        assert_eq!(f.inv(2), Some(3));
        assert_eq!(f.neg(1), 4);
        assert_eq!(f.inv(0), None);
    }

    #[test]
    fn rejects_bad_sizes() {
        assert!(Fq::new(6).is_err());
        assert!(Fq::new(1).is_err());
        assert!(Fq::new(512).is_err());
    }

    #[test]
    fn field_axioms_and_frobenius() {
        for q in [2u32, 3, 4, 8, 9, 16, 25, 27] {
            let f = Fq::new(q).unwrap();
            for a in 0..q {
                assert_eq!(f.pow(a, q as u64), a, "x^q = x in F_{q}");
                if a != 0 {
                    assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
                    assert_eq!(f.gpow(f.log(a).unwrap() as i64), a);
                }
                for b in 0..q {
                    let p = f.p() as u64;
                    assert_eq!(f.pow(f.add(a, b), p), f.add(f.pow(a, p), f.pow(b, p)));
                    for c in [0, 1, q - 1] {
                        assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                    }
                }
            }
        }
    }

    #[test]
    fn generator_is_primitive() {
        let f = Fq::new(16).unwrap();
        let g = f.generator();
        let mut seen = std::collections::HashSet::new();
        let mut x = 1;
        for _ in 0..15 {
            seen.insert(x);
            x = f.mul(x, g);
        }
        assert_eq!(seen.len(), 15);
        assert_eq!(f.modulus(), &[1, 1, 0, 0, 1]);
    }
}
