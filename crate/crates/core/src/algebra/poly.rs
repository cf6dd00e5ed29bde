//! Dense univariate polynomials over a [`Field`].

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Mul, Neg, Sub};

use super::field::Field;
use super::fq::Fq;
use super::AlgebraError;

/// Polynomial with coefficients stored lowest degree first and no trailing
/// zeros.
#[derive(Clone)]
pub struct Poly<F: Field> {
    field: F,
    coeffs: Vec<F::Elem>,
}

/// Polynomials in `t` over F_q.
pub type FqPoly = Poly<Fq>;

impl<F: Field> Poly<F> {
    pub fn new(field: F, mut coeffs: Vec<F::Elem>) -> Self {
        while coeffs.last().is_some_and(|c| field.is_zero(c)) {
            coeffs.pop();
        }
        Poly { field, coeffs }
    }

    pub fn zero(field: F) -> Self {
        Poly { field, coeffs: Vec::new() }
    }

    pub fn one(field: F) -> Self {
        let one = field.one();
        Poly { field, coeffs: vec![one] }
    }

    pub fn constant(field: F, c: F::Elem) -> Self {
        Poly::new(field, vec![c])
    }

    /// `c * t^n`.
    pub fn monomial(field: F, c: F::Elem, n: usize) -> Self {
        let mut coeffs = vec![field.zero(); n + 1];
        coeffs[n] = c;
        Poly::new(field, coeffs)
    }

    /// The variable `t`.
    pub fn var(field: F) -> Self {
        let one = field.one();
        Poly::monomial(field, one, 1)
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn coeffs(&self) -> &[F::Elem] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<F::Elem> {
        self.coeffs
    }

    pub fn coeff(&self, i: usize) -> F::Elem {
        self.coeffs.get(i).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.field.is_one(&self.coeffs[0])
    }

    /// Degree, `None` for the zero polynomial.
    pub fn deg(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with `deg 0 = -1`, handy for size comparisons.
    pub fn degree(&self) -> i64 {
        self.coeffs.len() as i64 - 1
    }

    pub fn lc(&self) -> F::Elem {
        self.coeffs.last().cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn is_monic(&self) -> bool {
        self.field.is_one(&self.lc())
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn scale(&self, c: &F::Elem) -> Self {
        let f = &self.field;
        Poly::new(f.clone(), self.coeffs.iter().map(|a| f.mul(a, c)).collect())
    }

    /// Scale to leading coefficient 1; the zero polynomial is returned as is.
    pub fn monic(&self) -> Self {
        match self.field.inv(&self.lc()) {
            Some(inv) if !self.is_monic() => self.scale(&inv),
            _ => self.clone(),
        }
    }

    /// Multiply by `t^k`.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut coeffs = vec![self.field.zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        Poly { field: self.field.clone(), coeffs }
    }

    /// `p(t^k)`. Over F_q with `k = q^j` this is the Frobenius `p^(q^j)`.
    pub fn spread(&self, k: usize) -> Self {
        if self.coeffs.len() <= 1 || k == 1 {
            return self.clone();
        }
        let mut coeffs = vec![self.field.zero(); (self.coeffs.len() - 1) * k + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[i * k] = c.clone();
        }
        Poly { field: self.field.clone(), coeffs }
    }

    pub fn derivative(&self) -> Self {
        let f = &self.field;
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| f.mul(&f.from_int(i as i64), c))
            .collect();
        Poly::new(f.clone(), coeffs)
    }

    pub fn eval(&self, x: &F::Elem) -> F::Elem {
        let f = &self.field;
        self.coeffs.iter().rev().fold(f.zero(), |acc, c| f.add(&f.mul(&acc, x), c))
    }

    /// Quotient and remainder; errors when dividing by zero.
    pub fn divrem(&self, d: &Self) -> Result<(Self, Self), AlgebraError> {
        let f = &self.field;
        let dl = f.inv(&d.lc()).ok_or(AlgebraError::DivisionByZero)?;
        if self.coeffs.len() < d.coeffs.len() {
            return Ok((Poly::zero(f.clone()), self.clone()));
        }
        let mut r = self.coeffs.clone();
        let dn = d.coeffs.len() - 1;
        let mut quot = vec![f.zero(); r.len() - dn];
        for k in (dn..r.len()).rev() {
            if f.is_zero(&r[k]) {
                continue;
            }
            let c = f.mul(&r[k], &dl);
            for (j, dc) in d.coeffs.iter().enumerate() {
                if !f.is_zero(dc) {
                    let idx = k - dn + j;
                    r[idx] = f.sub(&r[idx], &f.mul(&c, dc));
                }
            }
            quot[k - dn] = c;
        }
        r.truncate(dn);
        Ok((Poly::new(f.clone(), quot), Poly::new(f.clone(), r)))
    }

    pub fn rem(&self, d: &Self) -> Result<Self, AlgebraError> {
        Ok(self.divrem(d)?.1)
    }

    /// Quotient of an exact division; `None` if the remainder is nonzero.
    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        let (q, r) = self.divrem(d).ok()?;
        r.is_zero().then_some(q)
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &Self) -> Result<Self, AlgebraError> {
        if self.is_zero() && other.is_zero() {
            return Err(AlgebraError::ZeroGcd);
        }
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b)?;
            a = b;
            b = r;
        }
        Ok(a.monic())
    }

    /// Extended gcd: returns `(g, s, u)` with `s*self + u*other = g`, `g` monic.
    pub fn ext_gcd(&self, other: &Self) -> Result<(Self, Self, Self), AlgebraError> {
        if self.is_zero() && other.is_zero() {
            return Err(AlgebraError::ZeroGcd);
        }
        let f = self.field.clone();
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (Poly::one(f.clone()), Poly::zero(f.clone()));
        let (mut t0, mut t1) = (Poly::zero(f.clone()), Poly::one(f.clone()));
        while !r1.is_zero() {
            let (qt, r) = r0.divrem(&r1)?;
            let s = &s0 - &(&qt * &s1);
            let t = &t0 - &(&qt * &t1);
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s);
            t0 = std::mem::replace(&mut t1, t);
        }
        let inv = f.inv(&r0.lc()).ok_or(AlgebraError::DivisionByZero)?;
        Ok((r0.scale(&inv), s0.scale(&inv), t0.scale(&inv)))
    }

    pub fn pow(&self, mut n: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Poly::one(self.field.clone());
        while n > 0 {
            if n & 1 == 1 {
                acc = &acc * &base;
            }
            n >>= 1;
            if n > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// `self^n mod m`.
    pub fn pow_mod(&self, mut n: u128, m: &Self) -> Result<Self, AlgebraError> {
        let mut base = self.rem(m)?;
        let mut acc = Poly::one(self.field.clone()).rem(m)?;
        while n > 0 {
            if n & 1 == 1 {
                acc = (&acc * &base).rem(m)?;
            }
            n >>= 1;
            if n > 0 {
                base = (&base * &base).rem(m)?;
            }
        }
        Ok(acc)
    }

    /// Inverse modulo `m`, if it exists.
    pub fn inv_mod(&self, m: &Self) -> Option<Self> {
        let (g, s, _) = self.ext_gcd(m).ok()?;
        g.is_one().then(|| s.rem(m).ok()).flatten()
    }

    /// Compose `self(g(t))`.
    pub fn compose(&self, g: &Self) -> Self {
        let f = self.field.clone();
        self.coeffs.iter().rev().fold(Poly::zero(f.clone()), |acc, c| {
            &(&acc * g) + &Poly::constant(f.clone(), c.clone())
        })
    }

    /// Enumerate the `idx`-th monic polynomial of degree `n`, in the
    /// order of base-`|F|` digits of `idx` (constant coefficient first).
    pub fn monic_from_index(field: F, n: usize, mut idx: u64) -> Self {
        let qn = field.order();
        let mut coeffs = Vec::with_capacity(n + 1);
        for _ in 0..n {
            coeffs.push(field.element(idx % qn));
            idx /= qn;
        }
        coeffs.push(field.one());
        Poly::new(field, coeffs)
    }
}

impl FqPoly {
    /// Construct from integer coefficients (lowest first), reduced into F_q.
    pub fn from_ints(fq: Fq, coeffs: &[i64]) -> Self {
        Poly::new(fq, coeffs.iter().map(|&c| fq.from_int(c)).collect())
    }

    /// Encoding index used by [`Poly::monic_from_index`] (ignores the leading 1).
    pub fn index(&self) -> u64 {
        let q = self.field.q() as u64;
        let n = self.coeffs.len().saturating_sub(1);
        self.coeffs[..n].iter().rev().fold(0u64, |acc, &c| acc * q + c as u64)
    }

    /// Render with a chosen variable name.
    pub fn fmt_var(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let fq = self.field;
        let mut terms = Vec::new();
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let mono = match i {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{i}"),
            };
            let cs = fq.format_elem(c);
            terms.push(match (mono.is_empty(), c == 1) {
                (true, _) => cs,
                (false, true) => mono,
                (false, false) => format!("{cs}*{mono}"),
            });
        }
        terms.join("+")
    }
}

impl<F: Field> PartialEq for Poly<F> {
    fn eq(&self, other: &Self) -> bool {
        self.coeffs == other.coeffs
    }
}

impl<F: Field> Eq for Poly<F> {}

impl<F: Field> Hash for Poly<F> {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.coeffs.hash(state);
    }
}

impl FqPoly {
    /// Total order: by degree, then by coefficients from the top down.
    pub fn cmp_canonical(&self, other: &Self) -> Ordering {
        self.coeffs
            .len()
            .cmp(&other.coeffs.len())
            .then_with(|| self.coeffs.iter().rev().cmp(other.coeffs.iter().rev()))
    }
}

impl<F: Field> fmt::Debug for Poly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly{:?}", self.coeffs)
    }
}

impl fmt::Display for FqPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.fmt_var("t"))
    }
}

impl<F: Field> Add for &Poly<F> {
    type Output = Poly<F>;
    fn add(self, rhs: &Poly<F>) -> Poly<F> {
        let f = &self.field;
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n).map(|i| f.add(&self.coeff(i), &rhs.coeff(i))).collect();
        Poly::new(f.clone(), coeffs)
    }
}

impl<F: Field> Sub for &Poly<F> {
    type Output = Poly<F>;
    fn sub(self, rhs: &Poly<F>) -> Poly<F> {
        let f = &self.field;
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n).map(|i| f.sub(&self.coeff(i), &rhs.coeff(i))).collect();
        Poly::new(f.clone(), coeffs)
    }
}

impl<F: Field> Neg for &Poly<F> {
    type Output = Poly<F>;
    fn neg(self) -> Poly<F> {
        let f = &self.field;
        Poly::new(f.clone(), self.coeffs.iter().map(|c| f.neg(c)).collect())
    }
}

impl<F: Field> Mul for &Poly<F> {
    type Output = Poly<F>;
    fn mul(self, rhs: &Poly<F>) -> Poly<F> {
        let f = &self.field;
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero(f.clone());
        }
        let (a, b) = if self.coeffs.len() < rhs.coeffs.len() { (rhs, self) } else { (self, rhs) };
        let mut out = vec![f.zero(); a.coeffs.len() + b.coeffs.len() - 1];
        for (j, bc) in b.coeffs.iter().enumerate() {
            if f.is_zero(bc) {
                continue;
            }
            for (i, ac) in a.coeffs.iter().enumerate() {
                out[i + j] = f.add(&out[i + j], &f.mul(ac, bc));
            }
        }
        Poly::new(f.clone(), out)
    }
}

macro_rules! owned_ops {
    ($tr:ident, $m:ident) => {
        impl<F: Field> $tr for Poly<F> {
            type Output = Poly<F>;
            fn $m(self, rhs: Poly<F>) -> Poly<F> {
                (&self).$m(&rhs)
            }
        }
    };
}
owned_ops!(Add, add);
owned_ops!(Sub, sub);
owned_ops!(Mul, mul);

#[cfg(test)]
mod tests {
    use super::*;

    fn f2() -> Fq {
        Fq::new(2).unwrap()
    }

    fn p2(c: &[i64]) -> FqPoly {
        FqPoly::from_ints(f2(), c)
    }

    /// Brute force: the monic divisor of largest degree common to both,
    /// searched over every monic polynomial of degree <= max degree.
    fn brute_gcd(a: &FqPoly, b: &FqPoly) -> FqPoly {
        let fq = *a.field();
        let n = a.degree().max(b.degree()) as usize;
        let mut best = FqPoly::one(fq);
        for d in 0..=n {
            for idx in 0..(fq.q() as u64).pow(d as u32) {
                let c = FqPoly::monic_from_index(fq, d, idx);
                let divides = |x: &FqPoly| x.rem(&c).unwrap().is_zero();
                if divides(a) && divides(b) && c.degree() >= best.degree() {
                    best = c;
                }
            }
        }
        best
    }

    #[test]
    fn gcd_examples() {
        let f = p2(&[1, 0, 1, 1]);
        assert_eq!(f.gcd(&FqPoly::zero(f2())).unwrap(), f.monic());
        assert_eq!(f.gcd(&f).unwrap(), f);
        // t^2 + t and t over F_2
        let a = p2(&[0, 1, 1]);
        let b = p2(&[0, 1]);
        assert_eq!(a.gcd(&b).unwrap(), brute_gcd(&a, &b));
        assert_eq!(a.gcd(&b).unwrap(), b);
        assert_eq!(FqPoly::zero(f2()).gcd(&FqPoly::zero(f2())), Err(AlgebraError::ZeroGcd));
    }

    #[test]
    fn gcd_is_monic_over_f3() {
        let f3 = Fq::new(3).unwrap();
        let a = FqPoly::from_ints(f3, &[2, 0, 2]); // 2t^2 + 2
        let b = FqPoly::from_ints(f3, &[1, 1]); // t + 1
        // t^2 + 1 is irreducible over F_3, so the gcd is 1.
        assert!(a.gcd(&b).unwrap().is_one());
        let c = &a * &b;
        assert_eq!(c.gcd(&a).unwrap(), a.monic());
    }

    #[test]
    fn divrem_and_ext_gcd() {
        let f3 = Fq::new(3).unwrap();
        let a = FqPoly::from_ints(f3, &[1, 2, 0, 1, 2]);
        let b = FqPoly::from_ints(f3, &[2, 1, 1]);
        let (qt, r) = a.divrem(&b).unwrap();
        assert_eq!(&(&qt * &b) + &r, a);
        assert!(r.degree() < b.degree());
        let (g, s, u) = a.ext_gcd(&b).unwrap();
        assert_eq!(&(&s * &a) + &(&u * &b), g);
    }

    #[test]
    fn spread_is_frobenius() {
        let f3 = Fq::new(3).unwrap();
        let a = FqPoly::from_ints(f3, &[1, 2, 1, 1]);
        assert_eq!(a.pow(3), a.spread(3));
        let f4 = Fq::new(4).unwrap();
        let b = Poly::new(f4, vec![2, 3, 1]);
        assert_eq!(b.pow(4), b.spread(4));
    }

    #[test]
    fn display_grammar() {
        assert_eq!(p2(&[1, 0, 1, 0, 0, 1]).to_string(), "t^5+t^2+1");
        let f3 = Fq::new(3).unwrap();
        assert_eq!(FqPoly::from_ints(f3, &[2, 0, 1]).to_string(), "t^2+2");
        let f4 = Fq::new(4).unwrap();
        assert_eq!(Poly::new(f4, vec![1, 2]).to_string(), "g*t+1");
    }
}
