//! Factorization over finite fields: squarefree decomposition, distinct
//! degree splitting and Cantor–Zassenhaus equal degree splitting.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::field::Field;
use super::poly::Poly;
use super::AlgebraError;

fn prime_divisors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            out.push(p);
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// `t^(Q^k) mod f` by repeated `Q`-th powering.
fn frobenius_power<F: Field>(h: &Poly<F>, k: usize, f: &Poly<F>) -> Result<Poly<F>, AlgebraError> {
    let q = h.field().order() as u128;
    let mut x = h.rem(f)?;
    for _ in 0..k {
        x = x.pow_mod(q, f)?;
    }
    Ok(x)
}

/// Rabin's irreducibility test.
pub fn is_irreducible<F: Field>(f: &Poly<F>) -> bool {
    let n = match f.deg() {
        None | Some(0) => return false,
        Some(1) => return true,
        Some(n) => n,
    };
    let t = Poly::var(f.field().clone());
    let Ok(full) = frobenius_power(&t, n, f) else { return false };
    if full != t.rem(f).unwrap() {
        return false;
    }
    for r in prime_divisors(n as u64) {
        let Ok(h) = frobenius_power(&t, n / r as usize, f) else { return false };
        match (&h - &t).gcd(f) {
            Ok(g) if g.is_one() => {}
            _ => return false,
        }
    }
    true
}

/// p-th root of a polynomial with zero derivative.
fn pth_root<F: Field>(f: &Poly<F>) -> Poly<F> {
    let field = f.field().clone();
    let p = field.characteristic() as usize;
    // a^(1/p) = a^(Q/p) in a field of Q elements
    let e = field.order() / p as u64;
    let coeffs = f.coeffs().iter().step_by(p).map(|c| field.pow(c, e)).collect();
    Poly::new(field, coeffs)
}

/// Squarefree decomposition of a monic polynomial: pairs `(g, m)` with
/// `f = prod g^m`, each `g` squarefree and pairwise coprime.
pub fn squarefree<F: Field>(f: &Poly<F>) -> Result<Vec<(Poly<F>, u32)>, AlgebraError> {
    if f.is_zero() {
        return Err(AlgebraError::FactorZero);
    }
    let f = f.monic();
    let mut out = Vec::new();
    sqf_rec(&f, 1, &mut out)?;
    Ok(out)
}

fn sqf_rec<F: Field>(f: &Poly<F>, mult: u32, out: &mut Vec<(Poly<F>, u32)>) -> Result<(), AlgebraError> {
    if f.is_constant() {
        return Ok(());
    }
    let p = f.field().characteristic() as u32;
    let df = f.derivative();
    if df.is_zero() {
        return sqf_rec(&pth_root(f), mult * p, out);
    }
    let mut c = f.gcd(&df)?;
    let mut w = f.div_exact(&c).expect("gcd divides");
    let mut i = 1;
    while !w.is_constant() {
        let y = w.gcd(&c)?;
        let z = w.div_exact(&y).expect("gcd divides");
        if !z.is_constant() {
            out.push((z, i * mult));
        }
        w = y;
        c = c.div_exact(&w).expect("gcd divides");
        i += 1;
    }
    if !c.is_constant() {
        sqf_rec(&pth_root(&c), mult * p, out)?;
    }
    Ok(())
}

/// Distinct degree factorization of a monic squarefree polynomial: pairs
/// `(g, d)` where `g` is the product of all irreducible factors of degree `d`.
pub fn distinct_degree<F: Field>(f: &Poly<F>) -> Result<Vec<(Poly<F>, usize)>, AlgebraError> {
    let field = f.field().clone();
    let q = field.order() as u128;
    let t = Poly::var(field);
    let mut rest = f.monic();
    let mut h = t.rem(&rest)?;
    let mut out = Vec::new();
    let mut d = 0;
    while rest.degree() >= 2 * (d as i64 + 1) {
        d += 1;
        h = h.pow_mod(q, &rest)?;
        let g = (&h - &t).gcd(&rest)?;
        if !g.is_one() {
            rest = rest.div_exact(&g).expect("gcd divides");
            h = h.rem(&rest)?;
            out.push((g, d));
        }
    }
    if rest.degree() > 0 {
        let n = rest.degree() as usize;
        out.push((rest, n));
    }
    Ok(out)
}

/// Split a product of distinct irreducibles of degree `d` into its factors.
pub fn equal_degree<F: Field>(f: &Poly<F>, d: usize, rng: &mut ChaCha8Rng) -> Result<Vec<Poly<F>>, AlgebraError> {
    let n = f.degree() as usize;
    if n == d {
        return Ok(vec![f.monic()]);
    }
    let field = f.field().clone();
    let q = field.order();
    let p = field.characteristic();
    loop {
        let coeffs = (0..n).map(|_| field.element(rng.gen_range(0..q))).collect();
        let a = Poly::new(field.clone(), coeffs);
        if a.is_constant() {
            continue;
        }
        let b = if p == 2 {
            // absolute trace to F_2: sum of a^(2^j), j < d * log2(q)
            let k = d * q.trailing_zeros() as usize;
            let mut acc = a.rem(f)?;
            let mut x = acc.clone();
            for _ in 1..k {
                x = (&x * &x).rem(f)?;
                acc = &acc + &x;
            }
            acc
        } else {
            // a^((q^d - 1)/2) via the norm-like product a^(1 + q + ... + q^(d-1))
            let mut x = a.rem(f)?;
            let mut acc = x.clone();
            for _ in 1..d {
                x = x.pow_mod(q as u128, f)?;
                acc = (&acc * &x).rem(f)?;
            }
            let h = acc.pow_mod(((q - 1) / 2) as u128, f)?;
            &h - &Poly::one(field.clone())
        };
        let g = match b.gcd(f) {
            Ok(g) => g,
            Err(_) => continue,
        };
        if !g.is_constant() && g.degree() < f.degree() {
            let other = f.div_exact(&g).expect("gcd divides");
            let mut out = equal_degree(&g, d, rng)?;
            out.extend(equal_degree(&other.monic(), d, rng)?);
            return Ok(out);
        }
    }
}

/// Complete factorization into monic irreducibles with multiplicities,
/// sorted by degree and then coefficients.
pub fn factor<F: Field>(f: &Poly<F>) -> Result<Vec<(Poly<F>, u32)>, AlgebraError>
where
    F::Elem: Ord,
{
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut out = Vec::new();
    for (g, m) in squarefree(f)? {
        for (h, d) in distinct_degree(&g)? {
            for irr in equal_degree(&h, d, &mut rng)? {
                out.push((irr, m));
            }
        }
    }
    out.sort_by(|a, b| {
        a.0.coeffs()
            .len()
            .cmp(&b.0.coeffs().len())
            .then_with(|| a.0.coeffs().iter().rev().cmp(b.0.coeffs().iter().rev()))
    });
    Ok(out)
}

/// Degrees (with multiplicity and exponent) of the irreducible factors:
/// `(degree, exponent)` pairs, one per irreducible factor.
pub fn factor_degrees<F: Field>(f: &Poly<F>) -> Result<Vec<(usize, u32)>, AlgebraError> {
    let mut out = Vec::new();
    for (g, m) in squarefree(f)? {
        for (h, d) in distinct_degree(&g)? {
            for _ in 0..(h.degree() as usize / d) {
                out.push((d, m));
            }
        }
    }
    out.sort();
    Ok(out)
}

/// All monic irreducible polynomials of degree `n`, in index order.
pub fn monic_irreducibles<F: Field>(field: &F, n: usize) -> Vec<Poly<F>> {
    let count = field.order().pow(n as u32);
    (0..count)
        .map(|idx| Poly::monic_from_index(field.clone(), n, idx))
        .filter(is_irreducible)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::fq::Fq;
    use crate::algebra::poly::FqPoly;
    use proptest::prelude::*;

    fn trial_division_irreducible(f: &FqPoly) -> bool {
        let fq = *f.field();
        let n = f.degree() as usize;
        for d in 1..=n / 2 {
            for idx in 0..(fq.q() as u64).pow(d as u32) {
                let g = FqPoly::monic_from_index(fq, d, idx);
                if f.rem(&g).unwrap().is_zero() {
                    return false;
                }
            }
        }
        n >= 1
    }

    #[test]
    fn factor_examples_f2() {
        let f2 = Fq::new(2).unwrap();
        let t2t = FqPoly::from_ints(f2, &[0, 1, 1]);
        let fac = factor(&t2t).unwrap();
        assert_eq!(fac, vec![(FqPoly::from_ints(f2, &[0, 1]), 1), (FqPoly::from_ints(f2, &[1, 1]), 1)]);

        let f5 = FqPoly::from_ints(f2, &[1, 0, 1, 0, 0, 1]);
        assert!(trial_division_irreducible(&f5));
        assert_eq!(factor(&f5).unwrap(), vec![(f5.clone(), 1)]);

        let g = FqPoly::from_ints(f2, &[1, 1, 1]);
        assert_eq!(factor(&g.pow(2)).unwrap(), vec![(g, 2)]);
        assert_eq!(factor(&FqPoly::zero(f2)), Err(AlgebraError::FactorZero));
    }

    #[test]
    fn irreducible_counts() {
        // necklace counts: F_2 degree 1..6 -> 2,1,2,3,6,9; F_3 degree 1..3 -> 3,3,8
        let f2 = Fq::new(2).unwrap();
        let c: Vec<usize> = (1..=6).map(|n| monic_irreducibles(&f2, n).len()).collect();
        assert_eq!(c, vec![2, 1, 2, 3, 6, 9]);
        let f3 = Fq::new(3).unwrap();
        let c: Vec<usize> = (1..=3).map(|n| monic_irreducibles(&f3, n).len()).collect();
        assert_eq!(c, vec![3, 3, 8]);
        for p in monic_irreducibles(&f2, 5) {
            assert!(trial_division_irreducible(&p));
        }
    }

    #[test]
    fn high_multiplicity_in_char_p() {
        let f3 = Fq::new(3).unwrap();
        let a = FqPoly::from_ints(f3, &[1, 1]);
        let b = FqPoly::from_ints(f3, &[1, 0, 1]);
        let f = &a.pow(3) * &b.pow(4);
        let fac = factor(&f).unwrap();
        assert_eq!(fac, vec![(a, 3), (b, 4)]);
    }

    proptest! {
        #[test]
        fn factor_recomposes(q in prop::sample::select(vec![2u32, 3, 4, 5]), coeffs in prop::collection::vec(0u32..5, 1..12)) {
            let fq = Fq::new(q).unwrap();
            let mut c: Vec<u32> = coeffs.iter().map(|&x| x % q).collect();
            c.push(1);
            let f = Poly::new(fq, c);
            let fac = factor(&f).unwrap();
            let mut prod = FqPoly::one(fq);
            for (g, m) in &fac {
                prop_assert!(is_irreducible(g));
                prop_assert!(g.is_monic());
                prod = &prod * &g.pow(*m as u64);
            }
            prop_assert_eq!(prod, f);
        }
    }
}
