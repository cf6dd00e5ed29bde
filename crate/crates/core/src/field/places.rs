//! Places above infinity via Newton polygons.
//!
//! The first Newton polygon of m over `k((1/t))` fixes, per segment of
//! slope `n/e` and simple-or-repeated residual root `y0`, a completion
//! `k((u))` with `t = c u^(-e)` and a leading term `x ~ beta u^n`
//! (`beta^e c^n = y0`). Roots sharing a leading term are separated by exact
//! Taylor shifts by monomials; once a cluster holds a single root it is
//! lifted by Newton iteration. Roots with the same leading coefficient are
//! never conjugate under `u -> zeta u`, so each one found is a distinct place.

use std::cmp::Ordering;

use num_rational::Ratio;

use super::{FieldError, FunctionField, RElem};
use crate::algebra::factor::factor;
use crate::algebra::fq::Fq;
use crate::algebra::laurent::{Laurent, LocalField};
use crate::algebra::poly::FqPoly;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InfinitePlace {
    pub lf: LocalField,
    /// `v(x)` normalized so that `v(1/t) = 1`.
    pub slope: Ratio<i64>,
    /// Image of the generator x, to absolute u-precision `prec`.
    pub x: Laurent,
    /// `v_u(m'(x))`: how far this root is from the others.
    pub derivative_valuation: i64,
}

impl InfinitePlace {
    pub fn ramification(&self) -> u32 {
        self.lf.e
    }

    /// Always 1: places with larger residue degree are rejected at construction.
    pub fn residue_degree(&self) -> u32 {
        1
    }

    pub fn prec(&self) -> i64 {
        self.x.prec()
    }

    /// A `(q-1)`-th root of `-t` in this completion, if one exists:
    /// `beta u^(-e/(q-1))` with the first `beta` (index order) satisfying
    /// `beta^(q-1) = -c`.
    pub fn alpha_root(&self) -> Option<Laurent> {
        let fq = self.lf.fq;
        let q = fq.q();
        if !self.lf.e.is_multiple_of(q - 1) {
            return None;
        }
        let target = fq.neg(self.lf.c);
        let beta = (1..q).find(|&b| fq.pow(b, (q - 1) as u64) == target)?;
        Some(Laurent::monomial(fq, beta, -((self.lf.e / (q - 1)) as i64)))
    }

    pub fn alpha_exists(&self) -> bool {
        self.alpha_root().is_some()
    }

    /// Embed an element of K given in the power basis, to absolute precision `prec`.
    pub fn embed(&self, xi: &RElem, prec: i64) -> Laurent {
        let fq = self.lf.fq;
        let vx = self.x.val_bound().min(0);
        let mut acc = Laurent::zero(fq);
        for (k, c) in xi.iter().enumerate().rev() {
            let cap = prec - k as i64 * vx;
            acc = acc.mul_capped(&self.x, cap).add(&self.lf.embed_poly_capped(c, cap)).truncate(cap);
        }
        acc.truncate(prec)
    }

    fn canonical_cmp(&self, other: &Self) -> Ordering {
        self.slope
            .cmp(&other.slope)
            .then(self.lf.e.cmp(&other.lf.e))
            .then(self.lf.c.cmp(&other.lf.c))
            .then(self.x.val_bound().cmp(&other.x.val_bound()))
            .then_with(|| self.x.coeffs().cmp(other.x.coeffs()))
    }
}

type LPoly = Vec<Laurent>;

/// `P(x)` through `O(u^cap)` by Horner, widening intermediate caps when x
/// has negative valuation.
fn horner(p: &[Laurent], x: &Laurent, cap: i64) -> Laurent {
    let vx = if x.is_zero() { 0 } else { x.val_bound().min(0) };
    let mut acc = Laurent::zero(x.fq());
    for (k, c) in p.iter().enumerate().rev() {
        let ck = cap - k as i64 * vx;
        acc = acc.mul_capped(x, ck).add(&c.truncate(ck)).truncate(ck);
    }
    acc.truncate(cap)
}

fn derivative(p: &[Laurent]) -> LPoly {
    let fq = p[0].fq();
    p.iter().enumerate().skip(1).map(|(k, c)| c.scale(fq.from_int(k as i64))).collect()
}

/// `P(X + a)`.
fn taylor_shift(p: &[Laurent], a: &Laurent) -> LPoly {
    let mut c = p.to_vec();
    let n = c.len();
    for i in 0..n {
        for j in (i..n - 1).rev() {
            c[j] = c[j].add(&c[j + 1].mul(a));
        }
    }
    c
}

/// Lower convex hull of `(k, v)` points (sorted by k); returns consecutive vertex pairs.
fn lower_hull(points: &[(i64, i64)]) -> Vec<((i64, i64), (i64, i64))> {
    let mut hull: Vec<(i64, i64)> = Vec::new();
    for &pt in points {
        while hull.len() >= 2 {
            let (a, b) = (hull[hull.len() - 2], hull[hull.len() - 1]);
            // drop b if it lies on or above segment a -> pt
            let cross = (b.0 - a.0) as i128 * (pt.1 - a.1) as i128 - (b.1 - a.1) as i128 * (pt.0 - a.0) as i128;
            if cross <= 0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(pt);
    }
    hull.windows(2).map(|w| (w[0], w[1])).collect()
}

/// Roots in F_q^x of the residual polynomial with multiplicities.
fn residual_roots(fq: Fq, coeffs: Vec<u32>) -> Result<Vec<(u32, usize)>, FieldError> {
    let r = FqPoly::new(fq, coeffs);
    let mut out = Vec::new();
    for (g, mult) in factor(&r)? {
        if g.degree() > 1 {
            return Err(FieldError::ResidueDegree);
        }
        let root = fq.neg(g.coeff(0));
        if root == 0 {
            return Err(FieldError::Inconsistent("zero residual root".into()));
        }
        out.push((root, mult as usize));
    }
    Ok(out)
}

fn inv_mod(a: i64, m: i64) -> i64 {
    (0..m).find(|&x| (a.rem_euclid(m) * x) % m == 1 % m).expect("coprime")
}

impl FunctionField {
    /// All places above infinity, with x embedded to absolute u-precision `prec`.
    pub fn infinite_places(&self, prec: i64) -> Result<Vec<InfinitePlace>, FieldError> {
        let fq = self.fq();
        let d = self.degree();
        let m = self.min_poly();
        let points: Vec<(i64, i64)> =
            m.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(k, c)| (k as i64, -c.degree())).collect();
        let mut places = Vec::new();
        if points[0].0 > 0 {
            // m = x (only possible for d = 1)
            let lf = LocalField::rational(fq);
            places.push(self.finish_place(lf, Ratio::from_integer(0), Laurent::zero(fq), prec)?);
        }
        for ((k1, v1), (k2, v2)) in lower_hull(&points) {
            let rho = Ratio::new(v1 - v2, k2 - k1);
            let (n, e) = (*rho.numer(), *rho.denom());
            if (e as u32).is_multiple_of(fq.p()) {
                return Err(FieldError::WildRamification(e as u32));
            }
            let mut res = vec![0u32; ((k2 - k1) / e + 1) as usize];
            for (j, slot) in res.iter_mut().enumerate() {
                let k = k1 + j as i64 * e;
                let c = &m[k as usize];
                if !c.is_zero() && -c.degree() * e + k * n == v1 * e + k1 * n {
                    *slot = c.lc();
                }
            }
            for (y0, mu) in residual_roots(fq, res)? {
                let a = if e == 1 { 0 } else { inv_mod(n, e) };
                let b = (1 - a * n) / e;
                let c = fq.pow(y0, a as u64);
                let beta = if b >= 0 { fq.pow(y0, b as u64) } else { fq.inv(fq.pow(y0, (-b) as u64)).unwrap() };
                let lf = LocalField { fq, e: e as u32, c };
                let p: LPoly = m.iter().map(|mk| lf.embed_poly(mk)).collect();
                let lead = Laurent::monomial(fq, beta, n);
                let shifted = taylor_shift(&p, &lead);
                let mut roots = Vec::new();
                cluster_roots(&shifted, lead, n, mu, prec, &mut roots)?;
                for x in roots {
                    places.push(self.finish_place(lf, rho, x, prec)?);
                }
            }
        }
        let total: u32 = places.iter().map(|p| p.ramification()).sum();
        if total as usize != d {
            return Err(FieldError::Inconsistent(format!("sum of e f over places is {total}, expected {d}")));
        }
        places.sort_by(|a, b| a.canonical_cmp(b));
        Ok(places)
    }

    fn finish_place(&self, lf: LocalField, slope: Ratio<i64>, x: Laurent, prec: i64) -> Result<InfinitePlace, FieldError> {
        let p: LPoly = self.min_poly().iter().map(|mk| lf.embed_poly(mk)).collect();
        let dp = derivative(&p);
        let w = find_valuation(&dp, &x, prec)?;
        let x = x.truncate(prec);
        let check = horner(&p, &x, prec + w);
        if check.valuation().is_some() {
            return Err(FieldError::Inconsistent(format!("m(x) has valuation below {}", prec + w)));
        }
        Ok(InfinitePlace { lf, slope, x, derivative_valuation: w })
    }
}

/// Valuation of `P(x)`, which is known to be nonzero.
fn find_valuation(p: &[Laurent], x: &Laurent, hint: i64) -> Result<i64, FieldError> {
    let mut cap = hint.max(16);
    for _ in 0..24 {
        if let Some(v) = horner(p, x, cap).valuation() {
            return Ok(v);
        }
        if cap > x.prec() {
            break;
        }
        cap = cap * 2 + 16;
    }
    Err(FieldError::Precision { given: x.prec(), required: cap })
}

/// Roots of `P(x0 + X)` (passed already shifted as `p`) with `v(X) > level`;
/// there are exactly `mu` of them.
fn cluster_roots(p: &[Laurent], x0: Laurent, level: i64, mu: usize, prec: i64, out: &mut Vec<Laurent>) -> Result<(), FieldError> {
    let fq = x0.fq();
    if mu == 1 {
        let x = newton_root(p, level, prec)?;
        out.push(x0.add(&x));
        return Ok(());
    }
    let points: Vec<(i64, i64)> =
        p.iter().enumerate().filter_map(|(k, c)| c.valuation().map(|v| (k as i64, v))).collect();
    let mut found = 0usize;
    if points[0].0 > 0 {
        if points[0].0 > 1 {
            return Err(FieldError::Inseparable);
        }
        out.push(x0.clone());
        found += 1;
    }
    for ((k1, v1), (k2, v2)) in lower_hull(&points) {
        let rho = Ratio::new(v1 - v2, k2 - k1);
        if rho <= Ratio::from_integer(level) {
            break;
        }
        if !rho.is_integer() {
            return Err(FieldError::FurtherRamification);
        }
        let r = rho.to_integer();
        let mut res = vec![0u32; (k2 - k1 + 1) as usize];
        for (k, v) in &points {
            if *k >= k1 && *k <= k2 && *v + k * r == v1 + k1 * r {
                res[(k - k1) as usize] = p[*k as usize].lead();
            }
        }
        for (y, mu2) in residual_roots(fq, res)? {
            let step = Laurent::monomial(fq, y, r);
            let next = taylor_shift(p, &step);
            cluster_roots(&next, x0.add(&step), r, mu2, prec, out)?;
            found += mu2;
        }
    }
    if found != mu {
        return Err(FieldError::Inconsistent(format!("cluster at level {level} holds {found} roots, expected {mu}")));
    }
    Ok(())
}

/// The unique root of `p` with valuation `> level`, every other root having
/// valuation `<= level`. Newton from 0 improves the error bound E to
/// `2E - level` per step.
fn newton_root(p: &[Laurent], level: i64, prec: i64) -> Result<Laurent, FieldError> {
    let fq = p[0].fq();
    let dp = derivative(p);
    let mut x = Laurent::zero(fq);
    let mut err = level + 1;
    if p[0].is_zero() {
        return Ok(x);
    }
    let w = find_valuation(&dp, &Laurent::zero(fq), prec)?;
    while err < prec {
        let target = (2 * err - level).min(prec).max(err + 1);
        let num = horner(p, &x, target + w);
        let den = horner(&dp, &x, w + (target - err));
        let delta = num.div(&den, target)?;
        x = x.sub(&delta).cut_exact(target);
        err = target;
    }
    Ok(x)
}
