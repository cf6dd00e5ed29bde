//! The infinite places of R packaged for lattice work: local images of x,
//! the trace-dual basis, coordinates relative to the power basis, and a
//! cache of exp/log coefficients embedded at every place.
//!
//! For a place v with root `x_v` of m, write `m(X) = (X - x_v) sum_i b_i X^i`.
//! The elements `g_{v,i} = b_i(x_v) / m'(x_v)` satisfy
//! `sum_v Tr_v(x_v^j g_{v,i}) = delta_ij`, so `y -> (sum_v Tr_v(y_v g_{v,i}))_i`
//! is the coordinate map `K_oo -> k((1/t))^d` of the power basis. Under it R
//! becomes `k[t]^d` exactly.

use crate::algebra::laurent::{Laurent, LocalField};
use crate::algebra::poly::FqPoly;
use crate::drinfeld::{DrinfeldModule, ExpCoeffs, LocalExp, LocalLog, LogCoeffs};
use crate::field::{FunctionField, InfinitePlace, RElem};

use super::LatticeError;

#[derive(Clone, Debug)]
pub struct PlaceData {
    pub place: InfinitePlace,
    /// Trace-dual elements `g_{v,0..d}`.
    pub dual: Vec<Laurent>,
    /// `min_i v_u(g_{v,i})`.
    pub dual_min: i64,
    /// `min_{0<=i<d} i * v_u(x_v)`.
    pub power_min: i64,
}

impl PlaceData {
    pub fn e(&self) -> i64 {
        self.place.lf.e as i64
    }

    pub fn lf(&self) -> LocalField {
        self.place.lf
    }
}

#[derive(Clone, Debug)]
pub struct Geometry {
    pub field: FunctionField,
    pub places: Vec<PlaceData>,
    /// Least common multiple of the ramification indices; levels are
    /// measured in units of `1/lcm`.
    pub lcm: i64,
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

impl Geometry {
    /// Places with x known to `prec` digits and dual elements to `dual_prec` digits.
    pub fn new(field: &FunctionField, prec: i64, dual_prec: i64) -> Result<Self, LatticeError> {
        let d = field.degree();
        let places = field.infinite_places(prec)?;
        let mut out = Vec::with_capacity(places.len());
        for place in places {
            let lf = place.lf;
            let x = &place.x;
            let vx = x.val_bound().min(0);
            // synthetic division gives b_{d-1} .. b_0; the working cap is
            // widened by the worst-case pole of x^(d-1).
            let cap = dual_prec + 2 * place.derivative_valuation.abs() - (d as i64) * vx + 8;
            let m = field.min_poly();
            let mut b = vec![Laurent::zero(lf.fq); d];
            b[d - 1] = Laurent::one(lf.fq);
            for i in (1..d).rev() {
                b[i - 1] = lf.embed_poly_capped(&m[i], cap).add(&x.mul_capped(&b[i], cap)).truncate(cap);
            }
            let mut deriv = Laurent::zero(lf.fq);
            for bi in b.iter().rev() {
                deriv = deriv.mul_capped(x, cap).add(bi).truncate(cap);
            }
            let w = deriv.valuation().ok_or(LatticeError::Precision("m'(x) vanishes to working precision".into()))?;
            if w != place.derivative_valuation {
                return Err(LatticeError::Inconsistent(format!(
                    "v(m'(x)) = {w} but the place reports {}",
                    place.derivative_valuation
                )));
            }
            let bmin = b.iter().map(|bi| bi.val_bound()).min().unwrap_or(0).min(0);
            let inv = deriv.inv(dual_prec - bmin + 8)?;
            let dual: Vec<Laurent> = b.iter().map(|bi| bi.mul_capped(&inv, dual_prec).truncate(dual_prec)).collect();
            let dual_min = dual.iter().map(|g| g.val_bound()).min().unwrap_or(0);
            let power_min = (0..d as i64).map(|i| i * x.val_bound()).min().unwrap_or(0).min(0);
            out.push(PlaceData { place, dual, dual_min, power_min });
        }
        let lcm = out.iter().fold(1i64, |acc, p| acc / gcd(acc, p.e()) * p.e());
        Ok(Geometry { field: field.clone(), places: out, lcm })
    }

    pub fn degree(&self) -> usize {
        self.field.degree()
    }

    pub fn fq(&self) -> crate::algebra::fq::Fq {
        self.field.fq()
    }

    /// Smallest absolute precision of the dual elements.
    pub fn dual_prec(&self) -> i64 {
        self.places.iter().flat_map(|p| p.dual.iter().map(|g| g.prec())).min().unwrap_or(i64::MAX)
    }

    /// Level in units of `1/lcm` of the monomial `u_v^j`.
    pub fn level(&self, v: usize, j: i64) -> i64 {
        -j * (self.lcm / self.places[v].e())
    }

    /// Coefficients of `s^k = t^(-k)` for `k in lo..hi` of every power-basis
    /// coordinate of the local vector `z` (one series per place; zero series
    /// may be omitted by passing `None`).
    pub fn coords(&self, z: &[Option<&Laurent>], lo: i64, hi: i64) -> Result<Vec<Vec<u32>>, LatticeError> {
        let fq = self.fq();
        let d = self.degree();
        let n = (hi - lo).max(0) as usize;
        let mut out = vec![vec![0u32; n]; d];
        for (pd, zv) in self.places.iter().zip(z) {
            let Some(zv) = zv else { continue };
            if zv.is_zero() && zv.is_exact() {
                continue;
            }
            let e = pd.e();
            let lf = pd.lf();
            let cap = e * hi;
            let ef = fq.from_int(e);
            for (i, g) in pd.dual.iter().enumerate() {
                let w = zv.mul_capped(g, cap);
                if w.prec() < cap {
                    return Err(LatticeError::Precision(format!(
                        "coordinate needs O(u^{cap}) at a place but only O(u^{}) is available",
                        w.prec()
                    )));
                }
                for (slot, k) in out[i].iter_mut().zip(lo..hi) {
                    let c = w.coeff(k * e).unwrap_or(0);
                    if c != 0 {
                        // Tr(u^(ke)) = e c^k s^k
                        let ck = if k >= 0 { fq.pow(lf.c, k as u64) } else { fq.inv(fq.pow(lf.c, (-k) as u64)).unwrap() };
                        *slot = fq.add(*slot, fq.mul(ef, fq.mul(ck, c)));
                    }
                }
            }
        }
        Ok(out)
    }

    /// The element of R whose coordinates are the polynomial parts of
    /// those of `z`; `lo` bounds the most negative s-exponent that can occur.
    pub fn polynomial_part(&self, z: &[Option<&Laurent>], lo: i64) -> Result<RElem, LatticeError> {
        let fq = self.fq();
        let c = self.coords(z, lo.min(0), 1)?;
        Ok(c
            .into_iter()
            .map(|row| {
                // row[k - lo] is the coefficient of s^k = t^(-k), k <= 0
                let mut coeffs: Vec<u32> = row.into_iter().rev().collect();
                coeffs.truncate((1 - lo.min(0)) as usize);
                FqPoly::new(fq, coeffs)
            })
            .collect())
    }

    /// Embed an element of R at every place.
    pub fn embed(&self, xi: &RElem, prec: i64) -> Vec<Laurent> {
        self.places.iter().map(|p| p.place.embed(xi, prec)).collect()
    }
}

/// Split a local series at a place of ramification e into its k((s))
/// components along `1, u, .., u^(e-1)`, with `s = u^e / c`.
pub fn local_components(z: &Laurent, lf: LocalField) -> Vec<Laurent> {
    let fq = lf.fq;
    let e = lf.e as i64;
    (0..e)
        .map(|a| {
            let lo_m = (z.val_bound() - a).div_euclid(e);
            let hi_m = if z.is_exact() { z.val_bound() + z.coeffs().len() as i64 } else { z.prec() };
            // coefficient of s^m is z_{a+me} c^m; known while a + m e < prec
            let prec_s = if z.is_exact() { crate::algebra::laurent::EXACT } else { (z.prec() - a + e - 1).div_euclid(e) };
            let top = (hi_m - a + e - 1).div_euclid(e);
            let coeffs: Vec<u32> = (lo_m..top.max(lo_m))
                .map(|m| {
                    let c = z.coeff(a + m * e).unwrap_or(0);
                    let cm = if m >= 0 { fq.pow(lf.c, m as u64) } else { fq.inv(fq.pow(lf.c, (-m) as u64)).unwrap() };
                    fq.mul(c, cm)
                })
                .collect();
            Laurent::new(fq, lo_m, coeffs, prec_s)
        })
        .collect()
}

/// Exp and log coefficients, embedded lazily at each place with enough
/// relative precision for the requests seen so far.
#[derive(Clone, Debug)]
pub struct SeriesBank {
    exp: ExpCoeffs,
    log: Option<LogCoeffs>,
    exp_local: Vec<Option<(LocalExp, i64, usize)>>,
    log_local: Vec<Option<(LocalLog, i64, usize)>>,
}

impl SeriesBank {
    pub fn new(module: &DrinfeldModule, places: usize) -> Self {
        SeriesBank {
            exp: module.exp_coefficients(4),
            log: None,
            exp_local: vec![None; places],
            log_local: vec![None; places],
        }
    }

    pub fn module(&self) -> &DrinfeldModule {
        self.exp.module()
    }

    pub fn exp_coeffs(&self) -> &ExpCoeffs {
        &self.exp
    }

    fn ensure_exp(&mut self, n: usize) {
        if self.exp.imax() + 1 < n {
            self.exp = self.exp.extended(n - 1);
            self.log = None;
            self.exp_local.iter_mut().for_each(|x| *x = None);
            self.log_local.iter_mut().for_each(|x| *x = None);
        }
    }

    /// `exp(z)` at place `v` through `O(u^prec)`.
    pub fn exp(&mut self, v: usize, lf: LocalField, z: &Laurent, prec: i64) -> Result<Laurent, LatticeError> {
        if z.is_zero() {
            return Ok(Laurent::zero(lf.fq).truncate(prec));
        }
        let module = self.exp.module().clone();
        let vmin = z.val_bound();
        let n = module.exp_terms_needed(vmin, lf.e, prec)?.max(1);
        self.ensure_exp(n);
        let q = module.q() as i64;
        let vals = self.exp.valuations();
        let e = lf.e as i64;
        let rel = (0..n).map(|i| prec - q.pow(i as u32) * vmin - e * vals[i]).max().unwrap_or(prec).max(1);
        let fresh = match &self.exp_local[v] {
            Some((_, r, k)) => *r < rel || *k < n,
            None => true,
        };
        if fresh {
            let r = rel + rel / 4 + 8;
            self.exp_local[v] = Some((LocalExp::new(&self.exp, lf, r)?, r, self.exp.imax() + 1));
        }
        Ok(self.exp_local[v].as_ref().unwrap().0.eval(z, prec)?)
    }

    /// `log(z)` at place `v` through `O(u^prec)`.
    pub fn log(&mut self, v: usize, lf: LocalField, z: &Laurent, prec: i64) -> Result<Laurent, LatticeError> {
        if z.is_zero() {
            return Ok(Laurent::zero(lf.fq).truncate(prec));
        }
        let module = self.exp.module().clone();
        let vmin = z.val_bound();
        let n = module.log_terms_needed(vmin, lf.e, prec)?.max(1);
        self.ensure_exp(n);
        if self.log.as_ref().is_none_or(|l| l.imax() + 1 < n) {
            self.log = Some(self.exp.log_coefficients(self.exp.imax())?);
            self.log_local.iter_mut().for_each(|x| *x = None);
        }
        let log = self.log.as_ref().unwrap();
        let q = module.q() as i64;
        let vals = log.valuations();
        let e = lf.e as i64;
        let rel = (0..n).map(|i| prec - q.pow(i as u32) * vmin - e * vals[i]).max().unwrap_or(prec).max(1);
        let fresh = match &self.log_local[v] {
            Some((_, r, k)) => *r < rel || *k < n,
            None => true,
        };
        if fresh {
            let r = rel + rel / 4 + 8;
            self.log_local[v] = Some((LocalLog::new(&self.exp, log, lf, r)?, r, log.imax() + 1));
        }
        Ok(self.log_local[v].as_ref().unwrap().0.eval(z, prec)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::fq::Fq;
    use crate::algebra::parse::parse_poly;

    fn geometry(q: u32, f: &str) -> Geometry {
        let fq = Fq::new(q).unwrap();
        let k = FunctionField::cyclotomic(fq, &parse_poly(fq, f, "t").unwrap()).unwrap();
        Geometry::new(&k, 80, 60).unwrap()
    }

    #[test]
    fn dual_basis_recovers_power_basis_coordinates() {
        // [DERIVED] coordinates of an embedded element of R are its own coefficients.
        for (q, f) in [(2, "t^2+t+1"), (2, "t^3+t+1"), (3, "t")] {
            let g = geometry(q, f);
            let fq = g.fq();
            let d = g.degree();
            let xi: RElem = (0..d).map(|i| FqPoly::from_ints(fq, &[i as i64 + 1, 0, 1])).collect();
            let emb = g.embed(&xi, 40);
            let refs: Vec<Option<&Laurent>> = emb.iter().map(Some).collect();
            let back = g.polynomial_part(&refs, -4).unwrap();
            assert_eq!(back, xi, "q={q} f={f}");
            let frac = g.coords(&refs, 1, 6).unwrap();
            assert!(frac.iter().flatten().all(|&c| c == 0));
        }
    }

    #[test]
    fn components_reassemble() {
        let fq = Fq::new(3).unwrap();
        let lf = LocalField { fq, e: 2, c: 2 };
        let z = Laurent::new(fq, -3, vec![1, 2, 0, 1, 1, 2], 3);
        let parts = local_components(&z, lf);
        assert_eq!(parts.len(), 2);
        // u^-3 = u * u^-4 = u * (c s)^-2  => component 1, exponent -2, coefficient c^-2 = 1
        assert_eq!(parts[1].coeff(-2), Some(1));
        assert_eq!(parts[0].prec(), 2);
        assert_eq!(parts[1].prec(), 1);
    }
}
