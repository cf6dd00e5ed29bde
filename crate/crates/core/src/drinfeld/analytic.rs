//! Evaluation of exp and log in a completion `k((u))` at infinity, the
//! Carlitz period, and windowed preimages under exp.
//!
//! Coefficients are embedded once per place to a fixed relative precision;
//! every returned series carries the precision it actually attains, so a
//! caller that asked for too much sees a smaller `prec()` rather than a
//! silently wrong coefficient.

use num_rational::Ratio;

use super::module::{DrinfeldModule, ExpCoeffs, LogCoeffs};
use super::DrinfeldError;
use crate::algebra::fq::Fq;
use crate::algebra::laurent::{Laurent, LocalField, EXACT};
use crate::algebra::matrix::FqMatrix;

/// Exponential coefficients embedded at one place.
#[derive(Clone, Debug)]
pub struct LocalExp {
    lf: LocalField,
    module: DrinfeldModule,
    coeffs: Vec<Laurent>,
}

impl LocalExp {
    /// Embed `e_0..e_imax`, each to `rel_prec` digits beyond its valuation.
    pub fn new(exp: &ExpCoeffs, lf: LocalField, rel_prec: i64) -> Result<Self, DrinfeldError> {
        let e = lf.e as i64;
        let coeffs = exp
            .coeffs()
            .iter()
            .map(|c| {
                let v = e * c.valuation().expect("nonzero coefficient");
                lf.embed_ratfunc(c, v + rel_prec)
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(LocalExp { lf, module: exp.module().clone(), coeffs })
    }

    pub fn local_field(&self) -> LocalField {
        self.lf
    }

    pub fn module(&self) -> &DrinfeldModule {
        &self.module
    }

    /// `exp(lambda)` through `O(u^prec)`, with a certified tail.
    pub fn eval(&self, lambda: &Laurent, prec: i64) -> Result<Laurent, DrinfeldError> {
        eval_series(&self.module, self.lf, &self.coeffs, lambda, prec, Series::Exp)
    }
}

/// Logarithm coefficients embedded at one place.
#[derive(Clone, Debug)]
pub struct LocalLog {
    lf: LocalField,
    module: DrinfeldModule,
    threshold: Option<Ratio<i64>>,
    coeffs: Vec<Laurent>,
}

impl LocalLog {
    pub fn new(exp: &ExpCoeffs, log: &LogCoeffs, lf: LocalField, rel_prec: i64) -> Result<Self, DrinfeldError> {
        let e = lf.e as i64;
        let coeffs = log
            .coeffs()
            .iter()
            .map(|c| {
                let v = e * c.valuation().expect("nonzero coefficient");
                lf.embed_ratfunc(c, v + rel_prec)
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(LocalLog { lf, module: exp.module().clone(), threshold: exp.convergence_threshold(), coeffs })
    }

    /// `log(x)` through `O(u^prec)`; fails outside the convergence region.
    pub fn eval(&self, x: &Laurent, prec: i64) -> Result<Laurent, DrinfeldError> {
        if let (Some(th), Some(vx)) = (self.threshold, x.valuation()) {
            let v = Ratio::new(vx, self.lf.e as i64);
            if v <= th {
                return Err(DrinfeldError::Divergent { val: v.to_string(), threshold: th.to_string() });
            }
        }
        eval_series(&self.module, self.lf, &self.coeffs, x, prec, Series::Log)
    }
}

#[derive(Clone, Copy)]
enum Series {
    Exp,
    Log,
}

fn eval_series(
    module: &DrinfeldModule,
    lf: LocalField,
    coeffs: &[Laurent],
    x: &Laurent,
    prec: i64,
    kind: Series,
) -> Result<Laurent, DrinfeldError> {
    let fq = lf.fq;
    if x.is_zero() && x.is_exact() {
        return Ok(Laurent::zero(fq).truncate(prec));
    }
    let vmin = x.val_bound();
    let n = match kind {
        Series::Exp => module.exp_terms_needed(vmin, lf.e, prec)?,
        Series::Log => module.log_terms_needed(vmin, lf.e, prec)?,
    };
    if n > coeffs.len() {
        return Err(DrinfeldError::InsufficientTerms { required: n });
    }
    let mut acc = Laurent::zero(fq);
    for (i, c) in coeffs.iter().take(n).enumerate() {
        let cv = c.val_bound();
        let xi = x.frobenius(i as u32).truncate(prec.saturating_sub(cv));
        acc = acc.add(&xi.mul_capped(c, prec));
    }
    Ok(acc.truncate(prec))
}

/// The Carlitz period in one completion.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Period {
    /// The chosen `(q-1)`-th root of `-t`.
    pub alpha: Laurent,
    pub value: Laurent,
    /// Index of the first product factor `(1 - t^(1-q^i))^(-1)` that was
    /// omitted because it is `1 + O(u^prec)`.
    pub truncation_index: usize,
}

/// `pi = alpha^q prod_{i>=1} (1 - t^(1-q^i))^(-1)` through `O(u^prec)`.
///
/// `alpha = beta u^(-e/(q-1))` with `beta` the first element of `F_q^x`
/// (in index order) satisfying `beta^(q-1) = -c`.
pub fn carlitz_period(lf: LocalField, prec: i64) -> Result<Period, DrinfeldError> {
    let fq: Fq = lf.fq;
    let q = fq.q() as i64;
    let e = lf.e as i64;
    if e % (q - 1) != 0 {
        return Err(DrinfeldError::NoAlpha);
    }
    let target = fq.neg(lf.c);
    let beta = (1..fq.q()).find(|&b| fq.pow(b, (q - 1) as u64) == target).ok_or(DrinfeldError::NoAlpha)?;
    let alpha = Laurent::monomial(fq, beta, -e / (q - 1));
    // t^(1-q^i) = u^(e(q^i-1)) exactly since c^(q^i) = c.
    let alpha_q = alpha.frobenius(1);
    let rel = prec - alpha_q.val_bound();
    let mut prod = Laurent::one(fq).truncate(rel.max(0));
    let mut i = 1usize;
    loop {
        let k = e * (q.pow(i as u32) - 1);
        if k >= rel {
            break;
        }
        let n = ((rel - 1) / k + 1) as usize;
        let mut geo = vec![0u32; (n - 1) * k as usize + 1];
        for j in 0..n {
            geo[j * k as usize] = 1;
        }
        prod = prod.mul_capped(&Laurent::new(fq, 0, geo, rel), rel);
        i += 1;
    }
    let value = alpha_q.mul_capped(&prod, prec).truncate(prec);
    Ok(Period { alpha, value, truncation_index: i })
}

/// A solution of `exp(lambda) = target` on a coefficient window.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PreimageSolution {
    /// Canonical solution: free variables of the reduced row echelon form set to zero.
    pub lambda: Laurent,
    /// Basis of `{lambda in window : exp(lambda) = O(u^cod_hi)}`.
    pub kernel: Vec<Laurent>,
}

/// Solve `exp(lambda) = target + O(u^cod_hi)` with `lambda` supported on
/// exponents `dom_lo..=dom_hi`. Returns `Ok(None)` when no solution exists
/// in the window.
pub fn exp_preimage_window(
    lexp: &LocalExp,
    target: &Laurent,
    dom_lo: i64,
    dom_hi: i64,
    cod_hi: i64,
) -> Result<Option<PreimageSolution>, DrinfeldError> {
    let fq = lexp.lf.fq;
    if dom_lo > dom_hi {
        return Err(DrinfeldError::WindowMismatch(format!("empty domain {dom_lo}..={dom_hi}")));
    }
    if target.prec() < cod_hi {
        return Err(DrinfeldError::WindowMismatch(format!(
            "target known to O(u^{}) but codomain needs O(u^{cod_hi})",
            target.prec()
        )));
    }
    let columns = (dom_lo..=dom_hi)
        .map(|n| lexp.eval(&Laurent::monomial(fq, 1, n), cod_hi))
        .collect::<Result<Vec<_>, _>>()?;
    if let Some(c) = columns.iter().find(|c| c.prec() < cod_hi) {
        return Err(DrinfeldError::WindowMismatch(format!(
            "exp column only certified to O(u^{}), codomain needs O(u^{cod_hi})",
            c.prec()
        )));
    }
    let cod_lo = columns.iter().chain(std::iter::once(target)).map(|c| c.val_bound()).min().unwrap().min(cod_hi);
    let rows = (cod_hi - cod_lo) as usize;
    let ncols = columns.len();
    let mut m = FqMatrix::zeros(fq, rows, ncols);
    for (j, c) in columns.iter().enumerate() {
        for (r, v) in c.window(cod_lo, cod_hi)?.into_iter().enumerate() {
            m.set(r, j, v);
        }
    }
    let b = target.window(cod_lo, cod_hi)?;
    let to_series = |x: &[u32]| Laurent::new(fq, dom_lo, x.to_vec(), EXACT);
    Ok(m.solve(&b).map(|x| PreimageSolution {
        lambda: to_series(&x),
        kernel: m.kernel().iter().map(|k| to_series(k)).collect(),
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::poly::FqPoly;

    fn carlitz_local(q: u32, imax: usize, rel: i64) -> (ExpCoeffs, LocalExp) {
        let fq = Fq::new(q).unwrap();
        let exp = DrinfeldModule::carlitz(fq).exp_coefficients(imax);
        let lexp = LocalExp::new(&exp, LocalField::rational(fq), rel).unwrap();
        (exp, lexp)
    }

    #[test]
    fn exp_of_period_vanishes() {
        // over F_3 the period lives in the ramified completion t = -u^-2
        for (q, e, c, prec) in [(2u32, 1u32, 1u32, 60i64), (3, 2, 2, 40)] {
            let fq = Fq::new(q).unwrap();
            let lf = LocalField { fq, e, c };
            let exp = DrinfeldModule::carlitz(fq).exp_coefficients(10);
            let lexp = LocalExp::new(&exp, lf, 400).unwrap();
            let pi = carlitz_period(lf, prec + 10).unwrap();
            let v = lexp.eval(&pi.value, prec).unwrap();
            assert!(v.valuation().is_none(), "exp(pi) = {v:?}");
            assert_eq!(v.prec(), prec);
        }
    }

    #[test]
    fn period_leading_term() {
        // q = 2: pi = t^2 (1 + t^-1 + ...) since alpha = t.
        let f2 = Fq::new(2).unwrap();
        let p = carlitz_period(LocalField::rational(f2), 10).unwrap();
        assert_eq!(p.value.valuation(), Some(-2));
        assert_eq!(p.value.coeff(-1), Some(1));
        // q = 3 over k((1/t)) has no square root of -t.
        let f3 = Fq::new(3).unwrap();
        assert_eq!(carlitz_period(LocalField::rational(f3), 10), Err(DrinfeldError::NoAlpha));
        assert!(carlitz_period(LocalField { fq: f3, e: 2, c: 2 }, 10).is_ok());
    }

    #[test]
    fn exp_is_phi_equivariant() {
        // exp(t lambda) = phi_t(exp(lambda)) for lambda in the domain of definition
        let (exp, lexp) = carlitz_local(2, 12, 300);
        let fq = exp.module().fq();
        let lf = lexp.local_field();
        let lam = Laurent::new(fq, -3, vec![1, 0, 1, 1], EXACT);
        let prec = 30;
        let lhs = lexp.eval(&lam.mul(&lf.t()), prec).unwrap();
        let rhs = exp.module().phi_t().apply_local(&lf, &lexp.eval(&lam, prec + 4).unwrap(), prec);
        assert!(lhs.agreement(&rhs).agrees());
    }

    #[test]
    fn log_inverts_exp_in_ball() {
        for q in [2u32, 3] {
            let fq = Fq::new(q).unwrap();
            let imax = if q == 2 { 9 } else { 6 };
            let exp = DrinfeldModule::carlitz(fq).exp_coefficients(imax);
            let log = exp.log_coefficients(imax).unwrap();
            let lf = LocalField::rational(fq);
            let lexp = LocalExp::new(&exp, lf, 200).unwrap();
            let llog = LocalLog::new(&exp, &log, lf, 200).unwrap();
            let x = Laurent::new(fq, -1, vec![1, 1, 0, 1], EXACT);
            let y = lexp.eval(&x, 30).unwrap();
            let back = llog.eval(&y, 30).unwrap();
            assert!(back.agreement(&x).agrees());
            // t^2 lies outside the ball
            let far = Laurent::monomial(fq, 1, -2);
            assert!(matches!(llog.eval(&far, 10), Err(DrinfeldError::Divergent { .. })));
        }
    }

    #[test]
    fn preimage_of_torsion_point() {
        // F_2, f = t: phi_t(x) = tx + x^2 has root x = t, and exp(pi/t) = t.
        let (_, lexp) = carlitz_local(2, 12, 200);
        let fq = Fq::new(2).unwrap();
        let target = LocalField::rational(fq).embed_poly(&FqPoly::var(fq));
        let sol = exp_preimage_window(&lexp, &target, -1, 20, 21).unwrap().unwrap();
        let pi = carlitz_period(LocalField::rational(fq), 30).unwrap();
        let pi_over_t = pi.value.shift(1).truncate(21);
        let diff = sol.lambda.truncate(21).sub(&pi_over_t);
        // the solution is unique modulo the kernel, which is trivial here
        assert!(sol.kernel.is_empty());
        assert!(diff.valuation().is_none());
        assert!(exp_preimage_window(&lexp, &target.truncate(5), 0, 3, 10).is_err());
    }
}
