//! The unit lattice `Lambda = exp^-1(E(R))` inside `K_oo = prod_v K_v`, its
//! regulator, the class module `H_R = E(K_oo) / (E(R) + exp(K_oo))` and the
//! module of units `U_R = exp(Lambda)`.
//!
//! Everything is read off one linear map. For a ball `B_P` on which exp is
//! an isometry, `Psi(lambda) = exp(lambda) mod (R + B_P)` sends windows of
//! local monomials into the finite space `Q = K_oo / (R + B_P)`. Its kernel on
//! the window of level L is `Lambda` restricted to that window, and its
//! cokernel is `H_R` once the window is large. The t-action on `H_R` is
//! computed on global representatives `t^-k x^i`.

pub mod basis;
pub mod geometry;
pub mod quotient;
pub mod units;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::laurent::{Laurent, SeriesRecord};
use crate::algebra::poly::FqPoly;
use crate::algebra::tmodule::TModule;
use crate::algebra::AlgebraError;
use crate::drinfeld::{DrinfeldError, DrinfeldModule};
use crate::field::{FieldError, FunctionField};

pub use basis::LatticeVector;
use geometry::{Geometry, SeriesBank};
use quotient::Quotient;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LatticeError {
    #[error("lattice rank {achieved} < {expected} after window of level {window}")]
    Rank { achieved: usize, expected: usize, window: i64 },
    #[error("class module dimension did not stabilize: {0:?}")]
    Unstable(Vec<(i64, usize)>),
    #[error("regulator indistinguishable from zero through O(t^-{0})")]
    RegulatorZero(i64),
    #[error("insufficient precision: {0}")]
    Precision(String),
    #[error("inconsistent lattice data: {0}")]
    Inconsistent(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Drinfeld(#[from] DrinfeldError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// Tunable windows and precisions. Levels are in powers of t.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeConfig {
    /// Ball exponent P (in each local uniformizer); must be at least 1.
    pub ball: i64,
    /// First window level tried.
    pub window: i64,
    /// Largest window level before giving up.
    pub max_window: i64,
    /// Relative precision (digits in 1/t) demanded of the regulator.
    pub prec: i64,
    /// Extra coordinate digits kept in `Q` beyond the proven minimum.
    pub degree_bound: i64,
}

impl Default for LatticeConfig {
    fn default() -> Self {
        LatticeConfig { ball: 1, window: 0, max_window: 8, prec: 40, degree_bound: 1 }
    }
}

/// The class module with its t-action.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassModule {
    pub module: TModule,
    /// Monic `det(tI - T)`, i.e. `|H_R|`.
    pub order: FqPoly,
    pub invariants: Vec<FqPoly>,
}

impl ClassModule {
    pub fn dim(&self) -> usize {
        self.module.dim()
    }
}

/// Window-count prediction of `v(Reg)` using a second ball.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EulerCheck {
    pub ball: i64,
    /// `dim K_oo / (R + B)`.
    pub dim_r: usize,
    /// `dim K_oo / (Lambda + B)`, from the reduced basis.
    pub dim_lattice: usize,
    /// `dim_r - dim_lattice`.
    pub predicted: i64,
}

/// A computed unit lattice.
#[derive(Clone, Debug)]
pub struct UnitLattice {
    pub(crate) geo: Geometry,
    pub(crate) bank: SeriesBank,
    pub(crate) quotient: Quotient,
    pub config: LatticeConfig,
    pub basis: Vec<LatticeVector>,
    /// `(window level, dim coker Psi)` for every window examined.
    pub history: Vec<(i64, usize)>,
    /// Local precision (in u) of the basis vectors.
    pub local_prec: i64,
}

/// Lower bound for `v_u(exp(u^-n))` at a place of ramification e.
fn exp_pole(module: &DrinfeldModule, e: i64, n: i64) -> i64 {
    let q = module.q() as i64;
    let b = module.exp_valuation_bounds(24);
    let mut best = 0i64.min(-n);
    for (i, bi) in b.iter().enumerate() {
        let qi = q.checked_pow(i as u32).unwrap_or(i64::MAX / 4);
        let term = e.saturating_mul(*bi).saturating_sub(qi.saturating_mul(n));
        best = best.min(term);
        if term > 0 && qi > n.max(1) * 4 {
            break;
        }
    }
    best
}

fn build_geometry(field: &FunctionField, dual_prec: i64, x_prec: i64) -> Result<Geometry, LatticeError> {
    let mut px = x_prec.max(dual_prec) + 32;
    for _ in 0..6 {
        let g = Geometry::new(field, px, dual_prec)?;
        let spread: i64 = g
            .places
            .iter()
            .map(|p| 2 * p.place.derivative_valuation.abs() - (field.degree() as i64) * p.place.x.val_bound().min(0))
            .max()
            .unwrap_or(0);
        if g.dual_prec() >= dual_prec && px >= x_prec + spread {
            return Ok(g);
        }
        px = px.max(dual_prec + spread + 32).max(x_prec + spread + 32) + px / 2;
    }
    Err(LatticeError::Precision("could not reach the requested dual-basis precision".into()))
}

impl UnitLattice {
    /// Compute `Lambda` for the Drinfeld module `module` over R.
    pub fn compute(field: &FunctionField, module: &DrinfeldModule, config: &LatticeConfig) -> Result<Self, LatticeError> {
        if config.ball < 1 {
            return Err(LatticeError::Unsupported("the ball exponent must be at least 1".into()));
        }
        if module.fq() != field.fq() {
            return Err(LatticeError::Unsupported("module and field over different constant fields".into()));
        }
        let d = field.degree();
        let mut geo = build_geometry(field, 64, 64)?;
        let n_places = geo.places.len();
        let mut bank = SeriesBank::new(module, n_places);
        let mut quotient = Quotient::new(&geo, config.ball, config.degree_bound)?;
        let mut history = Vec::new();
        let mut top = config.window.max(0);
        let mut found_at: Option<i64> = None;
        let selection = loop {
            // dual precision for every new column
            let need = geo
                .places
                .iter()
                .map(|p| p.e() * quotient.s0 - exp_pole(module, p.e(), p.e() * top) + 8)
                .max()
                .unwrap_or(0);
            if geo.dual_prec() < need {
                geo = build_geometry(field, need, need)?;
            }
            quotient.extend_window(&geo, &mut bank, top * geo.lcm)?;
            let sel = basis::select(&geo, &quotient.kernel, top * geo.lcm, d)?;
            history.push((top, quotient.cokernel_dim()));
            if sel.chosen.len() == d && found_at.is_none() {
                found_at = Some(top);
            }
            if let Some(f) = found_at {
                let n = history.len();
                let stable = n >= 3 && history[n - 1].1 == history[n - 2].1 && history[n - 2].1 == history[n - 3].1;
                if top >= f + 2 && stable {
                    break sel;
                }
            }
            if top >= config.max_window {
                return match found_at {
                    None => Err(LatticeError::Rank { achieved: sel.chosen.len(), expected: d, window: top }),
                    Some(_) => Err(LatticeError::Unstable(history)),
                };
            }
            top += 1;
        };
        let mut lat = UnitLattice {
            geo,
            bank,
            quotient,
            config: config.clone(),
            basis: Vec::new(),
            history,
            local_prec: 0,
        };
        let kernel: Vec<_> = selection.chosen.iter().map(|&i| lat.quotient.kernel[i].clone()).collect();
        let emax = lat.geo.places.iter().map(|p| p.e()).max().unwrap_or(1);
        let mut slack = 2 * config.prec + 16;
        for _ in 0..5 {
            let local = emax * (config.prec + slack);
            let x_need = local + 16;
            if lat.geo.places.iter().any(|p| p.place.prec() < x_need + (d as i64) * p.place.x.val_bound().min(0).abs()) {
                let dp = lat.geo.dual_prec();
                lat.geo = build_geometry(field, dp, x_need + (d as i64) * 4)?;
            }
            let mut vecs = Vec::with_capacity(d);
            for kv in &kernel {
                vecs.push(basis::lift(&lat.geo, &mut lat.bank, kv, config.ball, local)?);
            }
            lat.basis = vecs;
            lat.local_prec = local;
            match lat.regulator() {
                Ok(reg) if reg.prec() - reg.val_bound() >= config.prec => return Ok(lat),
                Ok(_) | Err(LatticeError::Algebra(_)) | Err(LatticeError::Precision(_)) => slack *= 2,
                Err(e) => return Err(e),
            }
        }
        Err(LatticeError::Precision(format!("regulator did not reach {} digits", config.prec)))
    }

    pub fn degree(&self) -> usize {
        self.geo.degree()
    }

    pub fn field(&self) -> &FunctionField {
        &self.geo.field
    }

    pub fn module(&self) -> &DrinfeldModule {
        self.bank.module()
    }

    /// Number of places above infinity.
    pub fn place_count(&self) -> usize {
        self.geo.places.len()
    }

    /// Levels of the basis vectors, in powers of t.
    pub fn levels(&self) -> Vec<Ratio<i64>> {
        self.basis.iter().map(|b| Ratio::new(b.level, self.geo.lcm)).collect()
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    /// `Reg_R`: monic determinant of the basis in power-basis coordinates.
    pub fn regulator(&self) -> Result<Laurent, LatticeError> {
        let emax = self.geo.places.iter().map(|p| p.e()).max().unwrap_or(1);
        let cap = self.local_prec / emax;
        basis::regulator(&self.geo, &self.basis, self.local_prec, cap)
    }

    /// `H_R` with its t-action, from the cokernel of `Psi` on the final window.
    pub fn class_module(&self) -> Result<ClassModule, LatticeError> {
        let t = self.quotient.t_action(&self.geo, self.module())?;
        let module = TModule::new(t);
        let order = module.fitting_det();
        let invariants = module.invariant_factors();
        Ok(ClassModule { module, order, invariants })
    }

    /// Predict `v(Reg)` from window counts with the ball `B_ball`, where
    /// `ball` should differ from the one used to build the lattice.
    pub fn euler_check(&self, ball: i64) -> Result<EulerCheck, LatticeError> {
        let q2 = Quotient::new(&self.geo, ball, self.config.degree_bound)?;
        let dim_r = q2.dim();
        let lcm = self.geo.lcm;
        let jt = self.basis.iter().map(|b| b.level).max().unwrap_or(0).div_euclid(lcm) + 1;
        let window: i64 = self.geo.places.iter().map(|p| p.e() * jt + ball).sum();
        let points: i64 = self.basis.iter().map(|b| (jt * lcm - b.level).div_euclid(lcm) + 1).sum();
        let dim_lattice = (window - points) as usize;
        Ok(EulerCheck { ball, dim_r, dim_lattice, predicted: dim_r as i64 - dim_lattice as i64 })
    }

    /// Verify `exp(lambda_i) = xi_i` at `prec` digits for every basis vector.
    pub fn check_images(&mut self, prec: i64) -> Result<bool, LatticeError> {
        for b in &self.basis {
            let emb = self.geo.embed(&b.image, prec);
            for (v, p) in self.geo.places.iter().enumerate() {
                let y = self.bank.exp(v, p.lf(), &b.lambda[v], prec)?;
                if y.prec() < prec.min(b.lambda[v].prec()) || !y.agreement(&emb[v]).agrees() {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Serializable summary.
    pub fn certificate(&self) -> Result<LatticeCertificate, LatticeError> {
        let reg = self.regulator()?;
        let h = self.class_module()?;
        Ok(LatticeCertificate {
            degree: self.degree(),
            places: self
                .geo
                .places
                .iter()
                .map(|p| PlaceRecord { ramification: p.e() as u32, c: p.lf().c, slope: p.place.slope.to_string() })
                .collect(),
            ball: self.config.ball,
            windows: self.history.clone(),
            coordinate_digits: self.quotient.s0 - 1,
            local_precision: self.local_prec,
            basis: self
                .basis
                .iter()
                .map(|b| BasisRecord {
                    level: Ratio::new(b.level, self.geo.lcm).to_string(),
                    image: b.image.iter().map(|c| c.to_string()).collect(),
                    local: b.lambda.iter().map(|l| l.to_record()).collect(),
                })
                .collect(),
            regulator: reg.to_record(),
            class_module_dim: h.dim(),
            class_number: h.order.to_string(),
            class_invariants: h.invariants.iter().map(|p| p.to_string()).collect(),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlaceRecord {
    pub ramification: u32,
    pub c: u32,
    pub slope: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasisRecord {
    pub level: String,
    /// `exp(lambda)` in the power basis, one polynomial per `x^i`.
    pub image: Vec<String>,
    /// `lambda` at each place, in the local uniformizer.
    pub local: Vec<SeriesRecord>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeCertificate {
    pub degree: usize,
    pub places: Vec<PlaceRecord>,
    pub ball: i64,
    pub windows: Vec<(i64, usize)>,
    pub coordinate_digits: i64,
    pub local_precision: i64,
    pub basis: Vec<BasisRecord>,
    pub regulator: SeriesRecord,
    pub class_module_dim: usize,
    pub class_number: String,
    pub class_invariants: Vec<String>,
}
