//! The full experiment on one field: `zeta_R(1)`, the unit lattice, `Reg_R`,
//! `H_R`, and the two checks built from them.
//!
//! The work is split into two serializable stages ([`ZetaStage`] and
//! [`LatticeStage`]) so that a caller can store and reload them; the report
//! itself is assembled from stage records only, which makes a report from
//! cached stages byte-identical to one from fresh stages.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::factor::{factor, monic_irreducibles};
use crate::algebra::fq::Fq;
use crate::algebra::laurent::{Laurent, LocalField, SeriesRecord};
use crate::algebra::parse::parse_poly;
use crate::algebra::poly::FqPoly;
use crate::algebra::polymat::PolyMatrix;
use crate::algebra::AlgebraError;
use crate::drinfeld::DrinfeldModule;
use crate::field::{FieldError, FunctionField};
use crate::lattice::units::UnitModule;
use crate::lattice::{EulerCheck, LatticeCertificate, LatticeConfig, LatticeError, UnitLattice};
use crate::zeta::{zeta_value, ZetaError, ZetaMethod};

/// Version of every JSON document produced here.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum VerifyError {
    #[error("invalid input: {0}")]
    Input(String),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Zeta(#[from] ZetaError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

impl VerifyError {
    /// Whether the failure is a detected mathematical inconsistency rather
    /// than a resource or input problem.
    pub fn is_inconsistency(&self) -> bool {
        matches!(self, VerifyError::Lattice(LatticeError::Inconsistent(_)))
    }
}

/// How the field was specified.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "mode", content = "polynomial")]
pub enum FieldInput {
    /// Carlitz cyclotomic field of an irreducible modulus f(t).
    Modulus(String),
    /// `K = k(t)[x]/(m)` for a monic m in x.
    MinPoly(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldSpec {
    pub q: u32,
    pub input: FieldInput,
}

impl FieldSpec {
    pub fn modulus(q: u32, f: &str) -> Self {
        FieldSpec { q, input: FieldInput::Modulus(f.to_string()) }
    }

    pub fn min_poly(q: u32, m: &str) -> Self {
        FieldSpec { q, input: FieldInput::MinPoly(m.to_string()) }
    }

    pub fn build(&self) -> Result<FunctionField, VerifyError> {
        let fq = Fq::new(self.q).map_err(|e| VerifyError::Input(e.to_string()))?;
        Ok(match &self.input {
            FieldInput::Modulus(s) => {
                let f = parse_poly(fq, s, "t")?;
                if !f.is_monic() || f.is_constant() {
                    return Err(VerifyError::Input(format!("modulus {s} must be monic of positive degree")));
                }
                FunctionField::cyclotomic(fq, &f)?
            }
            FieldInput::MinPoly(s) => FunctionField::parse_min_poly(fq, s)?,
        })
    }
}

/// Identifying data of a built field.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldRecord {
    pub q: u32,
    pub input: FieldInput,
    pub degree: usize,
    pub min_poly: String,
    pub maximal_order: bool,
}

impl FieldRecord {
    pub fn new(spec: &FieldSpec, field: &FunctionField) -> Self {
        FieldRecord {
            q: spec.q,
            input: spec.input.clone(),
            degree: field.degree(),
            min_poly: field.min_poly_string(),
            maximal_order: field.is_maximal(),
        }
    }

    pub fn warnings(&self) -> Vec<String> {
        if self.maximal_order {
            Vec::new()
        } else {
            vec!["order k[t][x]/(m) is not certified maximal; R denotes this order".into()]
        }
    }
}

/// `zeta_R(1)` with its audit data.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZetaStage {
    pub n: usize,
    pub value: SeriesRecord,
    pub method: ZetaMethod,
    pub prime_degree_cutoff: usize,
    pub class_sum_degree: Option<usize>,
    pub prime_counts: BTreeMap<usize, usize>,
    pub ideal_counts: BTreeMap<usize, u64>,
    pub warnings: Vec<String>,
}

pub fn zeta_stage(field: &FunctionField, n: usize) -> Result<ZetaStage, VerifyError> {
    let z = zeta_value(field, n)?;
    Ok(ZetaStage {
        n,
        value: z.value.to_record(),
        method: z.method,
        prime_degree_cutoff: z.prime_degree_cutoff,
        class_sum_degree: z.class_sum_degree,
        prime_counts: z.prime_counts,
        ideal_counts: z.ideal_counts,
        warnings: z.warnings,
    })
}

/// Saturation audit of the computed basis.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SaturationRecord {
    pub primes: Vec<String>,
    pub adjoined: usize,
    /// The computed basis was already saturated at every tested prime.
    pub fixpoint: bool,
}

/// Everything computed from the unit lattice of the Carlitz module.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeStage {
    pub config: LatticeConfig,
    pub certificate: LatticeCertificate,
    pub euler: EulerCheck,
    /// `exp(lambda_i) = xi_i` rechecked at the full local precision.
    pub images_verified: bool,
    /// Matrix of t on `H_R` (rows act on column vectors).
    pub t_action: Vec<Vec<u32>>,
    pub saturation: SaturationRecord,
    pub units: UnitModule,
    /// For cyclotomic fields: whether the generator `lambda_f` lies in `U_R`.
    pub torsion_point_in_units: Option<bool>,
}

impl LatticeStage {
    pub fn regulator(&self, fq: Fq) -> Laurent {
        self.certificate.regulator.to_laurent(fq)
    }

    pub fn class_number(&self, fq: Fq) -> Result<FqPoly, VerifyError> {
        Ok(parse_poly(fq, &self.certificate.class_number, "t")?)
    }
}

/// Compute the lattice stage for the Carlitz module over `field`.
pub fn lattice_stage(field: &FunctionField, config: &LatticeConfig) -> Result<LatticeStage, VerifyError> {
    let fq = field.fq();
    let module = DrinfeldModule::carlitz(fq);
    let mut lat = UnitLattice::compute(field, &module, config)?;
    let certificate = lat.certificate()?;
    let euler = lat.euler_check(config.ball + 1)?;
    let images_verified = lat.check_images(lat.local_prec)?;
    let h = lat.class_module()?;
    let t_action = h.module.action().row_vecs();
    let units = lat.unit_module()?;

    // saturation at degree-one primes and at the primes of the period index
    let mut extra: Vec<FqPoly> = monic_irreducibles(&fq, 1);
    for s in &units.torsion {
        for (g, _) in factor(&parse_poly(fq, s, "t")?)? {
            if !extra.contains(&g) {
                extra.push(g);
            }
        }
    }
    let d = lat.degree();
    let identity = PolyMatrix::identity(fq, d);
    let sat = lat.saturate(&identity, &extra)?;
    let saturation = SaturationRecord {
        primes: sat.primes.iter().map(|p| p.to_string()).collect(),
        adjoined: sat.adjoined,
        fixpoint: sat.adjoined == 0 && sat.hermite == identity,
    };
    let torsion_point_in_units = match field.conductor() {
        Some(_) if d > 1 => Some(lat.contains_unit(&field.basis(1))?),
        _ => None,
    };
    Ok(LatticeStage {
        config: config.clone(),
        certificate,
        euler,
        images_verified,
        t_action,
        saturation,
        units,
        torsion_point_in_units,
    })
}

/// Pass/fail with a human-readable statement.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub passed: bool,
    pub statement: String,
}

/// The exact identities `v(Reg |H|) = 0` and `deg |H| = dim H = prediction`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValuationCheck {
    pub regulator_valuation: i64,
    pub class_number_degree: i64,
    pub class_module_dim: usize,
    pub euler_prediction: i64,
    pub verdict: Verdict,
}

pub fn valuation_check(fq: Fq, lattice: &LatticeStage) -> Result<ValuationCheck, VerifyError> {
    let reg = lattice.regulator(fq);
    let v = reg.valuation().ok_or(LatticeError::RegulatorZero(reg.prec()))?;
    let h = lattice.class_number(fq)?;
    let deg = h.degree();
    let dim = lattice.certificate.class_module_dim;
    let pred = lattice.euler.predicted;
    let ok = v - deg == 0 && deg == dim as i64 && pred == deg;
    let statement = if ok {
        format!("v(Reg |H|) = {v} - {deg} = 0 and deg |H| = dim H = predicted = {deg}")
    } else {
        format!("FAILED: v(Reg) = {v}, deg |H| = {deg}, dim H = {dim}, predicted = {pred}")
    };
    Ok(ValuationCheck {
        regulator_valuation: v,
        class_number_degree: deg,
        class_module_dim: dim,
        euler_prediction: pred,
        verdict: Verdict { passed: ok, statement },
    })
}

/// Comparison of `zeta` with `Reg |H|`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConjectureCheck {
    /// `zeta / Reg`.
    pub quotient: SeriesRecord,
    /// `zeta - Reg |H|`.
    pub residual: SeriesRecord,
    /// Valuation of the residual, `None` when it vanishes to its precision.
    pub residual_valuation: Option<i64>,
    /// The residual is known through `O(t^-(M+1))`, i.e. to `t^-M`.
    pub certified_to: i64,
    pub verdict: Verdict,
}

pub fn conjecture_check(fq: Fq, zeta: &Laurent, reg: &Laurent, h: &FqPoly) -> Result<ConjectureCheck, VerifyError> {
    let hl = LocalField::rational(fq).embed_poly(h);
    let prod = reg.mul(&hl);
    let residual = zeta.sub(&prod);
    let m = residual.prec() - 1;
    let cap = if zeta.is_exact() { reg.prec() } else { zeta.prec() };
    let quotient = zeta.div(reg, cap)?;
    let (passed, statement) = match residual.valuation() {
        Some(j) if j > 0 => (false, format!("INCONSISTENT at t^-{j}")),
        Some(j) => (false, format!("INCONSISTENT at t^{}", -j)),
        None => (true, format!("consistent to O(t^-{m})")),
    };
    Ok(ConjectureCheck {
        quotient: quotient.to_record(),
        residual: residual.to_record(),
        residual_valuation: residual.valuation(),
        certified_to: m,
        verdict: Verdict { passed, statement },
    })
}

/// Wall-clock timings; the only nondeterministic part of a report.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Timing {
    pub zeta_ms: Option<u64>,
    pub lattice_ms: Option<u64>,
    pub total_ms: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub schema_version: u32,
    pub field: FieldRecord,
    pub precision: usize,
    pub zeta: ZetaStage,
    pub lattice: LatticeStage,
    pub regulator: SeriesRecord,
    pub class_number: String,
    pub valuation_theorem: ValuationCheck,
    pub conjecture: ConjectureCheck,
    pub warnings: Vec<String>,
    pub timing: Timing,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.valuation_theorem.verdict.passed
            && self.conjecture.verdict.passed
            && self.lattice.images_verified
            && self.lattice.saturation.fixpoint
    }
}

/// Lattice settings used by [`verify`] for precision N: the regulator must
/// carry at least `N + 2` digits so that `Reg |H|` covers `zeta`.
pub fn lattice_config_for(n: usize, base: &LatticeConfig) -> LatticeConfig {
    LatticeConfig { prec: base.prec.max(n as i64 + 2), ..base.clone() }
}

/// Assemble a report from stage records.
pub fn assemble(
    field: FieldRecord,
    precision: usize,
    zeta: ZetaStage,
    lattice: LatticeStage,
    timing: Timing,
) -> Result<VerificationReport, VerifyError> {
    let fq = Fq::new(field.q).map_err(|e| VerifyError::Input(e.to_string()))?;
    let z = zeta.value.to_laurent(fq);
    let reg = lattice.regulator(fq);
    let h = lattice.class_number(fq)?;
    let valuation_theorem = valuation_check(fq, &lattice)?;
    let conjecture = conjecture_check(fq, &z, &reg, &h)?;
    let mut warnings = field.warnings();
    warnings.extend(zeta.warnings.iter().cloned());
    if !lattice.images_verified {
        warnings.push("a lattice image failed its recheck at full precision".into());
    }
    if !lattice.saturation.fixpoint {
        warnings.push(format!("saturation adjoined {} vectors", lattice.saturation.adjoined));
    }
    Ok(VerificationReport {
        schema_version: SCHEMA_VERSION,
        field,
        precision,
        regulator: lattice.certificate.regulator.clone(),
        class_number: lattice.certificate.class_number.clone(),
        zeta,
        lattice,
        valuation_theorem,
        conjecture,
        warnings,
        timing,
    })
}

/// Run every stage and assemble the report.
pub fn verify(spec: &FieldSpec, n: usize, base: &LatticeConfig) -> Result<VerificationReport, VerifyError> {
    let start = std::time::Instant::now();
    let field = spec.build()?;
    let z = zeta_stage(&field, n)?;
    let zeta_ms = start.elapsed().as_millis() as u64;
    let l = lattice_stage(&field, &lattice_config_for(n, base))?;
    let total_ms = start.elapsed().as_millis() as u64;
    let timing = Timing { zeta_ms: Some(zeta_ms), lattice_ms: Some(total_ms - zeta_ms), total_ms };
    assemble(FieldRecord::new(spec, &field), n, z, l, timing)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_field_is_consistent() {
        let r = verify(&FieldSpec::modulus(2, "t"), 20, &LatticeConfig::default()).unwrap();
        assert!(r.passed(), "{:?}", r.conjecture.verdict);
        assert_eq!(r.conjecture.verdict.statement, "consistent to O(t^-20)");
        assert_eq!(r.class_number, "1");
    }

    #[test]
    fn a_wrong_class_number_is_reported_inconsistent() {
        let fq = Fq::new(2).unwrap();
        let z = Laurent::new(fq, 0, vec![1, 0, 1], 10);
        let reg = Laurent::new(fq, 0, vec![1, 0, 1], 12);
        let c = conjecture_check(fq, &z, &reg, &FqPoly::var(fq)).unwrap();
        // Reg * t differs from zeta already at t^1
        assert!(!c.verdict.passed);
        assert_eq!(c.verdict.statement, "INCONSISTENT at t^1");
        assert_eq!(c.residual_valuation, Some(-1));
        let shifted = Laurent::new(fq, 0, vec![1, 0, 0, 1], 10);
        let late = conjecture_check(fq, &shifted, &reg, &FqPoly::one(fq)).unwrap();
        assert_eq!(late.verdict.statement, "INCONSISTENT at t^-2");
        let ok = conjecture_check(fq, &z, &reg, &FqPoly::one(fq)).unwrap();
        assert_eq!(ok.verdict.statement, "consistent to O(t^-9)");
    }
}
