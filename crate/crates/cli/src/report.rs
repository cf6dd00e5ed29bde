//! JSON documents and terminal summaries for each subcommand.

use std::fmt::Write;

use serde::{Deserialize, Serialize};

use drinfeld_core::algebra::laurent::SeriesRecord;
use drinfeld_core::lattice::units::UnitModule;
use drinfeld_core::lattice::{BasisRecord, EulerCheck, PlaceRecord};
use drinfeld_core::verify::{
    valuation_check, FieldRecord, LatticeStage, SaturationRecord, Timing, ValuationCheck, VerificationReport, VerifyError,
    ZetaStage, SCHEMA_VERSION,
};
use drinfeld_core::Fq;

fn series(q: u32, s: &SeriesRecord) -> String {
    let fq = Fq::new(q).expect("q was validated when the field was built");
    s.to_laurent(fq).fmt_var("t", true)
}

fn field_line(f: &FieldRecord) -> String {
    let maximal = if f.maximal_order { "" } else { " (order not certified maximal)" };
    format!("field: q = {}, m(x) = {}, degree {}{maximal}\n", f.q, f.min_poly, f.degree)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZetaReport {
    pub schema_version: u32,
    pub command: String,
    pub field: FieldRecord,
    pub precision: usize,
    pub zeta: ZetaStage,
    pub normalized: bool,
    pub warnings: Vec<String>,
    pub timing: Timing,
}

impl ZetaReport {
    pub fn new(field: FieldRecord, precision: usize, zeta: ZetaStage, timing: Timing) -> Self {
        let v = &zeta.value;
        let normalized = v.lowest_exponent == 0 && v.coefficients.first() == Some(&1);
        let mut warnings = field.warnings();
        warnings.extend(zeta.warnings.iter().cloned());
        ZetaReport { schema_version: SCHEMA_VERSION, command: "zeta".into(), field, precision, zeta, normalized, warnings, timing }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct UnitsReport {
    pub schema_version: u32,
    pub command: String,
    pub field: FieldRecord,
    pub precision: usize,
    pub places: Vec<PlaceRecord>,
    pub windows: Vec<(i64, usize)>,
    pub basis: Vec<BasisRecord>,
    pub lattice_rank: usize,
    pub regulator: SeriesRecord,
    pub images_verified: bool,
    pub saturation: SaturationRecord,
    pub units: UnitModule,
    pub torsion_point_in_units: Option<bool>,
    pub warnings: Vec<String>,
    pub timing: Timing,
}

impl UnitsReport {
    pub fn new(field: FieldRecord, precision: usize, l: LatticeStage, timing: Timing) -> Self {
        let c = l.certificate;
        UnitsReport {
            schema_version: SCHEMA_VERSION,
            command: "units".into(),
            warnings: field.warnings(),
            field,
            precision,
            places: c.places,
            windows: c.windows,
            lattice_rank: c.basis.len(),
            basis: c.basis,
            regulator: c.regulator,
            images_verified: l.images_verified,
            saturation: l.saturation,
            units: l.units,
            torsion_point_in_units: l.torsion_point_in_units,
            timing,
        }
    }

    fn passed(&self) -> bool {
        self.images_verified
            && self.saturation.fixpoint
            && self.torsion_point_in_units != Some(false)
            && self.lattice_rank == self.field.degree
            && self.units.rank + self.units.period_rank == self.field.degree
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassModuleReport {
    pub schema_version: u32,
    pub command: String,
    pub field: FieldRecord,
    pub precision: usize,
    pub windows: Vec<(i64, usize)>,
    pub dimension: usize,
    pub class_number: String,
    pub invariant_factors: Vec<String>,
    pub t_action: Vec<Vec<u32>>,
    pub euler: EulerCheck,
    pub valuation_theorem: ValuationCheck,
    pub warnings: Vec<String>,
    pub timing: Timing,
}

impl ClassModuleReport {
    pub fn new(field: FieldRecord, precision: usize, l: LatticeStage, timing: Timing) -> Result<Self, VerifyError> {
        let fq = Fq::new(field.q).map_err(|e| VerifyError::Input(e.to_string()))?;
        let valuation_theorem = valuation_check(fq, &l)?;
        let c = l.certificate;
        Ok(ClassModuleReport {
            schema_version: SCHEMA_VERSION,
            command: "classmodule".into(),
            warnings: field.warnings(),
            field,
            precision,
            windows: c.windows,
            dimension: c.class_module_dim,
            class_number: c.class_number,
            invariant_factors: c.class_invariants,
            t_action: l.t_action,
            euler: l.euler,
            valuation_theorem,
            timing,
        })
    }
}

pub enum Outcome {
    Zeta(ZetaReport),
    Units(UnitsReport),
    ClassModule(ClassModuleReport),
    Verify(Box<VerificationReport>),
}

impl Outcome {
    pub fn passed(&self) -> bool {
        match self {
            Outcome::Zeta(r) => r.normalized,
            Outcome::Units(r) => r.passed(),
            Outcome::ClassModule(r) => r.valuation_theorem.verdict.passed,
            Outcome::Verify(r) => r.passed(),
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = match self {
            Outcome::Zeta(r) => serde_json::to_string_pretty(r),
            Outcome::Units(r) => serde_json::to_string_pretty(r),
            Outcome::ClassModule(r) => serde_json::to_string_pretty(r),
            Outcome::Verify(r) => serde_json::to_string_pretty(r),
        }
        .expect("reports serialize");
        s.push('\n');
        s
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        match self {
            Outcome::Zeta(r) => {
                out += &field_line(&r.field);
                let _ = writeln!(out, "zeta_R(1) = {}", series(r.field.q, &r.zeta.value));
                let _ = writeln!(out, "method: {:?}", r.zeta.method);
            }
            Outcome::Units(r) => {
                out += &field_line(&r.field);
                let _ = writeln!(out, "places above infinity: {}", r.places.len());
                let _ = writeln!(out, "lattice rank: {} (degree {})", r.lattice_rank, r.field.degree);
                let _ = writeln!(out, "Reg_R = {}", series(r.field.q, &r.regulator));
                let _ = writeln!(
                    out,
                    "U_R: rank {} = {} - {} (periods), torsion invariants [{}]",
                    r.units.rank,
                    r.field.degree,
                    r.units.period_rank,
                    r.units.torsion.join(", ")
                );
                let _ = writeln!(
                    out,
                    "saturation at [{}]: {}",
                    r.saturation.primes.join(", "),
                    if r.saturation.fixpoint { "already saturated" } else { "NOT saturated" }
                );
                if let Some(b) = r.torsion_point_in_units {
                    let _ = writeln!(out, "lambda_f in U_R: {}", if b { "yes" } else { "NO" });
                }
                let _ = writeln!(out, "exp images rechecked: {}", if r.images_verified { "yes" } else { "NO" });
            }
            Outcome::ClassModule(r) => {
                out += &field_line(&r.field);
                let _ = writeln!(out, "dim_k H_R = {}", r.dimension);
                let _ = writeln!(out, "|H_R| = {}", r.class_number);
                let _ = writeln!(out, "invariant factors: [{}]", r.invariant_factors.join(", "));
                let _ = writeln!(out, "window history (level, dim coker): {:?}", r.windows);
                let _ = writeln!(out, "valuation theorem: {}", r.valuation_theorem.verdict.statement);
            }
            Outcome::Verify(r) => {
                let q = r.field.q;
                out += &field_line(&r.field);
                let _ = writeln!(out, "zeta_R(1)  = {}", series(q, &r.zeta.value));
                let _ = writeln!(out, "Reg_R      = {}", series(q, &r.regulator));
                let _ = writeln!(out, "zeta/Reg   = {}", series(q, &r.conjecture.quotient));
                let _ = writeln!(out, "|H_R|      = {}", r.class_number);
                let _ = writeln!(out, "residual   = {}", series(q, &r.conjecture.residual));
                let _ = writeln!(out, "valuation theorem: {}", r.valuation_theorem.verdict.statement);
                let _ = writeln!(out, "conjecture: {}", r.conjecture.verdict.statement);
            }
        }
        let warnings = match self {
            Outcome::Zeta(r) => &r.warnings,
            Outcome::Units(r) => &r.warnings,
            Outcome::ClassModule(r) => &r.warnings,
            Outcome::Verify(r) => &r.warnings,
        };
        for w in warnings {
            let _ = writeln!(out, "warning: {w}");
        }
        out
    }
}
