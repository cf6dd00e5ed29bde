//! `drinfeld`: compute `zeta_R(1)`, unit lattices, class modules, and check
//! `zeta_R(1) = Reg_R |H_R|` to finite precision for the Carlitz module.
//!
//! Exit status: 0 when every check passes, 1 when an inconsistency is
//! found, 2 when a computation fails or the input is invalid.

mod cache;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{ArgGroup, Args, Parser, Subcommand};
use serde::Serialize;

use drinfeld_core::lattice::LatticeConfig;
use drinfeld_core::verify::{
    assemble, lattice_config_for, lattice_stage, zeta_stage, FieldRecord, FieldSpec, LatticeStage, Timing, VerifyError,
    ZetaStage, SCHEMA_VERSION,
};

use cache::{Cache, Lookup};
use report::{ClassModuleReport, Outcome, UnitsReport, ZetaReport};

#[derive(Parser, Debug)]
#[command(name = "drinfeld", version, about = "Special values, unit lattices and class modules of Carlitz cyclotomic and other function fields")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// zeta_R(1) through O(t^-(N+1)).
    Zeta(Common),
    /// The unit lattice, its saturation audit and the unit module U_R.
    Units(Common),
    /// The class module H_R with its t-action and |H_R|.
    Classmodule(Common),
    /// Compare zeta_R(1) with Reg_R |H_R| and check v(Reg_R |H_R|) = 0.
    Verify(Common),
}

#[derive(Args, Debug, Clone)]
#[command(group(ArgGroup::new("field").required(true).args(["modulus", "min_poly"])))]
struct Common {
    /// Size of the constant field (a prime power up to 256).
    #[arg(long)]
    q: u32,
    /// Irreducible f(t): work in the Carlitz f-torsion field.
    #[arg(long)]
    modulus: Option<String>,
    /// Monic m(x) over k[t], e.g. "x^2 + t".
    #[arg(long = "min-poly")]
    min_poly: Option<String>,
    /// Precision N: series are computed through O(t^-(N+1)).
    #[arg(long, default_value_t = 30)]
    prec: usize,
    /// Write the JSON report to this path.
    #[arg(long)]
    json: Option<PathBuf>,
    /// Directory of the stage cache.
    #[arg(long = "cache-dir")]
    cache_dir: Option<PathBuf>,
    /// Recompute every stage and leave the cache untouched.
    #[arg(long = "no-cache")]
    no_cache: bool,
    /// Extra coordinate digits kept in the finite quotient beyond the proven minimum.
    #[arg(long = "degree-bound", default_value_t = 1)]
    degree_bound: i64,
    /// First window level, in powers of t, for exp-preimages.
    #[arg(long, default_value_t = 0)]
    window: i64,
}

impl Common {
    fn spec(&self) -> FieldSpec {
        match (&self.modulus, &self.min_poly) {
            (Some(f), _) => FieldSpec::modulus(self.q, f),
            (None, Some(m)) => FieldSpec::min_poly(self.q, m),
            (None, None) => unreachable!("clap enforces the field group"),
        }
    }

    fn lattice_config(&self) -> LatticeConfig {
        let base = LatticeConfig {
            window: self.window.max(0),
            degree_bound: self.degree_bound.max(0),
            max_window: LatticeConfig::default().max_window.max(self.window + 4),
            ..LatticeConfig::default()
        };
        lattice_config_for(self.prec, &base)
    }

    fn cache(&self) -> Cache {
        if self.no_cache {
            return Cache::disabled();
        }
        Cache::new(Some(self.cache_dir.clone().unwrap_or_else(default_cache_dir)))
    }
}

fn default_cache_dir() -> PathBuf {
    let base = std::env::var_os("XDG_CACHE_HOME")
        .map(PathBuf::from)
        .or_else(|| std::env::var_os("HOME").map(|h| PathBuf::from(h).join(".cache")))
        .unwrap_or_else(std::env::temp_dir);
    base.join("drinfeld")
}

#[derive(Serialize)]
struct StageKey<'a, C: Serialize> {
    schema_version: u32,
    stage: &'static str,
    crate_version: &'static str,
    field: &'a FieldSpec,
    params: C,
}

/// Load a stage from the cache or compute and store it.
fn cached<C: Serialize, T: Serialize + serde::de::DeserializeOwned>(
    cache: &Cache,
    stage: &'static str,
    field: &FieldSpec,
    params: C,
    compute: impl FnOnce() -> Result<T, VerifyError>,
) -> Result<(T, Option<u64>), VerifyError> {
    let key = StageKey { schema_version: SCHEMA_VERSION, stage, crate_version: env!("CARGO_PKG_VERSION"), field, params };
    let (hit, status) = cache.get::<_, T>(&key);
    if status == Lookup::Discarded {
        eprintln!("cache: discarded a corrupted {stage} entry");
    }
    if let Some(v) = hit {
        eprintln!("cache: {stage} loaded");
        return Ok((v, None));
    }
    let start = Instant::now();
    let v = compute()?;
    let ms = start.elapsed().as_millis() as u64;
    if let Err(e) = cache.put(&key, &v) {
        eprintln!("cache: could not store {stage}: {e}");
    }
    Ok((v, Some(ms)))
}

fn zeta_of(c: &Common, spec: &FieldSpec, field: &drinfeld_core::field::FunctionField) -> Result<(ZetaStage, Option<u64>), VerifyError> {
    cached(&c.cache(), "zeta", spec, c.prec, || zeta_stage(field, c.prec))
}

fn lattice_of(
    c: &Common,
    spec: &FieldSpec,
    field: &drinfeld_core::field::FunctionField,
) -> Result<(LatticeStage, Option<u64>), VerifyError> {
    let config = c.lattice_config();
    cached(&c.cache(), "lattice", spec, config.clone(), || lattice_stage(field, &config))
}

fn run(cmd: &Command) -> Result<Outcome, VerifyError> {
    let start = Instant::now();
    let c = match cmd {
        Command::Zeta(c) | Command::Units(c) | Command::Classmodule(c) | Command::Verify(c) => c,
    };
    let spec = c.spec();
    let field = spec.build()?;
    let record = FieldRecord::new(&spec, &field);
    let outcome = match cmd {
        Command::Zeta(_) => {
            let (z, ms) = zeta_of(c, &spec, &field)?;
            let timing = Timing { zeta_ms: ms, lattice_ms: None, total_ms: start.elapsed().as_millis() as u64 };
            Outcome::Zeta(ZetaReport::new(record, c.prec, z, timing))
        }
        Command::Units(_) => {
            let (l, ms) = lattice_of(c, &spec, &field)?;
            let timing = Timing { zeta_ms: None, lattice_ms: ms, total_ms: start.elapsed().as_millis() as u64 };
            Outcome::Units(UnitsReport::new(record, c.prec, l, timing))
        }
        Command::Classmodule(_) => {
            let (l, ms) = lattice_of(c, &spec, &field)?;
            let timing = Timing { zeta_ms: None, lattice_ms: ms, total_ms: start.elapsed().as_millis() as u64 };
            Outcome::ClassModule(ClassModuleReport::new(record, c.prec, l, timing)?)
        }
        Command::Verify(_) => {
            let (z, zms) = zeta_of(c, &spec, &field)?;
            let (l, lms) = lattice_of(c, &spec, &field)?;
            let timing = Timing { zeta_ms: zms, lattice_ms: lms, total_ms: start.elapsed().as_millis() as u64 };
            Outcome::Verify(Box::new(assemble(record, c.prec, z, l, timing)?))
        }
    };
    Ok(outcome)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let json_path = match &cli.command {
        Command::Zeta(c) | Command::Units(c) | Command::Classmodule(c) | Command::Verify(c) => c.json.clone(),
    };
    match run(&cli.command) {
        Ok(outcome) => {
            print!("{}", outcome.render());
            if let Some(path) = json_path {
                if let Err(e) = cache::write_atomic(&path, outcome.to_json().as_bytes()) {
                    eprintln!("error: could not write {}: {e}", path.display());
                    return ExitCode::from(2);
                }
            }
            if outcome.passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_inconsistency() { 1 } else { 2 })
        }
    }
}
