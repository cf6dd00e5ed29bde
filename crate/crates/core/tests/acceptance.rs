//! Acceptance suite: one PASS/FAIL line per criterion, then a hard assert.
//!
//! Every tolerance below is pinned; a criterion that cannot be met is
//! printed as FAIL rather than loosened.

use std::io::Write;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use drinfeld_core::algebra::factor::monic_irreducibles;
use drinfeld_core::algebra::parse::parse_poly;
use drinfeld_core::algebra::tmodule::TModule;
use drinfeld_core::drinfeld::{carlitz_period, exp_preimage_window, DrinfeldModule, LocalExp, LocalLog};
use drinfeld_core::field::FunctionField;
use drinfeld_core::lattice::LatticeConfig;
use drinfeld_core::verify::{lattice_stage, valuation_check, verify, FieldSpec};
use drinfeld_core::zeta::{zeta_direct_oracle, zeta_euler_product, zeta_value};
use drinfeld_core::{Fq, FqPoly, Laurent, LocalField, RatFunc, EXACT};

/// Criterion 1: precision and wall-clock budget.
const C1_N: usize = 30;
const C1_BUDGET: Duration = Duration::from_secs(5);
/// Criterion 2: precision, quotient agreement, residual valuation, budget.
const C2_N: usize = 35;
const C2_QUOTIENT_TO: i64 = 15;
const C2_RESIDUAL_MIN: i64 = 16;
const C2_BUDGET: Duration = Duration::from_secs(600);
const C2_CLASS_NUMBER: &str = "t^20 + t^17 + t^15 + t^14 + t^13 + t^11 + t^10 + t^6 + t^4 + t + 1";
/// Criterion 6: analytic precision and sample count.
const C6_PREC: i64 = 30;
const C6_SAMPLES: usize = 50;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn fq(q: u32) -> Fq {
    Fq::new(q).unwrap()
}

fn poly(q: u32, s: &str) -> FqPoly {
    parse_poly(fq(q), s, "t").unwrap()
}

/// `L_i = prod_{k=1..i} (t^(q^k) - t)`, straight from the definition.
fn carlitz_l(fq: Fq, i: usize) -> FqPoly {
    let q = fq.q() as usize;
    (1..=i).fold(FqPoly::one(fq), |acc, k| &acc * &(&FqPoly::monomial(fq, 1, q.pow(k as u32)) - &FqPoly::var(fq)))
}

/// `D_i = prod_{k=1..i} (t^(q^k) - t)^(q^(i-k))`.
fn carlitz_d(fq: Fq, i: usize) -> FqPoly {
    let q = fq.q() as u64;
    (1..=i).fold(FqPoly::one(fq), |acc, k| {
        let bracket = &FqPoly::monomial(fq, 1, q.pow(k as u32) as usize) - &FqPoly::var(fq);
        &acc * &bracket.pow(q.pow((i - k) as u32))
    })
}

/// `log(1) = sum (-1)^i / L_i` in `k((1/t))` through `O(t^-prec)`.
fn log_one(fq: Fq, prec: i64) -> Laurent {
    let lf = LocalField::rational(fq);
    let mut acc = Laurent::big_o(fq, prec);
    for i in 0.. {
        let l = carlitz_l(fq, i);
        if l.degree() >= prec {
            break;
        }
        let term = lf.embed_ratfunc(&RatFunc::new(FqPoly::one(fq), l).unwrap(), prec).unwrap();
        acc = if i % 2 == 0 { acc.add(&term) } else { acc.sub(&term) };
    }
    acc
}

fn random_series(fq: Fq, rng: &mut ChaCha8Rng, vals: std::ops::RangeInclusive<i64>, len: usize) -> Laurent {
    let q = fq.q();
    let val = rng.gen_range(vals);
    let mut coeffs: Vec<u32> = (0..len).map(|_| rng.gen_range(0..q)).collect();
    coeffs[0] = rng.gen_range(1..q);
    Laurent::new(fq, val, coeffs, EXACT)
}

fn criterion_1() -> Outcome {
    let f = fq(2);
    let field = FunctionField::cyclotomic(f, &FqPoly::var(f)).map_err(err)?;
    let start = Instant::now();
    let z = zeta_value(&field, C1_N).map_err(err)?;
    let elapsed = start.elapsed();
    let oracle = log_one(f, C1_N as i64 + 1);
    let a = z.value.agreement(&oracle);
    ensure(a.agrees() && a.overlap > C1_N as i64, || format!("mismatch {a:?}"))?;
    ensure(elapsed < C1_BUDGET, || format!("took {elapsed:?}"))?;
    Ok(format!("zeta_{{k[t]}}(1) = log(1) through t^-{C1_N} in {:.2?}", elapsed))
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let r = verify(&FieldSpec::modulus(2, "t^5+t^2+1"), C2_N, &LatticeConfig::default()).map_err(err)?;
    let elapsed = start.elapsed();
    let f = fq(2);
    let target = poly(2, C2_CLASS_NUMBER);
    ensure(r.class_number == target.to_string(), || format!("|H_R| = {}", r.class_number))?;
    let quotient = r.conjecture.quotient.to_laurent(f);
    let diff = quotient.sub(&LocalField::rational(f).embed_poly(&target));
    ensure(diff.prec() > C2_QUOTIENT_TO && diff.valuation().is_none_or(|v| v > C2_QUOTIENT_TO), || {
        format!("zeta/Reg - |H| = {}", diff.fmt_var("t", true))
    })?;
    let residual = r.conjecture.residual.to_laurent(f);
    ensure(residual.prec() >= C2_RESIDUAL_MIN && residual.valuation().is_none_or(|v| v >= C2_RESIDUAL_MIN), || {
        format!("residual {}", residual.fmt_var("t", true))
    })?;
    ensure(r.passed(), || r.conjecture.verdict.statement.clone())?;
    ensure(elapsed < C2_BUDGET, || format!("took {elapsed:?}"))?;
    Ok(format!(
        "degree-31 field: zeta/Reg = |H_R| + O(t^-{}), residual O(t^-{}), {} in {:.2?}",
        diff.prec(),
        residual.prec(),
        r.conjecture.verdict.statement,
        elapsed
    ))
}

/// The fields of criteria 3 and 4 with their expected unit ranks.
fn small_fields() -> Vec<(FieldSpec, usize)> {
    vec![
        (FieldSpec::modulus(2, "t"), 0),
        (FieldSpec::modulus(2, "t^2+t+1"), 0),
        (FieldSpec::modulus(2, "t^3+t+1"), 0),
        (FieldSpec::modulus(2, "t^5+t^2+1"), 0),
        (FieldSpec::modulus(3, "t"), 1),
        (FieldSpec::min_poly(3, "x"), 1),
    ]
}

fn criterion_3_and_4() -> (Outcome, Outcome) {
    let mut val = Vec::new();
    let mut ranks = Vec::new();
    let run = |spec: &FieldSpec, expect_u: usize, val: &mut Vec<String>, ranks: &mut Vec<String>| -> Result<(), String> {
        let field = spec.build().map_err(err)?;
        let d = field.degree();
        let l = lattice_stage(&field, &LatticeConfig::default()).map_err(err)?;
        let v = valuation_check(field.fq(), &l).map_err(err)?;
        let name = format!("q={} d={d}", spec.q);
        val.push(format!("{name}: {}", if v.verdict.passed { "ok".into() } else { v.verdict.statement.clone() }));
        let lam = l.certificate.basis.len();
        let u = &l.units;
        let ok = lam == d && u.rank == d - u.period_rank && u.rank == expect_u;
        ranks.push(format!("{name}: rank Lambda {lam}/{d}, rank U {} = {d} - {}{}", u.rank, u.period_rank, if ok { "" } else { " WRONG" }));
        ensure(v.verdict.passed && ok, || name)
    };
    let mut failures = Vec::new();
    for (spec, expect_u) in small_fields() {
        if let Err(e) = run(&spec, expect_u, &mut val, &mut ranks) {
            failures.push(e);
        }
    }
    let val_ok = val.iter().all(|s| s.ends_with(": ok"));
    let rank_ok = !ranks.iter().any(|s| s.ends_with("WRONG")) && ranks.len() == small_fields().len();
    let c3 = if val_ok && val.len() == small_fields().len() {
        Ok(format!("v(Reg |H|) = 0 and deg |H| = dim H = prediction on {} fields", val.len()))
    } else {
        Err(format!("{val:?} {failures:?}"))
    };
    let c4 = if rank_ok { Ok(ranks.join("; ")) } else { Err(format!("{ranks:?} {failures:?}")) };
    (c3, c4)
}

fn criterion_5() -> Outcome {
    // Euler product against direct enumeration of ideals
    for (q, f, nmax) in [(2u32, "t", 8usize), (3, "t", 8), (2, "t^3+t+1", 6)] {
        let field = FunctionField::cyclotomic(fq(q), &poly(q, f)).map_err(err)?;
        for n in 0..=nmax {
            let a = zeta_euler_product(&field, n).map_err(err)?.value;
            let b = zeta_direct_oracle(&field, n).map_err(err)?.value;
            ensure(a.agreement(&b).agrees() && a.prec() == b.prec(), || format!("Euler vs direct at q={q} f={f} N={n}"))?;
        }
    }
    // Fitting ideal from Smith form against the characteristic polynomial
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for i in 0..100 {
        let q = [2u32, 3, 4, 5][i % 4];
        let dim = rng.gen_range(1..=6);
        let m = TModule::random(fq(q), dim, &mut rng);
        ensure(m.fitting_smith() == m.fitting_det(), || format!("module {i}: Smith and det disagree"))?;
    }
    // exp coefficient recursion against 1/D_i
    for (q, imax) in [(2u32, 8usize), (3, 8)] {
        let f = fq(q);
        let e = DrinfeldModule::carlitz(f).exp_coefficients(imax);
        for i in 0..=imax {
            ensure(e.coeffs()[i] == RatFunc::new(FqPoly::one(f), carlitz_d(f, i)).unwrap(), || format!("e_{i} for q={q}"))?;
        }
    }
    // prime splitting via the order of p mod f against factoring m mod p
    let field = FunctionField::cyclotomic(fq(2), &poly(2, "t^5+t^2+1")).map_err(err)?;
    let mut primes = 0;
    for deg in 1..=4 {
        for p in monic_irreducibles(&fq(2), deg) {
            let by_factor = field.split_prime(&p).map_err(err)?;
            let by_order = field.split_prime_by_order(&p).map_err(err)?.ok_or("not cyclotomic")?;
            ensure(by_factor == by_order, || format!("splitting of {p}"))?;
            primes += 1;
        }
    }
    Ok(format!("Euler/direct N<=8,6; Smith/det x100; exp/D_i i<=8; split_prime x{primes}"))
}

fn criterion_6() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let f2 = fq(2);
    let f3 = fq(3);
    // functional equation exp(t lambda) = phi_t(exp(lambda))
    let modules = [
        (DrinfeldModule::carlitz(f2), 12usize, -2i64),
        (DrinfeldModule::carlitz(f3), 6, -2),
        (DrinfeldModule::new(f2, vec![FqPoly::one(f2), FqPoly::one(f2)]).map_err(err)?, 12, -1),
    ];
    let mut checked = 0;
    for (m, imax, vmin) in &modules {
        let exp = m.exp_coefficients(*imax);
        let lf = LocalField::rational(m.fq());
        let lexp = LocalExp::new(&exp, lf, 400).map_err(err)?;
        for _ in 0..C6_SAMPLES {
            let lam = random_series(m.fq(), &mut rng, *vmin..=2, 8);
            let lhs = lexp.eval(&lam.mul(&lf.t()), C6_PREC).map_err(err)?;
            let inner = lexp.eval(&lam, C6_PREC + 40).map_err(err)?;
            let rhs = m.phi_t().apply_local(&lf, &inner, C6_PREC);
            let a = lhs.agreement(&rhs);
            ensure(a.agrees() && a.overlap >= C6_PREC, || format!("functional equation fails for rank {} at {a:?}", m.rank()))?;
            checked += 1;
        }
    }
    // exp of the period vanishes
    for (q, e, c) in [(2u32, 1u32, 1u32), (3, 2, 2)] {
        let f = fq(q);
        let lf = LocalField { fq: f, e, c };
        let exp = DrinfeldModule::carlitz(f).exp_coefficients(10);
        let lexp = LocalExp::new(&exp, lf, 400).map_err(err)?;
        let pi = carlitz_period(lf, C6_PREC + 10).map_err(err)?;
        let v = lexp.eval(&pi.value, C6_PREC).map_err(err)?;
        ensure(v.is_zero() && v.prec() >= C6_PREC, || format!("exp(pi) = {v:?} for q={q}"))?;
    }
    // log inverts exp on the ball v > -q/(q-1)
    for (f, imax) in [(f2, 9usize), (f3, 6)] {
        let exp = DrinfeldModule::carlitz(f).exp_coefficients(imax);
        let log = exp.log_coefficients(imax).map_err(err)?;
        let lf = LocalField::rational(f);
        let lexp = LocalExp::new(&exp, lf, 400).map_err(err)?;
        let llog = LocalLog::new(&exp, &log, lf, 400).map_err(err)?;
        for _ in 0..C6_SAMPLES {
            let x = random_series(f, &mut rng, -1..=3, 8);
            let back = llog.eval(&lexp.eval(&x, C6_PREC).map_err(err)?, C6_PREC).map_err(err)?;
            let a = back.agreement(&x);
            ensure(a.agrees() && a.overlap >= C6_PREC, || format!("log(exp(x)) != x at {a:?}"))?;
        }
    }
    // exp_preimage round trip, rechecked at twice the solving precision
    let exp = DrinfeldModule::carlitz(f2).exp_coefficients(12);
    let lexp = LocalExp::new(&exp, LocalField::rational(f2), 400).map_err(err)?;
    let (lo, hi, cod) = (-1i64, 20i64, 21i64);
    for _ in 0..C6_SAMPLES {
        let lam = random_series(f2, &mut rng, lo..=5, 12).truncate(hi + 1).cut_exact(hi + 1);
        let target = lexp.eval(&lam, 2 * cod).map_err(err)?;
        let sol = exp_preimage_window(&lexp, &target, lo, hi, cod).map_err(err)?.ok_or("no preimage")?;
        let again = lexp.eval(&sol.lambda, 2 * cod).map_err(err)?;
        let a = again.agreement(&target);
        ensure(sol.kernel.is_empty() && a.agrees() && a.overlap >= 2 * cod, || format!("round trip {a:?}"))?;
    }
    Ok(format!("functional equation x{checked}; exp(pi) = O(t^-{C6_PREC}); log o exp = id; preimage round trips to O(t^-{})", 2 * cod))
}

fn criterion_7() -> Outcome {
    let mut lines = Vec::new();
    for f in ["t^2+t+1", "t^3+t+1"] {
        let field = FieldSpec::modulus(2, f).build().map_err(err)?;
        let l = lattice_stage(&field, &LatticeConfig::default()).map_err(err)?;
        ensure(l.torsion_point_in_units == Some(true), || format!("lambda_f not in U_R for f = {f}"))?;
        lines.push(format!("f = {f}"));
    }
    Ok(format!("lambda_f in U_R for {}", lines.join(", ")))
}

#[test]
fn acceptance() {
    let (c3, c4) = criterion_3_and_4();
    let results = [
        ("1 zeta of k[t] equals log(1)", criterion_1()),
        ("2 degree-31 cyclotomic field", criterion_2()),
        ("3 valuation identities", c3),
        ("4 rank formulas", c4),
        ("5 oracle equivalences", criterion_5()),
        ("6 analytic invariants", criterion_6()),
        ("7 torsion generator is a unit", criterion_7()),
    ];
    // written to the raw handle so the lines survive the harness's capture
    let mut out = std::io::stdout().lock();
    let mut failed = 0;
    for (name, r) in &results {
        let _ = match r {
            Ok(detail) => writeln!(out, "PASS [{name}] {detail}"),
            Err(e) => {
                failed += 1;
                writeln!(out, "FAIL [{name}] {e}")
            }
        };
    }
    drop(out);
    assert_eq!(failed, 0, "{failed} acceptance criteria failed");
}
