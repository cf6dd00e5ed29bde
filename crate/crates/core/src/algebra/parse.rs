//! Text parsing of polynomials in one or two variables over F_q.
//!
//! Grammar: a sum of terms separated by `+`/`-`, each term a `*`-product
//! (or juxtaposition) of integers, the field generator `g` / `g^k`, and
//! variable powers `t`, `t^k`. Integers are reduced mod p.

use std::collections::BTreeMap;

use super::fq::Fq;
use super::poly::FqPoly;
use super::AlgebraError;

fn err(msg: impl Into<String>) -> AlgebraError {
    AlgebraError::Parse(msg.into())
}

/// Parse a sum of monomials in the listed variables; returns exponent
/// vectors mapped to coefficients.
fn parse_terms(fq: Fq, s: &str, vars: &[&str]) -> Result<BTreeMap<Vec<u64>, u32>, AlgebraError> {
    let src: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if src.is_empty() {
        return Err(err("empty polynomial"));
    }
    let bytes = src.as_bytes();
    let mut out: BTreeMap<Vec<u64>, u32> = BTreeMap::new();
    let mut i = 0;
    while i < bytes.len() {
        let mut coeff = 1u32;
        match bytes[i] {
            b'+' => i += 1,
            b'-' => {
                coeff = fq.neg(1);
                i += 1;
            }
            _ if i > 0 => return Err(err(format!("expected + or - at position {i} in {s:?}"))),
            _ => {}
        }
        let mut exps = vec![0u64; vars.len()];
        let mut factors = 0;
        while i < bytes.len() && bytes[i] != b'+' && bytes[i] != b'-' {
            if bytes[i] == b'*' {
                i += 1;
                continue;
            }
            factors += 1;
            if bytes[i].is_ascii_digit() {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let n: i64 = src[start..i].parse().map_err(|_| err(format!("bad integer in {s:?}")))?;
                coeff = fq.mul(coeff, fq.from_int(n));
                continue;
            }
            let rest = &src[i..];
            let (name_len, var_idx) = if let Some(k) = vars.iter().position(|v| rest.starts_with(v)) {
                (vars[k].len(), Some(k))
            } else if rest.starts_with('g') {
                (1, None)
            } else {
                return Err(err(format!("unexpected {:?} in {s:?}", &rest[..1])));
            };
            i += name_len;
            let mut e = 1u64;
            if i < bytes.len() && bytes[i] == b'^' {
                i += 1;
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                e = src[start..i].parse().map_err(|_| err(format!("bad exponent in {s:?}")))?;
            }
            match var_idx {
                Some(k) => exps[k] += e,
                None => coeff = fq.mul(coeff, fq.pow(fq.generator(), e)),
            }
        }
        if factors == 0 {
            return Err(err(format!("empty term in {s:?}")));
        }
        let slot = out.entry(exps).or_insert(0);
        *slot = fq.add(*slot, coeff);
    }
    Ok(out)
}

/// Parse a polynomial in the variable `var`.
pub fn parse_poly(fq: Fq, s: &str, var: &str) -> Result<FqPoly, AlgebraError> {
    let terms = parse_terms(fq, s, &[var])?;
    let deg = terms.keys().map(|e| e[0]).max().unwrap_or(0) as usize;
    let mut coeffs = vec![0u32; deg + 1];
    for (e, c) in terms {
        coeffs[e[0] as usize] = fq.add(coeffs[e[0] as usize], c);
    }
    Ok(FqPoly::new(fq, coeffs))
}

/// Parse a polynomial in `y` with coefficients in k[`t`]; entry `i` of the
/// result is the coefficient of `y^i`.
pub fn parse_bivariate(fq: Fq, s: &str, t: &str, y: &str) -> Result<Vec<FqPoly>, AlgebraError> {
    let terms = parse_terms(fq, s, &[t, y])?;
    let dy = terms.keys().map(|e| e[1]).max().unwrap_or(0) as usize;
    let mut rows: Vec<Vec<u32>> = vec![Vec::new(); dy + 1];
    for (e, c) in terms {
        let row = &mut rows[e[1] as usize];
        let dt = e[0] as usize;
        if row.len() <= dt {
            row.resize(dt + 1, 0);
        }
        row[dt] = fq.add(row[dt], c);
    }
    Ok(rows.into_iter().map(|r| FqPoly::new(fq, r)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_display_output() {
        let f2 = Fq::new(2).unwrap();
        let p = parse_poly(f2, "t^5 + t^2 + 1", "t").unwrap();
        assert_eq!(p, FqPoly::from_ints(f2, &[1, 0, 1, 0, 0, 1]));
        assert_eq!(parse_poly(f2, &p.to_string(), "t").unwrap(), p);
        let f3 = Fq::new(3).unwrap();
        let p = parse_poly(f3, "-t^2 + 2*t - 4", "t").unwrap();
        assert_eq!(p, FqPoly::from_ints(f3, &[2, 2, 2]));
        let f4 = Fq::new(4).unwrap();
        let p = parse_poly(f4, "g*t + g^2", "t").unwrap();
        assert_eq!(p.coeff(1), f4.generator());
        assert!(parse_poly(f2, "t^^2", "t").is_err());
        assert!(parse_poly(f2, "", "t").is_err());
        assert!(parse_poly(f2, "t + x", "t").is_err());
    }

    #[test]
    fn bivariate() {
        let f2 = Fq::new(2).unwrap();
        let rows = parse_bivariate(f2, "y^2 + y + t^3 + t*y", "t", "y").unwrap();
        assert_eq!(rows.len(), 3);
        assert_eq!(rows[0], FqPoly::from_ints(f2, &[0, 0, 0, 1]));
        assert_eq!(rows[1], FqPoly::from_ints(f2, &[1, 1]));
        assert!(rows[2].is_one());
    }
}
