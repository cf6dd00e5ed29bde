//! Reduced k[t]-bases of lattices in `K_oo`, built from the graded kernel
//! of `Psi`, and everything computed from such a basis: exact lifts,
//! coordinates of lattice members and the regulator.
//!
//! The level of a nonzero `y` is `max_v -v_u(y_v) lcm / e_v`. A basis is
//! reduced when the leading coefficients of its members (and of their
//! t-multiples landing on a common level) are linearly independent; then
//! `Lambda` meets each window `{level <= L}` exactly in the span of the
//! multiples `t^k lambda_i` of level at most L.

use crate::algebra::fq::Fq;
use crate::algebra::laurent::Laurent;
use crate::algebra::lmatrix;
use crate::algebra::matrix::FqMatrix;
use crate::algebra::poly::FqPoly;
use crate::algebra::reducer::{Insertion, Reducer};
use crate::field::RElem;

use super::geometry::{local_components, Geometry, SeriesBank};
use super::quotient::KernelVector;
use super::LatticeError;

/// A basis member of `exp^-1(R)` together with its image.
#[derive(Clone, Debug)]
pub struct LatticeVector {
    pub level: i64,
    /// The vector itself, one series per place.
    pub lambda: Vec<Laurent>,
    /// `exp(lambda)`, an element of R.
    pub image: RElem,
}

/// `c^k` for any integer k.
fn cpow(fq: Fq, c: u32, k: i64) -> u32 {
    if k >= 0 {
        fq.pow(c, k as u64)
    } else {
        fq.inv(fq.pow(c, (-k) as u64)).unwrap()
    }
}

/// Level of a local vector, ignoring components that vanish to their precision.
pub fn level_of(geo: &Geometry, y: &[Laurent]) -> Option<i64> {
    geo.places
        .iter()
        .zip(y)
        .filter_map(|(p, z)| z.valuation().map(|v| -v * (geo.lcm / p.e())))
        .max()
}

/// Leading coefficients of `t^k y` at level `level + k lcm`, where `level`
/// is the level of y: one entry per place, zero where the level is not attained.
pub fn leading(geo: &Geometry, y: &[Laurent], level: i64, k: i64) -> Vec<u32> {
    let fq = geo.fq();
    geo.places
        .iter()
        .zip(y)
        .map(|(p, z)| {
            let step = geo.lcm / p.e();
            if level % step != 0 {
                return 0;
            }
            let c = z.coeff(-level / step).unwrap_or(0);
            fq.mul(c, cpow(fq, p.lf().c, k))
        })
        .collect()
}

/// `t^k y`, exactly.
pub fn t_shift(geo: &Geometry, y: &[Laurent], k: i64) -> Vec<Laurent> {
    geo.places.iter().zip(y).map(|(p, z)| z.shift(-p.e() * k).scale(cpow(geo.fq(), p.lf().c, k))).collect()
}

/// Result of the greedy selection.
#[derive(Clone, Debug)]
pub struct Selection {
    /// Indices into the kernel list, in order of increasing level.
    pub chosen: Vec<usize>,
    /// Highest level whose dimension count was checked.
    pub checked_to: i64,
}

/// Pick a reduced basis among kernel vectors sorted by level. Every level
/// up to `top` is checked: the kernel vectors of that level must be
/// accounted for by the chosen vectors and their t-multiples.
pub fn select(geo: &Geometry, kernel: &[KernelVector], top: i64, want: usize) -> Result<Selection, LatticeError> {
    let n = geo.places.len();
    let mut chosen: Vec<usize> = Vec::new();
    let mut levels: Vec<i64> = kernel.iter().map(|k| k.level).collect();
    levels.dedup();
    let lcm = geo.lcm;
    let lo = kernel.first().map_or(0, |k| k.level);
    for level in lo..=top {
        let cands: Vec<usize> = (0..kernel.len()).filter(|&i| kernel[i].level == level).collect();
        let mut red = Reducer::new(geo.fq(), n, 0);
        let mut shifted = 0usize;
        for &i in &chosen {
            let li = kernel[i].level;
            if li <= level && (level - li) % lcm == 0 {
                let lv = leading(geo, &kernel[i].bar, li, (level - li) / lcm);
                if red.insert(&lv, None) != Insertion::Independent {
                    return Err(LatticeError::Inconsistent(format!("leading coefficients dependent at level {level}")));
                }
                shifted += 1;
            }
        }
        let mut fresh = 0usize;
        for &i in &cands {
            let lv = leading(geo, &kernel[i].bar, level, 0);
            if red.insert(&lv, None) == Insertion::Independent {
                chosen.push(i);
                fresh += 1;
            }
        }
        if cands.len() != shifted + fresh {
            return Err(LatticeError::Inconsistent(format!(
                "level {level}: {} kernel vectors but {} expected from the basis",
                cands.len(),
                shifted + fresh
            )));
        }
        if chosen.len() > want {
            return Err(LatticeError::Inconsistent(format!("more than {want} independent lattice vectors")));
        }
    }
    Ok(Selection { chosen, checked_to: top })
}

/// Turn a kernel vector into an exact member of `exp^-1(R)`: with
/// `y = exp(bar)`, the polynomial part `xi` of the coordinates of `y - b`
/// is the unique element of R with `y - xi` in the ball, and
/// `lambda = bar - log(y - xi)`.
pub fn lift(
    geo: &Geometry,
    bank: &mut SeriesBank,
    kv: &KernelVector,
    ball: i64,
    prec: i64,
) -> Result<LatticeVector, LatticeError> {
    let mut y = Vec::with_capacity(geo.places.len());
    for (v, p) in geo.places.iter().enumerate() {
        y.push(bank.exp(v, p.lf(), &kv.bar[v], prec)?);
    }
    let z: Vec<Laurent> = y.iter().zip(&kv.ball_part).map(|(a, b)| a.sub(b)).collect();
    let lo = geo
        .places
        .iter()
        .zip(&z)
        .map(|(p, zv)| (zv.val_bound().min(0) + p.dual_min).div_euclid(p.e()) - 1)
        .min()
        .unwrap_or(0);
    let refs: Vec<Option<&Laurent>> = z.iter().map(Some).collect();
    let image = geo.polynomial_part(&refs, lo)?;
    let emb = geo.embed(&image, prec);
    let mut lambda = Vec::with_capacity(geo.places.len());
    for (v, p) in geo.places.iter().enumerate() {
        let b = y[v].sub(&emb[v]);
        if let Some(vb) = b.valuation() {
            if vb < ball {
                return Err(LatticeError::Inconsistent(format!(
                    "lift residual has valuation {vb} below the ball {ball}"
                )));
            }
        }
        if b.prec() < ball + 5 {
            return Err(LatticeError::Precision(format!("lift residual known only to O(u^{})", b.prec())));
        }
        let l = bank.log(v, p.lf(), &b, prec)?;
        lambda.push(kv.bar[v].sub(&l).truncate(prec));
    }
    Ok(LatticeVector { level: kv.level, lambda, image })
}

/// Coordinates of `mu` in a reduced basis by descending division on
/// leading terms; `None` when `mu` is not in the span. Residues below the
/// ball must vanish through `cert`.
pub fn coordinates(
    geo: &Geometry,
    basis: &[LatticeVector],
    mu: &[Laurent],
    cert: i64,
) -> Result<Option<Vec<FqPoly>>, LatticeError> {
    let fq = geo.fq();
    let lcm = geo.lcm;
    let mut rest: Vec<Laurent> = mu.to_vec();
    let mut coords = vec![FqPoly::zero(fq); basis.len()];
    let mut guard = 0usize;
    while let Some(level) = level_of(geo, &rest) {
        if level < 0 {
            // a lattice member inside the unit ball is zero
            if rest.iter().any(|r| r.valuation().is_some_and(|v| v < cert)) {
                return Ok(None);
            }
            break;
        }
        guard += 1;
        if guard > 10_000 {
            return Err(LatticeError::Inconsistent("division did not terminate".into()));
        }
        let target = leading(geo, &rest, level, 0);
        let usable: Vec<(usize, i64)> = basis
            .iter()
            .enumerate()
            .filter(|(_, b)| b.level <= level && (level - b.level) % lcm == 0)
            .map(|(i, b)| (i, (level - b.level) / lcm))
            .collect();
        if usable.is_empty() {
            return Ok(None);
        }
        let mut m = FqMatrix::zeros(fq, geo.places.len(), usable.len());
        for (col, &(i, k)) in usable.iter().enumerate() {
            for (row, c) in leading(geo, &basis[i].lambda, basis[i].level, k).into_iter().enumerate() {
                m.set(row, col, c);
            }
        }
        let Some(sol) = m.solve(&target) else { return Ok(None) };
        for (&(i, k), &a) in usable.iter().zip(&sol) {
            if a == 0 {
                continue;
            }
            let shifted = t_shift(geo, &basis[i].lambda, k);
            for (r, s) in rest.iter_mut().zip(&shifted) {
                *r = r.sub(&s.scale(a));
            }
            coords[i] = &coords[i] + &FqPoly::monomial(fq, a, k as usize);
        }
    }
    Ok(Some(coords))
}

/// Rows of k((1/t))-coordinates along the local bases `u_v^a`, `a < e_v`:
/// entry `[(v,a)][j]` is component a of `vectors[j]` at place v.
fn component_matrix(geo: &Geometry, vectors: &[Vec<Laurent>]) -> Vec<Vec<Laurent>> {
    let d = geo.degree();
    let mut rows = vec![Vec::with_capacity(vectors.len()); d];
    for vec in vectors {
        let mut r = 0usize;
        for (p, z) in geo.places.iter().zip(vec) {
            for comp in local_components(z, p.lf()) {
                rows[r].push(comp);
                r += 1;
            }
        }
    }
    rows
}

/// The regulator: the determinant of the coordinates of the basis in the
/// power basis, made monic. `cap` bounds intermediate precision (in
/// powers of 1/t).
pub fn regulator(geo: &Geometry, basis: &[LatticeVector], prec: i64, cap: i64) -> Result<Laurent, LatticeError> {
    let d = geo.degree();
    if basis.len() != d {
        return Err(LatticeError::Inconsistent(format!("basis has {} members, degree is {d}", basis.len())));
    }
    let lam: Vec<Vec<Laurent>> = basis.iter().map(|b| b.lambda.clone()).collect();
    let powers: Vec<Vec<Laurent>> = (0..d)
        .map(|i| {
            geo.places
                .iter()
                .map(|p| {
                    let x = &p.place.x;
                    let mut acc = Laurent::one(geo.fq());
                    for _ in 0..i {
                        acc = acc.mul_capped(x, prec);
                    }
                    acc
                })
                .collect()
        })
        .collect();
    let dl = lmatrix::det(&component_matrix(geo, &lam), cap)?;
    let da = lmatrix::det(&component_matrix(geo, &powers), cap)?;
    if dl.is_zero() {
        return Err(LatticeError::RegulatorZero(dl.prec()));
    }
    let reg = dl.div(&da, cap)?;
    let lead = geo.fq().inv(reg.lead()).unwrap();
    Ok(reg.scale(lead))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cpow_negative() {
        let f5 = Fq::new(5).unwrap();
        assert_eq!(f5.mul(cpow(f5, 2, -3), cpow(f5, 2, 3)), 1);
    }
}
