//! The finite-dimensional space `Q = K_oo / (R + B_P)`, where `B_P` is the
//! ball `{y : v_u(y_v) >= P at every place}`, and the map
//! `Psi : lambda -> exp(lambda) mod (R + B_P)` on windows of local monomials.
//!
//! `K_oo / R` is identified with the fractional parts of power-basis
//! coordinates. Once the digits `s^1 .. s^(S0-1)` are kept, everything
//! deeper already lies in the image of `B_P`, so `Q` is that digit space
//! modulo the images of the monomials `u_v^j`, `j >= P`.

use crate::algebra::laurent::Laurent;
use crate::algebra::matrix::FqMatrix;
use crate::algebra::poly::FqPoly;
use crate::algebra::reducer::{Insertion, Reducer};
use crate::drinfeld::DrinfeldModule;
use crate::field::RElem;

use super::geometry::{Geometry, SeriesBank};
use super::LatticeError;

/// An element of `ker Psi` on the current window, with the part of
/// `exp(bar)` in the ball that the relation exhibited.
#[derive(Clone, Debug)]
pub struct KernelVector {
    /// Level in units of `1/lcm(e_v)`; `t` raises it by `lcm`.
    pub level: i64,
    /// Exact window representative, one Laurent polynomial per place.
    pub bar: Vec<Laurent>,
    /// `b` with `exp(bar) - b` congruent to an element of R modulo deeper terms.
    pub ball_part: Vec<Laurent>,
}

#[derive(Clone, Debug)]
pub struct Quotient {
    pub ball: i64,
    pub s0: i64,
    pub width: usize,
    pub reducer: Reducer,
    ball_cols: Vec<(usize, i64)>,
    psi_cols: Vec<(usize, i64)>,
    pub kernel: Vec<KernelVector>,
    /// Highest column level inserted so far.
    pub top: i64,
    ball_rank: usize,
}

impl Quotient {
    /// `Q` for the ball `B_ball`, before any `Psi` column is added.
    pub fn new(geo: &Geometry, ball: i64, margin: i64) -> Result<Self, LatticeError> {
        let d = geo.degree();
        let s0 = geo
            .places
            .iter()
            .map(|p| (ball - p.power_min + p.e() - 1).div_euclid(p.e()))
            .max()
            .unwrap_or(1)
            .max(1)
            + 1
            + margin.max(0);
        let width = d * (s0 - 1) as usize;
        let mut ball_cols = Vec::new();
        for (v, p) in geo.places.iter().enumerate() {
            let hi = p.e() * s0 - p.dual_min;
            for j in ball..hi {
                ball_cols.push((v, j));
            }
        }
        let mut q = Quotient {
            ball,
            s0,
            width,
            reducer: Reducer::new(geo.fq(), width, ball_cols.len()),
            ball_cols: Vec::new(),
            psi_cols: Vec::new(),
            kernel: Vec::new(),
            top: i64::MIN,
            ball_rank: 0,
        };
        for (k, &(v, j)) in ball_cols.iter().enumerate() {
            let z = Laurent::monomial(geo.fq(), 1, j);
            let vec = q.fractional(geo, v, &z)?;
            q.reducer.insert(&vec, Some(k));
        }
        q.ball_cols = ball_cols;
        q.ball_rank = q.reducer.rank();
        Ok(q)
    }

    /// Digits `s^1..s^(S0-1)` of the coordinates of a vector supported at one place.
    pub fn fractional(&self, geo: &Geometry, v: usize, z: &Laurent) -> Result<Vec<u32>, LatticeError> {
        let mut parts: Vec<Option<&Laurent>> = vec![None; geo.places.len()];
        parts[v] = Some(z);
        Ok(geo.coords(&parts, 1, self.s0)?.concat())
    }

    /// Precision at which exp must be known for [`Self::fractional`].
    pub fn exp_prec(&self, geo: &Geometry, v: usize) -> i64 {
        let p = &geo.places[v];
        p.e() * self.s0 - p.dual_min
    }

    /// `dim Q`.
    pub fn dim(&self) -> usize {
        self.width - self.ball_rank
    }

    /// Dimension of `Q / Psi(window)`.
    pub fn cokernel_dim(&self) -> usize {
        self.width - self.reducer.rank()
    }

    /// Add every `Psi` column of level at most `top` (units of `1/lcm`).
    pub fn extend_window(&mut self, geo: &Geometry, bank: &mut SeriesBank, top: i64) -> Result<(), LatticeError> {
        let fq = geo.fq();
        let mut cols: Vec<(i64, usize, i64)> = Vec::new();
        for (v, p) in geo.places.iter().enumerate() {
            let step = geo.lcm / p.e();
            // level(j) = -j * step <= top  <=>  j >= -top / step
            let jlo = (-top).div_euclid(step) + if (-top).rem_euclid(step) == 0 { 0 } else { 1 };
            for j in jlo..self.ball {
                let lev = -j * step;
                if lev > self.top {
                    cols.push((lev, v, j));
                }
            }
        }
        cols.sort();
        let nb = self.ball_cols.len();
        self.reducer.grow_tags(nb + self.psi_cols.len() + cols.len());
        for (lev, v, j) in cols {
            let lf = geo.places[v].lf();
            let z = bank.exp(v, lf, &Laurent::monomial(fq, 1, j), self.exp_prec(geo, v))?;
            let vec = self.fractional(geo, v, &z)?;
            let tag = nb + self.psi_cols.len();
            self.psi_cols.push((v, j));
            if let Insertion::Dependent(rel) = self.reducer.insert(&vec, Some(tag)) {
                self.kernel.push(self.kernel_vector(geo, lev, &rel));
            }
        }
        self.top = self.top.max(top);
        Ok(())
    }

    fn kernel_vector(&self, geo: &Geometry, level: i64, rel: &[u32]) -> KernelVector {
        let fq = geo.fq();
        let n = geo.places.len();
        let mut bar = vec![Laurent::zero(fq); n];
        let mut ball_part = vec![Laurent::zero(fq); n];
        let nb = self.ball_cols.len();
        for (k, &c) in rel.iter().enumerate() {
            if c == 0 {
                continue;
            }
            if k < nb {
                let (v, j) = self.ball_cols[k];
                ball_part[v] = ball_part[v].add(&Laurent::monomial(fq, fq.neg(c), j));
            } else if let Some(&(v, j)) = self.psi_cols.get(k - nb) {
                bar[v] = bar[v].add(&Laurent::monomial(fq, c, j));
            }
        }
        KernelVector { level, bar, ball_part }
    }

    /// Coordinates `(i, k)` of the complement of `R + B_P + Psi(window)`:
    /// the class of `t^(-k) x^i` for each returned pair is a basis of the cokernel.
    pub fn complement(&self, d: usize) -> Vec<(usize, i64)> {
        let per = (self.s0 - 1) as usize;
        (0..self.width)
            .filter(|&idx| !self.reducer.is_pivot(idx))
            .map(|idx| (idx / per, (idx % per) as i64 + 1))
            .inspect(|&(i, _)| debug_assert!(i < d))
            .collect()
    }

    /// Matrix of `phi_t` on the cokernel in the basis [`Self::complement`].
    pub fn t_action(&self, geo: &Geometry, module: &DrinfeldModule) -> Result<FqMatrix, LatticeError> {
        let fq = geo.fq();
        let d = geo.degree();
        let field = &geo.field;
        let basis = self.complement(d);
        let index_of = |idx: usize| basis.iter().position(|&(i, k)| i * (self.s0 - 1) as usize + (k - 1) as usize == idx);
        // phi_t = t + sum_j a_j tau^j
        let mut coeffs = vec![FqPoly::var(fq)];
        coeffs.extend(module.coefficients().iter().cloned());
        let q = fq.q() as usize;
        let max_pow = (d - 1) * q.pow((coeffs.len() - 1) as u32);
        let mut powers: Vec<RElem> = vec![field.one()];
        let x = field.reduce(vec![FqPoly::zero(fq), FqPoly::one(fq)]);
        for n in 1..=max_pow {
            powers.push(field.mul(&powers[n - 1], &x));
        }
        let per = (self.s0 - 1) as usize;
        let mut mat = FqMatrix::zeros(fq, basis.len(), basis.len());
        for (col, &(i, k)) in basis.iter().enumerate() {
            let mut vec = vec![0u32; self.width];
            for (j, a) in coeffs.iter().enumerate() {
                let qj = q.pow(j as u32);
                let shift = k * qj as i64;
                let xp = &powers[i * qj];
                for (i2, c) in xp.iter().enumerate() {
                    let prod = a * c;
                    // term t^(-shift) prod(t) x^i2: digit s^m has coefficient prod[shift - m]
                    for m in 1..self.s0 {
                        let deg = shift - m;
                        if deg >= 0 && (deg as usize) < prod.coeffs().len() {
                            let slot = &mut vec[i2 * per + (m - 1) as usize];
                            *slot = fq.add(*slot, prod.coeff(deg as usize));
                        }
                    }
                }
            }
            let rem = self.reducer.reduce(&vec);
            for (idx, &c) in rem.iter().enumerate() {
                if c != 0 {
                    let row = index_of(idx).ok_or_else(|| LatticeError::Inconsistent("remainder on a pivot coordinate".into()))?;
                    mat.set(row, col, c);
                }
            }
        }
        Ok(mat)
    }
}
