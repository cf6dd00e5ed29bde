//! Periods, the unit module `U_R = exp(Lambda)`, membership of given
//! elements of R in `U_R`, and saturation of sublattices.

use serde::{Deserialize, Serialize};

use crate::algebra::factor::factor;
use crate::algebra::laurent::Laurent;
use crate::algebra::matrix::FqMatrix;
use crate::algebra::poly::FqPoly;
use crate::algebra::polymat::PolyMatrix;
use crate::algebra::reducer::Insertion;
use crate::drinfeld::carlitz_period;
use crate::field::RElem;

use super::basis;
use super::quotient::Quotient;
use super::{LatticeError, UnitLattice};

/// `U_R` as a k[t]-module: `k[t]^rank` plus torsion.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct UnitModule {
    pub rank: usize,
    /// Places carrying a period, i.e. the rank of `ker exp` in `Lambda`.
    pub period_rank: usize,
    /// `exp` of the lattice basis; they generate `U_R`.
    pub generators: Vec<Vec<String>>,
    /// Period vectors in lattice coordinates.
    pub period_coordinates: Vec<Vec<String>>,
    /// Non-unit invariant factors of `Lambda / ker exp`.
    pub torsion: Vec<String>,
}

/// Outcome of saturating a sublattice.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Saturation {
    /// Hermite basis in coordinates of the computed reduced basis.
    pub hermite: PolyMatrix,
    /// Number of vectors `mu` with `l mu` in the sublattice that were adjoined.
    pub adjoined: usize,
    /// The primes that were tested.
    pub primes: Vec<FqPoly>,
}

impl UnitLattice {
    /// Coordinates of `mu` in the computed basis, `None` if `mu` is not in its span.
    pub fn coordinates(&self, mu: &[Laurent]) -> Result<Option<Vec<FqPoly>>, LatticeError> {
        basis::coordinates(&self.geo, &self.basis, mu, self.local_prec / 2)
    }

    /// One Carlitz period vector per place where a `(q-1)`-th root of `-t` exists.
    pub fn period_vectors(&self) -> Result<Vec<Vec<Laurent>>, LatticeError> {
        if !self.module().is_carlitz() {
            return Err(LatticeError::Unsupported("periods are only computed for the Carlitz module".into()));
        }
        let fq = self.geo.fq();
        let n = self.geo.places.len();
        let mut out = Vec::new();
        for (v, p) in self.geo.places.iter().enumerate() {
            if !p.place.alpha_exists() {
                continue;
            }
            let pi = carlitz_period(p.lf(), self.local_prec)?;
            let mut vec = vec![Laurent::zero(fq); n];
            vec[v] = pi.value;
            out.push(vec);
        }
        Ok(out)
    }

    /// `U_R` with rank `d - r`, where r counts the period vectors.
    pub fn unit_module(&self) -> Result<UnitModule, LatticeError> {
        let fq = self.geo.fq();
        let d = self.degree();
        let periods = self.period_vectors()?;
        let mut rows = Vec::with_capacity(periods.len());
        for p in &periods {
            let c = self
                .coordinates(p)?
                .ok_or_else(|| LatticeError::Inconsistent("a period is not in the computed lattice".into()))?;
            rows.push(c);
        }
        let r = rows.len();
        let (invariants, rank_p) = if r == 0 {
            (Vec::new(), 0)
        } else {
            let m = PolyMatrix::from_rows(fq, rows.clone())?;
            let s = m.smith_form();
            let nz = s.invariants.iter().filter(|p| !p.is_zero()).count();
            (s.invariants, nz)
        };
        if rank_p != r {
            return Err(LatticeError::Inconsistent(format!("period vectors have rank {rank_p}, expected {r}")));
        }
        Ok(UnitModule {
            rank: d - r,
            period_rank: r,
            generators: self.basis.iter().map(|b| b.image.iter().map(|c| c.to_string()).collect()).collect(),
            period_coordinates: rows.iter().map(|row| row.iter().map(|c| c.to_string()).collect()).collect(),
            torsion: invariants.iter().filter(|p| !p.is_constant()).map(|p| p.to_string()).collect(),
        })
    }

    /// A vector `mu` with `exp(mu) = xi` at every place, searched on
    /// windows up to the configured maximum level; `None` if `xi` is not
    /// in `exp(K_oo)` as far as those windows can tell.
    pub fn preimage(&mut self, xi: &RElem) -> Result<Option<Vec<Laurent>>, LatticeError> {
        let fq = self.geo.fq();
        let ball = self.config.ball;
        let prec = self.local_prec;
        let target = self.geo.embed(xi, prec);
        let mut out = Vec::with_capacity(self.geo.places.len());
        for (v, p) in self.geo.places.clone().iter().enumerate() {
            let lf = p.lf();
            let tv = &target[v];
            let mut found = None;
            for level in 0..=self.config.max_window {
                let lo = -p.e() * level;
                let cols = (lo..ball)
                    .map(|j| self.bank.exp(v, lf, &Laurent::monomial(fq, 1, j), ball))
                    .collect::<Result<Vec<_>, _>>()?;
                let cod_lo = cols.iter().map(|c| c.val_bound()).chain([tv.val_bound(), ball]).min().unwrap();
                let rows = (ball - cod_lo) as usize;
                let mut m = FqMatrix::zeros(fq, rows, cols.len());
                for (j, c) in cols.iter().enumerate() {
                    for (r, x) in c.window(cod_lo, ball)?.into_iter().enumerate() {
                        m.set(r, j, x);
                    }
                }
                if let Some(sol) = m.solve(&tv.window(cod_lo, ball)?) {
                    found = Some(Laurent::new(fq, lo, sol, crate::algebra::laurent::EXACT));
                    break;
                }
            }
            let Some(bar) = found else { return Ok(None) };
            let y = self.bank.exp(v, lf, &bar, prec)?;
            let b = y.sub(tv);
            if b.valuation().is_some_and(|vb| vb < ball) {
                return Err(LatticeError::Inconsistent("preimage residual outside the ball".into()));
            }
            let l = self.bank.log(v, lf, &b, prec)?;
            out.push(bar.sub(&l).truncate(prec));
        }
        Ok(Some(out))
    }

    /// Whether `xi` lies in `U_R`: it has an exp-preimage, and that
    /// preimage is a member of the computed lattice.
    pub fn contains_unit(&mut self, xi: &RElem) -> Result<bool, LatticeError> {
        let Some(mu) = self.preimage(xi)? else { return Ok(false) };
        Ok(self.coordinates(&mu)?.is_some())
    }

    /// Saturate the sublattice spanned by the rows of `sub` (coordinates in
    /// the computed basis) at every prime dividing `det(sub)` and at `extra`.
    /// A class `mu` of `(1/l) L / L` lies in `Lambda` exactly when `exp(mu)`
    /// falls in `R + B_P` for a ball with `P > e deg l`, since then
    /// `l (mu - lambda)` would be a lattice member inside the unit ball.
    pub fn saturate(&mut self, sub: &PolyMatrix, extra: &[FqPoly]) -> Result<Saturation, LatticeError> {
        let fq = self.geo.fq();
        let d = self.degree();
        let mut primes: Vec<FqPoly> = Vec::new();
        let det = sub.det()?;
        if det.is_zero() {
            return Err(LatticeError::Inconsistent("sublattice is not of full rank".into()));
        }
        for p in extra.iter().chain(std::iter::once(&det)) {
            if p.is_constant() {
                continue;
            }
            for (g, _) in factor(p)? {
                if !primes.contains(&g) {
                    primes.push(g);
                }
            }
        }
        primes.sort_by(|a, b| a.cmp_canonical(b));
        let mut current = sub.clone();
        let mut adjoined = 0usize;
        for ell in &primes {
            loop {
                let new_rows = self.divisible_classes(&current, ell)?;
                if new_rows.is_empty() {
                    break;
                }
                adjoined += new_rows.len();
                let mut rows: Vec<Vec<FqPoly>> = (0..d).map(|i| current.row(i).to_vec()).collect();
                rows.extend(new_rows);
                let (h, _, _) = PolyMatrix::from_rows(fq, rows)?.hermite_form();
                current = PolyMatrix::from_rows(fq, (0..d).map(|i| h.row(i).to_vec()).collect())?;
            }
        }
        let (h, _, _) = current.hermite_form();
        Ok(Saturation { hermite: h, adjoined, primes })
    }

    /// Rows (in reduced-basis coordinates) of the elements `mu` of `(1/l) L`
    /// with `mu` in `Lambda` but not in L, one per independent class.
    fn divisible_classes(&mut self, sub: &PolyMatrix, ell: &FqPoly) -> Result<Vec<Vec<FqPoly>>, LatticeError> {
        let fq = self.geo.fq();
        let d = self.degree();
        let n = self.geo.places.len();
        let dl = ell.degree();
        let emax = self.geo.places.iter().map(|p| p.e()).max().unwrap_or(1);
        let ball = 1 + emax * dl;
        let mut q = Quotient::new(&self.geo, ball, self.config.degree_bound)?;
        let prec = self.local_prec;
        // the rows of sub as local vectors
        let vectors: Vec<Vec<Laurent>> = (0..d)
            .map(|j| {
                (0..n)
                    .map(|v| {
                        let lf = self.geo.places[v].lf();
                        (0..d).fold(Laurent::zero(fq), |acc, k| {
                            acc.add(&self.basis[k].lambda[v].mul_capped(&lf.embed_poly(sub.get(j, k)), prec))
                        })
                    })
                    .collect()
            })
            .collect();
        let inv_ell: Vec<Laurent> =
            self.geo.places.iter().map(|p| p.lf().embed_poly(ell).inv(prec + 2 * p.e() * dl)).collect::<Result<_, _>>()?;
        let mut tags = Vec::new();
        let base = q.reducer.tags();
        q.reducer.grow_tags(base + d * dl as usize);
        let mut relations = Vec::new();
        for j in 0..d {
            for a in 0..dl {
                let mut parts = Vec::with_capacity(n);
                for v in 0..n {
                    let p = &self.geo.places[v];
                    let lf = p.lf();
                    let ta = lf.embed_poly(&FqPoly::monomial(fq, 1, a as usize));
                    let mu = vectors[j][v].mul_capped(&ta, prec).mul_capped(&inv_ell[v], prec);
                    parts.push(self.bank.exp(v, lf, &mu, q.exp_prec(&self.geo, v))?);
                }
                let refs: Vec<Option<&Laurent>> = parts.iter().map(Some).collect();
                let vec = self.geo.coords(&refs, 1, q.s0)?.concat();
                let tag = base + tags.len();
                tags.push((j, a));
                if let Insertion::Dependent(rel) = q.reducer.insert(&vec, Some(tag)) {
                    relations.push(rel);
                }
            }
        }
        let mut rows = Vec::new();
        for rel in relations {
            // c_j = sum_a rel * t^a ; new vector = (c . sub) / ell
            let mut c = vec![FqPoly::zero(fq); d];
            for (k, &(j, a)) in tags.iter().enumerate() {
                let r = rel[base + k];
                if r != 0 {
                    c[j] = &c[j] + &FqPoly::monomial(fq, r, a as usize);
                }
            }
            let mut row = Vec::with_capacity(d);
            for k in 0..d {
                let s = (0..d).fold(FqPoly::zero(fq), |acc, j| &acc + &(&c[j] * sub.get(j, k)));
                let quo = s.div_exact(ell).ok_or_else(|| {
                    LatticeError::Inconsistent(format!("a class divisible by {ell} is not in the span of the computed basis"))
                })?;
                row.push(quo);
            }
            rows.push(row);
        }
        Ok(rows)
    }
}
