//! Finite k[t]-modules given as an F_q-vector space with a t-action matrix.
//!
//! The Fitting ideal of such a module is generated by `det(tI - T)`; the
//! Smith form of `tI - T` gives the elementary divisor decomposition.

use rand::Rng;

use super::fq::Fq;
use super::matrix::FqMatrix;
use super::poly::FqPoly;
use super::polymat::{PolyMatrix, SmithForm};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TModule {
    action: FqMatrix,
}

impl TModule {
    /// `action` is the matrix of multiplication by t (acting on column vectors).
    pub fn new(action: FqMatrix) -> Self {
        assert_eq!(action.rows(), action.cols(), "t-action must be square");
        TModule { action }
    }

    /// A module with uniformly random t-action.
    pub fn random<R: Rng>(fq: Fq, dim: usize, rng: &mut R) -> Self {
        let rows: Vec<Vec<u32>> = (0..dim).map(|_| (0..dim).map(|_| rng.gen_range(0..fq.q())).collect()).collect();
        TModule::new(FqMatrix::from_rows(fq, dim, &rows).unwrap())
    }

    pub fn fq(&self) -> Fq {
        self.action.fq()
    }

    pub fn dim(&self) -> usize {
        self.action.rows()
    }

    pub fn action(&self) -> &FqMatrix {
        &self.action
    }

    /// Monic generator of the Fitting ideal, via a determinant.
    pub fn fitting_det(&self) -> FqPoly {
        PolyMatrix::char_matrix(&self.action).det().expect("square")
    }

    /// Elementary divisors of the module.
    pub fn smith(&self) -> SmithForm {
        PolyMatrix::char_matrix(&self.action).smith_form()
    }

    /// Monic generator of the Fitting ideal, via the Smith form.
    pub fn fitting_smith(&self) -> FqPoly {
        self.smith().product(self.fq())
    }

    /// Non-unit invariant factors: `M ~ prod k[t]/(d_i)`.
    pub fn invariant_factors(&self) -> Vec<FqPoly> {
        self.smith().invariants.into_iter().filter(|d| !d.is_constant()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn fitting_routes_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for q in [2u32, 3, 4] {
            let fq = Fq::new(q).unwrap();
            for dim in 1..6 {
                let m = TModule::random(fq, dim, &mut rng);
                let f = m.fitting_det();
                assert_eq!(f.degree(), dim as i64);
                assert_eq!(m.fitting_smith(), f);
                let deg: i64 = m.invariant_factors().iter().map(|d| d.degree()).sum();
                assert_eq!(deg, dim as i64);
            }
        }
    }

    #[test]
    fn cyclic_module() {
        // k[t]/(t^2+1) over F_3 with companion matrix
        let f3 = Fq::new(3).unwrap();
        let c = FqMatrix::from_rows(f3, 2, &[vec![0, 2], vec![1, 0]]).unwrap();
        let m = TModule::new(c);
        assert_eq!(m.invariant_factors(), vec![FqPoly::from_ints(f3, &[1, 0, 1])]);
    }
}
