//! Exact arithmetic for Drinfeld modules over function fields: special
//! values of Goss zeta functions, unit lattices, regulators and class modules.

pub mod algebra;
pub mod drinfeld;
pub mod field;
pub mod lattice;
pub mod verify;
pub mod zeta;

pub use algebra::fq::Fq;
pub use algebra::laurent::{Laurent, LocalField, EXACT};
pub use algebra::poly::FqPoly;
pub use algebra::ratfunc::RatFunc;
