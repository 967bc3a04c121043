//! Drinfeld modules over A = F_q[T]: finite-field and polynomial arithmetic,
//! twisted polynomials, torsion and Frobenius matrices, exact counting in
//! GL(r, F_q), and finite-level Haar-measure experiments.

pub mod algebra;
pub mod drinfeld;
pub mod error;
pub mod gl;
pub mod lab;
pub mod torsion;

pub use algebra::field::{canonical_field, ExtField, FieldElem, Fq};
pub use algebra::ideal::PrimeIdeal;
pub use algebra::matrix::{Matrix, RingMatrix};
pub use algebra::poly::{irreducibles, irreducibles_up_to, APoly, PolyRing};
pub use algebra::quotient::{Crt, QuotElem, QuotRing};
pub use algebra::ring::{FqAlgebra, Ring};
pub use drinfeld::{DrinfeldModule, FiniteModule, GenericModule, ModuleSpec, TwistedPoly};
pub use error::{Error, Result};
pub use gl::{fmt_rat, rat_to_f64, Method};
