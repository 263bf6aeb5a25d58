//! Exact commutative algebra: scalars, polynomials, Gröbner bases,
//! presented algebras and linear systems over them.

pub mod algebra;
pub mod groebner;
pub mod linear;
pub mod poly;
pub mod scalar;

pub use algebra::{groebner_basis, substitute, Algebra, AlgebraElement, AlgebraMap, MapReport, Matrix, PresentedAlgebra};
pub use groebner::Budget;
pub use linear::{syzygies, Solver};
pub use poly::{Monomial, MonomialOrder, OrderKind, Poly, PolyRing};
pub use scalar::{Field, Scalar};
