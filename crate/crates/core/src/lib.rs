//! Symbolic engine for the class of wave equations `u_tt = f(x,u) u_xx + g(x,u)`:
//! Lie symmetries, admissible point transformations, the equivalence group and
//! a verified catalog of the group classification.

pub mod catalog;
pub mod deteq;
pub mod equiv;
pub mod error;
pub mod expr;
pub mod jets;
pub mod liealg;
pub mod linalg;
pub mod ptrans;
pub mod solver;

pub use error::{Error, Result};
pub use deteq::{is_symmetry, ClassMember};
pub use expr::{ex, parse, Expr, Rational};
pub use jets::{commutator, prolong2, VectorField};
pub use ptrans::{pushforward_theta, verify_admissible, AdmissibleTransformation, PointTransformation};
