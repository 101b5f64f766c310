//! Exact linear rational Koopman eigenfunctions for planar quadratic ODEs.
//!
//! The crate decides whether a quadratic system
//!
//! ```text
//! dx/dt = a1 x + a2 y + a3 x² + a4 xy + a5 y²
//! dy/dt = b1 x + b2 y + b3 x² + b4 xy + b5 y²
//! ```
//!
//! belongs to one of the two families (L and X) that carry two independent
//! eigenfunctions of the form `(c0 + c1 x + c2 y)/(d0 + d1 x + d2 y)`,
//! computes those eigenfunctions exactly in `Q(√D)`, and inverts them into a
//! closed-form solution `x(t), y(t)`. An adaptive Runge–Kutta integrator
//! serves as an independent numerical check.
//!
//! ```
//! use koopman_rational::{catalog, eigensolver, family};
//!
//! let ode = catalog::l_example().ode;
//! assert!(family::classify(&ode).unwrap().in_l);
//! let [p1, p2] = eigensolver::eigenpairs_l(&ode).unwrap();
//! assert!(eigensolver::verify_eigenpair(&ode, &p1).is_zero());
//! assert!(eigensolver::independent(&p1, &p2));
//! ```
//!
//! ## Feature flags
//!
//! - `parallel` (default): batch operations in [`batch`] and trajectory
//!   evaluation fan out over rayon. Without it every path runs sequentially.

pub mod batch;
pub mod catalog;
pub mod eigenfunction;
pub mod eigensolver;
pub mod error;
pub mod exact;
pub mod family;
pub mod integrate;
pub mod ode;
pub mod poly;
pub mod sample;
pub mod scalar;
pub mod solution;
pub mod verify;

pub use eigenfunction::{Eigenpair, RationalEigenfunction};
pub use error::{Error, Result};
pub use exact::{ExactRational, QuadExt};
pub use family::{Family, FamilyMembership};
pub use ode::QuadraticODE;
pub use poly::{BivariatePoly, ResidualVector};
pub use scalar::Scalar;
pub use solution::{ClosedFormSolution, InitialCondition, TrajectorySample};
