//! Verification toolkit for hyperbolic homogeneous polynomials in three real
//! variables and the special homogeneous surfaces cut out by their level sets.
//!
//! Everything upstream of [`geometry`] is exact rational arithmetic. Floats
//! only appear where square roots are unavoidable (orthonormal frames, the
//! numerical curvature oracle).

pub mod catalog;
pub mod exact_linalg;
pub mod geometry;
pub mod hyperbolic;
pub mod polyring;
pub mod rational;
pub mod symmetry;

pub use exact_linalg::{Inertia, Matrix, RationalMatrix};
pub use polyring::{FloatPoly, Homogeneous, HomogeneousPoly, Monomial, RationalPoint, RationalVector};
pub use rational::Rational;
