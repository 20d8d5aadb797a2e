//! Exact scalars, piecewise quadratics and affine-inequality checking.

mod affine;
pub mod linalg;
mod poly;
mod polytope;
mod rational;

pub use affine::{AffineForm, Assignment};
pub use poly::{PiecewiseQuadratic, QuadPoly};
pub use polytope::{
    render_assignment, verify_affine, ClaimRelation, Constraint, Polytope, Relation, Verdict,
    MAX_DIMENSION,
};
pub use rational::{rat_reduce, Rational};

/// Exact integral of a piecewise quadratic over its domain.
pub fn integrate(pw: &PiecewiseQuadratic) -> Rational {
    pw.integrate()
}
