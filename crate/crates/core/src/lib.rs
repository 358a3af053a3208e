//! Symbolic and numeric engine for the curvature functionals of the
//! Chern-Gauss-Bonnet theorem on pseudo-Riemannian manifolds with boundary.
//!
//! The crate provides four layers:
//!
//! * [`tensor`] — signature-aware dense tensor components, the generalized
//!   Kronecker delta, and algebraic curvature tensors with their symmetry
//!   projections;
//! * [`geometry`] — chart-based metric evaluation, Levi-Civita connection
//!   and curvature through second-order forward AD, boundary-adapted
//!   frames, and the second fundamental form;
//! * [`functionals`] — the Euler form, the interior Euler-Lagrange tensor,
//!   and the boundary transgression scalar and Euler-Lagrange tensor;
//! * [`verify`] and [`quadrature`] — Gauss-Legendre integration over
//!   charts, Gauss-Bonnet reproduction of Euler characteristics,
//!   finite-difference checks of the variational identities, and
//!   randomized universal-identity checks;
//! * [`invariants`] — the exact invariant theory of the boundary formal
//!   variables: admissible monomials, orthogonal-group actions, the
//!   invariant-subspace kernel over the rationals, and the
//!   determinant-contraction basis polynomials.

pub mod expr;
pub mod functionals;
pub mod geometry;
pub mod invariants;
pub mod jet;
pub mod linalg;
pub mod quadrature;
pub mod tensor;
pub mod verify;

pub use expr::{parse_expression, Expr};
pub use geometry::{curvature_in_frame, GeomError, MetricChart, PointFrame};
pub use quadrature::{integrate_boundary, integrate_interior, QuadratureRule};
pub use tensor::{
    generalized_delta, AlgebraicCurvature, SecondFundamentalForm, Signature, SymTwoTensor,
    TensorError,
};
pub use verify::VerificationReport;
