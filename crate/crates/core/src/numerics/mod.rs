//! Complex polynomials, root finding, and evaluation of `F = ∫ Q e^P` by
//! adaptive contour quadrature.

mod poly;
mod pqform;
mod quad;
mod roots;

use thiserror::Error;

pub use num_complex::Complex64 as C64;
pub use poly::CPoly;
pub use pqform::{
    approximant, asymptotic_directions, asymptotic_radius, pq_derivatives, pq_eval, pq_eval_with, sector_limit,
    tail_bound, AsymptoticTract, Chart, CriticalPoint, Kernel, PQForm, SingularValue,
};
pub use quad::{integrate_polyline, integrate_segment, QuadOptions};
pub use roots::{poly_roots, residual_bound, Root, RootList};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NumericsError {
    #[error("polynomial is constant")]
    DegreeZero,
    #[error("root residual {residual:e} above bound")]
    IllConditioned { residual: f64 },
    #[error("quadrature did not reach tolerance ({panels} panels, error estimate {error:e})")]
    QuadratureFailure { panels: usize, error: f64 },
    #[error("approximant coefficients leave the floating point range")]
    OverflowGuard,
    #[error("Q is identically zero")]
    ZeroIntegrand,
    #[error("integration path must start at the base point and end at the target")]
    BadPath,
}
