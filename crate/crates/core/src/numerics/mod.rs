//! Dense small-matrix helpers, eigenvalues, bracketing root finder and the
//! deterministic random stream shared by every other module.

mod eigen;
mod matrix;
mod rng;
mod roots;
mod vec2;

pub use eigen::{eig2x2, eig_general, ComplexPair, EIG_MAX_DIM, EIG_MAX_ITERATIONS};
pub use matrix::SmallMatrix;
pub use nalgebra::Complex;
pub use rng::{gaussian, Rng};
pub use roots::{bisect, bisect_counted, bisection_iteration_bound};
pub use vec2::Vec2;

/// Complex number type used for eigenvalues.
pub type Complex64 = Complex<f64>;
