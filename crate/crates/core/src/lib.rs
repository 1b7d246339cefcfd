//! Numerical toolkit for complex-order spherical maximal operators on `ℝⁿ`.
//!
//! * [`exponents`]: exact calculus of the necessary and sufficient exponent
//!   regions in the `(1/p, 1/q)` plane.
//! * [`specfun`]: complex Gamma, Bessel `J_β` of complex order and the Hankel
//!   large-argument expansion with explicit coefficients.
//! * [`field`]: periodic grid fields, Fourier transforms, Lebesgue and Sobolev
//!   norms, region masks and a binary container format.
//! * [`operators`]: the spherical means as radial Fourier multipliers, the
//!   maximal operator over a `t`-grid, half-wave propagators, smooth
//!   frequency cutoffs and the multiplier decomposition.
//! * [`experiments`]: the focusing, plate and cone extremizer families and
//!   the local-smoothing probe, with log-log slope regression.
//! * [`selftest`]: fast invariant checks shared by the CLI and the tests.

pub mod experiments;
pub mod exponents;
pub mod field;
pub mod operators;
pub mod selftest;
pub mod specfun;

pub use num_complex::Complex64;
