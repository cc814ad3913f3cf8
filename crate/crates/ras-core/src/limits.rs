//! Numeric thresholds shared across the crate.
//!
//! Keeping them in one place makes the validity rules auditable: every module
//! that rejects a degenerate metric or skips a near-singular sample uses these
//! constants, never an inline literal.

/// A metric matrix with `|det| <= DET_EPS` is treated as degenerate.
pub const DET_EPS: f64 = 1e-12;

/// A conformal factor with `|phi| <= CONFORMAL_EPS` makes the metric invalid
/// at that point; evaluation fails rather than returning huge values.
pub const CONFORMAL_EPS: f64 = 1e-9;

/// Verification grids skip (and count) points where `|phi|` or the warping
/// function drops to this level, since the residual is dominated by rounding
/// there. Looser than [`CONFORMAL_EPS`] on purpose: a point can be valid for
/// evaluation yet too close to the singular set for a meaningful residual.
pub const GRID_SKIP_EPS: f64 = 1e-6;

/// Default absolute tolerance for the reduced ODE and invariant PDE residuals.
pub const SYSTEM_TOL: f64 = 1e-8;

/// Default absolute tolerance for the full-tensor residual. Looser because the
/// curvature oracle stacks two finite inversions and many products.
pub const TENSOR_TOL: f64 = 1e-5;

/// Default absolute error budget for one antiderivative table.
pub const QUAD_TOL: f64 = 1e-10;

/// Relative per-panel fallback for quadrature acceptance. Recipe integrands
/// like `(c - (n-2)I)/phi^2` reach ~1e15 near a window edge, where the
/// absolute budget falls below one ulp of the panel sum; such panels accept
/// at this relative accuracy instead. Only the potential's value lane (a
/// reporting quantity, never part of a residual) depends on these tables at
/// that magnitude.
pub const QUAD_REL: f64 = 1e-13;

/// Default cap on quadrature nodes per table.
pub const QUAD_NODE_BUDGET: usize = 1 << 18;

/// Number of probe points used when scanning a profile for validity.
pub const PROFILE_SCAN_POINTS: usize = 1024;

/// Fraction by which constructors pad the sampling window on each side, so
/// that finite-difference stencils near the edge stay inside the tables.
pub const WORKING_PAD: f64 = 0.05;

/// Step scale for the finite-difference fallbacks (first differences use
/// `FD_STEP * max(1, |t|)`; second differences use its square root pattern
/// internally where noted).
pub const FD_STEP: f64 = 1e-4;
