//! Gradient Ricci almost solitons on pseudo-Euclidean space.
//!
//! A metric `g` together with a potential `f` and a smooth function `rho` is a
//! gradient Ricci almost soliton when `Ric + Hess(f) = rho·g`. This crate
//! constructs such triples in closed form (up to one-dimensional quadrature)
//! for three invariant families over flat background metrics
//! `g_ij = eps_i delta_ij`, `eps_i = ±1`:
//!
//! * **translation**: conformal metrics `g/phi^2` with all data depending on
//!   `xi = sum alpha_i x_i`,
//! * **radial**: conformal metrics over Euclidean space depending on
//!   `r = |x|^2`,
//! * **warped**: products `(R^n, g/phi^2) ×_f F^m` with Ricci-flat fiber and
//!   warping `f = 1/phi`.
//!
//! Every construction is verified at three independent levels: the reduced
//! ODE system in the invariant variable, the invariant PDE system on
//! coordinate space, and a full pointwise curvature oracle
//! ([`tensor::soliton_residual_at`]) that knows nothing about the reductions.
//!
//! The crate is `no_std` (with `alloc`); IO, file formats and the CLI live in
//! the companion `ras-cli` crate.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod construct;
pub mod dd;
pub mod dual;
pub mod error;
pub mod expr;
pub mod field;
pub mod invariant;
pub mod limits;
pub mod linalg;
mod math;
pub mod profile;
pub mod quad;
pub mod tensor;
pub mod verify;

pub use construct::{
    construct_radial, construct_translation, construct_warped, BuildOptions, Family,
    IntegrationConstants, SolitonData,
};
pub use dual::Dual2;
pub use error::{Error, ParseError, Result};
pub use expr::parse_expr;
pub use field::{MetricField, Point, ScalarField};
pub use invariant::{eps_i0, lift_radial, lift_translation, RadialCoordinate, Signature, TranslationDirection};
pub use profile::{parse_profile, Curve, Interval, Profile};
pub use quad::{antiderivative, Antiderivative, QuadSettings};
pub use verify::{
    completeness_probe, grid_for, invariant_of, residual_full_tensor, residual_pde_conformal,
    residual_pde_warped, residual_system_radial, residual_system_translation,
    residual_system_warped, sample_window, CompletenessProbe, ResidualRecord, ResidualReport,
    SampleSite, WarpedSpec,
};
