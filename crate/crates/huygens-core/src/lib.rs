//! Timelike communication between comoving Unruh-DeWitt detectors in
//! expanding FRW cosmologies.
//!
//! A massless, minimally coupled scalar field on a curved background
//! violates the strong Huygens principle: its commutator has support
//! inside the light cone, not just on it. Two detectors coupled to the
//! field can exploit that support to exchange information while strictly
//! timelike separated. This crate computes the leading-order Shannon
//! capacity of that channel for dust-matter and cosmological-constant
//! universes, with closed forms and independent quadrature/ODE routes for
//! every quantity.
//!
//! Module map:
//! - [`cosmology`]: scale factors, conformal time and the two-model
//!   normalization.
//! - [`causality`]: causal classification of switching windows and the
//!   signal-timing solvers.
//! - [`numerics`]: adaptive Gauss-Kronrod quadrature, bracketed root
//!   finding, Dormand-Prince ODE stepping, the cosine integral.
//! - [`commutator`]: the closed-form field commutator and the
//!   mode-equation oracle that reconstructs its timelike part.
//! - [`signaling`]: the estimator S₂ = (I_δ + I_θ)/4π via closed forms
//!   and via quadrature for every causal class.
//! - [`capacity`]: the Shannon capacity built on S₂.
//! - [`verify`]: the self-check suite behind the CLI `verify` subcommand.

pub mod capacity;
pub mod causality;
pub mod commutator;
pub mod cosmology;
pub mod numerics;
pub mod signaling;
pub mod verify;

pub use capacity::{
    capacity_from_signaling, capacity_lambda_closed, capacity_matter_closed,
    capacity_matter_closed_approx, channel_capacity, CapacityError, CapacityResult,
};
pub use causality::{
    classify, classify_windows, comoving_from_proper, max_timelike_comoving_separation,
    min_timelike_switch_on_comoving, min_timelike_switch_on_proper, CausalClass, CausalityError,
    CommPair, DetectorConfig, Separation,
};
pub use commutator::{
    commutator_theta_coefficient, commutator_value, delta_descriptor, mode_function_at,
    reconstruct_theta_part, reconstruct_theta_part_single_width, solve_mode_ode, CommutatorError,
    CommutatorValue, DeltaDescriptor, GreenFunctionProblem, ModeSolution, SpacetimeEvent,
};
pub use cosmology::{normalized_pair, CosmologyError, CosmologyModel, REFERENCE_ANCHOR};
pub use numerics::{Quadrature, QuadratureError, QuadratureSpec};
pub use signaling::{
    i_delta, i_theta, i_theta_closed, i_theta_closed_lambda, i_theta_closed_matter,
    i_theta_closed_matter_approx, i_theta_general_2d, s2, DetectorState, Method, SignalingError,
    SignalingResult,
};
pub use verify::{run_verification, CheckReport, VerifyOptions};
