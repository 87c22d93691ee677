//! Quadrature, root finding, ODE integration and special functions shared
//! by the physics modules.

pub mod ode;
pub mod quadrature;
pub mod roots;
pub mod special;

pub use ode::{dopri5_2d, OdeError, OdeOptions};
pub use quadrature::{
    integrate_1d, integrate_1d_segmented, integrate_2d_clipped, oscillation_breakpoints,
    Quadrature, QuadratureError, QuadratureSpec,
};
pub use roots::{expand_bracket_upward, find_root_bracketed, RootError};
pub use special::{cosine_integral, SpecialFunctionError};
