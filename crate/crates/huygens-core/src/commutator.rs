//! Field commutator of the minimally coupled massless scalar on the two
//! FRW backgrounds, plus the mode-equation oracle that reconstructs its
//! timelike part from first principles.
//!
//! For both fluids the expectation value of the commutator between events
//! x = (x_a, t) and x' = (x_b, t') is
//!
//! ```text
//! <[φ(x), φ(x')]> = (i/4π) [ (δ(Δη+R) - δ(Δη-R)) / (a a' R)
//!                          + (θ(-Δη-R) - θ(Δη-R)) / (a a' |η η'|) ]
//! ```
//!
//! with Δη = η(t) - η(t') and R the comoving separation. The δ part lives
//! exactly on the light cone and is represented symbolically; only its
//! strengths are ever consumed (analytically, inside the signaling
//! integrals). The θ part is an ordinary number off the cone and is what
//! makes timelike signaling possible.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cosmology::{CosmologyError, CosmologyModel};
use crate::numerics::{dopri5_2d, OdeError, OdeOptions};

#[derive(Debug, Clone, Error, PartialEq)]
pub enum CommutatorError {
    #[error(transparent)]
    Cosmology(#[from] CosmologyError),
    #[error(transparent)]
    Ode(#[from] OdeError),
    #[error("events are exactly lightlike separated (Δη = {delta_eta}, R = {r}); the commutator is a pure δ there")]
    LightlikeSupport { delta_eta: f64, r: f64 },
    #[error("coincident worldlines (R = 0) have no δ descriptor")]
    CoincidentWorldlines,
    #[error("fluid parameter w = -1/3 makes the mode index α diverge")]
    SingularFluidParameter,
    #[error("mode equation requires k > 0, got {0}")]
    NonPositiveWavenumber(f64),
    #[error("η range must exclude the η = 0 singularity and contain the source")]
    BadEtaRange,
    #[error("event pair is within {limit} of the light cone; the mollified reconstruction is unreliable there")]
    TooCloseToLightCone { limit: f64 },
    #[error("width extrapolation disagreement {disagreement:.3e} exceeds 1e-2")]
    ExtrapolationDisagreement { disagreement: f64 },
}

/// An event on a comoving worldline: comoving time plus comoving position.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpacetimeEvent {
    pub t: f64,
    pub position: [f64; 3],
}

impl SpacetimeEvent {
    pub fn new(t: f64, position: [f64; 3]) -> Self {
        Self { t, position }
    }

    /// On the time axis; only the pair separation ever matters.
    pub fn at_time(t: f64) -> Self {
        Self { t, position: [0.0; 3] }
    }

    pub fn comoving_distance(&self, other: &SpacetimeEvent) -> f64 {
        let dx = self.position[0] - other.position[0];
        let dy = self.position[1] - other.position[1];
        let dz = self.position[2] - other.position[2];
        (dx * dx + dy * dy + dz * dz).sqrt()
    }
}

/// Symbolic light-cone part of the commutator: strengths of the two δ
/// spikes, supported at Δη = -R and Δη = +R. Never sampled numerically.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DeltaDescriptor {
    /// Coefficient of i δ(Δη + R) (support at Δη = -R): +1/(4π a a' R).
    pub strength_at_minus_r: f64,
    /// Coefficient of i δ(Δη - R) (support at Δη = +R): -1/(4π a a' R).
    pub strength_at_plus_r: f64,
    /// Half-width of the support in conformal time, i.e. R itself.
    pub support_radius: f64,
}

/// Full commutator at a pair of events: θ coefficient plus δ descriptor.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CommutatorValue {
    pub theta_part: f64,
    pub delta_part: DeltaDescriptor,
}

/// Coefficient c of i in the θ part of the commutator:
/// c = [θ(-Δη-R) - θ(Δη-R)] / (4π a a' |η η'|), zero for spacelike pairs.
///
/// Positive when the first event is in the timelike past of the second,
/// negative in the reversed order. Exactly lightlike input is an error:
/// the support there is the δ part.
pub fn commutator_theta_coefficient(
    model: &CosmologyModel,
    event_a: &SpacetimeEvent,
    event_b: &SpacetimeEvent,
) -> Result<f64, CommutatorError> {
    let r = event_a.comoving_distance(event_b);
    let eta_a = model.conformal_time(event_a.t)?;
    let eta_b = model.conformal_time(event_b.t)?;
    let delta_eta = eta_a - eta_b;
    if delta_eta.abs() == r {
        return Err(CommutatorError::LightlikeSupport { delta_eta, r });
    }
    if delta_eta.abs() < r {
        return Ok(0.0);
    }
    let a_a = model.scale_factor(event_a.t)?;
    let a_b = model.scale_factor(event_b.t)?;
    let magnitude = 1.0 / (4.0 * std::f64::consts::PI * a_a * a_b * (eta_a * eta_b).abs());
    Ok(if delta_eta < 0.0 { magnitude } else { -magnitude })
}

/// δ-spike strengths ±1/(4π a a' R) for a separated pair.
pub fn delta_descriptor(
    model: &CosmologyModel,
    event_a: &SpacetimeEvent,
    event_b: &SpacetimeEvent,
) -> Result<DeltaDescriptor, CommutatorError> {
    let r = event_a.comoving_distance(event_b);
    if r == 0.0 {
        return Err(CommutatorError::CoincidentWorldlines);
    }
    let a_a = model.scale_factor(event_a.t)?;
    let a_b = model.scale_factor(event_b.t)?;
    let strength = 1.0 / (4.0 * std::f64::consts::PI * a_a * a_b * r);
    Ok(DeltaDescriptor {
        strength_at_minus_r: strength,
        strength_at_plus_r: -strength,
        support_radius: r,
    })
}

/// θ coefficient and δ descriptor together.
pub fn commutator_value(
    model: &CosmologyModel,
    event_a: &SpacetimeEvent,
    event_b: &SpacetimeEvent,
) -> Result<CommutatorValue, CommutatorError> {
    Ok(CommutatorValue {
        theta_part: commutator_theta_coefficient(model, event_a, event_b)?,
        delta_part: delta_descriptor(model, event_a, event_b)?,
    })
}

/// Parameters of the auxiliary mode equation
/// ĝ'' + [k² - (1-6ξ)(α²-1/4)/η²] ĝ = 0 with α = |(3-3w)/(6w+2)|,
/// source conditions ĝ(η') = 0, dĝ/dη(η') = 4π.
///
/// Accepts a general fluid parameter and curvature coupling even though
/// the closed-form commutator only covers α = 3/2, ξ = 0: the conformal
/// point ξ = 1/6 has the exact solution (4π/k) sin(k(η-η')), which keeps
/// the oracle itself testable.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GreenFunctionProblem {
    pub w: f64,
    pub xi: f64,
    pub k: f64,
    pub eta_source: f64,
}

impl GreenFunctionProblem {
    pub fn new(w: f64, xi: f64, k: f64, eta_source: f64) -> Result<Self, CommutatorError> {
        if 6.0 * w + 2.0 == 0.0 {
            return Err(CommutatorError::SingularFluidParameter);
        }
        if !(k > 0.0) {
            return Err(CommutatorError::NonPositiveWavenumber(k));
        }
        if !(xi >= 0.0) || eta_source == 0.0 {
            return Err(CommutatorError::BadEtaRange);
        }
        Ok(Self { w, xi, k, eta_source })
    }

    /// Minimally coupled problem matching one of the closed-form models.
    pub fn for_model(model: &CosmologyModel, k: f64, eta_source: f64) -> Result<Self, CommutatorError> {
        let w = match model {
            CosmologyModel::Matter { .. } => 0.0,
            CosmologyModel::Lambda { .. } => -1.0,
        };
        Self::new(w, 0.0, k, eta_source)
    }

    pub fn alpha(&self) -> f64 {
        ((3.0 - 3.0 * self.w) / (6.0 * self.w + 2.0)).abs()
    }

    /// Strength of the 1/η² potential: (1-6ξ)(α²-1/4).
    fn potential_strength(&self) -> f64 {
        let alpha = self.alpha();
        (1.0 - 6.0 * self.xi) * (alpha * alpha - 0.25)
    }

    fn rhs(&self, eta: f64, y: [f64; 2]) -> [f64; 2] {
        let v = self.k * self.k - self.potential_strength() / (eta * eta);
        [y[1], -v * y[0]]
    }
}

/// Mode function sampled on a conformal-time grid.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeSolution {
    pub etas: Vec<f64>,
    pub values: Vec<f64>,
}

fn mode_ode_options() -> OdeOptions {
    OdeOptions { rel_tol: 1e-10, abs_tol: 1e-13, max_steps: 20_000_000 }
}

/// Solve the mode equation over `eta_range`, sampling ĝ at `n_steps + 1`
/// evenly spaced points. The range must not straddle η = 0 and must
/// contain the source.
pub fn solve_mode_ode(
    problem: &GreenFunctionProblem,
    eta_range: (f64, f64),
    n_steps: usize,
) -> Result<ModeSolution, CommutatorError> {
    let (lo, hi) = eta_range;
    if !(lo < hi) || (lo <= 0.0 && hi >= 0.0) || problem.eta_source < lo || problem.eta_source > hi {
        return Err(CommutatorError::BadEtaRange);
    }
    let n = n_steps.max(1);
    let etas: Vec<f64> = (0..=n).map(|i| lo + (hi - lo) * (i as f64) / (n as f64)).collect();
    let mut values = vec![0.0f64; etas.len()];

    let opts = mode_ode_options();
    let rhs = |eta: f64, y: [f64; 2]| problem.rhs(eta, y);

    // Sweep downward from the source, then upward, continuing the state.
    let below: Vec<usize> =
        (0..etas.len()).rev().filter(|&i| etas[i] <= problem.eta_source).collect();
    let mut x = problem.eta_source;
    let mut y = [0.0, 4.0 * std::f64::consts::PI];
    for i in below {
        y = dopri5_2d(rhs, x, etas[i], y, &opts)?;
        x = etas[i];
        values[i] = y[0];
    }
    let above: Vec<usize> = (0..etas.len()).filter(|&i| etas[i] > problem.eta_source).collect();
    x = problem.eta_source;
    y = [0.0, 4.0 * std::f64::consts::PI];
    for i in above {
        y = dopri5_2d(rhs, x, etas[i], y, &opts)?;
        x = etas[i];
        values[i] = y[0];
    }
    Ok(ModeSolution { etas, values })
}

/// ĝ at a single conformal time.
pub fn mode_function_at(problem: &GreenFunctionProblem, eta: f64) -> Result<f64, CommutatorError> {
    if eta == 0.0 || eta.signum() != problem.eta_source.signum() {
        return Err(CommutatorError::BadEtaRange);
    }
    let y = dopri5_2d(
        |e, y| problem.rhs(e, y),
        problem.eta_source,
        eta,
        [0.0, 4.0 * std::f64::consts::PI],
        &mode_ode_options(),
    )?;
    Ok(y[0])
}

/// One damped k-integral evaluation of the θ coefficient:
///
/// c(width) = -(1/(8π³ a a' R)) ∫₀^{k_max} dk k sin(kR) ĝ(η, η', k) e^{-(k width)²}
///
/// The Gaussian damping regulates the δ-supported UV tail of the mode sum;
/// the (θ(-Δη) - θ(Δη)) sign of the undamped integral is carried by the
/// oddness of ĝ in Δη, so no explicit sign flip is needed here.
pub fn reconstruct_theta_part_single_width(
    model: &CosmologyModel,
    event_a: &SpacetimeEvent,
    event_b: &SpacetimeEvent,
    k_max: f64,
    width: f64,
) -> Result<f64, CommutatorError> {
    let geom = ReconstructionGeometry::prepare(model, event_a, event_b)?;
    let nodes = mode_samples(model, &geom, k_max)?;
    Ok(geom.damped_sum(&nodes, width))
}

/// θ coefficient reconstructed from the mode equation, with the damping
/// width Richardson-extrapolated to zero.
///
/// Evaluates the damped integral at `width`, `width/2` and `width/4`,
/// extrapolates the two overlapping pairs, and errors out if the two
/// extrapolants disagree by more than 1e-2 in relative terms. The pair
/// must sit at least 5 widths away from the light cone in conformal time.
pub fn reconstruct_theta_part(
    model: &CosmologyModel,
    event_a: &SpacetimeEvent,
    event_b: &SpacetimeEvent,
    k_max: f64,
    mollifier_width: f64,
) -> Result<f64, CommutatorError> {
    let geom = ReconstructionGeometry::prepare(model, event_a, event_b)?;
    let cone_distance = (geom.delta_eta.abs() - geom.r).abs();
    if cone_distance < 5.0 * mollifier_width {
        return Err(CommutatorError::TooCloseToLightCone { limit: 5.0 * mollifier_width });
    }

    let nodes = mode_samples(model, &geom, k_max)?;
    let c0 = geom.damped_sum(&nodes, mollifier_width);
    let c1 = geom.damped_sum(&nodes, mollifier_width / 2.0);
    let c2 = geom.damped_sum(&nodes, mollifier_width / 4.0);

    // Width error is at worst linear, so first-order extrapolation of the
    // two overlapping pairs; their disagreement is the convergence gate.
    let extrap_01 = 2.0 * c1 - c0;
    let extrap_12 = 2.0 * c2 - c1;
    let scale = geom.theta_scale().max(extrap_12.abs());
    let disagreement = (extrap_12 - extrap_01).abs() / (1e-3 * scale).max(extrap_12.abs());
    if disagreement > 1e-2 {
        return Err(CommutatorError::ExtrapolationDisagreement { disagreement });
    }
    Ok(extrap_12)
}

struct ReconstructionGeometry {
    eta_a: f64,
    eta_b: f64,
    a_a: f64,
    a_b: f64,
    r: f64,
    delta_eta: f64,
}

impl ReconstructionGeometry {
    fn prepare(
        model: &CosmologyModel,
        event_a: &SpacetimeEvent,
        event_b: &SpacetimeEvent,
    ) -> Result<Self, CommutatorError> {
        let r = event_a.comoving_distance(event_b);
        if r == 0.0 {
            return Err(CommutatorError::CoincidentWorldlines);
        }
        Ok(Self {
            eta_a: model.conformal_time(event_a.t)?,
            eta_b: model.conformal_time(event_b.t)?,
            a_a: model.scale_factor(event_a.t)?,
            a_b: model.scale_factor(event_b.t)?,
            r,
            delta_eta: model.conformal_time(event_a.t)? - model.conformal_time(event_b.t)?,
        })
    }

    /// Natural magnitude of the θ part, used for error scaling.
    fn theta_scale(&self) -> f64 {
        1.0 / (4.0 * std::f64::consts::PI * self.a_a * self.a_b * (self.eta_a * self.eta_b).abs())
    }

    fn damped_sum(&self, nodes: &[(f64, f64)], width: f64) -> f64 {
        let integral: f64 = nodes
            .iter()
            .map(|&(k, weighted)| weighted * (-(k * width) * (k * width)).exp())
            .sum();
        -integral / (8.0 * std::f64::consts::PI.powi(3) * self.a_a * self.a_b * self.r)
    }
}

/// Gauss-Kronrod nodes and weights times k sin(kR) ĝ(k), sampled once so
/// that every damping width reuses the same ODE solves.
fn mode_samples(
    model: &CosmologyModel,
    geom: &ReconstructionGeometry,
    k_max: f64,
) -> Result<Vec<(f64, f64)>, CommutatorError> {
    // Fastest oscillation of k sin(kR) ĝ in k has rate R + |Δη|; half a
    // period per panel keeps the 15-point rule comfortably converged.
    let rate = geom.r + geom.delta_eta.abs();
    let panel = (std::f64::consts::PI / rate).min(k_max / 4.0);
    let n_panels = (k_max / panel).ceil() as usize;

    let mut nodes = Vec::with_capacity(n_panels * 15);
    for i in 0..n_panels {
        let a = k_max * (i as f64) / (n_panels as f64);
        let b = k_max * ((i + 1) as f64) / (n_panels as f64);
        let center = 0.5 * (a + b);
        let half = 0.5 * (b - a);
        for (x, w) in GK15_POINTS {
            let k = center + half * x;
            if k <= 0.0 {
                continue;
            }
            let problem = GreenFunctionProblem::for_model(model, k, geom.eta_b)?;
            let g = mode_function_at(&problem, geom.eta_a)?;
            nodes.push((k, w * half * k * (k * geom.r).sin() * g));
        }
    }
    Ok(nodes)
}

// Kronrod-15 nodes/weights over [-1, 1] as (abscissa, weight) pairs.
const GK15_POINTS: [(f64, f64); 15] = [
    (-0.991_455_371_120_812_6, 0.022_935_322_010_529_225),
    (-0.949_107_912_342_758_5, 0.063_092_092_629_978_55),
    (-0.864_864_423_359_769_1, 0.104_790_010_322_250_18),
    (-0.741_531_185_599_394_4, 0.140_653_259_715_525_92),
    (-0.586_087_235_467_691_1, 0.169_004_726_639_267_9),
    (-0.405_845_151_377_397_17, 0.190_350_578_064_785_4),
    (-0.207_784_955_007_898_47, 0.204_432_940_075_298_9),
    (0.0, 0.209_482_141_084_727_83),
    (0.207_784_955_007_898_47, 0.204_432_940_075_298_9),
    (0.405_845_151_377_397_17, 0.190_350_578_064_785_4),
    (0.586_087_235_467_691_1, 0.169_004_726_639_267_9),
    (0.741_531_185_599_394_4, 0.140_653_259_715_525_92),
    (0.864_864_423_359_769_1, 0.104_790_010_322_250_18),
    (0.949_107_912_342_758_5, 0.063_092_092_629_978_55),
    (0.991_455_371_120_812_6, 0.022_935_322_010_529_225),
];
