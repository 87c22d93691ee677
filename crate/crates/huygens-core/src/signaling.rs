//! The leading-order signaling estimator S₂: the contribution of the
//! emitter's coupling to the receiver's excitation probability.
//!
//! With the reference detector states, S₂ = (I_δ + I_θ)/(4π), where I_δ
//! collects the light-cone (δ-supported) part of the commutator and I_θ
//! the timelike interior. I_θ is available in closed form for both
//! cosmologies in the strictly timelike regime; the quadrature paths here
//! evaluate the same objects independently for every causal class and for
//! arbitrary detector states.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::causality::{classify, CausalClass, CausalityError, CommPair, DetectorConfig};
use crate::cosmology::{CosmologyError, CosmologyModel};
use crate::numerics::{
    cosine_integral, integrate_1d_segmented, integrate_2d_clipped, oscillation_breakpoints,
    Quadrature, QuadratureError, QuadratureSpec, SpecialFunctionError,
};

#[derive(Debug, Clone, Error, PartialEq)]
pub enum SignalingError {
    #[error(transparent)]
    Cosmology(#[from] CosmologyError),
    #[error(transparent)]
    Causality(#[from] CausalityError),
    #[error(transparent)]
    Quadrature(#[from] QuadratureError),
    #[error(transparent)]
    SpecialFunction(#[from] SpecialFunctionError),
    #[error("detector state must be normalized: |α|² + |β|² = {0}")]
    UnnormalizedState(f64),
    #[error("coincident worldlines with lightlike window overlap: the δ contribution is singular at R = 0")]
    CoincidentCaustic,
    #[error("closed form requires switching times t > 0, got {0}")]
    NonPositiveSwitchTime(f64),
}

/// Pure qubit state α|e> + β|g> of one detector.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DetectorState {
    alpha: Complex64,
    beta: Complex64,
}

impl DetectorState {
    pub fn new(alpha: Complex64, beta: Complex64) -> Result<Self, SignalingError> {
        let norm = alpha.norm_sqr() + beta.norm_sqr();
        if (norm - 1.0).abs() > 1e-12 {
            return Err(SignalingError::UnnormalizedState(norm));
        }
        Ok(Self { alpha, beta })
    }

    /// (|e> - |g>)/√2: the emitter state that maximizes the estimator for
    /// gapless detectors.
    pub fn optimal_emitter() -> Self {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        Self { alpha: Complex64::new(s, 0.0), beta: Complex64::new(-s, 0.0) }
    }

    /// (|e> + i|g>)/√2: the matching receiver state.
    pub fn optimal_receiver() -> Self {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        Self { alpha: Complex64::new(s, 0.0), beta: Complex64::new(0.0, s) }
    }

    pub fn alpha(&self) -> Complex64 {
        self.alpha
    }

    pub fn beta(&self) -> Complex64 {
        self.beta
    }

    /// |α||β|, the coherence entering the capacity normalization.
    pub fn coherence(&self) -> f64 {
        self.alpha.norm() * self.beta.norm()
    }

    /// α* β, the only combination the estimator depends on (global-phase
    /// invariant).
    pub fn interference(&self) -> Complex64 {
        self.alpha.conj() * self.beta
    }

    fn is_optimal_emitter(&self) -> bool {
        (self.interference() - Complex64::new(-0.5, 0.0)).norm() <= 1e-12
    }

    fn is_optimal_receiver(&self) -> bool {
        (self.interference() - Complex64::new(0.0, 0.5)).norm() <= 1e-12
    }

    /// Emitter-side weight Re(α* β e^{iΩt}).
    pub fn emitter_weight(&self, omega: f64, t: f64) -> f64 {
        let ab = self.interference();
        ab.re * (omega * t).cos() - ab.im * (omega * t).sin()
    }

    /// Receiver-side weight Re(i α* β e^{iΩt}) = -Im(α* β e^{iΩt}); the
    /// extra i comes from the commutator being i times a real kernel.
    pub fn receiver_weight(&self, omega: f64, t: f64) -> f64 {
        let ab = self.interference();
        -(ab.im * (omega * t).cos() + ab.re * (omega * t).sin())
    }
}

/// Which evaluation path produced a result.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Method {
    #[serde(rename = "closed_form")]
    ClosedForm,
    #[serde(rename = "quadrature")]
    Quadrature,
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Method::ClosedForm => "closed_form",
            Method::Quadrature => "quadrature",
        })
    }
}

/// S₂ together with its ingredients and provenance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SignalingResult {
    pub i_delta: f64,
    pub i_theta: f64,
    pub s2: f64,
    pub causal_class: CausalClass,
    pub err_est: f64,
    pub method: Method,
}

struct ConformalWindows {
    eta_ia: f64,
    eta_fa: f64,
    eta_ib: f64,
    eta_fb: f64,
    r: f64,
}

impl ConformalWindows {
    fn prepare(model: &CosmologyModel, pair: &CommPair) -> Result<Self, SignalingError> {
        let (eta_ia, eta_fa) = pair.alice.conformal_window(model)?;
        let (eta_ib, eta_fb) = pair.bob.conformal_window(model)?;
        let (r, _) = pair.comoving_separation(model)?;
        Ok(Self { eta_ia, eta_fa, eta_ib, eta_fb, r })
    }

    fn class(&self) -> CausalClass {
        crate::causality::classify_windows(self.eta_ia, self.eta_fa, self.eta_ib, self.eta_fb, self.r)
    }
}

/// Conformal-time images of the detector's oscillation period boundaries,
/// seeding the adaptive subdivision for long windows.
fn conformal_oscillation_breaks(
    model: &CosmologyModel,
    det: &DetectorConfig,
) -> Result<Vec<f64>, SignalingError> {
    oscillation_breakpoints(det.switch_on, det.switch_off(), det.gap)
        .into_iter()
        .map(|t| model.conformal_time(t).map_err(SignalingError::from))
        .collect()
}

/// Light-cone overlap integral (1/R) ∫ dη w_A(t(η-R)) w_B(t(η)) over the
/// part of the receiver window in lightlike contact with the emitter's.
fn delta_overlap_integral<WA, WB>(
    model: &CosmologyModel,
    pair: &CommPair,
    windows: &ConformalWindows,
    weight_a: WA,
    weight_b: WB,
    spec: &QuadratureSpec,
) -> Result<Quadrature, SignalingError>
where
    WA: Fn(f64) -> f64,
    WB: Fn(f64) -> f64,
{
    let r = windows.r;
    let lo = windows.eta_ib.max(windows.eta_ia + r);
    let hi = windows.eta_fb.min(windows.eta_fa + r);
    if lo >= hi {
        return Ok(Quadrature { value: 0.0, err_est: 0.0 });
    }
    if r == 0.0 {
        return Err(SignalingError::CoincidentCaustic);
    }

    let mut breaks = vec![lo, hi];
    breaks.extend(
        conformal_oscillation_breaks(model, &pair.bob)?
            .into_iter()
            .filter(|&e| e > lo && e < hi),
    );
    breaks.extend(
        conformal_oscillation_breaks(model, &pair.alice)?
            .into_iter()
            .map(|e| e + r)
            .filter(|&e| e > lo && e < hi),
    );
    breaks.sort_by(f64::total_cmp);
    breaks.dedup();

    let integrand = |eta: f64| -> f64 {
        match (model.comoving_time(eta), model.comoving_time(eta - r)) {
            (Ok(t_b), Ok(t_a)) => weight_b(t_b) * weight_a(t_a) / r,
            _ => f64::NAN,
        }
    };
    Ok(integrate_1d_segmented(integrand, &breaks, spec)?)
}

/// θ-clipped double integral ∫ dη₂/|η₂| w_B ∫_{η_iA}^{min(η_fA, η₂-R)}
/// dη₁/|η₁| w_A over the receiver window.
fn theta_clipped_integral<WA, WB>(
    model: &CosmologyModel,
    pair: &CommPair,
    windows: &ConformalWindows,
    weight_a: WA,
    weight_b: WB,
    spec: &QuadratureSpec,
) -> Result<Quadrature, SignalingError>
where
    WA: Fn(f64) -> f64,
    WB: Fn(f64) -> f64,
{
    let r = windows.r;
    let (eta_ia, eta_fa) = (windows.eta_ia, windows.eta_fa);

    // Outer subdivision: the clip kink where η₂ - R crosses η_fA, plus
    // oscillation periods of the receiver.
    let mut outer_breaks = vec![eta_fa + r];
    outer_breaks.extend(conformal_oscillation_breaks(model, &pair.bob)?);

    let f = |eta1: f64, eta2: f64| -> f64 {
        match (model.comoving_time(eta1), model.comoving_time(eta2)) {
            (Ok(t1), Ok(t2)) => weight_a(t1) * weight_b(t2) / (eta1 * eta2).abs(),
            _ => f64::NAN,
        }
    };
    let inner_hi = |eta2: f64| eta_fa.min(eta2 - r);

    Ok(integrate_2d_clipped(
        f,
        (windows.eta_ib, windows.eta_fb),
        inner_hi,
        eta_ia,
        &outer_breaks,
        spec,
    )?)
}

/// Factorized strictly-timelike form: product of the two single-detector
/// integrals ∫ dt w(t) / (a(t)|η(t)|) in comoving time.
fn theta_factorized_integral<WA, WB>(
    model: &CosmologyModel,
    pair: &CommPair,
    weight_a: WA,
    weight_b: WB,
    spec: &QuadratureSpec,
) -> Result<Quadrature, SignalingError>
where
    WA: Fn(f64) -> f64,
    WB: Fn(f64) -> f64,
{
    let factor = |det: &DetectorConfig, weight: &dyn Fn(f64) -> f64| -> Result<Quadrature, SignalingError> {
        let breaks = oscillation_breakpoints(det.switch_on, det.switch_off(), det.gap);
        let integrand = |t: f64| -> f64 {
            match (model.scale_factor(t), model.conformal_time(t)) {
                (Ok(a), Ok(eta)) => weight(t) / (a * eta.abs()),
                _ => f64::NAN,
            }
        };
        Ok(integrate_1d_segmented(integrand, &breaks, spec)?)
    };
    let fa = factor(&pair.alice, &weight_a)?;
    let fb = factor(&pair.bob, &weight_b)?;
    Ok(Quadrature {
        value: fa.value * fb.value,
        err_est: fa.err_est * fb.value.abs() + fb.err_est * fa.value.abs() + fa.err_est * fb.err_est,
    })
}

/// Light-cone contribution I_δ by quadrature. Exactly zero for strictly
/// spacelike and strictly timelike configurations.
pub fn i_delta(model: &CosmologyModel, pair: &CommPair, spec: &QuadratureSpec) -> Result<Quadrature, SignalingError> {
    let windows = ConformalWindows::prepare(model, pair)?;
    let omega_a = pair.alice.gap;
    let omega_b = pair.bob.gap;
    delta_overlap_integral(
        model,
        pair,
        &windows,
        |t| (omega_a * t).cos(),
        |t| (omega_b * t).cos(),
        spec,
    )
}

/// Timelike contribution I_θ by quadrature, dispatching on causal class:
/// zero for B1, factorized product for B5, full θ-clipped double integral
/// otherwise.
pub fn i_theta(model: &CosmologyModel, pair: &CommPair, spec: &QuadratureSpec) -> Result<Quadrature, SignalingError> {
    let windows = ConformalWindows::prepare(model, pair)?;
    match windows.class() {
        CausalClass::B1Spacelike => Ok(Quadrature { value: 0.0, err_est: 0.0 }),
        CausalClass::B5StrictTimelike => {
            let omega_a = pair.alice.gap;
            let omega_b = pair.bob.gap;
            theta_factorized_integral(
                model,
                pair,
                |t| (omega_a * t).cos(),
                |t| (omega_b * t).cos(),
                spec,
            )
        }
        _ => i_theta_general_2d(model, pair, spec),
    }
}

/// I_θ always evaluated through the θ-clipped double integral, regardless
/// of causal class. The clip renders the integrand independent of R in the
/// strictly timelike regime; this path makes that checkable.
pub fn i_theta_general_2d(
    model: &CosmologyModel,
    pair: &CommPair,
    spec: &QuadratureSpec,
) -> Result<Quadrature, SignalingError> {
    let windows = ConformalWindows::prepare(model, pair)?;
    let omega_a = pair.alice.gap;
    let omega_b = pair.bob.gap;
    theta_clipped_integral(
        model,
        pair,
        &windows,
        |t| (omega_a * t).cos(),
        |t| (omega_b * t).cos(),
        spec,
    )
}

fn matter_window_factor(det: &DetectorConfig) -> Result<f64, SignalingError> {
    let t_i = det.switch_on;
    let t_f = det.switch_off();
    if t_i <= 0.0 {
        return Err(SignalingError::NonPositiveSwitchTime(t_i));
    }
    if det.gap == 0.0 {
        Ok((t_f / t_i).ln() / 3.0)
    } else {
        Ok((cosine_integral(det.gap * t_f)? - cosine_integral(det.gap * t_i)?) / 3.0)
    }
}

/// Closed-form I_θ in the matter universe (strictly timelike regime):
/// (1/9)(Ci[Ω_A T_fA] - Ci[Ω_A T_iA])(Ci[Ω_B T_fB] - Ci[Ω_B T_iB]),
/// with ln(T_f/T_i) replacing the Ci difference for a gapless detector.
pub fn i_theta_closed_matter(det_a: &DetectorConfig, det_b: &DetectorConfig) -> Result<f64, SignalingError> {
    Ok(matter_window_factor(det_a)? * matter_window_factor(det_b)?)
}

/// Small-Δ approximation of the matter closed form:
/// (Δ_A Δ_B / 9) cos(Ω_A T_iA) cos(Ω_B T_iB) / (T_iA T_iB).
pub fn i_theta_closed_matter_approx(det_a: &DetectorConfig, det_b: &DetectorConfig) -> Result<f64, SignalingError> {
    for det in [det_a, det_b] {
        if det.switch_on <= 0.0 {
            return Err(SignalingError::NonPositiveSwitchTime(det.switch_on));
        }
    }
    Ok(det_a.duration * det_b.duration / 9.0
        * (det_a.gap * det_a.switch_on).cos()
        * (det_b.gap * det_b.switch_on).cos()
        / (det_a.switch_on * det_b.switch_on))
}

fn lambda_window_factor(det: &DetectorConfig, sqrt_lambda: f64) -> f64 {
    if det.gap == 0.0 {
        sqrt_lambda * det.duration
    } else {
        sqrt_lambda * 2.0 / det.gap
            * (det.gap * det.duration / 2.0).sin()
            * (det.gap * (det.switch_on + det.duration / 2.0)).cos()
    }
}

/// Closed-form I_θ in the Lambda universe (strictly timelike regime):
/// (4|Λ|/(Ω_A Ω_B)) sin(Ω_A Δ/2) sin(Ω_B Δ/2)
///   cos[Ω_A(T_iA + Δ/2)] cos[Ω_B(T_iB + Δ/2)],
/// degenerating to |Λ| Δ_A Δ_B for gapless detectors.
pub fn i_theta_closed_lambda(det_a: &DetectorConfig, det_b: &DetectorConfig, sqrt_lambda: f64) -> f64 {
    lambda_window_factor(det_a, sqrt_lambda) * lambda_window_factor(det_b, sqrt_lambda)
}

/// Closed-form I_θ for the given model, dispatching on the fluid.
pub fn i_theta_closed(
    model: &CosmologyModel,
    det_a: &DetectorConfig,
    det_b: &DetectorConfig,
) -> Result<f64, SignalingError> {
    match model {
        CosmologyModel::Matter { .. } => i_theta_closed_matter(det_a, det_b),
        CosmologyModel::Lambda { sqrt_lambda, .. } => Ok(i_theta_closed_lambda(det_a, det_b, *sqrt_lambda)),
    }
}

/// The signaling estimator S₂ for arbitrary detector states.
///
/// With the reference states in the strictly timelike regime the closed
/// form is used and the result records `ClosedForm`; every other
/// combination runs the quadrature path. Either way
/// s2 = (i_delta + i_theta)/(4π) holds for the generalized integrals
/// reported alongside.
pub fn s2(
    model: &CosmologyModel,
    pair: &CommPair,
    state_a: &DetectorState,
    state_b: &DetectorState,
    spec: &QuadratureSpec,
) -> Result<SignalingResult, SignalingError> {
    let class = classify(model, pair)?;
    let four_pi = 4.0 * std::f64::consts::PI;

    if class == CausalClass::B5StrictTimelike && state_a.is_optimal_emitter() && state_b.is_optimal_receiver() {
        let i_theta = i_theta_closed(model, &pair.alice, &pair.bob)?;
        // Ci is accurate to ~1e-13 absolute per evaluation; propagate
        // through the product conservatively.
        let err_est = 1e-12 * (1.0 + i_theta.abs()) / four_pi;
        return Ok(SignalingResult {
            i_delta: 0.0,
            i_theta,
            s2: i_theta / four_pi,
            causal_class: class,
            err_est,
            method: Method::ClosedForm,
        });
    }

    let windows = ConformalWindows::prepare(model, pair)?;
    let omega_a = pair.alice.gap;
    let omega_b = pair.bob.gap;
    // Weights scaled so the generalized integrals reduce exactly to the
    // cosine-weighted ones for the reference states.
    let wa = |t: f64| 2.0 * state_a.emitter_weight(omega_a, t);
    let wb = |t: f64| 2.0 * state_b.receiver_weight(omega_b, t);

    let delta = delta_overlap_integral(model, pair, &windows, wa, wb, spec)?;
    let theta = match class {
        CausalClass::B1Spacelike => Quadrature { value: 0.0, err_est: 0.0 },
        CausalClass::B5StrictTimelike => theta_factorized_integral(model, pair, wa, wb, spec)?,
        _ => theta_clipped_integral(model, pair, &windows, wa, wb, spec)?,
    };

    Ok(SignalingResult {
        i_delta: delta.value,
        i_theta: theta.value,
        s2: (delta.value + theta.value) / four_pi,
        causal_class: class,
        err_est: (delta.err_est + theta.err_est) / four_pi,
        method: Method::Quadrature,
    })
}
