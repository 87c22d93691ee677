//! Leading-order Shannon capacity of the induced binary channel.
//!
//! C = (λ_A² λ_B² / (8 ln 2)) (S₂ / (|α_B||β_B|))² bits per channel use.
//!
//! The cosmology-specialized capacities are built strictly by composing
//! this formula with the closed-form I_θ expressions, never typed in from
//! their final printed shapes; that keeps every route through the code
//! algebraically consistent.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::causality::DetectorConfig;
use crate::signaling::{
    i_theta_closed_lambda, i_theta_closed_matter, i_theta_closed_matter_approx, DetectorState,
    Method, SignalingError, SignalingResult,
};

#[derive(Debug, Clone, Error, PartialEq)]
pub enum CapacityError {
    #[error("receiver state has no coherence (|α||β| = 0); the leading-order capacity is undefined")]
    NoReceiverCoherence,
    #[error(transparent)]
    Signaling(#[from] SignalingError),
}

/// Capacity in bits per use, with the estimator value and normalization
/// that produced it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CapacityResult {
    pub capacity_bits: f64,
    pub s2_used: f64,
    /// Multiplier of S₂²: λ_A² λ_B² / (8 ln 2 |α_B|²|β_B|²).
    pub prefactor: f64,
    pub method: Method,
    pub err_est: f64,
    /// Raised when C > 0.1 and the leading perturbative order can no
    /// longer be trusted.
    pub beyond_perturbative: bool,
}

const PERTURBATIVE_LIMIT: f64 = 0.1;

fn capacity_from_parts(
    s2: f64,
    err_s2: f64,
    method: Method,
    state_b: &DetectorState,
    lambda_a: f64,
    lambda_b: f64,
) -> Result<CapacityResult, CapacityError> {
    let coherence = state_b.coherence();
    if coherence == 0.0 {
        return Err(CapacityError::NoReceiverCoherence);
    }
    let prefactor = (lambda_a * lambda_a * lambda_b * lambda_b)
        / (8.0 * std::f64::consts::LN_2 * coherence * coherence);
    let capacity_bits = prefactor * s2 * s2;
    Ok(CapacityResult {
        capacity_bits,
        s2_used: s2,
        prefactor,
        method,
        err_est: prefactor * 2.0 * s2.abs() * err_s2,
        beyond_perturbative: capacity_bits > PERTURBATIVE_LIMIT,
    })
}

/// Capacity from a bare estimator value.
pub fn channel_capacity(
    s2: f64,
    state_b: &DetectorState,
    lambda_a: f64,
    lambda_b: f64,
) -> Result<CapacityResult, CapacityError> {
    capacity_from_parts(s2, 0.0, Method::ClosedForm, state_b, lambda_a, lambda_b)
}

/// Capacity from a full signaling evaluation, propagating its error
/// estimate and method tag.
pub fn capacity_from_signaling(
    signaling: &SignalingResult,
    state_b: &DetectorState,
    lambda_a: f64,
    lambda_b: f64,
) -> Result<CapacityResult, CapacityError> {
    capacity_from_parts(
        signaling.s2,
        signaling.err_est,
        signaling.method,
        state_b,
        lambda_a,
        lambda_b,
    )
}

const FOUR_PI: f64 = 4.0 * std::f64::consts::PI;

/// Strictly timelike matter capacity: channel_capacity composed with the
/// closed-form I_θ (Ci differences, or squared logarithms when gapless).
pub fn capacity_matter_closed(
    det_a: &DetectorConfig,
    det_b: &DetectorConfig,
    lambda_a: f64,
    lambda_b: f64,
) -> Result<CapacityResult, CapacityError> {
    let i_theta = i_theta_closed_matter(det_a, det_b)?;
    channel_capacity(i_theta / FOUR_PI, &DetectorState::optimal_receiver(), lambda_a, lambda_b)
}

/// Same composition through the small-Δ approximate I_θ
/// (∝ Δ⁴ cos²cos²/(T_iA T_iB)² at the capacity level).
pub fn capacity_matter_closed_approx(
    det_a: &DetectorConfig,
    det_b: &DetectorConfig,
    lambda_a: f64,
    lambda_b: f64,
) -> Result<CapacityResult, CapacityError> {
    let i_theta = i_theta_closed_matter_approx(det_a, det_b)?;
    channel_capacity(i_theta / FOUR_PI, &DetectorState::optimal_receiver(), lambda_a, lambda_b)
}

/// Strictly timelike Lambda capacity: channel_capacity composed with the
/// closed-form I_θ, hence ∝ Λ² with a purely periodic dependence on the
/// receiver switch-on time.
pub fn capacity_lambda_closed(
    det_a: &DetectorConfig,
    det_b: &DetectorConfig,
    sqrt_lambda: f64,
    lambda_a: f64,
    lambda_b: f64,
) -> Result<CapacityResult, CapacityError> {
    let i_theta = i_theta_closed_lambda(det_a, det_b, sqrt_lambda);
    channel_capacity(i_theta / FOUR_PI, &DetectorState::optimal_receiver(), lambda_a, lambda_b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::causality::{CommPair, Separation};
    use crate::cosmology::{normalized_pair, REFERENCE_ANCHOR};
    use crate::numerics::{find_root_bracketed, QuadratureSpec};
    use crate::signaling::{i_theta, s2};
    use num_complex::Complex64;

    fn det(omega: f64, t_i: f64) -> DetectorConfig {
        DetectorConfig::new(omega, 1.0, t_i, 0.01).unwrap()
    }

    #[test]
    fn zero_estimator_means_zero_capacity() {
        let c = channel_capacity(0.0, &DetectorState::optimal_receiver(), 1.0, 1.0).unwrap();
        assert_eq!(c.capacity_bits, 0.0);
        assert!(!c.beyond_perturbative);
    }

    #[test]
    fn unit_estimator_reference_value() {
        // S₂ = 1/(4π) with unit couplings: C = 1/(32 π² ln 2)
        let s2 = 1.0 / FOUR_PI;
        let c = channel_capacity(s2, &DetectorState::optimal_receiver(), 1.0, 1.0).unwrap();
        assert!((c.capacity_bits - 0.004_567_986_536_806_271).abs() < 1e-17);
    }

    #[test]
    fn coupling_scaling_is_quartic() {
        let c1 = channel_capacity(0.3, &DetectorState::optimal_receiver(), 1.0, 1.0).unwrap();
        let c2 = channel_capacity(0.3, &DetectorState::optimal_receiver(), 2.0, 2.0).unwrap();
        assert_eq!(c2.capacity_bits, 16.0 * c1.capacity_bits);
        assert!(c2.beyond_perturbative);
    }

    #[test]
    fn rejects_receiver_without_coherence() {
        let excited = DetectorState::new(Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)).unwrap();
        assert!(matches!(
            channel_capacity(0.1, &excited, 1.0, 1.0),
            Err(CapacityError::NoReceiverCoherence)
        ));
    }

    #[test]
    fn capacity_invariant_under_receiver_phase() {
        let base = DetectorState::optimal_receiver();
        let phase = Complex64::from_polar(1.0, 0.9);
        let rotated = DetectorState::new(base.alpha() * phase, base.beta() * phase).unwrap();
        let c1 = channel_capacity(0.2, &base, 1.0, 1.0).unwrap();
        let c2 = channel_capacity(0.2, &rotated, 1.0, 1.0).unwrap();
        assert!((c1.capacity_bits - c2.capacity_bits).abs() <= 1e-15 * c1.capacity_bits);
    }

    #[test]
    fn matter_composition_identity() {
        let a = det(10.0, REFERENCE_ANCHOR);
        let b = det(10.0, 2.0);
        let composed = capacity_matter_closed(&a, &b, 1.0, 1.0).unwrap();
        let direct = channel_capacity(
            i_theta_closed_matter(&a, &b).unwrap() / FOUR_PI,
            &DetectorState::optimal_receiver(),
            1.0,
            1.0,
        )
        .unwrap();
        assert_eq!(composed.capacity_bits, direct.capacity_bits);
    }

    #[test]
    fn gapless_decay_ratio() {
        let a = det(0.0, REFERENCE_ANCHOR);
        let c_2 = capacity_matter_closed(&a, &det(0.0, 2.0), 1.0, 1.0).unwrap();
        let c_20 = capacity_matter_closed(&a, &det(0.0, 20.0), 1.0, 1.0).unwrap();
        let expected = ((20.01f64 / 20.0).ln() / (2.01f64 / 2.0).ln()).powi(2);
        let ratio = c_20.capacity_bits / c_2.capacity_bits;
        assert!(((ratio - expected) / expected).abs() < 1e-12, "{ratio} vs {expected}");
    }

    #[test]
    fn matter_envelope_decays_as_inverse_square() {
        // gapless C(aT)/C(T) -> a^{-2} as Δ/T -> 0
        let a = det(0.0, REFERENCE_ANCHOR);
        let c_10 = capacity_matter_closed(&a, &det(0.0, 10.0), 1.0, 1.0).unwrap();
        let c_100 = capacity_matter_closed(&a, &det(0.0, 100.0), 1.0, 1.0).unwrap();
        let ratio = c_100.capacity_bits / c_10.capacity_bits;
        assert!((ratio - 0.01).abs() < 0.02 * 0.01, "ratio {ratio}");
    }

    #[test]
    fn lambda_no_decay_over_periods() {
        let omega = 10.0;
        let a = det(omega, REFERENCE_ANCHOR);
        let period = std::f64::consts::PI / omega;
        let c_ref = capacity_lambda_closed(&a, &det(omega, 2.0), 1.0, 1.0, 1.0).unwrap();
        for k in [1.0, 10.0, 100.0] {
            let c_k = capacity_lambda_closed(&a, &det(omega, 2.0 + k * period), 1.0, 1.0, 1.0).unwrap();
            let rel = ((c_k.capacity_bits - c_ref.capacity_bits) / c_ref.capacity_bits).abs();
            assert!(rel < 1e-10, "k = {k}: rel {rel}");
        }
    }

    #[test]
    fn lambda_squared_scaling() {
        let a = det(10.0, REFERENCE_ANCHOR);
        let b = det(10.0, 2.0);
        let c1 = capacity_lambda_closed(&a, &b, 1.0, 1.0, 1.0).unwrap();
        let c2 = capacity_lambda_closed(&a, &b, 2.0, 1.0, 1.0).unwrap();
        assert_eq!(c2.capacity_bits, 16.0 * c1.capacity_bits);
    }

    #[test]
    fn oscillation_zeros_match_between_paths() {
        // Zeros of the closed-form receiver factor ΔCi(T_iB) and of the
        // quadrature factor must coincide.
        let (m, _) = normalized_pair(REFERENCE_ANCHOR).unwrap();
        let omega = 10.0;
        let closed_factor = |t: f64| {
            let b = det(omega, t);
            i_theta_closed_matter(&det(omega, REFERENCE_ANCHOR), &b).unwrap()
        };
        let quad_factor = |t: f64| {
            let pair = CommPair::new(
                det(omega, REFERENCE_ANCHOR),
                det(omega, t),
                Separation::Comoving { r: 0.1 },
            )
            .unwrap();
            i_theta(&m, &pair, &QuadratureSpec::default()).unwrap().value
        };
        // cos(Ω(T + Δ/2)) ≈ 0 near T = (π/2 + 6π)/Ω - Δ/2 ≈ 2.037
        let z_closed = find_root_bracketed(closed_factor, 2.0, 2.1, 1e-12, 200).unwrap();
        let z_quad = find_root_bracketed(quad_factor, 2.0, 2.1, 1e-10, 200).unwrap();
        assert!((z_closed - z_quad).abs() < 1e-6, "{z_closed} vs {z_quad}");
    }

    #[test]
    fn capacity_from_signaling_propagates_method() {
        let (m, _) = normalized_pair(REFERENCE_ANCHOR).unwrap();
        let pair = CommPair::new(det(10.0, REFERENCE_ANCHOR), det(10.0, 2.0), Separation::Comoving { r: 0.5 })
            .unwrap();
        let sig = s2(
            &m,
            &pair,
            &DetectorState::optimal_emitter(),
            &DetectorState::optimal_receiver(),
            &QuadratureSpec::default(),
        )
        .unwrap();
        let cap = capacity_from_signaling(&sig, &DetectorState::optimal_receiver(), 1.0, 1.0).unwrap();
        assert_eq!(cap.method, Method::ClosedForm);
        assert!(cap.capacity_bits > 0.0);
        assert!(cap.err_est >= 0.0);
    }
}
