//! Spatially flat FRW background geometry for the two perfect-fluid
//! cosmologies with closed-form commutators: dust matter (w = 0) and a
//! cosmological constant (w = -1).
//!
//! Matter:  a(t) = (9 κ₁ t²)^(1/3),  η(t) = (3t/κ₁)^(1/3),  t ∈ (0, ∞).
//! Lambda:  a(t) = κ₂ e^(√|Λ| t),    η(t) = -e^(-√|Λ| t)/(√|Λ| κ₂),
//!          t ∈ (-∞, ∞), η ∈ (-∞, 0).
//!
//! The matter universe is born out of a Big-Bang singularity at t = 0;
//! crossing that boundary is a domain error, not a clamp.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum CosmologyError {
    #[error("comoving time {t} outside the {model} domain")]
    TimeOutOfDomain { model: &'static str, t: f64 },
    #[error("conformal time {eta} outside the {model} range")]
    ConformalTimeOutOfRange { model: &'static str, eta: f64 },
    #[error("model parameter {name} must be positive, got {value}")]
    NonPositiveParameter { name: &'static str, value: f64 },
}

/// One of the two fluid-dominated FRW backgrounds.
///
/// The pair is a closed enum rather than an open trait: only these two
/// equations of state enter the closed-form commutator, and every formula
/// downstream dispatches on which one is in play. The mode-equation oracle
/// accepts a general fluid parameter separately.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum CosmologyModel {
    /// Dust matter (w = 0) with integration constant κ₁ > 0.
    Matter { kappa1: f64 },
    /// Cosmological constant (w = -1) with κ₂ > 0 and √|Λ| > 0.
    Lambda { kappa2: f64, sqrt_lambda: f64 },
}

impl CosmologyModel {
    pub fn matter(kappa1: f64) -> Result<Self, CosmologyError> {
        if !(kappa1 > 0.0) {
            return Err(CosmologyError::NonPositiveParameter { name: "kappa1", value: kappa1 });
        }
        Ok(CosmologyModel::Matter { kappa1 })
    }

    pub fn lambda(kappa2: f64, sqrt_lambda: f64) -> Result<Self, CosmologyError> {
        if !(kappa2 > 0.0) {
            return Err(CosmologyError::NonPositiveParameter { name: "kappa2", value: kappa2 });
        }
        if !(sqrt_lambda > 0.0) {
            return Err(CosmologyError::NonPositiveParameter { name: "sqrt_lambda", value: sqrt_lambda });
        }
        Ok(CosmologyModel::Lambda { kappa2, sqrt_lambda })
    }

    pub fn name(&self) -> &'static str {
        match self {
            CosmologyModel::Matter { .. } => "matter",
            CosmologyModel::Lambda { .. } => "lambda",
        }
    }

    fn check_time(&self, t: f64) -> Result<(), CosmologyError> {
        let ok = match self {
            CosmologyModel::Matter { .. } => t > 0.0,
            CosmologyModel::Lambda { .. } => t.is_finite(),
        };
        if ok {
            Ok(())
        } else {
            Err(CosmologyError::TimeOutOfDomain { model: self.name(), t })
        }
    }

    /// Scale factor a(t).
    pub fn scale_factor(&self, t: f64) -> Result<f64, CosmologyError> {
        self.check_time(t)?;
        Ok(match self {
            CosmologyModel::Matter { kappa1 } => (9.0 * kappa1 * t * t).cbrt(),
            CosmologyModel::Lambda { kappa2, sqrt_lambda } => kappa2 * (sqrt_lambda * t).exp(),
        })
    }

    /// Conformal time η(t), strictly increasing on the model domain.
    pub fn conformal_time(&self, t: f64) -> Result<f64, CosmologyError> {
        self.check_time(t)?;
        Ok(match self {
            CosmologyModel::Matter { kappa1 } => (3.0 * t / kappa1).cbrt(),
            CosmologyModel::Lambda { kappa2, sqrt_lambda } => {
                -(-sqrt_lambda * t).exp() / (sqrt_lambda * kappa2)
            }
        })
    }

    /// Inverse of [`conformal_time`](Self::conformal_time): comoving time
    /// t(η). Matter requires η > 0, Lambda requires η < 0.
    pub fn comoving_time(&self, eta: f64) -> Result<f64, CosmologyError> {
        match self {
            CosmologyModel::Matter { kappa1 } => {
                if !(eta > 0.0) {
                    return Err(CosmologyError::ConformalTimeOutOfRange { model: self.name(), eta });
                }
                Ok(kappa1 * eta * eta * eta / 3.0)
            }
            CosmologyModel::Lambda { kappa2, sqrt_lambda } => {
                if !(eta < 0.0) {
                    return Err(CosmologyError::ConformalTimeOutOfRange { model: self.name(), eta });
                }
                Ok(-(-sqrt_lambda * kappa2 * eta).ln() / sqrt_lambda)
            }
        }
    }

    /// The horizon scale a(t)|η(t)|: the proper particle horizon 3t in the
    /// matter universe, the constant Hubble radius 1/√|Λ| in the Lambda
    /// universe.
    pub fn horizon_scale(&self, t: f64) -> Result<f64, CosmologyError> {
        self.check_time(t)?;
        Ok(self.scale_factor(t)? * self.conformal_time(t)?.abs())
    }

    /// Proper distance P = a(t) R for a comoving separation R.
    pub fn proper_distance(&self, comoving: f64, t: f64) -> Result<f64, CosmologyError> {
        Ok(self.scale_factor(t)? * comoving)
    }
}

/// Matter and Lambda models sharing a common normalization: both scale
/// factors equal 1 at `t_anchor` and both expand at the matter rate
/// ȧ = 2/(3 t_anchor) there. At the reference anchor t = 2/3 the rates are
/// exactly 1 and the constants come out κ₁ = 1/4, κ₂ = e^(-2/3), √|Λ| = 1.
pub fn normalized_pair(t_anchor: f64) -> Result<(CosmologyModel, CosmologyModel), CosmologyError> {
    if !(t_anchor > 0.0) {
        return Err(CosmologyError::TimeOutOfDomain { model: "matter", t: t_anchor });
    }
    let matter = CosmologyModel::matter(1.0 / (9.0 * t_anchor * t_anchor))?;
    let sqrt_lambda = 2.0 / (3.0 * t_anchor);
    let lambda = CosmologyModel::lambda((-sqrt_lambda * t_anchor).exp(), sqrt_lambda)?;
    Ok((matter, lambda))
}

/// The anchor time used throughout the reference figures.
pub const REFERENCE_ANCHOR: f64 = 2.0 / 3.0;

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn models() -> (CosmologyModel, CosmologyModel) {
        normalized_pair(REFERENCE_ANCHOR).unwrap()
    }

    #[test]
    fn normalized_constants_at_reference_anchor() {
        let (m, l) = models();
        match m {
            CosmologyModel::Matter { kappa1 } => assert!((kappa1 - 0.25).abs() < 1e-15),
            _ => unreachable!(),
        }
        match l {
            CosmologyModel::Lambda { kappa2, sqrt_lambda } => {
                assert!((kappa2 - (-2.0f64 / 3.0).exp()).abs() < 1e-15);
                assert!((sqrt_lambda - 1.0).abs() < 1e-15);
            }
            _ => unreachable!(),
        }
    }

    #[test]
    fn scale_factor_is_one_at_anchor() {
        let (m, l) = models();
        assert!((m.scale_factor(REFERENCE_ANCHOR).unwrap() - 1.0).abs() < 1e-12);
        assert!((l.scale_factor(REFERENCE_ANCHOR).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn expansion_rate_is_one_at_anchor() {
        // central finite difference for ȧ
        let (m, l) = models();
        let h = 1e-6;
        for model in [m, l] {
            let da = (model.scale_factor(REFERENCE_ANCHOR + h).unwrap()
                - model.scale_factor(REFERENCE_ANCHOR - h).unwrap())
                / (2.0 * h);
            assert!((da - 1.0).abs() < 1e-8, "{}: ȧ = {da}", model.name());
        }
    }

    #[test]
    fn conformal_time_examples() {
        let (m, l) = models();
        assert!((m.conformal_time(REFERENCE_ANCHOR).unwrap() - 2.0).abs() < 1e-14);
        assert!((l.conformal_time(REFERENCE_ANCHOR).unwrap() + 1.0).abs() < 1e-14);
    }

    #[test]
    fn lambda_conformal_time_approaches_zero_from_below() {
        let (_, l) = models();
        let eta = l.conformal_time(50.0).unwrap();
        assert!(eta < 0.0 && eta > -1e-20);
    }

    #[test]
    fn comoving_time_inverts_conformal_time() {
        let (m, l) = models();
        assert!((m.comoving_time(2.0).unwrap() - REFERENCE_ANCHOR).abs() < 1e-14);
        assert!((l.comoving_time(-1.0).unwrap() - REFERENCE_ANCHOR).abs() < 1e-14);
    }

    #[test]
    fn round_trip_identity_on_random_times() {
        let (m, l) = models();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..1000 {
            let t_m = rng.gen_range(1e-4..1e4f64);
            let back = m.comoving_time(m.conformal_time(t_m).unwrap()).unwrap();
            assert!((back - t_m).abs() <= 1e-12 * t_m.abs().max(1.0));

            let t_l = rng.gen_range(-20.0..20.0f64);
            let back = l.comoving_time(l.conformal_time(t_l).unwrap()).unwrap();
            assert!((back - t_l).abs() <= 1e-12 * t_l.abs().max(1.0));
        }
    }

    #[test]
    fn conformal_time_strictly_increasing() {
        let (m, l) = models();
        let mut prev_m = f64::NEG_INFINITY;
        let mut prev_l = f64::NEG_INFINITY;
        for i in 0..1000 {
            let t_m = 1e-3 + (i as f64) * 0.05;
            let t_l = -10.0 + (i as f64) * 0.02;
            let e_m = m.conformal_time(t_m).unwrap();
            let e_l = l.conformal_time(t_l).unwrap();
            assert!(e_m > prev_m && e_l > prev_l);
            prev_m = e_m;
            prev_l = e_l;
        }
    }

    #[test]
    fn hubble_rate_matches_finite_differences() {
        // matter: ȧ/a = 2/(3t), lambda: ȧ/a = √|Λ|
        let (m, l) = models();
        for &t in &[0.1f64, 0.7, 3.0, 25.0] {
            let h = 1e-6 * t.abs().max(1.0);
            let fd = (m.scale_factor(t + h).unwrap() - m.scale_factor(t - h).unwrap())
                / (2.0 * h * m.scale_factor(t).unwrap());
            let exact = 2.0 / (3.0 * t);
            assert!((fd - exact).abs() <= 1e-6 * exact.abs());
        }
        for &t in &[-3.0f64, 0.7, 12.0] {
            let h = 1e-6 * t.abs().max(1.0);
            let fd = (l.scale_factor(t + h).unwrap() - l.scale_factor(t - h).unwrap())
                / (2.0 * h * l.scale_factor(t).unwrap());
            assert!((fd - 1.0).abs() <= 1e-6);
        }
    }

    #[test]
    fn horizon_scale_values() {
        let (m, l) = models();
        assert!((m.horizon_scale(REFERENCE_ANCHOR).unwrap() - 2.0).abs() < 1e-13);
        assert!((l.horizon_scale(0.3).unwrap() - 1.0).abs() < 1e-13);
        // Lambda horizon is exactly time independent
        assert_eq!(
            l.horizon_scale(1.0).unwrap(),
            l.horizon_scale(101.0).unwrap()
        );
        // arbitrary kappa1 cancels from the matter horizon
        let other = CosmologyModel::matter(3.7).unwrap();
        assert!((other.horizon_scale(2.0).unwrap() - 6.0).abs() < 1e-12);
    }

    #[test]
    fn horizon_is_consistent_with_definition() {
        let (m, l) = models();
        for model in [m, l] {
            for &t in &[0.2, 0.9, 4.0] {
                let lhs = model.horizon_scale(t).unwrap();
                let rhs = model.scale_factor(t).unwrap() * model.conformal_time(t).unwrap().abs();
                assert!((lhs - rhs).abs() <= 1e-12 * lhs.abs());
            }
        }
    }

    #[test]
    fn proper_distance_examples() {
        let (m, l) = models();
        for model in [m, l] {
            assert!((model.proper_distance(0.5, REFERENCE_ANCHOR).unwrap() - 0.5).abs() < 1e-13);
            assert_eq!(model.proper_distance(0.0, 1.0).unwrap(), 0.0);
        }
        // lambda: a(2/3 + ln 2) = 2
        let t = REFERENCE_ANCHOR + std::f64::consts::LN_2;
        assert!((l.proper_distance(0.5, t).unwrap() - 1.0).abs() < 1e-13);
    }

    #[test]
    fn big_bang_limit_and_domain_errors() {
        let (m, _) = models();
        assert!(m.scale_factor(1e-30).unwrap() < 1e-18);
        assert!(m.scale_factor(0.0).is_err());
        assert!(m.scale_factor(-1.0).is_err());
        assert!(m.comoving_time(-2.0).is_err());
        let (_, l) = models();
        assert!(l.comoving_time(0.5).is_err());
    }
}
