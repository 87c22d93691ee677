//! Causal relationship between the two detectors' switching windows and
//! the signal-timing solvers.
//!
//! In conformal time light rays have unit slope, so the set of conformal
//! times at comoving distance R that are in lightlike contact with the
//! emitter's window [η_iA, η_fA] is the band [η_iA + R, η_fA + R]. The
//! causal class of a configuration is fixed by where the receiver's window
//! sits relative to that band.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cosmology::{CosmologyError, CosmologyModel};
use crate::numerics::{expand_bracket_upward, find_root_bracketed, RootError};

#[derive(Debug, Clone, Error, PartialEq)]
pub enum CausalityError {
    #[error(transparent)]
    Cosmology(#[from] CosmologyError),
    #[error(transparent)]
    Root(#[from] RootError),
    #[error("timelike contact unreachable: {0}")]
    Unreachable(String),
    #[error("receiver must switch on after the emitter switches off (T_iB = {t_ib}, T_fA = {t_fa})")]
    WindowOrder { t_ib: f64, t_fa: f64 },
    #[error("invalid detector parameter: {0}")]
    InvalidDetector(String),
}

/// A two-level detector: energy gap, coupling strength, and the sudden
/// switching window [T_i, T_i + Δ] in comoving time.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DetectorConfig {
    pub gap: f64,
    pub coupling: f64,
    pub switch_on: f64,
    pub duration: f64,
}

impl DetectorConfig {
    pub fn new(gap: f64, coupling: f64, switch_on: f64, duration: f64) -> Result<Self, CausalityError> {
        if !(gap >= 0.0) {
            return Err(CausalityError::InvalidDetector(format!("gap must be nonnegative, got {gap}")));
        }
        if !(duration > 0.0) {
            return Err(CausalityError::InvalidDetector(format!(
                "duration must be positive, got {duration}"
            )));
        }
        Ok(Self { gap, coupling, switch_on, duration })
    }

    pub fn switch_off(&self) -> f64 {
        self.switch_on + self.duration
    }

    /// Window endpoints in conformal time; errors if either end leaves the
    /// model domain.
    pub fn conformal_window(&self, model: &CosmologyModel) -> Result<(f64, f64), CausalityError> {
        Ok((
            model.conformal_time(self.switch_on)?,
            model.conformal_time(self.switch_off())?,
        ))
    }
}

/// Spatial separation of the pair: fixed comoving distance, or a proper
/// distance referenced to the receiver's switch-on time.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Separation {
    Comoving { r: f64 },
    Proper { p: f64 },
}

/// Emitter (Alice), receiver (Bob) and their spatial separation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CommPair {
    pub alice: DetectorConfig,
    pub bob: DetectorConfig,
    pub separation: Separation,
}

impl CommPair {
    pub fn new(alice: DetectorConfig, bob: DetectorConfig, separation: Separation) -> Result<Self, CausalityError> {
        let value = match separation {
            Separation::Comoving { r } => r,
            Separation::Proper { p } => p,
        };
        if !(value >= 0.0) {
            return Err(CausalityError::InvalidDetector(format!(
                "separation must be nonnegative, got {value}"
            )));
        }
        Ok(Self { alice, bob, separation })
    }

    /// Comoving separation used by every downstream formula, converting a
    /// proper separation through R = P/a(T_iB). The boolean flags a
    /// configuration where the constant-proper approximation is suspect
    /// (window durations not small against the temporal gap).
    pub fn comoving_separation(&self, model: &CosmologyModel) -> Result<(f64, bool), CausalityError> {
        match self.separation {
            Separation::Comoving { r } => Ok((r, false)),
            Separation::Proper { p } => {
                let r = comoving_from_proper(model, p, self.bob.switch_on)?;
                let delta = self.alice.duration.max(self.bob.duration);
                let gap = self.bob.switch_on - self.alice.switch_off();
                Ok((r, delta > 0.01 * gap))
            }
        }
    }
}

/// The five causal relationships of the receiver's window to the
/// emitter's light band, ordered from strictly spacelike to strictly
/// timelike.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CausalClass {
    #[serde(rename = "B1_Spacelike")]
    B1Spacelike,
    #[serde(rename = "B2_EnterLightcone")]
    B2EnterLightcone,
    #[serde(rename = "B3_StraddleLightcone")]
    B3StraddleLightcone,
    #[serde(rename = "B4_LightAndTimelike")]
    B4LightAndTimelike,
    #[serde(rename = "B5_StrictTimelike")]
    B5StrictTimelike,
}

impl std::fmt::Display for CausalClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            CausalClass::B1Spacelike => "B1_Spacelike",
            CausalClass::B2EnterLightcone => "B2_EnterLightcone",
            CausalClass::B3StraddleLightcone => "B3_StraddleLightcone",
            CausalClass::B4LightAndTimelike => "B4_LightAndTimelike",
            CausalClass::B5StrictTimelike => "B5_StrictTimelike",
        };
        f.write_str(s)
    }
}

// Relative half-width of the lightlike tie band. Conformal times are
// reconstructed through cube roots and logarithms, so exact float equality
// on the light cone is not reproducible; anything inside a few hundred
// ulps of the boundary counts as touching it.
const TIE_EPS: f64 = 1e-13;

/// Classify the causal relationship of the pair's switching windows.
///
/// Boundary cases (window endpoint on a light line) resolve to the
/// lightlike-touching class, never to B1/B5: the delta part of the
/// commutator has support exactly there. A receiver window strictly inside
/// the band is in lightlike contact throughout and timelike contact with
/// the early part of the emitter's window, hence B4.
pub fn classify(model: &CosmologyModel, pair: &CommPair) -> Result<CausalClass, CausalityError> {
    let (eta_ia, eta_fa) = pair.alice.conformal_window(model)?;
    let (eta_ib, eta_fb) = pair.bob.conformal_window(model)?;
    let (r, _) = pair.comoving_separation(model)?;
    Ok(classify_windows(eta_ia, eta_fa, eta_ib, eta_fb, r))
}

/// Classification on bare conformal-time endpoints.
pub fn classify_windows(eta_ia: f64, eta_fa: f64, eta_ib: f64, eta_fb: f64, r: f64) -> CausalClass {
    let band_lo = eta_ia + r;
    let band_hi = eta_fa + r;
    let scale = band_lo.abs().max(band_hi.abs()).max(eta_ib.abs()).max(eta_fb.abs()).max(1e-300);
    let tol = TIE_EPS * scale;

    if eta_fb < band_lo - tol {
        return CausalClass::B1Spacelike;
    }
    if eta_ib > band_hi + tol {
        return CausalClass::B5StrictTimelike;
    }
    let starts_below = eta_ib < band_lo - tol;
    let ends_above = eta_fb > band_hi + tol;
    match (starts_below, ends_above) {
        (true, true) => CausalClass::B3StraddleLightcone,
        (true, false) => CausalClass::B2EnterLightcone,
        (false, true) => CausalClass::B4LightAndTimelike,
        (false, false) => CausalClass::B4LightAndTimelike,
    }
}

/// Earliest receiver switch-on time with strict timelike contact at fixed
/// comoving separation: t(η(T_iA + Δ) + R).
pub fn min_timelike_switch_on_comoving(
    model: &CosmologyModel,
    t_ia: f64,
    delta: f64,
    r: f64,
) -> Result<f64, CausalityError> {
    let eta_target = model.conformal_time(t_ia + delta)? + r;
    match model {
        CosmologyModel::Lambda { .. } if eta_target >= 0.0 => Err(CausalityError::Unreachable(format!(
            "light from the emitter never crosses comoving distance {r}: \
             required conformal time {eta_target} is beyond the horizon"
        ))),
        _ => Ok(model.comoving_time(eta_target)?),
    }
}

/// Largest comoving separation with strict timelike contact at fixed
/// receiver switch-on: η(T_iB) - η(T_iA + Δ).
pub fn max_timelike_comoving_separation(
    model: &CosmologyModel,
    t_ia: f64,
    delta: f64,
    t_ib: f64,
) -> Result<f64, CausalityError> {
    let t_fa = t_ia + delta;
    if t_ib <= t_fa {
        return Err(CausalityError::WindowOrder { t_ib, t_fa });
    }
    Ok(model.conformal_time(t_ib)? - model.conformal_time(t_fa)?)
}

/// Earliest receiver switch-on time with strict timelike contact at fixed
/// proper separation: the root of η(T) = η(T_iA + Δ) + P/a(T).
///
/// η(T) - P/a(T) is strictly increasing in T for both models, so the root
/// is unique when it exists. Solved by the bracketed hybrid rather than
/// the model-specific closed forms (the matter cubic and the Lambda
/// logarithm are kept as cross-checks in the tests).
pub fn min_timelike_switch_on_proper(
    model: &CosmologyModel,
    t_ia: f64,
    delta: f64,
    p: f64,
) -> Result<f64, CausalityError> {
    let t_fa = t_ia + delta;
    let eta_fa = model.conformal_time(t_fa)?;
    if p == 0.0 {
        return Ok(t_fa);
    }
    let g = |t: f64| match (model.conformal_time(t), model.scale_factor(t)) {
        (Ok(eta), Ok(a)) => eta - eta_fa - p / a,
        _ => f64::NAN,
    };
    let step0 = match model {
        CosmologyModel::Matter { .. } => 10.0 * (1.0 + p),
        CosmologyModel::Lambda { sqrt_lambda, .. } => 10.0 * (1.0 + p) * (1.0 + 1.0 / sqrt_lambda),
    };
    let (lo, hi) = expand_bracket_upward(&g, t_fa, step0, 600)
        .map_err(|_| CausalityError::Unreachable(format!("no timelike contact at proper separation {p}")))?;
    Ok(find_root_bracketed(g, lo, hi, 1e-12, 400)?)
}

/// Comoving separation equivalent to proper separation P at the receiver
/// switch-on time: R = P/a(T_iB).
pub fn comoving_from_proper(model: &CosmologyModel, p: f64, t_ib: f64) -> Result<f64, CausalityError> {
    Ok(p / model.scale_factor(t_ib)?)
}
