//! Evaluation of one configuration point and the sweep driver.

use rayon::prelude::*;
use serde::Serialize;

use huygens_core::{
    capacity_from_signaling, s2, CapacityError, CausalClass, DetectorState, Method, QuadratureSpec,
    SignalingError, SignalingResult,
};

use crate::config::RunConfig;

/// Failure of a single evaluation, split by exit-code class.
#[derive(Debug, Clone)]
pub enum EvalError {
    /// Bad inputs: domain violations, invalid detector windows.
    Config(String),
    /// The numerics gave up: quadrature non-convergence and friends.
    Numerical(String),
}

impl std::fmt::Display for EvalError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            EvalError::Config(m) | EvalError::Numerical(m) => f.write_str(m),
        }
    }
}

fn classify_signaling_error(e: SignalingError) -> EvalError {
    match e {
        SignalingError::Quadrature(_) => EvalError::Numerical(e.to_string()),
        _ => EvalError::Config(e.to_string()),
    }
}

/// One evaluated configuration: signaling estimator, capacity, warnings.
#[derive(Debug, Clone, Serialize)]
pub struct Evaluation {
    pub causal_class: CausalClass,
    pub i_delta: f64,
    pub i_theta: f64,
    pub s2: f64,
    pub capacity: f64,
    pub err_est: f64,
    pub method: Method,
    pub warnings: Vec<String>,
}

pub fn evaluate(config: &RunConfig) -> Result<Evaluation, EvalError> {
    let model = config.model().map_err(|e| EvalError::Config(e.to_string()))?;
    let pair = config.pair().map_err(|e| EvalError::Config(e.to_string()))?;
    let mut warnings = Vec::new();
    let (_, proper_warn) = pair
        .comoving_separation(&model)
        .map_err(|e| EvalError::Config(e.to_string()))?;
    if proper_warn {
        warnings.push(
            "constant proper separation is only a good approximation for durations much shorter \
             than the emitter-receiver gap"
                .to_string(),
        );
    }

    let spec = QuadratureSpec::default();
    let signaling: SignalingResult = s2(
        &model,
        &pair,
        &DetectorState::optimal_emitter(),
        &DetectorState::optimal_receiver(),
        &spec,
    )
    .map_err(classify_signaling_error)?;

    let capacity = capacity_from_signaling(
        &signaling,
        &DetectorState::optimal_receiver(),
        pair.alice.coupling,
        pair.bob.coupling,
    )
    .map_err(|e| match e {
        CapacityError::Signaling(inner) => classify_signaling_error(inner),
        other => EvalError::Config(other.to_string()),
    })?;
    if capacity.beyond_perturbative {
        warnings.push(
            "capacity exceeds 0.1 bits: the leading-order perturbative expression is no longer \
             trustworthy"
                .to_string(),
        );
    }

    Ok(Evaluation {
        causal_class: signaling.causal_class,
        i_delta: signaling.i_delta,
        i_theta: signaling.i_theta,
        s2: signaling.s2,
        capacity: capacity.capacity_bits,
        err_est: capacity.err_est.max(signaling.err_est),
        method: signaling.method,
        warnings,
    })
}

/// One sweep row: the varied value plus the evaluation or its error.
#[derive(Debug, Clone)]
pub struct SweepRow {
    pub sweep_value: f64,
    pub outcome: Result<Evaluation, EvalError>,
}

/// Evaluate the whole sweep. Rows are independent and evaluated in
/// parallel; the output order is the grid order regardless of the
/// parallelism degree, so sweeps are bitwise reproducible.
pub fn run_sweep(config: &RunConfig, threads: usize) -> Result<Vec<SweepRow>, EvalError> {
    let values = config.sweep_values();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| EvalError::Config(format!("failed to build thread pool: {e}")))?;
    Ok(pool.install(|| {
        values
            .par_iter()
            .map(|&value| SweepRow {
                sweep_value: value,
                outcome: evaluate(&config.with_sweep_value(value)),
            })
            .collect()
    }))
}

/// Sweep parallelism from HUYGENS_THREADS (0 or unset = automatic).
pub fn threads_from_env() -> usize {
    std::env::var("HUYGENS_THREADS")
        .ok()
        .and_then(|s| s.parse::<usize>().ok())
        .unwrap_or(0)
}
