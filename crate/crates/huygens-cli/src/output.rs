//! CSV and JSON rendering of evaluations, sweeps and timing records.

use serde::Serialize;

use huygens_core::{
    max_timelike_comoving_separation, min_timelike_switch_on_comoving, min_timelike_switch_on_proper,
    CosmologyModel,
};

use crate::config::RunConfig;
use crate::run::{EvalError, Evaluation, SweepRow};

pub const CSV_HEADER_PREFIX: &str = "# huygens-channel v";

/// Full 17-significant-digit decimal rendering; reproducibility outranks
/// file size.
fn fmt_float(x: f64) -> String {
    format!("{x:.16e}")
}

fn csv_quote(s: &str) -> String {
    format!("\"{}\"", s.replace('"', "\"\""))
}

pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut out = String::new();
    out.push_str(CSV_HEADER_PREFIX);
    out.push_str(env!("CARGO_PKG_VERSION"));
    out.push('\n');
    out.push_str("sweep_value,causal_class,I_delta,I_theta,S2,capacity,err_est,method,error\n");
    for row in rows {
        match &row.outcome {
            Ok(eval) => {
                out.push_str(&format!(
                    "{},{},{},{},{},{},{},{},\n",
                    fmt_float(row.sweep_value),
                    eval.causal_class,
                    fmt_float(eval.i_delta),
                    fmt_float(eval.i_theta),
                    fmt_float(eval.s2),
                    fmt_float(eval.capacity),
                    fmt_float(eval.err_est),
                    eval.method,
                ));
            }
            Err(e) => {
                out.push_str(&format!(
                    "{},,,,,,,,{}\n",
                    fmt_float(row.sweep_value),
                    csv_quote(&e.to_string())
                ));
            }
        }
    }
    out
}

#[derive(Serialize)]
struct SweepRowRecord<'a> {
    sweep_value: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    #[serde(flatten)]
    evaluation: Option<&'a Evaluation>,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
}

pub fn sweep_json(rows: &[SweepRow]) -> String {
    let records: Vec<SweepRowRecord> = rows
        .iter()
        .map(|row| match &row.outcome {
            Ok(eval) => SweepRowRecord { sweep_value: row.sweep_value, evaluation: Some(eval), error: None },
            Err(e) => SweepRowRecord {
                sweep_value: row.sweep_value,
                evaluation: None,
                error: Some(e.to_string()),
            },
        })
        .collect();
    let mut s = serde_json::to_string_pretty(&records).expect("serializable rows");
    s.push('\n');
    s
}

pub fn evaluation_json(eval: &Evaluation) -> String {
    let mut s = serde_json::to_string_pretty(eval).expect("serializable evaluation");
    s.push('\n');
    s
}

#[derive(Serialize)]
struct TimingSide {
    t_min_comoving: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    t_min_comoving_unreachable: Option<String>,
    t_min_proper: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    t_min_proper_unreachable: Option<String>,
    r_max: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    r_max_unreachable: Option<String>,
}

#[derive(Serialize)]
struct ScaleSample {
    t: f64,
    matter: f64,
    lambda: f64,
}

/// The data behind the signal-timing figure: both normalized models'
/// scale-factor curves plus the earliest-contact lines at the configured
/// separation (used both as comoving R and as proper P).
#[derive(Serialize)]
pub struct TimingRecord {
    anchor: f64,
    alice_switch_on: f64,
    duration: f64,
    bob_switch_on: f64,
    separation_value: f64,
    matter: TimingSide,
    lambda: TimingSide,
    scale_factors: Vec<ScaleSample>,
}

fn timing_side(model: &CosmologyModel, config: &RunConfig) -> TimingSide {
    let t_ia = config.alice.switch_on;
    let delta = config.alice.duration;
    let sep = config.separation_value;
    let (t_min_comoving, t_min_comoving_unreachable) =
        match min_timelike_switch_on_comoving(model, t_ia, delta, sep) {
            Ok(v) => (Some(v), None),
            Err(e) => (None, Some(e.to_string())),
        };
    let (t_min_proper, t_min_proper_unreachable) =
        match min_timelike_switch_on_proper(model, t_ia, delta, sep) {
            Ok(v) => (Some(v), None),
            Err(e) => (None, Some(e.to_string())),
        };
    let (r_max, r_max_unreachable) =
        match max_timelike_comoving_separation(model, t_ia, delta, config.bob.switch_on) {
            Ok(v) => (Some(v), None),
            Err(e) => (None, Some(e.to_string())),
        };
    TimingSide {
        t_min_comoving,
        t_min_comoving_unreachable,
        t_min_proper,
        t_min_proper_unreachable,
        r_max,
        r_max_unreachable,
    }
}

pub fn timing_record(config: &RunConfig) -> Result<TimingRecord, EvalError> {
    let (matter, lambda) =
        huygens_core::normalized_pair(config.anchor).map_err(|e| EvalError::Config(e.to_string()))?;
    let matter_side = timing_side(&matter, config);
    let lambda_side = timing_side(&lambda, config);

    let t_lo = config.anchor / 10.0;
    let mut t_hi = config.bob.switch_on.max(config.anchor * 3.0);
    for side in [&matter_side, &lambda_side] {
        for v in [side.t_min_comoving, side.t_min_proper].into_iter().flatten() {
            t_hi = t_hi.max(v);
        }
    }
    t_hi *= 1.2;
    let n = 101;
    let mut scale_factors = Vec::with_capacity(n);
    for i in 0..n {
        let t = t_lo + (t_hi - t_lo) * (i as f64) / ((n - 1) as f64);
        let a_m = matter.scale_factor(t).map_err(|e| EvalError::Config(e.to_string()))?;
        let a_l = lambda.scale_factor(t).map_err(|e| EvalError::Config(e.to_string()))?;
        scale_factors.push(ScaleSample { t, matter: a_m, lambda: a_l });
    }

    Ok(TimingRecord {
        anchor: config.anchor,
        alice_switch_on: config.alice.switch_on,
        duration: config.alice.duration,
        bob_switch_on: config.bob.switch_on,
        separation_value: config.separation_value,
        matter: matter_side,
        lambda: lambda_side,
        scale_factors,
    })
}

pub fn timing_json(record: &TimingRecord) -> String {
    let mut s = serde_json::to_string_pretty(record).expect("serializable timing record");
    s.push('\n');
    s
}
