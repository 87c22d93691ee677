//! Self-verification suite: every closed form is checked against an
//! independent numerical route on demand.
//!
//! The CLI `verify` subcommand runs this and reports one line per check;
//! the same reports are consumed by the integration tests.

use crate::capacity::capacity_lambda_closed;
use crate::causality::{
    max_timelike_comoving_separation, min_timelike_switch_on_comoving, min_timelike_switch_on_proper,
    CommPair, DetectorConfig, Separation,
};
use crate::commutator::{
    commutator_theta_coefficient, reconstruct_theta_part, solve_mode_ode, GreenFunctionProblem,
    SpacetimeEvent,
};
use crate::cosmology::{normalized_pair, CosmologyModel, REFERENCE_ANCHOR};
use crate::numerics::QuadratureSpec;
use crate::signaling::{i_theta, i_theta_closed, i_theta_general_2d, s2, DetectorState};

/// Outcome of one verification check.
#[derive(Debug, Clone)]
pub struct CheckReport {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl CheckReport {
    fn pass(name: &'static str, detail: String) -> Self {
        Self { name, passed: true, detail }
    }

    fn fail(name: &'static str, detail: String) -> Self {
        Self { name, passed: false, detail }
    }

    fn from_outcome(name: &'static str, worst: f64, tol: f64, detail: String) -> Self {
        if worst <= tol {
            Self::pass(name, detail)
        } else {
            Self::fail(name, detail)
        }
    }
}

/// Options for the verification run.
#[derive(Debug, Clone, Default)]
pub struct VerifyOptions {
    /// Skip the mode-equation reconstruction (the slow check).
    pub fast: bool,
    /// Test fixture: multiply the closed-form I_θ by this factor to prove
    /// the suite catches a wrong prefactor. Never set outside tests.
    pub closed_form_perturbation: Option<f64>,
}

/// Run the verification suite, returning one report per check.
pub fn run_verification(opts: &VerifyOptions) -> Vec<CheckReport> {
    let (matter, lambda) = normalized_pair(REFERENCE_ANCHOR).expect("reference normalization");
    let mut reports = vec![
        closed_vs_quadrature_grid(&matter, &lambda, opts),
        spacelike_no_signaling(&matter, &lambda),
        b5_factorization(&matter, &lambda),
        gapless_limits(),
        timing_consistency(&matter, &lambda),
        lambda_scaling(),
    ];
    if !opts.fast {
        reports.push(commutator_reconstruction(&matter, &lambda));
        reports.push(conformal_mode_solution());
    }
    reports
}

fn detector(omega: f64, t_i: f64, delta: f64) -> DetectorConfig {
    DetectorConfig::new(omega, 1.0, t_i, delta).expect("valid detector")
}

fn b5_pair(omega: f64, t_ib: f64, delta: f64, r: f64) -> CommPair {
    CommPair::new(
        detector(omega, REFERENCE_ANCHOR, delta),
        detector(omega, t_ib, delta),
        Separation::Comoving { r },
    )
    .expect("valid pair")
}

fn closed_vs_quadrature_grid(
    matter: &CosmologyModel,
    lambda: &CosmologyModel,
    opts: &VerifyOptions,
) -> CheckReport {
    let spec = QuadratureSpec::default();
    let perturbation = opts.closed_form_perturbation.unwrap_or(1.0);
    let mut worst: f64 = 0.0;
    let mut worst_at = String::new();
    for model in [matter, lambda] {
        for &omega in &[0.0, 1.0, 10.0] {
            for &delta in &[0.01, 0.05] {
                for &t_ib in &[2.0, 5.0] {
                    let pair = b5_pair(omega, t_ib, delta, 0.1);
                    let closed = match i_theta_closed(model, &pair.alice, &pair.bob) {
                        Ok(v) => v * perturbation,
                        Err(e) => return CheckReport::fail("closed_vs_quadrature_grid", e.to_string()),
                    };
                    let quad = match i_theta(model, &pair, &spec) {
                        Ok(q) => q.value,
                        Err(e) => return CheckReport::fail("closed_vs_quadrature_grid", e.to_string()),
                    };
                    let rel = ((closed - quad) / closed).abs();
                    if rel > worst {
                        worst = rel;
                        worst_at = format!("{} Ω={omega} Δ={delta} T_iB={t_ib}", model.name());
                    }
                }
            }
        }
    }
    CheckReport::from_outcome(
        "closed_vs_quadrature_grid",
        worst,
        1e-7,
        format!("worst rel diff {worst:.3e} at {worst_at} (tol 1e-7)"),
    )
}

fn spacelike_no_signaling(matter: &CosmologyModel, lambda: &CosmologyModel) -> CheckReport {
    let spec = QuadratureSpec::default();
    let emitter = DetectorState::optimal_emitter();
    let receiver = DetectorState::optimal_receiver();
    let mut worst: f64 = 0.0;
    for model in [matter, lambda] {
        for &(t_ib, r) in &[(0.7, 5.0), (1.5, 3.0), (3.0, 9.0)] {
            let pair = b5_pair(7.0, t_ib, 0.01, r);
            match s2(model, &pair, &emitter, &receiver, &spec) {
                Ok(result) => worst = worst.max(result.s2.abs()),
                Err(e) => return CheckReport::fail("spacelike_no_signaling", e.to_string()),
            }
        }
    }
    CheckReport::from_outcome(
        "spacelike_no_signaling",
        worst,
        1e-10,
        format!("max |S₂| over spacelike configurations {worst:.3e} (tol 1e-10)"),
    )
}

fn b5_factorization(matter: &CosmologyModel, lambda: &CosmologyModel) -> CheckReport {
    let spec = QuadratureSpec::default();
    let mut worst: f64 = 0.0;
    for model in [matter, lambda] {
        let pair = b5_pair(10.0, 2.0, 0.01, 0.5);
        let fact = match i_theta(model, &pair, &spec) {
            Ok(q) => q.value,
            Err(e) => return CheckReport::fail("b5_factorization", e.to_string()),
        };
        let full = match i_theta_general_2d(model, &pair, &spec) {
            Ok(q) => q.value,
            Err(e) => return CheckReport::fail("b5_factorization", e.to_string()),
        };
        worst = worst.max(((fact - full) / fact).abs());
    }
    CheckReport::from_outcome(
        "b5_factorization",
        worst,
        1e-8,
        format!("worst rel diff between factorized and θ-clipped routes {worst:.3e} (tol 1e-8)"),
    )
}

fn gapless_limits() -> CheckReport {
    let a_tiny = detector(1e-8, REFERENCE_ANCHOR, 0.01);
    let b_tiny = detector(1e-8, 2.0, 0.01);
    let a_zero = detector(0.0, REFERENCE_ANCHOR, 0.01);
    let b_zero = detector(0.0, 2.0, 0.01);
    let matter_tiny = match crate::signaling::i_theta_closed_matter(&a_tiny, &b_tiny) {
        Ok(v) => v,
        Err(e) => return CheckReport::fail("gapless_limits", e.to_string()),
    };
    let matter_zero = crate::signaling::i_theta_closed_matter(&a_zero, &b_zero).expect("gapless branch");
    let matter_rel = ((matter_tiny - matter_zero) / matter_zero).abs();

    let a_small = detector(1e-6, REFERENCE_ANCHOR, 0.01);
    let b_small = detector(1e-6, 2.0, 0.01);
    let lambda_small = crate::signaling::i_theta_closed_lambda(&a_small, &b_small, 1.0);
    let lambda_limit = 1e-4; // |Λ| Δ²
    let lambda_rel = ((lambda_small - lambda_limit) / lambda_limit).abs();

    let worst = matter_rel.max(lambda_rel);
    CheckReport::from_outcome(
        "gapless_limits",
        worst,
        1e-5,
        format!("matter Ω→0 rel {matter_rel:.3e} (tol 1e-5), Λ gapless rel {lambda_rel:.3e} (tol 1e-6)"),
    )
}

fn timing_consistency(matter: &CosmologyModel, lambda: &CosmologyModel) -> CheckReport {
    let mut worst: f64 = 0.0;
    let mut ordering_ok = true;
    for model in [matter, lambda] {
        let r_max = match max_timelike_comoving_separation(model, REFERENCE_ANCHOR, 0.01, 2.0) {
            Ok(v) => v,
            Err(e) => return CheckReport::fail("timing_consistency", e.to_string()),
        };
        let back = match min_timelike_switch_on_comoving(model, REFERENCE_ANCHOR, 0.01, r_max) {
            Ok(v) => v,
            Err(e) => return CheckReport::fail("timing_consistency", e.to_string()),
        };
        worst = worst.max((back - 2.0).abs());
        let t_p = min_timelike_switch_on_proper(model, REFERENCE_ANCHOR, 0.01, 0.5).expect("reachable");
        let t_r = min_timelike_switch_on_comoving(model, REFERENCE_ANCHOR, 0.01, 0.5).expect("reachable");
        ordering_ok &= t_p < t_r;
    }
    if !ordering_ok {
        return CheckReport::fail("timing_consistency", "proper/comoving line ordering violated".into());
    }
    CheckReport::from_outcome(
        "timing_consistency",
        worst,
        1e-10,
        format!("T_min/R_max round-trip error {worst:.3e} (tol 1e-10)"),
    )
}

fn lambda_scaling() -> CheckReport {
    let a = detector(10.0, REFERENCE_ANCHOR, 0.01);
    let b = detector(10.0, 2.0, 0.01);
    let c1 = capacity_lambda_closed(&a, &b, 1.0, 1.0, 1.0).expect("capacity");
    let c2 = capacity_lambda_closed(&a, &b, 2.0, 1.0, 1.0).expect("capacity");
    let ratio = c2.capacity_bits / c1.capacity_bits;
    CheckReport::from_outcome(
        "lambda_scaling",
        (ratio - 16.0).abs(),
        1e-12,
        format!("C(2√|Λ|)/C(√|Λ|) = {ratio} (must be 16 to 1e-12)"),
    )
}

fn commutator_reconstruction(matter: &CosmologyModel, lambda: &CosmologyModel) -> CheckReport {
    let mut worst: f64 = 0.0;
    for model in [matter, lambda] {
        let a = SpacetimeEvent::new(REFERENCE_ANCHOR, [0.0; 3]);
        let b = SpacetimeEvent::new(2.0, [0.1, 0.0, 0.0]);
        let closed = match commutator_theta_coefficient(model, &a, &b) {
            Ok(v) => v,
            Err(e) => return CheckReport::fail("commutator_reconstruction", e.to_string()),
        };
        let rec = match reconstruct_theta_part(model, &a, &b, 250.0, 0.08) {
            Ok(v) => v,
            Err(e) => return CheckReport::fail("commutator_reconstruction", e.to_string()),
        };
        worst = worst.max(((rec - closed) / closed).abs());
    }
    CheckReport::from_outcome(
        "commutator_reconstruction",
        worst,
        1e-3,
        format!("worst rel diff mode-sum vs closed form {worst:.3e} (tol 1e-3)"),
    )
}

fn conformal_mode_solution() -> CheckReport {
    let k = 5.0;
    let problem = match GreenFunctionProblem::new(0.0, 1.0 / 6.0, k, 2.0) {
        Ok(p) => p,
        Err(e) => return CheckReport::fail("conformal_mode_solution", e.to_string()),
    };
    let sol = match solve_mode_ode(&problem, (2.0, 2.0 + std::f64::consts::TAU / k), 32) {
        Ok(s) => s,
        Err(e) => return CheckReport::fail("conformal_mode_solution", e.to_string()),
    };
    let mut worst: f64 = 0.0;
    for (eta, g) in sol.etas.iter().zip(&sol.values) {
        let exact = 4.0 * std::f64::consts::PI / k * (k * (eta - 2.0)).sin();
        worst = worst.max((g - exact).abs());
    }
    CheckReport::from_outcome(
        "conformal_mode_solution",
        worst,
        1e-8,
        format!("max abs deviation from (4π/k) sin(kΔη): {worst:.3e} (tol 1e-8)"),
    )
}
