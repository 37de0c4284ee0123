//! Acceptance audit: every criterion evaluated into a serializable verdict.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::algebra::Vec3;
use crate::analysis::{
    asymptotic_tail_fit, degree, eps_regularity_sweep, estimate_blow_up_set, higgs_derivative_l2_sq,
    interior_lower_bound_check, lower_bound_thresholds, scaled_probe_set, taubes_radius, BlowUpOptions,
    REGULARITY_CONSTANT, RADIUS_BOUND_CONSTANT,
};
use crate::bps;
use crate::bubbling::{bubble_compare, make_scenario, ProfileSource, ScenarioKind};
use crate::error::Result;
use crate::fields::{hedgehog_field, multi_center_higgs, vacuum};
use crate::measures::{total_energy_with, weak_convergence_test, CardinalityVerdict, EnergyMeasure, TestFunction};
use crate::profile::RadialProfile;
use crate::quadrature::QuadConfig;
use crate::radial_solver::{bogomolnyi_residual, log_grid, shoot, solve_for_mass, ShootingProblem, INTEGRATOR_ORDER};
use crate::scalar::rel_diff;

type V3 = Vec3<f64>;

pub const CRITERION_COUNT: usize = 13;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Pass,
    Fail,
    HypothesisNotMet,
    Escaped,
    Vacuous,
}

/// One audited criterion.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerdictReport {
    pub criterion: usize,
    pub tag: String,
    pub title: String,
    pub verdict: Verdict,
    pub inputs: Value,
    pub measured: Value,
    pub tolerances: BTreeMap<String, f64>,
    pub notes: Vec<String>,
}

impl VerdictReport {
    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AuditOptions {
    pub seed: u64,
    pub quad: QuadConfig<f64>,
}

impl Default for AuditOptions {
    fn default() -> Self {
        Self {
            seed: 7,
            quad: QuadConfig::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AuditReport {
    pub seed: u64,
    pub quad_abs_tol: f64,
    pub quad_rel_tol: f64,
    /// `𝓔(BPS₁) / 4π` measured by quadrature.
    pub kappa: f64,
    pub criteria: Vec<VerdictReport>,
}

impl AuditReport {
    pub fn all_passed(&self) -> bool {
        self.criteria.iter().all(VerdictReport::passed)
    }

    pub fn failures(&self) -> Vec<&VerdictReport> {
        self.criteria.iter().filter(|c| !c.passed()).collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("audit report serializes")
    }
}

struct Outcome {
    pass: bool,
    inputs: Value,
    measured: Value,
    tolerances: Vec<(&'static str, f64)>,
    notes: Vec<String>,
}

fn finish(criterion: usize, tag: &str, title: &str, out: Result<Outcome>) -> VerdictReport {
    match out {
        Ok(o) => VerdictReport {
            criterion,
            tag: tag.into(),
            title: title.into(),
            verdict: if o.pass { Verdict::Pass } else { Verdict::Fail },
            inputs: o.inputs,
            measured: o.measured,
            tolerances: o.tolerances.into_iter().map(|(k, v)| (k.to_string(), v)).collect(),
            notes: o.notes,
        },
        Err(e) => VerdictReport {
            criterion,
            tag: tag.into(),
            title: title.into(),
            verdict: Verdict::Fail,
            inputs: Value::Null,
            measured: json!({ "error": e.to_string() }),
            tolerances: BTreeMap::new(),
            notes: vec!["evaluation raised an error".into()],
        },
    }
}

fn bps_at(m: f64, c: V3) -> crate::fields::FieldSampler<f64> {
    hedgehog_field(RadialProfile::bps(m), c)
}

/// `κ = 𝓔(BPS₁)/4π` with the integrator's relative error estimate.
pub fn measure_kappa(cfg: &QuadConfig<f64>) -> Result<(f64, f64)> {
    let t = total_energy_with(&bps_at(1.0, V3::zero()), 1.0, 0.0, cfg)?;
    Ok((t.value / (4.0 * std::f64::consts::PI), t.error_estimate / t.value))
}

/// Five-point central difference.
pub fn five_point<F: Fn(f64) -> f64>(f: &F, x: f64, h: f64) -> f64 {
    (f(x - 2.0 * h) - 8.0 * f(x - h) + 8.0 * f(x + h) - f(x + 2.0 * h)) / (12.0 * h)
}

/// Five-point differences at `h` and `h/2` combined to cancel the `h⁴` term.
pub fn richardson_derivative<F: Fn(f64) -> f64>(f: &F, x: f64, h: f64) -> f64 {
    (16.0 * five_point(f, x, h / 2.0) - five_point(f, x, h)) / 15.0
}

fn c1_closed_form() -> Result<Outcome> {
    let masses = [0.5, 1.0, 2.0, 5.0];
    let grid = log_grid(1e-3, 20.0, 400);
    let fd_grid = log_grid(0.01, 10.0, 200);
    let mut rows = Vec::new();
    let (mut worst_res, mut worst_e, mut worst_fd) = (0.0_f64, 0.0_f64, 0.0_f64);
    for &m in &masses {
        let p = RadialProfile::bps(m);
        let res = bogomolnyi_residual(&p, &grid)?;
        let mut e_err = 0.0_f64;
        let mut fd_err = 0.0_f64;
        for &r in &grid {
            e_err = e_err.max(rel_diff(bps::bps_energy_density(m, r)?, p.energy_density(r), 1e-300));
        }
        for &r in &fd_grid {
            let closed = bps::bps_energy_density(m, r)?;
            let f = |s: f64| bps::bps_antiderivative(m, s).unwrap_or(f64::NAN);
            // step in x = 2mr: truncation is set by the poles of coth at ±iπ,
            // rounding by f + 1 ~ x³ near the origin
            let x = 2.0 * m * r;
            let fd = richardson_derivative(&f, r, (0.1 * x).min(0.01) / (2.0 * m));
            fd_err = fd_err.max(rel_diff(fd, r * r * closed / m, 1e-300));
        }
        worst_res = worst_res.max(res);
        worst_e = worst_e.max(e_err);
        worst_fd = worst_fd.max(fd_err);
        rows.push(json!({ "mass": m, "bogomolnyi_residual": res, "density_rel_err": e_err, "antiderivative_fd_rel_err": fd_err }));
    }
    Ok(Outcome {
        pass: worst_res < 1e-10 && worst_e < 1e-10 && worst_fd < 1e-8,
        inputs: json!({ "masses": masses, "grid": "400 log-spaced radii on [1e-3, 20]", "fd_grid": "200 log-spaced radii on [0.01, 10]" }),
        measured: json!({ "rows": rows, "max_bogomolnyi_residual": worst_res, "max_density_rel_err": worst_e, "max_fd_rel_err": worst_fd }),
        tolerances: vec![("bogomolnyi_residual", 1e-10), ("density_rel_err", 1e-10), ("fd_rel_err", 1e-8)],
        notes: vec![],
    })
}

fn c2_energy_identity(kappa: f64, kappa_err: f64) -> Result<Outcome> {
    let masses = [1.0, 4.0, 16.0, 64.0, 256.0];
    let far = 1e9;
    let four_pi = 4.0 * std::f64::consts::PI;
    let target = four_pi * kappa;
    let f0 = bps::bps_antiderivative_at_origin::<f64>();
    let mut far_errs = Vec::new();
    let mut cut_errs = Vec::new();
    let mut values = Vec::new();
    for &m in &masses {
        let v = four_pi * (bps::bps_antiderivative(m, far)? - f0);
        values.push(v);
        far_errs.push((v - target).abs() / target);
        cut_errs.push((four_pi * (bps::bps_antiderivative(m, 1.0)? - f0) - target).abs() / target);
    }
    let floor = 1e-12;
    let halving = |e: &[f64]| e.windows(2).all(|w| w[1] <= 0.5 * w[0] || w[1] <= floor);
    // κ comes from quadrature, so its certified error counts against the budget
    let final_err = *far_errs.last().expect("non-empty") + kappa_err;
    Ok(Outcome {
        pass: halving(&far_errs) && final_err < 1e-3,
        inputs: json!({ "masses": masses, "far_radius": far, "cutoff_radius": 1.0 }),
        measured: json!({
            "kappa": kappa,
            "kappa_rel_error_estimate": kappa_err,
            "values": values,
            "final_rel_error_with_kappa_uncertainty": final_err,
            "relative_errors": far_errs,
            "cutoff_relative_errors": cut_errs,
        }),
        tolerances: vec![("rounding_floor", floor), ("step_shrink", 2.0), ("final_rel_err", 1e-3)],
        notes: vec!["f(∞) evaluated at r = 1e9; the logged cutoff sequence keeps r = 1 and converges like 1/m".into()],
    })
}

fn c3_linear_energy(cfg: &QuadConfig<f64>) -> Result<Outcome> {
    let masses = [0.5, 1.0, 2.0, 5.0];
    let totals = masses
        .iter()
        .map(|&m| total_energy_with(&bps_at(m, V3::zero()), 1.0, 0.0, cfg))
        .collect::<Result<Vec<_>>>()?;
    let per_mass: Vec<f64> = totals.iter().zip(&masses).map(|(t, m)| t.value / m).collect();
    let err_est = totals.iter().map(|t| t.error_estimate / t.value).fold(0.0, f64::max);
    let spread = per_mass.iter().map(|&v| rel_diff(v, per_mass[1], 1e-300)).fold(0.0, f64::max);
    // a pairwise spread is only certified up to both error bars
    let certified = spread + 2.0 * err_est;
    Ok(Outcome {
        pass: certified < 1e-6,
        inputs: json!({ "masses": masses }),
        measured: json!({
            "energy_over_mass": per_mass,
            "max_rel_spread": spread,
            "max_rel_error_estimate": err_est,
            "certified_spread": certified,
        }),
        tolerances: vec![("rel_spread", 1e-6)],
        notes: vec![],
    })
}

fn c4_ode() -> Result<Outcome> {
    let rep = solve_for_mass(1.0, 1e-10)?;
    let bps1 = RadialProfile::bps(1.0);
    let grid = log_grid(1e-5, 5.0, 4000);
    let sup_err = |p: &RadialProfile<f64>| grid.iter().map(|&r| (p.a(r) - bps1.a(r)).abs()).fold(0.0, f64::max);
    let a_err = sup_err(&rep.profile);
    let slope_err = (rep.slope - 2.0 / 3.0).abs();
    let e1 = sup_err(&shoot(&ShootingProblem::with_step(2.0 / 3.0, 0.08))?.profile);
    let e2 = sup_err(&shoot(&ShootingProblem::with_step(2.0 / 3.0, 0.04))?.profile);
    let order = (e1 / e2).log2();
    let want = INTEGRATOR_ORDER as f64 - 0.5;
    Ok(Outcome {
        pass: a_err < 1e-6 && slope_err < 1e-5 && order >= want,
        inputs: json!({ "target_mass": 1.0, "mass_tol": 1e-10, "order_steps": [0.08, 0.04] }),
        measured: json!({
            "sup_a_error": a_err,
            "slope": rep.slope,
            "slope_error": slope_err,
            "achieved_mass": rep.achieved_mass,
            "step_errors": [e1, e2],
            "observed_order": order,
        }),
        tolerances: vec![("sup_a_error", 1e-6), ("slope_error", 1e-5), ("min_order", want)],
        notes: vec![],
    })
}

fn c5_radius() -> Result<Outcome> {
    let masses = [1.0, 4.0, 16.0];
    let deltas = [0.3, 0.5, 0.9];
    let mut spread = 0.0_f64;
    let mut worst = 0.0_f64;
    let mut rows = Vec::new();
    for &d in &deltas {
        let qs = masses
            .iter()
            .map(|&m| Ok(m * (1.0 - d) * taubes_radius(&bps_at(m, V3::zero()), V3::zero(), d)?.r_delta))
            .collect::<Result<Vec<f64>>>()?;
        for &q in &qs {
            spread = spread.max(rel_diff(q, qs[0], 1e-300));
            worst = worst.max(q);
        }
        rows.push(json!({ "delta": d, "scaled_radius": qs }));
    }
    Ok(Outcome {
        pass: spread < 1e-8 && worst <= RADIUS_BOUND_CONSTANT,
        inputs: json!({ "masses": masses, "deltas": deltas }),
        measured: json!({ "rows": rows, "max_rel_spread": spread, "max_scaled_radius": worst }),
        tolerances: vec![("rel_spread", 1e-8), ("radius_bound", RADIUS_BOUND_CONSTANT)],
        notes: vec![],
    })
}

fn c6_eps_regularity(seed: u64, cfg: &QuadConfig<f64>) -> Result<Outcome> {
    let masses = [1.0, 4.0, 16.0];
    let mut maxima = Vec::new();
    let mut vacuous = 0;
    for &m in &masses {
        let probes = scaled_probe_set(seed, 100, m);
        let sweep = eps_regularity_sweep(&bps_at(m, V3::zero()), &probes, cfg)?;
        vacuous += sweep.iter().filter(|p| p.vacuous).count();
        maxima.push(sweep.iter().filter_map(|p| p.quality).fold(0.0, f64::max));
    }
    let hi = maxima.iter().copied().fold(0.0, f64::max);
    let lo = maxima.iter().copied().fold(f64::INFINITY, f64::min);
    let spread = hi / lo - 1.0;
    Ok(Outcome {
        pass: spread <= 0.1 && hi <= REGULARITY_CONSTANT,
        inputs: json!({ "seed": seed, "probes": 100, "masses": masses }),
        measured: json!({ "max_quality": maxima, "spread": spread, "vacuous_probes": vacuous }),
        tolerances: vec![("spread", 0.1), ("regularity_constant", REGULARITY_CONSTANT)],
        notes: vec![],
    })
}

/// Seeded ball centers at mass 1: uniform direction, distance uniform in `[0, max_distance]`.
pub fn lower_bound_centers(seed: u64, n: usize, max_distance: f64) -> Vec<V3> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    (0..n)
        .map(|_| {
            let z: f64 = rng.gen_range(-1.0..1.0);
            let th: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
            let s = (1.0 - z * z).sqrt();
            let d: f64 = rng.gen_range(0.0..max_distance);
            V3::new(s * th.cos(), s * th.sin(), z) * d
        })
        .collect()
}

fn c7_lower_bound(seed: u64, cfg: &QuadConfig<f64>) -> Result<Outcome> {
    let masses = [1.0, 16.0];
    let unit_centers = lower_bound_centers(seed, 50, 40.0);
    let mut rows = Vec::new();
    let (mut counterexamples, mut holds) = (0, 0);
    for &m in &masses {
        let s = bps_at(m, V3::zero());
        let lambda = higgs_derivative_l2_sq(&s, cfg)? / m;
        let centers: Vec<V3> = unit_centers.iter().map(|&c| c / m).collect();
        let probe = interior_lower_bound_check(&s, lambda, &centers, cfg)?;
        counterexamples += probe.counterexamples;
        let h = probe.balls.iter().filter(|b| b.verdict == crate::analysis::BallVerdict::Holds).count();
        holds += h;
        rows.push(json!({
            "mass": m,
            "lambda": lambda,
            "r_lambda": probe.r_lambda,
            "eps_lambda": probe.eps_lambda,
            "holds": h,
            "hypothesis_not_met": probe.balls.len() - h - probe.counterexamples,
            "counterexamples": probe.counterexamples,
        }));
    }
    let (r_l, eps_l) = lower_bound_thresholds(2.0 * std::f64::consts::PI);
    Ok(Outcome {
        pass: counterexamples == 0 && holds > 0,
        inputs: json!({ "seed": seed, "balls": 50, "masses": masses, "unit_mass_distance_range": [0.0, 40.0] }),
        measured: json!({ "rows": rows, "counterexamples": counterexamples, "nominal_thresholds": [r_l, eps_l] }),
        tolerances: vec![("counterexamples", 0.0)],
        notes: vec!["fails as vacuous when no ball meets the small-energy hypothesis".into()],
    })
}

const ORIGIN_BUMP_RADIUS: f64 = 8.0;

fn c8_weak_convergence(kappa: f64, cfg: &QuadConfig<f64>) -> Result<Outcome> {
    let measures = |ms: &[f64]| {
        ms.iter()
            .map(|&m| EnergyMeasure::with_config(bps_at(m, V3::zero()), *cfg))
            .collect::<Result<Vec<_>>>()
    };
    let short = [1.0, 4.0, 16.0, 64.0, 256.0];
    let long: Vec<f64> = (0..=10).map(|k| 4f64.powi(k)).collect();
    let unit = 4.0 * std::f64::consts::PI * kappa;
    // the error is about ∫(1 − ψ) dμ ~ 1/(m·radius), so a wide bump reaches 1e-2 by m = 256
    let on = weak_convergence_test(&measures(&short)?, &TestFunction::bump(V3::zero(), ORIGIN_BUMP_RADIUS), &[(V3::zero(), unit)])?;
    let off = weak_convergence_test(&measures(&long)?, &TestFunction::bump(V3::new(2.0, 0.0, 0.0), 1.0), &[(V3::zero(), unit)])?;
    let off_final = *off.integrals.last().expect("non-empty");
    Ok(Outcome {
        pass: on.monotone && on.final_error < 1e-2 && off.monotone && off_final < 1e-6 && off.extrapolated.abs() < 1e-6,
        inputs: json!({
            "origin_bump": { "center": [0.0, 0.0, 0.0], "radius": ORIGIN_BUMP_RADIUS, "masses": short },
            "off_support_bump": { "center": [2.0, 0.0, 0.0], "radius": 1.0, "masses": long },
        }),
        measured: json!({
            "origin_integrals": on.integrals,
            "origin_errors": on.errors,
            "origin_final_error": on.final_error,
            "origin_extrapolated": on.extrapolated,
            "off_support_integrals": off.integrals,
            "off_support_extrapolated": off.extrapolated,
        }),
        tolerances: vec![("origin_error", 1e-2), ("off_support", 1e-6)],
        notes: vec!["off-support integrals decay like 1/m; the mass list runs to 4^10 to reach the 1e-6 level".into()],
    })
}

fn c9_blow_up(kappa: f64) -> Result<Outcome> {
    let masses = [16.0, 64.0, 256.0, 1024.0, 4096.0];
    let grid: Vec<V3> = {
        let ticks: Vec<f64> = (0..5).map(|i| -1.0 + 0.5 * i as f64).collect();
        let mut g = Vec::new();
        for &x in &ticks {
            for &y in &ticks {
                for &z in &ticks {
                    g.push(V3::new(x, y, z));
                }
            }
        }
        g
    };
    let radii = [0.5, 0.25, 0.1];
    let opts = BlowUpOptions {
        kappa,
        ..Default::default()
    };
    let unit = 4.0 * std::f64::consts::PI * kappa;
    let src = ProfileSource::ClosedForm;

    let fixed = estimate_blow_up_set(&make_scenario(ScenarioKind::FixedCenter, 1, &masses, &[V3::zero()], src)?, &grid, &radii, &opts)?;
    let theta_err = fixed.densities.iter().map(|d| (d.theta - unit).abs()).fold(0.0, f64::max);
    let fixed_ok = fixed.sets_equal
        && fixed.blow_up_set.len() == 1
        && fixed.densities.iter().all(|d| d.k_x == 1)
        && theta_err <= 1e-2;

    let drifting = estimate_blow_up_set(&make_scenario(ScenarioKind::DriftingCenter, 1, &masses, &[V3::e1()], src)?, &grid, &radii[..2], &opts)?;
    let mixed = estimate_blow_up_set(
        &make_scenario(ScenarioKind::Mixed, 2, &masses, &[V3::zero(), V3::e2()], src)?,
        &grid,
        &radii[..2],
        &opts,
    )?;
    let coincident = estimate_blow_up_set(
        &make_scenario(ScenarioKind::CoincidentRescale, 1, &masses, &[V3::new(0.5, 0.0, 0.0)], src)?,
        &grid,
        &radii,
        &opts,
    )?;
    let escaped = drifting.cardinality == CardinalityVerdict::Escaped;
    let all_bounded = [&fixed, &drifting, &mixed, &coincident].iter().all(|r| r.cardinality_ok);
    let summary = |r: &crate::analysis::ConcentrationReport<f64>| {
        json!({
            "blow_up_set": r.blow_up_set.iter().map(|p| [p.x, p.y, p.z]).collect::<Vec<_>>(),
            "zero_set": r.zero_set.iter().map(|p| [p.x, p.y, p.z]).collect::<Vec<_>>(),
            "theta": r.densities.iter().map(|d| d.theta).collect::<Vec<_>>(),
            "multiplicities": r.multiplicities(),
            "sets_equal": r.sets_equal,
            "cardinality": r.cardinality,
        })
    };
    Ok(Outcome {
        pass: fixed_ok && escaped && all_bounded,
        inputs: json!({ "masses": masses, "candidate_grid": "5x5x5 on [-1,1]^3", "radii": radii }),
        measured: json!({
            "fixed_center": summary(&fixed),
            "fixed_theta_error": theta_err,
            "drifting_center": summary(&drifting),
            "mixed": summary(&mixed),
            "coincident_rescale": summary(&coincident),
        }),
        tolerances: vec![("theta_error", 1e-2)],
        notes: vec![],
    })
}

fn c10_bubble() -> Result<Outcome> {
    let c = V3::zero();
    let closed = make_scenario(ScenarioKind::FixedCenter, 1, &[16.0, 64.0, 256.0], &[c], ProfileSource::ClosedForm)?;
    let bc = bubble_compare(&closed, c, &[2.0, 10.0])?;
    let closed_sup = bc.rows.iter().map(|r| r.sup_distance).fold(0.0, f64::max);
    let ode = make_scenario(ScenarioKind::FixedCenter, 1, &[1.0, 2.0, 4.0], &[c], ProfileSource::Ode { tol: 1e-10 })?;
    let bo = bubble_compare(&ode, c, &[2.0, 10.0])?;
    let ode_sup = bo.rows.iter().map(|r| r.sup_distance).fold(0.0, f64::max);
    let pass = bc.bubble
        && bo.bubble
        && closed_sup == 0.0
        && ode_sup < 1e-5
        && (bc.limit_mass - 1.0).abs() < 1e-6
        && (bo.limit_mass - 1.0).abs() < 1e-6
        && bc.limit_charge == 1
        && bo.limit_charge == 1;
    Ok(Outcome {
        pass,
        inputs: json!({
            "closed_form_masses": [16.0, 64.0, 256.0],
            "ode_masses": [1.0, 2.0, 4.0],
            "ball_radii": [2.0, 10.0],
        }),
        measured: json!({
            "closed_form": { "sup_distance": closed_sup, "limit_mass": bc.limit_mass, "limit_charge": bc.limit_charge },
            "ode": { "sup_distance": ode_sup, "limit_mass": bo.limit_mass, "limit_charge": bo.limit_charge },
        }),
        tolerances: vec![("closed_form_sup", 0.0), ("ode_sup", 1e-5), ("limit_mass", 1e-6)],
        notes: vec![],
    })
}

fn c11_degree() -> Result<Outcome> {
    let grid = (64, 128);
    let hedgehog = bps_at(1.0, V3::zero());
    let mut rows = Vec::new();
    let mut pass = true;
    let mut worst = 0.0_f64;
    for r in [0.5, 1.0, 2.0] {
        let d = degree(&hedgehog, V3::zero(), r, grid)?;
        pass &= d.degree == 1;
        worst = worst.max(d.residual);
        rows.push(json!({ "field": "hedgehog", "radius": r, "degree": d.degree, "residual": d.residual }));
    }
    let flat = degree(&vacuum(1.0)?, V3::zero(), 1.0, grid)?;
    pass &= flat.degree == 0;
    worst = worst.max(flat.residual);
    rows.push(json!({ "field": "constant", "radius": 1.0, "degree": flat.degree, "residual": flat.residual }));
    let two = multi_center_higgs(&[V3::new(-1.0, 0.0, 0.0), V3::e1()], 0.5, 1.0)?;
    let d2 = degree(&two, V3::zero(), 3.0, grid)?;
    pass &= d2.degree == 2;
    worst = worst.max(d2.residual);
    rows.push(json!({ "field": "two-center", "radius": 3.0, "degree": d2.degree, "residual": d2.residual }));
    Ok(Outcome {
        pass: pass && worst < 1e-3,
        inputs: json!({ "grid": [grid.0, grid.1] }),
        measured: json!({ "rows": rows, "max_residual": worst }),
        tolerances: vec![("residual", 1e-3)],
        notes: vec![],
    })
}

fn c12_tail(kappa: f64, cfg: &QuadConfig<f64>) -> Result<Outcome> {
    let masses = [1.0, 2.0, 4.0];
    let fits = masses
        .iter()
        .map(|&m| asymptotic_tail_fit(&bps_at(m, V3::zero()), (10.0 / m, 30.0 / m), cfg))
        .collect::<Result<Vec<_>>>()?;
    let ratios: Vec<f64> = fits.iter().map(|f| f.ratio).collect();
    let spread = ratios.iter().map(|r| (r - ratios[0]).abs()).fold(0.0, f64::max);
    let vs_kappa = ratios.iter().map(|r| (r - kappa).abs()).fold(0.0, f64::max);
    Ok(Outcome {
        pass: spread < 1e-3 && vs_kappa < 1e-3,
        inputs: json!({ "masses": masses, "window_times_mass": [10.0, 30.0] }),
        measured: json!({
            "fitted_c": fits.iter().map(|f| f.fitted_c).collect::<Vec<_>>(),
            "predicted_c": fits.iter().map(|f| f.predicted_c).collect::<Vec<_>>(),
            "ratios": ratios,
            "spread": spread,
            "max_deviation_from_kappa": vs_kappa,
        }),
        tolerances: vec![("spread", 1e-3), ("kappa_deviation", 1e-3)],
        notes: vec![],
    })
}

/// Criteria 1–12 under the given options.
pub fn run_criteria(opts: &AuditOptions) -> (f64, Vec<VerdictReport>) {
    let cfg = &opts.quad;
    let (kappa, kappa_err) = measure_kappa(cfg).unwrap_or((f64::NAN, f64::NAN));
    let reports = vec![
        finish(1, "bps-closed-form", "closed-form BPS solution and its energy density", c1_closed_form()),
        finish(2, "energy-identity", "energy identity 4π(f(∞) − f(0⁺)) = 4πκ", c2_energy_identity(kappa, kappa_err)),
        finish(3, "linear-energy", "total energy linear in the mass", c3_linear_energy(cfg)),
        finish(4, "radial-ode", "shooting solution reproduces the BPS profile", c4_ode()),
        finish(5, "radius-bound", "scale-invariant radius bound", c5_radius()),
        finish(6, "eps-regularity", "ε-regularity quality is scale invariant", c6_eps_regularity(opts.seed, cfg)),
        finish(7, "interior-lower-bound", "interior lower bound on |Φ|", c7_lower_bound(opts.seed, cfg)),
        finish(8, "weak-convergence", "normalized measures converge to 4πκ δ₀", c8_weak_convergence(kappa, cfg)),
        finish(9, "blow-up-set", "blow-up set equals the zero set", c9_blow_up(kappa)),
        finish(10, "bubbling", "bubble at the fixed center is the unit monopole", c10_bubble()),
        finish(11, "degree", "degree engine on reference fields", c11_degree()),
        finish(12, "tail-coefficient", "asymptotic tail coefficient matches ‖dΦ‖²", c12_tail(kappa, cfg)),
    ];
    (kappa, reports)
}

fn serialize_reports(reports: &[VerdictReport]) -> String {
    serde_json::to_string(reports).expect("reports serialize")
}

/// All criteria; the last one reruns 1–12 and compares the serialized reports byte for byte.
pub fn audit_suite(opts: &AuditOptions) -> AuditReport {
    let (kappa, mut criteria) = run_criteria(opts);
    let (_, again) = run_criteria(opts);
    let (a, b) = (serialize_reports(&criteria), serialize_reports(&again));
    criteria.push(finish(
        13,
        "determinism",
        "repeated runs give byte-identical reports",
        Ok(Outcome {
            pass: a == b,
            inputs: json!({ "seed": opts.seed, "runs": 2 }),
            measured: json!({ "bytes": [a.len(), b.len()], "identical": a == b }),
            tolerances: vec![],
            notes: vec![],
        }),
    ));
    AuditReport {
        seed: opts.seed,
        quad_abs_tol: opts.quad.abs_tol,
        quad_rel_tol: opts.quad.rel_tol,
        kappa,
        criteria,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn five_point_is_exact_on_quartics() {
        let d = five_point(&|x: f64| x * x * x * x, 2.0, 0.1);
        assert!((d - 32.0).abs() < 1e-12, "{d}");
    }

    #[test]
    fn errors_become_failures() {
        let r = finish(1, "t", "t", Err(crate::Error::Domain("boom".into())));
        assert_eq!(r.verdict, Verdict::Fail);
        assert!(r.measured["error"].as_str().unwrap().contains("boom"));
    }

    #[test]
    fn kappa_is_one() {
        let (kappa, err) = measure_kappa(&QuadConfig::default()).unwrap();
        assert!((kappa - 1.0).abs() < 1e-10 && err < 1e-10);
    }
}
