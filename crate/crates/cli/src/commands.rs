//! One function per subcommand, each producing tables and a verdict.

use serde_json::{json, Value};

use monopole_lab::algebra::Vec3;
use monopole_lab::analysis::{
    asymptotic_tail_fit, bochner_check, degree, eps_regularity_sweep, estimate_blow_up_set, find_zeros,
    hausdorff_distance, higgs_derivative_l2_sq, interior_lower_bound_check, scaled_probe_set, taubes_radius, Aabb,
    BallVerdict, BlowUpOptions, REGULARITY_CONSTANT,
};
use monopole_lab::audit::{audit_suite, lower_bound_centers, measure_kappa, AuditOptions, Verdict};
use monopole_lab::bps;
use monopole_lab::bubbling::{bubble_compare, energy_formula_audit, make_scenario, ScenarioSequence};
use monopole_lab::fields::{hedgehog_field, multi_center_higgs, vacuum, FieldSampler};
use monopole_lab::measures::{weak_convergence_test, CardinalityVerdict, EnergyMeasure, TestFunction};
use monopole_lab::profile::RadialProfile;
use monopole_lab::radial_solver::{log_grid, solve_for_mass_with_step};

use crate::config::*;
use crate::output::Table;

type V3 = Vec3<f64>;
type Res<T> = Result<T, monopole_lab::Error>;

/// Result of one command before it is written out.
pub struct Outcome {
    pub tag: &'static str,
    pub verdict: Option<Verdict>,
    pub measured: Value,
    pub tolerances: Vec<(&'static str, f64)>,
    pub counterexamples: Vec<Value>,
    pub tables: Vec<(String, Table)>,
}

impl Outcome {
    fn new(tag: &'static str) -> Self {
        Self {
            tag,
            verdict: None,
            measured: Value::Null,
            tolerances: Vec::new(),
            counterexamples: Vec::new(),
            tables: Vec::new(),
        }
    }
}

fn v3(p: &Point) -> V3 {
    V3::new(p[0], p[1], p[2])
}

fn arr(p: V3) -> [f64; 3] {
    [p.x, p.y, p.z]
}

fn pass_if(ok: bool) -> Option<Verdict> {
    Some(if ok { Verdict::Pass } else { Verdict::Fail })
}

fn bps_at(m: f64) -> FieldSampler<f64> {
    hedgehog_field(RadialProfile::bps(m), V3::zero())
}

fn radii(r_min: f64, r_max: f64, n: usize, spacing: Spacing) -> Vec<f64> {
    match spacing {
        Spacing::Log => log_grid(r_min, r_max, n),
        Spacing::Linear => (0..n)
            .map(|i| r_min + (r_max - r_min) * i as f64 / (n - 1) as f64)
            .collect(),
    }
}

fn kappa(tol: &Tolerances) -> Res<f64> {
    Ok(measure_kappa(&tol.quad())?.0)
}

pub fn run(cfg: &RunConfig) -> Res<Outcome> {
    let tol = &cfg.tolerances;
    match &cfg.params {
        Params::Bps(p) => run_bps(p),
        Params::SolveOde(p) => run_solve_ode(p),
        Params::Energy(p) => run_energy(p, tol),
        Params::MeasureConvergence(p) => run_convergence(p, tol),
        Params::Radius(p) => run_radius(p),
        Params::Epsreg(p) => run_epsreg(p, cfg.seed, tol),
        Params::Lowerbound(p) => run_lowerbound(p, cfg.seed, tol),
        Params::Bochner(p) => run_bochner(p),
        Params::Tailfit(p) => run_tailfit(p, tol),
        Params::Zeroset(p) => run_zeroset(p, tol),
        Params::Degree(p) => run_degree(p),
        Params::Blowup(p) => run_blowup(p, tol),
        Params::Bubble(p) => run_bubble(p, tol),
        Params::Scenario(p) => run_scenario(p, tol),
        Params::Audit(_) => run_audit(cfg.seed, tol),
    }
}

fn run_bps(p: &BpsParams) -> Res<Outcome> {
    let prof = RadialProfile::bps(p.mass);
    let mut t = Table::new(&["r", "a", "phi", "abs_phi", "e", "f"]);
    for r in radii(p.r_min, p.r_max, p.points, p.spacing) {
        let phi = prof.phi(r);
        t.push(vec![
            r,
            prof.a(r),
            phi,
            phi.abs(),
            bps::bps_energy_density(p.mass, r)?,
            bps::bps_antiderivative(p.mass, r)?,
        ]);
    }
    let mut o = Outcome::new("bps-profile");
    o.measured = json!({ "mass": p.mass, "rows": t.rows.len(), "f_at_origin": bps::bps_antiderivative_at_origin::<f64>() });
    o.tables.push(("bps".into(), t));
    Ok(o)
}

fn run_solve_ode(p: &SolveOdeParams) -> Res<Outcome> {
    let rep = solve_for_mass_with_step(p.mass, p.tol, p.log_step)?;
    let exact = RadialProfile::bps(p.mass);
    let mut t = Table::new(&["r", "a", "phi", "abs_phi", "a_bps", "phi_bps"]);
    let mut sup_a = 0.0_f64;
    for r in log_grid(p.r_min, p.r_max, p.points) {
        let (a, phi) = (rep.profile.a(r), rep.profile.phi(r));
        sup_a = sup_a.max((a - exact.a(r)).abs());
        t.push(vec![r, a, phi, phi.abs(), exact.a(r), exact.phi(r)]);
    }
    let mut o = Outcome::new("radial-ode");
    o.measured = json!({
        "slope": rep.slope,
        "achieved_mass": rep.achieved_mass,
        "max_bogomolnyi_residual": rep.max_bogomolnyi_residual,
        "max_second_order_residual": rep.max_second_order_residual,
        "steps": rep.steps,
        "sup_a_error_vs_closed_form": sup_a,
    });
    o.tables.push(("solve-ode".into(), t));
    Ok(o)
}

fn run_energy(p: &EnergyParams, tol: &Tolerances) -> Res<Outcome> {
    let k = kappa(tol)?;
    let sc = make_scenario(
        monopole_lab::bubbling::ScenarioKind::FixedCenter,
        1,
        &[p.mass],
        &[V3::zero()],
        p.profile,
    )?;
    let row = energy_formula_audit(&sc, k)?.remove(0);
    // 𝓔 = 4πκ m k + ‖∗F − dΦ‖²
    let gap = (row.difference - row.defect).abs();
    let mut o = Outcome::new("energy-formula");
    o.verdict = pass_if(gap <= tol.energy_rel * row.total);
    o.measured = json!({ "kappa": k, "row": row, "formula_gap": gap });
    o.tolerances = vec![("energy_rel", tol.energy_rel)];
    Ok(o)
}

fn run_convergence(p: &ConvergenceParams, tol: &Tolerances) -> Res<Outcome> {
    let k = kappa(tol)?;
    let seq = p
        .masses
        .iter()
        .map(|&m| EnergyMeasure::with_config(bps_at(m), tol.quad()))
        .collect::<Res<Vec<_>>>()?;
    let unit = 4.0 * std::f64::consts::PI * k;
    let rep = weak_convergence_test(&seq, &TestFunction::bump(v3(&p.center), p.radius), &[(V3::zero(), unit)])?;
    let mut t = Table::new(&["mass", "integral", "error"]);
    for i in 0..rep.masses.len() {
        t.push(vec![rep.masses[i], rep.integrals[i], rep.errors[i]]);
    }
    let mut o = Outcome::new("weak-convergence");
    o.verdict = pass_if(rep.monotone && rep.final_error <= tol.weak_final);
    o.measured = json!({ "kappa": k, "report": rep });
    o.tolerances = vec![("weak_final", tol.weak_final)];
    o.tables.push(("measure-convergence".into(), t));
    Ok(o)
}

fn run_radius(p: &RadiusParams) -> Res<Outcome> {
    let s = bps_at(p.mass);
    let mut t = Table::new(&["delta", "r_delta", "bound", "scaled_radius"]);
    let mut queries = Vec::new();
    let mut all_within = true;
    for &d in &p.deltas {
        let q = taubes_radius(&s, v3(&p.point), d)?;
        all_within &= q.within_bound;
        t.push(vec![d, q.r_delta, q.bound, p.mass * (1.0 - d) * q.r_delta]);
        queries.push(q);
    }
    let mut o = Outcome::new("radius-bound");
    o.verdict = pass_if(all_within);
    o.counterexamples = queries
        .iter()
        .filter(|q| !q.within_bound)
        .map(|q| json!(q))
        .collect();
    o.measured = json!({ "queries": queries });
    o.tolerances = vec![("radius_bound", monopole_lab::analysis::RADIUS_BOUND_CONSTANT)];
    o.tables.push(("radius".into(), t));
    Ok(o)
}

fn run_epsreg(p: &EpsregParams, seed: u64, tol: &Tolerances) -> Res<Outcome> {
    let mut t = Table::new(&["mass", "max_quality", "probes_outside_hypothesis"]);
    let mut maxima = Vec::new();
    for &m in &p.masses {
        let sweep = eps_regularity_sweep(&bps_at(m), &scaled_probe_set(seed, p.probes, m), &tol.quad())?;
        let max = sweep.iter().filter_map(|q| q.quality).fold(0.0, f64::max);
        let outside = sweep.iter().filter(|q| q.outside_hypothesis).count();
        t.push(vec![m, max, outside as f64]);
        maxima.push(max);
    }
    let hi = maxima.iter().copied().fold(0.0, f64::max);
    let lo = maxima.iter().copied().fold(f64::INFINITY, f64::min);
    let spread = if lo > 0.0 { hi / lo - 1.0 } else { f64::INFINITY };
    let mut o = Outcome::new("eps-regularity");
    o.verdict = if hi == 0.0 {
        Some(Verdict::Vacuous)
    } else {
        pass_if(spread <= tol.epsreg_spread && hi <= REGULARITY_CONSTANT)
    };
    o.measured = json!({ "max_quality": maxima, "spread": spread, "regularity_constant": REGULARITY_CONSTANT });
    o.tolerances = vec![("epsreg_spread", tol.epsreg_spread)];
    o.tables.push(("epsreg".into(), t));
    Ok(o)
}

fn run_lowerbound(p: &LowerboundParams, seed: u64, tol: &Tolerances) -> Res<Outcome> {
    let unit = lower_bound_centers(seed, p.balls, p.max_distance);
    let mut t = Table::new(&["mass", "lambda", "holds", "hypothesis_not_met", "counterexamples"]);
    let mut o = Outcome::new("interior-lower-bound");
    let mut holds_total = 0;
    let mut probes = Vec::new();
    for &m in &p.masses {
        let s = bps_at(m);
        let lambda = match p.lambda {
            Some(l) => l,
            None => higgs_derivative_l2_sq(&s, &tol.quad())? / m,
        };
        let centers: Vec<V3> = unit.iter().map(|&c| c / m).collect();
        let probe = interior_lower_bound_check(&s, lambda, &centers, &tol.quad())?;
        let holds = probe.balls.iter().filter(|b| b.verdict == BallVerdict::Holds).count();
        let not_met = probe.balls.iter().filter(|b| b.verdict == BallVerdict::HypothesisNotMet).count();
        holds_total += holds;
        o.counterexamples.extend(
            probe
                .balls
                .iter()
                .filter(|b| b.verdict == BallVerdict::Counterexample)
                .map(|b| json!({ "mass": m, "ball": b })),
        );
        t.push(vec![m, lambda, holds as f64, not_met as f64, probe.counterexamples as f64]);
        probes.push(json!({
            "mass": m,
            "lambda": lambda,
            "r_lambda": probe.r_lambda,
            "eps_lambda": probe.eps_lambda,
            "holds": holds,
            "hypothesis_not_met": not_met,
            "counterexamples": probe.counterexamples,
        }));
    }
    o.verdict = Some(if !o.counterexamples.is_empty() {
        Verdict::Fail
    } else if holds_total == 0 {
        Verdict::Vacuous
    } else {
        Verdict::Pass
    });
    o.measured = json!({ "probes": probes });
    o.tables.push(("lowerbound".into(), t));
    Ok(o)
}

fn run_bochner(p: &BochnerParams) -> Res<Outcome> {
    let grid = log_grid(p.r_min / p.mass, p.r_max / p.mass, p.points);
    let fit = bochner_check(&RadialProfile::bps(p.mass), &grid)?;
    let mut o = Outcome::new("bochner");
    o.verdict = pass_if(fit.c1.is_finite() && fit.c2.is_finite() && fit.negative_density.is_empty());
    o.measured = json!({ "fit": fit, "grid_units": "radii scaled by 1/m" });
    Ok(o)
}

fn run_tailfit(p: &TailfitParams, tol: &Tolerances) -> Res<Outcome> {
    let k = kappa(tol)?;
    let mut t = Table::new(&["mass", "fitted_c", "predicted_c", "ratio"]);
    let mut ratios = Vec::new();
    for &m in &p.masses {
        let fit = asymptotic_tail_fit(&bps_at(m), (p.window[0] / m, p.window[1] / m), &tol.quad())?;
        t.push(vec![m, fit.fitted_c, fit.predicted_c, fit.ratio]);
        ratios.push(fit.ratio);
    }
    let spread = ratios.iter().map(|r| (r - ratios[0]).abs()).fold(0.0, f64::max);
    let vs_kappa = ratios.iter().map(|r| (r - k).abs()).fold(0.0, f64::max);
    let mut o = Outcome::new("tail-coefficient");
    o.verdict = pass_if(spread <= tol.tail_spread && vs_kappa <= tol.tail_spread);
    o.measured = json!({ "kappa": k, "ratios": ratios, "spread": spread, "max_deviation_from_kappa": vs_kappa });
    o.tolerances = vec![("tail_spread", tol.tail_spread)];
    o.tables.push(("tailfit".into(), t));
    Ok(o)
}

fn sampler(f: &FieldSpec) -> Res<FieldSampler<f64>> {
    match f {
        FieldSpec::Hedgehog { mass, center } => Ok(hedgehog_field(RadialProfile::bps(*mass), v3(center))),
        FieldSpec::MultiCenter { centers, scale, mass } => {
            multi_center_higgs(&centers.iter().map(v3).collect::<Vec<_>>(), *scale, *mass)
        }
        FieldSpec::Vacuum { mass } => vacuum(*mass),
    }
}

fn run_zeroset(p: &ZerosetParams, tol: &Tolerances) -> Res<Outcome> {
    let s = sampler(&p.field)?;
    let bx = Aabb::cube(v3(&p.box_center), p.box_half)?;
    let found = find_zeros(&s, &bx, p.grid)?;
    let known: Vec<V3> = s.known_zeros().into_iter().filter(|z| bx.contains(*z)).collect();
    let h = hausdorff_distance(&found.zeros, &known);
    let mut t = Table::new(&["x", "y", "z"]);
    for z in &found.zeros {
        t.push(arr(*z).to_vec());
    }
    let mut o = Outcome::new("zero-set");
    o.verdict = pass_if(h <= tol.zero_match);
    if h > tol.zero_match {
        o.counterexamples.push(json!({
            "found": found.zeros.iter().map(|z| arr(*z)).collect::<Vec<_>>(),
            "by_construction": known.iter().map(|z| arr(*z)).collect::<Vec<_>>(),
        }));
    }
    o.measured = json!({
        "zeros": found.zeros.iter().map(|z| arr(*z)).collect::<Vec<_>>(),
        "candidates": found.candidates,
        "hausdorff_to_construction": if h.is_finite() { json!(h) } else { json!("infinite") },
        "warnings": found.warnings,
    });
    o.tolerances = vec![("zero_match", tol.zero_match)];
    o.tables.push(("zeroset".into(), t));
    Ok(o)
}

fn run_degree(p: &DegreeParams) -> Res<Outcome> {
    let s = sampler(&p.field)?;
    let d = degree(&s, v3(&p.center), p.radius, (p.grid[0], p.grid[1]))?;
    let mut o = Outcome::new("degree");
    o.verdict = p.expected.map(|e| if e == d.degree && d.residual < 1e-3 { Verdict::Pass } else { Verdict::Fail });
    if o.verdict == Some(Verdict::Fail) {
        o.counterexamples.push(json!({ "expected": p.expected, "result": d }));
    }
    o.measured = json!(d);
    o.tolerances = vec![("residual", 1e-3)];
    Ok(o)
}

fn scenario(spec: &ScenarioSpec) -> Res<ScenarioSequence<f64>> {
    let centers: Vec<V3> = spec.centers.iter().map(v3).collect();
    make_scenario(spec.kind, spec.charge, &spec.masses, &centers, spec.profile)
}

fn violations(sc: &ScenarioSequence<f64>, tol: &Tolerances) -> Vec<Value> {
    sc.monopole_violations(tol.monopole_residual)
        .into_iter()
        .map(|v| json!({ "kind": "non-monopole-labeled-monopole", "violation": v }))
        .collect()
}

fn candidate_grid(half: f64, n: usize) -> Vec<V3> {
    let ticks: Vec<f64> = if n == 1 {
        vec![0.0]
    } else {
        (0..n).map(|i| -half + 2.0 * half * i as f64 / (n - 1) as f64).collect()
    };
    let mut g = Vec::with_capacity(n * n * n);
    for &x in &ticks {
        for &y in &ticks {
            for &z in &ticks {
                g.push(V3::new(x, y, z));
            }
        }
    }
    g
}

fn run_blowup(p: &BlowupParams, tol: &Tolerances) -> Res<Outcome> {
    let sc = scenario(&p.scenario)?;
    let opts = BlowUpOptions {
        kappa: kappa(tol)?,
        theta_tol: tol.theta,
        ..Default::default()
    };
    let rep = estimate_blow_up_set(&sc, &candidate_grid(p.grid_half, p.grid_n), &p.radii, &opts)?;
    let mut o = Outcome::new("blow-up-set");
    o.counterexamples = violations(&sc, tol);
    let quantized = rep.densities.iter().all(|d| d.quantized);
    if !rep.sets_equal || !rep.cardinality_ok || !quantized {
        o.counterexamples.push(json!({
            "kind": "blow-up-set-mismatch",
            "blow_up_set": rep.blow_up_set.iter().map(|z| arr(*z)).collect::<Vec<_>>(),
            "zero_set": rep.zero_set.iter().map(|z| arr(*z)).collect::<Vec<_>>(),
            "hausdorff": if rep.hausdorff.is_finite() { json!(rep.hausdorff) } else { json!("infinite") },
            "cardinality": rep.cardinality,
            "quantized": quantized,
        }));
    }
    o.verdict = Some(if !o.counterexamples.is_empty() {
        Verdict::Fail
    } else if rep.cardinality == CardinalityVerdict::Escaped {
        Verdict::Escaped
    } else {
        Verdict::Pass
    });
    let mut t = Table::new(&["x", "y", "z", "theta", "k_x"]);
    for d in &rep.densities {
        t.push(vec![d.point.x, d.point.y, d.point.z, d.theta, d.k_x as f64]);
    }
    let hausdorff = rep.hausdorff;
    let mut measured = json!(rep);
    if !hausdorff.is_finite() {
        measured["hausdorff"] = json!("infinite");
    }
    o.measured = measured;
    o.tolerances = vec![("theta", tol.theta), ("monopole_residual", tol.monopole_residual)];
    o.tables.push(("blowup".into(), t));
    Ok(o)
}

fn run_bubble(p: &BubbleParams, tol: &Tolerances) -> Res<Outcome> {
    let sc = scenario(&p.scenario)?;
    let b = bubble_compare(&sc, v3(&p.point), &p.ball_radii)?;
    let mut o = Outcome::new("bubbling");
    o.counterexamples = violations(&sc, tol);
    let limit_ok = (b.limit_mass - 1.0).abs() <= tol.limit_mass && b.limit_charge >= 1;
    if b.bubble && !limit_ok {
        o.counterexamples.push(json!({
            "kind": "bubble-limit-mismatch",
            "limit_mass": b.limit_mass,
            "limit_charge": b.limit_charge,
        }));
    }
    o.verdict = Some(if !o.counterexamples.is_empty() {
        Verdict::Fail
    } else if !b.bubble {
        Verdict::Vacuous
    } else {
        Verdict::Pass
    });
    let mut t = Table::new(&["mass", "ball_radius", "sup_distance", "rescaled_energy"]);
    for r in &b.rows {
        t.push(vec![r.mass, r.ball_radius, r.sup_distance, r.rescaled_energy.unwrap_or(f64::NAN)]);
    }
    o.measured = json!(b);
    o.tolerances = vec![("limit_mass", tol.limit_mass), ("monopole_residual", tol.monopole_residual)];
    o.tables.push(("bubble".into(), t));
    Ok(o)
}

fn run_scenario(p: &ScenarioParams, tol: &Tolerances) -> Res<Outcome> {
    let sc = scenario(&p.scenario)?;
    let mut o = Outcome::new("scenario");
    o.counterexamples = violations(&sc, tol);
    o.verdict = pass_if(o.counterexamples.is_empty());
    let mut t = Table::new(&["mass", "total", "predicted", "difference", "normalized", "defect"]);
    let rows = match energy_formula_audit(&sc, kappa(tol)?) {
        Ok(rows) => rows,
        Err(monopole_lab::Error::UnsupportedDensity(_)) | Err(monopole_lab::Error::Unsupported(_)) => Vec::new(),
        Err(e) => return Err(e),
    };
    for r in &rows {
        t.push(vec![r.mass, r.total, r.predicted, r.difference, r.normalized, r.defect]);
    }
    o.measured = json!({
        "kind": sc.kind,
        "charge": sc.charge,
        "masses": sc.masses,
        "labeled_monopole": sc.labeled_monopole,
        "center_schedule": sc.center_schedule.iter().map(|zs| zs.iter().map(|z| arr(*z)).collect::<Vec<_>>()).collect::<Vec<_>>(),
        "normalized_residuals": sc.residuals,
    });
    o.tolerances = vec![("monopole_residual", tol.monopole_residual)];
    o.tables.push(("scenario".into(), t));
    Ok(o)
}

fn run_audit(seed: u64, tol: &Tolerances) -> Res<Outcome> {
    let rep = audit_suite(&AuditOptions { seed, quad: tol.quad() });
    let mut o = Outcome::new("acceptance");
    o.verdict = pass_if(rep.all_passed());
    o.counterexamples = rep
        .failures()
        .iter()
        .map(|c| json!({ "criterion": c.criterion, "tag": c.tag, "measured": c.measured }))
        .collect();
    let mut t = Table::new(&["criterion", "passed"]);
    for c in &rep.criteria {
        t.push(vec![c.criterion as f64, if c.passed() { 1.0 } else { 0.0 }]);
    }
    o.measured = json!(rep);
    o.tolerances = vec![("quad_abs", tol.quad_abs), ("quad_rel", tol.quad_rel)];
    o.tables.push(("audit".into(), t));
    Ok(o)
}
