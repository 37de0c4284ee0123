//! Run configuration: a strict JSON envelope around per-command parameters.

use std::collections::BTreeMap;
use std::path::PathBuf;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use monopole_lab::bubbling::{ProfileSource, ScenarioKind};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("empty config document")]
    Empty,
    #[error("config schema violation at line {line}, column {column}: {message}")]
    Schema { line: usize, column: usize, message: String },
    #[error("invalid `{field}`: {message}")]
    Field { field: String, message: String },
    #[error("out of range: `{field}` {message}")]
    Range { field: String, message: String },
}

fn range(field: &str, message: impl Into<String>) -> ConfigError {
    ConfigError::Range {
        field: field.into(),
        message: message.into(),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Bps,
    SolveOde,
    Energy,
    MeasureConvergence,
    Radius,
    Epsreg,
    Lowerbound,
    Bochner,
    Tailfit,
    Zeroset,
    Degree,
    Blowup,
    Bubble,
    Scenario,
    Audit,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Self::Bps => "bps",
            Self::SolveOde => "solve-ode",
            Self::Energy => "energy",
            Self::MeasureConvergence => "measure-convergence",
            Self::Radius => "radius",
            Self::Epsreg => "epsreg",
            Self::Lowerbound => "lowerbound",
            Self::Bochner => "bochner",
            Self::Tailfit => "tailfit",
            Self::Zeroset => "zeroset",
            Self::Degree => "degree",
            Self::Blowup => "blowup",
            Self::Bubble => "bubble",
            Self::Scenario => "scenario",
            Self::Audit => "audit",
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    #[default]
    Csv,
    Json,
    Gnuplot,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    pub dir: Option<PathBuf>,
    pub format: Option<Format>,
}

/// On-disk shape of a config file, before parameter validation.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawConfig {
    pub command: Option<Command>,
    #[serde(default)]
    pub parameters: serde_json::Map<String, Value>,
    #[serde(default)]
    pub output: OutputSpec,
    pub seed: Option<u64>,
    #[serde(default)]
    pub tolerances: BTreeMap<String, f64>,
}

/// Validated run request.
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub params: Params,
    /// Parameters with defaults filled, as echoed into reports.
    pub echoed: Value,
    pub output: OutputSpec,
    pub seed: u64,
    pub tolerances: Tolerances,
}

pub const DEFAULT_SEED: u64 = 7;

/// Tolerance overrides accepted by `--tol` and the `tolerances` block.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Tolerances {
    pub quad_abs: f64,
    pub quad_rel: f64,
    pub monopole_residual: f64,
    pub theta: f64,
    pub weak_final: f64,
    pub epsreg_spread: f64,
    pub tail_spread: f64,
    pub energy_rel: f64,
    pub limit_mass: f64,
    pub zero_match: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        let q = monopole_lab::QuadConfig::default();
        Self {
            quad_abs: q.abs_tol,
            quad_rel: q.rel_tol,
            monopole_residual: monopole_lab::bubbling::MONOPOLE_RESIDUAL_TOL,
            theta: 1e-2,
            weak_final: 1e-2,
            epsreg_spread: 0.1,
            tail_spread: 1e-3,
            energy_rel: 1e-8,
            limit_mass: 1e-6,
            zero_match: 1e-6,
        }
    }
}

impl Tolerances {
    pub fn set(&mut self, name: &str, value: f64) -> Result<(), ConfigError> {
        if !(value > 0.0 && value.is_finite()) {
            return Err(range(&format!("tolerances.{name}"), format!("must be positive and finite, got {value}")));
        }
        let slot = match name {
            "quad_abs" => &mut self.quad_abs,
            "quad_rel" => &mut self.quad_rel,
            "monopole_residual" => &mut self.monopole_residual,
            "theta" => &mut self.theta,
            "weak_final" => &mut self.weak_final,
            "epsreg_spread" => &mut self.epsreg_spread,
            "tail_spread" => &mut self.tail_spread,
            "energy_rel" => &mut self.energy_rel,
            "limit_mass" => &mut self.limit_mass,
            "zero_match" => &mut self.zero_match,
            _ => {
                return Err(ConfigError::Field {
                    field: format!("tolerances.{name}"),
                    message: "unknown tolerance name".into(),
                })
            }
        };
        *slot = value;
        Ok(())
    }

    pub fn quad(&self) -> monopole_lab::QuadConfig {
        monopole_lab::QuadConfig {
            abs_tol: self.quad_abs,
            rel_tol: self.quad_rel,
            ..Default::default()
        }
    }

    pub fn as_map(&self) -> BTreeMap<String, f64> {
        match serde_json::to_value(self) {
            Ok(Value::Object(m)) => m.into_iter().filter_map(|(k, v)| Some((k, v.as_f64()?))).collect(),
            _ => BTreeMap::new(),
        }
    }
}

pub type Point = [f64; 3];

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Spacing {
    #[default]
    Log,
    Linear,
}

fn d_mass() -> f64 {
    1.0
}
fn d_r_min() -> f64 {
    0.01
}
fn d_r_max() -> f64 {
    10.0
}
fn d_points() -> usize {
    200
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BpsParams {
    pub mass: f64,
    #[serde(default = "d_r_min")]
    pub r_min: f64,
    #[serde(default = "d_r_max")]
    pub r_max: f64,
    #[serde(default = "d_points")]
    pub points: usize,
    #[serde(default)]
    pub spacing: Spacing,
}

fn d_ode_tol() -> f64 {
    1e-10
}
fn d_log_step() -> f64 {
    monopole_lab::radial_solver::DEFAULT_LOG_STEP
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolveOdeParams {
    pub mass: f64,
    #[serde(default = "d_ode_tol")]
    pub tol: f64,
    #[serde(default = "d_log_step")]
    pub log_step: f64,
    #[serde(default = "d_r_min")]
    pub r_min: f64,
    #[serde(default = "d_r_max")]
    pub r_max: f64,
    #[serde(default = "d_points")]
    pub points: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnergyParams {
    #[serde(default = "d_mass")]
    pub mass: f64,
    #[serde(default)]
    pub profile: ProfileSource<f64>,
}

fn d_conv_masses() -> Vec<f64> {
    vec![1.0, 4.0, 16.0, 64.0, 256.0]
}
fn d_bump_radius() -> f64 {
    8.0
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConvergenceParams {
    #[serde(default = "d_conv_masses")]
    pub masses: Vec<f64>,
    /// Bump center; the sequence is the BPS family at the origin.
    #[serde(default)]
    pub center: Point,
    #[serde(default = "d_bump_radius")]
    pub radius: f64,
}

fn d_deltas() -> Vec<f64> {
    vec![0.3, 0.5, 0.9]
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RadiusParams {
    #[serde(default = "d_mass")]
    pub mass: f64,
    #[serde(default = "d_deltas")]
    pub deltas: Vec<f64>,
    #[serde(default)]
    pub point: Point,
}

fn d_epsreg_masses() -> Vec<f64> {
    vec![1.0, 4.0, 16.0]
}
fn d_probes() -> usize {
    100
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EpsregParams {
    #[serde(default = "d_epsreg_masses")]
    pub masses: Vec<f64>,
    #[serde(default = "d_probes")]
    pub probes: usize,
}

fn d_lb_masses() -> Vec<f64> {
    vec![1.0, 16.0]
}
fn d_balls() -> usize {
    50
}
fn d_max_distance() -> f64 {
    40.0
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LowerboundParams {
    #[serde(default = "d_lb_masses")]
    pub masses: Vec<f64>,
    #[serde(default = "d_balls")]
    pub balls: usize,
    /// Largest center distance, in units of `1/m`.
    #[serde(default = "d_max_distance")]
    pub max_distance: f64,
    /// `Λ`; measured as `m⁻¹‖dΦ‖²` when absent.
    pub lambda: Option<f64>,
}

fn d_bochner_r_min() -> f64 {
    0.05
}
fn d_bochner_points() -> usize {
    120
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BochnerParams {
    #[serde(default = "d_mass")]
    pub mass: f64,
    #[serde(default = "d_bochner_r_min")]
    pub r_min: f64,
    #[serde(default = "d_r_max")]
    pub r_max: f64,
    #[serde(default = "d_bochner_points")]
    pub points: usize,
}

fn d_tail_masses() -> Vec<f64> {
    vec![1.0, 2.0, 4.0]
}
fn d_window() -> [f64; 2] {
    [10.0, 30.0]
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TailfitParams {
    #[serde(default = "d_tail_masses")]
    pub masses: Vec<f64>,
    /// Fit window in units of `1/m`.
    #[serde(default = "d_window")]
    pub window: [f64; 2],
}

/// Field evaluated by `zeroset` and `degree`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case", deny_unknown_fields)]
pub enum FieldSpec {
    Hedgehog {
        #[serde(default = "d_mass")]
        mass: f64,
        #[serde(default)]
        center: Point,
    },
    MultiCenter {
        centers: Vec<Point>,
        scale: f64,
        #[serde(default = "d_mass")]
        mass: f64,
    },
    Vacuum {
        #[serde(default = "d_mass")]
        mass: f64,
    },
}

impl Default for FieldSpec {
    fn default() -> Self {
        Self::Hedgehog {
            mass: 1.0,
            center: [0.0; 3],
        }
    }
}

fn d_box_half() -> f64 {
    2.0
}
fn d_zero_grid() -> usize {
    20
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ZerosetParams {
    #[serde(default)]
    pub field: FieldSpec,
    #[serde(default)]
    pub box_center: Point,
    #[serde(default = "d_box_half")]
    pub box_half: f64,
    #[serde(default = "d_zero_grid")]
    pub grid: usize,
}

fn d_sphere_grid() -> [usize; 2] {
    [64, 128]
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DegreeParams {
    #[serde(default)]
    pub field: FieldSpec,
    #[serde(default)]
    pub center: Point,
    #[serde(default = "d_mass")]
    pub radius: f64,
    #[serde(default = "d_sphere_grid")]
    pub grid: [usize; 2],
    /// Degree the field is expected to have; turns the report into a verdict.
    pub expected: Option<i64>,
}

fn d_scenario_masses() -> Vec<f64> {
    vec![16.0, 64.0, 256.0, 1024.0, 4096.0]
}
fn d_centers() -> Vec<Point> {
    vec![[0.0; 3]]
}
fn d_charge() -> i32 {
    1
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioSpec {
    pub kind: ScenarioKind,
    #[serde(default = "d_charge")]
    pub charge: i32,
    #[serde(default = "d_scenario_masses")]
    pub masses: Vec<f64>,
    #[serde(default = "d_centers")]
    pub centers: Vec<Point>,
    #[serde(default)]
    pub profile: ProfileSource<f64>,
}

impl Default for ScenarioSpec {
    fn default() -> Self {
        Self {
            kind: ScenarioKind::FixedCenter,
            charge: 1,
            masses: d_scenario_masses(),
            centers: d_centers(),
            profile: ProfileSource::ClosedForm,
        }
    }
}

fn d_radii() -> Vec<f64> {
    vec![0.5, 0.25, 0.1]
}
fn d_grid_half() -> f64 {
    1.0
}
fn d_grid_n() -> usize {
    5
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BlowupParams {
    #[serde(default)]
    pub scenario: ScenarioSpec,
    /// Candidate grid: `grid_n³` points on `[−grid_half, grid_half]³`.
    #[serde(default = "d_grid_half")]
    pub grid_half: f64,
    #[serde(default = "d_grid_n")]
    pub grid_n: usize,
    #[serde(default = "d_radii")]
    pub radii: Vec<f64>,
}

fn d_ball_radii() -> Vec<f64> {
    vec![2.0, 10.0]
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BubbleParams {
    #[serde(default)]
    pub scenario: ScenarioSpec,
    #[serde(default)]
    pub point: Point,
    #[serde(default = "d_ball_radii")]
    pub ball_radii: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioParams {
    #[serde(default)]
    pub scenario: ScenarioSpec,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AuditParams {}

#[derive(Clone, Debug, PartialEq)]
pub enum Params {
    Bps(BpsParams),
    SolveOde(SolveOdeParams),
    Energy(EnergyParams),
    MeasureConvergence(ConvergenceParams),
    Radius(RadiusParams),
    Epsreg(EpsregParams),
    Lowerbound(LowerboundParams),
    Bochner(BochnerParams),
    Tailfit(TailfitParams),
    Zeroset(ZerosetParams),
    Degree(DegreeParams),
    Blowup(BlowupParams),
    Bubble(BubbleParams),
    Scenario(ScenarioParams),
    Audit(AuditParams),
}

fn typed<P: DeserializeOwned + Serialize>(raw: &serde_json::Map<String, Value>) -> Result<(P, Value), ConfigError> {
    let p: P = serde_json::from_value(Value::Object(raw.clone())).map_err(|e| ConfigError::Field {
        field: "parameters".into(),
        message: e.to_string(),
    })?;
    let echoed = serde_json::to_value(&p).expect("parameters serialize");
    Ok((p, echoed))
}

fn positive(field: &str, v: f64) -> Result<(), ConfigError> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(range(field, format!("must be positive and finite, got {v}")))
    }
}

fn increasing_masses(field: &str, ms: &[f64]) -> Result<(), ConfigError> {
    if ms.is_empty() {
        return Err(range(field, "must not be empty"));
    }
    for &m in ms {
        positive(field, m)?;
    }
    if ms.windows(2).any(|w| w[1] <= w[0]) {
        return Err(range(field, "must be strictly increasing"));
    }
    Ok(())
}

fn radial_grid(r_min: f64, r_max: f64, points: usize) -> Result<(), ConfigError> {
    positive("parameters.r_min", r_min)?;
    positive("parameters.r_max", r_max)?;
    if r_max <= r_min {
        return Err(range("parameters.r_max", format!("must exceed r_min = {r_min}")));
    }
    if !(2..=1_000_000).contains(&points) {
        return Err(range("parameters.points", format!("must lie in [2, 1000000], got {points}")));
    }
    Ok(())
}

fn finite_point(field: &str, p: &Point) -> Result<(), ConfigError> {
    if p.iter().all(|c| c.is_finite()) {
        Ok(())
    } else {
        Err(range(field, "coordinates must be finite"))
    }
}

fn check_field(f: &FieldSpec) -> Result<(), ConfigError> {
    match f {
        FieldSpec::Hedgehog { mass, center } => {
            positive("parameters.field.mass", *mass)?;
            finite_point("parameters.field.center", center)
        }
        FieldSpec::MultiCenter { centers, scale, mass } => {
            if centers.is_empty() {
                return Err(range("parameters.field.centers", "must not be empty"));
            }
            for c in centers {
                finite_point("parameters.field.centers", c)?;
            }
            positive("parameters.field.scale", *scale)?;
            positive("parameters.field.mass", *mass)
        }
        FieldSpec::Vacuum { mass } => positive("parameters.field.mass", *mass),
    }
}

fn check_profile(field: &str, p: &ProfileSource<f64>) -> Result<(), ConfigError> {
    match *p {
        ProfileSource::ClosedForm => Ok(()),
        ProfileSource::Ode { tol } => positive(&format!("{field}.tol"), tol),
        ProfileSource::PerturbedBump { amplitude } => {
            if amplitude.is_finite() {
                Ok(())
            } else {
                Err(range(&format!("{field}.amplitude"), "must be finite"))
            }
        }
    }
}

fn check_scenario(s: &ScenarioSpec) -> Result<(), ConfigError> {
    increasing_masses("parameters.scenario.masses", &s.masses)?;
    if s.charge < 1 {
        return Err(range("parameters.scenario.charge", format!("must be at least 1, got {}", s.charge)));
    }
    for c in &s.centers {
        finite_point("parameters.scenario.centers", c)?;
    }
    check_profile("parameters.scenario.profile", &s.profile)
}

fn check_radii(field: &str, rs: &[f64]) -> Result<(), ConfigError> {
    if rs.is_empty() {
        return Err(range(field, "must not be empty"));
    }
    rs.iter().try_for_each(|&r| positive(field, r))
}

impl Params {
    fn parse(command: Command, raw: &serde_json::Map<String, Value>) -> Result<(Self, Value), ConfigError> {
        Ok(match command {
            Command::Bps => {
                let (p, e): (BpsParams, _) = typed(raw)?;
                positive("parameters.mass", p.mass)?;
                radial_grid(p.r_min, p.r_max, p.points)?;
                (Self::Bps(p), e)
            }
            Command::SolveOde => {
                let (p, e): (SolveOdeParams, _) = typed(raw)?;
                positive("parameters.mass", p.mass)?;
                positive("parameters.tol", p.tol)?;
                positive("parameters.log_step", p.log_step)?;
                if p.log_step > 0.5 {
                    return Err(range("parameters.log_step", format!("must not exceed 0.5, got {}", p.log_step)));
                }
                radial_grid(p.r_min, p.r_max, p.points)?;
                (Self::SolveOde(p), e)
            }
            Command::Energy => {
                let (p, e): (EnergyParams, _) = typed(raw)?;
                positive("parameters.mass", p.mass)?;
                check_profile("parameters.profile", &p.profile)?;
                (Self::Energy(p), e)
            }
            Command::MeasureConvergence => {
                let (p, e): (ConvergenceParams, _) = typed(raw)?;
                increasing_masses("parameters.masses", &p.masses)?;
                finite_point("parameters.center", &p.center)?;
                positive("parameters.radius", p.radius)?;
                (Self::MeasureConvergence(p), e)
            }
            Command::Radius => {
                let (p, e): (RadiusParams, _) = typed(raw)?;
                positive("parameters.mass", p.mass)?;
                finite_point("parameters.point", &p.point)?;
                if p.deltas.is_empty() {
                    return Err(range("parameters.deltas", "must not be empty"));
                }
                let max = monopole_lab::analysis::MAX_DELTA;
                if let Some(d) = p.deltas.iter().find(|&&d| !(d > 0.0 && d <= max)) {
                    return Err(range("parameters.deltas", format!("must lie in (0, {max}], got {d}")));
                }
                (Self::Radius(p), e)
            }
            Command::Epsreg => {
                let (p, e): (EpsregParams, _) = typed(raw)?;
                increasing_masses("parameters.masses", &p.masses)?;
                if p.probes == 0 {
                    return Err(range("parameters.probes", "must be at least 1"));
                }
                (Self::Epsreg(p), e)
            }
            Command::Lowerbound => {
                let (p, e): (LowerboundParams, _) = typed(raw)?;
                increasing_masses("parameters.masses", &p.masses)?;
                if p.balls == 0 {
                    return Err(range("parameters.balls", "must be at least 1"));
                }
                positive("parameters.max_distance", p.max_distance)?;
                if let Some(l) = p.lambda {
                    positive("parameters.lambda", l)?;
                }
                (Self::Lowerbound(p), e)
            }
            Command::Bochner => {
                let (p, e): (BochnerParams, _) = typed(raw)?;
                positive("parameters.mass", p.mass)?;
                radial_grid(p.r_min, p.r_max, p.points)?;
                if p.points > 2000 {
                    return Err(range("parameters.points", "must not exceed 2000 (the fit is quadratic in the grid)"));
                }
                (Self::Bochner(p), e)
            }
            Command::Tailfit => {
                let (p, e): (TailfitParams, _) = typed(raw)?;
                increasing_masses("parameters.masses", &p.masses)?;
                positive("parameters.window", p.window[0])?;
                if !(p.window[1] > 1.5 * p.window[0]) || !p.window[1].is_finite() {
                    return Err(range("parameters.window", "upper end must exceed 1.5 × the lower end"));
                }
                (Self::Tailfit(p), e)
            }
            Command::Zeroset => {
                let (p, e): (ZerosetParams, _) = typed(raw)?;
                check_field(&p.field)?;
                finite_point("parameters.box_center", &p.box_center)?;
                positive("parameters.box_half", p.box_half)?;
                if !(8..=200).contains(&p.grid) {
                    return Err(range("parameters.grid", format!("must lie in [8, 200], got {}", p.grid)));
                }
                (Self::Zeroset(p), e)
            }
            Command::Degree => {
                let (p, e): (DegreeParams, _) = typed(raw)?;
                check_field(&p.field)?;
                finite_point("parameters.center", &p.center)?;
                positive("parameters.radius", p.radius)?;
                if p.grid.iter().any(|&n| !(4..=4096).contains(&n)) {
                    return Err(range("parameters.grid", "each resolution must lie in [4, 4096]"));
                }
                (Self::Degree(p), e)
            }
            Command::Blowup => {
                let (p, e): (BlowupParams, _) = typed(raw)?;
                check_scenario(&p.scenario)?;
                positive("parameters.grid_half", p.grid_half)?;
                if !(1..=41).contains(&p.grid_n) {
                    return Err(range("parameters.grid_n", format!("must lie in [1, 41], got {}", p.grid_n)));
                }
                check_radii("parameters.radii", &p.radii)?;
                (Self::Blowup(p), e)
            }
            Command::Bubble => {
                let (p, e): (BubbleParams, _) = typed(raw)?;
                check_scenario(&p.scenario)?;
                finite_point("parameters.point", &p.point)?;
                check_radii("parameters.ball_radii", &p.ball_radii)?;
                (Self::Bubble(p), e)
            }
            Command::Scenario => {
                let (p, e): (ScenarioParams, _) = typed(raw)?;
                check_scenario(&p.scenario)?;
                (Self::Scenario(p), e)
            }
            Command::Audit => {
                let (p, e): (AuditParams, _) = typed(raw)?;
                (Self::Audit(p), e)
            }
        })
    }
}

/// Parse a config document without validating its parameters.
pub fn read_config(document: &str) -> Result<RawConfig, ConfigError> {
    if document.trim().is_empty() {
        return Err(ConfigError::Empty);
    }
    serde_json::from_str(document).map_err(|e| ConfigError::Schema {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })
}

/// Parse and validate a config document.
#[cfg(test)]
pub fn parse_config(document: &str) -> Result<RunConfig, ConfigError> {
    let raw = read_config(document)?;
    let command = raw.command.ok_or_else(|| ConfigError::Field {
        field: "command".into(),
        message: "missing".into(),
    })?;
    build(command, raw.parameters, raw.output, raw.seed, raw.tolerances.into_iter().collect())
}

/// Validate a request assembled from any source.
pub fn build(
    command: Command,
    parameters: serde_json::Map<String, Value>,
    output: OutputSpec,
    seed: Option<u64>,
    tolerances: Vec<(String, f64)>,
) -> Result<RunConfig, ConfigError> {
    let (params, echoed) = Params::parse(command, &parameters)?;
    let mut tol = Tolerances::default();
    for (k, v) in &tolerances {
        tol.set(k, *v)?;
    }
    Ok(RunConfig {
        command,
        params,
        echoed,
        output,
        seed: seed.unwrap_or(DEFAULT_SEED),
        tolerances: tol,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_bps_gets_defaults() {
        let c = parse_config(r#"{"command":"bps","parameters":{"mass":1}}"#).unwrap();
        let Params::Bps(p) = &c.params else { panic!() };
        assert_eq!((p.mass, p.r_min, p.r_max, p.points), (1.0, 0.01, 10.0, 200));
        assert_eq!(c.seed, DEFAULT_SEED);
        assert_eq!(c.output, OutputSpec::default());
    }

    #[test]
    fn unknown_key_is_named() {
        let e = parse_config(r#"{"command":"bps","parameters":{"mas":1}}"#).unwrap_err();
        assert!(e.to_string().contains("`mas`"), "{e}");
        let e = parse_config(r#"{"command":"bps","paramters":{}}"#).unwrap_err();
        assert!(e.to_string().contains("`paramters`"), "{e}");
    }

    #[test]
    fn negative_mass_is_a_range_error() {
        let e = parse_config(r#"{"command":"bps","parameters":{"mass":-1}}"#).unwrap_err();
        assert!(matches!(e, ConfigError::Range { ref field, .. } if field == "parameters.mass"), "{e}");
    }

    #[test]
    fn empty_document_rejected() {
        assert!(matches!(parse_config("  \n"), Err(ConfigError::Empty)));
    }

    #[test]
    fn syntax_errors_carry_position() {
        let e = parse_config("{\n  \"command\": \"bps\",\n  oops\n}").unwrap_err();
        assert!(matches!(e, ConfigError::Schema { line: 3, .. }), "{e}");
    }

    #[test]
    fn unknown_tolerance_rejected() {
        let e = parse_config(r#"{"command":"audit","tolerances":{"quad_rell":1e-3}}"#).unwrap_err();
        assert!(e.to_string().contains("quad_rell"), "{e}");
    }

    #[test]
    fn scenario_profiles_parse() {
        let c = parse_config(
            r#"{"command":"blowup","parameters":{"scenario":{"kind":"fixed-center","profile":{"type":"perturbed-bump","amplitude":0.1}}}}"#,
        )
        .unwrap();
        let Params::Blowup(p) = &c.params else { panic!() };
        assert_eq!(p.scenario.profile, ProfileSource::PerturbedBump { amplitude: 0.1 });
        assert_eq!(p.scenario.masses.len(), 5);
    }

    #[test]
    fn decreasing_masses_rejected() {
        let e = parse_config(r#"{"command":"epsreg","parameters":{"masses":[4,1]}}"#).unwrap_err();
        assert!(matches!(e, ConfigError::Range { .. }), "{e}");
    }
}
