//! Rescaling at a point and the mass-unbounded example families.

use serde::{Deserialize, Serialize};

use crate::algebra::Vec3;
use crate::analysis::{degree, fibonacci_directions};
use crate::error::{Error, Result};
use crate::fields::{composite, hedgehog_field, multi_center_higgs, FieldSampler, Hedgehog};
use crate::measures::{ball_energy, total_energy};
use crate::profile::{Perturbation, RadialProfile};
use crate::quadrature::{integrate_breaks, integrate_to_infinity, QuadConfig};
use crate::radial_solver::{bogomolnyi_residual, log_grid, solve_for_mass};
use crate::scalar::Real;

/// Normalized Bogomolnyi residual `max|…|/m²` accepted for configurations labeled monopoles.
pub const MONOPOLE_RESIDUAL_TOL: f64 = 1e-6;

/// `y = zoom·(x − base_point)`, with the Higgs field divided by `zoom`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScalingTransform<T> {
    pub zoom: T,
    pub base_point: Vec3<T>,
}

impl<T: Real> ScalingTransform<T> {
    /// Zoom by the mass `m` at `base_point`.
    pub fn zoom(m: T, base_point: Vec3<T>) -> Result<Self> {
        if !(m > T::zero() && m.is_finite()) {
            return Err(Error::Domain(format!("zoom must be positive and finite, got {m}")));
        }
        Ok(Self { zoom: m, base_point })
    }

    /// Metric scaling `g ↦ λ²g` with `Φ ↦ λ⁻¹Φ`, read in flat coordinates.
    ///
    /// Negative λ would add a point reflection, which samplers do not carry.
    pub fn from_lambda(lambda: T, base_point: Vec3<T>) -> Result<Self> {
        if lambda == T::zero() {
            return Err(Error::Domain("lambda must be nonzero".into()));
        }
        if lambda < T::zero() {
            return Err(Error::Unsupported("orientation-reversing scaling".into()));
        }
        Self::zoom(lambda, base_point)
    }

    pub fn identity() -> Self {
        Self {
            zoom: T::one(),
            base_point: Vec3::zero(),
        }
    }

    /// Point of the rescaled frame corresponding to `x`.
    pub fn apply(&self, x: Vec3<T>) -> Vec3<T> {
        (x - self.base_point) * self.zoom
    }

    /// `self` followed by `then`.
    pub fn compose(&self, then: &Self) -> Self {
        Self {
            zoom: self.zoom * then.zoom,
            base_point: self.base_point + then.base_point / self.zoom,
        }
    }
}

/// `higgs'(y) = zoom⁻¹·higgs(base_point + y/zoom)`.
pub fn rescale<T: Real>(sampler: &FieldSampler<T>, transform: &ScalingTransform<T>) -> FieldSampler<T> {
    sampler.rescale(transform.zoom, transform.base_point)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScenarioKind {
    FixedCenter,
    DriftingCenter,
    Mixed,
    CoincidentRescale,
}

/// Radial profile used for each exact piece.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum ProfileSource<T> {
    ClosedForm,
    /// Shooting solution at each mass.
    Ode { tol: T },
    /// BPS with a bump on `a` of width `1/m`: not a monopole.
    PerturbedBump { amplitude: T },
}

impl<T: Real> Default for ProfileSource<T> {
    fn default() -> Self {
        Self::ClosedForm
    }
}

impl<T: Real> ProfileSource<T> {
    pub fn profile(&self, mass: T) -> Result<RadialProfile<T>> {
        match *self {
            Self::ClosedForm => Ok(RadialProfile::bps(mass)),
            Self::Ode { tol } => Ok(solve_for_mass(mass, tol)?.profile),
            Self::PerturbedBump { amplitude } => Ok(RadialProfile::bps(mass).perturbed(Perturbation::Bump {
                amplitude,
                width: mass.recip(),
            })),
        }
    }
}

/// A sequence of configurations with masses `m_i → ∞`.
#[derive(Clone, Debug)]
pub struct ScenarioSequence<T: Real> {
    pub kind: ScenarioKind,
    pub masses: Vec<T>,
    pub configs: Vec<FieldSampler<T>>,
    /// Zeros of each configuration, by construction.
    pub center_schedule: Vec<Vec<Vec3<T>>>,
    pub charge: i32,
    pub source: ProfileSource<T>,
    /// Whether the configurations are presented as monopoles.
    pub labeled_monopole: bool,
    /// `max |Bogomolnyi residual| / m²` over the radial pieces; `None` for synthetic fields.
    pub residuals: Vec<Option<T>>,
}

/// Configuration labeled a monopole whose Bogomolnyi residual is too large.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MonopoleViolation<T> {
    pub index: usize,
    pub mass: T,
    pub residual: T,
    pub tolerance: T,
}

impl<T: Real> ScenarioSequence<T> {
    pub fn len(&self) -> usize {
        self.masses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.masses.is_empty()
    }

    pub fn final_mass(&self) -> T {
        *self.masses.last().expect("scenarios are non-empty")
    }

    pub fn monopole_violations(&self, tol: T) -> Vec<MonopoleViolation<T>> {
        if !self.labeled_monopole {
            return Vec::new();
        }
        self.residuals
            .iter()
            .enumerate()
            .filter_map(|(i, r)| match r {
                Some(r) if !(*r <= tol) => Some(MonopoleViolation {
                    index: i,
                    mass: self.masses[i],
                    residual: *r,
                    tolerance: tol,
                }),
                _ => None,
            })
            .collect()
    }
}

fn normalized_residual<T: Real>(sampler: &FieldSampler<T>) -> Result<Option<T>> {
    let pieces = match sampler.radial_components() {
        Ok(p) => p,
        Err(Error::UnsupportedDensity(_)) | Err(Error::Unsupported(_)) => return Ok(None),
        Err(e) => return Err(e),
    };
    let mut worst = T::zero();
    for h in pieces {
        let m = h.profile.mass();
        if !(m > T::zero()) {
            continue;
        }
        let grid = log_grid(T::lit(1e-3) / m, T::lit(20.0) / m, 200);
        worst = worst.max(bogomolnyi_residual(&h.profile, &grid)? / (m * m));
    }
    Ok(Some(worst))
}

/// Build one of the example families.
///
/// `centers` depends on `kind`: the fixed center; the drift direction
/// (zeros at `m_i·direction`); the fixed center followed by drift
/// directions; or the concentration point of the rescaled family, whose
/// base configuration has mass 1.
pub fn make_scenario<T: Real>(
    kind: ScenarioKind,
    k: i32,
    masses: &[T],
    centers: &[Vec3<T>],
    source: ProfileSource<T>,
) -> Result<ScenarioSequence<T>> {
    if masses.is_empty() {
        return Err(Error::SequenceTooShort("scenario needs at least one mass".into()));
    }
    if masses.iter().any(|&m| !(m > T::zero() && m.is_finite())) || masses.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Config("masses must be positive and strictly increasing".into()));
    }
    if k < 1 {
        return Err(Error::Config(format!("charge must be at least 1, got {k}")));
    }
    let mut configs = Vec::with_capacity(masses.len());
    let mut schedule = Vec::with_capacity(masses.len());
    let mut labeled_monopole = true;
    match kind {
        ScenarioKind::FixedCenter | ScenarioKind::DriftingCenter => {
            if centers.len() != 1 || k != 1 {
                return Err(Error::Unsupported(
                    "exact monopoles here are single BPS cores; interacting multi-monopoles are out of scope".into(),
                ));
            }
            let c = centers[0];
            if kind == ScenarioKind::DriftingCenter && c.norm() == T::zero() {
                return Err(Error::Config("drift direction must be nonzero".into()));
            }
            for &m in masses {
                let at = if kind == ScenarioKind::FixedCenter { c } else { c * m };
                configs.push(hedgehog_field(source.profile(m)?, at));
                schedule.push(vec![at]);
            }
        }
        ScenarioKind::Mixed => {
            if centers.len() < 2 || k as usize != centers.len() {
                return Err(Error::Config(
                    "mixed scenario takes a fixed center and at least one drift direction, with k equal to their count"
                        .into(),
                ));
            }
            labeled_monopole = false;
            for &m in masses {
                let mut at = vec![centers[0]];
                at.extend(centers[1..].iter().map(|&d| d * m));
                let mut min_d = T::infinity();
                for (i, a) in at.iter().enumerate() {
                    for b in &at[i + 1..] {
                        min_d = min_d.min(a.distance(*b));
                    }
                }
                let scale = (min_d * T::lit(0.25)).min(T::one());
                let higgs = multi_center_higgs(&at, scale, m)?;
                let pieces: Vec<Hedgehog<T>> = at
                    .iter()
                    .map(|&c| Ok(Hedgehog { profile: source.profile(m)?, center: c }))
                    .collect::<Result<_>>()?;
                configs.push(composite(higgs, pieces, m, k));
                schedule.push(at);
            }
        }
        ScenarioKind::CoincidentRescale => {
            if centers.len() != 1 {
                return Err(Error::Config("coincident-rescale takes exactly one concentration point".into()));
            }
            let p = centers[0];
            let (base, base_zeros) = if k == 1 {
                (hedgehog_field(source.profile(T::one())?, p), vec![p])
            } else {
                // charge k > 1 has no closed form; use the synthetic degree field
                labeled_monopole = false;
                let zs: Vec<Vec3<T>> = (0..k)
                    .map(|j| {
                        let th = T::two() * T::PI() * T::lit(j as f64) / T::lit(k as f64);
                        p + Vec3::new(th.cos(), th.sin(), T::zero()) * T::half()
                    })
                    .collect();
                let radius = T::half() * (T::PI() / T::lit(k as f64)).sin();
                (multi_center_higgs(&zs, radius * T::half(), T::one())?, zs)
            };
            for &m in masses {
                let zoom = m.recip();
                let t = ScalingTransform::zoom(zoom, p * (T::one() - m))?;
                configs.push(rescale(&base, &t));
                schedule.push(base_zeros.iter().map(|&z| t.apply(z)).collect());
            }
        }
    }
    let residuals = configs.iter().map(normalized_residual).collect::<Result<Vec<_>>>()?;
    Ok(ScenarioSequence {
        kind,
        masses: masses.to_vec(),
        configs,
        center_schedule: schedule,
        charge: k,
        source,
        labeled_monopole,
        residuals,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BubbleReference {
    /// Mass-1 BPS monopole centered at the rescaled zero.
    Bps,
    /// Constant Higgs field of norm 1.
    Vacuum,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BubbleRow<T> {
    pub mass: T,
    pub ball_radius: T,
    pub reference: BubbleReference,
    /// `sup_{B_R(0)} ||Φ'| − |Φ_ref||`.
    pub sup_distance: T,
    /// Energy of the rescaled configuration on `B_R(0)`, when densities are available.
    pub rescaled_energy: Option<T>,
}

/// Rescaled configurations at a point against the candidate bubble.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BubbleComparison<T> {
    pub point: Vec3<T>,
    pub bubble: bool,
    pub rows: Vec<BubbleRow<T>>,
    /// Degree of the final rescaled configuration on the largest sphere.
    pub limit_charge: i64,
    /// `2 s(2R) − s(R)` for `s(R) = sup_{∂B_R}|Φ'|`, removing the `1/R` tail.
    pub limit_mass: T,
    pub limit_mass_radii: (T, T),
}

fn sphere_sup<T: Real>(sampler: &FieldSampler<T>, radius: T) -> Result<T> {
    let mut best = T::zero();
    for u in fibonacci_directions::<T>(400) {
        best = best.max(sampler.higgs_norm(u * radius)?);
    }
    Ok(best)
}

fn comparison_points<T: Real>(radius: T, focus: Vec3<T>) -> Vec<Vec3<T>> {
    let dirs = fibonacci_directions::<T>(96);
    let mut pts = vec![Vec3::zero(), focus];
    for k in 1..=24 {
        let s = radius * T::from_usize_lossy(k) / T::lit(24.0);
        pts.extend(dirs.iter().map(|&u| u * s));
    }
    // resolve the core of an off-center bubble too
    for k in 1..=8 {
        let s = T::lit(0.25 * k as f64);
        pts.extend(dirs.iter().map(|&u| focus + u * s).filter(|q| q.norm() <= radius));
    }
    pts
}

/// Rescale each configuration at `point` by its mass and compare with the
/// mass-1 monopole at the rescaled zero.
pub fn bubble_compare<T: Real>(
    scenario: &ScenarioSequence<T>,
    point: Vec3<T>,
    ball_radii: &[T],
) -> Result<BubbleComparison<T>> {
    if scenario.len() < 3 {
        return Err(Error::SequenceTooShort(format!(
            "bubble comparison needs at least 3 configurations, got {}",
            scenario.len()
        )));
    }
    if ball_radii.is_empty() || ball_radii.iter().any(|&r| !(r > T::zero())) {
        return Err(Error::Domain("ball radii must be positive".into()));
    }
    // a zero counts as near when it lies in the O(m^{-1/2}) ball around the point
    let near_zero = |i: usize| {
        let m = scenario.masses[i];
        let capture = T::lit(10.0) / m.sqrt();
        scenario.center_schedule[i]
            .iter()
            .copied()
            .filter(|z| z.distance(point) <= capture)
            .min_by(|a, b| a.distance(point).partial_cmp(&b.distance(point)).unwrap_or(std::cmp::Ordering::Equal))
    };
    let n = scenario.len();
    let tail_start = n - crate::measures::tail_len(n);
    let bubble = (tail_start..n).all(|i| near_zero(i).is_some());
    let mut rows = Vec::new();
    let mut last = None;
    for (i, config) in scenario.configs.iter().enumerate() {
        let m = scenario.masses[i];
        let t = ScalingTransform::zoom(m, point)?;
        let rescaled = rescale(config, &t);
        let zero = if bubble { near_zero(i) } else { None };
        let (reference, focus) = match zero {
            Some(z) => (BubbleReference::Bps, t.apply(z)),
            None => (BubbleReference::Vacuum, Vec3::zero()),
        };
        let bubble_field = hedgehog_field(RadialProfile::bps(T::one()), focus);
        for &r in ball_radii {
            let mut sup = T::zero();
            for y in comparison_points(r, focus) {
                let lhs = rescaled.higgs_norm(y)?;
                let rhs = match reference {
                    BubbleReference::Bps => bubble_field.higgs_norm(y)?,
                    BubbleReference::Vacuum => T::one(),
                };
                sup = sup.max((lhs - rhs).abs());
            }
            let rescaled_energy = match ball_energy(&rescaled, Vec3::zero(), r) {
                Ok(v) => Some(v),
                Err(Error::UnsupportedDensity(_)) | Err(Error::Unsupported(_)) => None,
                Err(e) => return Err(e),
            };
            rows.push(BubbleRow {
                mass: m,
                ball_radius: r,
                reference,
                sup_distance: sup,
                rescaled_energy,
            });
        }
        last = Some(rescaled);
    }
    let last = last.expect("non-empty scenario");
    let r_big = ball_radii.iter().copied().fold(T::zero(), T::max);
    let limit_charge = match degree(&last, Vec3::zero(), r_big, (64, 128)) {
        Ok(d) => d.degree,
        Err(Error::UndefinedDegree { .. }) => 0,
        Err(e) => return Err(e),
    };
    let r1 = r_big.max(T::lit(20.0));
    let r2 = r1 + r1;
    let limit_mass = T::two() * sphere_sup(&last, r2)? - sphere_sup(&last, r1)?;
    Ok(BubbleComparison {
        point,
        bubble,
        rows,
        limit_charge,
        limit_mass,
        limit_mass_radii: (r1, r2),
    })
}

/// One row of the energy-formula audit.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnergyAuditRow<T> {
    pub mass: T,
    pub total: T,
    /// `4πκ m k`.
    pub predicted: T,
    pub difference: T,
    /// `m⁻¹ 𝓔`.
    pub normalized: T,
    /// `‖∗F_A − d_AΦ‖²` by radial quadrature.
    pub defect: T,
}

fn defect_integral<T: Real>(sampler: &FieldSampler<T>, cfg: &QuadConfig<T>) -> Result<T> {
    let four_pi = T::four_pi();
    let mut total = T::zero();
    for piece in sampler.radial_components()? {
        let p = &piece.profile;
        let s = p.core_scale();
        let f = |r: T| four_pi * r * r * p.bogomolnyi_defect_density(r);
        let breaks: Vec<T> = [0.0, 0.25, 1.0, 4.0, 16.0, 64.0].iter().map(|&k| s * T::lit(k)).collect();
        total += integrate_breaks(f, &breaks, cfg)?.value;
        total += integrate_to_infinity(f, s * T::lit(64.0), cfg)?.value;
    }
    Ok(total)
}

/// Total energy of each configuration against `4πκ m k`.
pub fn energy_formula_audit<T: Real>(scenario: &ScenarioSequence<T>, kappa: T) -> Result<Vec<EnergyAuditRow<T>>> {
    let cfg = QuadConfig::default();
    scenario
        .configs
        .iter()
        .map(|c| {
            let e = total_energy(c, kappa)?;
            let defect = defect_integral(c, &cfg)?;
            Ok(EnergyAuditRow {
                mass: e.mass,
                total: e.value,
                predicted: e.predicted,
                difference: e.value - e.predicted,
                normalized: if e.mass > T::zero() { e.value / e.mass } else { T::zero() },
                defect,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::{find_zeros, Aabb};
    use crate::measures::ball_energy;

    #[test]
    fn rescaled_bps_is_unit_bps() {
        for m in [2.0_f64, 7.5, 64.0] {
            let c = Vec3::new(0.3, -0.1, 0.2);
            let s = hedgehog_field(RadialProfile::bps(m), c);
            let r = rescale(&s, &ScalingTransform::zoom(m, c).unwrap());
            let unit = hedgehog_field(RadialProfile::bps(1.0), Vec3::zero());
            for y in comparison_points(10.0, Vec3::zero()) {
                assert!((r.higgs_norm(y).unwrap() - unit.higgs_norm(y).unwrap()).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn ball_energy_scales_inversely() {
        let (m, r) = (4.0_f64, 0.5);
        let c = Vec3::new(0.1, 0.0, 0.0);
        let s = hedgehog_field(RadialProfile::bps(1.0), c);
        let x = Vec3::new(0.3, 0.2, 0.0);
        let t = ScalingTransform::zoom(m, Vec3::zero()).unwrap();
        let before = ball_energy(&s, x, r).unwrap();
        let after = ball_energy(&rescale(&s, &t), t.apply(x), m * r).unwrap();
        assert!((after - before / m).abs() <= 1e-8 * before, "{after} vs {}", before / m);
    }

    #[test]
    fn zoom_one_is_identity() {
        let s = hedgehog_field(RadialProfile::bps(3.0), Vec3::new(1.0, 0.0, 0.0));
        let r = rescale(&s, &ScalingTransform::identity());
        let y = Vec3::new(0.4, 0.5, -0.2);
        assert_eq!(s.higgs_norm(y).unwrap(), r.higgs_norm(y).unwrap());
    }

    #[test]
    fn transforms_compose() {
        let s = multi_center_higgs(&[Vec3::<f64>::new(0.2, 0.1, 0.0)], 0.1, 1.0).unwrap();
        let t1 = ScalingTransform::zoom(3.0, Vec3::new(0.1, 0.0, 0.0)).unwrap();
        let t2 = ScalingTransform::zoom(0.5, Vec3::new(0.0, 0.2, 0.0)).unwrap();
        let twice = rescale(&rescale(&s, &t1), &t2);
        let once = rescale(&s, &t1.compose(&t2));
        let y = Vec3::new(0.05, 0.02, 0.1);
        assert!((twice.higgs_norm(y).unwrap() - once.higgs_norm(y).unwrap()).abs() < 1e-14);
    }

    #[test]
    fn lambda_validation() {
        assert!(ScalingTransform::<f64>::from_lambda(0.0, Vec3::zero()).is_err());
        assert!(ScalingTransform::<f64>::from_lambda(2.0, Vec3::zero()).is_ok());
    }

    #[test]
    fn fixed_center_zeros() {
        let c = Vec3::new(0.25, 0.0, -0.1);
        let sc = make_scenario(ScenarioKind::FixedCenter, 1, &[1.0, 4.0, 16.0, 64.0], &[c], ProfileSource::ClosedForm)
            .unwrap();
        assert_eq!(sc.configs.len(), 4);
        let bx = Aabb::cube(Vec3::zero(), 1.0).unwrap();
        for cfg in &sc.configs {
            let z = find_zeros(cfg, &bx, 16).unwrap();
            assert_eq!(z.zeros.len(), 1);
            assert!(z.zeros[0].distance(c) < 1e-6);
        }
        assert!(sc.monopole_violations(MONOPOLE_RESIDUAL_TOL).is_empty());
    }

    #[test]
    fn drifting_zero_leaves_box() {
        let sc = make_scenario(
            ScenarioKind::DriftingCenter,
            1,
            &[0.5, 1.0, 2.0, 4.0],
            &[Vec3::e1()],
            ProfileSource::ClosedForm,
        )
        .unwrap();
        let bx = Aabb::cube(Vec3::zero(), 1.5).unwrap();
        let counts: Vec<usize> = sc.configs.iter().map(|c| find_zeros(c, &bx, 16).unwrap().zeros.len()).collect();
        assert_eq!(counts, vec![1, 1, 0, 0]);
    }

    #[test]
    fn coincident_masses_follow_lambda() {
        let masses: Vec<f64> = (1..=4).map(|i| 2f64.powi(i)).collect();
        let sc = make_scenario(ScenarioKind::CoincidentRescale, 1, &masses, &[Vec3::zero()], ProfileSource::ClosedForm)
            .unwrap();
        for (c, m) in sc.configs.iter().zip(&masses) {
            assert_eq!(c.mass(), *m);
        }
    }

    #[test]
    fn interacting_centers_unsupported() {
        let r = make_scenario(
            ScenarioKind::FixedCenter,
            2,
            &[1.0, 2.0],
            &[Vec3::zero(), Vec3::e1()],
            ProfileSource::<f64>::ClosedForm,
        );
        assert!(matches!(r, Err(Error::Unsupported(_))));
    }

    #[test]
    fn corrupted_scenario_is_flagged() {
        let sc = make_scenario(
            ScenarioKind::FixedCenter,
            1,
            &[1.0, 2.0, 4.0],
            &[Vec3::zero()],
            ProfileSource::PerturbedBump { amplitude: 0.05 },
        )
        .unwrap();
        assert_eq!(sc.monopole_violations(MONOPOLE_RESIDUAL_TOL).len(), 3);
    }

    #[test]
    fn bubble_at_fixed_center() {
        let c = Vec3::<f64>::new(0.1, 0.2, 0.3);
        let sc = make_scenario(ScenarioKind::FixedCenter, 1, &[4.0, 16.0, 64.0], &[c], ProfileSource::ClosedForm)
            .unwrap();
        let b = bubble_compare(&sc, c, &[2.0, 10.0]).unwrap();
        assert!(b.bubble);
        assert!(b.rows.iter().all(|r| r.sup_distance == 0.0), "{:?}", b.rows);
        assert_eq!(b.limit_charge, 1);
        assert!((b.limit_mass - 1.0).abs() < 1e-6, "{}", b.limit_mass);
    }

    #[test]
    fn no_bubble_off_the_blow_up_set() {
        let sc = make_scenario(
            ScenarioKind::FixedCenter,
            1,
            &[1024.0, 4096.0, 16384.0, 65536.0],
            &[Vec3::zero()],
            ProfileSource::ClosedForm,
        )
        .unwrap();
        let b = bubble_compare(&sc, Vec3::new(0.5, 0.0, 0.0), &[2.0]).unwrap();
        assert!(!b.bubble);
        assert_eq!(b.limit_charge, 0);
        let energies: Vec<f64> = b.rows.iter().map(|r| r.rescaled_energy.unwrap()).collect();
        assert!(energies.windows(2).all(|w| w[1] < w[0]), "{energies:?}");
        assert!(*energies.last().unwrap() < 1e-3);
    }

    #[test]
    fn coincident_bubble_is_base_config() {
        let masses = [2.0, 4.0, 8.0, 16.0];
        let sc = make_scenario(ScenarioKind::CoincidentRescale, 1, &masses, &[Vec3::zero()], ProfileSource::ClosedForm)
            .unwrap();
        let b = bubble_compare(&sc, Vec3::zero(), &[5.0]).unwrap();
        assert!(b.rows.iter().all(|r| r.sup_distance < 1e-12));
        assert_eq!(b.limit_charge, 1);
    }

    #[test]
    fn synthetic_coincident_family_carries_charge() {
        let sc = make_scenario(
            ScenarioKind::CoincidentRescale,
            3,
            &[2.0, 4.0, 8.0],
            &[Vec3::zero()],
            ProfileSource::ClosedForm,
        )
        .unwrap();
        let d = degree(sc.configs.last().unwrap(), Vec3::zero(), 0.5, (96, 192)).unwrap();
        assert_eq!(d.degree, 3);
    }

    #[test]
    fn energy_audit_fixed_center() {
        let sc = make_scenario(
            ScenarioKind::FixedCenter,
            1,
            &[0.5_f64, 1.0, 4.0, 16.0],
            &[Vec3::zero()],
            ProfileSource::ClosedForm,
        )
        .unwrap();
        let rows = energy_formula_audit(&sc, 1.0).unwrap();
        for r in &rows {
            assert!((r.normalized - rows[0].normalized).abs() < 1e-6 * rows[0].normalized);
            assert!(r.defect < 1e-20);
        }
    }

    #[test]
    fn energy_audit_flat_and_perturbed() {
        let flat = ScenarioSequence {
            kind: ScenarioKind::FixedCenter,
            masses: vec![1.0, 2.0],
            configs: vec![hedgehog_field(RadialProfile::flat(), Vec3::zero()); 2],
            center_schedule: vec![vec![]; 2],
            charge: 1,
            source: ProfileSource::ClosedForm,
            labeled_monopole: false,
            residuals: vec![None; 2],
        };
        for r in energy_formula_audit(&flat, 1.0).unwrap() {
            assert_eq!(r.total, 0.0);
        }
        let bad = make_scenario(
            ScenarioKind::FixedCenter,
            1,
            &[1.0_f64, 2.0],
            &[Vec3::zero()],
            ProfileSource::PerturbedBump { amplitude: 0.05 },
        )
        .unwrap();
        for r in energy_formula_audit(&bad, 1.0).unwrap() {
            assert!(r.difference > 0.0);
            assert!((r.difference - r.defect).abs() < 1e-8 * r.total, "{r:?}");
        }
    }
}
