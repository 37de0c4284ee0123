use serde::{Deserialize, Serialize};

use super::zeros::{find_zeros, hausdorff_distance, Aabb};
use crate::algebra::Vec3;
use crate::bubbling::{ScenarioKind, ScenarioSequence};
use crate::error::{Error, Result};
use crate::measures::{cardinality_verdict, density_theta, tail_len, CardinalityVerdict, EnergyMeasure};
use crate::scalar::Real;

/// Tuning of the blow-up set estimate.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlowUpOptions<T> {
    pub kappa: T,
    /// A candidate joins S when its tail minimum of `μ_i(B_r)` is at least
    /// `(1 − tolerance_fraction)·4πκ` for every radius.
    pub tolerance_fraction: T,
    /// Lattice size for the zero search.
    pub zero_grid: usize,
    /// Tolerance for `Θ ∈ 4πκ ℤ`.
    pub theta_tol: T,
    /// Zero search box; defaults to the candidate hull padded by the largest radius.
    pub search_box: Option<Aabb<T>>,
}

impl<T: Real> Default for BlowUpOptions<T> {
    fn default() -> Self {
        Self {
            kappa: T::one(),
            tolerance_fraction: T::lit(0.1),
            zero_grid: 20,
            theta_tol: T::lit(1e-2),
            search_box: None,
        }
    }
}

/// Density at a point of the estimated blow-up set.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointDensity<T> {
    pub point: Vec3<T>,
    pub theta: T,
    pub k_x: i64,
    pub quantized: bool,
    /// Tail minimum of `μ_i(B_r(point))` per radius.
    pub liminf: Vec<T>,
}

/// Blow-up set, zero set and the verdicts relating them.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConcentrationReport<T> {
    pub kind: ScenarioKind,
    pub charge: i32,
    pub tail_masses: Vec<T>,
    pub radii: Vec<T>,
    pub liminf_rule: String,
    pub threshold: T,
    pub cluster_tolerance: T,
    pub blow_up_set: Vec<Vec3<T>>,
    pub zero_set: Vec<Vec3<T>>,
    pub densities: Vec<PointDensity<T>>,
    /// `m_i⁻¹e` decreases along the tail at every candidate off S.
    pub e_infinity_verdict: bool,
    pub sets_equal: bool,
    pub hausdorff: T,
    pub cardinality: CardinalityVerdict,
    pub cardinality_ok: bool,
    pub warnings: Vec<String>,
}

impl<T: Real> ConcentrationReport<T> {
    pub fn multiplicities(&self) -> Vec<i64> {
        self.densities.iter().map(|d| d.k_x).collect()
    }
}

// Greedy clustering: each point joins the first cluster whose seed is within tol.
fn cluster<T: Real>(points: &[Vec3<T>], tol: T) -> Vec<Vec<Vec3<T>>> {
    let mut clusters: Vec<Vec<Vec3<T>>> = Vec::new();
    for &p in points {
        match clusters.iter_mut().find(|c| c[0].distance(p) <= tol) {
            Some(c) => c.push(p),
            None => clusters.push(vec![p]),
        }
    }
    clusters
}

fn centroid<T: Real>(pts: &[Vec3<T>]) -> Vec3<T> {
    pts.iter().fold(Vec3::zero(), |a, &p| a + p) / T::from_usize_lossy(pts.len())
}

fn hull<T: Real>(points: &[Vec3<T>], pad: T) -> Result<Aabb<T>> {
    let mut lo = Vec3::new(T::infinity(), T::infinity(), T::infinity());
    let mut hi = -lo;
    for p in points {
        lo = Vec3::new(lo.x.min(p.x), lo.y.min(p.y), lo.z.min(p.z));
        hi = Vec3::new(hi.x.max(p.x), hi.y.max(p.y), hi.z.max(p.z));
    }
    let d = Vec3::new(pad, pad, pad);
    Aabb::new(lo - d, hi + d)
}

/// Estimate `S`, `Z` and the densities `Θ` along a scenario.
///
/// `liminf` is the minimum over the tail third of the sequence; `Z`
/// collects zero clusters present in every tail configuration, clustered
/// within `30 m_final^{-1/2}`.
pub fn estimate_blow_up_set<T: Real>(
    scenario: &ScenarioSequence<T>,
    candidate_grid: &[Vec3<T>],
    radii: &[T],
    opts: &BlowUpOptions<T>,
) -> Result<ConcentrationReport<T>> {
    let n = scenario.len();
    if n < 5 {
        return Err(Error::SequenceTooShort(format!("blow-up estimate needs at least 5 masses, got {n}")));
    }
    if candidate_grid.is_empty() {
        return Err(Error::Domain("candidate grid is empty".into()));
    }
    let mut radii: Vec<T> = radii.to_vec();
    if radii.is_empty() || radii.iter().any(|&r| !(r > T::zero())) {
        return Err(Error::Domain("radii must be positive".into()));
    }
    radii.sort_by(|a, b| b.partial_cmp(a).unwrap_or(std::cmp::Ordering::Equal));
    radii.dedup();
    let r_max = radii[0];
    let measures = scenario
        .configs
        .iter()
        .map(|c| EnergyMeasure::new(c.clone()))
        .collect::<Result<Vec<_>>>()?;
    let tail = n - tail_len(n);
    let unit = T::four_pi() * opts.kappa;
    let threshold = unit * (T::one() - opts.tolerance_fraction);
    let m_final = scenario.final_mass();
    let cluster_tol = T::lit(30.0) / m_final.sqrt();
    let mut warnings = Vec::new();

    // S
    let mut hits: Vec<(Vec3<T>, T, Vec<T>)> = Vec::new();
    for &x in candidate_grid {
        let mut liminf = Vec::with_capacity(radii.len());
        for &r in &radii {
            let mut low = T::infinity();
            for mu in &measures[tail..] {
                low = low.min(mu.ball(x, r)?);
            }
            liminf.push(low);
        }
        if liminf.iter().all(|&v| v >= threshold) {
            let score = *liminf.last().expect("radii non-empty");
            hits.push((x, score, liminf));
        }
    }
    let hit_points: Vec<Vec3<T>> = hits.iter().map(|h| h.0).collect();
    let mut blow_up = Vec::new();
    let mut liminfs = Vec::new();
    for group in cluster(&hit_points, cluster_tol) {
        let best = hits
            .iter()
            .filter(|h| group.contains(&h.0))
            .max_by(|a, b| a.1.partial_cmp(&b.1).unwrap_or(std::cmp::Ordering::Equal))
            .expect("cluster non-empty");
        blow_up.push(best.0);
        liminfs.push(best.2.clone());
    }

    // Z
    let search_box = match &opts.search_box {
        Some(b) => *b,
        None => hull(candidate_grid, r_max)?,
    };
    let mut tail_zeros: Vec<Vec<Vec3<T>>> = Vec::new();
    for c in &scenario.configs[tail..] {
        let found = find_zeros(c, &search_box, opts.zero_grid)?;
        warnings.extend(found.warnings);
        tail_zeros.push(found.zeros);
    }
    let all: Vec<Vec3<T>> = tail_zeros.iter().flatten().copied().collect();
    let mut zero_set: Vec<Vec3<T>> = cluster(&all, cluster_tol)
        .into_iter()
        .filter(|g| {
            tail_zeros.iter().all(|zs| zs.iter().any(|z| g.contains(z)))
        })
        .map(|g| centroid(&g))
        .collect();
    zero_set.sort_by(|a, b| a.lex_cmp(b));

    // Θ on S
    let mut densities = Vec::new();
    for (x, liminf) in blow_up.iter().zip(liminfs) {
        let est = density_theta(&measures, *x, &radii, opts.kappa, opts.theta_tol)?;
        if est.multiplicity < 1 {
            warnings.push(format!("point {x} of S has Θ = {} below 4πκ/2", est.theta));
        }
        densities.push(PointDensity {
            point: *x,
            theta: est.theta,
            k_x: est.multiplicity,
            quantized: est.quantized,
            liminf,
        });
    }
    densities.sort_by(|a, b| a.point.lex_cmp(&b.point));
    blow_up.sort_by(|a, b| a.lex_cmp(b));

    // density decay off S
    let mut e_infinity_verdict = true;
    for &x in candidate_grid {
        if blow_up.iter().any(|s| s.distance(x) <= cluster_tol) {
            continue;
        }
        let vals = measures[tail..].iter().map(|mu| mu.density(x)).collect::<Result<Vec<_>>>()?;
        if vals.windows(2).any(|w| w[1] > w[0] * (T::one() + T::lit(1e-12))) {
            e_infinity_verdict = false;
        }
    }

    // coverage: every energy core of the final configuration should be near a candidate
    if let Ok(pieces) = scenario.configs[n - 1].radial_components() {
        for h in pieces {
            if search_box.contains(h.center) && candidate_grid.iter().all(|c| c.distance(h.center) > r_max) {
                warnings.push(format!("candidate grid misses the energy peak at {}", h.center));
            }
        }
    }

    let hausdorff = hausdorff_distance(&blow_up, &zero_set);
    let sets_equal = hausdorff <= cluster_tol;
    let mults: Vec<i64> = densities.iter().map(|d| d.k_x).collect();
    let cardinality = cardinality_verdict(&mults, scenario.charge as i64);
    Ok(ConcentrationReport {
        kind: scenario.kind,
        charge: scenario.charge,
        tail_masses: scenario.masses[tail..].to_vec(),
        radii,
        liminf_rule: "minimum over the tail third of the sequence".into(),
        threshold,
        cluster_tolerance: cluster_tol,
        blow_up_set: blow_up,
        zero_set,
        densities,
        e_infinity_verdict,
        sets_equal,
        hausdorff,
        cardinality,
        cardinality_ok: cardinality != CardinalityVerdict::Violated,
        warnings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bubbling::{make_scenario, ProfileSource};

    fn grid(half: f64, n: usize) -> Vec<Vec3<f64>> {
        let mut g = Vec::new();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let t = |a: usize| -half + 2.0 * half * a as f64 / (n - 1) as f64;
                    g.push(Vec3::new(t(i), t(j), t(k)));
                }
            }
        }
        g
    }

    fn masses() -> Vec<f64> {
        vec![16.0, 64.0, 256.0, 1024.0, 4096.0]
    }

    #[test]
    fn fixed_center_s_equals_z() {
        let sc = make_scenario(ScenarioKind::FixedCenter, 1, &masses(), &[Vec3::zero()], ProfileSource::ClosedForm)
            .unwrap();
        let rep = estimate_blow_up_set(&sc, &grid(1.0, 5), &[0.5, 0.25, 0.1], &BlowUpOptions::default()).unwrap();
        assert_eq!(rep.blow_up_set, vec![Vec3::zero()]);
        assert_eq!(rep.zero_set.len(), 1);
        assert!(rep.zero_set[0].norm() < 1e-6);
        assert!(rep.sets_equal);
        assert_eq!(rep.multiplicities(), vec![1]);
        assert!((rep.densities[0].theta - 4.0 * std::f64::consts::PI).abs() < 1e-2);
        assert!(rep.e_infinity_verdict);
        assert_eq!(rep.cardinality, CardinalityVerdict::Holds);
        assert!(rep.warnings.is_empty(), "{:?}", rep.warnings);
    }

    #[test]
    fn drifting_center_escapes() {
        let sc = make_scenario(ScenarioKind::DriftingCenter, 1, &masses(), &[Vec3::e1()], ProfileSource::ClosedForm)
            .unwrap();
        let rep = estimate_blow_up_set(&sc, &grid(1.0, 5), &[0.5, 0.25], &BlowUpOptions::default()).unwrap();
        assert!(rep.blow_up_set.is_empty() && rep.zero_set.is_empty());
        assert!(rep.sets_equal);
        assert_eq!(rep.cardinality, CardinalityVerdict::Escaped);
        assert!(rep.cardinality_ok);
        assert!(rep.e_infinity_verdict);
    }

    #[test]
    fn mixed_keeps_the_fixed_center() {
        let c = Vec3::new(0.5, 0.0, 0.0);
        let sc = make_scenario(
            ScenarioKind::Mixed,
            2,
            &masses(),
            &[c, Vec3::new(0.0, 1.0, 0.0)],
            ProfileSource::ClosedForm,
        )
        .unwrap();
        let rep = estimate_blow_up_set(&sc, &grid(1.0, 5), &[0.5, 0.25], &BlowUpOptions::default()).unwrap();
        assert_eq!(rep.zero_set.len(), 1);
        assert!(rep.zero_set[0].distance(c) < 1e-6);
        assert_eq!(rep.blow_up_set, vec![c]);
        assert!(rep.cardinality_ok);
    }

    #[test]
    fn short_sequences_rejected() {
        let sc = make_scenario(
            ScenarioKind::FixedCenter,
            1,
            &[1.0, 2.0, 4.0],
            &[Vec3::zero()],
            ProfileSource::ClosedForm,
        )
        .unwrap();
        assert!(estimate_blow_up_set(&sc, &grid(1.0, 3), &[0.5], &BlowUpOptions::default()).is_err());
    }
}
