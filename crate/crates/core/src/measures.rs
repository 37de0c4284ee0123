//! Energies of balls and of all of space, the normalized measures
//! `μ = m⁻¹ e ℋ³`, weak-convergence tests and the density `Θ`.
//!
//! Every density-bearing sampler is a sum of radial pieces, so ball energies
//! reduce to one-dimensional shell integrals: a shell of radius `s` around a
//! piece's center meets a ball of radius `R` at distance `d` in a spherical
//! cap of area `π s (R² − (s − d)²)/d`.

use serde::{Deserialize, Serialize};

use crate::algebra::Vec3;
use crate::analysis::ConcentrationReport;
use crate::error::{Error, Result};
use crate::fields::{FieldSampler, Hedgehog};
use crate::profile::RadialProfile;
use crate::quadrature::{integrate, integrate_breaks, integrate_to_infinity, QuadConfig};
use crate::scalar::Real;

// Ball centers closer than this fraction of the radius count as concentric.
const CONCENTRIC_FRACTION: f64 = 1e-9;

fn core_breaks<T: Real>(profile: &RadialProfile<T>, lo: T, hi: T) -> Vec<T> {
    let scale = profile.core_scale();
    let mut b = vec![lo];
    for k in [0.25, 1.0, 4.0, 16.0, 64.0] {
        let s = scale * T::lit(k);
        if s > lo && s < hi {
            b.push(s);
        }
    }
    b.push(hi);
    b
}

fn piece_ball_energy<T: Real>(piece: &Hedgehog<T>, center: Vec3<T>, radius: T, cfg: &QuadConfig<T>) -> Result<T> {
    let p = &piece.profile;
    let d = center.distance(piece.center);
    if !p.is_regular() && d <= radius {
        return Err(Error::Divergence(format!(
            "ball of radius {radius} around {center} contains the singular point {}",
            piece.center
        )));
    }
    let four_pi = T::four_pi();
    if d <= radius * T::lit(CONCENTRIC_FRACTION) {
        let est = integrate_breaks(|s| four_pi * s * s * p.energy_density(s), &core_breaks(p, T::zero(), radius), cfg)?;
        return Ok(est.value);
    }
    let pi = T::PI();
    let cap = move |s: T| {
        let w = radius * radius - (s - d) * (s - d);
        pi * s * w.max(T::zero()) / d * p.energy_density(s)
    };
    let mut total = T::zero();
    if d < radius {
        let inner = radius - d;
        total += integrate_breaks(|s| four_pi * s * s * p.energy_density(s), &core_breaks(p, T::zero(), inner), cfg)?.value;
    }
    let lo = (radius - d).abs();
    total += integrate_breaks(cap, &core_breaks(p, lo, radius + d), cfg)?.value;
    Ok(total)
}

/// `∫_{B_radius(center)} e`.
pub fn ball_energy<T: Real>(sampler: &FieldSampler<T>, center: Vec3<T>, radius: T) -> Result<T> {
    ball_energy_with(sampler, center, radius, &QuadConfig::default())
}

pub fn ball_energy_with<T: Real>(sampler: &FieldSampler<T>, center: Vec3<T>, radius: T, cfg: &QuadConfig<T>) -> Result<T> {
    if !(radius >= T::zero()) || !radius.is_finite() {
        return Err(Error::Domain(format!("ball radius must be finite and nonnegative, got {radius}")));
    }
    if radius == T::zero() {
        return Ok(T::zero());
    }
    sampler
        .radial_components()?
        .into_iter()
        .try_fold(T::zero(), |acc, piece| Ok(acc + piece_ball_energy(piece, center, radius, cfg)?))
}

/// Total energy with the prediction of the energy formula.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TotalEnergy<T> {
    pub value: T,
    pub error_estimate: T,
    /// `4πκ m k`.
    pub predicted: T,
    pub mass: T,
    pub charge: i32,
}

fn check_tail<T: Real>(p: &RadialProfile<T>) -> Result<()> {
    // integrable iff s³ e(s) keeps decaying
    let s1 = p.core_scale() * T::lit(1e4);
    let s2 = s1 * T::lit(10.0);
    let g1 = s1 * s1 * s1 * p.energy_density(s1);
    let g2 = s2 * s2 * s2 * p.energy_density(s2);
    if !(g1.is_finite() && g2.is_finite()) || g2 > g1 * T::half() {
        return Err(Error::Divergence(format!(
            "energy density does not decay: s³e = {g1} at {s1}, {g2} at {s2}"
        )));
    }
    Ok(())
}

fn piece_total<T: Real>(p: &RadialProfile<T>, r_min: T, cfg: &QuadConfig<T>) -> Result<(T, T)> {
    if r_min == T::zero() && !p.is_regular() {
        return Err(Error::Divergence("singular profile integrated down to r = 0".into()));
    }
    check_tail(p)?;
    let cut = (p.core_scale() * T::lit(64.0)).max(r_min * T::two());
    let four_pi = T::four_pi();
    let f = |s: T| four_pi * s * s * p.energy_density(s);
    let inner = integrate_breaks(f, &core_breaks(p, r_min, cut), cfg)?;
    let tail = integrate_to_infinity(f, cut, cfg)?;
    Ok((inner.value + tail.value, inner.error + tail.error))
}

/// `∫_{ℝ³} e`, compared against `4πκ m k`.
pub fn total_energy<T: Real>(sampler: &FieldSampler<T>, kappa: T) -> Result<TotalEnergy<T>> {
    total_energy_with(sampler, kappa, T::zero(), &QuadConfig::default())
}

/// Total energy outside radius `r_min` around each radial piece.
pub fn total_energy_with<T: Real>(
    sampler: &FieldSampler<T>,
    kappa: T,
    r_min: T,
    cfg: &QuadConfig<T>,
) -> Result<TotalEnergy<T>> {
    let mut value = T::zero();
    let mut err = T::zero();
    for piece in sampler.radial_components()? {
        let (v, e) = piece_total(&piece.profile, r_min, cfg)?;
        value += v;
        err += e;
    }
    let mass = sampler.mass();
    let charge = sampler.charge();
    Ok(TotalEnergy {
        value,
        error_estimate: err,
        predicted: T::four_pi() * kappa * mass * T::lit(charge as f64),
        mass,
        charge,
    })
}

/// `μ = m⁻¹ e ℋ³` for one configuration.
#[derive(Clone, Debug)]
pub struct EnergyMeasure<T: Real> {
    pub source: FieldSampler<T>,
    pub normalization: T,
    pub cfg: QuadConfig<T>,
}

impl<T: Real> EnergyMeasure<T> {
    pub fn new(source: FieldSampler<T>) -> Result<Self> {
        Self::with_config(source, QuadConfig::default())
    }

    pub fn with_config(source: FieldSampler<T>, cfg: QuadConfig<T>) -> Result<Self> {
        if !source.supports_density() {
            return Err(Error::UnsupportedDensity("synthetic-higgs-only"));
        }
        let normalization = source.mass();
        if !(normalization > T::zero()) {
            return Err(Error::Domain("normalized measure needs positive mass".into()));
        }
        Ok(Self {
            source,
            normalization,
            cfg,
        })
    }

    pub fn mass(&self) -> T {
        self.normalization
    }

    /// `μ(B_radius(center))`.
    pub fn ball(&self, center: Vec3<T>, radius: T) -> Result<T> {
        Ok(ball_energy_with(&self.source, center, radius, &self.cfg)? / self.normalization)
    }

    pub fn total(&self) -> Result<T> {
        Ok(total_energy_with(&self.source, T::one(), T::zero(), &self.cfg)?.value / self.normalization)
    }

    /// Density `m⁻¹ e(x)`.
    pub fn density(&self, x: Vec3<T>) -> Result<T> {
        Ok(self.source.energy_density(x)? / self.normalization)
    }

    /// `∫ ψ dμ`.
    pub fn integrate(&self, test_fn: &TestFunction<T>) -> Result<T> {
        let TestFunction::Bump { center, radius, height } = *test_fn else {
            return Ok(T::zero());
        };
        let mut total = T::zero();
        for piece in self.source.radial_components()? {
            total += bump_against_piece(piece, center, radius, &self.cfg)? * height;
        }
        Ok(total / self.normalization)
    }
}

/// Compactly supported radial test function.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum TestFunction<T> {
    /// `height · exp(1 − 1/(1 − (ρ/radius)²))` for `ρ = |x − center| < radius`.
    Bump { center: Vec3<T>, radius: T, height: T },
    Zero,
}

impl<T: Real> TestFunction<T> {
    pub fn bump(center: Vec3<T>, radius: T) -> Self {
        Self::Bump {
            center,
            radius,
            height: T::one(),
        }
    }

    pub fn eval(&self, x: Vec3<T>) -> T {
        match *self {
            Self::Bump { center, radius, height } => height * unit_bump(x.distance(center) / radius),
            Self::Zero => T::zero(),
        }
    }
}

fn unit_bump<T: Real>(s: T) -> T {
    if s >= T::one() {
        return T::zero();
    }
    (T::one() - (T::one() - s * s).recip()).exp()
}

// ∫ ψ e over ℝ³ for a unit-height bump of the given support, against one radial piece.
fn bump_against_piece<T: Real>(piece: &Hedgehog<T>, center: Vec3<T>, radius: T, cfg: &QuadConfig<T>) -> Result<T> {
    let p = &piece.profile;
    let d = center.distance(piece.center);
    if !p.is_regular() && d < radius {
        return Err(Error::Divergence("test function support contains a singular point".into()));
    }
    let four_pi = T::four_pi();
    if d <= radius * T::lit(CONCENTRIC_FRACTION) {
        let f = |s: T| four_pi * s * s * unit_bump(s / radius) * p.energy_density(s);
        return Ok(integrate_breaks(f, &core_breaks(p, T::zero(), radius), cfg)?.value);
    }
    // shell of radius s around the piece: (2πs/d) ∫_{|s−d|}^{s+d} ψ(ρ) ρ dρ
    let inner_cfg = *cfg;
    let two_pi = T::two() * T::PI();
    let shell = |s: T| -> T {
        let lo = (s - d).abs();
        let hi = (s + d).min(radius);
        if lo >= hi {
            return T::zero();
        }
        let w = integrate(|rho| unit_bump(rho / radius) * rho, lo, hi, &inner_cfg)
            .map(|e| e.value)
            .unwrap_or(T::nan());
        two_pi * s / d * w * p.energy_density(s)
    };
    let lo = (d - radius).max(T::zero());
    let value = integrate_breaks(shell, &core_breaks(p, lo, d + radius), cfg)?.value;
    if !value.is_finite() {
        return Err(Error::Divergence("non-finite test-function integral".into()));
    }
    Ok(value)
}

/// Outcome of a weak-convergence test.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceReport<T> {
    pub masses: Vec<T>,
    pub integrals: Vec<T>,
    pub expected: T,
    pub errors: Vec<T>,
    /// Errors non-increasing along the sequence.
    pub monotone: bool,
    /// Tail-limit estimate `a` from the fit `a + c/m` on the last third.
    pub extrapolated: T,
    pub final_error: T,
}

/// `∫ ψ dμ_i` against `Σ w_j ψ(x_j)`.
pub fn weak_convergence_test<T: Real>(
    sequence: &[EnergyMeasure<T>],
    test_fn: &TestFunction<T>,
    limit: &[(Vec3<T>, T)],
) -> Result<ConvergenceReport<T>> {
    if sequence.is_empty() {
        return Err(Error::SequenceTooShort("weak convergence needs at least one measure".into()));
    }
    let expected = limit.iter().fold(T::zero(), |acc, &(x, w)| acc + w * test_fn.eval(x));
    let masses: Vec<T> = sequence.iter().map(|m| m.mass()).collect();
    let integrals = sequence.iter().map(|m| m.integrate(test_fn)).collect::<Result<Vec<_>>>()?;
    let errors: Vec<T> = integrals.iter().map(|&v| (v - expected).abs()).collect();
    let monotone = errors.windows(2).all(|w| w[1] <= w[0]);
    let extrapolated = if masses.len() >= 2 {
        tail_limit(&masses, &integrals)?
    } else {
        integrals[0]
    };
    Ok(ConvergenceReport {
        final_error: *errors.last().expect("non-empty"),
        masses,
        integrals,
        expected,
        errors,
        monotone,
        extrapolated,
    })
}

/// Number of entries in the tail third of a sequence of length `n`.
pub fn tail_len(n: usize) -> usize {
    n.div_ceil(3)
}

/// Limit estimate of `v(m)` from the least-squares fit `a + c/m` over the
/// tail third (at least two points).
pub fn tail_limit<T: Real>(masses: &[T], values: &[T]) -> Result<T> {
    let n = masses.len();
    let k = tail_len(n).max(2);
    if n < 2 || values.len() != n {
        return Err(Error::SequenceTooShort(format!("need at least two masses, got {n}")));
    }
    let xs: Vec<T> = masses[n - k..].iter().map(|m| m.recip()).collect();
    let ys = &values[n - k..];
    let kf = T::from_usize_lossy(k);
    let mx = xs.iter().fold(T::zero(), |a, &x| a + x) / kf;
    let my = ys.iter().fold(T::zero(), |a, &y| a + y) / kf;
    let (mut sxy, mut sxx) = (T::zero(), T::zero());
    for (&x, &y) in xs.iter().zip(ys) {
        sxy += (x - mx) * (y - my);
        sxx += (x - mx) * (x - mx);
    }
    if sxx == T::zero() {
        return Ok(my);
    }
    Ok(my - sxy / sxx * mx)
}

/// Estimate of `Θ(x) = lim_{r↓0} μ(B_r(x))`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DensityEstimate<T> {
    pub point: Vec3<T>,
    pub theta: T,
    pub radii_used: Vec<T>,
    /// Sequence-limit ball measure at each radius.
    pub limits: Vec<T>,
    pub extrapolation_error: T,
    /// `round(Θ / 4πκ)`.
    pub multiplicity: i64,
    /// `Θ` within tolerance of `4πκ · multiplicity`.
    pub quantized: bool,
}

/// `Θ` at a point: per radius the tail limit of `μ_i(B_r)`, then a linear
/// extrapolation in `r` through the last two radii.
pub fn density_theta<T: Real>(
    sequence: &[EnergyMeasure<T>],
    point: Vec3<T>,
    radii: &[T],
    kappa: T,
    tol: T,
) -> Result<DensityEstimate<T>> {
    if sequence.len() < 3 {
        return Err(Error::SequenceTooShort(format!(
            "density estimate needs at least 3 measures, got {}",
            sequence.len()
        )));
    }
    if radii.is_empty() || radii.iter().any(|&r| !(r > T::zero())) || radii.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::Domain("radii must be positive and strictly decreasing".into()));
    }
    let masses: Vec<T> = sequence.iter().map(|m| m.mass()).collect();
    let mut limits = Vec::with_capacity(radii.len());
    for &r in radii {
        let vals = sequence.iter().map(|m| m.ball(point, r)).collect::<Result<Vec<_>>>()?;
        limits.push(tail_limit(&masses, &vals)?.max(T::zero()));
    }
    let n = radii.len();
    let (theta, extrapolation_error) = if n >= 2 {
        let (r1, r2) = (radii[n - 2], radii[n - 1]);
        let (v1, v2) = (limits[n - 2], limits[n - 1]);
        let slope = (v1 - v2) / (r1 - r2);
        let theta = (v2 - slope * r2).max(T::zero());
        (theta, (theta - v2).abs())
    } else {
        (limits[0], T::zero())
    };
    let unit = T::four_pi() * kappa;
    let multiplicity = (theta / unit).round().to_i64().unwrap_or(0);
    let quantized = (theta - unit * T::lit(multiplicity as f64)).abs() <= tol;
    Ok(DensityEstimate {
        point,
        theta,
        radii_used: radii.to_vec(),
        limits,
        extrapolation_error,
        multiplicity,
        quantized,
    })
}

/// Outcome of the cardinality bound `|S| ≤ k / min k_x`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CardinalityVerdict {
    Holds,
    Violated,
    /// Empty blow-up set with nonzero charge: the energy left every compact set.
    Escaped,
}

pub fn cardinality_bound_check<T: Real>(report: &ConcentrationReport<T>, k: i64) -> CardinalityVerdict {
    cardinality_verdict(&report.multiplicities(), k)
}

pub fn cardinality_verdict(multiplicities: &[i64], k: i64) -> CardinalityVerdict {
    if multiplicities.is_empty() {
        return if k != 0 {
            CardinalityVerdict::Escaped
        } else {
            CardinalityVerdict::Holds
        };
    }
    let min_k = multiplicities.iter().copied().min().unwrap_or(1);
    if min_k >= 1 && (multiplicities.len() as i64) * min_k <= k.abs() {
        CardinalityVerdict::Holds
    } else {
        CardinalityVerdict::Violated
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bps;
    use crate::fields::hedgehog_field;
    use crate::scalar::rel_diff;

    fn bps_at(m: f64, c: Vec3<f64>) -> FieldSampler<f64> {
        hedgehog_field(RadialProfile::bps(m), c)
    }

    #[test]
    fn concentric_ball_matches_antiderivative() {
        for (m, r) in [(1.0, 0.3), (1.0, 2.0), (4.0, 0.5), (16.0, 1.0)] {
            let e = ball_energy(&bps_at(m, Vec3::zero()), Vec3::zero(), r).unwrap();
            let exact = 4.0 * std::f64::consts::PI * m * (bps::bps_antiderivative(m, r).unwrap() - bps::bps_antiderivative_at_origin::<f64>());
            assert!(rel_diff(e, exact, 1e-300) < 1e-8, "m={m} r={r}: {e} vs {exact}");
        }
    }

    #[test]
    fn off_center_ball_matches_cubature() {
        // independent route: tensor Gauss–Legendre in spherical coordinates around the ball center
        let s = bps_at(1.0, Vec3::zero());
        let c = Vec3::new(0.4, 0.0, 0.3);
        let r = 0.8;
        let (x, w) = crate::quadrature::gauss_legendre::<f64>(64);
        let mut acc = 0.0;
        for (i, &xr) in x.iter().enumerate() {
            let rho = 0.5 * r * (xr + 1.0);
            for (j, &xt) in x.iter().enumerate() {
                let th = 0.5 * std::f64::consts::PI * (xt + 1.0);
                for (k, &xp) in x.iter().enumerate() {
                    let ph = std::f64::consts::PI * (xp + 1.0);
                    let p = c + Vec3::new(th.sin() * ph.cos(), th.sin() * ph.sin(), th.cos()) * rho;
                    let jac = rho * rho * th.sin() * 0.5 * r * 0.5 * std::f64::consts::PI * std::f64::consts::PI;
                    acc += w[i] * w[j] * w[k] * jac * s.energy_density(p).unwrap();
                }
            }
        }
        let e = ball_energy(&s, c, r).unwrap();
        assert!(rel_diff(e, acc, 1e-300) < 1e-6, "{e} vs {acc}");
    }

    #[test]
    fn flat_ball_is_zero() {
        let s = hedgehog_field(RadialProfile::flat(), Vec3::zero());
        assert_eq!(ball_energy(&s, Vec3::new(1.0, 0.0, 0.0), 3.0).unwrap(), 0.0);
        assert_eq!(total_energy(&s, 1.0).unwrap().value, 0.0);
    }

    #[test]
    fn total_energy_is_linear_in_mass() {
        let vals: Vec<f64> = [0.5, 1.0, 2.0, 5.0]
            .iter()
            .map(|&m| total_energy(&bps_at(m, Vec3::zero()), 1.0).unwrap().value / m)
            .collect();
        for v in &vals {
            assert!(rel_diff(*v, vals[0], 1e-300) < 1e-8);
        }
        assert!(rel_diff(vals[0], 4.0 * std::f64::consts::PI, 1e-300) < 1e-8);
    }

    #[test]
    fn big_ball_approaches_total() {
        let s = bps_at(1.0, Vec3::zero());
        let total = total_energy(&s, 1.0).unwrap().value;
        let mut prev = 0.0;
        for r in [1.0, 10.0, 100.0, 1000.0] {
            let b = ball_energy(&s, Vec3::zero(), r).unwrap();
            assert!(b >= prev && b <= total * (1.0 + 1e-12));
            // tail outside r is 2π/r once e^{-2r} is negligible
            if r >= 10.0 {
                assert!((total - b - 2.0 * std::f64::consts::PI / r).abs() < 1e-6 * total);
            }
            prev = b;
        }
    }

    #[test]
    fn dirac_energy_diverges_at_origin() {
        let s = hedgehog_field(RadialProfile::dirac(1.0), Vec3::zero());
        assert!(matches!(total_energy(&s, 1.0), Err(Error::Divergence(_))));
        let mut prev = 0.0;
        for eps in [1.0, 0.1, 0.01] {
            let t = total_energy_with(&s, 1.0, eps, &QuadConfig::default()).unwrap().value;
            assert!((t - 2.0 * std::f64::consts::PI / eps).abs() < 1e-8 * t);
            assert!(t > prev);
            prev = t;
        }
    }

    #[test]
    fn zero_test_function_integrates_to_zero() {
        let mu = EnergyMeasure::new(bps_at(1.0, Vec3::zero())).unwrap();
        assert_eq!(mu.integrate(&TestFunction::Zero).unwrap(), 0.0);
    }

    #[test]
    fn off_center_bump_integral_scales_like_inverse_mass() {
        let psi = TestFunction::bump(Vec3::new(2.0, 0.0, 0.0), 1.0);
        let v: Vec<f64> = [16.0, 64.0]
            .iter()
            .map(|&m| EnergyMeasure::new(bps_at(m, Vec3::zero())).unwrap().integrate(&psi).unwrap())
            .collect();
        assert!((v[0] / v[1] - 4.0).abs() < 1e-6, "{v:?}");
    }

    #[test]
    fn synthetic_sampler_has_no_measure() {
        let s = crate::fields::multi_center_higgs(&[Vec3::zero()], 0.5, 1.0).unwrap();
        assert!(matches!(EnergyMeasure::new(s.clone()), Err(Error::UnsupportedDensity(_))));
        assert!(matches!(ball_energy(&s, Vec3::zero(), 1.0), Err(Error::UnsupportedDensity(_))));
    }

    #[test]
    fn cardinality_cases() {
        assert_eq!(cardinality_verdict(&[1], 1), CardinalityVerdict::Holds);
        assert_eq!(cardinality_verdict(&[], 1), CardinalityVerdict::Escaped);
        assert_eq!(cardinality_verdict(&[1, 1], 1), CardinalityVerdict::Violated);
        assert_eq!(cardinality_verdict(&[2], 2), CardinalityVerdict::Holds);
    }

    #[test]
    fn tail_limit_is_exact_for_inverse_mass_data() {
        let m = [1.0, 4.0, 16.0, 64.0, 256.0];
        let v: Vec<f64> = m.iter().map(|m| 3.0 - 0.5 / m).collect();
        assert!((tail_limit(&m, &v).unwrap() - 3.0).abs() < 1e-12);
    }
}
