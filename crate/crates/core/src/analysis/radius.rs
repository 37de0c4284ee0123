use serde::{Deserialize, Serialize};

use super::sphere::fibonacci_directions;
use crate::algebra::Vec3;
use crate::bps;
use crate::error::{Error, Result};
use crate::fields::FieldSampler;
use crate::scalar::Real;

/// Flat-space radius constant `B` in `r_δ ≤ B k /(m(1 − δ))`.
///
/// Frozen as 1.25 × the supremum of `m(1 − δ) r_δ / k` over the BPS family.
/// That supremum is 1/2, approached as δ → 1 where `r_δ ≈ 1/(2m(1 − δ))`.
pub const RADIUS_BOUND_CONSTANT: f64 = 0.625;

/// Largest accepted δ; the bound degenerates as δ → 1.
pub const MAX_DELTA: f64 = 0.999;

/// Outcome of a radius query.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RadiusQuery<T> {
    pub point: Vec3<T>,
    pub delta: T,
    pub r_delta: T,
    /// `B k / (m (1 − δ))`.
    pub bound: T,
    pub mass: T,
    pub charge: i32,
    pub within_bound: bool,
}

/// `1.25 · max_δ (1 − δ) r_δ(1, δ)` over the given sweep.
pub fn calibrate_radius_constant(deltas: &[f64]) -> Result<f64> {
    let mut best = 0.0_f64;
    for &d in deltas {
        best = best.max((1.0 - d) * bps::bps_r_delta(1.0, d)?);
    }
    Ok(1.25 * best)
}

/// `r_δ(x) = sup{r : sup_{B_r(x)} |Φ| < mδ}`.
///
/// Hedgehogs use the radial profile directly: the sup over `B_r(x)` is
/// `|φ|(d + r)` at distance `d` from the center since `|φ|` increases.
/// Other samplers use a sphere scan followed by bisection.
pub fn taubes_radius<T: Real>(sampler: &FieldSampler<T>, point: Vec3<T>, delta: T) -> Result<RadiusQuery<T>> {
    if !(delta > T::zero() && delta <= T::lit(MAX_DELTA)) {
        return Err(Error::Domain(format!("delta must lie in (0, {MAX_DELTA}], got {delta}")));
    }
    let m = sampler.mass();
    if !(m > T::zero()) {
        return Err(Error::Domain("radius estimate needs positive mass".into()));
    }
    let level = m * delta;
    let r_delta = if sampler.higgs_norm(point)? >= level {
        T::zero()
    } else if let Some(h) = sampler.as_hedgehog() {
        let d = point.distance(h.center);
        let p = &h.profile;
        let s = bisect_increasing(|s| p.phi(s).abs() - level, d, p.core_scale())?;
        s - d
    } else {
        let scale = m.recip();
        let g = |r: T| -> Result<T> { Ok(sphere_max(sampler, point, r)? - level) };
        scan_then_bisect(g, scale)?
    };
    let k = sampler.charge();
    let bound = T::lit(RADIUS_BOUND_CONSTANT) * T::lit(k.max(1) as f64) / (m * (T::one() - delta));
    Ok(RadiusQuery {
        point,
        delta,
        r_delta,
        bound,
        mass: m,
        charge: k,
        within_bound: r_delta <= bound,
    })
}

// Root of an increasing function on [lo, ∞), bracketed by doubling.
fn bisect_increasing<T: Real, F: Fn(T) -> T>(f: F, lo: T, scale: T) -> Result<T> {
    let mut a = lo;
    let mut step = scale;
    let mut b = lo + step;
    let mut n = 0;
    while f(b) < T::zero() {
        a = b;
        step *= T::two();
        b = lo + step;
        n += 1;
        if n > 200 {
            return Err(Error::Bracketing("|Φ| never reaches mδ".into()));
        }
    }
    for _ in 0..200 {
        let mid = (a + b) * T::half();
        if mid <= a || mid >= b {
            break;
        }
        if f(mid) < T::zero() {
            a = mid;
        } else {
            b = mid;
        }
    }
    Ok((a + b) * T::half())
}

fn sphere_max<T: Real>(sampler: &FieldSampler<T>, point: Vec3<T>, r: T) -> Result<T> {
    let mut best = T::zero();
    for u in fibonacci_directions::<T>(400) {
        best = best.max(sampler.higgs_norm(point + u * r)?);
    }
    Ok(best)
}

fn scan_then_bisect<T: Real, G: Fn(T) -> Result<T>>(g: G, scale: T) -> Result<T> {
    let n = 400;
    let mut prev = T::zero();
    let mut r_hi = scale;
    for _ in 0..60 {
        for k in 1..=n {
            let r = r_hi * T::from_usize_lossy(k) / T::from_usize_lossy(n);
            if r <= prev {
                continue;
            }
            if g(r)? >= T::zero() {
                let (mut a, mut b) = (prev, r);
                for _ in 0..100 {
                    let mid = (a + b) * T::half();
                    if g(mid)? < T::zero() {
                        a = mid;
                    } else {
                        b = mid;
                    }
                }
                return Ok((a + b) * T::half());
            }
            prev = r;
        }
        r_hi *= T::two();
    }
    Err(Error::Bracketing("|Φ| never reaches mδ on the scanned spheres".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::{hedgehog_field, multi_center_higgs};
    use crate::profile::RadialProfile;

    #[test]
    fn matches_closed_form_radius() {
        for m in [1.0_f64, 4.0, 16.0] {
            let s = hedgehog_field(RadialProfile::bps(m), Vec3::zero());
            for d in [0.3, 0.5, 0.9] {
                let q = taubes_radius(&s, Vec3::zero(), d).unwrap();
                let exact = bps::bps_r_delta(m, d).unwrap();
                assert!((q.r_delta - exact).abs() <= 1e-8 * exact);
                assert!(q.within_bound);
            }
        }
    }

    #[test]
    fn far_point_has_zero_radius() {
        let s = hedgehog_field(RadialProfile::bps(1.0), Vec3::zero());
        let q = taubes_radius(&s, Vec3::new(10.0, 0.0, 0.0), 0.5).unwrap();
        assert_eq!(q.r_delta, 0.0);
    }

    #[test]
    fn off_center_radius_is_shifted() {
        let s = hedgehog_field(RadialProfile::bps(1.0_f64), Vec3::zero());
        let q = taubes_radius(&s, Vec3::new(0.2, 0.0, 0.0), 0.5).unwrap();
        assert!((q.r_delta - (bps::bps_r_delta(1.0, 0.5).unwrap() - 0.2)).abs() < 1e-10);
    }

    #[test]
    fn rejects_bad_delta() {
        let s = hedgehog_field(RadialProfile::bps(1.0), Vec3::zero());
        assert!(taubes_radius(&s, Vec3::zero(), 0.0).is_err());
        assert!(taubes_radius(&s, Vec3::zero(), 0.9995).is_err());
        assert!(taubes_radius(&s, Vec3::zero(), 1.0).is_err());
    }

    #[test]
    fn frozen_constant_matches_calibration() {
        let deltas: Vec<f64> = (1..=999).map(|i| i as f64 * 1e-3).collect();
        let c = calibrate_radius_constant(&deltas).unwrap();
        assert!(c <= RADIUS_BOUND_CONSTANT * (1.0 + 1e-9) && c > RADIUS_BOUND_CONSTANT * (1.0 - 1e-3), "{c}");
    }

    #[test]
    fn synthetic_field_radius() {
        let s = multi_center_higgs(&[Vec3::zero()], 0.5, 1.0).unwrap();
        let q = taubes_radius(&s, Vec3::zero(), 0.5).unwrap();
        // ρ(t) = 1/2 at some t < 1/2 on the blend
        assert!(q.r_delta > 0.0 && q.r_delta < 0.25, "{}", q.r_delta);
    }
}
