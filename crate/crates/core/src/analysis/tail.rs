use serde::{Deserialize, Serialize};

use crate::algebra::Vec3;
use crate::error::{Error, Result};
use crate::fields::FieldSampler;
use crate::quadrature::{integrate_breaks, integrate_to_infinity, QuadConfig};
use crate::scalar::Real;

/// Fit of `|Φ|(r) ≈ M − c/r` and the coefficient predicted from `‖d_AΦ‖²`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TailFit<T> {
    pub window: (T, T),
    pub fitted_mass: T,
    pub fitted_c: T,
    /// `‖d_AΦ‖² / (4π m)`.
    pub predicted_c: T,
    /// `fitted_c / predicted_c`.
    pub ratio: T,
    pub samples: usize,
    pub rms_residual: T,
}

/// `‖d_AΦ‖²_{L²}` by radial quadrature over the sampler's radial pieces.
pub fn higgs_derivative_l2_sq<T: Real>(sampler: &FieldSampler<T>, cfg: &QuadConfig<T>) -> Result<T> {
    let four_pi = T::four_pi();
    let mut total = T::zero();
    for piece in sampler.radial_components()? {
        let p = &piece.profile;
        if !p.is_regular() {
            return Err(Error::Divergence("‖d_AΦ‖² diverges at a singular center".into()));
        }
        let s = p.core_scale();
        let f = |r: T| four_pi * r * r * p.higgs_derivative_sq(r);
        let breaks: Vec<T> = [0.0, 0.25, 1.0, 4.0, 16.0, 64.0].iter().map(|&k| s * T::lit(k)).collect();
        total += integrate_breaks(f, &breaks, cfg)?.value;
        total += integrate_to_infinity(f, s * T::lit(64.0), cfg)?.value;
    }
    Ok(total)
}

/// Least-squares fit of `|Φ| = M − c/r` along a ray from the sampler's
/// zero (or the origin) over `r ∈ [r_lo, r_hi]`.
pub fn asymptotic_tail_fit<T: Real>(
    sampler: &FieldSampler<T>,
    window: (T, T),
    cfg: &QuadConfig<T>,
) -> Result<TailFit<T>> {
    let (r_lo, r_hi) = window;
    if !(r_lo > T::zero() && r_hi > r_lo * T::lit(1.5)) {
        return Err(Error::Domain(format!(
            "tail window ({r_lo}, {r_hi}) too narrow for a stable fit (need r_hi > 1.5 r_lo > 0)"
        )));
    }
    let m = sampler.mass();
    if !(m > T::zero()) {
        return Err(Error::Domain("tail fit needs positive mass".into()));
    }
    let origin = sampler.known_zeros().first().copied().unwrap_or_else(Vec3::zero);
    let dir = Vec3::new(T::one(), T::lit(2.0), T::lit(2.0)) / T::lit(3.0);
    let n = 200;
    // regress y = |Φ| on x = 1/r: y = M − c x
    let mut xs = Vec::with_capacity(n);
    let mut ys = Vec::with_capacity(n);
    for k in 0..n {
        let r = r_lo + (r_hi - r_lo) * T::from_usize_lossy(k) / T::from_usize_lossy(n - 1);
        xs.push(r.recip());
        ys.push(sampler.higgs_norm(origin + dir * r)?);
    }
    let nf = T::from_usize_lossy(n);
    let mx = xs.iter().fold(T::zero(), |a, &x| a + x) / nf;
    let my = ys.iter().fold(T::zero(), |a, &y| a + y) / nf;
    let (mut sxy, mut sxx) = (T::zero(), T::zero());
    for (&x, &y) in xs.iter().zip(&ys) {
        sxy += (x - mx) * (y - my);
        sxx += (x - mx) * (x - mx);
    }
    let slope = sxy / sxx;
    let fitted_mass = my - slope * mx;
    let fitted_c = -slope;
    let rss = xs
        .iter()
        .zip(&ys)
        .fold(T::zero(), |a, (&x, &y)| a + (y - (fitted_mass + slope * x)).powi(2));
    let predicted_c = higgs_derivative_l2_sq(sampler, cfg)? / (T::four_pi() * m);
    Ok(TailFit {
        window,
        fitted_mass,
        fitted_c,
        predicted_c,
        ratio: fitted_c / predicted_c,
        samples: n,
        rms_residual: (rss / nf).sqrt(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::hedgehog_field;
    use crate::profile::RadialProfile;

    #[test]
    fn bps_tail_coefficient_is_one_half() {
        let s = hedgehog_field(RadialProfile::bps(1.0_f64), Vec3::zero());
        let fit = asymptotic_tail_fit(&s, (10.0, 30.0), &QuadConfig::default()).unwrap();
        assert!((fit.fitted_c - 0.5).abs() < 1e-4, "{}", fit.fitted_c);
        assert!((fit.fitted_mass - 1.0).abs() < 1e-6);
    }

    #[test]
    fn ratio_is_mass_independent() {
        let ratios: Vec<f64> = [1.0, 2.0, 4.0]
            .iter()
            .map(|&m| {
                let s = hedgehog_field(RadialProfile::bps(m), Vec3::new(0.5, 0.0, 0.0));
                asymptotic_tail_fit(&s, (10.0 / m, 30.0 / m), &QuadConfig::default()).unwrap().ratio
            })
            .collect();
        for r in &ratios {
            assert!((r - ratios[0]).abs() < 1e-9, "{ratios:?}");
        }
    }

    #[test]
    fn narrow_window_rejected() {
        let s = hedgehog_field(RadialProfile::bps(1.0), Vec3::zero());
        assert!(asymptotic_tail_fit(&s, (10.0, 11.0), &QuadConfig::default()).is_err());
    }
}
