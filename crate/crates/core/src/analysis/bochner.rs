use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::profile::RadialProfile;
use crate::scalar::Real;

const NEGATIVE_DENSITY: f64 = -1e-12;

/// Smallest `(c₁, c₂) ≥ 0` with `Δe ≤ c₁|Φ|²e + c₂e^{3/2}` on a grid.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BochnerFit<T> {
    pub c1: T,
    pub c2: T,
    pub grid_points: usize,
    /// Grid points where `Δe > 0`, i.e. where the inequality constrains anything.
    pub active_points: usize,
    /// Largest `Δe` over the grid.
    pub max_laplacian: T,
    /// Radii where the density came out below −1e−12.
    pub negative_density: Vec<T>,
}

/// `Δe = −(e'' + 2e'/r)` by five-point differences with step `10⁻³ r`.
fn laplacian<T: Real>(profile: &RadialProfile<T>, r: T) -> T {
    let h = r * T::lit(1e-3);
    let e = |s: T| profile.energy_density(s);
    let (em2, em1, e0, ep1, ep2) = (e(r - h - h), e(r - h), e(r), e(r + h), e(r + h + h));
    let twelve = T::lit(12.0);
    let d1 = (em2 - T::lit(8.0) * em1 + T::lit(8.0) * ep1 - ep2) / (twelve * h);
    let d2 = (-em2 + T::lit(16.0) * em1 - T::lit(30.0) * e0 + T::lit(16.0) * ep1 - ep2) / (twelve * h * h);
    -(d2 + T::two() * d1 / r)
}

/// Fit the Bochner-type inequality on `grid`: minimise `c₁ + c₂` over the
/// feasible region, a convex polygon whose optimum sits on a vertex.
pub fn bochner_check<T: Real>(profile: &RadialProfile<T>, grid: &[T]) -> Result<BochnerFit<T>> {
    if grid.is_empty() || grid.iter().any(|&r| !(r > T::zero() && r.is_finite())) {
        return Err(Error::Domain("grid must be non-empty and positive".into()));
    }
    let mut rows = Vec::new();
    let mut negative_density = Vec::new();
    let mut max_laplacian = T::neg_infinity();
    for &r in grid {
        let e = profile.energy_density(r);
        if e < T::lit(NEGATIVE_DENSITY) {
            negative_density.push(r);
        }
        let e = e.max(T::zero());
        let lap = laplacian(profile, r);
        max_laplacian = max_laplacian.max(lap);
        if lap > T::zero() {
            let phi = profile.phi(r);
            rows.push((phi * phi * e, e * e.sqrt(), lap));
        }
    }
    let (c1, c2) = minimal_pair(&rows)?;
    Ok(BochnerFit {
        c1,
        c2,
        grid_points: grid.len(),
        active_points: rows.len(),
        max_laplacian,
        negative_density,
    })
}

// Rows (A, B, d) demand A c₁ + B c₂ ≥ d with d > 0.
fn minimal_pair<T: Real>(rows: &[(T, T, T)]) -> Result<(T, T)> {
    if rows.is_empty() {
        return Ok((T::zero(), T::zero()));
    }
    let slack = T::lit(1e-12);
    let feasible = |c1: T, c2: T| {
        c1 >= T::zero() && c2 >= T::zero() && rows.iter().all(|&(a, b, d)| a * c1 + b * c2 >= d * (T::one() - slack))
    };
    let mut best: Option<(T, T)> = None;
    let mut consider = |c1: T, c2: T| {
        if c1.is_finite() && c2.is_finite() && feasible(c1, c2) {
            let better = match best {
                None => true,
                Some((b1, b2)) => c1 + c2 < b1 + b2 || (c1 + c2 == b1 + b2 && c1 < b1),
            };
            if better {
                best = Some((c1, c2));
            }
        }
    };
    // vertices on the axes
    let on_c1 = rows.iter().map(|&(a, _, d)| d / a).fold(T::zero(), T::max);
    let on_c2 = rows.iter().map(|&(_, b, d)| d / b).fold(T::zero(), T::max);
    consider(on_c1, T::zero());
    consider(T::zero(), on_c2);
    for (i, &(a1, b1, d1)) in rows.iter().enumerate() {
        for &(a2, b2, d2) in &rows[i + 1..] {
            let det = a1 * b2 - a2 * b1;
            if det == T::zero() {
                continue;
            }
            let c1 = (d1 * b2 - d2 * b1) / det;
            let c2 = (a1 * d2 - a2 * d1) / det;
            consider(c1, c2);
        }
    }
    best.ok_or_else(|| Error::Domain("Bochner inequality infeasible on this grid".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::radial_solver::log_grid;

    #[test]
    fn bps_constants_are_finite() {
        let fit = bochner_check(&RadialProfile::bps(1.0_f64), &log_grid(0.05, 10.0, 120)).unwrap();
        assert!(fit.c1.is_finite() && fit.c2.is_finite());
        assert!(fit.c1 + fit.c2 > 0.0);
        assert!(fit.active_points > 0);
        assert!(fit.negative_density.is_empty());
    }

    #[test]
    fn constants_are_scale_invariant() {
        let g = log_grid(0.05, 10.0, 120);
        let base = bochner_check(&RadialProfile::bps(1.0), &g).unwrap();
        for m in [4.0, 16.0] {
            let gm: Vec<f64> = g.iter().map(|r| r / m).collect();
            let fit = bochner_check(&RadialProfile::bps(m), &gm).unwrap();
            assert!((fit.c1 - base.c1).abs() <= 1e-6 * base.c1.max(1.0), "{fit:?} vs {base:?}");
            assert!((fit.c2 - base.c2).abs() <= 1e-6 * base.c2.max(1.0), "{fit:?} vs {base:?}");
        }
    }

    #[test]
    fn flat_profile_gives_zero() {
        let fit = bochner_check(&RadialProfile::<f64>::flat(), &log_grid(0.05, 10.0, 20)).unwrap();
        assert_eq!((fit.c1, fit.c2), (0.0, 0.0));
    }

    #[test]
    fn fitted_pair_satisfies_every_row() {
        let p = RadialProfile::bps(1.0_f64);
        let g = log_grid(0.05, 10.0, 60);
        let fit = bochner_check(&p, &g).unwrap();
        for &r in &g {
            let e = p.energy_density(r);
            let rhs = fit.c1 * p.phi(r).powi(2) * e + fit.c2 * e.powf(1.5);
            assert!(laplacian(&p, r) <= rhs * (1.0 + 1e-9) + 1e-300);
        }
    }
}
