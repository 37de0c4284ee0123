//! Shooting solver for the radial Bogomolnyi system
//! `φ̇ = (a² − 1)/(2r²)`, `ȧ = 2aφ`, and residuals of the first- and
//! second-order radial equations.
//!
//! Integration is classical fourth-order Runge–Kutta with a fixed step in
//! `t = ln r`, which resolves both the regular singular point at the origin
//! and the exponential decay of `a`. The unknown is `u = a − 1` so that
//! `a² − 1 = u(2 + u)` is free of cancellation near the origin.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::profile::{regular_series, GridProfile, ProfilePoint, RadialProfile};
use crate::scalar::Real;

/// Order of the integrator.
pub const INTEGRATOR_ORDER: u32 = 4;

/// Default step in `ln r`.
pub const DEFAULT_LOG_STEP: f64 = 5e-3;

/// Shooting problem from the regular origin.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ShootingProblem<T> {
    /// `b` in `φ ≈ −b r` near the origin.
    pub slope: T,
    pub r_start: T,
    pub r_match: T,
    /// Step in `ln r`; the global error scales like `log_step⁴`.
    pub log_step: T,
}

impl<T: Real> ShootingProblem<T> {
    /// Start at `1e-4/√b`, match at `8/M` with `M` the dimensional estimate `√(3b/2)`.
    pub fn new(slope: T) -> Self {
        Self::with_step(slope, T::lit(DEFAULT_LOG_STEP))
    }

    pub fn with_step(slope: T, log_step: T) -> Self {
        let (r_start, r_match) = if slope > T::zero() {
            let m_est = (T::lit(1.5) * slope).sqrt();
            (T::lit(1e-4) / slope.sqrt(), T::lit(8.0) / m_est)
        } else {
            (T::lit(1e-4), T::lit(8.0))
        };
        Self {
            slope,
            r_start,
            r_match,
            log_step,
        }
    }

    fn validate(&self) -> Result<()> {
        let ok = self.slope.is_finite()
            && self.r_start > T::zero()
            && self.r_match > self.r_start
            && self.r_match.is_finite()
            && self.log_step > T::zero()
            && self.log_step.is_finite();
        if ok {
            Ok(())
        } else {
            Err(Error::Config(format!("malformed shooting problem {self:?}")))
        }
    }
}

/// Result of a solve.
#[derive(Clone, Debug)]
pub struct SolveReport<T: Real> {
    pub profile: RadialProfile<T>,
    pub slope: T,
    /// Mass of the solution; zero for the flat solution `b = 0`.
    pub achieved_mass: T,
    pub max_bogomolnyi_residual: T,
    pub max_second_order_residual: T,
    pub steps: usize,
}

fn rhs<T: Real>(t: T, y: [T; 2]) -> [T; 2] {
    let r = t.exp();
    let [u, phi] = y;
    [T::two() * r * (T::one() + u) * phi, u * (T::two() + u) / (T::two() * r)]
}

fn node<T: Real>(r: T, y: [T; 2]) -> ProfilePoint<T> {
    let [u, phi] = y;
    let a = T::one() + u;
    ProfilePoint {
        a,
        phi,
        a_dot: T::two() * a * phi,
        phi_dot: u * (T::two() + u) / (T::two() * r * r),
    }
}

/// Integrate from the regular series at `r_start` to `r_match` and attach
/// the asymptotic tail.
pub fn shoot<T: Real>(problem: &ShootingProblem<T>) -> Result<SolveReport<T>> {
    problem.validate()?;
    if problem.slope == T::zero() {
        let profile = RadialProfile::flat();
        return Ok(SolveReport {
            profile,
            slope: T::zero(),
            achieved_mass: T::zero(),
            max_bogomolnyi_residual: T::zero(),
            max_second_order_residual: T::zero(),
            steps: 0,
        });
    }
    let b = problem.slope;
    let t0 = problem.r_start.ln();
    let t1 = problem.r_match.ln();
    let n = ((t1 - t0) / problem.log_step).ceil().to_usize().unwrap_or(1).max(1);
    let h = (t1 - t0) / T::from_usize_lossy(n);
    let seed = regular_series(b, problem.r_start);
    let mut y = [seed.a - T::one(), seed.phi];
    let mut radii = Vec::with_capacity(n + 1);
    let mut nodes = Vec::with_capacity(n + 1);
    radii.push(problem.r_start);
    nodes.push(node(problem.r_start, y));
    let limit = T::lit(1e6);
    for i in 0..n {
        let t = t0 + h * T::from_usize_lossy(i);
        let k1 = rhs(t, y);
        let k2 = rhs(t + h * T::half(), [y[0] + h * T::half() * k1[0], y[1] + h * T::half() * k1[1]]);
        let k3 = rhs(t + h * T::half(), [y[0] + h * T::half() * k2[0], y[1] + h * T::half() * k2[1]]);
        let k4 = rhs(t + h, [y[0] + h * k3[0], y[1] + h * k3[1]]);
        let sixth = T::lit(1.0 / 6.0);
        for j in 0..2 {
            y[j] += h * sixth * (k1[j] + T::two() * (k2[j] + k3[j]) + k4[j]);
        }
        let r = if i + 1 == n { problem.r_match } else { (t + h).exp() };
        if !(y[0].is_finite() && y[1].is_finite()) || y[0].abs() > limit || y[1].abs() > limit {
            return Err(Error::Blowup {
                radius: r.to_f64_lossy(),
                reason: format!("profile left the stable branch (a − 1 = {}, φ = {})", y[0], y[1]),
            });
        }
        radii.push(r);
        nodes.push(node(r, y));
    }
    let last = nodes[n];
    if last.a < T::zero() || last.phi > T::zero() {
        return Err(Error::Blowup {
            radius: problem.r_match.to_f64_lossy(),
            reason: format!("solution crossed the vacuum (a = {}, φ = {})", last.a, last.phi),
        });
    }
    let mass = -last.phi + (T::two() * problem.r_match).recip();
    if !(mass > T::zero()) {
        return Err(Error::Blowup {
            radius: problem.r_match.to_f64_lossy(),
            reason: format!("non-positive asymptotic mass {mass}"),
        });
    }
    let grid = GridProfile::new(&radii, &nodes, b, mass);
    let profile = RadialProfile::Grid(Arc::new(grid));
    // residuals between nodes, where the interpolant is not constrained by the ODE
    let mids: Vec<T> = radii.windows(2).map(|w| (w[0] * w[1]).sqrt()).collect();
    let max_bogomolnyi_residual = bogomolnyi_residual(&profile, &mids)?;
    let inner: Vec<T> = mids.iter().copied().filter(|&r| r > T::lit(10.0) * problem.r_start).collect();
    let max_second_order_residual = second_order_residual(&profile, &inner)?;
    Ok(SolveReport {
        profile,
        slope: b,
        achieved_mass: mass,
        max_bogomolnyi_residual,
        max_second_order_residual,
        steps: n,
    })
}

/// Find the slope whose solution has the requested mass.
pub fn solve_for_mass<T: Real>(target_mass: T, tol: T) -> Result<SolveReport<T>> {
    solve_for_mass_with_step(target_mass, tol, T::lit(DEFAULT_LOG_STEP))
}

/// [`solve_for_mass`] with an explicit integrator step.
///
/// The slope is bracketed by doubling from the dimensional guess `b = m²`
/// and refined by the Illinois variant of regula falsi.
pub fn solve_for_mass_with_step<T: Real>(target_mass: T, tol: T, log_step: T) -> Result<SolveReport<T>> {
    if !(target_mass > T::zero() && target_mass.is_finite()) {
        return Err(Error::Domain(format!("target mass must be positive, got {target_mass}")));
    }
    if !(tol > T::zero()) {
        return Err(Error::Domain(format!("tolerance must be positive, got {tol}")));
    }
    let eval = |b: T| -> Result<(T, SolveReport<T>)> {
        let rep = shoot(&ShootingProblem::with_step(b, log_step))?;
        Ok((rep.achieved_mass - target_mass, rep))
    };
    let mut best: Option<SolveReport<T>> = None;
    let mut consider = |g: T, rep: SolveReport<T>| {
        if g.abs() < tol {
            let better = match &best {
                None => true,
                Some(prev) => rep.max_bogomolnyi_residual < prev.max_bogomolnyi_residual,
            };
            if better {
                best = Some(rep);
            }
        }
    };

    let guess = target_mass * target_mass;
    let (mut lo, mut hi) = (guess, guess);
    let (mut g_lo, rep) = eval(lo)?;
    let mut g_hi = g_lo;
    consider(g_lo, rep);
    let mut expansions = 0;
    while g_lo > T::zero() || g_hi < T::zero() {
        if expansions > 60 {
            return Err(Error::Bracketing(format!("no sign change found for target mass {target_mass}")));
        }
        expansions += 1;
        if g_lo > T::zero() {
            hi = lo;
            g_hi = g_lo;
            lo *= T::half();
            let (g, rep) = eval(lo)?;
            g_lo = g;
            consider(g, rep);
        } else {
            lo = hi;
            g_lo = g_hi;
            hi *= T::two();
            let (g, rep) = eval(hi)?;
            g_hi = g;
            consider(g, rep);
        }
    }

    let mut side = 0i8;
    for _ in 0..200 {
        let b = if g_hi == g_lo {
            (lo + hi) * T::half()
        } else {
            (lo * g_hi - hi * g_lo) / (g_hi - g_lo)
        };
        let (g, rep) = eval(b)?;
        let converged = g.abs() < tol * T::lit(1e-3) || (hi - lo) <= T::epsilon() * hi;
        consider(g, rep);
        if converged {
            break;
        }
        if g > T::zero() {
            hi = b;
            g_hi = g;
            if side == 1 {
                g_lo *= T::half();
            }
            side = 1;
        } else {
            lo = b;
            g_lo = g;
            if side == -1 {
                g_hi *= T::half();
            }
            side = -1;
        }
    }
    best.ok_or_else(|| Error::ToleranceNotMet {
        what: "achieved mass".into(),
        value: (hi - lo).to_f64_lossy(),
        tolerance: tol.to_f64_lossy(),
    })
}

fn check_grid<T: Real>(grid: &[T]) -> Result<()> {
    match grid.iter().find(|&&r| !(r > T::zero()) || !r.is_finite()) {
        Some(r) => Err(Error::Domain(format!("grid radius must be positive and finite, got {r}"))),
        None => Ok(()),
    }
}

/// `max_r |φ̇ − (a² − 1)/(2r²)| + |ȧ − 2aφ|` over the grid.
pub fn bogomolnyi_residual<T: Real>(profile: &RadialProfile<T>, grid: &[T]) -> Result<T> {
    check_grid(grid)?;
    Ok(grid.iter().fold(T::zero(), |acc, &r| {
        let d1 = profile.phi_dot(r) - profile.a_sq_minus_one(r) / (T::two() * r * r);
        let d2 = profile.a_dot(r) - T::two() * profile.a(r) * profile.phi(r);
        acc.max(d1.abs() + d2.abs())
    }))
}

/// `max_r |(∂²_r + (2/r)∂_r)(φ²/2) − (φ̇² + 2a²φ²/r²)|` over the grid, with
/// `φ̈` from a five-point difference of the analytic `φ̇`.
pub fn second_order_residual<T: Real>(profile: &RadialProfile<T>, grid: &[T]) -> Result<T> {
    check_grid(grid)?;
    Ok(grid.iter().fold(T::zero(), |acc, &r| {
        let h = r * T::lit(3e-4);
        let d = |k: f64| profile.phi_dot(r + h * T::lit(k));
        let phi_ddot = (d(-2.0) - T::lit(8.0) * d(-1.0) + T::lit(8.0) * d(1.0) - d(2.0)) / (T::lit(12.0) * h);
        let phi = profile.phi(r);
        let pd = profile.phi_dot(r);
        let lap = pd * pd + phi * phi_ddot + T::two() * phi * pd / r;
        let a = profile.a(r);
        let rhs = pd * pd + T::two() * a * a * phi * phi / (r * r);
        acc.max((lap - rhs).abs())
    }))
}

/// Logarithmically spaced radii.
pub fn log_grid<T: Real>(r_lo: T, r_hi: T, n: usize) -> Vec<T> {
    assert!(n >= 2 && r_lo > T::zero() && r_hi > r_lo, "invalid log grid");
    let (l0, l1) = (r_lo.ln(), r_hi.ln());
    let last = T::from_usize_lossy(n - 1);
    (0..n)
        .map(|i| match i {
            0 => r_lo,
            _ if i == n - 1 => r_hi,
            _ => (l0 + (l1 - l0) * T::from_usize_lossy(i) / last).exp(),
        })
        .collect()
}
