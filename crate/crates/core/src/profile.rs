//! Spherically symmetric configurations described by a pair of radial
//! profiles `(a(r), φ(r))`.
//!
//! In the hedgehog ansatz the connection is `S₁⊗ω₁ + a(r)(S₂⊗ω² + S₃⊗ω³)`
//! and the Higgs field is `φ(r) S₁`. All gauge-invariant densities follow
//! from the two profiles and their first derivatives.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::bps;
use crate::scalar::Real;

/// How a profile is evaluated.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Representation {
    ClosedFormBps,
    ClosedFormDirac,
    ClosedFormFlat,
    Grid,
    Rescaled,
    Perturbed,
}

/// Deformation applied to the connection profile `a`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum Perturbation<T> {
    /// `a + amount`.
    Shift { amount: T },
    /// `a + amplitude (r/width)² e^{−r/width}`: keeps `a(0) = 1` and the decay at infinity.
    Bump { amplitude: T, width: T },
}

impl<T: Real> Perturbation<T> {
    fn value(&self, r: T) -> T {
        match *self {
            Perturbation::Shift { amount } => amount,
            Perturbation::Bump { amplitude, width } => {
                let s = r / width;
                amplitude * s * s * (-s).exp()
            }
        }
    }

    fn derivative(&self, r: T) -> T {
        match *self {
            Perturbation::Shift { .. } => T::zero(),
            Perturbation::Bump { amplitude, width } => {
                let s = r / width;
                amplitude * (T::two() * s - s * s) * (-s).exp() / width
            }
        }
    }
}

/// Radial profile pair `(a, φ)`.
#[derive(Clone, Debug)]
pub enum RadialProfile<T: Real> {
    /// Prasad–Sommerfield monopole of the given mass.
    Bps { mass: T },
    /// Abelian Dirac monopole `(0, −(m − 1/(2r)))`, singular at the origin.
    Dirac { mass: T },
    /// Flat vacuum `(1, 0)`.
    Flat,
    /// Numerically integrated profile.
    Grid(Arc<GridProfile<T>>),
    /// `(a(r/ζ), φ(r/ζ)/ζ)`: the scale transform with zoom ζ.
    Rescaled { inner: Box<RadialProfile<T>>, zoom: T },
    /// Base profile with a deformed connection.
    Perturbed {
        base: Box<RadialProfile<T>>,
        perturbation: Perturbation<T>,
    },
}

impl<T: Real> RadialProfile<T> {
    pub fn bps(mass: T) -> Self {
        Self::Bps { mass }
    }

    /// Dirac monopole in the orientation of the regular branch (`φ < 0` far out).
    pub fn dirac(mass: T) -> Self {
        Self::Dirac { mass }
    }

    pub fn flat() -> Self {
        Self::Flat
    }

    pub fn perturbed(self, perturbation: Perturbation<T>) -> Self {
        Self::Perturbed {
            base: Box::new(self),
            perturbation,
        }
    }

    /// Scale transform `r ↦ r/ζ`, `φ ↦ φ/ζ`; the mass becomes `m/ζ`.
    ///
    /// Closed forms stay closed: BPS and Dirac profiles map to the same
    /// family at the new mass.
    pub fn rescaled(&self, zoom: T) -> Self {
        if zoom == T::one() {
            return self.clone();
        }
        match self {
            Self::Bps { mass } => Self::Bps { mass: *mass / zoom },
            Self::Dirac { mass } => Self::Dirac { mass: *mass / zoom },
            Self::Flat => Self::Flat,
            Self::Rescaled { inner, zoom: z } => {
                let combined = *z * zoom;
                if combined == T::one() {
                    (**inner).clone()
                } else {
                    Self::Rescaled {
                        inner: inner.clone(),
                        zoom: combined,
                    }
                }
            }
            other => Self::Rescaled {
                inner: Box::new(other.clone()),
                zoom,
            },
        }
    }

    pub fn representation(&self) -> Representation {
        match self {
            Self::Bps { .. } => Representation::ClosedFormBps,
            Self::Dirac { .. } => Representation::ClosedFormDirac,
            Self::Flat => Representation::ClosedFormFlat,
            Self::Grid(_) => Representation::Grid,
            Self::Rescaled { .. } => Representation::Rescaled,
            Self::Perturbed { .. } => Representation::Perturbed,
        }
    }

    /// Asymptotic value of `|φ|`.
    pub fn mass(&self) -> T {
        match self {
            Self::Bps { mass } | Self::Dirac { mass } => *mass,
            Self::Flat => T::zero(),
            Self::Grid(g) => g.mass,
            Self::Rescaled { inner, zoom } => inner.mass() / *zoom,
            Self::Perturbed { base, .. } => base.mass(),
        }
    }

    pub fn r_max(&self) -> T {
        T::infinity()
    }

    /// Whether `(a, φ) → (1, 0)` at the origin, so the field extends smoothly.
    pub fn is_regular(&self) -> bool {
        match self {
            Self::Dirac { .. } => false,
            Self::Bps { .. } | Self::Flat | Self::Grid(_) => true,
            Self::Rescaled { inner, .. } => inner.is_regular(),
            Self::Perturbed { base, perturbation } => {
                base.is_regular() && matches!(perturbation, Perturbation::Bump { .. })
            }
        }
    }

    pub fn a(&self, r: T) -> T {
        match self {
            Self::Bps { mass } => bps::bps_a(*mass, r),
            Self::Dirac { .. } => T::zero(),
            Self::Flat => T::one(),
            Self::Grid(g) => g.eval(r).a,
            Self::Rescaled { inner, zoom } => inner.a(r / *zoom),
            Self::Perturbed { base, perturbation } => base.a(r) + perturbation.value(r),
        }
    }

    pub fn phi(&self, r: T) -> T {
        match self {
            Self::Bps { mass } => bps::bps_phi(*mass, r),
            Self::Dirac { mass } => -(*mass - (T::two() * r).recip()),
            Self::Flat => T::zero(),
            Self::Grid(g) => g.eval(r).phi,
            Self::Rescaled { inner, zoom } => inner.phi(r / *zoom) / *zoom,
            Self::Perturbed { base, .. } => base.phi(r),
        }
    }

    pub fn a_dot(&self, r: T) -> T {
        match self {
            Self::Bps { mass } => bps::bps_a_dot(*mass, r),
            Self::Dirac { .. } | Self::Flat => T::zero(),
            Self::Grid(g) => g.eval(r).a_dot,
            Self::Rescaled { inner, zoom } => inner.a_dot(r / *zoom) / *zoom,
            Self::Perturbed { base, perturbation } => base.a_dot(r) + perturbation.derivative(r),
        }
    }

    pub fn phi_dot(&self, r: T) -> T {
        match self {
            Self::Bps { mass } => bps::bps_phi_dot(*mass, r),
            Self::Dirac { .. } => -(T::two() * r * r).recip(),
            Self::Flat => T::zero(),
            Self::Grid(g) => g.eval(r).phi_dot,
            Self::Rescaled { inner, zoom } => inner.phi_dot(r / *zoom) / (*zoom * *zoom),
            Self::Perturbed { base, .. } => base.phi_dot(r),
        }
    }

    /// `a² − 1`, evaluated without cancellation where the representation allows.
    pub fn a_sq_minus_one(&self, r: T) -> T {
        match self {
            Self::Bps { mass } => bps::bps_a_sq_minus_one(*mass, r),
            Self::Dirac { .. } => -T::one(),
            Self::Flat => T::zero(),
            Self::Rescaled { inner, zoom } => inner.a_sq_minus_one(r / *zoom),
            _ => {
                let a = self.a(r);
                (a - T::one()) * (a + T::one())
            }
        }
    }

    /// `|F_A|²` in the hedgehog ansatz: `(a²−1)²/(4r⁴) + ȧ²/(2r²)`.
    pub fn curvature_density(&self, r: T) -> T {
        let r = self.regularize(r);
        let q = self.a_sq_minus_one(r);
        let ad = self.a_dot(r);
        let r2 = r * r;
        q * q / (T::lit(4.0) * r2 * r2) + ad * ad / (T::two() * r2)
    }

    /// `|d_AΦ|² = φ̇² + 2a²φ²/r²`.
    pub fn higgs_derivative_sq(&self, r: T) -> T {
        let r = self.regularize(r);
        let pd = self.phi_dot(r);
        let a = self.a(r);
        let p = self.phi(r);
        pd * pd + T::two() * a * a * p * p / (r * r)
    }

    /// Energy density `e = |F_A|² + |d_AΦ|²` assembled from the profiles.
    pub fn energy_density(&self, r: T) -> T {
        self.curvature_density(r) + self.higgs_derivative_sq(r)
    }

    /// Pointwise Bogomolnyi defect `(φ̇ − (a²−1)/(2r²))² + (ȧ − 2aφ)²/(2r²)`:
    /// the integrand of `‖∗F_A − d_AΦ‖²`.
    pub fn bogomolnyi_defect_density(&self, r: T) -> T {
        let r = self.regularize(r);
        let r2 = r * r;
        let d1 = self.phi_dot(r) - self.a_sq_minus_one(r) / (T::two() * r2);
        let d2 = self.a_dot(r) - T::two() * self.a(r) * self.phi(r);
        d1 * d1 + d2 * d2 / (T::two() * r2)
    }

    /// Characteristic length of the core, `1/m` (or 1 for massless profiles).
    pub fn core_scale(&self) -> T {
        let m = self.mass();
        if m > T::zero() {
            m.recip()
        } else {
            T::one()
        }
    }

    // Densities of regular profiles have finite limits at 0; evaluate them a
    // hair away from the origin where the assembly is well defined.
    fn regularize(&self, r: T) -> T {
        let floor = T::lit(1e-7) * self.core_scale();
        if r < floor && self.is_regular() {
            floor
        } else {
            r
        }
    }
}

/// Profile values and first derivatives at one radius.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProfilePoint<T> {
    pub a: T,
    pub phi: T,
    pub a_dot: T,
    pub phi_dot: T,
}

/// Profile sampled on a logarithmic radial grid.
///
/// Between nodes the profiles are cubic Hermite interpolants in `t = ln r`
/// using the exact nodal derivatives. Below the first node the regular
/// series with slope `b` is used; beyond the last node the asymptotic model
/// `a ∝ r e^{−2Mr}`, `φ = −(M − 1/(2r))` is attached.
#[derive(Clone, Debug)]
pub struct GridProfile<T> {
    pub(crate) log_r: Vec<T>,
    pub(crate) a: Vec<T>,
    pub(crate) phi: Vec<T>,
    pub(crate) a_dot: Vec<T>,
    pub(crate) phi_dot: Vec<T>,
    pub(crate) slope: T,
    pub(crate) mass: T,
}

impl<T: Real> GridProfile<T> {
    pub(crate) fn new(radii: &[T], nodes: &[ProfilePoint<T>], slope: T, mass: T) -> Self {
        assert_eq!(radii.len(), nodes.len());
        assert!(radii.len() >= 2, "grid profile needs at least two nodes");
        Self {
            log_r: radii.iter().map(|r| r.ln()).collect(),
            a: nodes.iter().map(|p| p.a).collect(),
            phi: nodes.iter().map(|p| p.phi).collect(),
            a_dot: nodes.iter().map(|p| p.a_dot).collect(),
            phi_dot: nodes.iter().map(|p| p.phi_dot).collect(),
            slope,
            mass,
        }
    }

    pub fn radii(&self) -> Vec<T> {
        self.log_r.iter().map(|t| t.exp()).collect()
    }

    pub fn r_start(&self) -> T {
        self.log_r[0].exp()
    }

    pub fn r_match(&self) -> T {
        self.log_r[self.log_r.len() - 1].exp()
    }

    pub fn slope(&self) -> T {
        self.slope
    }

    pub fn eval(&self, r: T) -> ProfilePoint<T> {
        if r <= self.r_start() {
            return regular_series(self.slope, r);
        }
        let n = self.log_r.len();
        let r_match = self.r_match();
        if r >= r_match {
            let m = self.mass;
            let a_m = self.a[n - 1];
            let a = a_m * (r / r_match) * (-T::two() * m * (r - r_match)).exp();
            return ProfilePoint {
                a,
                phi: -(m - (T::two() * r).recip()),
                a_dot: a * (r.recip() - T::two() * m),
                phi_dot: -(T::two() * r * r).recip(),
            };
        }
        let t = r.ln();
        let k = self.log_r.partition_point(|&tk| tk <= t).clamp(1, n - 1) - 1;
        let (t0, t1) = (self.log_r[k], self.log_r[k + 1]);
        let (r0, r1) = (t0.exp(), t1.exp());
        let h = t1 - t0;
        let s = (t - t0) / h;
        let hermite = |y0: T, y1: T, d0: T, d1: T| -> (T, T) {
            // d0, d1 are dy/dt at the nodes
            let s2 = s * s;
            let s3 = s2 * s;
            let two = T::two();
            let three = T::lit(3.0);
            let h00 = two * s3 - three * s2 + T::one();
            let h10 = s3 - two * s2 + s;
            let h01 = -two * s3 + three * s2;
            let h11 = s3 - s2;
            let value = h00 * y0 + h10 * h * d0 + h01 * y1 + h11 * h * d1;
            let dh00 = T::lit(6.0) * (s2 - s);
            let dh10 = three * s2 - T::lit(4.0) * s + T::one();
            let dh01 = -dh00;
            let dh11 = three * s2 - two * s;
            let dy_dt = (dh00 * y0 + dh01 * y1) / h + dh10 * d0 + dh11 * d1;
            (value, dy_dt / r)
        };
        let (a, a_dot) = hermite(self.a[k], self.a[k + 1], r0 * self.a_dot[k], r1 * self.a_dot[k + 1]);
        let (phi, phi_dot) = hermite(
            self.phi[k],
            self.phi[k + 1],
            r0 * self.phi_dot[k],
            r1 * self.phi_dot[k + 1],
        );
        ProfilePoint { a, phi, a_dot, phi_dot }
    }
}

/// Regular solution near the origin with `φ ≈ −b r`:
/// `φ = −br + (2/5)b²r³`, `a = 1 − br² + (7/10)b²r⁴`.
pub fn regular_series<T: Real>(slope: T, r: T) -> ProfilePoint<T> {
    let b = slope;
    let r2 = r * r;
    let c_phi = T::lit(0.4) * b * b;
    let c_a = T::lit(0.7) * b * b;
    ProfilePoint {
        a: T::one() - b * r2 + c_a * r2 * r2,
        phi: -b * r + c_phi * r2 * r,
        a_dot: -T::two() * b * r + T::lit(4.0) * c_a * r2 * r,
        phi_dot: -b + T::lit(3.0) * c_phi * r2,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flat_profile_has_zero_energy() {
        let p = RadialProfile::<f64>::flat();
        for &r in &[1e-3, 0.5, 10.0] {
            assert_eq!(p.energy_density(r), 0.0);
        }
    }

    #[test]
    fn dirac_higgs_derivative_is_quarter_inverse_fourth_power() {
        let p = RadialProfile::dirac(2.0_f64);
        for &r in &[0.1, 1.0, 7.0] {
            let v = p.higgs_derivative_sq(r);
            assert!((v - 0.25 / r.powi(4)).abs() < 1e-12 * v);
        }
    }

    #[test]
    fn assembly_matches_closed_form_density() {
        for &m in &[0.5, 1.0, 2.0, 5.0] {
            let p = RadialProfile::bps(m);
            for &r in &[1e-3, 0.05, 0.3, 1.0, 4.0, 20.0] {
                let e1 = p.energy_density(r);
                let e2 = bps::bps_energy_density(m, r).unwrap();
                assert!(crate::scalar::rel_diff(e1, e2, 1e-300) < 1e-10, "m={m} r={r}: {e1} vs {e2}");
            }
        }
    }

    #[test]
    fn monopole_halves_are_equal() {
        let p = RadialProfile::bps(1.3_f64);
        for &r in &[0.01, 0.4, 2.0] {
            let q = p.a_sq_minus_one(r);
            let pd = p.phi_dot(r);
            assert!((q * q / (4.0 * r.powi(4)) - pd * pd).abs() < 1e-10 * pd * pd);
            let (a, phi, ad) = (p.a(r), p.phi(r), p.a_dot(r));
            let lhs = ad * ad / (2.0 * r * r);
            let rhs = 2.0 * a * a * phi * phi / (r * r);
            assert!((lhs - rhs).abs() < 1e-10 * rhs.max(1e-300));
        }
    }

    #[test]
    fn rescaling_bps_stays_closed_form() {
        let p = RadialProfile::bps(8.0_f64).rescaled(8.0);
        assert!(matches!(p, RadialProfile::Bps { mass } if mass == 1.0));
        let g = RadialProfile::<f64>::flat().perturbed(Perturbation::Bump { amplitude: 0.1, width: 1.0 });
        let r = g.rescaled(2.0).rescaled(0.5);
        assert!(matches!(r, RadialProfile::Perturbed { .. }));
    }

    #[test]
    fn generic_rescaling_matches_closed_form() {
        // wrap BPS in a perturbation of zero amplitude to force the generic path
        let base = RadialProfile::bps(3.0_f64).perturbed(Perturbation::Bump { amplitude: 0.0, width: 1.0 });
        let z = base.rescaled(3.0);
        let one = RadialProfile::bps(1.0_f64);
        for &r in &[0.1, 1.0, 3.0] {
            assert!((z.a(r) - one.a(r)).abs() < 1e-14);
            assert!((z.phi(r) - one.phi(r)).abs() < 1e-14);
            assert!((z.phi_dot(r) - one.phi_dot(r)).abs() < 1e-13);
            assert!((z.energy_density(r) - one.energy_density(r)).abs() < 1e-12);
        }
    }

    #[test]
    fn regular_series_matches_bps_near_origin() {
        let m = 1.0_f64;
        let b = 2.0 * m * m / 3.0;
        let r = 1e-3;
        let s = regular_series(b, r);
        assert!((s.a - bps::bps_a(m, r)).abs() < 1e-15);
        assert!((s.phi - bps::bps_phi(m, r)).abs() < 1e-15);
        assert!((s.phi_dot - bps::bps_phi_dot(m, r)).abs() < 1e-12);
    }
}
