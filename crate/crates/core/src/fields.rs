//! Field samplers: pointwise evaluation of Higgs fields and gauge-invariant
//! densities on ℝ³.

use std::sync::Arc;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::algebra::{Su2Vec, Vec3};
use crate::error::{Error, Result};
use crate::profile::{RadialProfile, Representation};
use crate::scalar::Real;

/// How a sampler produces its values.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SamplerKind {
    ClosedForm,
    GridInterpolated,
    /// Higgs field only; density queries are rejected.
    SyntheticHiggsOnly,
    /// Higgs field from one source, energy density summed from radial pieces.
    Composite,
}

/// Immutable map `ℝ³ → (Φ, densities)`.
#[derive(Clone, Debug)]
pub enum FieldSampler<T: Real> {
    Hedgehog(Hedgehog<T>),
    MultiCenter(MultiCenter<T>),
    Composite(Composite<T>),
    Rescaled(Rescaled<T>),
}

/// Spherically symmetric field centered at a point.
///
/// `Φ(x) = −φ(r) x̂` with `r = |x − center|`; the sign makes the regular
/// branch (`φ ≤ 0`) a map of degree +1 on spheres around the center.
#[derive(Clone, Debug)]
pub struct Hedgehog<T: Real> {
    pub profile: RadialProfile<T>,
    pub center: Vec3<T>,
}

/// Energy density as a sum of radial pieces, Higgs field from a separate sampler.
#[derive(Clone, Debug)]
pub struct Composite<T: Real> {
    pub higgs: Box<FieldSampler<T>>,
    pub pieces: Vec<Hedgehog<T>>,
    pub mass: T,
    pub charge: i32,
}

/// `y ↦ zoom⁻¹ Φ(base_point + y/zoom)`.
#[derive(Clone, Debug)]
pub struct Rescaled<T: Real> {
    pub inner: Box<FieldSampler<T>>,
    pub zoom: T,
    pub base_point: Vec3<T>,
}

/// Synthetic Higgs field with simple zeros of local degree +1 at prescribed
/// centers and `|Φ| = mass` outside the balls `B_scale(center)`.
///
/// In a rotated frame `(z, t) ∈ ℂ × ℝ` the direction is that of
/// `F = (Π_j (z − z_j), t − T(z))`, where `T` interpolates the heights of
/// the centers. The norm is `mass · ρ(|x − c|/scale)` near the nearest
/// center `c`, with `ρ(s) = s + S(s)(1 − s)` and `S` the quintic smoothstep,
/// and `mass` elsewhere.
#[derive(Clone, Debug)]
pub struct MultiCenter<T: Real> {
    centers: Vec<Vec3<T>>,
    scale: T,
    mass: T,
    frame: [Vec3<T>; 3],
    planar: Vec<Complex<T>>,
    heights: Vec<T>,
    length: T,
}

/// Scalar field choice for [`finite_diff_laplacian`].
#[derive(Clone)]
pub enum ScalarField<T: Real> {
    /// `|Φ|²/2`.
    HalfHiggsNormSq,
    HiggsNorm,
    EnergyDensity,
    Custom(Arc<dyn Fn(Vec3<T>) -> T + Send + Sync>),
}

impl<T: Real> std::fmt::Debug for ScalarField<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::HalfHiggsNormSq => f.write_str("HalfHiggsNormSq"),
            Self::HiggsNorm => f.write_str("HiggsNorm"),
            Self::EnergyDensity => f.write_str("EnergyDensity"),
            Self::Custom(_) => f.write_str("Custom(..)"),
        }
    }
}

pub fn hedgehog_field<T: Real>(profile: RadialProfile<T>, center: Vec3<T>) -> FieldSampler<T> {
    FieldSampler::Hedgehog(Hedgehog { profile, center })
}

/// Synthetic multi-center Higgs field.
pub fn multi_center_higgs<T: Real>(centers: &[Vec3<T>], scale: T, mass: T) -> Result<FieldSampler<T>> {
    MultiCenter::new(centers, scale, mass).map(FieldSampler::MultiCenter)
}

/// Flat connection with constant Higgs field of norm `mass`: zero energy.
pub fn vacuum<T: Real>(mass: T) -> Result<FieldSampler<T>> {
    let higgs = multi_center_higgs(&[], T::one(), mass)?;
    Ok(composite(higgs, Vec::new(), mass, 0))
}

/// Sampler whose Higgs field comes from `higgs` and whose energy density is
/// the sum of the radial `pieces`.
pub fn composite<T: Real>(higgs: FieldSampler<T>, pieces: Vec<Hedgehog<T>>, mass: T, charge: i32) -> FieldSampler<T> {
    FieldSampler::Composite(Composite {
        higgs: Box::new(higgs),
        pieces,
        mass,
        charge,
    })
}

impl<T: Real> Hedgehog<T> {
    fn radius(&self, x: Vec3<T>) -> Result<T> {
        let r = x.distance(self.center);
        if r == T::zero() && !self.profile.is_regular() {
            return Err(puncture(self.center, r));
        }
        Ok(r)
    }

    pub fn higgs(&self, x: Vec3<T>) -> Result<Su2Vec<T>> {
        let r = self.radius(x)?;
        match (x - self.center).normalized() {
            Some(u) => Ok(Su2Vec::from_vec3(u * -self.profile.phi(r))),
            None => Ok(Su2Vec::zero()),
        }
    }

    pub fn higgs_norm(&self, x: Vec3<T>) -> Result<T> {
        let r = self.radius(x)?;
        if r == T::zero() {
            return Ok(T::zero());
        }
        Ok(self.profile.phi(r).abs())
    }

    pub fn energy_density(&self, x: Vec3<T>) -> Result<T> {
        let r = self.radius(x)?;
        Ok(self.profile.energy_density(r))
    }

    pub fn higgs_derivative_sq(&self, x: Vec3<T>) -> Result<T> {
        let r = self.radius(x)?;
        Ok(self.profile.higgs_derivative_sq(r))
    }

    fn rescaled(&self, zoom: T, base_point: Vec3<T>) -> Self {
        Self {
            profile: self.profile.rescaled(zoom),
            center: (self.center - base_point) * zoom,
        }
    }
}

fn puncture<T: Real>(center: Vec3<T>, r: T) -> Error {
    Error::Puncture {
        center: center.to_string(),
        radius: r.to_f64_lossy(),
    }
}

impl<T: Real> MultiCenter<T> {
    pub fn new(centers: &[Vec3<T>], scale: T, mass: T) -> Result<Self> {
        if !(mass > T::zero() && mass.is_finite()) {
            return Err(Error::Config(format!("mass must be positive, got {mass}")));
        }
        if !(scale > T::zero() && scale.is_finite()) {
            return Err(Error::Config(format!("scale must be positive, got {scale}")));
        }
        if let Some(c) = centers.iter().find(|c| !c.is_finite()) {
            return Err(Error::Config(format!("non-finite center {c}")));
        }
        let mut min_dist = T::infinity();
        let mut diameter = T::zero();
        for (i, a) in centers.iter().enumerate() {
            for b in &centers[i + 1..] {
                let d = a.distance(*b);
                min_dist = min_dist.min(d);
                diameter = diameter.max(d);
            }
        }
        if min_dist == T::zero() {
            return Err(Error::Config("centers must be pairwise distinct".into()));
        }
        if scale >= min_dist * T::half() {
            return Err(Error::Config(format!(
                "overlapping balls: scale {scale} must be below half the minimum center distance {min_dist}"
            )));
        }
        let frame = best_frame(centers);
        let planar: Vec<Complex<T>> = centers.iter().map(|c| Complex::new(c.dot(frame[0]), c.dot(frame[1]))).collect();
        let heights = centers.iter().map(|c| c.dot(frame[2])).collect();
        Ok(Self {
            centers: centers.to_vec(),
            scale,
            mass,
            frame,
            planar,
            heights,
            length: diameter.max(scale).max(T::one()),
        })
    }

    pub fn centers(&self) -> &[Vec3<T>] {
        &self.centers
    }

    pub fn scale(&self) -> T {
        self.scale
    }

    // Shepard interpolant of the center heights over the projection plane.
    fn height(&self, z: Complex<T>) -> T {
        let mut num = T::zero();
        let mut den = T::zero();
        for (zj, &tj) in self.planar.iter().zip(&self.heights) {
            let d2 = (z - zj).norm_sqr();
            if d2 == T::zero() {
                return tj;
            }
            let w = d2.recip();
            num += w * tj;
            den += w;
        }
        num / den
    }

    fn direction(&self, x: Vec3<T>) -> Option<Vec3<T>> {
        if self.centers.is_empty() {
            return Some(Vec3::e3());
        }
        let z = Complex::new(x.dot(self.frame[0]), x.dot(self.frame[1]));
        let t = x.dot(self.frame[2]);
        let len = self.length;
        let w = self
            .planar
            .iter()
            .fold(Complex::new(T::one(), T::zero()), |acc, zj| acc * ((z - zj) / len));
        let f = Vec3::new(w.re, w.im, (t - self.height(z)) / len);
        f.normalized()
    }

    fn profile(&self, x: Vec3<T>) -> T {
        let d = self
            .centers
            .iter()
            .map(|c| x.distance(*c))
            .fold(T::infinity(), T::min);
        let s = d / self.scale;
        if s >= T::one() {
            return T::one();
        }
        let smooth = s * s * s * (T::lit(10.0) + s * (T::lit(-15.0) + s * T::lit(6.0)));
        s + smooth * (T::one() - s)
    }

    pub fn higgs(&self, x: Vec3<T>) -> Su2Vec<T> {
        let rho = self.profile(x);
        match self.direction(x) {
            Some(u) if rho > T::zero() => Su2Vec::from_vec3(u * (self.mass * rho)),
            _ => Su2Vec::zero(),
        }
    }

    pub fn higgs_norm(&self, x: Vec3<T>) -> T {
        if self.direction(x).is_none() {
            return T::zero();
        }
        self.mass * self.profile(x)
    }
}

// Projection axis that keeps the projected centers far apart.
fn best_frame<T: Real>(centers: &[Vec3<T>]) -> [Vec3<T>; 3] {
    let candidates: [[f64; 3]; 7] = [
        [0.0, 0.0, 1.0],
        [1.0, 0.0, 0.0],
        [0.0, 1.0, 0.0],
        [1.0, 1.0, 1.0],
        [1.0, -1.0, 1.0],
        [1.0, 1.0, -1.0],
        [-1.0, 1.0, 1.0],
    ];
    let mut best = None;
    let mut best_sep = T::neg_infinity();
    for c in candidates {
        let axis = Vec3::<T>::from_f64(c).normalized().expect("nonzero axis");
        let helper = if axis.x.abs() < T::lit(0.9) { Vec3::e1() } else { Vec3::e2() };
        let u = helper.cross(axis).normalized().expect("independent helper");
        let v = axis.cross(u);
        let mut sep = T::infinity();
        for (i, a) in centers.iter().enumerate() {
            for b in &centers[i + 1..] {
                let d = *a - *b;
                let p = (d.dot(u) * d.dot(u) + d.dot(v) * d.dot(v)).sqrt();
                sep = sep.min(p);
            }
        }
        if sep > best_sep * T::lit(1.0 + 1e-9) {
            best_sep = sep;
            best = Some([u, v, axis]);
        }
    }
    best.expect("at least one candidate frame")
}

impl<T: Real> FieldSampler<T> {
    pub fn kind(&self) -> SamplerKind {
        match self {
            Self::Hedgehog(h) => profile_kind(&h.profile),
            Self::MultiCenter(_) => SamplerKind::SyntheticHiggsOnly,
            Self::Composite(_) => SamplerKind::Composite,
            Self::Rescaled(r) => r.inner.kind(),
        }
    }

    fn kind_name(&self) -> &'static str {
        match self.kind() {
            SamplerKind::ClosedForm => "closed-form",
            SamplerKind::GridInterpolated => "grid-interpolated",
            SamplerKind::SyntheticHiggsOnly => "synthetic-higgs-only",
            SamplerKind::Composite => "composite",
        }
    }

    pub fn mass(&self) -> T {
        match self {
            Self::Hedgehog(h) => h.profile.mass(),
            Self::MultiCenter(mc) => mc.mass,
            Self::Composite(c) => c.mass,
            Self::Rescaled(r) => r.inner.mass() / r.zoom,
        }
    }

    pub fn charge(&self) -> i32 {
        match self {
            Self::Hedgehog(h) => {
                if h.profile.mass() > T::zero() {
                    1
                } else {
                    0
                }
            }
            Self::MultiCenter(mc) => mc.centers.len() as i32,
            Self::Composite(c) => c.charge,
            Self::Rescaled(r) => r.inner.charge(),
        }
    }

    pub fn supports_density(&self) -> bool {
        self.kind() != SamplerKind::SyntheticHiggsOnly
    }

    pub fn higgs(&self, x: Vec3<T>) -> Result<Su2Vec<T>> {
        match self {
            Self::Hedgehog(h) => h.higgs(x),
            Self::MultiCenter(mc) => Ok(mc.higgs(x)),
            Self::Composite(c) => c.higgs.higgs(x),
            Self::Rescaled(r) => Ok(r.inner.higgs(r.pull_back(x))?.scale(r.zoom.recip())),
        }
    }

    pub fn higgs_norm(&self, x: Vec3<T>) -> Result<T> {
        match self {
            Self::Hedgehog(h) => h.higgs_norm(x),
            Self::MultiCenter(mc) => Ok(mc.higgs_norm(x)),
            Self::Composite(c) => c.higgs.higgs_norm(x),
            Self::Rescaled(r) => Ok(r.inner.higgs_norm(r.pull_back(x))? / r.zoom),
        }
    }

    /// `e = |F_A|² + |d_AΦ|²`.
    pub fn energy_density(&self, x: Vec3<T>) -> Result<T> {
        match self {
            Self::Hedgehog(h) => h.energy_density(x),
            Self::MultiCenter(_) => Err(Error::UnsupportedDensity(self.kind_name())),
            Self::Composite(c) => c.pieces.iter().try_fold(T::zero(), |acc, p| Ok(acc + p.energy_density(x)?)),
            Self::Rescaled(r) => {
                let z2 = r.zoom * r.zoom;
                Ok(r.inner.energy_density(r.pull_back(x))? / (z2 * z2))
            }
        }
    }

    /// `|d_AΦ|²`.
    pub fn covariant_higgs_derivative_norm_sq(&self, x: Vec3<T>) -> Result<T> {
        match self {
            Self::Hedgehog(h) => h.higgs_derivative_sq(x),
            Self::MultiCenter(_) => Err(Error::UnsupportedDensity(self.kind_name())),
            Self::Composite(c) => c
                .pieces
                .iter()
                .try_fold(T::zero(), |acc, p| Ok(acc + p.higgs_derivative_sq(x)?)),
            Self::Rescaled(r) => {
                let z2 = r.zoom * r.zoom;
                Ok(r.inner.covariant_higgs_derivative_norm_sq(r.pull_back(x))? / (z2 * z2))
            }
        }
    }

    /// Radial pieces whose densities sum to this sampler's energy density.
    pub fn radial_components(&self) -> Result<Vec<&Hedgehog<T>>> {
        match self {
            Self::Hedgehog(h) => Ok(vec![h]),
            Self::Composite(c) => Ok(c.pieces.iter().collect()),
            Self::MultiCenter(_) => Err(Error::UnsupportedDensity(self.kind_name())),
            Self::Rescaled(r) => {
                if r.inner.supports_density() {
                    Err(Error::Unsupported("radial decomposition of a wrapped sampler".into()))
                } else {
                    Err(Error::UnsupportedDensity(self.kind_name()))
                }
            }
        }
    }

    /// The sampler's single radial piece, if it is a plain hedgehog.
    pub fn as_hedgehog(&self) -> Option<&Hedgehog<T>> {
        match self {
            Self::Hedgehog(h) => Some(h),
            _ => None,
        }
    }

    /// Zeros known from the construction (centers of non-flat pieces).
    pub fn known_zeros(&self) -> Vec<Vec3<T>> {
        match self {
            Self::Hedgehog(h) => {
                if h.profile.mass() > T::zero() {
                    vec![h.center]
                } else {
                    Vec::new()
                }
            }
            Self::MultiCenter(mc) => mc.centers.clone(),
            Self::Composite(c) => c.higgs.known_zeros(),
            Self::Rescaled(r) => r
                .inner
                .known_zeros()
                .into_iter()
                .map(|z| (z - r.base_point) * r.zoom)
                .collect(),
        }
    }

    /// Points where the sampler cannot be evaluated.
    pub fn punctures(&self) -> Vec<Vec3<T>> {
        match self {
            Self::Hedgehog(h) if !h.profile.is_regular() => vec![h.center],
            Self::Hedgehog(_) | Self::MultiCenter(_) => Vec::new(),
            Self::Composite(c) => {
                let mut p = c.higgs.punctures();
                p.extend(c.pieces.iter().filter(|h| !h.profile.is_regular()).map(|h| h.center));
                p
            }
            Self::Rescaled(r) => r
                .inner
                .punctures()
                .into_iter()
                .map(|z| (z - r.base_point) * r.zoom)
                .collect(),
        }
    }

    /// Scale transform `y ↦ zoom⁻¹ Φ(base_point + y/zoom)`.
    ///
    /// Radial pieces are transformed exactly; other samplers are wrapped.
    pub fn rescale(&self, zoom: T, base_point: Vec3<T>) -> Self {
        match self {
            Self::Hedgehog(h) => Self::Hedgehog(h.rescaled(zoom, base_point)),
            Self::Composite(c) => Self::Composite(Composite {
                higgs: Box::new(c.higgs.rescale(zoom, base_point)),
                pieces: c.pieces.iter().map(|p| p.rescaled(zoom, base_point)).collect(),
                mass: c.mass / zoom,
                charge: c.charge,
            }),
            Self::Rescaled(r) => Self::Rescaled(Rescaled {
                inner: r.inner.clone(),
                zoom: r.zoom * zoom,
                base_point: r.base_point + base_point / r.zoom,
            }),
            Self::MultiCenter(_) => Self::Rescaled(Rescaled {
                inner: Box::new(self.clone()),
                zoom,
                base_point,
            }),
        }
    }
}

fn profile_kind<T: Real>(p: &RadialProfile<T>) -> SamplerKind {
    match p {
        RadialProfile::Grid(_) => SamplerKind::GridInterpolated,
        RadialProfile::Rescaled { inner, .. } => profile_kind(inner),
        RadialProfile::Perturbed { base, .. } => profile_kind(base),
        _ => match p.representation() {
            Representation::Grid => SamplerKind::GridInterpolated,
            _ => SamplerKind::ClosedForm,
        },
    }
}

impl<T: Real> Rescaled<T> {
    fn pull_back(&self, y: Vec3<T>) -> Vec3<T> {
        self.base_point + y / self.zoom
    }
}

impl<T: Real> ScalarField<T> {
    pub fn eval(&self, sampler: &FieldSampler<T>, x: Vec3<T>) -> Result<T> {
        match self {
            Self::HalfHiggsNormSq => {
                let n = sampler.higgs_norm(x)?;
                Ok(n * n * T::half())
            }
            Self::HiggsNorm => sampler.higgs_norm(x),
            Self::EnergyDensity => sampler.energy_density(x),
            Self::Custom(f) => Ok(f(x)),
        }
    }
}

/// Geometer's Laplacian `Δ = d*d` of a scalar field by the 7-point stencil:
/// minus the sum of central second differences.
pub fn finite_diff_laplacian<T: Real>(sampler: &FieldSampler<T>, f: &ScalarField<T>, x: Vec3<T>, h: T) -> Result<T> {
    if !(h > T::zero()) {
        return Err(Error::Domain(format!("stencil step must be positive, got {h}")));
    }
    if let Some(p) = sampler.punctures().into_iter().find(|p| x.distance(*p) <= h) {
        return Err(puncture(p, x.distance(p)));
    }
    let f0 = f.eval(sampler, x)?;
    let mut acc = T::zero();
    for axis in [Vec3::e1(), Vec3::e2(), Vec3::e3()] {
        let fp = f.eval(sampler, x + axis * h)?;
        let fm = f.eval(sampler, x - axis * h)?;
        acc += fp - T::two() * f0 + fm;
    }
    Ok(-acc / (h * h))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bps;
    use proptest::prelude::*;

    fn v(x: f64, y: f64, z: f64) -> Vec3<f64> {
        Vec3::new(x, y, z)
    }

    #[test]
    fn flat_hedgehog_has_no_energy() {
        let s = hedgehog_field(RadialProfile::flat(), v(1.0, 2.0, 3.0));
        assert_eq!(s.energy_density(v(0.3, 0.0, 1.0)).unwrap(), 0.0);
        assert_eq!(s.higgs_norm(v(0.3, 0.0, 1.0)).unwrap(), 0.0);
    }

    #[test]
    fn dirac_puncture_is_reported() {
        let c = v(0.5, 0.0, 0.0);
        let s = hedgehog_field(RadialProfile::dirac(1.0), c);
        assert!(matches!(s.higgs(c), Err(Error::Puncture { .. })));
        assert!(matches!(s.energy_density(c), Err(Error::Puncture { .. })));
        let d = s.covariant_higgs_derivative_norm_sq(v(0.5, 2.0, 0.0)).unwrap();
        assert!((d - 0.25 / 16.0).abs() < 1e-15);
    }

    #[test]
    fn bps_density_matches_closed_form() {
        let s = hedgehog_field(RadialProfile::bps(1.0), Vec3::zero());
        for r in [0.01, 0.2, 1.0, 3.0] {
            let e = s.energy_density(v(0.0, r, 0.0)).unwrap();
            let exact = bps::bps_energy_density(1.0, r).unwrap();
            assert!((e - exact).abs() <= 1e-12 * exact);
        }
        // finite limit at the center
        assert!((s.energy_density(Vec3::zero()).unwrap() - 8.0 / 3.0).abs() < 1e-9);
    }

    #[test]
    fn bps_higgs_norm_stays_below_mass() {
        let m = 2.0;
        let s = hedgehog_field(RadialProfile::bps(m), Vec3::zero());
        for k in 0..60 {
            let r = 1e-3 * 1.3_f64.powi(k);
            assert!(s.higgs_norm(v(r, 0.0, 0.0)).unwrap() < m);
        }
    }

    #[test]
    fn laplacian_of_quadratic() {
        let s = hedgehog_field(RadialProfile::flat(), Vec3::zero());
        let f = ScalarField::Custom(Arc::new(|x: Vec3<f64>| x.norm_sq()));
        let lap = finite_diff_laplacian(&s, &f, v(0.3, -0.2, 0.7), 1e-3).unwrap();
        assert!((lap + 6.0).abs() < 1e-6);
        let c = ScalarField::Custom(Arc::new(|_: Vec3<f64>| 4.0));
        assert_eq!(finite_diff_laplacian(&s, &c, v(0.3, -0.2, 0.7), 1e-3).unwrap(), 0.0);
    }

    #[test]
    fn subharmonicity_identity_on_bps() {
        // Δ|Φ|²/2 = −|d_AΦ|² for a solution of the second-order equations
        let s = hedgehog_field(RadialProfile::bps(1.0), Vec3::zero());
        let x = v(0.6, 0.0, 0.8);
        let lap = finite_diff_laplacian(&s, &ScalarField::HalfHiggsNormSq, x, 1e-3).unwrap();
        let d = s.covariant_higgs_derivative_norm_sq(x).unwrap();
        assert!((lap + d).abs() < 1e-6, "{lap} vs {}", -d);
    }

    #[test]
    fn stencil_touching_puncture_fails() {
        let s = hedgehog_field(RadialProfile::dirac(1.0), Vec3::zero());
        let r = finite_diff_laplacian(&s, &ScalarField::HiggsNorm, v(1e-3, 0.0, 0.0), 1e-2);
        assert!(matches!(r, Err(Error::Puncture { .. })));
    }

    #[test]
    fn multi_center_basic_shape() {
        let s = multi_center_higgs(&[Vec3::zero()], 0.5, 2.0).unwrap();
        assert_eq!(s.higgs(Vec3::zero()).unwrap(), Su2Vec::zero());
        assert!((s.higgs_norm(v(0.0, 0.7, 0.1)).unwrap() - 2.0).abs() < 1e-15);
        assert!(s.higgs_norm(v(0.0, 0.2, 0.1)).unwrap() < 2.0);
        assert!(matches!(s.energy_density(Vec3::zero()), Err(Error::UnsupportedDensity(_))));
        let empty = multi_center_higgs::<f64>(&[], 0.5, 1.0).unwrap();
        assert_eq!(empty.higgs(v(1.0, 2.0, 3.0)).unwrap(), Su2Vec::new(0.0, 0.0, 1.0));
    }

    #[test]
    fn multi_center_rejects_overlap() {
        let r = multi_center_higgs(&[Vec3::zero(), v(1.0, 0.0, 0.0)], 0.6, 1.0);
        assert!(matches!(r, Err(Error::Config(_))));
        let r = multi_center_higgs(&[Vec3::zero(), Vec3::zero()], 0.1, 1.0);
        assert!(matches!(r, Err(Error::Config(_))));
    }

    #[test]
    fn rescaled_bps_is_mass_one_bps() {
        let c = v(0.3, -1.0, 2.0);
        let s = hedgehog_field(RadialProfile::bps(8.0), c);
        let z = s.rescale(8.0, c);
        let one = hedgehog_field(RadialProfile::bps(1.0), Vec3::zero());
        for p in [v(0.1, 0.2, 0.3), v(3.0, -4.0, 1.0)] {
            assert!((z.higgs_norm(p).unwrap() - one.higgs_norm(p).unwrap()).abs() < 1e-13);
            assert!((z.energy_density(p).unwrap() - one.energy_density(p).unwrap()).abs() < 1e-12);
        }
    }

    #[test]
    fn wrapped_rescale_composes() {
        let s = multi_center_higgs(&[v(1.0, 0.0, 0.0), v(-1.0, 0.0, 0.5)], 0.4, 3.0).unwrap();
        let b1 = v(0.2, 0.1, 0.0);
        let b2 = v(-0.5, 0.3, 0.2);
        let twice = s.rescale(2.0, b1).rescale(3.0, b2);
        let once = s.rescale(6.0, b1 + b2 / 2.0);
        for p in [v(0.1, 0.2, 0.3), v(3.0, -4.0, 1.0)] {
            let a = twice.higgs(p).unwrap();
            let b = once.higgs(p).unwrap();
            assert!((a - b).norm() < 1e-14);
        }
        assert_eq!(twice.mass(), 0.5);
    }

    proptest! {
        #[test]
        fn hedgehog_norm_is_rotation_invariant(
            r in 0.01f64..6.0,
            th1 in 0.0f64..std::f64::consts::PI, ph1 in 0.0f64..std::f64::consts::TAU,
            th2 in 0.0f64..std::f64::consts::PI, ph2 in 0.0f64..std::f64::consts::TAU,
        ) {
            let c = v(0.5, -0.5, 1.0);
            let s = hedgehog_field(RadialProfile::bps(1.5), c);
            let dir = |t: f64, p: f64| v(t.sin() * p.cos(), t.sin() * p.sin(), t.cos());
            let a = s.higgs_norm(c + dir(th1, ph1) * r).unwrap();
            let b = s.higgs_norm(c + dir(th2, ph2) * r).unwrap();
            prop_assert!((a - b).abs() <= 1e-14 * a.max(1e-300));
            let h = s.higgs(c + dir(th1, ph1) * r).unwrap();
            prop_assert!((h.norm() - a).abs() <= 1e-14 * a.max(1e-300));
        }
    }
}
