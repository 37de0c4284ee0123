use log::warn;
use serde::{Deserialize, Serialize};

use crate::algebra::{Su2Vec, Vec3};
use crate::error::{Error, Result};
use crate::fields::FieldSampler;
use crate::scalar::Real;

/// Axis-aligned search box.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Aabb<T> {
    pub lo: Vec3<T>,
    pub hi: Vec3<T>,
}

impl<T: Real> Aabb<T> {
    pub fn new(lo: Vec3<T>, hi: Vec3<T>) -> Result<Self> {
        if !(lo.x < hi.x && lo.y < hi.y && lo.z < hi.z) {
            return Err(Error::Domain(format!("degenerate box {lo} .. {hi}")));
        }
        Ok(Self { lo, hi })
    }

    /// Cube of half-width `half` around `center`.
    pub fn cube(center: Vec3<T>, half: T) -> Result<Self> {
        let h = Vec3::new(half, half, half);
        Self::new(center - h, center + h)
    }

    pub fn contains(&self, p: Vec3<T>) -> bool {
        (0..3).all(|i| p[i] >= self.lo[i] && p[i] <= self.hi[i])
    }

    pub fn diagonal(&self) -> T {
        self.lo.distance(self.hi)
    }
}

/// Zeros found in a box, with any dropped candidates explained.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ZeroSearch<T> {
    /// Sorted lexicographically.
    pub zeros: Vec<Vec3<T>>,
    pub candidates: usize,
    pub warnings: Vec<String>,
}

const MAX_CANDIDATES: usize = 256;
const NEWTON_ITERS: usize = 100;
const DEDUP_DISTANCE: f64 = 1e-6;
const CERTIFY: f64 = 1e-8;

/// Zeros of `Φ` in `search_box`: local minima of `|Φ|²` on a `grid_n³`
/// lattice refined by damped Newton with a finite-difference Jacobian.
pub fn find_zeros<T: Real>(sampler: &FieldSampler<T>, search_box: &Aabb<T>, grid_n: usize) -> Result<ZeroSearch<T>> {
    if grid_n < 8 {
        return Err(Error::Domain(format!("grid_n must be at least 8, got {grid_n}")));
    }
    let n = grid_n;
    let step = (search_box.hi - search_box.lo) / T::from_usize_lossy(n - 1);
    let node = |i: usize, j: usize, k: usize| {
        search_box.lo
            + Vec3::new(
                step.x * T::from_usize_lossy(i),
                step.y * T::from_usize_lossy(j),
                step.z * T::from_usize_lossy(k),
            )
    };
    // punctures are skipped: they are not zeros
    let mut values = vec![T::infinity(); n * n * n];
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                if let Ok(v) = sampler.higgs_norm(node(i, j, k)) {
                    values[(i * n + j) * n + k] = v * v;
                }
            }
        }
    }
    let mut minima: Vec<(T, Vec3<T>)> = Vec::new();
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let v = values[(i * n + j) * n + k];
                if !v.is_finite() {
                    continue;
                }
                let mut is_min = true;
                let mut max_nb = T::neg_infinity();
                for di in -1i64..=1 {
                    for dj in -1i64..=1 {
                        for dk in -1i64..=1 {
                            if di == 0 && dj == 0 && dk == 0 {
                                continue;
                            }
                            let (a, b, c) = (i as i64 + di, j as i64 + dj, k as i64 + dk);
                            if a < 0 || b < 0 || c < 0 || a >= n as i64 || b >= n as i64 || c >= n as i64 {
                                continue;
                            }
                            let w = values[((a as usize) * n + b as usize) * n + c as usize];
                            if w < v {
                                is_min = false;
                            }
                            if w.is_finite() {
                                max_nb = max_nb.max(w);
                            }
                        }
                    }
                }
                if is_min && v < max_nb {
                    minima.push((v, node(i, j, k)));
                }
            }
        }
    }
    minima.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap_or(std::cmp::Ordering::Equal));
    let mut warnings = Vec::new();
    if minima.len() > MAX_CANDIDATES {
        warnings.push(format!("{} grid minima, refining the lowest {MAX_CANDIDATES}", minima.len()));
        minima.truncate(MAX_CANDIDATES);
    }
    let m = sampler.mass().abs().max(T::min_positive_value());
    let length = search_box.diagonal();
    let mut zeros: Vec<Vec3<T>> = Vec::new();
    for &(_, start) in &minima {
        match newton(sampler, start, length) {
            Ok(z) => {
                let r = sampler.higgs_norm(z)?;
                if r >= T::lit(CERTIFY) * m {
                    warnings.push(format!("candidate near {start} stalled at |Φ| = {r}"));
                    continue;
                }
                if !search_box.contains(z) {
                    continue;
                }
                if zeros.iter().all(|q| q.distance(z) > T::lit(DEDUP_DISTANCE)) {
                    zeros.push(z);
                }
            }
            Err(e) => {
                warn!("zero candidate near {start} dropped: {e}");
                warnings.push(format!("candidate near {start} dropped: {e}"));
            }
        }
    }
    zeros.sort_by(|a, b| a.lex_cmp(b));
    Ok(ZeroSearch {
        zeros,
        candidates: minima.len(),
        warnings,
    })
}

fn residual<T: Real>(sampler: &FieldSampler<T>, x: Vec3<T>) -> Result<Vec3<T>> {
    Ok(sampler.higgs(x)?.as_vec3())
}

fn newton<T: Real>(sampler: &FieldSampler<T>, start: Vec3<T>, length: T) -> Result<Vec3<T>> {
    let mut x = start;
    let mut f = residual(sampler, x)?;
    let mut h = length * T::lit(1e-4);
    let h_min = length * T::lit(1e-13);
    let m = sampler.mass().abs().max(T::min_positive_value());
    for _ in 0..NEWTON_ITERS {
        if f.norm() < T::lit(CERTIFY * 1e-3) * m {
            return Ok(x);
        }
        let mut cols = [Vec3::zero(); 3];
        for (k, col) in cols.iter_mut().enumerate() {
            let mut e = Vec3::zero();
            match k {
                0 => e.x = h,
                1 => e.y = h,
                _ => e.z = h,
            }
            *col = (residual(sampler, x + e)? - residual(sampler, x - e)?) / (h + h);
        }
        let dx = solve3(cols, -f).ok_or_else(|| Error::Divergence("singular Jacobian".into()))?;
        let f0 = f.norm_sq();
        let mut t = T::one();
        let mut accepted = false;
        for _ in 0..60 {
            let trial = x + dx * t;
            if let Ok(ft) = residual(sampler, trial) {
                if ft.norm_sq() < f0 {
                    x = trial;
                    f = ft;
                    accepted = true;
                    break;
                }
            }
            t *= T::half();
        }
        if !accepted {
            // a zero that is a fixed point of rounding is still a zero
            if f.norm() < T::lit(CERTIFY) * m {
                return Ok(x);
            }
            return Err(Error::Divergence(format!("line search failed at {x}, |Φ| = {}", f.norm())));
        }
        if !x.is_finite() || x.distance(start) > length * T::lit(10.0) {
            return Err(Error::Divergence(format!("Newton iterate left the search region from {start}")));
        }
        h = (dx.norm() * t * T::lit(1e-3)).max(h_min).min(length * T::lit(1e-4));
    }
    if f.norm() < T::lit(CERTIFY) * m {
        Ok(x)
    } else {
        Err(Error::Divergence(format!("no convergence in {NEWTON_ITERS} iterations from {start}")))
    }
}

// Cramer's rule for the 3×3 system with the given columns.
fn solve3<T: Real>(c: [Vec3<T>; 3], b: Vec3<T>) -> Option<Vec3<T>> {
    let det = c[0].dot(c[1].cross(c[2]));
    if det == T::zero() || !det.is_finite() {
        return None;
    }
    Some(Vec3::new(
        b.dot(c[1].cross(c[2])) / det,
        c[0].dot(b.cross(c[2])) / det,
        c[0].dot(c[1].cross(b)) / det,
    ))
}

/// Degree of `Φ/|Φ|` on a sphere.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DegreeResult<T> {
    pub degree: i64,
    pub raw: T,
    /// `|raw − degree|`.
    pub residual: T,
    pub min_norm: T,
    pub grid: (usize, usize),
}

/// `(1/4π) ∮ u·(∂_θu × ∂_φu) dθ dφ` for `u = Φ/|Φ|` by the midpoint rule
/// on a latitude–longitude grid.
pub fn degree<T: Real>(
    sampler: &FieldSampler<T>,
    center: Vec3<T>,
    radius: T,
    grid: (usize, usize),
) -> Result<DegreeResult<T>> {
    let (nt, np) = grid;
    if !(radius > T::zero()) || nt < 4 || np < 4 {
        return Err(Error::Domain(format!("bad sphere: radius {radius}, grid {nt}×{np}")));
    }
    let pi = T::PI();
    let dt = pi / T::from_usize_lossy(nt);
    let dp = (pi + pi) / T::from_usize_lossy(np);
    let eps = T::lit(1e-5);
    let point = |th: T, ph: T| center + Vec3::new(th.sin() * ph.cos(), th.sin() * ph.sin(), th.cos()) * radius;
    let scale = sampler.mass().abs();
    let floor = T::lit(1e-9) * scale.max(T::min_positive_value());
    let mut min_norm = T::infinity();
    let unit = |th: T, ph: T, min_norm: &mut T| -> Result<Vec3<T>> {
        let v: Su2Vec<T> = sampler.higgs(point(th, ph))?;
        let v = v.as_vec3();
        let n = v.norm();
        *min_norm = min_norm.min(n);
        if !(n > floor) {
            return Err(Error::UndefinedDegree { min_norm: n.to_f64_lossy() });
        }
        Ok(v / n)
    };
    let mut sum = T::zero();
    for i in 0..nt {
        let th = (T::from_usize_lossy(i) + T::half()) * dt;
        for j in 0..np {
            let ph = (T::from_usize_lossy(j) + T::half()) * dp;
            let u = unit(th, ph, &mut min_norm)?;
            let ut = (unit(th + eps, ph, &mut min_norm)? - unit(th - eps, ph, &mut min_norm)?) / (eps + eps);
            let up = (unit(th, ph + eps, &mut min_norm)? - unit(th, ph - eps, &mut min_norm)?) / (eps + eps);
            sum += u.dot(ut.cross(up));
        }
    }
    let raw = sum * dt * dp / T::four_pi();
    let degree = raw.round().to_i64().unwrap_or(0);
    let residual = (raw - T::lit(degree as f64)).abs();
    if residual > T::lit(0.1) {
        return Err(Error::Resolution {
            residual: residual.to_f64_lossy(),
        });
    }
    Ok(DegreeResult {
        degree,
        raw,
        residual,
        min_norm,
        grid,
    })
}

/// Hausdorff distance between finite point sets; infinite when exactly one is empty.
pub fn hausdorff_distance<T: Real>(a: &[Vec3<T>], b: &[Vec3<T>]) -> T {
    match (a.is_empty(), b.is_empty()) {
        (true, true) => return T::zero(),
        (true, false) | (false, true) => return T::infinity(),
        _ => {}
    }
    let directed = |p: &[Vec3<T>], q: &[Vec3<T>]| {
        p.iter()
            .map(|x| q.iter().map(|y| x.distance(*y)).fold(T::infinity(), T::min))
            .fold(T::zero(), T::max)
    };
    directed(a, b).max(directed(b, a))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::{hedgehog_field, multi_center_higgs, vacuum};
    use crate::profile::RadialProfile;
    use proptest::prelude::*;

    fn unit_box() -> Aabb<f64> {
        Aabb::cube(Vec3::zero(), 2.0).unwrap()
    }

    #[test]
    fn hedgehog_zero_is_its_center() {
        let p = Vec3::new(0.31, -0.2, 0.57);
        for m in [1.0, 16.0, 256.0] {
            let s = hedgehog_field(RadialProfile::bps(m), p);
            let z = find_zeros(&s, &unit_box(), 24).unwrap();
            assert_eq!(z.zeros.len(), 1, "m = {m}: {z:?}");
            assert!(z.zeros[0].distance(p) < 1e-6);
        }
    }

    #[test]
    fn three_centers_recovered() {
        let c = [Vec3::new(-1.0, 0.0, 0.0), Vec3::new(0.5, 0.7, 0.1), Vec3::new(0.3, -0.8, -0.6)];
        let s = multi_center_higgs(&c, 0.3, 1.0).unwrap();
        let z = find_zeros(&s, &unit_box(), 24).unwrap();
        assert_eq!(z.zeros.len(), 3, "{z:?}");
        assert!(hausdorff_distance(&z.zeros, &c) < 1e-6);
    }

    #[test]
    fn vacuum_has_no_zeros() {
        let z = find_zeros(&vacuum(1.0).unwrap(), &unit_box(), 12).unwrap();
        assert!(z.zeros.is_empty());
        let flat = hedgehog_field(RadialProfile::flat(), Vec3::zero());
        assert!(find_zeros(&flat, &unit_box(), 12).unwrap().zeros.is_empty());
    }

    #[test]
    fn coarse_grid_rejected() {
        assert!(find_zeros(&vacuum(1.0).unwrap(), &unit_box(), 7).is_err());
    }

    #[test]
    fn degree_examples() {
        let h = hedgehog_field(RadialProfile::bps(1.0), Vec3::zero());
        for r in [0.5, 1.0, 2.0] {
            let d = degree(&h, Vec3::zero(), r, (128, 256)).unwrap();
            assert_eq!(d.degree, 1);
            assert!(d.residual < 1e-3, "{}", d.residual);
        }
        let d = degree(&vacuum(1.0).unwrap(), Vec3::zero(), 1.0, (64, 128)).unwrap();
        assert_eq!(d.degree, 0);
        let two = multi_center_higgs(&[Vec3::new(-0.5, 0.0, 0.0), Vec3::new(0.5, 0.0, 0.0)], 0.2, 1.0).unwrap();
        let d = degree(&two, Vec3::zero(), 2.0, (128, 256)).unwrap();
        assert_eq!(d.degree, 2);
        assert!(d.residual < 1e-3, "{}", d.residual);
        let d = degree(&two, Vec3::new(0.5, 0.0, 0.0), 0.5, (128, 256)).unwrap();
        assert_eq!(d.degree, 1);
    }

    #[test]
    fn vanishing_field_has_no_degree() {
        let flat = hedgehog_field(RadialProfile::flat(), Vec3::zero());
        let r = degree(&flat, Vec3::zero(), 1.0, (16, 32));
        assert!(matches!(r, Err(Error::UndefinedDegree { .. })), "{r:?}");
    }

    #[test]
    fn hausdorff_cases() {
        let a = [Vec3::<f64>::new(0.0, 0.0, 0.0)];
        let b = [Vec3::new(0.0, 0.0, 1.0), Vec3::new(0.0, 0.0, 0.0)];
        assert_eq!(hausdorff_distance::<f64>(&[], &[]), 0.0);
        assert!(hausdorff_distance(&a, &[]).is_infinite());
        assert!((hausdorff_distance(&a, &b) - 1.0).abs() < 1e-15);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(12))]

        #[test]
        fn zero_finder_inverts_construction(
            a in prop::array::uniform3(-1.5f64..1.5),
            b in prop::array::uniform3(-1.5f64..1.5),
        ) {
            let (a, b) = (Vec3::from_f64(a), Vec3::from_f64(b));
            prop_assume!(a.distance(b) > 0.5);
            let s = multi_center_higgs(&[a, b], 0.2, 2.0).unwrap();
            let z = find_zeros(&s, &unit_box(), 20).unwrap();
            prop_assert_eq!(z.zeros.len(), 2, "{:?}", z);
            prop_assert!(hausdorff_distance(&z.zeros, &[a, b]) < 1e-6);
        }

        #[test]
        fn degree_survives_rescale(zoom in 0.5f64..8.0) {
            let h = hedgehog_field(RadialProfile::bps(2.0), Vec3::new(0.1, 0.0, 0.0));
            let before = degree(&h, Vec3::zero(), 1.0, (48, 96)).unwrap().degree;
            let after = degree(&h.rescale(zoom, Vec3::zero()), Vec3::zero(), zoom, (48, 96)).unwrap().degree;
            prop_assert_eq!(before, after);
        }
    }
}
