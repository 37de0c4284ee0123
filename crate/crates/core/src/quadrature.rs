//! One-dimensional quadrature: adaptive Gauss–Kronrod (7, 15) on finite
//! intervals, breakpoint splitting, a tangent map for semi-infinite tails,
//! and fixed Gauss–Legendre rules for tensor-product cubature.

#![allow(clippy::excessive_precision)]

use crate::error::{Error, Result};
use crate::scalar::Real;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

// Gauss weights for the odd-indexed Kronrod nodes XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// Accuracy request for the adaptive integrators.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadConfig<T> {
    pub abs_tol: T,
    pub rel_tol: T,
    pub max_subdivisions: usize,
}

impl<T: Real> Default for QuadConfig<T> {
    fn default() -> Self {
        Self {
            abs_tol: T::lit(1e-13),
            rel_tol: T::lit(1e-11),
            max_subdivisions: 2000,
        }
    }
}

impl<T: Real> QuadConfig<T> {
    /// Same request with both tolerances multiplied by `factor`.
    pub fn loosened(self, factor: T) -> Self {
        Self {
            abs_tol: self.abs_tol * factor,
            rel_tol: self.rel_tol * factor,
            ..self
        }
    }

    pub fn with_rel_tol(self, rel_tol: T) -> Self {
        Self { rel_tol, ..self }
    }
}

/// Integral value with its error estimate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Estimate<T> {
    pub value: T,
    pub error: T,
}

struct Segment<T> {
    a: T,
    b: T,
    value: T,
    error: T,
}

fn gk15<T: Real, F: Fn(T) -> T>(f: &F, a: T, b: T) -> (T, T) {
    let center = (a + b) * T::half();
    let half = (b - a) * T::half();
    let fc = f(center);
    let mut kronrod = fc * T::lit(WGK[7]);
    let mut gauss = fc * T::lit(WG[3]);
    for j in 0..7 {
        let dx = half * T::lit(XGK[j]);
        let pair = f(center - dx) + f(center + dx);
        kronrod += pair * T::lit(WGK[j]);
        if j % 2 == 1 {
            gauss += pair * T::lit(WG[j / 2]);
        }
    }
    let value = kronrod * half;
    let error = ((kronrod - gauss) * half).abs();
    (value, error)
}

/// Adaptive Gauss–Kronrod integral of `f` over `[a, b]`.
///
/// Subdivides the segment with the largest error estimate until the total
/// estimate falls below `max(abs_tol, rel_tol·|I|)`. The raw Kronrod–Gauss
/// difference is used as the error estimate.
pub fn integrate<T: Real, F: Fn(T) -> T>(f: F, a: T, b: T, cfg: &QuadConfig<T>) -> Result<Estimate<T>> {
    if a == b {
        return Ok(Estimate {
            value: T::zero(),
            error: T::zero(),
        });
    }
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::Domain(format!("integration bounds must be finite, got [{a}, {b}]")));
    }
    let (v, e) = gk15(&f, a, b);
    let mut segments = vec![Segment { a, b, value: v, error: e }];
    let mut total = v;
    let mut total_err = e;
    loop {
        if !total.is_finite() {
            return Err(Error::Divergence(format!("non-finite integrand on [{a}, {b}]")));
        }
        let target = cfg.abs_tol.max(cfg.rel_tol * total.abs());
        if total_err <= target {
            break;
        }
        if segments.len() >= cfg.max_subdivisions {
            log::debug!("quadrature subdivision limit reached: err {total_err} > {target}");
            break;
        }
        let (idx, _) = segments
            .iter()
            .enumerate()
            .fold((0, T::neg_infinity()), |(bi, be), (i, s)| if s.error > be { (i, s.error) } else { (bi, be) });
        let seg = segments.swap_remove(idx);
        let mid = (seg.a + seg.b) * T::half();
        if mid <= seg.a || mid >= seg.b {
            // interval exhausted at working precision
            segments.push(Segment { error: T::zero(), ..seg });
            total_err -= seg.error;
            continue;
        }
        let (v1, e1) = gk15(&f, seg.a, mid);
        let (v2, e2) = gk15(&f, mid, seg.b);
        total += v1 + v2 - seg.value;
        total_err += e1 + e2 - seg.error;
        segments.push(Segment { a: seg.a, b: mid, value: v1, error: e1 });
        segments.push(Segment { a: mid, b: seg.b, value: v2, error: e2 });
    }
    // re-sum to shed the drift of incremental updates
    let value = segments.iter().fold(T::zero(), |acc, s| acc + s.value);
    let error = segments.iter().fold(T::zero(), |acc, s| acc + s.error);
    Ok(Estimate { value, error })
}

/// Integrate over consecutive segments of a sorted breakpoint list.
pub fn integrate_breaks<T: Real, F: Fn(T) -> T>(f: F, breaks: &[T], cfg: &QuadConfig<T>) -> Result<Estimate<T>> {
    let mut acc = Estimate {
        value: T::zero(),
        error: T::zero(),
    };
    for w in breaks.windows(2) {
        let est = integrate(&f, w[0], w[1], cfg)?;
        acc.value += est.value;
        acc.error += est.error;
    }
    Ok(acc)
}

/// `∫_a^∞ f`, mapped to `[0, 1)` by `r = a + tan(πu/2)`.
pub fn integrate_to_infinity<T: Real, F: Fn(T) -> T>(f: F, a: T, cfg: &QuadConfig<T>) -> Result<Estimate<T>> {
    let half_pi = T::FRAC_PI_2();
    let mapped = |u: T| {
        let t = half_pi * u;
        let c = t.cos();
        if c <= T::zero() {
            return T::zero();
        }
        let r = a + t.tan();
        let v = f(r) * half_pi / (c * c);
        if v.is_finite() {
            v
        } else {
            T::zero()
        }
    };
    integrate(mapped, T::zero(), T::one(), cfg)
}

/// n-point Gauss–Legendre nodes and weights on [-1, 1].
pub fn gauss_legendre<T: Real>(n: usize) -> (Vec<T>, Vec<T>) {
    assert!(n >= 1, "Gauss–Legendre rule needs at least one node");
    let mut nodes = vec![0.0_f64; n];
    let mut weights = vec![0.0_f64; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0_f64, x);
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            let p = if n == 1 { x } else { p1 };
            let pm1 = if n == 1 { 1.0 } else { p0 };
            dp = nf * (x * p - pm1) / (x * x - 1.0);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (
        nodes.into_iter().map(T::lit).collect(),
        weights.into_iter().map(T::lit).collect(),
    )
}
