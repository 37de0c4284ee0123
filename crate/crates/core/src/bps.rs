//! Closed-form Prasad–Sommerfield profiles of unit charge.
//!
//! Everything is expressed through the dimensionless radius `x = 2mr`:
//!
//! * `a(r) = x / sinh x`
//! * `φ(r) = m (1/x − coth x)` (negative, `|φ| ↑ m`)
//! * `e(r) = m⁴ E(x)` with `E` the closed-form energy density in the
//!   `|F_A|² + |d_AΦ|²` normalization
//! * `f(r) = F(x)`, the antiderivative of `r² m⁻¹ e` normalized so that
//!   `F(0⁺) = −1` and `F(∞) = 0`.
//!
//! Below the switchover `x < SERIES_SWITCHOVER` the closed forms lose digits
//! to cancellation, so truncated Taylor series are used instead.

use crate::error::{Error, Result};
use crate::scalar::{horner, Real};

/// Switchover `x = 2mr` between series and closed-form evaluation.
pub const SERIES_SWITCHOVER: f64 = 0.25;

// Taylor coefficients in powers of x² (even part only).
#[allow(clippy::excessive_precision)]
mod coeffs {
    pub(super) const A: [f64; 12] = [
        1.0000000000000000000,
        -0.16666666666666666667,
        0.019444444444444444444,
        -0.0020502645502645502645,
        0.00020998677248677248677,
        -0.000021336045641601197157,
        0.0000021633474427786597099,
        -2.1923271344567640864e-7,
        2.2213930853920414559e-8,
        -2.2507674795567867297e-9,
        2.2805107707218211705e-10,
        -2.3106421580996967376e-11,
    ];
    pub(super) const P_OVER_X: [f64; 12] = [
        -0.33333333333333333333,
        0.022222222222222222222,
        -0.0021164021164021164021,
        0.00021164021164021164021,
        -0.000021377799155576933355,
        0.0000021644042808063972085,
        -2.1925947851873777800e-7,
        2.2214608789979679076e-8,
        -2.2507846516808992854e-9,
        2.2805151204592182866e-10,
        -2.3106432599002624097e-11,
        2.3411706819824883959e-12,
    ];
    pub(super) const DP: [f64; 12] = [
        -0.33333333333333333333,
        0.066666666666666666667,
        -0.010582010582010582011,
        0.0014814814814814814815,
        -0.00019240019240019240019,
        0.000023808447088870369294,
        -0.0000028503732207435911140,
        3.3321913184969518614e-7,
        -3.8263339078575287852e-8,
        4.3329787288725147445e-9,
        -4.8523508457905510603e-10,
        5.3846925685597233106e-11,
    ];
    pub(super) const DA_OVER_X: [f64; 12] = [
        -0.33333333333333333333,
        0.077777777777777777778,
        -0.012301587301587301587,
        0.0016798941798941798942,
        -0.00021336045641601197157,
        0.000025960169313343916519,
        -0.0000030692579882394697209,
        3.5542289366272663295e-7,
        -4.0513814632022161135e-8,
        4.5610215414436423409e-9,
        -5.0834127478193328227e-10,
        5.6188089669436672312e-11,
    ];
    pub(super) const E: [f64; 12] = [
        2.6666666666666666667,
        -1.1851851851851851852,
        0.32000000000000000000,
        -0.067724867724867724868,
        0.012380392486212592033,
        -0.0020522687189353856021,
        0.00031722461352090981721,
        -0.000046528220319547550028,
        0.0000065514638380552422937,
        -8.9283255562546139509e-7,
        1.1846323650831391283e-7,
        -1.5371219275351407983e-8,
    ];
    pub(super) const F_PLUS_ONE_OVER_X3: [f64; 12] = [
        0.11111111111111111111,
        -0.029629629629629629630,
        0.0057142857142857142857,
        -0.00094062316284538506761,
        0.00014068627825241581855,
        -0.000019733353066686400020,
        0.0000026435384460075818101,
        -3.4211926705549669138e-7,
        4.3101735776679225616e-8,
        -5.3144794977706035422e-9,
        6.4382193754518430888e-10,
        -7.6856096376757039916e-11,
    ];
}

/// Dimensionless radius `x = 2mr`.
#[inline]
fn dimless<T: Real>(m: T, r: T) -> T {
    T::two() * m * r
}

#[inline]
fn use_series<T: Real>(x: T) -> bool {
    x < T::lit(SERIES_SWITCHOVER)
}

/// `x / sinh x`, overflow-free.
fn x_over_sinh<T: Real>(x: T) -> T {
    if x > T::lit(20.0) {
        let q = (-x).exp();
        T::two() * x * q / (T::one() - q * q)
    } else {
        x / x.sinh()
    }
}

/// `1 / sinh² x`, zero once `sinh x` overflows.
fn csch_sq<T: Real>(x: T) -> T {
    let s = x.sinh();
    T::one() / (s * s)
}

fn coth<T: Real>(x: T) -> T {
    T::one() / x.tanh()
}

/// Connection profile `a_m(r) = 2mr / sinh(2mr)`.
pub fn bps_a<T: Real>(m: T, r: T) -> T {
    let x = dimless(m, r.abs());
    if use_series(x) {
        horner(&coeffs::A, x * x)
    } else {
        x_over_sinh(x)
    }
}

/// Higgs profile `φ_m(r) = ½(1/r − 2m / tanh(2mr))`.
pub fn bps_phi<T: Real>(m: T, r: T) -> T {
    let x = dimless(m, r.abs());
    if use_series(x) {
        m * x * horner(&coeffs::P_OVER_X, x * x)
    } else {
        m * (x.recip() - coth(x))
    }
}

/// `dφ_m/dr = 2m² (1/sinh²x − 1/x²)`.
pub fn bps_phi_dot<T: Real>(m: T, r: T) -> T {
    let x = dimless(m, r.abs());
    let d = if use_series(x) {
        horner(&coeffs::DP, x * x)
    } else {
        csch_sq(x) - (x * x).recip()
    };
    T::two() * m * m * d
}

/// `da_m/dr = 2m (1 − x coth x) / sinh x`.
pub fn bps_a_dot<T: Real>(m: T, r: T) -> T {
    let x = dimless(m, r.abs());
    let d = if use_series(x) {
        x * horner(&coeffs::DA_OVER_X, x * x)
    } else if x > T::lit(20.0) {
        // (1 − x coth x)/sinh x = 2q (1 − x coth x)/(1 − q²), q = e^{−x}
        let q = (-x).exp();
        T::two() * q * (T::one() - x * coth(x)) / (T::one() - q * q)
    } else {
        (T::one() - x * coth(x)) / x.sinh()
    };
    T::two() * m * d
}

/// `a_m² − 1 = x² (1/sinh²x − 1/x²)`, free of cancellation near the origin.
pub fn bps_a_sq_minus_one<T: Real>(m: T, r: T) -> T {
    let x = dimless(m, r.abs());
    if use_series(x) {
        x * x * horner(&coeffs::DP, x * x)
    } else {
        let a = x_over_sinh(x);
        a * a - T::one()
    }
}

/// Dimensionless energy density `E(x) = e / m⁴`.
///
/// For `x ≥ τ` this is the closed form
/// `8 (cosh⁴x + (2x⁴−2)cosh²x − 4x³ sinh x cosh x + x⁴ + 1) / (x⁴ sinh⁴x)`,
/// evaluated after dividing numerator and denominator by `sinh⁴x`.
pub(crate) fn energy_density_dimless<T: Real>(x: T) -> T {
    if use_series(x) {
        return horner(&coeffs::E, x * x);
    }
    let c = coth(x);
    let s2 = csch_sq(x);
    let x3 = x * x * x;
    let x4 = x3 * x;
    let bracket = T::one() + (T::two() * x4 * c * c - T::lit(4.0) * x3 * c) * s2 + x4 * s2 * s2;
    T::lit(8.0) * bracket / x4
}

/// Closed-form energy density `e_m(r)` of the mass-m BPS monopole.
pub fn bps_energy_density<T: Real>(m: T, r: T) -> Result<T> {
    if !(r > T::zero()) {
        return Err(Error::Domain(format!("energy density needs r > 0, got {r}")));
    }
    let m2 = m * m;
    Ok(m2 * m2 * energy_density_dimless(dimless(m, r)))
}

/// Dimensionless antiderivative `F(x)` with `F'(x) = x² E(x) / 8`.
pub(crate) fn antiderivative_dimless<T: Real>(x: T) -> T {
    if use_series(x) {
        return -T::one() + x * x * x * horner(&coeffs::F_PLUS_ONE_OVER_X3, x * x);
    }
    let q = (-T::two() * x).exp();
    let one_minus_q = -(-T::two() * x).exp_m1();
    let x2 = x * x;
    let num = (T::two() * x2 - T::two() * x - T::one()) * q + (T::two() * x2 + T::two() * x + T::two()) * q * q
        - q * q * q;
    -x.recip() - T::two() * num / (one_minus_q * one_minus_q * one_minus_q)
}

/// Antiderivative `f_m(r)` of `r² m⁻¹ e_m(r)`, normalized to vanish at infinity.
///
/// `f_m(0⁺) = −1` and `f_m(∞) = 0`, so `4π m (f_m(r) − f_m(0⁺))` is the
/// energy inside the ball of radius `r` about the zero.
pub fn bps_antiderivative<T: Real>(m: T, r: T) -> Result<T> {
    if !(r > T::zero()) {
        return Err(Error::Domain(format!("antiderivative needs r > 0, got {r}")));
    }
    Ok(antiderivative_dimless(dimless(m, r)))
}

/// Limit `f_m(0⁺)`.
pub fn bps_antiderivative_at_origin<T: Real>() -> T {
    antiderivative_dimless(T::zero())
}

/// `|φ_m| / m = coth x − 1/x` as a function of `x = 2mr`.
fn relative_higgs_norm<T: Real>(x: T) -> T {
    if use_series(x) {
        -x * horner(&coeffs::P_OVER_X, x * x)
    } else {
        coth(x) - x.recip()
    }
}

/// Radius at which `|φ_m|` first reaches `m·δ`.
pub fn bps_r_delta<T: Real>(m: T, delta: T) -> Result<T> {
    if !(delta > T::zero() && delta < T::one()) {
        return Err(Error::Domain(format!("delta must lie in (0, 1), got {delta}")));
    }
    if !(m > T::zero()) {
        return Err(Error::Domain(format!("mass must be positive, got {m}")));
    }
    // coth x − 1/x ≥ 1 − 1/x, so the root lies below 1/(1 − δ)
    let mut lo = T::zero();
    let mut hi = (T::one() - delta).recip() + T::one();
    for _ in 0..400 {
        let mid = (lo + hi) * T::half();
        if mid <= lo || mid >= hi {
            break;
        }
        if relative_higgs_norm(mid) < delta {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok((lo + hi) * T::half() / (T::two() * m))
}

#[cfg(test)]
mod tests {
    use super::*;

    // Independent oracle: mass-m closed forms written directly in r with
    // straightforward hyperbolic functions (no series, no rescaled forms).
    fn naive_phi(m: f64, r: f64) -> f64 {
        0.5 * (1.0 / r - 2.0 * m / (2.0 * m * r).tanh())
    }

    fn naive_a(m: f64, r: f64) -> f64 {
        2.0 * m * r / (2.0 * m * r).sinh()
    }

    fn printed_density_times_two(m: f64, r: f64) -> f64 {
        let x = 2.0 * m * r;
        let (c, s) = (x.cosh(), x.sinh());
        let num = c.powi(4) + (32.0 * m.powi(4) * r.powi(4) - 2.0) * c * c - 32.0 * s * c * m.powi(3) * r.powi(3)
            + 16.0 * m.powi(4) * r.powi(4)
            + 1.0;
        2.0 * 0.25 * num / (s.powi(4) * r.powi(4))
    }

    fn printed_antiderivative_over_m(m: f64, r: f64) -> f64 {
        let e = (4.0 * m * r).exp();
        let f = -1.0 / (2.0 * r)
            - 2.0 * m / (e - 1.0).powi(3)
                * ((8.0 * m * m * r * r - 4.0 * m * r - 1.0) * e * e + (8.0 * m * m * r * r + 4.0 * m * r + 2.0) * e - 1.0);
        f / m
    }

    #[test]
    fn closed_forms_match_naive_formulas_away_from_origin() {
        for &m in &[0.5, 1.0, 2.0, 5.0] {
            for &r in &[0.2, 0.7, 1.0, 3.0] {
                assert!((bps_phi(m, r) - naive_phi(m, r)).abs() < 1e-13 * m);
                assert!((bps_a(m, r) - naive_a(m, r)).abs() < 1e-14);
                let e = bps_energy_density(m, r).unwrap();
                let o = printed_density_times_two(m, r);
                assert!((e - o).abs() < 1e-9 * o.abs().max(1e-300), "m={m} r={r}: {e} vs {o}");
                let f = bps_antiderivative(m, r).unwrap();
                let g = printed_antiderivative_over_m(m, r);
                assert!((f - g).abs() < 1e-11, "m={m} r={r}: {f} vs {g}");
            }
        }
    }

    #[test]
    fn slope_at_origin_is_two_thirds_m_squared() {
        // coth x = 1/x + x/3 − x³/45 + ... gives φ/r → −2m²/3
        for &m in &[1.0_f64, 3.0] {
            let r = 1e-7;
            let slope = bps_phi(m, r) / r;
            assert!((slope + 2.0 * m * m / 3.0).abs() < 1e-10);
        }
    }

    #[test]
    fn regular_at_origin() {
        assert!((bps_a(1.0_f64, 1e-9) - 1.0).abs() < 1e-15);
        assert!(bps_phi(1.0_f64, 1e-9).abs() < 1e-9);
        let e0 = bps_energy_density(1.0_f64, 1e-9).unwrap();
        assert!((e0 - 8.0 / 3.0).abs() < 1e-12, "{e0}");
        let f0 = bps_antiderivative(1.0_f64, 1e-9).unwrap();
        assert!((f0 + 1.0).abs() < 1e-15);
    }

    #[test]
    fn tail_approaches_dirac_model() {
        let phi = bps_phi(1.0_f64, 10.0);
        assert!((phi.abs() - (1.0 - 1.0 / 20.0)).abs() < 1e-8);
    }

    #[test]
    fn r_delta_scaling_and_reference_value() {
        let r1 = bps_r_delta(1.0_f64, 0.5).unwrap();
        // independent bisection on coth(2s) − 1/(2s) = 1/2 with naive formulas
        let (mut lo, mut hi) = (1e-6_f64, 10.0_f64);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if -naive_phi(1.0, mid) < 0.5 {
                lo = mid
            } else {
                hi = mid
            }
        }
        assert!((r1 - lo).abs() < 1e-12, "{r1} vs {lo}");
        assert!((r1 - 0.89).abs() < 0.01, "{r1}");
        for &m in &[2.0, 10.0] {
            let rm = bps_r_delta(m, 0.5).unwrap();
            assert!((m * rm - r1).abs() < 1e-10);
        }
        assert!(bps_r_delta(1.0_f64, 1e-6).unwrap() < 1e-5);
        assert!(bps_r_delta(1.0_f64, 1.0).is_err());
        assert!(bps_r_delta(1.0_f64, 0.0).is_err());
    }

    #[test]
    fn domain_errors() {
        assert!(bps_energy_density(1.0_f64, 0.0).is_err());
        assert!(bps_antiderivative(1.0_f64, -1.0).is_err());
    }

    #[test]
    fn switchover_is_continuous() {
        let tau = SERIES_SWITCHOVER;
        let below = tau * (1.0 - 1e-15);
        let m = 1.0;
        let r_lo = below / 2.0;
        let r_hi = tau / 2.0;
        let pairs: [(&str, fn(f64, f64) -> f64); 5] = [
            ("a", bps_a),
            ("phi", bps_phi),
            ("phi_dot", bps_phi_dot),
            ("a_dot", bps_a_dot),
            ("a2m1", bps_a_sq_minus_one),
        ];
        for (name, f) in pairs {
            let (u, v) = (f(m, r_lo), f(m, r_hi));
            assert!(crate::scalar::rel_diff(u, v, 1e-300) < 1e-12, "{name}: {u} vs {v}");
        }
        let e = |r| bps_energy_density(m, r).unwrap();
        assert!(crate::scalar::rel_diff(e(r_lo), e(r_hi), 1e-300) < 1e-12, "{} vs {}", e(r_lo), e(r_hi));
        let f = |r| bps_antiderivative(m, r).unwrap();
        assert!(crate::scalar::rel_diff(f(r_lo), f(r_hi), 1e-300) < 1e-12);
    }

    #[test]
    fn large_radius_is_finite() {
        for &r in &[50.0_f64, 400.0, 1e4] {
            assert!(bps_a(5.0, r).is_finite());
            assert!(bps_a_dot(5.0, r).is_finite());
            let e = bps_energy_density(5.0, r).unwrap();
            assert!(e.is_finite() && e > 0.0);
            // e ≈ 1/(2r⁴) once the core has decayed
            assert!((e * 2.0 * r.powi(4) - 1.0).abs() < 1e-6, "{e}");
            assert!(bps_antiderivative(5.0, r).unwrap().is_finite());
        }
    }

    #[test]
    fn single_precision_profiles() {
        let a = bps_a(1.0_f32, 0.5);
        assert!((a - naive_a(1.0, 0.5) as f32).abs() < 1e-6);
        let r = bps_r_delta(1.0_f32, 0.5).unwrap();
        assert!((r - 0.89).abs() < 0.01);
    }
}
