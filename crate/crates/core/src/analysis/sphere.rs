use crate::algebra::Vec3;
use crate::scalar::Real;

/// `n` nearly uniform unit vectors on the Fibonacci spiral.
pub fn fibonacci_directions<T: Real>(n: usize) -> Vec<Vec3<T>> {
    let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
    (0..n)
        .map(|i| {
            let z = 1.0 - (2.0 * i as f64 + 1.0) / n as f64;
            let rho = (1.0 - z * z).sqrt();
            let th = golden * i as f64;
            Vec3::from_f64([rho * th.cos(), rho * th.sin(), z])
        })
        .collect()
}

/// Sample points filling `B_radius(center)`: the center plus shells of directions.
pub(crate) fn ball_samples<T: Real>(center: Vec3<T>, radius: T, shells: usize, dirs: usize) -> Vec<Vec3<T>> {
    let d = fibonacci_directions::<T>(dirs);
    let mut pts = vec![center];
    for k in 1..=shells {
        let s = radius * T::from_usize_lossy(k) / T::from_usize_lossy(shells);
        pts.extend(d.iter().map(|&u| center + u * s));
    }
    pts
}
