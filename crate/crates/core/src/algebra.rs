//! Euclidean 3-vectors and the Lie algebra su(2).
//!
//! su(2) is represented in an orthonormal basis for the invariant inner
//! product `(X, Y) ↦ −2 tr(XY)`. In that basis the norm is the Euclidean
//! norm of the component vector and the bracket is a scaled cross product.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Index, Mul, Neg, Sub, SubAssign};

use serde::{Deserialize, Serialize};

use crate::scalar::Real;

/// Structure constant σ of su(2) in the orthonormal basis:
/// `[e_i, e_j] = σ ε_ijk e_k`.
///
/// The basis `S_k = −(i/2) τ_k` (τ the Pauli matrices) is orthonormal for
/// `−2 tr(XY)` and has `[S_1, S_2] = S_3`, so σ = 1.
pub const STRUCTURE_CONSTANT: f64 = 1.0;

/// Point or displacement in ℝ³.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Vec3<T> {
    pub x: T,
    pub y: T,
    pub z: T,
}

impl<T: Real> Vec3<T> {
    pub const fn new(x: T, y: T, z: T) -> Self {
        Self { x, y, z }
    }

    pub fn zero() -> Self {
        Self::new(T::zero(), T::zero(), T::zero())
    }

    pub fn e1() -> Self {
        Self::new(T::one(), T::zero(), T::zero())
    }

    pub fn e2() -> Self {
        Self::new(T::zero(), T::one(), T::zero())
    }

    pub fn e3() -> Self {
        Self::new(T::zero(), T::zero(), T::one())
    }

    pub fn from_f64(v: [f64; 3]) -> Self {
        Self::new(T::lit(v[0]), T::lit(v[1]), T::lit(v[2]))
    }

    pub fn to_f64(self) -> [f64; 3] {
        [self.x.to_f64_lossy(), self.y.to_f64_lossy(), self.z.to_f64_lossy()]
    }

    pub fn dot(self, o: Self) -> T {
        self.x * o.x + self.y * o.y + self.z * o.z
    }

    pub fn cross(self, o: Self) -> Self {
        Self::new(
            self.y * o.z - self.z * o.y,
            self.z * o.x - self.x * o.z,
            self.x * o.y - self.y * o.x,
        )
    }

    pub fn norm_sq(self) -> T {
        self.dot(self)
    }

    pub fn norm(self) -> T {
        // hypot-style scaling keeps far-away scenario centers finite
        let m = self.x.abs().max(self.y.abs()).max(self.z.abs());
        if m == T::zero() || !m.is_finite() {
            return m;
        }
        let s = self / m;
        m * s.norm_sq().sqrt()
    }

    pub fn distance(self, o: Self) -> T {
        (self - o).norm()
    }

    /// Unit vector, or `None` at the origin.
    pub fn normalized(self) -> Option<Self> {
        let n = self.norm();
        (n > T::zero()).then(|| self / n)
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    pub fn scale(self, s: T) -> Self {
        self * s
    }

    /// Lexicographic comparison used to order report entries.
    pub fn lex_cmp(&self, o: &Self) -> std::cmp::Ordering {
        let c = |a: T, b: T| a.partial_cmp(&b).unwrap_or(std::cmp::Ordering::Equal);
        c(self.x, o.x).then(c(self.y, o.y)).then(c(self.z, o.z))
    }
}

impl<T: Real> Add for Vec3<T> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl<T: Real> AddAssign for Vec3<T> {
    fn add_assign(&mut self, o: Self) {
        *self = *self + o;
    }
}

impl<T: Real> Sub for Vec3<T> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl<T: Real> SubAssign for Vec3<T> {
    fn sub_assign(&mut self, o: Self) {
        *self = *self - o;
    }
}

impl<T: Real> Mul<T> for Vec3<T> {
    type Output = Self;
    fn mul(self, s: T) -> Self {
        Self::new(self.x * s, self.y * s, self.z * s)
    }
}

impl<T: Real> Div<T> for Vec3<T> {
    type Output = Self;
    fn div(self, s: T) -> Self {
        Self::new(self.x / s, self.y / s, self.z / s)
    }
}

impl<T: Real> Neg for Vec3<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.x, -self.y, -self.z)
    }
}

impl<T: Real> Index<usize> for Vec3<T> {
    type Output = T;
    fn index(&self, i: usize) -> &T {
        match i {
            0 => &self.x,
            1 => &self.y,
            2 => &self.z,
            _ => panic!("Vec3 index {i} out of range"),
        }
    }
}

impl<T: Real> fmt::Display for Vec3<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.x, self.y, self.z)
    }
}

/// Element of su(2) in the orthonormal basis.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Su2Vec<T> {
    pub components: [T; 3],
}

impl<T: Real> Su2Vec<T> {
    pub const fn new(c0: T, c1: T, c2: T) -> Self {
        Self {
            components: [c0, c1, c2],
        }
    }

    pub fn zero() -> Self {
        Self::new(T::zero(), T::zero(), T::zero())
    }

    /// Basis element `e_k`, `k ∈ {0, 1, 2}`.
    pub fn basis(k: usize) -> Self {
        let mut c = [T::zero(); 3];
        c[k] = T::one();
        Self { components: c }
    }

    /// Identify a spatial direction with an su(2) element (hedgehog map).
    pub fn from_vec3(v: Vec3<T>) -> Self {
        Self::new(v.x, v.y, v.z)
    }

    pub fn as_vec3(self) -> Vec3<T> {
        let [x, y, z] = self.components;
        Vec3::new(x, y, z)
    }

    /// Invariant inner product `−2 tr(XY)`.
    pub fn inner(self, o: Self) -> T {
        self.as_vec3().dot(o.as_vec3())
    }

    pub fn norm_sq(self) -> T {
        self.inner(self)
    }

    pub fn norm(self) -> T {
        self.as_vec3().norm()
    }

    pub fn scale(self, s: T) -> Self {
        Self::from_vec3(self.as_vec3() * s)
    }

}

impl<T: Real> Add for Su2Vec<T> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::from_vec3(self.as_vec3() + o.as_vec3())
    }
}

impl<T: Real> Sub for Su2Vec<T> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::from_vec3(self.as_vec3() - o.as_vec3())
    }
}

/// Lie bracket `[a, b] = σ (a × b)`.
pub fn bracket<T: Real>(a: Su2Vec<T>, b: Su2Vec<T>) -> Su2Vec<T> {
    Su2Vec::from_vec3(a.as_vec3().cross(b.as_vec3()) * T::lit(STRUCTURE_CONSTANT))
}
