//! Real scalar abstraction shared by every solver.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Floating-point type the library is generic over (`f32` or `f64`).
///
/// Tolerances throughout the crate are specified in `f64` terms; [`Real::tol`]
/// widens them to a few machine epsilons when the type cannot reach them.
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + Sum + Debug + Display + Default + Send + Sync + 'static
{
    /// Converts an `f64` literal.
    fn lit(v: f64) -> Self {
        Self::from_f64(v).expect("f64 literal representable")
    }

    /// Converts a count.
    fn from_count(n: usize) -> Self {
        Self::from_usize(n).expect("count representable")
    }

    /// An absolute tolerance: `v`, or 64 ulps at 1.0 if that is larger.
    fn tol(v: f64) -> Self {
        Self::lit(v).max(Self::epsilon() * Self::lit(64.0))
    }

    fn as_f64(self) -> f64 {
        self.to_f64().expect("finite real")
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Squared Euclidean norm of a complex vector.
pub fn norm_sqr<T: Real>(v: &[Complex<T>]) -> T {
    v.iter().map(|z| z.norm_sqr()).sum()
}

pub fn norm<T: Real>(v: &[Complex<T>]) -> T {
    norm_sqr(v).sqrt()
}

/// `⟨a|b⟩`, conjugate-linear in the first argument.
pub fn inner<T: Real>(a: &[Complex<T>], b: &[Complex<T>]) -> Complex<T> {
    a.iter()
        .zip(b)
        .fold(Complex::new(T::zero(), T::zero()), |acc, (x, y)| acc + x.conj() * y)
}

/// `‖a − b‖`.
pub fn distance<T: Real>(a: &[Complex<T>], b: &[Complex<T>]) -> T {
    a.iter().zip(b).map(|(x, y)| (x - y).norm_sqr()).sum::<T>().sqrt()
}

/// Scales `v` to unit norm, returning its former norm. Zero vectors are left alone.
pub fn normalize_in_place<T: Real>(v: &mut [Complex<T>]) -> T {
    let n = norm(v);
    if n > T::zero() {
        let inv = T::one() / n;
        v.iter_mut().for_each(|z| *z = z.scale(inv));
    }
    n
}

/// Unit-modulus phase of `z`; `1` for `z = 0`.
pub fn phase_of<T: Real>(z: Complex<T>) -> Complex<T> {
    let r = z.norm();
    if r > T::zero() {
        z.unscale(r)
    } else {
        Complex::new(T::one(), T::zero())
    }
}

/// Multiplies `v` by the phase that makes its largest-modulus entry real positive.
/// The first entry wins ties so the result is deterministic.
pub fn canonical_phase<T: Real>(v: &mut [Complex<T>]) {
    let mut best = 0;
    let mut best_mod = T::zero();
    for (i, z) in v.iter().enumerate() {
        let m = z.norm_sqr();
        if m > best_mod * (T::one() + T::tol(1e-12)) {
            best = i;
            best_mod = m;
        }
    }
    if best_mod > T::zero() {
        let p = phase_of(v[best]).conj();
        v.iter_mut().for_each(|z| *z = *z * p);
    }
}
