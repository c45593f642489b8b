//! Seeded random states, unit vectors and unitaries.
//!
//! All draws go through [`ChaCha8Rng`] so results are reproducible across
//! platforms for a given seed. Samples are taken in `f64` and converted.

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::scalar::{self, Real};
use crate::state::{Dims, LocalUnitary, PureState};

pub type SeededRng = ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// An independent stream derived from `seed`; used per restart.
pub fn rng_stream(seed: u64, stream: u64) -> SeededRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

pub fn complex_gaussian<T: Real, R: Rng + ?Sized>(rng: &mut R) -> Complex<T> {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex::new(T::lit(re), T::lit(im))
}

pub fn gaussian_vector<T: Real, R: Rng + ?Sized>(len: usize, rng: &mut R) -> Vec<Complex<T>> {
    (0..len).map(|_| complex_gaussian(rng)).collect()
}

/// Uniformly distributed unit vector in `ℂ^len`.
pub fn random_unit_vector<T: Real, R: Rng + ?Sized>(len: usize, rng: &mut R) -> Vec<Complex<T>> {
    loop {
        let mut v = gaussian_vector(len, rng);
        if scalar::normalize_in_place(&mut v) > T::zero() {
            return v;
        }
    }
}

/// Normalized state with i.i.d. complex Gaussian amplitudes.
pub fn random_state<T: Real>(dims: &Dims, seed: u64) -> PureState<T> {
    let mut rng = rng_from_seed(seed);
    let amps = random_unit_vector(dims.total(), &mut rng);
    PureState::new(dims.clone(), amps).expect("length matches dims")
}

/// Haar-random unitary via Gram–Schmidt on a complex Gaussian matrix.
pub fn random_unitary<T: Real, R: Rng + ?Sized>(target: usize, dim: usize, rng: &mut R) -> LocalUnitary<T> {
    let mut cols: Vec<Vec<Complex<T>>> = Vec::with_capacity(dim);
    while cols.len() < dim {
        let mut v = gaussian_vector::<T, _>(dim, rng);
        // two passes of modified Gram-Schmidt
        for _ in 0..2 {
            for q in &cols {
                let proj = scalar::inner(q, &v);
                v.iter_mut().zip(q).for_each(|(x, qi)| *x = *x - qi * proj);
            }
        }
        if scalar::normalize_in_place(&mut v) > T::lit(1e-6) {
            cols.push(v);
        }
    }
    let mut m = vec![Complex::new(T::zero(), T::zero()); dim * dim];
    for (j, col) in cols.iter().enumerate() {
        for (i, z) in col.iter().enumerate() {
            m[i * dim + j] = *z;
        }
    }
    LocalUnitary::new(target, dim, m).expect("Gram-Schmidt output is unitary")
}
