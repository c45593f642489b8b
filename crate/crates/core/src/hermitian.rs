//! Gram matrices and the two Hermitian eigensolvers used by the bipartite measure.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::random;
use crate::scalar::{self, Real};
use crate::state::CoefficientMatrix;

/// Dense complex Hermitian matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct HermitianMatrix<T> {
    dim: usize,
    entries: Vec<Complex<T>>,
}

impl<T: Real> HermitianMatrix<T> {
    /// Rejects input that is not Hermitian within 1e-12 (relative to its largest entry).
    pub fn new(dim: usize, entries: Vec<Complex<T>>) -> Result<Self> {
        if dim == 0 || entries.len() != dim * dim {
            return Err(Error::DimensionMismatch(format!(
                "{} entries cannot form a {dim}x{dim} matrix",
                entries.len()
            )));
        }
        let scale = entries.iter().map(|z| z.norm()).fold(T::one(), T::max);
        let mut worst = T::zero();
        for i in 0..dim {
            for j in i..dim {
                worst = worst.max((entries[i * dim + j] - entries[j * dim + i].conj()).norm());
            }
        }
        if worst > T::tol(1e-12) * scale {
            return Err(Error::InvalidArgument(format!(
                "matrix is not Hermitian (deviation {:e})",
                worst.as_f64()
            )));
        }
        Ok(Self { dim, entries })
    }

    pub fn from_real_diagonal(diag: &[T]) -> Self {
        let dim = diag.len();
        let mut entries = vec![Complex::new(T::zero(), T::zero()); dim * dim];
        for (i, &d) in diag.iter().enumerate() {
            entries[i * dim + i] = Complex::new(d, T::zero());
        }
        Self { dim, entries }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> Complex<T> {
        self.entries[i * self.dim + j]
    }

    pub fn entries(&self) -> &[Complex<T>] {
        &self.entries
    }

    pub fn trace(&self) -> T {
        (0..self.dim).map(|i| self.get(i, i).re).sum()
    }

    pub fn apply(&self, x: &[Complex<T>]) -> Vec<Complex<T>> {
        self.entries
            .chunks(self.dim)
            .map(|row| {
                row.iter()
                    .zip(x)
                    .fold(Complex::new(T::zero(), T::zero()), |acc, (h, xi)| acc + h * xi)
            })
            .collect()
    }
}

/// Which product the Gram matrix holds.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GramSide {
    /// `A†A`, acting on the column (right) side.
    Right,
    /// `AA†`, acting on the row (left) side.
    Left,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Gram<T> {
    pub matrix: HermitianMatrix<T>,
    pub side: GramSide,
}

/// The smaller of `A†A` and `AA†` (`A†A` on ties).
pub fn gram<T: Real>(a: &CoefficientMatrix<T>) -> Gram<T> {
    let (rows, cols) = (a.rows(), a.cols());
    let zero = Complex::new(T::zero(), T::zero());
    let (dim, side) = if cols <= rows {
        (cols, GramSide::Right)
    } else {
        (rows, GramSide::Left)
    };
    let mut entries = vec![zero; dim * dim];
    for i in 0..dim {
        for j in i..dim {
            let z = match side {
                GramSide::Right => (0..rows).fold(zero, |acc, r| acc + a.get(r, i).conj() * a.get(r, j)),
                GramSide::Left => (0..cols).fold(zero, |acc, c| acc + a.get(i, c) * a.get(j, c).conj()),
            };
            if i == j {
                entries[i * dim + i] = Complex::new(z.re, T::zero());
            } else {
                entries[i * dim + j] = z;
                entries[j * dim + i] = z.conj();
            }
        }
    }
    Gram {
        matrix: HermitianMatrix { dim, entries },
        side,
    }
}

/// Full spectrum of a Hermitian matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Eigen<T> {
    /// Descending.
    pub values: Vec<T>,
    /// `vectors[k]` is the unit eigenvector for `values[k]`.
    pub vectors: Vec<Vec<Complex<T>>>,
    pub sweeps: usize,
}

pub const JACOBI_MAX_SWEEPS: usize = 100;
/// Off-diagonal Frobenius mass at which the sweep loop stops, relative to `‖H‖_F`.
pub const JACOBI_THRESHOLD: f64 = 1e-14;

fn off_diagonal_mass<T: Real>(a: &[Complex<T>], n: usize) -> T {
    let mut acc = T::zero();
    for i in 0..n {
        for j in 0..n {
            if i != j {
                acc = acc + a[i * n + j].norm_sqr();
            }
        }
    }
    acc.sqrt()
}

/// One complex Jacobi rotation annihilating `a[p][q]`, accumulated into `v`.
fn rotate<T: Real>(a: &mut [Complex<T>], v: &mut [Complex<T>], n: usize, p: usize, q: usize) {
    let h = a[p * n + q];
    let habs = h.norm();
    if habs == T::zero() {
        return;
    }
    let app = a[p * n + p].re;
    let aqq = a[q * n + q].re;
    let theta = (aqq - app) / (habs + habs);
    let t = if theta.abs() > T::lit(1e150) {
        T::one() / (theta + theta)
    } else {
        let sign = if theta < T::zero() { -T::one() } else { T::one() };
        sign / (theta.abs() + (theta * theta + T::one()).sqrt())
    };
    let c = T::one() / (t * t + T::one()).sqrt();
    let s = t * c;
    // G = diag(1, e^{-iα}) · [[c, s], [-s, c]] on the (p, q) plane
    let e = scalar::phase_of(h).conj();
    let g_pp = Complex::new(c, T::zero());
    let g_pq = Complex::new(s, T::zero());
    let g_qp = e * (-s);
    let g_qq = e * c;

    for k in 0..n {
        let (kp, kq) = (a[k * n + p], a[k * n + q]);
        a[k * n + p] = kp * g_pp + kq * g_qp;
        a[k * n + q] = kp * g_pq + kq * g_qq;
    }
    for k in 0..n {
        let (pk, qk) = (a[p * n + k], a[q * n + k]);
        a[p * n + k] = g_pp.conj() * pk + g_qp.conj() * qk;
        a[q * n + k] = g_pq.conj() * pk + g_qq.conj() * qk;
    }
    let zero = Complex::new(T::zero(), T::zero());
    a[p * n + q] = zero;
    a[q * n + p] = zero;
    a[p * n + p].im = T::zero();
    a[q * n + q].im = T::zero();

    for k in 0..n {
        let (kp, kq) = (v[k * n + p], v[k * n + q]);
        v[k * n + p] = kp * g_pp + kq * g_qp;
        v[k * n + q] = kp * g_pq + kq * g_qq;
    }
}

/// Cyclic Jacobi eigendecomposition.
///
/// Sweeps all `(p, q)` pairs until the off-diagonal Frobenius mass drops below
/// [`JACOBI_THRESHOLD`]` · ‖H‖_F`. Equal eigenvalues keep their original index
/// order after sorting.
pub fn jacobi_eigen<T: Real>(h: &HermitianMatrix<T>) -> Result<Eigen<T>> {
    let n = h.dim;
    let mut a = h.entries.clone();
    let mut v = vec![Complex::new(T::zero(), T::zero()); n * n];
    for i in 0..n {
        v[i * n + i] = Complex::new(T::one(), T::zero());
        a[i * n + i].im = T::zero();
    }
    let frob = scalar::norm(&a);
    let threshold = T::tol(JACOBI_THRESHOLD) * frob;

    let mut sweeps = 0;
    loop {
        let off = off_diagonal_mass(&a, n);
        if off <= threshold {
            break;
        }
        if sweeps == JACOBI_MAX_SWEEPS {
            return Err(Error::NoConvergence {
                solver: "jacobi",
                iterations: sweeps,
                residual: off.as_f64(),
            });
        }
        for p in 0..n {
            for q in p + 1..n {
                rotate(&mut a, &mut v, n, p, q);
            }
        }
        sweeps += 1;
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        a[j * n + j]
            .re
            .partial_cmp(&a[i * n + i].re)
            .expect("finite eigenvalues")
    });
    let values = order.iter().map(|&i| a[i * n + i].re).collect();
    let vectors = order.iter().map(|&j| (0..n).map(|i| v[i * n + j]).collect()).collect();
    Ok(Eigen {
        values,
        vectors,
        sweeps,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct PowerResult<T> {
    pub lambda: T,
    pub vector: Vec<Complex<T>>,
    pub iterations: usize,
}

/// Dominant eigenpair of a positive semidefinite matrix.
///
/// Stops at the first iterate whose residual `‖Hx − λx‖` is at most `tol`,
/// where `λ` is the Rayleigh quotient. The start vector is a seeded complex
/// Gaussian draw.
pub fn power_iterate<T: Real>(h: &HermitianMatrix<T>, tol: T, max_iters: usize, seed: u64) -> Result<PowerResult<T>> {
    if !(tol > T::zero()) {
        return Err(Error::InvalidArgument(
            "power iteration tolerance must be positive".into(),
        ));
    }
    let mut rng = random::rng_from_seed(seed);
    let mut x = random::random_unit_vector::<T, _>(h.dim, &mut rng);
    let mut residual = T::infinity();
    for iter in 1..=max_iters {
        let y = h.apply(&x);
        let lambda = scalar::inner(&x, &y).re;
        residual = y
            .iter()
            .zip(&x)
            .map(|(yi, xi)| (yi - xi.scale(lambda)).norm_sqr())
            .sum::<T>()
            .sqrt();
        if residual <= tol {
            return Ok(PowerResult {
                lambda,
                vector: x,
                iterations: iter,
            });
        }
        let mut next = y;
        if scalar::normalize_in_place(&mut next) == T::zero() {
            // x lies in the null space; H has no positive eigenvalue along it
            return Ok(PowerResult {
                lambda: T::zero(),
                vector: x,
                iterations: iter,
            });
        }
        x = next;
    }
    Err(Error::NoConvergence {
        solver: "power",
        iterations: max_iters,
        residual: residual.as_f64(),
    })
}
