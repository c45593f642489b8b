//! Bipartite entanglement measure from the dominant eigenpair of the Gram matrix.
//!
//! For a split of a normalized state into coefficient matrix `A`, the closest
//! product vector is `√λ |ũ⟩⟨ṽ|` with `λ` the largest eigenvalue of `A†A`;
//! the measure is `J = 1 − λ` and the best overlap is `K = √λ`.

use std::fmt;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hermitian::{gram, jacobi_eigen, power_iterate, GramSide};
use crate::scalar::{self, Real};
use crate::state::{normalize, reshape_bipartite, CoefficientMatrix, PureState};

/// Residual bound every converged report satisfies.
pub const STATIONARITY_THRESHOLD: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    #[default]
    Jacobi,
    Power,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Jacobi => "jacobi",
            Method::Power => "power",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BipartiteOptions {
    pub method: Method,
    /// Power-iteration residual tolerance, relative to `S₂(A)`.
    pub tol: f64,
    pub max_iters: usize,
    pub seed: u64,
    /// Rescale the input to unit norm before measuring.
    pub normalize: bool,
}

impl Default for BipartiteOptions {
    fn default() -> Self {
        Self {
            method: Method::Jacobi,
            tol: 1e-10,
            max_iters: 10_000,
            seed: 0,
            normalize: true,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BipartiteReport<T> {
    /// Largest eigenvalue of `A†A`.
    pub lambda: T,
    /// `1 − λ`; for unnormalized input `S₂(A) − λ`.
    pub j: T,
    /// `√λ`; for unnormalized input, the overlap of the normalized state.
    pub k: T,
    /// `S₂(A)` of the matrix that was measured.
    pub norm_sqr: T,
    pub normalized_input: bool,
    pub u_tilde: Vec<Complex<T>>,
    pub v_tilde: Vec<Complex<T>>,
    pub method: Method,
    /// True when power iteration failed and Jacobi produced the result.
    pub power_fallback: bool,
    /// Jacobi sweeps or power-iteration matrix-vector products.
    pub iterations: usize,
    pub stationarity_residual: T,
}

impl<T: Real> BipartiteReport<T> {
    /// `⟨ũ|A|ṽ⟩` for the matrix the report was computed from.
    pub fn achieved_overlap(&self, a: &CoefficientMatrix<T>) -> Complex<T> {
        a.sandwich(&self.u_tilde, &self.v_tilde)
    }
}

/// Measures the entanglement across `left_group | complement`.
pub fn bipartite_measure<T: Real>(
    state: &PureState<T>,
    left_group: &[usize],
    options: &BipartiteOptions,
) -> Result<BipartiteReport<T>> {
    let state = if options.normalize {
        normalize(state)?
    } else if state.norm_sqr() > T::zero() {
        state.clone()
    } else {
        return Err(Error::ZeroState);
    };
    let a = reshape_bipartite(&state, left_group)?;
    let mut report = measure_matrix(&a, options)?;
    report.normalized_input = options.normalize || state.is_normalized();
    Ok(report)
}

/// Bipartite measure of an explicit coefficient matrix, taken as given.
pub fn measure_matrix<T: Real>(a: &CoefficientMatrix<T>, options: &BipartiteOptions) -> Result<BipartiteReport<T>> {
    let norm_sqr = a.s2();
    if !(norm_sqr > T::zero()) {
        return Err(Error::ZeroState);
    }
    let g = gram(a);

    let jacobi_top = || -> Result<(T, Vec<Complex<T>>, usize)> {
        let mut eig = jacobi_eigen(&g.matrix)?;
        Ok((eig.values[0], eig.vectors.swap_remove(0), eig.sweeps))
    };
    let (mut lambda, dominant, iterations, method, power_fallback) = match options.method {
        Method::Jacobi => {
            let (l, v, it) = jacobi_top()?;
            (l, v, it, Method::Jacobi, false)
        }
        Method::Power => {
            let tol = T::tol(options.tol) * norm_sqr;
            match power_iterate(&g.matrix, tol, options.max_iters, options.seed) {
                Ok(r) => (r.lambda, r.vector, r.iterations, Method::Power, false),
                Err(Error::NoConvergence { .. }) => {
                    let (l, v, it) = jacobi_top()?;
                    (l, v, it, Method::Jacobi, true)
                }
                Err(e) => return Err(e),
            }
        }
    };
    lambda = lambda.max(T::zero()).min(norm_sqr);

    // The eigenvector lives on the smaller side; the other factor follows
    // from A ṽ = √λ ũ (or A† ũ = √λ ṽ) and renormalization.
    let (mut u_tilde, mut v_tilde) = match g.side {
        GramSide::Right => {
            let v = dominant;
            let mut u = a.apply(&v);
            scalar::normalize_in_place(&mut u);
            (u, v)
        }
        GramSide::Left => {
            let u = dominant;
            let mut v = a.apply_adjoint(&u);
            scalar::normalize_in_place(&mut v);
            (u, v)
        }
    };
    scalar::canonical_phase(&mut v_tilde);
    let p = scalar::phase_of(a.sandwich(&u_tilde, &v_tilde));
    u_tilde.iter_mut().for_each(|z| *z = *z * p);

    let stationarity_residual = verify_stationarity(a, &u_tilde, &v_tilde, lambda);

    let normalized = (norm_sqr - T::one()).abs() <= T::tol(1e-12);
    let (j, k) = if normalized {
        (T::one() - lambda, lambda.sqrt())
    } else {
        (norm_sqr - lambda, (lambda / norm_sqr).sqrt())
    };

    Ok(BipartiteReport {
        lambda,
        j,
        k,
        norm_sqr,
        normalized_input: normalized,
        u_tilde,
        v_tilde,
        method,
        power_fallback,
        iterations,
        stationarity_residual,
    })
}

/// Residual of the coupled conditions `A†u = v‖u‖²`, `Av = u‖v‖²` in the
/// gauge `u = λ^{1/4} ũ`, `v = λ^{1/4} ṽ`.
pub fn verify_stationarity<T: Real>(
    a: &CoefficientMatrix<T>,
    u_tilde: &[Complex<T>],
    v_tilde: &[Complex<T>],
    lambda: T,
) -> T {
    let scale = lambda.max(T::zero()).sqrt().sqrt();
    let u: Vec<_> = u_tilde.iter().map(|z| z.scale(scale)).collect();
    let v: Vec<_> = v_tilde.iter().map(|z| z.scale(scale)).collect();
    let u_sq = scalar::norm_sqr(&u);
    let v_sq = scalar::norm_sqr(&v);
    let lhs_v: Vec<_> = v.iter().map(|z| z.scale(u_sq)).collect();
    let lhs_u: Vec<_> = u.iter().map(|z| z.scale(v_sq)).collect();
    let r1 = scalar::distance(&a.apply_adjoint(&u), &lhs_v);
    let r2 = scalar::distance(&a.apply(&v), &lhs_u);
    r1.max(r2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{make_named_state, make_perm_phase_state, NamedState};
    use crate::state::{tensor_product, Dims};

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    #[test]
    fn singlet() {
        let s: PureState<f64> = make_named_state(NamedState::BellSinglet).unwrap();
        let r = bipartite_measure(&s, &[0], &BipartiteOptions::default()).unwrap();
        assert!((r.lambda - 0.5).abs() < 1e-12);
        assert!((r.j - 0.5).abs() < 1e-12);
        assert!((r.k - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12);
        assert!(r.stationarity_residual < 1e-12);
    }

    #[test]
    fn product_state_has_zero_measure() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let zero = PureState::single(vec![c(1.0, 0.0), c(0.0, 0.0)]).unwrap();
        let plus = PureState::single(vec![c(h, 0.0), c(h, 0.0)]).unwrap();
        let r = bipartite_measure(&tensor_product(&zero, &plus), &[0], &BipartiteOptions::default()).unwrap();
        assert!(r.j.abs() < 1e-12 && (r.lambda - 1.0).abs() < 1e-12);
        assert!(r.j >= 0.0);
    }

    #[test]
    fn perm_phase_four() {
        let phases: Vec<f64> = (0..16).map(|k| 0.37 * k as f64).collect();
        let s = make_perm_phase_state(4, &[2, 0, 3, 1], &phases).unwrap();
        let r = bipartite_measure(&s, &[0], &BipartiteOptions::default()).unwrap();
        assert!((r.j - 0.75).abs() < 1e-10);
    }

    #[test]
    fn stationarity_of_exact_singlet_solution() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let a = CoefficientMatrix::from_row_major(2, 2, vec![c(0.0, 0.0), c(h, 0.0), c(-h, 0.0), c(0.0, 0.0)]).unwrap();
        let u = [c(1.0, 0.0), c(0.0, 0.0)];
        let v = [c(0.0, 0.0), c(1.0, 0.0)];
        assert!((a.sandwich(&u, &v).re - h).abs() < 1e-15);
        assert!(verify_stationarity(&a, &u, &v, 0.5) <= 1e-12);
    }

    #[test]
    fn power_method_and_fallback() {
        let s: PureState<f64> = crate::random::random_state(&Dims::new(vec![3, 4]).unwrap(), 2);
        let jac = bipartite_measure(&s, &[0], &BipartiteOptions::default()).unwrap();
        let opts = BipartiteOptions {
            method: Method::Power,
            max_iters: 100_000,
            ..Default::default()
        };
        let pow = bipartite_measure(&s, &[0], &opts).unwrap();
        assert_eq!(pow.method, Method::Power);
        assert!((pow.lambda - jac.lambda).abs() < 1e-9);

        let starved = BipartiteOptions {
            method: Method::Power,
            max_iters: 1,
            tol: 1e-15,
            ..Default::default()
        };
        let fb = bipartite_measure(&s, &[0], &starved).unwrap();
        assert!(fb.power_fallback);
        assert_eq!(fb.method, Method::Jacobi);
        assert!((fb.lambda - jac.lambda).abs() < 1e-14);
    }

    #[test]
    fn unnormalized_input_reports_raw_measure() {
        let s: PureState<f64> = make_named_state(NamedState::BellSinglet).unwrap();
        let doubled = PureState::new(s.dims().clone(), s.amplitudes().iter().map(|z| z * 2.0).collect()).unwrap();
        let opts = BipartiteOptions {
            normalize: false,
            ..Default::default()
        };
        let r = bipartite_measure(&doubled, &[0], &opts).unwrap();
        assert!(!r.normalized_input);
        assert!((r.norm_sqr - 4.0).abs() < 1e-12);
        assert!((r.lambda - 2.0).abs() < 1e-12);
        assert!((r.j - 2.0).abs() < 1e-12);
        assert!((r.k - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12);
    }

    #[test]
    fn zero_state_rejected() {
        let z = PureState::<f64>::new(Dims::qubits(2).unwrap(), vec![c(0.0, 0.0); 4]).unwrap();
        let opts = BipartiteOptions {
            normalize: false,
            ..Default::default()
        };
        assert!(matches!(bipartite_measure(&z, &[0], &opts), Err(Error::ZeroState)));
        assert!(matches!(
            bipartite_measure(&z, &[0], &BipartiteOptions::default()),
            Err(Error::ZeroState)
        ));
    }

    #[test]
    fn single_precision_singlet() {
        let s: PureState<f32> = make_named_state(NamedState::BellSinglet).unwrap();
        let r = bipartite_measure(&s, &[0], &BipartiteOptions::default()).unwrap();
        assert!((r.j - 0.5).abs() < 1e-6);
    }
}
