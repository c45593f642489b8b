//! N-partite measure via cyclic single-factor maximization.
//!
//! The best product approximation `γ e₁⊗e₂⊗…⊗e_N` of ψ satisfies, for every
//! k, `γ e_k = C_k` where `C_k` is ψ contracted with the conjugates of every
//! factor other than `e_k`. Setting `e_k = C_k/‖C_k‖` is the exact maximizer
//! of the overlap over one factor with the others held fixed, so cycling
//! through k never decreases γ.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::random;
use crate::scalar::{self, Real};
use crate::state::{normalize, PureState};

/// Bound on `max_k ‖C_k − γ e_k‖` for a converged run.
pub const FIXED_POINT_THRESHOLD: f64 = 1e-8;
const MAX_REINITIALIZATIONS: usize = 8;

#[derive(Clone, Debug, PartialEq)]
pub struct AlsOptions {
    pub restarts: usize,
    pub tol: f64,
    pub max_sweeps: usize,
    pub seed: u64,
    pub normalize: bool,
}

impl Default for AlsOptions {
    fn default() -> Self {
        Self {
            restarts: 16,
            tol: 1e-10,
            max_sweeps: 500,
            seed: 0,
            normalize: true,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RestartSummary<T> {
    pub gamma: T,
    pub sweeps: usize,
    pub converged: bool,
    /// Fresh starts after a vanishing contraction.
    pub reinitializations: usize,
    /// γ at the start and after every sweep.
    pub gamma_trace: Vec<T>,
    /// Smallest single-update change in γ observed (negative means a decrease).
    pub worst_step: T,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MultipartiteReport<T> {
    pub gamma: T,
    /// `1 − γ²`; for unnormalized input `‖ψ‖² − γ²`.
    pub j: T,
    pub norm_sqr: T,
    pub normalized_input: bool,
    /// Unit factors; `⟨e₁⊗…⊗e_N|ψ⟩ = γ` is real positive.
    pub factors: Vec<Vec<Complex<T>>>,
    pub restarts_used: usize,
    pub best_restart: usize,
    pub iterations: usize,
    pub fixed_point_residual: T,
    pub converged: bool,
    pub restarts: Vec<RestartSummary<T>>,
}

impl<T: Real> MultipartiteReport<T> {
    /// `(min γ, max γ)` over all restarts.
    pub fn gamma_spread(&self) -> (T, T) {
        self.restarts
            .iter()
            .fold((T::infinity(), T::neg_infinity()), |(lo, hi), r| {
                (lo.min(r.gamma), hi.max(r.gamma))
            })
    }
}

fn check_factors<T: Real>(state: &PureState<T>, factors: &[Vec<Complex<T>>]) -> Result<()> {
    let dims = state.dims().as_slice();
    if factors.len() != dims.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} factors for {} subsystems",
            factors.len(),
            dims.len()
        )));
    }
    for (k, (f, &d)) in factors.iter().zip(dims).enumerate() {
        if f.len() != d {
            return Err(Error::DimensionMismatch(format!(
                "factor {k} has length {} but subsystem {k} has dimension {d}",
                f.len()
            )));
        }
    }
    Ok(())
}

/// ψ contracted with `conj(factors[j])` on every index `j ≠ k`.
fn contract_except<T: Real>(state: &PureState<T>, factors: &[Vec<Complex<T>>], k: usize) -> Vec<Complex<T>> {
    let dims = state.dims().as_slice();
    let zero = Complex::new(T::zero(), T::zero());
    let mut t = state.amplitudes().to_vec();
    // trailing indices, last first: t[o, x] -> Σ_x t[o, x] conj(f[x])
    for j in (k + 1..dims.len()).rev() {
        let d = dims[j];
        let f = &factors[j];
        t = t
            .chunks(d)
            .map(|chunk| chunk.iter().zip(f).fold(zero, |acc, (a, e)| acc + a * e.conj()))
            .collect();
    }
    // leading indices, first first: t[x, r] -> Σ_x conj(f[x]) t[x, r]
    for f in &factors[..k] {
        let rest = t.len() / f.len();
        let mut next = vec![zero; rest];
        for (x, e) in f.iter().enumerate() {
            let w = e.conj();
            for (n, a) in next.iter_mut().zip(&t[x * rest..(x + 1) * rest]) {
                *n = *n + a * w;
            }
        }
        t = next;
    }
    t
}

/// `⟨e₁⊗…⊗e_N|ψ⟩`.
pub fn product_overlap<T: Real>(state: &PureState<T>, factors: &[Vec<Complex<T>>]) -> Result<Complex<T>> {
    check_factors(state, factors)?;
    let last = factors.len() - 1;
    Ok(scalar::inner(&factors[last], &contract_except(state, factors, last)))
}

/// Optimal factor `k` given the others, and the overlap it achieves.
pub fn cyclic_update<T: Real>(
    state: &PureState<T>,
    factors: &[Vec<Complex<T>>],
    k: usize,
) -> Result<(Vec<Complex<T>>, T)> {
    check_factors(state, factors)?;
    if k >= factors.len() {
        return Err(Error::DimensionMismatch(format!("no subsystem {k}")));
    }
    let mut c = contract_except(state, factors, k);
    let gamma = scalar::normalize_in_place(&mut c);
    if !(gamma > T::min_positive_value()) {
        return Err(Error::ZeroContraction { subsystem: k });
    }
    Ok((c, gamma))
}

/// `max_k ‖C_k − γ e_k‖` at the given factors.
pub fn fixed_point_residual<T: Real>(state: &PureState<T>, factors: &[Vec<Complex<T>>], gamma: T) -> Result<T> {
    check_factors(state, factors)?;
    Ok((0..factors.len())
        .map(|k| {
            let c = contract_except(state, factors, k);
            let target: Vec<_> = factors[k].iter().map(|z| z.scale(gamma)).collect();
            scalar::distance(&c, &target)
        })
        .fold(T::zero(), T::max))
}

struct RestartRun<T> {
    summary: RestartSummary<T>,
    factors: Vec<Vec<Complex<T>>>,
    residual: T,
}

fn run_restart<T: Real>(state: &PureState<T>, options: &AlsOptions, index: usize) -> RestartRun<T> {
    let dims = state.dims().as_slice().to_vec();
    let n = dims.len();
    let mut rng = random::rng_stream(options.seed, index as u64);
    let tol = T::tol(options.tol);
    let step_tol = tol.sqrt();
    let residual_tol = T::tol(FIXED_POINT_THRESHOLD);
    let mut reinitializations = 0;

    'attempt: loop {
        let mut factors: Vec<Vec<Complex<T>>> = dims.iter().map(|&d| random::random_unit_vector(d, &mut rng)).collect();
        let mut gamma = product_overlap(state, &factors).expect("shapes match").norm();
        let mut trace = vec![gamma];
        let mut worst_step = T::infinity();
        let mut residual = T::infinity();

        for sweep in 1..=options.max_sweeps {
            let before = gamma;
            let mut max_change = T::zero();
            for k in 0..n {
                match cyclic_update(state, &factors, k) {
                    Ok((f, g)) => {
                        worst_step = worst_step.min(g - gamma);
                        max_change = max_change.max(scalar::distance(&f, &factors[k]));
                        factors[k] = f;
                        gamma = g;
                    }
                    Err(_) if reinitializations < MAX_REINITIALIZATIONS => {
                        reinitializations += 1;
                        continue 'attempt;
                    }
                    Err(_) => break 'attempt,
                }
            }
            trace.push(gamma);
            if (gamma - before).abs() <= tol && max_change <= step_tol {
                residual = fixed_point_residual(state, &factors, gamma).expect("shapes match");
                if residual <= residual_tol {
                    return RestartRun {
                        summary: RestartSummary {
                            gamma,
                            sweeps: sweep,
                            converged: true,
                            reinitializations,
                            gamma_trace: trace,
                            worst_step,
                        },
                        factors,
                        residual,
                    };
                }
            }
        }
        if residual.is_infinite() {
            residual = fixed_point_residual(state, &factors, gamma).expect("shapes match");
        }
        return RestartRun {
            summary: RestartSummary {
                gamma,
                sweeps: options.max_sweeps,
                converged: false,
                reinitializations,
                gamma_trace: trace,
                worst_step,
            },
            factors,
            residual,
        };
    }
    // every attempt hit a vanishing contraction
    RestartRun {
        summary: RestartSummary {
            gamma: T::zero(),
            sweeps: 0,
            converged: false,
            reinitializations,
            gamma_trace: Vec::new(),
            worst_step: T::zero(),
        },
        factors: dims
            .iter()
            .map(|&d| {
                let mut e = vec![Complex::new(T::zero(), T::zero()); d];
                e[0] = Complex::new(T::one(), T::zero());
                e
            })
            .collect(),
        residual: T::infinity(),
    }
}

/// Runs every restart and reports the best, converged or not.
///
/// Converged restarts are preferred; among them the largest γ wins, with the
/// lowest restart index breaking ties (γ equal within 1e-14).
pub fn als_search<T: Real>(state: &PureState<T>, options: &AlsOptions) -> Result<MultipartiteReport<T>> {
    if state.num_subsystems() < 2 {
        return Err(Error::InvalidArgument(
            "the multipartite measure needs at least 2 subsystems".into(),
        ));
    }
    if options.restarts == 0 {
        return Err(Error::InvalidArgument("at least one restart is required".into()));
    }
    if !(options.tol > 0.0) {
        return Err(Error::InvalidArgument("tolerance must be positive".into()));
    }
    let state = if options.normalize {
        normalize(state)?
    } else if state.norm_sqr() > T::zero() {
        state.clone()
    } else {
        return Err(Error::ZeroState);
    };

    let runs: Vec<RestartRun<T>> = (0..options.restarts).map(|r| run_restart(&state, options, r)).collect();
    let any_converged = runs.iter().any(|r| r.summary.converged);
    let mut best = None::<usize>;
    for (i, run) in runs.iter().enumerate() {
        if any_converged && !run.summary.converged {
            continue;
        }
        // values within a few ulps count as ties
        if best.is_none_or(|b| run.summary.gamma > runs[b].summary.gamma + T::tol(1e-14)) {
            best = Some(i);
        }
    }
    let best = best.expect("at least one restart");

    let mut factors = runs[best].factors.clone();
    for f in factors.iter_mut().skip(1) {
        scalar::canonical_phase(f);
    }
    let overlap = product_overlap(&state, &factors)?;
    let p = scalar::phase_of(overlap);
    factors[0].iter_mut().for_each(|z| *z = *z * p);
    let gamma = overlap.norm();

    let norm_sqr = state.norm_sqr();
    let normalized = (norm_sqr - T::one()).abs() <= T::tol(1e-12);
    let j = if normalized {
        T::one() - gamma * gamma
    } else {
        norm_sqr - gamma * gamma
    };

    Ok(MultipartiteReport {
        gamma,
        j: j.max(T::zero()),
        norm_sqr,
        normalized_input: normalized,
        factors,
        restarts_used: options.restarts,
        best_restart: best,
        iterations: runs[best].summary.sweeps,
        fixed_point_residual: runs[best].residual,
        converged: runs[best].summary.converged,
        restarts: runs.into_iter().map(|r| r.summary).collect(),
    })
}

/// Like [`als_search`], but a run where no restart converged is an error.
pub fn als_measure<T: Real>(state: &PureState<T>, options: &AlsOptions) -> Result<MultipartiteReport<T>> {
    let report = als_search(state, options)?;
    if report.converged {
        Ok(report)
    } else {
        Err(Error::NoRestartConverged {
            restarts: report.restarts_used,
            best_gamma: report.gamma.as_f64(),
        })
    }
}

/// Sample points of a Bloch-sphere grid: θ ∈ [0, π/2] inclusive, φ ∈ [0, 2π).
fn qubit<T: Real>(theta: T, phi: T) -> [Complex<T>; 2] {
    [
        Complex::new(theta.cos(), T::zero()),
        Complex::from_polar(theta.sin(), phi),
    ]
}

/// Best overlap over the qubits after the first, given the first factor.
///
/// One remaining qubit: the norm of the contracted vector. Two: the largest
/// singular value of the contracted 2×2 matrix, in closed form.
fn rest_optimum<T: Real>(amps: &[Complex<T>], e: &[Complex<T>; 2]) -> T {
    let half = amps.len() / 2;
    let m: Vec<Complex<T>> = (0..half)
        .map(|r| amps[r] * e[0].conj() + amps[half + r] * e[1].conj())
        .collect();
    match m.len() {
        1 => m[0].norm(),
        2 => (m[0].norm_sqr() + m[1].norm_sqr()).sqrt(),
        _ => {
            let fro = m.iter().map(|z| z.norm_sqr()).sum::<T>();
            let det = (m[0] * m[3] - m[1] * m[2]).norm();
            let disc = (fro * fro - T::lit(4.0) * det * det).max(T::zero());
            ((fro + disc.sqrt()) / T::lit(2.0)).sqrt()
        }
    }
}

fn check_qubit_shape<T: Real>(state: &PureState<T>, grid: usize) -> Result<()> {
    let dims = state.dims().as_slice();
    if dims.len() > 3 || dims.iter().any(|&d| d != 2) {
        return Err(Error::UnsupportedShape(format!(
            "brute-force search needs at most 3 qubits, got dims {dims:?}"
        )));
    }
    if grid < 16 {
        return Err(Error::UnsupportedShape(format!(
            "grid needs at least 16 points per angle, got {grid}"
        )));
    }
    Ok(())
}

fn grid_best<T: Real>(amps: &[Complex<T>], theta: (T, T), phi: (T, T), points: usize, closed_phi: bool) -> (T, T, T) {
    let half_pi = T::FRAC_PI_2();
    let mut best = (T::neg_infinity(), T::zero(), T::zero());
    let theta_step = (theta.1 - theta.0) / T::from_count(points - 1);
    let phi_step = if closed_phi {
        (phi.1 - phi.0) / T::from_count(points - 1)
    } else {
        (phi.1 - phi.0) / T::from_count(points)
    };
    for i in 0..points {
        let t = (theta.0 + theta_step * T::from_count(i)).max(T::zero()).min(half_pi);
        for j in 0..points {
            let p = phi.0 + phi_step * T::from_count(j);
            let value = rest_optimum(amps, &qubit(t, p));
            if value > best.0 {
                best = (value, t, p);
            }
        }
    }
    best
}

/// Exhaustive grid search for the best product overlap of up to three qubits.
///
/// The first qubit's factor `(cos θ, e^{iφ} sin θ)` is scanned over a
/// `points × points` grid with θ ∈ [0, π/2] (endpoints included) and
/// φ ∈ [0, 2π). For each grid point the remaining qubits are optimized in
/// closed form, so the result is a lower bound on γ that tightens as the grid
/// is refined.
pub fn brute_force_product_search<T: Real>(state: &PureState<T>, points: usize) -> Result<T> {
    check_qubit_shape(state, points)?;
    let amps = state.amplitudes();
    let (best, _, _) = grid_best(amps, (T::zero(), T::FRAC_PI_2()), (T::zero(), T::TAU()), points, false);
    Ok(best)
}

/// Grid search followed by `levels` rounds of zooming the grid onto the best
/// point found so far. Converges to the grid-refinement limit of
/// [`brute_force_product_search`].
pub fn brute_force_refined<T: Real>(state: &PureState<T>, points: usize, levels: usize) -> Result<T> {
    check_qubit_shape(state, points)?;
    let amps = state.amplitudes();
    let mut half_theta = T::FRAC_PI_2() / T::from_count(points - 1);
    let mut half_phi = T::TAU() / T::from_count(points);
    let mut best = grid_best(amps, (T::zero(), T::FRAC_PI_2()), (T::zero(), T::TAU()), points, false);
    for _ in 0..levels {
        let candidate = grid_best(
            amps,
            (best.1 - half_theta, best.1 + half_theta),
            (best.2 - half_phi, best.2 + half_phi),
            points,
            true,
        );
        if candidate.0 >= best.0 {
            best = candidate;
        }
        let shrink = T::lit(4.0) / T::from_count(points - 1);
        half_theta = half_theta * shrink;
        half_phi = half_phi * shrink;
    }
    Ok(best.0)
}
