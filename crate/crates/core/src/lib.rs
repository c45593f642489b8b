//! Entanglement of pure states, measured by the distance to the closest
//! product state.
//!
//! For a bipartite split the squared distance is `J = 1 − λ`, where `λ` is the
//! largest eigenvalue of `A†A` for the coefficient matrix `A`; the best
//! overlap with a normalized product state is `K = √λ`. With more than two
//! subsystems the optimum is found by alternating single-factor
//! maximization, giving `J = 1 − γ²`.
//!
//! Everything is generic over [`Real`]; the aliases below fix `f64`, for
//! which all documented tolerances hold.
//!
//! ```
//! use entanglement::{bipartite_measure, ket, BipartiteOptions, State};
//!
//! let singlet: State = ket::evaluate(&ket::parse("(|+-> - |-+>)/sqrt(2)")?, true)?;
//! let report = bipartite_measure(&singlet, &[0], &BipartiteOptions::default())?;
//! assert!((report.j - 0.5).abs() < 1e-12);
//! # Ok::<(), entanglement::Error>(())
//! ```

// `!(x > 0)` style guards are used on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
pub mod bipartite;
pub mod error;
pub mod families;
pub mod hermitian;
pub mod io;
pub mod ket;
pub mod multipartite;
pub mod random;
pub mod scalar;
pub mod state;

pub use num_complex::Complex;

pub use bipartite::{
    bipartite_measure, measure_matrix, verify_stationarity, BipartiteOptions, BipartiteReport, Method,
};
pub use error::{Error, Result};
pub use families::{make_named_state, make_perm_phase_state, NamedState};
pub use hermitian::{gram, jacobi_eigen, power_iterate, Eigen, Gram, GramSide, HermitianMatrix, PowerResult};
pub use multipartite::{
    als_measure, als_search, brute_force_product_search, brute_force_refined, cyclic_update, product_overlap,
    AlsOptions, MultipartiteReport, RestartSummary,
};
pub use random::random_state;
pub use scalar::Real;
pub use state::{
    apply_local_unitary, normalize, reshape_bipartite, s2, tensor_product, unreshape_bipartite, CoefficientMatrix,
    Dims, LocalUnitary, PureState,
};

pub type C64 = Complex<f64>;
pub type State = PureState<f64>;
pub type Matrix = CoefficientMatrix<f64>;
pub type Hermitian = HermitianMatrix<f64>;
pub type Unitary = LocalUnitary<f64>;
pub type Bipartite = BipartiteReport<f64>;
pub type Multipartite = MultipartiteReport<f64>;
