//! Canonical state families.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::state::{Dims, PureState};

/// `A_jk = δ(k, π_j)·exp(iφ_jk)/√n` on dims `[n, n]`.
///
/// `phases` is the row-major `n×n` phase matrix in radians; only the entries
/// at `(j, perm[j])` affect the state.
pub fn make_perm_phase_state<T: Real>(n: usize, perm: &[usize], phases: &[T]) -> Result<PureState<T>> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("n must be at least 2, got {n}")));
    }
    if perm.len() != n {
        return Err(Error::NotAPermutation(n));
    }
    let mut seen = vec![false; n];
    for &p in perm {
        if p >= n || std::mem::replace(&mut seen[p], true) {
            return Err(Error::NotAPermutation(n));
        }
    }
    if phases.len() != n * n {
        return Err(Error::DimensionMismatch(format!(
            "phase matrix has {} entries, expected {}",
            phases.len(),
            n * n
        )));
    }
    let scale = T::one() / T::from_count(n).sqrt();
    let mut amps = vec![Complex::new(T::zero(), T::zero()); n * n];
    for (j, &k) in perm.iter().enumerate() {
        amps[j * n + k] = Complex::from_polar(scale, phases[j * n + k]);
    }
    PureState::new(Dims::new(vec![n, n])?, amps)
}

/// Named qubit states.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NamedState {
    /// `(|01⟩ − |10⟩)/√2`
    BellSinglet,
    /// `(|00⟩ + |11⟩)/√2`
    BellPhiPlus,
    Ghz(usize),
    W(usize),
}

impl NamedState {
    /// Resolves a name with an optional qubit count (required for `ghz` and `w`).
    pub fn from_name(name: &str, n: Option<usize>) -> Result<Self> {
        let need_n = || n.ok_or_else(|| Error::InvalidArgument(format!("`{name}` needs a qubit count")));
        match name.to_ascii_lowercase().as_str() {
            "bell_singlet" | "singlet" => Ok(Self::BellSinglet),
            "bell_phi_plus" | "phi_plus" => Ok(Self::BellPhiPlus),
            "ghz" => Ok(Self::Ghz(need_n()?)),
            "w" => Ok(Self::W(need_n()?)),
            _ => Err(Error::UnknownName(name.to_string())),
        }
    }
}

impl FromStr for NamedState {
    type Err = Error;

    /// Accepts `bell_singlet`, `bell_phi_plus`, `ghz(N)`, `w(N)`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some((name, rest)) = s.split_once('(') {
            let count = rest
                .strip_suffix(')')
                .and_then(|n| n.trim().parse().ok())
                .ok_or_else(|| Error::UnknownName(s.to_string()))?;
            Self::from_name(name.trim(), Some(count))
        } else {
            Self::from_name(s, None)
        }
    }
}

impl fmt::Display for NamedState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::BellSinglet => f.write_str("bell_singlet"),
            Self::BellPhiPlus => f.write_str("bell_phi_plus"),
            Self::Ghz(n) => write!(f, "ghz({n})"),
            Self::W(n) => write!(f, "w({n})"),
        }
    }
}

pub fn make_named_state<T: Real>(name: NamedState) -> Result<PureState<T>> {
    let zero = Complex::new(T::zero(), T::zero());
    let amp = |n: usize| Complex::new(T::one() / T::from_count(n).sqrt(), T::zero());
    match name {
        NamedState::BellSinglet => {
            let h = amp(2);
            PureState::new(Dims::qubits(2)?, vec![zero, h, -h, zero])
        }
        NamedState::BellPhiPlus => {
            let h = amp(2);
            PureState::new(Dims::qubits(2)?, vec![h, zero, zero, h])
        }
        NamedState::Ghz(n) | NamedState::W(n) if n < 3 => {
            Err(Error::InvalidArgument(format!("{name} needs at least 3 qubits")))
        }
        NamedState::Ghz(n) => {
            let dims = Dims::qubits(n)?;
            let mut amps = vec![zero; dims.total()];
            amps[0] = amp(2);
            amps[dims.total() - 1] = amp(2);
            PureState::new(dims, amps)
        }
        NamedState::W(n) => {
            let dims = Dims::qubits(n)?;
            let mut amps = vec![zero; dims.total()];
            for k in 0..n {
                amps[1 << k] = amp(n);
            }
            PureState::new(dims, amps)
        }
    }
}
