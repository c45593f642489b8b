//! Pure-state representation, bipartite reshaping and local unitaries.
//!
//! Amplitudes are stored row-major over the subsystem dimensions with
//! subsystem 0 as the slowest-varying index, so the basis label `x₀x₁…`
//! sits at flat index `((x₀·d₁ + x₁)·d₂ + …)`.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::{self, Real};

/// Ordered subsystem dimensions, each at least 2.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Dims(Vec<usize>);

impl Dims {
    pub fn new(dims: Vec<usize>) -> Result<Self> {
        if dims.is_empty() {
            return Err(Error::InvalidDims("at least one subsystem is required".into()));
        }
        if let Some(d) = dims.iter().find(|&&d| d < 2) {
            return Err(Error::InvalidDims(format!("subsystem dimension {d} is below 2")));
        }
        dims.iter()
            .try_fold(1usize, |acc, &d| acc.checked_mul(d))
            .ok_or_else(|| Error::InvalidDims("total dimension overflows".into()))?;
        Ok(Self(dims))
    }

    pub fn qubits(n: usize) -> Result<Self> {
        Self::new(vec![2; n])
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    /// Number of subsystems.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn total(&self) -> usize {
        self.0.iter().product()
    }

    /// Row-major multi-index of a flat amplitude index.
    pub fn multi_index(&self, mut flat: usize) -> Vec<usize> {
        let mut out = vec![0; self.0.len()];
        for (slot, &d) in out.iter_mut().zip(&self.0).rev() {
            *slot = flat % d;
            flat /= d;
        }
        out
    }

    pub fn flat_index(&self, multi: &[usize]) -> usize {
        multi.iter().zip(&self.0).fold(0, |acc, (&x, &d)| acc * d + x)
    }

    /// Concatenation `self ++ other`.
    pub fn concat(&self, other: &Dims) -> Dims {
        Dims(self.0.iter().chain(&other.0).copied().collect())
    }
}

impl std::ops::Index<usize> for Dims {
    type Output = usize;
    fn index(&self, i: usize) -> &usize {
        &self.0[i]
    }
}

/// Complex amplitude tensor over [`Dims`].
#[derive(Clone, Debug, PartialEq)]
pub struct PureState<T> {
    dims: Dims,
    amplitudes: Vec<Complex<T>>,
}

impl<T: Real> PureState<T> {
    pub fn new(dims: Dims, amplitudes: Vec<Complex<T>>) -> Result<Self> {
        if amplitudes.len() != dims.total() {
            return Err(Error::AmplitudeCount {
                expected: dims.total(),
                got: amplitudes.len(),
            });
        }
        Ok(Self { dims, amplitudes })
    }

    /// The computational basis state with the given multi-index.
    pub fn basis(dims: Dims, label: &[usize]) -> Result<Self> {
        if label.len() != dims.len() || label.iter().zip(dims.as_slice()).any(|(&x, &d)| x >= d) {
            return Err(Error::DimensionMismatch(format!(
                "label {label:?} does not fit dims {:?}",
                dims.as_slice()
            )));
        }
        let mut amps = vec![Complex::new(T::zero(), T::zero()); dims.total()];
        amps[dims.flat_index(label)] = Complex::new(T::one(), T::zero());
        Self::new(dims, amps)
    }

    /// A single-subsystem state from its components.
    pub fn single(amplitudes: Vec<Complex<T>>) -> Result<Self> {
        let dims = Dims::new(vec![amplitudes.len()])?;
        Self::new(dims, amplitudes)
    }

    pub fn dims(&self) -> &Dims {
        &self.dims
    }

    pub fn amplitudes(&self) -> &[Complex<T>] {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<Complex<T>> {
        self.amplitudes
    }

    pub fn num_subsystems(&self) -> usize {
        self.dims.len()
    }

    pub fn norm_sqr(&self) -> T {
        scalar::norm_sqr(&self.amplitudes)
    }

    pub fn is_normalized(&self) -> bool {
        (self.norm_sqr() - T::one()).abs() <= T::tol(1e-12)
    }

    /// Amplitude at a multi-index label.
    pub fn amplitude(&self, label: &[usize]) -> Complex<T> {
        self.amplitudes[self.dims.flat_index(label)]
    }
}

/// Rescales `state` by one positive real so that `Σ|amp|² = 1`.
pub fn normalize<T: Real>(state: &PureState<T>) -> Result<PureState<T>> {
    let n = state.norm_sqr().sqrt();
    if !(n > T::zero()) {
        return Err(Error::ZeroState);
    }
    let inv = T::one() / n;
    let amplitudes = state.amplitudes.iter().map(|z| z.scale(inv)).collect();
    Ok(PureState {
        dims: state.dims.clone(),
        amplitudes,
    })
}

/// Dense complex matrix of amplitudes for a two-sided grouping of subsystems.
#[derive(Clone, Debug, PartialEq)]
pub struct CoefficientMatrix<T> {
    rows: usize,
    cols: usize,
    entries: Vec<Complex<T>>,
}

impl<T: Real> CoefficientMatrix<T> {
    /// Builds a matrix from row-major entries.
    pub fn from_row_major(rows: usize, cols: usize, entries: Vec<Complex<T>>) -> Result<Self> {
        if rows == 0 || cols == 0 || entries.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries cannot fill a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        Ok(Self { rows, cols, entries })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            entries: vec![Complex::new(T::zero(), T::zero()); rows * cols],
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[Complex<T>] {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> Complex<T> {
        self.entries[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[Complex<T>] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    /// `A v`.
    pub fn apply(&self, v: &[Complex<T>]) -> Vec<Complex<T>> {
        assert_eq!(v.len(), self.cols, "vector length must equal column count");
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(Complex::new(T::zero(), T::zero()), |acc, (a, x)| acc + a * x)
            })
            .collect()
    }

    /// `A† u`.
    pub fn apply_adjoint(&self, u: &[Complex<T>]) -> Vec<Complex<T>> {
        assert_eq!(u.len(), self.rows, "vector length must equal row count");
        let mut out = vec![Complex::new(T::zero(), T::zero()); self.cols];
        for (i, ui) in u.iter().enumerate() {
            for (o, a) in out.iter_mut().zip(self.row(i)) {
                *o = *o + a.conj() * ui;
            }
        }
        out
    }

    /// `⟨u|A|v⟩`.
    pub fn sandwich(&self, u: &[Complex<T>], v: &[Complex<T>]) -> Complex<T> {
        scalar::inner(u, &self.apply(v))
    }

    /// Transposed matrix (the same state with the sides exchanged).
    pub fn transpose(&self) -> Self {
        let mut entries = Vec::with_capacity(self.entries.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                entries.push(self.get(i, j));
            }
        }
        Self {
            rows: self.cols,
            cols: self.rows,
            entries,
        }
    }

    pub fn s2(&self) -> T {
        s2(self)
    }
}

/// `S₂(B) = Tr B†B = Σ|B_ij|²`.
pub fn s2<T: Real>(matrix: &CoefficientMatrix<T>) -> T {
    scalar::norm_sqr(&matrix.entries)
}

/// Sorted, validated left group and its complement.
fn split_groups(n: usize, left_group: &[usize]) -> Result<(Vec<usize>, Vec<usize>)> {
    let mut left = left_group.to_vec();
    left.sort_unstable();
    left.dedup();
    if let Some(&bad) = left.iter().find(|&&k| k >= n) {
        return Err(Error::InvalidSplit(format!(
            "subsystem {bad} does not exist (state has {n})"
        )));
    }
    if left.is_empty() {
        return Err(Error::InvalidSplit("left group is empty".into()));
    }
    if left.len() == n {
        return Err(Error::InvalidSplit("left group covers every subsystem".into()));
    }
    let right = (0..n).filter(|k| !left.contains(k)).collect();
    Ok((left, right))
}

/// For each flat amplitude index, its (row, col) position under the split.
fn split_positions(dims: &Dims, left: &[usize], right: &[usize]) -> (usize, usize, Vec<(usize, usize)>) {
    let group_extent = |group: &[usize]| group.iter().map(|&k| dims[k]).product::<usize>();
    let rows = group_extent(left);
    let cols = group_extent(right);
    let positions = (0..dims.total())
        .map(|flat| {
            let multi = dims.multi_index(flat);
            let sub = |group: &[usize]| group.iter().fold(0, |acc, &k| acc * dims[k] + multi[k]);
            (sub(left), sub(right))
        })
        .collect();
    (rows, cols, positions)
}

/// Arranges amplitudes into a matrix whose rows index the subsystems in
/// `left_group` (ascending) and whose columns index the complement.
pub fn reshape_bipartite<T: Real>(state: &PureState<T>, left_group: &[usize]) -> Result<CoefficientMatrix<T>> {
    let (left, right) = split_groups(state.num_subsystems(), left_group)?;
    let (rows, cols, positions) = split_positions(&state.dims, &left, &right);
    let mut matrix = CoefficientMatrix::zeros(rows, cols);
    for (amp, (r, c)) in state.amplitudes.iter().zip(positions) {
        matrix.entries[r * cols + c] = *amp;
    }
    Ok(matrix)
}

/// Inverse of [`reshape_bipartite`] for the same dims and split.
pub fn unreshape_bipartite<T: Real>(
    matrix: &CoefficientMatrix<T>,
    dims: &Dims,
    left_group: &[usize],
) -> Result<PureState<T>> {
    let (left, right) = split_groups(dims.len(), left_group)?;
    let (rows, cols, positions) = split_positions(dims, &left, &right);
    if rows != matrix.rows || cols != matrix.cols {
        return Err(Error::DimensionMismatch(format!(
            "matrix is {}x{}, split expects {rows}x{cols}",
            matrix.rows, matrix.cols
        )));
    }
    let amplitudes = positions.into_iter().map(|(r, c)| matrix.get(r, c)).collect();
    PureState::new(dims.clone(), amplitudes)
}

/// A unitary acting on one subsystem.
#[derive(Clone, Debug, PartialEq)]
pub struct LocalUnitary<T> {
    target: usize,
    dim: usize,
    matrix: Vec<Complex<T>>,
}

impl<T: Real> LocalUnitary<T> {
    /// `matrix` is row-major `d×d`; rejected unless `U†U = I` within 1e-12.
    pub fn new(target: usize, dim: usize, matrix: Vec<Complex<T>>) -> Result<Self> {
        if matrix.len() != dim * dim {
            return Err(Error::DimensionMismatch(format!(
                "{} entries cannot form a {dim}x{dim} matrix",
                matrix.len()
            )));
        }
        let deviation = unitarity_deviation(dim, &matrix);
        if deviation > T::tol(1e-12) {
            return Err(Error::NotUnitary {
                deviation: deviation.as_f64(),
            });
        }
        Ok(Self { target, dim, matrix })
    }

    pub fn identity(target: usize, dim: usize) -> Self {
        let mut matrix = vec![Complex::new(T::zero(), T::zero()); dim * dim];
        for i in 0..dim {
            matrix[i * dim + i] = Complex::new(T::one(), T::zero());
        }
        Self { target, dim, matrix }
    }

    pub fn target(&self) -> usize {
        self.target
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> Complex<T> {
        self.matrix[i * self.dim + j]
    }
}

/// `max |(U†U − I)_ij|`.
fn unitarity_deviation<T: Real>(dim: usize, m: &[Complex<T>]) -> T {
    let mut worst = T::zero();
    for i in 0..dim {
        for j in 0..dim {
            let mut acc = Complex::new(T::zero(), T::zero());
            for k in 0..dim {
                acc = acc + m[k * dim + i].conj() * m[k * dim + j];
            }
            if i == j {
                acc = acc - T::one();
            }
            worst = worst.max(acc.norm());
        }
    }
    worst
}

/// Contracts the amplitude tensor with `u` on its target index.
pub fn apply_local_unitary<T: Real>(state: &PureState<T>, u: &LocalUnitary<T>) -> Result<PureState<T>> {
    let dims = state.dims.as_slice();
    if u.target >= dims.len() {
        return Err(Error::DimensionMismatch(format!(
            "target subsystem {} does not exist (state has {})",
            u.target,
            dims.len()
        )));
    }
    let d = dims[u.target];
    if d != u.dim {
        return Err(Error::DimensionMismatch(format!(
            "unitary is {}x{} but subsystem {} has dimension {d}",
            u.dim, u.dim, u.target
        )));
    }
    let inner: usize = dims[u.target + 1..].iter().product();
    let outer: usize = dims[..u.target].iter().product();
    let zero = Complex::new(T::zero(), T::zero());
    let mut out = vec![zero; state.amplitudes.len()];
    for o in 0..outer {
        for r in 0..inner {
            let at = |x: usize| (o * d + x) * inner + r;
            for i in 0..d {
                out[at(i)] = (0..d).fold(zero, |acc, j| acc + u.get(i, j) * state.amplitudes[at(j)]);
            }
        }
    }
    PureState::new(state.dims.clone(), out)
}

/// `a ⊗ b`, with `a`'s subsystems first.
pub fn tensor_product<T: Real>(a: &PureState<T>, b: &PureState<T>) -> PureState<T> {
    let amplitudes = a
        .amplitudes
        .iter()
        .flat_map(|x| b.amplitudes.iter().map(move |y| x * y))
        .collect();
    PureState {
        dims: a.dims.concat(&b.dims),
        amplitudes,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    fn real_state(dims: Vec<usize>, amps: &[f64]) -> PureState<f64> {
        PureState::new(Dims::new(dims).unwrap(), amps.iter().map(|&a| c(a, 0.0)).collect()).unwrap()
    }

    #[test]
    fn dims_validation() {
        assert!(Dims::new(vec![]).is_err());
        assert!(Dims::new(vec![2, 1]).is_err());
        let d = Dims::new(vec![2, 3, 4]).unwrap();
        assert_eq!(d.total(), 24);
        assert_eq!(d.multi_index(23), vec![1, 2, 3]);
        assert_eq!(d.flat_index(&[1, 0, 2]), 14);
    }

    #[test]
    fn amplitude_count_checked() {
        let err = PureState::<f64>::new(Dims::qubits(2).unwrap(), vec![c(1.0, 0.0); 3]).unwrap_err();
        assert!(matches!(err, Error::AmplitudeCount { expected: 4, got: 3 }));
    }

    #[test]
    fn normalize_examples() {
        let s = normalize(&real_state(vec![2], &[2.0, 0.0])).unwrap();
        assert_eq!(s.amplitudes(), &[c(1.0, 0.0), c(0.0, 0.0)]);

        let s = normalize(&real_state(vec![2, 2], &[1.0; 4])).unwrap();
        assert!(s.amplitudes().iter().all(|&z| z == c(0.5, 0.0)));

        let h = std::f64::consts::FRAC_1_SQRT_2;
        let bell = real_state(vec![2, 2], &[0.0, h, -h, 0.0]);
        let again = normalize(&bell).unwrap();
        for (a, b) in again.amplitudes().iter().zip(bell.amplitudes()) {
            assert!((a - b).norm() < 1e-15);
        }
    }

    #[test]
    fn normalize_rejects_zero() {
        assert!(matches!(
            normalize(&real_state(vec![2], &[0.0, 0.0])),
            Err(Error::ZeroState)
        ));
    }

    #[test]
    fn s2_examples() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let a = CoefficientMatrix::from_row_major(2, 2, vec![c(0.0, 0.0), c(h, 0.0), c(-h, 0.0), c(0.0, 0.0)]).unwrap();
        assert!((s2(&a) - 1.0).abs() < 1e-15);
        assert_eq!(s2(&CoefficientMatrix::<f64>::zeros(3, 2)), 0.0);
        let id =
            CoefficientMatrix::from_row_major(2, 2, vec![c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]).unwrap();
        assert_eq!(s2(&id), 2.0);
    }

    #[test]
    fn reshape_bell_and_product() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let bell = real_state(vec![2, 2], &[0.0, h, -h, 0.0]);
        let a = reshape_bipartite(&bell, &[0]).unwrap();
        assert_eq!(a.entries(), &[c(0.0, 0.0), c(h, 0.0), c(-h, 0.0), c(0.0, 0.0)]);

        let zero = real_state(vec![2, 2], &[1.0, 0.0, 0.0, 0.0]);
        let a = reshape_bipartite(&zero, &[0]).unwrap();
        assert_eq!(a.entries(), &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]);
    }

    #[test]
    fn reshape_ghz_matches_label_enumeration() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let mut amps = [0.0; 8];
        amps[0] = h;
        amps[7] = h;
        let ghz = real_state(vec![2, 2, 2], &amps);
        let a = reshape_bipartite(&ghz, &[0]).unwrap();
        assert_eq!((a.rows(), a.cols()), (2, 4));
        // Enumerate labels x0 x1 x2 directly: row = x0, col = 2*x1 + x2.
        for x0 in 0..2 {
            for x1 in 0..2 {
                for x2 in 0..2 {
                    assert_eq!(a.get(x0, 2 * x1 + x2), ghz.amplitude(&[x0, x1, x2]));
                }
            }
        }
        assert_eq!(a.get(0, 0), c(h, 0.0));
        assert_eq!(a.get(1, 3), c(h, 0.0));
    }

    #[test]
    fn reshape_noncontiguous_group_order() {
        let dims = Dims::new(vec![2, 3, 2]).unwrap();
        let amps: Vec<_> = (0..12).map(|k| c(k as f64, 0.0)).collect();
        let s = PureState::new(dims, amps).unwrap();
        let a = reshape_bipartite(&s, &[2, 0]).unwrap();
        assert_eq!((a.rows(), a.cols()), (4, 3));
        // row = 2*x0 + x2, col = x1
        let (x0, x2) = (1, 1);
        assert_eq!(a.get(2 * x0 + x2, 2), s.amplitude(&[x0, 2, x2]));
    }

    #[test]
    fn invalid_splits() {
        let s = real_state(vec![2, 2], &[1.0, 0.0, 0.0, 0.0]);
        assert!(matches!(reshape_bipartite(&s, &[]), Err(Error::InvalidSplit(_))));
        assert!(matches!(reshape_bipartite(&s, &[0, 1]), Err(Error::InvalidSplit(_))));
        assert!(matches!(reshape_bipartite(&s, &[2]), Err(Error::InvalidSplit(_))));
    }

    #[test]
    fn local_unitary_examples() {
        let zero = real_state(vec![2, 2], &[1.0, 0.0, 0.0, 0.0]);
        let same = apply_local_unitary(&zero, &LocalUnitary::identity(1, 2)).unwrap();
        assert_eq!(same, zero);

        let x = LocalUnitary::new(0, 2, vec![c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)]).unwrap();
        let flipped = apply_local_unitary(&zero, &x).unwrap();
        assert_eq!(flipped, PureState::basis(Dims::qubits(2).unwrap(), &[1, 0]).unwrap());
    }

    #[test]
    fn local_unitary_errors() {
        let zero = real_state(vec![2, 3], &[1.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
        let bad = LocalUnitary::<f64>::identity(1, 2);
        assert!(matches!(
            apply_local_unitary(&zero, &bad),
            Err(Error::DimensionMismatch(_))
        ));
        let not_unitary = LocalUnitary::new(0, 2, vec![c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]);
        assert!(matches!(not_unitary, Err(Error::NotUnitary { .. })));
    }

    #[test]
    fn tensor_product_examples() {
        let z = PureState::<f64>::basis(Dims::qubits(1).unwrap(), &[0]).unwrap();
        let o = PureState::<f64>::basis(Dims::qubits(1).unwrap(), &[1]).unwrap();
        assert_eq!(
            tensor_product(&z, &o),
            PureState::basis(Dims::qubits(2).unwrap(), &[0, 1]).unwrap()
        );

        let h = std::f64::consts::FRAC_1_SQRT_2;
        let bell = real_state(vec![2, 2], &[0.0, h, -h, 0.0]);
        let t = tensor_product(&bell, &z);
        assert_eq!(t.dims().as_slice(), &[2, 2, 2]);
        assert_eq!(t.amplitude(&[0, 1, 0]), c(h, 0.0));
        assert_eq!(t.amplitude(&[1, 0, 0]), c(-h, 0.0));
        assert_eq!(t.amplitudes().iter().filter(|z| z.norm() > 0.0).count(), 2);
    }
}
