//! Dense complex linear algebra for registers of small finite-dimensional
//! subsystems.
//!
//! A register is described by the ordered list of its subsystem dimensions;
//! basis states are flattened row-major, i.e. subsystem 0 varies slowest.
//! Everything is immutable after construction and validated on the way in,
//! so downstream code can rely on normalization, hermiticity and positivity
//! without re-checking.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::tol;

pub type C64 = Complex64;

/// Flat length of a register with the given subsystem dimensions.
pub(crate) fn total_dim(dims: &[usize]) -> usize {
    dims.iter().product()
}

/// Row-major strides for a dimension list (subsystem 0 varies slowest).
pub(crate) fn strides(dims: &[usize]) -> Vec<usize> {
    let mut s = vec![1usize; dims.len()];
    for i in (0..dims.len().saturating_sub(1)).rev() {
        s[i] = s[i + 1] * dims[i + 1];
    }
    s
}

/// Decompose a flat index into per-subsystem digits.
pub(crate) fn unflatten(mut index: usize, dims: &[usize]) -> Vec<usize> {
    let mut digits = vec![0usize; dims.len()];
    for i in (0..dims.len()).rev() {
        digits[i] = index % dims[i];
        index /= dims[i];
    }
    digits
}

/// Flatten per-subsystem digits into a flat index.
pub(crate) fn flatten(digits: &[usize], dims: &[usize]) -> usize {
    digits
        .iter()
        .zip(dims)
        .fold(0, |acc, (&d, &dim)| acc * dim + d)
}

fn ensure_finite_slice(entries: &[C64], what: &'static str) -> Result<()> {
    if entries.iter().all(|c| c.re.is_finite() && c.im.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFinite(what))
    }
}

/// A complex amplitude vector over a tensor-product register.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    dims: Vec<usize>,
    amps: Vec<C64>,
}

impl StateVector {
    /// Build a state from raw amplitudes; the length must equal the product
    /// of `dims` and every entry must be finite. No normalization is imposed.
    pub fn new(dims: Vec<usize>, amps: Vec<C64>) -> Result<Self> {
        if dims.is_empty() || dims.iter().any(|&d| d == 0) {
            return Err(Error::DimensionMismatch(
                "state needs at least one subsystem of dimension ≥ 1".into(),
            ));
        }
        if amps.len() != total_dim(&dims) {
            return Err(Error::DimensionMismatch(format!(
                "amplitude vector of length {} for register of dimension {}",
                amps.len(),
                total_dim(&dims)
            )));
        }
        ensure_finite_slice(&amps, "state vector")?;
        Ok(Self { dims, amps })
    }

    /// The computational basis state |digits⟩ of the given register.
    pub fn basis(dims: Vec<usize>, digits: &[usize]) -> Result<Self> {
        if digits.len() != dims.len() || digits.iter().zip(&dims).any(|(&d, &dim)| d >= dim) {
            return Err(Error::DimensionMismatch(format!(
                "basis digits {digits:?} out of range for dims {dims:?}"
            )));
        }
        let mut amps = vec![C64::ZERO; total_dim(&dims)];
        amps[flatten(digits, &dims)] = C64::ONE;
        Ok(Self { dims, amps })
    }

    /// A single-subsystem state from raw amplitudes, rescaled to unit norm.
    pub fn single(amps: Vec<C64>) -> Result<Self> {
        let dim = amps.len();
        Self::new(vec![dim], amps)?.normalized()
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn total_dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amps(&self) -> &[C64] {
        &self.amps
    }

    pub fn amp(&self, index: usize) -> C64 {
        self.amps[index]
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn is_normalized(&self) -> bool {
        (self.norm() - 1.0).abs() <= tol::ALGEBRAIC
    }

    fn ensure_normalized(&self) -> Result<()> {
        let norm = self.norm();
        if (norm - 1.0).abs() <= tol::ALGEBRAIC {
            Ok(())
        } else {
            Err(Error::NotNormalized { norm })
        }
    }

    /// Rescale to unit norm; fails on (numerically) zero vectors.
    pub fn normalized(&self) -> Result<Self> {
        let norm = self.norm();
        if norm <= tol::NEGLIGIBLE {
            return Err(Error::NotNormalized { norm });
        }
        let amps = self.amps.iter().map(|c| c / norm).collect();
        Ok(Self {
            dims: self.dims.clone(),
            amps,
        })
    }

    /// Inner product ⟨self|other⟩.
    pub fn inner(&self, other: &Self) -> Result<C64> {
        if self.dims != other.dims {
            return Err(Error::DimensionMismatch(format!(
                "inner product between registers {:?} and {:?}",
                self.dims, other.dims
            )));
        }
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// Kronecker product; dimension lists are concatenated.
    pub fn tensor(&self, other: &Self) -> Self {
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&other.dims);
        let mut amps = Vec::with_capacity(self.amps.len() * other.amps.len());
        for a in &self.amps {
            for b in &other.amps {
                amps.push(a * b);
            }
        }
        Self { dims, amps }
    }

    /// Reorder subsystems: new subsystem `i` is old subsystem `perm[i]`.
    pub fn permute_subsystems(&self, perm: &[usize]) -> Result<Self> {
        let n = self.dims.len();
        let mut seen = vec![false; n];
        if perm.len() != n || perm.iter().any(|&p| p >= n || std::mem::replace(&mut seen[p], true))
        {
            return Err(Error::InvalidSubsystem(format!(
                "{perm:?} is not a permutation of 0..{n}"
            )));
        }
        let new_dims: Vec<usize> = perm.iter().map(|&p| self.dims[p]).collect();
        let mut amps = vec![C64::ZERO; self.amps.len()];
        for (old_flat, &amp) in self.amps.iter().enumerate() {
            let old_digits = unflatten(old_flat, &self.dims);
            let new_digits: Vec<usize> = perm.iter().map(|&p| old_digits[p]).collect();
            amps[flatten(&new_digits, &new_dims)] = amp;
        }
        Ok(Self {
            dims: new_dims,
            amps,
        })
    }

    /// Apply an operator on a subset of subsystems (by position) to this
    /// state; the operator's dimension list must match the targeted
    /// positions in order.
    pub fn apply_on(&self, op: &Operator, targets: &[usize]) -> Result<Self> {
        let n = self.dims.len();
        let mut seen = vec![false; n];
        if targets
            .iter()
            .any(|&t| t >= n || std::mem::replace(&mut seen[t], true))
        {
            return Err(Error::InvalidSubsystem(format!(
                "targets {targets:?} out of range or repeated for register {:?}",
                self.dims
            )));
        }
        let target_dims: Vec<usize> = targets.iter().map(|&t| self.dims[t]).collect();
        if op.dims() != target_dims.as_slice() {
            return Err(Error::DimensionMismatch(format!(
                "operator on {:?} applied to subsystems of dims {:?}",
                op.dims(),
                target_dims
            )));
        }

        let full_strides = strides(&self.dims);
        let target_strides: Vec<usize> = targets.iter().map(|&t| full_strides[t]).collect();
        let rest: Vec<usize> = (0..n).filter(|i| !targets.contains(i)).collect();
        let rest_dims: Vec<usize> = rest.iter().map(|&i| self.dims[i]).collect();
        let rest_strides: Vec<usize> = rest.iter().map(|&i| full_strides[i]).collect();

        let m = total_dim(&target_dims);
        let rest_count = total_dim(&rest_dims);

        // Precompute the flat offset of every target basis index.
        let target_offsets: Vec<usize> = (0..m)
            .map(|t| {
                let digits = unflatten(t, &target_dims);
                digits
                    .iter()
                    .zip(&target_strides)
                    .map(|(&d, &s)| d * s)
                    .sum()
            })
            .collect();

        let mut amps = vec![C64::ZERO; self.amps.len()];
        let mut gathered = vec![C64::ZERO; m];
        for r in 0..rest_count {
            let rest_digits = unflatten(r, &rest_dims);
            let base: usize = rest_digits
                .iter()
                .zip(&rest_strides)
                .map(|(&d, &s)| d * s)
                .sum();
            for (t, &off) in target_offsets.iter().enumerate() {
                gathered[t] = self.amps[base + off];
            }
            for (row, &row_off) in target_offsets.iter().enumerate() {
                let mut acc = C64::ZERO;
                for (col, &g) in gathered.iter().enumerate() {
                    acc += op.mat[(row, col)] * g;
                }
                amps[base + row_off] = acc;
            }
        }
        Ok(Self {
            dims: self.dims.clone(),
            amps,
        })
    }
}

/// A square complex matrix on a tensor-product register.
#[derive(Debug, Clone, PartialEq)]
pub struct Operator {
    dims: Vec<usize>,
    mat: DMatrix<C64>,
}

impl Operator {
    /// Wrap a matrix; the side length must equal the product of `dims`.
    pub fn from_matrix(dims: Vec<usize>, mat: DMatrix<C64>) -> Result<Self> {
        let d = total_dim(&dims);
        if dims.is_empty() || mat.nrows() != d || mat.ncols() != d {
            return Err(Error::DimensionMismatch(format!(
                "{}×{} matrix for register of dimension {}",
                mat.nrows(),
                mat.ncols(),
                d
            )));
        }
        ensure_finite_slice(mat.as_slice(), "operator")?;
        Ok(Self { dims, mat })
    }

    /// Build from a row-major closure over (row, col).
    pub fn from_fn(dims: Vec<usize>, f: impl Fn(usize, usize) -> C64) -> Result<Self> {
        let d = total_dim(&dims);
        let mat = DMatrix::from_fn(d, d, f);
        Self::from_matrix(dims, mat)
    }

    pub fn identity(dims: Vec<usize>) -> Self {
        let d = total_dim(&dims);
        Self {
            dims,
            mat: DMatrix::identity(d, d),
        }
    }

    pub fn zeros(dims: Vec<usize>) -> Self {
        let d = total_dim(&dims);
        Self {
            dims,
            mat: DMatrix::zeros(d, d),
        }
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.mat
    }

    pub fn entry(&self, row: usize, col: usize) -> C64 {
        self.mat[(row, col)]
    }

    /// Kronecker product; dimension lists are concatenated.
    pub fn tensor(&self, other: &Self) -> Self {
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&other.dims);
        Self {
            dims,
            mat: self.mat.kronecker(&other.mat),
        }
    }

    /// Matrix product; both operands must live on the same register.
    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.dims != other.dims {
            return Err(Error::DimensionMismatch(format!(
                "product of operators on {:?} and {:?}",
                self.dims, other.dims
            )));
        }
        Ok(Self {
            dims: self.dims.clone(),
            mat: &self.mat * &other.mat,
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.dims != other.dims {
            return Err(Error::DimensionMismatch(format!(
                "sum of operators on {:?} and {:?}",
                self.dims, other.dims
            )));
        }
        Ok(Self {
            dims: self.dims.clone(),
            mat: &self.mat + &other.mat,
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        if self.dims != other.dims {
            return Err(Error::DimensionMismatch(format!(
                "difference of operators on {:?} and {:?}",
                self.dims, other.dims
            )));
        }
        Ok(Self {
            dims: self.dims.clone(),
            mat: &self.mat - &other.mat,
        })
    }

    pub fn scale(&self, factor: C64) -> Self {
        Self {
            dims: self.dims.clone(),
            mat: &self.mat * factor,
        }
    }

    pub fn adjoint(&self) -> Self {
        Self {
            dims: self.dims.clone(),
            mat: self.mat.adjoint(),
        }
    }

    pub fn trace(&self) -> C64 {
        self.mat.trace()
    }

    /// Largest entrywise deviation from the conjugate transpose.
    pub fn hermiticity_deviation(&self) -> f64 {
        let adj = self.mat.adjoint();
        (&self.mat - adj).iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermiticity_deviation() <= tol::ALGEBRAIC
    }

    pub fn ensure_hermitian(&self) -> Result<()> {
        let deviation = self.hermiticity_deviation();
        if deviation <= tol::ALGEBRAIC {
            Ok(())
        } else {
            Err(Error::NotHermitian { deviation })
        }
    }

    /// Largest entrywise deviation of U·U† from the identity.
    pub fn unitarity_deviation(&self) -> f64 {
        let product = &self.mat * self.mat.adjoint();
        let eye = DMatrix::<C64>::identity(self.dim(), self.dim());
        (product - eye).iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn ensure_unitary(&self) -> Result<()> {
        let deviation = self.unitarity_deviation();
        if deviation <= tol::ALGEBRAIC {
            Ok(())
        } else {
            Err(Error::NotUnitary { deviation })
        }
    }

    /// Frobenius norm of the difference.
    pub fn frobenius_distance(&self, other: &Self) -> f64 {
        (&self.mat - &other.mat).norm()
    }

    /// Apply to a state on the same register.
    pub fn apply(&self, v: &StateVector) -> Result<StateVector> {
        if self.dims != v.dims {
            return Err(Error::DimensionMismatch(format!(
                "operator on {:?} applied to state on {:?}",
                self.dims, v.dims
            )));
        }
        let amps: Vec<C64> = (0..self.dim())
            .map(|row| {
                (0..self.dim())
                    .map(|col| self.mat[(row, col)] * v.amps[col])
                    .sum()
            })
            .collect();
        StateVector::new(self.dims.clone(), amps)
    }

    /// Real eigenvalues of a Hermitian operator, ascending.
    pub fn hermitian_eigenvalues(&self) -> Result<Vec<f64>> {
        self.ensure_hermitian()?;
        let eigen = self.mat.clone().symmetric_eigen();
        let mut vals: Vec<f64> = eigen.eigenvalues.iter().copied().collect();
        vals.sort_by(|a, b| a.partial_cmp(b).expect("eigenvalues are finite"));
        Ok(vals)
    }

    /// Eigenpairs of a Hermitian operator, sorted by ascending eigenvalue.
    pub fn hermitian_eigenpairs(&self) -> Result<Vec<(f64, StateVector)>> {
        self.ensure_hermitian()?;
        let eigen = self.mat.clone().symmetric_eigen();
        let mut pairs: Vec<(f64, StateVector)> = eigen
            .eigenvalues
            .iter()
            .enumerate()
            .map(|(i, &val)| {
                let column: Vec<C64> = eigen.eigenvectors.column(i).iter().copied().collect();
                (val, StateVector::new(self.dims.clone(), column).expect("finite eigenvector"))
            })
            .collect();
        pairs.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("eigenvalues are finite"));
        Ok(pairs)
    }
}

/// Rank-1 projector |v⟩⟨v| of a normalized state.
pub fn projector(v: &StateVector) -> Result<Operator> {
    v.ensure_normalized()?;
    let d = v.total_dim();
    let mat = DMatrix::from_fn(d, d, |row, col| v.amps[row] * v.amps[col].conj());
    Operator::from_matrix(v.dims.clone(), mat)
}

/// Hermitian, unit-trace, positive-semidefinite operator.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator {
    op: Operator,
}

impl DensityOperator {
    /// Validate hermiticity (algebraic tolerance), unit trace (algebraic
    /// tolerance) and positivity (spectral tolerance on the smallest
    /// eigenvalue).
    pub fn new(op: Operator) -> Result<Self> {
        op.ensure_hermitian()?;
        let trace = op.trace();
        if (trace.re - 1.0).abs() > tol::ALGEBRAIC || trace.im.abs() > tol::ALGEBRAIC {
            return Err(Error::NotUnitTrace { trace: trace.re });
        }
        let eigenvalues = op.hermitian_eigenvalues()?;
        let min_eigenvalue = eigenvalues.first().copied().unwrap_or(0.0);
        if min_eigenvalue < -tol::SPECTRAL {
            return Err(Error::NotPositiveSemidefinite { min_eigenvalue });
        }
        Ok(Self { op })
    }

    /// |v⟩⟨v| of a normalized state.
    pub fn from_pure(v: &StateVector) -> Result<Self> {
        Ok(Self {
            op: projector(v)?,
        })
    }

    /// The maximally mixed state I/d on the given register.
    pub fn maximally_mixed(dims: Vec<usize>) -> Self {
        let d = total_dim(&dims);
        let op = Operator::identity(dims).scale(C64::new(1.0 / d as f64, 0.0));
        Self { op }
    }

    pub fn operator(&self) -> &Operator {
        &self.op
    }

    pub fn into_operator(self) -> Operator {
        self.op
    }

    pub fn dims(&self) -> &[usize] {
        self.op.dims()
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        self.op.matrix()
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        self.op
            .hermitian_eigenvalues()
            .expect("density operator is Hermitian by construction")
    }

    /// Reduced density operator on the kept subsystems (indices into the
    /// dimension list, in ascending order of the original register).
    pub fn partial_trace(&self, keep: &[usize]) -> Result<DensityOperator> {
        let dims = self.dims().to_vec();
        let n = dims.len();
        let mut keep = keep.to_vec();
        keep.sort_unstable();
        keep.dedup();
        if keep.is_empty() || keep.iter().any(|&k| k >= n) {
            return Err(Error::InvalidSubsystem(format!(
                "keep set {keep:?} for register of {n} subsystems"
            )));
        }
        let traced: Vec<usize> = (0..n).filter(|i| !keep.contains(i)).collect();
        let keep_dims: Vec<usize> = keep.iter().map(|&i| dims[i]).collect();
        let traced_dims: Vec<usize> = traced.iter().map(|&i| dims[i]).collect();
        let full_strides = strides(&dims);

        let keep_total = total_dim(&keep_dims);
        let traced_total = total_dim(&traced_dims);
        let mut mat = DMatrix::<C64>::zeros(keep_total, keep_total);
        for row in 0..keep_total {
            let row_digits = unflatten(row, &keep_dims);
            let row_base: usize = row_digits
                .iter()
                .zip(&keep)
                .map(|(&d, &i)| d * full_strides[i])
                .sum();
            for col in 0..keep_total {
                let col_digits = unflatten(col, &keep_dims);
                let col_base: usize = col_digits
                    .iter()
                    .zip(&keep)
                    .map(|(&d, &i)| d * full_strides[i])
                    .sum();
                let mut acc = C64::ZERO;
                for t in 0..traced_total {
                    let t_digits = unflatten(t, &traced_dims);
                    let t_off: usize = t_digits
                        .iter()
                        .zip(&traced)
                        .map(|(&d, &i)| d * full_strides[i])
                        .sum();
                    acc += self.op.mat[(row_base + t_off, col_base + t_off)];
                }
                mat[(row, col)] = acc;
            }
        }
        DensityOperator::new(Operator::from_matrix(keep_dims, mat)?)
    }

    /// Tr(ρO) for Hermitian O; the imaginary residue is checked against the
    /// algebraic tolerance and discarded.
    pub fn expectation(&self, observable: &Operator) -> Result<f64> {
        if self.dims() != observable.dims() {
            return Err(Error::DimensionMismatch(format!(
                "expectation of operator on {:?} in state on {:?}",
                observable.dims(),
                self.dims()
            )));
        }
        observable.ensure_hermitian()?;
        let value = self.op.matmul(observable)?.trace();
        if value.im.abs() > tol::ALGEBRAIC {
            return Err(Error::Internal(format!(
                "expectation of a Hermitian operator came out complex: {value}"
            )));
        }
        Ok(value.re)
    }
}
