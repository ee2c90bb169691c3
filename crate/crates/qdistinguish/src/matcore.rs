//! Dense complex matrix kernel: storage, arithmetic, Hermitian
//! eigendecomposition, PSD square root, trace norm, tensor product and
//! partial trace.
//!
//! The eigensolver is a cyclic complex Jacobi iteration. It is quadratic-time
//! per sweep but needs no external linear algebra stack, is deterministic
//! across platforms, and skips pivots that are already negligible, which makes
//! it fast on the sparse structured matrices produced by the parity families.

use num_complex::Complex64;
use thiserror::Error;

pub type C64 = Complex64;

/// Numerical tolerances shared by every validating operation.
///
/// `herm` bounds the allowed deviation from Hermitian symmetry, `psd` the
/// allowed negative dip of eigenvalues that are treated as zero, and `eig`
/// the residual accepted from the eigensolver and from normalization checks.
#[derive(Clone, Copy, Debug)]
pub struct Tolerances {
    pub herm: f64,
    pub psd: f64,
    pub eig: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { herm: 1e-10, psd: 1e-8, eig: 1e-9 }
    }
}

/// Default cap on matrix dimension for tensor products, 2^12.
pub const DEFAULT_DIM_CAP: usize = 1 << 12;

const MAX_SWEEPS: usize = 100;
// pivots below this fraction of the largest entry are left alone
const SKIP_FACTOR: f64 = 1e-14;

#[derive(Debug, Error)]
pub enum MatError {
    #[error("matrix is not Hermitian: max |M - M'| entry is {defect:.3e}")]
    NotHermitian { defect: f64 },
    #[error("eigensolver did not converge after {sweeps} sweeps, off-diagonal residual {residual:.3e}")]
    NoConvergence { sweeps: usize, residual: f64 },
    #[error("matrix is not positive semidefinite: smallest eigenvalue {min_eigenvalue:.3e}")]
    NotPsd { min_eigenvalue: f64 },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("dimension {dim} exceeds cap {cap}")]
    DimensionOverflow { dim: usize, cap: usize },
    #[error("matrix entries must be finite")]
    NonFinite,
    #[error("expected {expected} entries for the given dimension, got {got}")]
    BadShape { expected: usize, got: usize },
}

/// Square complex matrix in row-major order.
#[derive(Clone)]
pub struct ComplexMatrix {
    dim: usize,
    data: Vec<C64>,
}

impl std::fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "ComplexMatrix(dim={})", self.dim)?;
        if self.dim <= 4 {
            for i in 0..self.dim {
                write!(f, "\n  ")?;
                for j in 0..self.dim {
                    let z = self.at(i, j);
                    write!(f, "{:+.4}{:+.4}i  ", z.re, z.im)?;
                }
            }
        }
        Ok(())
    }
}

impl ComplexMatrix {
    pub fn zeros(dim: usize) -> Self {
        ComplexMatrix { dim, data: vec![C64::ZERO; dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.data[i * dim + i] = C64::ONE;
        }
        m
    }

    /// Builds a matrix from row-major entries, checking shape and finiteness.
    pub fn from_data(dim: usize, data: Vec<C64>) -> Result<Self, MatError> {
        let expected = dim * dim;
        if dim == 0 || data.len() != expected {
            return Err(MatError::BadShape { expected, got: data.len() });
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(MatError::NonFinite);
        }
        Ok(ComplexMatrix { dim, data })
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            for j in 0..dim {
                m.data[i * dim + j] = f(i, j);
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn data(&self) -> &[C64] {
        &self.data
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize) -> C64 {
        self.data[i * self.dim + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, z: C64) {
        self.data[i * self.dim + j] = z;
    }

    pub fn column(&self, j: usize) -> Vec<C64> {
        (0..self.dim).map(|i| self.at(i, j)).collect()
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        ComplexMatrix { dim: self.dim, data }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect();
        ComplexMatrix { dim: self.dim, data }
    }

    pub fn scale(&self, factor: f64) -> Self {
        let data = self.data.iter().map(|a| a * factor).collect();
        ComplexMatrix { dim: self.dim, data }
    }

    pub fn adjoint(&self) -> Self {
        let n = self.dim;
        Self::from_fn(n, |i, j| self.at(j, i).conj())
    }

    /// Matrix product, skipping exactly-zero left entries so that sparse
    /// structured operands stay cheap.
    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        let n = self.dim;
        let mut out = vec![C64::ZERO; n * n];
        for i in 0..n {
            for k in 0..n {
                let aik = self.data[i * n + k];
                if aik == C64::ZERO {
                    continue;
                }
                let row_k = &other.data[k * n..(k + 1) * n];
                let row_i = &mut out[i * n..(i + 1) * n];
                for j in 0..n {
                    row_i[j] += aik * row_k[j];
                }
            }
        }
        ComplexMatrix { dim: n, data: out }
    }

    /// `A B'` without materializing the adjoint separately.
    pub fn mul_adjoint(&self, other: &Self) -> Self {
        self.mul(&other.adjoint())
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim).map(|i| self.at(i, i)).sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim, other.dim);
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Largest entry-wise deviation from `M = M'`.
    pub fn hermitian_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..self.dim {
            for j in i..self.dim {
                let d = (self.at(i, j) - self.at(j, i).conj()).norm();
                worst = worst.max(d);
            }
        }
        worst
    }
}

/// Rank-one projector `v v'` from a column vector.
pub fn outer_product(v: &[C64]) -> ComplexMatrix {
    ComplexMatrix::from_fn(v.len(), |i, j| v[i] * v[j].conj())
}

/// `Tr(A B)` in O(dim^2).
pub fn trace_product(a: &ComplexMatrix, b: &ComplexMatrix) -> C64 {
    assert_eq!(a.dim, b.dim);
    let n = a.dim;
    let mut acc = C64::ZERO;
    for i in 0..n {
        for k in 0..n {
            acc += a.data[i * n + k] * b.data[k * n + i];
        }
    }
    acc
}

/// Result of [`hermitian_eig`]: `eigenvalues[k]` pairs with column `k` of
/// `vectors`, sorted ascending.
#[derive(Clone, Debug)]
pub struct EigenDecomposition {
    pub eigenvalues: Vec<f64>,
    pub vectors: ComplexMatrix,
}

/// Full eigendecomposition of a Hermitian matrix.
pub fn hermitian_eig(m: &ComplexMatrix, tol: Tolerances) -> Result<EigenDecomposition, MatError> {
    let (values, vectors) = jacobi(m, true, tol)?;
    Ok(EigenDecomposition { eigenvalues: values, vectors: vectors.expect("vectors requested") })
}

/// Eigenvalues only, skipping the accumulation of the eigenvector matrix.
pub fn hermitian_eigenvalues(m: &ComplexMatrix, tol: Tolerances) -> Result<Vec<f64>, MatError> {
    let (values, _) = jacobi(m, false, tol)?;
    Ok(values)
}

fn jacobi(
    m: &ComplexMatrix,
    want_vectors: bool,
    tol: Tolerances,
) -> Result<(Vec<f64>, Option<ComplexMatrix>), MatError> {
    let defect = m.hermitian_defect();
    if !defect.is_finite() {
        return Err(MatError::NonFinite);
    }
    if defect > tol.herm {
        return Err(MatError::NotHermitian { defect });
    }
    let n = m.dim;
    // iterate on the Hermitian average so the start is exactly symmetric
    let mut a = vec![C64::ZERO; n * n];
    for i in 0..n {
        for j in 0..n {
            a[i * n + j] = (m.at(i, j) + m.at(j, i).conj()) * 0.5;
        }
    }
    let mut v = if want_vectors { ComplexMatrix::identity(n).data } else { Vec::new() };

    let scale = a.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let skip = SKIP_FACTOR * scale;
    let mut converged = scale == 0.0 || n == 1;
    if !converged {
        for _ in 0..MAX_SWEEPS {
            let mut rotations = 0usize;
            for p in 0..n {
                for q in (p + 1)..n {
                    let apq = a[p * n + q];
                    let r = apq.norm();
                    if r <= skip {
                        continue;
                    }
                    rotations += 1;
                    let app = a[p * n + p].re;
                    let aqq = a[q * n + q].re;
                    let phase = apq / r;
                    let tau = (aqq - app) / (2.0 * r);
                    // smaller-magnitude root of t^2 - 2 tau t - 1 = 0
                    let t = if tau >= 0.0 {
                        -1.0 / (tau + tau.hypot(1.0))
                    } else {
                        1.0 / (-tau + tau.hypot(1.0))
                    };
                    let c = 1.0 / t.hypot(1.0);
                    let sp = phase * (t * c);
                    let spc = sp.conj();
                    for i in 0..n {
                        let aip = a[i * n + p];
                        let aiq = a[i * n + q];
                        a[i * n + p] = aip * c + aiq * spc;
                        a[i * n + q] = aiq * c - aip * sp;
                    }
                    for j in 0..n {
                        let apj = a[p * n + j];
                        let aqj = a[q * n + j];
                        a[p * n + j] = apj * c + aqj * sp;
                        a[q * n + j] = aqj * c - apj * spc;
                    }
                    // the pivot is annihilated analytically, keep it exact
                    a[p * n + q] = C64::ZERO;
                    a[q * n + p] = C64::ZERO;
                    a[p * n + p] = C64::new(a[p * n + p].re, 0.0);
                    a[q * n + q] = C64::new(a[q * n + q].re, 0.0);
                    if want_vectors {
                        for i in 0..n {
                            let vip = v[i * n + p];
                            let viq = v[i * n + q];
                            v[i * n + p] = vip * c + viq * spc;
                            v[i * n + q] = viq * c - vip * sp;
                        }
                    }
                }
            }
            if rotations == 0 {
                converged = true;
                break;
            }
        }
    }
    if !converged {
        let mut residual: f64 = 0.0;
        for p in 0..n {
            for q in (p + 1)..n {
                residual = residual.max(a[p * n + q].norm());
            }
        }
        return Err(MatError::NoConvergence { sweeps: MAX_SWEEPS, residual });
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        a[i * n + i].re.partial_cmp(&a[j * n + j].re).expect("finite eigenvalues").then(i.cmp(&j))
    });
    let eigenvalues: Vec<f64> = order.iter().map(|&i| a[i * n + i].re).collect();
    let vectors = want_vectors.then(|| {
        ComplexMatrix::from_fn(n, |i, k| v[i * n + order[k]])
    });
    Ok((eigenvalues, vectors))
}

// Relative floor below which an eigenvalue of a PSD matrix is taken to be an
// exact zero before a square root. Rounding pollutes true zeros at a few
// hundred eps, and the root would amplify that to sqrt(eps); a genuine
// eigenvalue this small contributes less than 4e-7 to any root, so zeroing
// the band trades a vanishing worst case for clean null directions.
const SQRT_ZERO_CUTOFF: f64 = 1e-13;

/// Positive semidefinite square root via eigendecomposition. Eigenvalues
/// between `-tol.psd` and a small relative cutoff are treated as exact
/// zeros; anything below `-tol.psd` is rejected.
pub fn psd_sqrt(m: &ComplexMatrix, tol: Tolerances) -> Result<ComplexMatrix, MatError> {
    let eig = hermitian_eig(m, tol)?;
    let min = eig.eigenvalues.first().copied().unwrap_or(0.0);
    if min < -tol.psd {
        return Err(MatError::NotPsd { min_eigenvalue: min });
    }
    let max = eig.eigenvalues.last().copied().unwrap_or(0.0);
    let floor = SQRT_ZERO_CUTOFF * max.max(0.0);
    let n = m.dim;
    let roots: Vec<f64> = eig
        .eigenvalues
        .iter()
        .map(|&l| if l > floor { l.sqrt() } else { 0.0 })
        .collect();
    let scaled = ComplexMatrix::from_fn(n, |i, k| eig.vectors.at(i, k) * roots[k]);
    let raw = scaled.mul_adjoint(&eig.vectors);
    // V D V' is Hermitian up to roundoff, return the exact average
    Ok(ComplexMatrix::from_fn(n, |i, j| (raw.at(i, j) + raw.at(j, i).conj()) * 0.5))
}

// spectral lambda^(-1/2) with eigenvalues at or below rel_cutoff * max
// treated as zero; the result inverts only the numerical support
pub(crate) fn psd_pseudo_inv_sqrt(
    m: &ComplexMatrix,
    tol: Tolerances,
    rel_cutoff: f64,
) -> Result<ComplexMatrix, MatError> {
    let eig = hermitian_eig(m, tol)?;
    let min = eig.eigenvalues.first().copied().unwrap_or(0.0);
    if min < -tol.psd {
        return Err(MatError::NotPsd { min_eigenvalue: min });
    }
    let max = eig.eigenvalues.last().copied().unwrap_or(0.0);
    let cutoff = rel_cutoff * max.max(0.0);
    let n = m.dim;
    let inv_roots: Vec<f64> = eig
        .eigenvalues
        .iter()
        .map(|&l| if l > cutoff && l > 0.0 { 1.0 / l.sqrt() } else { 0.0 })
        .collect();
    let scaled = ComplexMatrix::from_fn(n, |i, k| eig.vectors.at(i, k) * inv_roots[k]);
    let raw = scaled.mul_adjoint(&eig.vectors);
    Ok(ComplexMatrix::from_fn(n, |i, j| (raw.at(i, j) + raw.at(j, i).conj()) * 0.5))
}

/// Trace norm `Tr|M|` of a Hermitian matrix.
pub fn trace_norm(m: &ComplexMatrix, tol: Tolerances) -> Result<f64, MatError> {
    let values = hermitian_eigenvalues(m, tol)?;
    Ok(values.iter().map(|l| l.abs()).sum())
}

/// Singular values of a general square matrix, ascending.
///
/// Solves the Hermitian dilation `[[0, M], [M', 0]]`, whose spectrum is the
/// singular values in plus/minus pairs. Unlike the eigenvalues of `M'M`,
/// this keeps absolute accuracy at machine precision for singular values
/// near zero, since nothing is squared and re-rooted.
pub fn singular_values(m: &ComplexMatrix, tol: Tolerances) -> Result<Vec<f64>, MatError> {
    let n = m.dim;
    let dilation = ComplexMatrix::from_fn(2 * n, |i, j| {
        if i < n && j >= n {
            m.at(i, j - n)
        } else if i >= n && j < n {
            m.at(j, i - n).conj()
        } else {
            C64::new(0.0, 0.0)
        }
    });
    let values = hermitian_eigenvalues(&dilation, tol)?;
    Ok(values[n..].iter().map(|&l| l.max(0.0)).collect())
}

/// Kronecker product with the default dimension cap.
pub fn tensor_product(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix, MatError> {
    tensor_product_capped(a, b, DEFAULT_DIM_CAP)
}

/// Kronecker product; the combined dimension must not exceed `cap`.
pub fn tensor_product_capped(
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    cap: usize,
) -> Result<ComplexMatrix, MatError> {
    let dim = a
        .dim
        .checked_mul(b.dim)
        .ok_or(MatError::DimensionOverflow { dim: usize::MAX, cap })?;
    if dim > cap {
        return Err(MatError::DimensionOverflow { dim, cap });
    }
    let (na, nb) = (a.dim, b.dim);
    let mut out = ComplexMatrix::zeros(dim);
    for ia in 0..na {
        for ja in 0..na {
            let aij = a.at(ia, ja);
            if aij == C64::ZERO {
                continue;
            }
            for ib in 0..nb {
                for jb in 0..nb {
                    out.set(ia * nb + ib, ja * nb + jb, aij * b.at(ib, jb));
                }
            }
        }
    }
    Ok(out)
}

/// Traces out the second factor of a bipartite matrix on `dim_a * dim_b`.
pub fn partial_trace_second(
    m: &ComplexMatrix,
    dim_a: usize,
    dim_b: usize,
) -> Result<ComplexMatrix, MatError> {
    let expected = dim_a
        .checked_mul(dim_b)
        .ok_or(MatError::DimensionMismatch { expected: usize::MAX, got: m.dim })?;
    if m.dim != expected || dim_a == 0 || dim_b == 0 {
        return Err(MatError::DimensionMismatch { expected, got: m.dim });
    }
    let mut out = ComplexMatrix::zeros(dim_a);
    for i in 0..dim_a {
        for j in 0..dim_a {
            let mut acc = C64::ZERO;
            for k in 0..dim_b {
                acc += m.at(i * dim_b + k, j * dim_b + k);
            }
            out.set(i, j, acc);
        }
    }
    Ok(out)
}
