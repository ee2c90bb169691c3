//! Quantum state containers and constructors: pure states, density matrices,
//! pure-state ensembles, the photon polarization states used by the parity
//! families, spectral purification and seeded random state sampling.

use rand::Rng;
use rand_distr::StandardNormal;
use thiserror::Error;

use crate::matcore::{
    hermitian_eig, hermitian_eigenvalues, outer_product, C64, ComplexMatrix, MatError, Tolerances,
};

#[derive(Debug, Error)]
pub enum StateError {
    #[error("amplitude vector must be non-empty and finite")]
    BadAmplitudes,
    #[error("state vector norm is {norm}, expected 1")]
    NotNormalized { norm: f64 },
    #[error("density matrix is not Hermitian: defect {defect:.3e}")]
    NotHermitian { defect: f64 },
    #[error("density matrix trace is {trace}, expected 1")]
    TraceNotOne { trace: f64 },
    #[error("density matrix is not positive semidefinite: smallest eigenvalue {min_eigenvalue:.3e}")]
    NotPsd { min_eigenvalue: f64 },
    #[error("ensemble weight at index {index} is negative: {value}")]
    NegativeWeight { index: usize, value: f64 },
    #[error("ensemble weights sum to {sum}, expected 1")]
    WeightsNotNormalized { sum: f64 },
    #[error("ensemble mixes states of different dimensions: {left} vs {right}")]
    MixedDimensions { left: usize, right: usize },
    #[error("ensemble must contain at least one state")]
    EmptyEnsemble,
    #[error(transparent)]
    Mat(#[from] MatError),
}

/// Unit vector in a finite-dimensional Hilbert space.
#[derive(Clone, Debug)]
pub struct PureState {
    amps: Vec<C64>,
}

impl PureState {
    /// Validates finiteness and unit norm within `tol.eig`.
    pub fn new(amps: Vec<C64>, tol: Tolerances) -> Result<Self, StateError> {
        if amps.is_empty() || amps.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(StateError::BadAmplitudes);
        }
        let norm = amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > tol.eig {
            return Err(StateError::NotNormalized { norm });
        }
        Ok(PureState { amps })
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    /// Inner product with the state on the left conjugated.
    pub fn inner(&self, other: &PureState) -> C64 {
        assert_eq!(self.dim(), other.dim());
        self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum()
    }

    pub fn projector(&self) -> ComplexMatrix {
        outer_product(&self.amps)
    }
}

/// Density matrix: Hermitian, positive semidefinite, unit trace.
#[derive(Clone, Debug)]
pub struct DensityMatrix {
    mat: ComplexMatrix,
}

impl DensityMatrix {
    /// Validates all three invariants and reports the first one violated.
    pub fn new(mat: ComplexMatrix, tol: Tolerances) -> Result<Self, StateError> {
        let defect = mat.hermitian_defect();
        if !defect.is_finite() {
            return Err(StateError::NotHermitian { defect });
        }
        if defect > tol.herm {
            return Err(StateError::NotHermitian { defect });
        }
        let trace = mat.trace();
        if (trace.re - 1.0).abs() > tol.eig || trace.im.abs() > tol.eig {
            return Err(StateError::TraceNotOne { trace: trace.re });
        }
        let values = hermitian_eigenvalues(&mat, tol)?;
        let min = values.first().copied().unwrap_or(0.0);
        if min < -tol.psd {
            return Err(StateError::NotPsd { min_eigenvalue: min });
        }
        Ok(DensityMatrix { mat })
    }

    pub fn from_pure(psi: &PureState) -> Self {
        DensityMatrix { mat: psi.projector() }
    }

    pub fn dim(&self) -> usize {
        self.mat.dim()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.mat
    }
}

/// Mixture of pure states with probability weights.
#[derive(Clone, Debug)]
pub struct Ensemble {
    components: Vec<(f64, PureState)>,
}

impl Ensemble {
    pub fn new(components: Vec<(f64, PureState)>, tol: Tolerances) -> Result<Self, StateError> {
        if components.is_empty() {
            return Err(StateError::EmptyEnsemble);
        }
        let dim = components[0].1.dim();
        for (_, psi) in &components {
            if psi.dim() != dim {
                return Err(StateError::MixedDimensions { left: dim, right: psi.dim() });
            }
        }
        for (index, (value, _)) in components.iter().enumerate() {
            if *value < 0.0 {
                return Err(StateError::NegativeWeight { index, value: *value });
            }
        }
        let sum: f64 = components.iter().map(|(w, _)| w).sum();
        if (sum - 1.0).abs() > tol.eig {
            return Err(StateError::WeightsNotNormalized { sum });
        }
        Ok(Ensemble { components })
    }

    pub fn components(&self) -> &[(f64, PureState)] {
        &self.components
    }

    pub fn dim(&self) -> usize {
        self.components[0].1.dim()
    }
}

/// Mixes an ensemble into its density matrix.
pub fn density_from_ensemble(ensemble: &Ensemble, tol: Tolerances) -> Result<DensityMatrix, StateError> {
    let dim = ensemble.dim();
    let mut mat = ComplexMatrix::zeros(dim);
    for (w, psi) in ensemble.components() {
        mat = mat.add(&psi.projector().scale(*w));
    }
    DensityMatrix::new(mat, tol)
}

/// Linear polarization state `(cos a, sign * sin a)`. Nonnegative `sign`
/// selects the first hypothesis, negative the second.
pub fn polarization_state(alpha: f64, sign: i32) -> PureState {
    let s = if sign >= 0 { 1.0 } else { -1.0 };
    PureState { amps: vec![C64::new(alpha.cos(), 0.0), C64::new(s * alpha.sin(), 0.0)] }
}

/// Spectral purification on a same-size ancilla: eigenvalues in descending
/// order are paired with ancilla basis vectors, so a pure input purifies to
/// itself tensored with the first ancilla vector. Tracing out the second
/// factor of the projector recovers the input.
pub fn purify(rho: &DensityMatrix, tol: Tolerances) -> Result<PureState, StateError> {
    let n = rho.dim();
    let eig = hermitian_eig(rho.matrix(), tol)?;
    let min = eig.eigenvalues.first().copied().unwrap_or(0.0);
    if min < -tol.psd {
        return Err(StateError::NotPsd { min_eigenvalue: min });
    }
    // stable descending order so degenerate eigenvalues keep their column order
    let mut desc: Vec<usize> = (0..n).collect();
    desc.sort_by(|&i, &j| {
        eig.eigenvalues[j].partial_cmp(&eig.eigenvalues[i]).expect("finite eigenvalues").then(i.cmp(&j))
    });
    let mut amps = vec![C64::ZERO; n * n];
    for (k, &src) in desc.iter().enumerate() {
        let root = eig.eigenvalues[src].max(0.0).sqrt();
        for i in 0..n {
            amps[i * n + k] = eig.vectors.at(i, src) * root;
        }
    }
    // clamping can leave the norm a hair off 1, renormalize exactly
    let norm = amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    for z in &mut amps {
        *z /= norm;
    }
    PureState::new(amps, tol)
}

/// Random density matrix of the given rank: the normalized Gram matrix of
/// `rank` standard complex Gaussian vectors.
pub fn random_density(dim: usize, rank: usize, rng: &mut impl Rng, tol: Tolerances) -> DensityMatrix {
    assert!(rank >= 1 && rank <= dim);
    let mut mat = ComplexMatrix::zeros(dim);
    for _ in 0..rank {
        let v: Vec<C64> = (0..dim)
            .map(|_| C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
            .collect();
        mat = mat.add(&outer_product(&v));
    }
    let trace = mat.trace().re;
    let mat = mat.scale(1.0 / trace);
    DensityMatrix::new(mat, tol).expect("Gram matrix construction is valid")
}

/// Random pure state, uniform on the unit sphere.
pub fn random_pure(dim: usize, rng: &mut impl Rng) -> PureState {
    loop {
        let v: Vec<C64> = (0..dim)
            .map(|_| C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
            .collect();
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-6 {
            return PureState { amps: v.into_iter().map(|z| z / norm).collect() };
        }
    }
}
