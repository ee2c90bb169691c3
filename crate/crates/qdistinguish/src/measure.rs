//! Generalized measurements: POVM containers and validation, Born-rule
//! application, the polarization and trine reference measurements, PVM
//! detection, the Helstrom measurement that attains the optimal error
//! probability, and seeded random POVM sampling.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use thiserror::Error;

use crate::classical::{ClassicalError, ProbDist};
use crate::matcore::{
    hermitian_eig, hermitian_eigenvalues, outer_product, trace_product, C64, ComplexMatrix,
    MatError, Tolerances,
};
use crate::states::DensityMatrix;

#[derive(Debug, Error)]
pub enum MeasureError {
    #[error("measurement needs at least one element")]
    Empty,
    #[error("element {index} has dimension {got}, expected {expected}")]
    DimensionMismatch { index: usize, expected: usize, got: usize },
    #[error("state has dimension {got}, measurement expects {expected}")]
    StateDimensionMismatch { expected: usize, got: usize },
    #[error("element {index} is not Hermitian: defect {defect:.3e}")]
    NotHermitian { index: usize, defect: f64 },
    #[error("element {index} is not positive semidefinite: smallest eigenvalue {min_eigenvalue:.3e}")]
    NotPsd { index: usize, min_eigenvalue: f64 },
    #[error("elements do not sum to the identity: defect {defect:.3e}")]
    NotComplete { defect: f64 },
    #[error(transparent)]
    Mat(#[from] MatError),
    #[error(transparent)]
    Classical(#[from] ClassicalError),
}

/// Positive operator-valued measure: Hermitian PSD elements summing to the
/// identity.
#[derive(Clone, Debug)]
pub struct Povm {
    dim: usize,
    elements: Vec<ComplexMatrix>,
}

impl Povm {
    /// Validates every element and the completeness relation.
    pub fn new(elements: Vec<ComplexMatrix>, tol: Tolerances) -> Result<Self, MeasureError> {
        let povm = Self::from_elements_unchecked(elements)?;
        povm.validate(tol)?;
        Ok(povm)
    }

    // shape checks only; used by generators whose output is valid by
    // construction and covered by validation tests
    pub(crate) fn from_elements_unchecked(elements: Vec<ComplexMatrix>) -> Result<Self, MeasureError> {
        let dim = match elements.first() {
            Some(e) => e.dim(),
            None => return Err(MeasureError::Empty),
        };
        for (index, e) in elements.iter().enumerate() {
            if e.dim() != dim {
                return Err(MeasureError::DimensionMismatch { index, expected: dim, got: e.dim() });
            }
        }
        Ok(Povm { dim, elements })
    }

    /// Checks Hermiticity and positivity of each element and completeness of
    /// the sum, reporting the first violation.
    pub fn validate(&self, tol: Tolerances) -> Result<(), MeasureError> {
        let mut sum = ComplexMatrix::zeros(self.dim);
        for (index, e) in self.elements.iter().enumerate() {
            let defect = e.hermitian_defect();
            if !defect.is_finite() || defect > tol.herm {
                return Err(MeasureError::NotHermitian { index, defect });
            }
            let values = hermitian_eigenvalues(e, tol)?;
            let min = values.first().copied().unwrap_or(0.0);
            if min < -tol.psd {
                return Err(MeasureError::NotPsd { index, min_eigenvalue: min });
            }
            sum = sum.add(e);
        }
        let defect = sum.max_abs_diff(&ComplexMatrix::identity(self.dim));
        if defect > tol.eig {
            return Err(MeasureError::NotComplete { defect });
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[ComplexMatrix] {
        &self.elements
    }
}

/// Born rule: outcome `x` occurs with probability `Tr(rho E_x)`. Rounding
/// dips in `[-tol.psd, 0)` are clamped to zero and the result renormalized.
pub fn apply(povm: &Povm, rho: &DensityMatrix, tol: Tolerances) -> Result<ProbDist, MeasureError> {
    if rho.dim() != povm.dim {
        return Err(MeasureError::StateDimensionMismatch { expected: povm.dim, got: rho.dim() });
    }
    let mut probs = Vec::with_capacity(povm.len());
    for e in &povm.elements {
        let p = trace_product(e, rho.matrix()).re;
        probs.push(if p < 0.0 && p >= -tol.psd { 0.0 } else { p });
    }
    let sum: f64 = probs.iter().sum();
    if (sum - 1.0).abs() > tol.eig {
        return Err(ClassicalError::NotNormalized { sum }.into());
    }
    for p in &mut probs {
        *p /= sum;
    }
    Ok(ProbDist::new(probs, tol.eig)?)
}

/// Two-outcome PVM along the linear polarization at angle `theta` and its
/// orthogonal complement.
pub fn make_polarization_pvm(theta: f64) -> Povm {
    let (c, s) = (theta.cos(), theta.sin());
    let along = outer_product(&[C64::new(c, 0.0), C64::new(s, 0.0)]);
    let across = outer_product(&[C64::new(-s, 0.0), C64::new(c, 0.0)]);
    Povm { dim: 2, elements: vec![along, across] }
}

/// Symmetric three-outcome trine measurement on a qubit.
pub fn make_trine() -> Povm {
    let r3 = 3.0f64.sqrt() / 6.0;
    let e = |a: f64, b: f64, c: f64, d: f64| {
        ComplexMatrix::from_data(
            2,
            vec![C64::new(a, 0.0), C64::new(b, 0.0), C64::new(c, 0.0), C64::new(d, 0.0)],
        )
        .expect("literal entries")
    };
    Povm {
        dim: 2,
        elements: vec![
            e(2.0 / 3.0, 0.0, 0.0, 0.0),
            e(1.0 / 6.0, r3, r3, 0.5),
            e(1.0 / 6.0, -r3, -r3, 0.5),
        ],
    }
}

/// True when all pairwise products satisfy `E_x E_y = delta(x,y) E_x`
/// within `tol.eig`.
pub fn is_pvm(povm: &Povm, tol: Tolerances) -> bool {
    for (x, ex) in povm.elements.iter().enumerate() {
        for (y, ey) in povm.elements.iter().enumerate() {
            let prod = ex.mul(ey);
            let defect = if x == y { prod.max_abs_diff(ex) } else { prod.max_abs() };
            if defect > tol.eig {
                return false;
            }
        }
    }
    true
}

/// Optimal-error measurement: the first element projects onto the
/// nonnegative eigenspace of `rho0 - rho1`, the second onto the strictly
/// negative one. Eigenvalues within `tol.psd` of zero count as nonnegative;
/// if the difference vanishes entirely the split is the first computational
/// basis vector against its complement.
pub fn helstrom_pvm(
    rho0: &DensityMatrix,
    rho1: &DensityMatrix,
    tol: Tolerances,
) -> Result<Povm, MeasureError> {
    if rho0.dim() != rho1.dim() {
        return Err(MeasureError::StateDimensionMismatch { expected: rho0.dim(), got: rho1.dim() });
    }
    let dim = rho0.dim();
    let gamma = rho0.matrix().sub(rho1.matrix());
    let eig = hermitian_eig(&gamma, tol)?;
    let largest = eig.eigenvalues.iter().fold(0.0f64, |a, &l| a.max(l.abs()));
    if largest <= tol.psd {
        let mut basis = vec![C64::ZERO; dim];
        basis[0] = C64::ONE;
        let first = outer_product(&basis);
        let complement = ComplexMatrix::identity(dim).sub(&first);
        return Ok(Povm { dim, elements: vec![first, complement] });
    }
    let mut negative = ComplexMatrix::zeros(dim);
    for (k, &l) in eig.eigenvalues.iter().enumerate() {
        if l < -tol.psd {
            negative = negative.add(&outer_product(&eig.vectors.column(k)));
        }
    }
    let positive = ComplexMatrix::identity(dim).sub(&negative);
    Ok(Povm { dim, elements: vec![positive, negative] })
}

/// Random `m`-outcome POVM: Gram matrices of Gaussian factors, symmetrized
/// to completeness through the inverse square root of their sum.
pub fn random_povm(dim: usize, m: usize, seed: u64) -> Povm {
    assert!(dim >= 1 && m >= 1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let gram: Vec<ComplexMatrix> = (0..m)
            .map(|_| {
                let g = ComplexMatrix::from_fn(dim, |_, _| {
                    C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
                });
                g.adjoint().mul(&g)
            })
            .collect();
        let mut total = ComplexMatrix::zeros(dim);
        for a in &gram {
            total = total.add(a);
        }
        let eig = hermitian_eig(&total, Tolerances::default()).expect("Gram sum is Hermitian");
        let min = eig.eigenvalues[0];
        let max = eig.eigenvalues[dim - 1];
        if min <= 1e-12 * max {
            continue;
        }
        let inv_roots: Vec<f64> = eig.eigenvalues.iter().map(|l| 1.0 / l.sqrt()).collect();
        let scaled = ComplexMatrix::from_fn(dim, |i, k| eig.vectors.at(i, k) * inv_roots[k]);
        let inv_root = scaled.mul_adjoint(&eig.vectors);
        let elements: Vec<ComplexMatrix> =
            gram.iter().map(|a| inv_root.mul(a).mul(&inv_root)).collect();
        return Povm { dim, elements };
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classical;
    use crate::states::{random_density, DensityMatrix, PureState};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    const TOL: Tolerances = Tolerances { herm: 1e-10, psd: 1e-8, eig: 1e-9 };

    fn vertical() -> DensityMatrix {
        DensityMatrix::from_pure(&PureState::new(vec![C64::ZERO, C64::ONE], TOL).unwrap())
    }

    fn horizontal() -> DensityMatrix {
        DensityMatrix::from_pure(&PureState::new(vec![C64::ONE, C64::ZERO], TOL).unwrap())
    }

    #[test]
    fn trine_on_vertical_state_never_fires_first_outcome() {
        let trine = make_trine();
        trine.validate(TOL).unwrap();
        let probs = apply(&trine, &vertical(), TOL).unwrap();
        assert!(probs.probs()[0].abs() <= 1e-12);
        assert!((probs.probs()[1] - 0.5).abs() <= 1e-12);
        assert!((probs.probs()[2] - 0.5).abs() <= 1e-12);
    }

    #[test]
    fn trine_sums_to_identity_but_is_not_projective() {
        let trine = make_trine();
        let mut sum = ComplexMatrix::zeros(2);
        for e in trine.elements() {
            sum = sum.add(e);
        }
        assert!(sum.max_abs_diff(&ComplexMatrix::identity(2)) <= 1e-15);
        assert!(!is_pvm(&trine, TOL));
    }

    #[test]
    fn polarization_pvm_is_projective_and_measures_cosines() {
        let a = std::f64::consts::FRAC_PI_8;
        let pvm = make_polarization_pvm(a);
        pvm.validate(TOL).unwrap();
        assert!(is_pvm(&pvm, TOL));
        let probs = apply(&pvm, &horizontal(), TOL).unwrap();
        assert!((probs.probs()[0] - a.cos().powi(2)).abs() <= 1e-12);
        assert!((probs.probs()[1] - a.sin().powi(2)).abs() <= 1e-12);
        let basis = make_polarization_pvm(0.0);
        assert!(basis.elements()[0].at(0, 0).re == 1.0);
        assert!(basis.elements()[1].at(1, 1).re == 1.0);
    }

    #[test]
    fn quarter_turn_pvm_has_half_entries() {
        let pvm = make_polarization_pvm(std::f64::consts::FRAC_PI_4);
        for e in pvm.elements() {
            for i in 0..2 {
                for j in 0..2 {
                    assert!((e.at(i, j).re.abs() - 0.5).abs() <= 1e-15);
                }
            }
        }
    }

    #[test]
    fn more_outcomes_than_dimensions_is_never_projective() {
        assert!(!is_pvm(&random_povm(2, 3, 40), TOL));
        assert!(!is_pvm(&random_povm(3, 5, 41), TOL));
    }

    #[test]
    fn helstrom_pvm_for_orthogonal_pure_states_is_the_basis_split() {
        let pvm = helstrom_pvm(&horizontal(), &vertical(), TOL).unwrap();
        pvm.validate(TOL).unwrap();
        assert!(is_pvm(&pvm, TOL));
        let p = apply(&pvm, &horizontal(), TOL).unwrap();
        assert!((p.probs()[0] - 1.0).abs() <= 1e-12);
        let q = apply(&pvm, &vertical(), TOL).unwrap();
        assert!((q.probs()[1] - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn helstrom_pvm_on_identical_states_degenerates_to_a_fixed_split() {
        let rho = random_density(3, 3, &mut ChaCha8Rng::seed_from_u64(50), TOL);
        let pvm = helstrom_pvm(&rho, &rho, TOL).unwrap();
        pvm.validate(TOL).unwrap();
        assert!((pvm.elements()[0].at(0, 0).re - 1.0).abs() <= 1e-15);
        assert!(pvm.elements()[0].max_abs() <= 1.0 + 1e-15);
        let p = apply(&pvm, &rho, TOL).unwrap();
        // a fifty-fifty guess performs at chance level
        let pair = classical::HypothesisPair::new(p.clone(), p).unwrap();
        assert_eq!(classical::pe(&pair), 0.5);
    }

    #[test]
    fn helstrom_pvm_elements_are_projectors_on_random_pairs() {
        let mut rng = ChaCha8Rng::seed_from_u64(51);
        for trial in 0..50 {
            let dim = 2 + trial % 4;
            let rho0 = random_density(dim, dim, &mut rng, TOL);
            let rho1 = random_density(dim, dim, &mut rng, TOL);
            let pvm = helstrom_pvm(&rho0, &rho1, TOL).unwrap();
            pvm.validate(TOL).unwrap();
            assert!(is_pvm(&pvm, TOL), "trial {trial}");
        }
    }

    #[test]
    fn random_povm_is_valid_and_deterministic() {
        for seed in 0..20 {
            let povm = random_povm(3, 4, seed);
            povm.validate(TOL).unwrap();
        }
        let a = random_povm(4, 5, 99);
        let b = random_povm(4, 5, 99);
        for (x, y) in a.elements().iter().zip(b.elements()) {
            assert!(x.max_abs_diff(y) == 0.0);
        }
        let single = random_povm(3, 1, 7);
        assert!(single.elements()[0].max_abs_diff(&ComplexMatrix::identity(3)) <= 1e-9);
    }

    #[test]
    fn apply_rejects_mismatched_dimensions() {
        let trine = make_trine();
        let rho = random_density(3, 3, &mut ChaCha8Rng::seed_from_u64(52), TOL);
        assert!(matches!(
            apply(&trine, &rho, TOL),
            Err(MeasureError::StateDimensionMismatch { expected: 2, got: 3 })
        ));
    }

    #[test]
    fn povm_validation_rejects_incomplete_or_indefinite_sets() {
        let half = ComplexMatrix::identity(2).scale(0.5);
        assert!(matches!(
            Povm::new(vec![half.clone()], TOL),
            Err(MeasureError::NotComplete { .. })
        ));
        let mut indefinite = ComplexMatrix::zeros(2);
        indefinite.set(0, 0, C64::new(1.5, 0.0));
        indefinite.set(1, 1, C64::new(-0.5, 0.0));
        let counterweight = ComplexMatrix::identity(2).sub(&indefinite);
        assert!(matches!(
            Povm::new(vec![indefinite, counterweight], TOL),
            Err(MeasureError::NotPsd { index: 0, .. })
        ));
        assert!(matches!(Povm::new(vec![], TOL), Err(MeasureError::Empty)));
    }
}
