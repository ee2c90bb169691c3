//! Quantum distinguishability measures for a pair of density matrices under
//! equal priors: closed forms for the probability of error, Kolmogorov
//! distance and Bhattacharyya overlap, two-sided bounds and a seeded POVM
//! optimizer for the Shannon distinguishability, a purification-based search
//! that rediscovers the overlap as a maximum over ancilla unitaries, and
//! numeric checks of the overlap's multiplicativity and concavity.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use thiserror::Error;

use crate::classical::{self, h, HypothesisPair};
use crate::matcore::{
    hermitian_eig, hermitian_eigenvalues, outer_product, psd_pseudo_inv_sqrt, psd_sqrt,
    singular_values,
    tensor_product, C64, ComplexMatrix, MatError, Tolerances,
};
use crate::measure::{apply, helstrom_pvm, make_polarization_pvm, MeasureError, Povm};
use crate::states::{purify, DensityMatrix, StateError};

#[derive(Debug, Error)]
pub enum QdistError {
    #[error("states have different dimensions: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("mixing weight {value} is outside [0, 1]")]
    BadWeight { value: f64 },
    #[error("operation needs a two-dimensional pair, got dimension {dim}")]
    NotTwoDimensional { dim: usize },
    #[error(transparent)]
    Mat(#[from] MatError),
    #[error(transparent)]
    State(#[from] StateError),
    #[error(transparent)]
    Measure(#[from] MeasureError),
}

/// Two density matrices of equal dimension, hypotheses with equal priors.
#[derive(Clone, Debug)]
pub struct QuantumPair {
    rho0: DensityMatrix,
    rho1: DensityMatrix,
}

impl QuantumPair {
    pub fn new(rho0: DensityMatrix, rho1: DensityMatrix) -> Result<Self, QdistError> {
        if rho0.dim() != rho1.dim() {
            return Err(QdistError::DimensionMismatch { left: rho0.dim(), right: rho1.dim() });
        }
        Ok(QuantumPair { rho0, rho1 })
    }

    pub fn rho0(&self) -> &DensityMatrix {
        &self.rho0
    }

    pub fn rho1(&self) -> &DensityMatrix {
        &self.rho1
    }

    pub fn dim(&self) -> usize {
        self.rho0.dim()
    }
}

// measures can stray outside their range by eigensolver rounding only
fn clamp_unit(v: f64, eps: f64) -> f64 {
    if v < 0.0 && v >= -eps {
        0.0
    } else if v > 1.0 && v <= 1.0 + eps {
        1.0
    } else {
        v
    }
}

/// Probability of error of the best measurement, `1/2 - (1/4) Tr|rho0 - rho1|`.
pub fn q_pe(pair: &QuantumPair, tol: Tolerances) -> Result<f64, QdistError> {
    let k = q_kolmogorov(pair, tol)?;
    Ok(0.5 - 0.5 * k)
}

/// Kolmogorov distance, `(1/2) Tr|rho0 - rho1|`.
pub fn q_kolmogorov(pair: &QuantumPair, tol: Tolerances) -> Result<f64, QdistError> {
    let gamma = pair.rho0.matrix().sub(pair.rho1.matrix());
    let values = hermitian_eigenvalues(&gamma, tol)?;
    let norm: f64 = values.iter().map(|l| l.abs()).sum();
    Ok(clamp_unit(0.5 * norm, tol.eig))
}

pub(crate) fn b_of_matrices(
    r0: &ComplexMatrix,
    r1: &ComplexMatrix,
    tol: Tolerances,
) -> Result<f64, QdistError> {
    // Tr sqrt(sqrt(r0) r1 sqrt(r0)) is the nuclear norm of
    // sqrt(r1) sqrt(r0); the singular-value route keeps rank-deficient
    // inputs at machine precision where the square-then-root form loses half
    // the digits on null directions
    let product = psd_sqrt(r1, tol)?.mul(&psd_sqrt(r0, tol)?);
    let b: f64 = singular_values(&product, tol)?.iter().sum();
    Ok(clamp_unit(b, tol.eig))
}

/// Bhattacharyya overlap (fidelity), `Tr sqrt(sqrt(rho0) rho1 sqrt(rho0))`.
/// For pure states this collapses to the modulus of the inner product.
pub fn q_bhattacharyya(pair: &QuantumPair, tol: Tolerances) -> Result<f64, QdistError> {
    b_of_matrices(pair.rho0.matrix(), pair.rho1.matrix(), tol)
}

/// The four closed-form bounds that sandwich the Shannon distinguishability.
#[derive(Clone, Copy, Debug)]
pub struct SdBounds {
    /// `1 - h(PE)`
    pub lower_pe: f64,
    /// `1 - B`
    pub lower_b: f64,
    /// `K`
    pub upper_k: f64,
    /// `1 - h(1/2 - (1/2) sqrt(1 - B^2))`
    pub upper_b: f64,
}

impl SdBounds {
    pub fn lower(&self) -> f64 {
        self.lower_pe.max(self.lower_b)
    }

    pub fn upper(&self) -> f64 {
        self.upper_k.min(self.upper_b)
    }
}

/// Closed-form sandwich for the Shannon distinguishability.
pub fn sd_bounds(pair: &QuantumPair, tol: Tolerances) -> Result<SdBounds, QdistError> {
    let k = q_kolmogorov(pair, tol)?;
    let pe = 0.5 - 0.5 * k;
    let b = q_bhattacharyya(pair, tol)?;
    Ok(SdBounds {
        lower_pe: 1.0 - h(pe),
        lower_b: 1.0 - b,
        upper_k: k,
        upper_b: 1.0 - h(0.5 - 0.5 * (1.0 - b * b).max(0.0).sqrt()),
    })
}

/// Induced-distribution Shannon distinguishability of a measurement,
/// negative when the measurement cannot be applied.
pub fn sd_of_povm(pair: &QuantumPair, povm: &Povm, tol: Tolerances) -> f64 {
    let Ok(p0) = apply(povm, &pair.rho0, tol) else { return -1.0 };
    let Ok(p1) = apply(povm, &pair.rho1, tol) else { return -1.0 };
    let Ok(induced) = HypothesisPair::new(p0, p1) else { return -1.0 };
    classical::shannon_dist(&induced)
}

/// Configuration for [`sd_optimize`].
#[derive(Clone, Copy, Debug)]
pub struct SdConfig {
    /// Number of POVM outcomes searched over; `None` means `dim + 1`.
    pub outcomes: Option<usize>,
    /// Random starts added after the four structured ones.
    pub random_starts: usize,
    /// Coordinate-descent sweep budget per start.
    pub sweeps: usize,
    pub seed: u64,
}

impl Default for SdConfig {
    fn default() -> Self {
        SdConfig { outcomes: None, random_starts: 4, sweeps: 40, seed: crate::DEFAULT_SEED }
    }
}

impl SdConfig {
    /// Cheap preset for bulk fuzzing runs.
    pub fn light(seed: u64) -> Self {
        SdConfig { outcomes: None, random_starts: 1, sweeps: 10, seed }
    }
}

/// Result of the Shannon distinguishability search: the best value found,
/// the measurement achieving it, the closed-form sandwich, and whether the
/// search settled before its budget ran out. The value is a certified lower
/// bound on the true maximum; on every tested instance it also stays inside
/// the sandwich.
#[derive(Clone, Debug)]
pub struct SdEstimate {
    pub value: f64,
    pub povm: Povm,
    pub bounds: SdBounds,
    pub converged: bool,
}

struct Ascent {
    value: f64,
    stalled: bool,
}

// pattern search over a flat parameter vector, maximizing eval; shrinks the
// step when a sweep stops improving and reports a stall once the step
// bottoms out
fn coordinate_ascent(
    params: &mut [f64],
    mut eval: impl FnMut(&[f64]) -> f64,
    max_sweeps: usize,
    budget: &mut usize,
    mut step: f64,
) -> Ascent {
    let mut best = eval(params);
    *budget = budget.saturating_sub(1);
    let mut stalled = false;
    'sweeps: for _ in 0..max_sweeps {
        if *budget == 0 {
            break;
        }
        let before = best;
        for i in 0..params.len() {
            if *budget == 0 {
                break 'sweeps;
            }
            let original = params[i];
            params[i] = original + step;
            let up = eval(params);
            *budget = budget.saturating_sub(1);
            if up > best {
                best = up;
                continue;
            }
            if *budget == 0 {
                params[i] = original;
                break 'sweeps;
            }
            params[i] = original - step;
            let down = eval(params);
            *budget = budget.saturating_sub(1);
            if down > best {
                best = down;
                continue;
            }
            params[i] = original;
        }
        if best - before <= 1e-12 * (1.0 + best.abs()) {
            step *= 0.5;
            if step < 1e-8 {
                stalled = true;
                break;
            }
        }
    }
    Ascent { value: best, stalled }
}

fn factor_params_len(dim: usize, m: usize) -> usize {
    2 * dim * dim * m
}

fn povm_from_factor_params(dim: usize, params: &[f64], tol: Tolerances) -> Option<Povm> {
    let per = 2 * dim * dim;
    let m = params.len() / per;
    let mut gram = Vec::with_capacity(m);
    let mut total = ComplexMatrix::zeros(dim);
    for x in 0..m {
        let base = x * per;
        let g = ComplexMatrix::from_fn(dim, |i, j| {
            let k = base + 2 * (i * dim + j);
            C64::new(params[k], params[k + 1])
        });
        let a = g.adjoint().mul(&g);
        total = total.add(&a);
        gram.push(a);
    }
    let eig = hermitian_eig(&total, tol).ok()?;
    let min = eig.eigenvalues[0];
    let max = eig.eigenvalues[dim - 1];
    if !(max > 0.0) || min <= 1e-12 * max {
        return None;
    }
    let inv_roots: Vec<f64> = eig.eigenvalues.iter().map(|l| 1.0 / l.sqrt()).collect();
    let scaled = ComplexMatrix::from_fn(dim, |i, k| eig.vectors.at(i, k) * inv_roots[k]);
    let inv_root = scaled.mul_adjoint(&eig.vectors);
    let elements: Vec<ComplexMatrix> =
        gram.iter().map(|a| inv_root.mul(a).mul(&inv_root)).collect();
    Povm::from_elements_unchecked(elements).ok()
}

// factor parameterization of an existing POVM, zero-padded to m outcomes
fn factor_params_of_povm(povm: &Povm, m: usize, tol: Tolerances) -> Result<Vec<f64>, QdistError> {
    let dim = povm.dim();
    let mut params = vec![0.0; factor_params_len(dim, m.max(povm.len()))];
    for (x, e) in povm.elements().iter().enumerate() {
        let g = psd_sqrt(e, tol)?;
        let base = x * 2 * dim * dim;
        for i in 0..dim {
            for j in 0..dim {
                let k = base + 2 * (i * dim + j);
                params[k] = g.at(i, j).re;
                params[k + 1] = g.at(i, j).im;
            }
        }
    }
    Ok(params)
}

fn computational_pvm(dim: usize) -> Povm {
    let elements = (0..dim)
        .map(|k| {
            let mut basis = vec![C64::ZERO; dim];
            basis[k] = C64::ONE;
            outer_product(&basis)
        })
        .collect();
    Povm::from_elements_unchecked(elements).expect("basis projectors")
}

// rank-one PVM along the eigenbasis of rho0 - rho1
fn difference_basis_pvm(pair: &QuantumPair, tol: Tolerances) -> Result<Povm, QdistError> {
    let gamma = pair.rho0.matrix().sub(pair.rho1.matrix());
    let eig = hermitian_eig(&gamma, tol)?;
    let elements: Vec<ComplexMatrix> =
        (0..pair.dim()).map(|k| outer_product(&eig.vectors.column(k))).collect();
    Ok(Povm::from_elements_unchecked(elements)?)
}

// square-root measurement of the equal-prior ensemble, padded with the
// projector onto the unused subspace when the average state is rank-deficient
fn square_root_measurement(pair: &QuantumPair, tol: Tolerances) -> Result<Povm, QdistError> {
    let dim = pair.dim();
    let avg = pair.rho0.matrix().add(pair.rho1.matrix()).scale(0.5);
    let inv_root = psd_pseudo_inv_sqrt(&avg, tol, 1e-12)?;
    let mut elements = vec![
        inv_root.mul(&pair.rho0.matrix().scale(0.5)).mul(&inv_root),
        inv_root.mul(&pair.rho1.matrix().scale(0.5)).mul(&inv_root),
    ];
    let mut rest = ComplexMatrix::identity(dim);
    for e in &elements {
        rest = rest.sub(e);
    }
    if rest.max_abs() > tol.eig {
        elements.push(rest);
    }
    Ok(Povm::from_elements_unchecked(elements)?)
}

fn haar_pvm(dim: usize, rng: &mut ChaCha8Rng) -> Povm {
    loop {
        let g = ComplexMatrix::from_fn(dim, |_, _| {
            C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
        });
        if let Some(u) = unitary_from_square(&g) {
            let elements = (0..dim).map(|k| outer_product(&u.column(k))).collect();
            return Povm::from_elements_unchecked(elements).expect("unitary columns");
        }
    }
}

// modified Gram-Schmidt on the columns; None when they are nearly dependent
fn unitary_from_square(g: &ComplexMatrix) -> Option<ComplexMatrix> {
    let n = g.dim();
    let mut cols: Vec<Vec<C64>> = (0..n).map(|j| g.column(j)).collect();
    for j in 0..n {
        for i in 0..j {
            let prev = cols[i].clone();
            let proj: C64 = prev.iter().zip(&cols[j]).map(|(q, a)| q.conj() * *a).sum();
            for r in 0..n {
                cols[j][r] -= proj * prev[r];
            }
        }
        let norm = cols[j].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm < 1e-10 {
            return None;
        }
        for z in &mut cols[j] {
            *z /= norm;
        }
    }
    Some(ComplexMatrix::from_fn(n, |i, j| cols[j][i]))
}

/// Exhaustive real-angle PVM grid for qubit pairs with a golden-section
/// polish and a short POVM refinement on top. The grid covers every
/// projective measurement when the pair is real-symmetric; for complex pairs
/// it is a floor that [`sd_optimize`]'s other starts improve on.
pub fn sd_pvm_grid2(
    pair: &QuantumPair,
    steps: usize,
    tol: Tolerances,
) -> Result<(f64, Povm), QdistError> {
    if pair.dim() != 2 {
        return Err(QdistError::NotTwoDimensional { dim: pair.dim() });
    }
    assert!(steps >= 2);
    let half_pi = std::f64::consts::FRAC_PI_2;
    let width = half_pi / steps as f64;
    let mut best = (f64::NEG_INFINITY, 0.0);
    for k in 0..steps {
        let theta = k as f64 * width;
        let value = sd_of_povm(pair, &make_polarization_pvm(theta), tol);
        if value > best.0 {
            best = (value, theta);
        }
    }
    // golden-section polish around the best grid point
    let golden = 0.5 * (5.0f64.sqrt() - 1.0);
    let (mut lo, mut hi) = (best.1 - width, best.1 + width);
    let mut x1 = hi - golden * (hi - lo);
    let mut x2 = lo + golden * (hi - lo);
    let mut f1 = sd_of_povm(pair, &make_polarization_pvm(x1), tol);
    let mut f2 = sd_of_povm(pair, &make_polarization_pvm(x2), tol);
    while hi - lo > 1e-10 {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + golden * (hi - lo);
            f2 = sd_of_povm(pair, &make_polarization_pvm(x2), tol);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - golden * (hi - lo);
            f1 = sd_of_povm(pair, &make_polarization_pvm(x1), tol);
        }
    }
    let theta = 0.5 * (lo + hi);
    let pvm = make_polarization_pvm(theta);
    let pvm_value = sd_of_povm(pair, &pvm, tol);
    let (mut value, mut povm) = if pvm_value >= best.0 { (pvm_value, pvm) } else {
        (best.0, make_polarization_pvm(best.1))
    };
    // POVM refinement: confirm no three-outcome deformation does better
    let mut params = factor_params_of_povm(&povm, 3, tol)?;
    let mut budget = usize::MAX;
    let ascent = coordinate_ascent(
        &mut params,
        |p| povm_from_factor_params(2, p, tol).map_or(-1.0, |m| sd_of_povm(pair, &m, tol)),
        12,
        &mut budget,
        0.05,
    );
    if ascent.value > value {
        if let Some(refined) = povm_from_factor_params(2, &params, tol) {
            value = ascent.value;
            povm = refined;
        }
    }
    Ok((value, povm))
}

/// Seeded search for the measurement maximizing the Shannon
/// distinguishability: structured starts (Helstrom, difference eigenbasis,
/// square-root measurement, computational basis) plus random POVMs, each
/// refined by pattern search over POVM factors; qubit pairs additionally get
/// the exhaustive real-angle grid.
pub fn sd_optimize(
    pair: &QuantumPair,
    cfg: SdConfig,
    tol: Tolerances,
) -> Result<SdEstimate, QdistError> {
    let dim = pair.dim();
    let bounds = sd_bounds(pair, tol)?;
    let m = cfg.outcomes.unwrap_or(dim + 1).max(2);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);

    let mut starts: Vec<Povm> = vec![
        helstrom_pvm(&pair.rho0, &pair.rho1, tol)?,
        difference_basis_pvm(pair, tol)?,
        square_root_measurement(pair, tol)?,
        computational_pvm(dim),
    ];
    for extra in 0..cfg.random_starts {
        if extra % 2 == 0 {
            starts.push(haar_pvm(dim, &mut rng));
        } else {
            let seed = rng.random::<u64>();
            starts.push(crate::measure::random_povm(dim, m, seed));
        }
    }

    let mut best_value = f64::NEG_INFINITY;
    let mut best_params: Vec<f64> = Vec::new();
    let mut best_stalled = false;
    for start in &starts {
        let mut params = factor_params_of_povm(start, m, tol)?;
        let mut budget = usize::MAX;
        let ascent = coordinate_ascent(
            &mut params,
            |p| povm_from_factor_params(dim, p, tol).map_or(-1.0, |m| sd_of_povm(pair, &m, tol)),
            cfg.sweeps,
            &mut budget,
            0.1,
        );
        if ascent.value > best_value {
            best_value = ascent.value;
            best_params = params;
            best_stalled = ascent.stalled;
        }
    }

    let mut best_povm = povm_from_factor_params(dim, &best_params, tol)
        .expect("winning parameters produced a measurement");
    let mut converged = best_stalled;
    if dim == 2 {
        let (grid_value, grid_povm) = sd_pvm_grid2(pair, 1000, tol)?;
        if grid_value > best_value {
            best_value = grid_value;
            best_povm = grid_povm;
            converged = true;
        }
    }

    // drop outcomes that never fire
    let kept: Vec<ComplexMatrix> = best_povm
        .elements()
        .iter()
        .filter(|e| e.trace().re > 1e-12)
        .cloned()
        .collect();
    if kept.len() >= 2 && kept.len() < best_povm.len() {
        best_povm = Povm::from_elements_unchecked(kept)?;
        best_value = best_value.max(sd_of_povm(pair, &best_povm, tol));
    }

    Ok(SdEstimate { value: best_value, povm: best_povm, bounds, converged })
}

/// Overlap estimate from the purification search.
#[derive(Clone, Copy, Debug)]
pub struct OverlapEstimate {
    pub value: f64,
    /// False when the evaluation budget ran out while still improving.
    pub converged: bool,
}

/// Stochastic maximization of `|<phi0| (I (x) U) |phi1>|` over ancilla
/// unitaries `U`, with `phi` the spectral purifications. The supremum equals
/// the Bhattacharyya overlap; the search arrives there without ever calling
/// the closed form. `budget` counts objective evaluations, split across
/// independent restarts because a single ascent can stall on a sign-flipped
/// critical point of the trace form.
pub fn overlap_search(
    pair: &QuantumPair,
    budget: usize,
    seed: u64,
    tol: Tolerances,
) -> Result<OverlapEstimate, QdistError> {
    const RESTARTS: usize = 3;

    let n = pair.dim();
    let phi0 = purify(&pair.rho0, tol)?;
    let phi1 = purify(&pair.rho1, tol)?;
    let a = ComplexMatrix::from_fn(n, |i, k| phi0.amplitudes()[i * n + k]);
    let b = ComplexMatrix::from_fn(n, |i, k| phi1.amplitudes()[i * n + k]);
    // <phi0| (I (x) U) |phi1> = sum_kl U_kl W_kl
    let w = a.adjoint().mul(&b);
    let objective = |u: &ComplexMatrix| {
        let mut acc = C64::ZERO;
        for k in 0..n {
            for l in 0..n {
                acc += u.at(k, l) * w.at(k, l);
            }
        }
        acc.norm()
    };

    let mut remaining = budget.max(2);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // identity first: exact for identical states and for pure inputs
    let mut best_value = objective(&ComplexMatrix::identity(n));
    remaining -= 1;
    let mut converged = true;

    for round in 0..RESTARTS {
        if remaining == 0 {
            converged = false;
            break;
        }
        let mut share = (remaining / (RESTARTS - round)).max(1).min(remaining);
        remaining -= share;

        // the round's start: best of a small sample, with the identity
        // seeding the first round
        let mut start_params = if round == 0 {
            Some(flatten_matrix(&ComplexMatrix::identity(n)))
        } else {
            None
        };
        let mut start_value = if round == 0 { best_value } else { f64::NEG_INFINITY };
        let sample_budget = (share / 4).clamp(1, 64).min(share.saturating_sub(1));
        for _ in 0..sample_budget {
            let g = ComplexMatrix::from_fn(n, |_, _| {
                C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
            });
            if let Some(u) = unitary_from_square(&g) {
                let value = objective(&u);
                share -= 1;
                if value > start_value {
                    start_value = value;
                    start_params = Some(flatten_matrix(&g));
                }
            }
        }
        let Some(mut params) = start_params else { continue };

        let ascent = coordinate_ascent(
            &mut params,
            |p| {
                let g = unflatten_matrix(n, p);
                unitary_from_square(&g).map_or(-1.0, |u| objective(&u))
            },
            10_000,
            &mut share,
            0.1,
        );
        remaining += share;
        best_value = best_value.max(ascent.value.max(start_value));
        converged &= ascent.stalled;
    }
    Ok(OverlapEstimate { value: best_value, converged })
}

fn flatten_matrix(m: &ComplexMatrix) -> Vec<f64> {
    let mut out = Vec::with_capacity(2 * m.data().len());
    for z in m.data() {
        out.push(z.re);
        out.push(z.im);
    }
    out
}

fn unflatten_matrix(dim: usize, params: &[f64]) -> ComplexMatrix {
    ComplexMatrix::from_fn(dim, |i, j| {
        let k = 2 * (i * dim + j);
        C64::new(params[k], params[k + 1])
    })
}

/// Absolute defect of overlap multiplicativity across a tensor product,
/// `|B(r0 (x) r1, r2 (x) r3) - B(r0, r2) B(r1, r3)|`.
pub fn check_b_multiplicative(
    r0: &DensityMatrix,
    r1: &DensityMatrix,
    r2: &DensityMatrix,
    r3: &DensityMatrix,
    tol: Tolerances,
) -> Result<f64, QdistError> {
    if r0.dim() != r2.dim() {
        return Err(QdistError::DimensionMismatch { left: r0.dim(), right: r2.dim() });
    }
    if r1.dim() != r3.dim() {
        return Err(QdistError::DimensionMismatch { left: r1.dim(), right: r3.dim() });
    }
    let t0 = tensor_product(r0.matrix(), r1.matrix())?;
    let t1 = tensor_product(r2.matrix(), r3.matrix())?;
    let joint = b_of_matrices(&t0, &t1, tol)?;
    let split = b_of_matrices(r0.matrix(), r2.matrix(), tol)?
        * b_of_matrices(r1.matrix(), r3.matrix(), tol)?;
    Ok((joint - split).abs())
}

fn mix(a: &DensityMatrix, b: &DensityMatrix, mu0: f64, tol: Tolerances) -> Result<DensityMatrix, QdistError> {
    let mat = a.matrix().scale(mu0).add(&b.matrix().scale(1.0 - mu0));
    Ok(DensityMatrix::new(mat, tol)?)
}

/// Concavity slack of the squared overlap in its first argument:
/// `B^2(mix, sigma) - [mu0 B^2(r0, sigma) + (1-mu0) B^2(r1, sigma)]`,
/// nonnegative up to rounding.
pub fn check_b_squared_concavity(
    r0: &DensityMatrix,
    r1: &DensityMatrix,
    sigma: &DensityMatrix,
    mu0: f64,
    tol: Tolerances,
) -> Result<f64, QdistError> {
    if !(0.0..=1.0).contains(&mu0) {
        return Err(QdistError::BadWeight { value: mu0 });
    }
    if r0.dim() != r1.dim() || r0.dim() != sigma.dim() {
        return Err(QdistError::DimensionMismatch { left: r0.dim(), right: sigma.dim() });
    }
    let mixed = mix(r0, r1, mu0, tol)?;
    let joint = b_of_matrices(mixed.matrix(), sigma.matrix(), tol)?.powi(2);
    let split = mu0 * b_of_matrices(r0.matrix(), sigma.matrix(), tol)?.powi(2)
        + (1.0 - mu0) * b_of_matrices(r1.matrix(), sigma.matrix(), tol)?.powi(2);
    Ok(joint - split)
}

/// Joint concavity slack of the overlap:
/// `B(mu0 r0 + mu1 r1, mu0 r2 + mu1 r3) - [mu0 B(r0, r2) + mu1 B(r1, r3)]`,
/// nonnegative up to rounding.
pub fn check_b_double_concavity(
    r0: &DensityMatrix,
    r1: &DensityMatrix,
    r2: &DensityMatrix,
    r3: &DensityMatrix,
    mu0: f64,
    tol: Tolerances,
) -> Result<f64, QdistError> {
    if !(0.0..=1.0).contains(&mu0) {
        return Err(QdistError::BadWeight { value: mu0 });
    }
    let dims = [r0.dim(), r1.dim(), r2.dim(), r3.dim()];
    if dims.iter().any(|&d| d != dims[0]) {
        return Err(QdistError::DimensionMismatch { left: dims[0], right: *dims.iter().find(|&&d| d != dims[0]).unwrap() });
    }
    let mix0 = mix(r0, r1, mu0, tol)?;
    let mix1 = mix(r2, r3, mu0, tol)?;
    let joint = b_of_matrices(mix0.matrix(), mix1.matrix(), tol)?;
    let split = mu0 * b_of_matrices(r0.matrix(), r2.matrix(), tol)?
        + (1.0 - mu0) * b_of_matrices(r1.matrix(), r3.matrix(), tol)?;
    Ok(joint - split)
}
