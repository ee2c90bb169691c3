//! Distinguishability measures for pairs of classical probability
//! distributions under equal priors: probability of error, Kolmogorov
//! distance, Bhattacharyya coefficient and Shannon distinguishability,
//! together with the binary entropy and the envelope functions relating the
//! error-based and entropy-based quantities.

use rand::Rng;
use rand_distr::Exp1;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ClassicalError {
    #[error("probability at index {index} is negative: {value}")]
    NegativeProbability { index: usize, value: f64 },
    #[error("probabilities sum to {sum}, expected 1")]
    NotNormalized { sum: f64 },
    #[error("distribution must have at least one outcome")]
    Empty,
    #[error("probabilities must be finite")]
    NonFinite,
    #[error("hypotheses have different outcome counts: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("argument {value} is outside [0, 1]")]
    DomainError { value: f64 },
}

/// Probability distribution over a finite outcome set.
#[derive(Clone, Debug)]
pub struct ProbDist {
    probs: Vec<f64>,
}

impl ProbDist {
    /// Validates non-negativity and normalization within `eig_tol`.
    pub fn new(probs: Vec<f64>, eig_tol: f64) -> Result<Self, ClassicalError> {
        if probs.is_empty() {
            return Err(ClassicalError::Empty);
        }
        if probs.iter().any(|p| !p.is_finite()) {
            return Err(ClassicalError::NonFinite);
        }
        for (index, &value) in probs.iter().enumerate() {
            if value < 0.0 {
                return Err(ClassicalError::NegativeProbability { index, value });
            }
        }
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > eig_tol {
            return Err(ClassicalError::NotNormalized { sum });
        }
        Ok(ProbDist { probs })
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }
}

/// Two equiprobable hypotheses over a shared outcome set.
#[derive(Clone, Debug)]
pub struct HypothesisPair {
    p0: ProbDist,
    p1: ProbDist,
}

impl HypothesisPair {
    pub fn new(p0: ProbDist, p1: ProbDist) -> Result<Self, ClassicalError> {
        if p0.len() != p1.len() {
            return Err(ClassicalError::LengthMismatch { left: p0.len(), right: p1.len() });
        }
        Ok(HypothesisPair { p0, p1 })
    }

    pub fn p0(&self) -> &ProbDist {
        &self.p0
    }

    pub fn p1(&self) -> &ProbDist {
        &self.p1
    }

    pub fn len(&self) -> usize {
        self.p0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.p0.is_empty()
    }

    /// Marginal probability of outcome `x` under the equal-prior mixture.
    pub fn marginal(&self, x: usize) -> f64 {
        0.5 * (self.p0.probs[x] + self.p1.probs[x])
    }

    /// Posterior probability of hypothesis 0 given outcome `x`, undefined
    /// when the outcome never occurs.
    pub fn posterior0(&self, x: usize) -> Option<f64> {
        let p = self.marginal(x);
        (p > 0.0).then(|| 0.5 * self.p0.probs[x] / p)
    }
}

/// Probability of error of the optimal guess, `(1/2) sum_x min(p0, p1)`.
pub fn pe(pair: &HypothesisPair) -> f64 {
    let sum: f64 = pair
        .p0
        .probs
        .iter()
        .zip(&pair.p1.probs)
        .map(|(&a, &b)| a.min(b))
        .sum();
    0.5 * sum
}

/// Kolmogorov distance, `(1/2) sum_x |p0 - p1|`.
pub fn kolmogorov(pair: &HypothesisPair) -> f64 {
    let sum: f64 = pair
        .p0
        .probs
        .iter()
        .zip(&pair.p1.probs)
        .map(|(&a, &b)| (a - b).abs())
        .sum();
    0.5 * sum
}

/// Bhattacharyya coefficient, `sum_x sqrt(p0 p1)`.
pub fn bhattacharyya(pair: &HypothesisPair) -> f64 {
    pair.p0
        .probs
        .iter()
        .zip(&pair.p1.probs)
        .map(|(&a, &b)| (a * b).sqrt())
        .sum()
}

/// Shannon distinguishability: the mutual information between the hypothesis
/// bit and the outcome, `1 - sum_x p(x) h(p(0|x))` in bits. Outcomes with
/// zero marginal probability contribute nothing.
pub fn shannon_dist(pair: &HypothesisPair) -> f64 {
    let mut acc = 0.0;
    for x in 0..pair.len() {
        let p = pair.marginal(x);
        if p <= 0.0 {
            continue;
        }
        let r0 = 0.5 * pair.p0.probs[x] / p;
        acc += p * h(r0);
    }
    (1.0 - acc).clamp(0.0, 1.0)
}

// binary entropy with the argument snapped into [0, 1]; callers feed values
// that can dip outside by rounding
pub(crate) fn h(p: f64) -> f64 {
    let p = p.clamp(0.0, 1.0);
    let q = 1.0 - p;
    let mut acc = 0.0;
    if p > 0.0 {
        acc -= p * p.log2();
    }
    if q > 0.0 {
        acc -= q * q.log2();
    }
    acc
}

/// Binary entropy `h(p) = -p log2 p - (1-p) log2 (1-p)`, zero at both ends.
pub fn binary_entropy(p: f64) -> Result<f64, ClassicalError> {
    if !(0.0..=1.0).contains(&p) {
        return Err(ClassicalError::DomainError { value: p });
    }
    Ok(h(p))
}

/// Error-probability envelope `g(r) = 1/2 - (1/2) sqrt(1 - r^2)` on [0, 1].
pub fn envelope_g(r: f64) -> Result<f64, ClassicalError> {
    if !(0.0..=1.0).contains(&r) {
        return Err(ClassicalError::DomainError { value: r });
    }
    Ok(0.5 - 0.5 * (1.0 - r * r).sqrt())
}

/// Overlap envelope `k(r) = 2 sqrt(r (1 - r))` on [0, 1]. Composed the other
/// way, `g(k(r))` collapses to `min(r, 1-r)` exactly.
pub fn envelope_k(r: f64) -> Result<f64, ClassicalError> {
    if !(0.0..=1.0).contains(&r) {
        return Err(ClassicalError::DomainError { value: r });
    }
    Ok(2.0 * (r * (1.0 - r)).sqrt())
}

/// Draws a distribution over `m` outcomes, uniform on the simplex.
pub fn random_distribution(m: usize, rng: &mut impl Rng) -> ProbDist {
    assert!(m >= 1);
    loop {
        let mut probs: Vec<f64> = (0..m).map(|_| rng.sample(Exp1)).collect();
        let sum: f64 = probs.iter().sum();
        if sum > 0.0 && sum.is_finite() {
            for p in &mut probs {
                *p /= sum;
            }
            return ProbDist { probs };
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    const EIG_TOL: f64 = 1e-9;

    fn pair(p0: Vec<f64>, p1: Vec<f64>) -> HypothesisPair {
        HypothesisPair::new(ProbDist::new(p0, EIG_TOL).unwrap(), ProbDist::new(p1, EIG_TOL).unwrap())
            .unwrap()
    }

    #[test]
    fn measures_for_point_mass_vs_uniform() {
        let pair = pair(vec![1.0, 0.0], vec![0.5, 0.5]);
        assert!((pe(&pair) - 0.25).abs() <= 1e-15);
        assert!((kolmogorov(&pair) - 0.5).abs() <= 1e-15);
        assert!((bhattacharyya(&pair) - 0.5f64.sqrt()).abs() <= 1e-15);
        let want = 1.0 - 0.75 * h(1.0 / 3.0);
        assert!((want - 0.3112781244591328).abs() <= 1e-15);
        assert!((shannon_dist(&pair) - want).abs() <= 1e-15);
    }

    #[test]
    fn measures_for_identical_hypotheses() {
        let pair = pair(vec![0.2, 0.3, 0.5], vec![0.2, 0.3, 0.5]);
        assert_eq!(pe(&pair), 0.5);
        assert_eq!(kolmogorov(&pair), 0.0);
        assert!((bhattacharyya(&pair) - 1.0).abs() <= 1e-15);
        assert_eq!(shannon_dist(&pair), 0.0);
    }

    #[test]
    fn measures_for_disjoint_supports() {
        let pair = pair(vec![0.5, 0.5, 0.0, 0.0], vec![0.0, 0.0, 0.25, 0.75]);
        assert_eq!(pe(&pair), 0.0);
        assert_eq!(kolmogorov(&pair), 1.0);
        assert_eq!(bhattacharyya(&pair), 0.0);
        assert_eq!(shannon_dist(&pair), 1.0);
    }

    #[test]
    fn shared_component_saturates_overlap_bound() {
        // one common outcome plus disjoint tails: 1 - B = SD exactly
        let pair = pair(vec![0.5, 0.5, 0.0], vec![0.5, 0.0, 0.5]);
        assert!((pe(&pair) - 0.25).abs() <= 1e-15);
        assert!((bhattacharyya(&pair) - 0.5).abs() <= 1e-15);
        assert!((shannon_dist(&pair) - 0.5).abs() <= 1e-15);
    }

    #[test]
    fn binary_entropy_reference_points() {
        assert_eq!(binary_entropy(0.0).unwrap(), 0.0);
        assert_eq!(binary_entropy(1.0).unwrap(), 0.0);
        assert_eq!(binary_entropy(0.5).unwrap(), 1.0);
        assert!((binary_entropy(0.25).unwrap() - 0.8112781244591328).abs() <= 1e-15);
        assert!(matches!(binary_entropy(1.5), Err(ClassicalError::DomainError { .. })));
        assert!(matches!(binary_entropy(-0.1), Err(ClassicalError::DomainError { .. })));
    }

    #[test]
    fn envelope_endpoints() {
        assert_eq!(envelope_g(0.0).unwrap(), 0.0);
        assert_eq!(envelope_g(1.0).unwrap(), 0.5);
        assert_eq!(envelope_k(0.0).unwrap(), 0.0);
        assert_eq!(envelope_k(0.5).unwrap(), 1.0);
        assert_eq!(envelope_k(1.0).unwrap(), 0.0);
        assert!(matches!(envelope_g(1.1), Err(ClassicalError::DomainError { .. })));
    }

    #[test]
    fn envelope_composition_collapses_to_min() {
        for i in 0..=1000 {
            let r = i as f64 / 1000.0;
            let composed = envelope_g(envelope_k(r).unwrap()).unwrap();
            let want = r.min(1.0 - r);
            assert!((composed - want).abs() <= 1e-12, "r = {r}: {composed} vs {want}");
        }
    }

    #[test]
    fn entropy_sits_between_envelopes() {
        for i in 0..=1000 {
            let r = i as f64 / 1000.0;
            let lower = 2.0 * r.min(1.0 - r);
            let upper = envelope_k(r).unwrap();
            let entropy = h(r);
            assert!(entropy >= lower - 1e-12);
            assert!(entropy <= upper + 1e-12);
        }
    }

    #[test]
    fn validation_rejects_bad_distributions() {
        assert!(matches!(ProbDist::new(vec![], EIG_TOL), Err(ClassicalError::Empty)));
        assert!(matches!(
            ProbDist::new(vec![0.5, -0.5, 1.0], EIG_TOL),
            Err(ClassicalError::NegativeProbability { index: 1, .. })
        ));
        assert!(matches!(
            ProbDist::new(vec![0.5, 0.6], EIG_TOL),
            Err(ClassicalError::NotNormalized { .. })
        ));
        let short = ProbDist::new(vec![1.0], EIG_TOL).unwrap();
        let long = ProbDist::new(vec![0.5, 0.5], EIG_TOL).unwrap();
        assert!(matches!(
            HypothesisPair::new(short, long),
            Err(ClassicalError::LengthMismatch { left: 1, right: 2 })
        ));
    }

    #[test]
    fn posterior_handles_dead_outcomes() {
        let pair = pair(vec![0.5, 0.5, 0.0], vec![1.0, 0.0, 0.0]);
        assert!((pair.posterior0(0).unwrap() - 1.0 / 3.0).abs() <= 1e-15);
        assert_eq!(pair.posterior0(1), Some(1.0));
        assert_eq!(pair.posterior0(2), None);
    }

    #[test]
    fn random_distribution_is_seeded_and_normalized() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let a = random_distribution(5, &mut rng);
        assert!((a.probs().iter().sum::<f64>() - 1.0).abs() <= 1e-12);
        assert!(a.probs().iter().all(|&p| p >= 0.0));
        let mut rng2 = ChaCha8Rng::seed_from_u64(7);
        let b = random_distribution(5, &mut rng2);
        assert_eq!(a.probs(), b.probs());
    }

    proptest! {
        #[test]
        fn measures_stay_in_range_and_pe_matches_k(seed in 0u64..500, m in 2usize..12) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let p0 = random_distribution(m, &mut rng);
            let p1 = random_distribution(m, &mut rng);
            let pair = HypothesisPair::new(p0, p1).unwrap();
            let e = pe(&pair);
            let k = kolmogorov(&pair);
            let b = bhattacharyya(&pair);
            let sd = shannon_dist(&pair);
            prop_assert!((0.0..=0.5).contains(&e));
            prop_assert!((0.0..=1.0).contains(&k));
            prop_assert!((0.0..=1.0).contains(&b));
            prop_assert!((0.0..=1.0).contains(&sd));
            prop_assert!((e - (0.5 - 0.5 * k)).abs() <= 1e-12);
        }
    }
}
