//! Randomized checks of the inequalities tying the four measures together.
//!
//! Every inequality written `lhs <= rhs` is tracked by its slack `rhs - lhs`:
//! a report carries the minimum slack seen over all trials and the number of
//! trials where the slack fell below the tolerance. Classical runs evaluate
//! exact closed forms and assert at a tight tolerance; quantum runs go
//! through the eigensolver and the measurement search, so they get a looser
//! one.
//!
//! The square-root overlap bound on the Shannon measure appears twice: once
//! with the overlap squared inside the root, which holds on every input
//! tried, and once without, which already fails on simple three-outcome
//! pairs. The unsquared form is tracked for the record but never asserted.

use std::io::{self, Write};
use std::ops::RangeInclusive;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::classical::{self, h, random_distribution, ClassicalError, HypothesisPair, ProbDist};
use crate::matcore::{C64, ComplexMatrix, Tolerances};
use crate::measure::{apply, helstrom_pvm, MeasureError};
use crate::qdist::{
    q_bhattacharyya, q_kolmogorov, q_pe, sd_optimize, QdistError, QuantumPair, SdConfig,
};
use crate::states::{random_density, random_pure, DensityMatrix, PureState, StateError};

/// Assertion tolerance for the closed-form classical checks.
pub const CLASSICAL_TOL: f64 = 1e-10;
/// Assertion tolerance for the quantum checks, looser to absorb eigensolver
/// and measurement-search round-off.
pub const QUANTUM_TOL: f64 = 1e-9;
/// Assertion tolerance for the entropy envelope grid.
pub const ENVELOPE_TOL: f64 = 1e-12;

#[derive(Debug, Error)]
pub enum VerifyError {
    #[error(transparent)]
    Classical(#[from] ClassicalError),
    #[error(transparent)]
    State(#[from] StateError),
    #[error(transparent)]
    Measure(#[from] MeasureError),
    #[error(transparent)]
    Qdist(#[from] QdistError),
}

/// Aggregate outcome of checking one inequality side over many trials.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct IneqReport {
    pub name: String,
    pub trials: u64,
    /// Minimum of `rhs - lhs` over all trials.
    pub worst_slack: f64,
    /// Trials where the slack fell below the check's tolerance.
    pub violations: u64,
    pub seed: u64,
}

impl IneqReport {
    pub fn passing(&self) -> bool {
        self.violations == 0
    }

    /// Whether a violation in this report should fail a run. The unsquared
    /// overlap bound is tracked for the record only.
    pub fn asserted(&self) -> bool {
        !self.name.ends_with("-stated")
    }
}

/// Writes one structured record per report, one line each.
pub fn write_reports<W: Write>(out: &mut W, reports: &[IneqReport]) -> io::Result<()> {
    for report in reports {
        let line = serde_json::to_string(report).expect("report serializes");
        writeln!(out, "{line}")?;
    }
    Ok(())
}

struct Tracker {
    name: &'static str,
    tol: f64,
    worst: f64,
    violations: u64,
}

impl Tracker {
    fn new(name: &'static str, tol: f64) -> Self {
        Tracker { name, tol, worst: f64::INFINITY, violations: 0 }
    }

    fn record(&mut self, slack: f64) {
        if slack < self.worst {
            self.worst = slack;
        }
        if slack < -self.tol {
            self.violations += 1;
        }
    }

    fn report(self, trials: u64, seed: u64) -> IneqReport {
        IneqReport {
            name: self.name.to_string(),
            trials,
            worst_slack: self.worst,
            violations: self.violations,
            seed,
        }
    }
}

// fixed pairs covering the degenerate corners: equal, disjoint, shared
// support, a small perturbation, and a point mass against uniform; the last
// two rows of the catalog sit on or across known equality edges
fn classical_battery() -> Vec<HypothesisPair> {
    let dist = |probs: Vec<f64>| ProbDist::new(probs, 1e-9).expect("battery rows are normalized");
    let pair = |a, b| HypothesisPair::new(a, b).expect("battery widths match");
    let uniform = vec![0.25; 4];
    let delta = 1e-7;
    vec![
        pair(dist(uniform.clone()), dist(uniform.clone())),
        pair(dist(vec![0.5, 0.5, 0.0, 0.0]), dist(vec![0.0, 0.0, 0.5, 0.5])),
        pair(dist(vec![0.5, 0.5, 0.0]), dist(vec![0.5, 0.0, 0.5])),
        pair(dist(vec![0.25 + delta, 0.25 - delta, 0.25, 0.25]), dist(uniform)),
        pair(dist(vec![1.0, 0.0]), dist(vec![0.5, 0.5])),
    ]
}

fn record_classical(t: &mut [Tracker; 8], pair: &HypothesisPair) {
    let pe = classical::pe(pair);
    let k = classical::kolmogorov(pair);
    let b = classical::bhattacharyya(pair);
    let sd = classical::shannon_dist(pair);
    t[0].record(-(pe - (0.5 - 0.5 * k)).abs());
    t[1].record(k - (1.0 - b));
    // K <= sqrt(1 - B^2) checked as 1 - B^2 - K^2: the root form cancels
    // catastrophically when B is near one
    t[2].record(1.0 - b * b - k * k);
    t[3].record(sd - (1.0 - h(pe)));
    t[4].record((1.0 - 2.0 * pe) - sd);
    t[5].record(sd - (1.0 - b));
    t[6].record((1.0 - h(0.5 - 0.5 * (1.0 - b * b).max(0.0).sqrt())) - sd);
    t[7].record((1.0 - h(0.5 - 0.5 * (1.0 - b).max(0.0).sqrt())) - sd);
}

/// Checks every classical inequality side on the edge battery followed by
/// distributions drawn uniformly from the simplex, plus the identity linking
/// the error probability to the Kolmogorov distance.
pub fn verify_classical(
    trials: u64,
    m_range: RangeInclusive<usize>,
    seed: u64,
) -> Vec<IneqReport> {
    assert!(trials >= 1);
    assert!(*m_range.start() >= 1 && m_range.start() <= m_range.end());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut trackers = [
        Tracker::new("PEIsK", CLASSICAL_TOL),
        Tracker::new("BLeqK-left", CLASSICAL_TOL),
        Tracker::new("BLeqK-right", CLASSICAL_TOL),
        Tracker::new("PELeqSD-left", CLASSICAL_TOL),
        Tracker::new("PELeqSD-right", CLASSICAL_TOL),
        Tracker::new("BLeqSD-left", CLASSICAL_TOL),
        Tracker::new("BLeqSD-right", CLASSICAL_TOL),
        Tracker::new("BLeqSD-right-stated", CLASSICAL_TOL),
    ];
    let battery = classical_battery();
    for i in 0..trials {
        let pair = match battery.get(i as usize) {
            Some(p) => p.clone(),
            None => {
                let m = rng.random_range(m_range.clone());
                let p0 = random_distribution(m, &mut rng);
                let p1 = random_distribution(m, &mut rng);
                HypothesisPair::new(p0, p1).expect("sampled widths match")
            }
        };
        record_classical(&mut trackers, &pair);
    }
    trackers.into_iter().map(|t| t.report(trials, seed)).collect()
}

// equal, orthogonal, commuting with a shared component, a small drift, and a
// random pure pair; the shared-component pair sits exactly on the lower
// overlap bound for the Shannon measure and across the unsquared upper one
fn quantum_battery(rng: &mut ChaCha8Rng, tol: Tolerances) -> Result<Vec<QuantumPair>, VerifyError> {
    let rho = random_density(2, 2, rng, tol);
    let identical = QuantumPair::new(rho.clone(), rho.clone())?;

    let basis0 = PureState::new(vec![C64::new(1.0, 0.0), C64::new(0.0, 0.0)], tol)?;
    let basis1 = PureState::new(vec![C64::new(0.0, 0.0), C64::new(1.0, 0.0)], tol)?;
    let orthogonal = QuantumPair::new(
        DensityMatrix::from_pure(&basis0),
        DensityMatrix::from_pure(&basis1),
    )?;

    let diag = |spectrum: [f64; 3]| {
        let m = ComplexMatrix::from_fn(3, |i, j| {
            if i == j { C64::new(spectrum[i], 0.0) } else { C64::new(0.0, 0.0) }
        });
        DensityMatrix::new(m, tol)
    };
    let shared = QuantumPair::new(diag([0.5, 0.5, 0.0])?, diag([0.5, 0.0, 0.5])?)?;

    let sigma = random_density(2, 2, rng, tol);
    let eps = 1e-7;
    let drift = rho.matrix().scale(1.0 - eps).add(&sigma.matrix().scale(eps));
    let near = QuantumPair::new(rho, DensityMatrix::new(drift, tol)?)?;

    let pures = QuantumPair::new(
        DensityMatrix::from_pure(&random_pure(2, rng)),
        DensityMatrix::from_pure(&random_pure(2, rng)),
    )?;

    Ok(vec![identical, orthogonal, shared, near, pures])
}

fn record_quantum(
    t: &mut [Tracker; 9],
    pair: &QuantumPair,
    sd_seed: u64,
    tol: Tolerances,
) -> Result<(), VerifyError> {
    let k = q_kolmogorov(pair, tol)?;
    let pe = q_pe(pair, tol)?;
    let b = q_bhattacharyya(pair, tol)?;
    let est = sd_optimize(pair, SdConfig::light(sd_seed), tol)?;
    let sd = est.value;

    // dual route for the error probability: the spectral split measurement
    // must reproduce the closed form through an actual measurement
    let povm = helstrom_pvm(pair.rho0(), pair.rho1(), tol)?;
    let induced = HypothesisPair::new(
        apply(&povm, pair.rho0(), tol)?,
        apply(&povm, pair.rho1(), tol)?,
    )?;
    let achieved = classical::pe(&induced);
    let closed = 0.5 - 0.5 * k;
    t[0].record(-(achieved - pe).abs().max(-(closed - pe).abs()));
    t[1].record(k - (1.0 - b));
    // squared form, as in the classical battery
    t[2].record(1.0 - b * b - k * k);
    t[3].record(sd - (1.0 - h(pe)));
    t[4].record(k - sd);
    t[5].record(sd - (1.0 - b));
    t[6].record((1.0 - h(0.5 - 0.5 * (1.0 - b * b).max(0.0).sqrt())) - sd);
    t[7].record((1.0 - h(0.5 - 0.5 * (1.0 - b).max(0.0).sqrt())) - sd);
    t[8].record(est.bounds.upper() - est.bounds.lower());
    Ok(())
}

/// Checks every quantum inequality side on the edge battery followed by
/// random density pairs, mixing full-rank and pure draws.
///
/// The Shannon measure has no closed form, so the search value stands in for
/// it. The value is a certified lower bound on the true maximum: a
/// nonnegative slack on a left side confirms the inequality itself, while a
/// nonnegative slack on a right side confirms the bound chain is consistent.
/// The sandwich ordering check covers the closed-form bounds against each
/// other.
pub fn verify_quantum(
    trials: u64,
    dim_range: RangeInclusive<usize>,
    seed: u64,
    tol: Tolerances,
) -> Result<Vec<IneqReport>, VerifyError> {
    assert!(trials >= 1);
    assert!(*dim_range.start() >= 2 && dim_range.start() <= dim_range.end());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut trackers = [
        Tracker::new("QPEIsK", QUANTUM_TOL),
        Tracker::new("QBLeqK-left", QUANTUM_TOL),
        Tracker::new("QBLeqK-right", QUANTUM_TOL),
        Tracker::new("QPELeqSD-left", QUANTUM_TOL),
        Tracker::new("QPELeqSD-right", QUANTUM_TOL),
        Tracker::new("QBLeqSD-left", QUANTUM_TOL),
        Tracker::new("QBLeqSD-right", QUANTUM_TOL),
        Tracker::new("QBLeqSD-right-stated", QUANTUM_TOL),
        Tracker::new("QSDBounds", QUANTUM_TOL),
    ];
    let battery = quantum_battery(&mut rng, tol)?;
    for i in 0..trials {
        let pair = match battery.get(i as usize) {
            Some(p) => p.clone(),
            None => {
                let dim = rng.random_range(dim_range.clone());
                let rank = if i % 4 == 3 { 1 } else { dim };
                let rho0 = random_density(dim, rank, &mut rng, tol);
                let rho1 = random_density(dim, rank, &mut rng, tol);
                QuantumPair::new(rho0, rho1)?
            }
        };
        let sd_seed = rng.random::<u64>();
        record_quantum(&mut trackers, &pair, sd_seed, tol)?;
    }
    Ok(trackers.into_iter().map(|t| t.report(trials, seed)).collect())
}

/// Checks `2 min(x, 1-x) <= h(x) <= 2 sqrt(x (1-x))` on an even grid over
/// the unit interval. Deterministic, so the report's seed field is fixed at
/// zero.
pub fn verify_entropy_envelope(grid_points: usize) -> IneqReport {
    assert!(grid_points >= 2);
    let mut tracker = Tracker::new("EntropyEnvelope", ENVELOPE_TOL);
    for i in 0..grid_points {
        let x = i as f64 / (grid_points - 1) as f64;
        let hx = h(x);
        tracker.record(hx - 2.0 * x.min(1.0 - x));
        tracker.record(2.0 * (x * (1.0 - x)).sqrt() - hx);
    }
    tracker.report(grid_points as u64, 0)
}
