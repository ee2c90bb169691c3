//! Exponential indistinguishability for indexed families of hypothesis
//! pairs: measure the per-`n` gaps, fit a decay rate, certify or refute the
//! bound `K(n) <= epsilon^n`, and audit that all four measures decay at the
//! certified rate through their inequality envelopes.
//!
//! A family maps a security parameter `n` to either a classical distribution
//! pair or a density-matrix pair. Convergence conventions differ per
//! measure: the Kolmogorov distance and Shannon distinguishability fall to
//! zero, while the error probability rises to one half and the overlap rises
//! to one, so each measure's "gap" is its distance from the indistinguishable
//! limit.

use thiserror::Error;

use crate::classical::{
    bhattacharyya, kolmogorov, pe, shannon_dist, ClassicalError, HypothesisPair, ProbDist,
};
use crate::matcore::{MatError, Tolerances};
use crate::parity::{build_parity_states, ParityConfig, ParityError};
use crate::qdist::{q_bhattacharyya, q_kolmogorov, q_pe, QdistError, QuantumPair};

#[derive(Debug, Error)]
pub enum FamilyError {
    #[error("evaluation horizon {n_max} is too short, need at least 3")]
    HorizonTooShort { n_max: u32 },
    #[error("family index {n} outside [1, {n_max}]")]
    IndexOutOfRange { n: u32, n_max: u32 },
    #[error("family is not certified: gap {value} at n = {witness_n} admits no sub-unit rate")]
    NotCertified { witness_n: u32, value: f64 },
    #[error(transparent)]
    Classical(#[from] ClassicalError),
    #[error(transparent)]
    Qdist(#[from] QdistError),
    #[error(transparent)]
    Parity(#[from] ParityError),
    #[error(transparent)]
    Mat(#[from] MatError),
}

/// One evaluated member of a family.
#[derive(Clone, Debug)]
pub enum FamilyPair {
    Classical(HypothesisPair),
    Quantum(QuantumPair),
}

/// A family of hypothesis pairs indexed by the security parameter.
pub struct PairFamily {
    name: String,
    n_max: u32,
    generator: Box<dyn Fn(u32) -> Result<FamilyPair, FamilyError>>,
}

impl std::fmt::Debug for PairFamily {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("PairFamily")
            .field("name", &self.name)
            .field("n_max", &self.n_max)
            .finish_non_exhaustive()
    }
}

impl PairFamily {
    pub fn new(
        name: impl Into<String>,
        n_max: u32,
        generator: impl Fn(u32) -> Result<FamilyPair, FamilyError> + 'static,
    ) -> Self {
        PairFamily {
            name: name.into(),
            n_max,
            generator: Box::new(generator),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn n_max(&self) -> u32 {
        self.n_max
    }

    pub fn pair_at(&self, n: u32) -> Result<FamilyPair, FamilyError> {
        if n == 0 || n > self.n_max {
            return Err(FamilyError::IndexOutOfRange { n, n_max: self.n_max });
        }
        (self.generator)(n)
    }

    /// The uniform distribution over length-`n` bit strings against the
    /// variant that moves all probability of the all-zeros string onto the
    /// all-ones string. The distance halves with every extra bit, making
    /// this the canonical certified-at-one-half example.
    pub fn uniform_vs_modified(n_max: u32, support_cap: usize) -> Self {
        PairFamily::new("uniform-vs-modified", n_max, move |n| {
            let size = 1usize.checked_shl(n).unwrap_or(usize::MAX);
            if size > support_cap {
                return Err(FamilyError::Mat(MatError::DimensionOverflow {
                    dim: size,
                    cap: support_cap,
                }));
            }
            let weight = (-(n as f64)).exp2();
            let p0 = vec![weight; size];
            let mut p1 = p0.clone();
            p1[0] = 0.0;
            p1[size - 1] = 2.0 * weight;
            let pair = HypothesisPair::new(ProbDist::new(p0, 1e-9)?, ProbDist::new(p1, 1e-9)?)?;
            Ok(FamilyPair::Classical(pair))
        })
    }

    /// The even/odd parity mixtures at a fixed encoding angle. Their
    /// Kolmogorov distance is `|sin(2 alpha)|^n`, so any angle away from
    /// `pi/4` gives a certified family.
    pub fn parity(alpha: f64, n_max: u32, dim_cap: usize, tol: Tolerances) -> Self {
        PairFamily::new("parity", n_max, move |n| {
            let cfg = ParityConfig::new(alpha, n)?;
            Ok(FamilyPair::Quantum(build_parity_states(&cfg, dim_cap, tol)?))
        })
    }

    /// A family given as an explicit list of pairs, one per `n` starting at
    /// `n = 1`.
    pub fn explicit(name: impl Into<String>, pairs: Vec<FamilyPair>) -> Self {
        let n_max = pairs.len() as u32;
        PairFamily::new(name, n_max, move |n| Ok(pairs[(n - 1) as usize].clone()))
    }
}

/// Which distinguishability measure a gap or fit refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MeasureKind {
    Kolmogorov,
    ProbError,
    Bhattacharyya,
    Shannon,
}

impl MeasureKind {
    pub const ALL: [MeasureKind; 4] = [
        MeasureKind::Kolmogorov,
        MeasureKind::ProbError,
        MeasureKind::Bhattacharyya,
        MeasureKind::Shannon,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            MeasureKind::Kolmogorov => "kolmogorov",
            MeasureKind::ProbError => "prob-error",
            MeasureKind::Bhattacharyya => "bhattacharyya",
            MeasureKind::Shannon => "shannon",
        }
    }
}

/// Distance from the indistinguishable limit under the given measure: `K`
/// and `SD` directly, `1/2 - PE` and `1 - B` for the measures that converge
/// to one half and one.
///
/// For quantum pairs the Shannon gap is taken as the Kolmogorov distance,
/// its tight upper envelope; exponential decay of the envelope certifies
/// decay of the measure itself without running the measurement optimizer
/// per member.
pub fn measure_gap(pair: &FamilyPair, kind: MeasureKind, tol: Tolerances) -> Result<f64, FamilyError> {
    let gap = match pair {
        FamilyPair::Classical(p) => match kind {
            MeasureKind::Kolmogorov => kolmogorov(p),
            MeasureKind::ProbError => 0.5 - pe(p),
            MeasureKind::Bhattacharyya => 1.0 - bhattacharyya(p),
            MeasureKind::Shannon => shannon_dist(p),
        },
        FamilyPair::Quantum(p) => match kind {
            MeasureKind::Kolmogorov => q_kolmogorov(p, tol)?,
            MeasureKind::ProbError => 0.5 - q_pe(p, tol)?,
            MeasureKind::Bhattacharyya => 1.0 - q_bhattacharyya(p, tol)?,
            MeasureKind::Shannon => q_kolmogorov(p, tol)?,
        },
    };
    Ok(gap)
}

/// A fitted exponential decay rate: the certified bound is
/// `gap(n) <= epsilon^n` for every `n` in `[n0, n_max]`.
#[derive(Clone, Debug)]
pub struct RateFit {
    pub epsilon: f64,
    pub n0: u32,
    pub measure: MeasureKind,
    /// per-`n` deviations of `log2 gap` from the fitted line, over the
    /// fitting window
    pub residuals: Vec<(u32, f64)>,
}

/// Outcome of rate certification.
#[derive(Clone, Debug)]
pub enum Certification {
    /// A sub-unit rate fits and the bound holds over the window.
    Certified(RateFit),
    /// Every gap is at (or numerically below) zero; the family is vacuously
    /// certified and the rate is reported as zero.
    Degenerate { measure: MeasureKind },
    /// No sub-unit rate fits the observed gaps.
    Refuted {
        measure: MeasureKind,
        witness_n: u32,
        value: f64,
    },
}

impl Certification {
    /// The certified rate: the fitted epsilon, zero for a degenerate
    /// family, none when refuted.
    pub fn epsilon(&self) -> Option<f64> {
        match self {
            Certification::Certified(fit) => Some(fit.epsilon),
            Certification::Degenerate { .. } => Some(0.0),
            Certification::Refuted { .. } => None,
        }
    }
}

/// Least-squares slope and intercept of `log2 gap` against `n`.
fn log_fit(points: &[(u32, f64)]) -> (f64, f64) {
    let m = points.len() as f64;
    let mean_x = points.iter().map(|&(n, _)| n as f64).sum::<f64>() / m;
    let mean_y = points.iter().map(|&(_, y)| y).sum::<f64>() / m;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for &(n, y) in points {
        let dx = n as f64 - mean_x;
        sxx += dx * dx;
        sxy += dx * (y - mean_y);
    }
    let slope = sxy / sxx;
    (slope, mean_y - slope * mean_x)
}

fn certify_gaps(gaps: &[(u32, f64)], measure: MeasureKind, tol: f64) -> Certification {
    // fit over the largest trailing window of strictly positive gaps; exact
    // zeros carry no rate information on a log scale
    let suffix_start = gaps
        .iter()
        .rposition(|&(_, g)| g <= 0.0)
        .map(|i| i + 1)
        .unwrap_or(0);
    let window = &gaps[suffix_start..];
    if window.is_empty() {
        return Certification::Degenerate { measure };
    }
    let logs: Vec<(u32, f64)> = window.iter().map(|&(n, g)| (n, g.log2())).collect();
    let (slope, intercept) = if logs.len() == 1 {
        (logs[0].1 / logs[0].0 as f64, 0.0)
    } else {
        log_fit(&logs)
    };
    let epsilon = slope.exp2() * (1.0 + tol);
    if !(epsilon > 0.0 && epsilon < 1.0) {
        // the trend does not decay; report the member that constrains the
        // rate hardest
        let &(witness_n, value) = window
            .iter()
            .max_by(|a, b| {
                let ra = a.1.powf(1.0 / a.0 as f64);
                let rb = b.1.powf(1.0 / b.0 as f64);
                ra.partial_cmp(&rb).expect("finite gaps")
            })
            .expect("window is nonempty");
        return Certification::Refuted {
            measure,
            witness_n,
            value,
        };
    }
    // smallest n0 whose entire suffix satisfies the bound
    let mut n0 = None;
    let mut all_hold = true;
    for &(n, g) in window.iter().rev() {
        if g <= epsilon.powi(n as i32) {
            if all_hold {
                n0 = Some(n);
            }
        } else {
            all_hold = false;
        }
    }
    let Some(n0) = n0 else {
        let &(witness_n, value) = window.last().expect("window is nonempty");
        return Certification::Refuted {
            measure,
            witness_n,
            value,
        };
    };
    let residuals = logs
        .iter()
        .map(|&(n, y)| (n, y - (intercept + slope * n as f64)))
        .collect();
    Certification::Certified(RateFit {
        epsilon,
        n0,
        measure,
        residuals,
    })
}

/// Fit and certify the defining Kolmogorov-distance decay of a family.
///
/// The rate is two to the least-squares slope of `log2 K(n)` over the
/// largest trailing window of positive gaps, inflated by `tol`; `n0` is the
/// smallest index from which the bound `K(n) <= epsilon^n` holds through the
/// horizon. A family whose gaps vanish identically is reported degenerate,
/// and one whose trend does not decay is refuted with the witnessing index.
pub fn certify_exp_indist(
    fam: &PairFamily,
    tol: f64,
    tolerances: Tolerances,
) -> Result<Certification, FamilyError> {
    if fam.n_max() < 3 {
        return Err(FamilyError::HorizonTooShort { n_max: fam.n_max() });
    }
    let mut gaps = Vec::with_capacity(fam.n_max() as usize);
    for n in 1..=fam.n_max() {
        let pair = fam.pair_at(n)?;
        gaps.push((n, measure_gap(&pair, MeasureKind::Kolmogorov, tolerances)?));
    }
    Ok(certify_gaps(&gaps, MeasureKind::Kolmogorov, tol))
}

/// Slack tolerance for the per-`n` envelope checks in the audit: measured
/// gaps sit on eigensolver output, so exact-arithmetic inequalities hold
/// only to solver precision.
pub const ENVELOPE_SLACK: f64 = 1e-9;

/// One measure's row in the equivalence audit.
#[derive(Clone, Debug)]
pub struct AuditRow {
    pub measure: MeasureKind,
    pub gaps: Vec<(u32, f64)>,
    /// this measure's own fitted certification
    pub fit: Certification,
    /// worst slack of the envelope implied by the Kolmogorov rate:
    /// `epsilon^n / 2` for the error probability, `epsilon^n` for the rest
    pub worst_slack: f64,
    pub envelope_ok: bool,
}

/// The four-measure equivalence audit.
#[derive(Clone, Debug)]
pub struct AuditTable {
    pub family: String,
    /// rate certified from the Kolmogorov distance, zero for a degenerate
    /// family
    pub epsilon: f64,
    pub n0: u32,
    pub rows: Vec<AuditRow>,
}

impl AuditTable {
    pub fn all_envelopes_hold(&self) -> bool {
        self.rows.iter().all(|row| row.envelope_ok)
    }
}

/// Certify the family under the Kolmogorov distance, then confirm that
/// every measure's gap decays inside the envelope its inequality chain
/// implies: `1/2 - PE(n) <= epsilon^n / 2` through the exact identity with
/// `K`, and `1 - B(n)`, `SD(n) <= epsilon^n` through the two-sided bounds.
/// Each row also carries the measure's own fitted rate.
///
/// A refuted family is an error; a degenerate family audits against a zero
/// envelope, which identical pairs meet at solver precision.
pub fn equivalence_audit(
    fam: &PairFamily,
    tol: f64,
    tolerances: Tolerances,
) -> Result<AuditTable, FamilyError> {
    let certification = certify_exp_indist(fam, tol, tolerances)?;
    let (epsilon, n0) = match &certification {
        Certification::Certified(fit) => (fit.epsilon, fit.n0),
        Certification::Degenerate { .. } => (0.0, 1),
        Certification::Refuted { witness_n, value, .. } => {
            return Err(FamilyError::NotCertified {
                witness_n: *witness_n,
                value: *value,
            });
        }
    };
    let mut rows = Vec::with_capacity(MeasureKind::ALL.len());
    for kind in MeasureKind::ALL {
        let mut gaps = Vec::with_capacity(fam.n_max() as usize);
        for n in 1..=fam.n_max() {
            let pair = fam.pair_at(n)?;
            gaps.push((n, measure_gap(&pair, kind, tolerances)?));
        }
        let fit = certify_gaps(&gaps, kind, tol);
        let mut worst_slack = f64::INFINITY;
        for &(n, gap) in gaps.iter().filter(|&&(n, _)| n >= n0) {
            let envelope = epsilon.powi(n as i32);
            let bound = match kind {
                MeasureKind::ProbError => 0.5 * envelope,
                _ => envelope,
            };
            worst_slack = worst_slack.min(bound - gap);
        }
        rows.push(AuditRow {
            measure: kind,
            gaps,
            fit,
            worst_slack,
            envelope_ok: worst_slack >= -ENVELOPE_SLACK,
        });
    }
    Ok(AuditTable {
        family: fam.name().to_string(),
        epsilon,
        n0,
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const TOL: Tolerances = Tolerances {
        herm: 1e-10,
        psd: 1e-8,
        eig: 1e-9,
    };

    fn constant_family(gap: f64, n_max: u32) -> PairFamily {
        PairFamily::new("constant", n_max, move |_| {
            let p0 = ProbDist::new(vec![0.5 + gap / 2.0, 0.5 - gap / 2.0], 1e-9).unwrap();
            let p1 = ProbDist::new(vec![0.5 - gap / 2.0, 0.5 + gap / 2.0], 1e-9).unwrap();
            Ok(FamilyPair::Classical(HypothesisPair::new(p0, p1).unwrap()))
        })
    }

    fn identical_family(n_max: u32) -> PairFamily {
        PairFamily::new("identical", n_max, move |n| {
            let probs = vec![1.0 / (n + 1) as f64; (n + 1) as usize];
            let p = ProbDist::new(probs, 1e-9).unwrap();
            Ok(FamilyPair::Classical(
                HypothesisPair::new(p.clone(), p).unwrap(),
            ))
        })
    }

    #[test]
    fn uniform_vs_modified_gaps_are_exact_powers_of_two() {
        let fam = PairFamily::uniform_vs_modified(12, 1 << 20);
        for n in 1..=12 {
            let pair = fam.pair_at(n).unwrap();
            let k = measure_gap(&pair, MeasureKind::Kolmogorov, TOL).unwrap();
            assert_eq!(k, (-(n as f64)).exp2(), "n {n}");
        }
    }

    #[test]
    fn uniform_vs_modified_certifies_at_exactly_one_half() {
        let fam = PairFamily::uniform_vs_modified(20, 1 << 20);
        let cert = certify_exp_indist(&fam, 0.0, TOL).unwrap();
        let Certification::Certified(fit) = cert else {
            panic!("expected certification, got {cert:?}");
        };
        // exact powers of two all the way down the pipeline: the gaps, their
        // logarithms, the least-squares slope, and the rate
        assert_eq!(fit.epsilon, 0.5);
        assert_eq!(fit.n0, 1);
        assert!(fit.residuals.iter().all(|&(_, r)| r.abs() <= 1e-12));
    }

    #[test]
    fn constant_family_is_refuted_with_the_tightest_witness() {
        let fam = constant_family(0.3, 8);
        let cert = certify_exp_indist(&fam, 0.0, TOL).unwrap();
        let Certification::Refuted { witness_n, value, measure } = cert else {
            panic!("expected refutation, got {cert:?}");
        };
        assert_eq!(measure, MeasureKind::Kolmogorov);
        // a constant gap constrains the rate hardest at the horizon
        assert_eq!(witness_n, 8);
        assert!((value - 0.3).abs() <= 1e-12);
    }

    #[test]
    fn identical_family_is_degenerate_and_audits_clean() {
        let fam = identical_family(6);
        let cert = certify_exp_indist(&fam, 0.0, TOL).unwrap();
        assert!(matches!(cert, Certification::Degenerate { .. }));
        assert_eq!(cert.epsilon(), Some(0.0));
        let table = equivalence_audit(&fam, 0.0, TOL).unwrap();
        assert_eq!(table.epsilon, 0.0);
        assert!(table.all_envelopes_hold());
        for row in &table.rows {
            assert!(row.gaps.iter().all(|&(_, g)| g.abs() <= 1e-12));
        }
    }

    #[test]
    fn horizon_below_three_is_rejected() {
        let fam = constant_family(0.1, 2);
        assert!(matches!(
            certify_exp_indist(&fam, 0.0, TOL),
            Err(FamilyError::HorizonTooShort { n_max: 2 })
        ));
    }

    #[test]
    fn parity_family_certifies_at_the_sine_of_the_double_angle() {
        let alpha = std::f64::consts::FRAC_PI_8;
        let fam = PairFamily::parity(alpha, 8, 1 << 12, TOL);
        let cert = certify_exp_indist(&fam, 1e-9, TOL).unwrap();
        let Certification::Certified(fit) = cert else {
            panic!("expected certification, got {cert:?}");
        };
        let want = (2.0 * alpha).sin();
        assert!(
            (fit.epsilon - want).abs() <= 1e-9,
            "epsilon {} vs {want}",
            fit.epsilon
        );
        assert_eq!(fit.n0, 1);
    }

    #[test]
    fn parity_family_at_the_orthogonal_angle_is_refuted() {
        let fam = PairFamily::parity(std::f64::consts::FRAC_PI_4, 5, 1 << 12, TOL);
        let cert = certify_exp_indist(&fam, 0.0, TOL).unwrap();
        assert!(matches!(cert, Certification::Refuted { .. }));
        assert!(equivalence_audit(&fam, 0.0, TOL).is_err());
    }

    #[test]
    fn uniform_family_audit_confirms_every_envelope() {
        let fam = PairFamily::uniform_vs_modified(16, 1 << 20);
        let table = equivalence_audit(&fam, 0.0, TOL).unwrap();
        assert_eq!(table.epsilon, 0.5);
        assert!(table.all_envelopes_hold());
        for row in &table.rows {
            assert!(
                row.worst_slack >= -ENVELOPE_SLACK,
                "{}: slack {}",
                row.measure.name(),
                row.worst_slack
            );
            // every measure's own trend is certified as well
            assert!(matches!(row.fit, Certification::Certified(_)));
        }
        // the error-probability gap is exactly half the distance, so its
        // envelope is met with equality
        let pe_row = &table.rows[1];
        assert_eq!(pe_row.measure, MeasureKind::ProbError);
        assert!(pe_row.worst_slack.abs() <= 1e-15);
    }

    #[test]
    fn parity_family_audit_confirms_every_envelope() {
        let alpha = std::f64::consts::FRAC_PI_8;
        let fam = PairFamily::parity(alpha, 6, 1 << 12, TOL);
        let table = equivalence_audit(&fam, 1e-9, TOL).unwrap();
        assert!((table.epsilon - (2.0 * alpha).sin()).abs() <= 1e-6);
        assert!(table.all_envelopes_hold());
        for row in &table.rows {
            assert!(
                row.worst_slack >= -ENVELOPE_SLACK,
                "{}: slack {}",
                row.measure.name(),
                row.worst_slack
            );
        }
    }

    #[test]
    fn explicit_families_replay_their_pairs() {
        let p0 = ProbDist::new(vec![1.0, 0.0], 1e-9).unwrap();
        let p1 = ProbDist::new(vec![0.0, 1.0], 1e-9).unwrap();
        let pair = FamilyPair::Classical(HypothesisPair::new(p0, p1).unwrap());
        let fam = PairFamily::explicit("two-point", vec![pair.clone(), pair.clone(), pair]);
        assert_eq!(fam.n_max(), 3);
        let gap = measure_gap(&fam.pair_at(2).unwrap(), MeasureKind::Kolmogorov, TOL).unwrap();
        assert_eq!(gap, 1.0);
        assert!(matches!(
            fam.pair_at(4),
            Err(FamilyError::IndexOutOfRange { n: 4, n_max: 3 })
        ));
        assert!(matches!(
            fam.pair_at(0),
            Err(FamilyError::IndexOutOfRange { n: 0, n_max: 3 })
        ));
    }

    #[test]
    fn platform_log2_is_exact_on_powers_of_two() {
        // the bit-exact one-half certification leans on this libm property
        for n in 1..=40 {
            assert_eq!((-(n as f64)).exp2().log2(), -(n as f64));
        }
    }
}
