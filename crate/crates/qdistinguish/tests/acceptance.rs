//! End-to-end acceptance battery. Each test checks one headline claim of
//! the crate against a fixed tolerance and a wall-clock budget, both pinned
//! below, and prints a single pass line (visible with `--nocapture`); a
//! failure names the check and the measured value.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_8};
use std::time::{Duration, Instant};

use qdistinguish::classical::{pe, HypothesisPair};
use qdistinguish::families::{certify_exp_indist, equivalence_audit, Certification, PairFamily};
use qdistinguish::matcore::{partial_trace_second, Tolerances};
use qdistinguish::measure::{apply, helstrom_pvm, make_trine, random_povm, Povm};
use qdistinguish::parity::{
    build_parity_states, figure_rows, parity_b, parity_k, parity_sd2, parity_sd_block_search,
    ParityConfig,
};
use qdistinguish::qdist::{
    check_b_double_concavity, check_b_multiplicative, check_b_squared_concavity, overlap_search,
    q_bhattacharyya, q_pe, sd_optimize, QuantumPair, SdConfig,
};
use qdistinguish::states::{polarization_state, purify, random_density, DensityMatrix};
use qdistinguish::verify::{verify_classical, verify_entropy_envelope, verify_quantum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const TOL: Tolerances = Tolerances { herm: 1e-10, psd: 1e-8, eig: 1e-9 };
const SEED: u64 = 0xACCE;

const TRINE_TOL: f64 = 1e-12;
const HELSTROM_CLOSED_TOL: f64 = 1e-10;
const HELSTROM_DOMINANCE_SLACK: f64 = -1e-9;
const PARITY_K_TOL: f64 = 1e-9;
const PARITY_B_TOL: f64 = 1e-8;
const PARITY_B_TWO_COPY_TOL: f64 = 1e-12;
const SD_SEARCH_TOL: f64 = 1e-4;
const SD_BLOCK_TOL: f64 = 1e-6;
const ENVELOPE_SLACK: f64 = -1e-12;
const B_MULTIPLICATIVE_TOL: f64 = 1e-8;
const B_CONCAVITY_SLACK: f64 = -1e-9;
const RATE_TOL: f64 = 1e-9;
const FIGURE_SANDWICH_SLACK: f64 = -1e-12;
const FIGURE_ENDPOINT_TOL: f64 = 1e-9;
const PURIFY_TOL: f64 = 1e-12;
const OVERLAP_SEARCH_TOL: f64 = 1e-3;

fn finish(name: &str, start: Instant, budget: Duration, detail: &str) {
    let took = start.elapsed();
    assert!(
        took <= budget,
        "{name}: fail (budget {budget:?} exceeded, took {took:?})"
    );
    println!("{name}: pass ({detail}; {took:.2?})");
}

fn induced_pe(povm: &Povm, rho0: &DensityMatrix, rho1: &DensityMatrix) -> f64 {
    let p0 = apply(povm, rho0, TOL).unwrap();
    let p1 = apply(povm, rho1, TOL).unwrap();
    pe(&HypothesisPair::new(p0, p1).unwrap())
}

#[test]
fn trine_on_vertical_input() {
    let start = Instant::now();
    let vertical = polarization_state(FRAC_PI_2, 1);
    let rho = DensityMatrix::new(vertical.projector(), TOL).unwrap();
    let probs = apply(&make_trine(), &rho, TOL).unwrap();
    let target = [0.0, 0.5, 0.5];
    let mut worst = 0.0f64;
    for (got, want) in probs.probs().iter().zip(target) {
        worst = worst.max((got - want).abs());
    }
    assert!(
        worst <= TRINE_TOL,
        "trine: fail (outcome distribution off by {worst:.2e}, tol {TRINE_TOL:.0e})"
    );
    finish("trine", start, Duration::from_millis(1), &format!("worst residual {worst:.2e}"));
}

#[test]
fn helstrom_closed_form_and_random_povm_dominance() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut worst_closed = 0.0f64;
    let mut worst_slack = f64::INFINITY;
    for i in 0..1000usize {
        let dim = 2 + i % 5;
        let rank0 = if i % 4 == 3 { 1 } else { dim };
        let rho0 = random_density(dim, rank0, &mut rng, TOL);
        let rho1 = random_density(dim, dim, &mut rng, TOL);
        let optimal = helstrom_pvm(&rho0, &rho1, TOL).unwrap();
        let achieved = induced_pe(&optimal, &rho0, &rho1);
        let pair = QuantumPair::new(rho0.clone(), rho1.clone()).unwrap();
        let closed = q_pe(&pair, TOL).unwrap();
        worst_closed = worst_closed.max((achieved - closed).abs());
        for k in 0..1000usize {
            let outcomes = 2 + k % 3;
            let contender = random_povm(dim, outcomes, rng.random());
            worst_slack = worst_slack.min(induced_pe(&contender, &rho0, &rho1) - achieved);
        }
    }
    assert!(
        worst_closed <= HELSTROM_CLOSED_TOL,
        "helstrom: fail (closed-form residual {worst_closed:.2e}, tol {HELSTROM_CLOSED_TOL:.0e})"
    );
    assert!(
        worst_slack >= HELSTROM_DOMINANCE_SLACK,
        "helstrom: fail (a random measurement beat the optimum by {:.2e})",
        -worst_slack
    );
    finish(
        "helstrom",
        start,
        Duration::from_secs(60),
        &format!("closed-form residual {worst_closed:.2e}, dominance slack {worst_slack:.2e}"),
    );
}

#[test]
fn parity_kolmogorov_oracle_grid() {
    let start = Instant::now();
    let mut worst = 0.0f64;
    for n in 1..=6u32 {
        for j in 0..25 {
            let alpha = FRAC_PI_2 * j as f64 / 24.0;
            let cfg = ParityConfig::new(alpha, n).unwrap();
            let pair = build_parity_states(&cfg, 1 << 12, TOL).unwrap();
            let brute = qdistinguish::qdist::q_kolmogorov(&pair, TOL).unwrap();
            worst = worst.max((parity_k(&cfg) - brute).abs());
        }
    }
    assert!(
        worst <= PARITY_K_TOL,
        "parity-k-oracle: fail (closed form off brute force by {worst:.2e}, tol {PARITY_K_TOL:.0e})"
    );
    finish(
        "parity-k-oracle",
        start,
        Duration::from_secs(30),
        &format!("worst residual {worst:.2e} over n=1..6, 25 angles"),
    );
}

#[test]
fn parity_overlap_oracle_grid() {
    let start = Instant::now();
    let mut worst = 0.0f64;
    for n in 1..=6u32 {
        for j in 0..25 {
            let alpha = FRAC_PI_2 * j as f64 / 24.0;
            let cfg = ParityConfig::new(alpha, n).unwrap();
            let pair = build_parity_states(&cfg, 1 << 12, TOL).unwrap();
            let brute = q_bhattacharyya(&pair, TOL).unwrap();
            worst = worst.max((parity_b(&cfg) - brute).abs());
        }
    }
    assert!(
        worst <= PARITY_B_TOL,
        "parity-b-oracle: fail (closed form off brute force by {worst:.2e}, tol {PARITY_B_TOL:.0e})"
    );
    let mut worst_two = 0.0f64;
    for j in 0..25 {
        let alpha = FRAC_PI_2 * j as f64 / 24.0;
        let cfg = ParityConfig::new(alpha, 2).unwrap();
        worst_two = worst_two.max((parity_b(&cfg) - cfg.cos2a.abs()).abs());
    }
    assert!(
        worst_two <= PARITY_B_TWO_COPY_TOL,
        "parity-b-oracle: fail (two-copy overlap off |cos 2a| by {worst_two:.2e})"
    );
    finish(
        "parity-b-oracle",
        start,
        Duration::from_secs(60),
        &format!("worst residual {worst:.2e}, two-copy residual {worst_two:.2e}"),
    );
}

#[test]
fn two_copy_shannon_search_grid() {
    let start = Instant::now();
    let mut worst_search = 0.0f64;
    let mut worst_block = 0.0f64;
    for j in 0..20 {
        let alpha = FRAC_PI_2 * j as f64 / 19.0;
        let cfg = ParityConfig::new(alpha, 2).unwrap();
        let exact = parity_sd2(alpha);
        let pair = build_parity_states(&cfg, 1 << 12, TOL).unwrap();
        let est = sd_optimize(&pair, SdConfig::default(), TOL).unwrap();
        worst_search = worst_search.max((est.value - exact).abs());
        let block = parity_sd_block_search(&cfg, 2000, TOL).unwrap();
        worst_block = worst_block.max((block - exact).abs());
    }
    assert!(
        worst_search <= SD_SEARCH_TOL,
        "two-copy-sd: fail (full search off closed form by {worst_search:.2e}, tol {SD_SEARCH_TOL:.0e})"
    );
    assert!(
        worst_block <= SD_BLOCK_TOL,
        "two-copy-sd: fail (block search off closed form by {worst_block:.2e}, tol {SD_BLOCK_TOL:.0e})"
    );
    finish(
        "two-copy-sd",
        start,
        Duration::from_secs(300),
        &format!("search residual {worst_search:.2e}, block residual {worst_block:.2e}"),
    );
}

#[test]
fn inequality_fuzz_clean() {
    let start = Instant::now();
    let classical = verify_classical(10_000, 2..=16, SEED);
    let quantum = verify_quantum(1000, 2..=4, SEED, TOL).unwrap();
    let mut checked = 0u64;
    let mut falsified = 0u64;
    for report in classical.iter().chain(quantum.iter()) {
        if report.asserted() {
            checked += 1;
            assert!(
                report.passing(),
                "inequality-fuzz: fail ({} violated {} times, worst slack {:.2e})",
                report.name,
                report.violations,
                report.worst_slack
            );
        } else {
            // the record-only variant is kept precisely because it breaks
            assert!(
                report.violations > 0,
                "inequality-fuzz: fail ({} recorded no violations; its counterexamples are gone)",
                report.name
            );
            falsified += 1;
        }
    }
    finish(
        "inequality-fuzz",
        start,
        Duration::from_secs(300),
        &format!("{checked} bounds clean, {falsified} record-only variants still falsified"),
    );
}

#[test]
fn entropy_envelope_grid() {
    let start = Instant::now();
    let report = verify_entropy_envelope(10_000);
    assert!(
        report.violations == 0 && report.worst_slack >= ENVELOPE_SLACK,
        "entropy-envelope: fail (worst slack {:.2e}, {} violations)",
        report.worst_slack,
        report.violations
    );
    finish(
        "entropy-envelope",
        start,
        Duration::from_secs(1),
        &format!("worst slack {:.2e} over {} points", report.worst_slack, report.trials),
    );
}

#[test]
fn overlap_concavity_and_multiplicativity() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut worst_mult = 0.0f64;
    let mut worst_sq = f64::INFINITY;
    let mut worst_joint = f64::INFINITY;
    for i in 0..1000usize {
        let rank = 1 + i % 2;
        let a = random_density(2, 2, &mut rng, TOL);
        let b = random_density(2, rank, &mut rng, TOL);
        let c = random_density(2, 2, &mut rng, TOL);
        let d = random_density(2, rank, &mut rng, TOL);
        let mu = rng.random_range(0.0..=1.0);
        worst_mult = worst_mult.max(check_b_multiplicative(&a, &b, &c, &d, TOL).unwrap());
        worst_sq = worst_sq.min(check_b_squared_concavity(&a, &b, &c, mu, TOL).unwrap());
        worst_joint = worst_joint.min(check_b_double_concavity(&a, &b, &c, &d, mu, TOL).unwrap());
    }
    assert!(
        worst_mult <= B_MULTIPLICATIVE_TOL,
        "overlap-structure: fail (product-state residual {worst_mult:.2e}, tol {B_MULTIPLICATIVE_TOL:.0e})"
    );
    assert!(
        worst_sq >= B_CONCAVITY_SLACK,
        "overlap-structure: fail (squared concavity slack {worst_sq:.2e})"
    );
    assert!(
        worst_joint >= B_CONCAVITY_SLACK,
        "overlap-structure: fail (joint concavity slack {worst_joint:.2e})"
    );
    finish(
        "overlap-structure",
        start,
        Duration::from_secs(60),
        &format!(
            "product residual {worst_mult:.2e}, concavity slacks {worst_sq:.2e}/{worst_joint:.2e}"
        ),
    );
}

#[test]
fn exponential_indistinguishability_families() {
    let start = Instant::now();

    let halving = PairFamily::uniform_vs_modified(20, 1 << 21);
    let cert = certify_exp_indist(&halving, 0.0, TOL).unwrap();
    let Certification::Certified(fit) = cert else {
        panic!("exp-indistinguishability: fail (halving family not certified: {cert:?})");
    };
    assert!(
        fit.epsilon == 0.5,
        "exp-indistinguishability: fail (halving rate {} is not exactly one half)",
        fit.epsilon
    );
    let audit = equivalence_audit(&halving, 0.0, TOL).unwrap();
    assert!(
        audit.all_envelopes_hold(),
        "exp-indistinguishability: fail (halving family envelope broken: {audit:?})"
    );

    let parity = PairFamily::parity(FRAC_PI_8, 10, 1 << 12, TOL);
    let cert = certify_exp_indist(&parity, RATE_TOL, TOL).unwrap();
    let Certification::Certified(fit) = cert else {
        panic!("exp-indistinguishability: fail (parity family not certified: {cert:?})");
    };
    let expected = (2.0f64).sqrt() / 2.0;
    let rate_err = (fit.epsilon - expected).abs();
    assert!(
        rate_err <= RATE_TOL,
        "exp-indistinguishability: fail (parity rate {} off sqrt(2)/2 by {rate_err:.2e})",
        fit.epsilon
    );
    let audit = equivalence_audit(&parity, RATE_TOL, TOL).unwrap();
    assert!(
        audit.all_envelopes_hold(),
        "exp-indistinguishability: fail (parity family envelope broken: {audit:?})"
    );

    finish(
        "exp-indistinguishability",
        start,
        Duration::from_secs(120),
        &format!("halving rate exactly 0.5, parity rate off by {rate_err:.2e}, envelopes hold"),
    );
}

#[test]
fn two_copy_figure_sandwich() {
    let start = Instant::now();
    let rows = figure_rows(200);
    let mut worst = f64::INFINITY;
    for row in &rows {
        worst = worst
            .min(row.sd_parmi - row.sd_lower_pe)
            .min(row.sd_upper_k - row.sd_parmi)
            .min(row.sd_parmi - row.sd_lower_b)
            .min(row.sd_upper_b - row.sd_parmi);
    }
    assert!(
        worst >= FIGURE_SANDWICH_SLACK,
        "figure-sandwich: fail (a bound crossed the exact curve by {:.2e})",
        -worst
    );
    let first = rows.first().unwrap();
    let last = rows.last().unwrap();
    let ends = [
        first.sd_lower_pe,
        first.sd_parmi,
        first.sd_upper_k,
        first.sd_lower_b,
        first.sd_upper_b,
        1.0 - last.sd_lower_pe,
        1.0 - last.sd_parmi,
        1.0 - last.sd_upper_k,
        1.0 - last.sd_lower_b,
        1.0 - last.sd_upper_b,
    ];
    let worst_end = ends.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    assert!(
        worst_end <= FIGURE_ENDPOINT_TOL,
        "figure-sandwich: fail (endpoint off by {worst_end:.2e}, tol {FIGURE_ENDPOINT_TOL:.0e})"
    );
    finish(
        "figure-sandwich",
        start,
        Duration::from_secs(60),
        &format!("sandwich slack {worst:.2e}, endpoint residual {worst_end:.2e} over 200 rows"),
    );
}

#[test]
fn purification_roundtrip_and_overlap_search() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut worst_trace = 0.0f64;
    for i in 0..1000usize {
        let dim = 2 + i % 5;
        let rank = 1 + i % dim;
        let rho = random_density(dim, rank, &mut rng, TOL);
        let phi = purify(&rho, TOL).unwrap();
        let reduced = partial_trace_second(&phi.projector(), dim, dim).unwrap();
        worst_trace = worst_trace.max(reduced.max_abs_diff(rho.matrix()));
    }
    assert!(
        worst_trace <= PURIFY_TOL,
        "purification-overlap: fail (partial trace residual {worst_trace:.2e}, tol {PURIFY_TOL:.0e})"
    );
    let mut worst_gap = 0.0f64;
    for i in 0..100usize {
        let rank = 1 + i % 2;
        let rho0 = random_density(2, 2, &mut rng, TOL);
        let rho1 = random_density(2, rank, &mut rng, TOL);
        let pair = QuantumPair::new(rho0, rho1).unwrap();
        let target = q_bhattacharyya(&pair, TOL).unwrap();
        let est = overlap_search(&pair, 4000, rng.random(), TOL).unwrap();
        worst_gap = worst_gap.max((est.value - target).abs());
    }
    assert!(
        worst_gap <= OVERLAP_SEARCH_TOL,
        "purification-overlap: fail (search missed the overlap by {worst_gap:.2e}, tol {OVERLAP_SEARCH_TOL:.0e})"
    );
    finish(
        "purification-overlap",
        start,
        Duration::from_secs(120),
        &format!("trace residual {worst_trace:.2e}, search gap {worst_gap:.2e}"),
    );
}
