//! Command-line driver: argument parsing, file formats, report rendering,
//! exit codes.
//!
//! All file formats are structured text with explicit [real, imaginary]
//! pairs, sized for desk-scale inputs and diffable fixtures. Every command
//! writes its report to standard output or to `--out`, and identical inputs
//! with an identical seed produce identical bytes.
//!
//! Exit codes: 0 clean, 1 a checked property failed (inequality violations,
//! a family that does not certify), 2 parse or validation failure with the
//! broken invariant named, 3 operand dimension mismatch, 4 dimension cap
//! exceeded.

use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::classical::{self, ClassicalError, HypothesisPair, ProbDist};
use crate::families::{Certification, FamilyError, FamilyPair, PairFamily};
use crate::matcore::{C64, ComplexMatrix, MatError, Tolerances, DEFAULT_DIM_CAP};
use crate::measure::Povm;
use crate::parity::{figure_rows, parity_b, parity_k, parity_sd2, write_figure_csv, ParityConfig, ParityError};
use crate::qdist::{
    q_bhattacharyya, q_kolmogorov, q_pe, sd_bounds, sd_optimize, QuantumPair, SdConfig,
};
use crate::states::DensityMatrix;
use crate::verify::{
    verify_classical, verify_entropy_envelope, verify_quantum, write_reports, IneqReport,
};
use crate::DEFAULT_SEED;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("dimension mismatch: {0}")]
    DimMismatch(String),
    #[error("dimension cap exceeded: {0}")]
    DimCap(String),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) | CliError::Io { .. } => 2,
            CliError::DimMismatch(_) => 3,
            CliError::DimCap(_) => 4,
        }
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "qdistinguish",
    version,
    about = "Distinguishability measures for quantum states and classical distributions"
)]
pub struct Cli {
    /// Seed for every randomized computation; fixed default, never the clock.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Validation tolerance for parsed inputs and rate certification.
    #[arg(long, global = true, default_value_t = 1e-9)]
    pub tol: f64,
    /// Largest accepted operator dimension.
    #[arg(long, global = true, default_value_t = DEFAULT_DIM_CAP)]
    pub dim_cap: usize,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// All four measures and bound values for a pair of distributions.
    Classical { p0: PathBuf, p1: PathBuf },
    /// Measures and Shannon bounds for a pair of density matrices.
    Quantum {
        rho0: PathBuf,
        rho1: PathBuf,
        /// Search for the best measurement and write it out.
        #[arg(long)]
        optimize: bool,
        /// Where the achieving measurement goes.
        #[arg(long, default_value = "povm.json")]
        povm_out: PathBuf,
        /// Random starts added to the structured ones in the search.
        #[arg(long, default_value_t = 4)]
        starts: usize,
        /// Sweep budget per search start.
        #[arg(long, default_value_t = 40)]
        sweeps: usize,
    },
    /// Fuzz the inequality catalog; one report line per inequality side.
    Verify {
        #[arg(value_enum, default_value_t = Suite::All)]
        suite: Suite,
        /// Trials per suite.
        #[arg(long, default_value_t = 1000)]
        trials: u64,
    },
    /// Fit and certify an indistinguishability rate for a pair family.
    Family {
        /// Built-in family: uniform-vs-modified or parity.
        #[arg(long)]
        name: Option<String>,
        /// Explicit family from a file instead of a built-in one.
        #[arg(long)]
        file: Option<PathBuf>,
        #[arg(long, default_value_t = 12)]
        n_max: u32,
        /// Polarization angle for the parity family.
        #[arg(long, default_value_t = std::f64::consts::FRAC_PI_8)]
        alpha: f64,
    },
    /// Closed-form parity measures, or the bound dataset with --figure.
    Parity {
        #[arg(long, default_value_t = std::f64::consts::FRAC_PI_8)]
        alpha: f64,
        #[arg(long, default_value_t = 2)]
        n: u32,
        /// Emit the comma-separated bound dataset over [0, pi/4].
        #[arg(long)]
        figure: bool,
        /// Grid rows in the dataset.
        #[arg(long, default_value_t = 200)]
        points: usize,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
pub enum Suite {
    Classical,
    Quantum,
    Envelope,
    All,
}

/// Validated run-wide settings shared by every command.
#[derive(Clone, Copy, Debug)]
pub struct RunConfig {
    pub seed: u64,
    /// Certification and input-normalization tolerance.
    pub check_tol: f64,
    pub dim_cap: usize,
    pub tol: Tolerances,
}

impl RunConfig {
    pub fn new(seed: u64, check_tol: f64, dim_cap: usize) -> Result<Self, CliError> {
        if !(check_tol > 0.0 && check_tol.is_finite()) {
            return Err(CliError::Input(format!(
                "tolerance must be positive and finite, got {check_tol}"
            )));
        }
        if dim_cap < 2 {
            return Err(CliError::Input(format!("dimension cap must be at least 2, got {dim_cap}")));
        }
        Ok(RunConfig { seed, check_tol, dim_cap, tol: Tolerances::default() })
    }
}

// ---------------------------------------------------------------------------
// file formats

/// A complex matrix as structured text: row-major [real, imaginary] entries.
#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct MatrixFile {
    pub dim: usize,
    pub entries: Vec<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

impl MatrixFile {
    pub fn from_matrix(m: &ComplexMatrix, label: Option<String>) -> Self {
        let dim = m.dim();
        let entries = (0..dim * dim)
            .map(|i| {
                let z = m.at(i / dim, i % dim);
                [z.re, z.im]
            })
            .collect();
        MatrixFile { dim, entries, label }
    }
}

/// A probability distribution as structured text.
#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct DistFile {
    pub probs: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

/// A measurement as structured text: one entry list per element.
#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct PovmFile {
    pub dim: usize,
    pub elements: Vec<Vec<[f64; 2]>>,
}

impl PovmFile {
    pub fn from_povm(povm: &Povm) -> Self {
        let dim = povm.dim();
        let elements = povm
            .elements()
            .iter()
            .map(|e| {
                (0..dim * dim)
                    .map(|i| {
                        let z = e.at(i / dim, i % dim);
                        [z.re, z.im]
                    })
                    .collect()
            })
            .collect();
        PovmFile { dim, elements }
    }
}

/// An explicit family of hypothesis pairs indexed from 1 in file order.
#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum FamilyFile {
    Classical {
        pairs: Vec<ClassicalPairEntry>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        label: Option<String>,
    },
    Quantum {
        dim: usize,
        pairs: Vec<QuantumPairEntry>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        label: Option<String>,
    },
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ClassicalPairEntry {
    pub p0: Vec<f64>,
    pub p1: Vec<f64>,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct QuantumPairEntry {
    pub rho0: Vec<[f64; 2]>,
    pub rho1: Vec<[f64; 2]>,
}

// ---------------------------------------------------------------------------
// parsers

fn matrix_from_entries(dim: usize, entries: &[[f64; 2]]) -> Result<ComplexMatrix, CliError> {
    if dim == 0 {
        return Err(CliError::Input("matrix dimension must be at least 1".into()));
    }
    if entries.len() != dim * dim {
        return Err(CliError::Input(format!(
            "matrix with dim {dim} needs {} entries, got {}",
            dim * dim,
            entries.len()
        )));
    }
    Ok(ComplexMatrix::from_fn(dim, |i, j| {
        let [re, im] = entries[i * dim + j];
        C64::new(re, im)
    }))
}

/// Parses a distribution file and validates normalization.
pub fn parse_dist_file(text: &str, sum_tol: f64) -> Result<(ProbDist, Option<String>), CliError> {
    let file: DistFile =
        serde_json::from_str(text).map_err(|e| CliError::Input(format!("distribution file: {e}")))?;
    let dist = ProbDist::new(file.probs, sum_tol)
        .map_err(|e| CliError::Input(format!("distribution invariant: {e}")))?;
    Ok((dist, file.label))
}

/// Parses a matrix file and validates the density-matrix invariants,
/// naming the first one that fails.
pub fn parse_density_file(
    text: &str,
    cap: usize,
    tol: Tolerances,
) -> Result<(DensityMatrix, Option<String>), CliError> {
    let file: MatrixFile =
        serde_json::from_str(text).map_err(|e| CliError::Input(format!("matrix file: {e}")))?;
    if file.dim > cap {
        return Err(CliError::DimCap(format!("matrix dim {} over cap {cap}", file.dim)));
    }
    let matrix = matrix_from_entries(file.dim, &file.entries)?;
    let density = DensityMatrix::new(matrix, tol)
        .map_err(|e| CliError::Input(format!("density matrix invariant: {e}")))?;
    Ok((density, file.label))
}

/// Parses a measurement file and validates element positivity and
/// completeness.
pub fn parse_povm_file(text: &str, cap: usize, tol: Tolerances) -> Result<Povm, CliError> {
    let file: PovmFile =
        serde_json::from_str(text).map_err(|e| CliError::Input(format!("measurement file: {e}")))?;
    if file.dim > cap {
        return Err(CliError::DimCap(format!("measurement dim {} over cap {cap}", file.dim)));
    }
    let elements = file
        .elements
        .iter()
        .map(|entries| matrix_from_entries(file.dim, entries))
        .collect::<Result<Vec<_>, _>>()?;
    Povm::new(elements, tol).map_err(|e| CliError::Input(format!("measurement invariant: {e}")))
}

/// Parses an explicit family file into an indexed family.
pub fn parse_family_file(
    text: &str,
    cfg: &RunConfig,
) -> Result<PairFamily, CliError> {
    let file: FamilyFile =
        serde_json::from_str(text).map_err(|e| CliError::Input(format!("family file: {e}")))?;
    match file {
        FamilyFile::Classical { pairs, label } => {
            if pairs.is_empty() {
                return Err(CliError::Input("family file lists no pairs".into()));
            }
            let mut members = Vec::with_capacity(pairs.len());
            for (i, entry) in pairs.iter().enumerate() {
                let build = || -> Result<HypothesisPair, CliError> {
                    let p0 = ProbDist::new(entry.p0.clone(), cfg.check_tol)
                        .map_err(|e| CliError::Input(format!("distribution invariant: {e}")))?;
                    let p1 = ProbDist::new(entry.p1.clone(), cfg.check_tol)
                        .map_err(|e| CliError::Input(format!("distribution invariant: {e}")))?;
                    HypothesisPair::new(p0, p1)
                        .map_err(|e| CliError::Input(format!("pair invariant: {e}")))
                };
                let pair = build()
                    .map_err(|e| CliError::Input(format!("pair {}: {e}", i + 1)))?;
                members.push(FamilyPair::Classical(pair));
            }
            Ok(PairFamily::explicit(label.unwrap_or_else(|| "file".into()), members))
        }
        FamilyFile::Quantum { dim, pairs, label } => {
            if pairs.is_empty() {
                return Err(CliError::Input("family file lists no pairs".into()));
            }
            if dim > cfg.dim_cap {
                return Err(CliError::DimCap(format!("family dim {dim} over cap {}", cfg.dim_cap)));
            }
            let mut members = Vec::with_capacity(pairs.len());
            for (i, entry) in pairs.iter().enumerate() {
                let build = || -> Result<QuantumPair, CliError> {
                    let rho0 = DensityMatrix::new(matrix_from_entries(dim, &entry.rho0)?, cfg.tol)
                        .map_err(|e| CliError::Input(format!("density matrix invariant: {e}")))?;
                    let rho1 = DensityMatrix::new(matrix_from_entries(dim, &entry.rho1)?, cfg.tol)
                        .map_err(|e| CliError::Input(format!("density matrix invariant: {e}")))?;
                    QuantumPair::new(rho0, rho1)
                        .map_err(|e| CliError::Input(format!("pair invariant: {e}")))
                };
                let pair = build()
                    .map_err(|e| CliError::Input(format!("pair {}: {e}", i + 1)))?;
                members.push(FamilyPair::Quantum(pair));
            }
            Ok(PairFamily::explicit(label.unwrap_or_else(|| "file".into()), members))
        }
    }
}

// ---------------------------------------------------------------------------
// commands

fn read_text(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io { path: path.into(), source })
}

fn h(p: f64) -> f64 {
    classical::binary_entropy(p.clamp(0.0, 1.0)).expect("clamped argument")
}

fn cmd_classical(cfg: &RunConfig, p0: &Path, p1: &Path) -> Result<(String, i32), CliError> {
    let (d0, label0) = parse_dist_file(&read_text(p0)?, cfg.check_tol)?;
    let (d1, label1) = parse_dist_file(&read_text(p1)?, cfg.check_tol)?;
    let pair = HypothesisPair::new(d0, d1).map_err(|e| match e {
        ClassicalError::LengthMismatch { .. } => CliError::DimMismatch(e.to_string()),
        _ => CliError::Input(format!("pair invariant: {e}")),
    })?;

    let pe = classical::pe(&pair);
    let k = classical::kolmogorov(&pair);
    let b = classical::bhattacharyya(&pair);
    let sd = classical::shannon_dist(&pair);
    let root = (1.0 - b * b).max(0.0).sqrt();

    let mut report = String::new();
    if let Some(label) = label0 {
        let _ = writeln!(report, "p0_label: {label}");
    }
    if let Some(label) = label1 {
        let _ = writeln!(report, "p1_label: {label}");
    }
    let _ = writeln!(report, "m: {}", pair.len());
    let _ = writeln!(report, "PE: {pe:.12}");
    let _ = writeln!(report, "K: {k:.12}");
    let _ = writeln!(report, "B: {b:.12}");
    let _ = writeln!(report, "SD: {sd:.12}");
    let _ = writeln!(report, "K_lower_b: {:.12}", 1.0 - b);
    let _ = writeln!(report, "K_upper_b: {root:.12}");
    let _ = writeln!(report, "SD_lower_pe: {:.12}", 1.0 - h(pe));
    let _ = writeln!(report, "SD_upper_k: {:.12}", 1.0 - 2.0 * pe);
    let _ = writeln!(report, "SD_lower_b: {:.12}", 1.0 - b);
    let _ = writeln!(report, "SD_upper_b: {:.12}", 1.0 - h(0.5 - 0.5 * root));
    Ok((report, 0))
}

#[allow(clippy::too_many_arguments)]
fn cmd_quantum(
    cfg: &RunConfig,
    rho0: &Path,
    rho1: &Path,
    optimize: bool,
    povm_out: &Path,
    starts: usize,
    sweeps: usize,
) -> Result<(String, i32), CliError> {
    let (r0, label0) = parse_density_file(&read_text(rho0)?, cfg.dim_cap, cfg.tol)?;
    let (r1, label1) = parse_density_file(&read_text(rho1)?, cfg.dim_cap, cfg.tol)?;
    if r0.dim() != r1.dim() {
        return Err(CliError::DimMismatch(format!("{} vs {}", r0.dim(), r1.dim())));
    }
    let pair = QuantumPair::new(r0, r1)
        .map_err(|e| CliError::Input(format!("pair invariant: {e}")))?;

    let to_input = |e: crate::qdist::QdistError| CliError::Input(e.to_string());
    let pe = q_pe(&pair, cfg.tol).map_err(to_input)?;
    let k = q_kolmogorov(&pair, cfg.tol).map_err(to_input)?;
    let b = q_bhattacharyya(&pair, cfg.tol).map_err(to_input)?;
    let bounds = sd_bounds(&pair, cfg.tol).map_err(to_input)?;

    let mut report = String::new();
    if let Some(label) = label0 {
        let _ = writeln!(report, "rho0_label: {label}");
    }
    if let Some(label) = label1 {
        let _ = writeln!(report, "rho1_label: {label}");
    }
    let _ = writeln!(report, "dim: {}", pair.dim());
    let _ = writeln!(report, "PE: {pe:.12}");
    let _ = writeln!(report, "K: {k:.12}");
    let _ = writeln!(report, "B: {b:.12}");
    let _ = writeln!(report, "SD_lower_pe: {:.12}", bounds.lower_pe);
    let _ = writeln!(report, "SD_lower_b: {:.12}", bounds.lower_b);
    let _ = writeln!(report, "SD_upper_k: {:.12}", bounds.upper_k);
    let _ = writeln!(report, "SD_upper_b: {:.12}", bounds.upper_b);
    let _ = writeln!(report, "SD_lower: {:.12}", bounds.lower());
    let _ = writeln!(report, "SD_upper: {:.12}", bounds.upper());

    if optimize {
        let search = SdConfig {
            outcomes: None,
            random_starts: starts,
            sweeps,
            seed: cfg.seed,
        };
        let est = sd_optimize(&pair, search, cfg.tol).map_err(to_input)?;
        let _ = writeln!(report, "SD_search: {:.12}", est.value);
        let _ = writeln!(report, "SD_search_converged: {}", est.converged);
        let file = PovmFile::from_povm(&est.povm);
        let json = serde_json::to_string_pretty(&file).expect("measurement serializes");
        fs::write(povm_out, json + "\n")
            .map_err(|source| CliError::Io { path: povm_out.into(), source })?;
        let _ = writeln!(report, "povm: {}", povm_out.display());
    }
    Ok((report, 0))
}

fn cmd_verify(cfg: &RunConfig, suite: Suite, trials: u64) -> Result<(String, i32), CliError> {
    if trials == 0 {
        return Err(CliError::Input("trials must be at least 1".into()));
    }
    let mut reports: Vec<IneqReport> = Vec::new();
    let classical_suite = |reports: &mut Vec<IneqReport>| {
        reports.extend(verify_classical(trials, 2..=16, cfg.seed));
    };
    let quantum_suite = |reports: &mut Vec<IneqReport>| -> Result<(), CliError> {
        let runs = verify_quantum(trials, 2..=4, cfg.seed, cfg.tol)
            .map_err(|e| CliError::Input(e.to_string()))?;
        reports.extend(runs);
        Ok(())
    };
    match suite {
        Suite::Classical => classical_suite(&mut reports),
        Suite::Quantum => quantum_suite(&mut reports)?,
        Suite::Envelope => reports.push(verify_entropy_envelope(10_001)),
        Suite::All => {
            classical_suite(&mut reports);
            quantum_suite(&mut reports)?;
            reports.push(verify_entropy_envelope(10_001));
        }
    }
    let mut buffer = Vec::new();
    write_reports(&mut buffer, &reports).expect("writing to memory");
    let report = String::from_utf8(buffer).expect("reports are utf8");
    let violations: u64 = reports.iter().filter(|r| r.asserted()).map(|r| r.violations).sum();
    Ok((report, if violations == 0 { 0 } else { 1 }))
}

// distributions are flat vectors, so the operator cap is the wrong scale
// for them; this bounds the halving family's support instead
const SUPPORT_CAP: usize = 1 << 21;

fn family_error(e: FamilyError) -> CliError {
    match &e {
        FamilyError::Parity(ParityError::Mat(MatError::DimensionOverflow { dim, cap }))
        | FamilyError::Mat(MatError::DimensionOverflow { dim, cap }) => {
            CliError::DimCap(format!("family member needs dimension {dim}, cap is {cap}"))
        }
        _ => CliError::Input(e.to_string()),
    }
}

fn cmd_family(
    cfg: &RunConfig,
    name: Option<&str>,
    file: Option<&Path>,
    n_max: u32,
    alpha: f64,
) -> Result<(String, i32), CliError> {
    let family = match (name, file) {
        (Some(name), None) => match name {
            "uniform-vs-modified" => PairFamily::uniform_vs_modified(n_max, SUPPORT_CAP),
            "parity" => PairFamily::parity(alpha, n_max, cfg.dim_cap, cfg.tol),
            other => {
                return Err(CliError::Input(format!(
                    "unknown family {other}, expected uniform-vs-modified or parity"
                )))
            }
        },
        (None, Some(path)) => parse_family_file(&read_text(path)?, cfg)?,
        _ => {
            return Err(CliError::Input(
                "provide exactly one of --name or --file".into(),
            ))
        }
    };

    let mut report = String::new();
    let _ = writeln!(report, "family: {}", family.name());
    let _ = writeln!(report, "n_max: {}", family.n_max());
    match crate::families::equivalence_audit(&family, cfg.check_tol, cfg.tol) {
        Ok(table) => {
            let _ = writeln!(report, "certified: yes");
            let _ = writeln!(report, "epsilon: {:.12}", table.epsilon);
            let _ = writeln!(report, "n0: {}", table.n0);
            let mut clean = true;
            for row in &table.rows {
                let rate = match &row.fit {
                    Certification::Certified(fit) => format!("{:.12}", fit.epsilon),
                    Certification::Degenerate { .. } => "degenerate".into(),
                    Certification::Refuted { witness_n, .. } => {
                        clean = false;
                        format!("refuted(n={witness_n})")
                    }
                };
                let envelope = if row.envelope_ok { "ok" } else { "violated" };
                if !row.envelope_ok {
                    clean = false;
                }
                let _ = writeln!(
                    report,
                    "{}: rate={} slack={:.3e} envelope={}",
                    row.measure.name(),
                    rate,
                    row.worst_slack,
                    envelope
                );
            }
            Ok((report, if clean { 0 } else { 1 }))
        }
        Err(FamilyError::NotCertified { witness_n, value }) => {
            let _ = writeln!(report, "certified: no");
            let _ = writeln!(
                report,
                "reason: gap {value:.12} at n = {witness_n} admits no sub-unit rate"
            );
            Ok((report, 1))
        }
        Err(e) => Err(family_error(e)),
    }
}

fn cmd_parity(
    cfg: &RunConfig,
    alpha: f64,
    n: u32,
    figure: bool,
    points: usize,
) -> Result<(String, i32), CliError> {
    let _ = cfg;
    if figure {
        if points < 2 {
            return Err(CliError::Input(format!("figure needs at least 2 points, got {points}")));
        }
        let rows = figure_rows(points);
        let mut buffer = Vec::new();
        write_figure_csv(&mut buffer, &rows).expect("writing to memory");
        return Ok((String::from_utf8(buffer).expect("figure rows are utf8"), 0));
    }
    let parity = ParityConfig::new(alpha, n)
        .map_err(|e| CliError::Input(e.to_string()))?;
    let mut report = String::new();
    let _ = writeln!(report, "alpha: {alpha:.12}");
    let _ = writeln!(report, "n: {n}");
    let _ = writeln!(report, "K: {:.12}", parity_k(&parity));
    let _ = writeln!(report, "B: {:.12}", parity_b(&parity));
    if n == 2 {
        let _ = writeln!(report, "SD: {:.12}", parity_sd2(alpha));
    }
    Ok((report, 0))
}

/// Executes a parsed invocation and returns the report text with the exit
/// code, leaving output routing to the caller.
pub fn execute(cli: &Cli) -> Result<(String, i32), CliError> {
    let cfg = RunConfig::new(cli.seed, cli.tol, cli.dim_cap)?;
    match &cli.command {
        Command::Classical { p0, p1 } => cmd_classical(&cfg, p0, p1),
        Command::Quantum { rho0, rho1, optimize, povm_out, starts, sweeps } => {
            cmd_quantum(&cfg, rho0, rho1, *optimize, povm_out, *starts, *sweeps)
        }
        Command::Verify { suite, trials } => cmd_verify(&cfg, *suite, *trials),
        Command::Family { name, file, n_max, alpha } => {
            cmd_family(&cfg, name.as_deref(), file.as_deref(), *n_max, *alpha)
        }
        Command::Parity { alpha, n, figure, points } => {
            cmd_parity(&cfg, *alpha, *n, *figure, *points)
        }
    }
}

/// Runs a parsed invocation end to end: report to `--out` or standard
/// output, diagnostics to standard error, exit code returned.
pub fn run(cli: &Cli) -> i32 {
    match execute(cli) {
        Ok((report, code)) => {
            let written = match &cli.out {
                Some(path) => fs::write(path, &report)
                    .map_err(|source| CliError::Io { path: path.clone(), source }),
                None => {
                    print!("{report}");
                    Ok(())
                }
            };
            if let Err(e) = written {
                eprintln!("error: {e}");
                return e.exit_code();
            }
            code
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
