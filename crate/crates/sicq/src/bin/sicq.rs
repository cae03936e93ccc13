//! Batch CLI: fiducial search, SIC/POVM verification, FTP comparison
//! sweeps, and state reconstruction over JSON documents.
//!
//! Exit codes: 0 success, 1 check failed, 2 search failed,
//! 3 reconstruction infeasible, 64 usage, 65 data format.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use sicq::doc::{
    self, Body, Document, FtpCompareCase, FtpCompareReport, ReconstructionReport, ReportDoc,
    SicSearchReport, VerifyReport,
};
use sicq::{
    check_sic, compare_ftp, find_fiducial, frame_potential, frame_potential_bound,
    random_density, reconstruct_from_sic, reconstruct_linear_inversion, validate_povm, wh_orbit,
    DensityOperator, Error, Povm, ProbabilityVector, SearchConfig, SearchStatus, SicPovm,
    Tolerances,
};

const EXIT_OK: u8 = 0;
const EXIT_CHECK_FAILED: u8 = 1;
const EXIT_SEARCH_FAILED: u8 = 2;
const EXIT_INFEASIBLE: u8 = 3;
const EXIT_USAGE: u8 = 64;
const EXIT_DATA: u8 = 65;

#[derive(Parser)]
#[command(name = "sicq", version, about = "SIC-POVM and probability-update toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Search for a SIC fiducial vector by frame-potential minimization.
    SicFind {
        #[arg(long)]
        dim: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 32)]
        restarts: usize,
        #[arg(long = "max-iter", default_value_t = 50_000)]
        max_iter: usize,
        /// Acceptance tolerance on the frame-potential gap.
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Verify a SIC or POVM document against its defining conditions.
    Verify {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
    },
    /// Compare classical and QBist total-probability formulas against the
    /// Born rule over one state or a random sweep.
    FtpCompare {
        /// Expected dimension (cross-checked against the documents).
        #[arg(long)]
        dim: Option<usize>,
        #[arg(long)]
        sic: PathBuf,
        #[arg(long, conflicts_with_all = ["random", "seed"])]
        state: Option<PathBuf>,
        /// Number of random states to sweep.
        #[arg(long)]
        random: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        target: PathBuf,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Reconstruct a state from outcome probabilities of a reference
    /// measurement.
    Reconstruct {
        #[arg(long)]
        probs: PathBuf,
        #[arg(long)]
        reference: PathBuf,
        #[arg(long, value_enum)]
        method: Method,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    /// Affine SIC reconstruction formula.
    Sic,
    /// Least-squares linear inversion over operator space.
    Inversion,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // clap's own help/version output still goes to stdout with
            // success; everything else is a usage error.
            if e.use_stderr() {
                eprint!("{e}");
                return ExitCode::from(EXIT_USAGE);
            }
            print!("{e}");
            return ExitCode::from(EXIT_OK);
        }
    };
    let code = match cli.command {
        Command::SicFind {
            dim,
            seed,
            restarts,
            max_iter,
            tol,
            out,
        } => cmd_sic_find(dim, seed, restarts, max_iter, tol, &out),
        Command::Verify { input, tol } => cmd_verify(&input, tol),
        Command::FtpCompare {
            dim,
            sic,
            state,
            random,
            seed,
            target,
            tol,
            out,
        } => cmd_ftp_compare(dim, &sic, state.as_deref(), random, seed, &target, tol, out.as_deref()),
        Command::Reconstruct {
            probs,
            reference,
            method,
            out,
        } => cmd_reconstruct(&probs, &reference, method, &out),
    };
    ExitCode::from(code)
}

fn usage_error(msg: &str) -> u8 {
    eprintln!("usage error: {msg}");
    eprintln!("run 'sicq --help' for usage");
    EXIT_USAGE
}

fn data_error(path: &Path, detail: &str) -> u8 {
    eprintln!("data error in {}: {detail}", path.display());
    EXIT_DATA
}

fn read_document(path: &Path) -> Result<Document, u8> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| data_error(path, &format!("cannot read: {e}")))?;
    Document::from_json(&text).map_err(|e| {
        data_error(
            path,
            &format!("parse failure at line {}, column {}: {e}", e.line(), e.column()),
        )
    })
}

fn write_output(path: &Path, doc: &Document) -> Result<(), u8> {
    std::fs::write(path, doc.to_json()).map_err(|e| {
        eprintln!("cannot write {}: {e}", path.display());
        EXIT_DATA
    })
}

fn cmd_sic_find(
    dim: usize,
    seed: u64,
    restarts: usize,
    max_iter: usize,
    tol: f64,
    out: &Path,
) -> u8 {
    if dim < 2 {
        return usage_error("--dim must be >= 2");
    }
    if restarts == 0 || max_iter == 0 {
        return usage_error("--restarts and --max-iter must be >= 1");
    }
    if !(tol > 0.0) {
        return usage_error("--tol must be positive");
    }
    let cfg = SearchConfig {
        dim,
        seed,
        restarts,
        max_iterations: max_iter,
        tol_opt: 1e-13,
        tol_accept: tol,
    };
    let result = match find_fiducial(&cfg) {
        Ok(r) => r,
        Err(e) => return usage_error(&e.to_string()),
    };
    match result.status {
        SearchStatus::Converged => {
            let fiducial = result.fiducial.expect("converged carries a fiducial");
            let orbit = match wh_orbit(&fiducial) {
                Ok(o) => o,
                Err(e) => {
                    eprintln!("internal orbit error: {e}");
                    return EXIT_SEARCH_FAILED;
                }
            };
            let doc = doc::sic_doc(&fiducial, &orbit);
            if let Err(code) = write_output(out, &doc) {
                return code;
            }
            println!(
                "converged: d={dim}, restart {}, {} iterations, potential gap {:.3e}",
                result.restart_index, result.iterations_used, result.potential_gap
            );
            EXIT_OK
        }
        SearchStatus::Failed => {
            let report = Document::new(Body::Report(ReportDoc::SicSearch(SicSearchReport {
                dim,
                converged: false,
                final_potential: result.final_potential,
                potential_gap: result.potential_gap,
                iterations_used: result.iterations_used,
                restart_index: result.restart_index,
            })));
            let _ = write_output(out, &report);
            eprintln!(
                "search failed: best potential gap {:.3e} after {restarts} restarts",
                result.potential_gap
            );
            EXIT_SEARCH_FAILED
        }
    }
}

fn cmd_verify(input: &Path, tol: f64) -> u8 {
    if !(tol > 0.0) {
        return usage_error("--tol must be positive");
    }
    let mut tolerances = Tolerances::default();
    tolerances.tol_verify = tol;
    let document = match read_document(input) {
        Ok(d) => d,
        Err(code) => return code,
    };
    let report = match document.body {
        Body::Sic(ref sic_doc) => {
            let vectors = match sic_doc
                .vectors
                .iter()
                .map(|v| doc::data_to_vector(v, &tolerances))
                .collect::<sicq::Result<Vec<_>>>()
            {
                Ok(v) => v,
                Err(e) => return data_error(input, &e.to_string()),
            };
            let check = match check_sic(&vectors, &tolerances) {
                Ok(c) => c,
                Err(e) => return data_error(input, &e.to_string()),
            };
            let fiducial = match doc::data_to_vector(&sic_doc.fiducial, &tolerances) {
                Ok(f) => f,
                Err(e) => return data_error(input, &e.to_string()),
            };
            let gap = match frame_potential(&fiducial) {
                Ok(p) => p - frame_potential_bound(sic_doc.dim),
                Err(e) => return data_error(input, &e.to_string()),
            };
            VerifyReport {
                dim: sic_doc.dim,
                pass: check.pass && gap.abs() <= tol.max(1e-9) * 10.0,
                worst_overlap_deviation: Some(check.worst_overlap_deviation),
                worst_trace_symmetry_deviation: Some(check.worst_trace_symmetry_deviation),
                completeness_residual: check.completeness_residual,
                frame_potential_gap: Some(gap),
                min_effect_eigenvalue: None,
            }
        }
        Body::Povm(ref povm_doc) => {
            let effects = match povm_doc
                .effects
                .iter()
                .map(doc::data_to_matrix)
                .collect::<sicq::Result<Vec<_>>>()
            {
                Ok(e) => e,
                Err(e) => return data_error(input, &e.to_string()),
            };
            let check = match validate_povm(&effects, &tolerances) {
                Ok(c) => c,
                Err(e) => return data_error(input, &e.to_string()),
            };
            VerifyReport {
                dim: povm_doc.dim,
                pass: check.pass,
                worst_overlap_deviation: None,
                worst_trace_symmetry_deviation: None,
                completeness_residual: check.completeness_residual,
                frame_potential_gap: None,
                min_effect_eigenvalue: Some(check.min_effect_eigenvalue),
            }
        }
        _ => return data_error(input, "expected a sic or povm document"),
    };
    let pass = report.pass;
    print!(
        "{}",
        Document::new(Body::Report(ReportDoc::Verify(report))).to_json()
    );
    if pass {
        EXIT_OK
    } else {
        EXIT_CHECK_FAILED
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_ftp_compare(
    dim: Option<usize>,
    sic_path: &Path,
    state_path: Option<&Path>,
    random: Option<usize>,
    seed: u64,
    target_path: &Path,
    tol: f64,
    out: Option<&Path>,
) -> u8 {
    if state_path.is_none() && random.is_none() {
        return usage_error("provide --state or --random");
    }
    let tolerances = Tolerances::default();
    let sic = match load_sic_document(sic_path, &tolerances) {
        Ok(s) => s,
        Err(code) => return code,
    };
    if let Some(d) = dim {
        if d != sic.dim() {
            return data_error(sic_path, &format!("expected dimension {d}, document has {}", sic.dim()));
        }
    }
    let target = match load_povm_document(target_path, &tolerances) {
        Ok(p) => p,
        Err(code) => return code,
    };
    if target.dim() != sic.dim() {
        return data_error(
            target_path,
            &format!("target dimension {} vs SIC dimension {}", target.dim(), sic.dim()),
        );
    }

    let states: Vec<DensityOperator> = if let Some(path) = state_path {
        let document = match read_document(path) {
            Ok(d) => d,
            Err(code) => return code,
        };
        match document.body {
            Body::State(ref s) => match doc::load_state(s, &tolerances) {
                Ok(rho) => {
                    if rho.dim() != sic.dim() {
                        return data_error(
                            path,
                            &format!("state dimension {} vs SIC dimension {}", rho.dim(), sic.dim()),
                        );
                    }
                    vec![rho]
                }
                Err(e) => return data_error(path, &e.to_string()),
            },
            _ => return data_error(path, "expected a state document"),
        }
    } else {
        let n = random.unwrap();
        (0..n)
            .map(|k| random_density(sic.dim(), seed.wrapping_add(k as u64)).expect("d >= 2"))
            .collect()
    };

    let cond = match sicq::conditional_matrix(&sic, &target) {
        Ok(c) => c,
        Err(e) => return data_error(target_path, &e.to_string()),
    };
    let mut cases = Vec::with_capacity(states.len());
    let mut max_classical: f64 = 0.0;
    let mut max_qbist: f64 = 0.0;
    for rho in &states {
        let cmp = match compare_ftp(rho, &sic, &target) {
            Ok(c) => c,
            Err(e) => return data_error(sic_path, &e.to_string()),
        };
        // residual of conditioning on a single posterior instead of the
        // prior state
        let alt = (0..cond.rows())
            .map(|i| {
                cmp.qbist
                    .iter()
                    .zip(cond.row(i))
                    .map(|(q, r)| (q - r).abs())
                    .fold(0.0, f64::max)
            })
            .fold(f64::INFINITY, f64::min);
        max_classical = max_classical.max(cmp.deviation_classical);
        max_qbist = max_qbist.max(cmp.deviation_qbist);
        cases.push(FtpCompareCase {
            born: cmp.born.values().to_vec(),
            classical: cmp.classical,
            qbist: cmp.qbist,
            deviation_classical: cmp.deviation_classical,
            deviation_qbist: cmp.deviation_qbist,
            alt_posterior_residual: alt,
        });
    }
    let pass = max_qbist <= tol;
    let report = Document::new(Body::Report(ReportDoc::FtpCompare(FtpCompareReport {
        dim: sic.dim(),
        cases,
        max_deviation_classical: max_classical,
        max_deviation_qbist: max_qbist,
        pass,
    })));
    if let Some(path) = out {
        if let Err(code) = write_output(path, &report) {
            return code;
        }
    }
    println!(
        "cases: {}, max classical deviation {:.3e}, max qbist deviation {:.3e}, pass: {pass}",
        states.len(),
        max_classical,
        max_qbist
    );
    if pass {
        EXIT_OK
    } else {
        EXIT_CHECK_FAILED
    }
}

fn cmd_reconstruct(probs_path: &Path, reference_path: &Path, method: Method, out: &Path) -> u8 {
    let tolerances = Tolerances::default();
    let probs_doc = match read_document(probs_path) {
        Ok(d) => d,
        Err(code) => return code,
    };
    let values = match probs_doc.body {
        Body::Probabilities(ref p) => p.values.clone(),
        _ => return data_error(probs_path, "expected a probabilities document"),
    };
    let probs = match ProbabilityVector::new(values, &tolerances) {
        Ok(p) => p,
        Err(e) => return data_error(probs_path, &e.to_string()),
    };
    let result = match method {
        Method::Sic => {
            let sic = match load_sic_document(reference_path, &tolerances) {
                Ok(s) => s,
                Err(code) => return code,
            };
            reconstruct_from_sic(&probs, &sic, &tolerances)
        }
        Method::Inversion => {
            let reference = match load_reference_povm(reference_path, &tolerances) {
                Ok(p) => p,
                Err(code) => return code,
            };
            reconstruct_linear_inversion(&probs, &reference, &tolerances)
        }
    };
    match result {
        Ok(rho) => {
            if let Err(code) = write_output(out, &doc::state_doc(&rho)) {
                return code;
            }
            println!("reconstructed a valid density operator of dimension {}", rho.dim());
            EXIT_OK
        }
        Err(e @ (Error::ReconstructionInfeasible { .. }
        | Error::Underdetermined { .. }
        | Error::InconsistentData { .. })) => {
            let report = Document::new(Body::Report(ReportDoc::Reconstruction(
                ReconstructionReport {
                    feasible: false,
                    detail: e.to_string(),
                },
            )));
            let _ = write_output(out, &report);
            eprintln!("reconstruction infeasible: {e}");
            EXIT_INFEASIBLE
        }
        Err(e) => data_error(probs_path, &e.to_string()),
    }
}

fn load_sic_document(path: &Path, tol: &Tolerances) -> Result<SicPovm, u8> {
    let document = read_document(path)?;
    match document.body {
        Body::Sic(ref s) => doc::load_sic(s, tol).map_err(|e| data_error(path, &e.to_string())),
        _ => Err(data_error(path, "expected a sic document")),
    }
}

fn load_povm_document(path: &Path, tol: &Tolerances) -> Result<Povm, u8> {
    let document = read_document(path)?;
    match document.body {
        Body::Povm(ref p) => doc::load_povm(p, tol).map_err(|e| data_error(path, &e.to_string())),
        Body::Sic(ref s) => doc::load_sic(s, tol)
            .map(|sic| sic.as_povm())
            .map_err(|e| data_error(path, &e.to_string())),
        _ => Err(data_error(path, "expected a povm or sic document")),
    }
}

fn load_reference_povm(path: &Path, tol: &Tolerances) -> Result<Povm, u8> {
    load_povm_document(path, tol)
}
