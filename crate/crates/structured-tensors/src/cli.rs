//! Batch command-line surface. Exit codes are a pure function of the
//! outcome: 0 = In/positive, 1 = Out/negative (with certificate),
//! 2 = Inconclusive, 3 = input error. Reports embed certificates in full
//! so external tools can re-validate with one eigendecomposition.

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::cones::{
    check_cd_hankel_with, check_cp_witness, check_sos_star_with, check_sos_with, check_ssos_with,
    cone_chain_harness, MembershipReport, Status,
};
use crate::error::{Error, Result};
use crate::hankel::{
    generating_from_hankel, hankel_from_generating, inherit_reshape, prony_decompose,
    schur_decomposed,
};
use crate::io;
use crate::sdp::{DEFAULT_SDP_MAX_ITER, DEFAULT_SDP_TOL};
use crate::spectral::{
    copositive_min, default_restarts, min_h_eigenvalue, numeric_pd_check, ProbeStatus,
};
use crate::tensor::from_weighted_powers;

pub const EXIT_IN: i32 = 0;
pub const EXIT_OUT: i32 = 1;
pub const EXIT_INCONCLUSIVE: i32 = 2;
pub const EXIT_INPUT_ERROR: i32 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "stt",
    about = "structured symmetric tensors: build, decompose, classify"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Target {
    Sos,
    Ssos,
    SosStar,
    PdProbe,
    CopProbe,
    CdHankel,
    CpWitness,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Evaluate A xᵐ at a point (tensor JSON input).
    Eval {
        #[arg(long)]
        input: PathBuf,
        /// Evaluation point, comma separated.
        #[arg(long, value_delimiter = ',', required = true)]
        x: Vec<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Build the Hankel tensor of a generating vector (JSON input).
    HankelBuild {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Recover a Vandermonde decomposition from a generating vector.
    Prony {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Reuse a generating vector at order q·m, dim p (requires n−1 = (p−1)q).
    Inherit {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        q: usize,
        #[arg(long)]
        p: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Hadamard product of two decomposition files, with tracked output
    /// decomposition.
    Hadamard {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        with: PathBuf,
        #[arg(long, default_value_t = 4)]
        order: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Cone membership checks and positivity probes.
    Check {
        #[arg(long, value_enum)]
        target: Target,
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_SDP_TOL)]
        tol: f64,
        #[arg(long)]
        restarts: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Seeded cone-chain and duality sampling harness.
    Harness {
        #[arg(long, default_value_t = 4)]
        order: usize,
        #[arg(long, default_value_t = 3)]
        dim: usize,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Run a bundled case study end to end: sec54 | sec55.
    Reproduce {
        which: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

fn emit<T: Serialize>(report: &T, text: String, out: &Option<PathBuf>, format: Format) -> Result<()> {
    match format {
        Format::Json => println!("{}", io::to_stable_json(report)?),
        Format::Text => println!("{text}"),
    }
    if let Some(path) = out {
        io::write_report(path, report)?;
    }
    Ok(())
}

fn status_exit(status: Status) -> i32 {
    match status {
        Status::In => EXIT_IN,
        Status::Out => EXIT_OUT,
        Status::Inconclusive => EXIT_INCONCLUSIVE,
    }
}

fn probe_exit(status: ProbeStatus) -> i32 {
    match status {
        ProbeStatus::Positive => EXIT_IN,
        ProbeStatus::NegativeWitness => EXIT_OUT,
        ProbeStatus::ZeroBoundary => EXIT_INCONCLUSIVE,
    }
}

#[derive(Serialize)]
struct EvalReport {
    value: f64,
    x: Vec<f64>,
}

#[derive(Serialize)]
struct PronyReport {
    nodes: Vec<f64>,
    weights: Vec<f64>,
    infinity_weight: Option<f64>,
    residual: f64,
    rank: usize,
    complete: bool,
}

#[derive(Serialize)]
struct ProbeJson {
    status: String,
    min_value: f64,
    argmin: Vec<f64>,
    restarts_used: usize,
}

#[derive(Serialize)]
struct ReproduceReport {
    case: String,
    min_h_eigenvalue: f64,
    kkt_residual: f64,
    pd_probe: ProbeJson,
    sos: MembershipReport,
    cd_hankel: MembershipReport,
    prony: Option<PronyReport>,
}

fn membership_text(rep: &MembershipReport) -> String {
    let mut s = format!("{}: {}", rep.cone, rep.status.as_str());
    for (k, v) in &rep.residuals {
        s.push_str(&format!("\n  {k} = {v:.6e}"));
    }
    for note in &rep.notes {
        s.push_str(&format!("\n  note: {note}"));
    }
    s
}

/// Execute one command; returns the process exit code.
pub fn run(cli: Cli) -> i32 {
    match dispatch(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_INPUT_ERROR
        }
    }
}

fn dispatch(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::Eval { input, x, out, format } => {
            let a = io::load_tensor(&input)?;
            let value = a.eval(&x)?;
            let report = EvalReport { value, x };
            emit(&report, format!("value = {value:.17e}"), &out, format)?;
            Ok(EXIT_IN)
        }
        Command::HankelBuild { input, out, format } => {
            let h = io::load_generating(&input)?;
            let a = hankel_from_generating(&h);
            if let Some(path) = &out {
                io::save_tensor(path, &a)?;
            }
            let text = format!(
                "built Hankel tensor: order {}, dim {}, {} stored entries",
                a.order(),
                a.dim(),
                a.entries().count()
            );
            if format == Format::Json && out.is_none() {
                io::save_tensor(Path::new("/dev/stdout"), &a)?;
            } else {
                println!("{text}");
            }
            Ok(EXIT_IN)
        }
        Command::Prony { input, tol, out, format } => {
            let h = io::load_generating(&input)?;
            let dec = prony_decompose(&h, tol)?;
            let report = PronyReport {
                nodes: dec.nodes.clone(),
                weights: dec.weights.clone(),
                infinity_weight: dec.infinity_weight,
                residual: dec.residual,
                rank: dec.rank,
                complete: crate::hankel::is_complete_hankel(&dec),
            };
            let text = format!(
                "nodes = {:?}\nweights = {:?}\ninfinity_weight = {:?}\nresidual = {:.3e}\ncomplete = {}",
                report.nodes, report.weights, report.infinity_weight, report.residual, report.complete
            );
            emit(&report, text, &out, format)?;
            Ok(EXIT_IN)
        }
        Command::Inherit { input, q, p, out, format } => {
            let h = io::load_generating(&input)?;
            let b = inherit_reshape(&h, q, p)?;
            if let Some(path) = &out {
                io::save_tensor(path, &b)?;
            }
            let _ = format;
            println!(
                "inherited tensor: order {}, dim {}",
                b.order(),
                b.dim()
            );
            Ok(EXIT_IN)
        }
        Command::Hadamard { input, with, order, out, format } => {
            let u = io::load_decomposition(&input)?;
            let v = io::load_decomposition(&with)?;
            let prod = schur_decomposed(&u, &v)?;
            if let Some(path) = &out {
                io::save_decomposition(path, &prod)?;
            }
            let a = from_weighted_powers(&prod, order, prod.dim());
            let _ = format;
            println!(
                "hadamard product: {} terms, tensor scale {:.6e}",
                prod.len(),
                a.scale()
            );
            Ok(EXIT_IN)
        }
        Command::Check { target, input, seed, tol, restarts, out, format } => {
            run_check(target, &input, seed, tol, restarts, &out, format)
        }
        Command::Harness { order, dim, samples, seed, out, format } => {
            let report = cone_chain_harness(order, dim, samples, seed)?;
            let text = if report.violations.is_empty() {
                format!("harness: {} samples, zero violations", report.samples)
            } else {
                format!(
                    "harness: {} samples, {} violations\n{}",
                    report.samples,
                    report.violations.len(),
                    report.violations.join("\n")
                )
            };
            emit(&report, text, &out, format)?;
            Ok(if report.violations.is_empty() {
                EXIT_IN
            } else {
                EXIT_OUT
            })
        }
        Command::Reproduce { which, seed, out, format } => run_reproduce(&which, seed, &out, format),
    }
}

fn run_check(
    target: Target,
    input: &Path,
    seed: u64,
    tol: f64,
    restarts: Option<usize>,
    out: &Option<PathBuf>,
    format: Format,
) -> Result<i32> {
    match target {
        Target::Sos => {
            let a = io::load_tensor(input)?;
            let rep = check_sos_with(&a, tol, DEFAULT_SDP_MAX_ITER, seed)?;
            emit(&rep, membership_text(&rep), out, format)?;
            Ok(status_exit(rep.status))
        }
        Target::Ssos => {
            let a = io::load_tensor(input)?;
            let rep = check_ssos_with(&a, tol, seed)?;
            emit(&rep, membership_text(&rep), out, format)?;
            Ok(status_exit(rep.status))
        }
        Target::SosStar => {
            let a = io::load_tensor(input)?;
            let rep = check_sos_star_with(&a, tol)?;
            emit(&rep, membership_text(&rep), out, format)?;
            Ok(status_exit(rep.status))
        }
        Target::PdProbe => {
            let a = io::load_tensor(input)?;
            let r = restarts.unwrap_or_else(|| default_restarts(a.dim()));
            let probe = numeric_pd_check(&a, r, seed)?;
            let rep = ProbeJson {
                status: probe.status.as_str().into(),
                min_value: probe.min_value,
                argmin: probe.argmin,
                restarts_used: probe.restarts_used,
            };
            emit(
                &rep,
                format!("pd-probe: {} (min {:.6e})", rep.status, rep.min_value),
                out,
                format,
            )?;
            Ok(probe_exit(probe.status))
        }
        Target::CopProbe => {
            let a = io::load_tensor(input)?;
            let r = restarts.unwrap_or_else(|| default_restarts(a.dim()));
            let probe = copositive_min(&a, r, seed)?;
            let rep = ProbeJson {
                status: probe.status.as_str().into(),
                min_value: probe.min_value,
                argmin: probe.argmin,
                restarts_used: probe.restarts_used,
            };
            emit(
                &rep,
                format!("cop-probe: {} (min {:.6e})", rep.status, rep.min_value),
                out,
                format,
            )?;
            Ok(probe_exit(probe.status))
        }
        Target::CdHankel => {
            let h = io::load_generating(input)?;
            let rep = check_cd_hankel_with(&h, tol)?;
            emit(&rep, membership_text(&rep), out, format)?;
            Ok(status_exit(rep.status))
        }
        Target::CpWitness => {
            let dec = io::load_decomposition(input)?;
            let rep = check_cp_witness(&dec)?;
            emit(&rep, membership_text(&rep), out, format)?;
            Ok(status_exit(rep.status))
        }
    }
}

fn run_reproduce(which: &str, seed: u64, out: &Option<PathBuf>, format: Format) -> Result<i32> {
    let (case, a) = match which {
        "sec54" => ("sec54", crate::bundled::sec54_tensor()),
        "sec55" => ("sec55", crate::bundled::sec55_tensor()),
        other => {
            return Err(Error::MalformedInput {
                field: "which".into(),
                message: format!("unknown case `{other}` (expected sec54 or sec55)"),
            })
        }
    };
    let pair = min_h_eigenvalue(&a, 16, seed)?;
    let d = crate::cones::precondition_scaling(&a);
    let scaled = a.scale_variables(&d)?;
    let probe = numeric_pd_check(&scaled, default_restarts(a.dim()), seed)?;
    let sos = check_sos_with(&a, DEFAULT_SDP_TOL, DEFAULT_SDP_MAX_ITER, seed)?;
    let h = generating_from_hankel(&a)?;
    let cd = check_cd_hankel_with(&h, DEFAULT_SDP_TOL)?;
    let prony = prony_decompose(&h, 1e-6).ok().map(|dec| PronyReport {
        complete: crate::hankel::is_complete_hankel(&dec),
        nodes: dec.nodes,
        weights: dec.weights,
        infinity_weight: dec.infinity_weight,
        residual: dec.residual,
        rank: dec.rank,
    });
    let report = ReproduceReport {
        case: case.into(),
        min_h_eigenvalue: pair.lambda,
        kkt_residual: pair.kkt_residual,
        pd_probe: ProbeJson {
            status: probe.status.as_str().into(),
            min_value: probe.min_value,
            argmin: probe.argmin,
            restarts_used: probe.restarts_used,
        },
        sos,
        cd_hankel: cd,
        prony,
    };
    let text = format!(
        "case {case}\n  min H-eigenvalue = {:.8} (kkt residual {:.3e})\n  pd probe ({}): {} (min {:.6e})\n  {}\n  {}",
        report.min_h_eigenvalue,
        report.kkt_residual,
        "preconditioned",
        report.pd_probe.status,
        report.pd_probe.min_value,
        membership_text(&report.sos).replace('\n', "\n  "),
        membership_text(&report.cd_hankel).replace('\n', "\n  "),
    );
    emit(&report, text, out, format)?;
    if report.sos.status == Status::Inconclusive || report.cd_hankel.status == Status::Inconclusive
    {
        Ok(EXIT_INCONCLUSIVE)
    } else {
        Ok(EXIT_IN)
    }
}
