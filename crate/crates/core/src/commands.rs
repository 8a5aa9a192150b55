//! The `momlab` command line.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::bench::{load_corpus, run_suite, write_report, SuiteConfig};
use crate::cone::{normalize, SemialgebraicProblem};
use crate::error::{Error, Result};
use crate::extraction::{check_flatness, extract_atoms, FlatnessReport, DEFAULT_RANK_TOL};
use crate::hierarchy::{relaxation_sdp, solve_moment_relaxation, SosCertificate};
use crate::io::{read_moments, read_problem, MomentTable};
use crate::sdp::{write_sdpa, SolveStatus};
use crate::support::{cd_kernel, cd_support_grid, default_family, power_support_grid, DEFAULT_PINV_TOL};
use crate::upperbound::{solve_upper_bound_on, ReferenceMeasure, UpperBoundResult};

#[derive(Debug, Parser)]
#[command(name = "momlab", version, about = "Moment-SoS hierarchy toolkit")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve one level of the moment relaxation.
    Solve(SolveArgs),
    /// Solve a level, test flatness and extract minimizers.
    Extract(ExtractArgs),
    /// Upper bounds from SoS densities against a reference measure.
    Upper(UpperArgs),
    /// Support estimation on a grid, written as CSV.
    Support(SupportArgs),
    /// Run a problem corpus and write report.csv and summary.md.
    Bench(BenchArgs),
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[arg(long)]
    pub problem: PathBuf,
    #[arg(long)]
    pub level: usize,
    /// Include the SoS certificate in the output.
    #[arg(long)]
    pub sos: bool,
    /// Also write the SDP in SDPA sparse format.
    #[arg(long)]
    pub export_sdpa: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ExtractArgs {
    #[arg(long)]
    pub problem: PathBuf,
    #[arg(long)]
    pub level: usize,
    #[arg(long, default_value_t = DEFAULT_RANK_TOL)]
    pub rank_tol: f64,
}

#[derive(Debug, Args)]
pub struct UpperArgs {
    #[arg(long)]
    pub problem: PathBuf,
    /// `box`, `ball`, or a moment-table JSON file.
    #[arg(long, default_value = "box")]
    pub measure: String,
    /// `start:step:end`, `start:end` or a single level.
    #[arg(long, default_value = "0:2:8")]
    pub levels: String,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum SupportMethod {
    Cd,
    Power,
}

#[derive(Debug, Args)]
pub struct SupportArgs {
    #[arg(long)]
    pub moments: PathBuf,
    #[arg(long, value_enum, default_value_t = SupportMethod::Cd)]
    pub method: SupportMethod,
    /// `lo:hi` for every axis, or one `lo:hi` per axis separated by commas.
    #[arg(long = "box", default_value = "-1:1", allow_hyphen_values = true)]
    pub bounds: String,
    #[arg(long, default_value_t = 201)]
    pub res: usize,
    #[arg(long)]
    pub degree: usize,
    /// Inclusion threshold on `K(x, x)`; the raw values are always written.
    #[arg(long)]
    pub threshold: Option<f64>,
    #[arg(long, default_value_t = DEFAULT_PINV_TOL)]
    pub pinv_tol: f64,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[arg(long)]
    pub corpus: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    /// Moment order of the distance to optimal measures.
    #[arg(long, default_value_t = 2)]
    pub distance_order: usize,
}

pub fn run(cli: Cli, out: &mut dyn Write) -> Result<()> {
    match cli.command {
        Command::Solve(a) => solve(a, out),
        Command::Extract(a) => extract(a, out),
        Command::Upper(a) => upper(a, out),
        Command::Support(a) => support(a, out),
        Command::Bench(a) => bench(a, out),
    }
}

fn write_json<T: Serialize>(out: &mut dyn Write, v: &T) -> Result<()> {
    serde_json::to_writer_pretty(&mut *out, v)?;
    writeln!(out)?;
    Ok(())
}

/// The problem as solved: normalized when it carries a ball radius.
fn working_problem(prob: &SemialgebraicProblem) -> Result<SemialgebraicProblem> {
    if prob.ball_radius().is_some() {
        normalize(prob)
    } else {
        Ok(prob.clone())
    }
}

#[derive(Serialize)]
struct SolveReport {
    level: usize,
    moment_order: usize,
    m_d_star: f64,
    f_d_star: f64,
    status: SolveStatus,
    iterations: usize,
    gap: f64,
    pseudo_moments: MomentTable,
    candidate_minimizer: Vec<f64>,
    certificate_residual: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    certificate: Option<SosCertificate>,
}

fn solve(a: SolveArgs, out: &mut dyn Write) -> Result<()> {
    let prob = working_problem(&read_problem(&a.problem)?)?;
    if let Some(path) = &a.export_sdpa {
        let sdp = relaxation_sdp(&prob, a.level)?;
        write_sdpa(&sdp, std::io::BufWriter::new(std::fs::File::create(path)?))?;
    }
    let r = solve_moment_relaxation(&prob, a.level)?;
    let report = SolveReport {
        level: r.level,
        moment_order: r.moment_order,
        m_d_star: r.m_d_star,
        f_d_star: r.f_d_star,
        status: r.status,
        iterations: r.iterations,
        gap: r.gap,
        pseudo_moments: MomentTable::from(&r.moments_original()),
        candidate_minimizer: r.candidate_minimizer(),
        certificate_residual: r.certificate.as_ref().map(|c| c.residual),
        certificate: if a.sos { r.certificate.clone() } else { None },
    };
    write_json(out, &report)
}

#[derive(Serialize)]
struct ExtractReport {
    level: usize,
    m_d_star: f64,
    flatness: FlatnessReport,
    atoms: Vec<Vec<f64>>,
    weights: Vec<f64>,
    atom_values: Vec<f64>,
    atom_in_k: Vec<bool>,
    extraction_error: Option<String>,
    candidate_minimizer: Vec<f64>,
    candidate_in_k: bool,
}

fn extract(a: ExtractArgs, out: &mut dyn Write) -> Result<()> {
    let orig = read_problem(&a.problem)?;
    let prob = working_problem(&orig)?;
    let r = solve_moment_relaxation(&prob, a.level)?;
    let shift = prob.constraints().iter().map(|g| g.degree()).max().unwrap_or(1).max(1);
    let flatness = check_flatness(&r.pseudo_moments, r.moment_order, shift, a.rank_tol)?;
    let (mut atoms, mut weights, mut err) = (Vec::new(), Vec::new(), None);
    if flatness.is_flat {
        match extract_atoms(&r.pseudo_moments, r.moment_order, a.rank_tol) {
            Ok(mu) => {
                let mu = mu.scaled(&r.scale);
                atoms = mu.atoms().to_vec();
                weights = mu.weights().to_vec();
            }
            Err(e) => err = Some(e.to_string()),
        }
    } else {
        err = Some("moment matrix is not flat".into());
    }
    let f = orig.objective();
    let candidate = r.candidate_minimizer();
    let report = ExtractReport {
        level: a.level,
        m_d_star: r.m_d_star,
        atom_values: atoms.iter().map(|x| f.eval(x)).collect(),
        atom_in_k: atoms.iter().map(|x| orig.is_feasible(x, 1e-6)).collect(),
        flatness,
        atoms,
        weights,
        extraction_error: err,
        candidate_in_k: orig.is_feasible(&candidate, 1e-6),
        candidate_minimizer: candidate,
    };
    write_json(out, &report)
}

/// Parses `a:s:b`, `a:b` (step 1) or `a`.
pub fn parse_levels(spec: &str) -> Result<Vec<usize>> {
    let bad = || Error::InvalidArgument(format!("bad level range {spec:?}"));
    let parts = spec
        .split(':')
        .map(|p| p.trim().parse::<usize>().map_err(|_| bad()))
        .collect::<Result<Vec<_>>>()?;
    let (lo, step, hi) = match parts[..] {
        [a] => (a, 1, a),
        [a, b] => (a, 1, b),
        [a, s, b] if s > 0 => (a, s, b),
        _ => return Err(bad()),
    };
    if lo > hi {
        return Err(bad());
    }
    Ok((lo..=hi).step_by(step).collect())
}

/// Parses `lo:hi` (repeated for all `n` axes) or `lo:hi,lo:hi,...`.
pub fn parse_bounds(spec: &str, n: usize) -> Result<Vec<(f64, f64)>> {
    let bad = || Error::InvalidArgument(format!("bad box {spec:?}"));
    let one = |s: &str| -> Result<(f64, f64)> {
        let (lo, hi) = s.split_once(':').ok_or_else(bad)?;
        let lo: f64 = lo.trim().parse().map_err(|_| bad())?;
        let hi: f64 = hi.trim().parse().map_err(|_| bad())?;
        if lo >= hi {
            return Err(bad());
        }
        Ok((lo, hi))
    };
    let axes = spec.split(',').map(one).collect::<Result<Vec<_>>>()?;
    match axes.len() {
        1 => Ok(vec![axes[0]; n]),
        k if k == n => Ok(axes),
        k => Err(Error::DimensionMismatch { expected: n, found: k }),
    }
}

fn upper(a: UpperArgs, out: &mut dyn Write) -> Result<()> {
    let prob = read_problem(&a.problem)?;
    let n = prob.dim();
    let mu = match a.measure.as_str() {
        "box" => ReferenceMeasure::unit_box(n),
        "ball" => ReferenceMeasure::unit_ball(n),
        path => ReferenceMeasure::from_table(read_moments(std::path::Path::new(path))?),
    };
    let results = parse_levels(&a.levels)?
        .into_iter()
        .map(|d| solve_upper_bound_on(&prob, &mu, d))
        .collect::<Result<Vec<UpperBoundResult>>>()?;
    write_json(out, &results)
}

fn support(a: SupportArgs, out: &mut dyn Write) -> Result<()> {
    let y = read_moments(&a.moments)?;
    let bounds = parse_bounds(&a.bounds, y.dim())?;
    let grid = match a.method {
        SupportMethod::Cd => {
            let k = cd_kernel(&y, a.degree, a.pinv_tol)?;
            cd_support_grid(&k, &bounds, a.res, a.threshold.unwrap_or(f64::INFINITY))?
        }
        SupportMethod::Power => power_support_grid(&y, a.degree, &default_family(y.dim()), &bounds, a.res)?,
    };
    grid.write_csv(out)
}

fn bench(a: BenchArgs, out: &mut dyn Write) -> Result<()> {
    let corpus = load_corpus(&a.corpus)?;
    let config = SuiteConfig {
        distance_order: a.distance_order,
        ..SuiteConfig::default()
    };
    let suite = run_suite(&corpus, &config);
    write_report(&a.out, &suite)?;
    for p in &suite.problems {
        let state = match &p.report {
            Ok(r) if r.passed() => "ok".to_string(),
            Ok(_) => "checks failed".to_string(),
            Err(e) => format!("error: {e}"),
        };
        writeln!(out, "{}: {state}", p.id)?;
    }
    writeln!(out, "wrote {}", a.out.display())?;
    Ok(())
}
