use std::fmt::Write as _;
use std::path::Path;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::distance::moment_distance_to_optimal;
use super::fit::{fit_rate_with, RateFit};
use super::oracle::{brute_force_oracle, Oracle};
use crate::cone::{normalize, ProblemJson, SemialgebraicProblem};
use crate::error::{Error, Result};
use crate::extraction::{check_flatness, extract_atoms, DEFAULT_RANK_TOL};
use crate::hierarchy::{run_hierarchy, RelaxationResult};
use crate::io::MomentTable;
use crate::upperbound::{is_sos_convex, solve_upper_bound_on, ReferenceMeasure};

/// Sandwich slack against the grid oracle.
const ORACLE_TOL: f64 = 1e-5;
const MONOTONE_TOL: f64 = 1e-6;
const DISTANCE_MONOTONE_TOL: f64 = 1e-4;
/// Differences below this are solver noise.
const NOISE_TOL: f64 = 1e-6;
const CERT_RESIDUAL_TOL: f64 = 1e-6;
const GRAM_PSD_TOL: f64 = 1e-8;

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MeasureSpec {
    Box,
    Ball,
    Table(MomentTable),
}

impl MeasureSpec {
    pub fn build(&self, n: usize) -> Result<ReferenceMeasure> {
        Ok(match self {
            MeasureSpec::Box => ReferenceMeasure::unit_box(n),
            MeasureSpec::Ball => ReferenceMeasure::unit_ball(n),
            MeasureSpec::Table(t) => ReferenceMeasure::from_table(t.to_sequence()?),
        })
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct UpperSpec {
    pub measure: MeasureSpec,
    pub levels: Vec<usize>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CorpusEntry {
    pub id: String,
    pub problem: ProblemJson,
    /// Inclusive range of hierarchy levels.
    pub levels: (usize, usize),
    pub oracle_box: Vec<(f64, f64)>,
    #[serde(default)]
    pub resolution: Option<usize>,
    #[serde(default)]
    pub upper: Option<UpperSpec>,
    /// `K` is convex.
    #[serde(default)]
    pub convex_k: bool,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct Corpus {
    pub problems: Vec<CorpusEntry>,
}

pub fn load_corpus(path: &Path) -> Result<Corpus> {
    Ok(serde_json::from_str(&std::fs::read_to_string(path)?)?)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SuiteConfig {
    /// Moment order `r` of the distance to optimal measures.
    pub distance_order: usize,
    /// Gaps below this count as finite convergence in the fits.
    pub zero_gap_tol: f64,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            distance_order: 2,
            zero_gap_tol: 1e-6,
        }
    }
}

/// Everything measured at one level `d`.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct LevelRecord {
    pub d: usize,
    /// Hierarchy status, `None` when the level is only an upper-bound level.
    pub status: Option<String>,
    pub m_d: Option<f64>,
    pub f_d: Option<f64>,
    pub cert_residual: Option<f64>,
    pub cert_min_eig: Option<f64>,
    pub candidate: Option<Vec<f64>>,
    /// `|x^(d) - x*|_2`.
    pub est_err: Option<f64>,
    pub mom_dist: Option<f64>,
    pub flat: Option<bool>,
    pub atoms: Option<Vec<Vec<f64>>>,
    pub u_d: Option<f64>,
    pub upper_status: Option<String>,
    pub upper_estimator: Option<Vec<f64>>,
    /// `f` at the density-weighted estimator.
    pub upper_f_est: Option<f64>,
    pub upper_cost: Option<f64>,
    /// Smallest constraint value at the estimator.
    pub upper_feas_residual: Option<f64>,
    pub upper_est_err: Option<f64>,
    pub seconds: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RateReport {
    pub id: String,
    pub oracle: Oracle,
    pub convex_objective: bool,
    pub convex_k: bool,
    pub rows: Vec<LevelRecord>,
    pub lower_fit: std::result::Result<RateFit, String>,
    pub upper_fit: std::result::Result<RateFit, String>,
    pub estimator_fit: std::result::Result<RateFit, String>,
    pub checks: Vec<Check>,
}

impl RateReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    /// Rows where the hierarchy was solved to optimality.
    pub fn solved(&self) -> impl Iterator<Item = &LevelRecord> {
        self.rows.iter().filter(|r| r.m_d.is_some())
    }

    /// Rows with an upper bound.
    pub fn upper(&self) -> impl Iterator<Item = &LevelRecord> {
        self.rows.iter().filter(|r| r.u_d.is_some())
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ProblemOutcome {
    pub id: String,
    pub report: std::result::Result<RateReport, String>,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct SuiteReport {
    pub problems: Vec<ProblemOutcome>,
    pub seconds: f64,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.problems.iter().all(|p| p.report.as_ref().is_ok_and(RateReport::passed))
    }
}

/// Runs every corpus entry, concurrently; one entry failing does not affect
/// the others. Output order follows the corpus.
pub fn run_suite(corpus: &Corpus, config: &SuiteConfig) -> SuiteReport {
    let start = Instant::now();
    let problems = std::thread::scope(|scope| {
        let handles: Vec<_> = corpus
            .problems
            .iter()
            .map(|e| scope.spawn(move || run_entry(e, config)))
            .collect();
        corpus
            .problems
            .iter()
            .zip(handles)
            .map(|(e, h)| ProblemOutcome {
                id: e.id.clone(),
                report: match h.join() {
                    Ok(r) => r.map_err(|err| err.to_string()),
                    Err(_) => Err("worker panicked".into()),
                },
            })
            .collect()
    });
    SuiteReport {
        problems,
        seconds: start.elapsed().as_secs_f64(),
    }
}

fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt()
}

fn run_entry(entry: &CorpusEntry, config: &SuiteConfig) -> Result<RateReport> {
    let prob = SemialgebraicProblem::try_from(entry.problem.clone())?;
    let oracle = brute_force_oracle(&prob, &entry.oracle_box, entry.resolution)?;
    let unique = oracle.unique_minimizer();
    let work = if prob.ball_radius().is_some() {
        normalize(&prob)?
    } else {
        prob.clone()
    };
    let flat_shift = prob.constraints().iter().map(|g| g.degree()).max().unwrap_or(1).max(1);
    let f = prob.objective();
    let convex_objective = is_sos_convex(f, f.degree().max(2)).map(|(ok, _)| ok).unwrap_or(false);

    let mut rows: Vec<LevelRecord> = Vec::new();
    let (lo, hi) = entry.levels;
    let t0 = Instant::now();
    let run = run_hierarchy(&work, lo, hi);
    let per_level = t0.elapsed().as_secs_f64() / (hi + 1 - lo.min(hi + 1)).max(1) as f64;
    for lvl in &run.levels {
        let mut row = LevelRecord {
            d: lvl.level,
            seconds: per_level,
            ..Default::default()
        };
        match &lvl.result {
            Ok(r) => fill_lower(&mut row, r, &oracle, unique, flat_shift, config),
            Err(e) => row.status = Some(short_error(e)),
        }
        rows.push(row);
    }

    if let Some(up) = &entry.upper {
        let mu = up.measure.build(prob.dim())?;
        for &d in &up.levels {
            let t = Instant::now();
            let pos = match rows.iter().position(|r| r.d == d) {
                Some(p) => p,
                None => {
                    rows.push(LevelRecord {
                        d,
                        ..Default::default()
                    });
                    rows.len() - 1
                }
            };
            let row = &mut rows[pos];
            match solve_upper_bound_on(&prob, &mu, d) {
                Ok(u) => {
                    row.u_d = Some(u.u_d_star);
                    row.upper_status = Some("optimal".into());
                    row.upper_f_est = Some(f.eval(&u.estimator));
                    row.upper_cost = Some(u.cost_bound);
                    row.upper_feas_residual = Some(prob.feasibility_residual(&u.estimator));
                    row.upper_est_err = unique.then(|| dist(&u.estimator, &oracle.x_star));
                    row.upper_estimator = Some(u.estimator);
                }
                Err(e) => row.upper_status = Some(short_error(&e)),
            }
            row.seconds += t.elapsed().as_secs_f64();
        }
    }
    rows.sort_by_key(|r| r.d);

    let series = |get: &dyn Fn(&LevelRecord) -> Option<f64>| -> (Vec<usize>, Vec<f64>) {
        rows.iter().filter_map(|r| get(r).map(|v| (r.d, v))).unzip()
    };
    let fit = |(levels, gaps): (Vec<usize>, Vec<f64>)| fit_rate_with(&levels, &gaps, config.zero_gap_tol).map_err(|e| e.to_string());
    let lower_fit = fit(series(&|r| r.m_d.map(|m| oracle.f_star - m)));
    let upper_fit = fit(series(&|r| r.u_d.map(|u| u - oracle.f_star)));
    let estimator_fit = if unique {
        fit(series(&|r| r.est_err))
    } else {
        Err("minimizer is not unique".into())
    };

    let mut report = RateReport {
        id: entry.id.clone(),
        oracle,
        convex_objective,
        convex_k: entry.convex_k,
        rows,
        lower_fit,
        upper_fit,
        estimator_fit,
        checks: Vec::new(),
    };
    report.checks = checks(&report);
    Ok(report)
}

fn short_error(e: &Error) -> String {
    match e {
        Error::NotOptimal { status, .. } => format!("{status:?}"),
        other => other.to_string(),
    }
}

fn fill_lower(row: &mut LevelRecord, r: &RelaxationResult, oracle: &Oracle, unique: bool, flat_shift: usize, config: &SuiteConfig) {
    row.status = Some(format!("{:?}", r.status));
    row.m_d = Some(r.m_d_star);
    row.f_d = Some(r.f_d_star);
    if let Some(c) = &r.certificate {
        row.cert_residual = Some(c.residual);
        row.cert_min_eig = Some(c.min_gram_eigenvalue());
    }
    let x = r.candidate_minimizer();
    row.est_err = unique.then(|| dist(&x, &oracle.x_star));
    row.candidate = Some(x);
    let y = r.moments_original();
    row.mom_dist = moment_distance_to_optimal(&y, &oracle.s_star, config.distance_order.min(y.degree())).ok();
    if let Ok(rep) = check_flatness(&r.pseudo_moments, r.moment_order, flat_shift, DEFAULT_RANK_TOL) {
        row.flat = Some(rep.is_flat);
        if rep.is_flat {
            row.atoms = extract_atoms(&r.pseudo_moments, r.moment_order, DEFAULT_RANK_TOL)
                .ok()
                .map(|mu| mu.scaled(&r.scale).atoms().to_vec());
        }
    }
}

fn check(name: &str, passed: bool, detail: String) -> Check {
    Check {
        name: name.into(),
        passed,
        detail,
    }
}

fn series_text(v: &[f64]) -> String {
    v.iter().map(|x| format!("{x:.2e}")).collect::<Vec<_>>().join(", ")
}

fn checks(rep: &RateReport) -> Vec<Check> {
    let f_star = rep.oracle.f_star;
    let mut out = Vec::new();
    let lower: Vec<&LevelRecord> = rep.solved().collect();
    let upper: Vec<&LevelRecord> = rep.upper().collect();

    let worst_lower = lower.iter().filter_map(|r| r.m_d).fold(f64::NEG_INFINITY, f64::max);
    out.push(check(
        "m_d <= f*",
        lower.iter().all(|r| r.m_d.unwrap() <= f_star + ORACLE_TOL),
        format!("max m_d = {worst_lower:.8}, f* = {f_star:.8}"),
    ));
    out.push(check(
        "f_d <= m_d",
        lower.iter().all(|r| r.f_d.unwrap() <= r.m_d.unwrap() + ORACLE_TOL),
        String::new(),
    ));
    let best_upper = upper.iter().filter_map(|r| r.u_d).fold(f64::INFINITY, f64::min);
    out.push(check(
        "u_d >= f*",
        upper.iter().all(|r| r.u_d.unwrap() >= f_star - ORACLE_TOL),
        format!("min u_d = {best_upper:.8}"),
    ));
    out.push(check(
        "m_d nondecreasing",
        lower.windows(2).all(|w| w[1].m_d.unwrap() >= w[0].m_d.unwrap() - MONOTONE_TOL),
        String::new(),
    ));
    out.push(check(
        "u_d nonincreasing",
        upper.windows(2).all(|w| w[1].u_d.unwrap() <= w[0].u_d.unwrap() + MONOTONE_TOL),
        String::new(),
    ));
    let worst_res = lower.iter().filter_map(|r| r.cert_residual).fold(0.0, f64::max);
    let worst_eig = lower.iter().filter_map(|r| r.cert_min_eig).fold(f64::INFINITY, f64::min);
    out.push(check(
        "certificates",
        lower.iter().all(|r| r.cert_residual.is_some())
            && worst_res <= CERT_RESIDUAL_TOL
            && (worst_eig >= -GRAM_PSD_TOL || lower.is_empty()),
        format!("max residual {worst_res:.2e}, min Gram eigenvalue {worst_eig:.2e}"),
    ));
    if rep.oracle.unique_minimizer() {
        let dists: Vec<f64> = lower.iter().filter_map(|r| r.mom_dist).collect();
        out.push(check(
            "moment distance nonincreasing",
            dists.windows(2).all(|w| w[1] <= w[0] + DISTANCE_MONOTONE_TOL),
            series_text(&dists),
        ));
        let errs: Vec<f64> = lower.iter().filter_map(|r| r.est_err).collect();
        out.push(check(
            "estimator error final <= initial",
            match (errs.first(), errs.last()) {
                (Some(a), Some(b)) => *b <= *a + NOISE_TOL,
                _ => false,
            },
            series_text(&errs),
        ));
    }
    if rep.convex_objective {
        out.push(check(
            "f(estimator) <= cost",
            upper.iter().all(|r| r.upper_f_est.unwrap() <= r.upper_cost.unwrap() + 1e-8),
            String::new(),
        ));
    }
    if rep.convex_k {
        out.push(check(
            "estimator in K",
            upper.iter().all(|r| r.upper_feas_residual.unwrap() >= -1e-6),
            String::new(),
        ));
    }
    out
}

#[derive(Serialize)]
struct CsvRow<'a> {
    problem: &'a str,
    d: Option<usize>,
    m_d: Option<f64>,
    f_d: Option<f64>,
    u_d: Option<f64>,
    est_err: Option<f64>,
    mom_dist: Option<f64>,
    status: String,
}

fn fit_text(f: &std::result::Result<RateFit, String>) -> String {
    match f {
        Ok(RateFit::Fitted {
            slope,
            r_squared,
            finite_convergence,
            ..
        }) => {
            let mut s = format!("slope {slope:.3} (R² {r_squared:.3})");
            if let Some(d) = finite_convergence {
                let _ = write!(s, ", vanished at d = {d}");
            }
            s
        }
        Ok(RateFit::FiniteConvergence { level }) => format!("finite convergence at level {level}"),
        Err(e) => format!("no fit: {e}"),
    }
}

fn opt(v: Option<f64>) -> String {
    v.map_or("".into(), |x| format!("{x:.6e}"))
}

/// Writes `report.csv` and `summary.md` into `dir`.
pub fn write_report(dir: &Path, suite: &SuiteReport) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    let mut w = csv::Writer::from_path(dir.join("report.csv"))?;
    for p in &suite.problems {
        match &p.report {
            Ok(rep) => {
                for r in &rep.rows {
                    let status = match (&r.status, &r.upper_status) {
                        (Some(s), _) => s.clone(),
                        (None, Some(u)) => format!("upper {u}"),
                        (None, None) => String::new(),
                    };
                    w.serialize(CsvRow {
                        problem: &p.id,
                        d: Some(r.d),
                        m_d: r.m_d,
                        f_d: r.f_d,
                        u_d: r.u_d,
                        est_err: r.est_err,
                        mom_dist: r.mom_dist,
                        status,
                    })?;
                }
            }
            Err(e) => w.serialize(CsvRow {
                problem: &p.id,
                d: None,
                m_d: None,
                f_d: None,
                u_d: None,
                est_err: None,
                mom_dist: None,
                status: format!("error: {e}"),
            })?,
        }
    }
    w.flush()?;

    let mut md = String::from("# Convergence report\n\n");
    let _ = writeln!(md, "Total time: {:.2} s\n", suite.seconds);
    for p in &suite.problems {
        let _ = writeln!(md, "## {}\n", p.id);
        let rep = match &p.report {
            Ok(r) => r,
            Err(e) => {
                let _ = writeln!(md, "Failed: {e}\n");
                continue;
            }
        };
        let o = &rep.oracle;
        let _ = writeln!(
            md,
            "Oracle: f* = {:.8} at {:?} ({} points per axis, |S*| = {})\n",
            o.f_star,
            o.x_star,
            o.resolution,
            o.s_star.len()
        );
        md.push_str("| d | status | m_d | f_d | u_d | est_err | mom_dist | flat |\n|---|---|---|---|---|---|---|---|\n");
        for r in &rep.rows {
            let _ = writeln!(
                md,
                "| {} | {} | {} | {} | {} | {} | {} | {} |",
                r.d,
                r.status.clone().unwrap_or_default(),
                opt(r.m_d),
                opt(r.f_d),
                opt(r.u_d),
                opt(r.est_err),
                opt(r.mom_dist),
                r.flat.map_or("".into(), |b| b.to_string())
            );
        }
        let _ = writeln!(md, "\n- lower gap: {}", fit_text(&rep.lower_fit));
        let _ = writeln!(md, "- upper gap: {}", fit_text(&rep.upper_fit));
        let _ = writeln!(md, "- estimator error: {}\n", fit_text(&rep.estimator_fit));
        for c in &rep.checks {
            let mark = if c.passed { "ok" } else { "FAILED" };
            let _ = writeln!(md, "- [{mark}] {} {}", c.name, c.detail);
        }
        md.push('\n');
    }
    std::fs::write(dir.join("summary.md"), md)?;
    Ok(())
}
