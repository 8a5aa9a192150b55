//! Corpus runs: brute-force oracles, convergence-rate fits, distances to
//! optimal measures and CSV/markdown reports.

mod distance;
mod fit;
mod oracle;
mod suite;

pub use distance::{moment_distance_to_optimal, MAX_DISTANCE_SAMPLES};
pub use fit::{fit_rate, fit_rate_with, RateFit, FINITE_GAP_TOL};
pub use oracle::{brute_force_oracle, default_resolution, Oracle, MINIMIZER_TOL};
pub use suite::{
    load_corpus, run_suite, write_report, Check, Corpus, CorpusEntry, LevelRecord, MeasureSpec, ProblemOutcome,
    RateReport, SuiteConfig, SuiteReport, UpperSpec,
};
