//! Runs the shipped corpus and writes report.csv / summary.md.
//!
//! cargo run --release --example convergence_bench [out_dir]

use std::path::PathBuf;

use momlab::bench::{load_corpus, run_suite, write_report, SuiteConfig};

fn main() -> momlab::Result<()> {
    let corpus = load_corpus(&PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data/corpus.json"))?;
    let out = std::env::args().nth(1).map_or_else(|| std::env::temp_dir().join("momlab-report"), PathBuf::from);
    let suite = run_suite(&corpus, &SuiteConfig::default());
    write_report(&out, &suite)?;
    for p in &suite.problems {
        match &p.report {
            Ok(r) => {
                println!("{:<20} f* = {:>12.8}  checks {}", p.id, r.oracle.f_star, if r.passed() { "ok" } else { "FAILED" });
                for row in &r.rows {
                    println!(
                        "    d={:<2} m_d={:<14} u_d={:<14} est={:<10} dist={:<10} {}",
                        row.d,
                        row.m_d.map_or("-".into(), |v| format!("{v:.8}")),
                        row.u_d.map_or("-".into(), |v| format!("{v:.8}")),
                        row.est_err.map_or("-".into(), |v| format!("{v:.2e}")),
                        row.mom_dist.map_or("-".into(), |v| format!("{v:.2e}")),
                        row.status.clone().or(row.upper_status.clone()).unwrap_or_default()
                    );
                }
                for c in r.checks.iter().filter(|c| !c.passed) {
                    println!("    failed: {} {}", c.name, c.detail);
                }
            }
            Err(e) => println!("{:<20} error: {e}", p.id),
        }
    }
    println!("{:.2} s, report in {}", suite.seconds, out.display());
    Ok(())
}
