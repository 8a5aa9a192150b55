//! Builds a small SDP by hand, solves it and exports it in SDPA format.
//!
//! cargo run --release --example sdp_basics

use momlab::sdp::{extract_dual_gram, solve, write_sdpa, SdpOptions, SdpProblem};

fn main() -> momlab::Result<()> {
    // Largest eigenvalue of A as min t s.t. t I - A >= 0.
    let a = [[2.0, 1.0, 0.0], [1.0, 2.0, 1.0], [0.0, 1.0, 2.0]];
    let mut p = SdpProblem::new(1);
    p.set_cost(0, 1.0);
    let b = p.add_block(3);
    for (i, row) in a.iter().enumerate() {
        p.add_entry(b, Some(0), i, i, 1.0);
        for (j, &v) in row.iter().enumerate().skip(i) {
            p.add_entry(b, None, i, j, -v);
        }
    }
    let sol = solve(&p, &SdpOptions::default());
    println!("status {:?} after {} iterations", sol.status, sol.iterations);
    println!("lambda_max = {:.10} (exact {:.10})", sol.x[0], 2.0 + 2f64.sqrt());
    for it in &sol.log {
        println!(
            "  {:>2}  primal {:>+.8e}  dual {:>+.8e}  mu {:.1e}",
            it.iter, it.primal_obj, it.dual_obj, it.mu
        );
    }
    // The dual is a density matrix on the top eigenvector.
    println!("dual block:\n{}", extract_dual_gram(&sol, 0)?);
    write_sdpa(&p, std::io::stdout().lock())?;
    Ok(())
}
