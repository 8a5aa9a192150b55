//! Moment relaxations of min -x1 - x2 + x1 x2 over {0, 1}^2.
//!
//! cargo run --release --example binary_square_relaxation

use momlab::cone::{normalize, SemialgebraicProblem};
use momlab::hierarchy::solve_moment_relaxation;
use momlab::poly::{MultiIndex, Polynomial};

fn main() -> momlab::Result<()> {
    let x1 = Polynomial::var(2, 0);
    let x2 = Polynomial::var(2, 1);
    let f = &(&(-&x1) - &x2) + &(&x1 * &x2);
    let h = vec![&x1 - &x1.pow(2), &x2 - &x2.pow(2)];
    let prob = SemialgebraicProblem::new(f, vec![], h, Some(1.5))?;
    let work = normalize(&prob)?;
    for d in [2, 3] {
        let r = solve_moment_relaxation(&work, d)?;
        let y = r.moments_original();
        let m = |e: [u32; 2]| y.y(&MultiIndex::new(e.to_vec()));
        let x = r.candidate_minimizer();
        println!("level {d}: m_d* = {:.8}, f_d* = {:.8}", r.m_d_star, r.f_d_star);
        println!("  y10 = {:.6}  y01 = {:.6}  y11 = {:.6}", m([1, 0]), m([0, 1]), m([1, 1]));
        println!("  candidate {:?}, in K: {}", x, prob.is_feasible(&x, 1e-6));
    }
    Ok(())
}
