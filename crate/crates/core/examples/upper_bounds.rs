//! Upper bounds from SoS densities on the box and the ball.
//!
//! cargo run --release --example upper_bounds

use momlab::cone::SemialgebraicProblem;
use momlab::poly::Polynomial;
use momlab::upperbound::{solve_upper_bound, solve_upper_bound_on, ReferenceMeasure};

fn main() -> momlab::Result<()> {
    let x = Polynomial::var(1, 0);
    println!("f = x on [-1, 1]");
    for d in (0..=12).step_by(2) {
        let u = solve_upper_bound(&x, &ReferenceMeasure::unit_box(1), d)?;
        println!("  d={d:<2} u_d* = {:+.10}  estimator {:+.6}", u.u_d_star, u.estimator[0]);
    }

    // A convex quadratic on the unit disk, minimum 0 at (0.3, -0.2).
    let (a, b) = (Polynomial::var(2, 0), Polynomial::var(2, 1));
    let f = &(&a - &Polynomial::constant(2, 0.3)).pow(2) + &(&b + &Polynomial::constant(2, 0.2)).pow(2);
    let one = Polynomial::constant(2, 1.0);
    let disk = &(&one - &a.pow(2)) - &b.pow(2);
    let prob = SemialgebraicProblem::new(f.clone(), vec![disk], vec![], None)?;
    println!("shifted quadratic on the disk");
    for d in (0..=8).step_by(2) {
        let u = solve_upper_bound_on(&prob, &ReferenceMeasure::unit_ball(2), d)?;
        println!(
            "  d={d} u_d* = {:.6}  f(estimator) = {:.6}  in K: {:?}",
            u.u_d_star,
            f.eval(&u.estimator),
            u.feasible
        );
    }
    Ok(())
}
