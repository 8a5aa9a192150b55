//! SoS-convexity tests and the convex-case bound on the estimator.
//!
//! cargo run --release --example sos_convexity

use momlab::cone::SemialgebraicProblem;
use momlab::poly::Polynomial;
use momlab::upperbound::{convex_cost_bound, is_sos_convex};

fn main() -> momlab::Result<()> {
    let (x, y) = (Polynomial::var(2, 0), Polynomial::var(2, 1));
    let candidates = [
        ("x^4 + y^4", &x.pow(4) + &y.pow(4)),
        ("x^2 y^2", &x.pow(2) * &y.pow(2)),
        ("(x + y)^4 + x^2", &(&x + &y).pow(4) + &x.pow(2)),
        ("x^4 - x^2", &x.pow(4) - &x.pow(2)),
    ];
    for (name, f) in &candidates {
        let (ok, cert) = is_sos_convex(f, f.degree())?;
        let margin = cert.map_or(f64::NAN, |c| c.margin);
        println!("{name:<18} sos-convex: {ok:<5}  margin {margin:+.3e}");
    }

    let one = Polynomial::constant(2, 1.0);
    let f = &(&x - &one.scale(0.5)).pow(2) + &y.pow(2);
    let k = vec![&one - &x.pow(2), &one - &y.pow(2)];
    let prob = SemialgebraicProblem::new(f, k, vec![], None)?;
    for d in [2, 4, 6] {
        let r = convex_cost_bound(&prob, d, Some(0.0))?;
        println!(
            "d={d}: M_d* = {:.3e}, candidate {:?}, f <= M_d*: {}",
            r.m_d_star, r.candidate, r.bound_holds
        );
    }
    Ok(())
}
