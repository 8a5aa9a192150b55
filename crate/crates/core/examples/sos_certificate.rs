//! Putinar certificate for x^4 - x^2 + 1/4 >= 0 on [-1, 1], checked by
//! re-expansion.
//!
//! cargo run --release --example sos_certificate

use momlab::cone::SemialgebraicProblem;
use momlab::hierarchy::{qmodule_membership, solve_sos_tightening};
use momlab::poly::Polynomial;

fn main() -> momlab::Result<()> {
    let x = Polynomial::var(1, 0);
    let one = Polynomial::constant(1, 1.0);
    let f = &(&x.pow(4) - &x.pow(2)) + &one.scale(0.25);
    let prob = SemialgebraicProblem::new(f.clone(), vec![&one - &x.pow(2)], vec![], None)?;
    let (s, cert) = solve_sos_tightening(&prob, 4)?;
    println!("f - {s:.3e} = sigma_0 + sigma_1 (1 - x^2)");
    for (i, t) in cert.terms.iter().enumerate() {
        println!("sigma_{i} = {}", t.sigma(1).prune(1e-9));
        println!("  Gram min eigenvalue {:.2e}", t.min_eigenvalue());
    }
    println!("residual {:.2e}", cert.residual_for(&f));

    let m = qmodule_membership(&f, &prob, 4)?;
    println!("f in Q_4: {} (margin {:?})", m.member, m.margin);
    Ok(())
}
