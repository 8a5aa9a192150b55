use momlab::cone::{normalize, SemialgebraicProblem};
use momlab::hierarchy::{
    compute_d0, qmodule_membership, run_hierarchy, solve_moment_relaxation, solve_sos_tightening,
};
use momlab::poly::{MultiIndex, Polynomial};

fn x(n: usize, i: usize) -> Polynomial {
    Polynomial::var(n, i)
}

fn interval(n: usize) -> Vec<Polynomial> {
    (0..n)
        .map(|i| &Polynomial::constant(n, 1.0) - &x(n, i).pow(2))
        .collect()
}

#[test]
fn univariate_quartic_on_interval() {
    // x^4 - x^2 on [-1, 1]: minimum -1/4 at +-1/sqrt(2).
    let f = &x(1, 0).pow(4) - &x(1, 0).pow(2);
    let prob = SemialgebraicProblem::new(f, interval(1), vec![], None).unwrap();
    let r = solve_moment_relaxation(&prob, 4).unwrap();
    assert!((r.m_d_star + 0.25).abs() < 1e-6, "{}", r.m_d_star);
    assert!(r.f_d_star <= r.m_d_star + 1e-6);
    let cert = r.certificate.unwrap();
    assert!(cert.residual <= 1e-6);
    assert!(cert.min_gram_eigenvalue() >= -1e-8);
}

#[test]
fn lower_bounds_increase() {
    let (a, b) = (x(2, 0), x(2, 1));
    // Motzkin polynomial, nonnegative but not SoS.
    let f = &(&(&a.pow(4) * &b.pow(2)) + &(&a.pow(2) * &b.pow(4))) - &(&a.pow(2) * &b.pow(2)).scale(3.0);
    let f = &f + &Polynomial::constant(2, 1.0);
    let prob = SemialgebraicProblem::new(f, interval(2), vec![], Some(1.5)).unwrap();
    let run = run_hierarchy(&normalize(&prob).unwrap(), 6, 8);
    assert!(run.monotone);
    let values: Vec<f64> = run.solved().map(|r| r.m_d_star).collect();
    assert_eq!(values.len(), 3);
    for v in values {
        assert!((-1e-3..=1e-5).contains(&v), "{v}");
    }
}

#[test]
fn tightening_matches_relaxation() {
    let f = &(&x(2, 0) + &x(2, 1)) + &Polynomial::constant(2, 0.5);
    let prob = SemialgebraicProblem::new(f.clone(), interval(2), vec![], None).unwrap();
    let r = solve_moment_relaxation(&prob, 2).unwrap();
    let (s, cert) = solve_sos_tightening(&prob, 2).unwrap();
    assert!((r.m_d_star + 1.5).abs() < 1e-6);
    assert!((s - r.f_d_star).abs() < 1e-9);
    assert!(cert.residual_for(&f) <= 1e-6);
}

#[test]
fn quadratic_module_degree() {
    // 1 - x is not in Q_1(1 - x^2) but is in Q_2.
    let prob = SemialgebraicProblem::new(x(1, 0), interval(1), vec![], None).unwrap();
    let q = &Polynomial::constant(1, 1.0) - &x(1, 0);
    assert!(!qmodule_membership(&q, &prob, 1).unwrap().member);
    assert!(qmodule_membership(&q, &prob, 2).unwrap().member);
    assert_eq!(compute_d0(&prob, 6).unwrap(), Some(2));
}

#[test]
fn pseudo_moments_in_original_coordinates() {
    let f = &(&x(1, 0) - &Polynomial::constant(1, 2.0)).pow(2);
    let g = &Polynomial::constant(1, 9.0) - &x(1, 0).pow(2);
    let prob = SemialgebraicProblem::new(f.clone(), vec![g], vec![], Some(3.0)).unwrap();
    let r = solve_moment_relaxation(&normalize(&prob).unwrap(), 2).unwrap();
    let y = r.moments_original();
    assert!((y.y(&MultiIndex::new(vec![1])) - 2.0).abs() < 1e-5);
    assert!((r.candidate_minimizer()[0] - 2.0).abs() < 1e-5);
    assert!(r.m_d_star.abs() < 1e-6);
}
