use momlab::sdp::{extract_dual_gram, solve, write_sdpa, SdpOptions, SdpProblem, SolveStatus};
use nalgebra::{DMatrix, SymmetricEigen};
use proptest::prelude::*;

/// `min t` s.t. `t I - A >= 0`, whose optimum is `lambda_max(A)`.
fn max_eig_sdp(a: &DMatrix<f64>) -> SdpProblem {
    let n = a.nrows();
    let mut p = SdpProblem::new(1);
    p.set_cost(0, 1.0);
    let b = p.add_block(n);
    for i in 0..n {
        p.add_entry(b, Some(0), i, i, 1.0);
        for j in i..n {
            p.add_entry(b, None, i, j, -a[(i, j)]);
        }
    }
    p
}

#[test]
fn off_diagonal_bound() {
    // [[1, x], [x, 1]] >= 0, minimize x.
    let mut p = SdpProblem::new(1);
    p.set_cost(0, 1.0);
    let b = p.add_block(2);
    p.add_entry(b, None, 0, 0, 1.0);
    p.add_entry(b, None, 1, 1, 1.0);
    p.add_entry(b, Some(0), 0, 1, 1.0);
    let sol = solve(&p, &SdpOptions::default());
    assert_eq!(sol.status, SolveStatus::Optimal);
    assert!((sol.x[0] + 1.0).abs() < 1e-7, "{}", sol.x[0]);
    assert!((sol.primal_objective - sol.dual_objective).abs() < 1e-7);
    let y = extract_dual_gram(&sol, 0).unwrap();
    assert!(SymmetricEigen::new(y).eigenvalues.min() >= -1e-12);
}

#[test]
fn equality_constrained_lp() {
    // min x0 + 2 x1, x0 + x1 = 1, x >= 0.
    let mut p = SdpProblem::new(2);
    p.set_cost(0, 1.0);
    p.set_cost(1, 2.0);
    for v in 0..2 {
        let b = p.add_block(1);
        p.add_entry(b, Some(v), 0, 0, 1.0);
    }
    p.add_equality(vec![(0, 1.0), (1, 1.0)], 1.0);
    let sol = solve(&p, &SdpOptions::default());
    assert!(sol.is_optimal());
    assert!((sol.primal_objective - 1.0).abs() < 1e-7);
    assert!((sol.x[0] - 1.0).abs() < 1e-6 && sol.x[1].abs() < 1e-6);
}

#[test]
fn detects_primal_infeasibility() {
    // x >= 1 and -x >= 0.
    let mut p = SdpProblem::new(1);
    p.set_cost(0, 1.0);
    let b = p.add_block(1);
    p.add_entry(b, Some(0), 0, 0, 1.0);
    p.add_entry(b, None, 0, 0, -1.0);
    let b = p.add_block(1);
    p.add_entry(b, Some(0), 0, 0, -1.0);
    let sol = solve(&p, &SdpOptions::default());
    assert_eq!(sol.status, SolveStatus::PrimalInfeasible);
    assert!(extract_dual_gram(&sol, 0).is_err());
}

#[test]
fn detects_unboundedness() {
    // min -x over x >= 0.
    let mut p = SdpProblem::new(1);
    p.set_cost(0, -1.0);
    let b = p.add_block(1);
    p.add_entry(b, Some(0), 0, 0, 1.0);
    let sol = solve(&p, &SdpOptions::default());
    assert_eq!(sol.status, SolveStatus::DualInfeasible);
}

#[test]
fn sdpa_layout() {
    let a = DMatrix::from_row_slice(2, 2, &[2.0, 1.0, 1.0, 3.0]);
    let mut p = max_eig_sdp(&a);
    p.add_equality(vec![(0, 1.0)], 5.0);
    let mut buf = Vec::new();
    write_sdpa(&p, &mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "1 = mDIM");
    assert_eq!(lines[1], "2 = nBLOCK");
    assert_eq!(lines[2], "2 -2 = bLOCKsTRUCT");
    assert!(lines.iter().any(|l| l.starts_with("0 1 1 2 ")));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn largest_eigenvalue(n in 1usize..5, seed in proptest::collection::vec(-1.0f64..1.0, 16)) {
        let a = DMatrix::from_fn(n, n, |i, j| seed[i.min(j) * 4 + i.max(j)]);
        let sol = solve(&max_eig_sdp(&a), &SdpOptions::default());
        prop_assert!(sol.is_optimal());
        let want = SymmetricEigen::new(a).eigenvalues.max();
        prop_assert!((sol.x[0] - want).abs() < 1e-6, "{} vs {}", sol.x[0], want);
        prop_assert!(sol.dual_objective <= sol.primal_objective + 1e-7);
    }
}
