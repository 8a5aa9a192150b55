use momlab::cone::{moment_matrix, normalize, SemialgebraicProblem};
use momlab::extraction::{
    check_flatness, extract_atoms, hausdorff, rank_profile, tchakaloff_prune, AtomicMeasure, DEFAULT_RANK_TOL,
};
use momlab::hierarchy::solve_moment_relaxation;
use momlab::poly::{basis_size, Polynomial};
use proptest::prelude::*;

fn separated(points: &[Vec<f64>], gap: f64) -> bool {
    points.iter().enumerate().all(|(i, a)| {
        points[..i]
            .iter()
            .all(|b| a.iter().zip(b).map(|(u, v)| (u - v).powi(2)).sum::<f64>().sqrt() >= gap)
    })
}

#[test]
fn minimizers_of_a_double_well() {
    let x = Polynomial::var(2, 0);
    let y = Polynomial::var(2, 1);
    let one = Polynomial::constant(2, 1.0);
    // (x^2 - 1/4)^2 + y^2 on the box, minimized at (+-1/2, 0).
    let f = &(&x.pow(2) - &one.scale(0.25)).pow(2) + &y.pow(2);
    let g = vec![&one - &x.pow(2), &one - &y.pow(2)];
    let prob = SemialgebraicProblem::new(f.clone(), g, vec![], Some(1.5)).unwrap();
    let r = solve_moment_relaxation(&normalize(&prob).unwrap(), 6).unwrap();
    let flat = check_flatness(&r.pseudo_moments, r.moment_order, 2, DEFAULT_RANK_TOL).unwrap();
    assert!(flat.is_flat, "{flat:?}");
    let mu = extract_atoms(&r.pseudo_moments, r.moment_order, DEFAULT_RANK_TOL)
        .unwrap()
        .scaled(&r.scale);
    assert!(hausdorff(mu.atoms(), &[vec![0.5, 0.0], vec![-0.5, 0.0]]) < 1e-4, "{mu:?}");
    for a in mu.atoms() {
        assert!(f.eval(a).abs() < 1e-6);
    }
}

#[test]
fn rank_profile_of_a_grid() {
    let pts: Vec<Vec<f64>> = [-1.0, 0.0, 1.0]
        .iter()
        .flat_map(|&a| [-1.0, 1.0].map(|b| vec![a, b]))
        .collect();
    let p = rank_profile(&AtomicMeasure::uniform(pts).unwrap(), 4);
    assert_eq!(p.ranks, vec![1, 3, 5, 6, 6]);
    assert_eq!(p.stabilization, Some(3));
}

#[test]
fn non_flat_sequence_is_reported() {
    // Three atoms on a line seen through order 1: rank 2 over rank 1.
    let mu = AtomicMeasure::uniform(vec![vec![-1.0], vec![0.0], vec![1.0]]).unwrap();
    let y = mu.moments(2);
    let rep = check_flatness(&y, 1, 2, DEFAULT_RANK_TOL).unwrap();
    assert!(!rep.is_flat);
    assert_eq!((rep.rank_full, rep.rank_truncated), (2, 1));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn round_trip(
        n in 1usize..=2,
        coords in proptest::collection::vec(-1.0f64..1.0, 6),
        raw in proptest::collection::vec(0.1f64..1.0, 3),
        k in 1usize..=3,
    ) {
        let atoms: Vec<Vec<f64>> = (0..k).map(|i| coords[i * n..(i + 1) * n].to_vec()).collect();
        prop_assume!(separated(&atoms, 0.25));
        let total: f64 = raw[..k].iter().sum();
        let mu = AtomicMeasure::new(atoms.clone(), raw[..k].iter().map(|w| w / total).collect()).unwrap();
        let t = 3;
        let y = mu.moments(2 * t);
        let rep = check_flatness(&y, t, 2, DEFAULT_RANK_TOL).unwrap();
        prop_assert!(rep.is_flat);
        let got = extract_atoms(&y, t, DEFAULT_RANK_TOL).unwrap();
        prop_assert_eq!(got.len(), k);
        prop_assert!(hausdorff(got.atoms(), &atoms) < 1e-6);
        prop_assert!((got.total_mass() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn pruning_keeps_moments(
        pts in proptest::collection::vec(proptest::collection::vec(-1.0f64..1.0, 2), 8..20),
        t in 1usize..=2,
    ) {
        let mu = AtomicMeasure::uniform(pts).unwrap();
        let pruned = tchakaloff_prune(&mu, t);
        prop_assert!(pruned.len() <= basis_size(2, t));
        let a = moment_matrix(&mu.moments(t), t / 2).unwrap();
        let b = moment_matrix(&pruned.moments(t), t / 2).unwrap();
        prop_assert!((a.matrix() - b.matrix()).amax() < 1e-10);
        for (ya, yb) in mu.moments(t).values().iter().zip(pruned.moments(t).values()) {
            prop_assert!((ya - yb).abs() < 1e-10);
        }
    }
}
