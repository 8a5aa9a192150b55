//! Recovers an atomic measure from its moments, and prunes a large one to
//! a Tchakaloff rule.
//!
//! cargo run --release --example atom_extraction

use momlab::extraction::{check_flatness, extract_atoms, rank_profile, tchakaloff_prune, AtomicMeasure, DEFAULT_RANK_TOL};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() -> momlab::Result<()> {
    let mu = AtomicMeasure::new(
        vec![vec![0.5, -0.2], vec![-0.7, 0.1], vec![0.0, 0.9]],
        vec![0.5, 0.3, 0.2],
    )?;
    println!("ranks {:?}", rank_profile(&mu, 4).ranks);
    let y = mu.moments(4);
    let flat = check_flatness(&y, 2, 2, DEFAULT_RANK_TOL)?;
    println!("rank M_2 = {}, rank M_1 = {}, flat: {}", flat.rank_full, flat.rank_truncated, flat.is_flat);
    let got = extract_atoms(&y, 2, DEFAULT_RANK_TOL)?;
    for (a, w) in got.atoms().iter().zip(got.weights()) {
        println!("  atom ({:+.8}, {:+.8})  weight {:.8}", a[0], a[1], w);
    }

    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let pts: Vec<Vec<f64>> = (0..500).map(|_| vec![rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)]).collect();
    let cloud = AtomicMeasure::uniform(pts)?;
    let rule = tchakaloff_prune(&cloud, 4);
    let err = cloud
        .moments(4)
        .values()
        .iter()
        .zip(rule.moments(4).values())
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    println!("{} points -> {} atoms, max moment error {err:.2e}", cloud.len(), rule.len());
    Ok(())
}
