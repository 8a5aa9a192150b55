//! Support of a measure from its moments: Christoffel-Darboux sublevel sets
//! and power-method margins, written as CSV grids.
//!
//! cargo run --release --example christoffel_support [out_dir]

use std::fs::File;
use std::path::PathBuf;

use momlab::extraction::AtomicMeasure;
use momlab::support::{cd_kernel, cd_support_grid, cd_threshold, default_family, power_support_grid, DEFAULT_PINV_TOL};
use momlab::upperbound::lebesgue_box_moments;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() -> momlab::Result<()> {
    let out = std::env::args().nth(1).map_or_else(|| std::env::temp_dir().join("momlab-support"), PathBuf::from);
    std::fs::create_dir_all(&out)?;

    // Empirical measure on an annulus.
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let pts: Vec<Vec<f64>> = (0..2000)
        .map(|_| {
            let t = rng.random_range(0.0..std::f64::consts::TAU);
            let r = rng.random_range(0.5..0.8);
            vec![r * t.cos(), r * t.sin()]
        })
        .collect();
    let mu = AtomicMeasure::uniform(pts.clone())?;
    let bounds = [(-1.0, 1.0); 2];
    for d in [4, 8] {
        let k = cd_kernel(&mu.moments(2 * d), d, DEFAULT_PINV_TOL)?;
        let max_in: f64 = pts.iter().map(|p| k.diag(p)).fold(0.0, f64::max);
        let grid = cd_support_grid(&k, &bounds, 101, max_in)?;
        println!(
            "d={d}: kernel rank {}, sublevel at max over sample {max_in:.1} covers {:.1}% of the box",
            k.rank(),
            100.0 * grid.volume_fraction()
        );
        grid.write_csv(File::create(out.join(format!("cd_d{d}.csv")))?)?;
    }

    // Lebesgue segment: points where the Christoffel function 1/K stays above s_d.
    let d = 6;
    let k = cd_kernel(&lebesgue_box_moments(1, 2 * d), d, DEFAULT_PINV_TOL)?;
    let s = cd_threshold(d, 0.5, d + 1)?;
    let grid = cd_support_grid(&k, &[(-1.5, 1.5)], 301, 1.0 / s)?;
    println!("box d={d}: threshold {:.3e}, included {:.1}% of [-1.5, 1.5]", 1.0 / s, 100.0 * grid.volume_fraction());

    let y = mu.moments(16);
    let grid = power_support_grid(&y, 8, &default_family(2), &bounds, 81)?;
    println!("power method: {:.1}% of the box has nonnegative margin", 100.0 * grid.volume_fraction());
    grid.write_csv(File::create(out.join("power.csv"))?)?;
    println!("grids in {}", out.display());
    Ok(())
}
