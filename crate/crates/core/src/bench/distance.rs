use crate::cone::PseudoMomentSequence;
use crate::error::{Error, Result};
use crate::poly::MonomialBasis;
use crate::sdp::{self, SdpOptions, SdpProblem};

/// `S*` samples beyond this are thinned evenly before the LP.
pub const MAX_DISTANCE_SAMPLES: usize = 400;

/// `min_w max_{|alpha| <= r} |y_alpha - sum_j w_j s_j^alpha|` over
/// probability weights `w` on the samples, solved as an LP.
pub fn moment_distance_to_optimal(y: &PseudoMomentSequence, samples: &[Vec<f64>], r: usize) -> Result<f64> {
    if samples.is_empty() {
        return Err(Error::InvalidArgument("no optimal samples".into()));
    }
    if r > y.degree() {
        return Err(Error::DegreeOverflow {
            needed: r,
            available: y.degree(),
        });
    }
    let step = samples.len().div_ceil(MAX_DISTANCE_SAMPLES);
    let pts: Vec<&Vec<f64>> = samples.iter().step_by(step).collect();
    let basis = MonomialBasis::new(y.dim(), r);
    let m = pts.len();
    let t = m;
    let mut lp = SdpProblem::new(m + 1);
    lp.set_cost(t, 1.0);
    for j in 0..m {
        let b = lp.add_block(1);
        lp.add_entry(b, Some(j), 0, 0, 1.0);
    }
    for alpha in basis.elements() {
        let ya = y.y(alpha);
        for sign in [1.0, -1.0] {
            // t + sign (y_alpha - sum_j w_j s_j^alpha) >= 0
            let b = lp.add_block(1);
            lp.add_entry(b, None, 0, 0, sign * ya);
            lp.add_entry(b, Some(t), 0, 0, 1.0);
            for (j, s) in pts.iter().enumerate() {
                let v = alpha.eval(s);
                if v != 0.0 {
                    lp.add_entry(b, Some(j), 0, 0, -sign * v);
                }
            }
        }
    }
    lp.add_equality((0..m).map(|j| (j, 1.0)).collect(), 1.0);
    let sol = sdp::solve(&lp, &SdpOptions::default());
    if !sol.is_optimal() {
        return Err(Error::NotOptimal {
            status: sol.status,
            level: None,
        });
    }
    Ok(sol.primal_objective.max(0.0))
}
