use serde::{Deserialize, Serialize};

use crate::cone::SemialgebraicProblem;
use crate::error::{Error, Result};
use crate::poly::for_each_grid_point;

/// Grid points within this of the grid minimum form `S*`.
pub const MINIMIZER_TOL: f64 = 1e-6;
const FEASIBILITY_TOL: f64 = 1e-9;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Oracle {
    pub f_star: f64,
    pub x_star: Vec<f64>,
    /// Grid points with `f <= f* + 1e-6`.
    pub s_star: Vec<Vec<f64>>,
    pub resolution: usize,
    pub bounds: Vec<(f64, f64)>,
}

impl Oracle {
    pub fn unique_minimizer(&self) -> bool {
        self.s_star.len() == 1
    }
}

/// 201 points per axis up to `n = 2`, 61 for `n = 3`.
pub fn default_resolution(n: usize) -> usize {
    if n <= 2 {
        201
    } else {
        61
    }
}

/// Minimum of `f` over the grid points of `bounds` that satisfy every
/// constraint to `-1e-9`.
pub fn brute_force_oracle(prob: &SemialgebraicProblem, bounds: &[(f64, f64)], resolution: Option<usize>) -> Result<Oracle> {
    let n = prob.dim();
    if n > 3 {
        return Err(Error::InvalidArgument(format!("brute force needs n <= 3, got {n}")));
    }
    if bounds.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: bounds.len(),
        });
    }
    let res = resolution.unwrap_or_else(|| default_resolution(n)).max(2);
    let axes: Vec<Vec<f64>> = bounds
        .iter()
        .map(|&(lo, hi)| (0..res).map(|i| lo + (hi - lo) * i as f64 / (res - 1) as f64).collect())
        .collect();
    let cons = prob.constraints();
    let f = prob.objective();
    let mut feasible: Vec<(Vec<f64>, f64)> = Vec::new();
    for_each_grid_point(&axes, |p| {
        if cons.iter().all(|g| g.eval(p) >= -FEASIBILITY_TOL) {
            feasible.push((p.to_vec(), f.eval(p)));
        }
    });
    let (best, f_star) = feasible
        .iter()
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .map(|(p, v)| (p.clone(), *v))
        .ok_or(Error::EmptyFeasibleGrid)?;
    let s_star = feasible
        .into_iter()
        .filter(|(_, v)| *v <= f_star + MINIMIZER_TOL)
        .map(|(p, _)| p)
        .collect();
    Ok(Oracle {
        f_star,
        x_star: best,
        s_star,
        resolution: res,
        bounds: bounds.to_vec(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Polynomial;

    fn x(n: usize, i: usize) -> Polynomial {
        Polynomial::var(n, i)
    }

    fn one(n: usize) -> Polynomial {
        Polynomial::constant(n, 1.0)
    }

    #[test]
    fn binary_square() {
        let f = &(&(-&x(2, 0)) - &x(2, 1)) + &(&x(2, 0) * &x(2, 1));
        let eqs = vec![&x(2, 0) - &x(2, 0).pow(2), &x(2, 1) - &x(2, 1).pow(2)];
        let prob = SemialgebraicProblem::new(f, vec![], eqs, Some(1.5)).unwrap();
        let o = brute_force_oracle(&prob, &[(-1.0, 1.0), (-1.0, 1.0)], None).unwrap();
        assert_eq!(o.f_star, -1.0);
        let mut s = o.s_star.clone();
        s.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert_eq!(s, vec![vec![0.0, 1.0], vec![1.0, 0.0], vec![1.0, 1.0]]);
        assert!(!o.unique_minimizer());
    }

    #[test]
    fn interval_and_paraboloid() {
        let prob = SemialgebraicProblem::new(x(1, 0), vec![&one(1) - &x(1, 0).pow(2)], vec![], None).unwrap();
        let o = brute_force_oracle(&prob, &[(-1.0, 1.0)], None).unwrap();
        assert_eq!((o.f_star, o.x_star.clone()), (-1.0, vec![-1.0]));
        assert!(o.unique_minimizer());

        let f = &(&x(2, 0) - &Polynomial::constant(2, 0.3)).pow(2) + &(&x(2, 1) + &Polynomial::constant(2, 0.2)).pow(2);
        let cons = vec![&one(2) - &x(2, 0).pow(2), &one(2) - &x(2, 1).pow(2)];
        let prob = SemialgebraicProblem::new(f, cons, vec![], None).unwrap();
        let o = brute_force_oracle(&prob, &[(-1.0, 1.0), (-1.0, 1.0)], None).unwrap();
        assert!(o.f_star.abs() < 1e-12);
        assert!((o.x_star[0] - 0.3).abs() < 1e-12 && (o.x_star[1] + 0.2).abs() < 1e-12);
        assert_eq!(default_resolution(3), 61);
    }

    #[test]
    fn empty_grid() {
        let prob = SemialgebraicProblem::new(x(1, 0), vec![&Polynomial::constant(1, -1.0) - &x(1, 0).pow(2)], vec![], None).unwrap();
        assert!(matches!(
            brute_force_oracle(&prob, &[(-1.0, 1.0)], Some(11)),
            Err(Error::EmptyFeasibleGrid)
        ));
    }
}
