//! Support estimation from (pseudo-)moments: Christoffel-Darboux sublevel
//! sets and the power-method outer approximation.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::cone::{moment_matrix, PseudoMomentSequence};
use crate::error::{Error, Result};
use crate::extraction::{hausdorff, AtomicMeasure};
use crate::linalg::sym_eigen;
use crate::poly::{for_each_grid_point, MonomialBasis, Polynomial};

pub const DEFAULT_PINV_TOL: f64 = 1e-8;
/// Slack below zero tolerated in `L(q^(2n))` before it counts as invalid.
pub const PSEUDO_MOMENT_TOL: f64 = 1e-9;

/// `K(x, z) = v(x)^T M^+ v(z)` with `M^+ = F^T F`.
#[derive(Clone, Debug)]
pub struct CdKernel {
    degree: usize,
    basis: MonomialBasis,
    factor: DMatrix<f64>,
    singular: bool,
}

impl CdKernel {
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn basis(&self) -> &MonomialBasis {
        &self.basis
    }

    /// Rank of the pseudo-inverse.
    pub fn rank(&self) -> usize {
        self.factor.nrows()
    }

    /// The moment matrix was rank deficient and got pseudo-inverted.
    pub fn is_singular(&self) -> bool {
        self.singular
    }

    fn features(&self, x: &[f64]) -> DVector<f64> {
        &self.factor * DVector::from_vec(self.basis.eval(x))
    }

    pub fn eval(&self, x: &[f64], z: &[f64]) -> f64 {
        self.features(x).dot(&self.features(z))
    }

    /// `K(x, x)`.
    pub fn diag(&self, x: &[f64]) -> f64 {
        self.features(x).norm_squared()
    }

    /// `x -> K(x, x)` as a polynomial.
    pub fn diag_polynomial(&self) -> Polynomial {
        let el = self.basis.elements();
        let g = self.factor.transpose() * &self.factor;
        let mut p = Polynomial::zero(self.basis.dim());
        for (i, a) in el.iter().enumerate() {
            for (j, b) in el.iter().enumerate() {
                if g[(i, j)] != 0.0 {
                    p.add_term(a.add(b), g[(i, j)]);
                }
            }
        }
        p
    }
}

/// Christoffel-Darboux kernel of degree `d`. Eigenvalues of the moment
/// matrix below `pinv_tol * lambda_max` are dropped.
pub fn cd_kernel(y: &PseudoMomentSequence, d: usize, pinv_tol: f64) -> Result<CdKernel> {
    let m = moment_matrix(y, d)?.into_matrix();
    let (vals, vecs) = sym_eigen(&m);
    let top = vals.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    if top == 0.0 {
        return Err(Error::InvalidArgument("moment matrix is zero".into()));
    }
    let keep: Vec<usize> = (0..vals.len()).filter(|&i| vals[i] > pinv_tol * top).collect();
    let mut factor = DMatrix::zeros(keep.len(), m.nrows());
    for (r, &i) in keep.iter().enumerate() {
        let s = 1.0 / vals[i].sqrt();
        for c in 0..m.nrows() {
            factor[(r, c)] = vecs[(c, i)] * s;
        }
    }
    Ok(CdKernel {
        degree: d,
        basis: MonomialBasis::new(y.dim(), d),
        singular: keep.len() < m.nrows(),
        factor,
    })
}

/// `s_d = (1 - alpha)/16 * e^(2r) d^r / (3r)^(2r)`, for `alpha in [0, 1)`
/// and `r > d`.
pub fn cd_threshold(d: usize, alpha: f64, r: usize) -> Result<f64> {
    if !(0.0..1.0).contains(&alpha) {
        return Err(Error::InvalidArgument(format!("alpha = {alpha} is outside [0, 1)")));
    }
    if r <= d {
        return Err(Error::InvalidArgument(format!("r = {r} must exceed d = {d}")));
    }
    let (df, rf) = (d as f64, r as f64);
    let log = (2.0 * rf) + rf * df.ln() - 2.0 * rf * (3.0 * rf).ln();
    Ok((1.0 - alpha) / 16.0 * log.exp())
}

/// A box `prod [lo_i, hi_i]` sampled with `resolution` points per axis.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SupportGrid {
    pub bounds: Vec<(f64, f64)>,
    pub resolution: usize,
    pub points: Vec<Vec<f64>>,
    pub values: Vec<f64>,
    pub included: Vec<bool>,
    pub threshold: f64,
}

impl SupportGrid {
    /// Fraction of grid points included.
    pub fn volume_fraction(&self) -> f64 {
        if self.points.is_empty() {
            return 0.0;
        }
        self.included.iter().filter(|&&b| b).count() as f64 / self.points.len() as f64
    }

    pub fn included_points(&self) -> Vec<Vec<f64>> {
        self.points
            .iter()
            .zip(&self.included)
            .filter(|(_, &inc)| inc)
            .map(|(p, _)| p.clone())
            .collect()
    }

    /// Hausdorff distance between the included points and `reference`.
    pub fn hausdorff_to(&self, reference: &[Vec<f64>]) -> Option<f64> {
        let inc = self.included_points();
        if inc.is_empty() || reference.is_empty() {
            return None;
        }
        Some(hausdorff(&inc, reference))
    }

    pub fn write_csv<W: std::io::Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        let n = self.bounds.len();
        let mut header: Vec<String> = (0..n).map(|i| format!("x{}", i + 1)).collect();
        header.push("value".into());
        header.push("included".into());
        out.write_record(&header)?;
        for ((p, v), inc) in self.points.iter().zip(&self.values).zip(&self.included) {
            let mut rec: Vec<String> = p.iter().map(|c| c.to_string()).collect();
            rec.push(v.to_string());
            rec.push(u8::from(*inc).to_string());
            out.write_record(&rec)?;
        }
        out.flush()?;
        Ok(())
    }
}

fn grid_points(bounds: &[(f64, f64)], resolution: usize) -> Vec<Vec<f64>> {
    let axes: Vec<Vec<f64>> = bounds
        .iter()
        .map(|&(lo, hi)| {
            if resolution <= 1 {
                vec![0.5 * (lo + hi)]
            } else {
                let h = (hi - lo) / (resolution - 1) as f64;
                (0..resolution).map(|i| lo + h * i as f64).collect()
            }
        })
        .collect();
    let mut pts = Vec::new();
    for_each_grid_point(&axes, |p| pts.push(p.to_vec()));
    pts
}

/// Evaluates `g` on every point, split over the available cores.
fn par_map<F: Fn(&[f64]) -> T + Sync, T: Send>(points: &[Vec<f64>], g: F) -> Vec<T> {
    let threads = std::thread::available_parallelism().map_or(1, |n| n.get()).min(16);
    if points.len() < 4096 || threads == 1 {
        return points.iter().map(|p| g(p)).collect();
    }
    let chunk = points.len().div_ceil(threads);
    std::thread::scope(|scope| {
        let handles: Vec<_> = points
            .chunks(chunk)
            .map(|c| {
                let g = &g;
                scope.spawn(move || c.iter().map(|p| g(p)).collect::<Vec<T>>())
            })
            .collect();
        handles
            .into_iter()
            .flat_map(|h| h.join().expect("grid worker panicked"))
            .collect()
    })
}

/// `K(x, x)` on a grid; a point is included when `K(x, x) < threshold`.
pub fn cd_support_grid(kernel: &CdKernel, bounds: &[(f64, f64)], resolution: usize, threshold: f64) -> Result<SupportGrid> {
    if bounds.len() != kernel.basis.dim() {
        return Err(Error::DimensionMismatch {
            expected: kernel.basis.dim(),
            found: bounds.len(),
        });
    }
    let points = grid_points(bounds, resolution);
    let values = par_map(&points, |p| kernel.diag(p));
    let included = values.iter().map(|&v| v < threshold).collect();
    Ok(SupportGrid {
        bounds: bounds.to_vec(),
        resolution,
        points,
        values,
        included,
        threshold,
    })
}

/// Nonconstant monomials of degree `<= 2`.
pub fn default_family(n: usize) -> Vec<Polynomial> {
    MonomialBasis::new(n, 2)
        .elements()
        .iter()
        .filter(|a| !a.is_zero())
        .map(|a| Polynomial::monomial(a.clone(), 1.0))
        .collect()
}

/// `sup_{n >= 1, n deg q <= d} L(q^(2n))^(1/(2n))`.
pub fn power_bound(y: &PseudoMomentSequence, d: usize, q: &Polynomial) -> Result<f64> {
    let deg = q.degree();
    if deg == 0 {
        let v = y.apply(&(q * q))?;
        return Ok(v.max(0.0).sqrt());
    }
    let top = d / deg;
    if top == 0 {
        return Err(Error::InvalidArgument(format!(
            "no admissible power for a degree {deg} polynomial at d = {d}"
        )));
    }
    let q2 = q * q;
    let mut power = Polynomial::constant(q.dim(), 1.0);
    let mut best = 0.0f64;
    for k in 1..=top {
        power = &power * &q2;
        let v = y.apply(&power)?;
        if v < -PSEUDO_MOMENT_TOL {
            return Err(Error::InvalidPseudoMoment {
                power: 2 * k as u32,
                value: v,
            });
        }
        best = best.max(v.max(0.0).powf(1.0 / (2 * k) as f64));
    }
    Ok(best)
}

/// `min_q [bound(q) - |q(x)|]`; `x` is in `K_{F,d}(L)` iff this is `>= 0`.
pub fn power_method_margin(y: &PseudoMomentSequence, d: usize, family: &[Polynomial], x: &[f64]) -> Result<f64> {
    let bounds = family.iter().map(|q| power_bound(y, d, q)).collect::<Result<Vec<_>>>()?;
    Ok(margin_from_bounds(family, &bounds, x))
}

fn margin_from_bounds(family: &[Polynomial], bounds: &[f64], x: &[f64]) -> f64 {
    family
        .iter()
        .zip(bounds)
        .map(|(q, b)| b - q.eval(x).abs())
        .fold(f64::INFINITY, f64::min)
}

/// Margin for `d = infinity` on an atomic measure, where
/// `sup_n (int q^(2n) dmu)^(1/(2n)) = max_i |q(x_i)|`.
pub fn power_method_margin_measure(mu: &AtomicMeasure, family: &[Polynomial], x: &[f64]) -> f64 {
    let bounds: Vec<f64> = family
        .iter()
        .map(|q| mu.atoms().iter().map(|a| q.eval(a).abs()).fold(0.0, f64::max))
        .collect();
    margin_from_bounds(family, &bounds, x)
}

/// Power-method margins on a grid; included iff margin `>= 0`.
pub fn power_support_grid(
    y: &PseudoMomentSequence,
    d: usize,
    family: &[Polynomial],
    bounds: &[(f64, f64)],
    resolution: usize,
) -> Result<SupportGrid> {
    if bounds.len() != y.dim() {
        return Err(Error::DimensionMismatch {
            expected: y.dim(),
            found: bounds.len(),
        });
    }
    let qb = family.iter().map(|q| power_bound(y, d, q)).collect::<Result<Vec<_>>>()?;
    let points = grid_points(bounds, resolution);
    let values = par_map(&points, |p| margin_from_bounds(family, &qb, p));
    let included = values.iter().map(|&v| v >= 0.0).collect();
    Ok(SupportGrid {
        bounds: bounds.to_vec(),
        resolution,
        points,
        values,
        included,
        threshold: 0.0,
    })
}
