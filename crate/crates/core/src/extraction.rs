//! Atomic measures, flatness, atom extraction and Carathéodory pruning.

use nalgebra::{DMatrix, DVector, Schur};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::cone::{moment_matrix, PseudoMomentSequence, Scale};
use crate::error::{Error, Result};
use crate::linalg;
use crate::poly::{basis_size, MonomialBasis, MultiIndex, Polynomial};

/// Default relative threshold for numerical ranks.
pub const DEFAULT_RANK_TOL: f64 = 1e-6;

/// `mu = sum_i w_i delta_{x_i}` with positive weights.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AtomicMeasure {
    atoms: Vec<Vec<f64>>,
    weights: Vec<f64>,
}

impl AtomicMeasure {
    pub fn new(atoms: Vec<Vec<f64>>, weights: Vec<f64>) -> Result<Self> {
        if atoms.len() != weights.len() {
            return Err(Error::DimensionMismatch {
                expected: atoms.len(),
                found: weights.len(),
            });
        }
        if let Some(first) = atoms.first() {
            let n = first.len();
            if let Some(bad) = atoms.iter().find(|a| a.len() != n) {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: bad.len(),
                });
            }
        }
        if let Some(w) = weights.iter().find(|w| !(**w > 0.0 && w.is_finite())) {
            return Err(Error::InvalidArgument(format!("atom weight {w} is not positive")));
        }
        Ok(AtomicMeasure { atoms, weights })
    }

    pub fn dirac(x: Vec<f64>) -> Self {
        AtomicMeasure {
            atoms: vec![x],
            weights: vec![1.0],
        }
    }

    /// Equal weights `1/k` on `k` points.
    pub fn uniform(points: Vec<Vec<f64>>) -> Result<Self> {
        let k = points.len();
        Self::new(points, vec![1.0 / k as f64; k])
    }

    pub fn atoms(&self) -> &[Vec<f64>] {
        &self.atoms
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.atoms.first().map_or(0, Vec::len)
    }

    pub fn total_mass(&self) -> f64 {
        self.weights.iter().sum()
    }

    pub fn integrate(&self, p: &Polynomial) -> f64 {
        self.atoms
            .iter()
            .zip(&self.weights)
            .map(|(x, w)| w * p.eval(x))
            .sum()
    }

    /// All moments of degree `<= degree`.
    pub fn moments(&self, degree: usize) -> PseudoMomentSequence {
        PseudoMomentSequence::from_fn(self.dim(), degree, |a| {
            self.atoms
                .iter()
                .zip(&self.weights)
                .map(|(x, w)| w * a.eval(x))
                .sum()
        })
    }

    /// The push-forward under `u -> scale ⊙ u`.
    pub fn scaled(&self, scale: &Scale) -> AtomicMeasure {
        AtomicMeasure {
            atoms: self.atoms.iter().map(|a| scale.to_original(a)).collect(),
            weights: self.weights.clone(),
        }
    }
}

/// Symmetric Hausdorff distance between two finite point sets.
pub fn hausdorff(a: &[Vec<f64>], b: &[Vec<f64>]) -> f64 {
    let dist = |x: &[f64], y: &[f64]| -> f64 {
        x.iter().zip(y).map(|(p, q)| (p - q).powi(2)).sum::<f64>().sqrt()
    };
    let one_way = |p: &[Vec<f64>], q: &[Vec<f64>]| -> f64 {
        p.iter()
            .map(|x| q.iter().map(|y| dist(x, y)).fold(f64::INFINITY, f64::min))
            .fold(0.0, f64::max)
    };
    if a.is_empty() && b.is_empty() {
        return 0.0;
    }
    one_way(a, b).max(one_way(b, a))
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FlatnessReport {
    /// Moment order `t` of the full matrix `M_t`.
    pub order: usize,
    pub r: usize,
    /// Order of the truncated matrix, `t - ceil(r / 2)`.
    pub truncated_order: usize,
    pub rank_full: usize,
    pub rank_truncated: usize,
    pub singular_full: Vec<f64>,
    pub singular_truncated: Vec<f64>,
    pub is_flat: bool,
    pub tol: f64,
}

/// Compares the numerical ranks of `M_t` and `M_{t - ceil(r/2)}`.
///
/// `r` is a degree (typically the largest constraint degree); the moment
/// order shift is `ceil(r / 2)`. Ranks count singular values above
/// `tol * sigma_max` of the respective matrix.
pub fn check_flatness(y: &PseudoMomentSequence, order: usize, r: usize, tol: f64) -> Result<FlatnessReport> {
    let shift = r.div_ceil(2);
    if shift > order {
        return Err(Error::InvalidArgument(format!(
            "flatness shift {shift} exceeds moment order {order}"
        )));
    }
    let full = moment_matrix(y, order)?;
    let trunc = moment_matrix(y, order - shift)?;
    let singular_full = linalg::singular_values(full.matrix());
    let singular_truncated = linalg::singular_values(trunc.matrix());
    let rank_full = linalg::numerical_rank(&singular_full, tol);
    let rank_truncated = linalg::numerical_rank(&singular_truncated, tol);
    Ok(FlatnessReport {
        order,
        r,
        truncated_order: order - shift,
        rank_full,
        rank_truncated,
        singular_full,
        singular_truncated,
        is_flat: rank_full == rank_truncated,
        tol,
    })
}

const EXTRACTION_SEED: u64 = 0x0a70_5eed;
const EXTRACTION_ATTEMPTS: usize = 5;
const MAX_VANDERMONDE_COND: f64 = 1e12;

/// Recovers the atoms of a flat moment matrix `M_order(y)`.
///
/// Steps: factor `M = V V^T` keeping the numerical rank, reduce `V` to
/// column echelon form to find a monomial basis `w_1..w_r` of the column
/// space, build the multiplication matrices `N_i` of the coordinates in that
/// basis, and diagonalize a random combination of them by a real Schur
/// decomposition. Atom coordinates are the Rayleigh quotients of the Schur
/// vectors; weights solve the Vandermonde moment system in least squares.
pub fn extract_atoms(y: &PseudoMomentSequence, order: usize, rank_tol: f64) -> Result<AtomicMeasure> {
    let n = y.dim();
    let m = moment_matrix(y, order)?;
    let basis = MonomialBasis::new(n, order);
    let (vals, vecs) = linalg::sym_eigen(m.matrix());
    let lmax = vals.iter().copied().fold(0.0, f64::max);
    if lmax <= 0.0 {
        return Err(Error::FlatnessViolated("moment matrix has no positive eigenvalue".into()));
    }
    let keep: Vec<usize> = (0..vals.len()).filter(|&k| vals[k] > rank_tol * lmax).collect();
    let rank = keep.len();
    let mut v = DMatrix::zeros(basis.len(), rank);
    for (j, &k) in keep.iter().enumerate() {
        v.set_column(j, &(vecs.column(k) * vals[k].sqrt()));
    }

    let (u, pivots) = column_echelon(&v);
    if pivots.len() != rank {
        return Err(Error::FlatnessViolated(format!(
            "found {} basis monomials for rank {rank}",
            pivots.len()
        )));
    }

    let mut mult = Vec::with_capacity(n);
    for i in 0..n {
        let e = MultiIndex::unit(n, i);
        let mut ni = DMatrix::zeros(rank, rank);
        for (j, &p) in pivots.iter().enumerate() {
            let target = basis.get(p).add(&e);
            let row = basis.index_of(&target).ok_or_else(|| {
                Error::FlatnessViolated(format!("shifted monomial {target} exceeds order {order}"))
            })?;
            ni.set_row(j, &u.row(row));
        }
        mult.push(ni);
    }

    let mut rng = ChaCha8Rng::seed_from_u64(EXTRACTION_SEED);
    let mut last_err = Error::FlatnessViolated("no extraction attempt".into());
    for _ in 0..EXTRACTION_ATTEMPTS {
        let mut coef: Vec<f64> = (0..n).map(|_| rng.random_range(0.1..1.0)).collect();
        let s: f64 = coef.iter().sum();
        coef.iter_mut().for_each(|c| *c /= s);
        let mut combo = DMatrix::zeros(rank, rank);
        for (c, ni) in coef.iter().zip(&mult) {
            combo += ni * *c;
        }
        let (q, t) = Schur::new(combo).unpack();
        let scale = t.norm().max(1.0);
        let complex = (1..rank).any(|k| t[(k, k - 1)].abs() > 1e-8 * scale);
        if complex {
            last_err = Error::FlatnessViolated("multiplication matrices have complex eigenvalues".into());
            continue;
        }
        let atoms: Vec<Vec<f64>> = (0..rank)
            .map(|j| {
                let qj = q.column(j);
                mult.iter().map(|ni| (qj.transpose() * ni * qj)[(0, 0)]).collect()
            })
            .collect();
        match recover_weights(y, &atoms, order) {
            Ok(mu) => {
                let err = commutation_error(&mult);
                if err > 1e-6 {
                    last_err = Error::FlatnessViolated(format!("multiplication matrices do not commute ({err:.2e})"));
                    continue;
                }
                return Ok(mu);
            }
            Err(e) => last_err = e,
        }
    }
    Err(last_err)
}

fn commutation_error(mult: &[DMatrix<f64>]) -> f64 {
    let scale = mult.iter().map(|m| m.norm()).fold(1.0, f64::max);
    let mut worst = 0.0f64;
    for a in 0..mult.len() {
        for b in a + 1..mult.len() {
            let c = &mult[a] * &mult[b] - &mult[b] * &mult[a];
            worst = worst.max(c.norm() / (scale * scale));
        }
    }
    worst
}

/// Gaussian elimination to reduced column echelon form, visiting rows in
/// graded-lex order. Returns the reduced matrix and the pivot rows.
fn column_echelon(v: &DMatrix<f64>) -> (DMatrix<f64>, Vec<usize>) {
    let mut u = v.clone();
    let (rows, cols) = u.shape();
    let scale = u.amax().max(1e-300);
    let tol = 1e-6 * scale.max(1.0).min(scale * 1e6);
    let mut pivots = Vec::new();
    let mut col = 0;
    for i in 0..rows {
        if col == cols {
            break;
        }
        let (best, val) = (col..cols)
            .map(|c| (c, u[(i, c)]))
            .max_by(|a, b| a.1.abs().total_cmp(&b.1.abs()))
            .expect("nonempty column range");
        if val.abs() <= tol {
            continue;
        }
        u.swap_columns(col, best);
        let piv = u.column(col) / val;
        u.set_column(col, &piv);
        for c in 0..cols {
            if c != col {
                let f = u[(i, c)];
                if f != 0.0 {
                    let newc = u.column(c) - &piv * f;
                    u.set_column(c, &newc);
                }
            }
        }
        pivots.push(i);
        col += 1;
    }
    (u, pivots)
}

fn recover_weights(y: &PseudoMomentSequence, atoms: &[Vec<f64>], order: usize) -> Result<AtomicMeasure> {
    let n = y.dim();
    let deg = y.degree().min(2 * order);
    let basis = MonomialBasis::new(n, deg);
    let k = atoms.len();
    let a = DMatrix::from_fn(basis.len(), k, |r, c| basis.get(r).eval(&atoms[c]));
    let b = DVector::from_iterator(basis.len(), basis.elements().iter().map(|al| y.y(al)));
    let s = linalg::singular_values(&a);
    let smin = s.last().copied().unwrap_or(0.0);
    let cond = if smin > 0.0 { s[0] / smin } else { f64::INFINITY };
    if cond > MAX_VANDERMONDE_COND {
        return Err(Error::IllConditionedVandermonde(cond));
    }
    let w = linalg::lstsq(&a, &b, 1e-14);
    if let Some(bad) = w.iter().find(|&&x| x <= 0.0) {
        return Err(Error::FlatnessViolated(format!("recovered weight {bad:.3e} is not positive")));
    }
    AtomicMeasure::new(atoms.to_vec(), w.as_slice().to_vec())
}

/// `(L(x_1), ..., L(x_n))` mapped back to original coordinates.
pub fn candidate_minimizer(y: &PseudoMomentSequence, scale: &Scale) -> Vec<f64> {
    scale.to_original(&y.first_moments())
}

/// Reduces `mu` to at most `r(n, t)` atoms with the same moments of degree
/// `<= t`, by repeated Carathéodory steps.
pub fn tchakaloff_prune(mu: &AtomicMeasure, t: usize) -> AtomicMeasure {
    let n = mu.dim();
    let l = basis_size(n, t);
    if mu.len() <= l {
        return mu.clone();
    }
    let basis = MonomialBasis::new(n, t);
    let mut atoms = mu.atoms.clone();
    let mut weights = mu.weights.clone();
    while atoms.len() > l {
        let a = DMatrix::from_fn(l, l + 1, |r, c| basis.get(r).eval(&atoms[c]));
        let (_, v) = linalg::right_svd(&a);
        let mut c: Vec<f64> = v.column(l).iter().copied().collect();
        if c.iter().all(|&x| x <= 0.0) {
            c.iter_mut().for_each(|x| *x = -*x);
        }
        let (drop, theta) = (0..=l)
            .filter(|&j| c[j] > 0.0)
            .map(|j| (j, weights[j] / c[j]))
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .expect("a null vector has a positive entry after the sign flip");
        for j in 0..=l {
            weights[j] -= theta * c[j];
        }
        weights[drop] = 0.0;
        let mut k = 0;
        while k < atoms.len() {
            if weights[k] <= 0.0 {
                atoms.swap_remove(k);
                weights.swap_remove(k);
            } else {
                k += 1;
            }
        }
    }
    AtomicMeasure { atoms, weights }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RankProfile {
    /// `ranks[d]` is the numerical rank of `M_d`.
    pub ranks: Vec<usize>,
    /// First `d` at which the rank reaches the atom count.
    pub stabilization: Option<usize>,
}

/// Numerical ranks of the moment matrices of `mu` for `d = 0..=d_max`.
pub fn rank_profile(mu: &AtomicMeasure, d_max: usize) -> RankProfile {
    let y = mu.moments(2 * d_max);
    let ranks: Vec<usize> = (0..=d_max)
        .map(|d| {
            let m = moment_matrix(&y, d).expect("moments cover 2 d_max");
            linalg::numerical_rank(&linalg::singular_values(m.matrix()), DEFAULT_RANK_TOL)
        })
        .collect();
    let stabilization = ranks.iter().position(|&r| r == mu.len());
    RankProfile { ranks, stabilization }
}
