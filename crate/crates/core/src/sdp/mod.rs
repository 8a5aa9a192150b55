//! Block-diagonal semidefinite programs with linear equality constraints.
//!
//! The primal form is
//!
//! ```text
//! minimize    c^T x
//! subject to  S_j(x) = F0_j + sum_i x_i F_ij  >= 0   (every block j)
//!             B x = b
//! ```
//!
//! and the dual maximizes `-sum_j <F0_j, Y_j> + b^T lambda` over `Y_j >= 0`
//! with `sum_j <F_ij, Y_j> + (B^T lambda)_i = c_i`. For moment relaxations the
//! `x` are pseudo-moments and the `Y_j` are the Gram matrices of the sum of
//! squares multipliers.

mod ipm;
mod sdpa;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg;

pub use sdpa::write_sdpa;

/// One coefficient of a block: `value` at `(row, col)` (and its mirror) in
/// the matrix multiplying `var`, or in the constant matrix when `var` is
/// `None`.
#[derive(Clone, Debug, PartialEq)]
pub struct BlockEntry {
    pub var: Option<usize>,
    pub row: usize,
    pub col: usize,
    pub value: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Block {
    size: usize,
    entries: Vec<BlockEntry>,
}

impl Block {
    pub fn size(&self) -> usize {
        self.size
    }

    pub fn entries(&self) -> &[BlockEntry] {
        &self.entries
    }
}

/// Linear constraint `sum coeffs[k].1 * x[coeffs[k].0] = rhs`.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearEquality {
    pub coeffs: Vec<(usize, f64)>,
    pub rhs: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SdpProblem {
    num_vars: usize,
    cost: Vec<f64>,
    blocks: Vec<Block>,
    equalities: Vec<LinearEquality>,
}

impl SdpProblem {
    pub fn new(num_vars: usize) -> Self {
        SdpProblem {
            num_vars,
            cost: vec![0.0; num_vars],
            blocks: Vec::new(),
            equalities: Vec::new(),
        }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn cost(&self) -> &[f64] {
        &self.cost
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn block_sizes(&self) -> Vec<usize> {
        self.blocks.iter().map(|b| b.size).collect()
    }

    pub fn equalities(&self) -> &[LinearEquality] {
        &self.equalities
    }

    pub fn set_cost(&mut self, var: usize, c: f64) {
        self.cost[var] = c;
    }

    /// Adds an empty `size x size` block and returns its index.
    pub fn add_block(&mut self, size: usize) -> usize {
        self.blocks.push(Block {
            size,
            entries: Vec::new(),
        });
        self.blocks.len() - 1
    }

    /// Adds `value` at `(row, col)` and `(col, row)`. Repeated entries add up.
    pub fn add_entry(&mut self, block: usize, var: Option<usize>, row: usize, col: usize, value: f64) {
        let b = &mut self.blocks[block];
        assert!(row < b.size && col < b.size, "entry outside block");
        if let Some(v) = var {
            assert!(v < self.num_vars, "unknown variable {v}");
        }
        let (row, col) = if row <= col { (row, col) } else { (col, row) };
        b.entries.push(BlockEntry {
            var,
            row,
            col,
            value,
        });
    }

    pub fn add_equality(&mut self, coeffs: Vec<(usize, f64)>, rhs: f64) {
        for &(v, _) in &coeffs {
            assert!(v < self.num_vars, "unknown variable {v}");
        }
        self.equalities.push(LinearEquality { coeffs, rhs });
    }

    /// Dense `(F0, [F_1, ..., F_m])` for one block.
    pub fn dense_block(&self, j: usize) -> (DMatrix<f64>, Vec<DMatrix<f64>>) {
        let b = &self.blocks[j];
        let mut f0 = DMatrix::zeros(b.size, b.size);
        let mut fs = vec![DMatrix::zeros(b.size, b.size); self.num_vars];
        for e in &b.entries {
            let m = match e.var {
                None => &mut f0,
                Some(v) => &mut fs[v],
            };
            m[(e.row, e.col)] += e.value;
            if e.row != e.col {
                m[(e.col, e.row)] += e.value;
            }
        }
        (f0, fs)
    }

    /// `S_j(x)` for every block.
    pub fn block_values(&self, x: &[f64]) -> Vec<DMatrix<f64>> {
        self.blocks
            .iter()
            .map(|b| {
                let mut s = DMatrix::zeros(b.size, b.size);
                for e in &b.entries {
                    let w = match e.var {
                        None => 1.0,
                        Some(v) => x[v],
                    };
                    s[(e.row, e.col)] += e.value * w;
                    if e.row != e.col {
                        s[(e.col, e.row)] += e.value * w;
                    }
                }
                s
            })
            .collect()
    }

    /// `A^*(Y)_i = sum_j <F_ij, Y_j>`.
    pub fn adjoint(&self, ys: &[DMatrix<f64>]) -> Vec<f64> {
        let mut out = vec![0.0; self.num_vars];
        for (b, y) in self.blocks.iter().zip(ys) {
            for e in &b.entries {
                if let Some(v) = e.var {
                    let w = if e.row == e.col { 1.0 } else { 2.0 };
                    out[v] += w * e.value * y[(e.row, e.col)];
                }
            }
        }
        out
    }

    fn constant_inner(&self, ys: &[DMatrix<f64>]) -> f64 {
        let mut acc = 0.0;
        for (b, y) in self.blocks.iter().zip(ys) {
            for e in &b.entries {
                if e.var.is_none() {
                    let w = if e.row == e.col { 1.0 } else { 2.0 };
                    acc += w * e.value * y[(e.row, e.col)];
                }
            }
        }
        acc
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SdpOptions {
    pub gap_tol: f64,
    pub feas_tol: f64,
    pub max_iter: usize,
}

impl Default for SdpOptions {
    fn default() -> Self {
        SdpOptions {
            gap_tol: 1e-8,
            feas_tol: 1e-8,
            max_iter: 200,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SolveStatus {
    Optimal,
    /// No `x` makes every block PSD and satisfies `Bx = b`.
    PrimalInfeasible,
    /// The dual is infeasible; for a feasible primal this means `c^T x` is
    /// unbounded below.
    DualInfeasible,
    MaxIter,
    IllConditioned,
}

impl SolveStatus {
    pub fn is_infeasible(self) -> bool {
        matches!(self, SolveStatus::PrimalInfeasible | SolveStatus::DualInfeasible)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct IterationLog {
    pub iter: usize,
    pub primal_obj: f64,
    pub dual_obj: f64,
    pub mu: f64,
    pub primal_infeas: f64,
    pub dual_infeas: f64,
    pub step_primal: f64,
    pub step_dual: f64,
}

#[derive(Clone, Debug)]
pub struct SdpSolution {
    pub x: Vec<f64>,
    /// Dual matrix `Y_j` per block.
    pub dual_blocks: Vec<DMatrix<f64>>,
    /// Multipliers `lambda` of the equality constraints.
    pub eq_multipliers: Vec<f64>,
    pub primal_objective: f64,
    pub dual_objective: f64,
    pub status: SolveStatus,
    pub iterations: usize,
    /// Relative duality gap at the final iterate.
    pub gap: f64,
    pub log: Vec<IterationLog>,
}

impl SdpSolution {
    pub fn is_optimal(&self) -> bool {
        self.status == SolveStatus::Optimal
    }
}

/// Dual matrix of `block`, with negative eigenvalues floored at zero.
pub fn extract_dual_gram(sol: &SdpSolution, block: usize) -> Result<DMatrix<f64>> {
    if !sol.is_optimal() {
        return Err(Error::NotOptimal {
            status: sol.status,
            level: None,
        });
    }
    let y = sol
        .dual_blocks
        .get(block)
        .ok_or_else(|| Error::InvalidArgument(format!("no block {block}")))?;
    Ok(linalg::psd_clip(y))
}

/// Solves the SDP with an infeasible-start primal-dual interior-point method.
///
/// Equality constraints and variables that do not enter any block are
/// eliminated first; the remaining problem is solved by HKM-direction
/// path following with Mehrotra's predictor-corrector.
pub fn solve(prob: &SdpProblem, opts: &SdpOptions) -> SdpSolution {
    let m = prob.num_vars;
    let c = DVector::from_column_slice(&prob.cost);
    let dense: Vec<(DMatrix<f64>, Vec<DMatrix<f64>>)> =
        (0..prob.blocks.len()).map(|j| prob.dense_block(j)).collect();

    // x = x0 + N z parametrizes {B x = b}.
    let (x0, nmat) = if prob.equalities.is_empty() {
        (DVector::zeros(m), DMatrix::identity(m, m))
    } else {
        let k = prob.equalities.len();
        let mut bmat = DMatrix::zeros(k, m);
        let mut bvec = DVector::zeros(k);
        for (r, eq) in prob.equalities.iter().enumerate() {
            for &(v, a) in &eq.coeffs {
                bmat[(r, v)] += a;
            }
            bvec[r] = eq.rhs;
        }
        let x0 = linalg::lstsq(&bmat, &bvec, 1e-12);
        let resid = (&bmat * &x0 - &bvec).norm();
        if resid > 1e-9 * (1.0 + bvec.norm()) {
            return infeasible_solution(prob, SolveStatus::PrimalInfeasible, x0.as_slice());
        }
        (x0, linalg::null_space(&bmat, 1e-12))
    };

    let g0: Vec<DMatrix<f64>> = dense
        .iter()
        .map(|(f0, fs)| {
            let mut g = f0.clone();
            for (i, f) in fs.iter().enumerate() {
                if x0[i] != 0.0 {
                    g += f * x0[i];
                }
            }
            g
        })
        .collect();
    let m1 = nmat.ncols();
    let combine = |coef: &DVector<f64>| -> Vec<DMatrix<f64>> {
        dense
            .iter()
            .map(|(f0, fs)| {
                let mut g = DMatrix::zeros(f0.nrows(), f0.ncols());
                for (i, f) in fs.iter().enumerate() {
                    if coef[i] != 0.0 {
                        g += f * coef[i];
                    }
                }
                g
            })
            .collect()
    };
    let g: Vec<Vec<DMatrix<f64>>> = (0..m1).map(|k| combine(&nmat.column(k).into_owned())).collect();
    let c1 = nmat.transpose() * &c;

    // Drop directions that leave every block unchanged.
    let rows: usize = dense.iter().map(|(f0, _)| f0.len()).sum();
    let mut w = DMatrix::zeros(rows, m1);
    for (k, gk) in g.iter().enumerate() {
        let mut r = 0;
        for blk in gk {
            for v in blk.iter() {
                w[(r, k)] = *v;
                r += 1;
            }
        }
    }
    let (s, v) = linalg::right_svd(&w);
    let smax = s.first().copied().unwrap_or(0.0);
    let rank = s.iter().filter(|&&x| x > 1e-12 * smax && x > 0.0).count();
    let vnull = v.columns(rank, m1 - rank);
    let drift = vnull.transpose() * &c1;
    if drift.norm() > 1e-10 * (1.0 + c1.norm()) {
        return infeasible_solution(prob, SolveStatus::DualInfeasible, x0.as_slice());
    }
    let p = v.columns(0, rank).into_owned();
    let h: Vec<Vec<DMatrix<f64>>> = (0..rank)
        .map(|k| {
            let mut acc: Vec<DMatrix<f64>> = g0.iter().map(|b| DMatrix::zeros(b.nrows(), b.ncols())).collect();
            for l in 0..m1 {
                let a = p[(l, k)];
                if a != 0.0 {
                    for (dst, src) in acc.iter_mut().zip(&g[l]) {
                        *dst += src * a;
                    }
                }
            }
            acc
        })
        .collect();
    let c2 = p.transpose() * &c1;
    let t = &nmat * &p;

    let outcome = ipm::run(&ipm::Reduced { c: c2, f0: g0.clone(), f: h }, opts);
    let x = &x0 + &t * &outcome.x;
    finish(prob, x.as_slice(), outcome.y, outcome.status, outcome.iterations, outcome.log)
}

fn finish(
    prob: &SdpProblem,
    x: &[f64],
    ys: Vec<DMatrix<f64>>,
    status: SolveStatus,
    iterations: usize,
    log: Vec<IterationLog>,
) -> SdpSolution {
    let aty = prob.adjoint(&ys);
    let lambda = if prob.equalities.is_empty() {
        Vec::new()
    } else {
        let k = prob.equalities.len();
        let mut bt = DMatrix::zeros(prob.num_vars, k);
        for (r, eq) in prob.equalities.iter().enumerate() {
            for &(v, a) in &eq.coeffs {
                bt[(v, r)] += a;
            }
        }
        let rhs = DVector::from_iterator(prob.num_vars, prob.cost.iter().zip(&aty).map(|(c, a)| c - a));
        linalg::lstsq(&bt, &rhs, 1e-12).as_slice().to_vec()
    };
    let primal_objective: f64 = prob.cost.iter().zip(x).map(|(c, x)| c * x).sum();
    let dual_objective = -prob.constant_inner(&ys)
        + prob
            .equalities
            .iter()
            .zip(&lambda)
            .map(|(e, l)| e.rhs * l)
            .sum::<f64>();
    let gap = (primal_objective - dual_objective).abs()
        / (1.0 + primal_objective.abs() + dual_objective.abs());
    SdpSolution {
        x: x.to_vec(),
        dual_blocks: ys,
        eq_multipliers: lambda,
        primal_objective,
        dual_objective,
        status,
        iterations,
        gap,
        log,
    }
}

fn infeasible_solution(prob: &SdpProblem, status: SolveStatus, x: &[f64]) -> SdpSolution {
    let ys = prob.blocks.iter().map(|b| DMatrix::zeros(b.size, b.size)).collect();
    finish(prob, x, ys, status, 0, Vec::new())
}
