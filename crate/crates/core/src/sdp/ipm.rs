//! Infeasible-start HKM path following with Mehrotra predictor-corrector.
//!
//! Works on a reduced problem whose constraint matrices are linearly
//! independent and which has no equality constraints.

use nalgebra::{Cholesky, DMatrix, DVector, Dyn};

use super::{IterationLog, SdpOptions, SolveStatus};
use crate::linalg::{frob, min_eigenvalue, sym_eigen, symmetrize};

pub(super) struct Reduced {
    pub c: DVector<f64>,
    pub f0: Vec<DMatrix<f64>>,
    /// `f[k][j]`: matrix of variable `k` in block `j`.
    pub f: Vec<Vec<DMatrix<f64>>>,
}

pub(super) struct Outcome {
    pub x: DVector<f64>,
    pub y: Vec<DMatrix<f64>>,
    pub status: SolveStatus,
    pub iterations: usize,
    pub log: Vec<IterationLog>,
}

const STEP_FRACTION: f64 = 0.98;
const INFEAS_TOL: f64 = 1e-8;
const REFINE_STEPS: usize = 2;
/// Extra iterations taken after convergence, keeping the best iterate.
const POLISH_STEPS: usize = 6;

type Blocks = Vec<DMatrix<f64>>;

fn inner(a: &Blocks, b: &Blocks) -> f64 {
    a.iter().zip(b).map(|(x, y)| frob(x, y)).sum()
}

fn norm(a: &Blocks) -> f64 {
    inner(a, a).sqrt()
}

fn zeros_like(a: &Blocks) -> Blocks {
    a.iter().map(|b| DMatrix::zeros(b.nrows(), b.ncols())).collect()
}

impl Reduced {
    fn apply(&self, x: &DVector<f64>) -> Blocks {
        let mut out = zeros_like(&self.f0);
        for (k, fk) in self.f.iter().enumerate() {
            if x[k] != 0.0 {
                for (o, f) in out.iter_mut().zip(fk) {
                    *o += f * x[k];
                }
            }
        }
        out
    }

    fn adjoint(&self, y: &Blocks) -> DVector<f64> {
        DVector::from_iterator(self.f.len(), self.f.iter().map(|fk| inner(fk, y)))
    }
}

/// Largest `alpha` with `s + alpha ds >= 0`, or infinity.
fn max_step(s: &Blocks, ds: &Blocks) -> f64 {
    let mut alpha = f64::INFINITY;
    for (sj, dj) in s.iter().zip(ds) {
        if sj.nrows() == 0 {
            continue;
        }
        let l = match Cholesky::new(sj.clone()) {
            Some(ch) => ch.l(),
            None => return 0.0,
        };
        let linv = l.clone().try_inverse().unwrap_or_else(|| DMatrix::zeros(l.nrows(), l.ncols()));
        let w = &linv * dj * linv.transpose();
        let lmin = min_eigenvalue(&w);
        if lmin < 0.0 {
            alpha = alpha.min(-1.0 / lmin);
        }
    }
    alpha
}

fn scaled_identity(n: usize, v: f64) -> DMatrix<f64> {
    DMatrix::identity(n, n) * v
}

pub(super) fn run(p: &Reduced, opts: &SdpOptions) -> Outcome {
    let m = p.f.len();
    let sizes: Vec<usize> = p.f0.iter().map(|b| b.nrows()).collect();
    let total: usize = sizes.iter().sum();

    if m == 0 || total == 0 {
        let feasible = p.f0.iter().all(|b| b.nrows() == 0 || min_eigenvalue(b) >= -opts.feas_tol);
        return Outcome {
            x: DVector::zeros(m),
            y: zeros_like(&p.f0),
            status: if feasible {
                SolveStatus::Optimal
            } else {
                SolveStatus::PrimalInfeasible
            },
            iterations: 0,
            log: Vec::new(),
        };
    }

    let c_norm = p.c.norm();
    let f0_norm = norm(&p.f0);
    let mut x = DVector::zeros(m);
    let mut y: Blocks = Vec::with_capacity(sizes.len());
    let mut s: Blocks = Vec::with_capacity(sizes.len());
    for (j, &n) in sizes.iter().enumerate() {
        let nf = n as f64;
        let mut xi: f64 = 10.0f64.max(nf.sqrt());
        let mut eta: f64 = 10.0f64.max(nf.sqrt()).max(p.f0[j].norm());
        for (k, fk) in p.f.iter().enumerate() {
            let fn_ = fk[j].norm();
            xi = xi.max(nf * (1.0 + p.c[k].abs()) / (1.0 + fn_));
            eta = eta.max(fn_);
        }
        y.push(scaled_identity(n, xi));
        s.push(scaled_identity(n, eta));
    }

    let mut log = Vec::new();
    let mut status = SolveStatus::MaxIter;
    let mut iterations = 0;
    let mut best: Option<(f64, DVector<f64>, Blocks, usize)> = None;
    let mut polished = 0;

    for iter in 0..opts.max_iter {
        iterations = iter;
        let ax = p.apply(&x);
        let rd: Blocks = p
            .f0
            .iter()
            .zip(&ax)
            .zip(&s)
            .map(|((f0, a), sj)| f0 + a - sj)
            .collect();
        let aty = p.adjoint(&y);
        let rp = &p.c - &aty;
        let pobj = p.c.dot(&x);
        let dobj = -inner(&p.f0, &y);
        let sy = inner(&s, &y);
        let mu = sy / total as f64;
        let pinf = norm(&rd) / (1.0 + f0_norm);
        let dinf = rp.norm() / (1.0 + c_norm);
        let scale = 1.0 + pobj.abs() + dobj.abs();
        let relgap = (pobj - dobj).abs().max(sy.abs()) / scale;

        let mut entry = IterationLog {
            iter,
            primal_obj: pobj,
            dual_obj: dobj,
            mu,
            primal_infeas: pinf,
            dual_infeas: dinf,
            step_primal: 0.0,
            step_dual: 0.0,
        };

        if !(pobj.is_finite() && dobj.is_finite() && mu.is_finite()) {
            log.push(entry);
            status = SolveStatus::IllConditioned;
            break;
        }
        if relgap <= opts.gap_tol && pinf <= opts.feas_tol && dinf <= opts.feas_tol
            && best.as_ref().is_none_or(|b| relgap < b.0) {
                best = Some((relgap, x.clone(), y.clone(), iter));
            }
        if best.is_some() {
            if polished == POLISH_STEPS {
                log.push(entry);
                break;
            }
            polished += 1;
        }
        // Dual ray: Y >= 0 with A*(Y) ~ 0 and -<F0, Y> > 0.
        let t = -inner(&p.f0, &y);
        if best.is_none() && t > 0.0 && aty.norm() <= INFEAS_TOL * t {
            log.push(entry);
            status = SolveStatus::PrimalInfeasible;
            break;
        }
        // Primal ray: sum x F >= 0 (up to residual) with c^T x < 0.
        if best.is_none() && pobj < 0.0 {
            let ray_resid: Blocks = rd.iter().zip(&p.f0).map(|(r, f0)| r - f0).collect();
            if norm(&ray_resid) <= INFEAS_TOL * (-pobj) {
                log.push(entry);
                status = SolveStatus::DualInfeasible;
                break;
            }
        }

        let sinv: Blocks = match s
            .iter()
            .map(|sj| Cholesky::new(sj.clone()).map(|ch| ch.inverse()))
            .collect::<Option<Vec<_>>>()
        {
            Some(v) => v,
            None => {
                log.push(entry);
                status = SolveStatus::IllConditioned;
                break;
            }
        };

        // Schur complement M_kl = <F_k, Y F_l S^-1> = <A_k, A_l> with
        // A_k = Ly^T F_k Ls^-T, factored through QR of [vec A_k].
        let chol = match schur_factor(p, &y, &s) {
            Some(ch) => ch,
            None => {
                log.push(entry);
                status = SolveStatus::IllConditioned;
                break;
            }
        };

        let yrds: Blocks = y
            .iter()
            .zip(&rd)
            .zip(&sinv)
            .map(|((yj, r), si)| yj * r * si)
            .collect();
        let base: DVector<f64> =
            DVector::from_iterator(m, p.f.iter().map(|fk| -inner(fk, &yrds))) - &p.c;

        let direction = |target: &Blocks| -> (DVector<f64>, Blocks, Blocks) {
            // target_j = sigma mu I - corr_j
            let ts: Blocks = target.iter().zip(&sinv).map(|(t, si)| t * si).collect();
            let rhs = &base + DVector::from_iterator(m, p.f.iter().map(|fk| inner(fk, &ts)));
            let mut dx = chol.solve(&rhs);
            let step = |dx: &DVector<f64>| -> (Blocks, Blocks) {
                let adx = p.apply(dx);
                let ds: Blocks = rd.iter().zip(&adx).map(|(r, a)| r + a).collect();
                let dy: Blocks = target
                    .iter()
                    .zip(&y)
                    .zip(&s)
                    .zip(&ds)
                    .zip(&sinv)
                    .map(|((((t, yj), _sj), dsj), si)| symmetrize(&(t * si - yj - yj * dsj * si)))
                    .collect();
                (ds, dy)
            };
            let (mut ds, mut dy) = step(&dx);
            // Refine against the dual equations <F_k, Y + dY> = c_k, which
            // the Schur solve only meets up to its conditioning.
            for _ in 0..REFINE_STEPS {
                let err = &aty + p.adjoint(&dy) - &p.c;
                if err.norm() <= 1e-15 * (1.0 + c_norm) {
                    break;
                }
                dx += chol.solve(&err);
                (ds, dy) = step(&dx);
            }
            (dx, ds, dy)
        };

        // Predictor.
        let zero_target = zeros_like(&y);
        let (_, ds_a, dy_a) = direction(&zero_target);
        let ap = max_step(&s, &ds_a).min(1.0);
        let ad = max_step(&y, &dy_a).min(1.0);
        let s_aff: Blocks = s.iter().zip(&ds_a).map(|(a, b)| a + b * ap).collect();
        let y_aff: Blocks = y.iter().zip(&dy_a).map(|(a, b)| a + b * ad).collect();
        let mu_aff = inner(&s_aff, &y_aff) / total as f64;
        let sigma = if mu > 0.0 {
            (mu_aff / mu).clamp(0.0, 1.0).powi(3)
        } else {
            0.0
        };

        // Corrector.
        let target: Blocks = sizes
            .iter()
            .zip(dy_a.iter().zip(&ds_a))
            .map(|(&n, (dyj, dsj))| scaled_identity(n, sigma * mu) - dyj * dsj)
            .collect();
        let (dx, ds, dy) = direction(&target);
        let ap = (STEP_FRACTION * max_step(&s, &ds)).min(1.0);
        let ad = (STEP_FRACTION * max_step(&y, &dy)).min(1.0);
        entry.step_primal = ap;
        entry.step_dual = ad;
        log.push(entry);

        x += &dx * ap;
        for ((sj, dsj), (yj, dyj)) in s.iter_mut().zip(&ds).zip(y.iter_mut().zip(&dy)) {
            *sj = symmetrize(&(&*sj + dsj * ap));
            *yj = symmetrize(&(&*yj + dyj * ad));
        }
        if ap < 1e-12 && ad < 1e-12 {
            status = SolveStatus::IllConditioned;
            break;
        }
        iterations = iter + 1;
    }

    if let Some((_, bx, by, it)) = best {
        return Outcome {
            x: bx,
            y: by,
            status: SolveStatus::Optimal,
            iterations: it,
            log,
        };
    }
    Outcome {
        x,
        y,
        status,
        iterations,
        log,
    }
}

enum SchurFactor {
    /// Upper triangular `R` with `M = R^T R`.
    Qr(DMatrix<f64>),
    Chol(Cholesky<f64, Dyn>),
}

impl SchurFactor {
    fn solve(&self, b: &DVector<f64>) -> DVector<f64> {
        match self {
            SchurFactor::Qr(r) => {
                let z = r.tr_solve_upper_triangular(b).unwrap_or_else(|| b.clone());
                r.solve_upper_triangular(&z).unwrap_or(z)
            }
            SchurFactor::Chol(ch) => ch.solve(b),
        }
    }
}

fn schur_factor(p: &Reduced, y: &Blocks, s: &Blocks) -> Option<SchurFactor> {
    let m = p.f.len();
    let mut ly = Vec::with_capacity(y.len());
    let mut ls_inv = Vec::with_capacity(s.len());
    for (yj, sj) in y.iter().zip(s) {
        ly.push(Cholesky::new(yj.clone())?.l());
        ls_inv.push(Cholesky::new(sj.clone())?.l().try_inverse()?);
    }
    let rows: usize = y.iter().map(|b| b.len()).sum();
    let mut a = DMatrix::zeros(rows, m);
    for (k, fk) in p.f.iter().enumerate() {
        let mut off = 0;
        for ((f, l), li) in fk.iter().zip(&ly).zip(&ls_inv) {
            let n = f.len();
            if f.iter().any(|&v| v != 0.0) {
                let ak = l.transpose() * f * li.transpose();
                a.view_mut((off, k), (n, 1)).copy_from_slice(ak.as_slice());
            }
            off += n;
        }
    }
    if rows >= m {
        let r = a.clone().qr().r();
        let dmax = r.diagonal().iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
        let dmin = r.diagonal().iter().fold(f64::INFINITY, |acc, v| acc.min(v.abs()));
        if dmax > 0.0 && dmin > 1e-15 * dmax {
            return Some(SchurFactor::Qr(r));
        }
    }
    factor(&(a.transpose() * &a)).map(SchurFactor::Chol)
}

/// Cholesky of the Schur complement, retrying with a small diagonal shift.
fn factor(m: &DMatrix<f64>) -> Option<Cholesky<f64, nalgebra::Dyn>> {
    if let Some(ch) = Cholesky::new(m.clone()) {
        return Some(ch);
    }
    let dmax = m.diagonal().iter().fold(0.0f64, |a, &b| a.max(b.abs())).max(1e-300);
    for shift in [1e-14, 1e-12, 1e-10] {
        let mut r = m.clone();
        for i in 0..r.nrows() {
            r[(i, i)] += shift * dmax;
        }
        if let Some(ch) = Cholesky::new(r) {
            return Some(ch);
        }
    }
    // Last resort: the matrix is symmetric; check whether it is merely
    // indefinite by rounding.
    let (vals, _) = sym_eigen(m);
    if vals[0] > -1e-8 * dmax {
        let mut r = m.clone();
        for i in 0..r.nrows() {
            r[(i, i)] += (1e-8 * dmax).max(-2.0 * vals[0]);
        }
        return Cholesky::new(r);
    }
    None
}
