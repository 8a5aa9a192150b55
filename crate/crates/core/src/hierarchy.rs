//! Moment relaxations, SoS tightenings, Putinar certificates and quadratic
//! module membership.
//!
//! Level `d` bounds the total degree of every product `sigma_i p_i` by the
//! even budget `D = 2 ceil(d/2)`: the moment matrix has order `D/2` and the
//! localizing matrix of `g` has order `floor((D - deg g)/2)`. Membership
//! tests use the budget `k` itself (the truncation `Q_k`).

use std::collections::{BTreeSet, HashMap};

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::cone::{PseudoMomentSequence, Scale, SemialgebraicProblem};
use crate::error::{Error, Result};
use crate::extraction::candidate_minimizer;
use crate::linalg;
use crate::poly::{MonomialBasis, MultiIndex, Polynomial};
use crate::sdp::{self, SdpOptions, SdpProblem, SdpSolution, SolveStatus};

/// Tolerance on `sup{s : q - s in Q_k} >= -tol` for membership.
pub const MEMBERSHIP_TOL: f64 = 1e-6;

/// Degree budget of level `d`.
pub fn level_budget(d: usize) -> usize {
    2 * d.div_ceil(2)
}

/// Moment order (size of the top moment matrix) of level `d`.
pub fn level_order(d: usize) -> usize {
    d.div_ceil(2)
}

/// A PSD block `sum_{a,b} G[a,b] x^(alpha_a + alpha_b) * multiplier`.
#[derive(Clone, Debug)]
pub(crate) struct GramSpec {
    pub basis: Vec<MultiIndex>,
    pub multiplier: Polynomial,
}

/// Generic "minimize L(objective) over L with PSD Gram blocks and linear
/// equalities `L(h) = b`" program.
#[derive(Clone, Debug)]
pub(crate) struct MomentProgram {
    pub n: usize,
    pub objective: Polynomial,
    pub grams: Vec<GramSpec>,
    pub equalities: Vec<(Polynomial, f64)>,
}

pub(crate) struct SolvedProgram {
    pub index: HashMap<MultiIndex, usize>,
    pub sol: SdpSolution,
}

impl SolvedProgram {
    pub fn moment(&self, alpha: &MultiIndex) -> Option<f64> {
        self.index.get(alpha).map(|&k| self.sol.x[k])
    }
}

impl MomentProgram {
    pub fn new(n: usize, objective: Polynomial) -> Self {
        MomentProgram {
            n,
            objective,
            grams: Vec::new(),
            equalities: Vec::new(),
        }
    }

    pub fn add_gram(&mut self, order: usize, multiplier: Polynomial) {
        let basis = MonomialBasis::new(self.n, order).elements().to_vec();
        self.grams.push(GramSpec { basis, multiplier });
    }

    pub fn build(&self) -> (SdpProblem, Vec<MultiIndex>, HashMap<MultiIndex, usize>) {
        let mut monos: BTreeSet<MultiIndex> = BTreeSet::new();
        monos.extend(self.objective.terms().map(|(a, _)| a.clone()));
        for g in &self.grams {
            for (i, a) in g.basis.iter().enumerate() {
                for b in &g.basis[i..] {
                    let ab = a.add(b);
                    for (gam, _) in g.multiplier.terms() {
                        monos.insert(ab.add(gam));
                    }
                }
            }
        }
        for (h, _) in &self.equalities {
            monos.extend(h.terms().map(|(a, _)| a.clone()));
        }
        let vars: Vec<MultiIndex> = monos.into_iter().collect();
        let index: HashMap<MultiIndex, usize> =
            vars.iter().enumerate().map(|(i, a)| (a.clone(), i)).collect();

        let mut p = SdpProblem::new(vars.len());
        for (a, c) in self.objective.terms() {
            p.set_cost(index[a], c);
        }
        for g in &self.grams {
            let blk = p.add_block(g.basis.len());
            for (i, a) in g.basis.iter().enumerate() {
                for (j, b) in g.basis.iter().enumerate().skip(i) {
                    let ab = a.add(b);
                    for (gam, c) in g.multiplier.terms() {
                        p.add_entry(blk, Some(index[&ab.add(gam)]), i, j, c);
                    }
                }
            }
        }
        for (h, b) in &self.equalities {
            p.add_equality(h.terms().map(|(a, c)| (index[a], c)).collect(), *b);
        }
        (p, vars, index)
    }

    pub fn solve(&self, opts: &SdpOptions) -> SolvedProgram {
        let (p, _, index) = self.build();
        let sol = sdp::solve(&p, opts);
        SolvedProgram { index, sol }
    }
}

/// One term `sigma_i * p_i` of a Putinar certificate, `sigma_i = v^T G v`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CertificateTerm {
    pub multiplier: Polynomial,
    pub basis: Vec<MultiIndex>,
    #[serde(with = "matrix_rows")]
    pub gram: DMatrix<f64>,
}

impl CertificateTerm {
    pub fn sigma(&self, n: usize) -> Polynomial {
        let mut s = Polynomial::zero(n);
        for (i, a) in self.basis.iter().enumerate() {
            for (j, b) in self.basis.iter().enumerate() {
                let g = self.gram[(i, j)];
                if g != 0.0 {
                    s.add_term(a.add(b), g);
                }
            }
        }
        s
    }

    pub fn expand(&self, n: usize) -> Polynomial {
        &self.sigma(n) * &self.multiplier
    }

    pub fn min_eigenvalue(&self) -> f64 {
        linalg::min_eigenvalue(&self.gram)
    }
}

/// `f - s = sigma_0 + sum_i sigma_i p_i` (up to `residual`).
///
/// `terms[0]` is `sigma_0`; the rest follow
/// [`SemialgebraicProblem::constraints`], with an empty Gram matrix where the
/// budget leaves no room for a multiplier.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SosCertificate {
    pub s: f64,
    pub terms: Vec<CertificateTerm>,
    pub residual: f64,
}

impl SosCertificate {
    pub fn expand(&self, n: usize) -> Polynomial {
        let mut acc = Polynomial::zero(n);
        for t in &self.terms {
            acc = &acc + &t.expand(n);
        }
        acc
    }

    /// `|f - s - sum sigma_i p_i|_coeff`.
    pub fn residual_for(&self, f: &Polynomial) -> f64 {
        let lhs = f - &Polynomial::constant(f.dim(), self.s);
        (&lhs - &self.expand(f.dim())).coeff_norm()
    }

    pub fn min_gram_eigenvalue(&self) -> f64 {
        self.terms
            .iter()
            .map(CertificateTerm::min_eigenvalue)
            .fold(f64::INFINITY, f64::min)
    }
}

mod matrix_rows {
    use nalgebra::DMatrix;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(m: &DMatrix<f64>, s: S) -> Result<S::Ok, S::Error> {
        let rows: Vec<Vec<f64>> = m.row_iter().map(|r| r.iter().copied().collect()).collect();
        rows.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<DMatrix<f64>, D::Error> {
        let rows: Vec<Vec<f64>> = Vec::deserialize(d)?;
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(serde::de::Error::custom("ragged matrix"));
        }
        Ok(DMatrix::from_fn(r, c, |i, j| rows[i][j]))
    }
}

type EqualityRows = (usize, Vec<(MultiIndex, usize)>);

/// Where each constraint of the problem went in a [`MomentProgram`].
struct Layout {
    /// Gram index per entry of `psd_constraints()`, `None` if omitted.
    psd_blocks: Vec<Option<usize>>,
    /// Per equality: basis order and the program equality rows `(gamma, row)`.
    eq_rows: Vec<Option<EqualityRows>>,
    /// Row index of `L(1) = 1`.
    normalization_row: usize,
}

/// The level program for `objective` over `K(prob)` with degree budget `budget`.
fn build_program(prob: &SemialgebraicProblem, objective: &Polynomial, budget: usize) -> (MomentProgram, Layout) {
    let n = prob.dim();
    let mut prog = MomentProgram::new(n, objective.clone());
    prog.add_gram(budget / 2, Polynomial::constant(n, 1.0));
    let mut psd_blocks = Vec::new();
    for g in prob.psd_constraints() {
        let dg = g.degree();
        if budget >= dg {
            prog.add_gram((budget - dg) / 2, g);
            psd_blocks.push(Some(prog.grams.len() - 1));
        } else {
            psd_blocks.push(None);
        }
    }
    let mut eq_rows = Vec::new();
    for h in prob.equalities() {
        let dh = h.degree();
        if budget >= dh {
            let t = (budget - dh) / 2;
            let mut rows = Vec::new();
            for gam in MonomialBasis::new(n, 2 * t).elements() {
                let hg = h * &Polynomial::monomial(gam.clone(), 1.0);
                prog.equalities.push((hg, 0.0));
                rows.push((gam.clone(), prog.equalities.len() - 1));
            }
            eq_rows.push(Some((t, rows)));
        } else {
            eq_rows.push(None);
        }
    }
    prog.equalities.push((Polynomial::constant(n, 1.0), 1.0));
    let normalization_row = prog.equalities.len() - 1;
    (
        prog,
        Layout {
            psd_blocks,
            eq_rows,
            normalization_row,
        },
    )
}

fn empty_term(n: usize, multiplier: Polynomial) -> CertificateTerm {
    let _ = n;
    CertificateTerm {
        multiplier,
        basis: Vec::new(),
        gram: DMatrix::zeros(0, 0),
    }
}

/// Reads the Putinar certificate off the dual solution.
fn certificate(
    prob: &SemialgebraicProblem,
    objective: &Polynomial,
    prog: &MomentProgram,
    layout: &Layout,
    solved: &SolvedProgram,
) -> Result<SosCertificate> {
    let n = prob.dim();
    let gram_term = |k: usize| -> Result<CertificateTerm> {
        Ok(CertificateTerm {
            multiplier: prog.grams[k].multiplier.clone(),
            basis: prog.grams[k].basis.clone(),
            gram: sdp::extract_dual_gram(&solved.sol, k)?,
        })
    };
    let psd = prob.psd_constraints();
    let n_ineq = prob.inequalities().len();
    let mut terms = vec![gram_term(0)?];
    for (i, g) in psd.iter().enumerate().take(n_ineq) {
        terms.push(match layout.psd_blocks[i] {
            Some(k) => gram_term(k)?,
            None => empty_term(n, g.clone()),
        });
    }
    for (h, rows) in prob.equalities().iter().zip(&layout.eq_rows) {
        match rows {
            Some((t, rows)) => {
                let basis = MonomialBasis::new(n, *t);
                let lam: HashMap<&MultiIndex, f64> = rows
                    .iter()
                    .map(|(g, r)| (g, solved.sol.eq_multipliers[*r]))
                    .collect();
                let k = basis.len();
                let mut count: HashMap<MultiIndex, usize> = HashMap::new();
                for a in basis.elements() {
                    for b in basis.elements() {
                        *count.entry(a.add(b)).or_default() += 1;
                    }
                }
                let spread = DMatrix::from_fn(k, k, |i, j| {
                    let g = basis.get(i).add(basis.get(j));
                    lam.get(&g).copied().unwrap_or(0.0) / count[&g] as f64
                });
                let (vals, vecs) = linalg::sym_eigen(&spread);
                let pos = &vecs * DMatrix::from_diagonal(&vals.map(|v| v.max(0.0))) * vecs.transpose();
                let neg = &vecs * DMatrix::from_diagonal(&vals.map(|v| (-v).max(0.0))) * vecs.transpose();
                terms.push(CertificateTerm {
                    multiplier: h.clone(),
                    basis: basis.elements().to_vec(),
                    gram: pos,
                });
                terms.push(CertificateTerm {
                    multiplier: -h,
                    basis: basis.elements().to_vec(),
                    gram: neg,
                });
            }
            None => {
                terms.push(empty_term(n, h.clone()));
                terms.push(empty_term(n, -h));
            }
        }
    }
    if let Some(ball) = prob.ball_constraint() {
        terms.push(match layout.psd_blocks[n_ineq] {
            Some(k) => gram_term(k)?,
            None => empty_term(n, ball),
        });
    }
    let s = solved.sol.eq_multipliers[layout.normalization_row];
    let mut cert = SosCertificate {
        s,
        terms,
        residual: 0.0,
    };
    cert.residual = cert.residual_for(objective);
    Ok(cert)
}

/// Outcome of one level of the moment hierarchy.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RelaxationResult {
    pub level: usize,
    pub moment_order: usize,
    /// Optimal value of the moment relaxation (primal).
    pub m_d_star: f64,
    /// Optimal value of the SoS tightening (dual of the same solve).
    pub f_d_star: f64,
    /// Pseudo-moments in the coordinates the problem is posed in.
    #[serde(with = "moments_serde")]
    pub pseudo_moments: PseudoMomentSequence,
    pub scale: Scale,
    pub certificate: Option<SosCertificate>,
    pub status: SolveStatus,
    pub iterations: usize,
    pub gap: f64,
}

impl RelaxationResult {
    /// Pseudo-moments in original coordinates.
    pub fn moments_original(&self) -> PseudoMomentSequence {
        self.scale.moments_to_original(&self.pseudo_moments)
    }

    /// `x^(d,*)` in original coordinates.
    pub fn candidate_minimizer(&self) -> Vec<f64> {
        candidate_minimizer(&self.pseudo_moments, &self.scale)
    }
}

pub(crate) mod moments_serde {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    use crate::cone::PseudoMomentSequence;
    use crate::io::MomentTable;

    pub fn serialize<S: Serializer>(y: &PseudoMomentSequence, s: S) -> Result<S::Ok, S::Error> {
        MomentTable::from(y).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<PseudoMomentSequence, D::Error> {
        let t = MomentTable::deserialize(d)?;
        t.to_sequence().map_err(serde::de::Error::custom)
    }
}

fn check_level(prob: &SemialgebraicProblem, d: usize) -> Result<()> {
    let need = prob.max_degree();
    if d < need {
        return Err(Error::InvalidArgument(format!(
            "level {d} is below the problem degree {need}"
        )));
    }
    Ok(())
}

/// The SDP solved at level `d`, e.g. for export.
pub fn relaxation_sdp(prob: &SemialgebraicProblem, d: usize) -> Result<SdpProblem> {
    check_level(prob, d)?;
    let (prog, _) = build_program(prob, prob.objective(), level_budget(d));
    Ok(prog.build().0)
}

pub fn solve_moment_relaxation(prob: &SemialgebraicProblem, d: usize) -> Result<RelaxationResult> {
    solve_moment_relaxation_with(prob, d, &SdpOptions::default())
}

/// Solves level `d`: `m_d* = inf L(f)` over `L` in `Q_d(p)*` with `L(1) = 1`.
pub fn solve_moment_relaxation_with(
    prob: &SemialgebraicProblem,
    d: usize,
    opts: &SdpOptions,
) -> Result<RelaxationResult> {
    check_level(prob, d)?;
    let budget = level_budget(d);
    let (prog, layout) = build_program(prob, prob.objective(), budget);
    let solved = prog.solve(opts);
    if !solved.sol.is_optimal() {
        return Err(Error::NotOptimal {
            status: solved.sol.status,
            level: Some(d),
        });
    }
    let n = prob.dim();
    let pseudo_moments = PseudoMomentSequence::from_fn(n, budget, |a| solved.moment(a).unwrap_or(0.0));
    let certificate = certificate(prob, prob.objective(), &prog, &layout, &solved).ok();
    Ok(RelaxationResult {
        level: d,
        moment_order: budget / 2,
        m_d_star: solved.sol.primal_objective,
        f_d_star: solved.sol.dual_objective,
        pseudo_moments,
        scale: prob.scale().clone(),
        certificate,
        status: solved.sol.status,
        iterations: solved.sol.iterations,
        gap: solved.sol.gap,
    })
}

/// `f_d* = sup{s : f - s in Q_d(p)}` with its certificate.
pub fn solve_sos_tightening(prob: &SemialgebraicProblem, d: usize) -> Result<(f64, SosCertificate)> {
    let res = solve_moment_relaxation(prob, d)?;
    let cert = res
        .certificate
        .ok_or_else(|| Error::Solver(format!("no certificate at level {d}")))?;
    Ok((res.f_d_star, cert))
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Membership {
    pub member: bool,
    /// `sup{s : q - s in Q_k}`; `None` when it is `-inf`.
    pub margin: Option<f64>,
    pub certificate: Option<SosCertificate>,
}

/// Tests `q in Q_k(p)` by computing `sup{s : q - s in Q_k}` and comparing
/// it with zero.
pub fn qmodule_membership(q: &Polynomial, prob: &SemialgebraicProblem, k: usize) -> Result<Membership> {
    if q.dim() != prob.dim() {
        return Err(Error::DimensionMismatch {
            expected: prob.dim(),
            found: q.dim(),
        });
    }
    if q.degree() > k {
        return Ok(Membership {
            member: false,
            margin: None,
            certificate: None,
        });
    }
    let (prog, layout) = build_program(prob, q, k);
    let solved = prog.solve(&SdpOptions::default());
    match solved.sol.status {
        SolveStatus::Optimal => {
            let margin = solved.sol.dual_objective;
            let member = margin >= -MEMBERSHIP_TOL;
            let certificate = if member {
                certificate(prob, q, &prog, &layout, &solved).ok()
            } else {
                None
            };
            Ok(Membership {
                member,
                margin: Some(margin),
                certificate,
            })
        }
        SolveStatus::DualInfeasible => Ok(Membership {
            member: false,
            margin: None,
            certificate: None,
        }),
        status => Err(Error::NotOptimal {
            status,
            level: Some(k),
        }),
    }
}

/// Smallest `k <= d_max` with `1 - p_i in Q_k(p)` for every constraint.
pub fn compute_d0(prob: &SemialgebraicProblem, d_max: usize) -> Result<Option<usize>> {
    let n = prob.dim();
    let one = Polynomial::constant(n, 1.0);
    let targets: Vec<Polynomial> = prob.constraints().iter().map(|p| &one - p).collect();
    for k in 0..=d_max {
        let mut all = true;
        for q in &targets {
            if !qmodule_membership(q, prob, k)?.member {
                all = false;
                break;
            }
        }
        if all {
            return Ok(Some(k));
        }
    }
    Ok(None)
}

#[derive(Debug)]
pub struct LevelOutcome {
    pub level: usize,
    pub result: Result<RelaxationResult>,
}

#[derive(Debug)]
pub struct HierarchyRun {
    pub levels: Vec<LevelOutcome>,
    /// `m_d*` is nondecreasing (within 1e-6) over the solved levels.
    pub monotone: bool,
}

impl HierarchyRun {
    pub fn solved(&self) -> impl Iterator<Item = &RelaxationResult> {
        self.levels.iter().filter_map(|l| l.result.as_ref().ok())
    }
}

/// Solves every level in `d_min..=d_max`, concurrently.
pub fn run_hierarchy(prob: &SemialgebraicProblem, d_min: usize, d_max: usize) -> HierarchyRun {
    let levels: Vec<LevelOutcome> = std::thread::scope(|scope| {
        let handles: Vec<_> = (d_min..=d_max)
            .map(|d| scope.spawn(move || solve_moment_relaxation(prob, d)))
            .collect();
        (d_min..=d_max)
            .zip(handles)
            .map(|(level, h)| LevelOutcome {
                level,
                result: h
                    .join()
                    .unwrap_or_else(|_| Err(Error::Solver(format!("level {level} panicked")))),
            })
            .collect()
    });
    let values: Vec<f64> = levels
        .iter()
        .filter_map(|l| l.result.as_ref().ok().map(|r| r.m_d_star))
        .collect();
    let monotone = values.windows(2).all(|w| w[1] >= w[0] - 1e-6);
    HierarchyRun { levels, monotone }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cone::normalize;

    fn x(n: usize, i: usize) -> Polynomial {
        Polynomial::var(n, i)
    }

    fn c(n: usize, v: f64) -> Polynomial {
        Polynomial::constant(n, v)
    }

    fn interval() -> SemialgebraicProblem {
        SemialgebraicProblem::new(x(1, 0), vec![&c(1, 1.0) - &x(1, 0).pow(2)], vec![], None).unwrap()
    }

    pub(crate) fn binary_square() -> SemialgebraicProblem {
        let f = &(&(-&x(2, 0)) - &x(2, 1)) + &(&x(2, 0) * &x(2, 1));
        let g1 = &x(2, 0) - &x(2, 0).pow(2);
        let g2 = &x(2, 1) - &x(2, 1).pow(2);
        SemialgebraicProblem::new(f, vec![], vec![g1, g2], Some(1.5)).unwrap()
    }

    #[test]
    fn binary_square_levels() {
        let prob = normalize(&binary_square()).unwrap();
        let r2 = solve_moment_relaxation(&prob, 2).unwrap();
        assert_eq!(r2.moment_order, 1);
        assert!((r2.m_d_star + 1.125).abs() < 1e-6, "{}", r2.m_d_star);
        let y = r2.moments_original();
        let get = |e: [u32; 2]| y.y(&MultiIndex::new(e.to_vec()));
        assert!((get([1, 0]) - 0.75).abs() < 1e-4);
        assert!((get([0, 1]) - 0.75).abs() < 1e-4);
        assert!((get([1, 1]) - 0.375).abs() < 1e-4);
        let r3 = solve_moment_relaxation(&prob, 3).unwrap();
        assert!((r3.m_d_star + 1.0).abs() < 1e-6);
        for r in [&r2, &r3] {
            assert!(r.f_d_star <= r.m_d_star + 1e-6);
            let cert = r.certificate.as_ref().unwrap();
            assert!(cert.residual <= 1e-6, "{}", cert.residual);
            assert!(cert.min_gram_eigenvalue() >= -1e-8);
            assert_eq!(cert.terms.len(), 1 + prob.constraints().len());
        }
    }

    #[test]
    fn constant_objective() {
        let prob = interval().with_objective(c(1, 2.5)).unwrap();
        for d in [2, 3, 4] {
            let r = solve_moment_relaxation(&prob, d).unwrap();
            assert!((r.m_d_star - 2.5).abs() < 1e-7);
        }
    }

    #[test]
    fn linear_on_interval() {
        let run = run_hierarchy(&interval(), 2, 5);
        assert!(run.monotone);
        assert_eq!(run.levels.len(), 4);
        for r in run.solved() {
            assert!((r.m_d_star + 1.0).abs() < 1e-6);
        }
        let (fd, cert) = solve_sos_tightening(&interval(), 2).unwrap();
        assert!((fd + 1.0).abs() < 1e-6);
        // x + 1 = 1/2 (1 + x)^2 + 1/2 (1 - x^2). The Gram sits on the PSD
        // boundary, so its entries only converge like sqrt(gap).
        let g0 = &cert.terms[0].gram;
        assert!((g0 - DMatrix::from_element(2, 2, 0.5)).norm() < 1e-3);
        assert!((cert.terms[1].gram[(0, 0)] - 0.5).abs() < 1e-3);
        assert!(cert.residual < 1e-6);
    }

    #[test]
    fn level_below_degree_is_rejected() {
        assert!(solve_moment_relaxation(&interval(), 1).is_err());
    }

    #[test]
    fn membership_examples() {
        let prob = interval();
        let m = qmodule_membership(&c(1, 1.0), &prob, 0).unwrap();
        assert!(m.member);
        let cert = m.certificate.unwrap();
        assert!((cert.terms[0].gram[(0, 0)] + cert.s - 1.0).abs() < 1e-6);

        let m = qmodule_membership(&(&c(1, 1.0) - &x(1, 0).pow(2)), &prob, 2).unwrap();
        assert!(m.member);

        let cubic = SemialgebraicProblem::new(x(1, 0), vec![x(1, 0).pow(3)], vec![], None).unwrap();
        let m = qmodule_membership(&x(1, 0), &cubic, 2).unwrap();
        assert!(!m.member);
        assert!(m.margin.is_none());
    }

    #[test]
    fn d0_examples() {
        let half = (&c(1, 1.0) - &x(1, 0).pow(2)).scale(0.5);
        let prob = SemialgebraicProblem::new(x(1, 0), vec![half], vec![], Some(1.0)).unwrap();
        assert_eq!(compute_d0(&prob, 4).unwrap(), Some(2));
        assert_eq!(compute_d0(&prob, 1).unwrap(), None);
        let trivial = SemialgebraicProblem::new(x(1, 0), vec![c(1, 1.0)], vec![], None).unwrap();
        assert_eq!(compute_d0(&trivial, 3).unwrap(), Some(0));
    }
}
