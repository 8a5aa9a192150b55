//! Upper bounds from SoS densities against a reference measure, the
//! density-weighted estimator and SoS-convexity tests.

use nalgebra::{Cholesky, DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::cone::{normalize, PseudoMomentSequence, Scale, SemialgebraicProblem};
use crate::error::{Error, Result};
use crate::hierarchy::{solve_moment_relaxation, GramSpec, MomentProgram};
use crate::linalg::{self, sym_eigen};
use crate::poly::{MonomialBasis, MultiIndex, Polynomial};
use crate::sdp::{self, SdpOptions};

/// Tolerance on `int sigma dmu = 1`.
pub const NORMALIZATION_TOL: f64 = 1e-8;
const CHOLESKY_JITTER: f64 = 1e-12;
const SOS_CONVEX_TOL: f64 = 1e-7;
const CERT_RESIDUAL_TOL: f64 = 1e-6;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MeasureKind {
    /// Lebesgue measure on `[-1, 1]^n`.
    UnitBox,
    /// Lebesgue measure on the closed unit ball.
    UnitBall,
    /// Moments given as a table; only moments up to its degree exist.
    Table,
}

#[derive(Clone, Debug)]
pub struct ReferenceMeasure {
    kind: MeasureKind,
    n: usize,
    table: Option<PseudoMomentSequence>,
}

impl ReferenceMeasure {
    pub fn unit_box(n: usize) -> Self {
        ReferenceMeasure {
            kind: MeasureKind::UnitBox,
            n,
            table: None,
        }
    }

    pub fn unit_ball(n: usize) -> Self {
        ReferenceMeasure {
            kind: MeasureKind::UnitBall,
            n,
            table: None,
        }
    }

    pub fn from_table(y: PseudoMomentSequence) -> Self {
        ReferenceMeasure {
            kind: MeasureKind::Table,
            n: y.dim(),
            table: Some(y),
        }
    }

    pub fn kind(&self) -> &MeasureKind {
        &self.kind
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Highest moment degree available, `None` if unbounded.
    pub fn max_degree(&self) -> Option<usize> {
        self.table.as_ref().map(PseudoMomentSequence::degree)
    }

    pub fn moment(&self, alpha: &MultiIndex) -> Result<f64> {
        if alpha.dim() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: alpha.dim(),
            });
        }
        match (&self.kind, &self.table) {
            (MeasureKind::UnitBox, _) => Ok(box_moment(alpha)),
            (MeasureKind::UnitBall, _) => Ok(ball_moment(alpha)),
            (MeasureKind::Table, Some(y)) => y.get(alpha).ok_or(Error::DegreeOverflow {
                needed: alpha.degree(),
                available: y.degree(),
            }),
            (MeasureKind::Table, None) => Err(Error::InvalidArgument("moment table missing".into())),
        }
    }

    pub fn moments(&self, degree: usize) -> Result<PseudoMomentSequence> {
        let basis = MonomialBasis::new(self.n, degree);
        let values = basis.elements().iter().map(|a| self.moment(a)).collect::<Result<Vec<_>>>()?;
        PseudoMomentSequence::new(self.n, degree, values)
    }

    pub fn integrate(&self, p: &Polynomial) -> Result<f64> {
        let mut acc = 0.0;
        for (a, c) in p.terms() {
            acc += c * self.moment(a)?;
        }
        Ok(acc)
    }

    /// Whether `x` lies in the convex hull of the support, when that is known.
    pub fn hull_contains(&self, x: &[f64], tol: f64) -> Option<bool> {
        match self.kind {
            MeasureKind::UnitBox => Some(x.iter().all(|v| v.abs() <= 1.0 + tol)),
            MeasureKind::UnitBall => Some(x.iter().map(|v| v * v).sum::<f64>() <= 1.0 + tol),
            MeasureKind::Table => None,
        }
    }
}

fn box_moment(alpha: &MultiIndex) -> f64 {
    alpha
        .exponents()
        .iter()
        .map(|&a| if a % 2 == 1 { 0.0 } else { 2.0 / (a as f64 + 1.0) })
        .product()
}

/// `Gamma(k / 2)` for a positive integer `k`.
fn gamma_half(k: u32) -> f64 {
    let (mut x, mut acc) = if k.is_multiple_of(2) {
        (1.0, 1.0)
    } else {
        (0.5, std::f64::consts::PI.sqrt())
    };
    let target = k as f64 / 2.0;
    while x < target {
        acc *= x;
        x += 1.0;
    }
    acc
}

/// `int_{|x| <= 1} x^alpha dx = 2 prod Gamma(b_i) / (Gamma(|b|) (|alpha| + n))`
/// with `b_i = (alpha_i + 1) / 2`.
fn ball_moment(alpha: &MultiIndex) -> f64 {
    if alpha.exponents().iter().any(|a| a % 2 == 1) {
        return 0.0;
    }
    let n = alpha.dim() as u32;
    let deg = alpha.degree() as u32;
    let num: f64 = alpha.exponents().iter().map(|&a| gamma_half(a + 1)).product();
    2.0 * num / (gamma_half(deg + n) * (deg + n) as f64)
}

/// Moments of the Lebesgue measure on `[-1, 1]^n` up to `degree`.
pub fn lebesgue_box_moments(n: usize, degree: usize) -> PseudoMomentSequence {
    PseudoMomentSequence::from_fn(n, degree, box_moment)
}

/// Moments of the Lebesgue measure on the unit ball up to `degree`.
pub fn lebesgue_ball_moments(n: usize, degree: usize) -> PseudoMomentSequence {
    PseudoMomentSequence::from_fn(n, degree, ball_moment)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct UpperBoundResult {
    pub level: usize,
    pub u_d_star: f64,
    /// `sigma = q^2` with `int sigma dmu = 1`.
    pub sigma: Polynomial,
    pub q: Polynomial,
    /// `x_i = int x_i sigma dmu`, in original coordinates.
    pub estimator: Vec<f64>,
    /// `int f sigma dmu`.
    pub cost_bound: f64,
    /// Estimator inside the convex hull of `supp(mu)` when decidable.
    pub in_hull: Option<bool>,
    /// Estimator inside `K`, filled when a problem is at hand.
    pub feasible: Option<bool>,
}

/// `u_d* = min int f sigma dmu` over SoS `sigma` of degree `<= d` with
/// `int sigma dmu = 1`, as the smallest generalized eigenvalue of
/// `(int f v v^T dmu, int v v^T dmu)` on the basis of degree `floor(d/2)`.
pub fn solve_upper_bound(f: &Polynomial, mu: &ReferenceMeasure, d: usize) -> Result<UpperBoundResult> {
    if f.dim() != mu.dim() {
        return Err(Error::DimensionMismatch {
            expected: mu.dim(),
            found: f.dim(),
        });
    }
    let n = f.dim();
    let order = d / 2;
    let basis = MonomialBasis::new(n, order);
    let need = 2 * order + f.degree();
    if let Some(avail) = mu.max_degree() {
        if avail < need {
            return Err(Error::DegreeOverflow { needed: need, available: avail });
        }
    }
    let el = basis.elements();
    let k = el.len();
    let mut a = DMatrix::zeros(k, k);
    let mut b = DMatrix::zeros(k, k);
    for i in 0..k {
        for j in i..k {
            let ab = el[i].add(&el[j]);
            let bij = mu.moment(&ab)?;
            let mut aij = 0.0;
            for (g, c) in f.terms() {
                aij += c * mu.moment(&ab.add(g))?;
            }
            a[(i, j)] = aij;
            a[(j, i)] = aij;
            b[(i, j)] = bij;
            b[(j, i)] = bij;
        }
    }
    let l = gram_cholesky(&b)?;
    let linv = l
        .clone()
        .try_inverse()
        .ok_or_else(|| Error::NotPositiveDefinite("moment matrix of the reference measure".into()))?;
    let c = linalg::symmetrize(&(&linv * &a * linv.transpose()));
    let (vals, vecs) = sym_eigen(&c);
    let v: DVector<f64> = vecs.column(0).into_owned();
    let coeffs = linv.transpose() * v;
    let mut q = Polynomial::zero(n);
    for (alpha, &c) in el.iter().zip(coeffs.iter()) {
        if c != 0.0 {
            q.add_term(alpha.clone(), c);
        }
    }
    let sigma = &q * &q;
    let (estimator, cost_bound, in_hull) = estimator_from_density(f, &sigma, mu, &Scale::identity(n))?;
    Ok(UpperBoundResult {
        level: d,
        u_d_star: vals[0],
        sigma,
        q,
        estimator,
        cost_bound,
        in_hull,
        feasible: None,
    })
}

/// Upper bound for the objective of `prob`, with feasibility of the estimator.
pub fn solve_upper_bound_on(prob: &SemialgebraicProblem, mu: &ReferenceMeasure, d: usize) -> Result<UpperBoundResult> {
    let mut res = solve_upper_bound(prob.objective(), mu, d)?;
    res.feasible = Some(prob.is_feasible(&res.estimator, 1e-6));
    Ok(res)
}

fn gram_cholesky(b: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let (vals, _) = sym_eigen(b);
    let top = vals.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
    let degenerate = || Error::NotPositiveDefinite("moment matrix of the reference measure".into());
    if top == 0.0 || vals[0] <= CHOLESKY_JITTER * top {
        return Err(degenerate());
    }
    if let Some(ch) = Cholesky::new(b.clone()) {
        return Ok(ch.l());
    }
    let jittered = b + DMatrix::identity(b.nrows(), b.ncols()) * (CHOLESKY_JITTER * top);
    Cholesky::new(jittered).map(|ch| ch.l()).ok_or_else(degenerate)
}

/// `(x, int f sigma dmu, x in conv supp mu)` with `x_i = int x_i sigma dmu`
/// mapped through `scale`.
pub fn estimator_from_density(
    f: &Polynomial,
    sigma: &Polynomial,
    mu: &ReferenceMeasure,
    scale: &Scale,
) -> Result<(Vec<f64>, f64, Option<bool>)> {
    let mass = mu.integrate(sigma)?;
    if (mass - 1.0).abs() > NORMALIZATION_TOL {
        return Err(Error::Unnormalized(mass));
    }
    let n = mu.dim();
    let u = (0..n)
        .map(|i| mu.integrate(&(&Polynomial::var(n, i) * sigma)))
        .collect::<Result<Vec<_>>>()?;
    let cost = mu.integrate(&(f * sigma))?;
    let in_hull = mu.hull_contains(&u, 1e-9);
    Ok((scale.to_original(&u), cost, in_hull))
}

/// Gram certificate of `y^T D^2 f(x) y = w^T G w` over `w = (x^a y_i)`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SosConvexCertificate {
    /// Monomials in `(x, y)`, `2n` variables.
    pub basis: Vec<MultiIndex>,
    pub gram: Vec<Vec<f64>>,
    pub residual: f64,
    /// `sup{t : h - t |w|^2 is SoS}`; nonnegative up to tolerance.
    pub margin: f64,
}

/// `y^T D^2 f(x) y` as a polynomial in `2n` variables.
pub fn hessian_form(f: &Polynomial) -> Polynomial {
    let n = f.dim();
    let lifted = f.embed(2 * n, 0);
    let mut h = Polynomial::zero(2 * n);
    for i in 0..n {
        let di = lifted.derivative(i);
        for j in 0..n {
            let dij = di.derivative(j);
            if dij.is_zero() {
                continue;
            }
            let yy = &Polynomial::var(2 * n, n + i) * &Polynomial::var(2 * n, n + j);
            h = &h + &(&dij * &yy);
        }
    }
    h
}

/// Tests whether `y^T D^2 f(x) y` is a sum of squares of forms of degree
/// `<= d_cert` (bilinear in `y`). Returns a certificate on success.
pub fn is_sos_convex(f: &Polynomial, d_cert: usize) -> Result<(bool, Option<SosConvexCertificate>)> {
    let n = f.dim();
    if f.degree() <= 1 {
        return Ok((true, None));
    }
    let h = hessian_form(f);
    if h.is_zero() {
        return Ok((true, None));
    }
    if f.degree() % 2 == 1 || d_cert < 2 {
        return Ok((false, None));
    }
    let xdeg = (d_cert - 2) / 2;
    let mut basis = Vec::new();
    for a in MonomialBasis::new(n, xdeg).elements() {
        for i in 0..n {
            let mut e = a.exponents().to_vec();
            e.extend(std::iter::repeat_n(0, n));
            e[n + i] = 1;
            basis.push(MultiIndex::new(e));
        }
    }
    basis.sort();
    let mut trace = Polynomial::zero(2 * n);
    for w in &basis {
        trace.add_term(w.add(w), 1.0);
    }
    let mut prog = MomentProgram::new(2 * n, h.clone());
    prog.grams.push(GramSpec {
        basis: basis.clone(),
        multiplier: Polynomial::constant(2 * n, 1.0),
    });
    prog.equalities.push((trace, 1.0));
    let solved = prog.solve(&SdpOptions::default());
    let sol = &solved.sol;
    if !sol.is_optimal() {
        return Err(Error::NotOptimal {
            status: sol.status,
            level: None,
        });
    }
    let margin = sol.primal_objective;
    if margin < -SOS_CONVEX_TOL {
        return Ok((false, None));
    }
    let t = sol.eq_multipliers.first().copied().unwrap_or(0.0).max(0.0);
    let gram = sdp::extract_dual_gram(sol, 0)? + DMatrix::identity(basis.len(), basis.len()) * t;
    let gram = linalg::psd_clip(&gram);
    let mut sigma = Polynomial::zero(2 * n);
    for (i, a) in basis.iter().enumerate() {
        for (j, b) in basis.iter().enumerate() {
            if gram[(i, j)] != 0.0 {
                sigma.add_term(a.add(b), gram[(i, j)]);
            }
        }
    }
    let residual = (&h - &sigma).coeff_norm();
    if residual > CERT_RESIDUAL_TOL {
        return Ok((false, None));
    }
    let rows = gram.row_iter().map(|r| r.iter().copied().collect()).collect();
    Ok((
        true,
        Some(SosConvexCertificate {
            basis,
            gram: rows,
            residual,
            margin,
        }),
    ))
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ConvexCostReport {
    pub level: usize,
    pub m_d_star: f64,
    /// `x^(d,*)` in original coordinates.
    pub candidate: Vec<f64>,
    pub f_candidate: f64,
    /// `f(x^(d,*)) <= m_d* + 1e-6`.
    pub bound_holds: bool,
    pub feasible: bool,
    /// `f* - f(x^(d,*))` when `f*` is supplied.
    pub gap: Option<f64>,
    /// The bounded-degree representation property is assumed, not checked.
    pub assumes_bounded_degree: bool,
}

/// Solves level `d` for an SoS-convex objective and checks
/// `f(x^(d,*)) <= m_d*`.
pub fn convex_cost_bound(prob: &SemialgebraicProblem, d: usize, f_star: Option<f64>) -> Result<ConvexCostReport> {
    let f = prob.objective();
    let (convex, _) = is_sos_convex(f, f.degree().max(2))?;
    if !convex {
        return Err(Error::NotConvex);
    }
    let work = if prob.ball_radius().is_some() {
        normalize(prob)?
    } else {
        prob.clone()
    };
    let res = solve_moment_relaxation(&work, d)?;
    let candidate = res.candidate_minimizer();
    let f_candidate = f.eval(&candidate);
    Ok(ConvexCostReport {
        level: d,
        m_d_star: res.m_d_star,
        bound_holds: f_candidate <= res.m_d_star + 1e-6,
        feasible: prob.is_feasible(&candidate, 1e-6),
        gap: f_star.map(|s| s - f_candidate),
        candidate,
        f_candidate,
        assumes_bounded_degree: true,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn x(n: usize, i: usize) -> Polynomial {
        Polynomial::var(n, i)
    }

    fn m(e: &[u32]) -> MultiIndex {
        MultiIndex::new(e.to_vec())
    }

    /// Midpoint rule on a fine grid of `[-1, 1]^n`.
    fn grid_integral(n: usize, g: &dyn Fn(&[f64]) -> f64) -> f64 {
        let k = if n == 1 { 20000 } else { 400 };
        let h = 2.0 / k as f64;
        let axis: Vec<f64> = (0..k).map(|i| -1.0 + h * (i as f64 + 0.5)).collect();
        let mut acc = 0.0;
        crate::poly::for_each_grid_point(&vec![axis; n], |p| acc += g(p));
        acc * h.powi(n as i32)
    }

    #[test]
    fn box_moment_examples() {
        assert!((box_moment(&m(&[2])) - 2.0 / 3.0).abs() < 1e-15);
        assert_eq!(box_moment(&m(&[3, 2])), 0.0);
        assert!((box_moment(&m(&[2, 2])) - 4.0 / 9.0).abs() < 1e-15);
    }

    #[test]
    fn ball_moments_match_quadrature() {
        assert!((ball_moment(&m(&[0, 0])) - std::f64::consts::PI).abs() < 1e-12);
        assert!((ball_moment(&m(&[0, 0, 0])) - 4.0 / 3.0 * std::f64::consts::PI).abs() < 1e-12);
        for e in [[2u32, 0], [2, 2], [4, 0], [0, 6]] {
            let exact = ball_moment(&m(&e));
            let approx = grid_integral(2, &|p| {
                if p[0] * p[0] + p[1] * p[1] <= 1.0 {
                    p[0].powi(e[0] as i32) * p[1].powi(e[1] as i32)
                } else {
                    0.0
                }
            });
            assert!((exact - approx).abs() < 5e-3, "{e:?}: {exact} vs {approx}");
        }
    }

    #[test]
    fn linear_upper_bounds() {
        let mu = ReferenceMeasure::unit_box(1);
        let r0 = solve_upper_bound(&x(1, 0), &mu, 0).unwrap();
        assert!(r0.u_d_star.abs() < 1e-12);
        assert!((r0.sigma.constant_term() - 0.5).abs() < 1e-12);
        assert!(r0.estimator[0].abs() < 1e-12);

        // Closed-form pencil A = [[0, 2/3], [2/3, 0]], B = diag(2, 2/3):
        // det(A - t B) = 4/3 t^2 - 4/9 = 0.
        let r2 = solve_upper_bound(&x(1, 0), &mu, 2).unwrap();
        assert!((r2.u_d_star + 1.0 / 3f64.sqrt()).abs() < 1e-12);
        assert!((mu.integrate(&r2.sigma).unwrap() - 1.0).abs() < 1e-12);
        assert!(r2.estimator[0].abs() <= 1.0);
        assert!(x(1, 0).eval(&r2.estimator) <= r2.u_d_star + 1e-8);
        assert_eq!(r2.in_hull, Some(true));
    }

    #[test]
    fn constant_objective_is_exact() {
        let mu = ReferenceMeasure::unit_ball(2);
        for d in [0, 2, 4] {
            let r = solve_upper_bound(&Polynomial::constant(2, 3.5), &mu, d).unwrap();
            assert!((r.u_d_star - 3.5).abs() < 1e-10);
        }
    }

    #[test]
    fn upper_bounds_decrease_to_minimum() {
        let f = &x(2, 0).pow(2) - &(&x(2, 1) * &x(2, 0));
        let mu = ReferenceMeasure::unit_box(2);
        let vals: Vec<f64> = (0..=8)
            .step_by(2)
            .map(|d| solve_upper_bound(&f, &mu, d).unwrap().u_d_star)
            .collect();
        // f* on the box is -1/4 at (1/2, 1) and (-1/2, -1).
        for w in vals.windows(2) {
            assert!(w[1] <= w[0] + 1e-8);
        }
        assert!(vals.iter().all(|&u| u >= -0.25 - 1e-8));
    }

    #[test]
    fn singular_table_is_rejected() {
        let y = PseudoMomentSequence::from_fn(1, 6, |a| if a.degree() == 0 { 1.0 } else { 0.0 });
        let mu = ReferenceMeasure::from_table(y);
        assert!(matches!(
            solve_upper_bound(&x(1, 0), &mu, 2),
            Err(Error::NotPositiveDefinite(_))
        ));
        assert!(matches!(
            solve_upper_bound(&x(1, 0), &mu, 6),
            Err(Error::DegreeOverflow { .. })
        ));
    }

    #[test]
    fn estimator_rejects_unnormalized_density() {
        let mu = ReferenceMeasure::unit_box(1);
        let sigma = Polynomial::constant(1, 1.0);
        assert!(matches!(
            estimator_from_density(&x(1, 0), &sigma, &mu, &Scale::identity(1)),
            Err(Error::Unnormalized(_))
        ));
        let half = Polynomial::constant(1, 0.5);
        let (u, cost, hull) = estimator_from_density(&x(1, 0), &half, &mu, &Scale::identity(1)).unwrap();
        assert_eq!(u, vec![0.0]);
        assert_eq!(cost, 0.0);
        assert_eq!(hull, Some(true));
    }

    /// Smallest Hessian eigenvalue over a grid of `[-1, 1]^2`.
    fn min_hessian_eigen(f: &Polynomial) -> f64 {
        let n = f.dim();
        let d: Vec<Vec<Polynomial>> = (0..n)
            .map(|i| (0..n).map(|j| f.derivative(i).derivative(j)).collect())
            .collect();
        let axis: Vec<f64> = (0..21).map(|i| -1.0 + 0.1 * i as f64).collect();
        let mut lo = f64::INFINITY;
        crate::poly::for_each_grid_point(&vec![axis; n], |p| {
            let h = DMatrix::from_fn(n, n, |i, j| d[i][j].eval(p));
            lo = lo.min(linalg::min_eigenvalue(&h));
        });
        lo
    }

    #[test]
    fn sos_convexity_examples() {
        let sq = &x(2, 0).pow(2) + &x(2, 1).pow(2);
        let (ok, cert) = is_sos_convex(&sq, 2).unwrap();
        assert!(ok);
        assert!(cert.unwrap().residual < 1e-6);

        let quartic = x(1, 0).pow(4);
        let (ok, cert) = is_sos_convex(&quartic, 4).unwrap();
        assert!(ok);
        let cert = cert.unwrap();
        assert!(cert.residual < 1e-6);

        let biq = &x(2, 0).pow(2) * &x(2, 1).pow(2);
        assert!(min_hessian_eigen(&biq) < -0.5);
        assert!(!is_sos_convex(&biq, 4).unwrap().0);

        assert!(is_sos_convex(&x(3, 2), 2).unwrap().0);
        assert!(!is_sos_convex(&x(1, 0).pow(3), 4).unwrap().0);
    }

    #[test]
    fn hessian_form_of_quartic() {
        let h = hessian_form(&x(1, 0).pow(4));
        assert_eq!(h.coeff(&m(&[2, 2])), 12.0);
        assert_eq!(h.num_terms(), 1);
    }

    #[test]
    fn convex_bound_on_interval() {
        let shifted = &x(1, 0) - &Polynomial::constant(1, 0.3);
        let f = shifted.pow(2);
        let prob = SemialgebraicProblem::new(
            f,
            vec![&Polynomial::constant(1, 1.0) - &x(1, 0).pow(2)],
            vec![],
            None,
        )
        .unwrap();
        let rep = convex_cost_bound(&prob, 2, Some(0.0)).unwrap();
        assert!((rep.candidate[0] - 0.3).abs() < 1e-5);
        assert!(rep.bound_holds);
        assert!(rep.feasible);
        assert!(rep.gap.unwrap().abs() < 1e-6);

        let nonconvex = prob.with_objective(-&x(1, 0).pow(2)).unwrap();
        assert!(matches!(convex_cost_bound(&nonconvex, 2, None), Err(Error::NotConvex)));
    }

    #[test]
    fn unit_box_norm_square() {
        let f = &x(2, 0).pow(2) + &x(2, 1).pow(2);
        let box2 = [&Polynomial::constant(2, 1.0) - &x(2, 0).pow(2), &Polynomial::constant(2, 1.0) - &x(2, 1).pow(2)];
        let prob = SemialgebraicProblem::new(f, box2.to_vec(), vec![], Some(2f64.sqrt() + 1e-4)).unwrap();
        let rep = convex_cost_bound(&prob, 4, Some(0.0)).unwrap();
        assert!(rep.candidate.iter().all(|v| v.abs() < 1e-5));
        assert!(rep.gap.unwrap().abs() < 1e-6);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn density_properties(coeffs in prop::collection::vec(-1.0f64..1.0, 6), d in 0usize..5) {
            // Convex quadratic f = |x - c|^2 + linear part on the unit box.
            let n = 2;
            let c0 = Polynomial::constant(n, coeffs[0]);
            let c1 = Polynomial::constant(n, coeffs[1]);
            let f = &(&(&x(n, 0) - &c0).pow(2) + &(&x(n, 1) - &c1).pow(2))
                + &(&x(n, 0) * coeffs[2]);
            let mu = ReferenceMeasure::unit_box(n);
            let r = solve_upper_bound(&f, &mu, d).unwrap();
            prop_assert!((mu.integrate(&r.sigma).unwrap() - 1.0).abs() < 1e-8);
            prop_assert!((r.cost_bound - r.u_d_star).abs() < 1e-8);
            prop_assert!(f.eval(&r.estimator) <= r.cost_bound + 1e-8);
            prop_assert_eq!(r.in_hull, Some(true));
            let next = solve_upper_bound(&f, &mu, d + 2).unwrap();
            prop_assert!(next.u_d_star <= r.u_d_star + 1e-8);
        }
    }
}
