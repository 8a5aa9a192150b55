//! Semialgebraic problems, pseudo-moment sequences, moment and localizing
//! matrices.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::extraction::AtomicMeasure;
use crate::poly::{MonomialBasis, MultiIndex, Polynomial};

/// Grid resolution used when estimating constraint sup norms.
pub const NORMALIZE_GRID: usize = 64;
/// Target sup norm of a normalized constraint: one half with a 0.9 margin.
const NORMALIZE_TARGET: f64 = 0.5 * 0.9;

/// Per-axis scaling `x = factors ⊙ u` between original coordinates `x`
/// and the normalized coordinates `u` a problem is posed in.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Scale {
    pub factors: Vec<f64>,
}

impl Scale {
    pub fn identity(n: usize) -> Self {
        Scale {
            factors: vec![1.0; n],
        }
    }

    pub fn is_identity(&self) -> bool {
        self.factors.iter().all(|&s| s == 1.0)
    }

    pub fn to_original(&self, u: &[f64]) -> Vec<f64> {
        u.iter().zip(&self.factors).map(|(u, s)| u * s).collect()
    }

    pub fn to_normalized(&self, x: &[f64]) -> Vec<f64> {
        x.iter().zip(&self.factors).map(|(x, s)| x / s).collect()
    }

    /// Moments of the push-forward under `u -> factors ⊙ u`.
    pub fn moments_to_original(&self, y: &PseudoMomentSequence) -> PseudoMomentSequence {
        y.map_scaled(&self.factors)
    }

    pub fn moments_to_normalized(&self, y: &PseudoMomentSequence) -> PseudoMomentSequence {
        let inv: Vec<f64> = self.factors.iter().map(|s| 1.0 / s).collect();
        y.map_scaled(&inv)
    }
}

/// `min f(x)` subject to `p_i(x) >= 0`, `h_j(x) = 0` and, when a radius is
/// set, `R^2 - |x|^2 >= 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct SemialgebraicProblem {
    n: usize,
    objective: Polynomial,
    inequalities: Vec<Polynomial>,
    equalities: Vec<Polynomial>,
    ball_radius: Option<f64>,
    scale: Scale,
}

impl SemialgebraicProblem {
    pub fn new(
        objective: Polynomial,
        inequalities: Vec<Polynomial>,
        equalities: Vec<Polynomial>,
        ball_radius: Option<f64>,
    ) -> Result<Self> {
        let n = objective.dim();
        for p in inequalities.iter().chain(&equalities) {
            if p.dim() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: p.dim(),
                });
            }
        }
        if let Some(r) = ball_radius {
            if !(r > 0.0 && r.is_finite()) {
                return Err(Error::InvalidArgument(format!("ball radius {r} must be positive")));
            }
        }
        Ok(SemialgebraicProblem {
            n,
            objective,
            inequalities,
            equalities,
            ball_radius,
            scale: Scale::identity(n),
        })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn objective(&self) -> &Polynomial {
        &self.objective
    }

    pub fn inequalities(&self) -> &[Polynomial] {
        &self.inequalities
    }

    pub fn equalities(&self) -> &[Polynomial] {
        &self.equalities
    }

    pub fn ball_radius(&self) -> Option<f64> {
        self.ball_radius
    }

    pub fn scale(&self) -> &Scale {
        &self.scale
    }

    pub fn with_objective(&self, objective: Polynomial) -> Result<Self> {
        if objective.dim() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: objective.dim(),
            });
        }
        Ok(SemialgebraicProblem {
            objective,
            ..self.clone()
        })
    }

    /// `R^2 - |x|^2`, when a radius is set.
    pub fn ball_constraint(&self) -> Option<Polynomial> {
        self.ball_radius.map(|r| {
            let mut p = Polynomial::constant(self.n, r * r);
            for i in 0..self.n {
                p = &p - &Polynomial::var(self.n, i).pow(2);
            }
            p
        })
    }

    /// The full constraint list `p_1..p_m` describing `K`: inequalities,
    /// each equality as the pair `(h, -h)`, then the ball constraint.
    pub fn constraints(&self) -> Vec<Polynomial> {
        let mut out = self.inequalities.clone();
        for h in &self.equalities {
            out.push(h.clone());
            out.push(-h);
        }
        out.extend(self.ball_constraint());
        out
    }

    /// Inequalities followed by the ball constraint.
    pub fn psd_constraints(&self) -> Vec<Polynomial> {
        let mut out = self.inequalities.clone();
        out.extend(self.ball_constraint());
        out
    }

    pub fn max_degree(&self) -> usize {
        self.constraints()
            .iter()
            .map(Polynomial::degree)
            .chain(std::iter::once(self.objective.degree()))
            .max()
            .unwrap_or(0)
    }

    /// Smallest constraint value at `x` (equalities count as `-|h(x)|`);
    /// `x` lies in `K` when this is `>= -tol`.
    pub fn feasibility_residual(&self, x: &[f64]) -> f64 {
        let mut r = f64::INFINITY;
        for p in self.psd_constraints() {
            r = r.min(p.eval(x));
        }
        for h in &self.equalities {
            r = r.min(-h.eval(x).abs());
        }
        r
    }

    pub fn is_feasible(&self, x: &[f64], tol: f64) -> bool {
        self.feasibility_residual(x) >= -tol
    }
}

/// Rescales a problem so that Archimedean-type hypotheses hold.
///
/// Variables are divided by the ball radius `R`, so `K` lands inside the unit
/// ball. Every constraint is then multiplied by `min(1, 0.45 / s)` where `s`
/// is its grid sup-norm estimate on `[-1, 1]^n`, the objective is only
/// composed with the change of variables, and the radius becomes 1. The
/// returned problem carries the scale needed to map points and moments back.
pub fn normalize(prob: &SemialgebraicProblem) -> Result<SemialgebraicProblem> {
    let r = prob.ball_radius.ok_or(Error::MissingRadius)?;
    let s = vec![r; prob.n];
    let shrink = |p: &Polynomial| {
        let q = p.scale_variables(&s);
        let sup = q.sup_norm_box(NORMALIZE_GRID);
        if sup > NORMALIZE_TARGET {
            q.scale(NORMALIZE_TARGET / sup)
        } else {
            q
        }
    };
    let factors = prob.scale.factors.iter().map(|f| f * r).collect();
    Ok(SemialgebraicProblem {
        n: prob.n,
        objective: prob.objective.scale_variables(&s),
        inequalities: prob.inequalities.iter().map(shrink).collect(),
        equalities: prob.equalities.iter().map(shrink).collect(),
        ball_radius: Some(1.0),
        scale: Scale { factors },
    })
}

/// Values `y_alpha = L(x^alpha)` for all `|alpha| <= degree`, indexed by
/// [`MonomialBasis`] order.
#[derive(Clone, Debug, PartialEq)]
pub struct PseudoMomentSequence {
    basis: MonomialBasis,
    values: Vec<f64>,
}

impl PseudoMomentSequence {
    pub fn new(n: usize, degree: usize, values: Vec<f64>) -> Result<Self> {
        let basis = MonomialBasis::new(n, degree);
        if values.len() != basis.len() {
            return Err(Error::DimensionMismatch {
                expected: basis.len(),
                found: values.len(),
            });
        }
        Ok(PseudoMomentSequence { basis, values })
    }

    pub fn from_fn<F: FnMut(&MultiIndex) -> f64>(n: usize, degree: usize, f: F) -> Self {
        let basis = MonomialBasis::new(n, degree);
        let values = basis.elements().iter().map(f).collect();
        PseudoMomentSequence { basis, values }
    }

    pub fn dim(&self) -> usize {
        self.basis.dim()
    }

    /// Largest total degree covered.
    pub fn degree(&self) -> usize {
        self.basis.degree()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn basis(&self) -> &MonomialBasis {
        &self.basis
    }

    pub fn get(&self, alpha: &MultiIndex) -> Option<f64> {
        self.basis.index_of(alpha).map(|k| self.values[k])
    }

    /// `y_alpha`; panics when `alpha` is out of range.
    pub fn y(&self, alpha: &MultiIndex) -> f64 {
        self.get(alpha)
            .unwrap_or_else(|| panic!("moment {alpha} not covered (degree {})", self.degree()))
    }

    /// `L(p)`.
    pub fn apply(&self, p: &Polynomial) -> Result<f64> {
        if p.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: p.dim(),
            });
        }
        if p.degree() > self.degree() {
            return Err(Error::DegreeOverflow {
                needed: p.degree(),
                available: self.degree(),
            });
        }
        Ok(p.terms().map(|(a, c)| c * self.y(a)).sum())
    }

    pub fn truncate(&self, degree: usize) -> Result<Self> {
        if degree > self.degree() {
            return Err(Error::DegreeOverflow {
                needed: degree,
                available: self.degree(),
            });
        }
        let len = self.basis.prefix_len(degree);
        Ok(PseudoMomentSequence {
            basis: MonomialBasis::new(self.dim(), degree),
            values: self.values[..len].to_vec(),
        })
    }

    /// First-order moments `(y_{e_1}, ..., y_{e_n})`.
    pub fn first_moments(&self) -> Vec<f64> {
        (0..self.dim())
            .map(|i| self.y(&MultiIndex::unit(self.dim(), i)))
            .collect()
    }

    fn map_scaled(&self, s: &[f64]) -> Self {
        PseudoMomentSequence {
            basis: self.basis.clone(),
            values: self
                .basis
                .elements()
                .iter()
                .zip(&self.values)
                .map(|(a, v)| v * a.eval(s))
                .collect(),
        }
    }
}

/// `M[a, b] = y_{alpha_a + alpha_b}` over the basis of degree `order`.
#[derive(Clone, Debug, PartialEq)]
pub struct MomentMatrix {
    order: usize,
    matrix: DMatrix<f64>,
}

impl MomentMatrix {
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn into_matrix(self) -> DMatrix<f64> {
        self.matrix
    }

    pub fn min_eigenvalue(&self) -> f64 {
        crate::linalg::min_eigenvalue(&self.matrix)
    }
}

/// Moment matrix of order `d` (rows indexed by monomials of degree `<= d`).
pub fn moment_matrix(y: &PseudoMomentSequence, d: usize) -> Result<MomentMatrix> {
    localized(y, &Polynomial::constant(y.dim(), 1.0), d)
}

/// Localizing matrix of `g` within degree budget `d`: order
/// `t = floor((d - deg g) / 2)`, entries `sum_gamma g_gamma y_{a + b + gamma}`.
pub fn localizing_matrix(y: &PseudoMomentSequence, g: &Polynomial, d: usize) -> Result<MomentMatrix> {
    let dg = g.degree();
    if d < dg {
        return Err(Error::InvalidArgument(format!(
            "degree budget {d} is below the multiplier degree {dg}"
        )));
    }
    localized(y, g, (d - dg) / 2)
}

fn localized(y: &PseudoMomentSequence, g: &Polynomial, t: usize) -> Result<MomentMatrix> {
    if g.dim() != y.dim() {
        return Err(Error::DimensionMismatch {
            expected: y.dim(),
            found: g.dim(),
        });
    }
    let needed = 2 * t + g.degree();
    if needed > y.degree() {
        return Err(Error::DegreeOverflow {
            needed,
            available: y.degree(),
        });
    }
    let basis = MonomialBasis::new(y.dim(), t);
    let k = basis.len();
    let mut m = DMatrix::zeros(k, k);
    for a in 0..k {
        for b in a..k {
            let ab = basis.get(a).add(basis.get(b));
            let v: f64 = g.terms().map(|(gam, c)| c * y.y(&ab.add(gam))).sum();
            m[(a, b)] = v;
            m[(b, a)] = v;
        }
    }
    Ok(MomentMatrix { order: t, matrix: m })
}

/// `|L1 - L2|_op` on polynomials of degree `<= t`: the Euclidean norm of the
/// truncated difference, since the coefficient norm is self-dual.
pub fn op_norm_distance(y1: &PseudoMomentSequence, y2: &PseudoMomentSequence, t: usize) -> Result<f64> {
    if y1.dim() != y2.dim() {
        return Err(Error::DimensionMismatch {
            expected: y1.dim(),
            found: y2.dim(),
        });
    }
    let avail = y1.degree().min(y2.degree());
    if t > avail {
        return Err(Error::DegreeOverflow {
            needed: t,
            available: avail,
        });
    }
    let len = y1.basis().prefix_len(t);
    Ok(y1.values[..len]
        .iter()
        .zip(&y2.values[..len])
        .map(|(a, b)| (a - b).powi(2))
        .sum::<f64>()
        .sqrt())
}

/// `(|∫ h dmu|_2, ∫ |h|_2 dmu)` for a vector-valued polynomial `h`.
pub fn vector_integral_check(mu: &AtomicMeasure, h: &[Polynomial]) -> (f64, f64) {
    let mut integral = vec![0.0; h.len()];
    let mut rhs = 0.0;
    for (x, w) in mu.atoms().iter().zip(mu.weights()) {
        let vals: Vec<f64> = h.iter().map(|p| p.eval(x)).collect();
        for (acc, v) in integral.iter_mut().zip(&vals) {
            *acc += w * v;
        }
        rhs += w * vals.iter().map(|v| v * v).sum::<f64>().sqrt();
    }
    (integral.iter().map(|v| v * v).sum::<f64>().sqrt(), rhs)
}

/// On-disk problem form.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ProblemJson {
    pub n: usize,
    pub objective: Polynomial,
    #[serde(default)]
    pub constraints: Vec<Polynomial>,
    #[serde(default)]
    pub equalities: Vec<Polynomial>,
    #[serde(default)]
    pub ball_radius: Option<f64>,
}

impl TryFrom<ProblemJson> for SemialgebraicProblem {
    type Error = Error;
    fn try_from(j: ProblemJson) -> Result<Self> {
        if j.objective.dim() != j.n {
            return Err(Error::DimensionMismatch {
                expected: j.n,
                found: j.objective.dim(),
            });
        }
        SemialgebraicProblem::new(j.objective, j.constraints, j.equalities, j.ball_radius)
    }
}

impl From<&SemialgebraicProblem> for ProblemJson {
    fn from(p: &SemialgebraicProblem) -> Self {
        ProblemJson {
            n: p.n,
            objective: p.objective.clone(),
            constraints: p.inequalities.clone(),
            equalities: p.equalities.clone(),
            ball_radius: p.ball_radius,
        }
    }
}

impl SemialgebraicProblem {
    pub fn from_json(text: &str) -> Result<Self> {
        let j: ProblemJson = serde_json::from_str(text)?;
        j.try_into()
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&ProblemJson::from(self))?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn x1(n: usize) -> Polynomial {
        Polynomial::var(n, 0)
    }

    fn one_minus_x2() -> Polynomial {
        &Polynomial::constant(1, 1.0) - &x1(1).pow(2)
    }

    #[test]
    fn dirac_moment_matrix_is_rank_one() {
        let z = [0.4, -1.3];
        let mu = AtomicMeasure::dirac(z.to_vec());
        let y = mu.moments(4);
        let m = moment_matrix(&y, 2).unwrap();
        let basis = MonomialBasis::new(2, 2);
        let v: Vec<f64> = basis.elements().iter().map(|a| a.eval(&z)).collect();
        for i in 0..v.len() {
            for j in 0..v.len() {
                assert!((m.matrix()[(i, j)] - v[i] * v[j]).abs() < 1e-12);
            }
        }
        let s = crate::linalg::singular_values(m.matrix());
        assert_eq!(crate::linalg::numerical_rank(&s, 1e-9), 1);
    }

    #[test]
    fn collinear_three_atoms() {
        let mu = AtomicMeasure::uniform(vec![vec![-1.0, 0.0], vec![0.0, 0.0], vec![1.0, 0.0]]).unwrap();
        let m = moment_matrix(&mu.moments(2), 1).unwrap();
        let want = DMatrix::from_row_slice(3, 3, &[1.0, 0.0, 0.0, 0.0, 2.0 / 3.0, 0.0, 0.0, 0.0, 0.0]);
        assert!((m.matrix() - want).norm() < 1e-12);
    }

    #[test]
    fn counting_measure_on_pm_one() {
        let mu = AtomicMeasure::uniform(vec![vec![-1.0], vec![1.0]]).unwrap();
        let m = moment_matrix(&mu.moments(2), 1).unwrap();
        assert_eq!(m.matrix(), &DMatrix::identity(2, 2));
    }

    #[test]
    fn localizing_examples() {
        let y = AtomicMeasure::dirac(vec![0.5]).moments(2);
        let l = localizing_matrix(&y, &one_minus_x2(), 2).unwrap();
        assert_eq!(l.matrix().shape(), (1, 1));
        assert!((l.matrix()[(0, 0)] - 0.75).abs() < 1e-15);
        let y2 = AtomicMeasure::dirac(vec![2.0]).moments(2);
        let l2 = localizing_matrix(&y2, &one_minus_x2(), 2).unwrap();
        assert!((l2.matrix()[(0, 0)] + 3.0).abs() < 1e-15);
        assert!(l2.min_eigenvalue() < 0.0);
        // unit multiplier gives the moment matrix
        let y3 = AtomicMeasure::dirac(vec![0.3]).moments(4);
        let one = Polynomial::constant(1, 1.0);
        assert_eq!(localizing_matrix(&y3, &one, 4).unwrap(), moment_matrix(&y3, 2).unwrap());
    }

    #[test]
    fn overflow_is_reported() {
        let y = AtomicMeasure::dirac(vec![0.5]).moments(2);
        assert!(matches!(moment_matrix(&y, 2), Err(Error::DegreeOverflow { .. })));
        assert!(localizing_matrix(&y, &one_minus_x2(), 1).is_err());
    }

    #[test]
    fn normalize_examples() {
        let p = &Polynomial::constant(1, 4.0) - &x1(1).pow(2);
        let prob = SemialgebraicProblem::new(x1(1), vec![p.clone()], vec![], Some(2.0)).unwrap();
        let norm = normalize(&prob).unwrap();
        let pt = &norm.inequalities()[0];
        assert!(pt.sup_norm_box(201) <= 0.5);
        // composed constraint is 4 - 4u^2, scaled by 0.45 / (grid sup of it)
        let composed = &Polynomial::constant(1, 4.0) - &x1(1).pow(2).scale(4.0);
        let factor = 0.45 / composed.sup_norm_box(NORMALIZE_GRID);
        assert!((pt.coeff(&MultiIndex::new(vec![0])) - 4.0 * factor).abs() < 1e-12);
        assert!((pt.coeff(&MultiIndex::new(vec![2])) + 4.0 * factor).abs() < 1e-12);
        let cons = norm.constraints();
        assert_eq!(cons.len(), 2);
        assert_eq!(cons[1], one_minus_x2());
        // same sign pattern as p composed with the scale
        for k in 0..=40 {
            let u = -1.0 + k as f64 / 20.0;
            assert_eq!(pt.eval(&[u]) >= 0.0, p.eval(&[2.0 * u]) >= 0.0);
        }
        assert_eq!(norm.scale().to_original(&[0.5]), vec![1.0]);

        // normalizing again only applies factors <= 1
        let again = normalize(&norm).unwrap();
        let ratio = again.inequalities()[0].coeff(&MultiIndex::new(vec![0])) / (4.0 * factor);
        assert!(ratio <= 1.0 && ratio > 0.99);
        assert_eq!(again.constraints().len(), 2);

        let no_r = SemialgebraicProblem::new(x1(1), vec![], vec![], None).unwrap();
        assert!(matches!(normalize(&no_r), Err(Error::MissingRadius)));
    }

    #[test]
    fn ball_constraint_appended_once() {
        let prob = SemialgebraicProblem::new(x1(2), vec![x1(2)], vec![x1(2)], Some(1.5)).unwrap();
        let cons = prob.constraints();
        assert_eq!(cons.len(), 4);
        assert_eq!(cons[3].constant_term(), 2.25);
        assert_eq!(normalize(&prob).unwrap().constraints().len(), 4);
    }

    #[test]
    fn op_norm_examples() {
        let a = AtomicMeasure::dirac(vec![0.0]).moments(2);
        assert_eq!(op_norm_distance(&a, &a, 2).unwrap(), 0.0);
        let mut vals = a.values().to_vec();
        vals[1] += 0.1;
        let b = PseudoMomentSequence::new(1, 2, vals).unwrap();
        assert!((op_norm_distance(&a, &b, 1).unwrap() - 0.1).abs() < 1e-15);
        let p = AtomicMeasure::dirac(vec![0.3, 1.0]).moments(2);
        let q = AtomicMeasure::dirac(vec![-0.1, 0.7]).moments(2);
        let want = (0.4f64.powi(2) + 0.3f64.powi(2)).sqrt();
        assert!((op_norm_distance(&p, &q, 1).unwrap() - want).abs() < 1e-14);
    }

    #[test]
    fn vector_integral_examples() {
        let h = vec![x1(1)];
        let d = AtomicMeasure::dirac(vec![0.7]);
        let (l, r) = vector_integral_check(&d, &h);
        assert!((l - r).abs() < 1e-15);
        let sym = AtomicMeasure::uniform(vec![vec![-1.0], vec![1.0]]).unwrap();
        assert_eq!(vector_integral_check(&sym, &h), (0.0, 1.0));
    }

    #[test]
    fn json_round_trip() {
        let prob = SemialgebraicProblem::new(x1(2), vec![x1(2)], vec![], Some(1.0)).unwrap();
        let back = SemialgebraicProblem::from_json(&prob.to_json().unwrap()).unwrap();
        assert_eq!(prob, back);
        let bad = r#"{"n": 3, "objective": {"n": 2, "terms": []}}"#;
        assert!(SemialgebraicProblem::from_json(bad).is_err());
    }

    fn arb_measure(n: usize) -> impl Strategy<Value = AtomicMeasure> {
        prop::collection::vec((prop::collection::vec(-1.0f64..1.0, n), 0.05f64..1.0), 1..6).prop_map(|v| {
            let total: f64 = v.iter().map(|p| p.1).sum();
            AtomicMeasure::new(
                v.iter().map(|p| p.0.clone()).collect(),
                v.iter().map(|p| p.1 / total).collect(),
            )
            .unwrap()
        })
    }

    proptest! {
        #[test]
        fn measures_in_k_give_psd_matrices(mu in arb_measure(2)) {
            let y = mu.moments(4);
            prop_assert!(moment_matrix(&y, 2).unwrap().min_eigenvalue() >= -1e-8);
            let ball = &Polynomial::constant(2, 2.0) - &(&x1(2).pow(2) + &Polynomial::var(2, 1).pow(2));
            let box1 = &Polynomial::constant(2, 1.0) - &x1(2).pow(2);
            for g in [ball, box1] {
                prop_assert!(localizing_matrix(&y, &g, 4).unwrap().min_eigenvalue() >= -1e-8);
            }
        }

        #[test]
        fn hankel_structure(mu in arb_measure(2)) {
            let y = mu.moments(4);
            let m = moment_matrix(&y, 2).unwrap();
            let b = MonomialBasis::new(2, 2);
            for i in 0..b.len() { for j in 0..b.len() { for k in 0..b.len() { for l in 0..b.len() {
                if b.get(i).add(b.get(j)) == b.get(k).add(b.get(l)) {
                    prop_assert_eq!(m.matrix()[(i, j)], m.matrix()[(k, l)]);
                }
            }}}}
        }

        #[test]
        fn op_norm_is_a_metric(a in arb_measure(2), b in arb_measure(2), c in arb_measure(2)) {
            let (ya, yb, yc) = (a.moments(3), b.moments(3), c.moments(3));
            let ab = op_norm_distance(&ya, &yb, 3).unwrap();
            let ba = op_norm_distance(&yb, &ya, 3).unwrap();
            let bc = op_norm_distance(&yb, &yc, 3).unwrap();
            let ac = op_norm_distance(&ya, &yc, 3).unwrap();
            prop_assert!((ab - ba).abs() <= 1e-12);
            prop_assert!(ac <= ab + bc + 1e-12);
        }

        #[test]
        fn vector_integral_inequality(mu in arb_measure(2)) {
            let h = vec![x1(2), Polynomial::var(2, 1)];
            let (l, r) = vector_integral_check(&mu, &h);
            prop_assert!(l <= r + 1e-12);
        }
    }
}
