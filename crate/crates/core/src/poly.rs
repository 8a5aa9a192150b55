//! Sparse multivariate polynomials over a graded-lexicographic monomial index.
//!
//! Every matrix in the crate whose rows are indexed by monomials uses the
//! order of [`MonomialBasis`]: first by total degree, then lexicographically
//! with larger exponents of earlier variables first, i.e. for two variables
//! `1, x1, x2, x1^2, x1 x2, x2^2, ...`.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Exponent vector `alpha` of the monomial `x^alpha`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn new(exponents: Vec<u32>) -> Self {
        MultiIndex(exponents)
    }

    pub fn zeros(n: usize) -> Self {
        MultiIndex(vec![0; n])
    }

    /// The exponent of the coordinate monomial `x_i`.
    pub fn unit(n: usize, i: usize) -> Self {
        let mut e = vec![0; n];
        e[i] = 1;
        MultiIndex(e)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> usize {
        self.0.iter().map(|&e| e as usize).sum()
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    /// `alpha + beta`; both must have the same dimension.
    pub fn add(&self, other: &MultiIndex) -> MultiIndex {
        debug_assert_eq!(self.dim(), other.dim());
        MultiIndex(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `x^alpha` evaluated at `x`.
    pub fn eval(&self, x: &[f64]) -> f64 {
        self.0
            .iter()
            .zip(x)
            .filter(|(&e, _)| e > 0)
            .map(|(&e, &xi)| xi.powi(e as i32))
            .product()
    }
}

impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| {
            for (a, b) in self.0.iter().zip(&other.0) {
                if a != b {
                    return b.cmp(a);
                }
            }
            self.0.len().cmp(&other.0.len())
        })
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, ")")
    }
}

/// `r(n, d) = C(n + d, d)`, the dimension of the space of polynomials of
/// degree at most `d` in `n` variables.
pub fn basis_size(n: usize, d: usize) -> usize {
    let mut acc: u128 = 1;
    for k in 1..=d as u128 {
        acc = acc * (n as u128 + k) / k;
    }
    acc as usize
}

/// All monomials of total degree at most `degree`, in graded-lex order.
#[derive(Clone, Debug, PartialEq)]
pub struct MonomialBasis {
    n: usize,
    degree: usize,
    elems: Vec<MultiIndex>,
    index: HashMap<MultiIndex, usize>,
}

impl MonomialBasis {
    pub fn new(n: usize, degree: usize) -> Self {
        let mut elems = Vec::with_capacity(basis_size(n, degree));
        for k in 0..=degree {
            compositions(n, k, &mut Vec::with_capacity(n), &mut elems);
        }
        let index = elems
            .iter()
            .enumerate()
            .map(|(i, a)| (a.clone(), i))
            .collect();
        MonomialBasis {
            n,
            degree,
            elems,
            index,
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn elements(&self) -> &[MultiIndex] {
        &self.elems
    }

    pub fn get(&self, k: usize) -> &MultiIndex {
        &self.elems[k]
    }

    pub fn index_of(&self, alpha: &MultiIndex) -> Option<usize> {
        self.index.get(alpha).copied()
    }

    /// The vector `v(x) = (x^alpha)_alpha` of all basis monomials at `x`.
    pub fn eval(&self, x: &[f64]) -> Vec<f64> {
        self.elems.iter().map(|a| a.eval(x)).collect()
    }

    /// Number of basis elements of degree at most `d` (a prefix of the basis).
    pub fn prefix_len(&self, d: usize) -> usize {
        basis_size(self.n, d.min(self.degree))
    }
}


// Exponent vectors of length `n` summing to `total`, first coordinate descending.
fn compositions(n: usize, total: usize, prefix: &mut Vec<u32>, out: &mut Vec<MultiIndex>) {
    if prefix.len() + 1 == n {
        prefix.push(total as u32);
        out.push(MultiIndex(prefix.clone()));
        prefix.pop();
        return;
    }
    if n == 0 {
        if total == 0 {
            out.push(MultiIndex(Vec::new()));
        }
        return;
    }
    for first in (0..=total).rev() {
        prefix.push(first as u32);
        compositions(n, total - first, prefix, out);
        prefix.pop();
    }
}

/// Real polynomial in `n` variables, stored as a map from exponent to
/// coefficient. Zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "PolynomialJson", into = "PolynomialJson")]
pub struct Polynomial {
    n: usize,
    terms: BTreeMap<MultiIndex, f64>,
}

impl Polynomial {
    pub fn zero(n: usize) -> Self {
        Polynomial {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(n: usize, c: f64) -> Self {
        Self::monomial(MultiIndex::zeros(n), c)
    }

    /// The coordinate polynomial `x_i`.
    pub fn var(n: usize, i: usize) -> Self {
        Self::monomial(MultiIndex::unit(n, i), 1.0)
    }

    pub fn monomial(alpha: MultiIndex, c: f64) -> Self {
        let n = alpha.dim();
        let mut terms = BTreeMap::new();
        if c != 0.0 {
            terms.insert(alpha, c);
        }
        Polynomial { n, terms }
    }

    /// Builds a polynomial from `(exponents, coefficient)` pairs; repeated
    /// exponents are summed.
    pub fn from_terms<I>(n: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<u32>, f64)>,
    {
        let mut p = Polynomial::zero(n);
        for (alpha, c) in terms {
            if alpha.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: alpha.len(),
                });
            }
            p.add_term(MultiIndex(alpha), c);
        }
        Ok(p)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Largest total degree among stored terms; the zero polynomial has degree 0.
    pub fn degree(&self) -> usize {
        self.terms.keys().map(MultiIndex::degree).max().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, f64)> + '_ {
        self.terms.iter().map(|(a, &c)| (a, c))
    }

    pub fn coeff(&self, alpha: &MultiIndex) -> f64 {
        self.terms.get(alpha).copied().unwrap_or(0.0)
    }

    pub fn constant_term(&self) -> f64 {
        self.coeff(&MultiIndex::zeros(self.n))
    }

    pub(crate) fn add_term(&mut self, alpha: MultiIndex, c: f64) {
        if c == 0.0 {
            return;
        }
        let entry = self.terms.entry(alpha);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let v = *o.get() + c;
                if v == 0.0 {
                    o.remove();
                } else {
                    *o.get_mut() = v;
                }
            }
        }
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        debug_assert_eq!(x.len(), self.n);
        self.terms.iter().map(|(a, c)| c * a.eval(x)).sum()
    }

    /// Euclidean norm of the coefficient vector.
    pub fn coeff_norm(&self) -> f64 {
        self.terms.values().map(|c| c * c).sum::<f64>().sqrt()
    }

    pub fn scale(&self, s: f64) -> Polynomial {
        if s == 0.0 {
            return Polynomial::zero(self.n);
        }
        Polynomial {
            n: self.n,
            terms: self.terms.iter().map(|(a, c)| (a.clone(), c * s)).collect(),
        }
    }

    pub fn try_add(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_dim(other)?;
        let mut out = self.clone();
        for (a, &c) in &other.terms {
            out.add_term(a.clone(), c);
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_dim(other)?;
        let mut out = self.clone();
        for (a, &c) in &other.terms {
            out.add_term(a.clone(), -c);
        }
        Ok(out)
    }

    pub fn try_mul(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_dim(other)?;
        let mut out = Polynomial::zero(self.n);
        for (a, &ca) in &self.terms {
            for (b, &cb) in &other.terms {
                out.add_term(a.add(b), ca * cb);
            }
        }
        Ok(out)
    }

    pub fn pow(&self, k: u32) -> Polynomial {
        let mut acc = Polynomial::constant(self.n, 1.0);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Partial derivative with respect to `x_i`.
    pub fn derivative(&self, i: usize) -> Polynomial {
        let mut out = Polynomial::zero(self.n);
        for (a, &c) in &self.terms {
            let e = a.0[i];
            if e > 0 {
                let mut b = a.0.clone();
                b[i] -= 1;
                out.add_term(MultiIndex(b), c * e as f64);
            }
        }
        out
    }

    /// The polynomial `u -> p(s_1 u_1, ..., s_n u_n)`.
    pub fn scale_variables(&self, s: &[f64]) -> Polynomial {
        assert_eq!(s.len(), self.n, "scale vector has wrong length");
        let mut out = Polynomial::zero(self.n);
        for (a, &c) in &self.terms {
            out.add_term(a.clone(), c * a.eval(s));
        }
        out
    }

    /// Re-embeds the polynomial into `n_new >= n` variables, placing its
    /// variables at positions `offset..offset + n`.
    pub fn embed(&self, n_new: usize, offset: usize) -> Polynomial {
        assert!(offset + self.n <= n_new);
        let mut out = Polynomial::zero(n_new);
        for (a, &c) in &self.terms {
            let mut e = vec![0; n_new];
            e[offset..offset + self.n].copy_from_slice(&a.0);
            out.add_term(MultiIndex(e), c);
        }
        out
    }

    /// Drops terms with `|c| <= tol`.
    pub fn prune(&self, tol: f64) -> Polynomial {
        Polynomial {
            n: self.n,
            terms: self
                .terms
                .iter()
                .filter(|(_, c)| c.abs() > tol)
                .map(|(a, &c)| (a.clone(), c))
                .collect(),
        }
    }

    /// Estimate of `max |p(x)|` over `[-1, 1]^n` using `grid_per_axis` equally
    /// spaced points per axis (endpoints included).
    ///
    /// This is a lower estimate of the true sup norm. Refining the grid from
    /// `g` to `2g - 1` points keeps all old points, so the estimate never
    /// decreases along such refinements. When the full grid would exceed
    /// `2^24` points (or `n > 6`) the estimate instead uses `10^5`
    /// deterministic pseudo-random samples plus the corners.
    pub fn sup_norm_box(&self, grid_per_axis: usize) -> f64 {
        assert!(grid_per_axis >= 2, "grid_per_axis must be at least 2");
        if self.is_zero() {
            return 0.0;
        }
        if self.n == 0 {
            return self.constant_term().abs();
        }
        let total = (grid_per_axis as f64).powi(self.n as i32);
        if self.n <= 6 && total <= (1u64 << 24) as f64 {
            let axis: Vec<f64> = (0..grid_per_axis)
                .map(|k| -1.0 + 2.0 * k as f64 / (grid_per_axis - 1) as f64)
                .collect();
            let mut best = 0.0f64;
            for_each_grid_point(&vec![axis; self.n], |x| {
                best = best.max(self.eval(x).abs());
            });
            best
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
            let mut best = 0.0f64;
            let mut x = vec![0.0; self.n];
            for _ in 0..100_000 {
                for xi in x.iter_mut() {
                    *xi = rng.random_range(-1.0..=1.0);
                }
                best = best.max(self.eval(&x).abs());
            }
            for_each_grid_point(&vec![vec![-1.0, 1.0]; self.n], |x| {
                best = best.max(self.eval(x).abs());
            });
            best
        }
    }

    fn check_dim(&self, other: &Polynomial) -> Result<()> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: other.n,
            });
        }
        Ok(())
    }
}

/// Calls `f` on every point of the tensor grid `axes[0] x axes[1] x ...`,
/// last coordinate varying fastest.
pub fn for_each_grid_point<F: FnMut(&[f64])>(axes: &[Vec<f64>], mut f: F) {
    if axes.iter().any(Vec::is_empty) {
        return;
    }
    let n = axes.len();
    let mut idx = vec![0usize; n];
    let mut x: Vec<f64> = axes.iter().map(|a| a[0]).collect();
    loop {
        f(&x);
        let mut k = n;
        loop {
            if k == 0 {
                return;
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < axes[k].len() {
                x[k] = axes[k][idx[k]];
                break;
            }
            idx[k] = 0;
            x[k] = axes[k][0];
        }
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (a, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{c}")?;
            for (v, &e) in a.0.iter().enumerate() {
                match e {
                    0 => {}
                    1 => write!(f, "*x{}", v + 1)?,
                    _ => write!(f, "*x{}^{e}", v + 1)?,
                }
            }
        }
        Ok(())
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        self.try_add(rhs).expect("polynomial dimension mismatch")
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self.try_sub(rhs).expect("polynomial dimension mismatch")
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        self.try_mul(rhs).expect("polynomial dimension mismatch")
    }
}

impl Mul<f64> for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: f64) -> Polynomial {
        self.scale(rhs)
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        self.scale(-1.0)
    }
}

impl Add for Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: Polynomial) -> Polynomial {
        &self + &rhs
    }
}

impl Sub for Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: Polynomial) -> Polynomial {
        &self - &rhs
    }
}

impl Mul for Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: Polynomial) -> Polynomial {
        &self * &rhs
    }
}

impl Neg for Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        self.scale(-1.0)
    }
}

/// On-disk form: `{"n": 2, "terms": [{"alpha": [1, 0], "c": -1.0}, ...]}`.
#[derive(Serialize, Deserialize)]
struct PolynomialJson {
    n: usize,
    terms: Vec<TermJson>,
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    alpha: Vec<u32>,
    c: f64,
}

impl TryFrom<PolynomialJson> for Polynomial {
    type Error = Error;
    fn try_from(j: PolynomialJson) -> Result<Self> {
        Polynomial::from_terms(j.n, j.terms.into_iter().map(|t| (t.alpha, t.c)))
    }
}

impl From<Polynomial> for PolynomialJson {
    fn from(p: Polynomial) -> Self {
        PolynomialJson {
            n: p.n,
            terms: p
                .terms
                .into_iter()
                .map(|(a, c)| TermJson { alpha: a.0, c })
                .collect(),
        }
    }
}
