//! Certified coefficient bounds for real polynomials on boxes.
//!
//! For a polynomial `p(t) = Σ_{|alpha| <= k} c_alpha t^alpha` on `ℝ^m`,
//! [`bound_constant`] produces a constant `R` with
//!
//! ```text
//! max |c_alpha|  <=  R^k  sup_{|t_j| <= 1} |p(t)|.
//! ```
//!
//! The univariate bound recovers the coefficients from the values at `k+1`
//! nodes by inverting the Vandermonde matrix: each coefficient functional
//! has dual norm at most the absolute row sum of the inverse, so
//! `S_1(k) = max-row-abs-sum` works with `R_1 = S_1^{1/k}`. The
//! multivariate case composes the univariate functional variable by
//! variable on the tensor node grid, giving `S_m = S_1^m` and
//! `R_m = R_1^m`. The exact functional norm `R^k` is kept as a rational
//! (`r_pow_k`) so that soundness checks never round.
//!
//! Chebyshev polynomials are the extremal witnesses: `T_k` has sup 1 on
//! `[-1, 1]`, so any valid `R` satisfies `R^k >= max |coeff(T_k)|`.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num::{BigInt, BigRational, One, Signed, Zero};
use thiserror::Error;

use crate::coeff::{rational_to_f64, Mode, Real};
use crate::linalg::invert_exact;
use crate::multiindex::MultiIndex;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BoundsError {
    #[error("polynomial shape ({m}, {k}) does not match report ({rm}, {rk})")]
    DimensionMismatch { m: usize, k: u32, rm: usize, rk: u32 },
    #[error("rescaling factor must be positive")]
    NonpositiveEps,
    #[error("coefficient exceeds declared degree {k}")]
    DegreeTooLarge { k: u32 },
    #[error("{0}")]
    Unsupported(String),
}

/// Interpolation node family for the univariate bound.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum NodeKind {
    /// The `k+1` equally spaced points spread over `[-1, 1]`; rational, so
    /// the Vandermonde inversion is exact.
    Equispaced,
    /// Chebyshev-Gauss points; irrational, handled in float arithmetic.
    /// Tightens `R` at the price of exactness.
    Chebyshev,
}

/// A real polynomial on `ℝ^m` of declared degree `k`.
#[derive(Clone, Debug, PartialEq)]
pub struct RealPoly {
    m: usize,
    degree: u32,
    mode: Mode,
    coeffs: BTreeMap<MultiIndex, Real>,
}

impl RealPoly {
    pub fn new(
        m: usize,
        degree: u32,
        mode: Mode,
        coeffs: impl IntoIterator<Item = (MultiIndex, Real)>,
    ) -> Result<Self, BoundsError> {
        let mut map = BTreeMap::new();
        for (idx, c) in coeffs {
            if idx.len() != m {
                return Err(BoundsError::DimensionMismatch { m: idx.len(), k: degree, rm: m, rk: degree });
            }
            if idx.total_degree() > degree {
                return Err(BoundsError::DegreeTooLarge { k: degree });
            }
            if !c.is_zero() {
                map.insert(idx, c);
            }
        }
        Ok(RealPoly { m, degree, mode, coeffs: map })
    }

    pub fn zero(m: usize, degree: u32, mode: Mode) -> Self {
        RealPoly { m, degree, mode, coeffs: BTreeMap::new() }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn coeffs(&self) -> impl Iterator<Item = (&MultiIndex, &Real)> {
        self.coeffs.iter()
    }

    pub fn coefficient(&self, idx: &MultiIndex) -> Real {
        self.coeffs.get(idx).cloned().unwrap_or_else(|| Real::zero(self.mode))
    }

    pub fn max_abs_coeff(&self) -> Real {
        let mut best = Real::zero(self.mode);
        for c in self.coeffs.values() {
            let a = c.abs();
            if best.cmp_same_mode(&a).is_lt() {
                best = a;
            }
        }
        best
    }

    pub fn eval(&self, point: &[Real]) -> Real {
        assert_eq!(point.len(), self.m);
        let mut acc = Real::zero(self.mode);
        for (idx, c) in &self.coeffs {
            let mut term = c.clone();
            for (slot, &e) in idx.exponents().iter().enumerate() {
                for _ in 0..e {
                    term = term.mul(&point[slot]);
                }
            }
            acc = acc.add(&term);
        }
        acc
    }

    /// Largest |p| over a tensor grid, by partial evaluation one axis at a
    /// time (cost is grid-size bound, not grid-size times term-count).
    pub fn sup_abs_on_grid(&self, axes: &[Vec<Real>]) -> Real {
        assert_eq!(axes.len(), self.m);
        let terms: Vec<(Vec<u32>, Real)> =
            self.coeffs.iter().map(|(i, c)| (i.exponents().to_vec(), c.clone())).collect();
        sup_rec(&terms, axes, self.mode)
    }
}

fn sup_rec(terms: &[(Vec<u32>, Real)], axes: &[Vec<Real>], mode: Mode) -> Real {
    if terms.is_empty() {
        return Real::zero(mode);
    }
    if axes.is_empty() {
        let mut acc = Real::zero(mode);
        for (_, c) in terms {
            acc = acc.add(c);
        }
        return acc.abs();
    }
    let last = axes.len() - 1;
    let mut best = Real::zero(mode);
    for value in &axes[last] {
        // collapse the last variable at this grid value
        let mut reduced: BTreeMap<Vec<u32>, Real> = BTreeMap::new();
        for (exps, c) in terms {
            let e = exps[last];
            let mut term = c.clone();
            for _ in 0..e {
                term = term.mul(value);
            }
            let key = exps[..last].to_vec();
            match reduced.get_mut(&key) {
                Some(acc) => *acc = acc.add(&term),
                None => {
                    reduced.insert(key, term);
                }
            }
        }
        let reduced_terms: Vec<(Vec<u32>, Real)> = reduced.into_iter().collect();
        let sub = sup_rec(&reduced_terms, &axes[..last], mode);
        if best.cmp_same_mode(&sub).is_lt() {
            best = sub;
        }
    }
    best
}

/// The `k+1` equispaced interpolation nodes spread over `[-1, 1]`.
pub fn equispaced_nodes(k: u32) -> Vec<BigRational> {
    if k == 0 {
        return vec![BigRational::zero()];
    }
    (0..=k)
        .map(|i| {
            BigRational::new(BigInt::from(2 * i as i64 - k as i64), BigInt::from(k as i64))
        })
        .collect()
}

/// Chebyshev-Gauss points, `k+1` of them.
pub fn chebyshev_nodes(k: u32) -> Vec<f64> {
    let n = k as usize + 1;
    (0..n)
        .map(|i| (std::f64::consts::PI * (2.0 * i as f64 + 1.0) / (2.0 * n as f64)).cos())
        .collect()
}

/// Absolute row sums of the inverse Vandermonde at the given nodes: the dual
/// norms of the coefficient functionals. Row `r` controls coefficient `c_r`.
fn inverse_vandermonde_row_sums(k: u32, kind: NodeKind) -> Vec<Real> {
    match kind {
        NodeKind::Equispaced => {
            let nodes = equispaced_nodes(k);
            let n = nodes.len();
            let v: Vec<Vec<BigRational>> = nodes
                .iter()
                .map(|x| {
                    let mut row = Vec::with_capacity(n);
                    let mut p = BigRational::one();
                    for _ in 0..n {
                        row.push(p.clone());
                        p *= x;
                    }
                    row
                })
                .collect();
            let inv = invert_exact(&v).expect("distinct nodes give an invertible Vandermonde");
            (0..n)
                .map(|r| {
                    let mut acc = BigRational::zero();
                    for c in 0..n {
                        acc += inv[r][c].abs();
                    }
                    Real::Exact(acc)
                })
                .collect()
        }
        NodeKind::Chebyshev => {
            let nodes = chebyshev_nodes(k);
            let n = nodes.len();
            let v = DMatrix::from_fn(n, n, |r, c| nodes[r].powi(c as i32));
            let inv = v.try_inverse().expect("distinct nodes give an invertible Vandermonde");
            (0..n)
                .map(|r| Real::Float((0..n).map(|c| inv[(r, c)].abs()).sum::<f64>()))
                .collect()
        }
    }
}

/// How the bound was produced.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum BoundMethod {
    Interpolation,
    ChebyshevWitness,
}

/// A certified coefficient bound `max |c_alpha| <= R^k sup_box |p|`.
///
/// `r_pow_k` is the exact value of `R^k` (the composed functional norm) and
/// is what verification uses; `r` is its `k`-th root for display. The box is
/// `|t_j| <= box_halfwidth` (1 until rescaled).
#[derive(Clone, Debug)]
pub struct BoundReport {
    pub m: usize,
    pub k: u32,
    pub method: BoundMethod,
    pub node_kind: NodeKind,
    pub r: f64,
    pub r_pow_k: Real,
    pub box_halfwidth: Real,
    pub composition: String,
    pub sample_grid: String,
}

/// Build the interpolation bound for degree-`k` polynomials on `ℝ^m`.
///
/// The univariate functional norm `S_1(k)` is the max absolute row sum of
/// the inverse Vandermonde at the nodes; the multivariate norm composes it
/// per variable, `S_m = S_1^m`, which is also verified directly against the
/// tensor-grid functional `max_alpha prod_j rowsum(alpha_j)`.
pub fn bound_constant(m: usize, k: u32, kind: NodeKind) -> BoundReport {
    assert!(m >= 1, "dimension must be at least 1");
    let row_sums = inverse_vandermonde_row_sums(k, kind);
    let mode = row_sums[0].mode();
    let mut s1 = Real::one(mode);
    for rs in &row_sums {
        if s1.cmp_same_mode(rs).is_lt() {
            s1 = rs.clone();
        }
    }
    // S_m = S_1^m
    let mut s = Real::one(mode);
    for _ in 0..m {
        s = s.mul(&s1);
    }
    // tensor-grid audit: the exact dual norm of the coefficient functional
    // for alpha is prod_j rowsum(alpha_j); its max over |alpha| <= k must
    // not exceed the composed S_m
    let mut tensor_max = Real::zero(mode);
    for deg in 0..=k {
        for alpha in MultiIndex::with_total_degree(m, deg) {
            let mut norm = Real::one(mode);
            for j in 0..m {
                norm = norm.mul(&row_sums[alpha.get(j) as usize]);
            }
            if tensor_max.cmp_same_mode(&norm).is_lt() {
                tensor_max = norm;
            }
        }
    }
    assert!(
        !s.cmp_same_mode(&tensor_max).is_lt(),
        "tensor functional norm exceeds the composed bound"
    );
    let r = if k == 0 { 1.0 } else { s.to_f64().powf(1.0 / f64::from(k)) };
    BoundReport {
        m,
        k,
        method: BoundMethod::Interpolation,
        node_kind: kind,
        r: r.max(1.0),
        r_pow_k: s,
        box_halfwidth: Real::one(mode),
        composition: format!(
            "S_1(k) = max-row-abs-sum of inverse Vandermonde at {} nodes; S_m = S_1^m; \
             tensor audit max_alpha prod_j rowsum(alpha_j) = {:.6e} <= S_m",
            row_sums.len(),
            tensor_max.to_f64()
        ),
        sample_grid: format!("{}^{} tensor node grid", row_sums.len(), m),
    }
}

/// Outcome of checking a polynomial against a report on a finite grid.
/// `sup_grid <= sup_box`, so a pass is genuine; a fail on the grid is only
/// inconclusive about the true sup.
#[derive(Clone, Debug)]
pub struct VerifyOutcome {
    pub pass: bool,
    pub margin: f64,
    pub sup_grid: f64,
    pub max_coeff: f64,
}

/// Check `max |c_alpha| <= R^k sup_grid |p|` on a tensor grid of
/// `grid_density` equispaced points per axis, augmented with the (scaled)
/// interpolation nodes so that interpolation-produced reports always pass.
pub fn verify_bound(
    p: &RealPoly,
    report: &BoundReport,
    grid_density: usize,
) -> Result<VerifyOutcome, BoundsError> {
    if p.m() != report.m || p.degree() > report.k {
        return Err(BoundsError::DimensionMismatch {
            m: p.m(),
            k: p.degree(),
            rm: report.m,
            rk: report.k,
        });
    }
    let mode = p.mode();
    let h = match mode {
        Mode::Exact => report.box_halfwidth.clone(),
        Mode::Float => Real::Float(report.box_halfwidth.to_f64()),
    };
    let mut axis: Vec<Real> = Vec::new();
    match mode {
        Mode::Exact => {
            let g = grid_density.max(2) as i64;
            for i in 0..g {
                let u = BigRational::new(BigInt::from(2 * i - (g - 1)), BigInt::from(g - 1));
                axis.push(Real::Exact(u).mul(&h));
            }
            if report.node_kind == NodeKind::Equispaced {
                for x in equispaced_nodes(report.k) {
                    axis.push(Real::Exact(x).mul(&h));
                }
            }
        }
        Mode::Float => {
            let g = grid_density.max(2);
            for i in 0..g {
                let u = -1.0 + 2.0 * i as f64 / (g as f64 - 1.0);
                axis.push(Real::Float(u).mul(&h));
            }
            let nodes: Vec<f64> = match report.node_kind {
                NodeKind::Equispaced => {
                    equispaced_nodes(report.k).iter().map(rational_to_f64).collect()
                }
                NodeKind::Chebyshev => chebyshev_nodes(report.k),
            };
            for x in nodes {
                axis.push(Real::Float(x).mul(&h));
            }
        }
    }
    let axes: Vec<Vec<Real>> = vec![axis; p.m()];
    let sup = p.sup_abs_on_grid(&axes);
    let max_c = p.max_abs_coeff();
    let r_pow_k = match mode {
        Mode::Exact => report.r_pow_k.clone(),
        Mode::Float => Real::Float(report.r_pow_k.to_f64()),
    };
    let bound = r_pow_k.mul(&sup);
    let margin = bound.sub(&max_c);
    let pass = !margin.cmp_same_mode(&Real::zero(mode)).is_lt();
    Ok(VerifyOutcome {
        pass,
        margin: margin.to_f64(),
        sup_grid: sup.to_f64(),
        max_coeff: max_c.to_f64(),
    })
}

/// A Chebyshev extremal witness: `T_k` with its certified lower bound on
/// any valid `R` for degree `k`.
#[derive(Clone, Debug)]
pub struct ChebyshevWitness {
    pub poly: RealPoly,
    /// `max |coeff(T_k)|` exactly; any valid bound satisfies `R^k >=` this.
    pub lower_pow_k: Real,
    pub lower_bound: f64,
}

/// `T_k` via `T_0 = 1`, `T_1 = t`, `T_{k+1} = 2 t T_k - T_{k-1}`, with the
/// coefficient-derived lower bound (sup of `|T_k|` on `[-1, 1]` is 1).
pub fn chebyshev_witness(k: u32) -> ChebyshevWitness {
    assert!(k >= 1);
    // coefficient vectors over exact integers
    let mut prev: Vec<BigRational> = vec![BigRational::one()]; // T_0
    let mut cur: Vec<BigRational> = vec![BigRational::zero(), BigRational::one()]; // T_1
    for _ in 1..k {
        let mut next = vec![BigRational::zero(); cur.len() + 1];
        for (i, c) in cur.iter().enumerate() {
            next[i + 1] += c * BigRational::from_integer(BigInt::from(2));
        }
        for (i, c) in prev.iter().enumerate() {
            next[i] -= c;
        }
        prev = cur;
        cur = next;
    }
    let mut max_abs = BigRational::zero();
    let mut coeffs = Vec::new();
    for (i, c) in cur.iter().enumerate() {
        if !c.is_zero() {
            coeffs.push((MultiIndex::new(vec![i as u32]), Real::Exact(c.clone())));
        }
        if c.abs() > max_abs {
            max_abs = c.abs();
        }
    }
    let poly = RealPoly::new(1, k, Mode::Exact, coeffs).expect("witness shape");
    let lower = rational_to_f64(&max_abs).powf(1.0 / f64::from(k));
    ChebyshevWitness { poly, lower_pow_k: Real::Exact(max_abs), lower_bound: lower }
}

/// Adapt a bound to the box `|t_j| <= eps`: substituting `t -> eps t`
/// scales `c_alpha` by `eps^{|alpha|}`, so
/// `R_eps = max(R / eps, R)` (worst case `|alpha| = k`, lower orders
/// absorbed) keeps the inequality valid for every degree.
pub fn rescale_bound(report: &BoundReport, eps: &Real) -> Result<BoundReport, BoundsError> {
    if eps.cmp_same_mode(&Real::zero(eps.mode())).is_le() {
        return Err(BoundsError::NonpositiveEps);
    }
    let mode = report.r_pow_k.mode();
    let eps_m = match (mode, eps) {
        (Mode::Exact, Real::Exact(_)) => eps.clone(),
        (Mode::Float, _) => Real::Float(eps.to_f64()),
        (Mode::Exact, Real::Float(_)) => {
            return Err(BoundsError::Unsupported(
                "exact report needs an exact rescaling factor".into(),
            ))
        }
    };
    // eps^{-k}, exact within mode
    let mut eps_pow_k = Real::one(mode);
    for _ in 0..report.k {
        eps_pow_k = eps_pow_k.mul(&eps_m);
    }
    let inv = Real::one(mode).div(&eps_pow_k);
    let factor = if inv.cmp_same_mode(&Real::one(mode)).is_lt() { Real::one(mode) } else { inv };
    let r_pow_k = report.r_pow_k.mul(&factor);
    let r = if report.k == 0 { 1.0 } else { r_pow_k.to_f64().powf(1.0 / f64::from(report.k)) };
    Ok(BoundReport {
        m: report.m,
        k: report.k,
        method: report.method,
        node_kind: report.node_kind,
        r,
        r_pow_k,
        box_halfwidth: report.box_halfwidth.mul(&eps_m),
        composition: format!("{}; rescaled by eps = {:.6e}", report.composition, eps.to_f64()),
        sample_grid: report.sample_grid.clone(),
    })
}
