//! Desk-scale edge-of-the-wedge pipeline.
//!
//! A wedge `W = E + iC` is an open edge box `E ⊂ ℝⁿ` plus a symmetric cone
//! `C = -C` given by finitely many generators. A function holomorphic on
//! both halves of the wedge whose boundary values on `E` agree extends
//! holomorphically across the edge; the extension is produced here by
//! lifting to a blow-up chart, where the two wedge halves become the two
//! sides `{y > 0}`, `{y < 0}` of the hypersurface `{y = 0}`, gluing, and
//! running the reconstruction engine.
//!
//! Two modes:
//! - analytic: the input is an exact polynomial germ; every step is exact
//!   rational arithmetic and recovery is exact equality.
//! - numeric: the input is sampled in floats (e.g. a rational function);
//!   boundary limits use Richardson extrapolation, gluing fits a polynomial
//!   germ by least squares, and tolerances `tau_bv`, `tau_glue` apply.
//!
//! The cone is restricted to be simplicial: the positive half consists of
//! exactly `n` independent generators, and membership means a nonnegative
//! combination (of one sign) of them. Chart directions are interior blends
//! of the generators so that small chart balls blow down into the open
//! wedge.

use nalgebra::{Complex, DMatrix, DVector};
use num::{BigRational, Signed};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::coeff::{Coefficient, Mode, Real};
use crate::engine::{hypocomplex_reconstruct, EngineError};
use crate::geometry::GeometryError;
use crate::linalg::{invert_exact, solve_exact};
use crate::multiindex::MultiIndex;
use crate::quadrature::{integrate_1d, integrate_2d, BumpSpec};
use crate::series::{ambient_vars, chart_vars, Series, SeriesError};

type C64 = Complex<f64>;

#[derive(Debug, Error)]
pub enum WedgeError {
    #[error("invalid wedge specification: {0}")]
    BadSpec(String),
    #[error("sample point {index} lies outside the wedge")]
    OutsideWedge { index: usize },
    #[error("boundary limit diverges along direction {direction} at grid point {point}")]
    LimitDiverged { direction: usize, point: usize },
    #[error("boundary limits differ across directions (gap {gap:.3e} > tolerance {tol:.3e})")]
    DirectionMismatch { gap: f64, tol: f64 },
    #[error("weak CR residual does not shrink under refinement: {residuals:?}")]
    QuadratureUnderResolved { residuals: Vec<f64> },
    #[error("chart ball escapes the wedge (radius too large)")]
    BallTooLarge,
    #[error("boundary values of f+ and f- disagree (gap {gap:.3e} > tolerance {tol:.3e})")]
    BoundaryMismatch { gap: f64, tol: f64 },
    #[error("least-squares fit underdetermined: {samples} samples for {unknowns} unknowns")]
    FitUnderdetermined { samples: usize, unknowns: usize },
    #[error("chart germs disagree on overlap (gap {gap:.3e} > tolerance {tol:.3e})")]
    OverlapDisagreement { gap: f64, tol: f64 },
    #[error("evaluation failed: {0}")]
    EvalFailed(String),
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Series(#[from] SeriesError),
}

/// Which half of the symmetric cone an imaginary part lies in.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ConeSide {
    Plus,
    Minus,
}

/// Tunables of the pipeline; all tolerances configurable, defaults match
/// the reference configuration.
#[derive(Clone, Debug)]
pub struct WedgeConfig {
    pub tau_bv: f64,
    pub tau_glue: f64,
    pub quad_order: usize,
    pub eps_levels: usize,
    pub grid_per_axis: usize,
    pub fit_degree: u32,
    /// Displacement scale of the fitted germ coordinates.
    pub fit_scale: f64,
    pub seed: u64,
}

impl Default for WedgeConfig {
    fn default() -> Self {
        WedgeConfig {
            tau_bv: 1e-8,
            tau_glue: 1e-8,
            quad_order: 64,
            eps_levels: 6,
            grid_per_axis: 9,
            fit_degree: 12,
            fit_scale: 0.2,
            seed: 0,
        }
    }
}

/// The wedge: edge box, symmetric simplicial cone, localization radius.
#[derive(Clone, Debug)]
pub struct WedgeSpec {
    n: usize,
    edge: Vec<(Real, Real)>,
    generators: Vec<Vec<Real>>,
    positive: Vec<usize>,
    radius: Real,
    mode: Mode,
}

impl WedgeSpec {
    pub fn new(
        n: usize,
        edge: Vec<(Real, Real)>,
        generators: Vec<Vec<Real>>,
        radius: Real,
    ) -> Result<Self, WedgeError> {
        if n == 0 || edge.len() != n {
            return Err(WedgeError::BadSpec(format!(
                "edge has {} intervals for n = {n}",
                edge.len()
            )));
        }
        let mode = radius.mode();
        for (lo, hi) in &edge {
            if lo.mode() != mode || hi.mode() != mode {
                return Err(WedgeError::BadSpec("mixed arithmetic modes".into()));
            }
            if !lo.cmp_same_mode(hi).is_lt() {
                return Err(WedgeError::BadSpec("edge interval is empty".into()));
            }
        }
        if radius.cmp_same_mode(&Real::zero(mode)).is_le() {
            return Err(WedgeError::BadSpec("radius must be positive".into()));
        }
        if generators.is_empty() {
            return Err(WedgeError::BadSpec("no cone generators".into()));
        }
        for g in &generators {
            if g.len() != n {
                return Err(WedgeError::BadSpec("generator of wrong dimension".into()));
            }
            if g.iter().any(|x| x.mode() != mode) {
                return Err(WedgeError::BadSpec("mixed arithmetic modes".into()));
            }
            if g.iter().all(|x| x.is_zero()) {
                return Err(WedgeError::BadSpec("zero generator".into()));
            }
        }
        // C = -C: every generator must have its negation in the list
        for g in &generators {
            let neg: Vec<Real> = g.iter().map(|x| x.neg()).collect();
            if !generators.iter().any(|h| h == &neg) {
                return Err(WedgeError::BadSpec(
                    "cone is not symmetric: a generator lacks its negation".into(),
                ));
            }
        }
        // positive half: first nonzero entry positive
        let positive: Vec<usize> = generators
            .iter()
            .enumerate()
            .filter(|(_, g)| {
                g.iter()
                    .find(|x| !x.is_zero())
                    .map(|x| x.cmp_same_mode(&Real::zero(mode)).is_gt())
                    .unwrap_or(false)
            })
            .map(|(i, _)| i)
            .collect();
        if positive.len() != n {
            return Err(WedgeError::BadSpec(format!(
                "need exactly n = {n} positive-half generators (simplicial cone), found {}",
                positive.len()
            )));
        }
        let spec = WedgeSpec { n, edge, generators, positive, radius, mode };
        // independence: the positive generators must form a basis
        if spec.solve_cone_coords_f64(&vec![1e-3; n]).is_none() {
            return Err(WedgeError::BadSpec("positive generators are dependent".into()));
        }
        Ok(spec)
    }

    /// Parse the JSON form `{n, edge: [[lo,hi],..], cone_generators: [[..],..],
    /// radius}`; exact mode expects rational strings, float mode numbers.
    pub fn from_json(text: &str, mode: Mode) -> Result<Self, WedgeError> {
        let doc: serde_json::Value =
            serde_json::from_str(text).map_err(|e| WedgeError::BadSpec(e.to_string()))?;
        let real_of = |v: &serde_json::Value| -> Result<Real, WedgeError> {
            match (mode, v) {
                (Mode::Exact, serde_json::Value::String(s)) => crate::coeff::parse_rational(s)
                    .map(Real::Exact)
                    .map_err(WedgeError::BadSpec),
                (Mode::Float, serde_json::Value::Number(x)) => x
                    .as_f64()
                    .map(Real::Float)
                    .ok_or_else(|| WedgeError::BadSpec("bad number".into())),
                // integers are fine in exact mode too
                (Mode::Exact, serde_json::Value::Number(x)) => x
                    .as_i64()
                    .map(|k| Real::from_int(Mode::Exact, k))
                    .ok_or_else(|| WedgeError::BadSpec("exact mode needs rational strings".into())),
                _ => Err(WedgeError::BadSpec(format!("bad scalar {v}"))),
            }
        };
        let n = doc
            .get("n")
            .and_then(|v| v.as_u64())
            .ok_or_else(|| WedgeError::BadSpec("missing n".into()))? as usize;
        let edge = doc
            .get("edge")
            .and_then(|v| v.as_array())
            .ok_or_else(|| WedgeError::BadSpec("missing edge".into()))?
            .iter()
            .map(|pair| {
                let arr = pair
                    .as_array()
                    .filter(|a| a.len() == 2)
                    .ok_or_else(|| WedgeError::BadSpec("edge entries are [lo, hi]".into()))?;
                Ok((real_of(&arr[0])?, real_of(&arr[1])?))
            })
            .collect::<Result<Vec<_>, WedgeError>>()?;
        let generators = doc
            .get("cone_generators")
            .and_then(|v| v.as_array())
            .ok_or_else(|| WedgeError::BadSpec("missing cone_generators".into()))?
            .iter()
            .map(|gen| {
                gen.as_array()
                    .ok_or_else(|| WedgeError::BadSpec("generator must be an array".into()))?
                    .iter()
                    .map(real_of)
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Vec<_>, WedgeError>>()?;
        let radius = real_of(
            doc.get("radius").ok_or_else(|| WedgeError::BadSpec("missing radius".into()))?,
        )?;
        WedgeSpec::new(n, edge, generators, radius)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn radius(&self) -> &Real {
        &self.radius
    }

    pub fn edge(&self) -> &[(Real, Real)] {
        &self.edge
    }

    pub fn generators(&self) -> &[Vec<Real>] {
        &self.generators
    }

    pub fn positive_generators(&self) -> Vec<&Vec<Real>> {
        self.positive.iter().map(|&i| &self.generators[i]).collect()
    }

    pub fn edge_center(&self) -> Vec<Real> {
        self.edge
            .iter()
            .map(|(lo, hi)| {
                lo.add(hi).mul(&Real::from_ratio(self.mode, 1, 2))
            })
            .collect()
    }

    fn solve_cone_coords_f64(&self, y: &[f64]) -> Option<Vec<f64>> {
        let n = self.n;
        let gens = self.positive_generators();
        let a = DMatrix::from_fn(n, n, |r, c| gens[c][r].to_f64());
        let b = DVector::from_fn(n, |r, _| y[r]);
        a.lu().solve(&b).map(|x| x.iter().cloned().collect())
    }

    /// Which half-cone `y` lies in: a nonnegative combination of the
    /// positive generators is `Plus`, of their negatives `Minus`. `None`
    /// for zero or mixed-sign coordinates.
    pub fn cone_side(&self, y: &[Real]) -> Option<ConeSide> {
        if y.iter().all(|v| v.is_zero()) {
            return None;
        }
        if self.mode == Mode::Exact && y.iter().all(|v| v.mode() == Mode::Exact) {
            let gens = self.positive_generators();
            let a: Vec<Vec<BigRational>> = (0..self.n)
                .map(|r| {
                    gens.iter()
                        .map(|g| g[r].as_exact().unwrap().clone())
                        .collect()
                })
                .collect();
            let b: Vec<BigRational> =
                y.iter().map(|v| v.as_exact().unwrap().clone()).collect();
            let lambda = solve_exact(&a, &b)?;
            if lambda.iter().all(|l| !l.is_negative()) {
                return Some(ConeSide::Plus);
            }
            if lambda.iter().all(|l| !l.is_positive()) {
                return Some(ConeSide::Minus);
            }
            None
        } else {
            let yf: Vec<f64> = y.iter().map(|v| v.to_f64()).collect();
            let lambda = self.solve_cone_coords_f64(&yf)?;
            let scale = lambda.iter().map(|l| l.abs()).fold(0.0, f64::max).max(1e-300);
            let tol = 1e-12 * scale;
            if lambda.iter().all(|&l| l >= -tol) {
                Some(ConeSide::Plus)
            } else if lambda.iter().all(|&l| l <= tol) {
                Some(ConeSide::Minus)
            } else {
                None
            }
        }
    }

    pub fn edge_contains(&self, x: &[Real]) -> bool {
        x.len() == self.n
            && x.iter().zip(&self.edge).all(|(xi, (lo, hi))| {
                if xi.mode() == lo.mode() {
                    lo.cmp_same_mode(xi).is_lt() && xi.cmp_same_mode(hi).is_lt()
                } else {
                    // mixed probes (float checks against exact specs) fall
                    // back to doubles
                    lo.to_f64() < xi.to_f64() && xi.to_f64() < hi.to_f64()
                }
            })
    }

    /// Membership `Re ∈ E` (open) and `Im ∈ C`.
    pub fn wedge_contains(&self, point: &[Coefficient]) -> bool {
        if point.len() != self.n {
            return false;
        }
        let re: Vec<Real> = point.iter().map(|c| c.re()).collect();
        let im: Vec<Real> = point.iter().map(|c| c.im()).collect();
        self.edge_contains(&re) && self.cone_side(&im).is_some()
    }

    /// All probe directions for the boundary hypothesis: every generator
    /// plus, per half, the pairwise midpoints of the half's generators.
    pub fn probe_directions(&self) -> Vec<Vec<Real>> {
        let mut dirs: Vec<Vec<Real>> = self.generators.clone();
        let pos = self.positive_generators();
        for i in 0..pos.len() {
            for j in (i + 1)..pos.len() {
                let mid: Vec<Real> =
                    pos[i].iter().zip(pos[j]).map(|(a, b)| a.add(b)).collect();
                let neg: Vec<Real> = mid.iter().map(|x| x.neg()).collect();
                dirs.push(mid);
                dirs.push(neg);
            }
        }
        dirs
    }
}

/// A sampleable function on the wedge: an exact polynomial germ (analytic
/// mode), a rational function given by two polynomial series, or the
/// constructed direction-dependent counterexample assigning one constant
/// per cone generator.
#[derive(Clone, Debug)]
pub enum SampledFunction {
    Germ(Series),
    Rational { num: Series, den: Series },
    SectorConstants(Vec<Coefficient>),
}

impl SampledFunction {
    pub fn is_analytic(&self) -> bool {
        matches!(self, SampledFunction::Germ(s) if s.mode() == Mode::Exact)
    }

    /// Evaluate at an ambient point. Exact series evaluated at float points
    /// are converted to float mode first (never the other way around).
    pub fn eval(&self, w: &WedgeSpec, point: &[Coefficient]) -> Result<Coefficient, WedgeError> {
        let pt_mode =
            if point.iter().any(|c| c.mode() == Mode::Float) { Mode::Float } else { Mode::Exact };
        let adapt = |s: &Series| -> Series {
            if s.mode() == Mode::Exact && pt_mode == Mode::Float {
                s.to_float()
            } else {
                s.clone()
            }
        };
        match self {
            SampledFunction::Germ(h) => Ok(adapt(h).eval(point)?),
            SampledFunction::Rational { num, den } => {
                let n = adapt(num).eval(point)?;
                let d = adapt(den).eval(point)?;
                if d.is_zero() {
                    return Err(WedgeError::EvalFailed("denominator vanishes".into()));
                }
                Ok(n.div(&d))
            }
            SampledFunction::SectorConstants(values) => {
                if values.len() != w.generators().len() {
                    return Err(WedgeError::EvalFailed(format!(
                        "{} sector values for {} generators",
                        values.len(),
                        w.generators().len()
                    )));
                }
                let y: Vec<f64> = point.iter().map(|c| c.im().to_f64()).collect();
                let ynorm = y.iter().map(|v| v * v).sum::<f64>().sqrt();
                if ynorm == 0.0 {
                    return Err(WedgeError::EvalFailed("sector undefined on the edge".into()));
                }
                let mut best = 0usize;
                let mut best_cos = f64::NEG_INFINITY;
                for (i, g) in w.generators().iter().enumerate() {
                    let gf: Vec<f64> = g.iter().map(|v| v.to_f64()).collect();
                    let gnorm = gf.iter().map(|v| v * v).sum::<f64>().sqrt();
                    let dot: f64 = gf.iter().zip(&y).map(|(a, b)| a * b).sum();
                    let cos = dot / (gnorm * ynorm);
                    if cos > best_cos {
                        best_cos = cos;
                        best = i;
                    }
                }
                Ok(values[best].clone())
            }
        }
    }
}

/// Evaluate on a grid of wedge points, rejecting points outside the wedge.
pub fn sample_wedge(
    f: &SampledFunction,
    w: &WedgeSpec,
    grid: &[Vec<Coefficient>],
) -> Result<Vec<Coefficient>, WedgeError> {
    grid.iter()
        .enumerate()
        .map(|(index, p)| {
            if !w.wedge_contains(p) {
                return Err(WedgeError::OutsideWedge { index });
            }
            f.eval(w, p)
        })
        .collect()
}

/// A strictly decreasing approach sequence for boundary limits.
#[derive(Clone, Debug)]
pub struct EpsSequence(pub Vec<f64>);

impl EpsSequence {
    /// Geometric sequence `radius/16 * 2^{-k}`, `levels` values. The small
    /// head keeps the O(eps^3) tail of the two-stage Richardson
    /// extrapolation below the boundary tolerance.
    pub fn geometric(radius: f64, levels: usize) -> Self {
        let eps0 = radius / 16.0;
        EpsSequence((0..levels.max(3)).map(|k| eps0 * 0.5f64.powi(k as i32)).collect())
    }
}

/// Boundary limit along one approach direction, per grid point.
#[derive(Clone, Debug)]
pub struct DirectionLimit {
    pub direction: Vec<f64>,
    pub limits: Vec<C64>,
}

/// Boundary data on an edge grid: per-direction limits, consensus values,
/// and the direction-independence verdict.
#[derive(Clone, Debug)]
pub struct BoundaryData {
    pub grid: Vec<Vec<Real>>,
    pub per_direction: Vec<DirectionLimit>,
    pub limit: Vec<C64>,
    pub direction_independent: bool,
    pub max_direction_gap: f64,
    pub eps_used: Vec<f64>,
}

impl BoundaryData {
    /// Boundary data with a prescribed constant value (e.g. a known jump).
    pub fn constant(grid: Vec<Vec<Real>>, value: C64) -> Self {
        let limit = vec![value; grid.len()];
        BoundaryData {
            grid,
            per_direction: Vec::new(),
            limit,
            direction_independent: true,
            max_direction_gap: 0.0,
            eps_used: Vec::new(),
        }
    }

    pub fn from_values(grid: Vec<Vec<Real>>, values: Vec<C64>) -> Self {
        assert_eq!(grid.len(), values.len());
        BoundaryData {
            grid,
            per_direction: Vec::new(),
            limit: values,
            direction_independent: true,
            max_direction_gap: 0.0,
            eps_used: Vec::new(),
        }
    }

    /// Pointwise difference of consensus limits (the boundary jump).
    pub fn jump(plus: &BoundaryData, minus: &BoundaryData) -> Self {
        assert_eq!(plus.grid.len(), minus.grid.len());
        let values =
            plus.limit.iter().zip(&minus.limit).map(|(a, b)| a - b).collect();
        BoundaryData::from_values(plus.grid.clone(), values)
    }

    /// Barycentric interpolation of the consensus limit (1-D edge only).
    pub fn interp_at(&self, x: f64) -> C64 {
        assert!(
            self.grid.iter().all(|p| p.len() == 1),
            "interpolation needs a one-dimensional edge grid"
        );
        let xs: Vec<f64> = self.grid.iter().map(|p| p[0].to_f64()).collect();
        let n = xs.len();
        let mut weights = vec![1.0f64; n];
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    weights[i] /= xs[i] - xs[j];
                }
            }
        }
        let mut num = C64::new(0.0, 0.0);
        let mut den = 0.0;
        for i in 0..n {
            let dx = x - xs[i];
            if dx.abs() < 1e-300 {
                return self.limit[i];
            }
            let w = weights[i] / dx;
            num += self.limit[i] * w;
            den += w;
        }
        num / den
    }
}

/// Interior grid on the open edge box: per axis, `per_axis` points strictly
/// inside the interval (equispaced rationals in exact mode,
/// Chebyshev-Lobatto points shrunk 1% in float mode), tensored.
pub fn edge_grid(w: &WedgeSpec, per_axis: usize, mode: Mode) -> Vec<Vec<Real>> {
    let per_axis = per_axis.max(3);
    let axes: Vec<Vec<Real>> = w
        .edge()
        .iter()
        .map(|(lo, hi)| match mode {
            Mode::Exact => {
                let lo = lo.as_exact().unwrap().clone();
                let hi = hi.as_exact().unwrap().clone();
                let width = &hi - &lo;
                (1..=per_axis)
                    .map(|i| {
                        let frac = BigRational::new(
                            (i as i64).into(),
                            (per_axis as i64 + 1).into(),
                        );
                        Real::Exact(&lo + &width * frac)
                    })
                    .collect()
            }
            Mode::Float => {
                let lo = lo.to_f64();
                let hi = hi.to_f64();
                let mid = 0.5 * (lo + hi);
                let half = 0.495 * (hi - lo);
                (0..per_axis)
                    .map(|i| {
                        let theta = std::f64::consts::PI * i as f64 / (per_axis as f64 - 1.0);
                        Real::Float(mid - half * theta.cos())
                    })
                    .collect()
            }
        })
        .collect();
    // tensor product
    let mut grid: Vec<Vec<Real>> = vec![Vec::new()];
    for axis in &axes {
        let mut next = Vec::with_capacity(grid.len() * axis.len());
        for p in &grid {
            for v in axis {
                let mut q = p.clone();
                q.push(v.clone());
                next.push(q);
            }
        }
        grid = next;
    }
    grid
}

/// `x + i eps Y / |Y|`: the direction is normalized so that the effective
/// step size is independent of the generator's scale.
fn point_plus_i_eps(x: &[Real], direction: &[Real], eps: f64) -> Vec<Coefficient> {
    let norm = direction.iter().map(|d| d.to_f64().powi(2)).sum::<f64>().sqrt();
    x.iter()
        .zip(direction)
        .map(|(xi, di)| {
            Coefficient::Float(C64::new(xi.to_f64(), eps * di.to_f64() / norm))
        })
        .collect()
}

/// Limit of `f(x + i eps Y)` as `eps -> 0` along one direction `Y`, per
/// grid point.
///
/// Exact mode evaluates directly on the edge (polynomial and rational
/// functions extend continuously; a vanishing denominator is a divergent
/// limit). Float mode runs the eps sequence and Richardson-extrapolates
/// the last three values; growth or non-contracting oscillation of the
/// sequence is flagged as divergence.
pub fn boundary_value(
    f: &SampledFunction,
    w: &WedgeSpec,
    direction_index: usize,
    direction: &[Real],
    grid: &[Vec<Real>],
    eps: &EpsSequence,
) -> Result<DirectionLimit, WedgeError> {
    let dir_f64: Vec<f64> = direction.iter().map(|d| d.to_f64()).collect();
    let exact_path = w.mode() == Mode::Exact && !matches!(f, SampledFunction::Rational { .. } if false);
    let mut limits = Vec::with_capacity(grid.len());
    if exact_path && f.is_analytic() {
        for x in grid {
            let pt: Vec<Coefficient> =
                x.iter().map(|xi| Coefficient::from_real(xi.clone())).collect();
            let v = f.eval(w, &pt)?;
            limits.push(v.to_complex64());
        }
        return Ok(DirectionLimit { direction: dir_f64, limits });
    }
    if let (Mode::Exact, SampledFunction::Rational { num, den }) = (w.mode(), f) {
        for (pi, x) in grid.iter().enumerate() {
            let pt: Vec<Coefficient> =
                x.iter().map(|xi| Coefficient::from_real(xi.clone())).collect();
            let d = den.eval(&pt)?;
            if d.is_zero() {
                return Err(WedgeError::LimitDiverged { direction: direction_index, point: pi });
            }
            limits.push(num.eval(&pt)?.div(&d).to_complex64());
        }
        return Ok(DirectionLimit { direction: dir_f64, limits });
    }
    if let SampledFunction::SectorConstants(_) = f {
        // the limit along Y is the constant of Y's sector
        let probe: Vec<Coefficient> = grid[0]
            .iter()
            .zip(direction)
            .map(|(xi, di)| {
                Coefficient::from_parts(
                    Real::Float(xi.to_f64()),
                    Real::Float(1e-6 * di.to_f64()),
                )
            })
            .collect();
        let v = f.eval(w, &probe)?.to_complex64();
        return Ok(DirectionLimit { direction: dir_f64, limits: vec![v; grid.len()] });
    }
    for (pi, x) in grid.iter().enumerate() {
        let mut values = Vec::with_capacity(eps.0.len());
        for &e in &eps.0 {
            let pt = point_plus_i_eps(x, direction, e);
            let v = match f.eval(w, &pt) {
                Ok(v) => v.to_complex64(),
                Err(WedgeError::EvalFailed(_)) => {
                    return Err(WedgeError::LimitDiverged {
                        direction: direction_index,
                        point: pi,
                    })
                }
                Err(e) => return Err(e),
            };
            values.push(v);
        }
        let l = values.len();
        let diffs: Vec<f64> = values.windows(2).map(|w| (w[1] - w[0]).norm()).collect();
        let last_mag = values[l - 1].norm();
        let contracting = diffs[l - 2] <= diffs[l - 3] + 1e-12
            || diffs[l - 2] <= 1e-9 * (1.0 + last_mag);
        if last_mag > 1e12 || !contracting {
            return Err(WedgeError::LimitDiverged { direction: direction_index, point: pi });
        }
        // two Richardson stages on the last three values (ratio 1/2)
        let extrapolated =
            (values[l - 1] * 8.0 - values[l - 2] * 6.0 + values[l - 3]) / 3.0;
        limits.push(extrapolated);
    }
    Ok(DirectionLimit { direction: dir_f64, limits })
}

/// Compute boundary limits along every probe direction (generators and
/// half-cone midpoints), check mutual agreement within `tau_bv`, and
/// assemble the consensus data. A gap above tolerance is the constructed
/// direction-dependence rejection.
pub fn boundary_data(
    f: &SampledFunction,
    w: &WedgeSpec,
    cfg: &WedgeConfig,
) -> Result<BoundaryData, WedgeError> {
    let grid = edge_grid(w, cfg.grid_per_axis, w.mode());
    let eps = EpsSequence::geometric(w.radius().to_f64(), cfg.eps_levels);
    let dirs = w.probe_directions();
    let mut per_direction = Vec::with_capacity(dirs.len());
    for (di, d) in dirs.iter().enumerate() {
        per_direction.push(boundary_value(f, w, di, d, &grid, &eps)?);
    }
    let mut gap = 0.0f64;
    for a in &per_direction {
        for b in &per_direction {
            for (va, vb) in a.limits.iter().zip(&b.limits) {
                gap = gap.max((va - vb).norm());
            }
        }
    }
    if gap > cfg.tau_bv {
        return Err(WedgeError::DirectionMismatch { gap, tol: cfg.tau_bv });
    }
    let npts = grid.len();
    let mut limit = vec![C64::new(0.0, 0.0); npts];
    for dl in &per_direction {
        for (acc, v) in limit.iter_mut().zip(&dl.limits) {
            *acc += v;
        }
    }
    let count = per_direction.len() as f64;
    for acc in &mut limit {
        *acc /= count;
    }
    Ok(BoundaryData {
        grid,
        per_direction,
        limit,
        direction_independent: true,
        max_direction_gap: gap,
        eps_used: eps.0,
    })
}

/// Real affine coordinates of one blow-up chart inside the wedge: the base
/// point on the edge, an interior chart direction (a blend of the half-cone
/// generators), and the basis matrix `B = [d | completion]` mapping chart
/// blow-down coordinates to ambient displacement.
#[derive(Clone, Debug)]
pub struct ChartFrame {
    pub base: Vec<Real>,
    pub generator_index: usize,
    pub direction: Vec<Real>,
    /// Columns of `B`.
    pub columns: Vec<Vec<Real>>,
    /// Rows of `B^{-1}`.
    pub inv_rows: Vec<Vec<Real>>,
}

/// Build the chart for the `idx`-th positive generator at the given base
/// point. The direction is `g_idx + (1/4) Σ_{j != idx} g_j`, strictly
/// inside the half cone; the basis completes it with standard basis
/// vectors, skipping the direction's largest component.
pub fn chart_frame(
    w: &WedgeSpec,
    idx: usize,
    base: Vec<Real>,
) -> Result<ChartFrame, WedgeError> {
    let pos = w.positive_generators();
    if idx >= pos.len() {
        return Err(WedgeError::BadSpec(format!("no positive generator {idx}")));
    }
    let mode = w.mode();
    let quarter = Real::from_ratio(mode, 1, 4);
    let mut direction: Vec<Real> = pos[idx].clone();
    for (j, g) in pos.iter().enumerate() {
        if j != idx {
            for (dst, src) in direction.iter_mut().zip(g.iter()) {
                *dst = dst.add(&src.mul(&quarter));
            }
        }
    }
    let n = w.n();
    let pivot = (0..n)
        .max_by(|&a, &b| {
            direction[a].abs().cmp_same_mode(&direction[b].abs())
        })
        .unwrap();
    let mut columns = vec![direction.clone()];
    for i in 0..n {
        if i != pivot {
            let mut e = vec![Real::zero(mode); n];
            e[i] = Real::one(mode);
            columns.push(e);
        }
    }
    let inv_rows = match mode {
        Mode::Exact => {
            let a: Vec<Vec<BigRational>> = (0..n)
                .map(|r| (0..n).map(|c| columns[c][r].as_exact().unwrap().clone()).collect())
                .collect();
            invert_exact(&a)
                .ok_or_else(|| WedgeError::BadSpec("chart basis is singular".into()))?
                .into_iter()
                .map(|row| row.into_iter().map(Real::Exact).collect())
                .collect()
        }
        Mode::Float => {
            let a = DMatrix::from_fn(n, n, |r, c| columns[c][r].to_f64());
            let inv = a
                .try_inverse()
                .ok_or_else(|| WedgeError::BadSpec("chart basis is singular".into()))?;
            (0..n)
                .map(|r| (0..n).map(|c| Real::Float(inv[(r, c)])).collect())
                .collect()
        }
    };
    Ok(ChartFrame { base, generator_index: idx, direction, columns, inv_rows })
}

impl ChartFrame {
    /// Ambient point of chart blow-down coordinates `zeta = (z, s + z t)`:
    /// `base + B zeta`, in floats.
    pub fn ambient_f64(&self, zeta: &[C64]) -> Vec<C64> {
        let n = self.base.len();
        (0..n)
            .map(|l| {
                let mut acc = C64::new(self.base[l].to_f64(), 0.0);
                for (j, col) in self.columns.iter().enumerate() {
                    acc += zeta[j] * col[l].to_f64();
                }
                acc
            })
            .collect()
    }

    /// The ambient-variable images `base_l + Σ_j B_{l,j} zeta_j` as exact
    /// chart series, for composing a germ into the chart.
    pub fn ambient_images(&self, d_target: u32) -> Result<Vec<Series>, WedgeError> {
        let n = self.base.len();
        let m = n - 1;
        let vars = chart_vars(m);
        let mode = self.base[0].mode();
        let z = Series::variable(vars.clone(), d_target, mode, "z")?;
        let mut zeta: Vec<Series> = vec![z.clone()];
        for j in 1..=m {
            let s = Series::variable(vars.clone(), d_target, mode, &format!("s{j}"))?;
            let t = Series::variable(vars.clone(), d_target, mode, &format!("t{j}"))?;
            zeta.push(s.add(&z.mul(&t)?)?);
        }
        let mut images = Vec::with_capacity(n);
        for l in 0..n {
            let mut acc = Series::constant(
                vars.clone(),
                d_target,
                Coefficient::from_real(self.base[l].clone()),
            )?;
            for (j, col) in self.columns.iter().enumerate() {
                let scaled = zeta[j].scale(&Coefficient::from_real(col[l].clone()))?;
                acc = acc.add(&scaled)?;
            }
            images.push(acc);
        }
        Ok(images)
    }

    /// The germ-variable images `Σ_l Binv_{r,l} (v_l - base_l)` as ambient
    /// series, for composing a chart germ back into ambient coordinates.
    pub fn germ_images(&self, d_target: u32) -> Result<Vec<Series>, WedgeError> {
        let n = self.base.len();
        let vars = ambient_vars(n);
        let mode = self.base[0].mode();
        let mut images = Vec::with_capacity(n);
        for row in &self.inv_rows {
            let mut acc = Series::zero(vars.clone(), d_target, mode)?;
            for l in 0..n {
                let v = Series::variable(vars.clone(), d_target, mode, &format!("z{}", l + 1))?;
                let shifted = v.sub(&Series::constant(
                    vars.clone(),
                    d_target,
                    Coefficient::from_real(self.base[l].clone()),
                )?)?;
                acc = acc.add(&shifted.scale(&Coefficient::from_real(row[l].clone()))?)?;
            }
            images.push(acc);
        }
        Ok(images)
    }
}

/// Chart-side data of a lifted function: one series per half ball in
/// analytic mode, sample tables in numeric mode.
#[derive(Clone, Debug)]
pub enum ChartData {
    Analytic { plus: Series, minus: Series, frame: ChartFrame },
    Numeric {
        plus: Vec<(Vec<C64>, C64)>,
        minus: Vec<(Vec<C64>, C64)>,
        frame: ChartFrame,
    },
}

/// Deterministic chart sample coordinates `(z, s, t)` filling the chart
/// ball of the given radius on both sides of `{y = 0}`. The `(s, t)` grid
/// must be rich enough to excite every fit monomial; five values per axis
/// for surfaces, three in higher dimension to cap the sample count.
fn chart_sample_points(n: usize, radius: f64) -> Vec<(C64, Vec<f64>, Vec<f64>)> {
    let m = n - 1;
    let nr = 4;
    let na = 8;
    let mut zs = Vec::new();
    for l in 0..nr {
        let r = radius * (l + 1) as f64 / nr as f64;
        for a in 0..na {
            let th = std::f64::consts::PI * (a as f64 + 0.5) / na as f64;
            zs.push(C64::new(r * th.cos(), r * th.sin()));
            zs.push(C64::new(r * th.cos(), -r * th.sin()));
        }
    }
    let st_vals: Vec<f64> = if m <= 1 {
        vec![-0.5 * radius, -0.25 * radius, 0.0, 0.25 * radius, 0.5 * radius]
    } else {
        vec![-0.5 * radius, 0.0, 0.5 * radius]
    };
    let mut st_grid: Vec<Vec<f64>> = vec![Vec::new()];
    for _ in 0..(2 * m) {
        let mut next = Vec::new();
        for p in &st_grid {
            for v in &st_vals {
                let mut q = p.clone();
                q.push(*v);
                next.push(q);
            }
        }
        st_grid = next;
    }
    let mut out = Vec::new();
    for z in &zs {
        for st in &st_grid {
            out.push((*z, st[..m].to_vec(), st[m..].to_vec()));
        }
    }
    out
}

/// Lift a wedge function to a blow-up chart. Analytic mode composes the
/// germ with the chart's affine blow-down; numeric mode samples `f` at the
/// blow-down images of a deterministic chart grid. Every sampled image is
/// checked to land in the wedge (or on the edge for `y = 0`); escaping
/// samples mean the chart ball is too large.
pub fn lift_to_blowup(
    f: &SampledFunction,
    w: &WedgeSpec,
    frame: &ChartFrame,
) -> Result<ChartData, WedgeError> {
    let n = w.n();
    let radius = w.radius().to_f64();
    let samples = chart_sample_points(n, radius);
    // containment: blow-down images of the chart ball must stay in the wedge
    for (z, s, t) in &samples {
        let mut zeta = vec![*z];
        for j in 0..n - 1 {
            zeta.push(C64::new(s[j], 0.0) + *z * t[j]);
        }
        let ambient = frame.ambient_f64(&zeta);
        let re: Vec<Real> = ambient.iter().map(|c| Real::Float(c.re)).collect();
        let im: Vec<Real> = ambient.iter().map(|c| Real::Float(c.im)).collect();
        if !w.edge_contains(&re) || w.cone_side(&im).is_none() {
            return Err(WedgeError::BallTooLarge);
        }
    }
    if f.is_analytic() {
        let h = match f {
            SampledFunction::Germ(h) => h,
            _ => unreachable!(),
        };
        let d_target = 2 * h.max_total_degree().max(1);
        let images = frame.ambient_images(d_target)?;
        let m = n - 1;
        let lifted = h.compose(&images, &chart_vars(m), d_target)?;
        Ok(ChartData::Analytic { plus: lifted.clone(), minus: lifted, frame: frame.clone() })
    } else {
        let mut plus = Vec::new();
        let mut minus = Vec::new();
        for (z, s, t) in &samples {
            let mut zeta = vec![*z];
            for j in 0..n - 1 {
                zeta.push(C64::new(s[j], 0.0) + *z * t[j]);
            }
            let ambient = frame.ambient_f64(&zeta);
            let pt: Vec<Coefficient> =
                ambient.iter().map(|c| Coefficient::Float(*c)).collect();
            let value = f.eval(w, &pt)?.to_complex64();
            if z.im > 0.0 {
                plus.push((ambient, value));
            } else {
                minus.push((ambient, value));
            }
        }
        Ok(ChartData::Numeric { plus, minus, frame: frame.clone() })
    }
}

fn monomials_up_to(n: usize, degree: u32) -> Vec<MultiIndex> {
    let mut out = Vec::new();
    for d in 0..=degree {
        out.extend(MultiIndex::with_total_degree(n, d));
    }
    out
}

/// Glue the two chart sides and extend holomorphically.
///
/// Analytic mode requires the sides to agree as one series (a polynomial
/// restricted to two half balls is one series), reconstructs the chart
/// germ, and composes it back to exact ambient coordinates. Numeric mode
/// checks the per-side boundary consensus within `tau_bv`, then fits a
/// polynomial of degree `cfg.fit_degree` to the glued samples by least
/// squares in scaled displacement coordinates `(v - base)/fit_scale`.
pub fn edge_extend(
    data: &ChartData,
    f0: &BoundaryData,
    w: &WedgeSpec,
    cfg: &WedgeConfig,
) -> Result<Series, WedgeError> {
    match data {
        ChartData::Analytic { plus, minus, frame } => {
            if plus != minus {
                let gap = plus.sub(minus)?.max_coeff_modulus_f64();
                return Err(WedgeError::BoundaryMismatch { gap, tol: 0.0 });
            }
            let chart_germ = hypocomplex_reconstruct(plus)?;
            let images = frame.germ_images(chart_germ.truncation())?;
            let ambient =
                chart_germ.compose(&images, &ambient_vars(w.n()), chart_germ.truncation())?;
            Ok(ambient)
        }
        ChartData::Numeric { plus, minus, frame } => {
            // per-side consensus from the boundary data
            let mut plus_cons: Vec<C64> = vec![C64::new(0.0, 0.0); f0.grid.len()];
            let mut minus_cons = plus_cons.clone();
            let (mut np, mut nm) = (0usize, 0usize);
            for dl in &f0.per_direction {
                let dirs: Vec<Real> = dl.direction.iter().map(|&d| Real::Float(d)).collect();
                match w.cone_side(&dirs) {
                    Some(ConeSide::Plus) => {
                        np += 1;
                        for (acc, v) in plus_cons.iter_mut().zip(&dl.limits) {
                            *acc += v;
                        }
                    }
                    Some(ConeSide::Minus) => {
                        nm += 1;
                        for (acc, v) in minus_cons.iter_mut().zip(&dl.limits) {
                            *acc += v;
                        }
                    }
                    None => {}
                }
            }
            if np > 0 && nm > 0 {
                let mut gap = 0.0f64;
                for (a, b) in plus_cons.iter().zip(&minus_cons) {
                    gap = gap.max((a / np as f64 - b / nm as f64).norm());
                }
                if gap > cfg.tau_bv {
                    return Err(WedgeError::BoundaryMismatch { gap, tol: cfg.tau_bv });
                }
            }
            // least-squares fit in scaled displacement coordinates
            let n = w.n();
            let basis = monomials_up_to(n, cfg.fit_degree);
            let unknowns = basis.len();
            let samples: Vec<&(Vec<C64>, C64)> = plus.iter().chain(minus.iter()).collect();
            if samples.len() < unknowns {
                return Err(WedgeError::FitUnderdetermined {
                    samples: samples.len(),
                    unknowns,
                });
            }
            let base: Vec<f64> = frame.base.iter().map(|b| b.to_f64()).collect();
            let scale = cfg.fit_scale;
            let a = DMatrix::from_fn(samples.len(), unknowns, |r, c| {
                let (pt, _) = samples[r];
                let mut acc = C64::new(1.0, 0.0);
                for (i, &e) in basis[c].exponents().iter().enumerate() {
                    let u = (pt[i] - C64::new(base[i], 0.0)) / scale;
                    for _ in 0..e {
                        acc *= u;
                    }
                }
                acc
            });
            let b = DVector::from_fn(samples.len(), |r, _| samples[r].1);
            let svd = a.svd(true, true);
            let smax = svd.singular_values.iter().cloned().fold(0.0, f64::max);
            let smin = svd.singular_values.iter().cloned().fold(f64::MAX, f64::min);
            if smax == 0.0 || smin / smax < 1e-13 {
                return Err(WedgeError::FitUnderdetermined {
                    samples: samples.len(),
                    unknowns,
                });
            }
            let coeffs = svd
                .solve(&b, 0.0)
                .map_err(|e| WedgeError::EvalFailed(e.to_string()))?;
            let mut terms = Vec::new();
            for (c, idx) in coeffs.iter().zip(&basis) {
                terms.push((idx.clone(), Coefficient::Float(*c)));
            }
            Ok(Series::from_terms(ambient_vars(n), cfg.fit_degree, Mode::Float, terms)?)
        }
    }
}

/// Weak Cauchy-Riemann boundary identity on the `n = 1` chart slice:
/// residual of
///
/// ```text
/// <f~, -dzbar(phi)>  =  (i/2) ∫ f0(x) phi(x, 0) dx
/// ```
///
/// where `f~ = f+ 1_{y>0} + f- 1_{y<0}` and `f0` is the boundary JUMP
/// `f0+ - f0-` (pass the plus boundary value for the one-sided identity;
/// the minus-sign one-sided variant emerges from passing only `f-`).
///
/// Integrals are tensor Gauss rules split at `{y = 0}`; the residual is
/// computed at `quad_order/4`, `/2`, and full order and must not grow
/// under refinement.
pub fn weak_cr_residual(
    fplus: Option<&dyn Fn(C64) -> C64>,
    fminus: Option<&dyn Fn(C64) -> C64>,
    f0: &BoundaryData,
    bump: &BumpSpec,
    quad_order: usize,
) -> Result<f64, WedgeError> {
    let orders = [quad_order.div_ceil(4).max(4), quad_order.div_ceil(2).max(6), quad_order];
    let residuals = weak_cr_residuals_at_orders(fplus, fminus, f0, bump, &orders);
    let floor = 1e-12;
    let shrinking = residuals[2] <= residuals[1].max(floor) || residuals[2] <= floor;
    if !shrinking {
        return Err(WedgeError::QuadratureUnderResolved { residuals: residuals.to_vec() });
    }
    Ok(residuals[2])
}

/// The residual of the weak identity at each quadrature order (for
/// convergence-order studies).
pub fn weak_cr_residuals_at_orders(
    fplus: Option<&dyn Fn(C64) -> C64>,
    fminus: Option<&dyn Fn(C64) -> C64>,
    f0: &BoundaryData,
    bump: &BumpSpec,
    orders: &[usize],
) -> Vec<f64> {
    orders
        .iter()
        .map(|&q| {
            let (x_lo, x_hi) = bump.support_x();
            let (y_lo, y_hi) = bump.support_y();
            let mut lhs = C64::new(0.0, 0.0);
            if let Some(fp) = fplus {
                if y_hi > 0.0 {
                    lhs -= integrate_2d(
                        &|x, y| fp(C64::new(x, y)) * bump.dzbar(x, y),
                        (x_lo, x_hi),
                        (y_lo.max(0.0), y_hi),
                        q,
                    );
                }
            }
            if let Some(fm) = fminus {
                if y_lo < 0.0 {
                    lhs -= integrate_2d(
                        &|x, y| fm(C64::new(x, y)) * bump.dzbar(x, y),
                        (x_lo, x_hi),
                        (y_lo, y_hi.min(0.0)),
                        q,
                    );
                }
            }
            let rhs = integrate_1d(&|x| f0.interp_at(x) * bump.value(x, 0.0), x_lo, x_hi, q)
                * C64::new(0.0, 0.5);
            (lhs - rhs).norm()
        })
        .collect()
}

/// Full extension report of [`full_eowt_demo`].
#[derive(Clone, Debug)]
pub struct ExtensionReport {
    pub analytic: bool,
    pub directions: Vec<Vec<f64>>,
    pub boundary_independent: bool,
    pub max_direction_gap: f64,
    /// One germ per chart. Analytic germs are exact series in plain
    /// ambient coordinates; numeric germs are float series in the scaled
    /// displacement coordinates `(v - germ_base) / germ_scale`.
    pub germs: Vec<Series>,
    pub germ_base: Vec<f64>,
    pub germ_scale: f64,
    pub overlap_max_disagreement: f64,
    pub overlap_exact_zero: bool,
    pub weak_cr_residuals: Vec<f64>,
}

impl ExtensionReport {
    /// Evaluate the `i`-th germ at an ambient float point, honoring the
    /// report's displacement convention.
    pub fn eval_germ(&self, i: usize, point: &[C64]) -> Result<C64, WedgeError> {
        let coords: Vec<Coefficient> = point
            .iter()
            .enumerate()
            .map(|(l, v)| {
                Coefficient::Float((v - C64::new(self.germ_base[l], 0.0)) / self.germ_scale)
            })
            .collect();
        let germ = if self.germs[i].mode() == Mode::Exact {
            self.germs[i].to_float()
        } else {
            self.germs[i].clone()
        };
        Ok(germ.eval(&coords)?.to_complex64())
    }
}

/// Run the whole pipeline: boundary limits along every probe direction,
/// one blow-up chart per positive cone generator, per-chart extension,
/// cross-chart overlap checks at shared test points, and the weak boundary
/// identity on each chart slice.
pub fn full_eowt_demo(
    f: &SampledFunction,
    w: &WedgeSpec,
    cfg: &WedgeConfig,
) -> Result<ExtensionReport, WedgeError> {
    let analytic = f.is_analytic() && w.mode() == Mode::Exact;
    let bd = boundary_data(f, w, cfg)?;
    let base = w.edge_center();
    let base_f64: Vec<f64> = base.iter().map(|b| b.to_f64()).collect();
    let n_charts = w.positive_generators().len();
    let mut germs = Vec::with_capacity(n_charts);
    let mut frames = Vec::with_capacity(n_charts);
    for idx in 0..n_charts {
        let frame = chart_frame(w, idx, base.clone())?;
        let data = lift_to_blowup(f, w, &frame)?;
        let germ = edge_extend(&data, &bd, w, cfg)?;
        frames.push(frame);
        germs.push(germ);
    }
    // overlap: germs from different charts must agree
    let (germ_base, germ_scale) =
        if analytic { (vec![0.0; w.n()], 1.0) } else { (base_f64.clone(), cfg.fit_scale) };
    let mut overlap_gap = 0.0f64;
    let mut overlap_exact = true;
    if analytic {
        for i in 0..germs.len() {
            for j in (i + 1)..germs.len() {
                let gi = &germs[i];
                let gj = &germs[j];
                let (a, b) = if gi.truncation() <= gj.truncation() {
                    (gi.clone(), gj.truncated(gi.truncation()))
                } else {
                    (gi.truncated(gj.truncation()), gj.clone())
                };
                let diff = a.sub(&b)?;
                if !diff.is_zero() {
                    overlap_exact = false;
                    overlap_gap = overlap_gap.max(diff.max_coeff_modulus_f64());
                }
            }
        }
    } else {
        overlap_exact = false;
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x6f76_6572_6c61_70);
        let test_points = crate::corpus::random_polydisc_points(
            &mut rng,
            &vec![0.0; w.n()],
            0.6,
            30,
            None,
        );
        let report_stub = ExtensionReport {
            analytic,
            directions: Vec::new(),
            boundary_independent: true,
            max_direction_gap: bd.max_direction_gap,
            germs: germs.clone(),
            germ_base: germ_base.clone(),
            germ_scale,
            overlap_max_disagreement: 0.0,
            overlap_exact_zero: false,
            weak_cr_residuals: Vec::new(),
        };
        for u in &test_points {
            // u is in scaled displacement coordinates; convert to ambient
            let ambient: Vec<C64> = u
                .iter()
                .enumerate()
                .map(|(l, ui)| ui * germ_scale + C64::new(germ_base[l], 0.0))
                .collect();
            for i in 0..germs.len() {
                for j in (i + 1)..germs.len() {
                    let a = report_stub.eval_germ(i, &ambient)?;
                    let b = report_stub.eval_germ(j, &ambient)?;
                    overlap_gap = overlap_gap.max((a - b).norm());
                }
            }
        }
    }
    if overlap_gap > cfg.tau_glue {
        return Err(WedgeError::OverlapDisagreement { gap: overlap_gap, tol: cfg.tau_glue });
    }
    // weak boundary identity on each chart slice z -> f(base + z d)
    let mut weak_residuals = Vec::with_capacity(n_charts);
    let bump = BumpSpec::standard((0.6 * w.radius().to_f64(), 0.6 * w.radius().to_f64()));
    let slice_grid: Vec<Vec<Real>> = match w.mode() {
        Mode::Exact => edge_grid(
            &WedgeSpec::new(
                1,
                vec![(
                    Real::Exact(BigRational::from_integer((-1).into())),
                    Real::Exact(BigRational::from_integer(1.into())),
                )],
                vec![
                    vec![Real::Exact(BigRational::from_integer(1.into()))],
                    vec![Real::Exact(BigRational::from_integer((-1).into()))],
                ],
                Real::Exact(BigRational::from_integer(1.into())),
            )?,
            cfg.grid_per_axis,
            Mode::Exact,
        ),
        Mode::Float => edge_grid(
            &WedgeSpec::new(
                1,
                vec![(Real::Float(-1.0), Real::Float(1.0))],
                vec![vec![Real::Float(1.0)], vec![Real::Float(-1.0)]],
                Real::Float(1.0),
            )?,
            cfg.grid_per_axis,
            Mode::Float,
        ),
    };
    let zero_jump = BoundaryData::constant(slice_grid, C64::new(0.0, 0.0));
    for frame in &frames {
        let dirs: Vec<f64> = frame.direction.iter().map(|d| d.to_f64()).collect();
        let slice = |zeta: C64| -> C64 {
            let pt: Vec<Coefficient> = (0..w.n())
                .map(|l| {
                    Coefficient::Float(C64::new(base_f64[l], 0.0) + zeta * dirs[l])
                })
                .collect();
            f.eval(w, &pt).map(|c| c.to_complex64()).unwrap_or(C64::new(f64::NAN, 0.0))
        };
        let res = weak_cr_residual(
            Some(&slice),
            Some(&slice),
            &zero_jump,
            &bump,
            cfg.quad_order,
        )?;
        weak_residuals.push(res);
    }
    Ok(ExtensionReport {
        analytic,
        directions: bd
            .per_direction
            .iter()
            .map(|dl| dl.direction.clone())
            .collect(),
        boundary_independent: bd.direction_independent,
        max_direction_gap: bd.max_direction_gap,
        germs,
        germ_base,
        germ_scale,
        overlap_max_disagreement: overlap_gap,
        overlap_exact_zero: overlap_exact,
        weak_cr_residuals: weak_residuals,
    })
}
