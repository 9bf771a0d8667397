//! Charts of the real blow-up of ℝⁿ in ℂⁿ, the blow-down map, the spanning
//! frame of the involutive structure, and the flag-variety realization.
//!
//! A chart is indexed by a distinguished real basis direction. In chart
//! coordinates `(z, s, t)` with `z = x + iy`, `s, t ∈ ℝ^{n-1}`, the
//! blow-down is `(z, s + z t)` with the `z` slot placed in the chart
//! direction, and the exceptional hypersurface Σ is `{y = 0}` in every
//! chart. The structure bundle is spanned by `L_0 = ∂_zbar` and
//! `L_j = ∂_{t_j} - z ∂_{s_j}`.

use std::collections::BTreeMap;

use nalgebra::Complex;
use thiserror::Error;

use crate::coeff::{Coefficient, Mode, Real};
use crate::linalg::{rank_exact_complex, rank_float_complex};
use crate::series::{chart_vars, Series, SeriesError, MAX_TRUNCATION};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeometryError {
    #[error("chart direction {direction} out of range for n = {n}")]
    BadDirection { n: usize, direction: usize },
    #[error("point shape does not match chart: {0}")]
    BadPoint(String),
    #[error("point lies outside the target chart (projective coordinate vanishes)")]
    OutsideChart,
    #[error("line is at infinity (first homogeneous coordinate vanishes)")]
    AtInfinity,
    #[error(transparent)]
    Series(#[from] SeriesError),
}

/// A blow-up chart: ambient complex dimension `n` and the distinguished
/// basis direction (0-based, `< n`).
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Chart {
    n: usize,
    direction: usize,
}

impl Chart {
    pub fn new(n: usize, direction: usize) -> Result<Self, GeometryError> {
        if n == 0 || direction >= n {
            return Err(GeometryError::BadDirection { n, direction });
        }
        Ok(Chart { n, direction })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn direction(&self) -> usize {
        self.direction
    }

    /// Number of auxiliary `(s, t)` dimensions.
    pub fn m(&self) -> usize {
        self.n - 1
    }
}

/// A point `(z, s, t)` of a blow-up chart. All entries share one mode.
#[derive(Clone, PartialEq, Debug)]
pub struct ChartPoint {
    pub z: Coefficient,
    pub s: Vec<Real>,
    pub t: Vec<Real>,
}

impl ChartPoint {
    pub fn new(z: Coefficient, s: Vec<Real>, t: Vec<Real>) -> Result<Self, GeometryError> {
        if s.len() != t.len() {
            return Err(GeometryError::BadPoint(format!(
                "s has length {}, t has length {}",
                s.len(),
                t.len()
            )));
        }
        let mode = z.mode();
        if s.iter().chain(&t).any(|r| r.mode() != mode) {
            return Err(GeometryError::BadPoint("mixed arithmetic modes".into()));
        }
        if mode == Mode::Float {
            let finite = z.to_complex64().re.is_finite()
                && z.to_complex64().im.is_finite()
                && s.iter().chain(&t).all(|r| r.to_f64().is_finite());
            if !finite {
                return Err(GeometryError::BadPoint("non-finite entry".into()));
            }
        }
        Ok(ChartPoint { z, s, t })
    }

    pub fn m(&self) -> usize {
        self.s.len()
    }

    pub fn mode(&self) -> Mode {
        self.z.mode()
    }

    /// Whether the point lies on the exceptional hypersurface Σ = {Im z = 0}.
    pub fn on_sigma(&self) -> bool {
        self.z.im().is_zero()
    }
}

/// The blow-down `(z, s, t) -> (z, s + z t)`, with the `z` slot in the
/// chart's distinguished direction and `s + z t` filling the rest in order.
pub fn blow_down(chart: &Chart, p: &ChartPoint) -> Result<Vec<Coefficient>, GeometryError> {
    if p.m() != chart.m() {
        return Err(GeometryError::BadPoint(format!(
            "point has m = {}, chart needs m = {}",
            p.m(),
            chart.m()
        )));
    }
    let mut out = Vec::with_capacity(chart.n);
    let mut aux = 0;
    for slot in 0..chart.n {
        if slot == chart.direction {
            out.push(p.z.clone());
        } else {
            let s = Coefficient::from_real(p.s[aux].clone());
            let t = Coefficient::from_real(p.t[aux].clone());
            out.push(s.add(&p.z.mul(&t)));
            aux += 1;
        }
    }
    Ok(out)
}

/// Transition between two charts covering the same blow-up.
///
/// The projective fiber coordinate of `p` is the vector `nu` with a 1 in the
/// source direction and the `t` entries elsewhere; the target chart is
/// defined exactly where its own component of `nu` is nonzero. Off Σ this
/// agrees with inverting the blow-down using the imaginary parts; on Σ it is
/// the consistent transform along the exceptional fiber.
pub fn chart_transition(
    from: &Chart,
    to: &Chart,
    p: &ChartPoint,
) -> Result<ChartPoint, GeometryError> {
    if from.n != to.n {
        return Err(GeometryError::BadPoint(format!(
            "charts live on different blow-ups (n = {} vs {})",
            from.n, to.n
        )));
    }
    if p.m() != from.m() {
        return Err(GeometryError::BadPoint("point does not match source chart".into()));
    }
    if from == to {
        return Ok(p.clone());
    }
    let mode = p.mode();
    // fiber coordinate nu in the source chart
    let mut nu: Vec<Real> = Vec::with_capacity(from.n);
    let mut aux = 0;
    for slot in 0..from.n {
        if slot == from.direction {
            nu.push(Real::one(mode));
        } else {
            nu.push(p.t[aux].clone());
            aux += 1;
        }
    }
    let pivot = nu[to.direction].clone();
    if pivot.is_zero() {
        return Err(GeometryError::OutsideChart);
    }
    let image = blow_down(from, p)?;
    let z_new = image[to.direction].clone();
    let x_new = z_new.re();
    let mut s_new = Vec::with_capacity(to.m());
    let mut t_new = Vec::with_capacity(to.m());
    for slot in 0..to.n {
        if slot == to.direction {
            continue;
        }
        let ti = nu[slot].div(&pivot);
        let si = image[slot].re().sub(&x_new.mul(&ti));
        s_new.push(si);
        t_new.push(ti);
    }
    ChartPoint::new(z_new, s_new, t_new)
}

/// A vector field with polynomial coefficients on a chart, stored as one
/// coefficient series per ∂-slot so that commutators stay symbolic.
#[derive(Clone, Debug)]
pub struct VectorField {
    label: String,
    m: usize,
    coeffs: BTreeMap<String, Series>,
}

impl VectorField {
    pub fn label(&self) -> &str {
        &self.label
    }

    /// Coefficient series of `∂_var`, zero if absent.
    pub fn coefficient(&self, var: &str) -> Series {
        self.coeffs
            .get(var)
            .cloned()
            .unwrap_or_else(|| Series::zero(chart_vars(self.m), MAX_TRUNCATION, Mode::Exact).unwrap())
    }

    /// Apply to a chart series: `Σ coeff_v ∂_v f`. The result keeps `f`'s
    /// truncation.
    pub fn apply(&self, f: &Series) -> Result<Series, SeriesError> {
        if f.variables() != chart_vars(self.m) {
            return Err(SeriesError::VariableMismatch {
                left: f.variables().to_vec(),
                right: chart_vars(self.m),
            });
        }
        let mut out = Series::zero(f.variables().to_vec(), f.truncation(), f.mode())?;
        for (var, coeff) in &self.coeffs {
            let term = match f.mode() {
                Mode::Exact => coeff.mul(&f.derive(var)?)?,
                Mode::Float => coeff.to_float().mul(&f.derive(var)?)?,
            };
            out = out.add(&term)?;
        }
        Ok(out)
    }

    /// Lie bracket `[X, Y]` of two first-order fields:
    /// coefficient of `∂_v` is `Σ_u X_u ∂_u Y_v - Y_u ∂_u X_v`.
    pub fn commutator(&self, other: &VectorField) -> Result<VectorField, SeriesError> {
        assert_eq!(self.m, other.m, "fields on different charts");
        let vars = chart_vars(self.m);
        let mut coeffs = BTreeMap::new();
        for v in &vars {
            let mut acc = Series::zero(vars.clone(), MAX_TRUNCATION, Mode::Exact)?;
            for (u, xu) in &self.coeffs {
                if let Some(yv) = other.coeffs.get(v) {
                    acc = acc.add(&xu.mul(&yv.derive(u)?)?)?;
                }
            }
            for (u, yu) in &other.coeffs {
                if let Some(xv) = self.coeffs.get(v) {
                    acc = acc.sub(&yu.mul(&xv.derive(u)?)?)?;
                }
            }
            if !acc.is_zero() {
                coeffs.insert(v.clone(), acc);
            }
        }
        Ok(VectorField {
            label: format!("[{}, {}]", self.label, other.label),
            m: self.m,
            coeffs,
        })
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.values().all(|s| s.is_zero())
    }
}

/// The spanning frame `L_0 = ∂_zbar`, `L_j = ∂_{t_j} - z ∂_{s_j}` of the
/// involutive structure in an `n`-dimensional chart.
pub fn frame(n: usize) -> Result<Vec<VectorField>, GeometryError> {
    if n == 0 {
        return Err(GeometryError::BadDirection { n, direction: 0 });
    }
    let m = n - 1;
    let vars = chart_vars(m);
    let one = Series::constant(vars.clone(), MAX_TRUNCATION, Coefficient::one(Mode::Exact))?;
    let z = Series::variable(vars.clone(), MAX_TRUNCATION, Mode::Exact, "z")?;
    let mut fields = Vec::with_capacity(n);
    let mut l0 = BTreeMap::new();
    l0.insert("zbar".to_string(), one.clone());
    fields.push(VectorField { label: "L0".into(), m, coeffs: l0 });
    for j in 1..=m {
        let mut c = BTreeMap::new();
        c.insert(format!("t{j}"), one.clone());
        c.insert(format!("s{j}"), z.neg());
        fields.push(VectorField { label: format!("L{j}"), m, coeffs: c });
    }
    Ok(fields)
}

/// Apply a frame field by index: 0 is `L_0 = ∂_zbar`, `j >= 1` is `L_j`.
pub fn apply_field(n: usize, index: usize, f: &Series) -> Result<Series, GeometryError> {
    let fields = frame(n)?;
    if index >= fields.len() {
        return Err(GeometryError::BadDirection { n, direction: index });
    }
    Ok(fields[index].apply(f)?)
}

/// One commutator residual of the involutivity check.
#[derive(Clone, Debug)]
pub struct CommutatorResidual {
    pub left: String,
    pub right: String,
    pub coefficients: Vec<(String, Series)>,
}

impl CommutatorResidual {
    pub fn is_zero(&self) -> bool {
        self.coefficients.iter().all(|(_, s)| s.is_zero())
    }
}

/// Compute `[L_a, L_b]` symbolically for every frame pair. All residuals
/// vanish identically: the coefficients of the frame depend only on `z`,
/// which every frame field annihilates.
pub fn check_involutivity(n: usize) -> Result<Vec<CommutatorResidual>, GeometryError> {
    let fields = frame(n)?;
    let mut out = Vec::new();
    for a in 0..fields.len() {
        for b in (a + 1)..fields.len() {
            let bracket = fields[a].commutator(&fields[b])?;
            let coefficients = chart_vars(n - 1)
                .iter()
                .map(|v| (v.clone(), bracket.coefficient(v)))
                .collect();
            out.push(CommutatorResidual {
                left: fields[a].label.clone(),
                right: fields[b].label.clone(),
                coefficients,
            });
        }
    }
    Ok(out)
}

/// Pointwise rank of `V ∩ V̄`: n-1 on Σ, 0 off it.
///
/// The 2n frame vectors (the `L`'s and their conjugates) are evaluated as
/// coordinate vectors in ℂ^{2n} over the basis `(∂_z, ∂_zbar, ∂_s, ∂_t)`;
/// `dim(V ∩ V̄) = 2n - rank`. Exact points use exact elimination; float
/// points count singular values above `rel_tol` times the largest.
pub fn rank_v_cap_vbar(p: &ChartPoint, n: usize, rel_tol: f64) -> Result<usize, GeometryError> {
    if p.m() + 1 != n {
        return Err(GeometryError::BadPoint(format!(
            "point has m = {}, rank check needs m = {}",
            p.m(),
            n - 1
        )));
    }
    let m = p.m();
    let dim = 2 * n;
    let mode = p.mode();
    // coordinate order: z, zbar, s1..sm, t1..tm
    let mut rows: Vec<Vec<Coefficient>> = Vec::with_capacity(2 * n);
    let zero = Coefficient::zero(mode);
    let one = Coefficient::one(mode);
    let mut l0 = vec![zero.clone(); dim];
    l0[1] = one.clone();
    rows.push(l0);
    for j in 0..m {
        let mut lj = vec![zero.clone(); dim];
        lj[2 + m + j] = one.clone();
        lj[2 + j] = p.z.neg();
        rows.push(lj);
    }
    // conjugation swaps the ∂_z and ∂_zbar slots and conjugates coefficients
    let conj: Vec<Vec<Coefficient>> = rows
        .iter()
        .map(|r| {
            let mut c: Vec<Coefficient> = r.iter().map(|c| c.conj()).collect();
            c.swap(0, 1);
            c
        })
        .collect();
    rows.extend(conj);
    let rank = match mode {
        Mode::Exact => rank_exact_complex(&rows),
        Mode::Float => {
            let frows: Vec<Vec<Complex<f64>>> =
                rows.iter().map(|r| r.iter().map(|c| c.to_complex64()).collect()).collect();
            rank_float_complex(&frows, rel_tol)
        }
    };
    Ok(dim - rank)
}

/// A point of the incidence variety: a complex line in ℂ^{n+1} through a
/// generator vector, inside the complexification of a real 2-plane.
#[derive(Clone, Debug, PartialEq)]
pub struct FlagPoint {
    /// Homogeneous generator of the line, length n+1.
    pub line: Vec<Coefficient>,
    /// Basis of the real 2-plane, each of length n+1.
    pub plane: (Vec<Real>, Vec<Real>),
}

impl FlagPoint {
    pub fn n(&self) -> usize {
        self.line.len() - 1
    }

    /// Whether the line generator lies in the complex span of the plane.
    pub fn line_in_complexified_plane(&self) -> bool {
        let mode = self.line[0].mode();
        let rows_plane: Vec<Vec<Coefficient>> = vec![
            self.plane.0.iter().map(|r| Coefficient::from_real(r.clone())).collect(),
            self.plane.1.iter().map(|r| Coefficient::from_real(r.clone())).collect(),
        ];
        let mut rows_all = rows_plane.clone();
        rows_all.push(self.line.clone());
        let (r2, r3) = match mode {
            Mode::Exact => (rank_exact_complex(&rows_plane), rank_exact_complex(&rows_all)),
            Mode::Float => {
                let f = |rows: &[Vec<Coefficient>]| {
                    let fr: Vec<Vec<Complex<f64>>> = rows
                        .iter()
                        .map(|r| r.iter().map(|c| c.to_complex64()).collect())
                        .collect();
                    rank_float_complex(&fr, 1e-10)
                };
                (f(&rows_plane), f(&rows_all))
            }
        };
        r3 == r2
    }
}

/// Lift a chart point to the flag variety in the normalized coordinates of
/// the first-direction chart: the plane is spanned by `[1, 0, s]` and
/// `[0, 1, t]`, and the line is generated by `[1, z, s + z t]`.
pub fn flag_lift(p: &ChartPoint) -> FlagPoint {
    let mode = p.mode();
    let m = p.m();
    let mut p1 = vec![Real::one(mode), Real::zero(mode)];
    let mut p2 = vec![Real::zero(mode), Real::one(mode)];
    p1.extend(p.s.iter().cloned());
    p2.extend(p.t.iter().cloned());
    let mut line = vec![Coefficient::one(mode), p.z.clone()];
    for j in 0..m {
        let s = Coefficient::from_real(p.s[j].clone());
        let t = Coefficient::from_real(p.t[j].clone());
        line.push(s.add(&p.z.mul(&t)));
    }
    FlagPoint { line, plane: (p1, p2) }
}

/// Dehomogenize the line generator into the affine chart of ℂℙⁿ whose first
/// homogeneous coordinate is 1. Composed with [`flag_lift`] this is exactly
/// the blow-down.
pub fn mu_projection(fp: &FlagPoint) -> Result<Vec<Coefficient>, GeometryError> {
    let g0 = &fp.line[0];
    if g0.is_zero() {
        return Err(GeometryError::AtInfinity);
    }
    Ok(fp.line[1..].iter().map(|g| g.div(g0)).collect())
}

/// For a line not in ℝℙⁿ, the unique real 2-plane whose complexification
/// contains it: write the generator as `xi + i eta`; the plane is
/// `span{xi, eta}`. Returns `None` when `xi` and `eta` are dependent (the
/// line is real and the plane is not unique).
pub fn plane_from_line(line: &[Coefficient]) -> Option<(Vec<Real>, Vec<Real>)> {
    let xi: Vec<Real> = line.iter().map(|c| c.re()).collect();
    let eta: Vec<Real> = line.iter().map(|c| c.im()).collect();
    let rows: Vec<Vec<Coefficient>> = vec![
        xi.iter().map(|r| Coefficient::from_real(r.clone())).collect(),
        eta.iter().map(|r| Coefficient::from_real(r.clone())).collect(),
    ];
    let rank = match line[0].mode() {
        Mode::Exact => rank_exact_complex(&rows),
        Mode::Float => {
            let fr: Vec<Vec<Complex<f64>>> =
                rows.iter().map(|r| r.iter().map(|c| c.to_complex64()).collect()).collect();
            rank_float_complex(&fr, 1e-10)
        }
    };
    if rank == 2 {
        Some((xi, eta))
    } else {
        None
    }
}

/// Whether two 2-planes given by bases span the same subspace.
pub fn same_plane(a: &(Vec<Real>, Vec<Real>), b: &(Vec<Real>, Vec<Real>)) -> bool {
    let to_row = |v: &Vec<Real>| -> Vec<Coefficient> {
        v.iter().map(|r| Coefficient::from_real(r.clone())).collect()
    };
    let rows_a = vec![to_row(&a.0), to_row(&a.1)];
    let mut rows_all = rows_a.clone();
    rows_all.push(to_row(&b.0));
    rows_all.push(to_row(&b.1));
    rank_exact_complex(&rows_a) == rank_exact_complex(&rows_all)
        && rank_exact_complex(&rows_a) == 2
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qr(n: i64, d: i64) -> Real {
        Real::from_ratio(Mode::Exact, n, d)
    }

    fn qc(re: (i64, i64), im: (i64, i64)) -> Coefficient {
        Coefficient::from_parts(
            Real::from_ratio(Mode::Exact, re.0, re.1),
            Real::from_ratio(Mode::Exact, im.0, im.1),
        )
    }

    #[test]
    fn blow_down_origin_and_direct() {
        let chart = Chart::new(2, 0).unwrap();
        let origin =
            ChartPoint::new(Coefficient::zero(Mode::Exact), vec![qr(0, 1)], vec![qr(0, 1)])
                .unwrap();
        let img = blow_down(&chart, &origin).unwrap();
        assert!(img[0].is_zero() && img[1].is_zero());

        // (z, s, t) = (i, 1, 2) -> (i, 1 + 2i)
        let p = ChartPoint::new(Coefficient::i(Mode::Exact), vec![qr(1, 1)], vec![qr(2, 1)])
            .unwrap();
        let img = blow_down(&chart, &p).unwrap();
        assert_eq!(img[0], Coefficient::i(Mode::Exact));
        assert_eq!(img[1], qc((1, 1), (2, 1)));
    }

    #[test]
    fn blow_down_injective_on_fibers_off_sigma() {
        // Im z != 0: distinct t give distinct images (s + z t = s + z t' forces t = t')
        let chart = Chart::new(3, 0).unwrap();
        let z = qc((1, 2), (3, 1));
        let p1 = ChartPoint::new(z.clone(), vec![qr(1, 3), qr(0, 1)], vec![qr(2, 1), qr(5, 7)])
            .unwrap();
        let p2 = ChartPoint::new(z.clone(), vec![qr(1, 3), qr(0, 1)], vec![qr(2, 1), qr(4, 7)])
            .unwrap();
        assert_ne!(blow_down(&chart, &p1).unwrap(), blow_down(&chart, &p2).unwrap());
    }

    #[test]
    fn transition_identity_and_roundtrip() {
        let c0 = Chart::new(3, 0).unwrap();
        let c2 = Chart::new(3, 2).unwrap();
        let p = ChartPoint::new(
            qc((1, 2), (-2, 3)),
            vec![qr(1, 1), qr(-1, 2)],
            vec![qr(3, 4), qr(5, 1)],
        )
        .unwrap();
        assert_eq!(chart_transition(&c0, &c0, &p).unwrap(), p);

        let q = chart_transition(&c0, &c2, &p).unwrap();
        // blow-down must be preserved
        assert_eq!(blow_down(&c2, &q).unwrap(), blow_down(&c0, &p).unwrap());
        // and the roundtrip recovers p exactly
        let back = chart_transition(&c2, &c0, &q).unwrap();
        assert_eq!(back, p);
    }

    #[test]
    fn transition_outside_chart() {
        let c0 = Chart::new(2, 0).unwrap();
        let c1 = Chart::new(2, 1).unwrap();
        // t = 0: fiber coordinate in direction 1 vanishes
        let p = ChartPoint::new(qc((1, 1), (1, 1)), vec![qr(1, 1)], vec![qr(0, 1)]).unwrap();
        assert_eq!(chart_transition(&c0, &c1, &p), Err(GeometryError::OutsideChart));
    }

    #[test]
    fn frame_annihilates_solutions() {
        // L_1 (s + z t) = z - z = 0; L_0 kills zbar-free series; L_1 t = 1
        let vars = chart_vars(1);
        let z = Series::variable(vars.clone(), 6, Mode::Exact, "z").unwrap();
        let s = Series::variable(vars.clone(), 6, Mode::Exact, "s1").unwrap();
        let t = Series::variable(vars.clone(), 6, Mode::Exact, "t1").unwrap();
        let w = s.add(&z.mul(&t).unwrap()).unwrap();
        assert!(apply_field(2, 1, &w).unwrap().is_zero());
        assert!(apply_field(2, 0, &w).unwrap().is_zero());
        let lt = apply_field(2, 1, &t).unwrap();
        assert_eq!(lt, Series::constant(vars, 6, Coefficient::one(Mode::Exact)).unwrap());
    }

    #[test]
    fn involutivity_small_n() {
        for n in 1..=4 {
            let residuals = check_involutivity(n).unwrap();
            if n == 1 {
                assert!(residuals.is_empty());
            }
            for r in residuals {
                assert!(r.is_zero(), "[{}, {}] != 0", r.left, r.right);
            }
        }
    }

    #[test]
    fn rank_jump_across_sigma() {
        // On Sigma: n - 1; off Sigma: 0
        for n in 1..=4 {
            let m = n - 1;
            let on = ChartPoint::new(
                Coefficient::from_ratio(Mode::Exact, 1, 3),
                vec![qr(1, 2); m],
                vec![qr(-2, 5); m],
            )
            .unwrap();
            assert_eq!(rank_v_cap_vbar(&on, n, 1e-10).unwrap(), n - 1);
            let off = ChartPoint::new(qc((1, 3), (1, 7)), vec![qr(1, 2); m], vec![qr(-2, 5); m])
                .unwrap();
            assert_eq!(rank_v_cap_vbar(&off, n, 1e-10).unwrap(), 0);
        }
    }

    #[test]
    fn flag_lift_origin_and_mu() {
        // origin lifts to (span{e1}, span{e1, e2})
        let origin =
            ChartPoint::new(Coefficient::zero(Mode::Exact), vec![qr(0, 1)], vec![qr(0, 1)])
                .unwrap();
        let fp = flag_lift(&origin);
        assert_eq!(fp.line[0], Coefficient::one(Mode::Exact));
        assert!(fp.line[1].is_zero() && fp.line[2].is_zero());
        assert!(fp.line_in_complexified_plane());

        // mu o lift = blow-down, exactly
        let chart = Chart::new(3, 0).unwrap();
        let p = ChartPoint::new(
            qc((2, 3), (-1, 4)),
            vec![qr(1, 5), qr(7, 2)],
            vec![qr(-3, 1), qr(2, 9)],
        )
        .unwrap();
        let fp = flag_lift(&p);
        assert!(fp.line_in_complexified_plane());
        assert_eq!(mu_projection(&fp).unwrap(), blow_down(&chart, &p).unwrap());

        // off the real locus the plane is recovered uniquely from the line
        let (xi, eta) = plane_from_line(&fp.line).unwrap();
        assert!(same_plane(&(xi, eta), &fp.plane));
    }

    #[test]
    fn mu_at_infinity() {
        let fp = FlagPoint {
            line: vec![
                Coefficient::zero(Mode::Exact),
                Coefficient::one(Mode::Exact),
                Coefficient::zero(Mode::Exact),
            ],
            plane: (
                vec![qr(0, 1), qr(1, 1), qr(0, 1)],
                vec![qr(0, 1), qr(0, 1), qr(1, 1)],
            ),
        };
        assert_eq!(mu_projection(&fp), Err(GeometryError::AtInfinity));
    }
}
