//! The constructive core: solution verification, layer decomposition, the
//! reconstruction of a holomorphic germ from a truncated solution, the
//! inhomogeneous system, and growth certificates.
//!
//! A chart series `f(z, zbar, s, t)` truncated at `D` is a solution when
//! `L_0 f = 0` and `L_j f = 0` for the frame fields. Expanding
//! `f = Σ a_k(s, t) z^k`, the frame equations become the recursion
//! `∂_t a_0 = 0`, `∂_{t_j} a_k = ∂_{s_j} a_{k-1}`, whose closed form is
//!
//! ```text
//! a_k = Σ_{|alpha| <= k} t^alpha ∂_s^alpha b_{k-|alpha|} / alpha!
//! ```
//!
//! with `b_k = a_k |_{t=0}`. Reassembling the `b_k` coefficients yields a
//! germ `h(z, w)` with `f = h(z, s + z t)` on all stored degrees.
//!
//! Degree bookkeeping: from `f` truncated at `D`, the layer `a_k` is only
//! known to (s, t)-degree `D - k`, so recursion residuals are compared on
//! degrees `<= D - k - 1` and germ coefficients are claimed only for
//! `k + |alpha| <= D`.

use num::{BigRational, BigUint, ToPrimitive};
use thiserror::Error;

use crate::coeff::{Coefficient, ExactComplex, Mode, Real};
use crate::geometry::frame;
use crate::multiindex::MultiIndex;
use crate::series::{chart_vars, germ_vars, s_vars, Series, SeriesError};

/// Relative tolerance for float-mode consistency checks. Exact mode always
/// compares structurally.
const FLOAT_RESIDUAL_TOL: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EngineError {
    #[error("not a solution: recursion fails at layer {layer} (residual {residual:.3e})")]
    NotASolution { layer: usize, residual: f64 },
    #[error("series depends on zbar")]
    ZbarDependence,
    #[error("nonzero u is not supported (the system is solved with u = 0)")]
    UnsupportedInhomogeneity,
    #[error("one-form is not closed: the (s_{i}, s_{j}) component of dv is nonzero")]
    NotClosed { i: usize, j: usize },
    #[error("L_{component} f depends on more than s")]
    NotPureS { component: usize },
    #[error("certificate of an identically zero series")]
    EmptySeries,
    #[error("internal residual check failed for {field}")]
    ResidualCheckFailed { field: String },
    #[error(transparent)]
    Series(#[from] SeriesError),
}

fn infer_chart_m(f: &Series) -> Result<usize, EngineError> {
    let len = f.variables().len();
    if len >= 2 && len % 2 == 0 {
        let m = (len - 2) / 2;
        if f.variables() == chart_vars(m) {
            return Ok(m);
        }
    }
    Err(EngineError::Series(SeriesError::VariableMismatch {
        left: f.variables().to_vec(),
        right: vec!["z".into(), "zbar".into(), "s…".into(), "t…".into()],
    }))
}

fn is_effectively_zero(s: &Series, scale: f64) -> bool {
    match s.mode() {
        Mode::Exact => s.is_zero(),
        Mode::Float => s.max_coeff_modulus_f64() <= FLOAT_RESIDUAL_TOL * scale.max(1.0),
    }
}

fn factorial_coeff(mode: Mode, alpha: &MultiIndex) -> Coefficient {
    let f: BigUint = alpha.factorial();
    match mode {
        Mode::Exact => Coefficient::Exact(ExactComplex::new(
            BigRational::from_integer(f.into()),
            BigRational::from_integer(0.into()),
        )),
        Mode::Float => Coefficient::from_real(Real::Float(f.to_f64().unwrap_or(f64::MAX))),
    }
}

/// `1 / alpha!` in the requested mode.
fn inv_factorial(mode: Mode, alpha: &MultiIndex) -> Coefficient {
    Coefficient::one(mode).div(&factorial_coeff(mode, alpha))
}

/// Pull a germ back along the blow-down: substitute `w_j := s_j + z t_j`.
/// The result is annihilated by every frame field; `d_target >= 2 deg(h)`
/// keeps the expansion lossless.
pub fn pullback(h: &Series, d_target: u32) -> Result<Series, EngineError> {
    Ok(h.substitute(d_target)?)
}

/// Residual of one frame field in a verification report.
#[derive(Clone, Debug)]
pub struct FieldResidual {
    pub label: String,
    pub max_abs: f64,
    pub exact_zero: bool,
}

/// Result of [`verify_solution`]: one residual per frame field.
#[derive(Clone, Debug)]
pub struct ResidualReport {
    pub per_field: Vec<FieldResidual>,
}

impl ResidualReport {
    pub fn all_zero(&self) -> bool {
        self.per_field.iter().all(|r| r.exact_zero)
    }

    pub fn all_below(&self, tol: f64) -> bool {
        self.per_field.iter().all(|r| r.max_abs < tol)
    }
}

/// Apply every frame field to `f` and report residual norms. Residuals are
/// windowed to degree `D - 1`: the `z ∂_s` term can move dropped
/// degree-`D+1` information into degree `D`, so the top degree is not a
/// fair test.
pub fn verify_solution(f: &Series) -> Result<ResidualReport, EngineError> {
    let m = infer_chart_m(f)?;
    let window = f.truncation().saturating_sub(1);
    let fields = frame(m + 1).expect("frame for n >= 1");
    let mut per_field = Vec::with_capacity(m + 1);
    for (idx, field) in fields.iter().enumerate() {
        let residual = field.apply(f)?.truncated(window);
        per_field.push(FieldResidual {
            label: format!("L{idx}"),
            max_abs: residual.max_coeff_modulus_f64(),
            exact_zero: residual.is_zero(),
        });
    }
    Ok(ResidualReport { per_field })
}

/// The expansion `f = Σ a_k z^k` of a zbar-free chart series: layer `a_k`
/// lives in `(s, t)` with truncation `D - k`.
#[derive(Clone, Debug)]
pub struct LayerDecomposition {
    layers: Vec<Series>,
    m: usize,
    source_truncation: u32,
}

impl LayerDecomposition {
    /// Split off the `z`-layers. Errors with `ZbarDependence` if `f`
    /// involves `zbar`.
    pub fn of(f: &Series) -> Result<Self, EngineError> {
        let m = infer_chart_m(f)?;
        if f.depends_on("zbar")? {
            return Err(EngineError::ZbarDependence);
        }
        let d = f.truncation();
        let mut layers = Vec::with_capacity(d as usize + 1);
        for k in 0..=d {
            let layer = f.extract_layer("z", k)?.remove_vars(&["zbar"])?;
            layers.push(layer);
        }
        Ok(LayerDecomposition { layers, m, source_truncation: d })
    }

    pub fn layers(&self) -> &[Series] {
        &self.layers
    }

    pub fn layer(&self, k: usize) -> &Series {
        &self.layers[k]
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn source_truncation(&self) -> u32 {
        self.source_truncation
    }

    /// Degree of layer `k` in the `t` variables.
    pub fn t_degree(&self, k: usize) -> u32 {
        self.layers[k]
            .terms()
            .map(|(idx, _)| idx.exponents()[self.m..].iter().sum::<u32>())
            .max()
            .unwrap_or(0)
    }

    /// `Σ z^k a_k` back as a chart series; inverse of [`LayerDecomposition::of`].
    pub fn reassemble(&self) -> Result<Series, EngineError> {
        let vars = chart_vars(self.m);
        let mode = self.layers[0].mode();
        let mut terms = Vec::new();
        for (k, layer) in self.layers.iter().enumerate() {
            for (idx, c) in layer.terms() {
                // layer index order is (s.., t..); chart order prepends (z, zbar)
                let mut e = vec![k as u32, 0];
                e.extend_from_slice(idx.exponents());
                terms.push((MultiIndex::new(e), c.clone()));
            }
        }
        Ok(Series::from_terms(vars, self.source_truncation, mode, terms)?)
    }
}

/// The `t = 0` restrictions `b_k` of the layers of a solution, each a
/// series in `s` with truncation `D - k`.
#[derive(Clone, Debug, PartialEq)]
pub struct BSequence {
    b: Vec<Series>,
    m: usize,
    source_truncation: u32,
}

impl BSequence {
    pub fn new(b: Vec<Series>, m: usize, source_truncation: u32) -> Result<Self, EngineError> {
        if b.len() != source_truncation as usize + 1 {
            return Err(EngineError::Series(SeriesError::ArityMismatch {
                expected: source_truncation as usize + 1,
                got: b.len(),
            }));
        }
        for bk in &b {
            if bk.variables() != s_vars(m) {
                return Err(EngineError::Series(SeriesError::VariableMismatch {
                    left: bk.variables().to_vec(),
                    right: s_vars(m),
                }));
            }
        }
        Ok(BSequence { b, m, source_truncation })
    }

    pub fn components(&self) -> &[Series] {
        &self.b
    }

    pub fn get(&self, k: usize) -> &Series {
        &self.b[k]
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn source_truncation(&self) -> u32 {
        self.source_truncation
    }

    /// The closed-form layer `Σ_{|alpha| <= k} t^alpha ∂_s^alpha
    /// b_{k-|alpha|} / alpha!` as a series in `(s, t)`, truncated to `D - k`.
    pub fn expected_layer(&self, k: u32) -> Result<Series, EngineError> {
        let m = self.m;
        let mode = self.b[0].mode();
        let layer_trunc = self.source_truncation - k;
        let mut st_vars = s_vars(m);
        st_vars.extend((1..=m).map(|j| format!("t{j}")));
        let mut acc = Series::zero(st_vars.clone(), layer_trunc, mode)?;
        for deg in 0..=k {
            for alpha in MultiIndex::with_total_degree(m, deg) {
                let b_idx = (k - deg) as usize;
                let spec: Vec<(String, u32)> =
                    (0..m).map(|j| (format!("s{}", j + 1), alpha.get(j))).collect();
                let derived = self.b[b_idx].derive_multi(&spec)?;
                if derived.is_zero() {
                    continue;
                }
                // t^alpha * derived / alpha!
                let scale = inv_factorial(mode, &alpha);
                let mut terms = Vec::new();
                for (idx, c) in derived.terms() {
                    let mut e = idx.exponents().to_vec();
                    e.extend(alpha.exponents());
                    terms.push((MultiIndex::new(e), c.mul(&scale)));
                }
                let term =
                    Series::from_terms(st_vars.clone(), self.source_truncation, mode, terms)?;
                acc = acc.add(&term.truncated(layer_trunc))?;
            }
        }
        Ok(acc)
    }
}

/// Run the recursion `∂_t a_0 = 0`, `∂_{t_j} a_k = ∂_{s_j} a_{k-1}` on a
/// layer decomposition, extract `b_k = a_k |_{t=0}`, and verify the closed
/// form against every stored degree. Fails with the offending layer.
pub fn reconstruct_b(layers: &LayerDecomposition) -> Result<BSequence, EngineError> {
    let m = layers.m();
    let d = layers.source_truncation();
    let t_names: Vec<String> = (1..=m).map(|j| format!("t{j}")).collect();
    for k in 0..=d as usize {
        let a_k = layers.layer(k);
        let scale = a_k.max_coeff_modulus_f64();
        let depth = d - k as u32;
        if depth == 0 {
            continue; // a_D is a constant; no residual window remains
        }
        let window = depth - 1;
        for (t_slot, t_name) in t_names.iter().enumerate() {
            let dt = a_k.derive(t_name)?;
            let residual = if k == 0 {
                dt
            } else {
                let ds = layers.layer(k - 1).derive(&format!("s{}", t_slot + 1))?;
                dt.sub(&ds)?
            };
            let windowed = residual.truncated(window);
            if !is_effectively_zero(&windowed, scale) {
                return Err(EngineError::NotASolution {
                    layer: k,
                    residual: windowed.max_coeff_modulus_f64(),
                });
            }
        }
    }
    let t_refs: Vec<&str> = t_names.iter().map(|s| s.as_str()).collect();
    let b: Vec<Series> = layers
        .layers()
        .iter()
        .map(|a_k| a_k.restrict_zero(&t_refs))
        .collect::<Result<_, _>>()?;
    let seq = BSequence { b, m, source_truncation: d };
    // the closed form must reproduce every stored degree of every layer
    for k in 0..=d {
        let expected = seq.expected_layer(k)?;
        let actual = layers.layer(k as usize);
        let diff = expected.sub(actual)?;
        if !is_effectively_zero(&diff, actual.max_coeff_modulus_f64()) {
            return Err(EngineError::NotASolution {
                layer: k as usize,
                residual: diff.max_coeff_modulus_f64(),
            });
        }
    }
    Ok(seq)
}

/// Germ coefficients `c_{k,alpha} = alpha! * [s^alpha] b_k`, the data of
/// `h(z, w) = Σ c_{k,alpha} z^k w^alpha / alpha!` over `k + |alpha| <= D`.
#[derive(Clone, Debug, PartialEq)]
pub struct GermCoefficients {
    entries: std::collections::BTreeMap<(u32, MultiIndex), Coefficient>,
}

impl GermCoefficients {
    pub fn from_b(b: &BSequence) -> Self {
        let mut entries = std::collections::BTreeMap::new();
        for (k, bk) in b.components().iter().enumerate() {
            let mode = bk.mode();
            for (alpha, c) in bk.terms() {
                let scaled = c.mul(&factorial_coeff(mode, alpha));
                entries.insert((k as u32, alpha.clone()), scaled);
            }
        }
        GermCoefficients { entries }
    }

    pub fn get(&self, k: u32, alpha: &MultiIndex) -> Option<&Coefficient> {
        self.entries.get(&(k, alpha.clone()))
    }

    pub fn iter(&self) -> impl Iterator<Item = (&(u32, MultiIndex), &Coefficient)> {
        self.entries.iter()
    }
}

/// Assemble the germ `h(z, w) = Σ z^k w^alpha [s^alpha] b_k` (the
/// `1/alpha!` of the coefficient definition cancels against the Taylor
/// factor), truncated at the source `D`.
pub fn assemble_germ(b: &BSequence) -> Result<Series, EngineError> {
    let m = b.m();
    let mode = b.components()[0].mode();
    let d = b.source_truncation();
    let mut terms = Vec::new();
    for (k, bk) in b.components().iter().enumerate() {
        for (alpha, c) in bk.terms() {
            let mut e = vec![k as u32];
            e.extend(alpha.exponents());
            terms.push((MultiIndex::new(e), c.clone()));
        }
    }
    Ok(Series::from_terms(germ_vars(m), d, mode, terms)?)
}

/// Full reconstruction: layers, recursion, assembly. For a solution `f`,
/// `pullback(result)` agrees with `f` on every degree `<= D`.
pub fn hypocomplex_reconstruct(f: &Series) -> Result<Series, EngineError> {
    let layers = LayerDecomposition::of(f)?;
    let b = reconstruct_b(&layers)?;
    assemble_germ(&b)
}

/// The inhomogeneous right-hand side `(v_1, .., v_m)`, each a series in `s`.
#[derive(Clone, Debug, PartialEq)]
pub struct OneForm {
    components: Vec<Series>,
}

impl OneForm {
    pub fn new(components: Vec<Series>) -> Result<Self, EngineError> {
        let m = components.len();
        if m == 0 {
            return Err(EngineError::Series(SeriesError::ArityMismatch { expected: 1, got: 0 }));
        }
        let mode = components[0].mode();
        for v in &components {
            if v.variables() != s_vars(m) {
                return Err(EngineError::Series(SeriesError::VariableMismatch {
                    left: v.variables().to_vec(),
                    right: s_vars(m),
                }));
            }
            if v.mode() != mode {
                return Err(EngineError::Series(SeriesError::ModeMismatch));
            }
        }
        Ok(OneForm { components })
    }

    pub fn m(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[Series] {
        &self.components
    }

    pub fn mode(&self) -> Mode {
        self.components[0].mode()
    }

    pub fn max_degree(&self) -> u32 {
        self.components.iter().map(|v| v.max_total_degree()).max().unwrap_or(0)
    }
}

/// One closedness residual `∂_{s_i} v_j - ∂_{s_j} v_i`.
#[derive(Clone, Debug)]
pub struct PairResidual {
    pub i: usize,
    pub j: usize,
    pub max_abs: f64,
    pub exact_zero: bool,
}

#[derive(Clone, Debug)]
pub struct CompatibilityReport {
    pub pairs: Vec<PairResidual>,
    pub closed: bool,
}

/// Verify the compatibility conditions for the system with `u = 0`:
/// `∂_{s_i} v_j = ∂_{s_j} v_i` for all pairs, i.e. `v_j ds^j` is closed.
/// A nonzero `u` is rejected outright.
pub fn check_compatibility(v: &OneForm, u: &Series) -> Result<CompatibilityReport, EngineError> {
    if !u.is_zero() {
        return Err(EngineError::UnsupportedInhomogeneity);
    }
    let mut pairs = Vec::new();
    let mut closed = true;
    for i in 0..v.m() {
        for j in (i + 1)..v.m() {
            let lhs = v.components()[j].derive(&format!("s{}", i + 1))?;
            let rhs = v.components()[i].derive(&format!("s{}", j + 1))?;
            let residual = lhs.sub(&rhs)?;
            let exact_zero = is_effectively_zero(&residual, 1.0);
            closed &= exact_zero;
            pairs.push(PairResidual {
                i: i + 1,
                j: j + 1,
                max_abs: residual.max_coeff_modulus_f64(),
                exact_zero,
            });
        }
    }
    Ok(CompatibilityReport { pairs, closed })
}

fn closedness_or_error(v: &OneForm) -> Result<(), EngineError> {
    let u = Series::zero(s_vars(v.m()), 0, v.mode())?;
    let report = check_compatibility(v, &u)?;
    if let Some(bad) = report.pairs.iter().find(|p| !p.exact_zero) {
        return Err(EngineError::NotClosed { i: bad.i, j: bad.j });
    }
    Ok(())
}

/// Component `alpha` (with `|alpha| = k + 1`) of the symmetric tensor
/// `∂_s^k v`: by closedness this is `∂_s^{alpha - e_j} v_j` for any `j`
/// with `alpha_j >= 1`; the smallest such `j` is used.
fn symmetric_tensor_component(v: &OneForm, alpha: &MultiIndex) -> Result<Series, EngineError> {
    let j = (0..v.m()).find(|&j| alpha.get(j) >= 1).expect("alpha has positive degree");
    let reduced = alpha.step_down(j).unwrap();
    let spec: Vec<(String, u32)> =
        (0..v.m()).map(|i| (format!("s{}", i + 1), reduced.get(i))).collect();
    v.components()[j].derive_multi(&spec).map_err(EngineError::Series)
}

/// Solve `∂_zbar f = 0`, `L_j f = v_j(s)` with the canonical choice of
/// vanishing homogeneous part: every layer is
/// `a_k = Σ_{|alpha| = k+1} t^alpha (∂_s^k v)_alpha / alpha!`. The general
/// solution is this plus an arbitrary pullback.
pub fn inhomogeneous_solve(v: &OneForm, d: u32) -> Result<Series, EngineError> {
    closedness_or_error(v)?;
    let m = v.m();
    let mode = v.mode();
    let vars = chart_vars(m);
    let mut terms: Vec<(MultiIndex, Coefficient)> = Vec::new();
    let mut needed: u32 = 0;
    for k in 0..=v.max_degree() {
        for alpha in MultiIndex::with_total_degree(m, k + 1) {
            let tensor = symmetric_tensor_component(v, &alpha)?;
            if tensor.is_zero() {
                continue;
            }
            let scale = inv_factorial(mode, &alpha);
            for (s_idx, c) in tensor.terms() {
                // chart order (z, zbar, s.., t..)
                let mut e = vec![k, 0];
                e.extend(s_idx.exponents());
                e.extend(alpha.exponents());
                let idx = MultiIndex::new(e);
                needed = needed.max(idx.total_degree());
                terms.push((idx, c.mul(&scale)));
            }
        }
    }
    if needed > d {
        return Err(EngineError::Series(SeriesError::TruncationTooSmall { needed, got: d }));
    }
    let f = Series::from_terms(vars.clone(), d, mode, terms)?;
    // residual check before returning: L_j f must reproduce v_j on the
    // window; f is zbar-free by construction
    let fields = frame(m + 1).expect("frame");
    for j in 1..=m {
        let lhs = fields[j].apply(&f)?;
        let vj = v.components()[j - 1].embed(vars.clone())?;
        let residual = lhs.sub(&vj.truncated(d))?.truncated(d.saturating_sub(1));
        if !is_effectively_zero(&residual, vj.max_coeff_modulus_f64()) {
            return Err(EngineError::ResidualCheckFailed { field: format!("L{j}") });
        }
    }
    Ok(f)
}

/// Recover the inhomogeneity of a zbar-free chart series: `v_j := L_j f`,
/// which must depend on `s` alone. Inverse of [`inhomogeneous_solve`] on
/// its image.
pub fn recover_inhomogeneity(f: &Series) -> Result<OneForm, EngineError> {
    let m = infer_chart_m(f)?;
    if f.depends_on("zbar")? {
        return Err(EngineError::ZbarDependence);
    }
    let window = f.truncation().saturating_sub(1);
    let fields = frame(m + 1).expect("frame");
    let mut components = Vec::with_capacity(m);
    for j in 1..=m {
        let vj = fields[j].apply(f)?.truncated(window);
        let mut forbidden: Vec<String> = vec!["z".into(), "zbar".into()];
        forbidden.extend((1..=m).map(|i| format!("t{i}")));
        for name in &forbidden {
            if vj.depends_on(name)? {
                return Err(EngineError::NotPureS { component: j });
            }
        }
        let refs: Vec<&str> = forbidden.iter().map(|s| s.as_str()).collect();
        components.push(vj.remove_vars(&refs)?);
    }
    OneForm::new(components)
}

/// Growth estimate for the Taylor data of `g`:
/// `M = max_{|alpha| >= 1} |c_alpha|^{1/|alpha|}` (root test on the stored
/// coefficients, 0 when no such term exists) and `C = max(|c_0|, 1)`.
/// An estimate from finite data, not a proof of analyticity.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GrowthCertificate {
    pub c: f64,
    pub m: f64,
}

pub fn analyticity_certificate(g: &Series) -> Result<GrowthCertificate, EngineError> {
    if g.is_zero() {
        return Err(EngineError::EmptySeries);
    }
    let mut c0 = 0.0f64;
    let mut m = 0.0f64;
    for (idx, coeff) in g.terms() {
        let mag = coeff.to_complex64().norm();
        let deg = idx.total_degree();
        if deg == 0 {
            c0 = mag;
        } else {
            m = m.max(mag.powf(1.0 / f64::from(deg)));
        }
    }
    Ok(GrowthCertificate { c: c0.max(1.0), m })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one() -> Coefficient {
        Coefficient::one(Mode::Exact)
    }

    fn germ(m: usize, d: u32, terms: &[(&[u32], (i64, i64))]) -> Series {
        let list: Vec<(MultiIndex, Coefficient)> = terms
            .iter()
            .map(|(e, (n, den))| {
                (MultiIndex::new(e.to_vec()), Coefficient::from_ratio(Mode::Exact, *n, *den))
            })
            .collect();
        Series::from_terms(germ_vars(m), d, Mode::Exact, list).unwrap()
    }

    #[test]
    fn pullback_examples() {
        // h = 5 -> 5
        let c = germ(1, 0, &[(&[0, 0], (5, 1))]);
        let p = pullback(&c, 2).unwrap();
        assert_eq!(p.coefficient(&MultiIndex::zero(4)), Coefficient::from_ratio(Mode::Exact, 5, 1));
        // h = z w -> z s + z^2 t
        let h = germ(1, 2, &[(&[1, 1], (1, 1))]);
        let p = pullback(&h, 4).unwrap();
        assert_eq!(p.coefficient(&MultiIndex::new(vec![1, 0, 1, 0])), one());
        assert_eq!(p.coefficient(&MultiIndex::new(vec![2, 0, 0, 1])), one());
        assert_eq!(p.num_terms(), 2);
    }

    #[test]
    fn verify_solution_examples() {
        let h = germ(1, 2, &[(&[0, 2], (1, 1))]); // w^2
        let f = pullback(&h, 4).unwrap();
        assert!(verify_solution(&f).unwrap().all_zero());

        let vars = chart_vars(1);
        let zbar = Series::variable(vars.clone(), 4, Mode::Exact, "zbar").unwrap();
        let rep = verify_solution(&zbar).unwrap();
        assert!(!rep.all_zero());
        assert_eq!(rep.per_field[0].label, "L0");
        assert!((rep.per_field[0].max_abs - 1.0).abs() < 1e-15);
        assert!(rep.per_field[1].exact_zero);

        let t = Series::variable(vars, 4, Mode::Exact, "t1").unwrap();
        let rep = verify_solution(&t).unwrap();
        assert!(rep.per_field[0].exact_zero);
        assert!((rep.per_field[1].max_abs - 1.0).abs() < 1e-15);
    }

    #[test]
    fn reconstruct_b_of_w_squared() {
        let h = germ(1, 2, &[(&[0, 2], (1, 1))]);
        let f = pullback(&h, 4).unwrap();
        let layers = LayerDecomposition::of(&f).unwrap();
        assert_eq!(layers.reassemble().unwrap(), f);
        let b = reconstruct_b(&layers).unwrap();
        // b_0 = s^2, the rest vanish (a_1 = t ∂_s b_0 forces b_1 = 0)
        assert_eq!(b.get(0).coefficient(&MultiIndex::new(vec![2])), one());
        assert_eq!(b.get(0).num_terms(), 1);
        for k in 1..=4 {
            assert!(b.get(k).is_zero());
        }
    }

    #[test]
    fn reconstruct_constant_and_t_failure() {
        let vars = chart_vars(1);
        let c =
            Series::constant(vars.clone(), 3, Coefficient::from_ratio(Mode::Exact, 9, 2)).unwrap();
        let layers = LayerDecomposition::of(&c).unwrap();
        let b = reconstruct_b(&layers).unwrap();
        assert_eq!(
            b.get(0).coefficient(&MultiIndex::zero(1)),
            Coefficient::from_ratio(Mode::Exact, 9, 2)
        );
        assert!(b.get(1).is_zero());

        // f = t: fails at layer 0 since ∂_t a_0 = 1
        let t = Series::variable(vars, 3, Mode::Exact, "t1").unwrap();
        let layers = LayerDecomposition::of(&t).unwrap();
        assert!(matches!(reconstruct_b(&layers), Err(EngineError::NotASolution { layer: 0, .. })));
    }

    #[test]
    fn assemble_examples() {
        // b = (s^2, 0, 0) -> h = w^2
        let b0 =
            Series::from_terms(s_vars(1), 2, Mode::Exact, vec![(MultiIndex::new(vec![2]), one())])
                .unwrap();
        let b1 = Series::zero(s_vars(1), 1, Mode::Exact).unwrap();
        let b2 = Series::zero(s_vars(1), 0, Mode::Exact).unwrap();
        let b = BSequence::new(vec![b0, b1, b2], 1, 2).unwrap();
        let h = assemble_germ(&b).unwrap();
        assert_eq!(h.coefficient(&MultiIndex::new(vec![0, 2])), one());
        assert_eq!(h.num_terms(), 1);

        // b = (0, 1, 0) -> h = z
        let b0 = Series::zero(s_vars(1), 2, Mode::Exact).unwrap();
        let b1 = Series::constant(s_vars(1), 1, one()).unwrap();
        let b2 = Series::zero(s_vars(1), 0, Mode::Exact).unwrap();
        let b = BSequence::new(vec![b0, b1, b2], 1, 2).unwrap();
        let h = assemble_germ(&b).unwrap();
        assert_eq!(h.coefficient(&MultiIndex::new(vec![1, 0])), one());
        assert_eq!(h.num_terms(), 1);

        // c_{k,alpha} carries the alpha! factor: c_{0,(2)} = 2 for b_0 = s^2
        let b0 =
            Series::from_terms(s_vars(1), 2, Mode::Exact, vec![(MultiIndex::new(vec![2]), one())])
                .unwrap();
        let b1 = Series::zero(s_vars(1), 1, Mode::Exact).unwrap();
        let b2 = Series::zero(s_vars(1), 0, Mode::Exact).unwrap();
        let b = BSequence::new(vec![b0, b1, b2], 1, 2).unwrap();
        let coeffs = GermCoefficients::from_b(&b);
        assert_eq!(
            coeffs.get(0, &MultiIndex::new(vec![2])),
            Some(&Coefficient::from_int(Mode::Exact, 2))
        );
    }

    #[test]
    fn hypocomplex_roundtrip_and_failures() {
        // h = w^3 + z w at D = 6
        let h = germ(1, 6, &[(&[0, 3], (1, 1)), (&[1, 1], (1, 1))]);
        let f = pullback(&h, 6).unwrap();
        let back = hypocomplex_reconstruct(&f).unwrap();
        assert_eq!(back, h);

        // constants reconstruct to themselves
        let c =
            Series::constant(chart_vars(1), 2, Coefficient::from_ratio(Mode::Exact, 7, 1)).unwrap();
        let g = hypocomplex_reconstruct(&c).unwrap();
        assert_eq!(g.coefficient(&MultiIndex::zero(2)), Coefficient::from_ratio(Mode::Exact, 7, 1));

        // f = s is not a solution: layer 1 sees ∂_t a_1 = 0 but ∂_s a_0 = 1
        let s = Series::variable(chart_vars(1), 3, Mode::Exact, "s1").unwrap();
        assert!(matches!(
            hypocomplex_reconstruct(&s),
            Err(EngineError::NotASolution { layer: 1, .. })
        ));

        // zbar dependence is its own failure
        let zbar = Series::variable(chart_vars(1), 3, Mode::Exact, "zbar").unwrap();
        assert!(matches!(hypocomplex_reconstruct(&zbar), Err(EngineError::ZbarDependence)));
    }

    #[test]
    fn compatibility_examples() {
        // m = 1: closedness is vacuous
        let v =
            OneForm::new(vec![Series::variable(s_vars(1), 3, Mode::Exact, "s1").unwrap()]).unwrap();
        let u = Series::zero(s_vars(1), 0, Mode::Exact).unwrap();
        assert!(check_compatibility(&v, &u).unwrap().closed);

        // m = 2: (s2, s1) closed, (s2, 0) not
        let s2 = Series::variable(s_vars(2), 3, Mode::Exact, "s2").unwrap();
        let s1 = Series::variable(s_vars(2), 3, Mode::Exact, "s1").unwrap();
        let zero2 = Series::zero(s_vars(2), 3, Mode::Exact).unwrap();
        let u2 = Series::zero(s_vars(2), 0, Mode::Exact).unwrap();
        let closed = OneForm::new(vec![s2.clone(), s1]).unwrap();
        assert!(check_compatibility(&closed, &u2).unwrap().closed);
        let open = OneForm::new(vec![s2, zero2]).unwrap();
        let rep = check_compatibility(&open, &u2).unwrap();
        assert!(!rep.closed);
        assert!((rep.pairs[0].max_abs - 1.0).abs() < 1e-15);

        // nonzero u is rejected
        let ubad = Series::constant(s_vars(2), 0, one()).unwrap();
        assert!(matches!(
            check_compatibility(&open, &ubad),
            Err(EngineError::UnsupportedInhomogeneity)
        ));
    }

    #[test]
    fn inhomogeneous_examples() {
        // m = 1, v = (1): f = t
        let v = OneForm::new(vec![Series::constant(s_vars(1), 1, one()).unwrap()]).unwrap();
        let f = inhomogeneous_solve(&v, 3).unwrap();
        assert_eq!(f.coefficient(&MultiIndex::new(vec![0, 0, 0, 1])), one());
        assert_eq!(f.num_terms(), 1);

        // m = 1, v = (s): f = t s + z t^2 / 2
        let v = OneForm::new(vec![Series::variable(s_vars(1), 2, Mode::Exact, "s1").unwrap()])
            .unwrap();
        let f = inhomogeneous_solve(&v, 4).unwrap();
        assert_eq!(f.coefficient(&MultiIndex::new(vec![0, 0, 1, 1])), one());
        assert_eq!(
            f.coefficient(&MultiIndex::new(vec![1, 0, 0, 2])),
            Coefficient::from_ratio(Mode::Exact, 1, 2)
        );
        assert_eq!(f.num_terms(), 2);

        // recover the inhomogeneity
        let vr = recover_inhomogeneity(&f).unwrap();
        assert_eq!(vr.components()[0].coefficient(&MultiIndex::new(vec![1])), one());
        assert_eq!(vr.components()[0].num_terms(), 1);

        // m = 2, v = (s2, 0) is rejected
        let s2 = Series::variable(s_vars(2), 3, Mode::Exact, "s2").unwrap();
        let zero2 = Series::zero(s_vars(2), 3, Mode::Exact).unwrap();
        let open = OneForm::new(vec![s2, zero2]).unwrap();
        assert!(matches!(inhomogeneous_solve(&open, 8), Err(EngineError::NotClosed { i: 1, j: 2 })));

        // truncation must fit the full solution
        let v = OneForm::new(vec![Series::variable(s_vars(1), 2, Mode::Exact, "s1").unwrap()])
            .unwrap();
        assert!(matches!(
            inhomogeneous_solve(&v, 2),
            Err(EngineError::Series(SeriesError::TruncationTooSmall { .. }))
        ));
    }

    #[test]
    fn recover_failures() {
        // pullbacks recover the zero form
        let h = germ(1, 2, &[(&[0, 2], (1, 1))]);
        let f = pullback(&h, 4).unwrap();
        let v = recover_inhomogeneity(&f).unwrap();
        assert!(v.components()[0].is_zero());

        // f = t^2: L_1 f = 2t depends on t
        let t = Series::variable(chart_vars(1), 4, Mode::Exact, "t1").unwrap();
        let t2 = t.mul(&t).unwrap();
        assert!(matches!(recover_inhomogeneity(&t2), Err(EngineError::NotPureS { component: 1 })));
    }

    #[test]
    fn certificate_geometric_series() {
        // truncation of 1/(1 - s/2) to degree 12: coefficients 2^{-k}, M = 1/2
        let mut terms = Vec::new();
        for k in 0..=12u32 {
            terms.push((
                MultiIndex::new(vec![k]),
                Coefficient::from_ratio(Mode::Exact, 1, 1i64 << k),
            ));
        }
        let g = Series::from_terms(s_vars(1), 12, Mode::Exact, terms).unwrap();
        let cert = analyticity_certificate(&g).unwrap();
        assert!((cert.m - 0.5).abs() < 0.1 * 0.5, "M = {}", cert.m);

        // 1/(1 - 2s): coefficients 2^k, M = 2
        let mut terms = Vec::new();
        for k in 0..=12u32 {
            terms.push((
                MultiIndex::new(vec![k]),
                Coefficient::from_ratio(Mode::Exact, 1i64 << k, 1),
            ));
        }
        let g = Series::from_terms(s_vars(1), 12, Mode::Exact, terms).unwrap();
        let cert = analyticity_certificate(&g).unwrap();
        assert!((cert.m - 2.0).abs() < 0.1 * 2.0, "M = {}", cert.m);

        // constants: M = 0 by convention, C = |g| when >= 1
        let c = Series::constant(s_vars(1), 4, Coefficient::from_ratio(Mode::Exact, 3, 1)).unwrap();
        let cert = analyticity_certificate(&c).unwrap();
        assert_eq!(cert.m, 0.0);
        assert_eq!(cert.c, 3.0);

        // zero series is refused
        let z = Series::zero(s_vars(1), 4, Mode::Exact).unwrap();
        assert!(matches!(analyticity_certificate(&z), Err(EngineError::EmptySeries)));
    }

    #[test]
    fn layer_t_degree_bound() {
        // a_k of a solution has t-degree <= k
        let h = germ(2, 6, &[(&[0, 2, 1], (3, 2)), (&[1, 0, 2], (-1, 3)), (&[2, 1, 0], (5, 1))]);
        let f = pullback(&h, 12).unwrap();
        let layers = LayerDecomposition::of(&f).unwrap();
        for k in 0..=12usize {
            assert!(layers.t_degree(k) <= k as u32, "t-degree of a_{k} too big");
        }
    }
}
