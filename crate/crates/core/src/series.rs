//! Truncated multivariate power series over exact-rational or float complex
//! coefficients.
//!
//! A [`Series`] is a finite term map `MultiIndex -> Coefficient` under a
//! global total-degree truncation `D`: no stored term exceeds degree `D`,
//! and no stored coefficient is zero. Equality is structural (variables,
//! truncation, mode, terms), which in exact mode is exact equality.
//!
//! Two variable conventions are used throughout the crate:
//! chart series live in `(z, zbar, s1..sm, t1..tm)` and germ series in
//! `(z, w1..wm)`; see [`chart_vars`] and [`germ_vars`]. The wedge pipeline
//! additionally uses plain ambient coordinates `(z1..zn)`.
//!
//! All values are immutable after construction; every operation returns a
//! fresh series, so sharing across threads needs no synchronization.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::coeff::{Coefficient, Mode, Real};
use crate::multiindex::MultiIndex;

/// Hard cap on truncation orders. Keeps multi-index factorials and the
/// degree-enumeration loops comfortably bounded.
pub const MAX_TRUNCATION: u32 = 64;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SeriesError {
    #[error("variable sets differ: {left:?} vs {right:?}")]
    VariableMismatch { left: Vec<String>, right: Vec<String> },
    #[error("arithmetic mode mismatch (exact vs float)")]
    ModeMismatch,
    #[error("unknown variable {0:?}")]
    UnknownVariable(String),
    #[error("degree {k} out of range for truncation {truncation}")]
    DegreeOutOfRange { k: u32, truncation: u32 },
    #[error("target truncation {got} too small (need at least {needed})")]
    TruncationTooSmall { needed: u32, got: u32 },
    #[error("point arity {got} does not match variable count {expected}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("truncation {0} exceeds the supported maximum {MAX_TRUNCATION}")]
    TruncationLimit(u32),
    #[error("series still depends on variable {0:?}")]
    VariableInUse(String),
}

/// Variable names for a chart series: `z, zbar, s1..sm, t1..tm`.
pub fn chart_vars(m: usize) -> Vec<String> {
    let mut v = vec!["z".to_string(), "zbar".to_string()];
    for j in 1..=m {
        v.push(format!("s{j}"));
    }
    for j in 1..=m {
        v.push(format!("t{j}"));
    }
    v
}

/// Variable names for a germ series: `z, w1..wm`.
pub fn germ_vars(m: usize) -> Vec<String> {
    let mut v = vec!["z".to_string()];
    for j in 1..=m {
        v.push(format!("w{j}"));
    }
    v
}

/// Ambient coordinates `z1..zn` used by the wedge pipeline.
pub fn ambient_vars(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("z{i}")).collect()
}

/// The `s` variables alone (coefficient functions `b_k`, one-forms).
pub fn s_vars(m: usize) -> Vec<String> {
    (1..=m).map(|j| format!("s{j}")).collect()
}

/// Truncated multivariate power series. See the module docs for the
/// invariants; construction and every operation maintain them.
#[derive(Clone, PartialEq)]
pub struct Series {
    variables: Vec<String>,
    truncation: u32,
    mode: Mode,
    terms: BTreeMap<MultiIndex, Coefficient>,
}

impl Series {
    pub fn zero(variables: Vec<String>, truncation: u32, mode: Mode) -> Result<Self, SeriesError> {
        if truncation > MAX_TRUNCATION {
            return Err(SeriesError::TruncationLimit(truncation));
        }
        Ok(Series { variables, truncation, mode, terms: BTreeMap::new() })
    }

    pub fn constant(
        variables: Vec<String>,
        truncation: u32,
        value: Coefficient,
    ) -> Result<Self, SeriesError> {
        let mode = value.mode();
        let mut s = Series::zero(variables, truncation, mode)?;
        let idx = MultiIndex::zero(s.variables.len());
        s.insert_term(idx, value);
        Ok(s)
    }

    /// The series consisting of the single variable `name`.
    pub fn variable(
        variables: Vec<String>,
        truncation: u32,
        mode: Mode,
        name: &str,
    ) -> Result<Self, SeriesError> {
        let mut s = Series::zero(variables, truncation, mode)?;
        let v = s.var_index(name)?;
        if truncation < 1 {
            return Err(SeriesError::TruncationTooSmall { needed: 1, got: truncation });
        }
        let idx = MultiIndex::unit(s.variables.len(), v);
        s.insert_term(idx, Coefficient::one(mode));
        Ok(s)
    }

    /// Build from raw terms; zero coefficients are dropped, over-degree terms
    /// are rejected.
    pub fn from_terms(
        variables: Vec<String>,
        truncation: u32,
        mode: Mode,
        terms: impl IntoIterator<Item = (MultiIndex, Coefficient)>,
    ) -> Result<Self, SeriesError> {
        let mut s = Series::zero(variables, truncation, mode)?;
        for (idx, c) in terms {
            if idx.len() != s.variables.len() {
                return Err(SeriesError::ArityMismatch {
                    expected: s.variables.len(),
                    got: idx.len(),
                });
            }
            if idx.total_degree() > truncation {
                return Err(SeriesError::DegreeOutOfRange {
                    k: idx.total_degree(),
                    truncation,
                });
            }
            if c.mode() != mode {
                return Err(SeriesError::ModeMismatch);
            }
            let existing = s.terms.remove(&idx);
            let sum = match existing {
                Some(prev) => prev.add(&c),
                None => c,
            };
            s.insert_term(idx, sum);
        }
        Ok(s)
    }

    fn insert_term(&mut self, idx: MultiIndex, c: Coefficient) {
        debug_assert!(idx.total_degree() <= self.truncation);
        debug_assert_eq!(c.mode(), self.mode);
        if !c.is_zero() {
            self.terms.insert(idx, c);
        }
    }

    pub fn variables(&self) -> &[String] {
        &self.variables
    }

    pub fn truncation(&self) -> u32 {
        self.truncation
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &Coefficient)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coefficient at `idx`, zero if absent.
    pub fn coefficient(&self, idx: &MultiIndex) -> Coefficient {
        self.terms.get(idx).cloned().unwrap_or_else(|| Coefficient::zero(self.mode))
    }

    pub fn var_index(&self, name: &str) -> Result<usize, SeriesError> {
        self.variables
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| SeriesError::UnknownVariable(name.to_string()))
    }

    pub fn depends_on(&self, name: &str) -> Result<bool, SeriesError> {
        let v = self.var_index(name)?;
        Ok(self.terms.keys().any(|idx| idx.get(v) > 0))
    }

    /// Largest total degree among stored terms (0 for the zero series).
    pub fn max_total_degree(&self) -> u32 {
        self.terms.keys().map(|i| i.total_degree()).max().unwrap_or(0)
    }

    /// Degree in a single variable.
    pub fn degree_in(&self, name: &str) -> Result<u32, SeriesError> {
        let v = self.var_index(name)?;
        Ok(self.terms.keys().map(|i| i.get(v)).max().unwrap_or(0))
    }

    fn check_compatible(&self, other: &Series) -> Result<(), SeriesError> {
        if self.variables != other.variables {
            return Err(SeriesError::VariableMismatch {
                left: self.variables.clone(),
                right: other.variables.clone(),
            });
        }
        if self.mode != other.mode {
            return Err(SeriesError::ModeMismatch);
        }
        Ok(())
    }

    /// Termwise sum, truncated to `min(D_a, D_b)`.
    pub fn add(&self, other: &Series) -> Result<Series, SeriesError> {
        self.check_compatible(other)?;
        let trunc = self.truncation.min(other.truncation);
        let mut out = Series::zero(self.variables.clone(), trunc, self.mode)?;
        for (idx, c) in self.terms.iter().chain(other.terms.iter()) {
            if idx.total_degree() > trunc {
                continue;
            }
            let sum = out.coefficient(idx).add(c);
            out.terms.remove(idx);
            out.insert_term(idx.clone(), sum);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Series) -> Result<Series, SeriesError> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Series {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = c.neg();
        }
        out
    }

    /// Multiply every coefficient by a constant.
    pub fn scale(&self, k: &Coefficient) -> Result<Series, SeriesError> {
        if k.mode() != self.mode {
            return Err(SeriesError::ModeMismatch);
        }
        let mut out = Series::zero(self.variables.clone(), self.truncation, self.mode)?;
        for (idx, c) in &self.terms {
            out.insert_term(idx.clone(), c.mul(k));
        }
        Ok(out)
    }

    /// Cauchy product, truncated to `min(D_a, D_b)`.
    pub fn mul(&self, other: &Series) -> Result<Series, SeriesError> {
        self.check_compatible(other)?;
        let trunc = self.truncation.min(other.truncation);
        let mut acc: BTreeMap<MultiIndex, Coefficient> = BTreeMap::new();
        for (ia, ca) in &self.terms {
            let da = ia.total_degree();
            if da > trunc {
                continue;
            }
            for (ib, cb) in &other.terms {
                // graded order: all later ib have degree >= this one
                if da + ib.total_degree() > trunc {
                    break;
                }
                let idx = ia.add(ib);
                let prod = ca.mul(cb);
                match acc.get_mut(&idx) {
                    Some(c) => *c = c.add(&prod),
                    None => {
                        acc.insert(idx, prod);
                    }
                }
            }
        }
        let mut out = Series::zero(self.variables.clone(), trunc, self.mode)?;
        for (idx, c) in acc {
            out.insert_term(idx, c);
        }
        Ok(out)
    }

    /// Formal partial derivative. The truncation is kept at `D`, not lowered:
    /// degree-`D` information of the input is simply absent from the output,
    /// which is the caller's concern when comparing derivatives.
    pub fn derive(&self, var: &str) -> Result<Series, SeriesError> {
        let v = self.var_index(var)?;
        let mut out = Series::zero(self.variables.clone(), self.truncation, self.mode)?;
        for (idx, c) in &self.terms {
            if let Some(down) = idx.step_down(v) {
                out.insert_term(down, c.scale_int(idx.get(v) as u64));
            }
        }
        Ok(out)
    }

    /// Iterated derivative `∂^alpha` taken over the given variable slots.
    pub fn derive_multi(&self, alpha: &[(String, u32)]) -> Result<Series, SeriesError> {
        let mut out = self.clone();
        for (name, count) in alpha {
            for _ in 0..*count {
                out = out.derive(name)?;
            }
        }
        Ok(out)
    }

    /// Drop all terms above total degree `d` and lower the truncation.
    /// This is the lossy windowing operation used for residual comparisons.
    pub fn truncated(&self, d: u32) -> Series {
        let mut out =
            Series::zero(self.variables.clone(), d.min(self.truncation), self.mode).unwrap();
        for (idx, c) in &self.terms {
            if idx.total_degree() <= out.truncation {
                out.insert_term(idx.clone(), c.clone());
            }
        }
        out
    }

    /// Change the declared truncation without losing terms; refuses when a
    /// stored term would fall outside the new bound.
    pub fn retruncated(&self, d: u32) -> Result<Series, SeriesError> {
        if d > MAX_TRUNCATION {
            return Err(SeriesError::TruncationLimit(d));
        }
        let needed = self.max_total_degree();
        if d < needed {
            return Err(SeriesError::TruncationTooSmall { needed, got: d });
        }
        let mut out = self.clone();
        out.truncation = d;
        Ok(out)
    }

    /// Polynomial evaluation of the truncated series at a point, via Horner
    /// recursion over the variable slots.
    pub fn eval(&self, point: &[Coefficient]) -> Result<Coefficient, SeriesError> {
        if point.len() != self.variables.len() {
            return Err(SeriesError::ArityMismatch {
                expected: self.variables.len(),
                got: point.len(),
            });
        }
        for p in point {
            if p.mode() != self.mode {
                return Err(SeriesError::ModeMismatch);
            }
        }
        let entries: Vec<(&[u32], &Coefficient)> =
            self.terms.iter().map(|(i, c)| (i.exponents(), c)).collect();
        Ok(eval_rec(&entries, 0, point, self.mode))
    }

    /// The coefficient series `a_k` of `var^k`: terms with exponent `k` in
    /// `var`, with that slot removed. Result truncation is `D - k`.
    pub fn extract_layer(&self, var: &str, k: u32) -> Result<Series, SeriesError> {
        let v = self.var_index(var)?;
        if k > self.truncation {
            return Err(SeriesError::DegreeOutOfRange { k, truncation: self.truncation });
        }
        let mut vars = self.variables.clone();
        vars.remove(v);
        let mut out = Series::zero(vars, self.truncation - k, self.mode)?;
        for (idx, c) in &self.terms {
            if idx.get(v) == k {
                out.insert_term(idx.without(v), c.clone());
            }
        }
        Ok(out)
    }

    /// General substitution: replace every variable of `self` by the
    /// corresponding series in `images` (all over `target_vars`), expand, and
    /// truncate to `d_target`. Power tables are built per variable.
    pub fn compose(
        &self,
        images: &[Series],
        target_vars: &[String],
        d_target: u32,
    ) -> Result<Series, SeriesError> {
        if images.len() != self.variables.len() {
            return Err(SeriesError::ArityMismatch {
                expected: self.variables.len(),
                got: images.len(),
            });
        }
        for im in images {
            if im.variables() != target_vars {
                return Err(SeriesError::VariableMismatch {
                    left: im.variables.clone(),
                    right: target_vars.to_vec(),
                });
            }
            if im.mode() != self.mode {
                return Err(SeriesError::ModeMismatch);
            }
        }
        let one = Series::constant(
            target_vars.to_vec(),
            d_target,
            Coefficient::one(self.mode),
        )?;
        // powers[i][e] = images[i]^e truncated at d_target
        let mut powers: Vec<Vec<Series>> = images.iter().map(|_| vec![one.clone()]).collect();
        let mut out = Series::zero(target_vars.to_vec(), d_target, self.mode)?;
        for (idx, c) in &self.terms {
            let mut term = Series::constant(target_vars.to_vec(), d_target, c.clone())?;
            for (i, &e) in idx.exponents().iter().enumerate() {
                while powers[i].len() <= e as usize {
                    let next = powers[i].last().unwrap().mul(&images[i].truncated(d_target))?;
                    powers[i].push(next);
                }
                if e > 0 {
                    term = term.mul(&powers[i][e as usize])?;
                }
            }
            out = out.add(&term)?;
        }
        Ok(out)
    }

    /// Substitute `w_j := s_j + z t_j` into a germ series in `(z, w1..wm)`,
    /// producing a chart series in `(z, zbar, s, t)` truncated to `d_target`.
    ///
    /// Refuses `d_target < h.truncation` rather than silently losing terms.
    /// For a lossless polynomial roundtrip pick `d_target >= 2 * deg(h)`: a
    /// degree-d monomial in `w` expands to degree up to `2d` in `(z, s, t)`.
    pub fn substitute(&self, d_target: u32) -> Result<Series, SeriesError> {
        let m = self.variables.len().saturating_sub(1);
        if self.variables != germ_vars(m) {
            return Err(SeriesError::VariableMismatch {
                left: self.variables.clone(),
                right: germ_vars(m),
            });
        }
        if d_target < self.truncation {
            return Err(SeriesError::TruncationTooSmall {
                needed: self.truncation,
                got: d_target,
            });
        }
        let target = chart_vars(m);
        let mode = self.mode;
        let z = Series::variable(target.clone(), d_target, mode, "z")?;
        let mut images = vec![z.clone()];
        for j in 1..=m {
            let s_j = Series::variable(target.clone(), d_target, mode, &format!("s{j}"))?;
            let t_j = Series::variable(target.clone(), d_target, mode, &format!("t{j}"))?;
            images.push(s_j.add(&z.mul(&t_j)?)?);
        }
        self.compose(&images, &target, d_target)
    }

    /// Reinterpret over a superset of variables (exponent 0 on the new ones).
    pub fn embed(&self, superset: Vec<String>) -> Result<Series, SeriesError> {
        let positions: Vec<usize> = self
            .variables
            .iter()
            .map(|v| {
                superset
                    .iter()
                    .position(|u| u == v)
                    .ok_or_else(|| SeriesError::UnknownVariable(v.clone()))
            })
            .collect::<Result<_, _>>()?;
        let mut out = Series::zero(superset, self.truncation, self.mode)?;
        for (idx, c) in &self.terms {
            let mut e = vec![0u32; out.variables.len()];
            for (slot, &pos) in positions.iter().enumerate() {
                e[pos] = idx.get(slot);
            }
            out.insert_term(MultiIndex::new(e), c.clone());
        }
        Ok(out)
    }

    /// Remove variables the series does not depend on; errors with
    /// `VariableInUse` otherwise.
    pub fn remove_vars(&self, names: &[&str]) -> Result<Series, SeriesError> {
        let mut out = self.clone();
        for name in names {
            if out.depends_on(name)? {
                return Err(SeriesError::VariableInUse(name.to_string()));
            }
            let v = out.var_index(name)?;
            let mut vars = out.variables.clone();
            vars.remove(v);
            let mut next = Series::zero(vars, out.truncation, out.mode)?;
            for (idx, c) in &out.terms {
                next.insert_term(idx.without(v), c.clone());
            }
            out = next;
        }
        Ok(out)
    }

    /// Set the given variables to zero and remove them from the variable set
    /// (the `t = 0` restriction of the reconstruction).
    pub fn restrict_zero(&self, names: &[&str]) -> Result<Series, SeriesError> {
        let slots: Vec<usize> =
            names.iter().map(|n| self.var_index(n)).collect::<Result<_, _>>()?;
        let mut out = self.clone();
        out.terms.retain(|idx, _| slots.iter().all(|&v| idx.get(v) == 0));
        out.remove_vars(names)
    }

    /// Same arity, new variable names (e.g. `s_j -> w_j` in germ assembly).
    pub fn with_variables(&self, names: Vec<String>) -> Result<Series, SeriesError> {
        if names.len() != self.variables.len() {
            return Err(SeriesError::ArityMismatch {
                expected: self.variables.len(),
                got: names.len(),
            });
        }
        let mut out = self.clone();
        out.variables = names;
        Ok(out)
    }

    /// Convert to float mode (exact coefficients rounded to doubles). The
    /// only supported mode conversion, and always explicit.
    pub fn to_float(&self) -> Series {
        let mut out =
            Series::zero(self.variables.clone(), self.truncation, Mode::Float).unwrap();
        for (idx, c) in &self.terms {
            out.insert_term(idx.clone(), c.to_float());
        }
        out
    }

    /// Max over terms of `max(|re|, |im|)`, exact within mode. Zero for the
    /// zero series.
    pub fn sup_coeff_norm(&self) -> Real {
        let mut best = Real::zero(self.mode);
        for c in self.terms.values() {
            let a = c.sup_abs();
            if best.cmp_same_mode(&a) == std::cmp::Ordering::Less {
                best = a;
            }
        }
        best
    }

    /// Max coefficient modulus as a double, for report display.
    pub fn max_coeff_modulus_f64(&self) -> f64 {
        self.terms.values().map(|c| c.to_complex64().norm()).fold(0.0, f64::max)
    }
}

fn eval_rec(
    entries: &[(&[u32], &Coefficient)],
    slot: usize,
    point: &[Coefficient],
    mode: Mode,
) -> Coefficient {
    if entries.is_empty() {
        return Coefficient::zero(mode);
    }
    if slot == point.len() {
        // all exponents consumed; at most one constant entry remains per group
        let mut acc = Coefficient::zero(mode);
        for (_, c) in entries {
            acc = acc.add(c);
        }
        return acc;
    }
    // group by exponent in this slot, descending, then Horner
    let mut groups: BTreeMap<u32, Vec<(&[u32], &Coefficient)>> = BTreeMap::new();
    for &(exps, c) in entries {
        groups.entry(exps[slot]).or_default().push((exps, c));
    }
    let mut acc = Coefficient::zero(mode);
    let mut prev_exp: Option<u32> = None;
    for (&e, group) in groups.iter().rev() {
        if let Some(p) = prev_exp {
            for _ in 0..(p - e) {
                acc = acc.mul(&point[slot]);
            }
        }
        let sub = eval_rec(group, slot + 1, point, mode);
        acc = acc.add(&sub);
        prev_exp = Some(e);
    }
    if let Some(p) = prev_exp {
        for _ in 0..p {
            acc = acc.mul(&point[slot]);
        }
    }
    acc
}

impl fmt::Debug for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0 (D={}, {:?})", self.truncation, self.variables);
        }
        let mut first = true;
        for (idx, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({:?})", c)?;
            for (v, &e) in self.variables.iter().zip(idx.exponents()) {
                if e == 1 {
                    write!(f, "*{v}")?;
                } else if e > 1 {
                    write!(f, "*{v}^{e}")?;
                }
            }
        }
        write!(f, " (D={})", self.truncation)
    }
}
