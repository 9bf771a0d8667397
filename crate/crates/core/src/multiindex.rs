//! Exponent vectors for multivariate series terms.

use std::cmp::Ordering;
use std::fmt;

use num::BigUint;

/// Exponent vector keying a series term. One entry per variable, in the
/// variable order of the series that owns the term.
///
/// Ordering is graded lexicographic: lower total degree first, ties broken
/// lexicographically on the exponent entries. Storing terms in a `BTreeMap`
/// keyed by `MultiIndex` therefore yields the canonical file order for free.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn new(exponents: Vec<u32>) -> Self {
        MultiIndex(exponents)
    }

    /// The zero index (constant term) on `len` variables.
    pub fn zero(len: usize) -> Self {
        MultiIndex(vec![0; len])
    }

    /// Unit index: exponent 1 in slot `var`, 0 elsewhere.
    pub fn unit(len: usize, var: usize) -> Self {
        let mut e = vec![0; len];
        e[var] = 1;
        MultiIndex(e)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn get(&self, var: usize) -> u32 {
        self.0[var]
    }

    /// Sum of all entries.
    pub fn total_degree(&self) -> u32 {
        self.0.iter().sum()
    }

    /// α! = product of entrywise factorials, exact.
    pub fn factorial(&self) -> BigUint {
        let mut acc = BigUint::from(1u32);
        for &e in &self.0 {
            for k in 2..=e {
                acc *= BigUint::from(k);
            }
        }
        acc
    }

    /// Entrywise sum (exponent of a monomial product).
    pub fn add(&self, other: &MultiIndex) -> MultiIndex {
        debug_assert_eq!(self.0.len(), other.0.len());
        MultiIndex(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// Decrement slot `var`; `None` if the exponent there is 0.
    pub fn step_down(&self, var: usize) -> Option<MultiIndex> {
        if self.0[var] == 0 {
            return None;
        }
        let mut e = self.0.clone();
        e[var] -= 1;
        Some(MultiIndex(e))
    }

    /// Increment slot `var`.
    pub fn step_up(&self, var: usize) -> MultiIndex {
        let mut e = self.0.clone();
        e[var] += 1;
        MultiIndex(e)
    }

    /// Copy with slot `var` removed (for layer extraction).
    pub fn without(&self, var: usize) -> MultiIndex {
        let mut e = self.0.clone();
        e.remove(var);
        MultiIndex(e)
    }

    /// Copy with value `exp` inserted at slot `var`.
    pub fn insert_at(&self, var: usize, exp: u32) -> MultiIndex {
        let mut e = self.0.clone();
        e.insert(var, exp);
        MultiIndex(e)
    }

    /// Entrywise ≤ (divisibility of monomials).
    pub fn divides(&self, other: &MultiIndex) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// Enumerate all indices of the given length with total degree exactly `degree`.
    pub fn with_total_degree(len: usize, degree: u32) -> Vec<MultiIndex> {
        let mut out = Vec::new();
        let mut current = vec![0u32; len];
        fn rec(current: &mut Vec<u32>, slot: usize, remaining: u32, out: &mut Vec<MultiIndex>) {
            if slot + 1 == current.len() {
                current[slot] = remaining;
                out.push(MultiIndex(current.clone()));
                return;
            }
            for v in 0..=remaining {
                current[slot] = v;
                rec(current, slot + 1, remaining - v, out);
            }
        }
        if len == 0 {
            if degree == 0 {
                out.push(MultiIndex(Vec::new()));
            }
            return out;
        }
        rec(&mut current, 0, degree, &mut out);
        out
    }
}

impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

impl From<Vec<u32>> for MultiIndex {
    fn from(v: Vec<u32>) -> Self {
        MultiIndex(v)
    }
}
