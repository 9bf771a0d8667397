//! Scalar types: exact rational and double-precision reals and complexes.
//!
//! Every series, point and report carries a [`Mode`]; exact and float values
//! never mix silently. Series-level operations validate modes up front and
//! return [`crate::series::SeriesError::ModeMismatch`]; the scalar arithmetic
//! here treats a mode mix as a caller bug and panics.

use std::fmt;

use num::complex::Complex64;
use num::{BigInt, BigRational, One, Signed, ToPrimitive, Zero};

/// Arithmetic mode of a series or scalar: arbitrary-precision rationals or
/// IEEE doubles. Chosen by the caller, never switched implicitly.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Mode {
    Exact,
    Float,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mode::Exact => write!(f, "exact"),
            Mode::Float => write!(f, "float"),
        }
    }
}

/// A real scalar in one of the two modes.
#[derive(Clone, PartialEq, Debug)]
pub enum Real {
    Exact(BigRational),
    Float(f64),
}

impl Real {
    pub fn mode(&self) -> Mode {
        match self {
            Real::Exact(_) => Mode::Exact,
            Real::Float(_) => Mode::Float,
        }
    }

    pub fn zero(mode: Mode) -> Self {
        match mode {
            Mode::Exact => Real::Exact(BigRational::zero()),
            Mode::Float => Real::Float(0.0),
        }
    }

    pub fn one(mode: Mode) -> Self {
        match mode {
            Mode::Exact => Real::Exact(BigRational::one()),
            Mode::Float => Real::Float(1.0),
        }
    }

    pub fn from_int(mode: Mode, n: i64) -> Self {
        match mode {
            Mode::Exact => Real::Exact(BigRational::from_integer(BigInt::from(n))),
            Mode::Float => Real::Float(n as f64),
        }
    }

    pub fn from_ratio(mode: Mode, num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        match mode {
            Mode::Exact => Real::Exact(BigRational::new(BigInt::from(num), BigInt::from(den))),
            Mode::Float => Real::Float(num as f64 / den as f64),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Real::Exact(r) => r.is_zero(),
            Real::Float(x) => *x == 0.0,
        }
    }

    pub fn add(&self, other: &Real) -> Real {
        match (self, other) {
            (Real::Exact(a), Real::Exact(b)) => Real::Exact(a + b),
            (Real::Float(a), Real::Float(b)) => Real::Float(a + b),
            _ => panic!("mode mix in Real::add"),
        }
    }

    pub fn sub(&self, other: &Real) -> Real {
        match (self, other) {
            (Real::Exact(a), Real::Exact(b)) => Real::Exact(a - b),
            (Real::Float(a), Real::Float(b)) => Real::Float(a - b),
            _ => panic!("mode mix in Real::sub"),
        }
    }

    pub fn mul(&self, other: &Real) -> Real {
        match (self, other) {
            (Real::Exact(a), Real::Exact(b)) => Real::Exact(a * b),
            (Real::Float(a), Real::Float(b)) => Real::Float(a * b),
            _ => panic!("mode mix in Real::mul"),
        }
    }

    pub fn div(&self, other: &Real) -> Real {
        match (self, other) {
            (Real::Exact(a), Real::Exact(b)) => Real::Exact(a / b),
            (Real::Float(a), Real::Float(b)) => Real::Float(a / b),
            _ => panic!("mode mix in Real::div"),
        }
    }

    pub fn neg(&self) -> Real {
        match self {
            Real::Exact(a) => Real::Exact(-a),
            Real::Float(a) => Real::Float(-a),
        }
    }

    pub fn abs(&self) -> Real {
        match self {
            Real::Exact(a) => Real::Exact(a.abs()),
            Real::Float(a) => Real::Float(a.abs()),
        }
    }

    /// Total order within one mode; panics across modes.
    pub fn cmp_same_mode(&self, other: &Real) -> std::cmp::Ordering {
        match (self, other) {
            (Real::Exact(a), Real::Exact(b)) => a.cmp(b),
            (Real::Float(a), Real::Float(b)) => a.partial_cmp(b).expect("NaN in Real comparison"),
            _ => panic!("mode mix in Real comparison"),
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Real::Exact(r) => rational_to_f64(r),
            Real::Float(x) => *x,
        }
    }

    pub fn as_exact(&self) -> Option<&BigRational> {
        match self {
            Real::Exact(r) => Some(r),
            Real::Float(_) => None,
        }
    }
}

/// Lossy conversion; good to one ulp for the magnitudes used here.
pub fn rational_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // numer/denom both overflow f64 range only for astronomically large
        // values; fall back to a ratio of logs sign estimate
        let n = r.numer().to_f64().unwrap_or(f64::MAX * r.numer().signum().to_f64().unwrap());
        let d = r.denom().to_f64().unwrap_or(f64::MAX);
        n / d
    })
}

/// Exact complex number with rational parts, always kept in lowest terms by
/// the underlying `BigRational`.
#[derive(Clone, PartialEq, Debug)]
pub struct ExactComplex {
    pub re: BigRational,
    pub im: BigRational,
}

impl ExactComplex {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        ExactComplex { re, im }
    }

    pub fn zero() -> Self {
        ExactComplex { re: BigRational::zero(), im: BigRational::zero() }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

/// A complex scalar in one of the two modes: the coefficient type of every
/// series, and the value type of point coordinates and evaluations.
#[derive(Clone, PartialEq, Debug)]
pub enum Coefficient {
    Exact(ExactComplex),
    Float(Complex64),
}

impl Coefficient {
    pub fn mode(&self) -> Mode {
        match self {
            Coefficient::Exact(_) => Mode::Exact,
            Coefficient::Float(_) => Mode::Float,
        }
    }

    pub fn zero(mode: Mode) -> Self {
        match mode {
            Mode::Exact => Coefficient::Exact(ExactComplex::zero()),
            Mode::Float => Coefficient::Float(Complex64::new(0.0, 0.0)),
        }
    }

    pub fn one(mode: Mode) -> Self {
        Coefficient::from_int(mode, 1)
    }

    pub fn from_int(mode: Mode, n: i64) -> Self {
        match mode {
            Mode::Exact => Coefficient::Exact(ExactComplex::new(
                BigRational::from_integer(BigInt::from(n)),
                BigRational::zero(),
            )),
            Mode::Float => Coefficient::Float(Complex64::new(n as f64, 0.0)),
        }
    }

    /// Purely real value p/q.
    pub fn from_ratio(mode: Mode, num: i64, den: i64) -> Self {
        Coefficient::from_real(Real::from_ratio(mode, num, den))
    }

    pub fn from_real(re: Real) -> Self {
        match re {
            Real::Exact(r) => Coefficient::Exact(ExactComplex::new(r, BigRational::zero())),
            Real::Float(x) => Coefficient::Float(Complex64::new(x, 0.0)),
        }
    }

    pub fn from_parts(re: Real, im: Real) -> Self {
        match (re, im) {
            (Real::Exact(a), Real::Exact(b)) => Coefficient::Exact(ExactComplex::new(a, b)),
            (Real::Float(a), Real::Float(b)) => Coefficient::Float(Complex64::new(a, b)),
            _ => panic!("mode mix in Coefficient::from_parts"),
        }
    }

    /// The imaginary unit.
    pub fn i(mode: Mode) -> Self {
        match mode {
            Mode::Exact => {
                Coefficient::Exact(ExactComplex::new(BigRational::zero(), BigRational::one()))
            }
            Mode::Float => Coefficient::Float(Complex64::new(0.0, 1.0)),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Coefficient::Exact(c) => c.is_zero(),
            Coefficient::Float(c) => c.re == 0.0 && c.im == 0.0,
        }
    }

    pub fn re(&self) -> Real {
        match self {
            Coefficient::Exact(c) => Real::Exact(c.re.clone()),
            Coefficient::Float(c) => Real::Float(c.re),
        }
    }

    pub fn im(&self) -> Real {
        match self {
            Coefficient::Exact(c) => Real::Exact(c.im.clone()),
            Coefficient::Float(c) => Real::Float(c.im),
        }
    }

    pub fn add(&self, other: &Coefficient) -> Coefficient {
        match (self, other) {
            (Coefficient::Exact(a), Coefficient::Exact(b)) => Coefficient::Exact(ExactComplex {
                re: &a.re + &b.re,
                im: &a.im + &b.im,
            }),
            (Coefficient::Float(a), Coefficient::Float(b)) => Coefficient::Float(a + b),
            _ => panic!("mode mix in Coefficient::add"),
        }
    }

    pub fn sub(&self, other: &Coefficient) -> Coefficient {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Coefficient) -> Coefficient {
        match (self, other) {
            (Coefficient::Exact(a), Coefficient::Exact(b)) => Coefficient::Exact(ExactComplex {
                re: &a.re * &b.re - &a.im * &b.im,
                im: &a.re * &b.im + &a.im * &b.re,
            }),
            (Coefficient::Float(a), Coefficient::Float(b)) => Coefficient::Float(a * b),
            _ => panic!("mode mix in Coefficient::mul"),
        }
    }

    /// Complex division; panics on division by zero in exact mode.
    pub fn div(&self, other: &Coefficient) -> Coefficient {
        match (self, other) {
            (Coefficient::Exact(a), Coefficient::Exact(b)) => {
                let den = &b.re * &b.re + &b.im * &b.im;
                assert!(!den.is_zero(), "exact complex division by zero");
                Coefficient::Exact(ExactComplex {
                    re: (&a.re * &b.re + &a.im * &b.im) / &den,
                    im: (&a.im * &b.re - &a.re * &b.im) / &den,
                })
            }
            (Coefficient::Float(a), Coefficient::Float(b)) => Coefficient::Float(a / b),
            _ => panic!("mode mix in Coefficient::div"),
        }
    }

    pub fn neg(&self) -> Coefficient {
        match self {
            Coefficient::Exact(c) => Coefficient::Exact(ExactComplex { re: -&c.re, im: -&c.im }),
            Coefficient::Float(c) => Coefficient::Float(-c),
        }
    }

    pub fn conj(&self) -> Coefficient {
        match self {
            Coefficient::Exact(c) => {
                Coefficient::Exact(ExactComplex { re: c.re.clone(), im: -&c.im })
            }
            Coefficient::Float(c) => Coefficient::Float(c.conj()),
        }
    }

    /// Multiply by an integer scalar (derivative exponents, binomials).
    pub fn scale_int(&self, n: u64) -> Coefficient {
        match self {
            Coefficient::Exact(c) => {
                let k = BigRational::from_integer(BigInt::from(n));
                Coefficient::Exact(ExactComplex { re: &c.re * &k, im: &c.im * &k })
            }
            Coefficient::Float(c) => Coefficient::Float(c * n as f64),
        }
    }

    /// Squared modulus, exact within mode.
    pub fn norm_sqr(&self) -> Real {
        match self {
            Coefficient::Exact(c) => Real::Exact(&c.re * &c.re + &c.im * &c.im),
            Coefficient::Float(c) => Real::Float(c.norm_sqr()),
        }
    }

    /// Max of |re| and |im|: a mode-exact magnitude usable for residual
    /// reports without leaving the rationals.
    pub fn sup_abs(&self) -> Real {
        let r = self.re().abs();
        let i = self.im().abs();
        if r.cmp_same_mode(&i) == std::cmp::Ordering::Less {
            i
        } else {
            r
        }
    }

    pub fn to_complex64(&self) -> Complex64 {
        match self {
            Coefficient::Exact(c) => Complex64::new(rational_to_f64(&c.re), rational_to_f64(&c.im)),
            Coefficient::Float(c) => *c,
        }
    }

    pub fn to_float(&self) -> Coefficient {
        Coefficient::Float(self.to_complex64())
    }
}

/// Render a rational as the canonical `"p/q"` form, lowest terms, q > 0.
pub fn format_rational(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Parse `"p/q"` (or a bare integer `"p"`) into a rational; normalizes to
/// lowest terms with positive denominator.
pub fn parse_rational(s: &str) -> Result<BigRational, String> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let n: BigInt = num.trim().parse().map_err(|_| format!("bad numerator in {s:?}"))?;
    let d: BigInt = den.trim().parse().map_err(|_| format!("bad denominator in {s:?}"))?;
    if d.is_zero() {
        return Err(format!("zero denominator in {s:?}"));
    }
    Ok(BigRational::new(n, d))
}
