//! Seeded random instances for the randomized suites: germ polynomials,
//! chart points, real polynomials, closed one-forms, held-out sample
//! points. Everything is driven by a caller-provided RNG so that runs are
//! reproducible from a single seed.

use num::{BigInt, BigRational};
use rand::Rng;

use crate::bounds::RealPoly;
use crate::coeff::{Coefficient, Mode, Real};
use crate::engine::OneForm;
use crate::geometry::ChartPoint;
use crate::multiindex::MultiIndex;
use crate::series::{germ_vars, s_vars, Series};

/// A random nonzero rational with numerator in `[-99, 99]` and denominator
/// in `[1, 20]`.
pub fn random_rational(rng: &mut impl Rng) -> BigRational {
    let mut num: i64 = rng.random_range(-99..=99);
    if num == 0 {
        num = 1;
    }
    let den: i64 = rng.random_range(1..=20);
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

fn random_real(rng: &mut impl Rng, mode: Mode) -> Real {
    match mode {
        Mode::Exact => Real::Exact(random_rational(rng)),
        Mode::Float => Real::Float(rng.random_range(-1.0..1.0)),
    }
}

/// A random germ polynomial in `(z, w_1..w_m)` of total degree exactly
/// `deg` (at least one top-degree term), with `terms` attempted monomials
/// and exact rational coefficients. The declared truncation is `2 * deg`,
/// the lossless pullback target.
pub fn random_germ(rng: &mut impl Rng, m: usize, deg: u32, terms: usize) -> Series {
    let vars = germ_vars(m);
    let nv = vars.len();
    let mut list = Vec::new();
    // guarantee the declared degree is attained
    let tops = MultiIndex::with_total_degree(nv, deg);
    let top = tops[rng.random_range(0..tops.len())].clone();
    list.push((top, Coefficient::from_real(Real::Exact(random_rational(rng)))));
    for _ in 0..terms {
        let d = rng.random_range(0..=deg);
        let pool = MultiIndex::with_total_degree(nv, d);
        let idx = pool[rng.random_range(0..pool.len())].clone();
        list.push((idx, Coefficient::from_real(Real::Exact(random_rational(rng)))));
    }
    Series::from_terms(vars, 2 * deg, Mode::Exact, list).expect("germ shape")
}

/// A random exact chart point for dimension `n`, on or off Σ.
pub fn random_chart_point(rng: &mut impl Rng, n: usize, on_sigma: bool) -> ChartPoint {
    let m = n - 1;
    let re = Real::Exact(random_rational(rng));
    let im = if on_sigma {
        Real::Exact(BigRational::from_integer(0.into()))
    } else {
        Real::Exact(random_rational(rng))
    };
    let z = Coefficient::from_parts(re, im);
    let s = (0..m).map(|_| Real::Exact(random_rational(rng))).collect();
    let t = (0..m).map(|_| Real::Exact(random_rational(rng))).collect();
    ChartPoint::new(z, s, t).expect("chart point shape")
}

/// A dense random real polynomial on `ℝ^m` of degree `<= k` with
/// coefficients uniform in `[-1, 1]` (float mode).
pub fn random_real_poly(rng: &mut impl Rng, m: usize, k: u32) -> RealPoly {
    let mut coeffs = Vec::new();
    for d in 0..=k {
        for idx in MultiIndex::with_total_degree(m, d) {
            coeffs.push((idx, Real::Float(rng.random_range(-1.0..1.0))));
        }
    }
    RealPoly::new(m, k, Mode::Float, coeffs).expect("poly shape")
}

/// A random closed polynomial one-form on `ℝ^m`: the differential of a
/// random potential of degree `deg + 1`, so closedness holds by
/// construction.
pub fn random_closed_one_form(rng: &mut impl Rng, m: usize, deg: u32) -> OneForm {
    let vars = s_vars(m);
    let mut list = Vec::new();
    for d in 0..=(deg + 1) {
        for idx in MultiIndex::with_total_degree(m, d) {
            if rng.random_bool(0.6) {
                list.push((idx, Coefficient::from_real(Real::Exact(random_rational(rng)))));
            }
        }
    }
    let potential =
        Series::from_terms(vars.clone(), deg + 1, Mode::Exact, list).expect("potential shape");
    let components: Vec<Series> = (1..=m)
        .map(|j| potential.derive(&format!("s{j}")).expect("derivative"))
        .collect();
    OneForm::new(components).expect("one-form shape")
}

/// Random points in the complex polydisc of the given radius around a real
/// base point, with the imaginary part pushed into the requested cone
/// sector when `cone_lambda` directions are supplied.
pub fn random_polydisc_points(
    rng: &mut impl Rng,
    base: &[f64],
    radius: f64,
    count: usize,
    cone_generators: Option<&[Vec<f64>]>,
) -> Vec<Vec<nalgebra::Complex<f64>>> {
    let n = base.len();
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        let re: Vec<f64> = (0..n).map(|_| rng.random_range(-radius..radius)).collect();
        let im: Vec<f64> = match cone_generators {
            Some(gens) => {
                // strictly positive combination of the positive generators
                let lambdas: Vec<f64> =
                    gens.iter().map(|_| rng.random_range(0.1..1.0)).collect();
                let mut y = vec![0.0; n];
                for (l, g) in lambdas.iter().zip(gens) {
                    for (yi, gi) in y.iter_mut().zip(g) {
                        *yi += l * gi;
                    }
                }
                let norm = y.iter().map(|v| v * v).sum::<f64>().sqrt();
                let scale = rng.random_range(0.05..1.0) * radius / norm;
                y.iter().map(|v| v * scale).collect()
            }
            None => (0..n).map(|_| rng.random_range(-radius..radius)).collect(),
        };
        out.push(
            (0..n)
                .map(|i| nalgebra::Complex::new(base[i] + re[i], im[i]))
                .collect(),
        );
    }
    out
}

/// Random exact real scalars, for exact-mode grids.
pub fn random_reals(rng: &mut impl Rng, mode: Mode, count: usize) -> Vec<Real> {
    (0..count).map(|_| random_real(rng, mode)).collect()
}
