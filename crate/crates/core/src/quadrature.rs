//! Gauss-Legendre quadrature and compactly supported bump test functions.

use nalgebra::Complex;

/// Nodes and weights of the `n`-point Gauss-Legendre rule on `[-1, 1]`,
/// by Newton iteration on the Legendre recurrence.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n {
        // Chebyshev-based initial guess
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            // Legendre P_n(x) and its derivative by recurrence
            let mut p0 = 1.0;
            let mut p1 = x;
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            let p = p1;
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        nodes[i] = x;
        weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    (nodes, weights)
}

/// Map a rule from `[-1, 1]` to `[a, b]`.
pub fn scaled_rule(n: usize, a: f64, b: f64) -> (Vec<f64>, Vec<f64>) {
    let (xs, ws) = gauss_legendre(n);
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    (
        xs.iter().map(|x| mid + half * x).collect(),
        ws.iter().map(|w| w * half).collect(),
    )
}

/// `∫_a^b f` by `n`-point Gauss-Legendre.
pub fn integrate_1d(f: &dyn Fn(f64) -> Complex<f64>, a: f64, b: f64, n: usize) -> Complex<f64> {
    let (xs, ws) = scaled_rule(n, a, b);
    let mut acc = Complex::new(0.0, 0.0);
    for (x, w) in xs.iter().zip(&ws) {
        acc += f(*x) * *w;
    }
    acc
}

/// Tensor Gauss rule over a rectangle.
pub fn integrate_2d(
    f: &dyn Fn(f64, f64) -> Complex<f64>,
    x_range: (f64, f64),
    y_range: (f64, f64),
    n: usize,
) -> Complex<f64> {
    let (xs, wxs) = scaled_rule(n, x_range.0, x_range.1);
    let (ys, wys) = scaled_rule(n, y_range.0, y_range.1);
    let mut acc = Complex::new(0.0, 0.0);
    for (x, wx) in xs.iter().zip(&wxs) {
        for (y, wy) in ys.iter().zip(&wys) {
            acc += f(*x, *y) * (wx * wy);
        }
    }
    acc
}

/// A smooth product bump `phi(x, y) = psi((x-cx)/rx) psi((y-cy)/ry)` with
/// `psi(u) = exp(-1/(1-u^2))` on `|u| < 1`, zero outside. Compactly
/// supported in the rectangle `|x - cx| <= rx`, `|y - cy| <= ry`.
#[derive(Clone, Copy, Debug)]
pub struct BumpSpec {
    pub center: (f64, f64),
    pub radius: (f64, f64),
}

fn psi(u: f64) -> f64 {
    if u.abs() >= 1.0 {
        0.0
    } else {
        (-1.0 / (1.0 - u * u)).exp()
    }
}

fn dpsi(u: f64) -> f64 {
    if u.abs() >= 1.0 {
        0.0
    } else {
        let d = 1.0 - u * u;
        psi(u) * (-2.0 * u / (d * d))
    }
}

impl BumpSpec {
    pub fn standard(radius: (f64, f64)) -> Self {
        BumpSpec { center: (0.0, 0.0), radius }
    }

    pub fn value(&self, x: f64, y: f64) -> f64 {
        psi((x - self.center.0) / self.radius.0) * psi((y - self.center.1) / self.radius.1)
    }

    pub fn dx(&self, x: f64, y: f64) -> f64 {
        dpsi((x - self.center.0) / self.radius.0) / self.radius.0
            * psi((y - self.center.1) / self.radius.1)
    }

    pub fn dy(&self, x: f64, y: f64) -> f64 {
        psi((x - self.center.0) / self.radius.0)
            * dpsi((y - self.center.1) / self.radius.1)
            / self.radius.1
    }

    /// `∂_zbar phi = (phi_x + i phi_y) / 2`.
    pub fn dzbar(&self, x: f64, y: f64) -> Complex<f64> {
        Complex::new(0.5 * self.dx(x, y), 0.5 * self.dy(x, y))
    }

    pub fn support_x(&self) -> (f64, f64) {
        (self.center.0 - self.radius.0, self.center.0 + self.radius.0)
    }

    pub fn support_y(&self) -> (f64, f64) {
        (self.center.1 - self.radius.1, self.center.1 + self.radius.1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_exactness_on_polynomials() {
        // n-point Gauss is exact through degree 2n-1
        let val = integrate_1d(&|x| Complex::new(x.powi(7) - 3.0 * x.powi(2) + 1.0, 0.0), -1.0, 1.0, 4);
        // odd power integrates to 0; -3x^2 -> -2; 1 -> 2
        assert!((val.re - 0.0).abs() < 1e-14);
        let val = integrate_1d(&|x| Complex::new(x * x, 0.0), 0.0, 1.0, 8);
        assert!((val.re - 1.0 / 3.0).abs() < 1e-14);
    }

    #[test]
    fn gauss_2d_separates() {
        let val = integrate_2d(
            &|x, y| Complex::new(x * x * y, 0.0),
            (0.0, 1.0),
            (0.0, 2.0),
            12,
        );
        assert!((val.re - (1.0 / 3.0) * 2.0).abs() < 1e-13);
    }

    #[test]
    fn bump_vanishes_at_support_edge() {
        let b = BumpSpec::standard((0.5, 0.8));
        assert_eq!(b.value(0.5, 0.0), 0.0);
        assert_eq!(b.value(0.0, -0.8), 0.0);
        assert!(b.value(0.0, 0.0) > 0.0);
        // derivative consistency by central differences
        let h = 1e-6;
        let x = 0.21;
        let y = -0.37;
        let fd = (b.value(x + h, y) - b.value(x - h, y)) / (2.0 * h);
        assert!((fd - b.dx(x, y)).abs() < 1e-6);
        let fd = (b.value(x, y + h) - b.value(x, y - h)) / (2.0 * h);
        assert!((fd - b.dy(x, y)).abs() < 1e-6);
    }
}
