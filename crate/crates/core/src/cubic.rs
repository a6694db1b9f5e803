//! Closed-form cubic solvers.
//!
//! The complex solver works on the depressed form `t³ + p·t + q = 0`; callers
//! shift by a third of the trace first. The real solver handles general real
//! coefficients and degrades gracefully when the leading terms vanish.

use num_complex::Complex64;
use std::f64::consts::PI;

const ONE_THIRD: f64 = 1.0 / 3.0;

/// Principal complex cube root, computed in polar form.
pub fn principal_cbrt(z: Complex64) -> Complex64 {
    if z == Complex64::new(0.0, 0.0) {
        return z;
    }
    let (r, theta) = z.to_polar();
    Complex64::from_polar(r.cbrt(), theta * ONE_THIRD)
}

/// Roots of `t³ + p·t + q` by Cardano's formula.
///
/// The radical is taken on the side that avoids cancellation, so the result
/// is accurate for simple roots. Near multiple roots the accuracy is limited
/// by the conditioning of the polynomial itself.
pub fn depressed_roots(p: Complex64, q: Complex64) -> [Complex64; 3] {
    let zero = Complex64::new(0.0, 0.0);
    let half_q = q * 0.5;
    let third_p = p * ONE_THIRD;
    let disc = half_q * half_q + third_p * third_p * third_p;
    let s = disc.sqrt();
    let a = -half_q + s;
    let b = -half_q - s;
    let u3 = if a.norm_sqr() >= b.norm_sqr() { a } else { b };
    if u3 == zero {
        // q = 0 and p = 0
        return [zero; 3];
    }
    let u = principal_cbrt(u3);
    let omega = Complex64::from_polar(1.0, 2.0 * PI / 3.0);
    let mut roots = [zero; 3];
    let mut w = Complex64::new(1.0, 0.0);
    for root in roots.iter_mut() {
        let uk = u * w;
        *root = uk - third_p / uk;
        w *= omega;
    }
    roots
}

/// One guarded Newton step on `t³ + p·t + q`.
///
/// The step is skipped at (numerically) multiple roots where the derivative
/// vanishes, and rejected if it does not reduce the residual.
pub fn newton_polish_depressed(t: Complex64, p: Complex64, q: Complex64) -> Complex64 {
    let f = |x: Complex64| (x * x + p) * x + q;
    let fp = 3.0 * t * t + p;
    let scale = 1.0 + t.norm_sqr() + p.norm();
    if fp.norm() <= 1e-12 * scale {
        return t;
    }
    let candidate = t - f(t) / fp;
    if f(candidate).norm() <= f(t).norm() {
        candidate
    } else {
        t
    }
}

/// Real roots of a real polynomial of degree at most three.
#[derive(Debug, Clone, PartialEq)]
pub struct RealRoots {
    /// Real roots in ascending order, counted once each.
    pub roots: Vec<f64>,
    /// Discriminant of the cubic (zero when the polynomial is not cubic).
    pub discriminant: f64,
}

/// Solves `a·x³ + b·x² + c·x + d = 0` over the reals.
///
/// A cubic has either one or three real roots; complex roots come in
/// conjugate pairs and are dropped together. Every root is refined by Newton
/// steps on the undepressed polynomial.
pub fn real_cubic_roots(a: f64, b: f64, c: f64, d: f64) -> RealRoots {
    let scale = a.abs().max(b.abs()).max(c.abs()).max(d.abs());
    if scale == 0.0 {
        return RealRoots {
            roots: Vec::new(),
            discriminant: 0.0,
        };
    }
    if a.abs() <= 1e-14 * scale {
        return RealRoots {
            roots: real_quadratic_roots(b, c, d),
            discriminant: 0.0,
        };
    }
    let discriminant = 18.0 * a * b * c * d - 4.0 * b.powi(3) * d + b * b * c * c
        - 4.0 * a * c.powi(3)
        - 27.0 * a * a * d * d;

    let (bb, cc, dd) = (b / a, c / a, d / a);
    let shift = bb * ONE_THIRD;
    let p = cc - bb * bb * ONE_THIRD;
    let q = 2.0 * bb.powi(3) / 27.0 - bb * cc * ONE_THIRD + dd;
    let half_q = 0.5 * q;
    let third_p = p * ONE_THIRD;
    let delta = half_q * half_q + third_p.powi(3);

    let mut roots: Vec<f64> = if p == 0.0 && q == 0.0 {
        vec![-shift]
    } else if delta > 0.0 {
        let u = (-half_q - half_q.signum() * delta.sqrt()).cbrt();
        let t = if u == 0.0 { 0.0 } else { u - third_p / u };
        vec![t - shift]
    } else {
        // three real roots (possibly repeated)
        let m = (-third_p).sqrt();
        let arg = (-half_q / (m * m * m)).clamp(-1.0, 1.0);
        let phi = arg.acos();
        (0..3)
            .map(|k| 2.0 * m * ((phi - 2.0 * PI * k as f64) * ONE_THIRD).cos() - shift)
            .collect()
    };

    for r in roots.iter_mut() {
        *r = newton_polish_real(*r, a, b, c, d);
    }
    roots.sort_by(|x, y| x.total_cmp(y));
    roots.dedup_by(|x, y| (*x - *y).abs() <= 1e-14 * (1.0 + x.abs()));
    RealRoots {
        roots,
        discriminant,
    }
}

fn real_quadratic_roots(a: f64, b: f64, c: f64) -> Vec<f64> {
    let scale = a.abs().max(b.abs()).max(c.abs());
    if scale == 0.0 {
        return Vec::new();
    }
    if a.abs() <= 1e-14 * scale {
        if b == 0.0 {
            return Vec::new();
        }
        return vec![-c / b];
    }
    let disc = b * b - 4.0 * a * c;
    if disc < 0.0 {
        return Vec::new();
    }
    let q = -0.5 * (b + b.signum() * disc.sqrt());
    let mut roots = if q == 0.0 {
        vec![0.0]
    } else {
        vec![q / a, c / q]
    };
    roots.sort_by(|x, y| x.total_cmp(y));
    roots.dedup();
    roots
}

fn newton_polish_real(mut x: f64, a: f64, b: f64, c: f64, d: f64) -> f64 {
    let f = |x: f64| ((a * x + b) * x + c) * x + d;
    for _ in 0..3 {
        let fp = (3.0 * a * x + 2.0 * b) * x + c;
        if fp == 0.0 {
            break;
        }
        let next = x - f(x) / fp;
        if !next.is_finite() || f(next).abs() > f(x).abs() {
            break;
        }
        x = next;
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn cbrt_is_principal() {
        let r = principal_cbrt(c(-8.0, 0.0));
        assert!((r - Complex64::from_polar(2.0, PI / 3.0)).norm() < 1e-14);
        assert_eq!(principal_cbrt(c(0.0, 0.0)), c(0.0, 0.0));
    }

    #[test]
    fn depressed_roots_of_known_cubics() {
        // (t-1)(t-2)(t+3) = t^3 - 7t + 6
        let mut roots = depressed_roots(c(-7.0, 0.0), c(6.0, 0.0));
        roots.sort_by(|a, b| a.re.total_cmp(&b.re));
        for (r, e) in roots.iter().zip([-3.0, 1.0, 2.0]) {
            assert!((r - c(e, 0.0)).norm() < 1e-13, "{r} vs {e}");
        }
        // t^3 = 0
        assert_eq!(depressed_roots(c(0.0, 0.0), c(0.0, 0.0)), [c(0.0, 0.0); 3]);
        // t^3 + 1 = 0 with p = 0
        for r in depressed_roots(c(0.0, 0.0), c(1.0, 0.0)) {
            assert!(((r * r * r) + 1.0).norm() < 1e-14);
        }
    }

    #[test]
    fn polish_skips_multiple_roots() {
        let t = c(0.0, 0.0);
        assert_eq!(newton_polish_depressed(t, c(0.0, 0.0), c(0.0, 0.0)), t);
    }

    #[test]
    fn real_cubic_one_and_three_roots() {
        // (x-1)(x^2+1) = x^3 - x^2 + x - 1
        let one = real_cubic_roots(1.0, -1.0, 1.0, -1.0);
        assert_eq!(one.roots.len(), 1);
        assert!((one.roots[0] - 1.0).abs() < 1e-14);
        assert!(one.discriminant < 0.0);

        // (x-1)(x-2)(x-3)
        let three = real_cubic_roots(1.0, -6.0, 11.0, -6.0);
        assert_eq!(three.roots.len(), 3);
        for (r, e) in three.roots.iter().zip([1.0, 2.0, 3.0]) {
            assert!((r - e).abs() < 1e-13);
        }
        assert!(three.discriminant > 0.0);
    }

    #[test]
    fn real_cubic_degenerates_to_lower_degree() {
        let lin = real_cubic_roots(0.0, 0.0, 2.0, -4.0);
        assert_eq!(lin.roots, vec![2.0]);
        let quad = real_cubic_roots(0.0, 1.0, 0.0, -4.0);
        assert_eq!(quad.roots, vec![-2.0, 2.0]);
        assert!(real_cubic_roots(0.0, 1.0, 0.0, 4.0).roots.is_empty());
    }

    #[test]
    fn real_cubic_triple_root() {
        // (x-2)^3
        let r = real_cubic_roots(1.0, -6.0, 12.0, -8.0);
        assert_eq!(r.roots.len(), 1);
        assert!((r.roots[0] - 2.0).abs() < 1e-10);
    }
}
