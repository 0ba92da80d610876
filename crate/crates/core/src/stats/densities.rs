use std::f64::consts::PI;

/// Semicircle density of radius `radius`, `2 sqrt(R^2 - x^2) / (pi R^2)`.
pub fn semicircle_density(x: f64, radius: f64) -> f64 {
    assert!(radius > 0.0, "semicircle radius must be positive");
    if x.abs() >= radius {
        return 0.0;
    }
    2.0 * (radius * radius - x * x).sqrt() / (PI * radius * radius)
}

pub fn semicircle_cdf(x: f64, radius: f64) -> f64 {
    assert!(radius > 0.0, "semicircle radius must be positive");
    if x <= -radius {
        return 0.0;
    }
    if x >= radius {
        return 1.0;
    }
    let t = x / radius;
    0.5 + (t * (1.0 - t * t).sqrt() + t.asin()) / PI
}

/// Kesten-McKay density for the adjacency spectrum of a random `d`-regular
/// graph,
///
/// ```text
/// d sqrt(4(d-1) - x^2) / (2 pi (d^2 - x^2)),   |x| <= 2 sqrt(d-1).
/// ```
///
/// Without the leading factor `d` the expression integrates to `1/d`; the
/// factor makes it a probability density. Laplacian eigenvalues `lambda`
/// map to `x = d - lambda`.
pub fn mckay_density(x: f64, d: u32) -> f64 {
    assert!(d >= 3, "McKay law needs d >= 3");
    let d = f64::from(d);
    let edge2 = 4.0 * (d - 1.0);
    if x * x >= edge2 {
        return 0.0;
    }
    d * (edge2 - x * x).sqrt() / (2.0 * PI * (d * d - x * x))
}

/// Closed-form CDF of [`mckay_density`]. With `x = 2 sqrt(d-1) sin(theta)`
/// the antiderivative is `(theta - c atan(c tan(theta))) d / (2 pi)` with
/// `c = (d - 2) / d`.
pub fn mckay_cdf(x: f64, d: u32) -> f64 {
    assert!(d >= 3, "McKay law needs d >= 3");
    let df = f64::from(d);
    let edge = 2.0 * (df - 1.0).sqrt();
    if x <= -edge {
        return 0.0;
    }
    if x >= edge {
        return 1.0;
    }
    let c = (df - 2.0) / df;
    let antiderivative = |theta: f64| df * (theta - c * (c * theta.tan()).atan()) / (2.0 * PI);
    let theta = (x / edge).asin();
    // At theta = -pi/2 the atan term tends to -pi/2.
    let lower = df * (-PI / 2.0 + c * PI / 2.0) / (2.0 * PI);
    (antiderivative(theta) - lower).clamp(0.0, 1.0)
}

/// GOE Wigner surmise, `(pi/2) s exp(-pi s^2 / 4)` for `s >= 0`.
pub fn wigner_surmise_goe(s: f64) -> f64 {
    if s < 0.0 {
        return 0.0;
    }
    0.5 * PI * s * (-0.25 * PI * s * s).exp()
}

pub fn wigner_surmise_goe_cdf(s: f64) -> f64 {
    if s <= 0.0 {
        return 0.0;
    }
    -(-0.25 * PI * s * s).exp_m1()
}

/// Inverse of [`wigner_surmise_goe_cdf`] on `[0, 1)`.
pub fn wigner_surmise_goe_quantile(p: f64) -> f64 {
    (-4.0 * (-p).ln_1p() / PI).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    /// Composite Gauss-Legendre (5 points) over `[a, b]` in `panels` pieces.
    fn gauss_legendre<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, panels: usize) -> f64 {
        const X: [f64; 5] = [
            0.0,
            -0.538_469_310_105_683_1,
            0.538_469_310_105_683_1,
            -0.906_179_845_938_664,
            0.906_179_845_938_664,
        ];
        const W: [f64; 5] = [
            0.568_888_888_888_888_9,
            0.478_628_670_499_366_47,
            0.478_628_670_499_366_47,
            0.236_926_885_056_189_08,
            0.236_926_885_056_189_08,
        ];
        let h = (b - a) / panels as f64;
        (0..panels)
            .map(|k| {
                let mid = a + (k as f64 + 0.5) * h;
                X.iter().zip(W).map(|(x, w)| w * f(mid + 0.5 * h * x)).sum::<f64>() * 0.5 * h
            })
            .sum()
    }

    /// Integral of `f` over `[-r, r]` after `x = r sin(theta)`, which removes
    /// the square-root endpoint singularities.
    fn integrate_edge_singular<F: Fn(f64) -> f64>(f: F, r: f64) -> f64 {
        gauss_legendre(|t| f(r * t.sin()) * r * t.cos(), -PI / 2.0, PI / 2.0, 2000)
    }

    #[test]
    fn semicircle_values() {
        assert_abs_diff_eq!(semicircle_density(0.0, 2.0), 1.0 / PI, epsilon = 1e-15);
        assert_abs_diff_eq!(
            semicircle_density(0.0, 2.0),
            std::f64::consts::FRAC_1_PI,
            epsilon = 1e-15
        );
        assert_eq!(semicircle_density(2.0, 2.0), 0.0);
        assert_eq!(semicircle_density(-2.0, 2.0), 0.0);
        assert_eq!(semicircle_density(3.0, 2.0), 0.0);
        for r in [0.5, 2.0, 7.0] {
            let total = integrate_edge_singular(|x| semicircle_density(x, r), r);
            assert_abs_diff_eq!(total, 1.0, epsilon = 1e-8);
        }
    }

    #[test]
    fn semicircle_cdf_matches_quadrature() {
        for x in [-1.5, -0.3, 0.0, 0.9, 1.99] {
            let q = gauss_legendre(
                |t| semicircle_density(2.0 * t.sin(), 2.0) * 2.0 * t.cos(),
                -PI / 2.0,
                (x / 2.0f64).asin(),
                2000,
            );
            assert_abs_diff_eq!(semicircle_cdf(x, 2.0), q, epsilon = 1e-10);
        }
        assert_eq!(semicircle_cdf(0.0, 2.0), 0.5);
    }

    #[test]
    fn mckay_values() {
        // The bare expression sqrt(8)/(18 pi) at d = 3, x = 0, scaled by d.
        let bare = 8f64.sqrt() / (18.0 * PI);
        assert_abs_diff_eq!(bare, 0.050_017_573_119_839, epsilon = 1e-15);
        assert_abs_diff_eq!(mckay_density(0.0, 3), 3.0 * bare, epsilon = 1e-15);
        assert_eq!(mckay_density(2.0 * 2f64.sqrt(), 3), 0.0);
        assert_eq!(mckay_density(-2.0 * 2f64.sqrt(), 3), 0.0);
    }

    #[test]
    fn mckay_integrates_to_one() {
        for d in 3..=6 {
            let r = 2.0 * f64::from(d - 1).sqrt();
            let total = integrate_edge_singular(|x| mckay_density(x, d), r);
            assert_abs_diff_eq!(total, 1.0, epsilon = 1e-8);
        }
    }

    #[test]
    fn mckay_cdf_matches_quadrature() {
        for d in 3..=6 {
            let r = 2.0 * f64::from(d - 1).sqrt();
            for frac in [-0.95, -0.5, 0.0, 0.3, 0.8, 0.999] {
                let x = frac * r;
                let q = gauss_legendre(
                    |t| mckay_density(r * t.sin(), d) * r * t.cos(),
                    -PI / 2.0,
                    frac.asin(),
                    2000,
                );
                assert_abs_diff_eq!(mckay_cdf(x, d), q, epsilon = 1e-10);
            }
            assert_eq!(mckay_cdf(-r - 1.0, d), 0.0);
            assert_eq!(mckay_cdf(r + 1.0, d), 1.0);
        }
    }

    #[test]
    fn surmise_values() {
        assert_eq!(wigner_surmise_goe(0.0), 0.0);
        assert_abs_diff_eq!(wigner_surmise_goe(1.0), 0.5 * PI * (-PI / 4.0).exp(), epsilon = 1e-15);
        assert_abs_diff_eq!(wigner_surmise_goe(1.0), 0.716_185_936_340_569, epsilon = 1e-14);
        let mass = gauss_legendre(wigner_surmise_goe, 0.0, 12.0, 4000);
        let mean = gauss_legendre(|s| s * wigner_surmise_goe(s), 0.0, 12.0, 4000);
        assert_abs_diff_eq!(mass, 1.0, epsilon = 1e-8);
        assert_abs_diff_eq!(mean, 1.0, epsilon = 1e-8);
    }

    #[test]
    fn surmise_cdf_and_quantile_invert() {
        for p in [0.01, 0.25, 0.5, 0.9, 0.999] {
            assert_abs_diff_eq!(
                wigner_surmise_goe_cdf(wigner_surmise_goe_quantile(p)),
                p,
                epsilon = 1e-13
            );
        }
        let s = 1.3;
        assert_abs_diff_eq!(
            wigner_surmise_goe_cdf(s),
            gauss_legendre(wigner_surmise_goe, 0.0, s, 1000),
            epsilon = 1e-12
        );
    }
}
