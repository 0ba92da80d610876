use rand::Rng;
use rand_distr::StandardNormal;

use crate::eigen::SpectralDecomposition;
use crate::ensembles::Seed;
use crate::error::{Error, Result};

/// Normalized histogram: `densities` integrate to 1 over bins of equal
/// width starting at the data minimum.
#[derive(Debug, Clone, PartialEq)]
pub struct Histogram {
    pub bin_width: f64,
    pub bin_centers: Vec<f64>,
    pub densities: Vec<f64>,
}

/// Bin index of `x` for bins of width `w` starting at `origin`.
fn bin_of(x: f64, origin: f64, w: f64) -> usize {
    ((x - origin) / w).floor().max(0.0) as usize
}

pub fn histogram_density(values: &[f64], bin_width: f64) -> Result<Histogram> {
    if bin_width.is_nan() || bin_width <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "bin width {bin_width} must be positive"
        )));
    }
    if values.is_empty() {
        return Err(Error::InsufficientData("histogram of no values".into()));
    }
    if values.iter().any(|x| !x.is_finite()) {
        return Err(Error::InvalidParameter("histogram values must be finite".into()));
    }
    let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let bins = bin_of(hi, lo, bin_width) + 1;
    let mut counts = vec![0usize; bins];
    for &x in values {
        counts[bin_of(x, lo, bin_width)] += 1;
    }
    let scale = 1.0 / (values.len() as f64 * bin_width);
    Ok(Histogram {
        bin_width,
        bin_centers: (0..bins).map(|i| lo + (i as f64 + 0.5) * bin_width).collect(),
        densities: counts.into_iter().map(|c| c as f64 * scale).collect(),
    })
}

pub fn linf_norm(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

/// Per-eigenvalue-bin mean of eigenvector L-infinity norms, with the level
/// expected for a uniformly random unit vector of the same dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalizationCurve {
    pub bin_width: f64,
    pub bin_centers: Vec<f64>,
    /// `None` for empty bins.
    pub mean_linf: Vec<Option<f64>>,
    pub counts: Vec<usize>,
    pub reference_level: f64,
    /// L-infinity norm of every eigenvector, in eigenvalue order.
    pub linf: Vec<f64>,
}

/// Monte Carlo draws used by [`localization_curve`] for the reference level.
pub const DEFAULT_SPHERE_DRAWS: usize = 20_000;
/// Seed used by [`localization_curve`] for the reference level.
pub const SPHERE_LINF_SEED: Seed = Seed(0x5EED_11F7);

/// Groups eigenvectors into eigenvalue bins of width `bin_width` (aligned
/// at the smallest eigenvalue) and averages their L-infinity norms. The
/// reference level is [`expected_sphere_linf`] with the default draw count.
pub fn localization_curve(dec: &SpectralDecomposition, bin_width: f64) -> Result<LocalizationCurve> {
    let reference = expected_sphere_linf(dec.n().max(1), DEFAULT_SPHERE_DRAWS, SPHERE_LINF_SEED)?;
    localization_curve_with_reference(dec, bin_width, reference)
}

pub fn localization_curve_with_reference(
    dec: &SpectralDecomposition,
    bin_width: f64,
    reference_level: f64,
) -> Result<LocalizationCurve> {
    let linf: Vec<f64> = dec.eigenvectors().map(linf_norm).collect();
    bin_localization(dec.eigenvalues(), linf, bin_width, reference_level)
}

/// Bins precomputed norms `linf[k]` by `eigenvalues[k]` (ascending). Useful
/// when the eigenvalues are rescaled before binning.
pub fn bin_localization(
    eigenvalues: &[f64],
    linf: Vec<f64>,
    bin_width: f64,
    reference_level: f64,
) -> Result<LocalizationCurve> {
    if bin_width.is_nan() || bin_width <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "bin width {bin_width} must be positive"
        )));
    }
    if eigenvalues.len() != linf.len() {
        return Err(Error::DimensionMismatch {
            expected: eigenvalues.len(),
            found: linf.len(),
        });
    }
    let eigs = eigenvalues;
    if eigs.is_empty() {
        return Ok(LocalizationCurve {
            bin_width,
            bin_centers: Vec::new(),
            mean_linf: Vec::new(),
            counts: Vec::new(),
            reference_level,
            linf,
        });
    }
    let lo = eigs[0];
    let bins = bin_of(eigs[eigs.len() - 1], lo, bin_width) + 1;
    let mut counts = vec![0usize; bins];
    let mut sums = vec![0.0; bins];
    for (&lambda, &norm) in eigs.iter().zip(&linf) {
        let b = bin_of(lambda, lo, bin_width);
        counts[b] += 1;
        sums[b] += norm;
    }
    Ok(LocalizationCurve {
        bin_width,
        bin_centers: (0..bins).map(|i| lo + (i as f64 + 0.5) * bin_width).collect(),
        mean_linf: counts
            .iter()
            .zip(&sums)
            .map(|(&c, &s)| (c > 0).then(|| s / c as f64))
            .collect(),
        counts,
        reference_level,
        linf,
    })
}

/// Monte Carlo estimate of `E[max_i |x_i|]` for `x` uniform on the unit
/// sphere in `R^n` (normalized Gaussian vectors). For large `n` this tracks
/// `sqrt(2 ln n / n)`.
pub fn expected_sphere_linf(n: usize, draws: usize, seed: Seed) -> Result<f64> {
    if n == 0 || draws == 0 {
        return Err(Error::InvalidParameter(
            "dimension and draw count must be positive".into(),
        ));
    }
    let mut rng = seed.rng();
    let mut total = 0.0;
    for _ in 0..draws {
        let mut sq = 0.0;
        let mut max_abs: f64 = 0.0;
        loop {
            for _ in 0..n {
                let g: f64 = rng.sample(StandardNormal);
                sq += g * g;
                max_abs = max_abs.max(g.abs());
            }
            if sq > 0.0 {
                break;
            }
        }
        total += max_abs / sq.sqrt();
    }
    Ok(total / draws as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eigen::eigh;
    use crate::graph::{Graph, SymmetricMatrix};
    use approx::assert_abs_diff_eq;

    #[test]
    fn histogram_single_value() {
        let h = histogram_density(&[2.0, 2.0, 2.0], 0.25).unwrap();
        assert_eq!(h.densities, vec![4.0]);
        assert_eq!(h.bin_centers, vec![2.125]);
    }

    #[test]
    fn histogram_uniform_grid() {
        let values: Vec<f64> = (0..10).map(|i| i as f64 / 10.0).collect();
        let h = histogram_density(&values, 0.5).unwrap();
        assert_eq!(h.densities.len(), 2);
        for d in &h.densities {
            assert_abs_diff_eq!(*d, 1.0, epsilon = 1e-12);
        }
        let total: f64 = h.densities.iter().sum::<f64>() * h.bin_width;
        assert_abs_diff_eq!(total, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn histogram_errors() {
        assert!(histogram_density(&[], 1.0).is_err());
        assert!(histogram_density(&[1.0], 0.0).is_err());
        assert!(histogram_density(&[f64::NAN], 1.0).is_err());
    }

    #[test]
    fn semicircle_histogram() {
        // Semicircle draws by rejection from the bounding box.
        let mut rng = Seed(31).rng();
        let mut xs = Vec::with_capacity(100_000);
        while xs.len() < 100_000 {
            let x: f64 = rng.gen_range(-2.0..2.0);
            let y: f64 = rng.gen_range(0.0..1.0 / std::f64::consts::PI);
            if y < crate::stats::semicircle_density(x, 2.0) {
                xs.push(x);
            }
        }
        let h = histogram_density(&xs, 0.05).unwrap();
        let worst = h
            .bin_centers
            .iter()
            .zip(&h.densities)
            .map(|(&c, &d)| (d - crate::stats::semicircle_density(c, 2.0)).abs())
            .fold(0.0, f64::max);
        assert!(worst < 0.02, "max deviation {worst}");
    }

    #[test]
    fn identity_vectors_are_fully_localized() {
        let dec = eigh(&SymmetricMatrix::identity(6)).unwrap();
        let curve = localization_curve_with_reference(&dec, 0.01, 0.5).unwrap();
        assert!(curve.linf.iter().all(|&x| x == 1.0));
        assert_eq!(curve.counts, vec![6]);
        assert_eq!(curve.mean_linf, vec![Some(1.0)]);
    }

    #[test]
    fn constant_vector_of_complete_graph() {
        let n = 9;
        let dec = eigh(&Graph::complete(n).laplacian()).unwrap();
        let curve = localization_curve_with_reference(&dec, 0.001, 0.0).unwrap();
        assert_abs_diff_eq!(curve.linf[0], 1.0 / (n as f64).sqrt(), epsilon = 1e-12);
        // Spectrum {0, 9 x 8}: two occupied bins, empty ones in between.
        assert_eq!(curve.counts.iter().sum::<usize>(), n);
        assert_eq!(curve.counts[0], 1);
        assert!(curve
            .mean_linf
            .iter()
            .zip(&curve.counts)
            .all(|(m, &c)| m.is_some() == (c > 0)));
        for &x in &curve.linf {
            assert!(x >= 1.0 / (n as f64).sqrt() - 1e-12 && x <= 1.0 + 1e-12);
        }
    }

    #[test]
    fn sphere_linf_small_dimensions() {
        assert_eq!(expected_sphere_linf(1, 100, Seed(1)).unwrap(), 1.0);
        // E max(|cos t|, |sin t|) = 2 sqrt(2) / pi.
        let exact = 2.0 * 2f64.sqrt() / std::f64::consts::PI;
        assert_abs_diff_eq!(exact, 0.900_316, epsilon = 1e-6);
        let mc = expected_sphere_linf(2, DEFAULT_SPHERE_DRAWS, Seed(2)).unwrap();
        assert!((mc - exact).abs() < 0.005, "{mc}");
    }

    #[test]
    fn sphere_linf_large_dimension() {
        let n = 3000usize;
        let asymptotic = (2.0 * (n as f64).ln() / n as f64).sqrt();
        assert_abs_diff_eq!(asymptotic, 0.0731, epsilon = 1e-4);
        let mc = expected_sphere_linf(n, 2000, Seed(3)).unwrap();
        assert!((mc / asymptotic - 1.0).abs() < 0.15, "{mc} vs {asymptotic}");
    }
}
