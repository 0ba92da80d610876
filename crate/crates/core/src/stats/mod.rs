//! Distributional statistics of spectra: reference densities, trimmed and
//! mean-normalized spacings, Kolmogorov-Smirnov distances, quantile pairs,
//! histograms and binned L-infinity localization curves.
//!
//! Nothing here unfolds the spectrum. Spacings are taken on raw eigenvalues
//! and only normalized to unit mean.

mod densities;
mod ks;
mod localization;
mod spacings;

pub use densities::{
    mckay_cdf, mckay_density, semicircle_cdf, semicircle_density, wigner_surmise_goe, wigner_surmise_goe_cdf,
    wigner_surmise_goe_quantile,
};
pub use ks::{
    default_probs, kolmogorov_pvalue, ks_distance, ks_two_sample, qq_pairs, quantile_sorted, QQData, QuantileSource,
};
pub use localization::{
    bin_localization, expected_sphere_linf, histogram_density, linf_norm, localization_curve,
    localization_curve_with_reference, Histogram, LocalizationCurve, DEFAULT_SPHERE_DRAWS, SPHERE_LINF_SEED,
};
pub use spacings::{extract_spacings, SpacingSample, DEFAULT_TRIM_FRACTION};

/// Sorts a copy of `values` (NaNs last).
pub(crate) fn sorted(values: &[f64]) -> Vec<f64> {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    v
}
