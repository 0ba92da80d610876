use crate::error::{Error, Result};

/// Fraction of eigenvalues dropped from each end of the spectrum, keeping
/// the middle 80%.
pub const DEFAULT_TRIM_FRACTION: f64 = 0.10;

/// Consecutive gaps of the trimmed spectrum, scaled to unit mean.
#[derive(Debug, Clone, PartialEq)]
pub struct SpacingSample {
    pub spacings: Vec<f64>,
    pub trim_fraction: f64,
}

impl SpacingSample {
    pub fn mean(&self) -> f64 {
        self.spacings.iter().sum::<f64>() / self.spacings.len() as f64
    }

    pub fn len(&self) -> usize {
        self.spacings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.spacings.is_empty()
    }
}

/// Drops `floor(trim_fraction * n)` eigenvalues from each end of the
/// ascending list, takes consecutive differences and divides them by their
/// mean.
pub fn extract_spacings(eigenvalues: &[f64], trim_fraction: f64) -> Result<SpacingSample> {
    if !(0.0..0.5).contains(&trim_fraction) {
        return Err(Error::InvalidParameter(format!(
            "trim fraction {trim_fraction} outside [0, 0.5)"
        )));
    }
    let n = eigenvalues.len();
    // Guard against products like 0.1 * 30 landing a hair below an integer.
    let cut = (trim_fraction * n as f64 + 1e-9).floor() as usize;
    let kept = n.saturating_sub(2 * cut);
    if kept < 3 {
        return Err(Error::InsufficientData(format!(
            "{kept} eigenvalues left after trimming {cut} per side; need at least 3"
        )));
    }
    let middle = &eigenvalues[cut..n - cut];
    let gaps: Vec<f64> = middle.windows(2).map(|w| w[1] - w[0]).collect();
    if gaps.iter().any(|&g| g < 0.0 || !g.is_finite()) {
        return Err(Error::InvalidParameter(
            "eigenvalues must be finite and ascending".into(),
        ));
    }
    let mean = gaps.iter().sum::<f64>() / gaps.len() as f64;
    if mean <= 0.0 {
        return Err(Error::InsufficientData("all trimmed eigenvalues coincide".into()));
    }
    Ok(SpacingSample {
        spacings: gaps.into_iter().map(|g| g / mean).collect(),
        trim_fraction,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    #[test]
    fn normalizes_to_unit_mean() {
        let s = extract_spacings(&[0.0, 1.0, 3.0, 7.0], 0.0).unwrap();
        let want = [3.0 / 7.0, 6.0 / 7.0, 12.0 / 7.0];
        for (g, w) in s.spacings.iter().zip(want) {
            assert_abs_diff_eq!(*g, w, epsilon = 1e-15);
        }
    }

    #[test]
    fn constant_gaps_are_one() {
        let eigs: Vec<f64> = (0..20).map(|i| 0.25 * i as f64).collect();
        let s = extract_spacings(&eigs, 0.1).unwrap();
        assert!(s.spacings.iter().all(|&x| x == 1.0));
    }

    #[test]
    fn trimming_counts() {
        let eigs: Vec<f64> = (0..30).map(|i| (i as f64).powi(2)).collect();
        let s = extract_spacings(&eigs, 0.1).unwrap();
        assert_eq!(s.len(), 23);
        assert_eq!(s.trim_fraction, 0.1);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(
            extract_spacings(&[0.0, 1.0], 0.0),
            Err(Error::InsufficientData(_))
        ));
        assert!(matches!(
            extract_spacings(&[0.0; 10], 0.0),
            Err(Error::InsufficientData(_))
        ));
        assert!(matches!(
            extract_spacings(&[0.0, 1.0, 2.0], 0.5),
            Err(Error::InvalidParameter(_))
        ));
        assert!(matches!(
            extract_spacings(&[0.0, 2.0, 1.0], 0.0),
            Err(Error::InvalidParameter(_))
        ));
        // 10 values, trim 0.4 -> 4 per side -> 2 left.
        let eigs: Vec<f64> = (0..10).map(f64::from).collect();
        assert!(extract_spacings(&eigs, 0.4).is_err());
    }

    proptest! {
        #[test]
        fn mean_is_one(mut eigs in prop::collection::vec(-1e3f64..1e3, 3..200), trim in 0.0f64..0.3) {
            eigs.sort_by(f64::total_cmp);
            if let Ok(s) = extract_spacings(&eigs, trim) {
                prop_assert!((s.mean() - 1.0).abs() <= 1e-12);
                prop_assert!(s.spacings.iter().all(|&x| x >= 0.0));
            }
        }
    }
}
