use super::sorted;
use crate::error::{Error, Result};

/// Exact one-sample Kolmogorov-Smirnov statistic
/// `sup_x |F_n(x) - F(x)|`, evaluated on both sides of every jump of the
/// empirical CDF.
pub fn ks_distance<F>(sample: &[f64], reference_cdf: F) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    if sample.is_empty() {
        return Err(Error::InsufficientData("KS distance of an empty sample".into()));
    }
    let xs = sorted(sample);
    let n = xs.len() as f64;
    let d = xs.iter().enumerate().fold(0.0f64, |acc, (i, &x)| {
        let f = reference_cdf(x);
        let above = (i + 1) as f64 / n - f;
        let below = f - i as f64 / n;
        acc.max(above).max(below)
    });
    Ok(d.clamp(0.0, 1.0))
}

/// Asymptotic Kolmogorov tail `P(sqrt(n) D > sqrt(n) d)`,
/// `2 sum_{k>=1} (-1)^(k-1) exp(-2 k^2 lambda^2)`, summed until terms drop
/// below `1e-12`.
pub fn kolmogorov_pvalue(d: f64, n: usize) -> f64 {
    let lambda = (n as f64).sqrt() * d;
    if lambda < 0.2 {
        // The series converges too slowly here and the tail is 1 to double
        // precision anyway.
        return 1.0;
    }
    let mut total = 0.0;
    for k in 1..=100u32 {
        let k = f64::from(k);
        let term = (-2.0 * k * k * lambda * lambda).exp();
        total += if k as u32 % 2 == 1 { term } else { -term };
        if term < 1e-12 {
            break;
        }
    }
    (2.0 * total).clamp(0.0, 1.0)
}

/// Two-sample statistic: sup-norm distance between the empirical CDFs.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::InsufficientData("two-sample KS with an empty sample".into()));
    }
    let (xa, xb) = (sorted(a), sorted(b));
    let (na, nb) = (xa.len() as f64, xb.len() as f64);
    let (mut i, mut j) = (0, 0);
    let mut d: f64 = 0.0;
    while i < xa.len() && j < xb.len() {
        let x = xa[i].min(xb[j]);
        while i < xa.len() && xa[i] <= x {
            i += 1;
        }
        while j < xb.len() && xb[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    Ok(d)
}

/// Quantile levels 0.01, 0.02, ..., 0.99.
pub fn default_probs() -> Vec<f64> {
    (1..100).map(|k| f64::from(k) / 100.0).collect()
}

/// Quantile of an ascending sample by linear interpolation between order
/// statistics at position `p (n - 1)`.
pub fn quantile_sorted(xs: &[f64], p: f64) -> f64 {
    let pos = p * (xs.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = (lo + 1).min(xs.len() - 1);
    let frac = pos - lo as f64;
    xs[lo] + frac * (xs[hi] - xs[lo])
}

/// Where reference quantiles come from.
pub enum QuantileSource<'a> {
    /// Empirical quantiles of another sample.
    Sample(&'a [f64]),
    /// An inverse CDF.
    Function(&'a dyn Fn(f64) -> f64),
}

/// Paired quantiles for a quantile-quantile plot.
#[derive(Debug, Clone, PartialEq)]
pub struct QQData {
    pub probs: Vec<f64>,
    pub q_sample: Vec<f64>,
    pub q_reference: Vec<f64>,
}

impl QQData {
    /// Largest `|q_sample - q_reference|` over levels in `[lo, hi]`.
    pub fn max_abs_deviation(&self, lo: f64, hi: f64) -> f64 {
        self.probs
            .iter()
            .zip(self.q_sample.iter().zip(&self.q_reference))
            .filter(|(p, _)| (lo..=hi).contains(*p))
            .map(|(_, (a, b))| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

pub fn qq_pairs(sample: &[f64], reference: QuantileSource<'_>, probs: &[f64]) -> Result<QQData> {
    if sample.is_empty() {
        return Err(Error::InsufficientData("quantiles of an empty sample".into()));
    }
    if probs.is_empty() || probs.iter().any(|&p| !(p > 0.0 && p < 1.0)) || probs.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidParameter(
            "quantile levels must be strictly increasing inside (0, 1)".into(),
        ));
    }
    let xs = sorted(sample);
    let q_sample = probs.iter().map(|&p| quantile_sorted(&xs, p)).collect();
    let q_reference = match reference {
        QuantileSource::Sample(r) => {
            if r.is_empty() {
                return Err(Error::InsufficientData("empty reference sample".into()));
            }
            let rs = sorted(r);
            probs.iter().map(|&p| quantile_sorted(&rs, p)).collect()
        }
        QuantileSource::Function(f) => probs.iter().map(|&p| f(p)).collect(),
    };
    Ok(QQData {
        probs: probs.to_vec(),
        q_sample,
        q_reference,
    })
}
