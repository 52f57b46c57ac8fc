//! Success metrics for a measured (or exact) node distribution.

use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SuccessMetrics {
    /// Probability mass on marked assignments.
    pub success: f64,
    /// `M / N`, the success rate of uniform guessing.
    pub baseline: f64,
    /// `success / baseline`; absent when nothing is marked.
    pub ratio: Option<f64>,
}

pub fn success_metrics(distribution: &[f64], marked: &[bool]) -> Result<SuccessMetrics> {
    if distribution.len() != marked.len() || distribution.is_empty() {
        return Err(Error::structure(format!(
            "distribution over {} outcomes vs {} marks",
            distribution.len(),
            marked.len()
        )));
    }
    if distribution.iter().any(|p| !p.is_finite() || *p < -1e-12) {
        return Err(Error::structure(
            "distribution has a negative or non-finite entry",
        ));
    }
    let total: f64 = distribution.iter().sum();
    if (total - 1.0).abs() > 1e-6 {
        return Err(Error::structure(format!("distribution sums to {total}")));
    }
    // an empty f64 sum is -0.0; adding 0.0 normalizes it
    let success: f64 = distribution
        .iter()
        .zip(marked)
        .filter(|(_, &m)| m)
        .map(|(p, _)| p)
        .sum::<f64>()
        + 0.0;
    let m = marked.iter().filter(|&&m| m).count();
    let baseline = m as f64 / marked.len() as f64;
    Ok(SuccessMetrics {
        success: success.clamp(0.0, 1.0),
        baseline,
        ratio: (m > 0).then(|| success / baseline),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nothing_marked_is_positive_zero() {
        let m = success_metrics(&[0.5, 0.5], &[false, false]).unwrap();
        assert!(m.success == 0.0 && m.success.is_sign_positive());
        assert_eq!(m.ratio, None);
    }

    #[test]
    fn uniform_null_case() {
        let dist = vec![1.0 / 16.0; 16];
        let marked: Vec<bool> = (0..16).map(|i| i % 4 == 0).collect();
        let m = success_metrics(&dist, &marked).unwrap();
        assert!((m.success - 0.25).abs() < 1e-12);
        assert_eq!(m.baseline, 0.25);
        assert!((m.ratio.unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn ideal_amplification() {
        let dist = vec![0.0, 0.5, 0.5, 0.0];
        let marked = vec![false, true, true, false];
        assert_eq!(success_metrics(&dist, &marked).unwrap().success, 1.0);
    }

    #[test]
    fn one_of_four_after_one_iteration() {
        let dist = vec![0.0, 0.0, 1.0, 0.0];
        let marked = vec![false, false, true, false];
        let m = success_metrics(&dist, &marked).unwrap();
        assert_eq!((m.success, m.baseline, m.ratio), (1.0, 0.25, Some(4.0)));
    }

    #[test]
    fn no_marks_no_ratio() {
        let m = success_metrics(&[0.5, 0.5], &[false, false]).unwrap();
        assert_eq!(m.ratio, None);
    }

    #[test]
    fn malformed() {
        assert!(success_metrics(&[0.5, 0.6], &[true, false]).is_err());
        assert!(success_metrics(&[1.0], &[true, false]).is_err());
        assert!(success_metrics(&[f64::NAN, 1.0], &[true, false]).is_err());
    }
}
