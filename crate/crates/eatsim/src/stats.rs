//! Small statistics helpers used by the analyses and their reports.

use crate::error::{Error, Result};

/// Pearson correlation coefficient of two equal-length samples.
pub fn pearson(xs: &[f64], ys: &[f64]) -> Result<f64> {
    if xs.len() != ys.len() {
        return Err(Error::validation("samples differ in length"));
    }
    let n = xs.len();
    if n < 2 {
        return Err(Error::validation("correlation needs at least two points"));
    }
    let mx = xs.iter().sum::<f64>() / n as f64;
    let my = ys.iter().sum::<f64>() / n as f64;
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    let mut syy = 0.0;
    for (&x, &y) in xs.iter().zip(ys) {
        sxy += (x - mx) * (y - my);
        sxx += (x - mx) * (x - mx);
        syy += (y - my) * (y - my);
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(Error::numeric("correlation undefined for constant sample"));
    }
    Ok(sxy / (sxx * syy).sqrt())
}

/// Ranks with ties averaged (the convention Spearman correlation expects).
pub fn average_ranks(xs: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..xs.len()).collect();
    order.sort_by(|&a, &b| xs[a].partial_cmp(&xs[b]).expect("NaN in rank input"));
    let mut ranks = vec![0.0; xs.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && xs[order[j + 1]] == xs[order[i]] {
            j += 1;
        }
        // 1-based ranks i+1 ..= j+1 share the average.
        let avg = (i + j) as f64 / 2.0 + 1.0;
        for &idx in &order[i..=j] {
            ranks[idx] = avg;
        }
        i = j + 1;
    }
    ranks
}

/// Spearman rank correlation (Pearson on average ranks).
pub fn spearman(xs: &[f64], ys: &[f64]) -> Result<f64> {
    if xs.len() != ys.len() {
        return Err(Error::validation("samples differ in length"));
    }
    pearson(&average_ranks(xs), &average_ranks(ys))
}

/// Continuous maximum-likelihood estimate of a power-law tail exponent from
/// the degrees `k >= k_min`, with the standard half-step discreteness
/// correction.
pub fn power_law_exponent_mle(degrees: &[usize], k_min: usize) -> Result<f64> {
    let tail: Vec<f64> = degrees
        .iter()
        .filter(|&&k| k >= k_min)
        .map(|&k| k as f64)
        .collect();
    if tail.len() < 10 {
        return Err(Error::validation(format!(
            "only {} degrees >= {k_min}; tail too small for an exponent fit",
            tail.len()
        )));
    }
    let shift = k_min as f64 - 0.5;
    let log_sum: f64 = tail.iter().map(|&k| (k / shift).ln()).sum();
    Ok(1.0 + tail.len() as f64 / log_sum)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn pearson_detects_perfect_linear_relation() {
        let xs = [1.0, 2.0, 3.0, 4.0];
        let ys = [2.0, 4.0, 6.0, 8.0];
        assert_relative_eq!(pearson(&xs, &ys).unwrap(), 1.0, epsilon = 1e-12);
        let neg: Vec<f64> = ys.iter().map(|y| -y).collect();
        assert_relative_eq!(pearson(&xs, &neg).unwrap(), -1.0, epsilon = 1e-12);
    }

    #[test]
    fn pearson_rejects_degenerate_input() {
        assert!(pearson(&[1.0], &[1.0]).is_err());
        assert!(pearson(&[1.0, 1.0], &[1.0, 2.0]).is_err());
        assert!(pearson(&[1.0, 2.0], &[1.0]).is_err());
    }

    #[test]
    fn ranks_average_over_ties() {
        // values 10, 20, 20, 30 -> ranks 1, 2.5, 2.5, 4
        let ranks = average_ranks(&[10.0, 20.0, 20.0, 30.0]);
        assert_eq!(ranks, vec![1.0, 2.5, 2.5, 4.0]);
    }

    #[test]
    fn spearman_sees_monotone_nonlinear_relation() {
        let xs: [f64; 5] = [1.0, 2.0, 3.0, 4.0, 5.0];
        let ys: Vec<f64> = xs.iter().map(|x| x.exp()).collect();
        assert_relative_eq!(spearman(&xs, &ys).unwrap(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn exponent_mle_recovers_synthetic_tail() {
        // Inverse-CDF sample from P(K >= k) ~ k^{-(alpha-1)} with alpha = 3.
        let alpha = 3.0f64;
        let k_min = 4usize;
        let mut degrees = Vec::new();
        let m = 20000;
        for i in 0..m {
            let u = (i as f64 + 0.5) / m as f64;
            let k = (k_min as f64 - 0.5) * u.powf(-1.0 / (alpha - 1.0));
            degrees.push(k.round() as usize);
        }
        let est = power_law_exponent_mle(&degrees, k_min).unwrap();
        assert!((est - alpha).abs() < 0.1, "estimate {est} too far from 3");
    }
}
