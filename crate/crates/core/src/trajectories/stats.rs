use std::collections::BTreeMap;

use super::mcwf::TrajectoryRecord;
use super::TrajectoryError;
use crate::dynamics::Channel;
use crate::scalar::Real;

/// Photon-number distribution of an ensemble.
#[derive(Clone, Debug, PartialEq)]
pub struct EmissionStatistics<T> {
    /// n → number of trajectories with exactly n counted jumps.
    pub counts_histogram: BTreeMap<usize, usize>,
    /// P[n] for n = 0..=max observed.
    pub p_of_n: Vec<T>,
    /// Binomial standard error of each P[n].
    pub p_err: Vec<T>,
    pub mean: T,
    /// Standard error of `mean`.
    pub std_err: T,
    pub samples: usize,
}

impl<T: Real> EmissionStatistics<T> {
    pub fn from_counts(counts: &[usize]) -> Result<Self, TrajectoryError> {
        if counts.is_empty() {
            return Err(TrajectoryError::Empty);
        }
        let mut hist = BTreeMap::new();
        for &c in counts {
            *hist.entry(c).or_insert(0usize) += 1;
        }
        let n_max = *hist.keys().next_back().expect("nonempty");
        let total = T::from_usize_lossy(counts.len());
        let mut p_of_n = vec![T::zero(); n_max + 1];
        for (&n, &k) in &hist {
            p_of_n[n] = T::from_usize_lossy(k) / total;
        }
        let p_err = p_of_n
            .iter()
            .map(|&p| (p * (T::one() - p) / total).sqrt())
            .collect();
        let mean: T = p_of_n
            .iter()
            .enumerate()
            .map(|(n, &p)| T::from_usize_lossy(n) * p)
            .sum();
        let second: T = p_of_n
            .iter()
            .enumerate()
            .map(|(n, &p)| T::from_usize_lossy(n * n) * p)
            .sum();
        let var = if counts.len() > 1 {
            (second - mean * mean).max(T::zero()) * total / (total - T::one())
        } else {
            T::zero()
        };
        Ok(Self {
            counts_histogram: hist,
            p_of_n,
            p_err,
            mean,
            std_err: (var / total).sqrt(),
            samples: counts.len(),
        })
    }

    /// P[n], zero beyond the observed range.
    pub fn p(&self, n: usize) -> T {
        self.p_of_n.get(n).copied().unwrap_or_else(T::zero)
    }

    /// Σ_{k ≥ n} P[k].
    pub fn p_at_least(&self, n: usize) -> T {
        self.p_of_n.iter().skip(n).copied().sum()
    }

    pub fn g2(&self) -> Result<G2Estimate<T>, TrajectoryError> {
        g2_from_distribution(&self.p_of_n, &self.p_err)
    }
}

/// Statistics of the jumps on `channels`.
pub fn emission_statistics<T: Real>(
    records: &[TrajectoryRecord<T>],
    channels: &[Channel],
) -> Result<EmissionStatistics<T>, TrajectoryError> {
    let counts: Vec<usize> = records.iter().map(|r| r.count(channels)).collect();
    EmissionStatistics::from_counts(&counts)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct G2Estimate<T> {
    pub value: T,
    pub error: T,
}

/// g²(0) = Σ n(n−1)P[n] / (Σ n P[n])².
///
/// `p_err` holds one standard error per bin (may be empty for none); they
/// are propagated to first order treating bins as independent.
pub fn g2_from_distribution<T: Real>(p_of_n: &[T], p_err: &[T]) -> Result<G2Estimate<T>, TrajectoryError> {
    let nf = |n: usize| T::from_usize_lossy(n);
    let s1: T = p_of_n.iter().enumerate().map(|(n, &p)| nf(n) * p).sum();
    let s2: T = p_of_n
        .iter()
        .enumerate()
        .map(|(n, &p)| nf(n) * (nf(n) - T::one()) * p)
        .sum();
    if !(s1 > T::zero()) {
        return Err(TrajectoryError::UndefinedResult("mean photon number is zero".into()));
    }
    let value = s2 / (s1 * s1);
    let var: T = p_err
        .iter()
        .enumerate()
        .map(|(n, &e)| {
            let d = nf(n) * (nf(n) - T::one()) / (s1 * s1) - T::lit(2.0) * s2 * nf(n) / (s1 * s1 * s1);
            d * d * e * e
        })
        .sum();
    Ok(G2Estimate {
        value,
        error: var.sqrt(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simple_histograms() {
        let s = EmissionStatistics::<f64>::from_counts(&[1, 1, 1]).unwrap();
        assert_eq!(s.p(1), 1.0);
        assert_eq!(s.g2().unwrap().value, 0.0);
        let s = EmissionStatistics::<f64>::from_counts(&[0, 0, 2, 2]).unwrap();
        assert_eq!(s.p(0), 0.5);
        assert_eq!(s.p(2), 0.5);
        assert_eq!(s.mean, 1.0);
        assert!(EmissionStatistics::<f64>::from_counts(&[]).is_err());
    }

    #[test]
    fn g2_examples() {
        let g = g2_from_distribution(&[0.9f64, 0.0, 0.1], &[]).unwrap();
        assert!((g.value - 5.0).abs() < 1e-12);
        assert!(g2_from_distribution(&[1.0f64], &[]).is_err());
    }

    #[test]
    fn poisson_g2_is_one() {
        for lambda in [0.1f64, 1.0, 3.7] {
            let mut p = Vec::new();
            let mut term = (-lambda).exp();
            let mut n = 0;
            while term > 1e-16 || n < lambda as usize + 2 {
                p.push(term);
                n += 1;
                term *= lambda / n as f64;
            }
            let g = g2_from_distribution(&p, &[]).unwrap();
            assert!((g.value - 1.0).abs() < 1e-10, "{lambda}: {}", g.value);
        }
    }
}
