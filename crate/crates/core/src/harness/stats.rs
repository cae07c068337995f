//! Paired comparison of per-deal results.

use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, StudentsT};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PairedTest {
    pub n: usize,
    /// Mean of `a - b`.
    pub mean_diff: f64,
    pub t: f64,
    /// Two-sided.
    pub p: f64,
}

pub fn paired_t_test(a: &[f64], b: &[f64]) -> PairedTest {
    assert_eq!(a.len(), b.len(), "paired samples differ in length");
    let n = a.len();
    let d: Vec<f64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
    let mean = d.iter().sum::<f64>() / n.max(1) as f64;
    if n < 2 {
        return PairedTest { n, mean_diff: mean, t: 0.0, p: 1.0 };
    }
    let var = d.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
    if var == 0.0 {
        let (t, p) = if mean == 0.0 { (0.0, 1.0) } else { (f64::INFINITY.copysign(mean), 0.0) };
        return PairedTest { n, mean_diff: mean, t, p };
    }
    let t = mean / (var / n as f64).sqrt();
    let dist = StudentsT::new(0.0, 1.0, (n - 1) as f64).expect("valid degrees of freedom");
    let p = 2.0 * (1.0 - dist.cdf(t.abs()));
    PairedTest { n, mean_diff: mean, t, p }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_values() {
        // d = 1, 2, 3, 4: mean 2.5, sd 1.291, t = 3.873, df 3 -> p = 0.0305
        let a = [2.0, 4.0, 6.0, 8.0];
        let b = [1.0, 2.0, 3.0, 4.0];
        let r = paired_t_test(&a, &b);
        assert!((r.t - 3.8730).abs() < 1e-3);
        assert!((r.p - 0.0305).abs() < 1e-3);
        assert_eq!(paired_t_test(&a, &a).p, 1.0);
    }
}
