use crate::error::{domain, Result};

/// Normalised sink-variation weights over an organ's expansion period.
///
/// Weight `j` (1-based) is proportional to `x^(a-1) (1-x)^(b-1)` evaluated at
/// the cycle midpoint `x = (j - 0.5) / T`, with `a = 1 + 4p` and
/// `b = 1 + 4(1 - p)`. Small `p` moves the demand peak early in expansion.
pub fn sink_kernel(p: f64, duration: u32) -> Result<Vec<f64>> {
    if !(p > 0.0 && p < 1.0) {
        return Err(domain(format!("sink variation must lie in (0, 1), got {p}")));
    }
    if duration < 1 {
        return Err(domain("expansion duration must be at least one cycle"));
    }
    let t = duration as f64;
    let a = 1.0 + 4.0 * p;
    let b = 1.0 + 4.0 * (1.0 - p);
    let raw: Vec<f64> = (1..=duration)
        .map(|j| {
            let x = (j as f64 - 0.5) / t;
            x.powf(a - 1.0) * (1.0 - x).powf(b - 1.0)
        })
        .collect();
    let total: f64 = raw.iter().sum();
    Ok(raw.into_iter().map(|g| g / total).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn single_cycle_kernel_is_one() {
        assert_eq!(sink_kernel(0.5, 1).unwrap(), vec![1.0]);
        assert_eq!(sink_kernel(0.01, 1).unwrap(), vec![1.0]);
    }

    #[test]
    fn symmetric_parameter_gives_symmetric_kernel() {
        let f = sink_kernel(0.5, 3).unwrap();
        assert_relative_eq!(f[0], f[2], epsilon = 1e-15);
        assert!(f[1] > f[0]);
    }

    #[test]
    fn early_mode_for_small_parameter() {
        // Hand evaluation: a = 2.6, b = 3.4, g(j) = x^1.6 (1-x)^2.4 at
        // x = 1/16, 3/16, ..., 15/16 peaks at j = 4 (x = 7/16, close to the
        // continuous mode (a-1)/(a+b-2) = 0.4).
        let oracle: Vec<f64> = (1..=8)
            .map(|j| {
                let x = (j as f64 - 0.5) / 8.0;
                x.powf(1.6) * (1.0 - x).powf(2.4)
            })
            .collect();
        let s: f64 = oracle.iter().sum();
        let f = sink_kernel(0.4, 8).unwrap();
        for (a, b) in f.iter().zip(&oracle) {
            assert_relative_eq!(*a, b / s, max_relative = 1e-12);
        }
        let argmax = f
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))
            .unwrap()
            .0
            + 1;
        assert!(argmax == 3 || argmax == 4);
        assert!(argmax <= 4);
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(sink_kernel(0.0, 4).is_err());
        assert!(sink_kernel(1.0, 4).is_err());
        assert!(sink_kernel(f64::NAN, 4).is_err());
        assert!(sink_kernel(0.5, 0).is_err());
    }

    proptest! {
        #[test]
        fn kernel_sums_to_one(p in 0.001f64..0.999, t in 1u32..64) {
            let f = sink_kernel(p, t).unwrap();
            prop_assert_eq!(f.len(), t as usize);
            let s: f64 = f.iter().sum();
            prop_assert!((s - 1.0).abs() < 1e-9);
            prop_assert!(f.iter().all(|&w| w >= 0.0));
        }
    }
}
