//! The small-parameter region where the reduced Kotecký-Preiss condition
//! is guaranteed.

use crate::error::{invalid, Error, Result};

/// Cap on `‖K‖` needed for `e^{|K|} - 1 ≤ 2|K|`.
pub const NORM_CAP: f64 = 0.5;

fn check_p(p: usize) -> Result<()> {
    if p < 2 {
        return Err(Error::Unsupported(format!(
            "the region formula divides by p - 1; p = {p} is handled by the exact ensemble instead"
        )));
    }
    Ok(())
}

fn check_m(m_base: f64) -> Result<()> {
    if !(m_base.is_finite() && m_base > 1.0) {
        return invalid(format!("M must be finite and > 1, got {m_base}"));
    }
    Ok(())
}

/// `log M (p−1)^p / (2 (Mp)^p (1 + (p−1) log M))`.
pub fn norm_threshold(p: usize, m_base: f64) -> Result<f64> {
    check_p(p)?;
    check_m(m_base)?;
    let pf = p as f64;
    let l = m_base.ln();
    Ok(l * (pf - 1.0).powi(p as i32) / (2.0 * (m_base * pf).powi(p as i32) * (1.0 + (pf - 1.0) * l)))
}

/// Admissible `‖K‖`: the threshold, capped at one half.
pub fn norm_budget(p: usize, m_base: f64) -> Result<f64> {
    Ok(norm_threshold(p, m_base)?.min(NORM_CAP))
}

/// Largest admissible `Σ|β_i|` for motif maxima `p` (edges) and `m`
/// (vertices).
pub fn region_bound(p: usize, m: usize, m_base: f64) -> Result<f64> {
    if m < 2 {
        return invalid(format!("motif vertex count m must be at least 2, got {m}"));
    }
    Ok(norm_budget(p, m_base)? / (m * (m - 1)) as f64)
}

/// `log M = (−p + √(5p² − 4p)) / (2p(p−1))`.
pub fn optimal_log_m(p: usize) -> Result<f64> {
    check_p(p)?;
    let pf = p as f64;
    Ok((-pf + (5.0 * pf * pf - 4.0 * pf).sqrt()) / (2.0 * pf * (pf - 1.0)))
}

pub fn optimal_m(p: usize) -> Result<f64> {
    Ok(optimal_log_m(p)?.exp())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn two_star_budget() {
        let m = optimal_m(2).unwrap();
        assert!((m.ln() - (3f64.sqrt() - 1.0) / 2.0).abs() < 1e-15);
        let b = region_bound(2, 3, m).unwrap();
        assert!((b - 0.002_684_7).abs() < 1e-7, "{b}");
    }

    #[test]
    fn optimal_log_m_values() {
        assert!((optimal_log_m(3).unwrap() - (-3.0 + 33f64.sqrt()) / 12.0).abs() < 1e-15);
        assert!((optimal_log_m(4).unwrap() - 1.0 / 6.0).abs() < 1e-15);
        for p in 2..20 {
            assert!(optimal_m(p).unwrap() > 1.0);
        }
    }

    #[test]
    fn degenerate_inputs() {
        assert!(matches!(region_bound(1, 2, 2.0), Err(Error::Unsupported(_))));
        assert!(matches!(optimal_m(1), Err(Error::Unsupported(_))));
        assert!(region_bound(2, 3, 1.0).is_err());
        assert!(region_bound(2, 1, 2.0).is_err());
    }

    #[test]
    fn vanishes_at_both_ends() {
        assert!(region_bound(2, 3, 1.0 + 1e-12).unwrap() < 1e-12);
        assert!(region_bound(2, 3, 1e6).unwrap() < 1e-10);
    }

    proptest! {
        #[test]
        fn optimum_dominates(p in 2usize..6, m_base in 1.0001f64..20.0) {
            let best = region_bound(p, 3, optimal_m(p).unwrap()).unwrap();
            prop_assert!(region_bound(p, 3, m_base).unwrap() <= best * (1.0 + 1e-12));
        }
    }
}
