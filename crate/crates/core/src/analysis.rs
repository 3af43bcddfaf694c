//! Closed-form rates and capacities.
//!
//! Integrals over piecewise-constant deletion profiles use the antiderivatives
//! `∫ α²(κ−1)e^{−ακ} dκ = −e^{−ακ}(α(κ−1)+1)` and
//! `∫ α²κ e^{−ακ} dκ = −e^{−ακ}(ακ+1)`, so nothing here is approximated.

use serde::Serialize;
use thiserror::Error;

use crate::channel::DeletionProfile;

/// Upper end of the integer search for the interleaving factor.
pub const DEFAULT_M_MAX: usize = 10_000;

/// The α values tabulated in the rate table: 0.1, 0.2, …, 1.5.
pub fn default_alpha_grid() -> Vec<f64> {
    (1..=15).map(|i| i as f64 / 10.0).collect()
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AnalysisError {
    #[error("α = {0} must be positive and finite")]
    InvalidAlpha(f64),
    #[error("m = {0} must be at least 2")]
    InvalidM(usize),
    #[error("empty α grid")]
    EmptyGrid,
    #[error("invalid deletion profile: {0}")]
    ProfileInvalid(String),
}

fn check_alpha(alpha: f64) -> Result<(), AnalysisError> {
    if alpha > 0.0 && alpha.is_finite() {
        Ok(())
    } else {
        Err(AnalysisError::InvalidAlpha(alpha))
    }
}

/// `(1 − 1/m)(mα + 1)e^{−mα}`.
pub fn achievable_rate(m: usize, alpha: f64) -> f64 {
    let ma = m as f64 * alpha;
    (1.0 - 1.0 / m as f64) * (ma + 1.0) * (-ma).exp()
}

/// Rate of the global-alignment baseline, whose fragments must reach `2m·log n`:
/// `(1 − 1/m)(2mα + 1)e^{−2mα}`.
pub fn baseline_rate(m: usize, alpha: f64) -> f64 {
    achievable_rate(m, 2.0 * alpha)
}

/// `e^{−α}`.
pub fn capacity(alpha: f64) -> f64 {
    (-alpha).exp()
}

/// One row of the rate table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RateReport {
    pub alpha: f64,
    pub m_opt: usize,
    pub achievable: f64,
    pub m_baseline: usize,
    pub baseline: f64,
    pub capacity: f64,
}

fn argmax(m_max: usize, f: impl Fn(usize) -> f64) -> (usize, f64) {
    // strict `>` keeps the smallest maximizer
    (2..=m_max).fold((2, f(2)), |best, m| {
        let v = f(m);
        if v > best.1 {
            (m, v)
        } else {
            best
        }
    })
}

/// Best integer `m ∈ [2, m_max]` for the scheme and for the baseline.
pub fn optimize_m(alpha: f64, m_max: usize) -> Result<RateReport, AnalysisError> {
    check_alpha(alpha)?;
    if m_max < 2 {
        return Err(AnalysisError::InvalidM(m_max));
    }
    let (m_opt, achievable) = argmax(m_max, |m| achievable_rate(m, alpha));
    let (m_baseline, baseline) = argmax(m_max, |m| baseline_rate(m, alpha));
    Ok(RateReport {
        alpha,
        m_opt,
        achievable,
        m_baseline,
        baseline,
        capacity: capacity(alpha),
    })
}

pub fn rate_table(alphas: &[f64], m_max: usize) -> Result<Vec<RateReport>, AnalysisError> {
    if alphas.is_empty() {
        return Err(AnalysisError::EmptyGrid);
    }
    alphas.iter().map(|&a| optimize_m(a, m_max)).collect()
}

/// Sum over pieces of `(1 − d)·[F(a) − F(b)]` on `[max(lo, from), hi)`, where
/// `F` is the (decreasing) tail function of the integrand.
fn piecewise_tail(profile: &DeletionProfile, from: f64, tail: impl Fn(f64) -> f64) -> f64 {
    profile
        .pieces()
        .iter()
        .filter(|p| p.hi > from && p.d < 1.0)
        .map(|p| {
            let a = p.lo.max(from);
            let upper = if p.hi.is_finite() { tail(p.hi) } else { 0.0 };
            (1.0 - p.d) * (tail(a) - upper)
        })
        .sum()
}

/// Capacity of the lost-pieces channel, `α² ∫_1^∞ (κ−1)(1−d̂(κ))e^{−ακ} dκ`.
pub fn tpclp_capacity(alpha: f64, profile: &DeletionProfile) -> Result<f64, AnalysisError> {
    check_alpha(alpha)?;
    Ok(piecewise_tail(profile, 1.0, |k| {
        (-alpha * k).exp() * (alpha * (k - 1.0) + 1.0)
    }))
}

/// Fraction of coordinates covered by retained fragments,
/// `α² ∫_m^∞ κ(1−d̂(κ))e^{−ακ} dκ`.
pub fn tpclp_f_d(alpha: f64, m: usize, profile: &DeletionProfile) -> Result<f64, AnalysisError> {
    check_alpha(alpha)?;
    Ok(piecewise_tail(profile, m as f64, |k| (-alpha * k).exp() * (alpha * k + 1.0)))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TpclpReport {
    pub alpha: f64,
    pub m: usize,
    pub capacity: f64,
    pub f_d: f64,
    pub achievable: f64,
    pub gap: f64,
    pub gap_bound: f64,
}

/// Capacity, achievable rate `(1 − 1/m)·F_d` and the gap bound `e^{−αm}/m`.
pub fn tpclp_report(alpha: f64, m: usize, profile: &DeletionProfile) -> Result<TpclpReport, AnalysisError> {
    check_alpha(alpha)?;
    if m < 2 {
        return Err(AnalysisError::InvalidM(m));
    }
    if profile.threshold() != m as f64 {
        return Err(AnalysisError::ProfileInvalid(format!(
            "profile threshold {} differs from m = {m}",
            profile.threshold()
        )));
    }
    let capacity = tpclp_capacity(alpha, profile)?;
    let f_d = tpclp_f_d(alpha, m, profile)?;
    let achievable = (1.0 - 1.0 / m as f64) * f_d;
    let gap = capacity - achievable;
    let gap_bound = (-alpha * m as f64).exp() / m as f64;
    debug_assert!(gap >= -1e-12 && gap <= gap_bound + 1e-12, "gap {gap} outside [0, {gap_bound}]");
    Ok(TpclpReport {
        alpha,
        m,
        capacity,
        f_d,
        achievable,
        gap,
        gap_bound,
    })
}

/// Rounds half-to-even at three decimals, as the table is printed.
pub fn round3(x: f64) -> f64 {
    (x * 1000.0).round_ties_even() / 1000.0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::Piece;

    /// Reference rates: α, baseline m, baseline rate, m, rate, capacity.
    const TABLE: [(f64, usize, f64, usize, f64, f64); 15] = [
        (0.1, 4, 0.607, 6, 0.732, 0.905),
        (0.2, 3, 0.442, 4, 0.607, 0.819),
        (0.3, 2, 0.331, 3, 0.515, 0.741),
        (0.4, 2, 0.262, 3, 0.442, 0.670),
        (0.5, 2, 0.203, 3, 0.372, 0.607),
        (0.6, 2, 0.154, 2, 0.331, 0.549),
        (0.7, 2, 0.116, 2, 0.296, 0.497),
        (0.8, 2, 0.086, 2, 0.262, 0.449),
        (0.9, 2, 0.063, 2, 0.231, 0.407),
        (1.0, 2, 0.046, 2, 0.203, 0.368),
        (1.1, 2, 0.033, 2, 0.177, 0.333),
        (1.2, 2, 0.024, 2, 0.154, 0.301),
        (1.3, 2, 0.017, 2, 0.134, 0.273),
        (1.4, 2, 0.012, 2, 0.116, 0.247),
        (1.5, 2, 0.009, 2, 0.100, 0.223),
    ];

    fn example_profile() -> DeletionProfile {
        DeletionProfile::new(
            10.0,
            vec![
                Piece { lo: 10.0, hi: 20.0, d: 0.2 },
                Piece { lo: 20.0, hi: f64::INFINITY, d: 0.0 },
            ],
        )
        .unwrap()
    }

    /// Adaptive Simpson on `[a, b]`.
    fn simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
        fn rec(f: &dyn Fn(f64) -> f64, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, tol: f64, depth: u32) -> f64 {
            let m = 0.5 * (a + b);
            let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
            let (flm, frm) = (f(lm), f(rm));
            let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
            let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
            if depth == 0 || (left + right - whole).abs() <= 15.0 * tol {
                left + right + (left + right - whole) / 15.0
            } else {
                rec(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1)
                    + rec(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
            }
        }
        let (fa, fb, fm) = (f(a), f(b), f(0.5 * (a + b)));
        rec(f, a, b, fa, fm, fb, (b - a) / 6.0 * (fa + 4.0 * fm + fb), tol, 50)
    }

    #[test]
    fn table_rows_reproduced() {
        let rows = rate_table(&default_alpha_grid(), DEFAULT_M_MAX).unwrap();
        for (r, &(a, mb, rb, m, ra, c)) in rows.iter().zip(&TABLE) {
            assert!((r.alpha - a).abs() < 1e-12);
            assert_eq!((r.m_baseline, r.m_opt), (mb, m), "α = {a}");
            assert!((r.baseline - rb).abs() <= 5e-4, "α = {a}: {}", r.baseline);
            assert!((r.achievable - ra).abs() <= 5e-4, "α = {a}: {}", r.achievable);
            assert!((r.capacity - c).abs() <= 5e-4, "α = {a}: {}", r.capacity);
        }
    }

    #[test]
    fn point_values() {
        assert_eq!(round3(achievable_rate(3, 0.5)), 0.372);
        assert_eq!(round3(achievable_rate(2, 1.0)), 0.203);
        assert_eq!(round3(baseline_rate(2, 0.5)), 0.203);
        assert_eq!(round3(baseline_rate(4, 0.1)), 0.607);
        assert_eq!(round3(baseline_rate(2, 1.5)), 0.009);
        assert_eq!(capacity(0.0), 1.0);
        assert!((achievable_rate(5, 1e-9) - 0.8).abs() < 1e-6);
        assert!(achievable_rate(10_000, 0.5) < 1e-100);
    }

    #[test]
    fn grid_errors() {
        assert_eq!(rate_table(&[], 10), Err(AnalysisError::EmptyGrid));
        assert_eq!(rate_table(&[0.0], 10), Err(AnalysisError::InvalidAlpha(0.0)));
        assert!(optimize_m(0.3, 1).is_err());
    }

    #[test]
    fn sweep_is_monotone_and_below_capacity() {
        let alphas: Vec<f64> = (1..200).map(|i| i as f64 / 100.0).collect();
        let rows = rate_table(&alphas, DEFAULT_M_MAX).unwrap();
        for w in rows.windows(2) {
            assert!(w[1].achievable <= w[0].achievable);
            assert!(w[1].capacity < w[0].capacity);
        }
        for r in &rows {
            assert!(r.baseline <= r.achievable);
            for m in [2, 3, 7, 50] {
                assert!(achievable_rate(m, r.alpha) < capacity(r.alpha));
            }
        }
    }

    #[test]
    fn tpclp_example() {
        let r = tpclp_report(0.1, 10, &example_profile()).unwrap();
        assert!((r.capacity - 0.6377).abs() <= 5e-4, "{}", r.capacity);
        assert!((r.f_d - 0.6698).abs() <= 5e-4, "{}", r.f_d);
        assert!((r.achievable - 0.6028).abs() <= 5e-4);
        assert!((r.gap - 0.0348).abs() <= 5e-4);
        assert!((r.gap_bound - (-1.0f64).exp() / 10.0).abs() < 1e-15);
        assert!(r.gap >= 0.0 && r.gap <= r.gap_bound);
    }

    #[test]
    fn closed_forms_match_quadrature() {
        let alpha = 0.1;
        let p = example_profile();
        let cap_f = |k: f64| alpha * alpha * (k - 1.0) * (1.0 - p.at(k)) * (-alpha * k).exp();
        let fd_f = |k: f64| alpha * alpha * k * (1.0 - p.at(k)) * (-alpha * k).exp();
        // split at the discontinuity; the tail beyond 2000 is below 1e-80
        let quad = |f: &dyn Fn(f64) -> f64| simpson(f, 10.0, 20.0, 1e-13) + simpson(f, 20.0, 2000.0, 1e-13);
        assert!((quad(&cap_f) - tpclp_capacity(alpha, &p).unwrap()).abs() < 1e-9);
        assert!((quad(&fd_f) - tpclp_f_d(alpha, 10, &p).unwrap()).abs() < 1e-9);
    }

    #[test]
    fn degenerate_profiles() {
        let all = DeletionProfile::constant(10.0, 1.0).unwrap();
        assert_eq!(tpclp_capacity(0.1, &all).unwrap(), 0.0);
        let r = tpclp_report(0.1, 10, &all).unwrap();
        assert_eq!((r.capacity, r.f_d, r.achievable, r.gap), (0.0, 0.0, 0.0, 0.0));

        let none = DeletionProfile::constant(0.0, 0.0).unwrap();
        let c = tpclp_capacity(0.1, &none).unwrap();
        assert!((c - (-0.1f64).exp()).abs() < 1e-12);
        assert_eq!(round3(c), 0.905);

        let above = DeletionProfile::constant(4.0, 0.0).unwrap();
        let fd = tpclp_f_d(0.3, 4, &above).unwrap();
        assert!((fd - (0.3 * 4.0 + 1.0) * (-1.2f64).exp()).abs() < 1e-12);
    }

    #[test]
    fn gap_bound_holds_on_a_grid() {
        for &alpha in &[0.05, 0.1, 0.3, 0.7] {
            for m in [2, 5, 10, 20] {
                for d in [0.0, 0.3, 0.9] {
                    let prof = DeletionProfile::new(
                        m as f64,
                        vec![
                            Piece { lo: m as f64, hi: 2.0 * m as f64, d },
                            Piece { lo: 2.0 * m as f64, hi: f64::INFINITY, d: d / 2.0 },
                        ],
                    )
                    .unwrap();
                    let r = tpclp_report(alpha, m, &prof).unwrap();
                    assert!(r.gap >= -1e-12 && r.gap <= r.gap_bound + 1e-12, "α={alpha} m={m} d={d}");
                }
            }
        }
    }

    #[test]
    fn mismatched_threshold_rejected() {
        assert!(matches!(
            tpclp_report(0.1, 5, &example_profile()),
            Err(AnalysisError::ProfileInvalid(_))
        ));
    }
}
