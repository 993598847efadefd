//! Error-rate curves and SNR threshold extraction.

use serde::{Deserialize, Serialize};

use crate::channel::SnrPoint;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Target {
    /// Any information bit wrong.
    FrameP,
    /// Any public bit wrong.
    PublicPp,
    /// Any secret bit wrong.
    SecretPs,
}

impl Target {
    pub const ALL: [Target; 3] = [Target::FrameP, Target::PublicPp, Target::SecretPs];

    pub fn name(self) -> &'static str {
        match self {
            Target::FrameP => "P",
            Target::PublicPp => "Pp",
            Target::SecretPs => "Ps",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub gamma_db: f64,
    pub frames: u64,
    pub errors: u64,
}

impl CurvePoint {
    pub fn p_hat(&self) -> f64 {
        self.errors as f64 / self.frames as f64
    }
}

/// Monte Carlo estimates of one error probability over an SNR grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorRateCurve {
    pub target: Target,
    pub points: Vec<CurvePoint>,
}

impl ErrorRateCurve {
    pub fn new(target: Target, points: Vec<CurvePoint>) -> Result<Self> {
        for p in &points {
            if !p.gamma_db.is_finite() || p.frames == 0 || p.errors > p.frames {
                return Err(Error::InvalidCurve(format!("bad point {p:?}")));
            }
        }
        if points.windows(2).any(|w| w[1].gamma_db <= w[0].gamma_db) {
            return Err(Error::InvalidCurve("SNR values must be strictly increasing".into()));
        }
        Ok(ErrorRateCurve { target, points })
    }
}

/// Side of the crossing to report.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CrossingSide {
    /// Smallest SNR at which the probability is at most the target.
    UpperCrossingForReliability,
    /// Largest SNR at which the probability is at least the target.
    LowerCrossingForSecurity,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProbabilityPoint {
    pub gamma_db: f64,
    pub p: f64,
    /// The probability is a zero-error upper bound rather than an estimate.
    pub bounded: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Threshold {
    pub snr: SnrPoint,
    /// One of the bracketing points was a zero-error bound.
    pub extrapolated: bool,
}

/// A non-increasing probability curve ready for interpolation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbabilityCurve {
    pub points: Vec<ProbabilityPoint>,
}

/// One-sided 95% upper bound on a probability after zero errors in `frames`
/// trials, `1 - 0.05^(1/frames)` (about `3 / frames`).
pub fn zero_error_bound(frames: u64) -> f64 {
    -(0.05f64.ln() / frames as f64).exp_m1()
}

impl ProbabilityCurve {
    /// Pools adjacent violators into a non-increasing curve, then replaces
    /// zero estimates by [`zero_error_bound`].
    pub fn from_estimates(curve: &ErrorRateCurve) -> Self {
        // blocks of (errors, frames, number of points)
        let mut blocks: Vec<(u64, u64, usize)> = Vec::new();
        for p in &curve.points {
            blocks.push((p.errors, p.frames, 1));
            while blocks.len() >= 2 {
                let (e1, f1, _) = blocks[blocks.len() - 2];
                let (e2, f2, _) = blocks[blocks.len() - 1];
                // violation when the later rate exceeds the earlier one
                if (e2 as u128) * (f1 as u128) > (e1 as u128) * (f2 as u128) {
                    let (e, f, c) = blocks.pop().expect("two blocks");
                    let last = blocks.last_mut().expect("one block");
                    last.0 += e;
                    last.1 += f;
                    last.2 += c;
                } else {
                    break;
                }
            }
        }
        let mut points = Vec::with_capacity(curve.points.len());
        let mut iter = curve.points.iter();
        let mut ceiling = 1.0f64;
        for (errors, frames, count) in blocks {
            let (p, bounded) = if errors == 0 {
                (zero_error_bound(frames), true)
            } else {
                (errors as f64 / frames as f64, false)
            };
            let p = p.min(ceiling);
            ceiling = p;
            for point in iter.by_ref().take(count) {
                points.push(ProbabilityPoint {
                    gamma_db: point.gamma_db,
                    p,
                    bounded,
                });
            }
        }
        ProbabilityCurve { points }
    }

    /// Pointwise `1 - (1 - P)^L`.
    pub fn concatenated(&self, l: u32) -> Result<Self> {
        Ok(ProbabilityCurve {
            points: self
                .points
                .iter()
                .map(|pt| Ok(ProbabilityPoint { p: super::concatenated_bler(pt.p, l)?, ..*pt }))
                .collect::<Result<_>>()?,
        })
    }

    pub fn range(&self) -> (f64, f64) {
        let min = self.points.iter().map(|p| p.p).fold(f64::INFINITY, f64::min);
        let max = self.points.iter().map(|p| p.p).fold(f64::NEG_INFINITY, f64::max);
        (min, max)
    }

    /// Log-linear interpolation of the SNR at which the curve crosses `target`.
    pub fn threshold(&self, target: f64, side: CrossingSide) -> Result<Threshold> {
        if !(target > 0.0 && target < 1.0) {
            return Err(Error::InvalidProbability(target));
        }
        let pts = &self.points;
        let not_bracketed = || {
            let (min, max) = self.range();
            Error::NotBracketed { target, min, max }
        };
        let (hi, lo) = match side {
            CrossingSide::UpperCrossingForReliability => {
                let i = pts.iter().position(|p| p.p <= target).ok_or_else(not_bracketed)?;
                if i == 0 {
                    return Err(not_bracketed());
                }
                (i - 1, i)
            }
            CrossingSide::LowerCrossingForSecurity => {
                let i = pts.iter().rposition(|p| p.p >= target).ok_or_else(not_bracketed)?;
                if i + 1 == pts.len() {
                    return Err(not_bracketed());
                }
                (i, i + 1)
            }
        };
        let (a, b) = (pts[hi], pts[lo]);
        let extrapolated = a.bounded || b.bounded;
        let gamma = if a.p == b.p {
            a.gamma_db
        } else {
            let t = (a.p.log10() - target.log10()) / (a.p.log10() - b.p.log10());
            a.gamma_db + t * (b.gamma_db - a.gamma_db)
        };
        Ok(Threshold {
            snr: SnrPoint::from_db(gamma)?,
            extrapolated,
        })
    }
}

impl ProbabilityCurve {
    /// Extends the curve by a straight line in `log10 P` fitted through its
    /// last `fit` estimated points, in steps of `step_db` until the line
    /// reaches `floor`.
    ///
    /// Zero-error bounds at the tail are dropped first. Appended points are
    /// flagged as bounded, so thresholds relying on them report
    /// `extrapolated`.
    pub fn extend_log_linear(&self, fit: usize, floor: f64, step_db: f64) -> Result<Self> {
        if fit < 2 || !(floor > 0.0 && floor < 1.0) || !(step_db > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "extrapolation needs fit >= 2, floor in (0, 1), positive step; got {fit}, {floor}, {step_db}"
            )));
        }
        let mut points = self.points.clone();
        while points.last().is_some_and(|p| p.bounded) {
            points.pop();
        }
        let tail: Vec<(f64, f64)> = points
            .iter()
            .rev()
            .take_while(|p| p.p < 1.0)
            .take(fit)
            .map(|p| (p.gamma_db, p.p.log10()))
            .collect();
        if tail.len() < fit {
            return Err(Error::InvalidCurve(format!("only {} points to fit", tail.len())));
        }
        let m = tail.len() as f64;
        let (sx, sy) = tail.iter().fold((0.0, 0.0), |(a, b), &(x, y)| (a + x, b + y));
        let (mx, my) = (sx / m, sy / m);
        let sxx: f64 = tail.iter().map(|&(x, _)| (x - mx).powi(2)).sum();
        let sxy: f64 = tail.iter().map(|&(x, y)| (x - mx) * (y - my)).sum();
        let slope = sxy / sxx;
        if !(slope < 0.0) {
            return Err(Error::InvalidCurve(format!("tail slope {slope} is not decreasing")));
        }
        let last = *points.last().expect("fitted points exist");
        let mut gamma = last.gamma_db;
        let mut p = last.p;
        while p > floor {
            gamma += step_db;
            p = 10f64.powf(my + slope * (gamma - mx)).min(p);
            points.push(ProbabilityPoint {
                gamma_db: gamma,
                p,
                bounded: true,
            });
        }
        Ok(ProbabilityCurve { points })
    }
}

/// Cleans `curve` and extracts the SNR at which it crosses `target_p`.
pub fn extract_threshold(curve: &ErrorRateCurve, target_p: f64, side: CrossingSide) -> Result<Threshold> {
    ProbabilityCurve::from_estimates(curve).threshold(target_p, side)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn curve(points: &[(f64, u64, u64)]) -> ErrorRateCurve {
        ErrorRateCurve::new(
            Target::SecretPs,
            points
                .iter()
                .map(|&(gamma_db, errors, frames)| CurvePoint { gamma_db, frames, errors })
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn log_linear_midpoint() {
        let c = curve(&[(2.0, 100, 100_000), (3.0, 100, 10_000_000)]);
        for side in [CrossingSide::UpperCrossingForReliability, CrossingSide::LowerCrossingForSecurity] {
            let t = extract_threshold(&c, 1e-4, side).unwrap();
            assert!((t.snr.db() - 2.5).abs() < 1e-9);
            assert!(!t.extrapolated);
        }
    }

    #[test]
    fn flat_then_dropping() {
        let c = curve(&[(0.0, 100, 100), (1.0, 100, 100), (2.0, 50, 100), (3.0, 1, 100)]);
        let t = extract_threshold(&c, 0.9, CrossingSide::LowerCrossingForSecurity).unwrap();
        let expected = 1.0 + (0.0 - 0.9f64.log10()) / (0.0 - 0.5f64.log10());
        assert!((t.snr.db() - expected).abs() < 1e-12);
        assert!(t.snr.db() > 1.0 && t.snr.db() < 2.0);
        let r = extract_threshold(&c, 0.9, CrossingSide::UpperCrossingForReliability).unwrap();
        assert!((r.snr.db() - expected).abs() < 1e-12);
    }

    #[test]
    fn pools_adjacent_violators() {
        let c = curve(&[(0.0, 50, 100), (1.0, 10, 100), (2.0, 30, 100), (3.0, 1, 100)]);
        let clean = ProbabilityCurve::from_estimates(&c);
        let ps: Vec<f64> = clean.points.iter().map(|p| p.p).collect();
        assert_eq!(ps, vec![0.5, 0.2, 0.2, 0.01]);
        assert!(ps.windows(2).all(|w| w[1] <= w[0]));
    }

    #[test]
    fn zero_error_points_use_bound() {
        let c = curve(&[(0.0, 10, 1000), (1.0, 0, 100_000)]);
        let clean = ProbabilityCurve::from_estimates(&c);
        assert!(clean.points[1].bounded);
        assert!((clean.points[1].p - 2.9957e-5).abs() < 1e-8);
        let t = extract_threshold(&c, 1e-3, CrossingSide::UpperCrossingForReliability).unwrap();
        assert!(t.extrapolated);
    }

    #[test]
    fn not_bracketed_reports_range() {
        let c = curve(&[(0.0, 10, 100), (1.0, 5, 100)]);
        match extract_threshold(&c, 1e-4, CrossingSide::UpperCrossingForReliability) {
            Err(Error::NotBracketed { min, max, .. }) => {
                assert_eq!((min, max), (0.05, 0.1));
            }
            other => panic!("{other:?}"),
        }
        assert!(extract_threshold(&c, 0.5, CrossingSide::LowerCrossingForSecurity).is_err());
        assert!(extract_threshold(&c, 0.01, CrossingSide::LowerCrossingForSecurity).is_err());
    }

    #[test]
    fn log_linear_tail_continues_the_slope() {
        let c = curve(&[(0.0, 500, 1000), (1.0, 100, 1000), (2.0, 100, 10_000), (3.0, 0, 1000)]);
        let clean = ProbabilityCurve::from_estimates(&c);
        let ext = clean.extend_log_linear(2, 1e-5, 0.5).unwrap();
        // the zero-error point is replaced by the fitted line
        assert_eq!(ext.points[3].gamma_db, 2.5);
        assert!((ext.points[3].p - 10f64.powf(-2.5)).abs() < 1e-12);
        let last = ext.points.last().unwrap();
        assert!(last.p <= 1e-5 && last.bounded);
        let t = ext.threshold(1e-4, CrossingSide::UpperCrossingForReliability).unwrap();
        assert!((t.snr.db() - 4.0).abs() < 1e-9);
        assert!(t.extrapolated);
        assert!(clean.extend_log_linear(4, 1e-5, 0.5).is_err());
        let flat = curve(&[(0.0, 10, 100), (1.0, 10, 100)]);
        assert!(ProbabilityCurve::from_estimates(&flat).extend_log_linear(2, 1e-5, 0.5).is_err());
    }

    #[test]
    fn rejects_unordered_grid() {
        let pts = vec![
            CurvePoint { gamma_db: 1.0, frames: 10, errors: 1 },
            CurvePoint { gamma_db: 1.0, frames: 10, errors: 1 },
        ];
        assert!(ErrorRateCurve::new(Target::FrameP, pts).is_err());
        let pts = vec![CurvePoint { gamma_db: 1.0, frames: 10, errors: 11 }];
        assert!(ErrorRateCurve::new(Target::FrameP, pts).is_err());
    }
}
