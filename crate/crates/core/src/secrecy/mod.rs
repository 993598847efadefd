//! Reliability and security analysis for the broadcast channel with
//! confidential messages.
//!
//! Bob must decode both blocks (`P_p ≤ δ`, `P_s ≤ δ`), Eve must decode the
//! public block (`P_p ≤ δ`) but fail on the secret one (`P_s ≥ 1 − η`).
//! On non-increasing curves these reduce to `γ_B ≥ β_s` and
//! `β_p ≤ γ_E ≤ α_s`, so the scheme is feasible iff `α_s ≥ β_p`.

mod curve;
mod layout;
mod scrambler;

pub use curve::{
    extract_threshold, zero_error_bound, CrossingSide, CurvePoint, ErrorRateCurve, ProbabilityCurve,
    ProbabilityPoint, Target, Threshold,
};
pub use layout::{FrameLayout, Scheme};
pub use scrambler::Scrambler;

use serde::{Deserialize, Serialize};

use crate::channel::SnrPoint;
use crate::error::{Error, Result};

/// Per-message error probability after concatenating `l` secret messages
/// through an all-or-nothing transform: `1 - (1 - P_s)^l`.
pub fn concatenated_bler(p_s: f64, l: u32) -> Result<f64> {
    if l < 1 {
        return Err(Error::InvalidConcatenation);
    }
    if !(0.0..=1.0).contains(&p_s) {
        return Err(Error::InvalidProbability(p_s));
    }
    // -expm1(l ln(1-p)) keeps precision for tiny p
    Ok(-(l as f64 * (-p_s).ln_1p()).exp_m1())
}

/// Rejects targets outside `(0, 1)` or with `1 - η ≤ δ`.
pub fn check_targets(delta: f64, eta: f64) -> Result<()> {
    if !(delta > 0.0 && delta < 1.0) || !(eta > 0.0 && eta < 1.0) {
        return Err(Error::InvalidThresholds(format!("delta = {delta}, eta = {eta}")));
    }
    if 1.0 - eta <= delta {
        return Err(Error::InvalidThresholds(format!("1 - eta = {} must exceed delta = {delta}", 1.0 - eta)));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SecurityThresholds {
    pub beta_p: SnrPoint,
    pub alpha_s: SnrPoint,
    pub beta_s: SnrPoint,
    pub delta: f64,
    pub eta: f64,
    pub l: u32,
    /// Some threshold relied on a zero-error bound.
    pub extrapolated: bool,
}

impl SecurityThresholds {
    pub fn new(beta_p: SnrPoint, alpha_s: SnrPoint, beta_s: SnrPoint, delta: f64, eta: f64, l: u32) -> Result<Self> {
        check_targets(delta, eta)?;
        if l < 1 {
            return Err(Error::InvalidConcatenation);
        }
        Ok(SecurityThresholds {
            beta_p,
            alpha_s,
            beta_s,
            delta,
            eta,
            l,
            extrapolated: false,
        })
    }

    pub fn feasible(&self) -> bool {
        self.alpha_s.db() >= self.beta_p.db()
    }
}

/// `S_g = β_s / α_s`, in dB.
pub fn security_gap(thresholds: &SecurityThresholds) -> f64 {
    thresholds.beta_s.db() - thresholds.alpha_s.db()
}

/// Where `α_s(L)` sits for one concatenation factor.
enum AlphaS {
    Found(Threshold),
    /// `P_s^(L) < 1 - η` over the whole grid.
    BelowGrid,
}

fn alpha_s(secret: &ProbabilityCurve, l: u32, eta: f64) -> Result<(ProbabilityCurve, AlphaS)> {
    let concatenated = secret.concatenated(l)?;
    let level = 1.0 - eta;
    let alpha = match concatenated.threshold(level, CrossingSide::LowerCrossingForSecurity) {
        Ok(t) => AlphaS::Found(t),
        Err(Error::NotBracketed { .. }) if concatenated.points.first().is_some_and(|p| p.p < level) => {
            AlphaS::BelowGrid
        }
        Err(e) => return Err(e),
    };
    Ok((concatenated, alpha))
}

/// Smallest `L ≤ l_max` with `α_s(L) ≥ β_p`, and the thresholds at that `L`.
///
/// `β_p` comes from the public curve at level `δ`; `α_s` and `β_s` come from
/// the concatenated secret curve at levels `1 − η` and `δ`.
pub fn min_feasible_l(
    secret: &ErrorRateCurve,
    public: &ErrorRateCurve,
    delta: f64,
    eta: f64,
    l_max: u32,
) -> Result<(u32, SecurityThresholds)> {
    min_feasible_l_on(
        &ProbabilityCurve::from_estimates(secret),
        &ProbabilityCurve::from_estimates(public),
        delta,
        eta,
        l_max,
    )
}

/// [`min_feasible_l`] on already cleaned (or extended) curves.
pub fn min_feasible_l_on(
    secret: &ProbabilityCurve,
    public: &ProbabilityCurve,
    delta: f64,
    eta: f64,
    l_max: u32,
) -> Result<(u32, SecurityThresholds)> {
    check_targets(delta, eta)?;
    if l_max < 1 {
        return Err(Error::InvalidConcatenation);
    }
    let beta_p = public.threshold(delta, CrossingSide::UpperCrossingForReliability)?;
    let mut last_alpha = None;
    for l in 1..=l_max {
        let (concatenated, alpha) = alpha_s(secret, l, eta)?;
        let AlphaS::Found(alpha) = alpha else {
            continue;
        };
        last_alpha = Some(alpha.snr.db());
        if alpha.snr.db() >= beta_p.snr.db() {
            let beta_s = concatenated.threshold(delta, CrossingSide::UpperCrossingForReliability)?;
            let mut t = SecurityThresholds::new(beta_p.snr, alpha.snr, beta_s.snr, delta, eta, l)?;
            t.extrapolated = beta_p.extrapolated || alpha.extrapolated || beta_s.extrapolated;
            return Ok((l, t));
        }
    }
    Err(Error::Infeasible {
        l_max,
        deficit_db: last_alpha.map(|a| a - beta_p.snr.db()),
    })
}

/// Summary row of one coding scheme.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SecurityReport {
    pub scheme: Scheme,
    pub n: usize,
    #[serde(rename = "L")]
    pub l: u32,
    pub beta_p_db: f64,
    pub alpha_s_db: Option<f64>,
    pub beta_s_db: Option<f64>,
    pub security_gap_db: Option<f64>,
    pub feasible: bool,
    pub delta: f64,
    pub eta: f64,
    /// `α_s − β_p` in dB.
    pub margin_db: Option<f64>,
    pub extrapolated: bool,
}

impl SecurityReport {
    pub fn from_thresholds(scheme: Scheme, n: usize, t: &SecurityThresholds) -> Self {
        SecurityReport {
            scheme,
            n,
            l: t.l,
            beta_p_db: t.beta_p.db(),
            alpha_s_db: Some(t.alpha_s.db()),
            beta_s_db: Some(t.beta_s.db()),
            security_gap_db: Some(security_gap(t)),
            feasible: t.feasible(),
            delta: t.delta,
            eta: t.eta,
            margin_db: Some(t.alpha_s.db() - t.beta_p.db()),
            extrapolated: t.extrapolated,
        }
    }

    /// Runs the full analysis; infeasibility yields a report with
    /// `feasible = false` evaluated at `l_max`.
    pub fn analyze(
        scheme: Scheme,
        n: usize,
        secret: &ErrorRateCurve,
        public: &ErrorRateCurve,
        delta: f64,
        eta: f64,
        l_max: u32,
    ) -> Result<Self> {
        Self::analyze_on(
            scheme,
            n,
            &ProbabilityCurve::from_estimates(secret),
            &ProbabilityCurve::from_estimates(public),
            delta,
            eta,
            l_max,
        )
    }

    /// [`Self::analyze`] on already cleaned (or extended) curves.
    pub fn analyze_on(
        scheme: Scheme,
        n: usize,
        secret: &ProbabilityCurve,
        public: &ProbabilityCurve,
        delta: f64,
        eta: f64,
        l_max: u32,
    ) -> Result<Self> {
        match min_feasible_l_on(secret, public, delta, eta, l_max) {
            Ok((_, t)) => Ok(Self::from_thresholds(scheme, n, &t)),
            Err(Error::Infeasible { deficit_db, .. }) => {
                let beta_p = public.threshold(delta, CrossingSide::UpperCrossingForReliability)?;
                let (concatenated, alpha) = alpha_s(secret, l_max, eta)?;
                let beta_s = concatenated.threshold(delta, CrossingSide::UpperCrossingForReliability).ok();
                let alpha_db = match alpha {
                    AlphaS::Found(t) => Some(t.snr.db()),
                    AlphaS::BelowGrid => None,
                };
                Ok(SecurityReport {
                    scheme,
                    n,
                    l: l_max,
                    beta_p_db: beta_p.snr.db(),
                    alpha_s_db: alpha_db,
                    beta_s_db: beta_s.map(|t| t.snr.db()),
                    security_gap_db: alpha_db.zip(beta_s).map(|(a, b)| b.snr.db() - a),
                    feasible: false,
                    delta,
                    eta,
                    margin_db: deficit_db,
                    extrapolated: beta_p.extrapolated,
                })
            }
            Err(e) => Err(e),
        }
    }
}

/// One row of plot data: `(γ, P)` for a named series.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlotRow {
    pub series: String,
    pub gamma_db: f64,
    pub p: f64,
}

/// Series `Pp`, `Ps` and `Ps^(L)` for log-scale plotting. Zero estimates are
/// dropped; they cannot be drawn on a log axis.
pub fn plot_rows(public: &ErrorRateCurve, secret: &ErrorRateCurve, l: u32) -> Result<Vec<PlotRow>> {
    let mut rows = Vec::new();
    for (series, curve) in [("Pp", public), ("Ps", secret)] {
        for p in curve.points.iter().filter(|p| p.errors > 0) {
            rows.push(PlotRow {
                series: series.to_string(),
                gamma_db: p.gamma_db,
                p: p.p_hat(),
            });
        }
    }
    let series = format!("Ps^({l})");
    for p in secret.points.iter().filter(|p| p.errors > 0) {
        rows.push(PlotRow {
            series: series.clone(),
            gamma_db: p.gamma_db,
            p: concatenated_bler(p.p_hat(), l)?,
        });
    }
    Ok(rows)
}
