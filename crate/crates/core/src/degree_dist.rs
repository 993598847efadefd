//! Variable and check node degree distributions.
//!
//! A [`DegreePolynomial`] is always keyed by node *degree*. Edge-perspective
//! polynomials are conventionally written with exponent `degree - 1`
//! (`λ(x) = Σ λ_i x^(i-1)`); that convention only matters when parsing text,
//! see [`ExponentConvention`].

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance on the coefficient sum of an exactly normalized distribution.
pub const NORMALIZATION_TOLERANCE: f64 = 1e-9;

/// Tolerance accepted for hand-transcribed coefficients (four decimals).
pub const TRANSCRIPTION_TOLERANCE: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Perspective {
    Edge,
    Node,
}

impl Perspective {
    fn name(self) -> &'static str {
        match self {
            Perspective::Edge => "edge",
            Perspective::Node => "node",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NodeKind {
    Variable,
    Check,
}

/// How exponents in polynomial text map to node degrees.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExponentConvention {
    /// `x^e` denotes degree `e + 1` (usual for λ and ρ).
    EdgeExponent,
    /// `x^e` denotes degree `e` (usual for ν and c).
    Degree,
}

/// A degree distribution from the edge or the node perspective.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawPolynomial", into = "RawPolynomial")]
pub struct DegreePolynomial {
    perspective: Perspective,
    kind: NodeKind,
    coefficients: BTreeMap<u32, f64>,
}

#[derive(Serialize, Deserialize)]
struct RawPolynomial {
    perspective: Perspective,
    kind: NodeKind,
    coefficients: Vec<(u32, f64)>,
}

impl TryFrom<RawPolynomial> for DegreePolynomial {
    type Error = Error;

    fn try_from(raw: RawPolynomial) -> Result<Self> {
        DegreePolynomial::from_rounded(raw.perspective, raw.kind, raw.coefficients).map(|(d, _)| d)
    }
}

impl From<DegreePolynomial> for RawPolynomial {
    fn from(d: DegreePolynomial) -> Self {
        RawPolynomial {
            perspective: d.perspective,
            kind: d.kind,
            coefficients: d.coefficients.into_iter().collect(),
        }
    }
}

impl DegreePolynomial {
    /// Builds a distribution whose coefficients must already sum to one.
    pub fn new<I>(perspective: Perspective, kind: NodeKind, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (u32, f64)>,
    {
        let coefficients = collect_terms(terms)?;
        let sum: f64 = coefficients.values().sum();
        if (sum - 1.0).abs() > NORMALIZATION_TOLERANCE {
            return Err(Error::NotNormalized { sum });
        }
        Ok(DegreePolynomial {
            perspective,
            kind,
            coefficients,
        })
    }

    /// Builds a distribution from rounded coefficients, renormalizing them.
    ///
    /// The coefficient sum must lie within [`TRANSCRIPTION_TOLERANCE`] of one.
    /// Returns the distribution together with the original sum so callers can
    /// record the adjustment.
    pub fn from_rounded<I>(perspective: Perspective, kind: NodeKind, terms: I) -> Result<(Self, f64)>
    where
        I: IntoIterator<Item = (u32, f64)>,
    {
        let mut coefficients = collect_terms(terms)?;
        let sum: f64 = coefficients.values().sum();
        if (sum - 1.0).abs() > TRANSCRIPTION_TOLERANCE {
            return Err(Error::NotNormalized { sum });
        }
        for c in coefficients.values_mut() {
            *c /= sum;
        }
        Ok((
            DegreePolynomial {
                perspective,
                kind,
                coefficients,
            },
            sum,
        ))
    }

    /// Parses text such as `"0.8815 x^2 + 0.1185 x"`.
    ///
    /// A bare `x` has exponent 1 and a bare constant exponent 0. Rounded
    /// coefficients are accepted and renormalized as in [`Self::from_rounded`].
    pub fn parse(
        text: &str,
        convention: ExponentConvention,
        perspective: Perspective,
        kind: NodeKind,
    ) -> Result<Self> {
        let mut terms = Vec::new();
        for raw in text.split('+') {
            let term: String = raw.chars().filter(|c| !c.is_whitespace()).collect();
            if term.is_empty() {
                return Err(Error::PolynomialSyntax(raw.to_string()));
            }
            let (coef, exponent) = match term.find('x') {
                None => (term.as_str(), 0),
                Some(pos) => {
                    let (c, rest) = term.split_at(pos);
                    let rest = rest.trim_start_matches('x');
                    let exponent = if rest.is_empty() {
                        1
                    } else {
                        rest.trim_start_matches('^')
                            .trim_start_matches('{')
                            .trim_end_matches('}')
                            .parse::<u32>()
                            .map_err(|_| Error::PolynomialSyntax(raw.to_string()))?
                    };
                    (c.trim_end_matches('*'), exponent)
                }
            };
            let coef = if coef.is_empty() {
                1.0
            } else {
                coef.parse::<f64>()
                    .map_err(|_| Error::PolynomialSyntax(raw.to_string()))?
            };
            let degree = match convention {
                ExponentConvention::EdgeExponent => exponent + 1,
                ExponentConvention::Degree => exponent,
            };
            terms.push((degree, coef));
        }
        Self::from_rounded(perspective, kind, terms).map(|(d, _)| d)
    }

    /// A single-degree distribution.
    pub fn regular(perspective: Perspective, kind: NodeKind, degree: u32) -> Result<Self> {
        Self::new(perspective, kind, [(degree, 1.0)])
    }

    pub fn perspective(&self) -> Perspective {
        self.perspective
    }

    pub fn kind(&self) -> NodeKind {
        self.kind
    }

    pub fn coefficients(&self) -> &BTreeMap<u32, f64> {
        &self.coefficients
    }

    pub fn coefficient(&self, degree: u32) -> f64 {
        self.coefficients.get(&degree).copied().unwrap_or(0.0)
    }

    pub fn degrees(&self) -> impl Iterator<Item = u32> + '_ {
        self.coefficients.keys().copied()
    }

    pub fn max_degree(&self) -> u32 {
        *self.coefficients.keys().next_back().expect("non-empty")
    }

    pub fn min_degree(&self) -> u32 {
        *self.coefficients.keys().next().expect("non-empty")
    }

    /// Average node degree, valid for either perspective.
    pub fn average_node_degree(&self) -> f64 {
        match self.perspective {
            Perspective::Node => self.coefficients.iter().map(|(&d, &c)| c * d as f64).sum(),
            Perspective::Edge => 1.0 / self.coefficients.iter().map(|(&d, &c)| c / d as f64).sum::<f64>(),
        }
    }

    pub fn to_node(&self) -> Result<Self> {
        edge_to_node(self)
    }

    pub fn to_edge(&self) -> Result<Self> {
        node_to_edge(self)
    }

    fn expect(&self, perspective: Perspective) -> Result<()> {
        if self.perspective != perspective {
            return Err(Error::WrongPerspective {
                expected: perspective.name(),
                found: self.perspective.name(),
            });
        }
        Ok(())
    }
}

impl fmt::Display for DegreePolynomial {
    /// Writes the polynomial with the exponent convention of its perspective.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let shift = match self.perspective {
            Perspective::Edge => 1,
            Perspective::Node => 0,
        };
        let mut first = true;
        for (&d, &c) in self.coefficients.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match d - shift {
                0 => write!(f, "{c:.4}")?,
                1 => write!(f, "{c:.4} x")?,
                e => write!(f, "{c:.4} x^{e}")?,
            }
        }
        Ok(())
    }
}

fn collect_terms<I>(terms: I) -> Result<BTreeMap<u32, f64>>
where
    I: IntoIterator<Item = (u32, f64)>,
{
    let mut coefficients = BTreeMap::new();
    for (degree, coefficient) in terms {
        if degree == 0 {
            return Err(Error::InvalidDegree(degree));
        }
        if !coefficient.is_finite() || !(0.0..=1.0).contains(&coefficient) {
            return Err(Error::InvalidCoefficient {
                degree,
                coefficient,
            });
        }
        if coefficient > 0.0 {
            *coefficients.entry(degree).or_insert(0.0) += coefficient;
        }
    }
    if coefficients.is_empty() {
        return Err(Error::EmptyDistribution);
    }
    Ok(coefficients)
}

fn reweight(d: &DegreePolynomial, target: Perspective, weight: impl Fn(u32, f64) -> f64) -> DegreePolynomial {
    let total: f64 = d.coefficients.iter().map(|(&i, &c)| weight(i, c)).sum();
    DegreePolynomial {
        perspective: target,
        kind: d.kind,
        coefficients: d
            .coefficients
            .iter()
            .map(|(&i, &c)| (i, weight(i, c) / total))
            .collect(),
    }
}

/// `ν_i = (λ_i / i) / Σ_j λ_j / j`.
pub fn edge_to_node(d: &DegreePolynomial) -> Result<DegreePolynomial> {
    d.expect(Perspective::Edge)?;
    Ok(reweight(d, Perspective::Node, |i, c| c / i as f64))
}

/// `λ_i = ν_i · i / Σ_j ν_j · j`.
pub fn node_to_edge(d: &DegreePolynomial) -> Result<DegreePolynomial> {
    d.expect(Perspective::Node)?;
    Ok(reweight(d, Perspective::Edge, |i, c| c * i as f64))
}

/// Check node distribution with mean `c_m = Σ ν_j j / (1 - R)` concentrated on
/// `⌊c_m⌋` and `⌈c_m⌉`.
///
/// When `c_m` is an integer the result is the regular distribution `x^{c_m}`.
pub fn concentrated_check_distribution(variable: &DegreePolynomial, rate: f64) -> Result<DegreePolynomial> {
    variable.expect(Perspective::Node)?;
    if !(rate > 0.0 && rate < 1.0) {
        return Err(Error::InvalidRate(rate));
    }
    let mean = variable.average_node_degree() / (1.0 - rate);
    let lower = mean.floor();
    let upper = mean.ceil();
    let terms = if upper == lower {
        vec![(lower as u32, 1.0)]
    } else {
        vec![(lower as u32, upper - mean), (upper as u32, mean - lower)]
    };
    DegreePolynomial::new(Perspective::Node, NodeKind::Check, terms)
}

/// Design rate `1 - (Σ ρ_j / j) / (Σ λ_i / i)` of an edge-perspective pair.
pub fn design_rate(variable: &DegreePolynomial, check: &DegreePolynomial) -> Result<f64> {
    variable.expect(Perspective::Edge)?;
    check.expect(Perspective::Edge)?;
    let rate = 1.0 - variable.average_node_degree() / check.average_node_degree();
    if !(rate > 0.0 && rate < 1.0) {
        return Err(Error::InvalidRate(rate));
    }
    Ok(rate)
}

/// Splits `total` nodes among the degrees of a node-perspective distribution
/// by largest-remainder apportionment. Remainder ties go to the lower degree.
pub fn integer_counts(d: &DegreePolynomial, total: usize) -> Result<BTreeMap<u32, usize>> {
    d.expect(Perspective::Node)?;
    let mut counts = BTreeMap::new();
    let mut remainders = Vec::new();
    let mut assigned = 0usize;
    for (&degree, &c) in &d.coefficients {
        let exact = c * total as f64;
        let floor = exact.floor() as usize;
        counts.insert(degree, floor);
        assigned += floor;
        remainders.push((exact - floor as f64, degree));
    }
    remainders.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));
    let mut left = total.saturating_sub(assigned);
    for &(_, degree) in remainders.iter().cycle() {
        if left == 0 {
            break;
        }
        *counts.get_mut(&degree).expect("present") += 1;
        left -= 1;
    }
    counts.retain(|_, c| *c > 0);
    Ok(counts)
}

/// A code ensemble: length, design rate and node-perspective distributions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnsembleSpec {
    pub n: usize,
    pub rate: f64,
    pub variable: DegreePolynomial,
    pub check: DegreePolynomial,
}

impl EnsembleSpec {
    /// Validates the ensemble, including edge-count consistency.
    ///
    /// After integerization each degree class may be off by one node, and
    /// `r` by half a node, so the two edge totals may differ by at most
    /// `d̄_c + classes_v · d̄_v + classes_c · d̄_c` edges.
    pub fn new(n: usize, rate: f64, variable: DegreePolynomial, check: DegreePolynomial) -> Result<Self> {
        if !(rate > 0.0 && rate < 1.0) {
            return Err(Error::InvalidRate(rate));
        }
        if variable.kind() != NodeKind::Variable || check.kind() != NodeKind::Check {
            return Err(Error::InconsistentEnsemble("node kinds swapped".into()));
        }
        variable.expect(Perspective::Node)?;
        check.expect(Perspective::Node)?;
        let spec = EnsembleSpec {
            n,
            rate,
            variable,
            check,
        };
        let k = spec.k();
        if k == 0 || k >= n || n - k < 2 {
            return Err(Error::InconsistentEnsemble(format!("n = {n}, k = {k}")));
        }
        let variable_edges = n as f64 * spec.variable.average_node_degree();
        let check_edges = spec.r() as f64 * spec.check.average_node_degree();
        let dv = spec.variable.max_degree() as f64;
        let dc = spec.check.max_degree() as f64;
        let slack = dc
            + spec.variable.coefficients().len() as f64 * dv
            + spec.check.coefficients().len() as f64 * dc;
        if (variable_edges - check_edges).abs() > slack {
            return Err(Error::InconsistentEnsemble(format!(
                "{variable_edges:.1} variable edges vs {check_edges:.1} check edges"
            )));
        }
        Ok(spec)
    }

    /// Ensemble whose check distribution is the concentrated one for `variable`.
    pub fn with_concentrated_checks(n: usize, rate: f64, variable: DegreePolynomial) -> Result<Self> {
        let check = concentrated_check_distribution(&variable, rate)?;
        Self::new(n, rate, variable, check)
    }

    /// Ensemble from an edge-perspective pair, as produced by optimization tools.
    pub fn from_edge_pair(n: usize, rate: f64, lambda: &DegreePolynomial, rho: &DegreePolynomial) -> Result<Self> {
        Self::new(n, rate, edge_to_node(lambda)?, edge_to_node(rho)?)
    }

    /// Number of information bits, `round(n R)`.
    pub fn k(&self) -> usize {
        (self.n as f64 * self.rate).round() as usize
    }

    pub fn r(&self) -> usize {
        self.n - self.k()
    }

    pub fn expected_edges(&self) -> f64 {
        self.n as f64 * self.variable.average_node_degree()
    }
}
