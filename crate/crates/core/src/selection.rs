//! Coefficient/knot selection criteria: Bayes factor, 50% credible interval,
//! and scaled neighborhood.
//!
//! The Bayes factor rule tests `M0: beta_j = 0` against `M1: beta_j = delta`
//! on the standardized scale `beta* = |m_j| / s_j`, with
//! `log BF = delta^2 / 2 - beta* delta` and posterior model probability
//! `pi* = BF / (1 + BF)`. With decision costs `a` (choosing M0 when M1 is
//! true) and `b` (the reverse), M0 — exclusion — is the optimal choice when
//! `b p(M0|D) > a p(M1|D)`, i.e. when `pi* >= a / (a + b)`.

use statrs::distribution::{ContinuousCDF, Normal, StudentsT};

use crate::error::{Error, Result};

/// Default displacement of the alternative model; the root of the quadratic
/// that makes `BF = 3` at the standard-normal third quartile 0.67.
pub const DEFAULT_DELTA: f64 = 2.3;
/// Default decision costs (a, b) = (1, 3), an exclusion threshold of 1/4.
pub const DEFAULT_COST_A: f64 = 1.0;
pub const DEFAULT_COST_B: f64 = 3.0;

/// Posterior mean and standard deviation of one coefficient.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoefficientPosterior {
    pub mean: f64,
    pub sd: f64,
}

impl CoefficientPosterior {
    pub fn new(mean: f64, sd: f64) -> Result<Self> {
        if !(sd > 0.0) || !sd.is_finite() || !mean.is_finite() {
            return Err(Error::domain(
                "CoefficientPosterior",
                format!("need finite mean and sd > 0 (got mean {mean}, sd {sd})"),
            ));
        }
        Ok(CoefficientPosterior { mean, sd })
    }
}

/// Which selection criterion produced a report.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Criterion {
    /// Bayes factor decision rule.
    Bf,
    /// Central credible interval contains zero.
    Ci,
    /// Posterior probability of the scaled neighborhood `[-s_j, s_j]`.
    Sn,
}

impl Criterion {
    pub fn label(&self) -> &'static str {
        match self {
            Criterion::Bf => "BF",
            Criterion::Ci => "CI",
            Criterion::Sn => "SN",
        }
    }
}

impl std::str::FromStr for Criterion {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "bf" => Ok(Criterion::Bf),
            "ci" => Ok(Criterion::Ci),
            "sn" => Ok(Criterion::Sn),
            other => Err(Error::InvalidConfig(format!(
                "unknown criterion '{other}' (expected bf, ci or sn)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Keep,
    Exclude,
}

/// The statistic that produced a verdict, retained for reporting.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Statistic {
    /// Bayes factor rule: standardized estimate and posterior probability of M0.
    BayesFactor { beta_star: f64, pi_star: f64 },
    /// Central credible interval.
    Interval { lower: f64, upper: f64 },
    /// Posterior probability of the scaled neighborhood.
    Probability(f64),
}

impl Statistic {
    /// A single scalar summary for tabular output.
    pub fn value(&self) -> f64 {
        match self {
            Statistic::BayesFactor { pi_star, .. } => *pi_star,
            Statistic::Interval { lower, upper } => 0.5 * (lower + upper),
            Statistic::Probability(p) => *p,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Decision {
    pub statistic: Statistic,
    pub verdict: Verdict,
}

/// Per-coefficient verdicts under one criterion.
#[derive(Debug, Clone, PartialEq)]
pub struct SelectionReport {
    pub criterion: Criterion,
    pub decisions: Vec<Decision>,
}

impl SelectionReport {
    pub fn kept_indices(&self) -> Vec<usize> {
        self.decisions
            .iter()
            .enumerate()
            .filter(|(_, d)| d.verdict == Verdict::Keep)
            .map(|(j, _)| j)
            .collect()
    }

    pub fn excluded_indices(&self) -> Vec<usize> {
        self.decisions
            .iter()
            .enumerate()
            .filter(|(_, d)| d.verdict == Verdict::Exclude)
            .map(|(j, _)| j)
            .collect()
    }

    pub fn keep_mask(&self) -> Vec<bool> {
        self.decisions.iter().map(|d| d.verdict == Verdict::Keep).collect()
    }

    pub fn n_kept(&self) -> usize {
        self.decisions.iter().filter(|d| d.verdict == Verdict::Keep).count()
    }

    pub fn len(&self) -> usize {
        self.decisions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.decisions.is_empty()
    }
}

/// A posterior representation a criterion can read: either the Gaussian
/// factor of a variational fit, or posterior draws from a sampler.
#[derive(Debug, Clone)]
pub enum Posterior<'a> {
    Gaussian(CoefficientPosterior),
    Samples(&'a [f64]),
}

impl Posterior<'_> {
    fn quantile(&self, prob: f64) -> Result<f64> {
        match self {
            Posterior::Gaussian(cp) => Ok(cp.mean + cp.sd * normal_quantile(prob)?),
            Posterior::Samples(xs) => empirical_quantile(xs, prob),
        }
    }

    fn interval_probability(&self, lo: f64, hi: f64) -> Result<f64> {
        match self {
            Posterior::Gaussian(cp) => {
                let normal = Normal::new(cp.mean, cp.sd).map_err(|e| {
                    Error::domain("sn_select", format!("invalid Gaussian factor: {e}"))
                })?;
                Ok(normal.cdf(hi) - normal.cdf(lo))
            }
            Posterior::Samples(xs) => {
                if xs.is_empty() {
                    return Err(Error::EmptyChain);
                }
                let count = xs.iter().filter(|&&v| v >= lo && v <= hi).count();
                Ok(count as f64 / xs.len() as f64)
            }
        }
    }

    fn sd(&self) -> Result<f64> {
        match self {
            Posterior::Gaussian(cp) => Ok(cp.sd),
            Posterior::Samples(xs) => {
                if xs.len() < 2 {
                    return Err(Error::EmptyChain);
                }
                let n = xs.len() as f64;
                let mean = xs.iter().sum::<f64>() / n;
                let var = xs.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
                Ok(var.sqrt())
            }
        }
    }
}

/// Bayes factor criterion at displacement `delta` and costs `(a, b)`:
/// a coefficient is excluded when `pi* >= a / (a + b)`.
pub fn bf_select(
    posteriors: &[CoefficientPosterior],
    a: f64,
    b: f64,
    delta: f64,
) -> Result<SelectionReport> {
    if !(a > 0.0) || !(b > 0.0) {
        return Err(Error::InvalidConfig(format!("costs must be positive (a = {a}, b = {b})")));
    }
    let threshold = a / (a + b);
    let mut decisions = Vec::with_capacity(posteriors.len());
    for cp in posteriors {
        if !(cp.sd > 0.0) {
            return Err(Error::domain("bf_select", format!("nonpositive sd {}", cp.sd)));
        }
        let beta_star = cp.mean.abs() / cp.sd;
        let log_bf = 0.5 * delta * delta - beta_star * delta;
        // pi* = BF/(1+BF) = logistic(log BF), stable at both ends
        let pi_star = if log_bf >= 0.0 {
            1.0 / (1.0 + (-log_bf).exp())
        } else {
            let e = log_bf.exp();
            e / (1.0 + e)
        };
        let verdict = if pi_star >= threshold { Verdict::Exclude } else { Verdict::Keep };
        decisions.push(Decision {
            statistic: Statistic::BayesFactor { beta_star, pi_star },
            verdict,
        });
    }
    Ok(SelectionReport { criterion: Criterion::Bf, decisions })
}

/// Bayes factor criterion at the defaults `a = 1`, `b = 3`, `delta = 2.3`.
pub fn bf_select_default(posteriors: &[CoefficientPosterior]) -> Result<SelectionReport> {
    bf_select(posteriors, DEFAULT_COST_A, DEFAULT_COST_B, DEFAULT_DELTA)
}

/// Credible-interval criterion: exclude a coefficient when the central
/// `level` interval contains zero.
pub fn ci_select(posteriors: &[Posterior<'_>], level: f64) -> Result<SelectionReport> {
    if !(0.0 < level && level < 1.0) {
        return Err(Error::InvalidConfig(format!("credible level {level} outside (0,1)")));
    }
    let (lo_p, hi_p) = (0.5 - 0.5 * level, 0.5 + 0.5 * level);
    let mut decisions = Vec::with_capacity(posteriors.len());
    for post in posteriors {
        let lower = post.quantile(lo_p)?;
        let upper = post.quantile(hi_p)?;
        let verdict = if lower <= 0.0 && 0.0 <= upper { Verdict::Exclude } else { Verdict::Keep };
        decisions.push(Decision { statistic: Statistic::Interval { lower, upper }, verdict });
    }
    Ok(SelectionReport { criterion: Criterion::Ci, decisions })
}

/// Scaled-neighborhood criterion: exclude when
/// `P(beta_j in [-s_j, s_j] | D)` strictly exceeds `threshold`.
pub fn sn_select(posteriors: &[Posterior<'_>], threshold: f64) -> Result<SelectionReport> {
    if !(0.0 < threshold && threshold < 1.0) {
        return Err(Error::InvalidConfig(format!("SN threshold {threshold} outside (0,1)")));
    }
    let mut decisions = Vec::with_capacity(posteriors.len());
    for post in posteriors {
        let s = post.sd()?;
        let prob = post.interval_probability(-s, s)?;
        let verdict = if prob > threshold { Verdict::Exclude } else { Verdict::Keep };
        decisions.push(Decision { statistic: Statistic::Probability(prob), verdict });
    }
    Ok(SelectionReport { criterion: Criterion::Sn, decisions })
}

/// Standard normal quantile.
pub fn normal_quantile(prob: f64) -> Result<f64> {
    if !(0.0 < prob && prob < 1.0) {
        return Err(Error::domain("normal_quantile", format!("prob {prob} outside (0,1)")));
    }
    let normal = Normal::standard();
    Ok(normal.inverse_cdf(prob))
}

/// Student-t quantile with the given degrees of freedom.
pub fn student_t_quantile(prob: f64, dof: f64) -> Result<f64> {
    if !(0.0 < prob && prob < 1.0) {
        return Err(Error::domain("student_t_quantile", format!("prob {prob} outside (0,1)")));
    }
    let t = StudentsT::new(0.0, 1.0, dof)
        .map_err(|e| Error::domain("student_t_quantile", format!("dof {dof}: {e}")))?;
    Ok(t.inverse_cdf(prob))
}

/// Empirical quantile with linear interpolation between order statistics.
pub fn empirical_quantile(xs: &[f64], prob: f64) -> Result<f64> {
    if xs.is_empty() {
        return Err(Error::EmptyChain);
    }
    if !(0.0..=1.0).contains(&prob) {
        return Err(Error::domain("empirical_quantile", format!("prob {prob} outside [0,1]")));
    }
    let mut sorted: Vec<f64> = xs.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let h = prob * (sorted.len() as f64 - 1.0);
    let lo = h.floor() as usize;
    let hi = h.ceil() as usize;
    Ok(sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo]))
}
