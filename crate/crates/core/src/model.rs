//! Core data model: datasets, Lasso prior hyperparameters, and the conjugate
//! Normal-Gamma linear model used as a correctness oracle for the variational
//! and MCMC fits.

use nalgebra::{Cholesky, DMatrix, DVector};

use crate::error::{Error, Result};

/// A regression dataset: response vector `y` and design matrix `x`.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    y: DVector<f64>,
    x: DMatrix<f64>,
    feature_names: Option<Vec<String>>,
}

impl Dataset {
    pub fn new(y: DVector<f64>, x: DMatrix<f64>) -> Result<Self> {
        Self::with_names(y, x, None)
    }

    pub fn with_names(
        y: DVector<f64>,
        x: DMatrix<f64>,
        feature_names: Option<Vec<String>>,
    ) -> Result<Self> {
        if y.len() == 0 || x.ncols() == 0 {
            return Err(Error::Dimension("need n >= 1 observations and p >= 1 columns".into()));
        }
        if y.len() != x.nrows() {
            return Err(Error::Dimension(format!(
                "y has {} entries but X has {} rows",
                y.len(),
                x.nrows()
            )));
        }
        if let Some(names) = &feature_names {
            if names.len() != x.ncols() {
                return Err(Error::Dimension(format!(
                    "{} feature names for {} columns",
                    names.len(),
                    x.ncols()
                )));
            }
        }
        if y.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("response vector".into()));
        }
        if x.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("design matrix".into()));
        }
        Ok(Dataset { y, x, feature_names })
    }

    pub fn n(&self) -> usize {
        self.y.len()
    }

    pub fn p(&self) -> usize {
        self.x.ncols()
    }

    pub fn y(&self) -> &DVector<f64> {
        &self.y
    }

    pub fn x(&self) -> &DMatrix<f64> {
        &self.x
    }

    pub fn feature_names(&self) -> Option<&[String]> {
        self.feature_names.as_deref()
    }

    /// Dataset restricted to the given columns (selection refits).
    pub fn select_columns(&self, keep: &[usize]) -> Result<Dataset> {
        if keep.is_empty() {
            return Err(Error::Dimension("cannot select zero columns".into()));
        }
        if let Some(&bad) = keep.iter().find(|&&j| j >= self.p()) {
            return Err(Error::Dimension(format!("column {bad} out of range")));
        }
        let x = DMatrix::from_fn(self.n(), keep.len(), |i, j| self.x[(i, keep[j])]);
        let names = self
            .feature_names
            .as_ref()
            .map(|ns| keep.iter().map(|&j| ns[j].clone()).collect());
        Dataset::with_names(self.y.clone(), x, names)
    }
}

/// Hyperparameters of the hierarchical Lasso: `phi ~ Ga(a0, b0)`,
/// `lambda ~ Ga(g0, h0)`, or improper Jeffreys priors `p(phi) ∝ 1/phi`,
/// `p(lambda) ∝ 1/lambda` (all four hyperparameters zero).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LassoPriors {
    pub a0: f64,
    pub b0: f64,
    pub g0: f64,
    pub h0: f64,
    pub jeffreys: bool,
}

impl LassoPriors {
    /// Proper gamma priors; all four hyperparameters must be positive.
    pub fn informative(a0: f64, b0: f64, g0: f64, h0: f64) -> Result<Self> {
        for (name, v) in [("a0", a0), ("b0", b0), ("g0", g0), ("h0", h0)] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::InvalidConfig(format!(
                    "{name} must be strictly positive (got {v}); use jeffreys() for the improper prior"
                )));
            }
        }
        Ok(LassoPriors { a0, b0, g0, h0, jeffreys: false })
    }

    /// Independent Jeffreys priors (the zero limit of the gamma priors).
    pub fn jeffreys() -> Self {
        LassoPriors { a0: 0.0, b0: 0.0, g0: 0.0, h0: 0.0, jeffreys: true }
    }

    /// The default used throughout the simulation exercises: Ga(0.1, 0.1)
    /// on both precision parameters.
    pub fn exercise_default() -> Self {
        LassoPriors { a0: 0.1, b0: 0.1, g0: 0.1, h0: 0.1, jeffreys: false }
    }
}

/// Exact Normal-Gamma posterior `beta | phi ~ N(m1, phi^{-1} C1^{-1})`,
/// `phi ~ Ga(a1, b1)`. `C1` is the precision-scale matrix `C0 + X'X`.
#[derive(Debug, Clone, PartialEq)]
pub struct NormalGammaPosterior {
    pub m1: DVector<f64>,
    pub c1: DMatrix<f64>,
    pub a1: f64,
    pub b1: f64,
}

impl NormalGammaPosterior {
    /// Marginal posterior standard deviation of each coefficient
    /// (Student-t factor of the normal-gamma: `sqrt(C1^{-1}_jj b1/(a1-1))`).
    pub fn beta_marginal_sd(&self) -> Result<DVector<f64>> {
        if self.a1 <= 1.0 {
            return Err(Error::domain(
                "beta_marginal_sd",
                format!("a1 must exceed 1 (got {})", self.a1),
            ));
        }
        let c1_inv = spd_inverse(&self.c1, "NormalGammaPosterior::beta_marginal_sd")?;
        Ok(DVector::from_fn(self.m1.len(), |j, _| {
            (c1_inv[(j, j)] * self.b1 / (self.a1 - 1.0)).sqrt()
        }))
    }
}

/// Cholesky-based condition estimate: squared ratio of the extreme diagonal
/// entries of the factor. Cheap, and tight enough to flag the near-singular
/// `X'X` that arises when n < p.
pub(crate) fn cholesky_with_condition(
    m: &DMatrix<f64>,
    context: &'static str,
) -> Result<(Cholesky<f64, nalgebra::Dyn>, f64)> {
    let chol = Cholesky::new(m.clone())
        .ok_or(Error::IllConditioned { context: context_static(context), cond: f64::INFINITY })?;
    let l = chol.l_dirty();
    let mut dmin = f64::INFINITY;
    let mut dmax = 0.0_f64;
    for i in 0..m.nrows() {
        let d = l[(i, i)];
        dmin = dmin.min(d);
        dmax = dmax.max(d);
    }
    let cond = (dmax / dmin).powi(2);
    if !cond.is_finite() || cond > 1e12 {
        return Err(Error::IllConditioned { context: context_static(context), cond });
    }
    Ok((chol, cond))
}

// Error variants carry a &'static str context; fitting code passes literals.
fn context_static(context: &'static str) -> &'static str {
    context
}

pub(crate) fn spd_inverse(m: &DMatrix<f64>, context: &'static str) -> Result<DMatrix<f64>> {
    let (chol, _) = cholesky_with_condition(m, context)?;
    Ok(chol.inverse())
}

/// Conjugate Normal-Gamma update for the linear model:
///
/// `C1 = C0 + X'X`, `m1 = C1^{-1}(C0 m0 + X'y)`, `a1 = a0 + n/2`,
/// `b1 = b0 + [(y - X m1)'y + (m0 - m1)'C0 m0] / 2`.
pub fn conjugate_fit(
    data: &Dataset,
    m0: &DVector<f64>,
    c0: &DMatrix<f64>,
    a0: f64,
    b0: f64,
) -> Result<NormalGammaPosterior> {
    let p = data.p();
    if m0.len() != p || c0.nrows() != p || c0.ncols() != p {
        return Err(Error::Dimension(format!(
            "prior dimensions ({} / {}x{}) do not match p = {p}",
            m0.len(),
            c0.nrows(),
            c0.ncols()
        )));
    }
    if !(a0 > 0.0) || !(b0 > 0.0) {
        return Err(Error::InvalidConfig(format!(
            "conjugate_fit needs a0 > 0 and b0 > 0 (got a0 = {a0}, b0 = {b0})"
        )));
    }
    let x = data.x();
    let y = data.y();
    let c1 = c0 + x.tr_mul(x);
    let rhs = c0 * m0 + x.tr_mul(y);
    let (chol, _) = cholesky_with_condition(&c1, "conjugate_fit")?;
    let m1 = chol.solve(&rhs);
    let n = data.n() as f64;
    let a1 = a0 + 0.5 * n;
    let resid_term = (y - x * &m1).dot(y);
    let prior_term = (m0 - &m1).dot(&(c0 * m0));
    let b1 = b0 + 0.5 * (resid_term + prior_term);
    Ok(NormalGammaPosterior { m1, c1, a1, b1 })
}

/// Standardize every column of the design to sample mean 0 and variance 1
/// (n-1 denominator). Returns the transformed dataset together with the
/// centers and scales so the transform can be inverted.
pub fn standardize(data: &Dataset) -> Result<(Dataset, DVector<f64>, DVector<f64>)> {
    let n = data.n();
    let p = data.p();
    if n < 2 {
        return Err(Error::Dimension("standardization needs at least 2 rows".into()));
    }
    let x = data.x();
    let mut centers = DVector::zeros(p);
    let mut scales = DVector::zeros(p);
    let mut xs = x.clone();
    for j in 0..p {
        let col = x.column(j);
        let mean = col.sum() / n as f64;
        let var = col.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n as f64 - 1.0);
        if var <= 0.0 {
            return Err(Error::ZeroVariance { column: j });
        }
        let sd = var.sqrt();
        centers[j] = mean;
        scales[j] = sd;
        for i in 0..n {
            xs[(i, j)] = (x[(i, j)] - mean) / sd;
        }
    }
    let ds = Dataset::with_names(data.y().clone(), xs, data.feature_names().map(|s| s.to_vec()))?;
    Ok((ds, centers, scales))
}

/// Apply previously computed centers/scales to a new design (validation sets
/// share the training transform).
pub fn apply_standardization(
    x: &DMatrix<f64>,
    centers: &DVector<f64>,
    scales: &DVector<f64>,
) -> Result<DMatrix<f64>> {
    if x.ncols() != centers.len() || x.ncols() != scales.len() {
        return Err(Error::Dimension("centers/scales do not match column count".into()));
    }
    let mut out = x.clone();
    for j in 0..x.ncols() {
        for i in 0..x.nrows() {
            out[(i, j)] = (x[(i, j)] - centers[j]) / scales[j];
        }
    }
    Ok(out)
}
