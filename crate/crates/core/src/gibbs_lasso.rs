//! Gibbs sampler for the hierarchical Bayesian Lasso — the MCMC oracle the
//! variational fit is validated against — plus GIG random variate generation.
//!
//! Full conditionals:
//! `beta ~ N((X'X + D^{-1})^{-1} X'y, phi^{-1} (X'X + D^{-1})^{-1})`,
//! `tau_j ~ GIG(1/2, 2 lambda, beta_j^2 phi)`,
//! `phi ~ Ga(n/2 + p/2 + a0, b0 + [||y - X beta||^2 + beta' D^{-1} beta]/2)`,
//! `lambda ~ Ga(g0 + p, h0 + sum tau_j)`.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Gamma, InverseGaussian, StandardNormal};

use crate::error::{Error, Result};
use crate::model::{cholesky_with_condition, Dataset, LassoPriors};
use crate::selection::{empirical_quantile, CoefficientPosterior};

/// Guard for `beta_j^2 phi` when a coefficient draw lands essentially at
/// zero; keeps the reciprocal inverse-Gaussian mean within f64 range.
const GIG_B_FLOOR: f64 = 1e-12;

/// Iteration plan for one chain.
#[derive(Debug, Clone, Copy)]
pub struct GibbsOptions {
    pub iterations: usize,
    pub burn_in: usize,
    pub thin: usize,
    pub seed: u64,
}

impl Default for GibbsOptions {
    fn default() -> Self {
        // the iteration counts used throughout the simulation exercises
        GibbsOptions { iterations: 15_000, burn_in: 5_000, thin: 10, seed: 0 }
    }
}

impl GibbsOptions {
    pub fn validate(&self) -> Result<()> {
        if self.iterations <= self.burn_in {
            return Err(Error::InvalidConfig(format!(
                "iterations ({}) must exceed burn_in ({})",
                self.iterations, self.burn_in
            )));
        }
        if self.thin < 1 {
            return Err(Error::InvalidConfig("thin must be >= 1".into()));
        }
        Ok(())
    }

    pub fn kept(&self) -> usize {
        (self.iterations - self.burn_in).div_ceil(self.thin)
    }
}

/// Stored posterior draws (rows = kept iterations).
#[derive(Debug, Clone, PartialEq)]
pub struct GibbsChain {
    pub beta_draws: DMatrix<f64>,
    pub tau_draws: DMatrix<f64>,
    pub phi_draws: DVector<f64>,
    pub lambda_draws: DVector<f64>,
}

impl GibbsChain {
    pub fn n_kept(&self) -> usize {
        self.phi_draws.len()
    }

    pub fn p(&self) -> usize {
        self.beta_draws.ncols()
    }

    pub fn beta_column(&self, j: usize) -> Vec<f64> {
        self.beta_draws.column(j).iter().copied().collect()
    }

    /// Empirical posterior mean of each coefficient.
    pub fn beta_mean(&self) -> DVector<f64> {
        DVector::from_fn(self.p(), |j, _| self.beta_draws.column(j).mean())
    }

    /// Empirical posterior standard deviation (n-1 denominator).
    pub fn beta_sd(&self) -> DVector<f64> {
        DVector::from_fn(self.p(), |j, _| column_sd(&self.beta_column(j)))
    }

    /// Empirical (mean, sd) pairs for the selection criteria.
    pub fn coefficient_posteriors(&self) -> Result<Vec<CoefficientPosterior>> {
        (0..self.p())
            .map(|j| {
                CoefficientPosterior::new(
                    self.beta_draws.column(j).mean(),
                    column_sd(&self.beta_column(j)),
                )
            })
            .collect()
    }
}

fn column_sd(xs: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    (xs.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
}

/// One draw from GIG(order, a, b).
///
/// Order 1/2 uses the exact reciprocal identity: if
/// `Y ~ InverseGaussian(sqrt(a/b), a)` then `1/Y ~ GIG(1/2, a, b)`.
/// Other orders fall back to ratio-of-uniforms on the log-kernel.
pub fn sample_gig<R: Rng + ?Sized>(order: f64, a: f64, b: f64, rng: &mut R) -> Result<f64> {
    if !(a > 0.0) || !a.is_finite() || !(b > 0.0) || !b.is_finite() {
        return Err(Error::domain(
            "sample_gig",
            format!("parameters must be positive (a = {a}, b = {b})"),
        ));
    }
    if (order - 0.5).abs() < 1e-12 {
        let b = b.max(GIG_B_FLOOR);
        let ig = InverseGaussian::new((a / b).sqrt(), a)
            .map_err(|e| Error::domain("sample_gig", format!("{e}")))?;
        let y: f64 = ig.sample(rng);
        return Ok(1.0 / y);
    }
    if (order + 0.5).abs() < 1e-12 {
        let a = a.max(GIG_B_FLOOR);
        let ig = InverseGaussian::new((b / a).sqrt(), b)
            .map_err(|e| Error::domain("sample_gig", format!("{e}")))?;
        return Ok(ig.sample(rng));
    }
    sample_gig_rou(order, a, b, rng)
}

/// Ratio-of-uniforms sampler on the kernel `x^(p-1) exp(-(ax + b/x)/2)`,
/// with all bounds formed in log space relative to the mode.
fn sample_gig_rou<R: Rng + ?Sized>(p: f64, a: f64, b: f64, rng: &mut R) -> Result<f64> {
    let log_kernel = |x: f64| (p - 1.0) * x.ln() - 0.5 * (a * x + b / x);
    let mode = ((p - 1.0) + ((p - 1.0) * (p - 1.0) + a * b).sqrt()) / a;
    let peak = log_kernel(mode);
    // sup of x sqrt(kernel) is at the mode of the (p+1)-kernel
    let mode_plus = ((p + 1.0) + ((p + 1.0) * (p + 1.0) + a * b).sqrt()) / a;
    let v_max = mode_plus * (0.5 * (log_kernel(mode_plus) - peak)).exp();
    for _ in 0..100_000 {
        let u: f64 = rng.random::<f64>();
        if u == 0.0 {
            continue;
        }
        let v: f64 = rng.random::<f64>() * v_max;
        let x = v / u;
        if 2.0 * u.ln() <= log_kernel(x) - peak {
            return Ok(x);
        }
    }
    Err(Error::domain("sample_gig", "ratio-of-uniforms failed to accept".to_string()))
}

fn gamma_draw<R: Rng + ?Sized>(shape: f64, rate: f64, rng: &mut R) -> Result<f64> {
    let g = Gamma::new(shape, 1.0 / rate)
        .map_err(|e| Error::domain("gibbs_fit", format!("gamma({shape}, rate {rate}): {e}")))?;
    Ok(g.sample(rng))
}

struct Conditionals<'a> {
    xtx: DMatrix<f64>,
    xty: DVector<f64>,
    data: &'a Dataset,
}

impl<'a> Conditionals<'a> {
    fn new(data: &'a Dataset) -> Self {
        let x = data.x();
        Conditionals { xtx: x.tr_mul(x), xty: x.tr_mul(data.y()), data }
    }

    fn draw_beta<R: Rng + ?Sized>(
        &self,
        tau: &DVector<f64>,
        phi: f64,
        rng: &mut R,
    ) -> Result<DVector<f64>> {
        let p = self.data.p();
        let mut prec = self.xtx.clone();
        for j in 0..p {
            prec[(j, j)] += 1.0 / tau[j];
        }
        let (chol, _) = cholesky_with_condition(&prec, "gibbs_fit::beta")?;
        let mean = chol.solve(&self.xty);
        let z = DVector::from_fn(p, |_, _| rng.sample::<f64, _>(StandardNormal));
        // prec = L L', so solving L' w = z gives w with covariance prec^{-1}
        let w = chol
            .l()
            .transpose()
            .solve_upper_triangular(&z)
            .ok_or(Error::IllConditioned { context: "gibbs_fit::beta", cond: f64::INFINITY })?;
        Ok(mean + w / phi.sqrt())
    }

    fn draw_phi<R: Rng + ?Sized>(
        &self,
        beta: &DVector<f64>,
        tau: &DVector<f64>,
        priors: &LassoPriors,
        rng: &mut R,
    ) -> Result<f64> {
        let n = self.data.n() as f64;
        let p = self.data.p() as f64;
        let resid = self.data.y() - self.data.x() * beta;
        let mut quad = resid.dot(&resid);
        for j in 0..beta.len() {
            quad += beta[j] * beta[j] / tau[j];
        }
        gamma_draw(0.5 * n + 0.5 * p + priors.a0, priors.b0 + 0.5 * quad, rng)
    }
}

fn run_chain(
    data: &Dataset,
    priors: &LassoPriors,
    opts: &GibbsOptions,
    fixed_tau: Option<&DVector<f64>>,
) -> Result<GibbsChain> {
    opts.validate()?;
    let n = data.n();
    let p = data.p();
    let _ = n;
    let cond = Conditionals::new(data);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);

    let mut tau = match fixed_tau {
        Some(t) => {
            if t.len() != p {
                return Err(Error::Dimension(format!(
                    "fixed tau has {} entries for p = {p}",
                    t.len()
                )));
            }
            t.clone()
        }
        None => DVector::from_element(p, 1.0),
    };
    let mut phi = 1.0;
    let mut lambda = 1.0;

    let kept = opts.kept();
    let mut beta_draws = DMatrix::zeros(kept, p);
    let mut tau_draws = DMatrix::zeros(kept, p);
    let mut phi_draws = DVector::zeros(kept);
    let mut lambda_draws = DVector::zeros(kept);
    let mut row = 0;

    for it in 0..opts.iterations {
        let beta = cond.draw_beta(&tau, phi, &mut rng)?;
        if fixed_tau.is_none() {
            for j in 0..p {
                tau[j] = sample_gig(0.5, 2.0 * lambda, beta[j] * beta[j] * phi, &mut rng)?;
            }
        }
        phi = cond.draw_phi(&beta, &tau, priors, &mut rng)?;
        if fixed_tau.is_none() {
            lambda = gamma_draw(priors.g0 + p as f64, priors.h0 + tau.sum(), &mut rng)?;
        }

        if it >= opts.burn_in && (it - opts.burn_in) % opts.thin == 0 {
            beta_draws.row_mut(row).copy_from(&beta.transpose());
            tau_draws.row_mut(row).copy_from(&tau.transpose());
            phi_draws[row] = phi;
            lambda_draws[row] = lambda;
            row += 1;
        }
    }
    debug_assert_eq!(row, kept);
    Ok(GibbsChain { beta_draws, tau_draws, phi_draws, lambda_draws })
}

/// Run the Gibbs sampler, keeping every `thin`-th draw after `burn_in`.
/// Deterministic given the seed.
pub fn gibbs_fit(data: &Dataset, priors: &LassoPriors, opts: &GibbsOptions) -> Result<GibbsChain> {
    run_chain(data, priors, opts, None)
}

/// Validation variant with the scale vector `tau` frozen (no `tau` or
/// `lambda` moves): the remaining (beta, phi) chain targets the exact
/// conjugate Normal-Gamma posterior with prior precision-scale
/// `D_tau^{-1}`, so its moments can be checked against `conjugate_fit`.
pub fn gibbs_fit_fixed_scales(
    data: &Dataset,
    priors: &LassoPriors,
    opts: &GibbsOptions,
    tau: &DVector<f64>,
) -> Result<GibbsChain> {
    run_chain(data, priors, opts, Some(tau))
}

/// Mean, standard deviation and requested quantiles for one chain column.
#[derive(Debug, Clone, PartialEq)]
pub struct ParameterSummary {
    pub name: String,
    pub mean: f64,
    pub sd: f64,
    pub quantiles: Vec<(f64, f64)>,
}

fn summarize_column(name: String, xs: &[f64], probs: &[f64]) -> Result<ParameterSummary> {
    if xs.is_empty() {
        return Err(Error::EmptyChain);
    }
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let sd = if xs.len() > 1 { column_sd(xs) } else { 0.0 };
    let quantiles = probs
        .iter()
        .map(|&q| empirical_quantile(xs, q).map(|v| (q, v)))
        .collect::<Result<Vec<_>>>()?;
    Ok(ParameterSummary { name, mean, sd, quantiles })
}

/// Column-wise summaries for every stored parameter, in the order
/// `beta[..], phi, lambda, tau[..]`.
pub fn chain_summary(chain: &GibbsChain, probs: &[f64]) -> Result<Vec<ParameterSummary>> {
    if chain.n_kept() == 0 {
        return Err(Error::EmptyChain);
    }
    let mut out = Vec::with_capacity(2 * chain.p() + 2);
    for j in 0..chain.p() {
        out.push(summarize_column(
            format!("beta[{}]", j + 1),
            &chain.beta_column(j),
            probs,
        )?);
    }
    let phi: Vec<f64> = chain.phi_draws.iter().copied().collect();
    out.push(summarize_column("phi".to_string(), &phi, probs)?);
    let lambda: Vec<f64> = chain.lambda_draws.iter().copied().collect();
    out.push(summarize_column("lambda".to_string(), &lambda, probs)?);
    for j in 0..chain.p() {
        let col: Vec<f64> = chain.tau_draws.column(j).iter().copied().collect();
        out.push(summarize_column(format!("tau[{}]", j + 1), &col, probs)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::conjugate_fit;
    use crate::specfun::{gig_mean, gig_var, GigParams};
    use approx::assert_relative_eq;
    use rand::prelude::*;

    fn mean(xs: &[f64]) -> f64 {
        xs.iter().sum::<f64>() / xs.len() as f64
    }

    #[test]
    fn gig_sample_moments_match_analytic() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let n = 100_000;
        let draws: Vec<f64> =
            (0..n).map(|_| sample_gig(0.5, 1.0, 1.0, &mut rng).unwrap()).collect();
        assert!(draws.iter().all(|&x| x > 0.0));
        let g = GigParams::new(0.5, 1.0, 1.0).unwrap();
        let m = gig_mean(&g).unwrap();
        let v = gig_var(&g).unwrap();
        assert!((mean(&draws) - m).abs() < 0.02, "mean {} vs {m}", mean(&draws));
        let sample_var = draws.iter().map(|x| (x - mean(&draws)).powi(2)).sum::<f64>()
            / (n as f64 - 1.0);
        assert!((sample_var - v).abs() / v < 0.05, "var {sample_var} vs {v}");
    }

    #[test]
    fn gig_inverse_moment() {
        // E[1/X] = sqrt(a/b) = 2 at (1/2, 4, 1)
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let inv: Vec<f64> = (0..100_000)
            .map(|_| 1.0 / sample_gig(0.5, 4.0, 1.0, &mut rng).unwrap())
            .collect();
        assert!((mean(&inv) - 2.0).abs() < 0.02, "mean(1/X) = {}", mean(&inv));
    }

    /// Cumulative-quadrature KS statistic against the normalized density.
    fn ks_distance(draws: &mut [f64], order: f64, a: f64, b: f64) -> f64 {
        draws.sort_by(|x, y| x.partial_cmp(y).unwrap());
        let log_kernel = |x: f64| (order - 1.0) * x.ln() - 0.5 * (a * x + b / x);
        let mode = ((order - 1.0) + ((order - 1.0) * (order - 1.0) + a * b).sqrt()) / a;
        let peak = log_kernel(mode);
        let dens = |x: f64| (log_kernel(x) - peak).exp();
        let simpson = |lo: f64, hi: f64, steps: usize| -> f64 {
            let h = (hi - lo) / steps as f64;
            (0..steps)
                .map(|i| {
                    let x = lo + i as f64 * h;
                    h / 6.0 * (dens(x) + 4.0 * dens(x + 0.5 * h) + dens(x + h))
                })
                .sum()
        };
        let lo = 1e-9;
        let hi = draws.last().unwrap() * 4.0;
        let z = simpson(lo, hi, 400_000);
        let n = draws.len() as f64;
        let mut cum = 0.0;
        let mut prev = lo;
        let mut d: f64 = 0.0;
        for (i, &x) in draws.iter().enumerate() {
            cum += simpson(prev, x, 64);
            prev = x;
            let f = cum / z;
            d = d.max((f - i as f64 / n).abs()).max((f - (i as f64 + 1.0) / n).abs());
        }
        d
    }

    #[test]
    fn gig_ks_distance_small() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut draws: Vec<f64> =
            (0..100_000).map(|_| sample_gig(0.5, 3.0, 2.0, &mut rng).unwrap()).collect();
        let d = ks_distance(&mut draws, 0.5, 3.0, 2.0);
        assert!(d < 0.01, "KS distance {d}");
    }

    #[test]
    fn gig_general_order_fallback_moments() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let (order, a, b) = (1.7, 2.0, 3.0);
        let draws: Vec<f64> =
            (0..100_000).map(|_| sample_gig(order, a, b, &mut rng).unwrap()).collect();
        let g = GigParams::new(order, a, b).unwrap();
        let m = gig_mean(&g).unwrap();
        let sd = gig_var(&g).unwrap().sqrt();
        let se = sd / (draws.len() as f64).sqrt();
        assert!((mean(&draws) - m).abs() < 5.0 * se, "mean {} vs {m}", mean(&draws));
    }

    #[test]
    fn gig_invalid_params_rejected() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        assert!(sample_gig(0.5, 0.0, 1.0, &mut rng).is_err());
        assert!(sample_gig(0.5, 1.0, f64::NAN, &mut rng).is_err());
    }

    fn small_dataset(seed: u64, n: usize, p: usize) -> Dataset {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = DMatrix::from_fn(n, p, |_, _| rng.random::<f64>() * 2.0 - 1.0);
        let beta = DVector::from_fn(p, |j, _| if j == 0 { 2.0 } else { 0.0 });
        let y = &x * &beta + DVector::from_fn(n, |_, _| 0.3 * (rng.random::<f64>() - 0.5));
        Dataset::new(y, x).unwrap()
    }

    #[test]
    fn identical_seeds_identical_chains() {
        let data = small_dataset(6, 20, 3);
        let opts = GibbsOptions { iterations: 300, burn_in: 100, thin: 2, seed: 42 };
        let a = gibbs_fit(&data, &LassoPriors::exercise_default(), &opts).unwrap();
        let b = gibbs_fit(&data, &LassoPriors::exercise_default(), &opts).unwrap();
        assert_eq!(a.beta_draws, b.beta_draws);
        assert_eq!(a.lambda_draws, b.lambda_draws);
    }

    #[test]
    fn kept_draw_positivity() {
        let data = small_dataset(7, 15, 2);
        let opts = GibbsOptions { iterations: 500, burn_in: 100, thin: 3, seed: 9 };
        let chain = gibbs_fit(&data, &LassoPriors::jeffreys(), &opts).unwrap();
        assert_eq!(chain.n_kept(), opts.kept());
        assert!(chain.phi_draws.iter().all(|&v| v > 0.0));
        assert!(chain.lambda_draws.iter().all(|&v| v > 0.0));
        assert!(chain.tau_draws.iter().all(|&v| v > 0.0));
    }

    /// Batch-means Monte Carlo standard error (20 batches).
    fn batch_se(xs: &[f64]) -> f64 {
        let b = 20;
        let len = xs.len() / b;
        let means: Vec<f64> = (0..b).map(|k| mean(&xs[k * len..(k + 1) * len])).collect();
        let grand = mean(&means);
        let var = means.iter().map(|m| (m - grand).powi(2)).sum::<f64>() / (b as f64 - 1.0);
        (var / b as f64).sqrt()
    }

    #[test]
    fn fixed_scales_reduce_to_conjugate_posterior() {
        let data = small_dataset(8, 25, 3);
        let priors = LassoPriors::exercise_default();
        let tau = DVector::from_element(3, 1.0);
        let opts = GibbsOptions { iterations: 22_000, burn_in: 2_000, thin: 1, seed: 17 };
        let chain = gibbs_fit_fixed_scales(&data, &priors, &opts, &tau).unwrap();

        // with D_tau = I the chain targets the conjugate posterior with
        // prior precision-scale C0 = I; the phi full conditional carries the
        // extra p/2 exponent but its stationary marginal is Ga(a1, b1)
        let c0 = DMatrix::identity(3, 3);
        let m0 = DVector::zeros(3);
        let post = conjugate_fit(&data, &m0, &c0, priors.a0, priors.b0).unwrap();
        let beta_mean = chain.beta_mean();
        for j in 0..3 {
            let col = chain.beta_column(j);
            let se = batch_se(&col);
            assert!(
                (beta_mean[j] - post.m1[j]).abs() < 3.0 * se,
                "beta[{j}]: chain {} vs exact {} (3se = {})",
                beta_mean[j],
                post.m1[j],
                3.0 * se
            );
        }
        let phi: Vec<f64> = chain.phi_draws.iter().copied().collect();
        let se_phi = batch_se(&phi);
        assert!(
            (mean(&phi) - post.a1 / post.b1).abs() < 3.0 * se_phi,
            "phi: chain {} vs exact {} (3se = {})",
            mean(&phi),
            post.a1 / post.b1,
            3.0 * se_phi
        );
    }

    #[test]
    fn doubling_iterations_is_stable() {
        let data = small_dataset(10, 30, 3);
        let priors = LassoPriors::exercise_default();
        let short = gibbs_fit(
            &data,
            &priors,
            &GibbsOptions { iterations: 6_000, burn_in: 1_000, thin: 1, seed: 3 },
        )
        .unwrap();
        let long = gibbs_fit(
            &data,
            &priors,
            &GibbsOptions { iterations: 11_000, burn_in: 1_000, thin: 1, seed: 4 },
        )
        .unwrap();
        for j in 0..3 {
            let se_s = batch_se(&short.beta_column(j));
            let se_l = batch_se(&long.beta_column(j));
            let tol = 2.0 * (se_s * se_s + se_l * se_l).sqrt();
            let diff = (short.beta_mean()[j] - long.beta_mean()[j]).abs();
            assert!(diff < tol.max(0.01), "beta[{j}] shifted by {diff} (tol {tol})");
        }
    }

    #[test]
    fn summary_edge_cases() {
        let chain = GibbsChain {
            beta_draws: DMatrix::from_column_slice(2, 1, &[0.0, 2.0]),
            tau_draws: DMatrix::from_element(2, 1, 1.0),
            phi_draws: DVector::from_element(2, 3.0),
            lambda_draws: DVector::from_element(2, 1.0),
        };
        let sum = chain_summary(&chain, &[0.5]).unwrap();
        // two-point column (0, 2): mean 1, sd sqrt(2)
        assert_relative_eq!(sum[0].mean, 1.0, max_relative = 1e-14);
        assert_relative_eq!(sum[0].sd, 2.0_f64.sqrt(), max_relative = 1e-14);
        // constant column: sd 0
        assert_relative_eq!(sum[1].mean, 3.0, max_relative = 1e-14);
        assert_eq!(sum[1].sd, 0.0);
        assert_eq!(sum.len(), 1 + 2 + 1);
    }

    #[test]
    fn summary_quantiles_on_normal_draws() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let draws: Vec<f64> = (0..10_000).map(|_| rng.sample::<f64, _>(StandardNormal)).collect();
        let q05 = empirical_quantile(&draws, 0.05).unwrap();
        let q95 = empirical_quantile(&draws, 0.95).unwrap();
        assert!((q05 + 1.645).abs() < 0.05, "q05 = {q05}");
        assert!((q95 - 1.645).abs() < 0.05, "q95 = {q95}");
    }

    #[test]
    fn options_validation() {
        assert!(GibbsOptions { iterations: 10, burn_in: 10, thin: 1, seed: 0 }
            .validate()
            .is_err());
        assert!(GibbsOptions { iterations: 10, burn_in: 2, thin: 0, seed: 0 }
            .validate()
            .is_err());
        assert_eq!(GibbsOptions::default().kept(), 1000);
    }

    #[test]
    fn empty_chain_summary_is_error() {
        let chain = GibbsChain {
            beta_draws: DMatrix::zeros(0, 1),
            tau_draws: DMatrix::zeros(0, 1),
            phi_draws: DVector::zeros(0),
            lambda_draws: DVector::zeros(0),
        };
        assert!(matches!(chain_summary(&chain, &[0.5]), Err(Error::EmptyChain)));
    }
}
