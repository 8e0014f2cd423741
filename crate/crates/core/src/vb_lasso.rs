//! Coordinate-ascent variational inference (CAVI) for the full Bayesian
//! Lasso.
//!
//! The mean-field factorization is `q(beta, phi) q(tau) q(lambda)` with
//! `q1` normal-gamma, `q2` a product of GIG(1/2, d, f_j) factors and `q3`
//! gamma. One CAVI cycle runs q1 -> q2 -> q3 and appends the evidence lower
//! bound to the trace.
//!
//! ELBO bookkeeping: `E[log tau_j]` enters both the prior expectation and the
//! q2 entropy with coefficient -1/2, so the Taylor approximation used for it
//! cancels in the total and the trace stays non-decreasing up to rounding.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::model::{cholesky_with_condition, Dataset, LassoPriors};
use crate::selection::CoefficientPosterior;
use crate::specfun::{
    digamma, gig_expected_log, gig_mean, gig_mean_inverse, gig_var, log_bessel_k, log_gamma,
    GigParams,
};

const LN_2PI: f64 = 1.837_877_066_409_345_6;
/// Floor applied to `f_tau` entries before any GIG moment call: a fully
/// shrunk coefficient drives `f -> 0`, where the Bessel ratios become 0/0.
const F_TAU_FLOOR: f64 = 1e-12;
/// Absolute floor added to relative-change denominators so parameters may
/// pass through zero.
const REL_CHANGE_FLOOR: f64 = 1e-12;

/// Which quantity the stopping rule monitors.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Monitor {
    /// Relative ELBO change below `elbo_tol`.
    Elbo,
    /// Max relative change of (m_beta, C_beta, b_phi, d_tau, f_tau,
    /// h_lambda) below `rel_change_tol`.
    Hyperparameters,
    /// Both of the above.
    Both,
}

/// Options controlling a CAVI fit.
#[derive(Debug, Clone, Copy)]
pub struct FitOptions {
    pub max_iterations: usize,
    /// Relative-change tolerance on the monitored hyperparameters
    /// (default 1e-4, i.e. 0.01%).
    pub rel_change_tol: f64,
    /// Relative ELBO-change tolerance when the monitor includes the ELBO.
    pub elbo_tol: f64,
    pub init_seed: u64,
    pub monitor: Monitor,
}

impl Default for FitOptions {
    fn default() -> Self {
        FitOptions {
            max_iterations: 500,
            rel_change_tol: 1e-4,
            elbo_tol: 1e-8,
            init_seed: 0,
            monitor: Monitor::Hyperparameters,
        }
    }
}

impl FitOptions {
    pub fn validate(&self) -> Result<()> {
        if self.max_iterations < 1 {
            return Err(Error::InvalidConfig("max_iterations must be >= 1".into()));
        }
        if !(self.rel_change_tol > 0.0) || !(self.elbo_tol > 0.0) {
            return Err(Error::InvalidConfig("tolerances must be positive".into()));
        }
        Ok(())
    }
}

/// All variational hyperparameters of the Lasso posterior approximation.
///
/// `c_beta` is the matrix `C_beta` of the normal-gamma factor
/// `q1(beta, phi) = N(beta | m_beta, phi^{-1} C_beta) Ga(phi | a_phi, b_phi)`;
/// the posterior covariance of `beta` at the mean of `phi` is
/// `(b_phi / a_phi) C_beta`, and its marginal (Student-t) covariance is
/// `C_beta b_phi / (a_phi - 1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct VariationalState {
    pub m_beta: DVector<f64>,
    pub c_beta: DMatrix<f64>,
    pub a_phi: f64,
    pub b_phi: f64,
    /// GIG order of every q2 factor; fixed at 1/2 by the model.
    pub c_tau: f64,
    pub d_tau: f64,
    pub f_tau: DVector<f64>,
    pub g_lambda: f64,
    pub h_lambda: f64,
    pub iteration: usize,
    pub elbo_trace: Vec<f64>,
    pub converged: bool,
}

impl VariationalState {
    pub fn p(&self) -> usize {
        self.m_beta.len()
    }

    /// GIG parameters of the j-th q2 factor, with the `f` floor applied.
    pub fn gig_params(&self, j: usize) -> GigParams {
        GigParams {
            order: self.c_tau,
            a: self.d_tau,
            b: self.f_tau[j].max(F_TAU_FLOOR),
        }
    }

    /// Posterior mean of `beta`.
    pub fn beta_mean(&self) -> &DVector<f64> {
        &self.m_beta
    }

    /// Marginal posterior standard deviation of each coefficient under the
    /// Student-t marginal of the normal-gamma factor:
    /// `sqrt(C_beta[j][j] * b_phi / (a_phi - 1))`. Requires `a_phi > 1`.
    pub fn beta_marginal_sd(&self) -> Result<DVector<f64>> {
        if self.a_phi <= 1.0 {
            return Err(Error::domain(
                "beta_marginal_sd",
                format!("a_phi must exceed 1 (got {})", self.a_phi),
            ));
        }
        let s = self.b_phi / (self.a_phi - 1.0);
        Ok(DVector::from_fn(self.p(), |j, _| (self.c_beta[(j, j)] * s).sqrt()))
    }

    /// Per-coefficient (mean, sd) pairs fed to the selection criteria.
    pub fn coefficient_posteriors(&self) -> Result<Vec<CoefficientPosterior>> {
        let sd = self.beta_marginal_sd()?;
        Ok(self
            .m_beta
            .iter()
            .zip(sd.iter())
            .map(|(&m, &s)| CoefficientPosterior { mean: m, sd: s })
            .collect())
    }

    pub fn phi_mean(&self) -> f64 {
        self.a_phi / self.b_phi
    }

    pub fn phi_sd(&self) -> f64 {
        self.a_phi.sqrt() / self.b_phi
    }

    pub fn lambda_mean(&self) -> f64 {
        self.g_lambda / self.h_lambda
    }

    pub fn lambda_sd(&self) -> f64 {
        self.g_lambda.sqrt() / self.h_lambda
    }

    /// Analytic mean of each `tau_j` under its GIG factor.
    pub fn tau_mean(&self) -> Result<DVector<f64>> {
        let mut out = DVector::zeros(self.p());
        for j in 0..self.p() {
            out[j] = gig_mean(&self.gig_params(j))?;
        }
        Ok(out)
    }

    /// Analytic standard deviation of each `tau_j` under its GIG factor.
    pub fn tau_sd(&self) -> Result<DVector<f64>> {
        let mut out = DVector::zeros(self.p());
        for j in 0..self.p() {
            out[j] = gig_var(&self.gig_params(j))?.sqrt();
        }
        Ok(out)
    }

    /// Final ELBO value, if any cycle has run.
    pub fn elbo(&self) -> Option<f64> {
        self.elbo_trace.last().copied()
    }
}

/// Precomputed sufficient statistics shared by all updates of one fit.
pub(crate) struct Workspace {
    pub xtx: DMatrix<f64>,
    pub xty: DVector<f64>,
    pub yty: f64,
}

impl Workspace {
    pub fn new(data: &Dataset) -> Self {
        let x = data.x();
        Workspace {
            xtx: x.tr_mul(x),
            xty: x.tr_mul(data.y()),
            yty: data.y().dot(data.y()),
        }
    }
}

/// `E_tau[D_tau^{-1}]` as a diagonal vector, from the current q2 factor.
fn expected_inv_tau(state: &VariationalState) -> Result<DVector<f64>> {
    let mut v = DVector::zeros(state.p());
    for j in 0..state.p() {
        v[j] = gig_mean_inverse(&state.gig_params(j))?;
    }
    Ok(v)
}

fn q1_update_with(
    state: &mut VariationalState,
    ws: &Workspace,
    priors: &LassoPriors,
    n: usize,
    e_inv_tau: &DVector<f64>,
) -> Result<()> {
    let p = state.p();
    let mut prec = ws.xtx.clone();
    for j in 0..p {
        prec[(j, j)] += e_inv_tau[j];
    }
    let (chol, _cond) = cholesky_with_condition(&prec, "vb_lasso::update_q1")?;
    state.m_beta = chol.solve(&ws.xty);
    state.c_beta = chol.inverse();
    state.a_phi = priors.a0 + 0.5 * n as f64;
    // m' C^{-1} m = m' X'y because C^{-1} m = X'y
    let b = priors.b0 + 0.5 * (ws.yty - state.m_beta.dot(&ws.xty));
    state.b_phi = b.max(f64::MIN_POSITIVE);
    Ok(())
}

fn q2_update_with(state: &mut VariationalState) {
    state.c_tau = 0.5;
    state.d_tau = 2.0 * state.g_lambda / state.h_lambda;
    let ratio = state.a_phi / state.b_phi;
    for j in 0..state.p() {
        state.f_tau[j] = state.m_beta[j] * state.m_beta[j] * ratio + state.c_beta[(j, j)];
    }
}

fn q3_update_with(state: &mut VariationalState, priors: &LassoPriors) -> Result<()> {
    state.g_lambda = priors.g0 + state.p() as f64;
    let mut sum = 0.0;
    for j in 0..state.p() {
        sum += gig_mean(&state.gig_params(j))?;
    }
    state.h_lambda = priors.h0 + sum;
    Ok(())
}

/// q1 step: refresh the normal-gamma factor for `(beta, phi)` given the
/// current `tau` expectations.
pub fn update_q1(
    state: &VariationalState,
    data: &Dataset,
    priors: &LassoPriors,
) -> Result<VariationalState> {
    let mut next = state.clone();
    let ws = Workspace::new(data);
    let e_inv = expected_inv_tau(state)?;
    q1_update_with(&mut next, &ws, priors, data.n(), &e_inv)?;
    Ok(next)
}

/// q2 step: refresh every GIG factor (`c_tau = 1/2`, `d_tau = 2 E[lambda]`,
/// `f_tau[j] = E[phi beta_j^2]`).
pub fn update_q2(state: &VariationalState, _priors: &LassoPriors) -> VariationalState {
    let mut next = state.clone();
    q2_update_with(&mut next);
    next
}

/// q3 step: refresh the gamma factor for `lambda`.
pub fn update_q3(state: &VariationalState, priors: &LassoPriors) -> Result<VariationalState> {
    let mut next = state.clone();
    q3_update_with(&mut next, priors)?;
    Ok(next)
}

/// The seven ELBO pieces, named so a non-finite one can be reported.
#[derive(Debug, Clone, Copy)]
pub struct ElboTerms {
    pub e_log_lik: f64,
    pub e_log_p_beta_phi: f64,
    pub e_log_p_tau: f64,
    pub e_log_p_lambda: f64,
    pub e_log_q1: f64,
    pub e_log_q2: f64,
    pub e_log_q3: f64,
}

impl ElboTerms {
    pub fn total(&self) -> f64 {
        self.e_log_lik + self.e_log_p_beta_phi + self.e_log_p_tau + self.e_log_p_lambda
            - self.e_log_q1
            - self.e_log_q2
            - self.e_log_q3
    }

    fn check_finite(&self) -> Result<()> {
        for (name, v) in [
            ("E[log p(y|beta,phi)]", self.e_log_lik),
            ("E[log p(beta,phi|tau)]", self.e_log_p_beta_phi),
            ("E[log p(tau|lambda)]", self.e_log_p_tau),
            ("E[log p(lambda)]", self.e_log_p_lambda),
            ("E[log q1(beta,phi)]", self.e_log_q1),
            ("E[log q2(tau)]", self.e_log_q2),
            ("E[log q3(lambda)]", self.e_log_q3),
        ] {
            if !v.is_finite() {
                return Err(Error::NonFinite(format!("ELBO term {name}")));
            }
        }
        Ok(())
    }
}

/// Expected log-density of the gamma prior on a precision parameter, or the
/// improper Jeffreys `E[log x^{-1}]` with its constant dropped.
fn gamma_prior_expectation(
    shape0: f64,
    rate0: f64,
    e_log: f64,
    e_val: f64,
    jeffreys: bool,
) -> Result<f64> {
    if jeffreys {
        Ok(-e_log)
    } else {
        Ok(shape0 * rate0.ln() - log_gamma(shape0)? + (shape0 - 1.0) * e_log - rate0 * e_val)
    }
}

pub(crate) fn spd_log_det(m: &DMatrix<f64>, context: &'static str) -> Result<f64> {
    let (chol, _) = cholesky_with_condition(m, context)?;
    let l = chol.l_dirty();
    let mut ld = 0.0;
    for i in 0..m.nrows() {
        ld += l[(i, i)].ln();
    }
    Ok(2.0 * ld)
}

pub(crate) fn elbo_terms_with(
    state: &VariationalState,
    ws: &Workspace,
    n: usize,
    priors: &LassoPriors,
) -> Result<ElboTerms> {
    let p = state.p();
    let pf = p as f64;
    let nf = n as f64;
    let (a, b) = (state.a_phi, state.b_phi);
    let (g, h) = (state.g_lambda, state.h_lambda);
    let e_log_phi = digamma(a)? - b.ln();
    let e_phi = a / b;
    let e_log_lambda = digamma(g)? - h.ln();
    let e_lambda = g / h;

    // GIG moments per coefficient
    let mut e_tau = DVector::zeros(p);
    let mut e_inv_tau = DVector::zeros(p);
    let mut e_log_tau = DVector::zeros(p);
    for j in 0..p {
        let gp = state.gig_params(j);
        e_tau[j] = gig_mean(&gp)?;
        e_inv_tau[j] = gig_mean_inverse(&gp)?;
        e_log_tau[j] = gig_expected_log(&gp)?;
    }

    // E[phi ||y - X beta||^2] = E[phi] ||y - X m||^2 + tr(X'X C)
    let quad = ws.yty - 2.0 * state.m_beta.dot(&ws.xty)
        + state.m_beta.dot(&(&ws.xtx * &state.m_beta));
    let tr_xtx_c = (&ws.xtx * &state.c_beta).trace();
    let e_log_lik = 0.5 * nf * (e_log_phi - LN_2PI) - 0.5 * (e_phi * quad + tr_xtx_c);

    // E[log p(beta, phi | tau)]
    let mut shrink = 0.0;
    for j in 0..p {
        let e_phi_beta_sq = state.m_beta[j] * state.m_beta[j] * e_phi + state.c_beta[(j, j)];
        shrink += e_phi_beta_sq * e_inv_tau[j];
    }
    let e_log_p_beta_phi = 0.5 * pf * (e_log_phi - LN_2PI) - 0.5 * e_log_tau.sum()
        - 0.5 * shrink
        + gamma_prior_expectation(priors.a0, priors.b0, e_log_phi, e_phi, priors.jeffreys)?;

    let e_log_p_tau = pf * e_log_lambda - e_lambda * e_tau.sum();

    let e_log_p_lambda =
        gamma_prior_expectation(priors.g0, priors.h0, e_log_lambda, e_lambda, priors.jeffreys)?;

    // E[log q1]: normal part + gamma part
    let log_det_c = spd_log_det(&state.c_beta, "vb_lasso::elbo")?;
    let e_log_q1 = -0.5 * pf * LN_2PI - 0.5 * log_det_c + 0.5 * pf * e_log_phi - 0.5 * pf
        + a * b.ln()
        - log_gamma(a)?
        + (a - 1.0) * e_log_phi
        - a;

    // E[log q2]: sum of GIG log-density expectations
    let mut e_log_q2 = 0.0;
    for j in 0..p {
        let gp = state.gig_params(j);
        let z = (gp.a * gp.b).sqrt();
        e_log_q2 += 0.5 * gp.order * (gp.a / gp.b).ln() - std::f64::consts::LN_2
            - log_bessel_k(gp.order, z)?
            + (gp.order - 1.0) * e_log_tau[j]
            - 0.5 * (gp.a * e_tau[j] + gp.b * e_inv_tau[j]);
    }

    let e_log_q3 = g * h.ln() - log_gamma(g)? + (g - 1.0) * e_log_lambda - g;

    let terms = ElboTerms {
        e_log_lik,
        e_log_p_beta_phi,
        e_log_p_tau,
        e_log_p_lambda,
        e_log_q1,
        e_log_q2,
        e_log_q3,
    };
    terms.check_finite()?;
    Ok(terms)
}

/// Evidence lower bound of the current state. Deterministic in the state;
/// a non-finite term is reported by name.
pub fn elbo(state: &VariationalState, data: &Dataset, priors: &LassoPriors) -> Result<f64> {
    let ws = Workspace::new(data);
    Ok(elbo_terms_with(state, &ws, data.n(), priors)?.total())
}

/// The seven ELBO terms, exposed for term-level validation.
pub fn elbo_terms(
    state: &VariationalState,
    data: &Dataset,
    priors: &LassoPriors,
) -> Result<ElboTerms> {
    let ws = Workspace::new(data);
    elbo_terms_with(state, &ws, data.n(), priors)
}

/// Deterministic initialization: unit GIG scales (`f_tau = 1`, `d_tau = 2`),
/// `g_lambda = g0 + p`, `h_lambda = max(h0 + p, 1)`, and a first q1 update
/// with `E[D_tau^{-1}] = I`, which starts the ascent in a well-conditioned
/// ridge regime even when n < p.
pub fn initialize(data: &Dataset, priors: &LassoPriors, seed: u64) -> Result<VariationalState> {
    let p = data.p();
    let n = data.n();
    let _ = seed; // the default scheme is deterministic without randomness
    let mut state = VariationalState {
        m_beta: DVector::zeros(p),
        c_beta: DMatrix::identity(p, p),
        a_phi: priors.a0 + 0.5 * n as f64,
        b_phi: 1.0,
        c_tau: 0.5,
        d_tau: 2.0,
        f_tau: DVector::from_element(p, 1.0),
        g_lambda: priors.g0 + p as f64,
        h_lambda: (priors.h0 + p as f64).max(1.0),
        iteration: 0,
        elbo_trace: Vec::new(),
        converged: false,
    };
    let ws = Workspace::new(data);
    let ones = DVector::from_element(p, 1.0);
    q1_update_with(&mut state, &ws, priors, n, &ones)?;
    Ok(state)
}

fn max_rel_change(old: &VariationalState, new: &VariationalState) -> f64 {
    let rel = |o: f64, n_: f64| (n_ - o).abs() / (o.abs() + REL_CHANGE_FLOOR);
    let mut worst: f64 = 0.0;
    for j in 0..old.p() {
        worst = worst.max(rel(old.m_beta[j], new.m_beta[j]));
        worst = worst.max(rel(old.f_tau[j], new.f_tau[j]));
    }
    for (o, n_) in old.c_beta.iter().zip(new.c_beta.iter()) {
        worst = worst.max(rel(*o, *n_));
    }
    worst = worst.max(rel(old.b_phi, new.b_phi));
    worst = worst.max(rel(old.d_tau, new.d_tau));
    worst = worst.max(rel(old.h_lambda, new.h_lambda));
    worst
}

/// Run CAVI to convergence (or `max_iterations`). Non-convergence is not an
/// error: the returned state carries `converged = false`.
pub fn fit(data: &Dataset, priors: &LassoPriors, opts: &FitOptions) -> Result<VariationalState> {
    opts.validate()?;
    let mut state = initialize(data, priors, opts.init_seed)?;
    let ws = Workspace::new(data);
    let n = data.n();
    for _ in 0..opts.max_iterations {
        let prev = state.clone();
        let e_inv = expected_inv_tau(&state)?;
        q1_update_with(&mut state, &ws, priors, n, &e_inv)?;
        q2_update_with(&mut state);
        q3_update_with(&mut state, priors)?;
        state.iteration += 1;
        let bound = elbo_terms_with(&state, &ws, n, priors)?.total();
        state.elbo_trace.push(bound);

        let hyper_ok = max_rel_change(&prev, &state) < opts.rel_change_tol;
        let elbo_ok = match (prev.elbo_trace.last(), state.elbo_trace.last()) {
            (Some(&old), Some(&new)) => {
                (new - old).abs() / (old.abs() + REL_CHANGE_FLOOR) < opts.elbo_tol
            }
            _ => false,
        };
        let stop = match opts.monitor {
            Monitor::Hyperparameters => hyper_ok,
            Monitor::Elbo => elbo_ok,
            Monitor::Both => hyper_ok && elbo_ok,
        };
        if stop {
            state.converged = true;
            break;
        }
    }
    Ok(state)
}

/// Student-t posterior predictive, one (location, scale) pair per row of the
/// prediction design.
///
/// `scale` follows the predictive's variance form
/// `(1 + x' C_beta x) b_phi / (a_phi - 1)`; the classic squared scale
/// (sigma^2 of the three-parameter Student-t density) is
/// `scale (dof - 2) / dof`, which `density` and `interval` use internally.
#[derive(Debug, Clone, PartialEq)]
pub struct StudentTPredictive {
    pub location: DVector<f64>,
    pub scale: DVector<f64>,
    pub dof: f64,
}

impl StudentTPredictive {
    fn sigma(&self, i: usize) -> f64 {
        (self.scale[i] * (self.dof - 2.0) / self.dof).sqrt()
    }

    /// Predictive density at `y` for observation `i`.
    pub fn density(&self, i: usize, y: f64) -> Result<f64> {
        let nu = self.dof;
        let sigma = self.sigma(i);
        let z = (y - self.location[i]) / sigma;
        let log_norm = log_gamma(0.5 * (nu + 1.0))?
            - log_gamma(0.5 * nu)?
            - 0.5 * (nu * std::f64::consts::PI).ln()
            - sigma.ln();
        Ok((log_norm - 0.5 * (nu + 1.0) * (1.0 + z * z / nu).ln()).exp())
    }

    /// Central predictive interval at the given coverage level.
    pub fn interval(&self, i: usize, level: f64) -> Result<(f64, f64)> {
        if !(0.0 < level && level < 1.0) {
            return Err(Error::InvalidConfig(format!(
                "interval level {level} outside (0,1)"
            )));
        }
        let t = crate::selection::student_t_quantile(0.5 + 0.5 * level, self.dof)?;
        let half = t * self.sigma(i);
        Ok((self.location[i] - half, self.location[i] + half))
    }

    pub fn len(&self) -> usize {
        self.location.len()
    }

    pub fn is_empty(&self) -> bool {
        self.location.len() == 0
    }
}

/// Posterior predictive for new design rows:
/// location `x' m_beta`, scale `(1 + x' C_beta x) b_phi / (a_phi - 1)`,
/// degrees of freedom `2 a_phi`. Rejects `a_phi <= 1` (undefined scale).
pub fn predictive(state: &VariationalState, x_new: &DMatrix<f64>) -> Result<StudentTPredictive> {
    if state.a_phi <= 1.0 {
        return Err(Error::domain(
            "predictive",
            format!("a_phi must exceed 1 for a finite scale (got {})", state.a_phi),
        ));
    }
    if x_new.ncols() != state.p() {
        return Err(Error::Dimension(format!(
            "prediction design has {} columns, state has p = {}",
            x_new.ncols(),
            state.p()
        )));
    }
    let m = x_new.nrows();
    let mut location = DVector::zeros(m);
    let mut scale = DVector::zeros(m);
    let s = state.b_phi / (state.a_phi - 1.0);
    for i in 0..m {
        let xi = x_new.row(i).transpose();
        location[i] = xi.dot(&state.m_beta);
        scale[i] = (1.0 + xi.dot(&(&state.c_beta * &xi))) * s;
    }
    Ok(StudentTPredictive { location, scale, dof: 2.0 * state.a_phi })
}
