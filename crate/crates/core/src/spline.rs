//! Penalized regression splines on the truncated power basis.
//!
//! The design is partitioned as `X = (X1, X2)`: `X1` holds the polynomial
//! columns `1, x, ..., x^p` (never penalized) and `X2` the truncated powers
//! `(x - kappa_k)_+^p`, whose coefficients carry the Lasso prior. The
//! variational scheme has four factors: `q1(beta2, phi)` normal-gamma,
//! `q2(tau)` GIG, `q3(lambda)` gamma, and `q4(beta1)` normal.
//!
//! The `q4` update is the standard mean-field normal factor:
//! `C1^{-1} = C0^{-1} + E[phi] X1'X1`,
//! `m1 = C1 (C0^{-1} m0 + E[phi] X1'(y - X2 m2))`.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::model::{cholesky_with_condition, conjugate_fit, Dataset, LassoPriors, NormalGammaPosterior};
use crate::selection::CoefficientPosterior;
use crate::specfun::{digamma, gig_expected_log, gig_mean, gig_mean_inverse, log_bessel_k};
use crate::vb_lasso::{FitOptions, Monitor, StudentTPredictive, VariationalState};

const LN_2PI: f64 = 1.837_877_066_409_345_6;
const REL_CHANGE_FLOOR: f64 = 1e-12;

/// How interior knots are placed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KnotPlacement {
    /// Empirical quantiles of `x` at probabilities `k / (K + 1)`.
    Quantile,
    /// Evenly spaced over `[min x, max x]`, interior only.
    Equispaced,
    /// Supplied by the caller.
    Explicit,
}

/// Degree and knot sequence of one spline basis.
#[derive(Debug, Clone, PartialEq)]
pub struct SplineSpec {
    degree: usize,
    knots: Vec<f64>,
    placement: KnotPlacement,
}

impl SplineSpec {
    /// A spec with explicit knots; they must be finite and strictly
    /// increasing.
    pub fn explicit(degree: usize, knots: Vec<f64>) -> Result<Self> {
        validate_knots(&knots)?;
        Ok(SplineSpec { degree, knots, placement: KnotPlacement::Explicit })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn knots(&self) -> &[f64] {
        &self.knots
    }

    pub fn n_knots(&self) -> usize {
        self.knots.len()
    }

    pub fn placement(&self) -> KnotPlacement {
        self.placement
    }
}

fn validate_knots(knots: &[f64]) -> Result<()> {
    if knots.iter().any(|k| !k.is_finite()) {
        return Err(Error::NonFinite("knot sequence".into()));
    }
    if knots.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::domain("SplineSpec", "knots must be strictly increasing".to_string()));
    }
    Ok(())
}

/// Place `k` interior knots over the data. Quantile placement puts
/// `kappa_j` at the empirical quantile `j / (k + 1)`; equispaced placement
/// uses `min + j (max - min) / (k + 1)`. Endpoints are never knots.
pub fn place_knots(x: &[f64], k: usize, placement: KnotPlacement) -> Result<SplineSpec> {
    place_knots_with_degree(x, k, placement, 3)
}

/// `place_knots` with an explicit polynomial degree.
pub fn place_knots_with_degree(
    x: &[f64],
    k: usize,
    placement: KnotPlacement,
    degree: usize,
) -> Result<SplineSpec> {
    if x.is_empty() {
        return Err(Error::Dimension("empty x for knot placement".into()));
    }
    if x.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("x for knot placement".into()));
    }
    if k == 0 {
        return Ok(SplineSpec { degree, knots: vec![], placement });
    }
    let knots = match placement {
        KnotPlacement::Explicit => {
            return Err(Error::InvalidConfig(
                "explicit placement needs SplineSpec::explicit".into(),
            ))
        }
        KnotPlacement::Quantile => {
            let mut distinct: Vec<f64> = x.to_vec();
            distinct.sort_by(|a, b| a.partial_cmp(b).unwrap());
            distinct.dedup();
            if distinct.len() < k + 2 {
                return Err(Error::domain(
                    "place_knots",
                    format!("need at least {} distinct x values for {k} quantile knots", k + 2),
                ));
            }
            (1..=k)
                .map(|j| crate::selection::empirical_quantile(x, j as f64 / (k as f64 + 1.0)))
                .collect::<Result<Vec<f64>>>()?
        }
        KnotPlacement::Equispaced => {
            let min = x.iter().cloned().fold(f64::INFINITY, f64::min);
            let max = x.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            if max <= min {
                return Err(Error::domain("place_knots", "x has zero range".to_string()));
            }
            (1..=k)
                .map(|j| min + j as f64 * (max - min) / (k as f64 + 1.0))
                .collect()
        }
    };
    validate_knots(&knots)?;
    Ok(SplineSpec { degree, knots, placement })
}

/// The partitioned design `(X1, X2)` evaluated at the data points.
#[derive(Debug, Clone, PartialEq)]
pub struct PartitionedDesign {
    pub x1: DMatrix<f64>,
    pub x2: DMatrix<f64>,
    pub spec: SplineSpec,
}

/// `(u)_+^p`, with the degree-zero convention that the basis function is the
/// step `1{u > 0}` (exactly zero at the knot).
fn truncated_power(u: f64, p: usize) -> f64 {
    if u <= 0.0 {
        0.0
    } else if p == 0 {
        1.0
    } else {
        u.powi(p as i32)
    }
}

/// Evaluate the truncated-power design at the given points.
pub fn build_design(x: &[f64], spec: &SplineSpec) -> Result<PartitionedDesign> {
    if x.is_empty() {
        return Err(Error::Dimension("empty x for design".into()));
    }
    let n = x.len();
    let p = spec.degree;
    let x1 = DMatrix::from_fn(n, p + 1, |i, j| x[i].powi(j as i32));
    let x2 = DMatrix::from_fn(n, spec.knots.len(), |i, k| truncated_power(x[i] - spec.knots[k], p));
    Ok(PartitionedDesign { x1, x2, spec: spec.clone() })
}

impl PartitionedDesign {
    pub fn n(&self) -> usize {
        self.x1.nrows()
    }

    pub fn n_knots(&self) -> usize {
        self.x2.ncols()
    }

    pub fn poly_cols(&self) -> usize {
        self.x1.ncols()
    }

    /// The concatenated `(X1 | X2_kept)` matrix used by refits.
    pub fn reduced_matrix(&self, keep: &[bool]) -> Result<DMatrix<f64>> {
        if keep.len() != self.n_knots() {
            return Err(Error::Dimension(format!(
                "mask has {} entries for {} knots",
                keep.len(),
                self.n_knots()
            )));
        }
        let kept: Vec<usize> =
            keep.iter().enumerate().filter(|(_, &k)| k).map(|(i, _)| i).collect();
        let cols = self.poly_cols() + kept.len();
        let mut m = DMatrix::zeros(self.n(), cols);
        m.view_mut((0, 0), (self.n(), self.poly_cols())).copy_from(&self.x1);
        for (c, &k) in kept.iter().enumerate() {
            m.column_mut(self.poly_cols() + c).copy_from(&self.x2.column(k));
        }
        Ok(m)
    }
}

/// Gaussian prior for the unpenalized polynomial block, in covariance form.
#[derive(Debug, Clone, PartialEq)]
pub struct Beta1Prior {
    pub m0: DVector<f64>,
    pub c0: DMatrix<f64>,
}

impl Beta1Prior {
    pub fn new(m0: DVector<f64>, c0: DMatrix<f64>) -> Result<Self> {
        if c0.nrows() != m0.len() || c0.ncols() != m0.len() {
            return Err(Error::Dimension("beta1 prior covariance does not match mean".into()));
        }
        cholesky_with_condition(&c0, "Beta1Prior")?;
        Ok(Beta1Prior { m0, c0 })
    }

    /// The default N(1, 100) prior, independent across the `q` polynomial
    /// coefficients.
    pub fn default_for(q: usize) -> Self {
        Beta1Prior {
            m0: DVector::from_element(q, 1.0),
            c0: DMatrix::identity(q, q) * 100.0,
        }
    }
}

/// Variational state of the spline model: the Lasso-style factors for the
/// knot block plus the normal q4 factor for the polynomial block.
#[derive(Debug, Clone, PartialEq)]
pub struct SplineVariationalState {
    /// `beta^(2)` (knot) block, `phi`, `tau`, `lambda` and the ELBO trace.
    pub knot_state: VariationalState,
    pub m_beta1: DVector<f64>,
    pub c_beta1: DMatrix<f64>,
}

impl SplineVariationalState {
    pub fn elbo(&self) -> Option<f64> {
        self.knot_state.elbo()
    }

    pub fn converged(&self) -> bool {
        self.knot_state.converged
    }

    pub fn iterations(&self) -> usize {
        self.knot_state.iteration
    }

    /// (mean, sd) of each knot coefficient, as fed to the selection criteria.
    pub fn knot_posteriors(&self) -> Result<Vec<CoefficientPosterior>> {
        self.knot_state.coefficient_posteriors()
    }
}

struct SplineWorkspace {
    x1tx1: DMatrix<f64>,
    x2tx2: DMatrix<f64>,
    x1ty: DVector<f64>,
    x2ty: DVector<f64>,
    x2tx1: DMatrix<f64>,
    yty: f64,
    c0_inv: DMatrix<f64>,
    c0_inv_m0: DVector<f64>,
    log_det_c0: f64,
}

impl SplineWorkspace {
    fn new(y: &DVector<f64>, design: &PartitionedDesign, prior: &Beta1Prior) -> Result<Self> {
        let (chol, _) = cholesky_with_condition(&prior.c0, "fit_spline_vb::beta1_prior")?;
        let c0_inv = chol.inverse();
        let log_det_c0 = crate::vb_lasso::spd_log_det(&prior.c0, "fit_spline_vb::beta1_prior")?;
        Ok(SplineWorkspace {
            x1tx1: design.x1.tr_mul(&design.x1),
            x2tx2: design.x2.tr_mul(&design.x2),
            x1ty: design.x1.tr_mul(y),
            x2ty: design.x2.tr_mul(y),
            x2tx1: design.x2.tr_mul(&design.x1),
            yty: y.dot(y),
            c0_inv: &c0_inv * DMatrix::identity(prior.m0.len(), prior.m0.len()),
            c0_inv_m0: &c0_inv * &prior.m0,
            log_det_c0,
        })
    }
}

fn spline_q1(
    st: &mut SplineVariationalState,
    ws: &SplineWorkspace,
    priors: &LassoPriors,
    n: usize,
    e_inv_tau: &DVector<f64>,
) -> Result<()> {
    let k = st.knot_state.p();
    let ks = &mut st.knot_state;
    if k > 0 {
        let mut prec = ws.x2tx2.clone();
        for j in 0..k {
            prec[(j, j)] += e_inv_tau[j];
        }
        let (chol, _) = cholesky_with_condition(&prec, "fit_spline_vb::q1")?;
        let rhs = &ws.x2ty - &ws.x2tx1 * &st.m_beta1;
        ks.m_beta = chol.solve(&rhs);
        ks.c_beta = chol.inverse();
    }
    ks.a_phi = priors.a0 + 0.5 * n as f64;
    let e_x1_quad = st.m_beta1.dot(&(&ws.x1tx1 * &st.m_beta1)) + (&ws.x1tx1 * &st.c_beta1).trace();
    let mut b = priors.b0 + 0.5 * (ws.yty - 2.0 * st.m_beta1.dot(&ws.x1ty) + e_x1_quad);
    if k > 0 {
        let rhs = &ws.x2ty - &ws.x2tx1 * &st.m_beta1;
        b -= 0.5 * st.knot_state.m_beta.dot(&rhs);
    }
    st.knot_state.b_phi = b.max(f64::MIN_POSITIVE);
    Ok(())
}

fn spline_q2(st: &mut VariationalState) {
    st.c_tau = 0.5;
    st.d_tau = 2.0 * st.g_lambda / st.h_lambda;
    let ratio = st.a_phi / st.b_phi;
    for j in 0..st.p() {
        st.f_tau[j] = st.m_beta[j] * st.m_beta[j] * ratio + st.c_beta[(j, j)];
    }
}

fn spline_q3(st: &mut VariationalState, priors: &LassoPriors) -> Result<()> {
    st.g_lambda = priors.g0 + st.p() as f64;
    let mut sum = 0.0;
    for j in 0..st.p() {
        sum += gig_mean(&st.gig_params(j))?;
    }
    st.h_lambda = priors.h0 + sum;
    Ok(())
}

fn spline_q4(st: &mut SplineVariationalState, ws: &SplineWorkspace) -> Result<()> {
    let e_phi = st.knot_state.a_phi / st.knot_state.b_phi;
    let prec = &ws.c0_inv + &ws.x1tx1 * e_phi;
    let (chol, _) = cholesky_with_condition(&prec, "fit_spline_vb::q4")?;
    let resid_rhs = if st.knot_state.p() > 0 {
        &ws.x1ty - ws.x2tx1.tr_mul(&st.knot_state.m_beta)
    } else {
        ws.x1ty.clone()
    };
    let rhs = &ws.c0_inv_m0 + resid_rhs * e_phi;
    st.m_beta1 = chol.solve(&rhs);
    st.c_beta1 = chol.inverse();
    Ok(())
}

fn spline_elbo(
    st: &SplineVariationalState,
    ws: &SplineWorkspace,
    n: usize,
    priors: &LassoPriors,
) -> Result<f64> {
    let ks = &st.knot_state;
    let k = ks.p();
    let kf = k as f64;
    let nf = n as f64;
    let q = st.m_beta1.len() as f64;
    let (a, b) = (ks.a_phi, ks.b_phi);
    let e_log_phi = digamma(a)? - b.ln();
    let e_phi = a / b;

    // E[phi || y - X1 b1 - X2 b2 ||^2]
    let resid_fit = {
        let mut r = ws.yty - 2.0 * st.m_beta1.dot(&ws.x1ty)
            + st.m_beta1.dot(&(&ws.x1tx1 * &st.m_beta1));
        if k > 0 {
            r += -2.0 * ks.m_beta.dot(&ws.x2ty)
                + 2.0 * ks.m_beta.dot(&(&ws.x2tx1 * &st.m_beta1))
                + ks.m_beta.dot(&(&ws.x2tx2 * &ks.m_beta));
        }
        r
    };
    let tr1 = (&ws.x1tx1 * &st.c_beta1).trace();
    let tr2 = if k > 0 { (&ws.x2tx2 * &ks.c_beta).trace() } else { 0.0 };
    let t_lik = 0.5 * nf * (e_log_phi - LN_2PI) - 0.5 * (e_phi * (resid_fit + tr1) + tr2);

    // E[log p(beta2, phi | tau)] and the tau/lambda blocks (vacuous at K=0)
    let mut t_prior2 = 0.5 * kf * (e_log_phi - LN_2PI);
    let mut t_prior_tau = 0.0;
    let mut t_prior_lambda = 0.0;
    let mut t_q2 = 0.0;
    let mut t_q3 = 0.0;
    if k > 0 {
        let (g, h) = (ks.g_lambda, ks.h_lambda);
        let e_log_lambda = digamma(g)? - h.ln();
        let e_lambda = g / h;
        let mut e_tau_sum = 0.0;
        for j in 0..k {
            let gp = ks.gig_params(j);
            let e_tau = gig_mean(&gp)?;
            let e_inv = gig_mean_inverse(&gp)?;
            let e_log = gig_expected_log(&gp)?;
            let e_phi_beta_sq = ks.m_beta[j] * ks.m_beta[j] * e_phi + ks.c_beta[(j, j)];
            t_prior2 += -0.5 * e_log - 0.5 * e_phi_beta_sq * e_inv;
            e_tau_sum += e_tau;
            let z = (gp.a * gp.b).sqrt();
            t_q2 += 0.5 * gp.order * (gp.a / gp.b).ln() - std::f64::consts::LN_2
                - log_bessel_k(gp.order, z)?
                + (gp.order - 1.0) * e_log
                - 0.5 * (gp.a * e_tau + gp.b * e_inv);
        }
        t_prior_tau = kf * e_log_lambda - e_lambda * e_tau_sum;
        t_prior_lambda = if priors.jeffreys {
            -e_log_lambda
        } else {
            priors.g0 * priors.h0.ln() - crate::specfun::log_gamma(priors.g0)?
                + (priors.g0 - 1.0) * e_log_lambda
                - priors.h0 * e_lambda
        };
        t_q3 = g * h.ln() - crate::specfun::log_gamma(g)? + (g - 1.0) * e_log_lambda - g;
    }
    t_prior2 += if priors.jeffreys {
        -e_log_phi
    } else {
        priors.a0 * priors.b0.ln() - crate::specfun::log_gamma(priors.a0)?
            + (priors.a0 - 1.0) * e_log_phi
            - priors.b0 * e_phi
    };

    // E[log p(beta1)] under q4
    let dm = &st.m_beta1
        - &(ws.c0_inv.clone().cholesky().ok_or(Error::IllConditioned {
            context: "fit_spline_vb::elbo",
            cond: f64::INFINITY,
        })?.solve(&ws.c0_inv_m0));
    let quad1 = dm.dot(&(&ws.c0_inv * &dm)) + (&ws.c0_inv * &st.c_beta1).trace();
    let t_prior1 = -0.5 * q * LN_2PI - 0.5 * ws.log_det_c0 - 0.5 * quad1;

    // entropies
    let t_q1 = {
        let log_det_c2 = if k > 0 {
            crate::vb_lasso::spd_log_det(&ks.c_beta, "fit_spline_vb::elbo")?
        } else {
            0.0
        };
        -0.5 * kf * LN_2PI - 0.5 * log_det_c2 + 0.5 * kf * e_log_phi - 0.5 * kf
            + a * b.ln()
            - crate::specfun::log_gamma(a)?
            + (a - 1.0) * e_log_phi
            - a
    };
    let log_det_c1 = crate::vb_lasso::spd_log_det(&st.c_beta1, "fit_spline_vb::elbo")?;
    let t_q4 = -0.5 * q * LN_2PI - 0.5 * log_det_c1 - 0.5 * q;

    let total =
        t_lik + t_prior2 + t_prior_tau + t_prior_lambda + t_prior1 - t_q1 - t_q2 - t_q3 - t_q4;
    if !total.is_finite() {
        return Err(Error::NonFinite("spline ELBO".into()));
    }
    Ok(total)
}

fn spline_max_rel_change(old: &SplineVariationalState, new: &SplineVariationalState) -> f64 {
    let rel = |o: f64, n_: f64| (n_ - o).abs() / (o.abs() + REL_CHANGE_FLOOR);
    let mut worst: f64 = 0.0;
    let (ok, nk) = (&old.knot_state, &new.knot_state);
    for j in 0..ok.p() {
        worst = worst.max(rel(ok.m_beta[j], nk.m_beta[j]));
        worst = worst.max(rel(ok.f_tau[j], nk.f_tau[j]));
    }
    for (o, n_) in ok.c_beta.iter().zip(nk.c_beta.iter()) {
        worst = worst.max(rel(*o, *n_));
    }
    for (o, n_) in old.m_beta1.iter().zip(new.m_beta1.iter()) {
        worst = worst.max(rel(*o, *n_));
    }
    for (o, n_) in old.c_beta1.iter().zip(new.c_beta1.iter()) {
        worst = worst.max(rel(*o, *n_));
    }
    worst = worst.max(rel(ok.b_phi, nk.b_phi));
    worst = worst.max(rel(ok.d_tau, nk.d_tau));
    worst = worst.max(rel(ok.h_lambda, nk.h_lambda));
    worst
}

/// Fit the spline model by cycling q1 (knot block + phi), q2 (tau),
/// q3 (lambda), q4 (polynomial block). Only the knot coefficients are
/// penalized. Returns the state flagged unconverged if `max_iterations`
/// is exhausted.
pub fn fit_spline_vb(
    y: &DVector<f64>,
    design: &PartitionedDesign,
    priors: &LassoPriors,
    beta1_prior: &Beta1Prior,
    opts: &FitOptions,
) -> Result<SplineVariationalState> {
    opts.validate()?;
    let n = design.n();
    if y.len() != n {
        return Err(Error::Dimension(format!(
            "y has {} entries but the design has {n} rows",
            y.len()
        )));
    }
    let q = design.poly_cols();
    if beta1_prior.m0.len() != q {
        return Err(Error::Dimension(format!(
            "beta1 prior has {} coordinates for {q} polynomial columns",
            beta1_prior.m0.len()
        )));
    }
    let k = design.n_knots();
    let ws = SplineWorkspace::new(y, design, beta1_prior)?;

    let mut st = SplineVariationalState {
        knot_state: VariationalState {
            m_beta: DVector::zeros(k),
            c_beta: DMatrix::identity(k, k),
            a_phi: priors.a0 + 0.5 * n as f64,
            b_phi: 1.0,
            c_tau: 0.5,
            d_tau: 2.0,
            f_tau: DVector::from_element(k, 1.0),
            g_lambda: priors.g0 + k as f64,
            h_lambda: (priors.h0 + k as f64).max(1.0),
            iteration: 0,
            elbo_trace: Vec::new(),
            converged: false,
        },
        m_beta1: beta1_prior.m0.clone(),
        c_beta1: beta1_prior.c0.clone(),
    };
    // Seed the polynomial block with its q4 update at m2 = 0, so the first
    // knot update sees the detrended residual rather than the prior-mean
    // curve. The first q1 penalty is scaled per knot to diag(X2'X2)/n: the
    // truncated-power basis is far from standardized, and a unit ridge would
    // crush the small-eigenvalue directions the knot coefficients live in,
    // stranding the ascent in an all-shrunk optimum.
    spline_q4(&mut st, &ws)?;
    let tr_scale = if k > 0 { ws.x2tx2.trace() / k as f64 } else { 0.0 };
    let seed_penalty = DVector::from_fn(k, |j, _| {
        (ws.x2tx2[(j, j)] + 1e-12 * tr_scale) / n as f64
    });
    spline_q1(&mut st, &ws, priors, n, &seed_penalty)?;

    for _ in 0..opts.max_iterations {
        let prev = st.clone();
        let mut e_inv = DVector::zeros(k);
        for j in 0..k {
            e_inv[j] = gig_mean_inverse(&st.knot_state.gig_params(j))?;
        }
        spline_q1(&mut st, &ws, priors, n, &e_inv)?;
        if k > 0 {
            spline_q2(&mut st.knot_state);
            spline_q3(&mut st.knot_state, priors)?;
        }
        spline_q4(&mut st, &ws)?;
        st.knot_state.iteration += 1;
        let bound = spline_elbo(&st, &ws, n, priors)?;
        st.knot_state.elbo_trace.push(bound);

        let hyper_ok = spline_max_rel_change(&prev, &st) < opts.rel_change_tol;
        let elbo_ok = match (prev.knot_state.elbo_trace.last(), st.knot_state.elbo_trace.last()) {
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
            st.knot_state.converged = true;
            break;
        }
    }
    Ok(st)
}

/// Evaluate the fitted mean curve `X1 m_beta1 + X2 m_beta2` at the design
/// points, optionally masking excluded knots.
pub fn fitted_curve(
    state: &SplineVariationalState,
    design: &PartitionedDesign,
    keep_mask: Option<&[bool]>,
) -> Result<DVector<f64>> {
    if design.poly_cols() != state.m_beta1.len() || design.n_knots() != state.knot_state.p() {
        return Err(Error::Dimension("design does not match the fitted state".into()));
    }
    let mut fit = &design.x1 * &state.m_beta1;
    match keep_mask {
        None => {
            if design.n_knots() > 0 {
                fit += &design.x2 * &state.knot_state.m_beta;
            }
        }
        Some(mask) => {
            if mask.len() != design.n_knots() {
                return Err(Error::Dimension(format!(
                    "mask has {} entries for {} knots",
                    mask.len(),
                    design.n_knots()
                )));
            }
            for (k, &keep) in mask.iter().enumerate() {
                if keep {
                    fit += design.x2.column(k) * state.knot_state.m_beta[k];
                }
            }
        }
    }
    Ok(fit)
}

/// Conjugate refit on the reduced design `(X1 | X2_kept)` under a
/// near-flat prior; used by the selection pipeline before curves and
/// prediction errors are computed.
pub fn refit_conjugate(
    y: &DVector<f64>,
    design: &PartitionedDesign,
    keep: &[bool],
    prior_precision: f64,
    a0: f64,
    b0: f64,
) -> Result<(NormalGammaPosterior, DMatrix<f64>)> {
    let x = design.reduced_matrix(keep)?;
    let data = Dataset::new(y.clone(), x.clone())?;
    let p = x.ncols();
    let m0 = DVector::zeros(p);
    let c0 = DMatrix::identity(p, p) * prior_precision;
    let post = conjugate_fit(&data, &m0, &c0, a0, b0)?;
    Ok((post, x))
}

/// Student-t predictive of a conjugate Normal-Gamma posterior on new rows:
/// location `x'm1`, scale `(1 + x'C1^{-1}x) b1/(a1 - 1)`, dof `2 a1`.
pub fn conjugate_predictive(
    post: &NormalGammaPosterior,
    x_new: &DMatrix<f64>,
) -> Result<StudentTPredictive> {
    if post.a1 <= 1.0 {
        return Err(Error::domain("conjugate_predictive", format!("a1 = {} <= 1", post.a1)));
    }
    if x_new.ncols() != post.m1.len() {
        return Err(Error::Dimension("prediction design does not match posterior".into()));
    }
    let (chol, _) = cholesky_with_condition(&post.c1, "conjugate_predictive")?;
    let c1_inv = chol.inverse();
    let s = post.b1 / (post.a1 - 1.0);
    let m = x_new.nrows();
    let mut location = DVector::zeros(m);
    let mut scale = DVector::zeros(m);
    for i in 0..m {
        let xi = x_new.row(i).transpose();
        location[i] = xi.dot(&post.m1);
        scale[i] = (1.0 + xi.dot(&(&c1_inv * &xi))) * s;
    }
    Ok(StudentTPredictive { location, scale, dof: 2.0 * post.a1 })
}
