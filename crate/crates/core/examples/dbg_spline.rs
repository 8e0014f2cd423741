use nalgebra::DVector;
use vblasso::model::LassoPriors;
use vblasso::spline::*;
use vblasso::vb_lasso::FitOptions;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

fn main() {
    let n = 100;
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let x: Vec<f64> = (0..n).map(|i| i as f64 / (n as f64 - 1.0)).collect();
    let truth: Vec<f64> = x.iter().map(|&v| v + 2.0 * (-(16.0_f64 * (v - 0.5)).powi(2)).exp()).collect();
    let y = DVector::from_fn(n, |i, _| truth[i] + 0.3_f64.sqrt() * rng.sample::<f64, _>(StandardNormal));
    let spec = place_knots(&x, 20, KnotPlacement::Quantile).unwrap();
    let design = build_design(&x, &spec).unwrap();
    let priors = LassoPriors::exercise_default();
    let p1 = Beta1Prior::default_for(4);
    let opts = FitOptions { max_iterations: 5000, rel_change_tol: 1e-8, ..Default::default() };
    let st = fit_spline_vb(&y, &design, &priors, &p1, &opts).unwrap();
    let ks = &st.knot_state;
    println!("iters {} elbo {:.4}", st.iterations(), st.elbo().unwrap());
    println!("phi_hat {:.4} (true 3.333)  d_tau {:.4} g/h {:.3}/{:.3}", ks.a_phi/ks.b_phi, ks.d_tau, ks.g_lambda, ks.h_lambda);
    println!("m_beta1 {:?}", st.m_beta1.as_slice());
    println!("m2 max |.| {:.5}", ks.m_beta.amax());
    println!("f_tau range {:.3e} .. {:.3e}", ks.f_tau.min(), ks.f_tau.max());
    let fit = fitted_curve(&st, &design, None).unwrap();
    let rmse_truth = fit.iter().zip(truth.iter()).map(|(a,b)|(a-b).powi(2)).sum::<f64>().sqrt()/(n as f64).sqrt();
    println!("fit rmse vs truth {:.4}", rmse_truth);
}
