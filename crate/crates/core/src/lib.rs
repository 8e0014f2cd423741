pub mod error;
pub mod gibbs_lasso;
pub mod model;
pub mod selection;
pub mod spline;
pub mod specfun;
pub mod vb_lasso;

pub use error::{Error, Result};
