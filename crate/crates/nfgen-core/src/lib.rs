//! Approximation of Lipschitz-continuous scalar functions as discrete
//! piecewise polynomials valid under `<n,f>` fixed-point arithmetic,
//! verified with a bit-exact oblivious evaluation simulator, selected by a
//! profiled cost model, and emitted as target source from templates.

pub mod codegen;
pub mod expr;
pub mod fitter;
pub mod fxp;
pub mod oppe;
pub mod perf;

pub use fxp::{FxpFormat, FxpValue};
