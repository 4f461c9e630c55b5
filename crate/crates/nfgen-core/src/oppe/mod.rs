//! Reference runtime: oblivious piecewise polynomial evaluation over
//! simulated ciphertext values with operation tracing, plus a mock
//! additive-sharing layer.

mod eval;
mod share;
mod trace;

pub use eval::{
    finalize_plan, oppe_eval, oppe_eval_batch, trace_of, EvalOrder, SimContext, TruncPolicy,
};
pub use share::{reconstruct, share, share_with_rng, ShareTriple};
pub use trace::{OpKind, OpTrace, Stage, TraceRecord};
