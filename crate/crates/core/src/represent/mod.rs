//! Representation results as executable transformations: predictable
//! projections with respect to the enlarged filtration `𝔽_{[s,t]^c}`,
//! Clark–Ocone decompositions, the Itô–Skorohod rewriting
//! `w_s = u_s + δ(D_s u·1_{[0,s]})`, forward–backward approximations and the
//! quadratic variation in mean.

mod approx;
mod clark_ocone;
mod ito_skorohod;
mod projection;
mod split;

pub use approx::{
    approximation_gaps, assemble_forward_backward, forward_backward, pi_approximation, v_norm, ApproximationGaps,
    DyadicFamily, FbTerm,
};
pub use clark_ocone::{clark_ocone, clark_ocone_kernel_route, ClarkOcone};
pub use ito_skorohod::ito_skorohod_w;
pub use projection::{predictable_projection, ProjectedIntegrand, ScaledIntegrand};
pub use split::{reassemble_split, split_tensor_power, TensorSplitTerm};
