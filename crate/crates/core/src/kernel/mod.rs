//! Special functions, cutoffs, jets and quadrature.

pub mod auxiliary;
pub mod cutoff;
pub mod jet;
pub mod quadrature;
pub mod special;

pub use auxiliary::{
    a1, b_aligned, eval_a1, eval_b, eval_g0, eval_g1, eval_g2, k_weight, lemma1_constant, lemma1_f, PhiStatics,
};
pub use cutoff::{smooth_step, Cutoffs};
pub use jet::{Jet, Real};
pub use quadrature::{integrate, integrate_0_to, integrate_split, QuadValue, QuadratureSpec};
pub use special::{eval_ftilde, KernelTable};
