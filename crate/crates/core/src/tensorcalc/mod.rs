//! Exterior calculus, Lie derivatives and wave-equation residuals on sampled
//! 2-form fields.

mod exterior;
mod field;
mod lie;
mod suite;
mod wave;

pub use exterior::{codifferential_d_star, d0, d0_one_form, d0_star, exterior_d, exterior_d_one_form};
pub use field::{
    default_step, partials, stencil4, Combination, Coulomb, Dual, FnField, FnThreeField, GenericField, Monopole,
    PlaneWave, ThreeFormField, TwoFormField,
};
pub use lie::{
    lie_derivative, scaling_commutator_remainder, scaling_weight, scaling_weight_term, star_lie_commutator,
    star_lie_commutator_fd, VectorFieldTag,
};
pub use wave::{
    covariant_derivative, divergence, wave_operator_assembled, wave_operator_direct, wave_residual, wave_source,
    Sources, WaveResidual, WaveSteps, DIVERGENCE_SIGN,
};
pub use suite::{catalog, rotation_commutator_profile, run_identity_suite, IdentityReport, IdentityResult, IdentitySuiteConfig};
