//! Metric catalog and pointwise tensor algebra.

mod coefficient;
mod curvature;
mod forms;
mod frame;
mod hodge;
mod metric;
mod symbol;
mod tortoise;

pub use coefficient::{RadialClosure, RadialFn, SpatialClosure, SpatialFn};
pub use curvature::{christoffel_fd, christoffel_fd4, riemann_fd, Christoffel, Curvature};
pub use forms::{levi_civita, SpacetimePoint, ThreeForm, TwoForm, PAIRS, TRIPLES};
pub use frame::{frame_components, null_frame, FrameComponents, NullFrame};
pub use hodge::{hodge_star_2form, hodge_star_3form_with, hodge_star_with, raise_two_form};
pub use metric::{metric_components, polar_jacobian, to_polar, Family, MetricSample, MetricSpec, ShortRangeTerm};
pub use symbol::{
    japanese_bracket, schwarzschild_coefficients, symbol_class_check, SymbolCheckOptions, SymbolOrder,
    SymbolReport,
};
pub use tortoise::{inverse_tortoise, inverse_tortoise_with_lapse, tortoise};
