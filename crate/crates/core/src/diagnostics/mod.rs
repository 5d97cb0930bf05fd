//! Norms, region decomposition, decay fits, peeling tables and embedding monitors.

mod fit;
mod ks;
mod norms;
mod peeling;
mod regions;

pub use fit::{fit_exponent, linear_fit, log_resample, power_slope, self_convergence_order, DecayFit, WindowPolicy};
pub use ks::{ks_monitor, KsEntry, KsPolicy, KsReport};
pub use norms::{le_norms, FieldSamples, NormReport, NormWeights};
pub use peeling::{peeling_scan, radiation_series, PeelingConfig, PeelingTable, SlopeFit, PEELING_TARGETS, RADIATION_TARGET};
pub use regions::{annulus, bracket, RegionKind, RegionSpec};
