//! Time-domain evolution of the master function per mode on `(t, r*)`.

mod data;
mod gate;
mod grid;
mod interp;
mod potential;
mod reconstruct;
mod run;
mod state;

pub use data::{DataSample, InitialDataSpec, Profile, SourceSpec, Symmetry};
pub use grid::{Background, Grid1D, InnerBoundary, SpatialOrder};
pub use interp::lagrange_uniform;
pub use potential::rw_potential;
pub use state::{ModeState, Stepper};
pub use run::{
    evolve, EvolutionConfig, GridConfig, LineKind, LineSample, LineSeries, ModeConfig, NullLineConfig, Slice,
    Trajectory,
};
pub use gate::{maxwell_residual_order, GateConfig, GateReport, ResolutionResidual, SliceField};
pub use reconstruct::{
    component_series, reconstruct_extremes, ComponentSample, ExtremeSample, ExtremeSeries, COMPONENT_COLUMNS,
};
