//! Constructive solver for the fixed-time `d⁰` system on Minkowski and the
//! weighted bound monitors.

mod bounds;
mod fuzz;
mod profile;
mod problem;
mod quad;
mod solve;

pub use problem::{FixedTimeProblem, ModeSource, Sector};
pub use profile::{Profile, SourceProfile};
pub use quad::{adaptive_simpson, adaptive_split, gauss8, Cumulative};
pub use solve::{solve_nonradial, solve_radial, FixedTimeField, ModeSolution, ProfileSample, RadialProfileSolution, RadialSolution};
pub use bounds::{perturbation_check, verify_bounds, AnnulusRatio, BoundReport, BoundsConfig, PerturbationReport};
pub use fuzz::{fuzz_campaign, random_problem, relative_residual, run_seed, FuzzConfig, FuzzReport, SeedResult};
