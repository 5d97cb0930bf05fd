//! Spherical harmonics, sphere quadrature, radial projection, charges and
//! mode-to-tensor assembly.

mod assemble;
mod charge_sector;
mod harmonics;
mod projection;

pub use assemble::{mode_sample_to_tensor, project_mode, ModeAmplitudes, ModeIndex, Parity};
pub use charge_sector::{charge_sector_evolution, ChargeSector};
pub use harmonics::{assoc_legendre, gauss_legendre, legendre, real_ylm, zonal, SphereQuadrature};
pub use projection::{charges, radial_components, radial_form, radial_part, ChargePair, RadialPart};
