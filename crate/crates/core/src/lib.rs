//! Ground-state electric-field correlations between two perfectly conducting
//! parallel plates, and the response of a balanced homodyne detector (BHD)
//! placed inside the gap.
//!
//! All computations run in dimensionless units with `c = 1` and lengths
//! measured in units of the plate separation `a`; see [`units`] for the
//! conversions at the I/O boundary.
//!
//! * [`imagesum`]: image sums of the scalar kernel and the closed-form
//!   `E_y E_y` two-point function.
//! * [`spectral`]: the `Q`/`W` kernels and the Casimir and free-space
//!   spectral densities.
//! * [`bhd`]: local-oscillator kernels, smeared correlations, mean current
//!   and variance of the detector output.
//! * [`oracle`]: numerical Fourier transform of the two-point function used
//!   to cross-check the closed-form densities.
//! * [`figures`]: data grids for the standard plots.

pub mod bhd;
pub mod error;
pub mod figures;
pub mod imagesum;
pub mod oracle;
pub mod quadrature;
pub mod spectral;
pub mod units;

pub use error::{CasimirError, Result};
pub use imagesum::{ImageDistances, ImageTerms, SpacetimePoint, TruncationPolicy};
pub use spectral::{SpectralSample, SuppressionValue};
pub use units::{CavityGeometry, FieldPoint, FrequencyGrid, PhysicalScale, Quantity, UnitTag};
