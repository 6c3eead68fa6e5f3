//! Acoustic radiation impedance of clamped membranes.
//!
//! The spectral solver in [`impedance`] integrates the closed-form velocity spectra of
//! [`spectra`] over the radiating and evanescent parts of wavenumber space with the adaptive
//! rules of [`quadrature`]. [`oracle`] provides an independent brute-force reference and
//! [`profiles`] compares the assumed velocity shape with sampled fields.
//!
//! ```
//! use radimp::{impedance, RadiatorKind, RadiatorSpec, Tolerance};
//!
//! let plate = RadiatorSpec::with_aspect(RadiatorKind::Rect2D, 4.0).unwrap();
//! let z = impedance(&plate, 1.0, Tolerance::default()).unwrap();
//! assert!(z.converged && z.r > 0.0 && z.x > 0.0);
//! ```

pub mod impedance;
pub mod oracle;
pub mod profiles;
pub mod quadrature;
pub mod spectra;
pub mod sweep;

pub use impedance::{
    circular_impedance, impedance, rect1d_impedance, rect2d_impedance, sweep_grid, ImpedanceCurve, ImpedanceError,
    Normalization, NormalizedImpedance, RadiatorKind, RadiatorSpec, Validity,
};
pub use oracle::{
    bruteforce_extrapolated, bruteforce_impedance, bruteforce_impedance_many, build_mesh, monopole_asymptote,
    piston_resistance, MediumParams, OracleError, PanelMesh,
};
pub use profiles::{are, eval_profile, load_grid, vrms_ratio, ProfileError, ProfileModel, SampledGrid};
pub use quadrature::{QuadError, QuadratureResult, Tolerance};
pub use spectra::{shape_spectrum_circ, shape_spectrum_poly, shape_spectrum_sinc, ShapeKind, SpectrumError};
pub use sweep::{OutputFormat, Spacing, SweepError, SweepSpec};
