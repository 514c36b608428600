//! Identification of RIS-assisted propagation paths.
//!
//! A reconfigurable intelligent surface (RIS) is split into three areas: a
//! coherent area serving the observed UE, an area serving other UEs, and a
//! dynamic area that alternates between the two. The alternation modulates the
//! estimated channel power at the UE, which lets the UE tell the RIS-assisted
//! path apart from uncontrolled scatterer paths.
//!
//! The crate provides:
//!
//! * [`scene`]: 2-D geometry, RF constants and the scene configuration format.
//! * [`channel`]: free-space per-element coefficients and the effective
//!   cascaded channel through a phase-configured RIS.
//! * [`patterns`]: area partitions and the two alternating phase patterns.
//! * [`stats`]: Gaussian model of the estimated channel, the scaled dof-2
//!   non-central chi-squared power distribution and its CDF.
//! * [`detector`]: optimal threshold, detection error probability, random part
//!   ratio and relative power difference.
//! * [`montecarlo`]: seeded, order-independent trial simulation and
//!   goodness-of-fit against the analytic model.
//! * [`cli`]: the experiment runner behind the `ris-pathid` binary.

pub mod channel;
pub mod cli;
pub mod detector;
pub mod error;
pub mod montecarlo;
pub mod patterns;
pub mod scene;
pub mod stats;

pub use error::{Error, Result};
