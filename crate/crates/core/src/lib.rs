//! Random-code machinery over finite fields: Gallager-style LDPC ensembles,
//! random linear codes, sharp thresholds for local properties, Fourier bounds
//! on LDPC containment, and Gilbert–Varshamov distance certificates.
//!
//! Every quantity here is computed at desk scale, with exact or brute-force
//! oracles available for cross-checking.

pub mod ensembles;
pub mod error;
pub mod fourier;
pub mod gf;
pub mod gvdistance;
pub mod linalg;
pub mod montecarlo;
pub mod rowdist;
pub mod util;

pub use ensembles::{LdpcEnsembleParams, LinearCode, ListSizeResult, Seed};
pub use error::{Error, ErrorClass, Result};
pub use fourier::{ComplexDistribution, ContainBound, FourierTable};
pub use gf::{FieldSpec, FqElement};
pub use gvdistance::{DistanceCertificate, GvParams};
pub use linalg::{FqMatrix, FqVector, SubspaceIterator};
pub use rowdist::{RowDistribution, ThresholdReport};
