//! LDPC coding for the Gaussian wiretap channel: degree distributions,
//! zigzag-random construction, sum-product decoding, Monte Carlo error-rate
//! estimation and security-gap analysis.

pub mod alist;
pub mod channel;
pub mod code;
pub mod codec;
pub mod construct;
pub mod degree_dist;
pub mod error;
pub mod gf2;
pub mod montecarlo;
pub mod secrecy;

pub use channel::{ChannelParams, SnrPoint};
pub use code::{LdpcCode, ParityCheckMatrix, ProtectionClass};
pub use codec::{decode_llr_spa, encode, DecodeResult, SpaDecoder};
pub use construct::{build_zigzag_random, BuildOptions, ClassAssignment, Placement};
pub use degree_dist::{DegreePolynomial, EnsembleSpec, NodeKind, Perspective};
pub use error::{Error, Result};
pub use montecarlo::{CodedLink, FrameSimulator, SimConfig, SimResult, StopRule};
pub use secrecy::{ErrorRateCurve, FrameLayout, Scheme, Scrambler, SecurityReport, Target};
