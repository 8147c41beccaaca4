//! Strictly incoherent operations and the coherence and correlation
//! quantities that behave well under them.
//!
//! The crate is organised bottom-up:
//!
//! - [`linalg`]: complex matrices, a Jacobi eigensolver, entropies and distances.
//! - [`channels`]: Kraus channels, Choi matrices and the memory extension.
//! - [`coherence`]: dephasing, classification of Kraus operators into the
//!   incoherent / strictly incoherent / covariant / genuinely incoherent
//!   hierarchy, the ancilla dilation of strictly incoherent channels and
//!   single-system coherence measures.
//! - [`discord`]: basis-dependent discord, classical correlations, Petz
//!   recovery, zero-discord decompositions and recoverability measures.
//! - [`universal`]: depolarizing channels, Weyl operators and the
//!   every-basis checks.
//! - [`suites`]: seeded property suites shared by the CLI and the tests, and
//!   [`cases`]: worked examples with their expected values.
//! - [`io`]: JSON formats; [`zoo`]: a fixed collection of named channels.

pub mod cases;
pub mod channels;
pub mod coherence;
pub mod discord;
pub mod error;
pub mod io;
pub mod linalg;
pub mod optim;
pub mod suites;
pub mod universal;
pub mod zoo;

pub use error::{Error, Result};
