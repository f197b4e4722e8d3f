//! Beam decoding variants over deterministic scoring models.
//!
//! Three decoders share one hypothesis type and one canonical ordering:
//!
//! - [`decode::greedy_decode`]: argmax walk.
//! - [`decode::vanilla_beam`]: finished hypotheses stay in the beam, compete with
//!   unfinished ones for the top `k` slots and may fall off; stops when the whole beam
//!   has finished.
//! - [`decode::fcfs_beam`]: finished hypotheses move to a separate pool the moment
//!   they are popped; the beam is refilled with `k` unfinished hypotheses each step,
//!   and decoding stops once the pool holds `k * patience` entries.
//!
//! [`oracle`] enumerates every finished sequence for small instances, and [`bench`]
//! sweeps patience, beam size and length penalty.

pub mod bench;
pub mod decode;
pub mod error;
pub mod models;
pub mod oracle;
pub mod types;

pub use error::{ConfigError, DecodeError, ModelError, OracleError, SweepError, VocabError};
pub use types::*;
