//! Pure-strategy Nash equilibria of the decentralized parallel interference
//! channel with two transmitter-receiver pairs and two orthogonal channels.
//!
//! Two static games are covered:
//!
//! * the power-allocation (PA) game, where each transmitter splits its power
//!   budget between the channels (`alpha` in `[0, 1]` on channel 1), solved
//!   exactly in [`pa`];
//! * the channel-selection (CS) game, where each transmitter puts its whole
//!   budget on a single channel (`alpha` in `{0, 1}`), solved in [`cs`].
//!
//! [`oracle`] holds a brute-force grid verifier that shares nothing with the
//! closed forms except the utility itself, and [`experiments`] runs the seeded
//! Monte-Carlo sweeps behind the `icnash` command-line tool.

pub mod channel;
pub mod cli;
pub mod cs;
mod error;
pub mod experiments;
pub mod oracle;
pub mod pa;

pub use channel::{ActionProfile, ChannelRealization, InterferenceRatios, Player};
pub use error::{Error, Result};
