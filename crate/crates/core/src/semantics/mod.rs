//! Exact runners for the three machine models.

mod nft;
mod tdfa;
mod tm;

pub use nft::{nft_accepting_run_count, nft_membership, nft_outputs, reach, runs_on, Capped};
pub(crate) use nft::accepted_outputs_ids;
pub use tdfa::{accepted_outputs, live_states, tdfa_run, TdfaTrace, TraceStep};
pub use tm::{tm_run, Cell, ConfigError, Configuration, RunStatus, TmRun};
