//! Verification campaigns over the exact computations in [`qhpp_core`],
//! with expected outcomes kept in version-controlled fixtures, and the
//! report formats used by the `qhpp` binary.

pub mod campaign;
mod bodies;
pub mod coverage;
mod error;
pub mod fixture;
pub mod report;

pub use campaign::{campaign, campaigns, run_all, run_campaign, Campaign, Params};
pub use error::Error;
pub use report::{emit, parse_jsonl, Format, Record, Status, VerdictReport};
