//! Corpus generation, benchmarking and replay.

pub mod bench;
pub mod corpus;
pub mod play;
pub mod record;
pub mod replay;
pub mod report;
pub mod stats;
pub mod table;
