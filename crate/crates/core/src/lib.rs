//! Skat discard ("skat putting") selection engine.

pub mod bidding;
pub mod cards;
pub mod dealing;
pub mod ddsolver;
pub mod error;
pub mod gamedef;
pub mod handeval;
pub mod harness;
pub mod probmodel;
pub mod skatselect;

pub use error::{Error, Result};
